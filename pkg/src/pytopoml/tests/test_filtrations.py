#!/usr/bin/env python
import itertools
import math
import random

import numpy as np


def count_components(n, edges, t):
    """Union-find count of the components of the graph of edges <= t."""
    parent = list(range(n))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    components = n
    for u, v, length in edges:
        if length <= t:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                components -= 1
    return components


def doctest_rips_complex():
    """Tests for rips_complex

        >>> from pytopoml.filtrations import PointCloud, rips_complex

    A single point is a single vertex

        >>> K = rips_complex(PointCloud([(3, 4)]), max_dim=2, max_radius=2)
        >>> K.sorted_simplices()
        [Simplex(0)]

    Edges longer than max_radius are left out

        >>> K = rips_complex(PointCloud([(0, 0), (3, 0)]), max_radius=2)
        >>> K.sorted_simplices()
        [Simplex(0), Simplex(1)]

    The radius has to be positive

        >>> rips_complex(PointCloud([(0, 0)]), max_radius=-1.0)
        Traceback (most recent call last):
          ...
        ValueError: max_radius must be positive, got -1.0

    Squared radii put an edge of length d at (d/2)**2

        >>> K = rips_complex(PointCloud([(0, 0), (3, 0)]), squared_radii=True)
        >>> [K.value(s) for s in K.sorted_simplices()]
        [0.0, 0.0, 2.25]

    The unit square has sides at 1 and diagonals and triangles at sqrt(2)

        >>> square = PointCloud([(0, 0), (1, 0), (1, 1), (0, 1)])
        >>> K = rips_complex(square, max_dim=2, max_radius=2)
        >>> sorted(round(K.value(e), 6) for e in K.simplices(1))
        [1.0, 1.0, 1.0, 1.0, 1.414214, 1.414214]
        >>> sorted(round(K.value(t), 6) for t in K.simplices(2))
        [1.414214, 1.414214, 1.414214, 1.414214]
        >>> K.validate()

    """


def doctest_alpha_complex_2d():
    """Tests for alpha_complex_2d

        >>> from pytopoml.filtrations import PointCloud, alpha_complex_2d
        >>> from pytopoml.persistence import compute_persistence

    For a right triangle the hypotenuse is not attached; its value is its
    squared half-length, the same as the squared circumradius.

        >>> K = alpha_complex_2d(PointCloud([(0, 0), (2, 0), (0, 2)]))
        >>> [K.value(s) for s in K.sorted_simplices()]
        [0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 2.0]

    The unit square has a one-dimensional hole from 0.25 to 0.5

        >>> square = PointCloud([(0, 0), (1, 0), (1, 1), (0, 1)])
        >>> D = compute_persistence(alpha_complex_2d(square), 1)
        >>> D.dimension(1).pairs()
        [(0.25, 0.5)]

    An obtuse triangle attaches its long edge to the triangle

        >>> K = alpha_complex_2d(PointCloud([(0, 0), (4, 0), (2, 1)]))
        >>> from pytopoml.complex import Simplex
        >>> K.value(Simplex(0, 1)) == K.value(Simplex(0, 1, 2)) > 4
        True

    Errors

        >>> alpha_complex_2d(PointCloud([(0, 0, 0)]))  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.DimensionMismatch: ... got dimension 3

        >>> alpha_complex_2d(PointCloud([]))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.EmptyCloud: the point cloud is empty

        >>> alpha_complex_2d(PointCloud([(0, 0), (1, 1)]))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.DegenerateInput: all 2 points are collinear

    """


def doctest_alpha_complex_2d_duplicates():
    """Duplicate points are dropped before triangulating

        >>> from pytopoml.filtrations import PointCloud, alpha_complex_2d
        >>> K = alpha_complex_2d(PointCloud([(0, 0), (2, 0), (0, 2), (2, 0)]))
        >>> K.vertex_count
        3

    """


def doctest_alpha_complex_2d_orbit():
    """Alpha complexes of orbits are valid filtered complexes

        >>> from pytopoml.data import linked_twisted_map
        >>> from pytopoml.filtrations import alpha_complex_2d
        >>> orbit = linked_twisted_map(4.1, (0.3, 0.7), 1000)
        >>> K = alpha_complex_2d(orbit)
        >>> K.validate()
        >>> K.vertex_count, K.max_dimension
        (1000, 2)

    """


def doctest_rips_and_alpha_components_agree():
    """Rips and alpha complexes merge components at matching scales

    A Rips edge of length t corresponds to balls of radius t / 2, whose
    squared radius is the alpha scale.

        >>> from pytopoml.filtrations import (
        ...     PointCloud, alpha_complex_2d, rips_complex)
        >>> from pytopoml.persistence import betti_at, compute_persistence
        >>> rng = np.random.default_rng(7)
        >>> ok = True
        >>> for trial in range(30):
        ...     n = int(rng.integers(3, 11))
        ...     points = rng.random((n, 2))
        ...     cloud = PointCloud(points)
        ...     edges = [(u, v, math.dist(points[u], points[v]))
        ...              for u, v in itertools.combinations(range(n), 2)]
        ...     lengths = sorted(set(e[2] for e in edges))
        ...     scales = [(a + b) / 2 for a, b in zip(lengths, lengths[1:])]
        ...     rips = compute_persistence(rips_complex(cloud, 1), 0)
        ...     alpha = compute_persistence(alpha_complex_2d(cloud), 0)
        ...     for t in scales:
        ...         expected = count_components(n, edges, t)
        ...         ok &= betti_at(rips, t)[0] == expected
        ...         ok &= betti_at(alpha, t * t / 4)[0] == expected
        >>> ok
        True

    """


def doctest_image_complex():
    """Tests for image_complex

        >>> from pytopoml.filtrations import GreyImage, image_complex
        >>> from pytopoml.persistence import compute_persistence

        >>> K = image_complex(GreyImage([[0.2, 0.7]]))
        >>> [(str(s), K.value(s)) for s in K.sorted_simplices()]
        [('{0}', 0.2), ('{1}', 0.7), ('{0,1}', 0.7)]

    A black 2x2 block is contractible

        >>> K = image_complex(GreyImage(np.zeros((2, 2))))
        >>> [len(K.simplices(k)) for k in range(3)]
        [4, 5, 2]
        >>> from pytopoml.complex import Simplex
        >>> Simplex(1, 2) in K
        True
        >>> D = compute_persistence(K, 1)
        >>> D.points
        [PersistencePoint(0.0, inf, dim=0)]

    A dark ring around a bright centre holds a hole until the centre lights

        >>> ring = GreyImage([[0, 0, 0], [0, 1, 0], [0, 0, 0]])
        >>> D = compute_persistence(image_complex(ring), 1)
        >>> D.dimension(1).pairs()
        [(0.0, 1.0)]
        >>> D.dimension(0).pairs()
        [(0.0, inf)]

    """


def doctest_flag_complex():
    """Tests for flag_complex

        >>> from pytopoml.filtrations import WeightedGraph, flag_complex
        >>> from pytopoml.complex import Simplex
        >>> from pytopoml.persistence import compute_persistence

    A triangle enters with its heaviest edge

        >>> g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])
        >>> flag_complex(g, 2).value(Simplex(0, 1, 2))
        3.0

    A single edge merges two components

        >>> D = compute_persistence(flag_complex(WeightedGraph(2, [(0, 1, 5)])),
        ...                         1)
        >>> D.pairs()
        [(0.0, 5.0), (0.0, inf)]

    Without edges every vertex lives forever

        >>> D = compute_persistence(flag_complex(WeightedGraph(3)), 1)
        >>> D.pairs()
        [(0.0, inf), (0.0, inf), (0.0, inf)]

    Four-cliques need the explicit switch

        >>> K4 = WeightedGraph(4, [(u, v, 1.0) for u, v in
        ...                        itertools.combinations(range(4), 2)])
        >>> flag_complex(K4).max_dimension
        2
        >>> flag_complex(K4, four_cliques=True).max_dimension
        3
        >>> flag_complex(K4, 3)  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        ValueError: flag complexes stop at dimension 2 unless ..., got max_dim 3

    Negative weights would let an edge enter before its vertices

        >>> flag_complex(WeightedGraph(2, [(0, 1, -1.0)]))
        Traceback (most recent call last):
          ...
        ValueError: edge (0, 1) has negative weight -1.0

    A zero weight is fine

        >>> flag_complex(WeightedGraph(2, [(0, 1, 0.0)])).validate()

    """


def doctest_flag_complex_counts():
    """Simplex counts of flag complexes match a brute-force enumeration

        >>> from pytopoml.filtrations import WeightedGraph, flag_complex
        >>> rng = random.Random(3)
        >>> ok = True
        >>> for trial in range(50):
        ...     n = rng.randint(1, 8)
        ...     edges = [(u, v, rng.random())
        ...              for u, v in itertools.combinations(range(n), 2)
        ...              if rng.random() < 0.5]
        ...     K = flag_complex(WeightedGraph(n, edges), 2)
        ...     present = set((u, v) for u, v, w in edges)
        ...     triangles = [t for t in itertools.combinations(range(n), 3)
        ...                  if all(e in present
        ...                         for e in itertools.combinations(t, 2))]
        ...     ok &= len(K.simplices(1)) == len(edges)
        ...     ok &= len(K) == n + len(edges) + len(triangles)
        ...     K.validate()
        >>> ok
        True

    """


def doctest_collaboration_graph():
    """Tests for collaboration_graph

        >>> from pytopoml.filtrations import collaboration_graph
        >>> g = collaboration_graph(4, [(0, 1), (1, 2, 3), (3, )])
        >>> sorted(g.weights().items())
        [((0, 1), 1.0), ((1, 2), 0.5), ((1, 3), 0.5), ((2, 3), 0.5)]

    """


def doctest_binarize():
    """Tests for binarize

        >>> from pytopoml.filtrations import GreyImage, binarize
        >>> binarize(GreyImage([[0.39, 0.40, 0.41]]), 0.4).values()
        [0, 0, 1]
        >>> binarize(GreyImage(np.zeros((2, 2)))).values()
        [0, 0, 0, 0]
        >>> binarize(GreyImage(np.ones((2, 2)))).values()
        [1, 1, 1, 1]

    """


def doctest_height_filtration():
    """Tests for height_filtration

        >>> from pytopoml.filtrations import BinaryImage, height_filtration
        >>> height_filtration(BinaryImage([[1, 1, 1]]), (0, 1)).values()
        [0.0, 1.0, 2.0]
        >>> height_filtration(BinaryImage([[1, 0], [0, 0]]), (0, 1)).values()
        [0.0, 1.0, 1.0, 1.0]
        >>> height_filtration(BinaryImage(np.zeros((2, 3))), (1, 0)).values()
        [1.0, 1.0, 1.0, 1.0, 1.0, 1.0]

    Diagonal directions must be normalized

        >>> s = math.sqrt(0.5)
        >>> H = height_filtration(BinaryImage([[0, 1]]), (s, s))
        >>> [round(x, 6) for x in H.values()]
        [0.707107, 0.707107]
        >>> height_filtration(BinaryImage([[0, 1]]), (1, 1))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.NotUnitVector: direction (1, 1) has length 1.414214

    """


def doctest_height_filtration_padding():
    """Heights of lit pixels do not change when the grid grows

        >>> from pytopoml.filtrations import (
        ...     DEFAULT_DIRECTIONS, BinaryImage, height_filtration)
        >>> rng = np.random.default_rng(11)
        >>> lit = rng.random((6, 6)) < 0.5
        >>> padded = np.zeros((9, 9), dtype=bool)
        >>> padded[:6, :6] = lit
        >>> ok = True
        >>> for v in DEFAULT_DIRECTIONS:
        ...     small = height_filtration(BinaryImage(lit), v).pixels
        ...     large = height_filtration(BinaryImage(padded), v).pixels
        ...     ok &= bool((small[lit] == large[:6, :6][lit]).all())
        >>> ok
        True

    """


def doctest_radial_filtration():
    """Tests for radial_filtration

        >>> from pytopoml.filtrations import BinaryImage, radial_filtration
        >>> b = np.zeros((28, 28))
        >>> b[3, 4] = b[13, 13] = 1
        >>> R = radial_filtration(BinaryImage(b), (0, 0)).pixels
        >>> float(R[3, 4])
        5.0
        >>> R = radial_filtration(BinaryImage(b), (13, 13)).pixels
        >>> float(R[13, 13])
        0.0
        >>> round(float(R[0, 0]), 3)
        19.799

    """


def doctest_density_filtration():
    """Tests for density_filtration

        >>> from pytopoml.filtrations import BinaryImage, density_filtration
        >>> b = BinaryImage([[0, 0, 0], [0, 1, 0], [0, 0, 0]])
        >>> density_filtration(b, 1).values()
        [0.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0]
        >>> density_filtration(b, 1.5).values()
        [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]

    Larger radii never count fewer pixels

        >>> rng = np.random.default_rng(5)
        >>> b = BinaryImage(rng.random((10, 10)) < 0.3)
        >>> ok = True
        >>> for r1, r2 in [(1, 2), (2, 2.5), (2.5, 6), (0.5, 1)]:
        ...     small = density_filtration(b, r1).pixels
        ...     large = density_filtration(b, r2).pixels
        ...     ok &= bool((small <= large).all())
        >>> ok
        True

    """


def doctest_greyscale_prepare():
    """Tests for greyscale_prepare

        >>> from pytopoml.filtrations import GreyImage, greyscale_prepare
        >>> greyscale_prepare(GreyImage([[0, 51, 255]])).values()
        [1.0, 0.8, 0.0]

    """


def doctest_image_filtrations():
    """Tests for image_filtrations

        >>> from pytopoml.filtrations import GreyImage, image_filtrations
        >>> img = GreyImage(np.full((28, 28), 200.0))
        >>> names = [name for name, f in image_filtrations(img)]
        >>> names[:8]       # doctest: +NORMALIZE_WHITESPACE
        ['height(0,1)', 'height(0,-1)', 'height(1,0)', 'height(-1,0)',
         'height(1,1)', 'height(1,-1)', 'height(-1,1)', 'height(-1,-1)']
        >>> names[8:]       # doctest: +NORMALIZE_WHITESPACE
        ['radial(13,6)', 'radial(6,13)', 'radial(13,13)', 'radial(20,13)',
         'radial(13,20)', 'radial(6,6)', 'radial(6,20)', 'radial(20,6)',
         'radial(20,20)', 'density(6)']

        >>> result = image_filtrations(img, include_greyscale=True)
        >>> len(result), result[-1][0]
        (19, 'greyscale')
        >>> round(float(result[-1][1].pixels[0, 0]), 6)
        0.215686

    """
