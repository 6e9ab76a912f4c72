"""
Filtered complexes from point clouds, images and weighted graphs
"""

import functools
import logging
import math

import numpy as np
from scipy import ndimage
from scipy.spatial import Delaunay, QhullError, cKDTree
from scipy.spatial.distance import pdist, squareform

from .complex import FilteredComplex, Simplex


log = logging.getLogger(__name__)


class EmptyCloud(ValueError):
    """A point cloud has no points."""


class DimensionMismatch(ValueError):
    """Points of the wrong ambient dimension."""


class DegenerateInput(ValueError):
    """The point cloud has no 2-dimensional Delaunay triangulation."""


class SelfLoop(ValueError):
    """A graph edge joins a vertex to itself."""


class DuplicateEdge(ValueError):
    """An undirected graph edge occurs twice."""


class VertexOutOfRange(ValueError):
    """A graph edge refers to a vertex the graph does not have."""


class NotUnitVector(ValueError):
    """A height filtration direction is not of unit length."""


class CenterOutOfBounds(ValueError):
    """A radial filtration center is outside the image grid."""


DUPLICATE_TOLERANCE = 1e-12
UNIT_TOLERANCE = 1e-9

DEFAULT_THRESHOLD = 0.4
DEFAULT_DENSITY_RADIUS = 6

_SQRT_HALF = math.sqrt(0.5)
DEFAULT_DIRECTIONS = [
    (0.0, 1.0), (0.0, -1.0), (1.0, 0.0), (-1.0, 0.0),
    (_SQRT_HALF, _SQRT_HALF), (_SQRT_HALF, -_SQRT_HALF),
    (-_SQRT_HALF, _SQRT_HALF), (-_SQRT_HALF, -_SQRT_HALF),
]
DEFAULT_CENTERS = [
    (13, 6), (6, 13), (13, 13), (20, 13), (13, 20),
    (6, 6), (6, 20), (20, 6), (20, 20),
]


class PointCloud(object):
    """A finite set of points in R^d.

        >>> cloud = PointCloud([(0, 0), (1, 0), (1, 1)])
        >>> len(cloud), cloud.dimension
        (3, 2)

        >>> PointCloud([(0, 0), (1, float('nan'))])
        Traceback (most recent call last):
          ...
        ValueError: point coordinates must be finite

    """

    def __init__(self, points, dimension=None):
        points = np.asarray(points, dtype=float)
        if points.size == 0:
            points = points.reshape(0, dimension or 2)
        if points.ndim != 2 or points.shape[1] < 1:
            raise DimensionMismatch('points must be an n x d array, got'
                                    ' shape %s' % (points.shape, ))
        if not np.isfinite(points).all():
            raise ValueError('point coordinates must be finite')
        self.points = points

    dimension = property(lambda self: self.points.shape[1])

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return '<PointCloud: %d points in R^%d>' % (len(self), self.dimension)


class GreyImage(object):
    """A greyscale image, stored row-major as a (height, width) array.

        >>> img = GreyImage([[0.0, 0.5, 1.0]])
        >>> img.width, img.height
        (3, 1)
        >>> img.values()
        [0.0, 0.5, 1.0]

    """

    dtype = float

    def __init__(self, pixels):
        pixels = np.array(pixels, dtype=self.dtype)
        if pixels.ndim != 2 or 0 in pixels.shape:
            raise ValueError('an image needs a non-empty 2-D pixel array,'
                             ' got shape %s' % (pixels.shape, ))
        if not np.isfinite(pixels).all():
            raise ValueError('pixel intensities must be finite')
        self.pixels = pixels

    height = property(lambda self: self.pixels.shape[0])
    width = property(lambda self: self.pixels.shape[1])

    def from_flat(cls, width, height, values):
        """Build an image from a flat row-major list of intensities.

            >>> GreyImage.from_flat(2, 1, [3, 4]).pixels.tolist()
            [[3.0, 4.0]]
            >>> GreyImage.from_flat(2, 2, [3, 4])
            Traceback (most recent call last):
              ...
            ValueError: expected 4 pixels for a 2x2 image, got 2

        """
        values = np.asarray(values, dtype=cls.dtype).ravel()
        if len(values) != width * height:
            raise ValueError('expected %d pixels for a %dx%d image, got %d'
                             % (width * height, width, height, len(values)))
        return cls(values.reshape(height, width))

    from_flat = classmethod(from_flat)

    def values(self):
        """Return the row-major intensities as a list of Python numbers."""
        return self.pixels.ravel().tolist()

    def __repr__(self):
        return '<%s: %dx%d>' % (self.__class__.__name__, self.width,
                                self.height)


class BinaryImage(GreyImage):
    """A black and white image with pixels in {0, 1}.

        >>> BinaryImage([[0, 1, 2]])
        Traceback (most recent call last):
          ...
        ValueError: binary pixels must be 0 or 1

    """

    dtype = np.int8

    def __init__(self, pixels):
        GreyImage.__init__(self, pixels)
        if ((self.pixels != 0) & (self.pixels != 1)).any():
            raise ValueError('binary pixels must be 0 or 1')

    lit = property(lambda self: self.pixels.astype(bool))


class WeightedGraph(object):
    """An undirected graph with a weight on every edge.

        >>> g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 0.5)])
        >>> g
        <WeightedGraph: 3 vertices, 2 edges>

        >>> WeightedGraph(3, [(0, 1, 1.0), (1, 0, 2.0)])
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.DuplicateEdge: duplicate edge (1, 0)

        >>> WeightedGraph(3, [(2, 2, 1.0)])
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.SelfLoop: self-loop at vertex 2

        >>> WeightedGraph(2, [(0, 2, 1.0)])
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.VertexOutOfRange: edge (0, 2) in a 2-vertex graph

        >>> WeightedGraph(2, [(0, 1, -1.0)])
        Traceback (most recent call last):
          ...
        ValueError: edge (0, 1) has negative weight -1.0

    """

    def __init__(self, vertex_count, edges=()):
        self.vertex_count = int(vertex_count)
        self.edges = [(int(u), int(v), float(w)) for u, v, w in edges]
        self.validate()

    def validate(self):
        seen = set()
        for u, v, w in self.edges:
            if u == v:
                raise SelfLoop('self-loop at vertex %d' % u)
            if not (0 <= u < self.vertex_count
                    and 0 <= v < self.vertex_count):
                raise VertexOutOfRange('edge (%d, %d) in a %d-vertex graph'
                                       % (u, v, self.vertex_count))
            if not math.isfinite(w):
                raise ValueError('edge (%d, %d) has weight %r' % (u, v, w))
            if w < 0:
                raise ValueError('edge (%d, %d) has negative weight %r'
                                 % (u, v, w))
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge('duplicate edge (%d, %d)' % (u, v))
            seen.add(key)

    def weights(self):
        """Return a dict mapping (u, v) with u < v to the edge weight."""
        return {(min(u, v), max(u, v)): w for u, v, w in self.edges}

    def __repr__(self):
        return '<WeightedGraph: %d vertices, %d edges>' % (
            self.vertex_count, len(self.edges))


def collaboration_graph(vertex_count, collaborations):
    """Build a collaboration graph from a list of author groups.

    Every collaboration of n authors adds 1/(n - 1) to the weight of each
    pair of its authors.

        >>> g = collaboration_graph(3, [(0, 1), (0, 1, 2)])
        >>> sorted(g.weights().items())
        [((0, 1), 1.5), ((0, 2), 0.5), ((1, 2), 0.5)]

    """
    weights = {}
    for authors in collaborations:
        authors = sorted(set(authors))
        if len(authors) < 2:
            continue
        share = 1.0 / (len(authors) - 1)
        for i, u in enumerate(authors):
            for v in authors[i+1:]:
                weights[u, v] = weights.get((u, v), 0.0) + share
    return WeightedGraph(vertex_count,
                         [(u, v, w) for (u, v), w in sorted(weights.items())])


def _expand_cliques(neighbours, weight, max_dim):
    """Yield (vertices, value) for every clique with 2 to max_dim + 1 vertices.

    ``neighbours[u]`` is the set of neighbours of u with larger ids; the value
    of a clique is the largest weight among its edges.
    """

    def extend(clique, value, candidates):
        yield clique, value
        if len(clique) > max_dim:
            return
        for w in sorted(candidates):
            new_value = max([value] + [weight(u, w) for u in clique])
            yield from extend(clique + (w, ), new_value,
                              candidates & neighbours[w])

    if max_dim < 1:
        return
    for u in range(len(neighbours)):
        for v in sorted(neighbours[u]):
            yield from extend((u, v), weight(u, v),
                              neighbours[u] & neighbours[v])


def _clique_complex(vertex_count, neighbours, weight, max_dim):
    pairs = [(Simplex(v), 0.0) for v in range(vertex_count)]
    pairs.extend((Simplex(*clique), value) for clique, value
                 in _expand_cliques(neighbours, weight, max_dim))
    return FilteredComplex.from_simplices(pairs, validate=False)


def rips_complex(cloud, max_dim=2, max_radius=math.inf,
                 squared_radii=False):
    """Build the Vietoris-Rips filtration of a point cloud.

    Vertices enter at 0, an edge at the distance between its endpoints (when
    that is at most ``max_radius``) and every higher simplex at its longest
    edge.  With ``squared_radii`` an edge of length d enters at (d/2)**2
    instead, the scale alpha complexes use.

        >>> square = PointCloud([(0, 0), (1, 0), (1, 1), (0, 1)])
        >>> K = rips_complex(square, max_dim=2, max_radius=2)
        >>> sorted(set(round(K.value(e), 6) for e in K.simplices(1)))
        [1.0, 1.414214]
        >>> len(K.simplices(2))
        4

        >>> rips_complex(PointCloud([]))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.EmptyCloud: the point cloud is empty

        >>> rips_complex(square, max_radius=0)
        Traceback (most recent call last):
          ...
        ValueError: max_radius must be positive, got 0

    """
    if len(cloud) == 0:
        raise EmptyCloud('the point cloud is empty')
    if not max_radius > 0:
        raise ValueError('max_radius must be positive, got %r' % max_radius)
    n = len(cloud)
    distances = squareform(pdist(cloud.points)) if n > 1 else np.zeros((1, 1))
    if squared_radii:
        values = 0.25 * distances ** 2
    else:
        values = distances
    neighbours = [set() for v in range(n)]
    close = np.argwhere(np.triu(distances <= max_radius, k=1))
    for u, v in close.tolist():
        neighbours[u].add(v)
    return _clique_complex(n, neighbours,
                           lambda u, v: float(values[u, v]), max_dim)


def distinct_points(cloud, tolerance=DUPLICATE_TOLERANCE):
    """Return the cloud without points closer than ``tolerance`` to another.

    The first point of every cluster of duplicates is kept.

        >>> distinct_points(PointCloud([(0, 0), (1, 1), (0, 0)]))
        <PointCloud: 2 points in R^2>

    """
    points = cloud.points
    duplicates = set()
    for i, j in cKDTree(points).query_pairs(tolerance):
        duplicates.add(max(i, j))
    if not duplicates:
        return cloud
    log.warning('dropped %d duplicate point(s) from %d',
                len(duplicates), len(points))
    keep = [i for i in range(len(points)) if i not in duplicates]
    return PointCloud(points[keep])


def _squared_circumradii(a, b, c):
    ab = ((b - a) ** 2).sum(axis=1)
    bc = ((c - b) ** 2).sum(axis=1)
    ca = ((a - c) ** 2).sum(axis=1)
    u = b - a
    v = c - a
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    return ab * bc * ca / (4 * cross ** 2)


def alpha_complex_2d(cloud):
    """Build the alpha filtration of a planar point cloud.

    Filtration values are squared radii.  Triangles of the Delaunay
    triangulation enter at their squared circumradius; an edge enters at
    its squared half-length unless an opposite vertex of an incident
    triangle lies strictly inside its diametral ball, in which case it
    enters with the first such triangle.

        >>> K = alpha_complex_2d(PointCloud([(0, 0), (2, 0), (0, 2)]))
        >>> [(str(s), K.value(s)) for s in K.sorted_simplices()[3:]]
        [('{0,1}', 1.0), ('{0,2}', 1.0), ('{1,2}', 2.0), ('{0,1,2}', 2.0)]

    Collinear input has no triangulation:

        >>> alpha_complex_2d(PointCloud([(0, 0), (1, 1), (2, 2)]))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.DegenerateInput: all 3 points are collinear

    """
    if len(cloud) == 0:
        raise EmptyCloud('the point cloud is empty')
    if cloud.dimension != 2:
        raise DimensionMismatch('alpha complexes need planar points, got'
                                ' dimension %d' % cloud.dimension)
    points = distinct_points(cloud).points
    n = len(points)
    centered = points - points.mean(axis=0)
    if n < 3 or np.linalg.matrix_rank(centered, tol=1e-12) < 2:
        raise DegenerateInput('all %d points are collinear' % n)
    try:
        triangulation = Delaunay(points)
    except QhullError as e:
        raise DegenerateInput('no Delaunay triangulation: %s'
                              % str(e).splitlines()[0])
    if len(triangulation.coplanar):
        log.warning('%d point(s) left out of the Delaunay triangulation',
                    len(triangulation.coplanar))

    triangles = np.sort(triangulation.simplices, axis=1)
    tri_values = _squared_circumradii(points[triangles[:, 0]],
                                      points[triangles[:, 1]],
                                      points[triangles[:, 2]])

    edge_values = {}
    attached = {}
    for (a, b, c), value in zip(triangles.tolist(), tri_values.tolist()):
        for (u, v), w in (((a, b), c), ((a, c), b), ((b, c), a)):
            pu, pv, pw = points[u], points[v], points[w]
            if np.dot(pu - pw, pv - pw) < 0:
                attached[u, v] = min(attached.get((u, v), math.inf), value)
            edge_values.setdefault((u, v), 0.25 * np.dot(pu - pv, pu - pv))
    for edge, value in attached.items():
        edge_values[edge] = value

    # faces may not come later than their cofaces
    for (a, b, c), value in zip(triangles.tolist(), tri_values.tolist()):
        for edge in ((a, b), (a, c), (b, c)):
            if edge_values[edge] > value:
                edge_values[edge] = value

    pairs = [(Simplex(v), 0.0) for v in range(n)]
    pairs.extend((Simplex(u, v), float(value))
                 for (u, v), value in edge_values.items())
    pairs.extend((Simplex(*t), float(value))
                 for t, value in zip(triangles.tolist(), tri_values.tolist()))
    return FilteredComplex.from_simplices(pairs, validate=False)


@functools.lru_cache(maxsize=16)
def _grid_structure(width, height):
    """Return the triangulated grid as a list of vertex index tuples.

    Each unit cell is split along its anti-diagonal from (r, c+1) to
    (r+1, c).
    """
    simplices = [(v, ) for v in range(width * height)]
    for r in range(height):
        for c in range(width):
            v = r * width + c
            right = v + 1 if c + 1 < width else None
            down = v + width if r + 1 < height else None
            if right is not None:
                simplices.append((v, right))
            if down is not None:
                simplices.append((v, down))
            if right is not None and down is not None:
                simplices.append((down, right))
                simplices.append((v, down, right))
                simplices.append((down, right, down + 1))
    return tuple(tuple.__new__(Simplex, sorted(s)) for s in simplices)


def image_complex(img):
    """Build the lower-star filtration of a triangulated pixel grid.

    Pixel (r, c) becomes vertex r * width + c, entering at its intensity;
    every other simplex enters at the largest intensity of its pixels.

        >>> K = image_complex(GreyImage([[0.2, 0.7]]))
        >>> [(str(s), K.value(s)) for s in K.sorted_simplices()]
        [('{0}', 0.2), ('{1}', 0.7), ('{0,1}', 0.7)]

        >>> K = image_complex(GreyImage(np.zeros((2, 2))))
        >>> [len(K.simplices(k)) for k in range(3)]
        [4, 5, 2]

    """
    values = img.pixels.ravel().tolist()
    pairs = [(s, max(values[v] for v in s))
             for s in _grid_structure(img.width, img.height)]
    return FilteredComplex.from_simplices(pairs, validate=False)


def flag_complex(g, max_dim=2, four_cliques=False):
    """Build the clique filtration of a weighted graph.

    Vertices enter at 0, edges at their weight and every clique of up to
    ``max_dim + 1`` vertices at its heaviest edge.  ``four_cliques`` also
    adds the 3-simplices, which H2 needs to be able to die.

        >>> g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])
        >>> K = flag_complex(g)
        >>> K.value(Simplex(0, 1, 2))
        3.0

    """
    if not 0 <= max_dim <= 2:
        raise ValueError('flag complexes stop at dimension 2 unless'
                         ' four_cliques is set, got max_dim %d' % max_dim)
    g.validate()
    weights = g.weights()
    neighbours = [set() for v in range(g.vertex_count)]
    for u, v in weights:
        neighbours[u].add(v)
    return _clique_complex(g.vertex_count, neighbours,
                           lambda u, v: weights[u, v],
                           3 if four_cliques else max_dim)


def normalize(img):
    """Scale intensities to [0, 1], dividing by 255 when the maximum is > 1.

        >>> normalize(GreyImage([[0, 51, 255]])).values()
        [0.0, 0.2, 1.0]

    """
    pixels = img.pixels.astype(float)
    if pixels.max() > 1:
        pixels = pixels / 255.0
    return GreyImage(pixels)


def greyscale_prepare(img):
    """Return the normalized negative of an image.

        >>> greyscale_prepare(GreyImage([[0, 255]])).values()
        [1.0, 0.0]
        >>> greyscale_prepare(GreyImage([[0.0, 1.0]])).values()
        [1.0, 0.0]

    """
    return GreyImage(1.0 - normalize(img).pixels)


def binarize(img, threshold=DEFAULT_THRESHOLD):
    """Light up the pixels whose intensity is strictly above the threshold.

        >>> binarize(GreyImage([[0.39, 0.40, 0.41]]), 0.4).values()
        [0, 0, 1]

    """
    return BinaryImage(img.pixels > threshold)


def _grid_coordinates(height, width):
    rows, cols = np.indices((height, width))
    return rows.astype(float), cols.astype(float)


def height_filtration(b, v):
    """Give lit pixels their height <v, (row, col)> along a unit direction.

    Unlit pixels get the largest height of any grid position.

        >>> b = BinaryImage([[1, 0], [0, 0]])
        >>> height_filtration(b, (0, 1)).values()
        [0.0, 1.0, 1.0, 1.0]

        >>> height_filtration(b, (1, 1))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.NotUnitVector: direction (1, 1) has length 1.414214

    """
    norm = math.hypot(v[0], v[1])
    if abs(norm - 1) > UNIT_TOLERANCE:
        raise NotUnitVector('direction (%s, %s) has length %f'
                            % (v[0], v[1], norm))
    rows, cols = _grid_coordinates(b.height, b.width)
    heights = v[0] * rows + v[1] * cols
    return GreyImage(np.where(b.lit, heights, heights.max()))


def radial_filtration(b, center):
    """Give lit pixels their Euclidean distance from a center pixel.

    Unlit pixels get the largest distance from the center over the grid.

        >>> b = BinaryImage(np.ones((5, 5)))
        >>> float(radial_filtration(b, (0, 0)).pixels[3, 4])
        5.0

        >>> radial_filtration(b, (5, 0))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.CenterOutOfBounds: center (5, 0) off a 5x5 grid

    """
    cr, cc = center
    if not (0 <= cr < b.height and 0 <= cc < b.width):
        raise CenterOutOfBounds('center (%s, %s) off a %dx%d grid'
                                % (cr, cc, b.width, b.height))
    rows, cols = _grid_coordinates(b.height, b.width)
    distances = np.hypot(rows - cr, cols - cc)
    return GreyImage(np.where(b.lit, distances, distances.max()))


def _disk(radius):
    reach = int(math.floor(radius))
    offsets = np.arange(-reach, reach + 1)
    dr, dc = np.meshgrid(offsets, offsets, indexing='ij')
    return (dr ** 2 + dc ** 2 <= radius ** 2).astype(np.int64)


def density_filtration(b, radius=DEFAULT_DENSITY_RADIUS):
    """Count the lit pixels within ``radius`` of every pixel.

        >>> density_filtration(BinaryImage(np.ones((3, 3))), 1).values()
        [3.0, 4.0, 3.0, 4.0, 5.0, 4.0, 3.0, 4.0, 3.0]

    """
    if radius <= 0:
        raise ValueError('density radius must be positive, got %r' % radius)
    counts = ndimage.convolve(b.pixels.astype(np.int64), _disk(radius),
                              mode='constant', cval=0)
    return GreyImage(counts)


def image_filtrations(img, directions=None, centers=None,
                      radius=DEFAULT_DENSITY_RADIUS,
                      threshold=DEFAULT_THRESHOLD, include_greyscale=False):
    """Return the named pre-filtered images of the multi-filtration set.

    The order is fixed: one height filtration per direction, one radial
    filtration per center, the density filtration and, optionally, the
    greyscale filtration last.

        >>> img = GreyImage(np.zeros((28, 28)))
        >>> names = [name for name, f in image_filtrations(img)]
        >>> len(names), names[0], names[8], names[-1]
        (18, 'height(0,1)', 'radial(13,6)', 'density(6)')

    """
    if directions is None:
        directions = DEFAULT_DIRECTIONS
    if centers is None:
        centers = DEFAULT_CENTERS
    b = binarize(normalize(img), threshold)
    result = []
    for v in directions:
        norm = math.hypot(v[0], v[1])
        if norm > 0:
            v = (v[0] / norm, v[1] / norm)
        result.append(('height(%s)' % _format_direction(v),
                       height_filtration(b, v)))
    for c in centers:
        result.append(('radial(%d,%d)' % tuple(c), radial_filtration(b, c)))
    result.append(('density(%g)' % radius, density_filtration(b, radius)))
    if include_greyscale:
        result.append(('greyscale', greyscale_prepare(img)))
    return result


def _format_direction(v):
    """Format a unit direction by the signs of its un-normalized form.

        >>> _format_direction((-_SQRT_HALF, _SQRT_HALF))
        '-1,1'

    """
    return ','.join('%d' % (0 if abs(x) < UNIT_TOLERANCE else
                            math.copysign(1, x))
                    for x in v)
