#!/usr/bin/env python
import random

import numpy as np


def random_diagram(rng, points=6, dim=0):
    from pytopoml.diagram import PersistenceDiagram
    result = []
    for i in range(points):
        birth = rng.uniform(0, 1)
        result.append((birth, birth + rng.uniform(0.01, 1), dim))
    return PersistenceDiagram(result, max_dimension=dim)


def every_vectorizer():
    from pytopoml.vectorize import vectorizer_grid
    return vectorizer_grid(pi_sizes=[4], pi_sigmas=[0.2], pl_layers=3,
                           resolutions=[11])


def doctest_PersistenceLandscape_layers_are_ordered():
    """Each landscape layer lies below the one before it

        >>> from pytopoml.vectorize import PersistenceLandscape
        >>> pl = PersistenceLandscape(layers=4, resolution=30)
        >>> rng = random.Random(1)
        >>> ok = True
        >>> for trial in range(1000):
        ...     D = random_diagram(rng, points=rng.randint(1, 8))
        ...     layers = pl.transform(D, (0, 2))
        ...     layers = layers.reshape(4, 30)
        ...     ok &= bool((np.diff(layers, axis=0) <= 0).all())
        ...     ok &= bool((layers >= 0).all())
        >>> ok
        True

    """


def doctest_Silhouette_is_the_mean_landscape():
    """With constant weights the silhouette averages all landscape layers

        >>> from pytopoml.vectorize import PersistenceLandscape, Silhouette
        >>> rng = random.Random(2)
        >>> ok = True
        >>> for trial in range(1000):
        ...     n = rng.randint(1, 8)
        ...     D = random_diagram(rng, points=n)
        ...     layers = PersistenceLandscape(n, 40).transform(D, (0, 2))
        ...     ps = Silhouette(40).transform(D, (0, 2))
        ...     ok &= bool(np.allclose(layers.reshape(n, 40).mean(axis=0), ps))
        >>> ok
        True

    Persistence weights favour long bars

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> D = PersistenceDiagram([(0, 4), (1, 2)])
        >>> Silhouette(5, 'persistence').transform(D, (0, 4)).tolist()
        [0.0, 0.8, 1.6, 0.8, 0.0]
        >>> Silhouette(5, 'persistence').label
        'PS(r=5,w=persistence)'

        >>> Silhouette(5, 'squared')  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.UnknownVectorizer: unknown silhouette weights...

    """


def doctest_BettiCurve_counts_living_points():
    """Betti curves agree with betti_at on their sample grid

        >>> from pytopoml.persistence import betti_at
        >>> from pytopoml.vectorize import BettiCurve
        >>> rng = random.Random(3)
        >>> grid = np.linspace(0, 2, 17)
        >>> ok = True
        >>> for trial in range(1000):
        ...     D = random_diagram(rng, points=rng.randint(1, 10))
        ...     curve = BettiCurve(17).transform(D, (0, 2))
        ...     ok &= curve.tolist() == [
        ...         float(betti_at(D, t, inclusive=True)[0])
        ...         for t in grid.tolist()]
        >>> ok
        True

    """


def doctest_empty_dimensions_vectorize_to_zero():
    """A dimension without points becomes the zero vector

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> from pytopoml.vectorize import combine_dims, fit_range
        >>> D = PersistenceDiagram([(0, 1, 0)], max_dimension=1)
        >>> fitted = fit_range([D])
        >>> [(v.abbreviation, bool(combine_dims(D, 'H1', v, fitted).any()))
        ...  for v in every_vectorizer()]
        [('PI', False), ('PL', False), ('PS', False), ('BC', False)]

    The fused strategy only needs the placeholder when a sample has no
    points at all

        >>> empty = PersistenceDiagram([], max_dimension=1)
        >>> [bool(combine_dims(empty, 'fused', v, fitted).any())
        ...  for v in every_vectorizer()]
        [False, False, False, False]

    """


def doctest_vectors_ignore_point_order():
    """Shuffling the points of a diagram leaves every vector unchanged

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> rng = random.Random(4)
        >>> vectorizers = every_vectorizer()
        >>> ok = True
        >>> for trial in range(1000):
        ...     D = random_diagram(rng, points=rng.randint(1, 8))
        ...     points = list(D.points)
        ...     rng.shuffle(points)
        ...     shuffled = PersistenceDiagram(points)
        ...     for v in vectorizers:
        ...         ok &= bool(np.allclose(v.transform(D, (0, 2)),
        ...                                v.transform(shuffled, (0, 2))))
        >>> ok
        True

    """


def doctest_PersistenceImage_doubling():
    """Listing every point twice doubles the persistence image

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> from pytopoml.vectorize import PersistenceImage
        >>> rng = random.Random(5)
        >>> ok = True
        >>> for trial in range(1000):
        ...     D = random_diagram(rng, points=rng.randint(1, 8))
        ...     pi = PersistenceImage(size=rng.choice([3, 5, 10]),
        ...                           sigma=rng.choice([0.1, 0.5, 1.0]))
        ...     twice = PersistenceDiagram(list(D.points) * 2)
        ...     ok &= bool(np.allclose(pi.transform(twice, (0, 2)),
        ...                            2 * pi.transform(D, (0, 2))))
        >>> ok
        True

    """


def doctest_vector_lengths():
    """Vectors have the advertised length for every strategy

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> from pytopoml.vectorize import DiagramVectorizer
        >>> rng = random.Random(5)
        >>> def sample():
        ...     both = [random_diagram(rng, 3, 0), random_diagram(rng, 3, 1)]
        ...     return [PersistenceDiagram.union(both),
        ...             random_diagram(rng, 4, 0)]
        >>> samples = [sample() for i in range(4)]
        >>> cases = [('H0', 'collapse', 1), ('H0', 'multivector', 2),
        ...          ('fused', 'collapse', 1), ('fused', 'multivector', 2),
        ...          ('concat', 'collapse', 2)]
        >>> for v in every_vectorizer():
        ...     for strategy, filtrations, copies in cases:
        ...         dv = DiagramVectorizer(v, strategy, filtrations)
        ...         shape = dv.fit_transform(samples).shape
        ...         assert shape == (4, v.vector_length() * copies), (
        ...             v, strategy, filtrations)

    A single dimension has to exist in every filtration; the second
    filtration here only has H0

        >>> dv = DiagramVectorizer(every_vectorizer()[-1], 'H1', 'multivector')
        >>> dv.fit(samples)
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.UnknownDimension: H1 was not computed (max is H0)

    """


def doctest_DiagramVectorizer_errors():
    """Tests for DiagramVectorizer errors

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> from pytopoml.vectorize import BettiCurve, DiagramVectorizer
        >>> D = PersistenceDiagram([(0, 1)])
        >>> dv = DiagramVectorizer(BettiCurve(3), 'H0', 'multivector')
        >>> dv.transform([[D]])
        Traceback (most recent call last):
          ...
        ValueError: fit() must be called before transform()
        >>> dv.fit([[D], [D, D]])  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.FiltrationCountMismatch: samples have 1 or 2...
        >>> dv.fit([])
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.NoDiagrams: cannot fit a range on no samples

        >>> DiagramVectorizer(BettiCurve(3), 'H0', 'stack')
        Traceback (most recent call last):
          ...
        ValueError: unknown filtration strategy: stack
        >>> DiagramVectorizer(BettiCurve(3), 'Hx')
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.UnknownDimension: unknown dimension strategy: Hx

    """


def doctest_DiagramVectorizer_ranges_come_from_training_data():
    """Ranges fitted on training samples are reused for test samples

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> from pytopoml.vectorize import BettiCurve, DiagramVectorizer
        >>> train = [[PersistenceDiagram([(0, 1)])]]
        >>> test = [[PersistenceDiagram([(5, 10)])]]
        >>> dv = DiagramVectorizer(BettiCurve(3), 'H0').fit(train)
        >>> dv.ranges
        [<DiagramRange: global_max=1.0, 0=[0, 1], fused=[0, 1]>]
        >>> dv.transform(test).tolist()
        [[0.0, 0.0, 0.0]]

    Essential points die at the training maximum

        >>> essential = [[PersistenceDiagram([(0.5, float('inf'))])]]
        >>> dv.transform(essential).tolist()
        [[0.0, 1.0, 1.0]]

    """
