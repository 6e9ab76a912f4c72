"""
Fixed-length vectors from persistence diagrams

Four vectorizers are provided: persistence images (PI), persistence
landscapes (PL), silhouettes (PS) and Betti curves (BC).  Every vectorizer
samples a diagram over a range that is fitted on training diagrams only
(see fit_range).

Homology dimensions are combined by one of these strategies:

    'H0', 'H1', 'H2'    vectorize one dimension
    'fused'             forget dimensions, vectorize the union
    'concat'            vectorize every dimension, concatenate in order

and the diagrams of several filtrations of one sample by:

    'collapse'          union the diagrams of all filtrations
    'multivector'       vectorize each filtration, concatenate in order

"""

import csv
import math

import numpy as np

from .diagram import PersistenceDiagram, PersistencePoint, regularize


class NoDiagrams(ValueError):
    """A range was fitted on no diagrams at all."""


class UnknownDimension(ValueError):
    """A dimension strategy names an unknown or uncomputed dimension."""


class FiltrationCountMismatch(ValueError):
    """Samples disagree on the number of filtrations."""


class UnknownVectorizer(ValueError):
    """A vectorization method name is not recognised."""


RANGE_EPSILON = 1e-6

METHODS = ('PI', 'PL', 'PS', 'BC')
DIM_STRATEGIES = ('H0', 'H1', 'H2', 'fused', 'concat')
FILTRATION_STRATEGIES = ('collapse', 'multivector')


def _widen(lo, hi):
    if hi - lo <= 0:
        return lo - RANGE_EPSILON, hi + RANGE_EPSILON
    return lo, hi


def _bounds(points):
    if not points:
        return _widen(0.0, 0.0)
    return _widen(min(p.birth for p in points),
                  max(p.death for p in points))


class DiagramRange(object):
    """Sampling bounds fitted on training diagrams.

    ``global_max`` replaces infinite deaths; ``bounds`` maps each homology
    dimension and the key 'fused' to a (lo, hi) pair.
    """

    def __init__(self, global_max, bounds, max_dimension):
        self.global_max = global_max
        self.bounds = bounds
        self.max_dimension = max_dimension

    def __repr__(self):
        return '<DiagramRange: global_max=%r, %s>' % (
            self.global_max,
            ', '.join('%s=[%g, %g]' % (key, lo, hi)
                      for key, (lo, hi) in sorted(self.bounds.items(),
                                                  key=str)))


def fit_range(diagrams):
    """Fit sampling bounds on a list of training diagrams.

    Bounds run from the smallest birth to the largest death after
    regularization, per homology dimension and for the fused union.

        >>> r = fit_range([PersistenceDiagram([(0, 1)]),
        ...                PersistenceDiagram([(0.5, 2)])])
        >>> r.bounds[0], r.global_max
        ((0.0, 2.0), 2.0)

        >>> lo, hi = fit_range([PersistenceDiagram([(1, 1)])]).bounds[0]
        >>> round(lo, 9), round(hi, 9)
        (0.999999, 1.000001)

        >>> fit_range([])
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.NoDiagrams: cannot fit a range on no diagrams

    """
    if not diagrams:
        raise NoDiagrams('cannot fit a range on no diagrams')
    values = []
    for d in diagrams:
        values.extend(d.finite_values())
    global_max = float(max(values, default=0.0))
    max_dimension = max(d.max_dimension for d in diagrams)
    per_dim = {k: [] for k in range(max_dimension + 1)}
    fused = []
    for d in diagrams:
        for p in regularize(d, global_max, dims=range(max_dimension + 1)):
            per_dim.setdefault(p.dim, []).append(p)
        fused.extend(_fused_points(d, global_max))
    bounds = {k: _bounds(points) for k, points in per_dim.items()}
    bounds['fused'] = _bounds(fused)
    return DiagramRange(global_max, bounds, max_dimension)


def _fused_points(d, global_max):
    points = regularize(d, global_max, dims=()).points
    return points or [PersistencePoint(0.0, 0.0)]


class Vectorizer(object):
    """Base class of the diagram vectorizers."""

    abbreviation = None

    def transform(self, diagram, bounds):
        """Vectorize a finite diagram sampled over bounds = (lo, hi)."""
        raise NotImplementedError

    def __repr__(self):
        return '<%s>' % self.label

    def __eq__(self, other):
        return isinstance(other, Vectorizer) and self.label == other.label

    def __hash__(self):
        return hash(self.label)


def _tents(array, grid):
    """Evaluate max(0, min(t - b, d - t)) for every point and grid value."""
    births = array[:, 0][:, None]
    deaths = array[:, 1][:, None]
    return np.maximum(0.0, np.minimum(grid[None, :] - births,
                                      deaths - grid[None, :]))


class PersistenceImage(Vectorizer):
    """Persistence images on an n x n grid with Gaussian bandwidth sigma.

    Points are moved to (midlife, half-persistence) coordinates and spread
    by an isotropic Gaussian density whose standard deviation is sigma.  The
    grid covers [lo, hi] along the midlife axis and [0, hi - lo] along the
    persistence axis; the image is flattened persistence row by row.

        >>> pi = PersistenceImage(size=1, sigma=0.5)
        >>> pi.label, pi.vector_length()
        ('PI(n=1,sigma=0.5)', 1)

    The point (0, 2) sits at (1, 1) and has weight 0.5, so a pixel centred
    there gets half the peak density:

        >>> value = pi.transform(PersistenceDiagram([(0, 2)]), (0, 2))[0]
        >>> math.isclose(value, 0.5 / (2 * math.pi * 0.25))
        True

    """

    abbreviation = 'PI'

    def __init__(self, size=5, sigma=0.1):
        if size < 1 or sigma <= 0:
            raise ValueError('PI needs size >= 1 and sigma > 0')
        self.size = size
        self.sigma = sigma

    label = property(lambda self: 'PI(n=%d,sigma=%g)' % (self.size,
                                                        self.sigma))

    def vector_length(self):
        return self.size * self.size

    def weights(self, array):
        """Weight each point by its persistence relative to the largest."""
        persistence = array[:, 1] - array[:, 0]
        m = persistence.max() if len(persistence) else 0.0
        if m <= 0:
            return np.zeros(len(array))
        return np.clip(persistence / 2 / m, 0.0, 1.0)

    def transform(self, diagram, bounds):
        array = diagram.as_array()
        lo, hi = bounds
        n = self.size
        step = (hi - lo) / n
        centres = (np.arange(n) + 0.5) * step
        xs = lo + centres
        ys = centres
        weights = self.weights(array)
        image = np.zeros((n, n))
        keep = weights > 0
        if keep.any():
            mid = (array[keep, 0] + array[keep, 1]) / 2
            half = (array[keep, 1] - array[keep, 0]) / 2
            var = self.sigma ** 2
            gx = np.exp(-(xs[None, :] - mid[:, None]) ** 2 / (2 * var))
            gy = np.exp(-(ys[None, :] - half[:, None]) ** 2 / (2 * var))
            image = np.einsum('q,qj,qi->ji', weights[keep], gy, gx)
            image /= 2 * math.pi * var
        return image.ravel()


class PersistenceLandscape(Vectorizer):
    """The first k landscape functions sampled at r points.

        >>> pl = PersistenceLandscape(layers=2, resolution=3)
        >>> pl.transform(PersistenceDiagram([(0, 2), (1, 3)]), (0, 3)).tolist()
        [0.0, 0.5, 0.0, 0.0, 0.5, 0.0]

    """

    abbreviation = 'PL'

    def __init__(self, layers=5, resolution=25):
        if layers < 1 or resolution < 1:
            raise ValueError('PL needs layers >= 1 and resolution >= 1')
        self.layers = layers
        self.resolution = resolution

    label = property(lambda self: 'PL(k=%d,r=%d)' % (self.layers,
                                                    self.resolution))

    def vector_length(self):
        return self.layers * self.resolution

    def transform(self, diagram, bounds):
        grid = np.linspace(bounds[0], bounds[1], self.resolution)
        result = np.zeros((self.layers, self.resolution))
        array = diagram.as_array()
        if len(array):
            tents = -np.sort(-_tents(array, grid), axis=0)
            k = min(self.layers, len(array))
            result[:k] = tents[:k]
        return result.ravel()


class Silhouette(Vectorizer):
    """The weighted average of the tent functions, sampled at r points.

    Weights are 1 for every point ('constant') or its persistence
    ('persistence').

        >>> ps = Silhouette(resolution=3)
        >>> ps.transform(PersistenceDiagram([(0, 2), (1, 3)]), (0, 3)).tolist()
        [0.0, 0.5, 0.0]

    """

    abbreviation = 'PS'
    WEIGHTS = ('constant', 'persistence')

    def __init__(self, resolution=25, weights='constant'):
        if resolution < 1:
            raise ValueError('PS needs resolution >= 1')
        if weights not in self.WEIGHTS:
            raise UnknownVectorizer('unknown silhouette weights: %s'
                                    % weights)
        self.resolution = resolution
        self.weights = weights

    def _label(self):
        if self.weights == 'constant':
            return 'PS(r=%d)' % self.resolution
        return 'PS(r=%d,w=%s)' % (self.resolution, self.weights)

    label = property(_label)

    def vector_length(self):
        return self.resolution

    def transform(self, diagram, bounds):
        grid = np.linspace(bounds[0], bounds[1], self.resolution)
        array = diagram.as_array()
        if not len(array):
            return np.zeros(self.resolution)
        if self.weights == 'constant':
            w = np.ones(len(array))
        else:
            w = array[:, 1] - array[:, 0]
        total = w.sum()
        if total <= 0:
            return np.zeros(self.resolution)
        return w.dot(_tents(array, grid)) / total


class BettiCurve(Vectorizer):
    """The number of points alive at each of r sample values.

    A point (b, d) is alive at t when b <= t <= d.  Points on the diagonal
    never count.

        >>> bc = BettiCurve(resolution=4)
        >>> bc.transform(PersistenceDiagram([(0, 2), (1, 3)]), (0, 3)).tolist()
        [1.0, 2.0, 2.0, 1.0]

    """

    abbreviation = 'BC'

    def __init__(self, resolution=25):
        if resolution < 1:
            raise ValueError('BC needs resolution >= 1')
        self.resolution = resolution

    label = property(lambda self: 'BC(r=%d)' % self.resolution)

    def vector_length(self):
        return self.resolution

    def transform(self, diagram, bounds):
        grid = np.linspace(bounds[0], bounds[1], self.resolution)
        array = diagram.as_array()
        if len(array):
            array = array[array[:, 1] > array[:, 0]]
        if not len(array):
            return np.zeros(self.resolution)
        alive = ((array[:, 0][:, None] <= grid[None, :])
                 & (grid[None, :] <= array[:, 1][:, None]))
        return alive.sum(axis=0).astype(float)


def vectorizer_grid(methods=METHODS, pi_sizes=(5, 10, 25),
                    pi_sigmas=(0.1, 1, 10), pl_layers=5,
                    resolutions=(25, 50, 75, 100),
                    silhouette_weights='constant'):
    """Expand the parameter grids of the requested methods.

        >>> grid = vectorizer_grid()
        >>> [v.abbreviation for v in grid].count('PI'), len(grid)
        (9, 21)
        >>> [v.label for v in vectorizer_grid(['BC'], resolutions=[25, 50])]
        ['BC(r=25)', 'BC(r=50)']

        >>> vectorizer_grid(['XY'])
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.UnknownVectorizer: unknown vectorization method: XY

    """
    grid = []
    for method in methods:
        if method == 'PI':
            grid.extend(PersistenceImage(n, sigma)
                        for n in pi_sizes for sigma in pi_sigmas)
        elif method == 'PL':
            grid.extend(PersistenceLandscape(pl_layers, r)
                        for r in resolutions)
        elif method == 'PS':
            grid.extend(Silhouette(r, silhouette_weights)
                        for r in resolutions)
        elif method == 'BC':
            grid.extend(BettiCurve(r) for r in resolutions)
        else:
            raise UnknownVectorizer('unknown vectorization method: %s'
                                    % method)
    return grid


def _strategy_dimension(strategy):
    if (len(strategy) > 1 and strategy[0] == 'H'
            and strategy[1:].isdigit()):
        return int(strategy[1:])
    if strategy in ('fused', 'concat'):
        return None
    raise UnknownDimension('unknown dimension strategy: %s' % strategy)


def check_dim_strategy(strategy, max_dimension):
    """Make sure a dimension strategy applies to the computed dimensions.

        >>> check_dim_strategy('H1', 1)
        >>> check_dim_strategy('H2', 1)
        Traceback (most recent call last):
          ...
        pytopoml.vectorize.UnknownDimension: H2 was not computed (max is H1)

    """
    k = _strategy_dimension(strategy)
    if k is not None and k > max_dimension:
        raise UnknownDimension('%s was not computed (max is H%d)'
                               % (strategy, max_dimension))


def combine_dims(diagram, strategy, vectorizer, fitted):
    """Vectorize one diagram according to a dimension strategy.

        >>> D = PersistenceDiagram([(0, 1, 0)], max_dimension=1)
        >>> r = fit_range([D])
        >>> len(combine_dims(D, 'concat', BettiCurve(25), r))
        50
        >>> combine_dims(D, 'fused', BettiCurve(3), r).tolist()
        [1.0, 1.0, 1.0]

    """
    check_dim_strategy(strategy, fitted.max_dimension)
    k = _strategy_dimension(strategy)
    if k is not None:
        single = regularize(diagram.dimension(k), fitted.global_max,
                            dims=[k])
        return vectorizer.transform(single, fitted.bounds[k])
    if strategy == 'fused':
        fused = diagram._derive(_fused_points(diagram, fitted.global_max))
        return vectorizer.transform(fused, fitted.bounds['fused'])
    return np.concatenate([
        combine_dims(diagram, 'H%d' % k, vectorizer, fitted)
        for k in range(fitted.max_dimension + 1)])


def _check_counts(diagram_sets, expected=None):
    counts = set(len(s) for s in diagram_sets)
    if expected is not None:
        counts.add(expected)
    if len(counts) > 1 or 0 in counts:
        raise FiltrationCountMismatch(
            'samples have %s filtrations'
            % ' or '.join(str(c) for c in sorted(counts)))


def combine_filtrations(diagrams, strategy, dim_strategy, vectorizer,
                        ranges):
    """Vectorize the diagrams of all filtrations of one sample.

    ``ranges`` holds one fitted range per filtration for 'multivector' and
    a single range fitted on the unions for 'collapse'.
    """
    if strategy == 'collapse':
        union = PersistenceDiagram.union(diagrams)
        return combine_dims(union, dim_strategy, vectorizer, ranges[0])
    if strategy == 'multivector':
        _check_counts([diagrams], len(ranges))
        return np.concatenate([
            combine_dims(d, dim_strategy, vectorizer, fitted)
            for d, fitted in zip(diagrams, ranges)])
    raise ValueError('unknown filtration strategy: %s' % strategy)


class DiagramVectorizer(object):
    """Fit ranges on training samples and vectorize any samples.

    A sample is the list of its diagrams, one per filtration, always in the
    same filtration order.

        >>> train = [[PersistenceDiagram([(0, 1)])],
        ...          [PersistenceDiagram([(0, 2)])]]
        >>> dv = DiagramVectorizer(BettiCurve(3), 'H0').fit(train)
        >>> dv.transform(train).tolist()
        [[1.0, 1.0, 0.0], [1.0, 1.0, 1.0]]

    """

    def __init__(self, vectorizer, dim_strategy='H1',
                 filtration_strategy='collapse'):
        if filtration_strategy not in FILTRATION_STRATEGIES:
            raise ValueError('unknown filtration strategy: %s'
                             % filtration_strategy)
        _strategy_dimension(dim_strategy)
        self.vectorizer = vectorizer
        self.dim_strategy = dim_strategy
        self.filtration_strategy = filtration_strategy
        self.ranges = None

    def __repr__(self):
        return '<DiagramVectorizer: %s %s %s>' % (
            self.vectorizer.label, self.dim_strategy,
            self.filtration_strategy)

    def fit(self, diagram_sets):
        diagram_sets = list(diagram_sets)
        if not diagram_sets:
            raise NoDiagrams('cannot fit a range on no samples')
        _check_counts(diagram_sets)
        if self.filtration_strategy == 'collapse':
            self.ranges = [fit_range([PersistenceDiagram.union(s)
                                      for s in diagram_sets])]
        else:
            self.ranges = [fit_range([s[f] for s in diagram_sets])
                           for f in range(len(diagram_sets[0]))]
        for fitted in self.ranges:
            check_dim_strategy(self.dim_strategy, fitted.max_dimension)
        return self

    def transform(self, diagram_sets):
        if self.ranges is None:
            raise ValueError('fit() must be called before transform()')
        rows = [combine_filtrations(s, self.filtration_strategy,
                                    self.dim_strategy, self.vectorizer,
                                    self.ranges)
                for s in diagram_sets]
        return np.array(rows)

    def fit_transform(self, diagram_sets):
        diagram_sets = list(diagram_sets)
        return self.fit(diagram_sets).transform(diagram_sets)


def format_number(value):
    return repr(float(value))


def write_vectors(f, ids, labels, matrix):
    """Write vectors as CSV rows ``sample_id,label,v_1,...,v_k``.

        >>> import sys
        >>> write_vectors(sys.stdout, ['a'], [1], np.array([[0.5, 2.0]]))
        sample_id,label,v_1,v_2
        a,1,0.5,2.0

    """
    writer = csv.writer(f, lineterminator='\n')
    width = matrix.shape[1] if len(matrix) else 0
    writer.writerow(['sample_id', 'label']
                    + ['v_%d' % (i + 1) for i in range(width)])
    for sample_id, label, row in zip(ids, labels, matrix):
        writer.writerow([sample_id, label]
                        + [format_number(x) for x in row])
