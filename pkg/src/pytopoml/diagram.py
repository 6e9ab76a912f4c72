"""
Persistence diagrams and the distances between them
"""

import math

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .complex import format_value


class InfiniteDeath(ValueError):
    """An operation that needs finite diagrams got an essential point."""


class DiagramTooLarge(ValueError):
    """A diagram is too large for an exact matching computation."""


MAX_MATCHING_POINTS = 500


class PersistencePoint(tuple):
    """A (birth, death) pair tagged with its homology dimension.

        >>> q = PersistencePoint(0.5, 2.0, 1)
        >>> q
        PersistencePoint(0.5, 2.0, dim=1)
        >>> q.birth, q.death, q.dim, q.persistence
        (0.5, 2.0, 1, 1.5)

    Essential classes never die.

        >>> PersistencePoint(0, float('inf')).is_essential
        True

        >>> PersistencePoint(2, 1)
        Traceback (most recent call last):
          ...
        ValueError: death 1.0 comes before birth 2.0

    """

    __slots__ = ()

    birth = property(lambda self: self[0])
    death = property(lambda self: self[1])
    dim = property(lambda self: self[2])
    persistence = property(lambda self: self[1] - self[0])
    is_essential = property(lambda self: self[1] == math.inf)

    def __new__(cls, birth, death, dim=0):
        birth = float(birth)
        death = float(death)
        if not math.isfinite(birth):
            raise ValueError('birth must be finite, got %r' % birth)
        if death < birth:
            raise ValueError('death %r comes before birth %r'
                             % (death, birth))
        if dim < 0:
            raise ValueError('negative homology dimension %r' % dim)
        return tuple.__new__(cls, (birth, death, int(dim)))

    def __repr__(self):
        return 'PersistencePoint(%r, %r, dim=%d)' % self


class PersistenceDiagram(object):
    """A multiset of persistence points.

    ``max_dimension`` is the highest homology dimension that was computed,
    so that an empty H1 can be told apart from an H1 that was never asked
    for.  ``zero_persistence[k]`` counts the birth = death pairs that
    the reduction dropped in dimension k.

        >>> D = PersistenceDiagram([(0, 1, 0), (0, float('inf'), 0),
        ...                         (0.5, 2, 1)], sample_id='s1')
        >>> len(D), D.max_dimension
        (3, 1)
        >>> D.dimension(1).pairs()
        [(0.5, 2.0)]
        >>> D.dimension(1).sample_id
        's1'

    """

    def __init__(self, points=(), sample_id=None, filtration=None,
                 max_dimension=None, zero_persistence=None):
        self.points = [p if isinstance(p, PersistencePoint)
                       else PersistencePoint(*p) for p in points]
        if max_dimension is None:
            max_dimension = max([p.dim for p in self.points], default=0)
        self.max_dimension = max_dimension
        self.sample_id = sample_id
        self.filtration = filtration
        self.zero_persistence = dict(zero_persistence or {})

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return sorted(self.points) == sorted(other.points)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    def __repr__(self):
        return '<PersistenceDiagram: %d points, dimensions 0-%d>' % (
            len(self), self.max_dimension)

    def _derive(self, points, max_dimension=None):
        if max_dimension is None:
            max_dimension = self.max_dimension
        return PersistenceDiagram(points, sample_id=self.sample_id,
                                  filtration=self.filtration,
                                  max_dimension=max_dimension,
                                  zero_persistence=self.zero_persistence)

    def dimension(self, k):
        """Return the sub-diagram of points in homology dimension k."""
        return self._derive([p for p in self.points if p.dim == k])

    def dimensions(self):
        return list(range(self.max_dimension + 1))

    def pairs(self):
        """Return the (birth, death) pairs in sorted order."""
        return sorted((p.birth, p.death) for p in self.points)

    def as_array(self):
        """Return the points as an n x 2 array of births and deaths."""
        if not self.points:
            return np.zeros((0, 2))
        return np.array([(p.birth, p.death) for p in self.points])

    def finite_values(self):
        """Return every finite birth and death value."""
        values = [p.birth for p in self.points]
        values.extend(p.death for p in self.points if not p.is_essential)
        return values

    def union(cls, diagrams, **metadata):
        """Merge several diagrams into one multiset.

            >>> D = PersistenceDiagram.union([PersistenceDiagram([(0, 1)]),
            ...                               PersistenceDiagram([(0, 2)])])
            >>> D.pairs()
            [(0.0, 1.0), (0.0, 2.0)]

        """
        points = []
        max_dimension = 0
        for d in diagrams:
            points.extend(d.points)
            max_dimension = max(max_dimension, d.max_dimension)
        return cls(points, max_dimension=max_dimension, **metadata)

    union = classmethod(union)


def regularize(d, global_max, dims=None):
    """Make a diagram finite and give empty dimensions a placeholder.

    Essential points die at ``global_max`` (or at their birth if that comes
    later), and every dimension in ``dims`` (all computed dimensions by
    default) that has no points gets the single point (0, 0).

        >>> D = PersistenceDiagram([(0, float('inf'), 0)], max_dimension=1)
        >>> regularize(D, 7).points
        [PersistencePoint(0.0, 7.0, dim=0), PersistencePoint(0.0, 0.0, dim=1)]
        >>> regularize(D, 7, dims=()).pairs()
        [(0.0, 7.0)]

    """
    if dims is None:
        dims = d.dimensions()
    points = [PersistencePoint(p.birth, max(global_max, p.birth), p.dim)
              if p.is_essential else p for p in d.points]
    present = set(p.dim for p in points)
    points.extend(PersistencePoint(0.0, 0.0, k)
                  for k in dims if k not in present)
    return d._derive(points)


def _as_array(d):
    if isinstance(d, PersistenceDiagram):
        array = d.as_array()
    else:
        array = np.array([tuple(q)[:2] for q in d], dtype=float)
        array = array.reshape(-1, 2)
    if not np.isfinite(array).all():
        raise InfiniteDeath('regularize essential points first')
    return array


def to_midlife_coords(d):
    """Map (birth, death) to (midlife, half-persistence) coordinates.

        >>> to_midlife_coords([(0, 2), (3, 3), (1, 4)])
        [(1.0, 1.0), (3.0, 0.0), (2.5, 1.5)]

        >>> to_midlife_coords([(0, float('inf'))])
        Traceback (most recent call last):
          ...
        pytopoml.diagram.InfiniteDeath: regularize essential points first

    """
    array = _as_array(d)
    mid = (array[:, 0] + array[:, 1]) / 2
    half = (array[:, 1] - array[:, 0]) / 2
    return list(zip(mid.tolist(), half.tolist()))


def _matching_costs(a, b, max_points):
    """Return the augmented cost matrix between two finite diagrams.

    Rows are the points of ``a`` followed by diagonal slots for the points
    of ``b``; columns are the points of ``b`` followed by diagonal slots for
    the points of ``a``.  Costs are L-infinity distances.
    """
    n, m = len(a), len(b)
    if max(n, m) > max_points:
        raise DiagramTooLarge('%d and %d points exceed the limit of %d for'
                              ' exact matching' % (n, m, max_points))
    costs = np.zeros((n + m, n + m))
    if n and m:
        costs[:n, :m] = np.abs(a[:, None, :] - b[None, :, :]).max(axis=2)
    costs[:n, m:] = ((a[:, 1] - a[:, 0]) / 2)[:, None]
    costs[n:, :m] = ((b[:, 1] - b[:, 0]) / 2)[None, :]
    return costs


def bottleneck_distance(d1, d2, max_points=MAX_MATCHING_POINTS):
    """Compute the bottleneck distance between two finite diagrams.

    The smallest threshold that admits a perfect matching of the augmented
    bipartite graph is found by binary search over the candidate costs.

        >>> bottleneck_distance([(0, 2)], [])
        1.0
        >>> bottleneck_distance([(0, 2)], [(0, 2.5)])
        0.5
        >>> bottleneck_distance([], [])
        0.0

    """
    a, b = _as_array(d1), _as_array(d2)
    if len(a) + len(b) == 0:
        return 0.0
    costs = _matching_costs(a, b, max_points)
    candidates = np.unique(costs)
    size = len(costs)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        graph = csr_matrix(costs <= candidates[mid])
        matching = maximum_bipartite_matching(graph, perm_type='column')
        if (matching >= 0).sum() == size:
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def wasserstein_distance(d1, d2, p=1.0, max_points=MAX_MATCHING_POINTS):
    """Compute the p-Wasserstein distance between two finite diagrams.

        >>> wasserstein_distance([(0, 2)], [], p=1)
        1.0
        >>> wasserstein_distance([(0, 2), (0, 2)], [], p=1)
        2.0
        >>> wasserstein_distance([(0, 1), (2, 5)], [(0, 1), (2, 5)], p=2)
        0.0

    """
    if p == math.inf:
        return bottleneck_distance(d1, d2, max_points=max_points)
    if p < 1:
        raise ValueError('Wasserstein order must be >= 1, got %r' % p)
    a, b = _as_array(d1), _as_array(d2)
    if len(a) + len(b) == 0:
        return 0.0
    costs = _matching_costs(a, b, max_points) ** p
    rows, cols = linear_sum_assignment(costs)
    return float(costs[rows, cols].sum() ** (1.0 / p))


def write_diagram(d, f):
    """Write a diagram as ``dim birth death`` lines.

        >>> import sys
        >>> write_diagram(PersistenceDiagram([(0, float('inf'), 0),
        ...                                   (0.25, 0.5, 1)]), sys.stdout)
        # dimensions 0-1
        0 0.0 inf
        1 0.25 0.5

    """
    f.write('# dimensions 0-%d\n' % d.max_dimension)
    for p in sorted(d.points, key=lambda p: (p.dim, p.birth, p.death)):
        f.write('%d %s %s\n' % (p.dim, format_value(p.birth),
                                format_value(p.death)))


def _parse_lines(lines, start_lineno=1):
    points = []
    max_dimension = None
    for lineno, line in enumerate(lines, start_lineno):
        line = line.strip()
        if line.startswith('# dimensions 0-'):
            max_dimension = int(line[len('# dimensions 0-'):])
            continue
        if not line or line.startswith('#'):
            continue
        try:
            dim, birth, death = line.split()
            points.append(PersistencePoint(float(birth), float(death),
                                           int(dim)))
        except ValueError:
            raise ValueError('line %d: bad diagram point %r'
                             % (lineno, line))
    return points, max_dimension


def read_diagram(f, **metadata):
    """Read a diagram written by write_diagram.

        >>> import io
        >>> D = read_diagram(io.StringIO('# dimensions 0-2\\n0 0.0 inf\\n'))
        >>> D.points, D.max_dimension
        ([PersistencePoint(0.0, inf, dim=0)], 2)

    """
    points, max_dimension = _parse_lines(f)
    return PersistenceDiagram(points, max_dimension=max_dimension,
                              **metadata)


def write_diagram_set(diagrams, f):
    """Write diagrams of several filtrations as ``filtration <name>`` blocks.
    """
    for d in diagrams:
        f.write('filtration %s\n' % d.filtration)
        write_diagram(d, f)


def read_diagram_set(f, sample_id=None):
    """Read diagrams written by write_diagram_set, in file order.

        >>> import io
        >>> text = ('filtration alpha\\n# dimensions 0-1\\n0 0.0 inf\\n'
        ...         'filtration rips\\n# dimensions 0-1\\n1 1.0 2.0\\n')
        >>> [(d.filtration, d.pairs()) for d in
        ...  read_diagram_set(io.StringIO(text))]
        [('alpha', [(0.0, inf)]), ('rips', [(1.0, 2.0)])]

    """
    diagrams = []
    name = None
    block = []
    start = 1

    def flush():
        if name is not None:
            points, max_dimension = _parse_lines(block, start)
            diagrams.append(PersistenceDiagram(
                points, sample_id=sample_id, filtration=name,
                max_dimension=max_dimension))

    for lineno, line in enumerate(f, 1):
        if line.startswith('filtration '):
            flush()
            name = line[len('filtration '):].strip()
            block = []
            start = lineno + 1
        elif name is None and line.strip() and not line.startswith('#'):
            raise ValueError('line %d: point outside a filtration block'
                             % lineno)
        else:
            block.append(line)
    flush()
    return diagrams
