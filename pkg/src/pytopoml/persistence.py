"""
Persistent homology by boundary matrix reduction over Z/2
"""

import math

from .complex import InvalidComplex
from .diagram import PersistenceDiagram, PersistencePoint


class ReductionState(object):
    """The boundary matrix of a filtration and its reduced form.

    Columns are sets of row indices; adding one column to another is a
    symmetric difference.  ``pivots`` maps the lowest row of every reduced
    non-zero column to that column.

    ``column_additions`` counts the column operations that were needed and
    ``cleared`` the columns that clearing skipped.
    """

    column_additions = 0                # Columns added during reduction
    cleared = 0                         # Columns zeroed by clearing

    def __init__(self, simplices, values):
        self.simplices = simplices
        self.values = values
        self.dims = [len(s) - 1 for s in simplices]
        index = {s: i for i, s in enumerate(simplices)}
        self.columns = []
        for s in simplices:
            try:
                self.columns.append(set(index[f] for f in s.boundary()))
            except KeyError as e:
                raise InvalidComplex('face %s of %s is missing'
                                     % (e.args[0], s))
        self.pivots = {}
        self.pairs = []
        self.essential = []

    def reduce_column(self, j):
        """Reduce column j against the columns to its left.

        Returns the lowest row index of the result, or None for a zero
        column.
        """
        column = self.columns[j]
        while column:
            low = max(column)
            other = self.pivots.get(low)
            if other is None:
                self.pivots[low] = j
                return low
            column ^= self.columns[other]
            self.column_additions += 1
        return None

    def reduce(self):
        """Reduce all columns, highest dimension first, with clearing."""
        top = max(self.dims, default=-1)
        cleared = set()
        for k in range(top, 0, -1):
            for j, dim in enumerate(self.dims):
                if dim != k:
                    continue
                if j in cleared:
                    self.columns[j] = set()
                    self.cleared += 1
                    continue
                low = self.reduce_column(j)
                if low is not None:
                    self.pairs.append((low, j))
                    cleared.add(low)
        self.pairs.sort()
        paired = set()
        for birth, death in self.pairs:
            paired.add(birth)
            paired.add(death)
        self.essential = [i for i in range(len(self.simplices))
                          if i not in paired]
        return self


def reduce_boundary(complex, max_hom_dim):
    """Sort a complex and reduce its boundary matrix.

    Only simplices of dimension up to ``max_hom_dim + 1`` take part.
    The complex is validated first, so a broken filtration raises
    InvalidComplex.
    """
    if max_hom_dim < 0:
        raise ValueError('max_hom_dim must be >= 0, got %r' % max_hom_dim)
    complex.validate()
    simplices = [s for s in complex.sorted_simplices()
                 if len(s) <= max_hom_dim + 2]
    values = [complex.value(s) for s in simplices]
    return ReductionState(simplices, values).reduce()


def compute_persistence(complex, max_hom_dim, sample_id=None,
                        filtration=None):
    """Compute the persistence diagram of a filtered complex.

    Pairs with equal birth and death values are left out of the diagram
    and counted in ``zero_persistence``.

        >>> from pytopoml.complex import FilteredComplex, Simplex
        >>> K = FilteredComplex()
        >>> for s in [(0, ), (1, ), (2, ), (0, 1), (1, 2), (0, 2)]:
        ...     K.add(Simplex(*s), 0.0)
        >>> D = compute_persistence(K, 1)
        >>> D.points
        [PersistencePoint(0.0, inf, dim=0), PersistencePoint(0.0, inf, dim=1)]
        >>> D.zero_persistence
        {0: 2, 1: 0}

    """
    state = reduce_boundary(complex, max_hom_dim)
    values = state.values
    dims = state.dims
    zero_persistence = dict.fromkeys(range(max_hom_dim + 1), 0)
    points = []
    for birth, death in state.pairs:
        k = dims[birth]
        if k > max_hom_dim:
            continue
        if values[birth] == values[death]:
            zero_persistence[k] += 1
        else:
            points.append(PersistencePoint(values[birth], values[death], k))
    for birth in state.essential:
        k = dims[birth]
        if k <= max_hom_dim:
            points.append(PersistencePoint(values[birth], math.inf, k))
    points.sort(key=lambda p: (p.dim, p.birth, p.death))
    return PersistenceDiagram(points, sample_id=sample_id,
                              filtration=filtration,
                              max_dimension=max_hom_dim,
                              zero_persistence=zero_persistence)


def betti_at(diagram, t, inclusive=False):
    """Count the points alive at scale t in every computed dimension.

    A point (b, d) is alive when b <= t < d, or b <= t <= d with
    ``inclusive``.

        >>> D = PersistenceDiagram([(0, float('inf'), 0), (1, 2 ** 0.5, 1)])
        >>> betti_at(D, 5), betti_at(D, 1.2), betti_at(D, 1.5)
        ([1, 0], [1, 1], [1, 0])
        >>> betti_at(PersistenceDiagram(max_dimension=2), 0)
        [0, 0, 0]

    """
    if not math.isfinite(t):
        raise ValueError('t must be finite, got %r' % t)
    counts = [0] * (diagram.max_dimension + 1)
    for p in diagram.points:
        if p.birth <= t and (t < p.death or inclusive and t == p.death):
            counts[p.dim] += 1
    return counts
