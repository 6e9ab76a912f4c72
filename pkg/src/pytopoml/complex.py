"""
Filtered simplicial complexes over Z/2
"""

import itertools


class InvalidSimplex(ValueError):
    """A simplex was given a bad vertex list."""


class InvalidComplex(ValueError):
    """A filtered complex violates closure or monotonicity."""


class DuplicateSimplex(InvalidComplex):
    """A simplex was added twice."""


class MonotonicityViolation(InvalidComplex):
    """A face enters the filtration after one of its cofaces."""


class Simplex(tuple):
    """An abstract simplex: a strictly increasing tuple of vertex ids.

        >>> s = Simplex(2, 0, 1)
        >>> s
        Simplex(0, 1, 2)
        >>> s.dimension
        2

    Simplices are immutable and hashable, so they can be used as dict keys.

        >>> {Simplex(1, 0): 'edge'}[Simplex(0, 1)]
        'edge'

    Vertices must be distinct non-negative integers.

        >>> Simplex(1, 1)
        Traceback (most recent call last):
          ...
        pytopoml.complex.InvalidSimplex: repeated vertex in (1, 1)

        >>> Simplex()
        Traceback (most recent call last):
          ...
        pytopoml.complex.InvalidSimplex: a simplex needs at least one vertex

    """

    __slots__ = ()

    def __new__(cls, *vertices):
        if not vertices:
            raise InvalidSimplex('a simplex needs at least one vertex')
        ordered = sorted(int(v) for v in vertices)
        if ordered[0] < 0:
            raise InvalidSimplex('negative vertex id in %r' % (vertices, ))
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise InvalidSimplex('repeated vertex in %r' % (vertices, ))
        return tuple.__new__(cls, ordered)

    def __repr__(self):
        return 'Simplex(%s)' % ', '.join(map(str, self))

    def __str__(self):
        return '{%s}' % ','.join(map(str, self))

    dimension = property(lambda self: len(self) - 1)

    def boundary(self):
        """Return the codimension-1 faces, dropping one vertex at a time.

        Coefficients are in Z/2, so there are no signs.

            >>> Simplex(0, 1, 2).boundary()
            [Simplex(1, 2), Simplex(0, 2), Simplex(0, 1)]
            >>> Simplex(5).boundary()
            []

        """
        if len(self) == 1:
            return []
        return [tuple.__new__(Simplex, self[:i] + self[i+1:])
                for i in range(len(self))]

    def faces(self):
        """Return all proper non-empty faces, lower dimensions first.

            >>> Simplex(0, 1, 2).faces()      # doctest: +NORMALIZE_WHITESPACE
            [Simplex(0), Simplex(1), Simplex(2),
             Simplex(0, 1), Simplex(0, 2), Simplex(1, 2)]

        """
        return [tuple.__new__(Simplex, combo)
                for k in range(1, len(self))
                for combo in itertools.combinations(self, k)]


def boundary(s):
    """Return the boundary faces of a simplex (see Simplex.boundary).

        >>> boundary(Simplex(3, 7))
        [Simplex(7), Simplex(3)]

    """
    return s.boundary()


class FilteredComplex(object):
    """A finite simplicial complex with a filtration value per simplex.

        >>> K = FilteredComplex()
        >>> K.add(Simplex(0), 0.0)
        >>> K.add(Simplex(1), 0.5)
        >>> K.add(Simplex(0, 1), 1.0)
        >>> len(K), K.vertex_count, K.max_dimension
        (3, 2, 1)
        >>> K.value(Simplex(0, 1))
        1.0

    Every face of a simplex must already be there, with a value that is not
    larger than the simplex's own value.

        >>> K.add(Simplex(1, 2), 2.0)
        Traceback (most recent call last):
          ...
        pytopoml.complex.InvalidComplex: face {2} of {1,2} is missing

        >>> K.add(Simplex(1, 2), 2.0, complete_faces=True)
        >>> K.value(Simplex(2))
        2.0

    """

    def __init__(self):
        self._values = {}
        self.vertex_count = 0
        self.max_dimension = -1

    def __len__(self):
        return len(self._values)

    def __contains__(self, simplex):
        return simplex in self._values

    def __iter__(self):
        return iter(self._values.items())

    def __repr__(self):
        return '<FilteredComplex: %d simplices, dimension %d>' % (
            len(self), self.max_dimension)

    def value(self, simplex):
        """Return the filtration value of a simplex."""
        return self._values[simplex]

    def simplices(self, dimension=None):
        """Return the simplices (optionally of a given dimension)."""
        if dimension is None:
            return list(self._values)
        return [s for s in self._values if len(s) == dimension + 1]

    def add(self, simplex, value, complete_faces=False):
        """Add a simplex entering the filtration at ``value``.

        With ``complete_faces``, missing faces are inserted at ``value``
        first.  Faces that are present must not have a larger value.
        """
        if simplex in self._values:
            raise DuplicateSimplex('%s is already in the complex' % simplex)
        value = float(value)
        for face in simplex.boundary():
            face_value = self._values.get(face)
            if face_value is None:
                if not complete_faces:
                    raise InvalidComplex('face %s of %s is missing'
                                         % (face, simplex))
                self.add(face, value, complete_faces=True)
            elif face_value > value:
                raise MonotonicityViolation(
                    'face %s enters after %s' % (face, simplex))
        self._store(simplex, value)

    def _store(self, simplex, value):
        self._values[simplex] = value
        if simplex[-1] >= self.vertex_count:
            self.vertex_count = simplex[-1] + 1
        if len(simplex) - 1 > self.max_dimension:
            self.max_dimension = len(simplex) - 1

    def validate(self):
        """Check closure, monotonicity and vertex ids.

        Raises InvalidComplex for the first problem found.

            >>> K = FilteredComplex.from_simplices(
            ...     [(Simplex(0), 1.0), (Simplex(1), 0.0),
            ...      (Simplex(0, 1), 0.5)], validate=False)
            >>> K.validate()
            Traceback (most recent call last):
              ...
            pytopoml.complex.MonotonicityViolation: face {0} enters after {0,1}

        """
        for simplex, value in self._values.items():
            if not isinstance(simplex, Simplex):
                raise InvalidComplex('%r is not a Simplex' % (simplex, ))
            if value != value:
                raise InvalidComplex('%s has a NaN value' % simplex)
            for face in simplex.boundary():
                face_value = self._values.get(face)
                if face_value is None:
                    raise InvalidComplex('face %s of %s is missing'
                                         % (face, simplex))
                if face_value > value:
                    raise MonotonicityViolation(
                        'face %s enters after %s' % (face, simplex))

    def sorted_simplices(self):
        """Return the simplices in filtration order.

        The order is by value, then dimension, then lexicographically by
        vertices, so every face precedes its cofaces.
        """
        return sorted(self._values,
                      key=lambda s: (self._values[s], len(s), s))

    def from_simplices(cls, pairs, validate=True):
        """Build a complex from (simplex, value) pairs in one go."""
        complex = cls()
        for simplex, value in pairs:
            if simplex in complex._values:
                raise DuplicateSimplex('%s is already in the complex'
                                       % simplex)
            complex._store(simplex, float(value))
        if validate:
            complex.validate()
        return complex

    from_simplices = classmethod(from_simplices)


def add_simplex(complex, simplex, value, complete_faces=False):
    """Add a simplex to a complex and return the complex.

        >>> K = add_simplex(FilteredComplex(), Simplex(0), 0.0)
        >>> add_simplex(K, Simplex(0, 1), 1.0, complete_faces=True)
        <FilteredComplex: 3 simplices, dimension 1>

        >>> K = FilteredComplex()
        >>> K = add_simplex(K, Simplex(0), 0.0)
        >>> K = add_simplex(K, Simplex(1), 0.9)
        >>> add_simplex(K, Simplex(0, 1), 0.5)
        Traceback (most recent call last):
          ...
        pytopoml.complex.MonotonicityViolation: face {1} enters after {0,1}

    """
    complex.add(simplex, value, complete_faces=complete_faces)
    return complex


def sort_filtration(complex):
    """Return the simplices of a complex in reduction order.

        >>> K = FilteredComplex.from_simplices([
        ...     (Simplex(0, 2), 1.0), (Simplex(0, 1), 1.0),
        ...     (Simplex(2), 1.0), (Simplex(0), 0.0), (Simplex(1), 0.0)])
        >>> sort_filtration(K)
        [Simplex(0), Simplex(1), Simplex(2), Simplex(0, 1), Simplex(0, 2)]

    """
    return complex.sorted_simplices()


def format_value(value):
    """Format a filtration value so that it reads back exactly.

        >>> format_value(0.1), format_value(float('inf')), format_value(2.0)
        ('0.1', 'inf', '2.0')

    """
    return repr(float(value))


def write_complex(complex, f):
    """Write a complex as text, one ``v1 v2 ... vk value`` line per simplex.

    Simplices are written in filtration order.
    """
    for simplex in complex.sorted_simplices():
        f.write('%s %s\n' % (' '.join(map(str, simplex)),
                             format_value(complex.value(simplex))))


def read_complex(f, validate=True):
    """Read a complex written by write_complex.

        >>> import io
        >>> K = read_complex(io.StringIO('0 0.0\\n1 0.0\\n0 1 0.5\\n'))
        >>> K.value(Simplex(0, 1))
        0.5

    Blank lines and lines starting with # are ignored.
    """
    pairs = []
    for lineno, line in enumerate(f, 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        fields = line.split()
        try:
            vertices = [int(v) for v in fields[:-1]]
            value = float(fields[-1])
            simplex = Simplex(*vertices)
        except (ValueError, IndexError):
            raise InvalidComplex('line %d: cannot parse %r' % (lineno, line))
        pairs.append((simplex, value))
    return FilteredComplex.from_simplices(pairs, validate=validate)
