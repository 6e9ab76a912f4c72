"""
Datasets: generated orbits, IDX images and weighted graph lists
"""

import csv
import gzip
import logging
import os
import struct

import numpy as np

from .filtrations import (
    DuplicateEdge,
    GreyImage,
    PointCloud,
    VertexOutOfRange,
    WeightedGraph,
)


log = logging.getLogger(__name__)


class BadMagic(ValueError):
    """An IDX file starts with the wrong magic number."""


class CountMismatch(ValueError):
    """IDX image and label files disagree on the number of items."""


class TruncatedFile(ValueError):
    """An IDX file ends before all of its items."""


class ParseError(ValueError):
    """A malformed line in a text file."""

    def __init__(self, lineno, message):
        ValueError.__init__(self, 'line %d: %s' % (lineno, message))
        self.lineno = lineno


class EmptyDataset(ValueError):
    """A dataset has no samples."""


class TooFew(ValueError):
    """A subsample asks for more samples than there are."""


IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

DEFAULT_R_VALUES = (2.0, 3.5, 4.0, 4.1, 4.3)

KINDS = {PointCloud: 'cloud', GreyImage: 'image', WeightedGraph: 'graph'}


class Sample(object):
    """A labelled point cloud, image or graph."""

    def __init__(self, id, label, payload):
        self.id = id
        self.label = int(label)
        self.payload = payload

    kind = property(lambda self: KINDS[type(self.payload)])

    def __repr__(self):
        return '<Sample %s: label %d, %s>' % (self.id, self.label, self.kind)


class Dataset(object):
    """A non-empty collection of samples of one kind.

        >>> ds = Dataset([Sample('a', 0, PointCloud([(0, 0)])),
        ...               Sample('b', 1, PointCloud([(1, 1)]))], ['x', 'y'])
        >>> ds
        <Dataset: 2 cloud samples, 2 classes>
        >>> ds.labels(), ds.ids()
        ([0, 1], ['a', 'b'])

        >>> Dataset([])
        Traceback (most recent call last):
          ...
        pytopoml.data.EmptyDataset: a dataset needs at least one sample

    """

    def __init__(self, samples, class_names=None, provenance=None):
        self.samples = list(samples)
        if not self.samples:
            raise EmptyDataset('a dataset needs at least one sample')
        kinds = set(s.kind for s in self.samples)
        if len(kinds) > 1:
            raise ValueError('mixed sample kinds: %s'
                             % ', '.join(sorted(kinds)))
        if class_names is None:
            top = max(s.label for s in self.samples)
            class_names = [str(i) for i in range(top + 1)]
        self.class_names = list(class_names)
        for s in self.samples:
            if not 0 <= s.label < len(self.class_names):
                raise ValueError('sample %s has label %d, expected 0..%d'
                                 % (s.id, s.label, len(self.class_names) - 1))
        ids = set()
        for s in self.samples:
            if s.id in ids:
                raise ValueError('duplicate sample id %s' % s.id)
            ids.add(s.id)
        self.provenance = dict(provenance or {})

    kind = property(lambda self: self.samples[0].kind)

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __repr__(self):
        return '<Dataset: %d %s samples, %d classes>' % (
            len(self), self.kind, len(self.class_names))

    def labels(self):
        return [s.label for s in self.samples]

    def ids(self):
        return [s.id for s in self.samples]


def linked_twisted_map(r, start, n):
    """Iterate the linked twisted map n times from a starting point.

    The orbit holds the iterates 1..n; the starting point is left out.

        >>> linked_twisted_map(2, (0.5, 0.5), 1).points.tolist()
        [[0.0, 0.5]]
        >>> linked_twisted_map(4.3, (0, 0), 3).points.tolist()
        [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]

    """
    if r <= 0:
        raise ValueError('r must be positive, got %r' % r)
    x, y = float(start[0]), float(start[1])
    if not (0 <= x < 1 and 0 <= y < 1):
        raise ValueError('start %r is outside [0, 1)^2' % (start, ))
    points = np.empty((n, 2))
    for i in range(n):
        x = (x + r * y * (1 - y)) % 1.0
        y = (y + r * x * (1 - x)) % 1.0
        points[i] = x, y
    return PointCloud(points)


def generate_dynamic_dataset(r_values=DEFAULT_R_VALUES, orbits_per_class=50,
                             points_per_orbit=1000, seed=0):
    """Generate orbits of the linked twisted map, one class per r.

    Starting points are drawn uniformly from [0, 1)^2, in sample order,
    by a PCG64 generator seeded with ``seed``.

        >>> ds = generate_dynamic_dataset(orbits_per_class=1,
        ...                               points_per_orbit=10)
        >>> len(ds), ds.class_names
        (5, ['r=2', 'r=3.5', 'r=4', 'r=4.1', 'r=4.3'])

    """
    if orbits_per_class < 1 or points_per_orbit < 1:
        raise ValueError('orbits_per_class and points_per_orbit must be'
                         ' positive')
    rng = np.random.default_rng(seed)
    samples = []
    for label, r in enumerate(r_values):
        for i in range(orbits_per_class):
            start = rng.random(2)
            samples.append(Sample('orbit-%04d' % len(samples), label,
                                  linked_twisted_map(r, start,
                                                     points_per_orbit)))
    return Dataset(samples, ['r=%g' % r for r in r_values],
                   provenance={'generator': 'linked_twisted_map',
                               'r_values': list(r_values),
                               'orbits_per_class': orbits_per_class,
                               'points_per_orbit': points_per_orbit,
                               'seed': seed})


def _open(path, mode='rb'):
    if str(path).endswith('.gz'):
        return gzip.open(path, mode)
    return open(path, mode)


def _read_idx_header(f, path, magic, extra):
    header = f.read(4 * (2 + extra))
    if len(header) < 8:
        raise TruncatedFile('%s: header is truncated' % path)
    found = struct.unpack('>I', header[:4])[0]
    if found != magic:
        raise BadMagic('%s: magic number 0x%08x, expected 0x%08x'
                       % (path, found, magic))
    if len(header) < 4 * (2 + extra):
        raise TruncatedFile('%s: header is truncated' % path)
    return struct.unpack('>%dI' % (1 + extra), header[4:])


def load_idx(images_path, labels_path):
    """Load greyscale images and their labels from a pair of IDX files.

    Files ending in .gz are decompressed on the fly.  Pixels keep their
    raw values in [0, 255].
    """
    with _open(images_path) as f:
        count, rows, cols = _read_idx_header(f, images_path,
                                             IDX_IMAGES_MAGIC, 2)
        size = count * rows * cols
        pixels = np.frombuffer(f.read(size), dtype=np.uint8)
    if len(pixels) < size:
        raise TruncatedFile('%s: expected %d pixels, got %d'
                            % (images_path, size, len(pixels)))
    with _open(labels_path) as f:
        label_count, = _read_idx_header(f, labels_path, IDX_LABELS_MAGIC, 0)
        labels = np.frombuffer(f.read(label_count), dtype=np.uint8)
    if len(labels) < label_count:
        raise TruncatedFile('%s: expected %d labels, got %d'
                            % (labels_path, label_count, len(labels)))
    if label_count != count:
        raise CountMismatch('%d images but %d labels' % (count, label_count))
    pixels = pixels.reshape(count, rows, cols).astype(float)
    samples = [Sample('image-%05d' % i, labels[i], GreyImage(pixels[i]))
               for i in range(count)]
    log.info('loaded %d %dx%d images from %s', count, cols, rows,
             images_path)
    return Dataset(samples, provenance={'images': str(images_path),
                                        'labels': str(labels_path)})


def write_idx(images, labels, images_path, labels_path):
    """Write images (n x rows x cols, values 0..255) and labels as IDX."""
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    count, rows, cols = images.shape
    with _open(images_path, 'wb') as f:
        f.write(struct.pack('>4I', IDX_IMAGES_MAGIC, count, rows, cols))
        f.write(images.tobytes())
    with _open(labels_path, 'wb') as f:
        f.write(struct.pack('>2I', IDX_LABELS_MAGIC, len(labels)))
        f.write(labels.tobytes())


def _parse_int(word, lineno, what):
    try:
        return int(word)
    except ValueError:
        raise ParseError(lineno, 'bad %s %r' % (what, word))


def read_graph_edge_list(f, source='<input>'):
    """Parse graph blocks from an open text file.

    Each block starts with ``graph <id> <label> <vertex_count>`` and lists
    its edges as ``u v w`` lines.

        >>> import io
        >>> ds = read_graph_edge_list(io.StringIO(
        ...     'graph g1 0 3\\n0 1 1.0\\n1 2 0.5\\n'))
        >>> ds.samples[0].payload.edges
        [(0, 1, 1.0), (1, 2, 0.5)]

        >>> read_graph_edge_list(io.StringIO('graph g1 0 2\\n0 5 1.0\\n'))
        Traceback (most recent call last):
          ...
        pytopoml.filtrations.VertexOutOfRange: line 2: no vertex 5 in 2 vertices

    """
    samples = []
    header = None
    edges = []
    seen = set()

    def flush():
        if header is not None:
            graph_id, label, vertex_count = header
            samples.append(Sample(graph_id, label,
                                  WeightedGraph(vertex_count, edges)))

    for lineno, line in enumerate(f, 1):
        words = line.split()
        if not words or words[0].startswith('#'):
            continue
        if words[0] == 'graph':
            if len(words) != 4:
                raise ParseError(lineno, 'expected "graph <id> <label>'
                                 ' <vertex_count>"')
            flush()
            header = (words[1], _parse_int(words[2], lineno, 'label'),
                      _parse_int(words[3], lineno, 'vertex count'))
            edges = []
            seen = set()
            continue
        if header is None:
            raise ParseError(lineno, 'edge before the first graph header')
        if len(words) != 3:
            raise ParseError(lineno, 'expected "u v w"')
        u = _parse_int(words[0], lineno, 'vertex')
        v = _parse_int(words[1], lineno, 'vertex')
        try:
            w = float(words[2])
        except ValueError:
            raise ParseError(lineno, 'bad weight %r' % words[2])
        for vertex in (u, v):
            if not 0 <= vertex < header[2]:
                raise VertexOutOfRange('line %d: no vertex %d in %d vertices'
                                       % (lineno, vertex, header[2]))
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge('line %d: duplicate edge (%d, %d)'
                                % (lineno, u, v))
        seen.add(key)
        edges.append((u, v, w))
    flush()
    if not samples:
        raise EmptyDataset('%s holds no graphs' % source)
    return Dataset(samples, provenance={'graphs': source})


def load_graph_edge_list(path):
    """Load a dataset of weighted graphs from an edge-list file."""
    with open(path) as f:
        return read_graph_edge_list(f, source=str(path))


def write_graph_edge_list(samples, f):
    for s in samples:
        g = s.payload
        f.write('graph %s %d %d\n' % (s.id, s.label, g.vertex_count))
        for u, v, w in g.edges:
            f.write('%d %d %r\n' % (u, v, w))


def subsample(dataset, total=None, per_class=None, seed=0):
    """Draw a seeded uniform subsample, optionally class-balanced.

    Samples keep their original order.  A balanced subsample draws from
    every label that occurs in the dataset.

        >>> ds = generate_dynamic_dataset(orbits_per_class=3,
        ...                               points_per_orbit=5)
        >>> small = subsample(ds, per_class=1)
        >>> small.labels()
        [0, 1, 2, 3, 4]
        >>> subsample(ds, total=16)
        Traceback (most recent call last):
          ...
        pytopoml.data.TooFew: asked for 16 samples out of 15

    """
    if (total is None) == (per_class is None):
        raise ValueError('give exactly one of total and per_class')
    rng = np.random.default_rng(seed)
    if per_class is not None:
        chosen = []
        labels = np.array(dataset.labels())
        for label in sorted(set(labels.tolist())):
            indices = np.flatnonzero(labels == label)
            if per_class > len(indices):
                raise TooFew('asked for %d samples of class %s out of %d'
                             % (per_class, dataset.class_names[label],
                                len(indices)))
            chosen.extend(rng.choice(indices, per_class, replace=False))
    else:
        if total > len(dataset):
            raise TooFew('asked for %d samples out of %d'
                         % (total, len(dataset)))
        chosen = rng.choice(len(dataset), total, replace=False)
    samples = [dataset.samples[i] for i in sorted(chosen)]
    provenance = dict(dataset.provenance, subsample_seed=seed,
                      subsample_total=total, subsample_per_class=per_class)
    return Dataset(samples, dataset.class_names, provenance)


def _write_matrix(path, matrix):
    with open(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        for row in matrix.tolist():
            writer.writerow([repr(float(x)) for x in row])


def _read_matrix(path):
    with open(path) as f:
        rows = [[float(x) for x in row] for row in csv.reader(f) if row]
    return np.array(rows)


def write_dataset(dataset, directory):
    """Save a dataset as index.csv, classes.txt and one file per sample."""
    samples_dir = os.path.join(directory, 'samples')
    os.makedirs(samples_dir, exist_ok=True)
    with open(os.path.join(directory, 'classes.txt'), 'w') as f:
        for name in dataset.class_names:
            f.write('%s\n' % name)
    with open(os.path.join(directory, 'index.csv'), 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['sample_id', 'label', 'kind'])
        for s in dataset:
            writer.writerow([s.id, s.label, s.kind])
    for s in dataset:
        if s.kind == 'cloud':
            _write_matrix(os.path.join(samples_dir, s.id + '.csv'),
                          s.payload.points)
        elif s.kind == 'image':
            _write_matrix(os.path.join(samples_dir, s.id + '.csv'),
                          s.payload.pixels)
        else:
            with open(os.path.join(samples_dir, s.id + '.txt'), 'w') as f:
                write_graph_edge_list([s], f)


def _read_classes(directory):
    with open(os.path.join(directory, 'classes.txt')) as f:
        return [line.rstrip('\n') for line in f if line.strip()]


def _read_index_rows(directory):
    with open(os.path.join(directory, 'index.csv')) as f:
        reader = csv.reader(f)
        next(reader, None)
        for lineno, row in enumerate(reader, 2):
            if len(row) != 3:
                raise ParseError(lineno, 'expected sample_id,label,kind')
            sample_id, label, kind = row
            yield lineno, sample_id, _parse_int(label, lineno, 'label'), kind


def read_index(directory):
    """Return the sample ids, labels and class names of a saved dataset
    without loading the samples themselves."""
    rows = list(_read_index_rows(directory))
    if not rows:
        raise EmptyDataset('%s holds no samples' % directory)
    return ([r[1] for r in rows], [r[2] for r in rows],
            _read_classes(directory))


def read_dataset(directory):
    """Load a dataset saved by write_dataset."""
    samples_dir = os.path.join(directory, 'samples')
    class_names = _read_classes(directory)
    samples = []
    for lineno, sample_id, label, kind in _read_index_rows(directory):
        if kind == 'cloud':
            payload = PointCloud(_read_matrix(
                os.path.join(samples_dir, sample_id + '.csv')))
        elif kind == 'image':
            payload = GreyImage(_read_matrix(
                os.path.join(samples_dir, sample_id + '.csv')))
        elif kind == 'graph':
            graphs = load_graph_edge_list(
                os.path.join(samples_dir, sample_id + '.txt'))
            payload = graphs.samples[0].payload
        else:
            raise ParseError(lineno, 'unknown sample kind %r' % kind)
        samples.append(Sample(sample_id, label, payload))
    return Dataset(samples, class_names, provenance={'directory': directory})
