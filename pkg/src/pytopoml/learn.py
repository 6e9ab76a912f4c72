"""
Classifiers, cross-validation and the accuracy tables of a grid search
"""

import collections
import csv
import functools
import itertools
import logging
import math
import warnings

import numpy as np
from joblib import Parallel, delayed, effective_n_jobs
from joblib.parallel import cpu_count
from scipy import stats
from scipy.spatial.distance import cdist
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import RidgeClassifier
from sklearn.model_selection import (
    KFold,
    ShuffleSplit,
    StratifiedKFold,
    StratifiedShuffleSplit,
)
from sklearn.svm import SVC

from .vectorize import METHODS, DiagramVectorizer


log = logging.getLogger(__name__)


class DimensionMismatch(ValueError):
    """Feature vectors of different lengths."""


class SingleClass(ValueError):
    """A training set with only one class."""


class TooFewSamples(ValueError):
    """Not enough samples for the requested validation protocol."""


class UnknownClassifier(ValueError):
    """A classifier kind is not recognised."""


class ZeroVarianceBoth(UserWarning):
    """Both samples of a t-test are constant; a conventional p is used."""


CLASSIFIERS = ('ridge', 'knn', 'forest', 'svm')
PROTOCOLS = ('shuffle', 'kfold')


class _RecordCollector(logging.Handler):
    """Keep the log records of a worker for the calling process."""

    def __init__(self):
        logging.Handler.__init__(self)
        self.records = []

    def emit(self, record):
        # the record has to pickle
        record.msg = record.getMessage()
        record.args = None
        if record.exc_info:
            record.exc_text = logging.Formatter().formatException(
                record.exc_info)
            record.exc_info = None
        self.records.append(record)


def _run_batch(function, batch, level):
    logger = logging.getLogger('pytopoml')
    saved = logger.level, logger.propagate
    collector = _RecordCollector()
    logger.addHandler(collector)
    logger.setLevel(level)
    logger.propagate = False
    try:
        return [function(inp) for inp in batch], collector.records
    finally:
        logger.removeHandler(collector)
        logger.setLevel(saved[0])
        logger.propagate = saved[1]


def parallel_map(function, inputs, n_jobs=1):
    """Apply function to every input, in a joblib pool when n_jobs != 1.

    Results come back in input order whatever the pool size.  Inputs go to
    the workers in one contiguous batch per worker, so ``function`` and
    whatever it carries (a functools.partial holding shared data, say) is
    pickled once per batch.  Records logged by ``pytopoml`` loggers in the
    workers are replayed here after the batch returns.
    """
    inputs = list(inputs)
    if n_jobs > 0:
        n_jobs = min(cpu_count(), n_jobs)
    n_jobs = min(effective_n_jobs(n_jobs), len(inputs))
    if n_jobs <= 1:
        return [function(inp) for inp in inputs]
    size = -(-len(inputs) // n_jobs)
    batches = [inputs[i:i + size] for i in range(0, len(inputs), size)]
    level = logging.getLogger('pytopoml').getEffectiveLevel()
    results = []
    for outputs, records in Parallel(n_jobs=len(batches))(
            delayed(_run_batch)(function, batch, level) for batch in batches):
        for record in records:
            logging.getLogger(record.name).handle(record)
        results.extend(outputs)
    return results


class NearestNeighbors(object):
    """k-nearest-neighbour majority vote.

    Ties between classes go to the class whose closest voting neighbour is
    nearest; equidistant neighbours are taken in training order.

        >>> knn = NearestNeighbors(k=3)
        >>> knn = knn.fit([[0], [1], [10], [11]], [0, 0, 1, 1])
        >>> knn.predict([[0.4], [10.6]]).tolist()
        [0, 1]

    """

    def __init__(self, k=1):
        self.k = k

    def fit(self, X, y):
        self.X = np.asarray(X, dtype=float)
        self.y = np.asarray(y)
        return self

    def predict(self, X):
        distances = cdist(np.asarray(X, dtype=float), self.X)
        k = min(self.k, len(self.X))
        order = np.argsort(distances, axis=1, kind='stable')[:, :k]
        result = []
        for row, neighbours in zip(distances, order):
            votes = collections.Counter()
            nearest = {}
            for i in neighbours:
                label = self.y[i]
                votes[label] += 1
                nearest.setdefault(label, row[i])
            result.append(max(votes, key=lambda c: (votes[c], -nearest[c])))
        return np.array(result)


class ClassifierSpec(object):
    """A classifier kind with its hyperparameters.

        >>> ClassifierSpec('knn', k=3).label
        'knn(k=3)'
        >>> ClassifierSpec('lasso')
        Traceback (most recent call last):
          ...
        pytopoml.learn.UnknownClassifier: unknown classifier: lasso

    """

    def __init__(self, kind, **params):
        if kind not in CLASSIFIERS:
            raise UnknownClassifier('unknown classifier: %s' % kind)
        for name, value in params.items():
            if value is not None and value <= 0:
                raise ValueError('%s must be positive, got %r'
                                 % (name, value))
        self.kind = kind
        self.params = params

    def _label(self):
        params = ','.join('%s=%s' % (name, '%g' % value
                                     if value is not None else 'none')
                          for name, value in sorted(self.params.items()))
        return '%s(%s)' % (self.kind, params)

    label = property(_label)

    def __repr__(self):
        return '<ClassifierSpec: %s>' % self.label

    def make(self, seed=0):
        """Create an unfitted estimator."""
        params = self.params
        if self.kind == 'ridge':
            return RidgeClassifier(alpha=params.get('alpha', 1.0))
        if self.kind == 'knn':
            return NearestNeighbors(k=params.get('k', 1))
        if self.kind == 'forest':
            return RandomForestClassifier(
                n_estimators=params.get('trees', 100),
                max_depth=params.get('max_depth'),
                max_features='sqrt', criterion='gini', bootstrap=True,
                random_state=seed, n_jobs=1)
        return SVC(C=params.get('C', 1.0), kernel='rbf', gamma='scale',
                   random_state=seed)


def classifier_grid(classifiers=('ridge', 'knn', 'forest'),
                    ridge_alphas=(0.1, 1, 10), knn_ks=(1, 3, 5),
                    forest_trees=100, forest_max_depth=None,
                    svm_cs=(1, 2, 3, 5, 10, 20)):
    """Expand the hyperparameter grids of the requested classifiers.

        >>> [c.label for c in classifier_grid()][:4]
        ['ridge(alpha=0.1)', 'ridge(alpha=1)', 'ridge(alpha=10)', 'knn(k=1)']
        >>> classifier_grid()[-1].label
        'forest(max_depth=none,trees=100)'
        >>> len(classifier_grid(['svm']))
        6

    """
    grid = []
    for kind in classifiers:
        if kind == 'ridge':
            grid.extend(ClassifierSpec('ridge', alpha=a) for a in ridge_alphas)
        elif kind == 'knn':
            grid.extend(ClassifierSpec('knn', k=k) for k in knn_ks)
        elif kind == 'forest':
            grid.append(ClassifierSpec('forest', trees=forest_trees,
                                       max_depth=forest_max_depth))
        elif kind == 'svm':
            grid.extend(ClassifierSpec('svm', C=c) for c in svm_cs)
        else:
            raise UnknownClassifier('unknown classifier: %s' % kind)
    return grid


def fit_predict(spec, train_vectors, train_labels, test_vectors, seed=0):
    """Train a classifier and predict labels for the test vectors.

        >>> fit_predict(ClassifierSpec('knn', k=1), [[0], [1]], [1, 1], [[0]])
        Traceback (most recent call last):
          ...
        pytopoml.learn.SingleClass: training labels have a single class (1)

    """
    X = np.asarray(train_vectors, dtype=float)
    y = np.asarray(train_labels)
    T = np.asarray(test_vectors, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise TooFewSamples('no training vectors')
    if len(X) != len(y):
        raise DimensionMismatch('%d training vectors but %d labels'
                                % (len(X), len(y)))
    if T.ndim != 2 or T.shape[1] != X.shape[1]:
        raise DimensionMismatch('training vectors have length %d, test'
                                ' vectors %s' % (X.shape[1], T.shape[1:]))
    classes = np.unique(y)
    if len(classes) < 2:
        raise SingleClass('training labels have a single class (%s)'
                          % classes[0])
    if len(T) == 0:
        return y[:0]
    return spec.make(seed).fit(X, y).predict(T)


def make_splits(labels, runs=10, seed=0, protocol='shuffle', test_size=0.2):
    """Return (train, test) index arrays for every validation run.

    'shuffle' draws independent stratified train/test splits, 'kfold'
    partitions the samples into ``runs`` stratified folds.  Classes too
    small to stratify fall back to plain shuffled splits.

        >>> labels = [0] * 50 + [1] * 50 + [2] * 50 + [3] * 50 + [4] * 50
        >>> splits = make_splits(labels)
        >>> len(splits), [(len(a), len(b)) for a, b in splits][0]
        (10, (200, 50))

    """
    labels = np.asarray(labels)
    n = len(labels)
    if protocol not in PROTOCOLS:
        raise ValueError('unknown validation protocol: %s' % protocol)
    if protocol == 'kfold':
        if runs < 2 or n < runs:
            raise TooFewSamples('%d-fold validation needs at least %d'
                                ' samples, got %d' % (runs, runs, n))
        smallest = min(collections.Counter(labels.tolist()).values())
        if smallest >= runs:
            splitter = StratifiedKFold(runs, shuffle=True, random_state=seed)
        else:
            splitter = KFold(runs, shuffle=True, random_state=seed)
        return list(splitter.split(np.zeros(n), labels))
    if n < 2:
        raise TooFewSamples('a train/test split needs 2 samples, got %d' % n)
    try:
        splitter = StratifiedShuffleSplit(runs, test_size=test_size,
                                          random_state=seed)
        return list(splitter.split(np.zeros(n), labels))
    except ValueError as e:
        log.info('cannot stratify (%s), using plain shuffled splits', e)
        splitter = ShuffleSplit(runs, test_size=test_size, random_state=seed)
        return list(splitter.split(np.zeros(n), labels))


def accuracy(predicted, expected):
    """Return the fraction of correct predictions."""
    predicted = np.asarray(predicted)
    expected = np.asarray(expected)
    if len(expected) == 0:
        return 0.0
    return float((predicted == expected).mean())


AccuracyRecord = collections.namedtuple(
    'AccuracyRecord',
    'run strategy vectorizer method classifier accuracy')


def mean_std(values):
    """Return the mean and population standard deviation of values.

        >>> mean_std([0.5, 1.0])
        (0.75, 0.25)

    """
    values = np.asarray(values, dtype=float)
    return float(values.mean()), float(values.std())


class AccuracyTable(object):
    """Per-run accuracies of every (strategy, vectorizer, classifier).

        >>> table = AccuracyTable()
        >>> table.add(0, 'H1', 'PL(k=5,r=25)', 'PL', 'knn(k=1)', 0.5)
        >>> table.add(0, 'H1', 'BC(r=25)', 'BC', 'knn(k=1)', 0.75)
        >>> table.add(1, 'H1', 'PL(k=5,r=25)', 'PL', 'knn(k=1)', 1.0)
        >>> table.add(1, 'H1', 'BC(r=25)', 'BC', 'knn(k=1)', 0.5)
        >>> [(r.run, r.accuracy, r.method) for r in table.run_best('H1')]
        [(0, 0.75, 'BC'), (1, 1.0, 'PL')]
        >>> best = table.best_combination('H1')
        >>> best.vectorizer, best.mean, best.std
        ('PL(k=5,r=25)', 0.75, 0.25)

    """

    Combination = collections.namedtuple(
        'Combination',
        'strategy vectorizer method classifier accuracies mean std')

    def __init__(self, records=()):
        self.records = []
        for record in records:
            self.add(*record)

    def __len__(self):
        return len(self.records)

    def __eq__(self, other):
        if not isinstance(other, AccuracyTable):
            return NotImplemented
        return self.records == other.records

    __hash__ = None

    def add(self, run, strategy, vectorizer, method, classifier, accuracy):
        accuracy = float(accuracy)
        if not 0 <= accuracy <= 1:
            raise ValueError('accuracy %r outside [0, 1]' % accuracy)
        self.records.append(AccuracyRecord(int(run), strategy, vectorizer,
                                           method, classifier, accuracy))

    def extend(self, records):
        for record in records:
            self.add(*record)

    def runs(self):
        return sorted(set(r.run for r in self.records))

    def strategies(self):
        """Return the dimension strategies in first-seen order."""
        return list(collections.OrderedDict.fromkeys(
            r.strategy for r in self.records))

    def methods(self, strategy):
        """Return the vectorization methods of a strategy in canonical order.
        """
        present = set(r.method for r in self.records if r.strategy == strategy)
        return [m for m in METHODS if m in present] + sorted(
            present.difference(METHODS))

    def run_best(self, strategy):
        """Return the best record of every run (first one wins ties)."""
        best = {}
        for record in self.records:
            if record.strategy != strategy:
                continue
            current = best.get(record.run)
            if current is None or record.accuracy > current.accuracy:
                best[record.run] = record
        return [best[run] for run in sorted(best)]

    def combinations(self, strategy, method=None):
        """Return every combination of a strategy with its run accuracies."""
        grouped = collections.OrderedDict()
        for record in self.records:
            if record.strategy != strategy:
                continue
            if method is not None and record.method != method:
                continue
            key = (record.vectorizer, record.method, record.classifier)
            grouped.setdefault(key, []).append((record.run, record.accuracy))
        result = []
        for (vectorizer, method_, classifier), runs in grouped.items():
            accuracies = [acc for run, acc in sorted(runs)]
            mean, std = mean_std(accuracies)
            result.append(self.Combination(strategy, vectorizer, method_,
                                           classifier, accuracies, mean, std))
        return result

    def best_combination(self, strategy, method=None):
        """Return the combination with the best mean accuracy."""
        best = None
        for combination in self.combinations(strategy, method):
            if best is None or combination.mean > best.mean:
                best = combination
        return best

    def write_csv(self, f):
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(AccuracyRecord._fields)
        for r in self.records:
            writer.writerow([r.run, r.strategy, r.vectorizer, r.method,
                             r.classifier, repr(r.accuracy)])

    def read_csv(cls, f):
        """Read a table written by write_csv.

            >>> import io
            >>> text = ('run,strategy,vectorizer,method,classifier,accuracy\\n'
            ...         '0,H1,BC(r=25),BC,knn(k=1),0.9\\n')
            >>> AccuracyTable.read_csv(io.StringIO(text)).records[0].accuracy
            0.9

        """
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != AccuracyRecord._fields:
            raise ValueError('not an accuracy table: header %r' % (header, ))
        table = cls()
        for lineno, row in enumerate(reader, 2):
            if len(row) != len(AccuracyRecord._fields):
                raise ValueError('line %d: expected %d fields, got %d'
                                 % (lineno, len(AccuracyRecord._fields),
                                    len(row)))
            table.add(*row)
        return table

    read_csv = classmethod(read_csv)

    def format_runs(self):
        """Format per-run best accuracies, one column per strategy.

        Each cell names the method that achieved it; the last row holds the
        mean and standard deviation over runs.
        """
        strategies = self.strategies()
        best = {s: {r.run: r for r in self.run_best(s)} for s in strategies}
        rows = [['run'] + strategies]
        for run in self.runs():
            row = [str(run + 1)]
            for s in strategies:
                record = best[s].get(run)
                row.append('%.3f (%s)' % (record.accuracy, record.method)
                           if record else '-')
            rows.append(row)
        summary = ['mean']
        for s in strategies:
            mean, std = mean_std([r.accuracy for r in best[s].values()])
            summary.append('%.3f +- %.3f' % (mean, std))
        rows.append(summary)
        return _format_rows(rows)

    def format_best(self):
        """Format the best fixed combination of every strategy."""
        rows = [['strategy', 'accuracy', 'combination']]
        for s in self.strategies():
            c = self.best_combination(s)
            rows.append([s, '%.3f +- %.3f' % (c.mean, c.std),
                         '{%s, %s}' % (c.vectorizer, c.classifier)])
        return _format_rows(rows)


def _format_rows(rows):
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for n, row in enumerate(rows):
        lines.append('  '.join(cell.ljust(w)
                               for cell, w in zip(row, widths)).rstrip())
        if n == 0:
            lines.append('  '.join('-' * w for w in widths))
    return '\n'.join(lines) + '\n'


def cross_validate(vectors, labels, spec, folds=10, seed=0,
                   protocol='shuffle', test_size=0.2, strategy='-',
                   vectorizer='-', method='-'):
    """Validate one classifier on fixed vectors over ``folds`` runs.

        >>> X = [[float(i % 2)] for i in range(20)]
        >>> y = [i % 2 for i in range(20)]
        >>> table = cross_validate(X, y, ClassifierSpec('knn', k=1), folds=4)
        >>> table.best_combination('-')[-2:]
        (1.0, 0.0)

    """
    vectors = np.asarray(vectors, dtype=float)
    labels = np.asarray(labels)
    table = AccuracyTable()
    splits = make_splits(labels, folds, seed, protocol, test_size)
    for run, (train, test) in enumerate(splits):
        predicted = fit_predict(spec, vectors[train], labels[train],
                                vectors[test], seed=_cell_seed(seed, 0, run))
        table.add(run, strategy, vectorizer, method, spec.label,
                  accuracy(predicted, labels[test]))
    return table


def _cell_seed(seed, cell, run):
    """Derive a classifier seed from (seed, cell, run).

        >>> _cell_seed(0, 1, 2) == _cell_seed(0, 1, 2) != _cell_seed(0, 2, 1)
        True

    """
    state = np.random.SeedSequence([seed, cell, run]).generate_state(1)
    return int(state[0])


class GridData(object):
    """What every cell of a grid search shares: data, splits and settings.

    Cells refer to samples by index into ``diagram_sets``.
    """

    def __init__(self, diagram_sets, labels, splits, classifiers,
                 filtration_strategy, seed):
        self.diagram_sets = diagram_sets
        self.labels = labels
        self.splits = splits
        self.classifiers = classifiers
        self.filtration_strategy = filtration_strategy
        self.seed = seed


def _evaluate_cell(data, cell):
    run, index, strategy, vectorizer = cell
    train, test = data.splits[run]
    dv = DiagramVectorizer(vectorizer, strategy, data.filtration_strategy)
    X_train = dv.fit_transform([data.diagram_sets[i] for i in train])
    X_test = dv.transform([data.diagram_sets[i] for i in test])
    records = []
    for spec in data.classifiers:
        predicted = fit_predict(spec, X_train, data.labels[train], X_test,
                                seed=_cell_seed(data.seed, index, run))
        records.append((run, strategy, vectorizer.label,
                        vectorizer.abbreviation, spec.label,
                        accuracy(predicted, data.labels[test])))
    log.debug('run %d, %s, %s done', run, strategy, vectorizer.label)
    return records


def grid_search(diagram_sets, labels, vectorizers, classifiers,
                dim_strategies, filtration_strategy='collapse', runs=10,
                seed=0, protocol='shuffle', test_size=0.2, n_jobs=1):
    """Evaluate every (strategy, vectorizer, classifier) in every run.

    ``diagram_sets`` holds, per sample, its diagrams in filtration order.
    Ranges are fitted on the training part of each split.  Every cell of
    (run, strategy, vectorizer) is evaluated independently, possibly in a
    pool of ``n_jobs`` workers; results do not depend on the pool size.
    Cells carry sample indices only; the diagrams travel once per worker
    batch in a GridData.
    """
    if not vectorizers or not classifiers or not dim_strategies:
        raise ValueError('grid search needs non-empty grids')
    diagram_sets = list(diagram_sets)
    labels = np.asarray(labels)
    splits = make_splits(labels, runs, seed, protocol, test_size)
    data = GridData(diagram_sets, labels, splits, list(classifiers),
                    filtration_strategy, seed)
    cells = []
    for run in range(len(splits)):
        grid = itertools.product(dim_strategies, vectorizers)
        for index, (strategy, vectorizer) in enumerate(grid):
            cells.append((run, index, strategy, vectorizer))
    log.info('grid search: %d runs x %d strategies x %d vectorizers x %d'
             ' classifiers', len(splits), len(dim_strategies),
             len(vectorizers), len(classifiers))
    table = AccuracyTable()
    for records in parallel_map(functools.partial(_evaluate_cell, data),
                                cells, n_jobs):
        table.extend(records)
    return table


def welch_t_test(a, b):
    """Return the two-sided p-value of Welch's unequal-variance t-test.

        >>> welch_t_test([0.1, 0.2, 0.3], [0.1, 0.2, 0.3])
        1.0
        >>> welch_t_test([0.1, 0.2, 0.3], [10.1, 10.2, 10.3]) < 1e-6
        True

    When both samples are constant the test is undefined; equal constants
    give 1 and different constants 0, with a warning.

        >>> with warnings.catch_warnings(record=True) as w:
        ...     warnings.simplefilter('always')
        ...     p = welch_t_test([0.5, 0.5], [0.7, 0.7])
        >>> p, w[0].category.__name__
        (0.0, 'ZeroVarianceBoth')

    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise TooFewSamples('a t-test needs at least 2 values per sample')
    va = a.var(ddof=1) / len(a)
    vb = b.var(ddof=1) / len(b)
    difference = a.mean() - b.mean()
    if va + vb == 0:
        p = 1.0 if difference == 0 else 0.0
        warnings.warn('both samples are constant; using p = %g' % p,
                      ZeroVarianceBoth, stacklevel=2)
        return p
    t = difference / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va ** 2 / (len(a) - 1) + vb ** 2 / (len(b) - 1))
    return float(min(1.0, 2 * stats.t.sf(abs(t), df)))


PValue = collections.namedtuple('PValue', 'strategy first second p_value')


def method_pvalues(table, strategy):
    """Compare the vectorization methods of one strategy pairwise.

    Each method is represented by its best combination by mean accuracy.
    """
    best = [table.best_combination(strategy, method)
            for method in table.methods(strategy)]
    return [PValue(strategy, a.method, b.method,
                   welch_t_test(a.accuracies, b.accuracies))
            for a, b in itertools.combinations(best, 2)]


def strategy_pvalues(table):
    """Compare the dimension strategies pairwise by their best combinations.
    """
    best = [table.best_combination(s) for s in table.strategies()]
    return [PValue('strategies', a.strategy, b.strategy,
                   welch_t_test(a.accuracies, b.accuracies))
            for a, b in itertools.combinations(best, 2)]


def write_pvalues(pvalues, f):
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(PValue._fields)
    for p in pvalues:
        writer.writerow([p.strategy, p.first, p.second, repr(p.p_value)])


def format_pvalues(pvalues):
    """Format p-values as one 'A vs B' row per pair and a column per group.
    """
    groups = list(collections.OrderedDict.fromkeys(p.strategy
                                                   for p in pvalues))
    pairs = list(collections.OrderedDict.fromkeys((p.first, p.second)
                                                  for p in pvalues))
    cells = {(p.strategy, p.first, p.second): p.p_value for p in pvalues}
    rows = [['pair'] + groups]
    for first, second in pairs:
        row = ['%s vs %s' % (first, second)]
        for g in groups:
            value = cells.get((g, first, second))
            row.append('-' if value is None else '%.3g' % value)
        rows.append(row)
    return _format_rows(rows)
