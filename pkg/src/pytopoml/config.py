"""
Experiment configuration files
"""

import configparser
import math
import os

from .data import DEFAULT_R_VALUES
from .filtrations import (
    DEFAULT_CENTERS,
    DEFAULT_DENSITY_RADIUS,
    DEFAULT_THRESHOLD,
)
from .learn import CLASSIFIERS, PROTOCOLS, classifier_grid
from .vectorize import (
    FILTRATION_STRATEGIES,
    METHODS,
    check_dim_strategy,
    vectorizer_grid,
)


class ConfigError(ValueError):
    """An invalid or unreadable run configuration."""


OUTPUT_ENVIRONMENT_VARIABLE = 'PYTOPOML_OUTPUT'

DATASET_KINDS = ('dynamic', 'idx', 'graphs')

# Filtration kinds that apply to each dataset kind
FILTRATION_KINDS = {
    'dynamic': ('alpha', 'rips'),
    'idx': ('greyscale', 'multi'),
    'graphs': ('flag', ),
}

DEFAULT_HOM_DIMS = {'dynamic': 1, 'idx': 1, 'graphs': 2}

DEFAULT_DIRECTION_PAIRS = [
    (0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (1, -1), (-1, 1), (-1, -1),
]


def format_list(values):
    return ' '.join(str(v) for v in values)


def format_pairs(pairs):
    return ' '.join('%s,%s' % tuple(p) for p in pairs)


def parse_list(text, convert=str):
    """Parse a whitespace separated list.

        >>> parse_list('0.1 1  10', float)
        [0.1, 1.0, 10.0]

    """
    try:
        return [convert(word) for word in text.split()]
    except ValueError:
        raise ConfigError('bad list of values: %r' % text)


def parse_pairs(text, convert=int):
    """Parse whitespace separated ``a,b`` pairs.

        >>> parse_pairs('13,6 -1,1')
        [(13, 6), (-1, 1)]
        >>> parse_pairs('13')
        Traceback (most recent call last):
          ...
        pytopoml.config.ConfigError: bad pair: '13'

    """
    pairs = []
    for word in text.split():
        try:
            a, b = word.split(',')
            pairs.append((convert(a), convert(b)))
        except ValueError:
            raise ConfigError('bad pair: %r' % word)
    return pairs


class RunConfig(object):
    """Everything an experiment run depends on.

    The defaults describe the dynamic-dataset experiment: 250 orbits of the
    linked twisted map, alpha filtrations, the full vectorizer grid, ridge,
    k-NN and random forest classifiers, ten shuffled 80/20 splits.

        >>> config = RunConfig()
        >>> config.validate()
        >>> config.hom_dim(), config.resolved_dim_strategies()
        (1, ['H0', 'H1', 'fused', 'concat'])
        >>> len(config.vectorizers()), len(config.classifiers())
        (21, 7)

    """

    # [dataset]
    dataset = 'dynamic'
    r_values = DEFAULT_R_VALUES
    orbits_per_class = 50
    points_per_orbit = 1000
    images = ''
    labels = ''
    graphs = ''
    subsample_total = 0                 # 0 means keep every sample
    subsample_per_class = 0

    # [filtration]
    filtration = 'alpha'
    max_hom_dim = None                  # None means the dataset default
    max_radius = math.inf
    threshold = DEFAULT_THRESHOLD
    directions = DEFAULT_DIRECTION_PAIRS
    centers = DEFAULT_CENTERS
    density_radius = float(DEFAULT_DENSITY_RADIUS)
    include_greyscale = False
    four_cliques = False

    # [vectorize]
    methods = METHODS
    pi_sizes = (5, 10, 25)
    pi_sigmas = (0.1, 1.0, 10.0)
    pl_layers = 5
    resolutions = (25, 50, 75, 100)
    silhouette_weights = 'constant'
    dim_strategies = ()                 # empty means every strategy
    filtration_strategy = 'collapse'

    # [classify]
    classifier_kinds = ('ridge', 'knn', 'forest')
    ridge_alphas = (0.1, 1.0, 10.0)
    knn_ks = (1, 3, 5)
    forest_trees = 100
    forest_max_depth = 0                # 0 means unlimited
    svm_cs = (1.0, 2.0, 3.0, 5.0, 10.0, 20.0)

    # [validation]
    protocol = 'shuffle'
    runs = 10
    test_size = 0.2

    # [run]
    seed = 0
    threads = 1
    output = 'output'

    def __init__(self, **settings):
        for name, value in settings.items():
            if not hasattr(self, name):
                raise TypeError('unknown setting: %s' % name)
            setattr(self, name, value)

    def load(self, filename):
        """Load settings from a configuration file."""
        config = self.get_config_parser()
        try:
            if not config.read([filename]):
                raise ConfigError('cannot read %s' % filename)
        except configparser.Error as e:
            raise ConfigError('%s: %s' % (filename, e))
        try:
            self._load(config)
        except ValueError as e:
            raise ConfigError('%s: %s' % (filename, e))
        return self

    def _load(self, config):
        get = config.get
        self.dataset = get('dataset', 'kind')
        self.r_values = parse_list(get('dataset', 'r_values'), float)
        self.orbits_per_class = config.getint('dataset', 'orbits_per_class')
        self.points_per_orbit = config.getint('dataset', 'points_per_orbit')
        self.images = get('dataset', 'images')
        self.labels = get('dataset', 'labels')
        self.graphs = get('dataset', 'graphs')
        self.subsample_total = config.getint('dataset', 'subsample_total')
        self.subsample_per_class = config.getint('dataset',
                                                 'subsample_per_class')

        self.filtration = get('filtration', 'kind')
        max_hom_dim = get('filtration', 'max_hom_dim').strip()
        self.max_hom_dim = int(max_hom_dim) if max_hom_dim else None
        self.max_radius = config.getfloat('filtration', 'max_radius')
        self.threshold = config.getfloat('filtration', 'threshold')
        self.directions = parse_pairs(get('filtration', 'directions'))
        self.centers = parse_pairs(get('filtration', 'centers'))
        self.density_radius = config.getfloat('filtration', 'density_radius')
        self.include_greyscale = config.getboolean('filtration',
                                                   'include_greyscale')
        self.four_cliques = config.getboolean('filtration', 'four_cliques')

        self.methods = parse_list(get('vectorize', 'methods'))
        self.pi_sizes = parse_list(get('vectorize', 'pi_sizes'), int)
        self.pi_sigmas = parse_list(get('vectorize', 'pi_sigmas'), float)
        self.pl_layers = config.getint('vectorize', 'pl_layers')
        self.resolutions = parse_list(get('vectorize', 'resolutions'), int)
        self.silhouette_weights = get('vectorize', 'silhouette_weights')
        self.dim_strategies = parse_list(get('vectorize', 'dim_strategies'))
        self.filtration_strategy = get('vectorize', 'filtration_strategy')

        self.classifier_kinds = parse_list(get('classify', 'classifiers'))
        self.ridge_alphas = parse_list(get('classify', 'ridge_alphas'),
                                       float)
        self.knn_ks = parse_list(get('classify', 'knn_ks'), int)
        self.forest_trees = config.getint('classify', 'forest_trees')
        self.forest_max_depth = config.getint('classify', 'forest_max_depth')
        self.svm_cs = parse_list(get('classify', 'svm_cs'), float)

        self.protocol = get('validation', 'protocol')
        self.runs = config.getint('validation', 'runs')
        self.test_size = config.getfloat('validation', 'test_size')

        self.seed = config.getint('run', 'seed')
        self.threads = config.getint('run', 'threads')
        self.output = get('run', 'output')

    def save(self, filename):
        """Save settings to a configuration file."""
        config = self.get_config_parser()
        with open(filename, 'w') as f:
            config.write(f)

    def get_config_parser(self):
        """Create a ConfigParser initialized with current settings."""
        config = configparser.ConfigParser(interpolation=None)
        config.add_section('dataset')
        config.set('dataset', 'kind', self.dataset)
        config.set('dataset', 'r_values', format_list(self.r_values))
        config.set('dataset', 'orbits_per_class', str(self.orbits_per_class))
        config.set('dataset', 'points_per_orbit', str(self.points_per_orbit))
        config.set('dataset', 'images', self.images)
        config.set('dataset', 'labels', self.labels)
        config.set('dataset', 'graphs', self.graphs)
        config.set('dataset', 'subsample_total', str(self.subsample_total))
        config.set('dataset', 'subsample_per_class',
                   str(self.subsample_per_class))
        config.add_section('filtration')
        config.set('filtration', 'kind', self.filtration)
        config.set('filtration', 'max_hom_dim',
                   '' if self.max_hom_dim is None else str(self.max_hom_dim))
        config.set('filtration', 'max_radius', str(self.max_radius))
        config.set('filtration', 'threshold', str(self.threshold))
        config.set('filtration', 'directions', format_pairs(self.directions))
        config.set('filtration', 'centers', format_pairs(self.centers))
        config.set('filtration', 'density_radius', str(self.density_radius))
        config.set('filtration', 'include_greyscale',
                   str(self.include_greyscale))
        config.set('filtration', 'four_cliques', str(self.four_cliques))
        config.add_section('vectorize')
        config.set('vectorize', 'methods', format_list(self.methods))
        config.set('vectorize', 'pi_sizes', format_list(self.pi_sizes))
        config.set('vectorize', 'pi_sigmas', format_list(self.pi_sigmas))
        config.set('vectorize', 'pl_layers', str(self.pl_layers))
        config.set('vectorize', 'resolutions', format_list(self.resolutions))
        config.set('vectorize', 'silhouette_weights', self.silhouette_weights)
        config.set('vectorize', 'dim_strategies',
                   format_list(self.dim_strategies))
        config.set('vectorize', 'filtration_strategy',
                   self.filtration_strategy)
        config.add_section('classify')
        config.set('classify', 'classifiers',
                   format_list(self.classifier_kinds))
        config.set('classify', 'ridge_alphas', format_list(self.ridge_alphas))
        config.set('classify', 'knn_ks', format_list(self.knn_ks))
        config.set('classify', 'forest_trees', str(self.forest_trees))
        config.set('classify', 'forest_max_depth',
                   str(self.forest_max_depth))
        config.set('classify', 'svm_cs', format_list(self.svm_cs))
        config.add_section('validation')
        config.set('validation', 'protocol', self.protocol)
        config.set('validation', 'runs', str(self.runs))
        config.set('validation', 'test_size', str(self.test_size))
        config.add_section('run')
        config.set('run', 'seed', str(self.seed))
        config.set('run', 'threads', str(self.threads))
        config.set('run', 'output', self.output)
        return config

    def apply_overrides(self, seed=None, threads=None, output=None,
                        environ=None):
        """Apply command-line and environment overrides.

        The output directory comes from the command line, then from
        $PYTOPOML_OUTPUT, then from the file.

            >>> config = RunConfig(output='from-file')
            >>> env = {'PYTOPOML_OUTPUT': 'from-env'}
            >>> config.apply_overrides(environ=env).output
            'from-env'
            >>> config.apply_overrides(output='flag', environ=env).output
            'flag'

        """
        if environ is None:
            environ = os.environ
        if seed is not None:
            self.seed = seed
        if threads is not None:
            self.threads = threads
        if output:
            self.output = output
        elif environ.get(OUTPUT_ENVIRONMENT_VARIABLE):
            self.output = environ[OUTPUT_ENVIRONMENT_VARIABLE]
        return self

    def hom_dim(self):
        if self.max_hom_dim is not None:
            return self.max_hom_dim
        return DEFAULT_HOM_DIMS.get(self.dataset, 1)

    def resolved_dim_strategies(self):
        if self.dim_strategies:
            return list(self.dim_strategies)
        return (['H%d' % k for k in range(self.hom_dim() + 1)]
                + ['fused', 'concat'])

    def vectorizers(self):
        return vectorizer_grid(self.methods, self.pi_sizes, self.pi_sigmas,
                               self.pl_layers, self.resolutions,
                               self.silhouette_weights)

    def classifiers(self):
        return classifier_grid(self.classifier_kinds, self.ridge_alphas,
                               self.knn_ks, self.forest_trees,
                               self.forest_max_depth or None, self.svm_cs)

    def validate(self):
        """Check the whole configuration before any work is done.

            >>> RunConfig(methods=['PI', 'XX']).validate()
            Traceback (most recent call last):
              ...
            pytopoml.config.ConfigError: unknown vectorization method: XX
            >>> RunConfig(filtration='flag').validate()
            Traceback (most recent call last):
              ...
            pytopoml.config.ConfigError: flag filtrations need graphs data

        """
        try:
            self._validate()
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(str(e))

    def _validate(self):
        if self.dataset not in DATASET_KINDS:
            raise ConfigError('unknown dataset kind: %s' % self.dataset)
        if self.filtration not in FILTRATION_KINDS[self.dataset]:
            wanted = [k for k, v in FILTRATION_KINDS.items()
                      if self.filtration in v]
            if not wanted:
                raise ConfigError('unknown filtration kind: %s'
                                  % self.filtration)
            raise ConfigError('%s filtrations need %s data'
                              % (self.filtration, wanted[0]))
        if self.dataset == 'dynamic':
            if not self.r_values or min(self.r_values) <= 0:
                raise ConfigError('r_values must be positive')
            if self.orbits_per_class < 1 or self.points_per_orbit < 1:
                raise ConfigError('orbits_per_class and points_per_orbit'
                                  ' must be positive')
        elif self.dataset == 'idx':
            if not self.images or not self.labels:
                raise ConfigError('idx datasets need images and labels')
        elif not self.graphs:
            raise ConfigError('graphs datasets need a graphs file')
        if self.subsample_total < 0 or self.subsample_per_class < 0:
            raise ConfigError('subsample sizes cannot be negative')
        if self.subsample_total and self.subsample_per_class:
            raise ConfigError('choose subsample_total or subsample_per_class')
        if self.hom_dim() < 0:
            raise ConfigError('max_hom_dim cannot be negative')
        if self.filtration == 'flag' and self.hom_dim() > 2:
            raise ConfigError('flag filtrations stop at H2')
        if not self.max_radius > 0:
            raise ConfigError('max_radius must be positive')
        if self.filtration == 'rips' and math.isinf(self.max_radius):
            raise ConfigError('rips filtrations need a finite max_radius')
        if not 0 <= self.threshold <= 1:
            raise ConfigError('threshold must lie in [0, 1]')
        if self.filtration == 'multi':
            if not self.directions and not self.centers:
                raise ConfigError('multi filtrations need directions or'
                                  ' centers')
            if (0, 0) in [tuple(v) for v in self.directions]:
                raise ConfigError('direction 0,0 has no orientation')
            if self.density_radius <= 0:
                raise ConfigError('density_radius must be positive')
        if not self.methods:
            raise ConfigError('no vectorization methods')
        if self.silhouette_weights not in ('constant', 'persistence'):
            raise ConfigError('unknown silhouette weights: %s'
                              % self.silhouette_weights)
        if not self.vectorizers():
            raise ConfigError('the vectorizer grid is empty')
        for strategy in self.resolved_dim_strategies():
            check_dim_strategy(strategy, self.hom_dim())
        if self.filtration_strategy not in FILTRATION_STRATEGIES:
            raise ConfigError('unknown filtration strategy: %s'
                              % self.filtration_strategy)
        for kind in self.classifier_kinds:
            if kind not in CLASSIFIERS:
                raise ConfigError('unknown classifier: %s' % kind)
        if not self.classifiers():
            raise ConfigError('the classifier grid is empty')
        if self.protocol not in PROTOCOLS:
            raise ConfigError('unknown validation protocol: %s'
                              % self.protocol)
        if self.runs < 1:
            raise ConfigError('runs must be positive')
        if self.protocol == 'kfold' and self.runs < 2:
            raise ConfigError('k-fold validation needs at least 2 folds')
        if not 0 < self.test_size < 1:
            raise ConfigError('test_size must lie in (0, 1)')
        if self.threads == 0:
            raise ConfigError('threads cannot be 0')
        if not self.output:
            raise ConfigError('no output directory')

    def as_dict(self):
        """Return the settings as nested dicts of strings."""
        config = self.get_config_parser()
        return {section: dict(config.items(section))
                for section in config.sections()}
