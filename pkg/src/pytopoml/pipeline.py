"""
The experiment pipeline: data, diagrams, vectors, classifiers, statistics
"""

import hashlib
import json
import logging
import os
import re
import time

from .data import (
    generate_dynamic_dataset,
    load_graph_edge_list,
    load_idx,
    read_dataset,
    read_index,
    subsample,
    write_dataset,
)
from .diagram import (
    PersistenceDiagram,
    read_diagram_set,
    regularize,
    write_diagram_set,
)
from .filtrations import (
    DegenerateInput,
    alpha_complex_2d,
    distinct_points,
    flag_complex,
    greyscale_prepare,
    image_complex,
    image_filtrations,
    rips_complex,
)
from .learn import (
    AccuracyTable,
    format_pvalues,
    grid_search,
    method_pvalues,
    parallel_map,
    strategy_pvalues,
    write_pvalues,
)
from .persistence import compute_persistence
from .plot import plot_diagram
from .vectorize import DiagramVectorizer, write_vectors
from .version import library_versions, version


log = logging.getLogger(__name__)


class MissingStageInput(Exception):
    """A stage needs the output of an earlier stage that is not there."""


class StageError(Exception):
    """A component error raised while processing one sample of a stage."""

    def __init__(self, stage, sample_id, error):
        Exception.__init__(self, stage, sample_id, error)
        self.stage = stage
        self.sample_id = sample_id
        self.error = error

    user_error = property(lambda self: isinstance(self.error,
                                                  (ValueError, OSError)))

    def __str__(self):
        return '%s stage, sample %s: %s' % (self.stage, self.sample_id,
                                            self.error)


STAGES = ('generate', 'diagrams', 'vectorize', 'train', 'stats', 'plot')

MANIFEST = 'manifest.json'


def file_name(label):
    """Turn a vectorizer or strategy label into a file name.

        >>> file_name('PI(n=5,sigma=0.1)')
        'PI_n_5_sigma_0.1'

    """
    return re.sub(r'[^A-Za-z0-9.]+', '_', label).strip('_')


def sha256(path):
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b''):
            h.update(chunk)
    return h.hexdigest()


class DiagramSettings(object):
    """What the diagrams stage needs to know about the filtrations."""

    def __init__(self, config):
        self.filtration = config.filtration
        self.hom_dim = config.hom_dim()
        self.max_radius = config.max_radius
        self.threshold = config.threshold
        self.directions = list(config.directions)
        self.centers = list(config.centers)
        self.density_radius = config.density_radius
        self.include_greyscale = config.include_greyscale
        self.four_cliques = config.four_cliques

    def complexes(self, sample):
        """Return (name, complex) for every filtration of a sample."""
        payload = sample.payload
        if self.filtration == 'alpha':
            try:
                return [('alpha', alpha_complex_2d(payload))]
            except DegenerateInput as e:
                log.warning('%s: %s, using a Rips complex', sample.id, e)
                return [('alpha', rips_complex(distinct_points(payload),
                                               self.hom_dim + 1,
                                               self.max_radius,
                                               squared_radii=True))]
        if self.filtration == 'rips':
            return [('rips', rips_complex(payload, self.hom_dim + 1,
                                          self.max_radius))]
        if self.filtration == 'greyscale':
            return [('greyscale', image_complex(greyscale_prepare(payload)))]
        if self.filtration == 'multi':
            return [(name, image_complex(img)) for name, img in
                    image_filtrations(payload, self.directions, self.centers,
                                      self.density_radius, self.threshold,
                                      self.include_greyscale)]
        if self.filtration == 'flag':
            return [('flag', flag_complex(payload, min(self.hom_dim + 1, 2),
                                          self.four_cliques))]
        raise ValueError('unknown filtration kind: %s' % self.filtration)


def sample_diagrams(task):
    """Compute the diagrams of every filtration of one sample."""
    settings, sample = task
    try:
        return [compute_persistence(K, settings.hom_dim, sample_id=sample.id,
                                    filtration=name)
                for name, K in settings.complexes(sample)]
    except Exception as e:
        raise StageError('diagrams', sample.id, e)


class Pipeline(object):
    """Run the stages of an experiment in an output directory.

    Every stage reads what earlier stages left on disk, so stages can be
    rerun one at a time.  A manifest lists the completed stages and the
    checksum of every output file.
    """

    # Some debug information
    time_for_generate = 0               # Time to build the dataset
    time_for_diagrams = 0               # Time to compute the diagrams
    time_for_vectorize = 0              # Time to export vectors
    time_for_train = 0                  # Time for the grid search
    time_for_stats = 0                  # Time for the t-tests
    time_for_plot = 0                   # Time to draw the diagrams

    def __init__(self, config, plot_samples=None):
        self.config = config
        self.output = config.output
        self.plot_samples = list(plot_samples or [])
        self.completed = []

    def path(self, *parts):
        return os.path.join(self.output, *parts)

    def run(self, stages=STAGES):
        """Run the given stages in pipeline order."""
        for stage in stages:
            if stage not in STAGES:
                raise ValueError('unknown stage: %s' % stage)
        os.makedirs(self.output, exist_ok=True)
        for stage in [s for s in STAGES if s in stages]:
            log.info('running the %s stage', stage)
            start = time.time()
            try:
                getattr(self, stage)()
            except BaseException:
                self.write_manifest(partial=True)
                raise
            finally:
                setattr(self, 'time_for_' + stage, time.time() - start)
            self.completed.append(stage)
            self.write_manifest(partial=False)
        return self

    def debug_timings(self):
        return ', '.join('%s %.3fs' % (stage,
                                       getattr(self, 'time_for_' + stage))
                         for stage in self.completed)

    # Stage inputs

    def need(self, path, stage):
        if not os.path.exists(path):
            raise MissingStageInput('%s not found; run the %s stage first'
                                    % (path, stage))
        return path

    def load_dataset(self):
        self.need(self.path('dataset', 'index.csv'), 'generate')
        return read_dataset(self.path('dataset'))

    def load_diagrams(self):
        """Return sample ids, labels and per-sample diagram sets."""
        self.need(self.path('dataset', 'index.csv'), 'generate')
        ids, labels, class_names = read_index(self.path('dataset'))
        diagram_sets = []
        for sample_id in ids:
            path = self.need(self.path('diagrams', sample_id + '.txt'),
                             'diagrams')
            with open(path) as f:
                diagram_sets.append(read_diagram_set(f, sample_id))
        return ids, labels, class_names, diagram_sets

    # Stages

    def generate(self):
        """Build or load the dataset and save it under dataset/."""
        config = self.config
        if config.dataset == 'dynamic':
            dataset = generate_dynamic_dataset(
                config.r_values, config.orbits_per_class,
                config.points_per_orbit, config.seed)
        elif config.dataset == 'idx':
            dataset = load_idx(config.images, config.labels)
        else:
            dataset = load_graph_edge_list(config.graphs)
        if config.subsample_total or config.subsample_per_class:
            dataset = subsample(dataset,
                                total=config.subsample_total or None,
                                per_class=config.subsample_per_class or None,
                                seed=config.seed)
        write_dataset(dataset, self.path('dataset'))
        log.info('%d samples in %d classes', len(dataset),
                 len(dataset.class_names))

    def diagrams(self):
        """Compute a diagram set per sample under diagrams/."""
        dataset = self.load_dataset()
        settings = DiagramSettings(self.config)
        results = parallel_map(sample_diagrams,
                               [(settings, s) for s in dataset],
                               self.config.threads)
        os.makedirs(self.path('diagrams'), exist_ok=True)
        for sample, diagrams in zip(dataset, results):
            with open(self.path('diagrams', sample.id + '.txt'), 'w') as f:
                write_diagram_set(diagrams, f)

    def vectorize(self):
        """Export vectors fitted on the whole dataset under vectors/."""
        config = self.config
        ids, labels, class_names, diagram_sets = self.load_diagrams()
        os.makedirs(self.path('vectors'), exist_ok=True)
        for strategy in config.resolved_dim_strategies():
            for vectorizer in config.vectorizers():
                dv = DiagramVectorizer(vectorizer, strategy,
                                       config.filtration_strategy)
                try:
                    matrix = dv.fit_transform(diagram_sets)
                except ValueError as e:
                    raise StageError('vectorize', '*', e)
                name = '%s_%s.csv' % (strategy, file_name(vectorizer.label))
                with open(self.path('vectors', name), 'w') as f:
                    write_vectors(f, ids, labels, matrix)

    def train(self):
        """Run the grid search and write the accuracy tables."""
        config = self.config
        ids, labels, class_names, diagram_sets = self.load_diagrams()
        try:
            table = grid_search(diagram_sets, labels, config.vectorizers(),
                                config.classifiers(),
                                config.resolved_dim_strategies(),
                                config.filtration_strategy, config.runs,
                                config.seed, config.protocol,
                                config.test_size, n_jobs=config.threads)
        except ValueError as e:
            raise StageError('train', '*', e)
        with open(self.path('accuracy.csv'), 'w') as f:
            table.write_csv(f)
        with open(self.path('table.txt'), 'w') as f:
            f.write(table.format_runs())
        with open(self.path('best.txt'), 'w') as f:
            f.write(table.format_best())

    def stats(self):
        """Compare methods and strategies with pairwise t-tests."""
        path = self.need(self.path('accuracy.csv'), 'train')
        with open(path) as f:
            table = AccuracyTable.read_csv(f)
        pvalues = []
        for strategy in table.strategies():
            pvalues.extend(method_pvalues(table, strategy))
        pvalues.extend(strategy_pvalues(table))
        with open(self.path('pvalues.csv'), 'w') as f:
            write_pvalues(pvalues, f)
        with open(self.path('pvalues.txt'), 'w') as f:
            f.write(format_pvalues(pvalues))

    def plot(self):
        """Draw the diagrams of the requested samples under plots/.

        Without requested samples, the first sample of every class is
        drawn.  Essential points are moved to the largest finite value of
        the whole dataset.
        """
        ids, labels, class_names, diagram_sets = self.load_diagrams()
        wanted = self.plot_samples
        if not wanted:
            firsts = {}
            for sample_id, label in zip(ids, labels):
                firsts.setdefault(label, sample_id)
            wanted = [firsts[label] for label in sorted(firsts)]
        by_id = dict(zip(ids, diagram_sets))
        for sample_id in wanted:
            if sample_id not in by_id:
                raise MissingStageInput('no sample %s in %s'
                                        % (sample_id, self.path('dataset')))
        values = [v for s in diagram_sets for d in s
                  for v in d.finite_values()]
        global_max = max(values, default=0.0)
        os.makedirs(self.path('plots'), exist_ok=True)
        for sample_id in wanted:
            union = PersistenceDiagram.union(by_id[sample_id],
                                             sample_id=sample_id)
            plot_diagram(regularize(union, global_max, dims=()),
                         self.path('plots', sample_id + '.svg'),
                         title=sample_id)

    # Manifest

    def output_files(self):
        files = []
        for root, dirs, names in os.walk(self.output):
            dirs.sort()
            for name in sorted(names):
                path = os.path.join(root, name)
                relative = os.path.relpath(path, self.output)
                if relative != MANIFEST:
                    files.append(relative.replace(os.sep, '/'))
        return files

    def write_manifest(self, partial=False):
        """Record config, seed, version, stages and output checksums."""
        previous = self.read_manifest()
        stages = [s for s in STAGES
                  if s in previous.get('stages', []) or s in self.completed]
        manifest = {
            'version': version,
            'libraries': library_versions(),
            'seed': self.config.seed,
            'config': self.config.as_dict(),
            'stages': stages,
            'partial': partial,
            'files': {name: sha256(self.path(name))
                      for name in self.output_files()},
        }
        with open(self.path(MANIFEST), 'w') as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write('\n')
        return manifest

    def read_manifest(self):
        try:
            with open(self.path(MANIFEST)) as f:
                return json.load(f)
        except (IOError, ValueError):
            return {}


def run_pipeline(config, stages=STAGES, plot_samples=None):
    """Validate a configuration and run the pipeline stages."""
    config.validate()
    return Pipeline(config, plot_samples).run(stages)
