#!/usr/bin/env python
import json
import os
import pickle
import shutil
import tempfile


def small_config(output, **settings):
    from pytopoml.config import RunConfig
    defaults = dict(r_values=[2.0, 4.3], orbits_per_class=4,
                    points_per_orbit=30, methods=['BC', 'PL'],
                    resolutions=[5], pl_layers=2, classifier_kinds=['knn'],
                    knn_ks=[1], runs=2, output=output)
    defaults.update(settings)
    return RunConfig(**defaults)


def read_manifest(output):
    with open(os.path.join(output, 'manifest.json')) as f:
        return json.load(f)


def doctest_run_pipeline():
    """A complete run on a tiny dynamic dataset

        >>> from pytopoml.pipeline import run_pipeline
        >>> tmpdir = tempfile.mkdtemp(prefix='pytopoml-test-')
        >>> output = os.path.join(tmpdir, 'a')
        >>> pipeline = run_pipeline(small_config(output))
        >>> pipeline.completed
        ['generate', 'diagrams', 'vectorize', 'train', 'stats', 'plot']
        >>> pipeline.debug_timings().startswith('generate ')
        True

        >>> manifest = read_manifest(output)
        >>> manifest['stages'] == pipeline.completed, manifest['partial']
        (True, False)
        >>> manifest['seed'], manifest['config']['dataset']['kind']
        (0, 'dynamic')
        >>> sorted(manifest['libraries'])
        ['joblib', 'matplotlib', 'numpy', 'scikit-learn', 'scipy']
        >>> files = sorted(manifest['files'])
        >>> len(files)
        33
        >>> [name for name in files if '/' not in name]
        ['accuracy.csv', 'best.txt', 'pvalues.csv', 'pvalues.txt', 'table.txt']
        >>> [name for name in files if name.startswith('plots/')]
        ['plots/orbit-0000.svg', 'plots/orbit-0004.svg']
        >>> [name for name in files if name.startswith('vectors/H0_')]
        ['vectors/H0_BC_r_5.csv', 'vectors/H0_PL_k_2_r_5.csv']

    Every sample has a diagram set with one filtration

        >>> with open(os.path.join(output, 'diagrams', 'orbit-0000.txt')) as f:
        ...     print(f.readline(), end='')
        filtration alpha

    Two methods give one p-value per strategy, four strategies six more

        >>> with open(os.path.join(output, 'pvalues.csv')) as f:
        ...     len(f.readlines()) - 1
        10

        >>> shutil.rmtree(tmpdir)

    """


def doctest_run_pipeline_is_reproducible():
    """The same seed gives byte-identical output files

        >>> from pytopoml.pipeline import run_pipeline
        >>> tmpdir = tempfile.mkdtemp(prefix='pytopoml-test-')
        >>> a = os.path.join(tmpdir, 'a')
        >>> b = os.path.join(tmpdir, 'b')
        >>> pipeline = run_pipeline(small_config(a))
        >>> pipeline = run_pipeline(small_config(b, threads=2))
        >>> read_manifest(a)['files'] == read_manifest(b)['files']
        True

        >>> shutil.rmtree(tmpdir)

    """


def doctest_run_pipeline_stage_by_stage():
    """Stages can run one at a time and need their inputs

        >>> from pytopoml.pipeline import run_pipeline
        >>> tmpdir = tempfile.mkdtemp(prefix='pytopoml-test-')
        >>> output = os.path.join(tmpdir, 'out')
        >>> config = small_config(output, methods=['BC'])
        >>> run_pipeline(config, ['train'])  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        pytopoml.pipeline.MissingStageInput: .../index.csv not found; run...
        >>> manifest = read_manifest(output)
        >>> manifest['stages'], manifest['partial']
        ([], True)

        >>> pipeline = run_pipeline(config, ['generate'])
        >>> pipeline = run_pipeline(config, ['diagrams', 'train'])
        >>> read_manifest(output)['stages']
        ['generate', 'diagrams', 'train']
        >>> os.path.exists(os.path.join(output, 'vectors'))
        False

        >>> pipeline = run_pipeline(config, ['plot'], ['orbit-0003'])
        >>> sorted(os.listdir(os.path.join(output, 'plots')))
        ['orbit-0003.svg']
        >>> run_pipeline(config, ['plot'], ['nope'])  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        pytopoml.pipeline.MissingStageInput: no sample nope in .../dataset

        >>> run_pipeline(config, ['cleanup'])
        Traceback (most recent call last):
          ...
        ValueError: unknown stage: cleanup

        >>> shutil.rmtree(tmpdir)

    """


def doctest_run_pipeline_validates_first():
    """Configuration errors stop the run before any output is written

        >>> from pytopoml.pipeline import run_pipeline
        >>> tmpdir = tempfile.mkdtemp(prefix='pytopoml-test-')
        >>> output = os.path.join(tmpdir, 'out')
        >>> run_pipeline(small_config(output, runs=0))
        Traceback (most recent call last):
          ...
        pytopoml.config.ConfigError: runs must be positive
        >>> os.path.exists(output)
        False

        >>> shutil.rmtree(tmpdir)

    """


def doctest_StageError():
    """Tests for StageError

        >>> from pytopoml.pipeline import StageError
        >>> e = StageError('diagrams', 'orbit-0001', ValueError('bad cloud'))
        >>> str(e), e.user_error
        ('diagrams stage, sample orbit-0001: bad cloud', True)
        >>> StageError('train', '*', KeyError('x')).user_error
        False

    StageErrors cross process boundaries

        >>> copy = pickle.loads(pickle.dumps(e))
        >>> copy.stage, copy.sample_id, copy.error
        ('diagrams', 'orbit-0001', ValueError('bad cloud'))

    """


def doctest_sample_diagrams():
    """Tests for sample_diagrams and DiagramSettings

        >>> from pytopoml.config import RunConfig
        >>> from pytopoml.data import Sample
        >>> from pytopoml.filtrations import PointCloud
        >>> from pytopoml.pipeline import DiagramSettings, sample_diagrams
        >>> settings = DiagramSettings(RunConfig())
        >>> triangle = Sample('t', 0, PointCloud([(0, 0), (4, 0), (0, 3)]))
        >>> [(d.filtration, d.sample_id, d.max_dimension)
        ...  for d in sample_diagrams((settings, triangle))]
        [('alpha', 't', 1)]

    Collinear clouds fall back to a Rips complex on the alpha scale

        >>> line = Sample('l', 0, PointCloud([(0, 0), (1, 0), (2, 0)]))
        >>> [(name, [K.value(s) for s in K.sorted_simplices()])
        ...  for name, K in settings.complexes(line)]
        [('alpha', [0.0, 0.0, 0.0, 0.25, 0.25, 1.0, 1.0])]

    The fallback drops repeated points first, so an orbit stuck at a fixed
    point is a single vertex

        >>> from pytopoml.data import linked_twisted_map
        >>> stuck = Sample('f', 0, linked_twisted_map(4.3, (0, 0), 150))
        >>> [(name, len(K)) for name, K in settings.complexes(stuck)]
        [('alpha', 1)]

    Other failures name the sample

        >>> empty = Sample('e', 0, PointCloud([]))
        >>> sample_diagrams((settings, empty))  # doctest: +ELLIPSIS
        Traceback (most recent call last):
          ...
        pytopoml.pipeline.StageError: diagrams stage, sample e: the...

    """
