"""
pytopoml command line processing
"""

import logging
import optparse
import sys

from pytopoml.config import ConfigError, RunConfig
from pytopoml.pipeline import (
    STAGES,
    MissingStageInput,
    StageError,
    run_pipeline,
)
from pytopoml.version import describe


log = logging.getLogger('pytopoml')


def setup_logging(verbose=False):
    """Send diagnostics to stderr as ``pytopoml: message``."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('pytopoml: %(message)s'))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def error(message):
    sys.exit('pytopoml: error: %s' % message)


def main(argv=None):
    """Run pytopoml."""
    parser = optparse.OptionParser(
        usage='%prog [options]',
        version=describe(),
        description='Compute persistence diagrams, vectorize them and'
                    ' classify the vectors.')
    parser.add_option('-c', '--config', metavar='FILE',
                      help='read the experiment configuration from FILE',
                      action='store', dest='config')
    parser.add_option('--save-config', metavar='FILE',
                      help='write the effective configuration to FILE and'
                           ' exit',
                      action='store', dest='save_config')
    parser.add_option('--seed', type='int', default=None,
                      help='override the random seed',
                      action='store', dest='seed')
    parser.add_option('-j', '--threads', type='int', default=None,
                      help='number of worker processes (-1: all CPUs)',
                      action='store', dest='threads')
    parser.add_option('-o', '--out', metavar='DIR', default=None,
                      help='output directory (overrides $PYTOPOML_OUTPUT)',
                      action='store', dest='output')
    parser.add_option('-s', '--stage', metavar='STAGE', default=[],
                      help='run only this stage (repeatable): %s'
                           % ', '.join(STAGES),
                      action='append', dest='stages')
    parser.add_option('--sample', metavar='ID', default=[],
                      help='sample to draw in the plot stage (repeatable)',
                      action='append', dest='samples')
    parser.add_option('-v', '--verbose', default=False,
                      help='report progress',
                      action='store_true', dest='verbose')
    parser.add_option('-d', '--debug', default=False,
                      help='show debug timings',
                      action='store_true', dest='debug')
    opts, args = parser.parse_args(argv)
    if args:
        error('unexpected arguments: %s' % ' '.join(args))
    setup_logging(opts.verbose or opts.debug)
    for stage in opts.stages:
        if stage not in STAGES:
            error('invalid stage: %s' % stage)
    config = RunConfig()
    try:
        if opts.config:
            config.load(opts.config)
        config.apply_overrides(opts.seed, opts.threads, opts.output)
        if opts.save_config:
            config.validate()
            config.save(opts.save_config)
            return
        pipeline = run_pipeline(config, opts.stages or STAGES, opts.samples)
    except StageError as e:
        if not e.user_error:
            log.error('internal error in %s', e, exc_info=e.error)
            sys.exit(2)
        error(e)
    except (ConfigError, MissingStageInput, ValueError, IOError) as e:
        error(e)
    except Exception as e:
        log.error('internal error: %s', e, exc_info=True)
        sys.exit(2)
    if opts.debug:
        log.info('timings: %s', pipeline.debug_timings())
