#!/usr/bin/env python
"""
pytopoml benchmarks for optimisation work
"""

import optparse
import os
import sys
import time

import numpy as np


def setup_path():
    """Set up python path if running from a source tree."""
    pkgdir = os.path.join(os.path.dirname(__file__), 'src')
    if os.path.isdir(pkgdir):
        sys.path.insert(0, pkgdir)


setup_path()


from pytopoml.data import linked_twisted_map  # noqa: E402
from pytopoml.filtrations import (  # noqa: E402
    GreyImage,
    alpha_complex_2d,
    image_complex,
    rips_complex,
)
from pytopoml.persistence import reduce_boundary  # noqa: E402


class Stats(object):
    complexes = 0
    simplices = 0
    build_time = 0
    reduce_time = 0
    worst_time = 0
    columns_cleared = 0

    @property
    def ms_per_complex(self):
        if self.complexes == 0:
            return 0
        return (self.build_time + self.reduce_time) * 1000.0 / self.complexes

    @property
    def simplices_per_second(self):
        if self.reduce_time == 0:
            return 0
        return self.simplices / self.reduce_time


class Benchmark(object):

    def __init__(self, seed=0, how_many=10, points=1000, r=4.3,
                 max_hom_dim=1, profile=False):
        self.seed = seed
        self.how_many = how_many
        self.points = points
        self.r = r
        self.max_hom_dim = max_hom_dim
        self.profile = profile

    def run(self):
        self.stats = Stats()
        if self.profile:
            from profile import Profile
            profiler = Profile()
            profiler.runcall(self.benchmark)
        else:
            self.benchmark()
        if self.profile:
            import pstats
            self.stats.profile_stats = pstats.Stats(profiler)
        return self.stats

    def inputs(self):
        rng = np.random.default_rng(self.seed)
        for n in range(self.how_many):
            start = rng.uniform(0, 1, 2)
            yield linked_twisted_map(self.r, start, self.points)

    def benchmark(self):
        stats = self.stats
        for payload in self.inputs():
            start = time.time()
            complex = self.build(payload)
            built = time.time()
            state = reduce_boundary(complex, self.max_hom_dim)
            now = time.time()
            stats.complexes += 1
            stats.simplices += len(state.simplices)
            stats.columns_cleared += state.cleared
            stats.build_time += built - start
            stats.reduce_time += now - built
            stats.worst_time = max(stats.worst_time, now - start)


class AlphaBenchmark(Benchmark):

    def build(self, cloud):
        return alpha_complex_2d(cloud)


class RipsBenchmark(Benchmark):

    def build(self, cloud):
        return rips_complex(cloud, max_dim=self.max_hom_dim + 1)


class ImageBenchmark(Benchmark):
    """Lower-star filtrations of random square images with about as many
    pixels as the point clouds have points."""

    def inputs(self):
        rng = np.random.default_rng(self.seed)
        side = max(2, int(round(self.points ** 0.5)))
        for n in range(self.how_many):
            yield GreyImage(rng.uniform(0, 1, (side, side)))

    def build(self, img):
        return image_complex(img)


def main():
    parser = optparse.OptionParser()
    parser.add_option('-s', '--seed', default=0,
                      help='specify random seed [default: %default]',
                      action='store', dest='seed', type='int')
    parser.add_option('-n', '--samples', default=10,
                      help='number of samples [default: %default]',
                      action='store', dest='samples', type='int')
    parser.add_option('-N', '--points', default=1000,
                      help='points (or pixels) per sample [default: %default]',
                      action='store', dest='points', type='int')
    parser.add_option('-r', default=4.3,
                      help='linked twisted map parameter [default: %default]',
                      action='store', dest='r', type='float')
    parser.add_option('--rips', default=AlphaBenchmark,
                      help='benchmark Rips complexes [default: alpha]',
                      action='store_const', const=RipsBenchmark,
                      dest='benchmark')
    parser.add_option('--images',
                      help='benchmark lower-star image filtrations',
                      action='store_const', const=ImageBenchmark,
                      dest='benchmark')
    parser.add_option('-p', '--profile', default=False,
                      help='enable profiling [default: %default]',
                      action='store_true', dest='profile')
    opts, args = parser.parse_args()
    print("=== Parameters ===")
    print()
    print('random seed: %r' % opts.seed)
    print('samples: %d' % opts.samples)
    print('points: %d' % opts.points)
    print('r: %g' % opts.r)
    print('benchmark: %s' % opts.benchmark.__name__)
    benchmark = opts.benchmark(opts.seed, opts.samples, opts.points, opts.r,
                               profile=opts.profile)
    start_time = time.time()
    stats = benchmark.run()
    total_time = time.time() - start_time
    print()
    print("=== Results ===")
    print()
    print('total time: %.3f seconds' % total_time)
    print('complexes: %d' % stats.complexes)
    print('simplices: %d (%d columns cleared)' % (stats.simplices,
                                                  stats.columns_cleared))
    print('build time: %.3f seconds' % stats.build_time)
    print('reduction time: %.3f seconds' % stats.reduce_time)
    print('ms per complex: avg=%.3f max=%.3f' % (stats.ms_per_complex,
                                                 stats.worst_time * 1000.0))
    print('simplices reduced per second: %.0f' % stats.simplices_per_second)
    if opts.profile:
        print()
        print("=== Profile ===")
        print()
        stats.profile_stats.strip_dirs()
        stats.profile_stats.sort_stats('cumulative')
        stats.profile_stats.print_stats(30)


if __name__ == '__main__':
    main()
