#!/usr/bin/env python
import os
import sys

from setuptools import setup


with open('NEWS.rst') as f:
    news = f.read()

long_description = """\
Compute persistence diagrams of point clouds, images and graphs, turn
them into fixed-length vectors (persistence images, landscapes,
silhouettes and Betti curves), and compare how well standard classifiers
separate the classes with each vectorization.

Latest changes
--------------

""" + '\n\n'.join(news.split('\n\n')[:2])

pkgdir = os.path.join('src', 'pytopoml')


def determine_version():
    sys.path.insert(0, 'src')
    from pytopoml.version import version
    del sys.path[0]
    return version


version = determine_version()

setup(
    name='pytopoml',
    version=version,
    license='GPL',
    platforms=['any'],
    description='Persistence diagram vectorizations for classification',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License (GPL)',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Programming Language :: Python :: 3.13',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires=">=3.9",
    scripts=['pytopoml'],
    packages=['pytopoml'],
    package_dir={'': 'src'},
    install_requires=[
        'numpy',
        'scipy',
        'scikit-learn',
        'joblib',
        'matplotlib',
    ],
    extras_require={
        'test': [
            'mock',
            'pytest',
        ],
    },
)
