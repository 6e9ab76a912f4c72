"""
pytopoml version numbers
"""

import importlib

# zest.releaser reads __version__; the rest of the package uses version.
__version__ = '0.1.0.dev0'
version = __version__

# Libraries whose versions can change the numbers a run produces
LIBRARIES = [
    ('numpy', 'numpy'),
    ('scipy', 'scipy'),
    ('scikit-learn', 'sklearn'),
    ('joblib', 'joblib'),
    ('matplotlib', 'matplotlib'),
]


def library_versions():
    """Return {distribution name: version} for the numeric stack.

        >>> sorted(library_versions())
        ['joblib', 'matplotlib', 'numpy', 'scikit-learn', 'scipy']

    """
    versions = {}
    for name, module in LIBRARIES:
        try:
            versions[name] = importlib.import_module(module).__version__
        except (ImportError, AttributeError):  # pragma: nocover
            versions[name] = 'unknown'
    return versions


def describe():
    """Return the version line printed by ``pytopoml --version``.

        >>> describe().startswith('pytopoml %s (numpy ' % version)
        True

    """
    versions = library_versions()
    return 'pytopoml %s (%s)' % (version, ', '.join(
        '%s %s' % (name, versions[name]) for name, module in LIBRARIES))
