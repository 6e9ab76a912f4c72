"""
Persistence diagram plots
"""

import math

import matplotlib


matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402


SVG_HASH_SALT = 'pytopoml'

# Marker and colour per homology dimension
STYLES = [
    ('o', '#1f77b4'),
    ('^', '#d62728'),
    ('s', '#2ca02c'),
    ('D', '#9467bd'),
]


def _style(k):
    return STYLES[k % len(STYLES)]


def diagram_limits(diagram):
    """Return the axis range of a diagram plot.

        >>> from pytopoml.diagram import PersistenceDiagram
        >>> diagram_limits(PersistenceDiagram())
        (0.0, 1.0)
        >>> diagram_limits(PersistenceDiagram([(0.5, 2)]))
        (0.0, 2.1)

    """
    values = [v for p in diagram.points for v in (p.birth, p.death)
              if math.isfinite(v)]
    if not values:
        return 0.0, 1.0
    lo = min(0.0, min(values))
    hi = max(values)
    if hi <= lo:
        hi = lo + 1.0
    return lo, round(hi + (hi - lo) * 0.05, 12)


def plot_diagram(diagram, path, title=None):
    """Write a persistence diagram as an SVG scatter plot.

    Points of each homology dimension get their own marker; the diagonal
    is drawn across the plot.  Regularize essential points first: infinite
    deaths are not plotted.
    """
    lo, hi = diagram_limits(diagram)
    with matplotlib.rc_context({'svg.hashsalt': SVG_HASH_SALT,
                                'svg.fonttype': 'none'}):
        fig, ax = plt.subplots(figsize=(5, 5))
        try:
            ax.plot([lo, hi], [lo, hi], color='#666666', linewidth=1,
                    label='diagonal')
            for k in diagram.dimensions():
                points = [p for p in diagram.dimension(k).points
                          if math.isfinite(p.death)]
                marker, colour = _style(k)
                ax.scatter([p.birth for p in points],
                           [p.death for p in points], marker=marker,
                           color=colour, s=18, label='H%d' % k)
            ax.set_xlim(lo, hi)
            ax.set_ylim(lo, hi)
            ax.set_xlabel('birth')
            ax.set_ylabel('death')
            if title:
                ax.set_title(title)
            ax.legend(loc='lower right')
            fig.savefig(path, format='svg', metadata={'Date': None})
        finally:
            plt.close(fig)
    return path
