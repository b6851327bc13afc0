"""Photon-counting state reconstruction toolkit.

Thin wrapper over the compiled extension; everything lives in ``_wigrec``.
"""

try:
    from ._wigrec import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _wigrec import *  # noqa: F401,F403  (build-tree layout)
