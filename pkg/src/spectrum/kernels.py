"""Backend selection for the combinatorial kernels.

The compiled extension is used when it imports; setting ``SPECTRUM_PURE_PYTHON=1``
forces the pure-Python fallback.
"""

import os

if os.environ.get("SPECTRUM_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
max_clique = _impl.max_clique
chromatic_number = _impl.chromatic_number
strong_adjacency = _impl.strong_adjacency


def backends():
    """Return every importable backend module, compiled first."""
    from . import _kernels_py

    mods = []
    try:
        from . import _kernels

        mods.append(_kernels)
    except ImportError:
        pass
    mods.append(_kernels_py)
    return mods
