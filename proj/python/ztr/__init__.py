"""Exact checks for weighted Laurent series, lp jets, and normed complexes.

Thin re-export of the _ztr extension. Rationals are passed as "p/q" strings
in both directions so no value is ever rounded at the boundary.
"""

try:
    from _ztr import *  # noqa: F401,F403
    from _ztr import __version__  # noqa: F401
except ImportError as exc:  # pragma: no cover
    raise ImportError(
        "the _ztr extension is not importable; configure with -DZTR_BUILD_PYTHON=ON "
        "and put the build directory on PYTHONPATH, or install the wheel"
    ) from exc
