"""Engine selection: the compiled kernel when importable, pure python otherwise.

``SWEEPHULL_ENGINE=python`` in the environment forces the fallback for
"auto" callers without touching code; an explicit engine="compiled" argument
still wins over it (and raises if the extension is missing).
"""

from __future__ import annotations

import os

try:
    from . import _kernel  # type: ignore[attr-defined]
except ImportError:
    _kernel = None

_VALID = ("auto", "python", "compiled")


def compiled_available() -> bool:
    return _kernel is not None


def resolve(engine: str) -> str:
    if engine not in _VALID:
        raise ValueError(f"engine must be one of {_VALID}, got {engine!r}")
    if engine == "auto":
        env = os.environ.get("SWEEPHULL_ENGINE", "")
        if env in ("python", "compiled"):
            engine = env
        else:
            return "compiled" if _kernel is not None else "python"
    if engine == "compiled" and _kernel is None:
        raise RuntimeError("compiled kernel is not available; rebuild the extension")
    return engine


def kernel():
    if _kernel is None:
        raise RuntimeError("compiled kernel is not available")
    return _kernel
