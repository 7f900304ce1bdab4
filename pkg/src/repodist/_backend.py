"""Selects the special-function kernel implementation at import.

The compiled ``_ckernels`` extension is preferred; the pure-Python
``_pykernels`` module is used when the extension is not built.
"""
import contextlib

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not compiled
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

kernels = _ckernels if _ckernels is not None else _pykernels


def available():
    return sorted(_BACKENDS)


def name():
    return kernels.NAME


def use(backend):
    """Switch the active kernel backend (``"cython"`` or ``"python"``)."""
    global kernels
    try:
        kernels = _BACKENDS[backend]
    except KeyError:
        raise ValueError(f"backend {backend!r} not available; have {available()}") from None


@contextlib.contextmanager
def using(backend):
    previous = kernels.NAME
    use(backend)
    try:
        yield
    finally:
        use(previous)
