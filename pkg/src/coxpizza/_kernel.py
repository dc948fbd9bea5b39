"""Kernel selection and packed-monomial helpers.

The compiled extension (coxpizza._accel) is used when importable and the
problem fits its limits (arity <= 8 so keys fit in 64 bits); otherwise the
pure Python kernel takes over.  Force a choice with PIZZA_KERNEL=pure or
PIZZA_KERNEL=cython.
"""

from __future__ import annotations

import os
from array import array
from typing import Sequence, Tuple

from . import _kernel_py

accumulate_tensor_pure = _kernel_py.accumulate_tensor
accumulate_tensor_compiled = None

_choice = os.environ.get("PIZZA_KERNEL", "auto").lower()
if _choice not in ("auto", "pure", "cython"):
    raise ValueError(f"PIZZA_KERNEL must be auto, pure or cython, got {_choice!r}")

if _choice in ("auto", "cython"):
    try:
        from . import _accel

        accumulate_tensor_compiled = _accel.accumulate_tensor
    except ImportError:
        if _choice == "cython":
            raise ImportError(
                "PIZZA_KERNEL=cython requested but the compiled kernel is not built; "
                "run `pip install -e .` or `python setup.py build_ext --inplace`"
            )

KERNEL_IMPLEMENTATION = "cython" if accumulate_tensor_compiled is not None else "pure"

# One exponent per byte: arity <= 8 fits a C uint64, which is all the
# compiled kernel handles; the pure kernel takes any arity via Python ints.
COMPILED_MAX_ARITY = 8


def kernel_for(arity: int):
    """The fastest kernel applicable at this arity, and its name."""
    if accumulate_tensor_compiled is not None and arity <= COMPILED_MAX_ARITY:
        return accumulate_tensor_compiled, "cython"
    return accumulate_tensor_pure, "pure"


def pack_exponents(exponents: Sequence[int]) -> int:
    """Pack an exponent vector into an int, 8 bits per variable."""
    key = 0
    for i, e in enumerate(exponents):
        if not 0 <= e < 256:
            raise ValueError(f"exponent {e} out of packable range [0, 255]")
        key |= e << (8 * i)
    return key


def unpack_exponents(key: int, arity: int) -> Tuple[int, ...]:
    """Inverse of pack_exponents."""
    return tuple((key >> (8 * i)) & 0xFF for i in range(arity))


def key_container(keys: Sequence[int], arity: int):
    """Key storage: a uint64 buffer when the compiled kernel could run,
    else a plain list (arbitrary-size ints)."""
    if arity <= COMPILED_MAX_ARITY:
        return array("Q", keys)
    return list(keys)
