"""Backend selection for the polynomial kernels.

The compiled module is used when it imports; ``ODEKIT_KERNEL=python``
forces the pure-Python fallback.
"""

import os

_want = os.environ.get("ODEKIT_KERNEL", "auto").lower()

if _want == "python":
    from . import _kernel_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernel as _impl
        BACKEND = "cython"
    except ImportError:
        if _want == "cython":
            raise
        from . import _kernel_py as _impl
        BACKEND = "python"

SHIFT = 16
MASK = 0xFFFF

guard = _impl.guard
divides = _impl.divides
decode = _impl.decode
p_add = _impl.p_add
p_sub = _impl.p_sub
p_neg = _impl.p_neg
p_scale = _impl.p_scale
p_mul_term = _impl.p_mul_term
p_mul = _impl.p_mul
p_deriv = _impl.p_deriv
p_shift_derivation = _impl.p_shift_derivation
p_divexact = _impl.p_divexact
p_eval_mod = _impl.p_eval_mod
p_univariate_mod = _impl.p_univariate_mod
p_univariate_many_mod = _impl.p_univariate_many_mod
p_derivation = _impl.p_derivation
