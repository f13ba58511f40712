"""Special functions behind every CDF and quantile in the package.

The heavy lifting lives in a compiled kernel (``_kernels``) when it was
built at install time, and otherwise in the pure-Python twin
``_pykernels``. Set ``LOCSCALE_W1_PURE_PYTHON=1`` to force the fallback.
``BACKEND`` names the one in use.

Public functions validate their arguments and raise
:class:`~locscale_w1.errors.DomainError`; the ``*_vec`` helpers skip
validation and are meant for callers that have already checked inputs.
"""

import math
import os

from ..errors import DomainError

if os.environ.get("LOCSCALE_W1_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _k
    BACKEND = "python"
else:
    try:
        from . import _kernels as _k
        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _k
        BACKEND = "python"

TAIL_LOW = 1e-300
TAIL_HIGH = 1.0 - 1e-16

__all__ = [
    "BACKEND",
    "erf",
    "std_normal_cdf",
    "std_normal_quantile",
    "quantile_saturates",
    "log_gamma",
    "gamma_fn",
    "reg_inc_gamma",
    "reg_inc_gamma_upper",
    "reg_inc_gamma_inv",
    "reg_inc_gamma_upper_inv",
    "reg_inc_beta",
    "reg_inc_beta_inv",
    "student_t_cdf",
    "student_t_quantile",
]


def _finite(name, x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def _positive(name, x):
    x = float(x)
    if not (x > 0.0) or math.isinf(x):
        raise DomainError(f"{name} must be a positive finite number, got {x!r}")
    return x


def _open_unit(name, q):
    q = float(q)
    if not (0.0 < q < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {q!r}")
    return q


def erf(x: float) -> float:
    """Error function."""
    return math.erf(_finite("x", x))


def std_normal_cdf(x: float) -> float:
    x = float(x)
    if math.isnan(x):
        raise DomainError("x must not be NaN")
    return _k.ndtr(x)


def std_normal_quantile(q: float) -> float:
    """Inverse of :func:`std_normal_cdf`.

    Saturates to -inf for q below 1e-300; use :func:`quantile_saturates`
    to detect that case. ``TAIL_HIGH`` rounds to the largest double below
    one, so the upper threshold never trips: every valid q has a finite
    quantile (at most about 8.21).
    """
    return _k.ndtri(_open_unit("q", q))


def quantile_saturates(q: float) -> bool:
    """True when a quantile at ``q`` is reported as an infinite value."""
    return q < TAIL_LOW or q > TAIL_HIGH


def log_gamma(x: float) -> float:
    return math.lgamma(_positive("x", x))


def gamma_fn(x: float) -> float:
    return math.gamma(_positive("x", x))


def _check_gamma_args(a, x):
    a = _positive("a", a)
    x = float(x)
    if not (x >= 0.0):
        raise DomainError(f"x must be >= 0, got {x!r}")
    return a, x


def reg_inc_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    a, x = _check_gamma_args(a, x)
    return _k.gammainc(a, x)


def reg_inc_gamma_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation."""
    a, x = _check_gamma_args(a, x)
    return _k.gammaincc(a, x)


def reg_inc_gamma_inv(a: float, p: float) -> float:
    """Solve P(a, x) = p for x."""
    return _k.gammainc_inv(_positive("a", a), _open_unit("p", p))


def reg_inc_gamma_upper_inv(a: float, q: float) -> float:
    """Solve Q(a, x) = q for x."""
    return _k.gammaincc_inv(_positive("a", a), _open_unit("q", q))


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    a = _positive("a", a)
    b = _positive("b", b)
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    return _k.betainc(a, b, x)


def reg_inc_beta_inv(a: float, b: float, p: float) -> float:
    """Solve I_x(a, b) = p for x."""
    return _k.betainc_inv(_positive("a", a), _positive("b", b), _open_unit("p", p))


def student_t_cdf(nu: float, t: float) -> float:
    t = float(t)
    if math.isnan(t):
        raise DomainError("t must not be NaN")
    return _k.t_cdf(_positive("nu", nu), t)


def student_t_quantile(nu: float, q: float) -> float:
    return _k.t_ppf(_positive("nu", nu), _open_unit("q", q))


# unchecked array helpers
ndtr_vec = _k.ndtr_vec
ndtri_vec = _k.ndtri_vec
gamma_ppf_vec = _k.gamma_ppf_vec
t_ppf_vec = _k.t_ppf_vec
