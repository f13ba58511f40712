"""Location-scale families X = alpha + beta * Z.

Each family fixes a standard variable Z; the registry here knows its CDF,
quantile, low moments and E|Z|, and the mean of |alpha + beta Z| for any
signs of alpha and beta. That folded mean is the 1-Wasserstein distance
between two members of a family (see :mod:`locscale_w1.wasserstein`).

Standard parameterizations:

=============  ===========================================
gaussian       N(0, 1)
laplace        density exp(-|x|) / 2
logistic       scale 1
uniform        U(0, 1)
exponential    rate 1 (so beta = 1 / lambda)
gamma          Gamma(k, scale 1)
weibull        Weibull(k, scale 1)
rayleigh       scale 1
studentt       Student's t with nu degrees of freedom
=============  ===========================================
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import specfun
from ._rng import uniforms
from .errors import ConvergenceError, DomainError
from .quadrature import integrate_quantile

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)

CLOSED_FORM = "closed-form"
NUMERIC = "numeric"


class FamilyTag(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    LOGISTIC = "logistic"
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    RAYLEIGH = "rayleigh"
    STUDENTT = "studentt"


SHAPED = frozenset({FamilyTag.GAMMA, FamilyTag.WEIBULL, FamilyTag.STUDENTT})
SYMMETRIC = frozenset({FamilyTag.GAUSSIAN, FamilyTag.LAPLACE, FamilyTag.LOGISTIC, FamilyTag.STUDENTT})
NONNEGATIVE = frozenset({FamilyTag.EXPONENTIAL, FamilyTag.GAMMA, FamilyTag.WEIBULL, FamilyTag.RAYLEIGH})


@dataclass(frozen=True)
class Family:
    """A standard distribution, identified by tag and (where needed) shape."""

    tag: FamilyTag
    shape: Optional[float] = None

    def __post_init__(self):
        tag = self.tag
        if not isinstance(tag, FamilyTag):
            try:
                tag = FamilyTag(str(tag).lower())
            except ValueError:
                raise DomainError(f"unknown family {self.tag!r}") from None
            object.__setattr__(self, "tag", tag)
        if tag in SHAPED:
            if self.shape is None:
                raise DomainError(f"family {tag.value} needs a shape parameter")
            shape = float(self.shape)
            if not (shape > 0.0) or math.isinf(shape):
                raise DomainError(f"shape must be positive and finite, got {self.shape!r}")
            if tag is FamilyTag.STUDENTT and shape <= 1.0:
                raise DomainError(f"studentt needs nu > 1 for E|Z| to exist, got {shape!r}")
            object.__setattr__(self, "shape", shape)
        elif self.shape is not None:
            raise DomainError(f"family {tag.value} takes no shape parameter")

    @classmethod
    def of(cls, name: str, shape: Optional[float] = None) -> "Family":
        return cls(FamilyTag(name.lower()) if isinstance(name, str) else name, shape)

    def __str__(self):
        if self.shape is None:
            return self.tag.value
        return f"{self.tag.value}({self.shape:g})"


@dataclass(frozen=True)
class LocScale:
    """The distribution of alpha + beta * Z."""

    family: Family
    alpha: float
    beta: float

    def __post_init__(self):
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not math.isfinite(alpha):
            raise DomainError(f"location must be finite, got {self.alpha!r}")
        if not (beta > 0.0) or math.isinf(beta):
            raise DomainError(f"scale must be positive and finite, got {self.beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def mean(self) -> float:
        return self.alpha + self.beta * mean_std(self.family)

    @property
    def sd(self) -> float:
        return self.beta * sd_std(self.family)


@dataclass(frozen=True)
class FoldedParams:
    """Y = alpha_y + beta_y * Z with unrestricted signs."""

    family: Family
    alpha_y: float
    beta_y: float

    def __post_init__(self):
        for name in ("alpha_y", "beta_y"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)


class Evaluation(NamedTuple):
    """A value together with how it was obtained."""

    value: float
    provenance: str

    @property
    def closed_form(self) -> bool:
        return self.provenance == CLOSED_FORM


# -- standard CDF / quantile --------------------------------------------------

def _ppf(fam: Family, v: np.ndarray, upper: bool = False) -> np.ndarray:
    """Quantile at q = v, or at q = 1 - v when ``upper``; no validation."""
    v = np.asarray(v, dtype=np.float64)
    tag = fam.tag
    if tag is FamilyTag.GAUSSIAN:
        z = specfun.ndtri_vec(v)
        return -z if upper else z
    if tag is FamilyTag.LAPLACE:
        with np.errstate(divide="ignore"):
            lo = np.log(2.0 * np.minimum(v, 0.5))
            hi = -np.log(2.0 * (1.0 - np.maximum(v, 0.5)))
        z = np.where(v <= 0.5, lo, hi)
        return -z if upper else z
    if tag is FamilyTag.LOGISTIC:
        with np.errstate(divide="ignore"):
            z = np.log(v) - np.log1p(-v)
        return -z if upper else z
    if tag is FamilyTag.UNIFORM:
        return 1.0 - v if upper else v.copy()
    if tag is FamilyTag.STUDENTT:
        z = specfun.t_ppf_vec(fam.shape, v)
        return -z if upper else z
    if tag is FamilyTag.GAMMA:
        return specfun.gamma_ppf_vec(fam.shape, v, upper)
    # nonnegative families built on an exponential variate E = -log(1 - q)
    with np.errstate(divide="ignore"):
        e = -np.log(v) if upper else -np.log1p(-v)
    if tag is FamilyTag.EXPONENTIAL:
        return e
    if tag is FamilyTag.WEIBULL:
        return e ** (1.0 / fam.shape)
    if tag is FamilyTag.RAYLEIGH:
        return np.sqrt(2.0 * e)
    raise DomainError(f"unsupported family {fam}")


def _cdf_scalar(fam: Family, x: float) -> float:
    tag = fam.tag
    if tag is FamilyTag.GAUSSIAN:
        return specfun.std_normal_cdf(x)
    if tag is FamilyTag.LAPLACE:
        return 0.5 * math.exp(x) if x < 0.0 else 1.0 - 0.5 * math.exp(-x)
    if tag is FamilyTag.LOGISTIC:
        if x >= 0.0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)
    if tag is FamilyTag.UNIFORM:
        return min(max(x, 0.0), 1.0)
    if tag is FamilyTag.STUDENTT:
        return specfun.student_t_cdf(fam.shape, x)
    if x <= 0.0:
        return 0.0
    if tag is FamilyTag.EXPONENTIAL:
        return -math.expm1(-x)
    if tag is FamilyTag.GAMMA:
        return specfun.reg_inc_gamma(fam.shape, x)
    if tag is FamilyTag.WEIBULL:
        # x**k can overflow; exp(k log x) cannot raise
        return -math.expm1(-math.exp(min(fam.shape * math.log(x), 709.0)))
    if tag is FamilyTag.RAYLEIGH:
        return -math.expm1(-0.5 * x * x)
    raise DomainError(f"unsupported family {fam}")


def std_cdf(fam: Family, x):
    """CDF of the standard variable Z; accepts a scalar or an array."""
    if np.ndim(x) == 0:
        x = float(x)
        if math.isnan(x):
            raise DomainError("x must not be NaN")
        return _cdf_scalar(fam, x)
    arr = np.asarray(x, dtype=np.float64)
    if np.isnan(arr).any():
        raise DomainError("x must not contain NaN")
    return np.array([_cdf_scalar(fam, float(v)) for v in arr.ravel()]).reshape(arr.shape)


def _check_levels(q):
    arr = np.asarray(q, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("probability levels must lie in (0, 1)")
    return arr


def std_quantile(fam: Family, q):
    """Quantile of Z at level q in (0, 1); scalar or array."""
    arr = _check_levels(q)
    out = _ppf(fam, arr)
    return float(out) if np.ndim(q) == 0 else out


def std_isf(fam: Family, s):
    """Quantile of Z at level 1 - s, computed without forming 1 - s."""
    arr = _check_levels(s)
    out = _ppf(fam, arr, upper=True)
    return float(out) if np.ndim(s) == 0 else out


# -- moments ------------------------------------------------------------------

def mean_std(fam: Family) -> float:
    """E[Z]."""
    tag = fam.tag
    if tag in SYMMETRIC:
        return 0.0
    if tag is FamilyTag.UNIFORM:
        return 0.5
    if tag is FamilyTag.EXPONENTIAL:
        return 1.0
    if tag is FamilyTag.GAMMA:
        return fam.shape
    if tag is FamilyTag.WEIBULL:
        return math.gamma(1.0 + 1.0 / fam.shape)
    return SQRT_PI_OVER_2  # rayleigh


def sd_std(fam: Family) -> float:
    """Standard deviation of Z; DomainError when it does not exist."""
    tag = fam.tag
    if tag is FamilyTag.GAUSSIAN:
        return 1.0
    if tag is FamilyTag.LAPLACE:
        return math.sqrt(2.0)
    if tag is FamilyTag.LOGISTIC:
        return math.pi / math.sqrt(3.0)
    if tag is FamilyTag.UNIFORM:
        return 1.0 / math.sqrt(12.0)
    if tag is FamilyTag.EXPONENTIAL:
        return 1.0
    if tag is FamilyTag.GAMMA:
        return math.sqrt(fam.shape)
    if tag is FamilyTag.WEIBULL:
        g1 = math.gamma(1.0 + 1.0 / fam.shape)
        return math.sqrt(max(math.gamma(1.0 + 2.0 / fam.shape) - g1 * g1, 0.0))
    if tag is FamilyTag.RAYLEIGH:
        return math.sqrt((4.0 - math.pi) / 2.0)
    nu = fam.shape
    if nu <= 2.0:
        raise DomainError(f"studentt variance needs nu > 2, got {nu:g}")
    return math.sqrt(nu / (nu - 2.0))


def mean_abs_std(fam: Family) -> float:
    """E|Z|."""
    tag = fam.tag
    if tag is FamilyTag.GAUSSIAN:
        return SQRT_2_OVER_PI
    if tag is FamilyTag.LAPLACE:
        return 1.0
    if tag is FamilyTag.LOGISTIC:
        return 2.0 * math.log(2.0)
    if tag is FamilyTag.STUDENTT:
        nu = fam.shape
        return (2.0 * math.sqrt(nu / math.pi)
                * math.exp(math.lgamma(0.5 * (nu + 1.0)) - math.lgamma(0.5 * nu)) / (nu - 1.0))
    # Z >= 0 (or on [0, 1]) so E|Z| = E[Z]
    return mean_std(fam)


# -- folded mean --------------------------------------------------------------

def _quadrature_power(fam: Family) -> int:
    # q = t**m removes the q**(-1/nu) tail singularity of Student's t
    if fam.tag is FamilyTag.STUDENTT:
        nu = fam.shape
        return max(2, math.ceil(2.0 * nu / (nu - 1.0)))
    return 2


def sign_change_level(fam: Family, alpha: float, beta: float) -> Optional[float]:
    """Level q* where alpha + beta * Q(q) changes sign, if it is interior."""
    if beta == 0.0:
        return None
    q = std_cdf(fam, -alpha / beta)
    return q if 0.0 < q < 1.0 else None


def folded_mean_numeric(fam: Family, alpha: float, beta: float, abs_tol: float = 1e-10) -> float:
    """E|alpha + beta Z| by adaptive quadrature over the quantile level."""
    scale = max(abs(alpha), abs(beta))
    if scale == 0.0:
        return 0.0
    a = alpha / scale
    b = beta / scale

    def h(v, upper):
        z = _ppf(fam, v, upper)
        return np.abs(a + b * z)

    qstar = sign_change_level(fam, a, b)
    kinks = () if qstar is None else (qstar,)
    try:
        res = integrate_quantile(h, kinks, power=_quadrature_power(fam),
                                 abs_tol=abs_tol, rel_tol=1e-13)
    except ConvergenceError as exc:
        raise ConvergenceError(str(exc), exc.estimate * scale, exc.error * scale) from None
    return res.value * scale


def _folded_closed(tag: FamilyTag, fam: Family, a: float, b: float) -> Optional[float]:
    """Closed form for canonical parameters (b > 0), or None if there is none."""
    if tag is FamilyTag.GAUSSIAN:
        a = abs(a)
        r = a / b
        return a * math.erf(r / math.sqrt(2.0)) + b * SQRT_2_OVER_PI * math.exp(-0.5 * r * r)
    if tag is FamilyTag.LAPLACE:
        a = abs(a)
        return a + b * math.exp(-a / b)
    if tag is FamilyTag.LOGISTIC:
        a = abs(a)
        return a + 2.0 * b * math.log1p(math.exp(-a / b))
    if tag is FamilyTag.UNIFORM:
        lo, hi = min(a, a + b), max(a, a + b)
        if lo >= 0.0 or hi <= 0.0:
            return 0.5 * abs(lo + hi)
        return 0.5 * (lo * lo + hi * hi) / (hi - lo)
    if tag is FamilyTag.STUDENTT:
        if a == 0.0:
            return b * mean_abs_std(fam)
        return None
    # Z >= 0: Y keeps one sign when a and b agree
    if a >= 0.0:
        return a + b * mean_std(fam)
    return None


def folded_mean(p: FoldedParams) -> Evaluation:
    """E|Y| for Y = alpha_y + beta_y Z.

    Closed forms cover the symmetric families and the uniform for all
    signs, the nonnegative families when alpha_y and beta_y share a sign,
    and Student's t when alpha_y = 0. Everything else is integrated
    numerically and labelled ``"numeric"``.
    """
    fam = p.family
    a, b = p.alpha_y, p.beta_y
    if b == 0.0:
        return Evaluation(abs(a), CLOSED_FORM)
    # |Y| has the same law as |-Y|
    if b < 0.0:
        a, b = -a, -b
    tag = fam.tag
    if tag is FamilyTag.RAYLEIGH:
        # Rayleigh(1) = sqrt(2) * Weibull(k=2)
        fam = Family(FamilyTag.WEIBULL, 2.0)
        tag = FamilyTag.WEIBULL
        b = math.sqrt(2.0) * b
    if tag in SYMMETRIC:
        a = abs(a)
    value = _folded_closed(tag, fam, a, b)
    if value is not None:
        return Evaluation(value, CLOSED_FORM)
    return Evaluation(folded_mean_numeric(fam, a, b), NUMERIC)


# -- sampling -----------------------------------------------------------------

def std_draws(fam: Family, n: int, seed: int) -> np.ndarray:
    """``n`` draws of Z by inverse transform of the seeded uniform stream."""
    u = uniforms(seed, n)
    return _ppf(fam, u)


def sample(d: LocScale, n: int, seed: int) -> np.ndarray:
    """``n`` draws of alpha + beta Z; identical for identical arguments."""
    n = int(n)
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    return d.alpha + d.beta * std_draws(d.family, n, seed)
