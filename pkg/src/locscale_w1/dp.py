"""Additive-noise privacy mechanisms and what they cost in W1.

Releasing X1 + N with N ~ Laplace(0, Delta/eps) or N ~ N(0, sigma_N^2),
sigma_N = sqrt(2 ln(1.25/delta)) Delta/eps, moves X1 away from a reference
X2. The triangle inequality bounds the new distance by W(X1, X2) plus
W(N, point mass at 0) = E|N|; the older bounds use the noise standard
deviation instead, which is always larger. For Gaussian data and Gaussian
noise the distance is exact, and for Laplace noise a moment-matched
Gaussian gives a good approximation once sigma_1 dominates the noise.
"""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .families import SQRT_2_OVER_PI, FamilyTag, LocScale
from .wasserstein import _same_family, w1_exact

SQRT2 = math.sqrt(2.0)

EXACT_GAUSSIAN = "exact-gaussian"
GAUSSIAN_APPROX = "gaussian-approx"


class PrivacyBudgetWarning(UserWarning):
    """epsilon outside the range where the Gaussian mechanism's guarantee is stated."""


class Mechanism(str, enum.Enum):
    LAPLACE = "laplace"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class DpMechanism:
    """Noise specification. ``delta`` is required for, and only for, the Gaussian mechanism.

    The Gaussian mechanism's guarantee is stated for epsilon in (0, 1);
    larger values raise unless ``allow_large_epsilon`` is set, in which
    case a :class:`PrivacyBudgetWarning` is issued instead.
    """

    kind: Mechanism
    epsilon: float
    sensitivity: float = 1.0
    delta: Optional[float] = None
    allow_large_epsilon: bool = False

    def __post_init__(self):
        try:
            kind = Mechanism(self.kind)
        except ValueError:
            raise DomainError(f"unknown mechanism {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        eps = float(self.epsilon)
        sens = float(self.sensitivity)
        if not (eps > 0.0) or math.isinf(eps):
            raise DomainError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        if not (sens > 0.0) or math.isinf(sens):
            raise DomainError(f"sensitivity must be positive and finite, got {self.sensitivity!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "sensitivity", sens)
        if kind is Mechanism.LAPLACE:
            if self.delta is not None:
                raise DomainError("the laplace mechanism takes no delta")
            return
        if self.delta is None:
            raise DomainError("the gaussian mechanism needs delta")
        delta = float(self.delta)
        if not (0.0 < delta < 1.0):
            raise DomainError(f"delta must lie in (0, 1), got {self.delta!r}")
        object.__setattr__(self, "delta", delta)
        if eps >= 1.0:
            msg = f"gaussian mechanism with epsilon={eps:g} outside (0, 1)"
            if not self.allow_large_epsilon:
                raise DomainError(msg + "; pass allow_large_epsilon to proceed")
            warnings.warn(msg, PrivacyBudgetWarning, stacklevel=3)

    @classmethod
    def laplace(cls, epsilon, sensitivity=1.0):
        return cls(Mechanism.LAPLACE, epsilon, sensitivity)

    @classmethod
    def gaussian(cls, epsilon, delta, sensitivity=1.0, allow_large_epsilon=False):
        return cls(Mechanism.GAUSSIAN, epsilon, sensitivity, delta, allow_large_epsilon)


def noise_scale(m: DpMechanism) -> float:
    """Laplace scale Delta/eps, or the Gaussian standard deviation sigma_N."""
    if m.kind is Mechanism.LAPLACE:
        return m.sensitivity / m.epsilon
    return math.sqrt(2.0 * math.log(1.25 / m.delta)) * m.sensitivity / m.epsilon


def noise_sd(m: DpMechanism) -> float:
    """Standard deviation of the noise."""
    if m.kind is Mechanism.LAPLACE:
        return SQRT2 * m.sensitivity / m.epsilon
    return noise_scale(m)


def noise_w1_cost(m: DpMechanism) -> float:
    """E|N|: the distance from the noise to a point mass at zero."""
    if m.kind is Mechanism.LAPLACE:
        return m.sensitivity / m.epsilon
    return 2.0 * m.sensitivity / m.epsilon * math.sqrt(math.log(1.25 / m.delta) / math.pi)


def _check_base(base):
    base = float(base)
    if not (base >= 0.0) or math.isinf(base):
        raise DomainError(f"base distance must be finite and >= 0, got {base!r}")
    return base


def dp_bound_legacy(base: float, m: DpMechanism) -> float:
    """base + noise standard deviation."""
    return _check_base(base) + noise_sd(m)


def dp_bound_improved(base: float, m: DpMechanism) -> float:
    """base + E|N|."""
    return _check_base(base) + noise_w1_cost(m)


def _gaussian_pair(x1, x2):
    fam = _same_family(x1, x2)
    if fam.tag is not FamilyTag.GAUSSIAN:
        raise DomainError(f"needs a gaussian pair, got {fam}")


def dp_exact_gaussian(x1: LocScale, x2: LocScale, m: DpMechanism) -> float:
    """W1(X1 + N, X2) for Gaussian X1, X2 and Gaussian noise N."""
    _gaussian_pair(x1, x2)
    if m.kind is not Mechanism.GAUSSIAN:
        raise DomainError("dp_exact_gaussian needs the gaussian mechanism")
    sigma_dp = math.hypot(x1.beta, noise_scale(m))
    return w1_exact(LocScale(x1.family, x1.alpha, sigma_dp), x2).value


def approx_condition(x1: LocScale, m: DpMechanism) -> bool:
    """sigma_1 >= sqrt(2) Delta / eps: data spread dominates the Laplace noise."""
    return x1.beta >= SQRT2 * m.sensitivity / m.epsilon


def dp_laplace_gauss_approx(x1: LocScale, x2: LocScale, m: DpMechanism):
    """Approximate W1(X1 + L, X2) by moment matching X1 + L to a Gaussian.

    Returns ``(value, approx_valid)``; the value is returned even when the
    validity condition fails.
    """
    _gaussian_pair(x1, x2)
    if m.kind is not Mechanism.LAPLACE:
        raise DomainError("dp_laplace_gauss_approx needs the laplace mechanism")
    sigma_tilde = math.hypot(x1.beta, noise_sd(m))
    value = w1_exact(LocScale(x1.family, x1.alpha, sigma_tilde), x2).value
    return value, approx_condition(x1, m)


def calibrate_epsilon(kind, target_noise_cost: float, delta: Optional[float] = None,
                      sensitivity: float = 1.0) -> float:
    """Budget epsilon whose noise costs exactly ``target_noise_cost`` in W1.

    A Gaussian-mechanism answer outside (0, 1) is returned with a
    :class:`PrivacyBudgetWarning`.
    """
    kind = Mechanism(kind)
    target = float(target_noise_cost)
    if not (target > 0.0) or math.isinf(target):
        raise DomainError(f"target noise cost must be positive and finite, got {target_noise_cost!r}")
    sens = float(sensitivity)
    if not (sens > 0.0):
        raise DomainError(f"sensitivity must be positive, got {sensitivity!r}")
    if kind is Mechanism.LAPLACE:
        if delta is not None:
            raise DomainError("the laplace mechanism takes no delta")
        return sens / target
    if delta is None or not (0.0 < float(delta) < 1.0):
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    eps = 2.0 * sens / target * math.sqrt(math.log(1.25 / float(delta)) / math.pi)
    if not (0.0 < eps < 1.0):
        warnings.warn(f"calibrated epsilon={eps:g} lies outside (0, 1)",
                      PrivacyBudgetWarning, stacklevel=2)
    return eps


@dataclass(frozen=True)
class DpDistanceReport:
    base_distance: float
    noise_cost_exact: float
    bound_legacy: float
    bound_improved: float
    exact_or_approx: Optional[float]
    label: Optional[str]
    approx_valid: Optional[bool]


def dp_report(x1: LocScale, x2: LocScale, m: DpMechanism) -> DpDistanceReport:
    """All DP distance quantities for one pair and mechanism.

    ``exact_or_approx`` is filled for Gaussian pairs only: exact under the
    Gaussian mechanism, approximate (with ``approx_valid``) under Laplace.
    """
    base = w1_exact(x1, x2).value
    value = label = valid = None
    if x1.family.tag is FamilyTag.GAUSSIAN:
        if m.kind is Mechanism.GAUSSIAN:
            value, label = dp_exact_gaussian(x1, x2, m), EXACT_GAUSSIAN
        else:
            (value, valid), label = dp_laplace_gauss_approx(x1, x2, m), GAUSSIAN_APPROX
    return DpDistanceReport(
        base_distance=base,
        noise_cost_exact=noise_w1_cost(m),
        bound_legacy=dp_bound_legacy(base, m),
        bound_improved=dp_bound_improved(base, m),
        exact_or_approx=value,
        label=label,
        approx_valid=valid,
    )
