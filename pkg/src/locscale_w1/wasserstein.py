"""1-Wasserstein distances and bounds between members of one family.

For X_i = alpha_i + beta_i Z the quantile coupling gives

    W1(X1, X2) = E| (alpha_1 - alpha_2) + (beta_1 - beta_2) Z |,

the folded mean computed by :func:`locscale_w1.families.folded_mean`.
The bounds below need only means, standard deviations and E|Z|.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, FamilyMismatchError
from .families import (
    CLOSED_FORM,
    SQRT_2_OVER_PI,
    Evaluation,
    FamilyTag,
    FoldedParams,
    LocScale,
    folded_mean,
    mean_abs_std,
    sd_std,
)


def _same_family(x1: LocScale, x2: LocScale):
    if x1.family != x2.family:
        raise FamilyMismatchError(
            f"distributions belong to different families: {x1.family} vs {x2.family}")
    return x1.family


def _gaussian_only(x1: LocScale, x2: LocScale):
    fam = _same_family(x1, x2)
    if fam.tag is not FamilyTag.GAUSSIAN:
        raise DomainError(f"this bound is defined for gaussian pairs only, got {fam}")


def folded_params(x1: LocScale, x2: LocScale) -> FoldedParams:
    fam = _same_family(x1, x2)
    return FoldedParams(fam, x1.alpha - x2.alpha, x1.beta - x2.beta)


def w1_exact(x1: LocScale, x2: LocScale) -> Evaluation:
    """Exact W1 with its provenance (``closed-form`` or ``numeric``)."""
    p = folded_params(x1, x2)
    if p.alpha_y == 0.0 and p.beta_y == 0.0:
        return Evaluation(0.0, CLOSED_FORM)
    return folded_mean(p)


def w1_lower_mean_diff(x1: LocScale, x2: LocScale) -> float:
    """|mu_1 - mu_2|, a lower bound by Jensen's inequality."""
    _same_family(x1, x2)
    return abs(x1.mean - x2.mean)


def w1_upper_linear(x1: LocScale, x2: LocScale) -> float:
    """|alpha_1 - alpha_2| + E|Z| |beta_1 - beta_2| (triangle inequality on Y)."""
    fam = _same_family(x1, x2)
    return abs(x1.alpha - x2.alpha) + mean_abs_std(fam) * abs(x1.beta - x2.beta)


def w1_upper_frechet(x1: LocScale, x2: LocScale) -> float:
    """sqrt(dmu^2 + dsigma^2), the 2-Wasserstein value of the moment-matched Gaussians.

    Raises :class:`DomainError` when Z has no variance.
    """
    fam = _same_family(x1, x2)
    sd = sd_std(fam)
    return math.hypot(x1.mean - x2.mean, sd * (x1.beta - x2.beta))


def w1_upper_gauss_legacy(x1: LocScale, x2: LocScale) -> float:
    """|mu_1 - mu_2| + |sigma_1 - sigma_2| for Gaussians."""
    _gaussian_only(x1, x2)
    return abs(x1.alpha - x2.alpha) + abs(x1.beta - x2.beta)


def w1_lower_gauss_improved(x1: LocScale, x2: LocScale) -> float:
    """max(sqrt(2/pi) |sigma_y|, |mu_y|) for Gaussians."""
    _gaussian_only(x1, x2)
    return max(SQRT_2_OVER_PI * abs(x1.beta - x2.beta), abs(x1.alpha - x2.alpha))


def w1_gauss_limit(x1: LocScale, x2: LocScale) -> float:
    """sqrt(2/pi) |sigma_1 - sigma_2|, the value approached as mu_y / sigma_y -> 0."""
    _gaussian_only(x1, x2)
    return SQRT_2_OVER_PI * abs(x1.beta - x2.beta)


@dataclass(frozen=True)
class BoundSet:
    lower_mean_diff: float
    upper_linear: float
    upper_frechet: Optional[float]
    lower_gauss_improved: Optional[float] = None
    upper_gauss_legacy: Optional[float] = None
    gauss_limit: Optional[float] = None

    def lowers(self):
        return [v for v in (self.lower_mean_diff, self.lower_gauss_improved) if v is not None]

    def uppers(self):
        return [v for v in (self.upper_linear, self.upper_frechet, self.upper_gauss_legacy)
                if v is not None]

    def is_consistent(self, slack: float = 1e-12) -> bool:
        vals = self.lowers() + self.uppers()
        return all(v >= 0.0 for v in vals) and max(self.lowers()) <= min(self.uppers()) + slack


def bound_set(x1: LocScale, x2: LocScale) -> BoundSet:
    """Every applicable bound; Gaussian-only fields are None for other families.

    ``upper_frechet`` is None when Z has no variance (Student's t, nu <= 2).
    """
    fam = _same_family(x1, x2)
    try:
        frechet = w1_upper_frechet(x1, x2)
    except DomainError:
        frechet = None
    gauss = fam.tag is FamilyTag.GAUSSIAN
    return BoundSet(
        lower_mean_diff=w1_lower_mean_diff(x1, x2),
        upper_linear=w1_upper_linear(x1, x2),
        upper_frechet=frechet,
        lower_gauss_improved=w1_lower_gauss_improved(x1, x2) if gauss else None,
        upper_gauss_legacy=w1_upper_gauss_legacy(x1, x2) if gauss else None,
        gauss_limit=w1_gauss_limit(x1, x2) if gauss else None,
    )
