"""Independent oracles for W1: empirical, quadrature and Monte-Carlo.

None of these use the folded-mean closed forms, so agreement with
:mod:`locscale_w1.wasserstein` is a genuine cross-check.

Monte-Carlo replication ``r`` draws its samples from streams keyed by
``derive_seed(seed, r, side)`` with side 1 for the first distribution,
2 for the second and 3 for mechanism noise. Replications therefore do not
depend on each other or on evaluation order.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import specfun
from ._rng import derive_seed
from .dp import DpMechanism, Mechanism, noise_scale
from .errors import DomainError
from .families import (
    Family,
    FamilyTag,
    LocScale,
    _ppf,
    _quadrature_power,
    sign_change_level,
    std_draws,
)
from .quadrature import integrate_quantile
from .wasserstein import _same_family

SIDE_X1 = 1
SIDE_X2 = 2
SIDE_NOISE = 3

_LAPLACE = Family(FamilyTag.LAPLACE)
_GAUSSIAN = Family(FamilyTag.GAUSSIAN)


def empirical_w1(xs, ys) -> float:
    """W1 between two equal-size empirical measures (sorted matching)."""
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ys = np.asarray(ys, dtype=np.float64).ravel()
    if xs.size == 0 or ys.size == 0:
        raise DomainError("empirical_w1 needs non-empty samples")
    if xs.size != ys.size:
        raise DomainError(f"sample sizes differ: {xs.size} vs {ys.size}")
    return float(np.mean(np.abs(np.sort(xs) - np.sort(ys))))


def quadrature_w1(x1: LocScale, x2: LocScale, abs_tol: float = 1e-10) -> float:
    """Integrate |F1^-1(q) - F2^-1(q)| over (0, 1) adaptively.

    The two quantile functions are evaluated separately and subtracted.
    Raises :class:`ConvergenceError` (with the best estimate) if the
    refinement limit is hit first.
    """
    fam = _same_family(x1, x2)
    if not (abs_tol > 0.0):
        raise DomainError(f"abs_tol must be positive, got {abs_tol!r}")
    a1, b1, a2, b2 = x1.alpha, x1.beta, x2.alpha, x2.beta
    if a1 == a2 and b1 == b2:
        return 0.0

    def h(v, upper):
        z = _ppf(fam, v, upper)
        return np.abs((a1 + b1 * z) - (a2 + b2 * z))

    qstar = sign_change_level(fam, a1 - a2, b1 - b2)
    kinks = () if qstar is None else (qstar,)
    res = integrate_quantile(h, kinks, power=_quadrature_power(fam),
                             abs_tol=abs_tol, rel_tol=1e-13)
    return res.value


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 10_000
    n_reps: int = 100
    seed: int = 0
    ci_level: float = 0.95

    def __post_init__(self):
        if int(self.n_samples) < 2:
            raise DomainError(f"n_samples must be >= 2, got {self.n_samples}")
        if int(self.n_reps) < 1:
            raise DomainError(f"n_reps must be >= 1, got {self.n_reps}")
        if not (0.0 < float(self.ci_level) < 1.0):
            raise DomainError(f"ci_level must lie in (0, 1), got {self.ci_level}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "n_reps", int(self.n_reps))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "ci_level", float(self.ci_level))


@dataclass(frozen=True)
class McResult:
    mean: float
    ci_low: float
    ci_high: float
    per_rep: Tuple[float, ...]

    def contains(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def summarize(per_rep: Sequence[float], ci_level: float = 0.95) -> McResult:
    """Mean and normal-theory interval mean +- z sd / sqrt(n) over replications."""
    vals = np.asarray(per_rep, dtype=np.float64)
    mean = float(np.mean(vals))
    if vals.size < 2:
        return McResult(mean, mean, mean, tuple(vals.tolist()))
    z = specfun.std_normal_quantile(0.5 * (1.0 + ci_level))
    half = z * float(np.std(vals, ddof=1)) / math.sqrt(vals.size)
    return McResult(mean, mean - half, mean + half, tuple(vals.tolist()))


def _noise_draws(m: DpMechanism, n: int, seed: int) -> np.ndarray:
    fam = _LAPLACE if m.kind is Mechanism.LAPLACE else _GAUSSIAN
    return std_draws(fam, n, seed)


def mc_w1_batch(pairs: Sequence[Tuple[LocScale, LocScale]], cfg: McConfig = McConfig()):
    """:func:`mc_w1` for many pairs, reusing each replication's draws.

    Pairs may mix families; draws are shared among pairs of one family.
    Results equal those of calling :func:`mc_w1` pair by pair.
    """
    pairs = list(pairs)
    for x1, x2 in pairs:
        _same_family(x1, x2)
    per = np.empty((len(pairs), cfg.n_reps))
    for r in range(cfg.n_reps):
        cache = {}
        for i, (x1, x2) in enumerate(pairs):
            fam = x1.family
            if fam not in cache:
                z1 = np.sort(std_draws(fam, cfg.n_samples, derive_seed(cfg.seed, r, SIDE_X1)))
                z2 = np.sort(std_draws(fam, cfg.n_samples, derive_seed(cfg.seed, r, SIDE_X2)))
                cache[fam] = (z1, z2)
            z1, z2 = cache[fam]
            # alpha + beta z is monotone in z, so these are already sorted
            per[i, r] = float(np.mean(np.abs((x1.alpha + x1.beta * z1) - (x2.alpha + x2.beta * z2))))
    return [summarize(row, cfg.ci_level) for row in per]


def mc_w1(x1: LocScale, x2: LocScale, cfg: McConfig = McConfig()) -> McResult:
    """Replicated empirical W1 between fresh samples of x1 and x2."""
    return mc_w1_batch([(x1, x2)], cfg)[0]


def mc_w1_dp_batch(problems: Sequence[Tuple[LocScale, LocScale, Optional[DpMechanism]]],
                   cfg: McConfig = McConfig()):
    """:func:`mc_w1_dp` for many (x1, x2, mechanism) triples with shared draws.

    A mechanism of None means no noise.
    """
    problems = list(problems)
    for x1, x2, _ in problems:
        _same_family(x1, x2)
    per = np.empty((len(problems), cfg.n_reps))
    for r in range(cfg.n_reps):
        draws = {}
        noise = {}
        for i, (x1, x2, m) in enumerate(problems):
            fam = x1.family
            if fam not in draws:
                z1 = std_draws(fam, cfg.n_samples, derive_seed(cfg.seed, r, SIDE_X1))
                z2 = np.sort(std_draws(fam, cfg.n_samples, derive_seed(cfg.seed, r, SIDE_X2)))
                draws[fam] = (z1, z2)
            z1, z2 = draws[fam]
            xs = x1.alpha + x1.beta * z1
            if m is not None:
                if m.kind not in noise:
                    noise[m.kind] = _noise_draws(m, cfg.n_samples, derive_seed(cfg.seed, r, SIDE_NOISE))
                xs = xs + noise_scale(m) * noise[m.kind]
            per[i, r] = float(np.mean(np.abs(np.sort(xs) - (x2.alpha + x2.beta * z2))))
    return [summarize(row, cfg.ci_level) for row in per]


def mc_w1_dp(x1: LocScale, x2: LocScale, m: DpMechanism, cfg: McConfig = McConfig()) -> McResult:
    """Replicated empirical W1 between x1 + mechanism noise and x2."""
    return mc_w1_dp_batch([(x1, x2, m)], cfg)[0]


def mc_w1_dp_single(x1: LocScale, x2: LocScale, m: DpMechanism, n_samples: int, seed: int) -> float:
    """One large-sample empirical W1(x1 + noise, x2), e.g. 10**6 draws."""
    return mc_w1_dp(x1, x2, m, McConfig(n_samples=n_samples, n_reps=1, seed=seed)).mean
