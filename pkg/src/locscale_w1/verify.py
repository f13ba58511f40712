"""Invariant suites behind ``locscale-w1 verify``.

Each suite returns a :class:`SuiteResult` with the worst deviation it
measured and the tolerance it was held to. ``tol_scale`` multiplies every
tolerance, which makes it easy to confirm the harness can fail.
"""

import csv
import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional

import numpy as np

from . import specfun
from .dp import DpMechanism, dp_bound_improved, dp_bound_legacy, noise_scale
from .estimator import McConfig, mc_w1_batch, quadrature_w1
from .families import SQRT_2_OVER_PI, Family, FamilyTag, LocScale
from .figures import FIG1_FAMILIES
from .wasserstein import (
    bound_set,
    w1_exact,
    w1_lower_gauss_improved,
    w1_upper_gauss_legacy,
    w1_upper_linear,
)

GAUSSIAN = Family.of("gaussian")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    checked: int
    detail: str = ""


def _rng(seed):
    return np.random.Generator(np.random.Philox(key=int(seed) & ((1 << 64) - 1)))


def specfun_roundtrip(tol_scale=1.0, n=1000) -> SuiteResult:
    tol = 1e-9 * tol_scale
    qs = np.linspace(1e-6, 1.0 - 1e-6, n)
    worst = 0.0
    for q in qs:
        q = float(q)
        checks = [
            specfun.std_normal_cdf(specfun.std_normal_quantile(q)),
            specfun.reg_inc_gamma(2.5, specfun.reg_inc_gamma_inv(2.5, q)),
            specfun.reg_inc_gamma(0.5, specfun.reg_inc_gamma_inv(0.5, q)),
            specfun.reg_inc_beta(2.0, 3.0, specfun.reg_inc_beta_inv(2.0, 3.0, q)),
            specfun.reg_inc_beta(0.5, 1.5, specfun.reg_inc_beta_inv(0.5, 1.5, q)),
            specfun.student_t_cdf(3.0, specfun.student_t_quantile(3.0, q)),
        ]
        worst = max(worst, max(abs(c - q) for c in checks))
    return SuiteResult("specfun_roundtrip", worst <= tol, worst, tol, 6 * n)


def _random_pair(fam, rng):
    a1, a2 = rng.uniform(-5.0, 5.0, 2)
    b1, b2 = rng.uniform(0.1, 5.0, 2)
    return LocScale(fam, a1, b1), LocScale(fam, a2, b2)


def oracle_agreement(families, seed=0, n_pairs=200, tol_scale=1.0) -> SuiteResult:
    """Closed form (or labelled fallback) vs direct quadrature of the quantile gap."""
    rng = _rng(seed)
    worst = 0.0
    checked = 0
    for fam in families:
        for _ in range(n_pairs):
            x1, x2 = _random_pair(fam, rng)
            v = w1_exact(x1, x2).value
            q = quadrature_w1(x1, x2)
            worst = max(worst, abs(v - q) / max(1.0, v))
            checked += 1
    tol = 1e-6 * tol_scale
    return SuiteResult("oracle_agreement", worst <= tol, worst, tol, checked)


def bound_sandwich(families, grid=50, tol_scale=1.0) -> SuiteResult:
    """lower <= exact <= min(upper) on a (alpha_y, beta_y) grid per family."""
    tol = 1e-9 * tol_scale
    worst = -math.inf
    checked = 0
    for fam in families:
        for ay in np.linspace(-5.0, 5.0, grid):
            for by in np.linspace(-5.0, 5.0, grid):
                x1 = LocScale(fam, float(ay), 6.0 + float(by))
                x2 = LocScale(fam, 0.0, 6.0)
                v = w1_exact(x1, x2).value
                b = bound_set(x1, x2)
                worst = max(worst, max(b.lowers()) - v, v - min(b.uppers()))
                checked += 1
    return SuiteResult("bound_sandwich", worst <= tol, max(worst, 0.0), tol, checked)


def gaussian_ordering(seed=0, n=1000, tol_scale=1.0) -> SuiteResult:
    rng = _rng(seed)
    worst = -math.inf
    for _ in range(n):
        x1, x2 = _random_pair(GAUSSIAN, rng)
        v = w1_exact(x1, x2).value
        worst = max(worst,
                    w1_upper_linear(x1, x2) - w1_upper_gauss_legacy(x1, x2),
                    w1_lower_gauss_improved(x1, x2) - v)
    tol = 1e-9 * tol_scale
    return SuiteResult("gaussian_ordering", worst <= tol, max(worst, 0.0), tol, n)


def metric_axioms(families, seed=0, trials=100, tol_scale=1.0) -> SuiteResult:
    rng = _rng(seed)
    worst = 0.0
    checked = 0
    for fam in families:
        for _ in range(trials):
            x, y = _random_pair(fam, rng)
            z = _random_pair(fam, rng)[0]
            wxy = w1_exact(x, y).value
            wyx = w1_exact(y, x).value
            wxz = w1_exact(x, z).value
            wyz = w1_exact(y, z).value
            worst = max(worst, w1_exact(x, x).value, abs(wxy - wyx),
                        max(0.0, wxz - wxy - wyz), max(0.0, -wxy))
            checked += 1
    tol = 1e-9 * tol_scale
    return SuiteResult("metric_axioms", worst <= tol, worst, tol, checked)


def ci_coverage(seed=0, n_samples=10_000, n_reps=100, points=20, min_hits=17) -> SuiteResult:
    """The Monte-Carlo interval covers the exact value at most grid points."""
    cfg = McConfig(n_samples=n_samples, n_reps=n_reps, seed=seed)
    mus = np.linspace(0.0, 8.0, points)
    pairs = [(LocScale(GAUSSIAN, float(m), 2.0), LocScale(GAUSSIAN, 5.0, 3.0)) for m in mus]
    res = mc_w1_batch(pairs, cfg)
    hits = sum(r.contains(w1_exact(*p).value) for p, r in zip(pairs, res))
    return SuiteResult("ci_coverage", hits >= min_hits, float(points - hits), float(points - min_hits),
                       points, f"{hits}/{points} intervals cover the exact value")


def dp_tightening(seed=0, n=1000, tol_scale=1.0) -> SuiteResult:
    """Improved DP bounds sit strictly below the legacy ones, by the predicted gap."""
    rng = _rng(seed)
    worst = 0.0
    strict = True
    for i in range(n):
        eps = float(rng.uniform(0.01, 0.99))
        sens = float(rng.uniform(0.1, 5.0))
        base = float(rng.uniform(0.0, 10.0))
        if i % 2:
            m = DpMechanism.laplace(eps, sens)
            gap = dp_bound_legacy(base, m) - dp_bound_improved(base, m)
            dev = abs(gap - (math.sqrt(2.0) - 1.0) * sens / eps)
        else:
            m = DpMechanism.gaussian(eps, float(rng.uniform(1e-6, 0.5)), sens)
            gap = dp_bound_legacy(base, m) - dp_bound_improved(base, m)
            dev = abs(gap / noise_scale(m) - (1.0 - SQRT_2_OVER_PI)) / (1.0 - SQRT_2_OVER_PI)
        strict &= gap > 0.0
        worst = max(worst, dev)
    tol = 1e-12 * tol_scale
    return SuiteResult("dp_tightening", strict and worst <= tol, worst, tol, n)


_LOWER_COLS = ("lb", "lb_gauss")
_UPPER_COLS = ("ub_linear", "ub_frechet", "ub_legacy")


def csv_sandwich(path: str, tol_scale=1.0) -> SuiteResult:
    """Re-check the bound columns of an emitted sweep CSV row by row."""
    tol = 1e-9 * tol_scale
    worst = -math.inf
    checked = 0
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if not row.get("w1_exact"):
                continue
            v = float(row["w1_exact"])
            lows = [float(row[c]) for c in _LOWER_COLS if row.get(c)]
            ups = [float(row[c]) for c in _UPPER_COLS if row.get(c)]
            # printed values carry ~5e-10 relative rounding
            slack = 1e-8 * max(1.0, abs(v))
            if lows:
                worst = max(worst, max(lows) - v - slack)
            if ups:
                worst = max(worst, v - min(ups) - slack)
            checked += 1
    worst = max(worst, 0.0) if checked else 0.0
    return SuiteResult(f"csv_sandwich:{path}", checked > 0 and worst <= tol, worst, tol, checked)


def run_all(families: Optional[Iterable[Family]] = None, seed=0, n_samples=10_000, n_reps=100,
            n_pairs=200, grid=50, tol_scale=1.0, csv_paths=()) -> List[SuiteResult]:
    fams = list(families) if families is not None else list(FIG1_FAMILIES)
    out = [
        specfun_roundtrip(tol_scale),
        oracle_agreement(fams, seed, n_pairs, tol_scale),
        bound_sandwich(fams, grid, tol_scale),
        metric_axioms(fams, seed, tol_scale=tol_scale),
    ]
    if any(f.tag is FamilyTag.GAUSSIAN for f in fams):
        out.append(gaussian_ordering(seed, tol_scale=tol_scale))
        out.append(ci_coverage(seed, n_samples, n_reps))
    out.append(dp_tightening(seed, tol_scale=tol_scale))
    out += [csv_sandwich(p, tol_scale) for p in csv_paths]
    return out


def report(results: List[SuiteResult]) -> dict:
    return {"passed": all(r.passed for r in results), "suites": [asdict(r) for r in results]}
