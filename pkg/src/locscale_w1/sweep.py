"""Parameter sweeps and their CSV serialization.

A sweep varies one scalar (a location or scale of either distribution,
or the privacy budget) over an evenly spaced grid and tabulates the exact
distance, every bound, and optionally Monte-Carlo estimates.

CSV files use ``,`` separators, LF line endings, a header row, and
numbers printed with a fixed number of significant digits (9 by default)
independent of locale. They are written to a temporary file and renamed,
so an interrupted run never leaves a partial file behind.
"""

import math
import os
import tempfile
import warnings
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from .dp import (
    DpMechanism,
    Mechanism,
    PrivacyBudgetWarning,
    dp_bound_improved,
    dp_bound_legacy,
    dp_exact_gaussian,
    dp_laplace_gauss_approx,
    noise_w1_cost,
)
from .errors import DomainError
from .estimator import McConfig, mc_w1_batch, mc_w1_dp_batch
from .families import Family, FamilyTag, LocScale
from .wasserstein import bound_set, w1_exact

TARGETS = ("d1.loc", "d1.scale", "d2.loc", "d2.scale", "epsilon")

DEFAULT_DIGITS = 9


@dataclass(frozen=True)
class Problem:
    """Everything needed to evaluate one row."""

    family: Family
    d1: tuple  # (loc, scale)
    d2: tuple
    mechanism: Optional[DpMechanism] = None

    def pair(self):
        return (LocScale(self.family, *self.d1), LocScale(self.family, *self.d2))


@dataclass(frozen=True)
class SweepSpec:
    target: str
    start: float
    stop: float
    steps: int
    fixed: Problem

    def __post_init__(self):
        if self.target not in TARGETS:
            raise DomainError(f"cannot sweep {self.target!r}; choose one of {', '.join(TARGETS)}")
        if self.target == "epsilon" and self.fixed.mechanism is None:
            raise DomainError("sweeping epsilon needs a mechanism")
        if int(self.steps) < 2:
            raise DomainError(f"steps must be >= 2, got {self.steps}")
        start, stop = float(self.start), float(self.stop)
        if not (math.isfinite(start) and math.isfinite(stop)) or not start < stop:
            raise DomainError(f"need from < to, got from={self.start} to={self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(float(self.start), float(self.stop), int(self.steps))

    def problem_at(self, v: float) -> Problem:
        p = self.fixed
        if self.target == "epsilon":
            # the fixed mechanism already opted in to large epsilon; warn once, not per row
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PrivacyBudgetWarning)
                return replace(p, mechanism=replace(p.mechanism, epsilon=float(v)))
        side, what = self.target.split(".")
        loc, scale = getattr(p, side)
        new = (float(v), scale) if what == "loc" else (loc, float(v))
        return replace(p, **{side: new})


def _exact_columns(fam: Family):
    cols = ["w1_exact", "provenance", "lb"]
    if fam.tag is FamilyTag.GAUSSIAN:
        cols.append("lb_gauss")
    cols += ["ub_linear", "ub_frechet"]
    if fam.tag is FamilyTag.GAUSSIAN:
        cols += ["ub_legacy", "gauss_limit"]
    return cols


def _dp_columns(fam: Family, m: DpMechanism):
    cols = ["w1_exact", "noise_cost", "bound_legacy", "bound_improved"]
    if fam.tag is FamilyTag.GAUSSIAN:
        if m.kind is Mechanism.GAUSSIAN:
            cols.append("dp_exact")
        else:
            cols += ["dp_approx", "approx_valid"]
    return cols


def columns(spec: SweepSpec, mc: bool) -> List[str]:
    p = spec.fixed
    cols = [spec.target]
    cols += _exact_columns(p.family) if p.mechanism is None else _dp_columns(p.family, p.mechanism)
    if mc:
        cols += ["mc_mean", "ci_low", "ci_high"]
    return cols


def evaluate_row(p: Problem) -> dict:
    """Deterministic (non-MC) quantities for one problem."""
    x1, x2 = p.pair()
    ev = w1_exact(x1, x2)
    if p.mechanism is None:
        b = bound_set(x1, x2)
        return {
            "w1_exact": ev.value,
            "provenance": ev.provenance,
            "lb": b.lower_mean_diff,
            "lb_gauss": b.lower_gauss_improved,
            "ub_linear": b.upper_linear,
            "ub_frechet": b.upper_frechet,
            "ub_legacy": b.upper_gauss_legacy,
            "gauss_limit": b.gauss_limit,
        }
    m = p.mechanism
    row = {
        "w1_exact": ev.value,
        "noise_cost": noise_w1_cost(m),
        "bound_legacy": dp_bound_legacy(ev.value, m),
        "bound_improved": dp_bound_improved(ev.value, m),
    }
    if p.family.tag is FamilyTag.GAUSSIAN:
        if m.kind is Mechanism.GAUSSIAN:
            row["dp_exact"] = dp_exact_gaussian(x1, x2, m)
        else:
            row["dp_approx"], row["approx_valid"] = dp_laplace_gauss_approx(x1, x2, m)
    return row


def run_sweep(spec: SweepSpec, mc: Optional[McConfig] = None):
    """Return ``(header, rows)``; each row is a list aligned with the header."""
    header = columns(spec, mc is not None)
    values = spec.values()
    problems = [spec.problem_at(v) for v in values]
    rows = []
    for v, p in zip(values, problems):
        d = evaluate_row(p)
        d[spec.target] = float(v)
        rows.append(d)
    if mc is not None:
        if spec.fixed.mechanism is None:
            res = mc_w1_batch([p.pair() for p in problems], mc)
        else:
            res = mc_w1_dp_batch([(*p.pair(), p.mechanism) for p in problems], mc)
        for d, r in zip(rows, res):
            d.update(mc_mean=r.mean, ci_low=r.ci_low, ci_high=r.ci_high)
    return header, [[d.get(c) for c in header] for d in rows]


# -- formatting ---------------------------------------------------------------

def format_cell(v, digits: int = DEFAULT_DIGITS) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    v = float(v)
    if v == 0.0:
        return "0"  # also folds -0
    return f"{v:.{digits}g}"


def to_csv(header: Sequence[str], rows, digits: int = DEFAULT_DIGITS) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v, digits) for v in row))
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the result the usual umask-derived mode
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
