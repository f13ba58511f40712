"""Plot-ready data for the reference figure panels.

``fig1a``/``fig1b`` tabulate W1 for nine families in long format;
``fig2a``/``fig2b`` are Gaussian distance-and-bounds sweeps; ``fig3a``-``c``
add Laplace noise and ``fig3d``-``f`` Gaussian noise (Delta = 1,
delta = 1e-2). Every panel carries Monte-Carlo columns from the standard
protocol (100 replications of 10**4 samples) unless ``mc`` is None.
"""

import warnings
from typing import Optional

import numpy as np

from .dp import DpMechanism, PrivacyBudgetWarning
from .estimator import McConfig, mc_w1_batch
from .families import Family, LocScale
from .sweep import Problem, SweepSpec, run_sweep
from .wasserstein import w1_exact

GAUSSIAN = Family.of("gaussian")

FIG1_FAMILIES = (
    Family.of("gaussian"),
    Family.of("laplace"),
    Family.of("logistic"),
    Family.of("uniform"),
    Family.of("exponential"),
    Family.of("gamma", 2.0),
    Family.of("weibull", 1.5),
    Family.of("rayleigh"),
    Family.of("studentt", 3.0),
)

DELTA = 1e-2
SENSITIVITY = 1.0


def _laplace(eps):
    return DpMechanism.laplace(eps, SENSITIVITY)


def _gauss(eps):
    # the panels use epsilon = 1 and sweep past it, a deliberate opt-in
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PrivacyBudgetWarning)
        return DpMechanism.gaussian(eps, DELTA, SENSITIVITY, allow_large_epsilon=True)


def sweep_specs():
    """SweepSpec for every sweep-style panel."""
    return {
        "fig2a": SweepSpec("d1.loc", 0.0, 10.0, 41, Problem(GAUSSIAN, (0.0, 2.0), (5.0, 3.0))),
        "fig2b": SweepSpec("d1.scale", 0.5, 10.0, 39, Problem(GAUSSIAN, (2.0, 1.0), (5.0, 3.0))),
        "fig3a": SweepSpec("d1.loc", 0.0, 10.0, 41,
                           Problem(GAUSSIAN, (0.0, 5.0), (5.0, 2.0), _laplace(0.25))),
        "fig3b": SweepSpec("d1.scale", 0.5, 10.0, 39,
                           Problem(GAUSSIAN, (2.0, 1.0), (5.0, 2.0), _laplace(0.25))),
        "fig3c": SweepSpec("epsilon", 0.1, 2.0, 39,
                           Problem(GAUSSIAN, (2.0, 5.0), (5.0, 2.0), _laplace(1.0))),
        "fig3d": SweepSpec("d1.loc", 0.0, 10.0, 41,
                           Problem(GAUSSIAN, (0.0, 5.0), (5.0, 2.0), _gauss(1.0))),
        "fig3e": SweepSpec("d1.scale", 0.5, 10.0, 39,
                           Problem(GAUSSIAN, (5.0, 1.0), (5.0, 2.0), _gauss(1.0))),
        "fig3f": SweepSpec("epsilon", 0.1, 2.0, 39,
                           Problem(GAUSSIAN, (2.0, 5.0), (5.0, 2.0), _gauss(1.0))),
    }


FIGURE_IDS = ("fig1a", "fig1b") + tuple(sweep_specs())

FIG1_HEADER = ["family", None, "w1_closed_form", "w1_numeric", "provenance",
               "mc_mean", "ci_low", "ci_high"]


def _fig1(panel: str, mc: Optional[McConfig]):
    if panel == "fig1a":
        name, grid = "alpha2", np.linspace(0.0, 10.0, 21)
        make = lambda fam, v: (LocScale(fam, 5.0, 5.0), LocScale(fam, float(v), 3.0))
    else:
        name, grid = "beta2", np.linspace(0.5, 10.0, 20)
        make = lambda fam, v: (LocScale(fam, 1.0, 5.0), LocScale(fam, 0.0, float(v)))
    header = [name if c is None else c for c in FIG1_HEADER]
    cases = [(fam, float(v), make(fam, v)) for fam in FIG1_FAMILIES for v in grid]
    mcres = mc_w1_batch([pair for _, _, pair in cases], mc) if mc is not None else None
    rows = []
    for i, (fam, v, (x1, x2)) in enumerate(cases):
        ev = w1_exact(x1, x2)
        row = [str(fam), v,
               ev.value if ev.closed_form else None,
               None if ev.closed_form else ev.value,
               ev.provenance]
        if mcres is not None:
            r = mcres[i]
            row += [r.mean, r.ci_low, r.ci_high]
        rows.append(row)
    if mc is None:
        header = header[:5]
    return header, rows


def figure_table(fig_id: str, mc: Optional[McConfig] = McConfig()):
    """``(header, rows)`` for a figure panel."""
    if fig_id in ("fig1a", "fig1b"):
        return _fig1(fig_id, mc)
    specs = sweep_specs()
    if fig_id not in specs:
        raise KeyError(fig_id)
    return run_sweep(specs[fig_id], mc)
