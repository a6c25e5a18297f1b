"""Margin losses, the unhinged/whinge pair, and noise-correction machinery.

A loss is represented by its two per-label evaluators ``pos(v) = loss(+1, v)``
and ``neg(v) = loss(-1, v)`` together with their derivatives in the score
``v``.  All evaluators are numpy-vectorized over ``v`` and must stay finite
for finite input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Loss",
    "NoiseRate",
    "RobustnessCheck",
    "catalog",
    "loss_by_name",
    "zero_one",
    "unhinged",
    "whinge",
    "hinge",
    "logistic",
    "square",
    "t_logistic",
    "tangent_boost",
    "conditional_risk",
    "noise_correct",
    "is_strongly_sln_robust",
    "unhinge_family_plot_data",
]

ScoreFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class NoiseRate:
    """Symmetric label-flip probability, valid on [0, 1/2) only."""

    rho: float

    def __post_init__(self):
        rho = float(self.rho)
        if not (0.0 <= rho < 0.5):
            raise ValueError(f"noise rate must lie in [0, 0.5), got {self.rho}")
        object.__setattr__(self, "rho", rho)

    def __float__(self) -> float:
        return self.rho


def _as_rho(rho) -> float:
    """Validate a noise rate given as a float or NoiseRate."""
    return NoiseRate(float(rho)).rho


@dataclass(frozen=True)
class Loss:
    """A binary-classification loss with per-label evaluators.

    Parameters
    ----------
    name : str
        Identifier used in CLI/config addressing and reports.
    pos, neg : callable
        Evaluators for label +1 and -1, vectorized over the score.
    dpos, dneg : callable
        Derivatives of ``pos``/``neg`` with respect to the score.
    is_convex_in_v : bool
        Whether both evaluators are convex in the score.
    is_convex_potential : bool
        Whether the loss is phi(y*v) for a convex, non-increasing,
        differentiable phi with phi'(0) < 0 and phi(+inf) = 0.
    """

    name: str
    pos: ScoreFn
    neg: ScoreFn
    dpos: ScoreFn
    dneg: ScoreFn
    is_convex_in_v: bool = False
    is_convex_potential: bool = False

    def eval(self, y, v):
        """Evaluate the loss at label(s) y in {-1,+1} and score(s) v."""
        y = np.asarray(y)
        v = np.asarray(v, dtype=float)
        out = np.where(y > 0, self.pos(v), self.neg(v))
        return out if out.ndim else float(out)

    def deriv(self, y, v):
        """Derivative of the loss in the score at label(s) y, score(s) v."""
        y = np.asarray(y)
        v = np.asarray(v, dtype=float)
        out = np.where(y > 0, self.dpos(v), self.dneg(v))
        return out if out.ndim else float(out)

    def __repr__(self):  # noqa: D105 - compact debugging aid
        return f"Loss({self.name!r})"


def zero_one() -> Loss:
    """Misclassification loss, with half credit for a score of exactly zero.

    The derivative is defined as 0 everywhere: this loss is never optimized
    by gradient methods, and a zero derivative keeps the interface uniform.
    """
    return Loss(
        name="zero_one",
        pos=lambda v: 1.0 * (v < 0) + 0.5 * (v == 0),
        neg=lambda v: 1.0 * (v > 0) + 0.5 * (v == 0),
        dpos=lambda v: np.zeros_like(v),
        dneg=lambda v: np.zeros_like(v),
        is_convex_in_v=False,
        is_convex_potential=False,
    )


def unhinged() -> Loss:
    """Hinge loss without the clamp at zero: 1 - y*v, negatively unbounded."""
    return Loss(
        name="unhinged",
        pos=lambda v: 1.0 - v,
        neg=lambda v: 1.0 + v,
        dpos=lambda v: np.full_like(v, -1.0),
        dneg=lambda v: np.full_like(v, 1.0),
        is_convex_in_v=True,
        is_convex_potential=False,  # unbounded below
    )


def whinge(c_neg: float) -> Loss:
    """Cost-weighted unhinged loss with class weights c_neg and 1 - c_neg.

    Its optimum over scorers bounded by B thresholds the class-probability
    at c_neg instead of 1/2.
    """
    c_neg = float(c_neg)
    if not (0.0 <= c_neg <= 1.0):
        raise ValueError(f"c_neg must lie in [0, 1], got {c_neg}")
    c_pos = 1.0 - c_neg
    return Loss(
        name=f"whinge:{c_neg:g}",
        pos=lambda v: c_pos * (-v),
        neg=lambda v: c_neg * v,
        dpos=lambda v: np.full_like(v, -c_pos),
        dneg=lambda v: np.full_like(v, c_neg),
        is_convex_in_v=True,
        is_convex_potential=False,
    )


def hinge() -> Loss:
    return Loss(
        name="hinge",
        pos=lambda v: np.maximum(0.0, 1.0 - v),
        neg=lambda v: np.maximum(0.0, 1.0 + v),
        dpos=lambda v: np.where(v < 1.0, -1.0, 0.0),
        dneg=lambda v: np.where(v > -1.0, 1.0, 0.0),
        is_convex_in_v=True,
        is_convex_potential=True,
    )


def logistic() -> Loss:
    # log(1 + exp(-m)) via logaddexp; sigmoid via tanh for stability.
    def _sig_neg(m):
        # sigmoid(-m), stable for large |m|
        return 0.5 * (1.0 - np.tanh(0.5 * m))

    return Loss(
        name="logistic",
        pos=lambda v: np.logaddexp(0.0, -v),
        neg=lambda v: np.logaddexp(0.0, v),
        dpos=lambda v: -_sig_neg(v),
        dneg=lambda v: _sig_neg(-v),
        is_convex_in_v=True,
        is_convex_potential=True,
    )


def square() -> Loss:
    """Square loss (1 - y*v)^2; convex but not a convex potential
    (it increases again past margin 1)."""
    return Loss(
        name="square",
        pos=lambda v: (1.0 - v) ** 2,
        neg=lambda v: (1.0 + v) ** 2,
        dpos=lambda v: -2.0 * (1.0 - v),
        dneg=lambda v: 2.0 * (1.0 + v),
        is_convex_in_v=True,
        is_convex_potential=False,
    )


def t_logistic() -> Loss:
    """t-logistic loss at t=2: log(1 - y*v + sqrt(1 + v^2)). Non-convex."""

    def _eval(s):
        def f(v):
            return np.log(1.0 - s * v + np.sqrt(1.0 + v * v))

        return f

    def _deriv(s):
        def f(v):
            r = np.sqrt(1.0 + v * v)
            return (-s + v / r) / (1.0 - s * v + r)

        return f

    return Loss(
        name="tlogistic",
        pos=_eval(1.0),
        neg=_eval(-1.0),
        dpos=_deriv(1.0),
        dneg=_deriv(-1.0),
        is_convex_in_v=False,
        is_convex_potential=False,
    )


def tangent_boost() -> Loss:
    """TangentBoost loss (2*atan(y*v) - 1)^2. Non-convex."""

    def _eval(s):
        def f(v):
            return (2.0 * np.arctan(s * v) - 1.0) ** 2

        return f

    def _deriv(s):
        def f(v):
            return 4.0 * s * (2.0 * np.arctan(s * v) - 1.0) / (1.0 + v * v)

        return f

    return Loss(
        name="tangentboost",
        pos=_eval(1.0),
        neg=_eval(-1.0),
        dpos=_deriv(1.0),
        dneg=_deriv(-1.0),
        is_convex_in_v=False,
        is_convex_potential=False,
    )


def catalog() -> dict[str, Loss]:
    """The fixed loss catalog, keyed by CLI name (whinge at its c_neg=1/2 default)."""
    losses = [
        zero_one(),
        unhinged(),
        whinge(0.5),
        hinge(),
        logistic(),
        square(),
        t_logistic(),
        tangent_boost(),
    ]
    return {ls.name.split(":")[0]: ls for ls in losses}


def loss_by_name(name: str) -> Loss:
    """Resolve a CLI/config loss name such as "hinge" or "whinge:0.3"."""
    if name.startswith("whinge"):
        parts = name.split(":")
        if len(parts) == 1:
            return whinge(0.5)
        if len(parts) == 2:
            try:
                return whinge(float(parts[1]))
            except ValueError as exc:
                raise ValueError(f"bad whinge weight in {name!r}") from exc
        raise ValueError(f"bad loss name {name!r}")
    table = {
        "zero_one": zero_one,
        "unhinged": unhinged,
        "hinge": hinge,
        "logistic": logistic,
        "square": square,
        "tlogistic": t_logistic,
        "tangentboost": tangent_boost,
    }
    if name not in table:
        raise ValueError(f"unknown loss {name!r}; known: {sorted(table)} and whinge:<c_neg>")
    return table[name]()


def conditional_risk(loss: Loss, eta: float, v: float) -> float:
    """Pointwise risk eta * loss(+1, v) + (1 - eta) * loss(-1, v)."""
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    v = np.asarray(v, dtype=float)
    out = eta * loss.pos(v) + (1.0 - eta) * loss.neg(v)
    return out if out.ndim else float(out)


def _midpoint_convex(f: ScoreFn, lo: float = -10.0, hi: float = 10.0, n: int = 201) -> bool:
    """Numerically probe midpoint convexity of f on a grid."""
    v = np.linspace(lo, hi, n)
    a, b = np.meshgrid(v, v)
    gap = f((a + b) / 2.0) - 0.5 * (f(a) + f(b))
    return bool(np.max(gap) <= 1e-9)


def noise_correct(loss: Loss, rho) -> Loss:
    """Build the loss whose risk on the label-flipped distribution equals
    the input loss's risk on the clean one.

    For flip probability rho the corrected evaluators are
    ``((1 - rho) * loss(y, v) - rho * loss(-y, v)) / (1 - 2 rho)``.
    Correction is invertible; at rho = 0 it is the identity.
    """
    r = _as_rho(rho)
    if r == 0.0:
        return loss
    a = (1.0 - r) / (1.0 - 2.0 * r)
    b = r / (1.0 - 2.0 * r)
    pos = lambda v, _p=loss.pos, _n=loss.neg: a * _p(v) - b * _n(v)
    neg = lambda v, _p=loss.pos, _n=loss.neg: a * _n(v) - b * _p(v)
    dpos = lambda v, _p=loss.dpos, _n=loss.dneg: a * _p(v) - b * _n(v)
    dneg = lambda v, _p=loss.dpos, _n=loss.dneg: a * _n(v) - b * _p(v)
    # Correction can destroy or preserve convexity depending on the input
    # (it preserves it exactly for constant-sum losses); probe numerically.
    convex = _midpoint_convex(pos) and _midpoint_convex(neg)
    return Loss(
        name=f"corrected({loss.name},rho={r:g})",
        pos=pos,
        neg=neg,
        dpos=dpos,
        dneg=dneg,
        is_convex_in_v=convex,
        is_convex_potential=False,  # corrected losses are unbounded below for rho > 0
    )


@dataclass(frozen=True)
class RobustnessCheck:
    robust: bool
    constant: float | None = None


def is_strongly_sln_robust(loss: Loss, grid=None, tol: float = 1e-8) -> RobustnessCheck:
    """Test whether loss(+1, v) + loss(-1, v) is constant over a score grid.

    Constancy of the label sum characterizes the losses whose noise-corrected
    versions rank all scorers identically at every flip rate.  Returns the
    median sum as the constant when the test passes.
    """
    if grid is None:
        grid = np.arange(-10.0, 10.0 + 1e-12, 0.1)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    if not tol > 0:
        raise ValueError("tol must be positive")
    sums = loss.pos(grid) + loss.neg(grid)
    med = float(np.median(sums))
    robust = bool(np.max(np.abs(sums - med)) <= tol)
    return RobustnessCheck(robust=robust, constant=med if robust else None)


def unhinge_family_plot_data(base: Loss, rhos, v_grid) -> np.ndarray:
    """Tabulate the positive-label curve of noise-corrected versions of a loss.

    Returns an array of rows (rho, v, corrected_loss(+1, v)), one block per
    flip rate, suitable for direct CSV emission.
    """
    v_grid = np.asarray(v_grid, dtype=float)
    rows = []
    for rho in rhos:
        lbar = noise_correct(base, rho)
        vals = lbar.pos(v_grid)
        r = _as_rho(rho)
        for v, val in zip(v_grid, np.atleast_1d(vals)):
            rows.append((r, float(v), float(val)))
    return np.array(rows, dtype=float)
