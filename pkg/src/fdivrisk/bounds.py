"""Risk lower bounds built from f-mutual-information values.

The master inequality lower-bounds the Bayes risk by
rho * (1 - L * f^{-1}((I_f + (1 - L) f*(0)) / L)) for every rho > 0, with L
the small-ball mass at radius rho.  With a linear small-ball envelope
L <= c * rho both parametric families reduce to maximising
rho * (1 - C rho^t - b), which has an exact maximiser; a golden-section
fallback covers anything else and doubles as the optimiser's oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .divergences import (
    DivergenceInfiniteError,
    DivergenceValue,
    e_beta_gamma_numeric,
    hellinger_divergence,
    raw_from_scaled,
)
from .generators import Generator, Hellinger, HockeyStick
from .models import Model, SmallBallBound
from .numerics import golden_section_max

__all__ = [
    "BoundResult",
    "SearchSpec",
    "hellinger_bound",
    "hockey_stick_bound",
    "master_bound",
    "optimize_parameters",
    "optimize_rho_closed_form",
    "optimize_rho_golden",
]


@dataclass(frozen=True)
class BoundResult:
    """A risk lower bound together with everything that produced it.

    ``vacuous`` marks parameter choices whose bound is non-positive at every
    rho; the value is then reported as 0 (the risk is non-negative anyway)
    and ``rho_star`` is meaningless.
    """

    value: float
    rho_star: float
    generator: Generator
    divergence: DivergenceValue
    method: str  # "closed_form_rho" | "golden_section_rho"
    vacuous: bool = False


def _as_divergence(value: "DivergenceValue | float") -> DivergenceValue:
    if isinstance(value, DivergenceValue):
        return value
    return DivergenceValue(float(value), "closed_form")


def _coefficient(small_ball: "SmallBallBound | float") -> float:
    c = small_ball.coefficient if isinstance(small_ball, SmallBallBound) else float(small_ball)
    if not c > 0.0:
        raise ValueError("small-ball coefficient must be positive")
    return c


# --------------------------------------------------------------------------
# rho maximisation: sup_rho rho * (1 - c rho^t - b)
# --------------------------------------------------------------------------


def optimize_rho_closed_form(c: float, t: float, b: float = 0.0) -> tuple[float, float]:
    """Exact maximiser and maximum of h(rho) = rho (1 - c rho^t - b).

    rho* = ((1-b) / ((t+1) c))^(1/t) and
    h(rho*) = t / c^(1/t) * ((1-b) / (t+1))^(1 + 1/t).
    Returns (0, 0) when b >= 1 (the bound is vacuous for every rho).
    """
    if not c > 0.0:
        raise ValueError("c must be positive")
    if not t > 0.0:
        raise ValueError("t must be positive")
    if not b >= 0.0:
        raise ValueError("b must be non-negative")
    if b >= 1.0:
        return 0.0, 0.0
    rho_star = ((1.0 - b) / ((t + 1.0) * c)) ** (1.0 / t)
    value = (t / c ** (1.0 / t)) * ((1.0 - b) / (t + 1.0)) ** (1.0 + 1.0 / t)
    return rho_star, value


def optimize_rho_golden(
    c: float, t: float, b: float = 0.0, *, tol: float = 1e-12
) -> tuple[float, float]:
    """Golden-section maximisation of rho (1 - c rho^t - b) on (0, rho_vacuous).

    Numerical fallback for small-ball envelopes without the closed form; also
    the independent oracle the exact maximiser is certified against.
    """
    if b >= 1.0:
        return 0.0, 0.0
    hi = ((1.0 - b) / c) ** (1.0 / t)
    return golden_section_max(
        lambda rho: rho * (1.0 - c * rho**t - b), 0.0, hi, tol=tol * hi, max_iter=400
    )


# --------------------------------------------------------------------------
# The master bound and its two family instantiations
# --------------------------------------------------------------------------


def master_bound(
    g: Generator,
    i_f: "DivergenceValue | float",
    small_ball: float,
    rho: float,
) -> float:
    """Risk lower bound at a fixed rho and small-ball mass.

    ``i_f`` is interpreted in the canonical convention (scaled for the
    Hellinger family, raw for hockey-stick).  When f*(0) <= 0 the conjugate
    term drops out.  A negative parenthesis is clamped to 0: the underlying
    tail inequality is then trivially true and carries no information.
    """
    if not 0.0 < small_ball <= 1.0:
        raise ValueError("small-ball mass must lie in (0, 1]")
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    div = _as_divergence(i_f)
    raw = raw_from_scaled(div, g.p) if isinstance(g, Hellinger) else div.value
    if raw < -1e-9:
        raise ValueError("divergence value must be non-negative")
    raw = max(0.0, raw)
    f_star = g.conjugate_at_zero()
    if f_star <= 0.0:
        arg = raw / small_ball
    else:
        arg = (raw + (1.0 - small_ball) * f_star) / small_ball
    return rho * max(0.0, 1.0 - small_ball * g.generalized_inverse(arg))


def hellinger_bound(
    p: float,
    scaled_divergence: "DivergenceValue | float",
    small_ball_coeff: "SmallBallBound | float",
) -> BoundResult:
    """Best-rho Hellinger bound for a linear small-ball envelope.

    Maximises rho (1 - (c rho)^((p-1)/p) * scaled^(1/p)) exactly.
    """
    generator = Hellinger(p)
    div = _as_divergence(scaled_divergence)
    if div.value < 1.0 - 1e-9:
        raise ValueError("scaled divergence must be at least 1")
    c = _coefficient(small_ball_coeff)
    t = (p - 1.0) / p
    scaled = max(1.0, div.value)
    rho_star, value = optimize_rho_closed_form(c**t * scaled ** (1.0 / p), t)
    return BoundResult(value, rho_star, generator, div, "closed_form_rho")


def hockey_stick_bound(
    beta: float,
    gamma: float,
    e_value: "DivergenceValue | float",
    small_ball_coeff: "SmallBallBound | float",
) -> BoundResult:
    """Best-rho hockey-stick bound for a linear small-ball envelope.

    Maximises rho (1 - (E + gamma c rho) / beta); for E < beta the maximum is
    (beta - E)^2 / (4 gamma beta c), otherwise the bound is vacuous.
    """
    generator = HockeyStick(beta, gamma)
    div = _as_divergence(e_value)
    if div.value < -1e-9:
        raise ValueError("divergence value must be non-negative")
    c = _coefficient(small_ball_coeff)
    e = max(0.0, div.value)
    if e >= beta:
        return BoundResult(0.0, 0.0, generator, div, "closed_form_rho", vacuous=True)
    rho_star, value = optimize_rho_closed_form(gamma * c / beta, 1.0, e / beta)
    return BoundResult(value, rho_star, generator, div, "closed_form_rho")


# --------------------------------------------------------------------------
# Parameter search (sup over p, or over beta and gamma)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpec:
    """Grids and refinement budget for the parameter search.

    Defaults: 33 log-spaced Hellinger orders with p - 1 in [2^-6, 7], a
    32 x 32 hockey-stick grid with beta in [0.05, 4] and gamma in [beta, 8],
    and 64 refinement evaluations around the best grid point.
    """

    p_excess_lo: float = 2.0**-6
    p_max: float = 8.0
    p_points: int = 33
    beta_lo: float = 0.05
    beta_hi: float = 4.0
    beta_points: int = 32
    gamma_hi: float = 8.0
    gamma_points: int = 32
    refine_budget: int = 64

    def p_grid(self) -> list[float]:
        lo = math.log(self.p_excess_lo)
        hi = math.log(self.p_max - 1.0)
        if self.p_points == 1:
            return [1.0 + self.p_excess_lo]
        step = (hi - lo) / (self.p_points - 1)
        return [1.0 + math.exp(lo + i * step) for i in range(self.p_points)]

    def beta_grid(self) -> list[float]:
        if self.beta_points == 1:
            return [self.beta_lo]
        lo = math.log(self.beta_lo)
        step = (math.log(self.beta_hi) - lo) / (self.beta_points - 1)
        return [math.exp(lo + i * step) for i in range(self.beta_points)]

    def gamma_grid(self, beta: float) -> list[float]:
        if self.gamma_points == 1 or self.gamma_hi <= beta:
            return [beta]
        step = (self.gamma_hi - beta) / (self.gamma_points - 1)
        return [beta + i * step for i in range(self.gamma_points)]


DEFAULT_SEARCH = SearchSpec()


@lru_cache(maxsize=None)
def _cached_hellinger(model: Model, p: float) -> DivergenceValue:
    return hellinger_divergence(model, p)


@lru_cache(maxsize=None)
def _cached_e_value(model: Model, beta: float, gamma: float) -> DivergenceValue:
    return e_beta_gamma_numeric(model, beta, gamma)


class _BestTracker:
    """Records the best bound seen across grid and refinement evaluations, so
    a non-unimodal stretch cannot make refinement return less than the grid."""

    def __init__(self):
        self.result: BoundResult | None = None

    def consider(self, result: "BoundResult | None") -> float:
        if result is None:
            return -math.inf
        if self.result is None or result.value > self.result.value:
            self.result = result
        return result.value


def _optimize_hellinger(model: Model, c: float, search: SearchSpec) -> BoundResult:
    best = _BestTracker()

    def objective(p: float) -> float:
        try:
            div = _cached_hellinger(model, p)
        except DivergenceInfiniteError:
            return best.consider(None)
        return best.consider(hellinger_bound(p, div, c))

    grid = search.p_grid()
    values = [objective(p) for p in grid]
    best_idx = max(range(len(grid)), key=lambda i: values[i])
    if best.result is None:
        raise ValueError("no feasible point in the Hellinger search grid")
    lo = grid[max(0, best_idx - 1)]
    hi = grid[min(len(grid) - 1, best_idx + 1)]
    golden_section_max(objective, lo, hi, tol=1e-9 * (hi - lo), max_iter=search.refine_budget)
    return best.result


def _optimize_hockey_stick(model: Model, c: float, search: SearchSpec) -> BoundResult:
    best = _BestTracker()

    def objective(beta: float, gamma: float) -> float:
        if not (beta > 0.0 and gamma >= beta):
            return -math.inf
        return best.consider(hockey_stick_bound(beta, gamma, _cached_e_value(model, beta, gamma), c))

    best_pair = None
    best_value = -math.inf
    for beta in search.beta_grid():
        for gamma in search.gamma_grid(beta):
            value = objective(beta, gamma)
            if value > best_value:
                best_value = value
                best_pair = (beta, gamma)
    if best.result is None or best_pair is None:
        raise ValueError("no feasible point in the hockey-stick search grid")

    # Coordinate descent around the grid winner, gamma first.
    beta, gamma = best_pair
    per_pass = max(4, search.refine_budget // 4)
    for _ in range(2):
        gamma, _ = golden_section_max(
            lambda gm: objective(beta, gm),
            beta,
            search.gamma_hi,
            tol=1e-6 * max(1.0, search.gamma_hi - beta),
            max_iter=per_pass,
        )
        gamma = max(gamma, beta)
        beta, _ = golden_section_max(
            lambda bt: objective(bt, max(gamma, bt)),
            search.beta_lo,
            min(gamma, search.beta_hi),
            tol=1e-6,
            max_iter=per_pass,
        )
    return best.result


def optimize_parameters(
    model: Model, family: str, search: SearchSpec = DEFAULT_SEARCH
) -> BoundResult:
    """Best bound over a parametric family: grid scan plus local refinement.

    ``family`` is "hellinger" (sup over the order p) or "hockey_stick" (sup
    over beta and gamma with gamma >= beta).  The inner rho maximisation is
    always exact; divergence values are cached per (model, parameters), so
    repeated sweeps do not re-run quadratures.
    """
    c = model.small_ball_coefficient().coefficient
    key = family.replace("-", "_")
    if key == "hellinger":
        return _optimize_hellinger(model, c, search)
    if key == "hockey_stick":
        return _optimize_hockey_stick(model, c, search)
    raise ValueError(f"unknown bound family {family!r}")
