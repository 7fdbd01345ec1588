"""Independent oracles that certify the analytic machinery.

Three kinds of cross-checks, deliberately unsophisticated so they share no
code path with what they certify: dense-grid midpoint integration of the
divergence definition, vectorised Monte Carlo under the product measure, and
simulated estimator risks that every emitted lower bound must stay below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bounds import BoundResult, hellinger_bound, hockey_stick_bound, optimize_parameters
from .divergences import (
    DivergenceValue,
    e_beta_gamma_numeric,
    hellinger_divergence,
)
from .generators import Generator, Hellinger, HockeyStick
from .models import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    BernoulliModel,
    GaussianModel,
    Model,
    make_rng,
)
from .numerics import adaptive_quadrature

__all__ = [
    "OracleReport",
    "brute_force_divergence",
    "certification_suite",
    "certify_bounds",
    "exact_bernoulli_risk",
    "generator_label",
    "monte_carlo_divergence",
    "monte_carlo_risk",
    "risk_report",
]

_MC_CHUNK = 1_000_000


@dataclass(frozen=True)
class OracleReport:
    """One analytic-vs-oracle comparison.

    ``tolerance_used`` is the absolute acceptance band; stochastic oracles
    widen it to three standard errors.  Bound certifications are one-sided
    (a lower bound only has to stay below the risk).
    """

    quantity: str
    analytic: float
    oracle: float
    oracle_std_err: float
    passed: bool
    tolerance_used: float


def generator_label(g: Generator) -> str:
    if isinstance(g, Hellinger):
        return f"hellinger(p={g.p:g})"
    return f"hockey-stick(beta={g.beta:g},gamma={g.gamma:g})"


def _model_label(model: Model) -> str:
    if isinstance(model, BernoulliModel):
        return f"bernoulli(n={model.n})"
    return f"gaussian(n={model.n},sw2={model.sigma_w_sq:g},s2={model.sigma_sq:g})"


def _apply_generator(g: Generator, ratio: np.ndarray) -> np.ndarray:
    # Independent re-statement of the generators for vectorised oracles.
    if isinstance(g, Hellinger):
        return (ratio**g.p - 1.0) / (g.p - 1.0)
    return np.maximum(0.0, g.beta * ratio - g.gamma)


def _canonical(g: Generator, raw: float) -> float:
    return (g.p - 1.0) * raw + 1.0 if isinstance(g, Hellinger) else raw


# --------------------------------------------------------------------------
# Dense-grid and Monte-Carlo divergence oracles
# --------------------------------------------------------------------------


def brute_force_divergence(model: Model, g: Generator, grid_points: int = 10**6) -> float:
    """Midpoint-rule evaluation of the defining divergence integral.

    Deliberately dumb (no adaptivity, no kink handling): its only job is to
    certify the quadrature engine and the closed forms on small instances.
    Returns the canonical (scaled Hellinger / raw hockey-stick) value.
    """
    if grid_points < 1000:
        raise ValueError("grid_points must be at least 1000")
    if isinstance(model, BernoulliModel):
        n = model.n
        w = (np.arange(grid_points) + 0.5) / grid_points
        log_w = np.log(w)
        log_1mw = np.log1p(-w)
        means = []
        for k in range(n + 1):
            log_ratio = (
                math.log(n + 1.0)
                + (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))
                + k * log_w
                + (n - k) * log_1mw
            )
            means.append(_apply_generator(g, np.exp(log_ratio)).mean())
        raw = float(np.mean(means))
        return _canonical(g, raw)

    side = max(32, int(round(math.sqrt(grid_points))))
    sw = math.sqrt(model.sigma_w_sq)
    m2 = model.marginal_var
    s2 = model.noise_var
    m = math.sqrt(m2)
    w_edge, x_edge = 8.0 * sw, 8.0 * m
    w_grid = -w_edge + (np.arange(side) + 0.5) * (2.0 * w_edge / side)
    x_grid = -x_edge + (np.arange(side) + 0.5) * (2.0 * x_edge / side)
    dw = 2.0 * w_edge / side
    dx = 2.0 * x_edge / side
    pdf_x = np.exp(-0.5 * x_grid**2 / m2) / math.sqrt(2.0 * math.pi * m2)
    total = 0.0
    for w in w_grid:
        log_ratio = 0.5 * math.log(m2 / s2) - 0.5 * (x_grid - w) ** 2 / s2 + 0.5 * x_grid**2 / m2
        row = float(np.sum(pdf_x * _apply_generator(g, np.exp(log_ratio))))
        total += math.exp(-0.5 * w * w / (sw * sw)) / math.sqrt(2.0 * math.pi * sw * sw) * row
    return _canonical(g, total * dw * dx)


def monte_carlo_divergence(
    model: Model, g: Generator, samples: int = 10**7, seed: int = DEFAULT_SEED
) -> DivergenceValue:
    """Monte-Carlo estimate of the f-mutual information under the product
    measure, with its standard error; bit-for-bit reproducible per seed."""
    if samples < 10**4:
        raise ValueError("samples must be at least 10^4")
    rng = make_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    if isinstance(model, BernoulliModel):
        n = model.n
        log_comb_tab = np.array(
            [math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) for k in range(n + 1)]
        )
        while done < samples:
            size = min(_MC_CHUNK, samples - done)
            w = rng.random(size)
            # Under the product of the marginals the Hamming weight is
            # uniform on 0..n, independent of the bias draw.
            k = rng.integers(0, n + 1, size)
            log_ratio = math.log(n + 1.0) + log_comb_tab[k] + k * np.log(w) + (n - k) * np.log1p(-w)
            vals = _apply_generator(g, np.exp(log_ratio))
            total += float(vals.sum())
            total_sq += float((vals * vals).sum())
            done += size
    else:
        sw = math.sqrt(model.sigma_w_sq)
        m2 = model.marginal_var
        s2 = model.noise_var
        while done < samples:
            size = min(_MC_CHUNK, samples - done)
            w = rng.normal(0.0, sw, size)
            x = rng.normal(0.0, math.sqrt(m2), size)
            log_ratio = 0.5 * math.log(m2 / s2) - 0.5 * (x - w) ** 2 / s2 + 0.5 * x**2 / m2
            vals = _apply_generator(g, np.exp(log_ratio))
            total += float(vals.sum())
            total_sq += float((vals * vals).sum())
            done += size
    mean = total / samples
    var = max(0.0, (total_sq - samples * mean * mean) / (samples - 1))
    std_err = math.sqrt(var / samples)
    if isinstance(g, Hellinger):
        return DivergenceValue(_canonical(g, mean), "monte_carlo", (g.p - 1.0) * std_err)
    return DivergenceValue(mean, "monte_carlo", std_err)


# --------------------------------------------------------------------------
# Risk oracles
# --------------------------------------------------------------------------


def exact_bernoulli_risk(model: BernoulliModel, estimator: str = "posterior_median") -> float:
    """Exact estimator risk by enumeration over Hamming weights.

    Per weight k the posterior is Beta(k+1, n-k+1); the conditional risk is a
    1-D integral of |w - estimate| against it, split at the estimate where
    the integrand kinks.
    """
    n = model.n
    terms = []
    for k in range(n + 1):
        if estimator == "posterior_median":
            est = model.posterior_median(k)
        elif estimator == "posterior_mean":
            est = model.posterior_mean(k)
        else:
            raise ValueError(f"unknown estimator {estimator!r}")
        val, _ = adaptive_quadrature(
            lambda w, _k=k, _e=est: abs(w - _e) * model.density_ratio(w, _k),
            0.0,
            1.0,
            rel_tol=1e-11,
            abs_tol=1e-15,
            breakpoints=(est,),
        )
        terms.append(val)
    return math.fsum(terms) / (n + 1.0)


def monte_carlo_risk(
    model: Model,
    estimator: str = "posterior_median",
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> OracleReport:
    """Simulated estimator risk compared against the exact reference.

    The reference is the Hamming-weight enumeration for the coin-flip model
    and the closed-form posterior risk for the Gaussian one (where posterior
    mean and median coincide).
    """
    oracle, std_err = model.simulate_risk(estimator, samples, seed)
    if isinstance(model, BernoulliModel):
        analytic = exact_bernoulli_risk(model, estimator)
    else:
        analytic = model.bayes_risk_reference().value
    tolerance = 3.0 * std_err
    return OracleReport(
        quantity=f"risk[{_model_label(model)}]/{estimator}",
        analytic=analytic,
        oracle=oracle,
        oracle_std_err=std_err,
        passed=abs(analytic - oracle) <= tolerance,
        tolerance_used=tolerance,
    )


def risk_report(model: Model, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> OracleReport:
    """Reference risk in report form: exact for Gaussian, Monte Carlo otherwise."""
    if isinstance(model, GaussianModel):
        value = model.bayes_risk_reference().value
        return OracleReport(
            quantity=f"risk[{_model_label(model)}]/exact",
            analytic=value,
            oracle=value,
            oracle_std_err=0.0,
            passed=True,
            tolerance_used=0.0,
        )
    return monte_carlo_risk(model, "posterior_median", samples, seed)


def certify_bounds(
    model: Model, bound_results: list[BoundResult], risk: OracleReport
) -> list[OracleReport]:
    """One-sided soundness reports: every lower bound must not exceed the
    oracle risk plus three of its standard errors."""
    if not bound_results:
        raise ValueError("no bounds to certify")
    reports = []
    slack = 3.0 * risk.oracle_std_err
    for result in bound_results:
        reports.append(
            OracleReport(
                quantity=f"{_model_label(model)}: {generator_label(result.generator)} <= risk",
                analytic=result.value,
                oracle=risk.oracle,
                oracle_std_err=risk.oracle_std_err,
                passed=result.value <= risk.oracle + slack,
                tolerance_used=slack,
            )
        )
    return reports


# --------------------------------------------------------------------------
# Full certification sweep (CLI `validate`)
# --------------------------------------------------------------------------


def _relative_report(quantity: str, analytic: float, oracle: float, rel_tol: float, abs_tol: float) -> OracleReport:
    tolerance = max(rel_tol * abs(analytic), abs_tol)
    return OracleReport(
        quantity=quantity,
        analytic=analytic,
        oracle=oracle,
        oracle_std_err=0.0,
        passed=abs(analytic - oracle) <= tolerance,
        tolerance_used=tolerance,
    )


def certification_suite(
    template: Model,
    ns: "list[int] | range",
    *,
    p: float | None = None,
    beta: float = 0.75,
    gamma: float = 2.2,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    optimize: bool = False,
    search=None,
) -> list[OracleReport]:
    """Certify closed forms against brute force and every bound against the
    risk oracle, for each sample count in ``ns``.

    ``template`` fixes the model family and its nuisance parameters; its
    sample count is replaced per sweep entry.
    """
    ns = list(ns)
    if not ns:
        raise ValueError("empty n range")
    if p is None:
        p = 2.0 if isinstance(template, BernoulliModel) else 1.5
    reports: list[OracleReport] = []

    smallest = replace(template, n=ns[0])
    if isinstance(smallest, BernoulliModel):
        rel, floor, points = 1e-5, 1e-8, 10**6
    else:
        rel, floor, points = 1e-4, 1e-7, 4 * 10**6
    reports.append(
        _relative_report(
            f"{_model_label(smallest)}: closed-form {generator_label(Hellinger(p))} vs brute force",
            hellinger_divergence(smallest, p).value,
            brute_force_divergence(smallest, Hellinger(p), points),
            rel,
            floor,
        )
    )
    reports.append(
        _relative_report(
            f"{_model_label(smallest)}: quadrature {generator_label(HockeyStick(beta, gamma))} vs brute force",
            e_beta_gamma_numeric(smallest, beta, gamma).value,
            brute_force_divergence(smallest, HockeyStick(beta, gamma), points),
            max(rel, 1e-4),
            max(floor, 1e-6),
        )
    )

    for n in ns:
        model = replace(template, n=n)
        coeff = model.small_ball_coefficient()
        results = [
            hellinger_bound(p, hellinger_divergence(model, p), coeff),
            hockey_stick_bound(beta, gamma, e_beta_gamma_numeric(model, beta, gamma), coeff),
        ]
        if optimize:
            kwargs = {} if search is None else {"search": search}
            results.append(optimize_parameters(model, "hellinger", **kwargs))
            results.append(optimize_parameters(model, "hockey_stick", **kwargs))
        risk = risk_report(model, samples, seed + n)
        reports.extend(certify_bounds(model, results, risk))
    return reports
