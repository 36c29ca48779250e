"""Batch gradient descent with risk-scaled adaptive stepsizes.

The adaptive scheme multiplies a base stepsize eta by the inverse decay rate
of the loss evaluated at the current empirical risk:

    eta_t = eta * (-l^{-1})'(L(w_t)),    w_{t+1} = w_t - eta_t * grad L(w_t).

That update is algebraically identical to a constant-eta step on the
transformed objective phi(w) = -l^{-1}(L(w)), whose gradient

    grad phi(w) = (-l^{-1})'(L(w)) * grad L(w)

has norm at most the loss's lipschitz_const on unit-ball data. All adaptive
iterations here step along grad phi directly: it is the numerically stable
route, exact in log space even when the risk itself underflows float64.
Constant-stepsize mode keeps raw-risk arithmetic on purpose (it is the
baseline being compared against) and reports divergence instead of switching
representations.

Risks are carried as (value, log_value) pairs. Gradient coefficients are
assembled as integer_weight * exp(log terms), never exp(log terms + log
weight): keeping multiplicity weights outside the exponential preserves
exact factor-of-two ratios between repeated rows, which the hard-instance
span checks rely on down to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset
from .losses import LossSpec, log1mexp


@dataclass(frozen=True)
class RiskValue:
    """Empirical risk as a (value, log_value) pair.

    log_value is authoritative; value is exp(log_value) clipped to the float
    range (0.0 after underflow, inf after overflow).
    """

    value: float
    log_value: float


def _risk_from_log(log_value: float) -> RiskValue:
    if log_value > 709.0:
        return RiskValue(math.inf, log_value)
    return RiskValue(math.exp(log_value), log_value)


def _weighted_lse(a: np.ndarray, weights: np.ndarray | None) -> float:
    """log(sum_i w_i e^{a_i}) with the usual max shift; weights stay outside
    the exponential."""
    m = float(np.max(a))
    if not math.isfinite(m):
        return m
    e = np.exp(a - m)
    if weights is not None:
        e = weights * e
    return m + math.log(float(np.sum(e)))


def risk(w: np.ndarray, ds: Dataset, loss: LossSpec) -> RiskValue:
    """Weighted mean loss over the dataset at parameter w."""
    z = ds.margins(w)
    log_value = _weighted_lse(loss.log_value(z), ds.weights) - math.log(ds.n)
    return _risk_from_log(log_value)


def grad_risk(w: np.ndarray, ds: Dataset, loss: LossSpec) -> np.ndarray:
    """Raw-domain gradient (1/n) sum_i w_i l'(z_i) y_i x_i.

    May overflow for losses with exploding derivatives at very negative
    margins; that is intentional in constant-stepsize mode.
    """
    z = ds.margins(w)
    coef = loss.deriv(z) * ds.labels
    if ds.weights is not None:
        coef = ds.weights * coef
    return (coef @ ds.features) / ds.n


def grad_phi(w: np.ndarray, ds: Dataset, loss: LossSpec) -> np.ndarray:
    """Gradient of the transformed objective phi = -l^{-1}(risk).

    Always finite for the smooth losses: the per-row coefficients are
    exp(log inverse-decay + log |l'| - log n), summing to at most the loss's
    lipschitz_const.
    """
    z = ds.margins(w)
    if loss.kind == "exp":
        # softmax of -z with multiplicities; exact ratio preservation matters
        s = -z
        m = float(np.max(s))
        e = np.exp(s - m)
        if ds.weights is not None:
            e = ds.weights * e
        coef = e / float(np.sum(e))
    else:
        r = risk(w, ds, loss)
        lnid = loss.log_neg_inv_deriv(r.value, r.log_value)
        coef = np.exp(lnid + loss.log_abs_deriv(z) - math.log(ds.n))
        if ds.weights is not None:
            coef = ds.weights * coef
    return -((coef * ds.labels) @ ds.features)


def phi_from_risk(loss: LossSpec, r: RiskValue) -> float:
    """phi = -l^{-1}(u) from the (value, log_value) pair of the risk u."""
    u, lu = r.value, r.log_value
    if loss.kind == "exp":
        return lu
    if loss.kind == "log":
        # ln(e^u - 1) = u + ln(1 - e^{-u}); for tiny u this is ln u + u/2 + ...
        if u > 1e-8:
            return u + float(log1mexp(u))
        return lu + u / 2.0
    if loss.kind == "semicircle":
        if u > 1e-150:
            return u - 1.0 / u
        with np.errstate(over="ignore"):
            return float(-np.exp(-lu))
    if loss.kind == "poly":
        if u > 1.0:
            return -loss.inverse(u)
        with np.errstate(over="ignore"):
            return float(1.0 - np.exp(-lu / loss.k))
    raise ValueError(f"phi is undefined for the {loss.kind} loss")


def phi(w: np.ndarray, ds: Dataset, loss: LossSpec) -> float:
    return phi_from_risk(loss, risk(w, ds, loss))


def log_adaptive_stepsize(loss: LossSpec, r: RiskValue, eta: float) -> float:
    """ln eta_t = ln eta + ln (-l^{-1})'(risk); always finite."""
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    return math.log(eta) + loss.log_neg_inv_deriv(r.value, r.log_value)

def adaptive_stepsize(loss: LossSpec, r: RiskValue, eta: float) -> float:
    """eta_t = eta * (-l^{-1})'(risk), inf when it exceeds the float range.

    Callers that need the always-finite representation should use
    log_adaptive_stepsize; trajectories record both.
    """
    ls = log_adaptive_stepsize(loss, r, eta)
    if ls > 709.0:
        return math.inf
    return math.exp(ls)


@dataclass(frozen=True)
class GDConfig:
    loss: LossSpec
    eta: float
    steps: int
    mode: str = "adaptive"  # "adaptive" | "constant"
    init: np.ndarray | None = None
    record_every: int = 1

    def __post_init__(self):
        if self.mode not in ("adaptive", "constant"):
            raise ValueError(f"mode must be adaptive or constant, got {self.mode!r}")
        if self.mode == "adaptive" and self.loss.kind == "hinge":
            raise ValueError("adaptive mode needs an invertible loss; hinge has none")
        if not self.eta > 0.0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not (isinstance(self.steps, int) and self.steps >= 0):
            raise ValueError(f"steps must be a nonnegative integer, got {self.steps!r}")
        if not (isinstance(self.record_every, int) and self.record_every >= 1):
            raise ValueError(f"record_every must be a positive integer, got {self.record_every!r}")


@dataclass(frozen=True)
class TrajectoryPoint:
    t: int
    w: np.ndarray
    risk: RiskValue
    phi: float
    stepsize: float  # eta_t about to be applied at this iterate
    log_stepsize: float
    min_margin: float
    avg_w: np.ndarray  # running average of w_0 .. w_t
    avg_risk: RiskValue
    avg_min_margin: float
    descent_violated: bool  # risk went up relative to the previous iterate


@dataclass
class Trajectory:
    config: GDConfig
    points: list[TrajectoryPoint] = field(default_factory=list)
    diverged_at: int | None = None

    @property
    def final(self) -> TrajectoryPoint:
        return self.points[-1]

    def column(self, name: str) -> np.ndarray:
        if name == "log_risk":
            return np.array([p.risk.log_value for p in self.points])
        if name == "log_avg_risk":
            return np.array([p.avg_risk.log_value for p in self.points])
        return np.array([getattr(p, name) for p in self.points])


def run_gd(ds: Dataset, config: GDConfig) -> Trajectory:
    """Run (adaptive or constant stepsize) gradient descent and record the
    trajectory of iterates and running averages.

    Recording happens every record_every steps and always at the final step.
    In constant mode a non-finite iterate stops the run and stamps
    diverged_at with the offending step index; adaptive mode cannot diverge
    (its step length is capped by eta times the loss's lipschitz_const).
    """
    loss = config.loss
    w = np.zeros(ds.d) if config.init is None else np.array(config.init, dtype=float)
    if w.shape != (ds.d,):
        raise ValueError(f"init has shape {w.shape}, dataset needs ({ds.d},)")

    traj = Trajectory(config=config)
    wsum = w.copy()
    prev_log_risk = math.inf

    for t in range(config.steps + 1):
        r = risk(w, ds, loss)
        # log_value of -inf means exactly zero risk (possible for hinge only),
        # which is success; +inf or nan means true blow-up
        if r.log_value == math.inf or math.isnan(r.log_value):
            traj.diverged_at = t
            break
        if t % config.record_every == 0 or t == config.steps:
            if loss.kind == "hinge":
                log_eta_t = math.log(config.eta)
            elif config.mode == "adaptive":
                log_eta_t = log_adaptive_stepsize(loss, r, config.eta)
            else:
                log_eta_t = math.log(config.eta)
            avg_w = wsum / (t + 1)
            avg_r = risk(avg_w, ds, loss)
            traj.points.append(
                TrajectoryPoint(
                    t=t,
                    w=w.copy(),
                    risk=r,
                    phi=phi_from_risk(loss, r) if loss.kind != "hinge" else math.nan,
                    stepsize=math.inf if log_eta_t > 709.0 else math.exp(log_eta_t),
                    log_stepsize=log_eta_t,
                    min_margin=ds.min_margin(w),
                    avg_w=avg_w,
                    avg_risk=avg_r,
                    avg_min_margin=ds.min_margin(avg_w),
                    descent_violated=bool(r.log_value > prev_log_risk),
                )
            )
        prev_log_risk = r.log_value
        if t == config.steps:
            break

        if config.mode == "adaptive":
            w = w - config.eta * grad_phi(w, ds, loss)
        else:
            with np.errstate(over="ignore", invalid="ignore"):
                w = w - config.eta * grad_risk(w, ds, loss)
        if not np.all(np.isfinite(w)):
            traj.diverged_at = t + 1
            break
        wsum += w

    return traj


def averaged_risk_log_bound(gamma: float, eta: float, t: int) -> float:
    """Log-domain guarantee for the averaged iterate of adaptive GD with the
    exp or logistic loss on gamma-margin unit-ball data started at zero:

        ln L(avg w_t) <= -((g^2 - 1) / (4 g)) * eta,   g = gamma^2 (t + 1),

    valid for every t >= 1. Once g >= 1 (t >= 1/gamma^2) the right side is
    at most -gamma^2 eta / 4.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"need 0 < gamma < 1, got {gamma}")
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not (isinstance(t, (int, np.integer)) and t >= 1):
        raise ValueError(f"the bound needs an integer t >= 1, got {t!r}")
    g = gamma * gamma * (t + 1.0)
    return -((g * g - 1.0) / (4.0 * g)) * eta


def general_loss_risk_log_bound(loss: LossSpec, gamma: float, eta: float, t: int) -> float:
    """Log of general_loss_risk_bound, safe when the bound value underflows."""
    if loss.kind not in ("exp", "log", "poly", "semicircle"):
        raise ValueError(f"no risk bound for the {loss.kind} loss")
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"need 0 < gamma < 1, got {gamma}")
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not (isinstance(t, (int, np.integer)) and t >= 1):
        raise ValueError(f"the bound needs an integer t >= 1, got {t!r}")
    g = gamma * gamma * (t + 1.0)
    c = loss.lipschitz_const()
    x = ((g * g - c) / (4.0 * g)) * eta
    return float(loss.log_value(x))


def general_loss_risk_bound(loss: LossSpec, gamma: float, eta: float, t: int) -> float:
    """Averaged-iterate guarantee for any supported smooth loss, evaluated in
    the loss's value domain:

        L(avg w_t) <= l(((g^2 - C) / (4 g)) * eta),   g = gamma^2 (t + 1),

    where C = loss.lipschitz_const() (which depends on loss.n; bind it to the
    dataset size first). For the exp loss, C = 1, this is exactly the
    exponential of averaged_risk_log_bound. The bound is weaker than l(0)
    while g < sqrt(C) and informative after.
    """
    lb = general_loss_risk_log_bound(loss, gamma, eta, t)
    if lb > 709.0:
        return math.inf
    return math.exp(lb)
