"""Two-layer networks with leaky activations trained by adaptive-stepsize GD.

The network is f(x) = (1/m) sum_j a_j sigma(<w_j, x>) with frozen signs
a_j in {-1, +1} and trainable first-layer rows w_j. Supported activations
satisfy two properties on the probe grid:

    slope window:      sigma'(z) in [alpha, 1]
    curvature defect:  |sigma(z) - sigma'(z) z| <= kappa

LeakyReLU has kappa = 0 exactly. The "leaky blend" family
sigma(z) = c z + ((1-c)/4) sigma*(z) for a base sigma* (gelu, softplus,
silu, relu) and 0.5 < c < 1 gets alpha and kappa measured on the grid (with
10% headroom on kappa for off-grid points).

Training steps the rows along the transformed-objective gradient with a
width-normalized stepsize:

    w_j <- w_j - eta * m * d phi / d w_j
         = w_j + eta * a_j * (1/n) sum_i c_i sigma'(s_ij) y_i x_i,

where c_i are the same positive per-row coefficients as in the linear case.
With m = 1 and slope ~1 this reduces exactly to linear adaptive GD. The
guarantee tracks the best iterate so far: for exp or log loss, zero
initialization, and gamma-margin data,

    min_{k <= t} ln L(net_k) <= kappa - ((A^2 - 1) / (4 gamma^2 (t+1))) * eta,

with A = alpha gamma^2 (t+1), valid for t >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf, expit

from .datasets import Dataset
from .descent import RiskValue, _risk_from_log, _weighted_lse
from .losses import LossSpec

_GRID = None


def _probe_grid() -> np.ndarray:
    global _GRID
    if _GRID is None:
        _GRID = np.linspace(-1000.0, 1000.0, 200001)
    return _GRID


def _base_pair(base: str, z: np.ndarray):
    """Value and derivative of the blend bases."""
    if base == "gelu":
        cdf = 0.5 * (1.0 + erf(z / math.sqrt(2.0)))
        pdf = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        return z * cdf, cdf + z * pdf
    if base == "softplus":
        return np.logaddexp(0.0, z), expit(z)
    if base == "silu":
        s = expit(z)
        return z * s, s * (1.0 + z * (1.0 - s))
    if base == "relu":
        return np.maximum(z, 0.0), np.where(z >= 0, 1.0, 0.0)
    raise ValueError(f"unknown blend base {base!r}")


@dataclass(frozen=True)
class Activation:
    name: str
    alpha: float  # infimum of the slope on the probe grid
    kappa: float  # bound on |sigma(z) - sigma'(z) z|
    _tag: str = field(repr=False, default="leakyrelu")
    _c: float = field(repr=False, default=math.nan)

    def value(self, z):
        z = np.asarray(z, dtype=float)
        if self._tag == "leakyrelu":
            out = np.where(z >= 0, z, self.alpha * z)
        else:
            base_v, _ = _base_pair(self._tag, z)
            out = self._c * z + ((1.0 - self._c) / 4.0) * base_v
        return float(out) if out.ndim == 0 else out

    def deriv(self, z):
        z = np.asarray(z, dtype=float)
        if self._tag == "leakyrelu":
            # the kink derivative is fixed from the right: sigma'(0) = 1
            out = np.where(z >= 0, 1.0, self.alpha)
        else:
            _, base_d = _base_pair(self._tag, z)
            out = self._c + ((1.0 - self._c) / 4.0) * base_d
        return float(out) if out.ndim == 0 else out


def leaky_relu(alpha: float) -> Activation:
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"leakyrelu slope must be in (0, 1], got {alpha}")
    return Activation(name=f"leakyrelu:{alpha:g}", alpha=float(alpha), kappa=0.0,
                      _tag="leakyrelu", _c=math.nan)


def leaky_blend(base: str, c: float) -> Activation:
    """Blend c*z + ((1-c)/4)*base(z); alpha and kappa measured on the grid."""
    if not (0.5 < c < 1.0):
        raise ValueError(f"blend coefficient must be in (0.5, 1), got {c}")
    z = _probe_grid()
    base_v, base_d = _base_pair(base, z)
    slope = c + ((1.0 - c) / 4.0) * base_d
    defect = np.abs((c * z + ((1.0 - c) / 4.0) * base_v) - slope * z)
    alpha = float(slope.min())
    kappa = 1.1 * float(defect.max())  # headroom for off-grid points
    label = "leaky-relu-variant" if base == "relu" else f"leaky-{base}"
    return Activation(name=f"{label}:{c:g}", alpha=alpha, kappa=kappa, _tag=base, _c=float(c))


def parse_activation(name: str) -> Activation:
    name = name.strip()
    if ":" not in name:
        raise ValueError(f"activation name needs a parameter, got {name!r}")
    head, _, raw = name.rpartition(":")
    try:
        param = float(raw)
    except ValueError:
        raise ValueError(f"bad activation parameter {raw!r} in {name!r}") from None
    if head == "leakyrelu":
        return leaky_relu(param)
    bases = {"leaky-gelu": "gelu", "leaky-softplus": "softplus",
             "leaky-silu": "silu", "leaky-relu-variant": "relu"}
    if head in bases:
        return leaky_blend(bases[head], param)
    raise ValueError(f"unknown activation {name!r}")


@dataclass
class TwoLayerNet:
    weights: np.ndarray  # (m, d) first-layer rows
    signs: np.ndarray  # (m,) fixed second layer, entries +-1
    activation: Activation

    def __post_init__(self):
        if self.weights.ndim != 2:
            raise ValueError("weights must be an (m, d) matrix")
        if self.signs.shape != (self.weights.shape[0],):
            raise ValueError("signs must have one entry per hidden unit")
        if not np.all(np.isin(self.signs, (-1.0, 1.0))):
            raise ValueError("signs must be exactly +-1")

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def d(self) -> int:
        return self.weights.shape[1]


def make_net(d: int, m: int, activation: Activation, signs=None) -> TwoLayerNet:
    """Zero-initialized net; signs default to alternating +1, -1, ..."""
    if signs is None:
        signs = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    return TwoLayerNet(np.zeros((m, d)), np.asarray(signs, dtype=float), activation)


def forward(net: TwoLayerNet, features: np.ndarray) -> np.ndarray:
    """Network outputs for a batch of rows."""
    s = features @ net.weights.T  # (R, m)
    return net.activation.value(s) @ (net.signs / net.m)


def nn_margins(net: TwoLayerNet, ds: Dataset) -> np.ndarray:
    return ds.labels * forward(net, ds.features)


def _check_nn_loss(loss: LossSpec):
    if loss.kind not in ("exp", "log"):
        raise ValueError(f"network training supports exp or log loss, got {loss.kind}")


def nn_risk(net: TwoLayerNet, ds: Dataset, loss: LossSpec) -> RiskValue:
    _check_nn_loss(loss)
    z = nn_margins(net, ds)
    return _risk_from_log(_weighted_lse(loss.log_value(z), ds.weights) - math.log(ds.n))


def _coefficients(z: np.ndarray, ds: Dataset, loss: LossSpec) -> np.ndarray:
    """Positive per-row weights c_i = (-l^{-1})'(L) |l'(z_i)| mult_i / n."""
    if loss.kind == "exp":
        s = -z
        mshift = float(np.max(s))
        e = np.exp(s - mshift)
        if ds.weights is not None:
            e = ds.weights * e
        return e / float(np.sum(e))
    r = _risk_from_log(_weighted_lse(loss.log_value(z), ds.weights) - math.log(ds.n))
    lnid = loss.log_neg_inv_deriv(r.value, r.log_value)
    coef = np.exp(lnid + loss.log_abs_deriv(z) - math.log(ds.n))
    if ds.weights is not None:
        coef = ds.weights * coef
    return coef


def nn_grad_phi(net: TwoLayerNet, ds: Dataset, loss: LossSpec) -> np.ndarray:
    """Blocks d phi / d w_j, shape (m, d); each satisfies |m * block| <= 1."""
    _check_nn_loss(loss)
    s = ds.features @ net.weights.T
    z = ds.labels * (net.activation.value(s) @ (net.signs / net.m))
    coef = _coefficients(z, ds, loss)
    slopes = net.activation.deriv(s)  # (R, m)
    signed = coef * ds.labels  # (R,)
    return -(net.signs[:, None] / net.m) * ((slopes * signed[:, None]).T @ ds.features)


@dataclass(frozen=True)
class NNTrajectoryPoint:
    t: int
    weights: np.ndarray  # (m, d) snapshot
    risk: RiskValue
    phi: float
    stepsize: float
    log_stepsize: float
    min_margin: float
    min_log_risk: float  # best log-risk among iterates 0..t
    min_risk_t: int  # step at which the best was achieved
    descent_violated: bool


@dataclass
class NNTrajectory:
    config: "object"
    points: list = field(default_factory=list)

    @property
    def final(self) -> NNTrajectoryPoint:
        return self.points[-1]

    def column(self, name: str) -> np.ndarray:
        if name == "log_risk":
            return np.array([p.risk.log_value for p in self.points])
        return np.array([getattr(p, name) for p in self.points])


def run_gd_nn(ds: Dataset, net: TwoLayerNet, config) -> NNTrajectory:
    """Adaptive-stepsize GD on the first layer of a two-layer net.

    config is a descent.GDConfig with mode="adaptive" and exp or log loss.
    The update applies stepsize eta * m to the gradient blocks (which carry
    a 1/m factor), so a width-1 net reproduces the linear algorithm exactly.
    Tracks the running best (minimum) log-risk, which is what the guarantee
    controls.
    """
    from .descent import phi_from_risk  # local import to avoid cycle noise

    _check_nn_loss(config.loss)
    if config.mode != "adaptive":
        raise ValueError("network training is defined for adaptive mode only")
    if net.d != ds.d:
        raise ValueError(f"net dimension {net.d} does not match dataset {ds.d}")
    loss = config.loss
    W = net.weights.copy()
    work = TwoLayerNet(W, net.signs, net.activation)

    traj = NNTrajectory(config=config)
    best_log, best_t = math.inf, 0
    prev_log = math.inf
    for t in range(config.steps + 1):
        r = nn_risk(work, ds, loss)
        if r.log_value < best_log:
            best_log, best_t = r.log_value, t
        if t % config.record_every == 0 or t == config.steps:
            log_eta_t = math.log(config.eta) + loss.log_neg_inv_deriv(r.value, r.log_value)
            traj.points.append(
                NNTrajectoryPoint(
                    t=t,
                    weights=W.copy(),
                    risk=r,
                    phi=phi_from_risk(loss, r),
                    stepsize=math.inf if log_eta_t > 709.0 else math.exp(log_eta_t),
                    log_stepsize=log_eta_t,
                    min_margin=float(nn_margins(work, ds).min()),
                    min_log_risk=best_log,
                    min_risk_t=best_t,
                    descent_violated=bool(r.log_value > prev_log),
                )
            )
        prev_log = r.log_value
        if t == config.steps:
            break
        g = nn_grad_phi(work, ds, loss)
        W -= (config.eta * work.m) * g
    return traj


def network_min_risk_log_bound(
    alpha: float, kappa: float, gamma: float, eta: float, t: int
) -> float:
    """Guarantee on the best iterate of run_gd_nn from zero initialization:

        min_{k <= t} ln L(net_k) <= kappa - ((A^2 - 1) / (4 gamma^2 (t+1))) eta

    with A = alpha gamma^2 (t+1), for exp or log loss on gamma-margin data.
    After the burn-in t + 1 >= 2 / (alpha gamma^2) the right side is at most
    kappa - alpha^2 gamma^2 eta / 4.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"need slope floor alpha in (0, 1], got {alpha}")
    if kappa < 0.0:
        raise ValueError(f"need kappa >= 0, got {kappa}")
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"need 0 < gamma < 1, got {gamma}")
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not (isinstance(t, (int, np.integer)) and t >= 1):
        raise ValueError(f"the bound needs an integer t >= 1, got {t!r}")
    a = alpha * gamma * gamma * (t + 1.0)
    return kappa - ((a * a - 1.0) / (4.0 * gamma * gamma * (t + 1.0))) * eta
