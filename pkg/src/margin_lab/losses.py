"""Loss functions for margin-based classification.

Every loss here maps a signed margin z = y * <w, x> to a nonnegative penalty.
The smooth losses (all except hinge) are strictly decreasing and convex with
range (0, inf), so they admit an inverse on z-space and a well-defined
"inverse decay rate" (-l^{-1})'(u), the quantity that scales adaptive
stepsizes. Supported kinds:

    exp         l(z) = e^{-z}
    log         l(z) = ln(1 + e^{-z})
    poly:k      l(z) = (1+z)^{-k} for z >= 0, and -2kz + (1-z)^{-k} for z < 0
    semicircle  l(z) = (sqrt(z^2+4) - z) / 2
    hinge       l(z) = max(0, -z), with l'(0) := -1 (subgradient fixed from
                the left so that unit-stepsize SGD reproduces the perceptron)

The poly branch for z < 0 keeps the loss 1-Lipschitz-like with slope in
(-2k, -k], which is what makes its inverse decay rate bounded there.

Scalar helpers return floats; array inputs broadcast elementwise. The
log-domain variants (log_value, log_abs_deriv, log_neg_inv_deriv) are exact
continuations of the plain ones into regimes where the values themselves
underflow or overflow a float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, log_expit

KINDS = ("exp", "log", "poly", "semicircle", "hinge")

# Smooth kinds support inverse / neg_inv_deriv / lipschitz_const; hinge does not.
SMOOTH_KINDS = ("exp", "log", "poly", "semicircle")


def log1mexp(u):
    """Compute log(1 - e^{-u}) for u > 0 without cancellation.

    Splits at u = ln 2: below it, 1 - e^{-u} is small and expm1 keeps the
    digits; above it, e^{-u} is small and log1p does.
    """
    u = np.asarray(u, dtype=float)
    small = u < math.log(2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            small,
            np.log(-np.expm1(-np.where(small, u, 1.0))),
            np.log1p(-np.exp(-np.where(small, 1.0, u))),
        )
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class LossSpec:
    """A loss kind plus its parameters.

    k is only meaningful for kind="poly" (exponent, k >= 1). n is the sample
    count and enters only through lipschitz_const; it defaults to 1 and can be
    rebound with with_n once the dataset size is known.
    """

    kind: str
    k: float = math.nan
    n: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}, expected one of {KINDS}")
        if self.kind == "poly":
            if not (math.isfinite(self.k) and self.k > 0.0):
                raise ValueError(f"poly loss: k must be > 0 (finite), got {self.k}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError(f"sample count n must be a positive integer, got {self.n!r}")

    @property
    def name(self) -> str:
        if self.kind == "poly":
            return f"poly:{self.k:g}"
        return self.kind

    def with_n(self, n: int) -> "LossSpec":
        return replace(self, n=int(n))

    # Thin method wrappers so call sites read loss.value(z) etc.
    def value(self, z):
        return _value(self, z)

    def deriv(self, z):
        return _deriv(self, z)

    def second_deriv(self, z):
        return _second_deriv(self, z)

    def log_value(self, z):
        return _log_value(self, z)

    def log_abs_deriv(self, z):
        return _log_abs_deriv(self, z)

    def inverse(self, u: float) -> float:
        return _inverse(self, u)

    def neg_inv_deriv(self, u: float) -> float:
        return _neg_inv_deriv(self, u)

    def log_neg_inv_deriv(self, value: float, log_value: float) -> float:
        return _log_neg_inv_deriv(self, value, log_value)

    def lipschitz_const(self) -> float:
        return _lipschitz_const(self)


def parse_loss(name: str) -> LossSpec:
    """Parse a CLI-style loss name: exp | log | poly:<k> | semicircle | hinge."""
    name = name.strip()
    if name.startswith("poly:"):
        raw = name[len("poly:"):]
        try:
            k = float(raw)
        except ValueError:
            raise ValueError(f"bad poly exponent {raw!r} in loss name {name!r}") from None
        return LossSpec("poly", k=k)
    if name in ("exp", "log", "semicircle", "hinge"):
        return LossSpec(name)
    raise ValueError(f"unknown loss name {name!r}")


def _shape(z):
    arr = np.asarray(z, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _value(spec: LossSpec, z):
    z, scalar = _shape(z)
    if spec.kind == "exp":
        out = np.exp(-z)
    elif spec.kind == "log":
        out = np.logaddexp(0.0, -z)
    elif spec.kind == "poly":
        k = spec.k
        neg = z < 0
        out = np.where(
            neg,
            -2.0 * k * z + (1.0 - np.where(neg, z, 0.0)) ** (-k),
            (1.0 + np.where(neg, 0.0, z)) ** (-k),
        )
    elif spec.kind == "semicircle":
        h = np.hypot(z, 2.0)
        # (h - z)/2 cancels for large positive z; 2/(h+z) does not.
        out = np.where(z >= 0, 2.0 / (h + np.abs(z)), (h - z) / 2.0)
    else:  # hinge
        out = np.maximum(0.0, -z)
    return _ret(out, scalar)


def _deriv(spec: LossSpec, z):
    z, scalar = _shape(z)
    if spec.kind == "exp":
        out = -np.exp(-z)
    elif spec.kind == "log":
        # l'(z) = -sigmoid(-z)
        out = -expit(-z)
    elif spec.kind == "poly":
        k = spec.k
        neg = z < 0
        out = np.where(
            neg,
            -2.0 * k + k * (1.0 - np.where(neg, z, 0.0)) ** (-k - 1.0),
            -k * (1.0 + np.where(neg, 0.0, z)) ** (-k - 1.0),
        )
    elif spec.kind == "semicircle":
        h = np.hypot(z, 2.0)
        # (z/h - 1)/2 cancels for large positive z; -2/(h(h+z)) is exact there
        out = np.where(z >= 0, -2.0 / (h * (h + np.abs(z))), (z / h - 1.0) / 2.0)
    else:  # hinge, subgradient with l'(0) := -1
        out = np.where(z <= 0, -1.0, 0.0)
    return _ret(out, scalar)


def _second_deriv(spec: LossSpec, z):
    z, scalar = _shape(z)
    if spec.kind == "exp":
        out = np.exp(-z)
    elif spec.kind == "log":
        # sigmoid(z) * sigmoid(-z), assembled in log space to avoid underflow
        out = np.exp(log_expit(z) + log_expit(-z))
    elif spec.kind == "poly":
        k = spec.k
        base = np.where(z < 0, 1.0 - z, 1.0 + z)
        out = k * (k + 1.0) * base ** (-k - 2.0)
    elif spec.kind == "semicircle":
        h = np.hypot(z, 2.0)
        out = 2.0 / h**3
    else:  # hinge
        out = np.zeros_like(z)
    return _ret(out, scalar)


def _log_value(spec: LossSpec, z):
    z, scalar = _shape(z)
    if spec.kind == "exp":
        out = -z
    elif spec.kind == "log":
        # ln softplus(-z); for z beyond exp underflow, softplus(-z) ~ e^{-z}.
        big = z > 700.0
        with np.errstate(divide="ignore"):
            plain = np.log(np.logaddexp(0.0, -np.where(big, 0.0, z)))
        out = np.where(big, -z, plain)
    elif spec.kind == "poly":
        k = spec.k
        neg = z < 0
        zneg = np.where(neg, z, 0.0)
        out = np.where(
            neg,
            np.log(-2.0 * k * zneg + (1.0 - zneg) ** (-k)),
            -k * np.log1p(np.where(neg, 0.0, z)),
        )
    elif spec.kind == "semicircle":
        h = np.hypot(z, 2.0)
        zneg = np.where(z < 0, z, -1.0)
        out = np.where(
            z >= 0,
            math.log(2.0) - np.log(h + np.abs(z)),
            np.log((np.hypot(zneg, 2.0) - zneg) / 2.0),
        )
    else:  # hinge: log of max(0,-z), -inf where the loss vanishes
        with np.errstate(divide="ignore"):
            out = np.where(z < 0, np.log(np.maximum(-z, 1e-300)), -np.inf)
    return _ret(out, scalar)


def _log_abs_deriv(spec: LossSpec, z):
    z, scalar = _shape(z)
    if spec.kind == "exp":
        out = -z
    elif spec.kind == "log":
        out = log_expit(-z)
    elif spec.kind == "poly":
        k = spec.k
        neg = z < 0
        zneg = np.where(neg, z, 0.0)
        out = np.where(
            neg,
            math.log(k) + np.log(2.0 - (1.0 - zneg) ** (-k - 1.0)),
            math.log(k) - (k + 1.0) * np.log1p(np.where(neg, 0.0, z)),
        )
    elif spec.kind == "semicircle":
        h = np.hypot(z, 2.0)
        zneg = np.where(z < 0, z, -1.0)
        out = np.where(
            z >= 0,
            math.log(2.0) - np.log(h) - np.log(h + np.abs(z)),
            np.log((1.0 - zneg / np.hypot(zneg, 2.0)) / 2.0),
        )
    else:  # hinge
        out = np.where(z <= 0, 0.0, -np.inf)
    return _ret(out, scalar)


def _require_smooth(spec: LossSpec, what: str):
    if spec.kind not in SMOOTH_KINDS:
        raise ValueError(f"{what} is undefined for the {spec.kind} loss")


def _inverse(spec: LossSpec, u: float) -> float:
    """Solve l(z) = u for z. Domain error for u <= 0; hinge unsupported."""
    _require_smooth(spec, "inverse")
    u = float(u)
    if not (u > 0.0) or math.isnan(u):
        raise ValueError(f"inverse needs u > 0, got {u}")
    if spec.kind == "exp":
        return -math.log(u)
    if spec.kind == "log":
        # -ln(e^u - 1) = -(u + log(1 - e^{-u})), stable for u tiny and huge
        return -(u + float(log1mexp(u)))
    if spec.kind == "semicircle":
        return 1.0 / u - u
    # poly: right branch closed-form for u <= 1, numeric on the left branch
    k = spec.k
    if u <= 1.0:
        return u ** (-1.0 / k) - 1.0
    lo = -(u / (2.0 * k)) - 1.0  # l(lo) >= -2k*lo > u, brackets the root with 0
    return float(brentq(lambda t: _value(spec, t) - u, lo, 0.0, xtol=1e-15, rtol=8.9e-16))


def _neg_inv_deriv(spec: LossSpec, u: float) -> float:
    """(-l^{-1})'(u): the derivative of the negated inverse, always positive."""
    _require_smooth(spec, "neg_inv_deriv")
    u = float(u)
    if not (u > 0.0) or math.isnan(u):
        raise ValueError(f"neg_inv_deriv needs u > 0, got {u}")
    if spec.kind == "exp":
        return 1.0 / u
    if spec.kind == "log":
        return 1.0 / (-math.expm1(-u))
    if spec.kind == "semicircle":
        return 1.0 + 1.0 / (u * u)
    k = spec.k
    if u <= 1.0:
        return (1.0 / k) * u ** (-(k + 1.0) / k)
    return -1.0 / float(_deriv(spec, _inverse(spec, u)))


def _log_neg_inv_deriv(spec: LossSpec, value: float, log_value: float) -> float:
    """ln((-l^{-1})'(u)) from the (value, log_value) pair of u.

    Works even when value has underflowed to 0.0; log_value is then the
    authoritative representation of u.
    """
    _require_smooth(spec, "log_neg_inv_deriv")
    if spec.kind == "exp":
        return -log_value
    if spec.kind == "log":
        # -ln(1 - e^{-u}); for u below ~1e-8, ln(1-e^{-u}) = ln u - u/2 + O(u^2)
        if value > 1e-8:
            return -float(log1mexp(value))
        return -(log_value + math.log1p(-value / 2.0))
    if spec.kind == "semicircle":
        # ln(1 + 1/u^2) = ln(1 + e^{-2 ln u})
        return float(np.logaddexp(0.0, -2.0 * log_value))
    k = spec.k
    if value > 1.0:
        return math.log(_neg_inv_deriv(spec, value))
    return -math.log(k) - ((k + 1.0) / k) * log_value


def _lipschitz_const(spec: LossSpec) -> float:
    """Uniform bound C on the transformed-objective gradient norm.

    exp and log give C = 1 regardless of n; poly gives n^{1/k}; semicircle
    gives n + 1. Scales with the sample count set via with_n.
    """
    _require_smooth(spec, "lipschitz_const")
    n = float(spec.n)
    if spec.kind in ("exp", "log"):
        return 1.0
    if spec.kind == "poly":
        return n ** (1.0 / spec.k)
    return n + 1.0


EXP = LossSpec("exp")
LOG = LossSpec("log")
SEMICIRCLE = LossSpec("semicircle")
HINGE = LossSpec("hinge")


def poly(k: float) -> LossSpec:
    return LossSpec("poly", k=float(k))
