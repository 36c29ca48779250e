"""Linearly separable datasets: generators, validation, serialization.

A Dataset is a row matrix of unit-ball features, +-1 labels, a unit-norm
certificate vector w_star, and the margin gamma the instance was built to
certify: every row satisfies y_i <x_i, w_star> >= gamma.

Rows may carry positive integer multiplicity weights. A weighted dataset with
R distinct rows and weights summing to n is semantically identical to the
materialized dataset with n rows; risks and gradients are weighted means.
This keeps instances with huge nominal n (the batch hard instance at n = 2^20
has only ~log2(n) distinct rows) cheap to store and exact to compute with.

File format (text, one dataset per file):

    margin-lab-dataset v1 n=<n> d=<d> gamma=<g>
    wstar: <d floats>
    <label> <d floats>          (n rows)

Weighted datasets use the `v1w` header variant and insert a weight column
after the label. Floats are written with 17 significant digits, so a
save/load round trip is bit-exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

_HEADER_RE = re.compile(
    r"^margin-lab-dataset (v1w?) n=(\d+) d=(\d+) gamma=([^ ]+)$"
)


@dataclass
class Dataset:
    features: np.ndarray  # (R, d)
    labels: np.ndarray  # (R,), values in {-1.0, +1.0}
    gamma: float
    w_star: np.ndarray  # (d,), unit norm
    weights: np.ndarray | None = None  # (R,) positive integers, None = all ones
    metadata: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n(self) -> int:
        """Effective sample count: sum of multiplicities."""
        if self.weights is None:
            return self.n_rows
        return int(round(float(self.weights.sum())))

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def margins(self, w: np.ndarray) -> np.ndarray:
        """Signed margins y_i <x_i, w> per distinct row."""
        return self.labels * (self.features @ np.asarray(w, dtype=float))

    def min_margin(self, w: np.ndarray) -> float:
        return float(self.margins(w).min())


@dataclass
class ValidationReport:
    ok: bool
    realized_margin: float
    checks: list  # (name, passed, detail) triples


def validate(ds: Dataset, tol: float = 1e-12) -> ValidationReport:
    """Check the dataset contract: labels, norms, certificate, weights."""
    checks = []

    labels_ok = bool(np.all(np.isin(ds.labels, (-1.0, 1.0))))
    checks.append(("labels_pm1", labels_ok, "labels must be exactly +-1"))

    norms = np.linalg.norm(ds.features, axis=1)
    norm_ok = bool(np.all(norms <= 1.0 + tol))
    checks.append(("unit_ball", norm_ok, f"max row norm {norms.max():.17g}"))

    wnorm = float(np.linalg.norm(ds.w_star))
    wnorm_ok = abs(wnorm - 1.0) <= tol
    checks.append(("certificate_unit", wnorm_ok, f"|w*| = {wnorm:.17g}"))

    margins = ds.margins(ds.w_star)
    realized = float(margins.min())
    margin_ok = realized >= ds.gamma - tol
    checks.append(("certificate_margin", margin_ok, f"min margin {realized:.17g}"))

    if ds.weights is None:
        weights_ok = True
        detail = "unweighted"
    else:
        w = ds.weights
        weights_ok = bool(
            w.shape == (ds.n_rows,)
            and np.all(w >= 1.0)
            and np.all(w == np.round(w))
        )
        detail = f"{ds.n_rows} rows, effective n {ds.n}"
    checks.append(("weights_positive_integer", weights_ok, detail))

    ok = all(passed for _, passed, _ in checks)
    return ValidationReport(ok=ok, realized_margin=realized, checks=checks)


def mean_signed_feature(ds: Dataset) -> np.ndarray:
    """The weighted mean of y_i x_i, i.e. minus the risk gradient at w = 0
    up to the common factor |l'(0)|."""
    w = np.ones(ds.n_rows) if ds.weights is None else ds.weights
    return (w * ds.labels) @ ds.features / ds.n


def stepsize_cap_fraction(ds: Dataset, r: float = 0.1) -> float:
    """Weighted fraction of rows whose signed feature y_i x_i has alignment
    below -r with the mean signed feature. A fraction q > 0 caps the eta for
    which adaptive GD can keep the risk monotone at l(0) / (q r)."""
    xbar = mean_signed_feature(ds)
    align = ds.labels * (ds.features @ xbar)
    w = np.ones(ds.n_rows) if ds.weights is None else ds.weights
    return float(w[align < -r].sum() / ds.n)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def gen_random_separable(d: int, n: int, gamma: float, seed: int) -> Dataset:
    """Random unit-ball points with a hidden unit certificate and margin gamma.

    Points are sampled uniformly in the ball, labeled by the sign of their
    alignment with w_star, and any point with margin below gamma is projected
    onto the margin boundary (rescaling the orthogonal component so the norm
    stays <= 1, which leaves its realized margin exactly gamma).
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"need 0 < gamma < 1, got {gamma}")
    rng = np.random.default_rng(seed)

    w_star = rng.standard_normal(d)
    w_star /= np.linalg.norm(w_star)

    dirs = rng.standard_normal((n, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.random(n) ** (1.0 / d)
    x = dirs * radii[:, None]

    align = x @ w_star
    y = np.where(align >= 0.0, 1.0, -1.0)
    m = y * align  # nonnegative margins

    low = m < gamma
    if np.any(low):
        x_par = m[:, None] * (y[:, None] * w_star[None, :])
        x_perp = x - x_par
        perp_norm = np.linalg.norm(x_perp, axis=1)
        cap = math.sqrt(max(0.0, 1.0 - gamma * gamma))
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = np.where(perp_norm > 0, np.minimum(1.0, cap / perp_norm), 0.0)
        projected = scale[:, None] * x_perp + gamma * (y[:, None] * w_star[None, :])
        x = np.where(low[:, None], projected, x)

    return Dataset(
        features=x,
        labels=y,
        gamma=float(gamma),
        w_star=w_star,
        metadata={"generator": "random", "d": d, "n": n, "gamma": gamma, "seed": seed},
    )


def gen_two_point(gamma: float) -> Dataset:
    """Two positive points in the plane on which adaptive GD with a large
    stepsize provably overshoots.

    x1 = (gamma, 1/2), x2 = (gamma, -sqrt(1 - gamma^2)), both labeled +1,
    certificate w* = e1 with margin exactly gamma. The mean feature then has
    alignment x1 . xbar <= -0.1137 for every gamma in (0, 0.1), so half the
    sample sits below the -0.1 alignment level and any eta above
    l(0)/(0.5 * 0.1) = 20 l(0) forces a risk increase somewhere.
    """
    if not (0.0 < gamma < 0.1):
        raise ValueError(f"need 0 < gamma < 0.1, got {gamma}")
    x = np.array(
        [
            [gamma, 0.5],
            [gamma, -math.sqrt(1.0 - gamma * gamma)],
        ]
    )
    y = np.array([1.0, 1.0])
    w_star = np.array([1.0, 0.0])
    ds = Dataset(
        features=x,
        labels=y,
        gamma=float(gamma),
        w_star=w_star,
        metadata={"generator": "two-point", "gamma": gamma},
    )
    ds.metadata["cap_fraction_r"] = 0.1
    ds.metadata["cap_fraction_q"] = stepsize_cap_fraction(ds, r=0.1)
    return ds


def gen_batch_hard(gamma: float, n: int, weighted: bool = False) -> Dataset:
    """Batch hard instance: doubling blocks of chained two-coordinate rows.

    With d = floor(1/(5 gamma^2)) and k = min(floor(log2 n), d - 2), block
    j in 1..k repeats the row (2/sqrt5) e_{j+1} - (1/sqrt5) e_{j+2} exactly
    2^{k-j} times, and rows 2^k..n are the residual (1/sqrt5) e_{k+2}. All
    labels are +1 and w* = ones/sqrt(d) certifies margin 1/sqrt(5 d) >= gamma.

    Gradient descent started at w0 proportional to e1 provably keeps every
    iterate in a slowly growing coordinate span and cannot reach positive
    minimum margin before min(ln n / (8 ln 2), 1/(30 gamma^2)) steps.

    weighted=True emits the k+1 distinct rows with multiplicity weights
    instead of materializing all n rows.
    """
    if not (0.0 < gamma < 1.0 / 6.0):
        raise ValueError(f"need 0 < gamma < 1/6, got {gamma}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    d = int(1.0 / (5.0 * gamma * gamma))
    k = min(int(math.log2(n)), d - 2)
    f = 1.0 / math.sqrt(5.0)
    f2 = 2.0 * f  # exact doubling keeps the paired cancellations exact

    rows = []
    mults = []
    for j in range(1, k + 1):
        row = np.zeros(d)
        row[j] = f2  # e_{j+1} in 1-based coordinates
        row[j + 1] = -f
        rows.append(row)
        mults.append(2 ** (k - j))
    residual = np.zeros(d)
    residual[k + 1] = f
    rows.append(residual)
    mults.append(n - 2**k + 1)

    meta = {
        "generator": "batch-hard",
        "gamma": gamma,
        "n": n,
        "d": d,
        "k": k,
        "weighted": weighted,
        "span_horizon": (k + 1) // 2,  # t0; span statement holds for t <= t0 - 2
        "no_separation_before": min(math.log(n) / (8.0 * math.log(2.0)),
                                    1.0 / (30.0 * gamma * gamma)),
    }
    w_star = np.full(d, 1.0 / math.sqrt(d))
    if weighted:
        feats = np.stack(rows)
        labels = np.ones(len(rows))
        weights = np.asarray(mults, dtype=float)
        return Dataset(feats, labels, float(gamma), w_star, weights=weights, metadata=meta)

    feats = np.repeat(np.stack(rows), mults, axis=0)
    labels = np.ones(n)
    return Dataset(feats, labels, float(gamma), w_star, metadata=meta)


def gen_online_hard(gamma: float, n: int) -> Dataset:
    """Online hard instance: fresh basis vectors, then repeats.

    d = floor(1/gamma^2), k = min(n, d - 1); point i is e_{i+1} for i <= k
    and e_{k+1} afterwards, all labeled +1, certified by ones/sqrt(d) with
    margin 1/sqrt(d) >= gamma. Any online first-order method started in
    span{e1} must make a mistake on each fresh coordinate, so separation
    cannot happen before min(1/(2 gamma^2), n) rounds. Coordinate 1 is never
    touched by the data.
    """
    if not (0.0 < gamma < 0.5):
        raise ValueError(f"need 0 < gamma < 1/2, got {gamma}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    d = int(1.0 / (gamma * gamma))
    k = min(n, d - 1)
    feats = np.zeros((n, d))
    for i in range(n):
        feats[i, min(i + 1, k)] = 1.0
    labels = np.ones(n)
    w_star = np.full(d, 1.0 / math.sqrt(d))
    meta = {
        "generator": "online-hard",
        "gamma": gamma,
        "n": n,
        "d": d,
        "k": k,
        "separation_floor": min(1.0 / (2.0 * gamma * gamma), float(n)),
    }
    return Dataset(feats, labels, float(gamma), w_star, metadata=meta)


def gen_chain_hard(gamma: float, n: int) -> Dataset:
    """Alternate hard instance: a single chain of difference rows.

    d = floor(gamma^{-2/3}), k = min(n, d - 2); row j in 1..k is
    -(1/sqrt2) e_{j+1} + (1/sqrt2) e_{j+2}, remaining rows are
    (1/sqrt2) e_{k+2}. The certificate is the increasing ramp
    w* = sqrt(6/(d(d+1)(2d+1))) * (1, 2, ..., d) with margin
    sqrt(3/(d(d+1)(2d+1))) >= sqrt(1/d^3) >= gamma. GD from span{e1} cannot
    separate before min(n/4, 1/(8 gamma^{2/3})) steps.
    """
    if not (0.0 < gamma < 1.0 / 8.0):
        raise ValueError(f"need 0 < gamma < 1/8, got {gamma}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    d = int(gamma ** (-2.0 / 3.0))
    k = min(n, d - 2)
    r = 1.0 / math.sqrt(2.0)
    feats = np.zeros((n, d))
    for j in range(1, k + 1):
        feats[j - 1, j] = -r
        feats[j - 1, j + 1] = r
    for i in range(k, n):
        feats[i, k + 1] = r
    labels = np.ones(n)
    c = math.sqrt(6.0 / (d * (d + 1.0) * (2.0 * d + 1.0)))
    w_star = c * np.arange(1.0, d + 1.0)
    meta = {
        "generator": "chain-hard",
        "gamma": gamma,
        "n": n,
        "d": d,
        "k": k,
        "span_horizon": (k + 1) // 2,
        "no_separation_before": min(n / 4.0, 1.0 / (8.0 * gamma ** (2.0 / 3.0))),
    }
    return Dataset(feats, labels, float(gamma), w_star, metadata=meta)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_dataset(ds: Dataset, path, comments: tuple = ()) -> None:
    weighted = ds.weights is not None
    version = "v1w" if weighted else "v1"
    lines = [f"# {c}" if not c.startswith("#") else c for c in comments]
    lines.append(f"margin-lab-dataset {version} n={ds.n} d={ds.d} gamma={_fmt(ds.gamma)}")
    lines.append("wstar: " + " ".join(_fmt(v) for v in ds.w_star))
    for i in range(ds.n_rows):
        label = "+1" if ds.labels[i] > 0 else "-1"
        cols = [label]
        if weighted:
            cols.append(str(int(ds.weights[i])))
        cols.extend(_fmt(v) for v in ds.features[i])
        lines.append(" ".join(cols))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_dataset(path) -> Dataset:
    with open(path) as fh:
        lines = [
            ln.rstrip("\n")
            for ln in fh
            if ln.strip() and not ln.lstrip().startswith("#")
        ]
    if not lines:
        raise ValueError(f"{path}: empty dataset file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ValueError(f"{path}: bad header line {lines[0]!r}")
    version, n, d, gamma = m.group(1), int(m.group(2)), int(m.group(3)), float(m.group(4))
    weighted = version == "v1w"
    if not lines[1].startswith("wstar: "):
        raise ValueError(f"{path}: missing wstar line")
    w_star = np.array([float(v) for v in lines[1][len("wstar: "):].split()])
    if w_star.size != d:
        raise ValueError(f"{path}: wstar has {w_star.size} coords, header says d={d}")

    rows, labels, weights = [], [], []
    for ln in lines[2:]:
        parts = ln.split()
        labels.append(float(parts[0]))
        if weighted:
            weights.append(float(int(parts[1])))
            coords = parts[2:]
        else:
            coords = parts[1:]
        if len(coords) != d:
            raise ValueError(f"{path}: row has {len(coords)} coords, expected {d}")
        rows.append([float(v) for v in coords])

    feats = np.asarray(rows, dtype=float)
    labels = np.asarray(labels, dtype=float)
    ds = Dataset(
        features=feats,
        labels=labels,
        gamma=gamma,
        w_star=w_star,
        weights=np.asarray(weights) if weighted else None,
        metadata={"generator": "file", "path": str(path)},
    )
    if ds.n != n:
        raise ValueError(f"{path}: header n={n} but rows sum to {ds.n}")
    return ds
