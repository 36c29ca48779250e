"""Perceptron and single-example first-order updates with mistake counting.

The Perceptron update is ``w += 1{y x.w <= 0} y x``.  The same trajectory is
reachable as online SGD with the hinge loss at stepsize 1, and the module
keeps both paths bit-identical so that equivalence can be asserted exactly.

A "mistake" at a step is defined by the presented example's margin being
nonpositive before the update (ties count as mistakes), independent of
whether the method actually moves.  Cumulative counts are tracked per step.

Row orders are 0-based index sequences into the dataset; repeats are allowed
(multi-pass training is an order that cycles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Union

import numpy as np

from .datasets import Dataset, gen_online_hard
from .losses import LossSpec

if TYPE_CHECKING:  # import cycle: verify builds on this module
    from .verify import BoundReport

OnlineMethod = Callable[[Dataset, np.ndarray, Optional[np.ndarray]], "OnlineRun"]


@dataclass(frozen=True)
class OnlineRun:
    """Trace of an online run over a fixed presentation order.

    ``iterates[k]`` is the weight vector after k steps (row 0 is the start),
    ``mistakes[k]`` the number of nonpositive-margin presentations among the
    first k steps, and ``separated_at`` the first k at which ``iterates[k]``
    has strictly positive margin on the whole dataset (None if that never
    happens within the run).
    """

    order: np.ndarray
    iterates: np.ndarray
    mistakes: np.ndarray
    separated_at: Optional[int]

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def total_mistakes(self) -> int:
        return int(self.mistakes[-1])


def perceptron_step(
    w: np.ndarray, x: np.ndarray, y: float
) -> tuple[np.ndarray, bool]:
    """One Perceptron update; returns the new vector and the mistake flag.

    A zero margin counts as a mistake and triggers the update.
    """
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    if w.shape != x.shape or w.ndim != 1:
        raise ValueError(f"shape mismatch: w {w.shape} vs x {x.shape}")
    if y not in (-1.0, 1.0, -1, 1):
        raise ValueError(f"label must be +/-1, got {y!r}")
    if y * float(x @ w) <= 0.0:
        return w + y * x, True
    return w.copy(), False


def _prepare(
    ds: Dataset, order: Union[Sequence[int], np.ndarray], w0: Optional[np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    order = np.asarray(order, dtype=np.int64)
    if order.ndim != 1:
        raise ValueError("order must be a 1-d index sequence")
    if order.size and (order.min() < 0 or order.max() >= ds.n_rows):
        raise ValueError(
            f"order indices must lie in [0, {ds.n_rows}), got "
            f"range [{order.min()}, {order.max()}]"
        )
    if w0 is None:
        w0 = np.zeros(ds.d)
    else:
        w0 = np.asarray(w0, dtype=float)
        if w0.shape != (ds.d,):
            raise ValueError(f"w0 must have shape ({ds.d},), got {w0.shape}")
    return order, w0


def _trace(
    ds: Dataset,
    order: np.ndarray,
    w0: np.ndarray,
    step: Callable[[np.ndarray, np.ndarray, float], tuple[np.ndarray, bool, bool]],
) -> OnlineRun:
    """Shared run loop.  ``step`` returns (new_w, mistake, moved)."""
    w = w0.copy()
    iterates = np.empty((order.size + 1, ds.d))
    iterates[0] = w
    mistakes = np.zeros(order.size + 1, dtype=np.int64)
    count = 0
    separated_at: Optional[int] = 0 if ds.min_margin(w) > 0.0 else None
    for k, idx in enumerate(order, start=1):
        w, mistake, moved = step(w, ds.features[idx], float(ds.labels[idx]))
        count += mistake
        iterates[k] = w
        mistakes[k] = count
        if separated_at is None and moved and ds.min_margin(w) > 0.0:
            separated_at = k
    return OnlineRun(
        order=order, iterates=iterates, mistakes=mistakes, separated_at=separated_at
    )


def run_perceptron(
    ds: Dataset,
    order: Union[Sequence[int], np.ndarray],
    w0: Optional[np.ndarray] = None,
) -> OnlineRun:
    """Run the Perceptron over ``order`` (0-based row indices, repeats ok)."""
    order, w0 = _prepare(ds, order, w0)

    def step(w, x, y):
        if y * float(x @ w) <= 0.0:
            return w + y * x, True, True
        return w, False, False

    return _trace(ds, order, w0, step)


def run_online_sgd(
    ds: Dataset,
    order: Union[Sequence[int], np.ndarray],
    loss: LossSpec,
    eta: float,
    w0: Optional[np.ndarray] = None,
) -> OnlineRun:
    """Single-example gradient steps ``w -= eta * l'(y x.w) * y x``.

    With the hinge loss and ``eta == 1`` the iterate sequence is bit-identical
    to :func:`run_perceptron` on the same order.  Mistakes are counted by the
    presented margin's sign, exactly as for the Perceptron, whether or not the
    step moves.
    """
    if not (eta >= 0.0) or not math.isfinite(eta):
        raise ValueError(f"eta must be finite and >= 0, got {eta}")
    order, w0 = _prepare(ds, order, w0)

    def step(w, x, y):
        z = y * float(x @ w)
        mistake = z <= 0.0
        d = float(loss.deriv(z))
        scale = eta * d
        if scale != 0.0:
            return w - scale * (y * x), mistake, True
        return w, mistake, False

    return _trace(ds, order, w0, step)


def check_online_hard_instance(
    gamma: float,
    n: int,
    method: Optional[OnlineMethod] = None,
) -> "BoundReport":
    """Mistake and separation-time floors on the sequential hard instance.

    Runs ``method`` (default: Perceptron) over one pass of the hard online
    dataset, starting from 0 and from e_1 (a direction no example touches),
    and checks that after every step t the cumulative mistake count is at
    least min(1/(2 gamma^2), t) and that full separation takes at least
    min(1/(2 gamma^2), n) steps.
    """
    from .verify import make_report

    if method is None:
        method = run_perceptron
    ds = gen_online_hard(gamma, n)
    order = np.arange(n, dtype=np.int64)
    floor = min(1.0 / (2.0 * gamma * gamma), float(n))

    rows: list[tuple[str, float, float]] = []
    context: dict = {"gamma": gamma, "n": n, "separation_floor": floor}
    for scale, tag in ((0.0, "from_zero"), (1.0, "from_e1")):
        w0 = np.zeros(ds.d)
        w0[0] = scale
        run = method(ds, order, w0)
        for t in range(1, n + 1):
            bound = min(1.0 / (2.0 * gamma * gamma), float(t))
            rows.append((f"mistakes|{tag}|t={t}", float(run.mistakes[t]), bound))
        sep = math.inf if run.separated_at is None else float(run.separated_at)
        rows.append((f"separated-at|{tag}", sep, floor))
        context[tag] = {
            "total_mistakes": run.total_mistakes,
            "separated_at": None if run.separated_at is None else run.separated_at,
        }

    return make_report(
        claim="sequential hard instance forces min(1/(2g^2), t) early mistakes",
        rows=rows,
        tolerance=0.0,
        context=context,
        direction=">=",
    )


def cyclic_order(n: int, steps: int) -> np.ndarray:
    """Row order 0,1,..,n-1,0,1,.. of the given length."""
    if n <= 0 or steps < 0:
        raise ValueError("need n > 0 and steps >= 0")
    return np.arange(steps, dtype=np.int64) % n


def random_order(n: int, steps: int, seed: int) -> np.ndarray:
    """IID uniform row order of the given length."""
    if n <= 0 or steps < 0:
        raise ValueError("need n > 0 and steps >= 0")
    return np.random.default_rng(seed).integers(0, n, size=steps, dtype=np.int64)
