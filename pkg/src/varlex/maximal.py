"""Window-scan operators: Hardy-Littlewood maximal, sharp and local sharp
maximal functions, and the BMO norm.

Suprema "over all cubes" range over grid-aligned cube windows; the window
side family is controlled by MaximalConfig (all sides, or a dyadic subset
above a size threshold).  Per-cell outputs are maxima over all windows that
contain the cell, computed side by side with a sliding containing-window max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import Box, CubeWindow, GridFunction, restrict

__all__ = [
    "MaximalConfig",
    "OscillationRecord",
    "hl_maximal",
    "sharp_delta",
    "local_sharp",
    "bmo_norm",
    "relation_check",
    "oscillation_record",
    "sharp_window",
    "local_sharp_window",
]

_ALL_SIDES_LIMIT = 4096  # dyadic side subsets become the default above this


@dataclass(frozen=True)
class MaximalConfig:
    """Window-side family plus the candidate-grid size for sharp_delta."""

    sides: tuple[int, ...] | None = None
    side_mode: str = "auto"  # "auto" | "all" | "dyadic"
    c_grid: int = 64

    def __post_init__(self):
        if self.sides is not None:
            sides = tuple(sorted({int(s) for s in self.sides}))
            if not sides or sides[0] < 1:
                raise ValueError("side set must be nonempty positive ints")
            object.__setattr__(self, "sides", sides)
        if self.side_mode not in ("auto", "all", "dyadic"):
            raise ValueError("side_mode must be auto|all|dyadic")
        if self.c_grid < 2:
            raise ValueError("c-grid must have at least 2 points")

    def resolve_sides(self, box: Box) -> tuple[int, ...]:
        smax = min(box.cells)
        if self.sides is not None:
            if self.sides[-1] > smax:
                raise ValueError("configured side exceeds the box extent")
            return self.sides
        mode = self.side_mode
        if mode == "auto":
            mode = "all" if smax <= _ALL_SIDES_LIMIT else "dyadic"
        if mode == "all":
            return tuple(range(1, smax + 1))
        sides = []
        s = 1
        while s <= smax:
            sides.append(s)
            s *= 2
        if sides[-1] != smax:
            sides.append(smax)
        return tuple(sides)


DYADIC = MaximalConfig(side_mode="dyadic")


@dataclass(frozen=True)
class OscillationRecord:
    window: CubeWindow
    mean: float
    oscillation: float


def _containing_max_grid(inners: np.ndarray, side: int, cells) -> np.ndarray:
    """Per-cell max of per-window inner values over containing windows."""
    if len(cells) == 1:
        return K.containing_max(K.as_f64(inners), side, cells[0])
    n1, n2 = cells
    k1, k2 = n1 - side + 1, n2 - side + 1
    w = inners.reshape(k1, k2)
    tmp = np.empty((n1, k2))
    for c in range(k2):
        tmp[:, c] = K.containing_max(K.as_f64(w[:, c]), side, n1)
    out = np.empty((n1, n2))
    for r in range(n1):
        out[r] = K.containing_max(K.as_f64(tmp[r]), side, n2)
    return out.ravel()


def _window_means_abs(vals: np.ndarray, side: int) -> np.ndarray:
    """Means of |f| over all windows of one side, flat row-major."""
    a = np.abs(vals)
    if side == 1:
        return a.ravel().copy()
    if a.ndim == 1:
        s = np.concatenate(([0.0], np.cumsum(a)))
        return (s[side:] - s[:-side]) / side
    n1, n2 = a.shape
    ii = np.zeros((n1 + 1, n2 + 1))
    ii[1:, 1:] = a.cumsum(axis=0).cumsum(axis=1)
    sums = (
        ii[side:, side:]
        - ii[:-side, side:]
        - ii[side:, :-side]
        + ii[:-side, :-side]
    )
    return (sums / side**2).ravel()


def hl_maximal(f: GridFunction, cfg: MaximalConfig | None = None) -> GridFunction:
    """Hardy-Littlewood maximal function over the configured window family.

    Mf >= |f| pointwise holds exactly because side-1 windows contribute |f|
    itself (no prefix-sum rounding on single cells).
    """
    cfg = cfg or MaximalConfig()
    vals = f.reshaped()
    out = np.full(f.values.size, -np.inf)
    for side in cfg.resolve_sides(f.box):
        w = _window_means_abs(vals, side)
        out = np.maximum(out, _containing_max_grid(w, side, f.box.cells))
    return GridFunction(f.box, out)


def _per_window_inners(vals, side, kind, delta=0.0, c_grid=64, k_min=0):
    wins = K.window_matrix(vals, side)
    if kind == "sharp":
        if delta == 1.0:
            return K.sharp_inners_median(wins)
        return K.sharp_inners(wins, delta, c_grid)
    if kind == "local":
        return K.local_inners(wins, k_min)
    return K.osc_inners(wins)


def sharp_delta(
    f: GridFunction, delta: float, cfg: MaximalConfig | None = None
) -> GridFunction:
    """Sharp maximal function with exponent delta in (0, 1].

    The inner infimum over the centering constant is exact for delta = 1
    (weighted median); for delta < 1 it is taken over the window's sample
    values, a uniform refinement grid, the window mean, and the median, which
    over-estimates the true infimum.  Only inequalities that stay sound under
    over-estimation may assert against this output.
    """
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    cfg = cfg or MaximalConfig()
    vals = f.reshaped()
    out = np.zeros(f.values.size)
    for side in cfg.resolve_sides(f.box):
        if side == 1:
            continue  # single-cell windows give 0
        inners = _per_window_inners(vals, side, "sharp", delta, cfg.c_grid)
        out = np.maximum(out, _containing_max_grid(inners, side, f.box.cells))
    return GridFunction(f.box, out)


def _local_k_min(lam: float, count: int) -> int:
    # smallest atom count whose measure reaches (1-lam)|Q|; the 1e-9 fudge
    # absorbs float representation of (1-lam)*count at exact integers
    return max(0, int(math.ceil((1.0 - lam) * count - 1e-9)))


def local_sharp(
    f: GridFunction, lam: float, cfg: MaximalConfig | None = None
) -> GridFunction:
    """Local sharp maximal function M^#_lam.

    The inner infimum is exact: it equals half the minimal length of a closed
    value interval carrying at least (1-lam)|Q| of the window's mass, found by
    a sorted sliding scan.
    """
    if not (0.0 < lam < 1.0):
        raise ValueError("lambda must lie in (0, 1)")
    cfg = cfg or MaximalConfig()
    vals = f.reshaped()
    dim = f.box.dim
    out = np.zeros(f.values.size)
    for side in cfg.resolve_sides(f.box):
        if side == 1:
            continue
        k_min = _local_k_min(lam, side**dim)
        inners = _per_window_inners(vals, side, "local", k_min=k_min)
        out = np.maximum(out, _containing_max_grid(inners, side, f.box.cells))
    return GridFunction(f.box, out)


def bmo_norm(b: GridFunction, cfg: MaximalConfig | None = None) -> float:
    """Supremum of mean oscillation over the configured window family."""
    cfg = cfg or MaximalConfig()
    vals = b.reshaped()
    best = 0.0
    for side in cfg.resolve_sides(b.box):
        if side == 1:
            continue  # single cells oscillate by 0
        inners = _per_window_inners(vals, side, "osc")
        m = float(inners.max())
        if m > best:
            best = m
    return best


def oscillation_record(b: GridFunction, window: CubeWindow) -> OscillationRecord:
    ms = restrict(b, window)
    mean = float(ms.values.mean())
    osc = float(np.abs(ms.values - mean).mean())
    return OscillationRecord(window, mean, osc)


def relation_check(
    f: GridFunction,
    delta: float,
    lam: float,
    cfg: MaximalConfig | None = None,
) -> float:
    """Worst pointwise defect of M^#_lam f <= (1/lam)^(1/delta) sharp_delta f.

    Non-positive up to rounding: the local-sharp side is exact and the sharp
    side only over-estimates, so the inequality survives the approximation.
    """
    cfg = cfg or MaximalConfig()
    lhs = local_sharp(f, lam, cfg).values
    rhs = (1.0 / lam) ** (1.0 / delta) * sharp_delta(f, delta, cfg).values
    return float((lhs - rhs).max())


# single-window helpers, used by oracles and the CLI


def sharp_window(
    f: GridFunction, window: CubeWindow, delta: float, c_grid: int = 64
) -> float:
    """Inner value of sharp_delta on one window."""
    vals = restrict(f, window).values.reshape(1, -1)
    if delta == 1.0:
        return float(K.sharp_inners_median(K.as_f64(vals))[0])
    return float(K.sharp_inners(K.as_f64(vals), delta, c_grid)[0])


def local_sharp_window(f: GridFunction, window: CubeWindow, lam: float) -> float:
    """Inner value of local_sharp on one window (exact)."""
    vals = restrict(f, window).values.reshape(1, -1)
    k_min = _local_k_min(lam, vals.size)
    return float(K.local_inners(K.as_f64(vals), k_min)[0])
