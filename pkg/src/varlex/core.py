"""Grids, grid functions, cube windows, exponent fields, and weighted multisets.

Everything downstream works on uniform half-open boxes in one or two
dimensions, with functions sampled at cell midpoints.  All containers are
immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Box",
    "GridFunction",
    "CubeWindow",
    "ExponentField",
    "WeightedMultiset",
    "cell_measure",
    "restrict",
    "conjugate",
    "r_const",
    "make_log_holder_exponent",
    "grid_function_to_json",
    "grid_function_from_json",
    "exponent_field_to_json",
    "exponent_field_from_json",
]


def _readonly(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Box:
    """Axis-aligned half-open box [a_i, b_i) split into N_i uniform cells."""

    bounds: tuple[tuple[float, float], ...]
    cells: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple((float(a), float(b)) for a, b in self.bounds)
        cells = tuple(int(n) for n in self.cells)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "cells", cells)
        if len(bounds) != len(cells):
            raise ValueError("bounds/cells dimension mismatch")
        if len(bounds) not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        for (a, b), n in zip(bounds, cells):
            if not (a < b):
                raise ValueError(f"empty interval [{a}, {b})")
            if n < 1:
                raise ValueError("cell count must be >= 1")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def widths(self) -> tuple[float, ...]:
        return tuple((b - a) / n for (a, b), n in zip(self.bounds, self.cells))

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells))

    def axis_midpoints(self, axis: int) -> np.ndarray:
        a, b = self.bounds[axis]
        n = self.cells[axis]
        h = (b - a) / n
        return a + (np.arange(n) + 0.5) * h

    def midpoint_mesh(self) -> tuple[np.ndarray, ...]:
        """Flat midpoint coordinates, one array per axis, in row-major cell order."""
        axes = [self.axis_midpoints(i) for i in range(self.dim)]
        if self.dim == 1:
            return (axes[0],)
        x1, x2 = np.meshgrid(axes[0], axes[1], indexing="ij")
        return (x1.ravel(), x2.ravel())

    @staticmethod
    def line(a: float, b: float, n: int) -> "Box":
        return Box(((a, b),), (n,))

    @staticmethod
    def square(a: float, b: float, n: int) -> "Box":
        return Box(((a, b), (a, b)), (n, n))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real midpoint samples over a Box, stored flat in row-major order."""

    box: Box
    values: np.ndarray

    def __post_init__(self):
        v = _readonly(self.values).reshape(-1)
        object.__setattr__(self, "values", v)
        if v.size != self.box.n_cells:
            raise ValueError("value count does not match the box")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")

    def reshaped(self) -> np.ndarray:
        return self.values.reshape(self.box.cells)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.box, values)


@dataclass(frozen=True)
class CubeWindow:
    """Grid-aligned cube inside a Box: equal side (in cells) on every axis."""

    box: Box
    start: tuple[int, ...]
    side: int

    def __post_init__(self):
        start = tuple(int(s) for s in self.start)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "side", int(self.side))
        if len(start) != self.box.dim:
            raise ValueError("start index dimension mismatch")
        if self.side < 1:
            raise ValueError("window side must be >= 1")
        for s, n in zip(start, self.box.cells):
            if s < 0 or s + self.side > n:
                raise ValueError("window lies outside the box")

    @property
    def measure(self) -> float:
        return self.side**self.box.dim * cell_measure(self.box)

    def slices(self) -> tuple[slice, ...]:
        return tuple(slice(s, s + self.side) for s in self.start)


@dataclass(frozen=True, eq=False)
class ExponentField:
    """Grid-shaped exponent p(.) with cached extremes, 1 < p_- <= p_+ < inf."""

    samples: GridFunction
    p_minus: float = field(init=False)
    p_plus: float = field(init=False)

    def __post_init__(self):
        v = self.samples.values
        pmin = float(v.min())
        pmax = float(v.max())
        if not pmin > 1.0:
            raise ValueError("exponent values must be strictly greater than 1")
        if not math.isfinite(pmax):
            raise ValueError("exponent values must be finite")
        object.__setattr__(self, "p_minus", pmin)
        object.__setattr__(self, "p_plus", pmax)

    @property
    def box(self) -> Box:
        return self.samples.box

    @property
    def values(self) -> np.ndarray:
        return self.samples.values


@dataclass(frozen=True, eq=False)
class WeightedMultiset:
    """Pairs (value, measure) with positive measures; realizes f restricted to a window."""

    values: np.ndarray
    measures: np.ndarray

    def __post_init__(self):
        v = _readonly(self.values).reshape(-1)
        m = _readonly(self.measures).reshape(-1)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "measures", m)
        if v.size == 0 or v.size != m.size:
            raise ValueError("values/measures must be nonempty and aligned")
        if not np.all(m > 0):
            raise ValueError("measures must be positive")

    @property
    def total_measure(self) -> float:
        return float(self.measures.sum())


def cell_measure(box: Box) -> float:
    """Lebesgue measure of one grid cell."""
    return float(np.prod(box.widths))


def restrict(f: GridFunction, window: CubeWindow) -> WeightedMultiset:
    """The multiset of f's samples on a window, each carrying one cell measure."""
    if window.box != f.box:
        raise ValueError("window does not belong to the function's box")
    vals = f.reshaped()[window.slices()].ravel()
    mu = cell_measure(f.box)
    return WeightedMultiset(vals, np.full(vals.size, mu))


def conjugate(p: ExponentField) -> ExponentField:
    """Pointwise conjugate exponent p/(p-1)."""
    v = p.values
    return ExponentField(GridFunction(p.box, v / (v - 1.0)))


def r_const(p: ExponentField) -> float:
    """Equivalence constant 1 + 1/p_- - 1/p_+ between the two norms."""
    return 1.0 + 1.0 / p.p_minus - 1.0 / p.p_plus


def conjugate_exponents(p: np.ndarray) -> np.ndarray:
    """Conjugate of a bare exponent array (atom-space version)."""
    p = np.asarray(p, dtype=float)
    return p / (p - 1.0)


def _log_holder_envelope(diameter: float) -> float:
    # sup over d in (0, D] of d * log(e + 1/d); increasing in d
    return diameter * math.log(math.e + 1.0 / diameter)


def _smooth_ramp(u, lo, hi):
    """Cubic smoothstep: 0 below lo, 1 above hi."""
    t = np.clip((u - lo) / (hi - lo), 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def make_log_holder_exponent(
    seed: int,
    box: Box,
    p_lo: float,
    p_hi: float,
    p_infinity: float,
    modulus_bound: float = 4.0,
    modes: int = 4,
) -> ExponentField:
    """Pseudo-random exponent field that is locally log-Hoelder continuous.

    The field equals ``p_infinity`` outside a centered sub-box (the decay
    surrogate) and satisfies |p(x)-p(y)| <= modulus_bound / log(e + 1/|x-y|)
    for every pair of grid points; the amplitude of the random oscillation is
    scaled down if necessary to guarantee the bound.
    """
    if not (1.0 < p_lo <= p_hi) or not math.isfinite(p_hi):
        raise ValueError("need 1 < p_lo <= p_hi < inf")
    if not (p_lo <= p_infinity <= p_hi):
        raise ValueError("p_infinity must lie in [p_lo, p_hi]")
    if modulus_bound <= 0:
        raise ValueError("modulus_bound must be positive")

    if p_lo == p_hi:
        return ExponentField(
            GridFunction(box, np.full(box.n_cells, p_lo))
        )

    rng = np.random.default_rng(seed)
    lengths = [b - a for a, b in box.bounds]
    coords = box.midpoint_mesh()
    units = [
        (coords[i] - box.bounds[i][0]) / lengths[i] for i in range(box.dim)
    ]

    k = np.arange(1, modes + 1)
    psi = np.zeros(box.n_cells)
    # per-axis Lipschitz bounds of the unscaled oscillation, in domain units
    lip = [0.0] * box.dim
    amp_sup = 0.0
    if box.dim == 1:
        ck = rng.uniform(-1.0, 1.0, modes) / k**2
        sk = rng.uniform(-1.0, 1.0, modes) / k**2
        for i in range(modes):
            psi += ck[i] * np.cos(2 * np.pi * k[i] * units[0])
            psi += sk[i] * np.sin(2 * np.pi * k[i] * units[0])
        amp_sup = float(np.abs(ck).sum() + np.abs(sk).sum())
        lip[0] = float(
            ((np.abs(ck) + np.abs(sk)) * 2 * np.pi * k).sum() / lengths[0]
        )
    else:
        ck = rng.uniform(-1.0, 1.0, modes) / k**2
        ph1 = rng.uniform(0, 2 * np.pi, modes)
        ph2 = rng.uniform(0, 2 * np.pi, modes)
        for i in range(modes):
            psi += (
                ck[i]
                * np.cos(2 * np.pi * k[i] * units[0] + ph1[i])
                * np.cos(2 * np.pi * k[i] * units[1] + ph2[i])
            )
        amp_sup = float(np.abs(ck).sum())
        for ax in range(2):
            lip[ax] = float(
                (np.abs(ck) * 2 * np.pi * k).sum() / lengths[ax]
            )

    # taper: 1 on the inner half of the box, 0 outside the centered 3/4 sub-box
    taper = np.ones(box.n_cells)
    taper_lip = [0.0] * box.dim
    for ax in range(box.dim):
        d = np.abs(units[ax] - 0.5)
        w = 1.0 - _smooth_ramp(d, 0.25, 0.375)
        taper = taper * w
        taper_lip[ax] = 1.5 / (0.125 * lengths[ax])

    raw = taper * psi
    # gradient bound of taper*psi, axis by axis, then Euclidean combination
    grad_sq = 0.0
    for ax in range(box.dim):
        grad_sq += (taper_lip[ax] * amp_sup + lip[ax]) ** 2
    raw_lip = math.sqrt(grad_sq)

    diam = math.sqrt(sum(l * l for l in lengths))
    allowed_lip = modulus_bound / _log_holder_envelope(diam)
    amp_natural = (p_hi - p_lo) / (2.0 * max(amp_sup, 1e-300))
    amp = min(amp_natural, allowed_lip / max(raw_lip, 1e-300))

    p = np.clip(p_infinity + amp * raw, p_lo, p_hi)
    return ExponentField(GridFunction(box, p))


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------


def grid_function_to_json(f: GridFunction) -> dict:
    return {
        "box": {
            "dim": f.box.dim,
            "bounds": [list(b) for b in f.box.bounds],
            "cells": list(f.box.cells),
        },
        "values": f.values.tolist(),
    }


def _box_from_json(d: dict) -> Box:
    box = Box(
        tuple((float(a), float(b)) for a, b in d["bounds"]),
        tuple(int(n) for n in d["cells"]),
    )
    if int(d.get("dim", box.dim)) != box.dim:
        raise ValueError("declared dim does not match bounds")
    return box


def grid_function_from_json(d: dict) -> GridFunction:
    box = _box_from_json(d["box"])
    values = np.asarray(d["values"], dtype=float)
    if values.size != box.n_cells:
        raise ValueError("value count does not match the box")
    return GridFunction(box, values)


def exponent_field_to_json(p: ExponentField) -> dict:
    return grid_function_to_json(p.samples)


def exponent_field_from_json(d: dict) -> ExponentField:
    return ExponentField(grid_function_from_json(d))
