"""Non-increasing rearrangements, running averages, and Zygmund norms.

The rearrangement of a weighted multiset is a non-increasing step function on
(0, total measure]; evaluation at breakpoints follows the right-continuous
inf-definition, so f*(t) is the smallest level whose super-level set has
measure at most t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import lambertw

from .core import CubeWindow, GridFunction, WeightedMultiset, restrict

__all__ = [
    "StepFunction",
    "rearrangement",
    "double_star",
    "llogl_norm",
    "llogl_norm_star_form",
    "lexp_norm",
    "zygmund_holder_check",
]


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Non-increasing right-continuous step function on (0, t_k].

    ``values[j]`` is the level on the interval (breakpoints[j], breakpoints[j+1]].
    """

    breakpoints: np.ndarray  # t_0 = 0 < t_1 < ... < t_k
    values: np.ndarray  # v_1 >= ... >= v_k >= 0

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float)
        v = np.array(self.values, dtype=float)
        bp.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", v)
        if bp.size != v.size + 1 or v.size == 0:
            raise ValueError("need k+1 breakpoints for k values")
        if bp[0] != 0.0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must start at 0 and strictly increase")
        if np.any(np.diff(v) > 0) or v[-1] < 0:
            raise ValueError("values must be non-increasing and non-negative")

    @property
    def total_measure(self) -> float:
        return float(self.breakpoints[-1])

    def __call__(self, t):
        """Evaluate by the inf-definition: right-continuous at breakpoints."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0) or np.any(t > self.total_measure * (1 + 1e-12)):
            raise ValueError("evaluation point outside (0, total measure]")
        idx = np.searchsorted(self.breakpoints[1:], t, side="right")
        padded = np.concatenate([self.values, [0.0]])
        out = padded[idx]
        return float(out) if out.ndim == 0 else out

    def integral(self, t: float) -> float:
        """Exact integral of the step function over (0, t]."""
        if t <= 0 or t > self.total_measure * (1 + 1e-12):
            raise ValueError("integration endpoint outside (0, total measure]")
        t = min(t, self.total_measure)
        bp = self.breakpoints
        seg = np.minimum(bp[1:], t) - bp[:-1]
        seg = np.maximum(seg, 0.0)
        return float((self.values * seg).sum())

    def cumulative(self) -> np.ndarray:
        """Integrals up to every breakpoint, starting at 0."""
        lengths = np.diff(self.breakpoints)
        return np.concatenate([[0.0], np.cumsum(self.values * lengths)])

    def to_json(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
        }

    @staticmethod
    def from_json(d: dict) -> "StepFunction":
        return StepFunction(
            np.asarray(d["breakpoints"], dtype=float),
            np.asarray(d["values"], dtype=float),
        )


def rearrangement(ms: WeightedMultiset) -> StepFunction:
    """Non-increasing rearrangement of |values|, measures as interval lengths.

    Ties are broken by original index (stable sort) so intermediate data is
    reproducible; the step function itself does not depend on the tie rule.
    """
    absv = np.abs(ms.values)
    order = np.argsort(-absv, kind="stable")
    bp = np.concatenate([[0.0], np.cumsum(ms.measures[order])])
    return StepFunction(bp, absv[order])


def double_star(fs: StepFunction, t: float) -> float:
    """Running average f**(t) = integral of f* over (0, t], divided by t."""
    if t <= 0:
        raise ValueError("t must be positive")
    return fs.integral(t) / t


def _rearranged_on_window(f: GridFunction, window: CubeWindow) -> StepFunction:
    return rearrangement(restrict(f, window))


def llogl_norm(f: GridFunction, window: CubeWindow) -> float:
    """L log L norm over a window, via the closed-form integral of f**.

    On each rearrangement step the running average is (A + v*t)/t with A the
    accumulated integral, so the integral of f** picks up a log term per step.
    """
    fs = _rearranged_on_window(f, window)
    bp = fs.breakpoints
    v = fs.values
    cum = fs.cumulative()
    total = v[0] * bp[1]
    if v.size > 1:
        a_prev = cum[1:-1]
        t_prev = bp[1:-1]
        t_next = bp[2:]
        vj = v[1:]
        c = a_prev - vj * t_prev
        total += float((c * np.log(t_next / t_prev) + vj * (t_next - t_prev)).sum())
    return total


def llogl_norm_star_form(f: GridFunction, window: CubeWindow) -> float:
    """Same norm via the f* log(|Q|/t) formula; agrees with llogl_norm."""
    fs = _rearranged_on_window(f, window)
    bp = fs.breakpoints
    v = fs.values
    big_t = fs.total_measure

    def phi(t):
        # antiderivative of log(T/t): t log(T/t) + t, with phi(0) = 0
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = t[pos] * np.log(big_t / t[pos]) + t[pos]
        return out

    return float((v * (phi(bp[1:]) - phi(bp[:-1]))).sum())


def lexp_norm(f: GridFunction, window: CubeWindow) -> float:
    """L_exp norm over a window: sup of f**(t) / (1 + log(|Q|/t)).

    Per step the ratio is (C/t + v) / (1 + log(T/t)); its interior critical
    point solves u e^u = vT/C with u = log(T/t), i.e. a Lambert-W evaluation,
    so the supremum is found from closed-form candidates plus endpoints.
    """
    fs = _rearranged_on_window(f, window)
    bp = fs.breakpoints
    v = fs.values
    big_t = fs.total_measure
    cum = fs.cumulative()
    c = cum[:-1] - v * bp[:-1]  # accumulated-minus-linear offset, >= 0

    def ratio(t, cj, vj):
        return (cj / t + vj) / (1.0 + np.log(big_t / t))

    best = 0.0
    t_lo = bp[:-1]
    t_hi = bp[1:]
    # endpoints of every piece (skip t=0 where the ratio tends to 0)
    for j in range(v.size):
        if t_lo[j] > 0:
            best = max(best, ratio(t_lo[j], c[j], v[j]))
        best = max(best, ratio(t_hi[j], c[j], v[j]))
        if c[j] > 0 and v[j] > 0:
            u = float(np.real(lambertw(v[j] * big_t / c[j])))
            t_star = big_t * np.exp(-u)
            if t_lo[j] < t_star < t_hi[j]:
                best = max(best, ratio(t_star, c[j], v[j]))
    return float(best)


def zygmund_holder_check(
    f: GridFunction, g: GridFunction, window: CubeWindow
) -> tuple[float, float]:
    """Both sides of the Zygmund-space Hoelder inequality on a window."""
    if f.box != g.box:
        raise ValueError("functions live on different boxes")
    ms = restrict(f, window)
    mg = restrict(g, window)
    lhs = float((np.abs(ms.values * mg.values) * ms.measures).sum())
    rhs = 2.0 * llogl_norm(f, window) * lexp_norm(g, window)
    return lhs, rhs
