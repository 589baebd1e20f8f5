"""Seeded, resolution-independent test-function profiles.

A Profile is a pure function of domain coordinates; sampling the same profile
on finer grids refines the same underlying function, which is what makes the
grid-doubling stability studies meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Box, GridFunction

__all__ = [
    "Profile",
    "random_smooth",
    "bump",
    "indicator",
    "log_spike",
    "dyadic_martingale",
    "abs_profile",
    "square_profile",
    "TestFunctionFamily",
]

FAMILY_TAGS = (
    "random-smooth",
    "bump",
    "indicator",
    "log-spike",
    "dyadic-martingale",
    "adversarial-for-commutator",
)


@dataclass(frozen=True)
class Profile:
    name: str
    func: Callable

    def __call__(self, *coords):
        return self.func(*coords)

    def sample(self, box: Box) -> GridFunction:
        vals = np.asarray(self.func(*box.midpoint_mesh()), dtype=float)
        return GridFunction(box, np.broadcast_to(vals, (box.n_cells,)).copy())


def random_smooth(seed: int, box: Box, modes: int = 6, amplitude: float = 1.0) -> Profile:
    """Truncated random Fourier series with 1/k^2 coefficient decay."""
    rng = np.random.default_rng(seed)
    k = np.arange(1, modes + 1)
    lo = [b[0] for b in box.bounds]
    span = [b[1] - b[0] for b in box.bounds]
    if box.dim == 1:
        a = rng.normal(0, 1, modes) / k**2
        b = rng.normal(0, 1, modes) / k**2

        def f(x):
            u = (x - lo[0]) / span[0]
            out = np.zeros_like(u)
            for i in range(modes):
                out += a[i] * np.cos(2 * np.pi * k[i] * u)
                out += b[i] * np.sin(2 * np.pi * k[i] * u)
            return amplitude * out

        return Profile(f"smooth[{seed}]", f)

    a = rng.normal(0, 1, modes) / k**2
    p1 = rng.uniform(0, 2 * np.pi, modes)
    p2 = rng.uniform(0, 2 * np.pi, modes)

    def f2(x1, x2):
        u1 = (x1 - lo[0]) / span[0]
        u2 = (x2 - lo[1]) / span[1]
        out = np.zeros_like(u1)
        for i in range(modes):
            out += (
                a[i]
                * np.cos(2 * np.pi * k[i] * u1 + p1[i])
                * np.cos(2 * np.pi * k[i] * u2 + p2[i])
            )
        return amplitude * out

    return Profile(f"smooth2d[{seed}]", f2)


def bump(center, width: float, height: float = 1.0) -> Profile:
    """Compactly supported smooth bump exp(1 - 1/(1 - r^2)) inside radius width."""
    c = np.atleast_1d(np.asarray(center, dtype=float))

    def f(*coords):
        r2 = np.zeros_like(coords[0])
        for i, x in enumerate(coords):
            r2 = r2 + ((x - c[i]) / width) ** 2
        out = np.zeros_like(r2)
        inside = r2 < 1.0
        out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
        return out

    return Profile("bump@(%s)" % ",".join(f"{x:.3g}" for x in c), f)


def indicator(intervals) -> Profile:
    """Indicator of a product of half-open intervals [a_i, b_i)."""
    ivs = [tuple(map(float, iv)) for iv in np.atleast_2d(intervals)]

    def f(*coords):
        out = np.ones_like(coords[0], dtype=bool)
        for x, (a, b) in zip(coords, ivs):
            out &= (x >= a) & (x < b)
        return out.astype(float)

    return Profile("indicator(%s)" % ";".join(f"{a:.3g},{b:.3g}" for a, b in ivs), f)


def log_spike(center, floor_width: float = 0.01) -> Profile:
    """The BMO exemplar log|x - c|, clipped below scale floor_width.

    The default floor sits above the cell width of the desk-scale grids, so
    refinement studies see a resolved profile rather than a still-sharpening
    singularity.
    """
    c = np.atleast_1d(np.asarray(center, dtype=float))

    def f(*coords):
        r2 = np.zeros_like(coords[0])
        for i, x in enumerate(coords):
            r2 = r2 + (x - c[i]) ** 2
        return np.log(np.maximum(np.sqrt(r2), floor_width))

    return Profile("logspike@(%s)" % ",".join(f"{x:.3g}" for x in c), f)


def dyadic_martingale(seed: int, box: Box, levels: int = 6) -> Profile:
    """Lacunary sum of Rademacher-type signs along the first axis."""
    rng = np.random.default_rng(seed)
    eps = rng.choice([-1.0, 1.0], levels)
    a, b = box.bounds[0]

    def f(*coords):
        u = (coords[0] - a) / (b - a)
        out = np.zeros_like(u)
        for j in range(levels):
            out += eps[j] * np.sign(np.sin(2.0 ** (j + 1) * np.pi * u))
        return out

    return Profile(f"martingale[{seed}]", f)


def abs_profile() -> Profile:
    """|x|: not in BMO over growing boxes (the contrast family)."""

    def f(*coords):
        r2 = np.zeros_like(coords[0])
        for x in coords:
            r2 = r2 + x * x
        return np.sqrt(r2)

    return Profile("abs", f)


def square_profile() -> Profile:
    def f(*coords):
        r2 = np.zeros_like(coords[0])
        for x in coords:
            r2 = r2 + x * x
        return r2

    return Profile("square", f)


@dataclass(frozen=True)
class TestFunctionFamily:
    """A named generator of profiles, deterministic per seed."""

    __test__ = False  # not a pytest class, despite the name

    tag: str
    seed: int

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")

    def profiles(self, box: Box, count: int = 4) -> list[Profile]:
        rng = np.random.default_rng(self.seed)
        lo = np.array([b[0] for b in box.bounds])
        hi = np.array([b[1] for b in box.bounds])
        span = hi - lo
        mid = 0.5 * (lo + hi)
        out = []
        for i in range(count):
            sub = int(rng.integers(0, 2**31))
            if self.tag == "random-smooth":
                out.append(random_smooth(sub, box))
            elif self.tag == "bump":
                c = lo + span * rng.uniform(0.3, 0.7, box.dim)
                out.append(bump(c, float(span.min()) * rng.uniform(0.1, 0.3)))
            elif self.tag == "indicator":
                c = lo + span * rng.uniform(0.25, 0.75, box.dim)
                w = span * rng.uniform(0.1, 0.25)
                out.append(indicator([(ci - wi, ci + wi) for ci, wi in zip(c, w)]))
            elif self.tag == "log-spike":
                c = mid + span * rng.uniform(-0.1, 0.1, box.dim)
                out.append(log_spike(c))
            elif self.tag == "dyadic-martingale":
                out.append(dyadic_martingale(sub, box))
            else:  # adversarial-for-commutator
                c = mid + span * rng.uniform(-0.05, 0.05, box.dim)
                width = float(span.min()) * rng.uniform(0.05, 0.2)
                choice = i % 4
                if choice == 0:
                    out.append(bump(c, width))
                elif choice == 1:
                    base = bump(c, width)
                    cc = c.copy()

                    def signed(*coords, _b=base, _c=cc):
                        return _b(*coords) * np.sign(coords[0] - _c[0])

                    out.append(Profile("signed-" + base.name, signed))
                elif choice == 2:
                    out.append(
                        indicator([(ci - width, ci + width) for ci in c])
                    )
                else:
                    out.append(random_smooth(sub, box))
        return out

    def sample(self, box: Box, count: int = 4) -> list[GridFunction]:
        return [p.sample(box) for p in self.profiles(box, count)]
