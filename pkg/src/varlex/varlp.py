"""Variable-exponent Lebesgue norms: modular, Luxemburg-Nakano, Orlicz-type.

The atom-level solvers (`modular_atoms`, `luxemburg_atoms`, `ball_maximizer`)
work on bare (values, weights, exponents) arrays and are shared with the
Banach-lattice module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ExponentField, GridFunction, cell_measure, conjugate, r_const

__all__ = [
    "NormResult",
    "modular",
    "luxemburg_norm",
    "orlicz_norm",
    "holder_pairing",
    "norm_equivalence_check",
]


@dataclass(frozen=True)
class NormResult:
    value: float
    iterations: int
    residual: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def modular_atoms(values, weights, p) -> float:
    """Weighted convex modular: sum of w_i |v_i|^{p_i}."""
    return float((weights * np.abs(values) ** p).sum())


def luxemburg_atoms(
    values, weights, p, rel_tol=1e-12, mod_tol=1e-12, max_iter=400
) -> NormResult:
    """Unique lam > 0 with modular(values/lam) = 1, by bracketing + bisection.

    The map lam -> modular(v/lam) is continuous and strictly decreasing for
    nonzero v, so geometric bracket growth from the initial guess
    modular(v)^(1/p_min) always straddles the root; bisection is then
    unconditionally safe even when the modular has huge dynamic range.
    """
    v = np.abs(np.asarray(values, dtype=float))
    if not v.any():
        return NormResult(0.0, 0, 0.0)
    w = np.asarray(weights, dtype=float)
    p = np.asarray(p, dtype=float)

    with np.errstate(over="ignore", divide="ignore"):
        m0 = modular_atoms(v, w, p)
        lam = m0 ** (1.0 / p.min()) if np.isfinite(m0) and m0 > 0 else float(v.max())
        if not np.isfinite(lam) or lam <= 0:
            lam = float(v.max())

        def mod(l):
            return float((w * (v / l) ** p).sum())

        it = 0
        m = mod(lam)
        if m > 1.0:
            lo = lam
            while m > 1.0 and it < max_iter:
                lam *= 2.0
                lo = lam / 2.0
                m = mod(lam)
                it += 1
            hi = lam
        else:
            hi = lam
            while m <= 1.0 and lam > 0 and it < max_iter:
                lam /= 2.0
                hi = lam * 2.0
                m = mod(lam)
                it += 1
            lo = lam

        residual = abs(mod(hi) - 1.0)
        best = hi
        while it < max_iter:
            mid = 0.5 * (lo + hi)
            mm = mod(mid)
            r = abs(mm - 1.0)
            if r <= residual:
                residual = r
                best = mid
            if mm > 1.0:
                lo = mid
            else:
                hi = mid
            it += 1
            if (hi - lo) <= rel_tol * hi and residual <= mod_tol:
                break
        else:
            if residual > 10 * mod_tol:
                raise RuntimeError(
                    "luxemburg bisection did not converge "
                    f"(residual {residual:.3e})"
                )
    return NormResult(float(best), it, float(residual))


def ball_maximizer(
    values, weights, q, rel_tol=1e-12, mod_tol=1e-12, max_iter=400
):
    """Maximizer of sum(w |v| g) over the modular ball modular(g, q) <= 1.

    The stationarity condition gives g_i = (|v_i| / (kappa q_i))^(1/(q_i-1))
    with a single multiplier kappa fixed by modular(g, q) = 1.  Returns
    (g, iterations, residual); g is zero where v is zero.
    """
    v = np.abs(np.asarray(values, dtype=float))
    w = np.asarray(weights, dtype=float)
    q = np.asarray(q, dtype=float)
    if not v.any():
        return np.zeros_like(v), 0, 0.0
    e = 1.0 / (q - 1.0)
    base = v / q

    with np.errstate(over="ignore", divide="ignore"):

        def g_of(kappa):
            return (base / kappa) ** e

        def mod(kappa):
            return float((w * g_of(kappa) ** q).sum())

        kappa = 1.0
        it = 0
        m = mod(kappa)
        if m > 1.0:
            while m > 1.0 and it < max_iter:
                kappa *= 2.0
                m = mod(kappa)
                it += 1
            lo, hi = kappa / 2.0, kappa
        else:
            while m <= 1.0 and it < max_iter:
                kappa /= 2.0
                m = mod(kappa)
                it += 1
            lo, hi = kappa, kappa * 2.0

        best = lo
        residual = abs(mod(lo) - 1.0)
        while it < max_iter:
            mid = 0.5 * (lo + hi)
            mm = mod(mid)
            r = abs(mm - 1.0)
            if r <= residual:
                residual = r
                best = mid
            if mm > 1.0:
                lo = mid
            else:
                hi = mid
            it += 1
            if (hi - lo) <= rel_tol * hi and residual <= mod_tol:
                break
        else:
            if residual > 10 * mod_tol:
                raise RuntimeError(
                    "dual maximizer bisection did not converge "
                    f"(residual {residual:.3e})"
                )
    return g_of(best), it, float(residual)


def orlicz_atoms(values, weights, p, **kw) -> NormResult:
    """Orlicz-type norm sup{ sum(w |v| g) : modular(g, p') <= 1 } via KKT."""
    v = np.abs(np.asarray(values, dtype=float))
    if not v.any():
        return NormResult(0.0, 0, 0.0)
    p = np.asarray(p, dtype=float)
    pc = p / (p - 1.0)
    g, it, residual = ball_maximizer(v, weights, pc, **kw)
    value = float((np.asarray(weights, dtype=float) * v * g).sum())
    return NormResult(value, it, residual)


def norming_functional(values, weights, p, lam=None):
    """g with pairing(v, g) = ||v|| and unit conjugate Luxemburg norm."""
    v = np.asarray(values, dtype=float)
    if lam is None:
        lam = luxemburg_atoms(v, weights, p).value
    if lam == 0:
        return np.zeros_like(v)
    return np.sign(v) * (np.abs(v) / lam) ** (np.asarray(p, dtype=float) - 1.0)


def _check_shared_box(f: GridFunction, p: ExponentField):
    if f.box != p.box:
        raise ValueError("function and exponent live on different boxes")


def modular(f: GridFunction, p: ExponentField) -> float:
    """Convex modular: integral of |f(x)|^{p(x)} as a midpoint sum."""
    _check_shared_box(f, p)
    mu = cell_measure(f.box)
    return modular_atoms(f.values, np.full(f.values.size, mu), p.values)


def luxemburg_norm(f: GridFunction, p: ExponentField, **kw) -> NormResult:
    """Luxemburg-Nakano norm inf{lam > 0 : modular(f/lam) <= 1}; 0 for f = 0."""
    _check_shared_box(f, p)
    mu = cell_measure(f.box)
    return luxemburg_atoms(f.values, np.full(f.values.size, mu), p.values, **kw)


def orlicz_norm(f: GridFunction, p: ExponentField, **kw) -> NormResult:
    """Orlicz-type norm: the pairing supremum over the conjugate unit ball."""
    _check_shared_box(f, p)
    mu = cell_measure(f.box)
    return orlicz_atoms(f.values, np.full(f.values.size, mu), p.values, **kw)


def holder_pairing(
    f: GridFunction, g: GridFunction, p: ExponentField
) -> tuple[float, float]:
    """lhs = integral of |fg|, rhs = r_p ||f||_{p} ||g||_{p'}; lhs <= rhs."""
    _check_shared_box(f, p)
    if g.box != f.box:
        raise ValueError("functions live on different boxes")
    mu = cell_measure(f.box)
    lhs = float((np.abs(f.values * g.values) * mu).sum())
    nf = luxemburg_norm(f, p).value
    ng = luxemburg_norm(g, conjugate(p)).value
    return lhs, r_const(p) * nf * ng


def norm_equivalence_check(
    f: GridFunction, p: ExponentField
) -> tuple[float, float, float]:
    """(luxemburg, orlicz, r_p); the chain lux <= orlicz <= r_p * lux holds."""
    lux = luxemburg_norm(f, p).value
    orl = orlicz_norm(f, p).value
    return lux, orl, r_const(p)
