"""Discretized singular convolutions with homogeneous kernels K = Omega/|x|^n,
their truncations, maximal truncations, and commutators with a multiplier.

The principal value is realized by excluding the self cell (truncation at half
the cell width); combined with midpoint sampling and index-delta geometry this
makes the discrete operator matrix of an odd kernel exactly antisymmetric, so
the adjoint identity becomes an exact test rather than an approximate one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .core import Box, GridFunction, cell_measure

__all__ = [
    "Kernel",
    "CommutatorInstance",
    "hilbert_kernel",
    "riesz_kernel",
    "odd_trig_kernel",
    "apply_truncated",
    "apply_pv",
    "maximal_truncated",
    "commutator_apply",
    "antisymmetry_defect",
    "operator_matrix",
    "commutator_matrix",
]

HILBERT_NORMALIZATION = 1.0 / math.pi
# classical Riesz constant Gamma((n+1)/2) / pi^((n+1)/2) at n = 2; the value
# only sets absolute scales, never inequality directions
RIESZ_NORMALIZATION_2D = 1.0 / (2.0 * math.pi)

MATRIX_CAP_1D = 2048
MATRIX_CAP_2D = 64 * 64


@dataclass(frozen=True, eq=False)
class Kernel:
    """Homogeneous degree -n kernel, Omega sampled on the sphere.

    dim 1: omega = (Omega(+1), Omega(-1)); dim 2: omega holds M uniformly
    spaced angle samples starting at angle 0.  Odd kernels must have exactly
    antisymmetric samples; the mean over the sphere must vanish.
    """

    dim: int
    omega: np.ndarray
    odd: bool
    # presets are trigonometric polynomials; hand-sampled Omega stays flagged
    # as unverified smoothness
    smooth_preset: bool = False

    def __post_init__(self):
        om = np.array(self.omega, dtype=float)
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)
        if self.dim == 1:
            if om.shape != (2,):
                raise ValueError("1-D kernels carry two signed Omega values")
            if self.odd and om[1] != -om[0]:
                raise ValueError("odd 1-D kernel needs omega(-1) == -omega(+1)")
        elif self.dim == 2:
            m = om.size
            if m < 4 or m % 2:
                raise ValueError("2-D kernels need an even number (>=4) of samples")
            if self.odd and not np.array_equal(om[m // 2 :], -om[: m // 2]):
                raise ValueError("odd 2-D kernel needs exactly antipodal samples")
        else:
            raise ValueError("kernel dim must be 1 or 2")
        if abs(float(om.mean())) > 1e-12:
            raise ValueError("Omega must have zero mean over the sphere")


def hilbert_kernel() -> Kernel:
    """K(x) = 1/(pi x): the one-dimensional odd prototype."""
    c = HILBERT_NORMALIZATION
    return Kernel(1, np.array([c, -c]), odd=True, smooth_preset=True)


def riesz_kernel(j: int, angle_samples: int = 360) -> Kernel:
    """Planar Riesz kernel Omega(theta) = c2 * cos(theta) (j=1) or sin (j=2)."""
    if j not in (1, 2):
        raise ValueError("Riesz component must be 1 or 2")
    m = int(angle_samples)
    theta = 2.0 * np.pi * np.arange(m) / m
    raw = RIESZ_NORMALIZATION_2D * (np.cos(theta) if j == 1 else np.sin(theta))
    om = 0.5 * (raw - np.roll(raw, -(m // 2)))  # exact antipodal antisymmetry
    return Kernel(2, om, odd=True, smooth_preset=True)


def odd_trig_kernel(coeffs, angle_samples: int = 360) -> Kernel:
    """Odd trigonometric-polynomial Omega from (harmonic, cos_coef, sin_coef)
    triples; harmonics must be odd so Omega(theta+pi) = -Omega(theta)."""
    m = int(angle_samples)
    theta = 2.0 * np.pi * np.arange(m) / m
    raw = np.zeros(m)
    for k, a, b in coeffs:
        if k % 2 == 0:
            raise ValueError("odd kernels need odd harmonics only")
        raw += a * np.cos(k * theta) + b * np.sin(k * theta)
    om = 0.5 * (raw - np.roll(raw, -(m // 2)))
    return Kernel(2, om, odd=True, smooth_preset=True)


def _pv_eps(box: Box) -> float:
    return 0.5 * min(box.widths)


def apply_truncated(k: Kernel, f: GridFunction, eps: float) -> GridFunction:
    """Truncated convolution: sum of K(x_i - x_j) f_j mu over |x_i - x_j| > eps."""
    if eps <= 0:
        raise ValueError("truncation radius must be positive")
    if k.dim != f.box.dim:
        raise ValueError("kernel/function dimension mismatch")
    mu = cell_measure(f.box)
    if k.dim == 1:
        out = K.apply_trunc_1d(
            K.as_f64(f.values), f.box.widths[0], mu, k.omega[0], k.omega[1], eps
        )
        return GridFunction(f.box, out)
    h1, h2 = f.box.widths
    out = K.apply_trunc_2d(
        K.as_f64(f.reshaped()), h1, h2, mu, K.as_f64(k.omega), k.odd, eps
    )
    return GridFunction(f.box, out.ravel())


def apply_pv(k: Kernel, f: GridFunction) -> GridFunction:
    """Principal-value convolution: truncation at half the cell width, so only
    the self cell is excluded and midpoint symmetry supplies the cancellation."""
    return apply_truncated(k, f, _pv_eps(f.box))


def maximal_truncated(k: Kernel, f: GridFunction) -> GridFunction:
    """sup over truncation radii of |T_eps f|, exhausted by inter-cell distances."""
    if k.dim != f.box.dim:
        raise ValueError("kernel/function dimension mismatch")
    mu = cell_measure(f.box)
    if k.dim == 1:
        out = K.tstar_1d(
            K.as_f64(f.values), f.box.widths[0], mu, k.omega[0], k.omega[1]
        )
        return GridFunction(f.box, out)
    h1, h2 = f.box.widths
    out = K.tstar_2d(K.as_f64(f.reshaped()), h1, h2, mu, K.as_f64(k.omega), k.odd)
    return GridFunction(f.box, out.ravel())


def commutator_apply(
    b: GridFunction, f: GridFunction, k: Kernel
) -> GridFunction:
    """[b, T] f = b T(f) - T(b f), with T the principal-value convolution."""
    if b.box != f.box:
        raise ValueError("multiplier and argument live on different boxes")
    tf = apply_pv(k, f)
    tbf = apply_pv(k, f.with_values(b.values * f.values))
    return GridFunction(f.box, b.values * tf.values - tbf.values)


def antisymmetry_defect(
    k: Kernel, f: GridFunction, phi: GridFunction
) -> float:
    """<Tf, phi> + <f, Tphi> under the discrete pairing; 0 for odd kernels."""
    if not k.odd:
        raise ValueError("antisymmetry only holds for odd kernels")
    if f.box != phi.box:
        raise ValueError("functions live on different boxes")
    mu = cell_measure(f.box)
    tf = apply_pv(k, f).values
    tphi = apply_pv(k, phi).values
    return float((tf * phi.values).sum() * mu + (f.values * tphi).sum() * mu)


def _check_matrix_cap(box: Box):
    cap = MATRIX_CAP_1D if box.dim == 1 else MATRIX_CAP_2D
    if box.n_cells > cap:
        raise ValueError(
            f"dense assembly capped at {cap} cells for dim {box.dim}; "
            "use matrix-free application"
        )


def operator_matrix(k: Kernel, box: Box) -> np.ndarray:
    """Dense matrix of the principal-value operator on a box (capped size)."""
    if k.dim != box.dim:
        raise ValueError("kernel/box dimension mismatch")
    _check_matrix_cap(box)
    mu = cell_measure(box)
    eps = _pv_eps(box)
    if box.dim == 1:
        n = box.cells[0]
        h = box.widths[0]
        d = (np.arange(n)[:, None] - np.arange(n)[None, :]) * h
        a = np.zeros((n, n))
        pos = d > eps
        neg = -d > eps
        a[pos] = k.omega[0] / d[pos]
        a[neg] = k.omega[1] / (-d[neg])
        return a * mu
    n1, n2 = box.cells
    h1, h2 = box.widths
    i1, i2 = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    i1 = i1.ravel()
    i2 = i2.ravel()
    z1 = (i1[:, None] - i1[None, :]) * h1
    z2 = (i2[:, None] - i2[None, :]) * h2
    r2 = z1 * z1 + z2 * z2
    mask = r2 > eps * eps
    val = K.omega_eval_np(K.as_f64(k.omega), k.odd, z1, z2)
    return np.where(mask, val / np.where(mask, r2, 1.0), 0.0) * mu


def commutator_matrix(b: GridFunction, k: Kernel) -> np.ndarray:
    """Dense commutator matrix, entrywise A_ij (b_i - b_j).

    For odd kernels the assembled matrix is exactly symmetric in floating
    point, since both factors negate exactly under index swap.
    """
    a = operator_matrix(k, b.box)
    bv = b.values
    return a * (bv[:, None] - bv[None, :])


@dataclass(eq=False)
class CommutatorInstance:
    """A multiplier-kernel pair with an optional cached dense matrix."""

    b: GridFunction
    kernel: Kernel
    _matrix: np.ndarray | None = field(default=None, repr=False)

    def apply(self, f: GridFunction) -> GridFunction:
        return commutator_apply(self.b, f, self.kernel)

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = commutator_matrix(self.b, self.kernel)
        return self._matrix
