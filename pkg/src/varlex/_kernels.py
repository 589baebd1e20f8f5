"""Hot numeric kernels: numba fast path with a pure-numpy fallback.

The backend is fixed at import time from the ``VARLEX_BACKEND`` environment
variable ("numba" or "numpy"); default is numba when importable.  Both
implementation sets stay importable through ``IMPLS`` so the benchmark can
time them side by side.
"""

import math
import os

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.ndimage import maximum_filter1d

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


_env = os.environ.get("VARLEX_BACKEND", "").strip().lower()
if _env not in ("", "numba", "numpy"):
    raise RuntimeError(
        "VARLEX_BACKEND must be 'numba' or 'numpy', got %r" % _env
    )
if _env == "numba" and not HAVE_NUMBA:
    raise RuntimeError("VARLEX_BACKEND=numba but numba is not importable")
BACKEND = _env or ("numba" if HAVE_NUMBA else "numpy")

_CHUNK_ELEMS = 4_000_000  # cap on temporary array sizes in the numpy paths


def as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def window_matrix(values, side):
    """All cube windows of a given side as rows of a (positions, side**dim) matrix.

    Positions are ordered row-major, matching the flattening of the grid.
    """
    if values.ndim == 1:
        return as_f64(sliding_window_view(values, side))
    w = sliding_window_view(values, (side, side))
    p1, p2 = w.shape[0], w.shape[1]
    return as_f64(w.reshape(p1 * p2, side * side))


# ---------------------------------------------------------------------------
# containing-window max: out[i] = max over window positions k with
# k <= i <= k + side - 1 of w[k], with k clipped to the valid range.
# ---------------------------------------------------------------------------


def _containing_max_np(w, side, n):
    # trailing-window max: out[i] = max over pad[i-side+1 .. i]; positive
    # origin shifts the scipy filter window to earlier indices
    pad = np.full(n, -np.inf)
    pad[: w.shape[0]] = w
    return maximum_filter1d(
        pad, size=side, mode="constant", cval=-np.inf, origin=(side - 1) // 2
    )


@njit(cache=True)
def _containing_max_nb(w, side, n):
    k = w.shape[0]
    out = np.empty(n)
    q = np.empty(k, np.int64)
    head = 0
    tail = 0
    nxt = 0
    for i in range(n):
        hi = i if i < k - 1 else k - 1
        lo = i - side + 1
        if lo < 0:
            lo = 0
        while nxt <= hi:
            while tail > head and w[q[tail - 1]] <= w[nxt]:
                tail -= 1
            q[tail] = nxt
            tail += 1
            nxt += 1
        while q[head] < lo:
            head += 1
        out[i] = w[q[head]]
    return out


# ---------------------------------------------------------------------------
# per-window inner values on a materialized window matrix
# ---------------------------------------------------------------------------


_CAND_CAP = 64  # order-statistic subsample size for large windows


def _abs_pow(x, delta):
    # quarter powers via hardware sqrt; anything else through libm pow
    if delta == 0.5:
        return np.sqrt(x)
    if delta == 0.25:
        return np.sqrt(np.sqrt(x))
    if delta == 0.75:
        r = np.sqrt(x)
        return r * np.sqrt(r)
    return x**delta


def _sharp_inners_np(wins, delta, n_refine):
    p, m = wins.shape
    sv = np.sort(wins, axis=1)
    if m > _CAND_CAP:
        idx = (np.arange(_CAND_CAP) * (m - 1)) // (_CAND_CAP - 1)
        value_cands = sv[:, idx]
    else:
        value_cands = sv
    lo = sv[:, 0]
    hi = sv[:, -1]
    grid = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, n_refine)
    med = (
        sv[:, m // 2]
        if m % 2
        else 0.5 * (sv[:, m // 2 - 1] + sv[:, m // 2])
    )
    cands = np.concatenate(
        [value_cands, grid, wins.mean(axis=1)[:, None], med[:, None]], axis=1
    )
    nc = cands.shape[1]
    out = np.empty(p)
    block = max(1, int(_CHUNK_ELEMS // max(1, nc * m)))
    for a in range(0, p, block):
        b = min(p, a + block)
        d = _abs_pow(np.abs(wins[a:b, None, :] - cands[a:b, :, None]), delta)
        out[a:b] = d.mean(axis=2).min(axis=1)
    return out ** (1.0 / delta)


@njit(cache=True)
def _sharp_inners_nb(wins, delta, n_refine):
    p, m = wins.shape
    out = np.empty(p)
    inv = 1.0 / delta
    n_vals = m if m <= _CAND_CAP else _CAND_CAP
    # quarter powers go through hardware sqrt
    mode = 0
    if delta == 0.5:
        mode = 1
    elif delta == 0.25:
        mode = 2
    elif delta == 0.75:
        mode = 3
    for idx in range(p):
        v = wins[idx]
        mean = 0.0
        for j in range(m):
            mean += v[j]
        mean /= m
        sv = np.sort(v.copy())
        lo = sv[0]
        hi = sv[m - 1]
        if m % 2 == 1:
            med = sv[m // 2]
        else:
            med = 0.5 * (sv[m // 2 - 1] + sv[m // 2])
        best = 1e300
        for j in range(n_vals + n_refine + 2):
            if j < n_vals:
                c = sv[(j * (m - 1)) // max(n_vals - 1, 1)]
            elif j < n_vals + n_refine:
                c = lo + (hi - lo) * ((j - n_vals) / (n_refine - 1.0))
            elif j == n_vals + n_refine:
                c = mean
            else:
                c = med
            acc = 0.0
            if mode == 1:
                for q in range(m):
                    acc += math.sqrt(abs(v[q] - c))
            elif mode == 2:
                for q in range(m):
                    acc += math.sqrt(math.sqrt(abs(v[q] - c)))
            elif mode == 3:
                for q in range(m):
                    r = math.sqrt(abs(v[q] - c))
                    acc += r * math.sqrt(r)
            else:
                for q in range(m):
                    acc += abs(v[q] - c) ** delta
            acc /= m
            if acc < best:
                best = acc
        out[idx] = best**inv
    return out


def _sharp_inners_median_np(wins):
    med = np.median(wins, axis=1)
    return np.abs(wins - med[:, None]).mean(axis=1)


@njit(cache=True)
def _sharp_inners_median_nb(wins):
    p, m = wins.shape
    out = np.empty(p)
    for idx in range(p):
        sv = np.sort(wins[idx].copy())
        if m % 2 == 1:
            med = sv[m // 2]
        else:
            med = 0.5 * (sv[m // 2 - 1] + sv[m // 2])
        acc = 0.0
        for j in range(m):
            acc += abs(wins[idx, j] - med)
        out[idx] = acc / m
    return out


def _local_inners_np(wins, k_min):
    if k_min <= 1:
        return np.zeros(wins.shape[0])
    sv = np.sort(wins, axis=1)
    m = sv.shape[1]
    spans = sv[:, k_min - 1 :] - sv[:, : m - k_min + 1]
    return 0.5 * spans.min(axis=1)


@njit(cache=True)
def _local_inners_nb(wins, k_min):
    p, m = wins.shape
    out = np.zeros(p)
    if k_min <= 1:
        return out
    for idx in range(p):
        sv = np.sort(wins[idx].copy())
        best = sv[k_min - 1] - sv[0]
        for i in range(1, m - k_min + 1):
            span = sv[i + k_min - 1] - sv[i]
            if span < best:
                best = span
        out[idx] = 0.5 * best
    return out


def _osc_inners_np(wins):
    mu = wins.mean(axis=1)
    return np.abs(wins - mu[:, None]).mean(axis=1)


@njit(cache=True)
def _osc_inners_nb(wins):
    p, m = wins.shape
    out = np.empty(p)
    for idx in range(p):
        v = wins[idx]
        mean = 0.0
        for j in range(m):
            mean += v[j]
        mean /= m
        acc = 0.0
        for j in range(m):
            acc += abs(v[j] - mean)
        out[idx] = acc / m
    return out


# ---------------------------------------------------------------------------
# truncated singular convolutions; all pair geometry is derived from index
# deltas so that opposite pairs are exact floating-point negations
# ---------------------------------------------------------------------------


def _apply_trunc_1d_np(f, h, mu, om_pos, om_neg, eps):
    n = f.shape[0]
    out = np.empty(n)
    idx = np.arange(n)
    block = max(1, int(_CHUNK_ELEMS // max(1, n)))
    for a in range(0, n, block):
        b = min(n, a + block)
        d = (idx[a:b, None] - idx[None, :]) * h
        kmat = np.zeros_like(d)
        pos = d > eps
        neg = -d > eps
        kmat[pos] = om_pos / d[pos]
        kmat[neg] = om_neg / (-d[neg])
        out[a:b] = kmat @ f * mu
    return out


@njit(cache=True)
def _apply_trunc_1d_nb(f, h, mu, om_pos, om_neg, eps):
    n = f.shape[0]
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(n):
            d = (i - j) * h
            if d > eps:
                acc += om_pos / d * f[j]
            elif -d > eps:
                acc += om_neg / (-d) * f[j]
        out[i] = acc * mu
    return out


def omega_eval_np(omega, odd, z1, z2):
    """Linear interpolation of angular samples; odd kernels are evaluated on a
    canonical half-circle so opposite directions negate exactly."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if odd:
        flip = (z1 < 0) | ((z1 == 0) & (z2 < 0))
        z1 = np.where(flip, -z1, z1)
        z2 = np.where(flip, -z2, z2)
    m = omega.shape[0]
    t = np.arctan2(z2, z1) * (m / (2.0 * np.pi))
    i0 = np.floor(t).astype(np.int64)
    frac = t - i0
    val = (1.0 - frac) * omega[np.mod(i0, m)] + frac * omega[np.mod(i0 + 1, m)]
    if odd:
        val = np.where(flip, -val, val)
    return val


@njit(cache=True)
def _omega_eval_nb(omega, odd, z1, z2):
    sgn = 1.0
    if odd and (z1 < 0.0 or (z1 == 0.0 and z2 < 0.0)):
        z1 = -z1
        z2 = -z2
        sgn = -1.0
    m = omega.shape[0]
    t = math.atan2(z2, z1) * (m / (2.0 * math.pi))
    i0 = int(math.floor(t))
    frac = t - i0
    a = omega[((i0 % m) + m) % m]
    b = omega[(((i0 + 1) % m) + m) % m]
    return sgn * ((1.0 - frac) * a + frac * b)


def _apply_trunc_2d_np(f2, h1, h2, mu, omega, odd, eps):
    n1, n2 = f2.shape
    i1s, i2s = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    i1f = i1s.ravel()
    i2f = i2s.ravel()
    ff = f2.ravel()
    n = ff.size
    out = np.empty(n)
    eps2 = eps * eps
    block = max(1, int(_CHUNK_ELEMS // max(1, n)))
    for a in range(0, n, block):
        b = min(n, a + block)
        z1 = (i1f[a:b, None] - i1f[None, :]) * h1
        z2 = (i2f[a:b, None] - i2f[None, :]) * h2
        r2 = z1 * z1 + z2 * z2
        mask = r2 > eps2
        val = omega_eval_np(omega, odd, z1, z2)
        kmat = np.where(mask, val / np.where(mask, r2, 1.0), 0.0)
        out[a:b] = kmat @ ff * mu
    return out.reshape(n1, n2)


@njit(cache=True)
def _apply_trunc_2d_nb(f2, h1, h2, mu, omega, odd, eps):
    n1, n2 = f2.shape
    out = np.empty((n1, n2))
    eps2 = eps * eps
    for i1 in range(n1):
        for i2 in range(n2):
            acc = 0.0
            for j1 in range(n1):
                for j2 in range(n2):
                    z1 = (i1 - j1) * h1
                    z2 = (i2 - j2) * h2
                    r2 = z1 * z1 + z2 * z2
                    if r2 > eps2:
                        acc += _omega_eval_nb(omega, odd, z1, z2) / r2 * f2[j1, j2]
            out[i1, i2] = acc * mu
    return out


# ---------------------------------------------------------------------------
# maximal truncation: sup over all truncation radii of |T_eps f|; radii are
# exhausted by the finite set of inter-cell distances (equal distances enter
# together, so every partial sum is a true T_eps value)
# ---------------------------------------------------------------------------


def _tstar_1d_np(f, h, mu, om_pos, om_neg):
    n = f.shape[0]
    out = np.empty(n)
    for i in range(n):
        rmax = max(i, n - 1 - i)
        if rmax == 0:
            out[i] = 0.0
            continue
        r = np.arange(rmax, 0, -1)
        c = np.zeros(rmax)
        jm = i - r
        ok = jm >= 0
        c[ok] += om_pos / (r[ok] * h) * f[jm[ok]]
        jp = i + r
        ok = jp < n
        c[ok] += om_neg / (r[ok] * h) * f[jp[ok]]
        out[i] = mu * np.abs(np.cumsum(c)).max()
    return out


@njit(cache=True)
def _tstar_1d_nb(f, h, mu, om_pos, om_neg):
    n = f.shape[0]
    out = np.empty(n)
    for i in range(n):
        rmax = max(i, n - 1 - i)
        best = 0.0
        acc = 0.0
        for r in range(rmax, 0, -1):
            if i - r >= 0:
                acc += om_pos / (r * h) * f[i - r]
            if i + r < n:
                acc += om_neg / (r * h) * f[i + r]
            a = abs(acc)
            if a > best:
                best = a
        out[i] = best * mu
    return out


def _tstar_2d_np(f2, h1, h2, mu, omega, odd):
    n1, n2 = f2.shape
    i1s, i2s = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    i1f = i1s.ravel()
    i2f = i2s.ravel()
    ff = f2.ravel()
    n = ff.size
    out = np.empty(n)
    for i in range(n):
        z1 = (i1f[i] - i1f) * h1
        z2 = (i2f[i] - i2f) * h2
        r2 = z1 * z1 + z2 * z2
        keep = r2 > 0.0
        z1 = z1[keep]
        z2 = z2[keep]
        r2 = r2[keep]
        contrib = omega_eval_np(omega, odd, z1, z2) / r2 * ff[keep]
        order = np.argsort(-r2, kind="stable")
        r2s = r2[order]
        acc = np.cumsum(contrib[order])
        last = np.concatenate([r2s[1:] != r2s[:-1], [True]])
        out[i] = mu * np.abs(acc[last]).max()
    return out.reshape(n1, n2)


@njit(cache=True)
def _tstar_2d_nb(f2, h1, h2, mu, omega, odd):
    n1, n2 = f2.shape
    m = n1 * n2
    out = np.empty((n1, n2))
    d2buf = np.empty(m)
    cbuf = np.empty(m)
    for i1 in range(n1):
        for i2 in range(n2):
            cnt = 0
            for j1 in range(n1):
                for j2 in range(n2):
                    if j1 == i1 and j2 == i2:
                        continue
                    z1 = (i1 - j1) * h1
                    z2 = (i2 - j2) * h2
                    r2 = z1 * z1 + z2 * z2
                    d2buf[cnt] = r2
                    cbuf[cnt] = (
                        _omega_eval_nb(omega, odd, z1, z2) / r2 * f2[j1, j2]
                    )
                    cnt += 1
            order = np.argsort(d2buf[:cnt])
            best = 0.0
            acc = 0.0
            k = cnt - 1
            while k >= 0:
                d = d2buf[order[k]]
                while k >= 0 and d2buf[order[k]] == d:
                    acc += cbuf[order[k]]
                    k -= 1
                a = abs(acc)
                if a > best:
                    best = a
            out[i1, i2] = best * mu
    return out


IMPLS = {
    "numpy": {
        "containing_max": _containing_max_np,
        "sharp_inners": _sharp_inners_np,
        "sharp_inners_median": _sharp_inners_median_np,
        "local_inners": _local_inners_np,
        "osc_inners": _osc_inners_np,
        "apply_trunc_1d": _apply_trunc_1d_np,
        "apply_trunc_2d": _apply_trunc_2d_np,
        "tstar_1d": _tstar_1d_np,
        "tstar_2d": _tstar_2d_np,
    }
}
if HAVE_NUMBA:
    IMPLS["numba"] = {
        "containing_max": _containing_max_nb,
        "sharp_inners": _sharp_inners_nb,
        "sharp_inners_median": _sharp_inners_median_nb,
        "local_inners": _local_inners_nb,
        "osc_inners": _osc_inners_nb,
        "apply_trunc_1d": _apply_trunc_1d_nb,
        "apply_trunc_2d": _apply_trunc_2d_nb,
        "tstar_1d": _tstar_1d_nb,
        "tstar_2d": _tstar_2d_nb,
    }

_active = IMPLS[BACKEND]
containing_max = _active["containing_max"]
sharp_inners = _active["sharp_inners"]
sharp_inners_median = _active["sharp_inners_median"]
local_inners = _active["local_inners"]
osc_inners = _active["osc_inners"]
apply_trunc_1d = _active["apply_trunc_1d"]
apply_trunc_2d = _active["apply_trunc_2d"]
tstar_1d = _active["tstar_1d"]
tstar_2d = _active["tstar_2d"]


def warmup():
    """Trigger jit compilation of the active backend on tiny inputs."""
    w = np.array([1.0, 2.0, 0.5])
    containing_max(w, 2, 4)
    wins = np.array([[0.0, 1.0, 2.0], [3.0, 1.0, 0.0]])
    sharp_inners(wins, 0.5, 4)
    sharp_inners_median(wins)
    local_inners(wins, 2)
    osc_inners(wins)
    f = np.array([1.0, -1.0, 2.0, 0.0])
    apply_trunc_1d(f, 0.5, 0.5, 1.0, -1.0, 0.25)
    tstar_1d(f, 0.5, 0.5, 1.0, -1.0)
    om = np.array([1.0, 0.5, -1.0, -0.5])
    f2 = np.arange(9.0).reshape(3, 3)
    apply_trunc_2d(f2, 0.5, 0.5, 0.25, om, True, 0.25)
    tstar_2d(f2, 0.5, 0.5, 0.25, om, True)
