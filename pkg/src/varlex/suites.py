"""Inequality suites and empirical-constant estimation.

Pass/fail checks are reserved for inequalities whose discrete form provably
holds (up to rounding slack) or whose both sides are computed exactly;
operator-norm estimates obtained by ascent are recorded, never asserted,
except under equal optimization budgets with explicit slack (the duality
transfer check).  Trials draw from resolution-independent profiles so the
grid-doubling stability studies track a fixed underlying function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import (
    Box,
    CubeWindow,
    GridFunction,
    WeightedMultiset,
    cell_measure,
    conjugate,
    make_log_holder_exponent,
    r_const,
)
from .families import (
    TestFunctionFamily,
    abs_profile,
    dyadic_martingale,
    log_spike,
    random_smooth,
)
from .lattice import AtomicSpace, LatticeNorm, operator_norm
from .maximal import MaximalConfig, bmo_norm, hl_maximal, local_sharp, sharp_delta
from .rearrange import (
    llogl_norm,
    llogl_norm_star_form,
    rearrangement,
    zygmund_holder_check,
)
from .report import ExperimentReport, make_environment
from .singular import (
    apply_pv,
    commutator_matrix,
    hilbert_kernel,
    operator_matrix,
    riesz_kernel,
)
from .varlp import (
    ball_maximizer,
    holder_pairing,
    luxemburg_atoms,
    luxemburg_norm,
    norm_equivalence_check,
    norming_functional,
)

__all__ = [
    "ExperimentConfig",
    "suite_pointwise",
    "estimate_lerner_constant",
    "estimate_perez_ratio",
    "estimate_commutator_norm",
    "duality_transfer_check",
    "cz_boundedness_suite",
]

_DEFAULT_TOLS = {
    "relation": 1e-9,
    "identity": 1e-12,
    "chebyshev": 1e-12,
    "equivalence": 1e-8,
    "holder": 1e-10,
    "zygmund": 1e-10,
    "llogl_forms": 1e-10,
    "symmetry": 1e-12,
    "transfer_slack": 0.05,
    "spectral": 1.05,
}


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    grid_sizes: tuple[int, ...] = (512, 1024)
    bounds: tuple[float, float] = (-2.0, 2.0)
    p_lo: float = 1.2
    p_hi: float = 4.0
    p_infinity: float = 2.0
    delta_values: tuple[float, ...] = (0.25, 0.5, 0.75)
    lambda_values: tuple[float, ...] = (0.1, 0.5, 0.9)
    lerner_lambda: float = 0.5
    perez_delta: float = 0.5
    trials: int = 200
    perez_trials: int = 6
    transfer_trials: int = 10
    commutator_profiles: int = 3
    kernel: str = "hilbert"
    restarts: int = 8
    ascent_iters: int = 25
    tolerances: dict = field(default_factory=dict)
    output_dir: str | None = None
    interior_margin: float = 0.1

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.grid_sizes)
        object.__setattr__(self, "grid_sizes", sizes)
        if not sizes or any(not _is_pow2(n) or not 32 <= n <= 16384 for n in sizes):
            raise ValueError("grid sizes must be powers of two in [2^5, 2^14]")
        for t in (
            self.trials,
            self.perez_trials,
            self.transfer_trials,
            self.commutator_profiles,
        ):
            if t < 1:
                raise ValueError("trial counts must be >= 1")
        if self.kernel not in ("hilbert", "riesz1", "riesz2"):
            raise ValueError("kernel must be hilbert|riesz1|riesz2")

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, _DEFAULT_TOLS[key])

    def box(self, n: int) -> Box:
        return Box.line(self.bounds[0], self.bounds[1], n)

    def window_cfg(self) -> MaximalConfig:
        # estimate suites run at sizes where the dyadic family keeps the
        # sharp-function scans desk-scale; both sides of every asserted
        # inequality share the family, so this is sound
        return MaximalConfig(side_mode="dyadic")

    def make_kernel(self):
        if self.kernel == "hilbert":
            return hilbert_kernel()
        return riesz_kernel(1 if self.kernel == "riesz1" else 2)

    def rng(self, *keys) -> np.random.Generator:
        return np.random.default_rng([self.seed, *(int(k) for k in keys)])


def _environment(cfg: ExperimentConfig, **extra) -> dict:
    return make_environment(
        cfg.seed,
        cfg.grid_sizes,
        _kernels.BACKEND,
        extra={"bounds": list(cfg.bounds), **extra},
    )


def _interior(n: int, margin: float) -> slice:
    k = int(n * margin)
    return slice(k, n - k if k else n)


def _mixed_profiles(cfg: ExperimentConfig, box: Box, count: int, salt: int):
    tags = ("random-smooth", "bump", "indicator")
    out = []
    for i in range(count):
        fam = TestFunctionFamily(tags[i % 3], (cfg.seed + 1) * 1000 + salt + i)
        out.append(fam.profiles(box, 1)[0])
    return out


def _bmo_profiles(cfg: ExperimentConfig, box: Box, count: int, salt: int):
    mid = 0.5 * (box.bounds[0][0] + box.bounds[0][1])
    out = [log_spike([mid + 0.03])]
    for i in range(count - 1):
        out.append(dyadic_martingale((cfg.seed + 1) * 77 + salt + i, box))
    return out


def _random_exponent(cfg: ExperimentConfig, box: Box, salt: int, modulus: float = 4.0):
    # norm inequalities hold for any admissible exponent, so checks that do
    # not involve the maximal operator may use a generous continuity budget
    # to exercise the full [p_lo, p_hi] range
    return make_log_holder_exponent(
        (cfg.seed + 1) * 31 + salt,
        box,
        cfg.p_lo,
        cfg.p_hi,
        cfg.p_infinity,
        modulus_bound=modulus,
    )


def _random_multiset(rng, max_atoms: int = 24) -> WeightedMultiset:
    n = int(rng.integers(2, max_atoms))
    return WeightedMultiset(rng.normal(0, 2, n), rng.uniform(0.1, 1.5, n))


# ---------------------------------------------------------------------------
# pointwise inequality suite
# ---------------------------------------------------------------------------


def suite_pointwise(cfg: ExperimentConfig) -> ExperimentReport:
    """Pointwise and norm inequalities: the local-sharp/sharp domination, the
    rearrangement identities, the two-norm equivalence chain, and both
    Hoelder inequalities, all pass/fail."""
    rep = ExperimentReport("pointwise", environment=_environment(cfg))
    n = cfg.grid_sizes[0]
    box = cfg.box(n)
    wcfg = cfg.window_cfg()

    # local sharp vs sharp-delta, every cell, all (delta, lambda) pairs
    rel_trials = max(1, min(cfg.trials, 200) // 10)
    profiles = _mixed_profiles(cfg, box, rel_trials, salt=11)
    worst = {
        (d, l): -math.inf for d in cfg.delta_values for l in cfg.lambda_values
    }
    for prof in profiles:
        f = prof.sample(box)
        sharps = {d: sharp_delta(f, d, wcfg).values for d in cfg.delta_values}
        locals_ = {l: local_sharp(f, l, wcfg).values for l in cfg.lambda_values}
        for d in cfg.delta_values:
            for l in cfg.lambda_values:
                defect = float(
                    (locals_[l] - (1.0 / l) ** (1.0 / d) * sharps[d]).max()
                )
                worst[(d, l)] = max(worst[(d, l)], defect)
    tol = cfg.tol("relation")
    for (d, l), defect in worst.items():
        rep.check(
            f"local-sharp-domination[d={d},l={l}]",
            "local-sharp-dominated-by-sharp",
            defect <= tol,
            lhs=defect,
            rhs=tol,
            tolerance=tol,
            grid=n,
        )

    # rearrangement identities on random multisets
    rng = cfg.rng(21)
    worst_pow = {d: 0.0 for d in (0.25, 0.5, 0.75, 2.0)}
    worst_cheb = -math.inf
    for _ in range(min(cfg.trials, 200)):
        ms = _random_multiset(rng)
        fs = rearrangement(ms)
        for d in worst_pow:
            pow_ms = WeightedMultiset(np.abs(ms.values) ** d, ms.measures)
            lhs_fs = rearrangement(pow_ms)
            diff = float(np.abs(lhs_fs.values - fs.values**d).max())
            diff = max(
                diff, float(np.abs(lhs_fs.breakpoints - fs.breakpoints).max())
            )
            worst_pow[d] = max(worst_pow[d], diff)
            total = fs.total_measure
            for lam in cfg.lambda_values:
                t0 = lam * total
                lhs = lhs_fs(t0)
                rhs = float((ms.measures * np.abs(ms.values) ** d).sum()) / t0
                worst_cheb = max(worst_cheb, lhs - rhs)
    for d, diff in worst_pow.items():
        rep.check(
            f"rearrangement-power-identity[d={d}]",
            "rearrangement-commutes-with-powers",
            diff <= cfg.tol("identity"),
            lhs=diff,
            rhs=cfg.tol("identity"),
            tolerance=cfg.tol("identity"),
            grid=n,
        )
    rep.check(
        "chebyshev-bound",
        "chebyshev-rearrangement-bound",
        worst_cheb <= cfg.tol("chebyshev"),
        lhs=worst_cheb,
        rhs=cfg.tol("chebyshev"),
        tolerance=cfg.tol("chebyshev"),
        grid=n,
    )

    # two-norm equivalence chain and the variable-exponent Hoelder inequality
    nb = min(n, 256)  # norm checks do not need fine grids
    nbox = cfg.box(nb)
    rng = cfg.rng(22)
    worst_lower = -math.inf
    worst_upper = -math.inf
    worst_holder = -math.inf
    for t in range(min(cfg.trials, 200)):
        f = GridFunction(nbox, rng.normal(0, 1, nb))
        g = GridFunction(nbox, rng.normal(0, 1, nb))
        p = _random_exponent(cfg, nbox, salt=t, modulus=25.0)
        lux, orl, rp = norm_equivalence_check(f, p)
        scale = max(lux, 1e-30)
        worst_lower = max(worst_lower, (lux - orl) / scale)
        worst_upper = max(worst_upper, (orl - rp * lux) / scale)
        lhs, rhs = holder_pairing(f, g, p)
        worst_holder = max(worst_holder, (lhs - rhs) / max(rhs, 1e-30))
    tol = cfg.tol("equivalence")
    rep.check(
        "equivalence-lower",
        "luxemburg-orlicz-equivalence",
        worst_lower <= tol,
        lhs=worst_lower,
        rhs=tol,
        tolerance=tol,
        grid=nb,
    )
    rep.check(
        "equivalence-upper",
        "luxemburg-orlicz-equivalence",
        worst_upper <= tol,
        lhs=worst_upper,
        rhs=tol,
        tolerance=tol,
        grid=nb,
    )
    rep.check(
        "holder-pairing",
        "variable-exponent-holder",
        worst_holder <= cfg.tol("holder"),
        lhs=worst_holder,
        rhs=cfg.tol("holder"),
        tolerance=cfg.tol("holder"),
        grid=nb,
    )

    # Zygmund-space Hoelder inequality and the two L log L formulas
    rng = cfg.rng(23)
    nz = min(n, 128)
    zbox = cfg.box(nz)
    worst_z = -math.inf
    worst_forms = 0.0
    for t in range(min(cfg.trials, 200)):
        side = int(rng.integers(2, nz + 1))
        start = int(rng.integers(0, nz - side + 1))
        win = CubeWindow(zbox, (start,), side)
        f = GridFunction(zbox, rng.normal(0, 1.5, nz))
        g = GridFunction(zbox, rng.normal(0, 1.5, nz))
        lhs, rhs = zygmund_holder_check(f, g, win)
        worst_z = max(worst_z, (lhs - rhs) / max(rhs, 1e-30))
        a = llogl_norm(f, win)
        b = llogl_norm_star_form(f, win)
        worst_forms = max(worst_forms, abs(a - b) / max(abs(a), 1e-30))
    rep.check(
        "zygmund-holder",
        "zygmund-holder",
        worst_z <= cfg.tol("zygmund"),
        lhs=worst_z,
        rhs=cfg.tol("zygmund"),
        tolerance=cfg.tol("zygmund"),
        grid=nz,
    )
    rep.check(
        "llogl-two-formulas",
        "llogl-norm-formulas-agree",
        worst_forms <= cfg.tol("llogl_forms"),
        lhs=worst_forms,
        rhs=cfg.tol("llogl_forms"),
        tolerance=cfg.tol("llogl_forms"),
        grid=nz,
    )
    return rep


# ---------------------------------------------------------------------------
# empirical-constant suites
# ---------------------------------------------------------------------------


def _lerner_hat(cfg: ExperimentConfig, n: int, rep: ExperimentReport) -> float:
    box = cfg.box(n)
    wcfg = cfg.window_cfg()
    kern = cfg.make_kernel()
    mu = cell_measure(box)
    lam = cfg.lerner_lambda
    base = _mixed_profiles(cfg, box, cfg.trials, salt=31)
    best = 0.0
    for t, prof in enumerate(base):
        f = prof.sample(box)
        phi = apply_pv(kern, f) if t % 2 == 0 else f
        g = random_smooth((cfg.seed + 1) * 500 + t, box).sample(box)
        rep.count_trial()
        num = float(np.abs(phi.values * g.values).sum() * mu)
        den = float(
            (local_sharp(phi, lam, wcfg).values * hl_maximal(g, wcfg).values).sum()
            * mu
        )
        if den <= 1e-14 * max(num, 1.0):
            rep.skip(total=0)
            continue
        best = max(best, num / den)
    return best


def estimate_lerner_constant(cfg: ExperimentConfig) -> ExperimentReport:
    """Empirical constant in the pairing bound by the local sharp and maximal
    functions; reported with its grid-doubling stability, never asserted."""
    rep = ExperimentReport(
        "lerner", environment=_environment(cfg, lerner_lambda=cfg.lerner_lambda)
    )
    hats = {}
    for n in cfg.grid_sizes[:2]:
        hats[n] = _lerner_hat(cfg, n, rep)
        rep.record(
            f"lerner-hat[N={n}]",
            "pairing-vs-local-sharp-times-maximal",
            lhs=hats[n],
            grid=n,
        )
    sizes = sorted(hats)
    rep.estimates["lerner_c_hat"] = hats[sizes[-1]]
    if len(sizes) > 1 and hats[sizes[0]] > 0:
        drift = abs(hats[sizes[1]] / hats[sizes[0]] - 1.0)
        rep.estimates["lerner_drift"] = drift
        rep.record(
            "lerner-refinement-drift",
            "pairing-vs-local-sharp-times-maximal",
            lhs=drift,
            rhs=0.1,
            ratio=drift / 0.1,
            grid=f"{sizes[0]}->{sizes[1]}",
        )
    rep.finalize_skips()
    return rep


def _perez_hats(cfg: ExperimentConfig, n: int, rep: ExperimentReport):
    box = cfg.box(n)
    wcfg = cfg.window_cfg()
    kern = cfg.make_kernel()
    delta = cfg.perez_delta
    if not (0.0 < delta < 1.0):
        raise ValueError("the sharp-function bounds need delta in (0, 1)")
    inner = _interior(n, cfg.interior_margin)
    bs = _bmo_profiles(cfg, box, 2, salt=41)
    fs = _mixed_profiles(cfg, box, cfg.perez_trials, salt=42)
    hat_comm = 0.0
    hat_sing = 0.0
    for t, prof in enumerate(fs):
        f = prof.sample(box)
        if not f.values.any():
            rep.skip()
            continue
        b = bs[t % len(bs)].sample(box)
        bnorm = bmo_norm(b, wcfg)
        if bnorm <= 1e-14:
            raise ValueError("multiplier with zero mean oscillation rejected")
        rep.count_trial()
        tf = apply_pv(kern, f)
        mtf = hl_maximal(tf, wcfg).values
        mf = hl_maximal(f, wcfg).values
        mmf = hl_maximal(GridFunction(box, mf), wcfg).values
        comm = GridFunction(
            box, b.values * tf.values - apply_pv(kern, f.with_values(b.values * f.values)).values
        )
        sharp_comm = sharp_delta(comm, delta, wcfg).values
        sharp_tf = sharp_delta(tf, delta, wcfg).values
        den1 = bnorm * (mtf + mmf)
        den2 = mf
        ok1 = den1[inner] > 1e-14
        ok2 = den2[inner] > 1e-14
        if ok1.any():
            hat_comm = max(
                hat_comm, float((sharp_comm[inner][ok1] / den1[inner][ok1]).max())
            )
        if ok2.any():
            hat_sing = max(
                hat_sing, float((sharp_tf[inner][ok2] / den2[inner][ok2]).max())
            )
    return hat_comm, hat_sing


def estimate_perez_ratio(cfg: ExperimentConfig) -> ExperimentReport:
    """Empirical constants in the sharp-function bounds for the transform and
    its commutator, with refinement stability across the configured sizes."""
    rep = ExperimentReport(
        "perez", environment=_environment(cfg, delta=cfg.perez_delta)
    )
    comm_hats = {}
    sing_hats = {}
    for n in cfg.grid_sizes:
        c, s = _perez_hats(cfg, n, rep)
        comm_hats[n] = c
        sing_hats[n] = s
        rep.record(
            f"commutator-sharp-hat[N={n}]",
            "commutator-sharp-function-bound",
            lhs=c,
            grid=n,
        )
        rep.record(
            f"transform-sharp-hat[N={n}]",
            "transform-sharp-function-bound",
            lhs=s,
            grid=n,
        )
    sizes = sorted(comm_hats)
    rep.estimates["c_delta_n_hat"] = comm_hats[sizes[-1]]
    rep.estimates["c_delta_n_singular_hat"] = sing_hats[sizes[-1]]
    drifts = []
    for a, b in zip(sizes, sizes[1:]):
        if comm_hats[a] > 0:
            drifts.append(abs(comm_hats[b] / comm_hats[a] - 1.0))
            rep.record(
                f"perez-drift[{a}->{b}]",
                "commutator-sharp-function-bound",
                lhs=drifts[-1],
                rhs=0.1,
                ratio=drifts[-1] / 0.1,
                grid=f"{a}->{b}",
            )
    if drifts:
        rep.estimates["perez_drift_max"] = max(drifts)
    rep.finalize_skips()
    return rep


def _variable_norm_ascent(mat, weights, p, starts, iters: int) -> float:
    """Lower bound for the operator norm on the variable-exponent space via a
    duality-map power iteration (two matvecs and two scalar solves per step)."""
    best = 0.0
    for f0 in starts:
        nf = luxemburg_atoms(f0, weights, p).value
        if nf == 0:
            continue
        f = f0 / nf
        for _ in range(iters):
            y = mat @ f
            ny = luxemburg_atoms(y, weights, p).value
            if ny == 0:
                break
            if ny > best:
                best = ny
            g = norming_functional(y, weights, p, ny)
            u = mat.T @ (weights * g) / weights
            gball, _, _ = ball_maximizer(np.abs(u), weights, p)
            f_new = np.sign(u) * gball
            nfn = luxemburg_atoms(f_new, weights, p).value
            if nfn == 0:
                break
            f = f_new / nfn
        y = mat @ f
        best = max(best, luxemburg_atoms(y, weights, p).value)
    return best


def _ascent_starts(cfg: ExperimentConfig, box: Box, n_random: int, salt: int):
    fam = TestFunctionFamily("adversarial-for-commutator", (cfg.seed + 1) * 9 + salt)
    starts = [f.values for f in fam.sample(box, 4)]
    rng = cfg.rng(90, salt)
    for _ in range(n_random):
        starts.append(rng.normal(0, 1, box.n_cells))
    return [s for s in starts if np.abs(s).max() > 0]


def _commutator_norm_estimate(
    cfg: ExperimentConfig, b: GridFunction, p_values, salt: int
) -> float:
    mat = commutator_matrix(b, cfg.make_kernel())
    w = np.full(b.values.size, cell_measure(b.box))
    starts = _ascent_starts(cfg, b.box, cfg.restarts, salt)
    return _variable_norm_ascent(mat, w, p_values, starts, cfg.ascent_iters)


def estimate_commutator_norm(cfg: ExperimentConfig) -> ExperimentReport:
    """Lower bounds for the commutator operator norm on the variable-exponent
    space, their ratio to the multiplier's mean-oscillation norm in both
    directions, linearity in the multiplier, and the growth contrast for
    non-BMO multipliers."""
    if not cfg.make_kernel().odd:
        raise ValueError("the commutator study needs an odd kernel")
    rep = ExperimentReport("commutator", environment=_environment(cfg))
    sizes = [n for n in cfg.grid_sizes if n <= 1024] or [cfg.grid_sizes[0]]
    wcfg = cfg.window_cfg()

    ratios_last = []
    stability = {}
    for n in sizes:
        box = cfg.box(n)
        p = _random_exponent(cfg, box, salt=5)
        profs = _bmo_profiles(cfg, box, cfg.commutator_profiles, salt=51)
        for j, prof in enumerate(profs):
            b = prof.sample(box)
            bnorm = bmo_norm(b, wcfg)
            if bnorm <= 1e-14:
                rep.skip()
                continue
            rep.count_trial()
            est = _commutator_norm_estimate(cfg, b, p.values, salt=j)
            ratio = est / bnorm
            rep.record(
                f"commutator-ratio[N={n},b={prof.name}]",
                "commutator-norm-vs-bmo",
                lhs=est,
                rhs=bnorm,
                ratio=ratio,
                grid=n,
            )
            if j == 0:
                stability[n] = ratio
            if n == sizes[-1]:
                ratios_last.append(ratio)

    if ratios_last:
        rep.estimates["crw_ratio_lo"] = min(ratios_last)
        rep.estimates["crw_ratio_hi"] = max(ratios_last)
    drifts = []
    ss = sorted(stability)
    for a, b_ in zip(ss, ss[1:]):
        if stability[a] > 0:
            drifts.append(abs(stability[b_] / stability[a] - 1.0))
            rep.record(
                f"commutator-ratio-drift[{a}->{b_}]",
                "commutator-norm-vs-bmo",
                lhs=drifts[-1],
                rhs=0.15,
                ratio=drifts[-1] / 0.15,
                grid=f"{a}->{b_}",
            )
    if drifts:
        rep.estimates["commutator_drift_max"] = max(drifts)

    # linearity in the multiplier: the estimate scales exactly with b
    n = sizes[0]
    box = cfg.box(n)
    p = _random_exponent(cfg, box, salt=5)
    b = _bmo_profiles(cfg, box, 1, salt=51)[0].sample(box)
    e1 = _commutator_norm_estimate(cfg, b, p.values, salt=0)
    e2 = _commutator_norm_estimate(cfg, b.with_values(2.0 * b.values), p.values, salt=0)
    rep.record(
        "multiplier-scaling",
        "commutator-linearity-in-multiplier",
        lhs=e2,
        rhs=2.0 * e1,
        ratio=e2 / (2.0 * e1) if e1 > 0 else None,
        grid=n,
    )

    # growth contrast: |x| is not BMO, so the estimate grows with the box
    growth = {}
    for scale in (1.0, 4.0):
        gbox = Box.line(cfg.bounds[0] * scale, cfg.bounds[1] * scale, n)
        gb = abs_profile().sample(gbox)
        gp = make_log_holder_exponent(
            cfg.seed + 313, gbox, cfg.p_lo, cfg.p_hi, cfg.p_infinity
        )
        mat = commutator_matrix(gb, cfg.make_kernel())
        w = np.full(n, cell_measure(gbox))
        starts = _ascent_starts(cfg, gbox, cfg.restarts, salt=7)
        growth[scale] = _variable_norm_ascent(
            mat, w, gp.values, starts, cfg.ascent_iters
        )
    factor = growth[4.0] / growth[1.0] if growth[1.0] > 0 else math.inf
    rep.estimates["non_bmo_growth_factor"] = factor
    rep.record(
        "non-bmo-growth",
        "non-bmo-multiplier-growth",
        lhs=growth[1.0],
        rhs=growth[4.0],
        ratio=factor,
        grid=n,
    )
    rep.finalize_skips()
    return rep


def duality_transfer_check(cfg: ExperimentConfig) -> ExperimentReport:
    """Exact transpose symmetry of the discrete commutator, plus the
    conjugate-exponent norm transfer under equal ascent budgets."""
    n = min(cfg.grid_sizes[0], 512)
    box = cfg.box(n)
    kern = cfg.make_kernel()
    if not kern.odd:
        raise ValueError("the transfer argument needs an odd kernel")
    rep = ExperimentReport("transfer", environment=_environment(cfg))
    w = np.full(n, cell_measure(box))
    wcfg = cfg.window_cfg()

    worst_sym = 0.0
    worst_transfer = -math.inf
    profs = _bmo_profiles(cfg, box, 2, salt=61)
    for t in range(cfg.transfer_trials):
        b = profs[t % len(profs)].sample(box)
        if bmo_norm(b, wcfg) <= 1e-14:
            rep.skip()
            continue
        rep.count_trial()
        p = _random_exponent(cfg, box, salt=100 + t)
        pc = conjugate(p)
        mat = commutator_matrix(b, kern)
        worst_sym = max(worst_sym, float(np.abs(mat - mat.T).max()))
        starts = _ascent_starts(cfg, box, cfg.restarts, salt=t)
        est_p = _variable_norm_ascent(mat, w, p.values, starts, cfg.ascent_iters)
        est_pc = _variable_norm_ascent(mat, w, pc.values, starts, cfg.ascent_iters)
        rp = r_const(p)
        if est_p > 0:
            worst_transfer = max(
                worst_transfer, est_pc / (rp * est_p) - 1.0
            )
    rep.check(
        "commutator-matrix-symmetry",
        "commutator-matrix-symmetry",
        worst_sym <= cfg.tol("symmetry"),
        lhs=worst_sym,
        rhs=cfg.tol("symmetry"),
        tolerance=cfg.tol("symmetry"),
        grid=n,
    )
    slack = cfg.tol("transfer_slack")
    rep.check(
        "conjugate-norm-transfer",
        "conjugate-exponent-norm-transfer",
        worst_transfer <= slack,
        lhs=worst_transfer,
        rhs=slack,
        tolerance=slack,
        grid=n,
    )

    # constant exponent 2 is self-conjugate: the transfer is trivially tight
    b = profs[0].sample(box)
    mat = commutator_matrix(b, kern)
    p2 = np.full(n, 2.0)
    starts = _ascent_starts(cfg, box, cfg.restarts, salt=99)
    e = _variable_norm_ascent(mat, w, p2, starts, cfg.ascent_iters)
    rep.record(
        "self-conjugate-tightness",
        "conjugate-exponent-norm-transfer",
        lhs=e,
        rhs=e,
        ratio=1.0,
        grid=n,
    )
    rep.finalize_skips()
    return rep


def cz_boundedness_suite(cfg: ExperimentConfig) -> ExperimentReport:
    """Transform pairing bound constant, variable-norm boundedness estimate
    with refinement stability, and the L2 contraction of the discretization."""
    rep = ExperimentReport("czbound", environment=_environment(cfg))
    kern = cfg.make_kernel()
    wcfg = cfg.window_cfg()

    hats = {}
    norm_hats = {}
    for n in cfg.grid_sizes[:2]:
        box = cfg.box(n)
        mu = cell_measure(box)
        fprofs = _mixed_profiles(cfg, box, cfg.trials, salt=71)
        best = 0.0
        best_norm = 0.0
        for t, prof in enumerate(fprofs):
            f = prof.sample(box)
            if not f.values.any():
                rep.skip()
                continue
            rep.count_trial()
            g = random_smooth((cfg.seed + 1) * 600 + t, box).sample(box)
            tf = apply_pv(kern, f)
            num = float(np.abs(tf.values * g.values).sum() * mu)
            den = float(
                (hl_maximal(f, wcfg).values * hl_maximal(g, wcfg).values).sum() * mu
            )
            if den > 1e-14:
                best = max(best, num / den)
            p = _random_exponent(cfg, box, salt=700 + t)
            nf = luxemburg_norm(f, p).value
            if nf > 0:
                best_norm = max(best_norm, luxemburg_norm(tf, p).value / nf)
        hats[n] = best
        norm_hats[n] = best_norm
        rep.record(
            f"pairing-hat[N={n}]", "transform-pairing-maximal-bound", lhs=best, grid=n
        )
        rep.record(
            f"norm-hat[N={n}]", "transform-variable-norm-bound", lhs=best_norm, grid=n
        )
    sizes = sorted(hats)
    rep.estimates["c_n_hat"] = hats[sizes[-1]]
    rep.estimates["t_norm_hat"] = norm_hats[sizes[-1]]
    if len(sizes) > 1 and hats[sizes[0]] > 0:
        drift = abs(hats[sizes[1]] / hats[sizes[0]] - 1.0)
        rep.estimates["cz_drift"] = drift
        rep.record(
            "pairing-hat-drift",
            "transform-pairing-maximal-bound",
            lhs=drift,
            rhs=0.1,
            ratio=drift / 0.1,
            grid=f"{sizes[0]}->{sizes[1]}",
        )

    # constant exponent 2: the discretization is an L2 contraction up to slack
    nspec = 256
    sbox = cfg.box(nspec)
    amat = operator_matrix(kern, sbox) if kern.dim == 1 else None
    if amat is not None:
        space = AtomicSpace(np.full(nspec, cell_measure(sbox)))
        spec, _ = operator_norm(amat, LatticeNorm.classic(space, 2.0))
        bound = cfg.tol("spectral")
        rep.check(
            "l2-spectral-norm",
            "l2-contraction-of-hilbert-discretization",
            spec <= bound,
            lhs=spec,
            rhs=bound,
            tolerance=bound,
            grid=nspec,
        )
    rep.finalize_skips()
    return rep
