"""Monte Carlo and numerical verification suites.

Each suite runs one experiment and returns a :class:`VerificationReport`;
with an ``output_path`` it also writes the raw data as CSV and the report as
JSON.  Replicas are drawn in fixed-size chunks, chunk ``c`` from
``state.split(c)``, and merged in chunk order, so the output depends only on
``(suite, N, reps, seed, params)`` and not on how chunks are scheduled
(``params["workers"] > 1`` runs chunks in a process pool).

Figure suites: F1, F3, F3a, F4, F2.5, F5, F3.1, F4.3, F4.4, F4.5.  The other
suites cover the remaining acceptance checks.
"""
from __future__ import annotations

import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate

from .. import ensembles as ens
from .. import planar, theory
from ..edge import crit_cdf, default_field, default_table, fredholm_f2w, pde_residual, tw_cdf
from ..randgen import RngState
from ..spectral import (
    eig_complex_dense,
    eig_hermitian_dense,
    first_component_product,
    largest_eigenvalues,
    overlaps_from_eigs,
    scattering_s,
    solve_secular_complex,
    SecularProblem,
)
from .report import ExperimentConfig, VerificationReport, emit
from .stats import ks_2samp, ks_test


class ResourceLimitExceeded(TimeoutError):
    """A suite ran past its wall-clock cap."""


@dataclass
class SuiteResult:
    statistic_name: str
    value: float
    threshold: float
    params: dict = field(default_factory=dict)
    data: object = None


@dataclass
class Suite:
    fn: Callable
    N: int
    reps: int
    params: dict
    summary: str


@dataclass
class _Ctx:
    name: str
    state: RngState
    N: int
    reps: int
    params: dict
    deadline: float

    def p(self, key: str) -> float:
        return self.params[key]

    def check(self) -> None:
        if time.perf_counter() > self.deadline:
            raise ResourceLimitExceeded(f"suite {self.name!r} exceeded its wall-clock cap")

    def replicas(self, fn: Callable, reps: int, chunk: int, stream: int = 0) -> np.ndarray:
        """Run ``fn(state, count)`` over chunks and concatenate in chunk order."""
        base = self.state.split(stream)
        counts = [min(chunk, reps - c * chunk) for c in range(math.ceil(reps / chunk))]
        states = [base.split(c) for c in range(len(counts))]
        workers = int(self.params.get("workers", 1))
        out = []
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                for r in ex.map(fn, states, counts):
                    out.append(r)
                    self.check()
        else:
            for s, n in zip(states, counts):
                out.append(fn(s, n))
                self.check()
        return np.concatenate(out)


SUITES: dict[str, Suite] = {}


def _register(name: str, N: int, reps: int, summary: str, **params):
    def deco(fn):
        SUITES[name] = Suite(fn, N, reps, params, summary)
        return fn
    return deco


def run_suite(name: str, cfg: ExperimentConfig | None = None) -> VerificationReport:
    """Run a suite.

    Parameters
    ----------
    name : str
        A key of :data:`SUITES`.
    cfg : ExperimentConfig, optional
        Overrides of ``N``, ``reps``, ``seed`` and suite parameters.  The
        parameter ``max_seconds`` (default 600) caps the wall-clock time.

    Raises
    ------
    KeyError
        Unknown suite.
    ResourceLimitExceeded
        The wall-clock cap was reached.
    """
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    cfg = cfg or ExperimentConfig(name)
    if cfg.suite != name:
        raise ValueError("cfg.suite does not match name")
    s = SUITES[name]
    params = dict(s.params)
    params.update(cfg.params)
    cap = params.pop("max_seconds", 600.0)
    t0 = time.perf_counter()
    ctx = _Ctx(name, RngState(cfg.seed, zlib.crc32(name.encode())), cfg.N or s.N, cfg.reps or s.reps,
               params, t0 + cap)
    res = s.fn(ctx)
    runtime = time.perf_counter() - t0
    rp = {"N": ctx.N, "reps": ctx.reps, "seed": cfg.seed}
    rp.update({k: v for k, v in params.items() if k != "workers"})
    rp.update(res.params)
    report = VerificationReport(name, rp, res.statistic_name, res.value, res.threshold, runtime)
    if cfg.output_path:
        out = Path(cfg.output_path)
        stem = out / name if out.is_dir() else out.with_suffix("")
        if res.data is not None:
            emit(res.data, "csv", stem.with_name(stem.name + ".csv"))
        emit(report, "json", stem.with_name(stem.name + ".json"))
    return report


# ------------------------------------------------------------------ chunk workers
# module level so that they pickle for the process pool

def _dense_largest(state, count, beta, N, alpha):
    H = ens.sample_gaussian_dense(state, beta, N, alpha, size=count)
    return np.array([eig_hermitian_dense(h, k=1).values[0] for h in H])


def _tridiag_largest(state, count, beta, N, alpha, truncate, leading=False):
    lead = None
    if truncate and leading:
        from ..spectral import truncation_size
        lead = truncation_size(N)
    T = ens.sample_tridiag(state, beta, N, alpha, size=count, leading=lead)
    return largest_eigenvalues(T.diag, T.offdiag, truncate=truncate and not leading)


def _tridiag_pair(state, count, beta, N, alpha):
    # full and truncated solves of the same matrices
    T = ens.sample_tridiag(state, beta, N, alpha, size=count)
    full = largest_eigenvalues(T.diag, T.offdiag)
    tr = largest_eigenvalues(T.diag, T.offdiag, truncate=True)
    return np.column_stack([full, tr])


def _dense_top_overlap(state, count, beta, N, alpha):
    out = np.empty((count, 2))
    for i in range(count):
        H = ens.sample_gaussian_dense(state, beta, N, alpha)
        s = eig_hermitian_dense(H, vectors=True, k=1)
        out[i] = s.values[0], abs(s.vectors[0, 0]) ** 2
    return out


def _wishart_top(state, count, n, N, b, dense, overlap):
    out = np.empty((count, 2))
    for i in range(count):
        if dense or overlap:
            X = ens.gaussian(state, "complex", (n, N))
            s = eig_hermitian_dense(ens.spiked_wishart_gram(X, b), vectors=overlap, k=1)
            out[i, 0] = s.values[0]
            out[i, 1] = abs(s.vectors[0, 0]) ** 2 if overlap else np.nan
        else:
            T = ens.sample_laguerre_bidiag(state, 2.0, n, N, b).gram()
            out[i] = largest_eigenvalues(T.diag[None], T.offdiag[None])[0], np.nan
    return out / np.array([n, 1.0])


def _wishart_secular(state, count, n, N, b):
    spec = ens.SpikedWishartSpec(n, N, b)
    return np.array([ens.sample_spiked_wishart_secular(state, spec).values for _ in range(count)])


def _wishart_dense_all(state, count, n, N, b):
    out = np.empty((count, N))
    for i in range(count):
        X = ens.gaussian(state, "complex", (n, N))
        out[i] = eig_hermitian_dense(ens.spiked_wishart_gram(X, b)).values
    return out


def _dyson_end(state, count, N, alpha, t, steps):
    out = np.empty((count, N + 1))
    for i in range(count):
        P, V = ens.dyson_paths(state, ens.DysonConfig(N, alpha, t, steps), vectors=True)
        out[i, :N] = P[-1]
        out[i, N] = ens.crossing_steps(V).size
    return out


def _antiherm_near_origin(state, count, N, alpha, k, drop_outlier):
    out = np.empty((count, k), dtype=complex)
    for i in range(count):
        z = ens.sample_antiherm_spectrum(state, N, alpha)
        if drop_outlier:
            # above alpha0 = 1 one eigenvalue leaves the bulk, with Re z near 0
            z = np.delete(z, np.argmax(z.imag))
        out[i] = z[np.argsort(np.abs(z.real))[:k]]
    return out


def _laurent_radii(state, count, mu, M, rcut):
    r = [np.abs(planar.laurent_zeros(state, mu, M, rcut).zeros) for _ in range(count)]
    return np.concatenate(r) if r else np.zeros(0)


def _uniform_outlier(state, count, N):
    out = np.empty((count, N), dtype=complex)
    for i in range(count):
        z = eig_complex_dense(ens.sample_iid_shifted(state, N)).values
        out[i] = z[np.argsort(-np.abs(z))]
    return out


def _tridiag2_eigs(state, count, alpha):
    from ..spectral import all_eigenvalues
    T = ens.sample_tridiag(state, 2.0, 2, alpha, size=count)
    return all_eigenvalues(T.diag, T.offdiag).ravel()


# ------------------------------------------------------------------ figure suites

@_register("F1", 100, 20, "uniform [0,1] entries scaled by sqrt(N/12): outlier near sqrt(3N), bulk in the unit disk",
           tol=1.0)
def _f1(ctx):
    N = ctx.N
    Z = ctx.replicas(partial(_uniform_outlier, N=N), ctx.reps, 5) / math.sqrt(N / 12.0)
    top = Z[:, 0]
    rest = np.abs(Z[:, 1:]).max(axis=1)
    target = math.sqrt(3.0 * N)
    return SuiteResult("abs_error", abs(top.real.mean() - target), ctx.p("tol"), {
        "mean_scaled_outlier": float(top.real.mean()), "target": target,
        "fraction_bulk_inside_1.1": float(np.mean(rest <= 1.1)), "max_bulk_modulus": float(rest.max()),
        "max_abs_imag_outlier": float(np.abs(top.imag).max())}, Z)


def _outlier_target(ctx):
    law = theory.BulkLaw.semicircle()
    pred = theory.outlier_prediction(law, ctx.p("alpha"))
    theo = pred.location if pred.location is not None else law.support[1]
    return theo, ctx.params.get("target", theo)


@_register("F3", 100, 200, "mean largest eigenvalue of the spiked GOE vs alpha + 1/(4 alpha)",
           alpha=1.5, tol=0.05, tridiag=0.0)
def _f3(ctx):
    a = ctx.p("alpha")
    if ctx.p("tridiag"):
        lam = ctx.replicas(partial(_tridiag_largest, beta=1.0, N=ctx.N, alpha=a, truncate=False), ctx.reps, 500)
    else:
        lam = ctx.replicas(partial(_dense_largest, beta=1, N=ctx.N, alpha=a), ctx.reps, 20)
    theo, target = _outlier_target(ctx)
    err = abs(lam.mean() - target)
    return SuiteResult("abs_error", err, ctx.p("tol"), {
        "mean_largest": float(lam.mean()), "prediction": theo, "target": target,
        "std_error": float(lam.std(ddof=1) / math.sqrt(lam.size))}, {"largest": lam})


@_register("F3a", 30, 5000, "Dyson heat-kernel endpoint at t=1/(2N) vs direct spiked GOE, two-sample KS",
           alpha=1.2, steps=20, direct_factor=10, tol=0.03)
def _f3a(ctx):
    N = ctx.N
    t = ctx.params.get("time", 1.0 / (2 * N))
    end = ctx.replicas(partial(_dyson_end, N=N, alpha=ctx.p("alpha"), t=t, steps=int(ctx.p("steps"))),
                       ctx.reps, 250)
    nd = int(ctx.p("direct_factor") * ctx.reps)
    direct = ctx.replicas(partial(_dense_largest, beta=1, N=N, alpha=ctx.p("alpha")), nd, 1000, stream=1)
    ks = ks_2samp(end[:, 0], direct)
    return SuiteResult("ks", ks, ctx.p("tol"), {
        "time": t, "direct_reps": nd, "paths_with_crossing_flags": int(np.count_nonzero(end[:, N])),
        "mean_endpoint": float(end[:, 0].mean()), "mean_direct": float(direct.mean())}, end[:, :N])


def _interlace_violation(prev: np.ndarray, new: np.ndarray) -> float:
    # W_n = W_{n-1} + v v^T: new_i >= prev_i >= new_{i+1}
    v1 = np.maximum(prev - new, 0.0)
    v2 = np.maximum(new[1:] - prev[:-1], 0.0)
    scale = max(np.abs(new).max(), 1.0)
    return float(max(v1.max(), v2.max() if v2.size else 0.0) / scale)


@_register("F4", 10, 100, "interlacing of W_n = sum v_j v_j^T for n = 1..steps", steps=15, tol=1e-9)
def _f4(ctx):
    N, steps = ctx.N, int(ctx.p("steps"))
    rows, worst = [], 0.0
    base = ctx.state.split(0)
    for r in range(ctx.reps):
        stream = ens.wishart_update_stream(base.split(r), N, steps)
        prev = np.zeros(N)
        for n, s in enumerate(stream, start=1):
            v = np.asarray(s.values)
            worst = max(worst, _interlace_violation(prev, v))
            prev = v
            rows.append(np.concatenate([[r, n], v]))
        ctx.check()
    R = np.array(rows)
    data = {"rep": R[:, 0], "n": R[:, 1]}
    data.update({f"x_{j + 1}": R[:, 2 + j] for j in range(N)})
    return SuiteResult("max_residual", worst, ctx.p("tol"), {"steps": steps}, data)


def _scaled_edge(lam, N):
    return 2.0 * N ** (2.0 / 3.0) * (lam - 1.0)


def _clip_cdf(f, lo, hi):
    return lambda x: f(np.clip(x, lo, hi))


@_register("F2.5", 10_000, 20_000, "beta=1 truncated tridiagonal at alpha=1/2 against the alpha=0 Tracy-Widom curve",
           alpha=0.5, tol=0.02)
def _f25(ctx):
    N = ctx.N
    tab = default_table()
    tw1 = _clip_cdf(lambda x: tw_cdf(1, x, tab), tab.s_grid[0], tab.s_grid[-1])
    crit = _scaled_edge(ctx.replicas(partial(_tridiag_largest, beta=1.0, N=N, alpha=ctx.p("alpha"),
                                             truncate=True, leading=True), ctx.reps, 2000), N)
    ref = _scaled_edge(ctx.replicas(partial(_tridiag_largest, beta=1.0, N=N, alpha=0.0, truncate=True,
                                            leading=True), ctx.reps, 2000, stream=1), N)
    ks0 = ks_test(ref, tw1)
    return SuiteResult("ks", ks0, ctx.p("tol"), {
        "w": N ** (1 / 3) * (1 - 2 * ctx.p("alpha")), "ks_alpha0_vs_tw1": ks0,
        "ks_critical_vs_tw1": ks_test(crit, tw1), "mean_critical": float(crit.mean()),
        "mean_alpha0": float(ref.mean())}, {"x_critical": crit, "x_alpha0": ref})


@_register("F5", 10_000, 20_000, "beta=2 truncated tridiagonal at alpha=1/2 vs F_{2,w}",
           alpha=0.5, tol=0.02, truncate=1.0)
def _f5(ctx):
    N = ctx.N
    w = N ** (1 / 3) * (1 - 2 * ctx.p("alpha"))
    fld = default_field()
    cdf = _clip_cdf(lambda x: crit_cdf(2, w, x, fld), fld.s_grid[0], fld.s_grid[-1])
    trunc = bool(ctx.p("truncate"))
    x = _scaled_edge(ctx.replicas(partial(_tridiag_largest, beta=2.0, N=N, alpha=ctx.p("alpha"),
                                          truncate=trunc, leading=trunc), ctx.reps, 2000), N)
    tab = default_table()
    ks = ks_test(x, cdf)
    return SuiteResult("ks", ks, ctx.p("tol"), {
        "w": w, "ks_vs_tw2": ks_test(x, _clip_cdf(lambda s: tw_cdf(2, s, tab), -12.0, 8.0))}, {"x": x})


@_register("F3.1", 200, 100, "spiked complex Wishart n x N: mean largest eigenvalue / n vs b(1 + 1/(gamma(b-1)))",
           n=400, b=3.0, tol=0.05, dense=0.0)
def _f31(ctx):
    n, N, b = int(ctx.p("n")), ctx.N, ctx.p("b")
    gam = n / N
    law = theory.BulkLaw.marchenko_pastur(gam)
    pred = theory.outlier_prediction(law, b)
    theo = pred.location if pred.location is not None else law.support[1] / gam
    target = ctx.params.get("target", theo)
    top = ctx.replicas(partial(_wishart_top, n=n, N=N, b=b, dense=bool(ctx.p("dense")), overlap=False),
                       ctx.reps, 25)[:, 0]
    return SuiteResult("abs_error", abs(top.mean() - target), ctx.p("tol"), {
        "gamma": gam, "threshold": pred.threshold, "prediction": theo, "target": target,
        "mean_largest_over_n": float(top.mean()),
        "std_error": float(top.std(ddof=1) / math.sqrt(top.size))}, {"largest_over_n": top})


def _rho_cdf(g: float):
    Y = np.linspace(0.0, 60.0 / (g - 1.0), 60001)
    F = integrate.cumulative_simpson(planar.rho_profile(g, Y), x=Y, initial=0.0)
    F = np.maximum.accumulate(F / F[-1])
    return lambda y: np.interp(y, Y, F, left=0.0, right=1.0)


@_register("F4.3", 200, 5000, "scaled imaginary parts of the 8 eigenvalues nearest the origin vs the profile",
           alpha0=2.0, k=8, tol=0.03, drop_outlier=1.0)
def _f43(ctx):
    N, a0 = ctx.N, ctx.p("alpha0")
    alpha = math.sqrt(N / 2.0) * a0
    drop = bool(ctx.p("drop_outlier")) and a0 > 1
    Z = ctx.replicas(partial(_antiherm_near_origin, N=N, alpha=alpha, k=int(ctx.p("k")), drop_outlier=drop),
                     ctx.reps, 250)
    Y = (Z.imag * math.sqrt(2.0 * N)).ravel()
    g_half = 0.5 * (a0 + 1.0 / a0)
    g_full = a0 + 1.0 / a0
    ks_half = ks_test(Y, _rho_cdf(g_half))
    ks_full = ks_test(Y, _rho_cdf(g_full))
    sel = g_half if ks_half <= ks_full else g_full
    return SuiteResult("ks", min(ks_half, ks_full), ctx.p("tol"), {
        "alpha": alpha, "g_half": g_half, "ks_g_half": ks_half, "g_full": g_full, "ks_g_full": ks_full,
        "g_selected": sel, "outlier_dropped": float(drop)}, Z)


def _sweep_suite(ctx, model, grid, identity):
    tab = planar.parameter_sweep(ctx.state.split(0), model, grid, ctx.N)
    err = max(identity(g, row) for g, row in zip(tab.grid, tab.values))
    head, rows = tab.columns()
    return SuiteResult("max_residual", err, ctx.p("tol"), {
        "flagged_rows": int(tab.flags.sum()), "grid_points": int(tab.grid.size)},
        {h: rows[:, j] for j, h in enumerate(head)})


@_register("F4.4", 100, 1, "alpha sweep of GUE + i alpha e1 e1^H: sum of imaginary parts equals alpha",
           lo=0.0, hi=1.5, step=1 / 60, tol=1e-9)
def _f44(ctx):
    grid = np.arange(ctx.p("lo"), ctx.p("hi") + 0.5 * ctx.p("step"), ctx.p("step"))
    return _sweep_suite(ctx, "antiherm", grid, lambda a, z: abs(z.imag.sum() - a))


@_register("F4.5", 100, 1, "a sweep of U diag(a, 1, ..., 1): product of moduli equals |a|",
           lo=1.0, hi=0.0, step=-0.01, tol=1e-9)
def _f45(ctx):
    n = int(round((ctx.p("hi") - ctx.p("lo")) / ctx.p("step")))
    grid = ctx.p("lo") + ctx.p("step") * np.arange(n + 1)
    return _sweep_suite(ctx, "subunitary", grid, lambda a, z: abs(np.prod(np.abs(z)) - abs(a)))


# ------------------------------------------------------------------ acceptance suites

@_register("overlap-goe", 400, 200, "squared overlap of the top eigenvector with e1, spiked GOE",
           alpha=2.0, tol=0.03, selfconsistent=0.0)
def _overlap_goe(ctx):
    a = ctx.p("alpha")
    X = ctx.replicas(partial(_dense_top_overlap, beta=1, N=ctx.N, alpha=a), ctx.reps, 20)
    pred = theory.outlier_prediction(theory.BulkLaw.semicircle(), a)
    target = pred.overlap_selfconsistent if ctx.p("selfconsistent") else pred.overlap
    target = ctx.params.get("target", target)
    m = float(X[:, 1].mean())
    return SuiteResult("abs_error", abs(m - target), ctx.p("tol"), {
        "mean_overlap": m, "target": target, "overlap_as_printed": pred.overlap,
        "overlap_selfconsistent": pred.overlap_selfconsistent,
        "stieltjes_overlap": theory.overlap_from_stieltjes(theory.BulkLaw.semicircle(), a)},
        {"largest": X[:, 0], "overlap": X[:, 1]})


@_register("overlap-wishart", 200, 200, "squared overlap of the top eigenvector with the spike, complex Wishart",
           n=400, b=3.0, tol=0.05, selfconsistent=0.0)
def _overlap_wishart(ctx):
    n, N, b = int(ctx.p("n")), ctx.N, ctx.p("b")
    X = ctx.replicas(partial(_wishart_top, n=n, N=N, b=b, dense=True, overlap=True), ctx.reps, 20)
    pred = theory.outlier_prediction(theory.BulkLaw.marchenko_pastur(n / N), b)
    target = pred.overlap_selfconsistent if ctx.p("selfconsistent") else pred.overlap
    target = ctx.params.get("target", target)
    m = float(X[:, 1].mean())
    return SuiteResult("abs_error", abs(m - target), ctx.p("tol"), {
        "gamma": n / N, "mean_overlap": m, "target": target, "overlap_as_printed": pred.overlap,
        "overlap_selfconsistent": pred.overlap_selfconsistent},
        {"largest_over_n": X[:, 0], "overlap": X[:, 1]})


@_register("c1b-identity", 1, 1, "F_{2,0}(s) against E_1(s)^2 on [-6, 3]", lo=-6.0, hi=3.0, h=0.01, tol=1e-6)
def _c1b(ctx):
    s = np.arange(ctx.p("lo"), ctx.p("hi") + 0.5 * ctx.p("h"), ctx.p("h"))
    tab = default_table()
    fld = default_field()
    t1 = time.perf_counter()
    a = crit_cdf(2, 0.0, s, fld)
    b = tw_cdf(1, s, tab) ** 2
    dt = time.perf_counter() - t1
    return SuiteResult("max_residual", float(np.abs(a - b).max()), ctx.p("tol"),
                       {"evaluation_seconds": dt}, {"s": s, "crit_cdf": a, "tw1_squared": b})


@_register("cross-method", 1, 1, "Nystrom Fredholm determinant vs Lax-pair F_{2,w}", tol=1e-3)
def _cross(ctx):
    fld = default_field()
    rows = []
    for w in (0.0, 0.5, 1.0, 2.0):
        for s in np.arange(-6.0, 2.0 + 1e-9, 0.5):
            rows.append((w, s, fredholm_f2w(w, s), crit_cdf(2, w, s, fld)))
        ctx.check()
    R = np.array(rows)
    return SuiteResult("max_residual", float(np.abs(R[:, 2] - R[:, 3]).max()), ctx.p("tol"), {},
                       {"w": R[:, 0], "s": R[:, 1], "fredholm": R[:, 2], "lax": R[:, 3]})


@_register("pde-hard", 1, 1, "hard-edge PDE residual on the closed form at a=0 (analytic derivatives)", tol=1e-10)
def _pde_hard(ctx):
    x = np.linspace(0.0, 5.0, 51)
    c = np.linspace(0.2, 5.0, 49)
    X, C = np.meshgrid(x, c, indexing="ij")
    worst, fd = 0.0, 0.0
    for beta in (1.0, 2.0, 4.0):
        d = theory.hard_edge_gap_a0_derivatives(beta, C, X)
        r = pde_residual("hard", d["F"], x, c, beta=beta, a=0.0,
                         derivatives={"Fx": d["Fx"], "Fy": d["Fc"], "Fyy": d["Fcc"]})
        worst = max(worst, r)
        fd = max(fd, pde_residual("hard", d["F"], x, c, beta=beta, a=0.0))
    return SuiteResult("max_residual", worst, ctx.p("tol"), {"finite_difference_residual": fd})


@_register("pde-soft", 1, 1, "soft-edge PDE residual of F_{2,w} by finite differences", h=0.01, tol=1e-3)
def _pde_soft(ctx):
    h = ctx.p("h")
    s = np.arange(-6.0, 2.0 + 0.5 * h, h)
    w = np.arange(0.2, 3.0 + 0.5 * h, h)
    fld = default_field()
    F = fld._spl[2](s, w)
    return SuiteResult("max_residual", pde_residual("soft", F, s, w, beta=2.0), ctx.p("tol"), {})


@_register("truncation", 10_000, 10_000, "largest eigenvalue: truncated leading block vs full tridiagonal",
           beta=2.0, alpha=0.5, tol=0.02)
def _truncation(ctx):
    N, b, a = ctx.N, ctx.p("beta"), ctx.p("alpha")
    pair = ctx.replicas(partial(_tridiag_pair, beta=b, N=N, alpha=a), ctx.reps, 250)
    tr = ctx.replicas(partial(_tridiag_largest, beta=b, N=N, alpha=a, truncate=True, leading=True),
                      ctx.reps, 2000, stream=1)
    full = pair[:, 0]
    ks = ks_2samp(_scaled_edge(tr, N), _scaled_edge(full, N))
    return SuiteResult("ks", ks, ctx.p("tol"), {
        "max_paired_scaled_difference": float(np.abs(_scaled_edge(pair[:, 1], N) - _scaled_edge(full, N)).max())},
        {"full": full, "truncated_same_matrix": pair[:, 1], "truncated_independent": tr})


@_register("tridiag-dense", 8, 10_000, "largest eigenvalue: tridiagonal model vs dense GOE, two-sample KS",
           beta=1.0, alpha=1.0, tol=0.03)
def _tridiag_dense(ctx):
    N, a = ctx.N, ctx.p("alpha")
    t = ctx.replicas(partial(_tridiag_largest, beta=ctx.p("beta"), N=N, alpha=a, truncate=False), ctx.reps, 2000)
    d = ctx.replicas(partial(_dense_largest, beta=int(ctx.p("beta")), N=N, alpha=a), ctx.reps, 1000, stream=1)
    return SuiteResult("ks", ks_2samp(t, d), ctx.p("tol"), {}, {"tridiag": t, "dense": d})


@_register("secular-wishart", 20, 10_000, "spiked Wishart: secular-equation route vs dense, per order statistic",
           n=30, b=2.0, tol=0.03)
def _secular_wishart(ctx):
    n, N, b = int(ctx.p("n")), ctx.N, ctx.p("b")
    A = ctx.replicas(partial(_wishart_secular, n=n, N=N, b=b), ctx.reps, 500)
    B = ctx.replicas(partial(_wishart_dense_all, n=n, N=N, b=b), ctx.reps, 500, stream=1)
    ks = [ks_2samp(A[:, j], B[:, j]) for j in range(N)]
    j = int(np.argmax(ks))
    return SuiteResult("ks", ks[j], ctx.p("tol"), {"worst_order_statistic": j + 1}, A)


def _identity_residuals(state: RngState, reps: int) -> dict:
    g = state.generator
    out = {k: 0.0 for k in ("sum_rule", "subunitary_det", "interlacing", "scattering", "overlap_sc3",
                            "first_component", "hciz_ratio")}
    for r in range(reps):
        st = state.split(r)
        alpha = 0.5 + 2.0 * g.random()
        z = ens.sample_antiherm_spectrum(st, 50, alpha)
        out["sum_rule"] = max(out["sum_rule"], abs(z.imag.sum() - alpha))
        a = 0.2 + 0.6 * g.random()
        zu = eig_complex_dense(ens.sample_subunitary(st, 20, a)).values
        out["subunitary_det"] = max(out["subunitary_det"], abs(np.prod(np.abs(zu)) - a))
        prev = np.zeros(10)
        for s in ens.wishart_update_stream(st, 10, 15):
            out["interlacing"] = max(out["interlacing"], _interlace_violation(prev, np.asarray(s.values)))
            prev = np.asarray(s.values)
        # scattering matrix, two forms
        A = ens.gaussian_hermitian(st, 20, 2, variance=0.5)
        sp = eig_hermitian_dense(A, vectors=True)
        v = sp.vectors[0, :]
        E = 3.0 * (2 * g.random() - 1) + 0.1j * g.random()
        f1, f2 = scattering_s(E, alpha, sp.values, v)
        out["scattering"] = max(out["scattering"], abs(f1 - f2) / abs(f1))
        # overlaps from eigenvalues vs bi-orthogonal eigenvectors
        M = A.astype(complex)
        M[0, 0] += 1j * alpha
        zs = solve_secular_complex(SecularProblem(sp.values, np.abs(v) ** 2, alpha)).values
        O = overlaps_from_eigs(zs).diagonal
        ev = eig_complex_dense(M, vectors=True)
        Od = np.sum(np.abs(ev.left) ** 2, axis=0) * np.sum(np.abs(ev.right) ** 2, axis=0)
        order = [int(np.argmin(np.abs(ev.values - zz))) for zz in zs]
        out["overlap_sc3"] = max(out["overlap_sc3"], float(np.max(np.abs(O - Od[order]) / Od[order])))
        # first components from two spectra
        H = ens.gaussian_hermitian(st, 50, 2)
        H[0, 0] += 3.0
        full = eig_hermitian_dense(H, vectors=True)
        minor = eig_hermitian_dense(H[1:, 1:]).values
        x2 = first_component_product(full.values, minor)
        out["first_component"] = max(out["first_component"], float(np.abs(x2 - np.abs(full.vectors[0]) ** 2).max()))
        # HCIZ ratio constancy over random (a, b)
        ratios = []
        for _ in range(20):
            av = np.sort(g.uniform(-1.5, 1.5, 5))
            c = theory.hciz_rank1_check(av, g.uniform(0.3, 2.0))
            ratios.append(c.det_form / c.residue_form)
        ratios = np.array(ratios)
        out["hciz_ratio"] = max(out["hciz_ratio"], float(np.ptp(ratios) / np.abs(ratios).mean()))
    return out


IDENTITY_TOLERANCES = {"sum_rule": 1e-9, "subunitary_det": 1e-9, "interlacing": 1e-9, "scattering": 1e-9,
                       "overlap_sc3": 1e-7, "first_component": 1e-8, "hciz_ratio": 1e-8}


@_register("identities", 1, 20, "exact per-sample identities; statistic is max residual / tolerance", tol=1.0)
def _identities(ctx):
    res = _identity_residuals(ctx.state.split(0), ctx.reps)
    ratio = max(res[k] / IDENTITY_TOLERANCES[k] for k in res)
    params = {f"residual_{k}": v for k, v in res.items()}
    params.update({f"tolerance_{k}": v for k, v in IDENTITY_TOLERANCES.items()})
    return SuiteResult("max_residual", ratio, ctx.p("tol"), params,
                       {"identity": np.arange(len(res)), "residual": np.array(list(res.values()))})


def reproducing_integral(g: float, Z1: complex, Z3: complex, L: float = 600.0) -> complex:
    """``int dX2 int_0^inf dY2 K(Z1, Z2) K(Z2, Z3)`` with the normalized kernel.

    Gauss-Legendre on ``|X2| <= L`` (panels of width 2) and ``0 <= Y2 <= Ymax``;
    the ``|X2| > L`` part uses the leading ``1/X2^2`` behaviour of the product,
    integrated in closed form, leaving an ``O(L^-2)`` error.
    """
    ymax = 40.0 / (g - 1.0)
    xg, wg = np.polynomial.legendre.leggauss(16)
    nx = int(L)
    xe = np.linspace(-L, L, nx + 1)
    X = (0.5 * (xe[1:] + xe[:-1])[:, None] + 0.5 * np.diff(xe)[:, None] * xg[None, :]).ravel()
    WX = np.repeat(0.5 * np.diff(xe), 16) * np.tile(wg, nx)
    ny = int(math.ceil(ymax))
    ye = np.linspace(0.0, ymax, ny + 1)
    Yn = (0.5 * (ye[1:] + ye[:-1])[:, None] + 0.5 * np.diff(ye)[:, None] * xg[None, :]).ravel()
    WY = np.repeat(0.5 * np.diff(ye), 16) * np.tile(wg, ny)
    total = 0.0j
    for y, wy in zip(Yn, WY):
        Z2 = X + 1j * y
        k12 = planar.kernel_planar(g, Z1, Z2, normalized=True)
        k23 = planar.kernel_planar(g, Z2, Z3, normalized=True)
        inner = np.sum(WX * k12 * k23)
        # tail: K K ~ -exp(-g(Y1 + 2y + Y3)) [(g+1)^2 e^{i(Z1 - conj Z3)} e^{-2y}
        #        + (g-1)^2 e^{-i(Z1 - conj Z3)} e^{2y}] / (pi^2 a b)
        c1 = Z1.real + 1j * (Z1.imag + y)
        c3 = Z3.real - 1j * (y + Z3.imag)
        d = Z1 - np.conj(Z3)
        amp = -math.exp(-g * (Z1.imag + 2 * y + Z3.imag)) * (
            (g + 1) ** 2 * np.exp(1j * d) * math.exp(-2 * y) + (g - 1) ** 2 * np.exp(-1j * d) * math.exp(2 * y))
        tail = (np.log((L - c1) / (L - c3)) + np.log((L + c3) / (L + c1))) / (c1 - c3)
        total += wy * (inner + amp * tail / np.pi ** 2)
    return complex(total)


@_register("planar-kernel", 1, 1, "kernel reproducing property and profile normalization",
           g=1.25, tol=1.0)
def _planar_kernel(ctx):
    g = ctx.p("g")
    pts = [(0.3j, 0.3j), (0.2 + 0.1j, -0.5 + 0.7j), (1.0 + 0.4j, 0.0 + 0.2j)]
    rep = 0.0
    for Z1, Z3 in pts:
        lhs = reproducing_integral(g, Z1, Z3)
        rhs = complex(planar.kernel_planar(g, Z1, Z3, normalized=True))
        rep = max(rep, abs(lhs - rhs) / abs(rhs))
        ctx.check()
    norms = [abs(integrate.quad(lambda y: planar.rho_profile(gg, y), 0, np.inf, epsabs=1e-13, epsrel=1e-12)[0] - 1)
             for gg in (1.25, 2.5)]
    norm = max(norms)
    return SuiteResult("max_residual", max(rep / 1e-6, norm / 1e-8), ctx.p("tol"), {
        "reproducing_relative_error": rep, "normalization_error": norm})


def _radial_mass(mu, r):
    # integral of 2 pi r rho(r) from 0 to each r
    rr = np.linspace(1e-6, r.max(), 4001)
    dens = np.array([planar.cue_density("scaled", [v], mu=mu) for v in rr])
    M = integrate.cumulative_simpson(2 * np.pi * rr * dens, x=rr, initial=0.0)
    return np.interp(r, rr, M)


@_register("laurent", 1, 10_000, "radial zero density of the random Laurent series vs the scaled CUE density",
           mu=1.0, M=300, radius_cut=0.9, bins=10, tol=0.05)
def _laurent(ctx):
    mu, M, rc = ctx.p("mu"), int(ctx.p("M")), ctx.p("radius_cut")
    r = ctx.replicas(partial(_laurent_radii, mu=mu, M=M, rcut=rc), ctx.reps, 250)
    # bins of equal expected count
    grid = np.linspace(0.0, rc, 2001)
    mass = _radial_mass(mu, grid)
    nb = int(ctx.p("bins"))
    edges = np.interp(np.linspace(0, mass[-1], nb + 1), mass, grid)
    edges[0], edges[-1] = 0.0, rc
    counts, _ = np.histogram(r, bins=edges)
    expected = ctx.reps * np.diff(_radial_mass(mu, edges))
    rel = np.abs(counts / expected - 1.0)
    return SuiteResult("abs_error", float(rel.max()), ctx.p("tol"), {
        "expected_per_bin": float(expected.mean()), "total_zeros": int(r.size)},
        {"r_lo": edges[:-1], "r_hi": edges[1:], "count": counts, "expected": expected})


def overlap_tail_checks() -> dict:
    """Tail plateau of ``t^3 P(t)`` and the first-moment identity."""
    out = {}
    for g, Y in ((1.25, 0.3), (2.5, 0.5)):
        a, b = (1e3) ** 3 * planar.overlap_pdf(g, Y, 1e3), (1e4) ** 3 * planar.overlap_pdf(g, Y, 1e4)
        out[f"plateau_{g}_{Y}"] = abs(a / b - 1.0)
        T = 1e4
        f = lambda t: (1 + t) * planar.overlap_pdf(g, Y, t)
        I = integrate.quad(f, 0, 1, limit=400)[0] + integrate.quad(f, 1, T, limit=400)[0]
        I += b * (1 / T + 1 / (2 * T * T))
        m = float(planar.mean_overlap(g, Y))
        out[f"moment_{g}_{Y}"] = abs(I / m - 1.0)
    return out


@_register("overlap-tail", 1, 1, "overlap distribution: 1/t^3 tail and first moment; statistic is error / tolerance",
           tol=1.0)
def _overlap_tail(ctx):
    res = overlap_tail_checks()
    ratio = max(v / (0.01 if k.startswith("plateau") else 0.02) for k, v in res.items())
    return SuiteResult("max_residual", ratio, ctx.p("tol"), res)


@_register("jointpdf", 2, 1_000_000, "beta=2, N=2: one-point density from the joint PDF vs histogram",
           alpha=0.3, bins=120, tol=0.05)
def _jointpdf(ctx):
    a = ctx.p("alpha")
    lam = ctx.replicas(partial(_tridiag2_eigs, alpha=a), ctx.reps, 100_000)
    lo, hi = -1.8, 2.0
    nb = int(ctx.p("bins"))
    counts, edges = np.histogram(lam, bins=nb, range=(lo, hi))
    hist = counts / (lam.size * np.diff(edges))

    def marg(x):
        f = lambda y: theory.jointpdf_beta2([x, y], a, 2)
        return sum(integrate.quad(f, p, q, epsabs=1e-14, epsrel=1e-10, limit=200)[0]
                   for p, q in ((-6.0, x), (x, 6.0)))
    Z = integrate.quad(marg, -6.0, 6.0, epsabs=1e-13, epsrel=1e-9, limit=200)[0]
    # bin averages of the theory density (3-point Gauss per bin)
    gx, gw = np.polynomial.legendre.leggauss(3)
    th = np.array([sum(0.5 * wv * marg(0.5 * (p + q) + 0.5 * (q - p) * xv) for xv, wv in zip(gx, gw))
                   for p, q in zip(edges[:-1], edges[1:])]) / Z
    sup = float(np.abs(hist - th).max() / th.max())
    return SuiteResult("abs_error", sup, ctx.p("tol"), {"normalization": Z, "out_of_range_fraction": float(
        1 - counts.sum() / lam.size)}, {"bin_lo": edges[:-1], "bin_hi": edges[1:], "hist": hist, "theory": th})
