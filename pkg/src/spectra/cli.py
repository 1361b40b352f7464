"""Command line interface: ``spectra sample | theory | verify | sweep``.

The exit status is 0 iff every verification report produced passes; commands
that produce no report exit 0 on success.  Invalid input exits with 2.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import ensembles as ens
from . import planar, theory
from .randgen import RngState
from .spectral import all_eigenvalues, eig_complex_dense, eig_hermitian_dense

ENSEMBLES = ("gaussian", "tridiag", "laguerre", "wishart", "antiherm", "subunitary", "uniform", "laurent")
QUANTITIES = ("outlier", "stieltjes", "bulk-density", "tw-cdf", "crit-cdf", "fredholm", "hard-edge-gap",
              "rho-profile", "mean-overlap", "overlap-pdf", "cue-density")


def _kv(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        k, sep, v = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        out[k.strip()] = float(v)
    return out


def _sample_one(args, st: RngState):
    e, N = args.ensemble, args.n
    if e == "gaussian":
        return eig_hermitian_dense(ens.sample_gaussian_dense(st, int(args.beta), N, args.alpha)).values
    if e == "tridiag":
        T = ens.sample_tridiag(st, args.beta, N, args.alpha)
        return all_eigenvalues(T.diag, T.offdiag)[0]
    if e == "laguerre":
        T = ens.sample_laguerre_bidiag(st, args.beta, args.m, N, args.b).gram()
        return all_eigenvalues(T.diag, T.offdiag)[0]
    if e == "wishart":
        return ens.sample_spiked_wishart_secular(st, ens.SpikedWishartSpec(args.m, N, args.b)).values
    if e == "antiherm":
        return ens.sample_antiherm_spectrum(st, N, args.alpha)
    if e == "subunitary":
        return eig_complex_dense(ens.sample_subunitary(st, N, args.a)).values
    if e == "uniform":
        return eig_complex_dense(ens.sample_iid_shifted(st, N)).values
    if e == "laurent":
        return planar.laurent_zeros(st, args.mu, N).zeros
    raise ValueError(f"unknown ensemble {e!r}")


def cmd_sample(args) -> int:
    from .verify.report import emit

    root = RngState(args.seed)
    rows = [np.asarray(_sample_one(args, root.split(i))) for i in range(args.reps)]
    width = max(r.size for r in rows)
    cplx = any(np.iscomplexobj(r) for r in rows)
    data = np.full((len(rows), width), np.nan + (1j * np.nan if cplx else 0), dtype=complex if cplx else float)
    for i, r in enumerate(rows):
        data[i, : r.size] = r
    if args.out:
        emit(data, "csv", args.out)
    else:
        np.savetxt(sys.stdout, data.view(float) if cplx else data, fmt="%.17g", delimiter=",")
    return 0


def _theory_value(q: str, p: dict):
    from . import edge

    if q in ("outlier", "stieltjes", "bulk-density"):
        law = theory.BulkLaw.marchenko_pastur(p["gamma"]) if "gamma" in p else theory.BulkLaw.semicircle()
        if q == "outlier":
            pr = theory.outlier_prediction(law, p["coupling"])
            return {"threshold": pr.threshold, "location": pr.location, "overlap": pr.overlap,
                    "overlap_selfconsistent": pr.overlap_selfconsistent}
        if q == "stieltjes":
            return float(theory.stieltjes(law, p["y"]))
        return float(theory.bulk_density(law, p["x"]))
    if q == "tw-cdf":
        return float(edge.tw_cdf(int(p["beta"]), p["s"]))
    if q == "crit-cdf":
        return float(edge.crit_cdf(int(p.get("beta", 2)), p["w"], p["s"]))
    if q == "fredholm":
        return edge.fredholm_f2w(p.get("w", math.inf), p["s"])
    if q == "hard-edge-gap":
        return float(theory.hard_edge_gap_a0(p.get("beta", 2.0), p["c"], p["x"]))
    if q == "rho-profile":
        return float(planar.rho_profile(p["g"], p["Y"]))
    if q == "mean-overlap":
        return float(planar.mean_overlap(p["g"], p["Y"]))
    if q == "overlap-pdf":
        return float(planar.overlap_pdf(p["g"], p["Y"], p["t"]))
    if q == "cue-density":
        z = complex(p.get("x", 0.0), p.get("y", 0.0))
        if "mu" in p:
            return planar.cue_density("scaled", [z], mu=p["mu"])
        if "N" in p:
            return planar.cue_density("finite", [z], N=int(p["N"]), a=p.get("a", 0.0))
        return planar.cue_density("kac", [z])
    raise ValueError(f"unknown quantity {q!r}")


def cmd_theory(args) -> int:
    p = _kv(args.params)
    try:
        val = _theory_value(args.quantity, p)
    except KeyError as exc:
        raise ValueError(f"quantity {args.quantity!r} needs parameter {exc.args[0]!r}") from exc
    print(json.dumps({"quantity": args.quantity, "params": p, "value": val}))
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, ExperimentConfig, run_suite

    if args.list:
        for k, s in SUITES.items():
            print(f"{k:16s} N={s.N:<7d} reps={s.reps:<8d} {s.summary}")
        return 0
    names = list(SUITES) if args.suite == "all" else [args.suite]
    params = _kv(args.params)
    for item in args.param or []:
        params.update(_kv(item))
    ok = True
    for name in names:
        out = args.out
        if out and len(names) > 1:
            from pathlib import Path
            Path(out).mkdir(parents=True, exist_ok=True)
        cfg = ExperimentConfig(name, N=args.n, reps=args.reps, seed=args.seed, params=params, output_path=out)
        rep = run_suite(name, cfg)
        print(rep.line(), flush=True)
        if args.json:
            print(json.dumps(rep.to_dict()))
        ok &= rep.passed
    return 0 if ok else 1


def _grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("grid must be lo:hi:step")
    lo, hi, step = (float(v) for v in parts)
    if step == 0 or (hi - lo) / step < 0:
        raise ValueError("step must move from lo towards hi")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def cmd_sweep(args) -> int:
    from .verify.report import emit

    tab = planar.parameter_sweep(RngState(args.seed), args.model, _grid(args.grid), args.n)
    head, rows = tab.columns()
    data = {h: rows[:, j] for j, h in enumerate(head)}
    if args.out:
        emit(data, "csv", args.out)
    else:
        print(",".join(head))
        np.savetxt(sys.stdout, rows, fmt="%.17g", delimiter=",")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spectra", description="Rank-one perturbed random matrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw spectra and write them as CSV")
    s.add_argument("--ensemble", required=True, choices=ENSEMBLES)
    s.add_argument("--n", type=int, required=True, help="matrix size (series degree for laurent)")
    s.add_argument("--m", type=int, default=None, help="number of samples n for laguerre/wishart (default 2N)")
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--b", type=float, default=1.0)
    s.add_argument("--a", type=float, default=0.5)
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sample)

    t = sub.add_parser("theory", help="evaluate a closed-form or tabulated quantity")
    t.add_argument("--quantity", required=True, choices=QUANTITIES)
    t.add_argument("--params", default="", help="comma-separated k=v")
    t.set_defaults(func=cmd_theory)

    v = sub.add_parser("verify", help="run a verification suite ('all' runs every suite)")
    v.add_argument("--suite", default="all")
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--reps", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--params", default="", help="comma-separated k=v suite parameters")
    v.add_argument("--param", action="append", help="one k=v suite parameter (repeatable)")
    v.add_argument("--out", default=None, help="output prefix, or a directory")
    v.add_argument("--json", action="store_true", help="also print each report as JSON")
    v.add_argument("--list", action="store_true", help="list suites and exit")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="eigenvalue trajectories along a coupling grid")
    w.add_argument("--model", required=True, choices=("antiherm", "subunitary"))
    w.add_argument("--grid", required=True, help="lo:hi:step")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out", default=None)
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "m", None) is None and args.command == "sample":
        args.m = 2 * args.n
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"spectra: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
