"""Command-line entry point: ``phylosym <command> ...``.

Exact quantities are printed as "p/q" next to a decimal rendering. Exit
codes: 0 success, 1 a verification failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import asymptotics as asy
from . import verify as verify_mod
from ._fmt import dec_str, frac_str
from .errors import BFileError, CapacityError
from .oeis import REFERENCE, computed_values, load_bfile, parse_bfile
from .sampler import empirical_histogram
from .series import DEFAULT_ORDER, bivariate_F, otter_numbers, pn_sequence
from .stats import MODELS, coincidence_asymptotic, coincidence_prob, moments, overlay, sym_pmf
from .trees import count_phylo

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _series(args, n: int):
    order = max(args.order, n)
    if args.order_given and args.order < n:
        raise UsageError(f"--order {args.order} is below the requested size {n}")
    return bivariate_F(order)


def _config(args) -> asy.NumericConfig:
    return asy.NumericConfig(dps=args.precision)


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_counts(args) -> int:
    F = _series(args, args.max_n)
    u = otter_numbers(args.max_n)
    lines = ["n,b_n,u_n,W_n,W_n_decimal"]
    for n in range(1, args.max_n + 1):
        w = F.evaluate(n, Fraction(1, 2))
        lines.append(f"{n},{count_phylo(n)},{u[n]},{frac_str(w)},{dec_str(w)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_pn(args) -> int:
    F = _series(args, args.max_n)
    pn = pn_sequence(args.max_n, F)
    header = "n,p_n,p_n_decimal"
    rows = {}
    if args.asymptotic:
        cfg = _config(args)
        rho = asy.solve_rho(cfg)
        a = asy.constant_a(rho, cfg)
        c1 = args.c1 if args.c1 is not None else asy.constant_c1(rho, cfg)
        rows = {r["n"]: r for r in asy.accuracy_report(pn, a, 4 * rho.rho, c1, args.max_n, 1, cfg)}
        header += ",approximation,rel_error"
    lines = [header]
    for n in range(1, args.max_n + 1):
        line = f"{n},{frac_str(pn[n])},{dec_str(pn[n])}"
        if n in rows:
            line += f",{float(rows[n]['approx']):.15g},{rows[n]['rel_error']:.6e}"
        lines.append(line)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_constants(args) -> int:
    cfg = _config(args)
    F = _series(args, cfg.c1_window[1])
    data = asy.compute_constants(pn_sequence(cfg.c1_window[1], F), cfg)
    _emit(json.dumps(data, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_dist(args) -> int:
    d = sym_pmf(args.model, args.n, _series(args, args.n))
    if args.format == "json":
        payload = d.to_json()
        payload["moments"] = moments(d).to_json()
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        text = d.to_csv()
        if args.moments:
            m = moments(d)
            text += f"# mean={frac_str(m.mean)} variance={frac_str(m.variance)}\n"
        _emit(text, args.out)
    return EXIT_OK


def cmd_coincide(args) -> int:
    F = _series(args, max(args.n))
    sigmas = {}
    if args.predict:
        qp = asy.derive_sigma(_config(args))
        sigmas = {"otter": float(qp.sigma), "phylo": float(qp.sigma_hat)}
    header = "model,n,probability,probability_decimal,sqrt_n_times"
    if args.predict:
        header += ",prediction"
    lines = [header]
    for model in args.model:
        for n in args.n:
            q = coincidence_prob(sym_pmf(model, n, F))
            line = f"{model},{n},{frac_str(q)},{dec_str(q)},{math.sqrt(n) * float(q):.12g}"
            if args.predict:
                line += f",{math.sqrt(n) * coincidence_asymptotic(n, sigmas[model]):.12g}"
            lines.append(line)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_histo(args) -> int:
    d = sym_pmf(args.model, args.n, _series(args, args.n))
    lines = ["k,exact,decimal,gaussian"]
    lines += [f"{r['k']},{r['exact']},{r['decimal']},{r['gaussian']:.12g}" for r in overlay(d)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    seed = args.sample_seed if args.sample_seed is not None else args.seed
    report = empirical_histogram(args.model, args.n, args.trials, seed, _series(args, args.n))
    _emit(report.to_json() + "\n", args.out)
    if args.csv:
        Path(args.csv).write_text(report.histogram_csv())
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify_mod.run(args.level, args.order)
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} [{r.module}] {r.name}: {r.detail} ({r.seconds:.2f}s)")
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_bfile_check(args) -> int:
    try:
        seq = load_bfile(args.path, args.id)
    except BFileError as exc:
        print(f"FAIL {exc}")
        return EXIT_FAIL
    values = parse_bfile(Path(args.path).read_text())
    if not values:
        print(f"FAIL {seq.oeis_id}: file holds no values")
        return EXIT_FAIL
    top = min(max(values), args.max_index)
    ours = computed_values(seq.oeis_id, top)
    bad = [n for n in sorted(values) if n in ours and ours[n] != values[n]]
    checked = sum(1 for n in values if n in ours)
    if bad:
        print(f"FAIL {seq.oeis_id}: {len(bad)} mismatches, first at index {bad[0]}")
        return EXIT_FAIL
    print(f"PASS {seq.oeis_id}: {checked} values agree")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phylosym", description=__doc__.splitlines()[0])
    p.add_argument("--order", type=int, default=None, help=f"series truncation order (default {DEFAULT_ORDER})")
    p.add_argument("--precision", type=int, default=40, help="decimal digits for floating-point work")
    p.add_argument("--seed", type=int, default=2009, help="RNG seed")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="write to this file instead of stdout")
        return sp

    sp = add("counts", cmd_counts, "b_n, u_n and W_n")
    sp.add_argument("--max-n", type=int, default=20)

    sp = add("pn", cmd_pn, "exact coincidence probabilities p_n")
    sp.add_argument("--max-n", type=int, default=20)
    sp.add_argument("--asymptotic", action="store_true", help="add the a b^-n n^(3/2)(1 + c1/n) column")
    sp.add_argument("--c1", type=float, default=None, help="override the analytic c1")

    add("constants", cmd_constants, "singularity and limit-law constants as JSON")

    for name, fn, help_ in (("dist", cmd_dist, "exact law of sym"), ("histo", cmd_histo, "law with Gaussian overlay")):
        sp = add(name, fn, help_)
        sp.add_argument("--model", choices=MODELS, required=True)
        sp.add_argument("--n", type=int, required=True)
        if name == "dist":
            sp.add_argument("--format", choices=("csv", "json"), default="csv")
            sp.add_argument("--moments", action="store_true")

    sp = add("coincide", cmd_coincide, "probability that two trees share sym")
    sp.add_argument("--model", choices=MODELS, nargs="+", default=list(MODELS))
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--predict", action="store_true", help="add the Gaussian prediction")

    sp = add("sample", cmd_sample, "sym histogram of uniform random trees")
    sp.add_argument("--model", choices=MODELS, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", dest="sample_seed", type=int, default=None)
    sp.add_argument("--csv", help="also write the histogram CSV here")

    sp = add("verify", cmd_verify, "self-check suites")
    sp.add_argument("level", nargs="?", choices=verify_mod.LEVELS, default="fast")

    sp = add("bfile-check", cmd_bfile_check, "compare a local OEIS b-file with computed values")
    sp.add_argument("path")
    sp.add_argument("--id", choices=sorted(REFERENCE), default=None)
    sp.add_argument("--max-index", type=int, default=300)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.order_given = args.order is not None
    if args.order is None:
        args.order = DEFAULT_ORDER
    for name in ("order", "precision"):
        if getattr(args, name) < 1:
            parser.error(f"--{name} must be positive")
    for name in ("n", "max_n"):
        v = getattr(args, name, None)
        if v is not None and min(v if isinstance(v, list) else [v]) < 1:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    try:
        return args.func(args)
    except (UsageError, CapacityError, ValueError, OSError) as exc:
        print(f"phylosym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
