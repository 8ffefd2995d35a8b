"""Relative error of a b^-n n^(3/2) (1 + c1/n) against exact p_n, as CSV.

By default c1 is the analytic value; pass --c1 to try another one.  The
threshold summary goes to stderr.
"""

import argparse
import sys

from phylosym import asymptotics as asy
from phylosym._fmt import dec_str
from phylosym.series import bivariate_F, pn_sequence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=250)
    ap.add_argument("--c1", type=float, default=None)
    ap.add_argument("--fit", action="store_true", help="use the least-squares c1 instead")
    args = ap.parse_args()

    cfg = asy.NumericConfig()
    pn = pn_sequence(args.max_n, bivariate_F(args.max_n))
    rho = asy.solve_rho(cfg)
    a, b = asy.constant_a(rho, cfg), 4 * rho.rho
    if args.c1 is not None:
        c1 = args.c1
    elif args.fit:
        c1 = asy.fit_c1(pn, a, b, cfg.c1_window, config=cfg).c1
    else:
        c1 = asy.constant_c1(rho, cfg)
    rows = asy.accuracy_report(pn, a, b, c1, args.max_n, config=cfg)
    print("n,p_n_decimal,approximation,rel_error")
    for r in rows:
        print(f"{r['n']},{dec_str(pn[r['n']])},{float(r['approx']):.15g},{r['rel_error']:.6e}")
    for c in asy.threshold_check(rows):
        status = "ok" if c["ok"] else f"violated at {len(c['violations'])} sizes"
        print(f"< {c['tolerance']:g} for n >= {c['from_n']}: {status} (max {c['max_rel_error']:.3e})", file=sys.stderr)


if __name__ == "__main__":
    main()
