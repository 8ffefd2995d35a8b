"""Print every singularity and limit-law constant with its precision estimate."""

import argparse
import json

from phylosym.asymptotics import NumericConfig, compute_constants


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dps", type=int, default=40)
    args = ap.parse_args()
    print(json.dumps(compute_constants(config=NumericConfig(dps=args.dps)), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
