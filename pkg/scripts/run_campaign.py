"""Run the randomized verification campaign and print per-theorem tallies.

    python scripts/run_campaign.py --seed 42 --workers 4 --out campaign.json
"""

import argparse
import sys

from lattice_curve.verify import CampaignConfig, run_campaign


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", help="campaign config JSON (default: 5000 mixed trials)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the full JSON report here")
    args = p.parse_args()

    cfg = CampaignConfig.load(args.config) if args.config else CampaignConfig()
    rep = run_campaign(cfg, seed=args.seed, workers=args.workers)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rep.dumps())
    print(f"{'theorem':34s} {'applicable':>10s} {'passed':>7s} {'failed':>6s} {'marginal':>8s} {'tightest':>9s}")
    for tid, t in rep.tallies.items():
        tight = "-" if t["tightest_ratio"] is None else f"{t['tightest_ratio']:.4f}"
        print(f"{tid:34s} {t['applicable']:10d} {t['passed']:7d} {t['failed']:6d} {t['marginal']:8d} {tight:>9s}")
    print(f"trials={rep.trials} families={rep.families} oracle={rep.oracle_checks}")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
