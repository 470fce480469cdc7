"""Print both sharpness sweeps: the three-point circle arcs and the parabolic family."""

import argparse

from lattice_curve.verify import parabolic_sweep, schinzel_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--R", default="1,10,100,1000,10000")
    p.add_argument("--a", default="10,100,1000,10000")
    p.add_argument("--n", default="2,3,5")
    args = p.parse_args()

    rep = schinzel_sweep(args.L, [float(x) for x in args.R.split(",")])
    print("three-point arcs: 2 (A R)^(1/3) / L")
    for r in rep.rows:
        print(f"  R={r['R']:>9g}  A={r['A']:.6e}  ratio={r['ratio']:.10f}  count={r['count']}")

    a_values = [float(x) for x in args.a.split(",")]
    print("parabolic family: tau R2 / (A R1)^(1/3)")
    for n in (int(x) for x in args.n.split(",")):
        rep = parabolic_sweep(n, a_values)
        qs = "  ".join(f"{r['quantity']:.6f}" for r in rep.rows)
        print(f"  n={n}: {qs}  -> extrapolated {rep.limit_estimate:.6f} (n+2={n + 2}, count={rep.rows[-1]['count']})")


if __name__ == "__main__":
    main()
