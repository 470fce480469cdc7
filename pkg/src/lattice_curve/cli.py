"""Command-line front end: count, bound, verify, sharpness, plot.

Exit codes: 0 success, 1 a bound was violated (``bound --check``, ``verify``),
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bounds as B
from .counting import count_near, count_on
from .curve import CircleArc, EllipseArc, curve_from_json, stats
from .errors import LatticeCurveError
from .lattice import Lattice, hexagonal_lattice, integer_lattice
from .plot import PlotSpec, write_svg
from .verify import CampaignConfig, run_campaign, sharpness_sweep


class UsageError(Exception):
    pass


def _kv(tokens):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise UsageError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = float(v)
    return out


def parse_inline_curve(text):
    """``circle R=5 [cx= cy= theta0= theta1=]``, ``ellipse a= b= [...]`` or a JSON descriptor."""
    text = text.strip()
    if text.startswith("{"):
        return curve_from_json(json.loads(text))
    head, *rest = text.split()
    kv = _kv(rest)
    allowed = {"circle": {"R", "cx", "cy", "theta0", "theta1"},
               "ellipse": {"a", "b", "cx", "cy", "theta0", "theta1"}}
    if head not in allowed:
        raise UsageError(f"unknown curve shorthand {head!r}; use 'circle', 'ellipse' or JSON")
    bad = set(kv) - allowed[head]
    if bad:
        raise UsageError(f"unknown keys {sorted(bad)} for {head}")
    center = (kv.get("cx", 0.0), kv.get("cy", 0.0))
    th = (kv.get("theta0", 0.0), kv.get("theta1", kv.get("theta0", 0.0) + 2 * math.pi))
    if head == "circle":
        if "R" not in kv:
            raise UsageError("circle needs R=")
        return CircleArc(center, kv["R"], *th)
    if "a" not in kv or "b" not in kv:
        raise UsageError("ellipse needs a= and b=")
    return EllipseArc(center, np.diag([1 / kv["a"] ** 2, 1 / kv["b"] ** 2]), *th)


def parse_inline_lattice(text):
    text = text.strip()
    if text.startswith("{"):
        return Lattice.from_json(json.loads(text))
    if text in ("Z2", "z2"):
        return integer_lattice()
    if text == "hex":
        return hexagonal_lattice()
    raise UsageError(f"unknown lattice shorthand {text!r}; use 'Z2', 'hex' or JSON")


def _resolve(value, inline, from_json, what):
    """A path to a JSON file or inline text; a value that is both is ambiguous."""
    is_file = os.path.isfile(value)
    try:
        parsed = inline(value)
    except (UsageError, ValueError, KeyError, IndexError, TypeError) as exc:
        parsed, err = None, exc
    if is_file and parsed is not None:
        raise UsageError(f"--{what} {value!r} is both a file and valid inline text")
    if is_file:
        with open(value) as fh:
            return from_json(json.load(fh))
    if parsed is None:
        raise UsageError(f"cannot read --{what} {value!r}: {err}")
    return parsed


def load_curve(value):
    return _resolve(value, parse_inline_curve, curve_from_json, "curve")


def load_lattice(value):
    return _resolve(value, parse_inline_lattice, Lattice.from_json, "lattice")


def _emit(obj, out=None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n" if not isinstance(obj, str) else obj
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def cmd_count(args):
    C, L = load_curve(args.curve), load_lattice(args.lattice)
    if args.near:
        if args.delta is None:
            raise UsageError("--near needs --delta")
        rep = count_near(C, L, args.delta)
    else:
        rep = count_on(C, L, args.eps)
    _emit(rep.to_csv() if args.csv else rep.to_json(), args.out)
    return 0


def _overrides(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--override expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = float(v)
    return out


def cmd_bound(args):
    eps_on = args.eps
    overrides = _overrides(args.override)
    delta = args.delta
    if args.instance:
        if args.curve or args.lattice:
            raise UsageError("give either --instance or --curve/--lattice")
        with open(args.instance) as fh:
            dump = json.load(fh)
        C, L = curve_from_json(dump["curve"]), Lattice.from_json(dump["lattice"])
        delta = dump.get("delta") if delta is None else delta
        eps_on = dump.get("eps_on") if eps_on is None else eps_on
        overrides = {**dump.get("overrides", {}), **overrides}
    else:
        if not (args.curve and args.lattice):
            raise UsageError("bound needs --curve and --lattice (or --instance)")
        C, L = load_curve(args.curve), load_lattice(args.lattice)
    ids = B.THEOREM_IDS if args.theorem == "all" else [args.theorem]
    if args.theorem != "all" and args.theorem not in B.THEOREM_IDS:
        raise UsageError(f"unknown theorem id {args.theorem!r}")
    try:
        inst = B.Instance.build(C, stats(C), L, delta=delta, overrides=overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if any(t in B.NEAR_CURVE_IDS for t in ids) and delta is None and args.theorem != "all":
        raise UsageError(f"{args.theorem} needs --delta")
    verdicts = B.evaluate_all(inst, ids)
    code = 0
    if args.check:
        on = count_on(C, L, eps_on).count
        near = count_near(C, L, delta).count if delta is not None else None
        for v in verdicts:
            v.check(near if v.count_kind == "near_curve" else on)
            if v.applicable and not v.marginal and v.passed is False:
                code = 1
    out = [v.to_json() for v in verdicts]
    _emit(out[0] if len(out) == 1 else out, args.out)
    return code


def cmd_verify(args):
    cfg = CampaignConfig.load(args.config) if args.config else CampaignConfig()
    seed = args.seed
    if seed is None:
        env = os.environ.get("LATTICE_CURVE_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError as exc:
                raise UsageError(f"LATTICE_CURVE_SEED={env!r} is not an integer") from exc
    rep = run_campaign(cfg, seed=seed, workers=args.workers)
    _emit(rep.dumps(), args.out)
    return 0 if rep.ok else 1


def cmd_sharpness(args):
    if args.family == "parabolic":
        params = {"n": args.n}
        if args.a_sweep:
            params["a_values"] = _floats(args.a_sweep)
        if args.lattice:
            params["lattice"] = load_lattice(args.lattice)
    else:
        params = {"L_arc": args.L}
        if args.R_sweep:
            params["R_values"] = _floats(args.R_sweep)
    _emit(sharpness_sweep(args.family, **params).to_json(), args.out)
    return 0


def cmd_plot(args):
    with open(args.spec) as fh:
        raw = json.load(fh)
    known = {"curve", "lattice", "window", "delta", "highlight", "size", "out", "title"}
    if set(raw) - known:
        raise UsageError(f"unknown plot spec keys {sorted(set(raw) - known)}")
    if "curve" not in raw or "lattice" not in raw:
        raise UsageError("plot spec needs 'curve' and 'lattice'")
    C = parse_inline_curve(raw["curve"]) if isinstance(raw["curve"], str) else curve_from_json(raw["curve"])
    L = parse_inline_lattice(raw["lattice"]) if isinstance(raw["lattice"], str) else Lattice.from_json(raw["lattice"])
    spec = PlotSpec(C, L, raw.get("window"), raw.get("delta"), raw.get("highlight", "on"),
                    tuple(raw.get("size", (512, 512))), args.out or raw.get("out"), raw.get("title", ""))
    text = write_svg(spec)
    if not spec.out:
        sys.stdout.write(text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="lattice-curve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count lattice points on or near a curve")
    c.add_argument("--curve", required=True)
    c.add_argument("--lattice", required=True)
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--on", action="store_true")
    mode.add_argument("--near", action="store_true")
    c.add_argument("--eps", type=float)
    c.add_argument("--delta", type=float)
    c.add_argument("--csv", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_count)

    b = sub.add_parser("bound", help="evaluate theorem bounds for an instance")
    b.add_argument("--curve")
    b.add_argument("--lattice")
    b.add_argument("--instance", help="failure dump or instance JSON")
    b.add_argument("--theorem", default="all")
    b.add_argument("--delta", type=float)
    b.add_argument("--eps", type=float)
    b.add_argument("--override", action="append", metavar="KEY=VALUE")
    b.add_argument("--check", action="store_true", help="also count and compare")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="run the randomized campaign")
    v.add_argument("--config")
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sharpness", help="sweep a sharpness family")
    s.add_argument("--family", required=True, choices=["parabolic", "schinzel"])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--a-sweep")
    s.add_argument("--lattice")
    s.add_argument("--L", type=float, default=1.0)
    s.add_argument("--R-sweep")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sharpness)

    g = sub.add_parser("plot", help="write an SVG figure")
    g.add_argument("--spec", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LatticeCurveError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
