"""Command-line front end.

stdout carries exactly one JSON document (or CSV for ``export-staircase``
without ``--out``); diagnostics go to stderr.  Exit codes: 0 ok, 1 suite
failure, 2 invalid input, 3 construction failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from . import harness
from .arith import GroupContext, Q, format_rational
from .codec import dumps, map_from_json, map_to_json
from .conjugacy import boshernitzan_data, has_D_property, to_boshernitzan, verify_linearization
from .constructions import (
    BSWitness, boshernitzan, bs_witness, bump_alpha, finite_order_element, realize_log_ratio,
    stein_family, transport,
)
from .errors import ConstructionError, NotBoshernitzanForm, NotRealizable, PLError, ValidationError
from .plmap import compose, invert, membership, power, rotation
from .rotnum import DEFAULT_DEPTH, exact_rational_rho, rho_bounds

EXIT_OK, EXIT_SUITE, EXIT_INVALID, EXIT_CONSTRUCT = 0, 1, 2, 3


class UsageError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_range(text):
    """'2..6' or '1,3,5' (or a JSON list from a config file) -> list of ints."""
    if isinstance(text, list):
        return [int(x) for x in text]
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def parse_basis(text):
    if isinstance(text, list):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).split(",") if x.strip())


def parse_bases(text):
    if isinstance(text, list):
        return [parse_basis(b) for b in text]
    return [parse_basis(b) for b in str(text).split(";") if b.strip()]


def context(args) -> GroupContext:
    if args.basis is None:
        raise UsageError("--basis is required")
    return GroupContext(Q(args.r), parse_basis(args.basis))


def read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def read_map(path):
    d = read_json(path)
    if isinstance(d, dict) and "maps" in d:
        d = d["maps"][0]
    return map_from_json(d)


def emit(obj, out=None):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args):
    kind = args.kind
    if kind == "boshernitzan":
        f = boshernitzan(args.r, args.l1, args.l2)
        emit(map_to_json(f), args.out)
    elif kind == "rotation":
        emit(map_to_json(rotation(args.r, args.a)), args.out)
    elif kind == "bump":
        f = bump_alpha(context(args), args.k, args.a0, args.b0, args.x0, args.alpha)
        emit(map_to_json(f), args.out)
    elif kind == "finite-order":
        ctx = GroupContext(Q(args.r), (int(args.m),))
        f = finite_order_element(ctx, int(args.q), int(args.p))
        if f is None:
            raise NotRealizable(f"no element of order {args.q} in T_{{{args.r},{args.m}}}")
        emit(map_to_json(f), args.out)
    elif kind == "stein-family":
        fam = stein_family(context(args), int(args.k))
        emit({"maps": [map_to_json(f) for f in fam]}, args.out)
    elif kind == "log-ratio":
        f = realize_log_ratio(context(args), args.alpha, args.beta)
        emit(map_to_json(f), args.out)
    return EXIT_OK


def cmd_compose(args):
    emit(map_to_json(compose(read_map(args.f), read_map(args.g))), args.out)
    return EXIT_OK


def cmd_invert(args):
    emit(map_to_json(invert(read_map(args.f))), args.out)
    return EXIT_OK


def cmd_power(args):
    emit(map_to_json(power(read_map(args.f), int(args.n))), args.out)
    return EXIT_OK


def cmd_eval(args):
    f = read_map(args.f)
    x = Q(args.x)
    emit({"x": format_rational(x), "value": format_rational(f(x)), "lift": format_rational(f.lift(x))})
    return EXIT_OK


def cmd_rho(args):
    f = read_map(args.f)
    if args.mode == "exact":
        rho = exact_rational_rho(f, int(args.depth))
        out = rho.to_json() if rho else {"kind": "absent", "reason": "DepthExhausted", "depth": int(args.depth)}
    elif args.mode == "interval":
        out = rho_bounds(f, int(args.iters)).to_json()
    else:
        try:
            _, _, rho = to_boshernitzan(f, int(args.max_iter))
            out = rho.to_json()
        except PLError as exc:
            out = {"kind": "absent", "reason": exc.name, "message": str(exc)}
    emit(out, args.out)
    return EXIT_OK


def cmd_member(args):
    f = read_map(args.f)
    ctx = GroupContext(f.src, parse_basis(args.basis))
    emit({"member": membership(f, ctx), "circumference": format_rational(f.src),
          "basis": list(ctx.basis)})
    return EXIT_OK


def cmd_dcheck(args):
    emit(has_D_property(read_map(args.f), int(args.max_iter)).to_json(), args.out)
    return EXIT_OK


def cmd_linearize(args):
    f = read_map(args.f)
    try:
        boshernitzan_data(f)
        F = f
    except NotBoshernitzanForm:
        F, _, _ = to_boshernitzan(f, int(args.max_iter))
    if len(F.breaks()) == 0:
        emit({"verified": True, "rotation": True, "normalForm": map_to_json(F)})
        return EXIT_OK
    lam1, lam2, a = boshernitzan_data(F)
    ok = verify_linearization(F, int(args.samples), int(args.bits))
    emit({"verified": ok, "sigma": format_rational(lam1 / lam2), "break": format_rational(a),
          "normalForm": map_to_json(F)})
    return EXIT_OK


def cmd_bs_witness(args):
    ctx = GroupContext(1, parse_basis(args.basis))
    w = bs_witness(args.l, args.lp, ctx)
    if w is None:
        raise NotRealizable(f"lengths {args.l} and {args.lp} differ outside d*Z[1/m]")
    emit(w.to_json(), args.out)
    return EXIT_OK


def cmd_transport(args):
    f = read_map(args.f)
    d = read_json(args.witness)
    w = map_from_json(d)
    emit(map_to_json(transport(f, BSWitness(w, w.src, w.dst))), args.out)
    return EXIT_OK


SUITES = ("thm1", "thm2", "lemma2")


def cmd_suite(args):
    if args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(SUITES)}")
    seed = int(args.seed)
    if args.name == "thm1":
        rep = harness.run_thm1_suite(parse_range(args.m), parse_range(args.r_range), parse_range(args.q),
                                     seed=seed, samples=int(args.samples))
    elif args.name == "thm2":
        rep = harness.run_thm2_suite(parse_bases(args.bases), parse_range(args.k), seed=seed)
    else:
        inputs = [read_map(p) for p in args.inputs] if args.inputs else harness.default_lemma2_inputs()
        rep = harness.run_lemma2_suite(inputs, seed=seed)
    emit(rep.to_json(), args.out)
    return EXIT_OK if rep.ok else EXIT_SUITE


def cmd_export_staircase(args):
    extra = {"l1": Q(args.l1)} if args.family == "boshernitzan" else {}
    rows = harness.export_staircase(args.family, args.t0, args.t1, int(args.samples),
                                    iters=int(args.iters), depth=int(args.depth), **extra)
    text = harness.rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(dumps({"rows": len(rows), "out": args.out}))
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="plcircle", description="Exact PL circle maps over Thompson-Stein groups.")
    p.add_argument("--config", help="JSON file with default option values (flags win)")
    sub = p.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="also write the JSON document to this file")
        subs[name] = sp
        return sp

    c = add("construct", cmd_construct, "build a map from one of the explicit families")
    c.add_argument("kind", choices=["boshernitzan", "rotation", "bump", "finite-order", "stein-family", "log-ratio"])
    c.add_argument("--r", default="1")
    c.add_argument("--basis")
    c.add_argument("--l1")
    c.add_argument("--l2")
    c.add_argument("--a", default="0")
    c.add_argument("--k", default="1")
    c.add_argument("--a0")
    c.add_argument("--b0")
    c.add_argument("--x0")
    c.add_argument("--alpha")
    c.add_argument("--beta")
    c.add_argument("--m")
    c.add_argument("--q")
    c.add_argument("--p", default="1")

    for name, func, h in (("invert", cmd_invert, "inverse map"), ("dcheck", cmd_dcheck, "(D)-property verdict")):
        sp = add(name, func, h)
        sp.add_argument("f")
        if name == "dcheck":
            sp.add_argument("--max-iter", default=256)
    sp = add("compose", cmd_compose, "f o g")
    sp.add_argument("f")
    sp.add_argument("g")
    sp = add("power", cmd_power, "f^n")
    sp.add_argument("f")
    sp.add_argument("--n", required=True)
    sp = add("eval", cmd_eval, "f(x)")
    sp.add_argument("f")
    sp.add_argument("--x", required=True)
    sp = add("rho", cmd_rho, "rotation number")
    sp.add_argument("f")
    sp.add_argument("--mode", choices=["exact", "interval", "symbolic"], default="exact")
    sp.add_argument("--depth", default=DEFAULT_DEPTH)
    sp.add_argument("--iters", default=10 ** 4)
    sp.add_argument("--max-iter", default=256)
    sp = add("member", cmd_member, "membership in T_{r,(n_i)}")
    sp.add_argument("f")
    sp.add_argument("--basis", required=False, default=None)
    sp = add("linearize", cmd_linearize, "certified h_sigma conjugacy check")
    sp.add_argument("f")
    sp.add_argument("--samples", default=32)
    sp.add_argument("--bits", default=128)
    sp.add_argument("--max-iter", default=256)
    sp = add("bs-witness", cmd_bs_witness, "PL identification [0,l] -> [0,l']")
    sp.add_argument("--l", required=False)
    sp.add_argument("--lp", required=False)
    sp.add_argument("--basis")
    sp = add("transport", cmd_transport, "conjugate a map along an identification")
    sp.add_argument("f")
    sp.add_argument("--witness", required=False)
    sp = add("suite", cmd_suite, "run a verification suite")
    sp.add_argument("name")
    sp.add_argument("--m", default="2..6")
    sp.add_argument("--r", dest="r_range", default="1..6")
    sp.add_argument("--q", default="1..12")
    sp.add_argument("--samples", default=3)
    sp.add_argument("--bases", default="2,3;3,5;2,3,5")
    sp.add_argument("--k", default="1..2")
    sp.add_argument("--inputs", nargs="*")
    sp.add_argument("--seed", default=0)
    sp = add("export-staircase", cmd_export_staircase, "rho over a one-parameter family as CSV")
    sp.add_argument("--family", choices=sorted(harness.FAMILIES), default="rotation")
    sp.add_argument("--from", dest="t0", default="0")
    sp.add_argument("--to", dest="t1", default="1")
    sp.add_argument("--l1", default="2")
    sp.add_argument("--samples", default=11)
    sp.add_argument("--iters", default=1000)
    sp.add_argument("--depth", default=32)
    return p, subs


REQUIRED = {"bs-witness": ("l", "lp", "basis"), "member": ("basis",), "transport": ("witness",)}


def parse_args(argv):
    parser, subs = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        cfg = read_json(pre.config)
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        if pre.command == "suite" and "r" in cfg:
            cfg["r_range"] = cfg.pop("r")
        subs[pre.command].set_defaults(**cfg)
    args = parser.parse_args(argv)
    missing = [k for k in REQUIRED.get(args.command, ()) if getattr(args, k, None) is None]
    if missing:
        raise UsageError("missing option(s): " + ", ".join("--" + k for k in missing))
    return args


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        return args.func(args)
    except ConstructionError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except ValidationError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"ValidationError: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
