"""Command-line front end: computations, emitters, and the verify runner.

Exit codes: 0 on success, 1 when a verification check fails, 2 for
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .exprparse import ParseError, parse_element
from .hopf import (GENERIC, SPECIALIZED, HopfError, SteenrodContext,
                   verify_hopf_axioms)
from .lazard import (GeneratorSet, LazardError, canonical_typical,
                     fgl_model, find_adequate_generators, is_ell_typical,
                     lazard_index_coefficient, required_index)
from .mgl import (BidegreeFamily, MglContext, MglError, g_tilde_matrix,
                  mgl_family, verify_comodule, xi_sequences)
from .operations import (OpError, Operation, cartan_check, leftideal_expand,
                         op_product, pairing, quotient_rank, triangularity)
from .rings import GradedPoly, RingError
from .series import SeriesError

CONFIG_KEYS = ("ell", "mode", "max_p", "max_weight", "format", "gens",
               "seed")


class ConfigError(Exception):
    pass


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    bad = set(cfg) - set(CONFIG_KEYS)
    if bad:
        raise ConfigError(f"unknown config keys: {sorted(bad)}")
    return cfg


def _opt(args, cfg, key, default=None):
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in cfg:
        return cfg[key]
    if key == "ell" and os.environ.get("MSA_ELL"):
        return os.environ["MSA_ELL"]
    return default


def _ell_list(value):
    try:
        return [int(x) for x in str(value).split(",")]
    except ValueError:
        raise ConfigError(f"bad ell list {value!r}") from None


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _context(args, cfg):
    ell = int(_opt(args, cfg, "ell", 2))
    if not _is_prime(ell):
        raise ConfigError(f"ell must be prime, got {ell}")
    mode = _opt(args, cfg, "mode")
    if mode not in (None, GENERIC, SPECIALIZED):
        raise ConfigError(f"unknown mode {mode!r}")
    max_p = int(_opt(args, cfg, "max_p", 16 if ell == 2 else 26))
    try:
        return SteenrodContext(ell, mode, max_p)
    except HopfError as exc:
        raise ConfigError(str(exc)) from None


def _mgl_context(args, cfg):
    ell = int(_opt(args, cfg, "ell", 2))
    if not _is_prime(ell):
        raise ConfigError(f"ell must be prime, got {ell}")
    return MglContext(ell, int(_opt(args, cfg, "max_weight", 8)))


# -- emitters ---------------------------------------------------------


def emit(payload, args, cfg):
    """payload: {"rows": [dict, ...], ...extra} with homogeneous rows."""
    fmt = _opt(args, cfg, "format", "text")
    if fmt == "json":
        if getattr(args, "stable_output", False):
            payload = _strip_timing(payload)
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    elif fmt == "csv":
        rows = payload.get("rows", [])
        if rows:
            w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    elif fmt == "text":
        for k, v in payload.items():
            if k == "rows":
                continue
            print(f"{k}: {v}")
        for row in payload.get("rows", []):
            print("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
    else:
        raise ConfigError(f"unknown format {fmt!r}")


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items()
                if k not in ("seconds", "total_seconds")}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


# -- subcommands ------------------------------------------------------


def cmd_delta(args, cfg):
    ctx = _context(args, cfg)
    x = parse_element(args.expr, ctx)
    if isinstance(x, Operation):
        raise ConfigError("delta expects a Gamma element")
    rows = [{"left": str(m1), "right": str(m2), "coeff": str(c)}
            for (m1, m2), c in sorted(ctx.coproduct(x).items(),
                                      key=lambda kv: (str(kv[0][0]),
                                                      str(kv[0][1])))]
    emit({"input": args.expr, "rows": rows}, args, cfg)
    return 0


def cmd_product(args, cfg):
    ctx = _context(args, cfg)
    x = parse_element(args.left, ctx)
    y = parse_element(args.right, ctx)
    if isinstance(x, Operation) or isinstance(y, Operation):
        raise ConfigError("product expects Gamma elements; see op-product")
    emit({"result": str(x * y)}, args, cfg)
    return 0


def cmd_op_product(args, cfg):
    ctx = _context(args, cfg)
    x = parse_element(args.left, ctx)
    y = parse_element(args.right, ctx)
    if not isinstance(x, Operation) or not isinstance(y, Operation):
        raise ConfigError("op-product expects two operations")
    emit({"result": str(x * y)}, args, cfg)
    return 0


def cmd_pair(args, cfg):
    ctx = _context(args, cfg)
    phi = parse_element(args.op, ctx)
    g = parse_element(args.element, ctx)
    if not isinstance(phi, Operation) or isinstance(g, Operation):
        raise ConfigError("pair expects an operation and a Gamma element")
    emit({"result": str(pairing(phi, g))}, args, cfg)
    return 0


def cmd_cartan(args, cfg):
    ctx = _context(args, cfg)
    if ctx.max_p < 2 * ctx.ell - 2:
        raise ConfigError("window is below the first degree of P[1]")
    rep = cartan_check(ctx, ctx.max_p)
    rows = [{"check": "cartan", "ok": rep["passed"],
             "literal_exact": rep["literal_exact"],
             "P_checked": rep["P_checked"], "Q_checked": rep["Q_checked"]}]
    emit({"passed": rep["passed"], "rows": rows}, args, cfg)
    return 0 if rep["passed"] else 1


def cmd_leftideal(args, cfg):
    ctx = _context(args, cfg)
    E = tuple(int(x) for x in args.E.split(",")) if args.E else ()
    R = tuple(int(x) for x in args.R.split(",")) if args.R else ()
    tri = triangularity(ctx, E, R)
    exp = leftideal_expand(ctx, E, R)
    basis_elt = Operation(ctx, {tri["lead"]: ctx.one()})
    ok = tri["triangular"] and exp.evaluate() == basis_elt
    emit({"target": tri["lead"], "triangular": tri["triangular"],
          "expansion": str(exp), "round_trip": ok}, args, cfg)
    return 0 if ok else 1


def cmd_fgl(args, cfg):
    w = int(_opt(args, cfg, "max_weight", 8))
    model = fgl_model(w)
    if args.coefficient:
        i, j = (int(x) for x in args.coefficient.split(","))
        emit({"coefficient": f"{i},{j}",
              "value": str(model.fgl_coefficient(i, j))}, args, cfg)
        return 0
    ell = int(_opt(args, cfg, "ell", 2))
    series = model.ell_series(ell)
    rows = [{"power": k, "coeff": str(p)}
            for (k,), p in sorted(series.coeffs.items())]
    emit({"ell": ell, "rows": rows}, args, cfg)
    return 0


def cmd_lazard(args, cfg):
    w = int(_opt(args, cfg, "max_weight", 8))
    gens = find_adequate_generators(w)
    ok, msg = gens.validate()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(gens.to_json())
    rows = [{"n": n, "index": gens.certificates[n]["index"],
             "image": str(gens.element(n).image)}
            for n in sorted(gens.elements)]
    emit({"max_weight": w, "valid": ok, "detail": msg, "rows": rows},
         args, cfg)
    return 0 if ok else 1


def cmd_typical(args, cfg):
    ell = int(_opt(args, cfg, "ell", 2))
    r = args.r
    w = int(_opt(args, cfg, "max_weight", 8))
    if ell ** r - 1 > w:
        raise ConfigError("weight window too small for ell^r - 1")
    v = canonical_typical(ell, r, fgl_model(w))
    ok, rep = is_ell_typical(v, ell)
    emit({"ell": ell, "r": r, "weight": v.weight,
          "image": str(v.image), "typical": ok,
          "index": lazard_index_coefficient(v), **rep}, args, cfg)
    return 0 if ok else 1


def cmd_mgl(args, cfg):
    ctx = _mgl_context(args, cfg)
    if args.coaction:
        x = parse_element(args.coaction, ctx.steenrod, ctx)
        rows = [{"left": str(mm), "right": str(p)}
                for mm, p in sorted(ctx.coaction(x).items(),
                                    key=lambda kv: str(kv[0]))]
        emit({"input": args.coaction, "rows": rows}, args, cfg)
        return 0
    if args.gtilde:
        w = args.weight if args.weight is not None else 2
        gens = (GeneratorSet.from_json(open(args.gens).read())
                if _opt(args, cfg, "gens")
                else find_adequate_generators(ctx.max_weight))
        rep = g_tilde_matrix(ctx.ell, gens, w)
        rows = [{"row": i, "entries": ",".join(map(str, row))}
                for i, row in enumerate(rep["matrix"])]
        emit({"weight": w, "invertible": rep["invertible"],
              "source_dim": len(rep["source"]),
              "target_dim": len(rep["target"]), "rows": rows}, args, cfg)
        return 0 if rep["invertible"] else 1
    raise ConfigError("mgl needs --coaction or --gtilde")


def cmd_psf(args, cfg):
    ell = int(_opt(args, cfg, "ell", 2))
    max_q = args.max_q
    fam = mgl_family(ell)
    sm = fam.smash(fam, max_q)
    rows = [{"q": q, "family": json.dumps(fam.slice(q), sort_keys=True),
             "smash_square": json.dumps(sm.slice(q), sort_keys=True)}
            for q in range(max_q + 1)]
    ok = fam.is_psf(max_q)
    emit({"is_psf": ok, "rows": rows}, args, cfg)
    return 0 if ok else 1


# -- verify -----------------------------------------------------------

SUITES = ("hopf", "cartan", "leftideal", "fgl", "adequacy", "mgl", "psf")


def _suite_hopf(ells, max_p, out):
    for ell in ells:
        bound = max_p or (16 if ell == 2 else 26)
        modes = ([GENERIC, SPECIALIZED] if ell == 2 else [SPECIALIZED])
        for mode in modes:
            ctx = SteenrodContext(ell, mode, bound)
            rep = verify_hopf_axioms(ctx, bound)
            out(f"hopf-axioms-ell{ell}-{mode}", rep["passed"],
                f"{len(rep['checks'])} checks")


def _suite_cartan(ells, max_p, out):
    for ell in ells:
        bound = max_p or (16 if ell == 2 else 26)
        if bound < 2 * ell - 2:
            raise ConfigError("window is below the first degree of P[1]")
        modes = ([GENERIC, SPECIALIZED] if ell == 2 else [SPECIALIZED])
        for mode in modes:
            ctx = SteenrodContext(ell, mode, bound)
            rep = cartan_check(ctx, bound)
            ok = rep["passed"] and (mode == GENERIC or rep["literal_exact"])
            out(f"cartan-ell{ell}-{mode}", ok,
                f"P:{rep['P_checked']} Q:{rep['Q_checked']}")


def _suite_leftideal(ells, max_p, out):
    for ell in ells:
        bound = min(max_p or 12, 12 if ell == 2 else 26)
        modes = ([GENERIC, SPECIALIZED] if ell == 2 else [SPECIALIZED])
        for mode in modes:
            ctx = SteenrodContext(ell, mode, bound)
            ok = True
            n = 0
            for mm in ctx.window_basis(bound):
                if not any(mm.e):
                    continue
                tri = triangularity(ctx, mm.e, mm.r)
                exp = leftideal_expand(ctx, mm.e, mm.r)
                basis_elt = Operation(ctx, {mm: ctx.one()})
                if not tri["triangular"] or exp.evaluate() != basis_elt:
                    ok = False
                n += 1
            out(f"leftideal-ell{ell}-{mode}", ok, f"{n} pairs")


def _suite_fgl(ells, max_p, out):
    model = fgl_model(8)
    from .series import series_compose
    comp = series_compose(model.exp, model.log)
    ident = all((p.is_zero() if k != (1,) else str(p) == "1")
                for k, p in comp.coeffs.items())
    out("fgl-exp-log-identity", ident, "weight 8")
    for ell in (2, 3, 5):
        series = model.ell_series(ell)
        ok = all(all(c % ell == 0 for c in p.terms.values())
                 for p in series.coeffs.values())
        out(f"fgl-ell-series-divisible-{ell}", ok, "all coefficients")
    for ell, r in ((2, 1), (2, 2), (3, 1)):
        v = canonical_typical(ell, r, model)
        ok, _ = is_ell_typical(v, ell)
        out(f"fgl-typical-{ell}-{r}", ok, f"weight {v.weight}")
    v1 = canonical_typical(2, 1, model)
    out("fgl-v1-is-2b1", str(v1.image) == "2*b1", str(v1.image))
    v2 = canonical_typical(2, 2, model)
    out("fgl-index-2-2", lazard_index_coefficient(v2) == 14,
        str(lazard_index_coefficient(v2)))


def _suite_adequacy(ells, max_p, out):
    gens = find_adequate_generators(8)
    ok, msg = gens.validate()
    out("adequate-generators", ok, msg)
    round_trip = GeneratorSet.from_json(gens.to_json())
    ok2, msg2 = round_trip.validate()
    out("adequate-generators-serialized", ok2, msg2)


def _suite_mgl(ells, max_weight, out):
    gens = find_adequate_generators(8)
    for ell in ells:
        rep = verify_comodule(ell, gens, min(max_weight or 6, 6))
        for c in rep["checks"]:
            out(f"mgl-{c['name']}-ell{ell}", c["ok"], c["detail"])
        # the two counts of the duality cross-check
        ctx = SteenrodContext(ell, SPECIALIZED, 16 if ell == 2 else 26)
        killed = list(range(ctx.max_tau))
        ok = True
        seen = set()
        for mm in ctx.window_basis(12):
            bd = mm.bidegree(ell)
            if bd in seen:
                continue
            seen.add(bd)
            pure = sum(1 for m2 in ctx.basis_by_bidegree(*bd)
                       if not any(m2.e))
            if quotient_rank(ctx, killed, bd) != pure:
                ok = False
        out(f"mgl-quotient-rank-dual-ell{ell}", ok, f"{len(seen)} bidegrees")


def _suite_psf(ells, max_p, out):
    for ell in ells:
        fam = mgl_family(ell)
        out(f"psf-mgl-family-ell{ell}", fam.is_psf(6), "q <= 6")
        sm = fam.smash(fam, 6)
        brute = {}
        for p1, q1 in fam.bidegrees(6):
            for p2, q2 in fam.bidegrees(6):
                if q1 + q2 <= 6:
                    sl = brute.setdefault(q1 + q2, {})
                    sl[p1 + p2] = sl.get(p1 + p2, 0) + 1
        ok = all(sm.slice(q) == brute.get(q, {}) for q in range(7))
        out(f"psf-smash-convolution-ell{ell}", ok, "q <= 6")


def cmd_verify(args, cfg):
    wanted = args.suite or "all"
    names = SUITES if wanted == "all" else tuple(wanted.split(","))
    for name in names:
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r}")
    ells = _ell_list(_opt(args, cfg, "ell", "2,3"))
    for ell in ells:
        if not _is_prime(ell):
            raise ConfigError(f"ell must be prime, got {ell}")
    max_p = getattr(args, "max_p", None)
    max_weight = getattr(args, "max_weight", None)
    checks = []
    t_start = time.time()

    def run(suite, fn, bound):
        def out(name, ok, detail=""):
            checks.append({"suite": suite, "name": name, "ok": bool(ok),
                           "detail": detail,
                           "seconds": round(time.time() - t0, 3)})
        t0 = time.time()
        fn(ells, bound, out)

    table = {"hopf": (_suite_hopf, max_p), "cartan": (_suite_cartan, max_p),
             "leftideal": (_suite_leftideal, max_p),
             "fgl": (_suite_fgl, max_p),
             "adequacy": (_suite_adequacy, max_p),
             "mgl": (_suite_mgl, max_weight), "psf": (_suite_psf, max_p)}
    for name in names:
        fn, bound = table[name]
        run(name, fn, bound)
    passed = all(c["ok"] for c in checks)
    payload = {"passed": passed, "suites": list(names),
               "total_seconds": round(time.time() - t_start, 3),
               "rows": checks}
    emit(payload, args, cfg)
    return 0 if passed else 1


# -- argument parsing -------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ell", help="the prime (default 2; env MSA_ELL)")
    common.add_argument("--mode", choices=(GENERIC, SPECIALIZED))
    common.add_argument("--max-p", type=int, dest="max_p",
                        help="first-degree window bound")
    common.add_argument("--max-weight", type=int, dest="max_weight")
    common.add_argument("--format", choices=("text", "json", "csv"))
    common.add_argument("--stable-output", action="store_true",
                        help="omit timing fields from JSON output")
    common.add_argument("--config", help="JSON config file (flag keys)")
    common.add_argument("--seed", type=int, help="seed for randomized sweeps")
    common.add_argument("--gens", help="generator-set JSON path")

    p = argparse.ArgumentParser(prog="msa",
                                description="exact motivic Steenrod "
                                            "algebra computations")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("delta", parents=[common],
                       help="coproduct of a Gamma element")
    s.add_argument("expr")
    s.set_defaults(fn=cmd_delta)
    s = sub.add_parser("product", parents=[common],
                       help="product of two Gamma elements")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(fn=cmd_product)
    s = sub.add_parser("op-product", parents=[common],
                       help="composition product of two operations")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(fn=cmd_op_product)
    s = sub.add_parser("pair", parents=[common],
                       help="pairing of an operation with an element")
    s.add_argument("op")
    s.add_argument("element")
    s.set_defaults(fn=cmd_pair)
    s = sub.add_parser("cartan", parents=[common],
                       help="coproduct formulas for P^R and Q_i")
    s.set_defaults(fn=cmd_cartan)
    s = sub.add_parser("leftideal", parents=[common],
                       help="triangular expansion of P^R Q(E)")
    s.add_argument("--E", default="")
    s.add_argument("--R", default="")
    s.set_defaults(fn=cmd_leftideal)
    s = sub.add_parser("fgl", parents=[common],
                       help="formal group law coefficients and ell-series")
    s.add_argument("--coefficient", help="i,j")
    s.set_defaults(fn=cmd_fgl)
    s = sub.add_parser("lazard", parents=[common],
                       help="find and certify adequate generators")
    s.add_argument("--out", help="write the generator set as JSON")
    s.set_defaults(fn=cmd_lazard)
    s = sub.add_parser("typical", parents=[common],
                       help="canonical ell-typical elements")
    s.add_argument("--r", type=int, default=1)
    s.set_defaults(fn=cmd_typical)
    s = sub.add_parser("mgl", parents=[common],
                       help="MGL coaction and comodule maps")
    s.add_argument("--coaction", help="a polynomial in b1..bN")
    s.add_argument("--gtilde", action="store_true")
    s.add_argument("--weight", type=int)
    s.set_defaults(fn=cmd_mgl)
    s = sub.add_parser("psf", parents=[common],
                       help="psf bidegree-family bookkeeping")
    s.add_argument("--max-q", type=int, default=6, dest="max_q")
    s.set_defaults(fn=cmd_psf)
    s = sub.add_parser("verify", parents=[common],
                       help="run verification suites")
    s.add_argument("--suite", help="comma list or 'all'")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(getattr(args, "config", None))
        return args.fn(args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, HopfError, RingError, LazardError, MglError,
            OpError, SeriesError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
