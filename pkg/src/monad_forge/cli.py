"""Command-line front end: ``monad-forge <subcommand> [options]``.

Exit codes: 0 success, 1 a verification found a violation (witnesses are in
the output), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import beck, fpmod, presentation, reflect
from .errors import MonadForgeError, NotLevel, ParseError
from .families import canonical_modules
from .fpmod import decompose
from .matrix import smith_normal_form
from .ring import ring_from_tag
from .syntax import (format_matrix, parse_ideals, parse_level, parse_matrix,
                     parse_module, parse_morphism, parse_presentation)

SCHEMA = "monad-forge/1"

# every library operation and the one subcommand that exposes it
OPERATIONS = {
    "normalize": "factor", "factor": "factor", "ext_gcd": "factor",
    "smith_normal_form": "snf", "solve_morphism_equation": "snf",
    "decompose": "decompose", "biproduct": "decompose",
    "hom_enumerate": "hom", "kernel": "hom", "cokernel": "hom", "coequalizer": "hom",
    "is_isomorphism": "hom",
    "reflect": "reflect", "torsion_radical": "reflect", "reflector_via_coequalizer": "reflect",
    "contains": "contains",
    "universal_property_check": "check-universal",
    "check_homological": "check-homological",
    "free_on_elements": "bar-head", "bar_head": "bar-head",
    "loc_poset": "loc-poset", "enumerate_levels": "loc-poset", "poset_compare": "loc-poset",
    "coordinates": "coordinates",
    "kleisli_closure": "kleisli-closure",
    "split_coequalizer_solve": "beck-probe", "field_extension_probe": "beck-probe",
}


class CheckFailed(Exception):
    """Raised after output has been written when a verification failed."""


# -- output --------------------------------------------------------------------

def _emit(args, payload: dict, table: str | None = None, dot: str | None = None, default="json"):
    fmt = args.format or default
    if fmt == "json" or (fmt == "table" and table is None) or (fmt == "dot" and dot is None):
        text = json.dumps({"schema": SCHEMA, **payload}, separators=(",", ":"), ensure_ascii=False)
        sys.stdout.write(text + "\n")
    elif fmt == "dot":
        sys.stdout.write(dot)
    else:
        sys.stdout.write(table.rstrip("\n") + "\n")


def _ring(args, default="z"):
    return ring_from_tag(args.ring or default)


def _level_or_presentation(args, R):
    if getattr(args, "presentation", None):
        return parse_presentation(R, args.presentation)
    if getattr(args, "f", None):
        return presentation.PresentationRecord.from_level(parse_level(R, args.f))
    raise ParseError("give --f or --presentation")


def _literal(M) -> str:
    return str(decompose(M))


def _canon(M) -> dict:
    return decompose(M).to_json()


# -- subcommands -----------------------------------------------------------------

def cmd_factor(args):
    R = _ring(args)
    e = R.parse(args.element)
    if args.gcd is not None:
        b = R.parse(args.gcd)
        g, u, v = R.ext_gcd(e, b)
        fmt = R.format
        _emit(args, {"a": fmt(e), "b": fmt(b), "g": fmt(g), "u": fmt(u), "v": fmt(v)},
              f"gcd = {fmt(g)} = ({fmt(u)})*({fmt(e)}) + ({fmt(v)})*({fmt(b)})")
        return
    if args.normalize:
        c, u = R.normalize(e)
        _emit(args, {"element": R.format(e), "canonical": R.format(c), "unit": R.format(u)},
              f"{R.format(e)} = ({R.format(u)}) * {R.format(c)}")
        return
    fac = R.factor(e)
    factors = [[str(m), k] for m, k in fac.factors]
    parts = [f"({m})" + (f"^{k}" if k > 1 else "") for m, k in factors]
    unit = R.format(fac.unit)
    table = f"{R.format(e)} = " + " * ".join(([] if unit == "1" else [unit]) + parts or ["1"])
    _emit(args, {"element": R.format(e), "unit": unit, "factors": factors}, table)


def cmd_snf(args):
    R = _ring(args)
    A = parse_matrix(R, args.matrix)
    if args.solve is not None:
        C = parse_matrix(R, args.solve)
        X = fpmod.solve_morphism_equation(A, C)
        _emit(args, {"solvable": X is not None, "X": None if X is None else format_matrix(R, X)},
              "no solution" if X is None else json.dumps(format_matrix(R, X)))
        return
    s = smith_normal_form(A)
    diag = [R.format(d) for d in s.diagonal]
    _emit(args, {"diagonal": diag, "U": format_matrix(R, s.U), "D": format_matrix(R, s.D),
                 "V": format_matrix(R, s.V)}, "diag(" + ", ".join(diag) + ")")


def cmd_decompose(args):
    R = _ring(args)
    mods = [parse_module(R, t) for t in args.module]
    M = mods[0] if len(mods) == 1 else fpmod.biproduct(mods, R)[0]
    c = decompose(M)
    _emit(args, c.to_json(), str(c))


def cmd_hom(args):
    R = _ring(args)
    M = parse_module(R, args.module[0])
    N = parse_module(R, args.target) if args.target else M
    act = args.action
    if act == "enumerate":
        homs = fpmod.hom_enumerate(M, N, args.bound, args.hom_cap)
        mats = [format_matrix(R, h.matrix) for h in homs]
        _emit(args, {"count": len(homs), "morphisms": mats},
              "\n".join(json.dumps(m) for m in mats) or "(none)")
        return
    if act == "count":
        n = fpmod.hom_count(M, N)
        _emit(args, {"count": n}, str(n))
        return
    phi = parse_morphism(R, M, N, args.matrix) if args.matrix else None
    if phi is None:
        raise ParseError(f"--action {act} needs --matrix")
    if act == "kernel":
        K, iota = fpmod.kernel(phi)
        _emit(args, {"kernel": _canon(K), "literal": _literal(K),
                     "inclusion": format_matrix(R, iota.matrix)}, _literal(K))
    elif act == "cokernel":
        Q, q = fpmod.cokernel(phi)
        _emit(args, {"cokernel": _canon(Q), "literal": _literal(Q),
                     "quotient": format_matrix(R, q.matrix)}, _literal(Q))
    elif act == "iso":
        inv = fpmod.inverse(phi)
        _emit(args, {"isomorphism": inv is not None,
                     "inverse": None if inv is None else format_matrix(R, inv.matrix)},
              "true" if inv is not None else "false")
    elif act == "coequalizer":
        if not args.matrix2:
            raise ParseError("--action coequalizer needs --matrix2")
        g = parse_morphism(R, M, N, args.matrix2)
        Q, q = fpmod.coequalizer(phi, g)
        _emit(args, {"coequalizer": _canon(Q), "literal": _literal(Q),
                     "quotient": format_matrix(R, q.matrix)}, _literal(Q))


def cmd_reflect(args):
    R = _ring(args)
    f = parse_level(R, args.f)
    M = parse_module(R, args.module[0])
    if args.radical:
        U, iota = reflect.torsion_radical(f, M, args.bound)
        Q, _ = fpmod.cokernel(iota)
        S, _ = reflect.reflect_structural_radical(f, M)
        agree = decompose(Q) == decompose(reflect.reflect(f, M).module) and decompose(S) == decompose(U)
        _emit(args, {"radical": _literal(U), "inclusion": format_matrix(R, iota.matrix),
                     "quotient": _literal(Q), "structuralRadical": _literal(S), "agree": agree},
              f"radical: {_literal(U)}\nquotient: {_literal(Q)}", default="table")
        if not agree:
            raise CheckFailed
        return
    if args.via_coequalizer:
        V = presentation.reflector_via_coequalizer(f, M, args.bound)
        L = reflect.reflect(f, M).module
        agree = decompose(V) == decompose(L)
        _emit(args, {"coequalizer": _literal(V), "reflection": _literal(L), "agree": agree},
              _literal(V), default="table")
        if not agree:
            raise CheckFailed
        return
    r = reflect.reflect(f, M)
    _emit(args, {"module": _literal(r.module), "canonical": _canon(r.module),
                 "unit": format_matrix(R, r.unit.matrix), "identity": r.is_identity},
          _literal(r.module), default="table")


def cmd_contains(args):
    R = _ring(args)
    f = parse_level(R, args.f)
    M = parse_module(R, args.module[0])
    v = reflect.contains(f, M)
    _emit(args, {"contains": v}, "true" if v else "false", default="table")


def cmd_check_universal(args):
    R = _ring(args)
    f = parse_level(R, args.f)
    M = parse_module(R, args.module[0])
    rep = reflect.universal_property_check(f, M, args.bound)
    _emit(args, rep.to_json())
    if not rep.ok:
        raise CheckFailed


def _family(args, R):
    if args.module:
        return [parse_module(R, t) for t in args.module]
    ideals = parse_ideals(R, args.family)
    return [c.to_module() for c in canonical_modules(R, args.family_bound, ideals)]


def cmd_check_homological(args):
    R = _ring(args)
    P = _level_or_presentation(args, R)
    fam = _family(args, R)
    rep = presentation.check_homological(P, fam, args.bound)
    _emit(args, rep.to_json())
    if not (rep.verdict and rep.agree):
        raise CheckFailed


def cmd_bar_head(args):
    R = _ring(args)
    Y = parse_module(R, args.module[0])
    if args.free_only:
        fp = presentation.free_on_elements(Y, args.bound)
        _emit(args, {"generators": fp.labels(),
                     "relators": [fp.format_vector(r) for r in fp.relators],
                     "augmentation": format_matrix(R, fp.augmentation.matrix)},
              "\n".join(fp.format_vector(r) for r in fp.relators))
        return
    P = _level_or_presentation(args, R)
    bh = presentation.bar_head(P, Y, args.bound)
    basis = [[R.format(x) for x in b] for b in bh.difference_basis]
    split = bh.verify_split()
    _emit(args, {"generators": bh.stage0.labels(), "relatorCount": len(bh.stage0.relators),
                 "differenceBasis": basis, "coequalizer": _literal(bh.coequalizer),
                 "canonicalMap": format_matrix(R, bh.canonical_map.matrix),
                 "iso": bh.is_iso, "split": split},
          f"difference basis: {json.dumps(basis)}\ncoequalizer: {_literal(bh.coequalizer)}\n"
          f"canonical map iso: {str(bh.is_iso).lower()}")
    if not (bh.is_iso and split):
        raise CheckFailed


def cmd_loc_poset(args):
    R = _ring(args)
    if args.compare:
        f, g = (parse_level(R, t) for t in args.compare)
        rel = reflect.poset_compare(f, g)
        _emit(args, {"relation": rel, "meet": f.meet(g).to_json(), "join": f.join(g).to_json()},
              f"{rel}\nmeet: {f.meet(g)}\njoin: {g.join(f)}", default="table")
        return
    support = parse_ideals(R, args.support)
    values = args.values.split(",") if args.values else None
    cap = args.cap if values is None else None
    if values is None and cap is None:
        raise ParseError("give --values or --cap")
    if args.list:
        levels = reflect.enumerate_levels(support, cap, args.default, values)
        _emit(args, {"count": len(levels), "levels": [f.to_json() for f in levels]},
              "\n".join(str(f) for f in levels), default="table")
        return
    rep = presentation.loc_poset(support, values, cap, args.default, args.bound, ring=R)
    table = "\n".join(f"{rep.nodes[a]}  <  {rep.nodes[b]}" for a, b in rep.edges)
    _emit(args, rep.to_json(), table, rep.to_dot(), default="dot")
    if not rep.order_embedding:
        raise CheckFailed


def cmd_coordinates(args):
    R = _ring(args)
    P = _level_or_presentation(args, R)
    try:
        d = presentation.coordinates(P)
    except NotLevel:
        raw = {str(m): sorted(es) for m, es in P.admit}
        _emit(args, {"level": False, "free": "A", "admit": raw, "defaultAdmit": P.default_admit},
              f"not a level presentation; admitted exponents {json.dumps(raw)}, "
              f"elsewhere {P.default_admit}", default="table")
        return
    _emit(args, {"level": True, **d}, d["text"], default="table")


def cmd_kleisli_closure(args):
    if args.ring not in (None, "zi"):
        raise ParseError("kleisli-closure works over the Gaussian integers (--ring zi)")
    out = presentation.kleisli_closure(args.p, args.n)
    ok = all(e >= args.n for _, e in out)
    _emit(args, {"p": args.p, "n": args.n, "ideals": [[str(m), e] for m, e in out], "ok": ok},
          "\n".join(f"({m}): {e}" for m, e in out))
    if not ok:
        raise CheckFailed


def cmd_beck_probe(args):
    if args.split:
        R = _ring(args)
        X = parse_module(R, args.module[0])
        Y = parse_module(R, args.target)
        Q = parse_module(R, args.quotient)
        f = parse_morphism(R, X, Y, args.f_matrix)
        g = parse_morphism(R, X, Y, args.g_matrix)
        q = parse_morphism(R, Y, Q, args.q_matrix)
        res = beck.split_coequalizer_solve(f, g, q, args.bound, args.method)
        payload = {"split": res is not None,
                   "s": None if res is None else format_matrix(R, res[0].matrix),
                   "t": None if res is None else format_matrix(R, res[1].matrix)}
        _emit(args, payload, "no splitting" if res is None else
              f"s = {json.dumps(payload['s'])}\nt = {json.dumps(payload['t'])}")
        return
    rep = beck.field_extension_probe(args.p, args.k, args.dims, args.trials, args.seed)
    _emit(args, rep.to_json(), f"{rep.trials} trials, {len(rep.counterexamples)} counterexamples")
    if not rep.ok:
        raise CheckFailed


# -- parser --------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, bound: int) -> None:
    # added per subparser: shared parent actions would also share their defaults
    p.add_argument("--ring", default=None, help="z | zi | fpx:<p> (default z)")
    p.add_argument("--format", choices=["json", "dot", "table"], default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None, help="JSON file mirroring the flags; flags win")
    p.add_argument("--bound", type=int, default=bound, help=f"element cap (default {bound})")
    p.add_argument("--hom-cap", type=int, default=1_000_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monad-forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, bound=10_000):
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp, bound)
        sp.set_defaults(func=fn, subparser=sp)
        return sp

    sp = add("factor", cmd_factor, "factor, normalize or gcd ring elements")
    sp.add_argument("--element", required=True)
    sp.add_argument("--gcd", default=None)
    sp.add_argument("--normalize", action="store_true")

    sp = add("snf", cmd_snf, "Smith normal form, or solve B X = C")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--solve", default=None)

    sp = add("decompose", cmd_decompose, "canonical form of a module (several: direct sum)")
    sp.add_argument("--module", action="append", required=True)

    sp = add("hom", cmd_hom, "hom sets, kernels, cokernels, isomorphisms, coequalizers")
    sp.add_argument("--module", action="append", required=True)
    sp.add_argument("--target", default=None)
    sp.add_argument("--action", default="enumerate",
                    choices=["enumerate", "count", "kernel", "cokernel", "iso", "coequalizer"])
    sp.add_argument("--matrix", default=None)
    sp.add_argument("--matrix2", default=None)

    sp = add("reflect", cmd_reflect, "reflect a module along a level function")
    sp.add_argument("--f", required=True)
    sp.add_argument("--module", action="append", required=True)
    sp.add_argument("--radical", action="store_true")
    sp.add_argument("--via-coequalizer", action="store_true")

    sp = add("contains", cmd_contains, "membership in the subcategory of a level function")
    sp.add_argument("--f", required=True)
    sp.add_argument("--module", action="append", required=True)

    sp = add("check-universal", cmd_check_universal, "exhaustive unique-factorization check",
             bound=16)
    sp.add_argument("--f", required=True)
    sp.add_argument("--module", action="append", required=True)

    sp = add("check-homological", cmd_check_homological, "coequalizer condition on a family",
             bound=16)
    sp.add_argument("--f", default=None)
    sp.add_argument("--presentation", default=None)
    sp.add_argument("--module", action="append", default=None)
    sp.add_argument("--family", default="2,3", help="primes whose torsion modules form the family")
    sp.add_argument("--family-bound", type=int, default=16)

    sp = add("bar-head", cmd_bar_head, "coequalizer of the counit pair for one module", bound=256)
    sp.add_argument("--f", default=None)
    sp.add_argument("--presentation", default=None)
    sp.add_argument("--module", action="append", required=True)
    sp.add_argument("--free-only", action="store_true")

    sp = add("loc-poset", cmd_loc_poset, "poset of level presentations on a finite support",
             bound=64)
    sp.add_argument("--support", default="")
    sp.add_argument("--values", default=None)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--default", default="inf")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--compare", nargs=2, default=None, metavar=("F", "G"))

    sp = add("coordinates", cmd_coordinates, "indecomposables of a level presentation")
    sp.add_argument("--f", default=None)
    sp.add_argument("--presentation", default=None)

    sp = add("kleisli-closure", cmd_kleisli_closure, "prime-power summands of ZI/(p^n)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("beck-probe", cmd_beck_probe, "field-extension split-exactness probe or split solve")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--dims", type=int, default=3)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--split", action="store_true")
    sp.add_argument("--module", action="append", default=None)
    sp.add_argument("--target", default=None)
    sp.add_argument("--quotient", default=None)
    sp.add_argument("--f-matrix", default=None)
    sp.add_argument("--g-matrix", default=None)
    sp.add_argument("--q-matrix", default=None)
    sp.add_argument("--method", choices=["linear", "exhaustive"], default="linear")
    return parser


def _config_argv(argv: list[str]) -> list[str]:
    """Append flags from ``--config`` that the command line does not already set."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ParseError("config must be a JSON object")
    extra = []
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if flag == "--config" or any(t == flag or t.startswith(flag + "=") for t in argv):
            continue
        if value is True:
            extra.append(flag)
        elif value is False or value is None:
            continue
        elif isinstance(value, list) and key in ("module", "compare"):
            if key == "compare":
                extra += [flag] + [v if isinstance(v, str) else json.dumps(v) for v in value]
            else:
                for v in value:
                    extra += [flag, v if isinstance(v, str) else json.dumps(v)]
        else:
            extra += [flag, value if isinstance(value, str) else json.dumps(value)]
    return argv + extra


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _config_argv(argv)
    except ParseError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"monad-forge: error: {exc}\n")
        return 2
    args = parser.parse_args(argv)
    try:
        if not (args.bound > 0 and args.hom_cap > 0):
            raise ParseError("bounds must be positive integers")
        args.func(args)
    except CheckFailed:
        return 1
    except (MonadForgeError, ArithmeticError) as exc:
        args.subparser.print_usage(sys.stderr)
        sys.stderr.write(f"monad-forge {args.command}: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
