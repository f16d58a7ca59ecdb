"""Command-line front end.

Exit codes: 0 pass, 2 a checked property fails, 3 refusal (for instance q
a root of unity where the computation needs generic q), 1 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from . import corepr, hopf, hull, pvt, qsimod
from .scalars import field_from_spec

EXIT_PASS, EXIT_INPUT, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2, 3


class InputError(Exception):
    pass


class Refusal(Exception):
    pass


@dataclass
class Outcome:
    ok: bool
    lines: list
    data: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _field(args, default="2"):
    text = args.q if args.q is not None else default
    try:
        return field_from_spec(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _module(args, F):
    data = _load_json(args.spec)
    if not isinstance(data, dict):
        raise InputError("module spec must be a JSON object")
    if "q" in data and args.q is None:
        try:
            F = field_from_spec(str(data["q"]))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    try:
        return qsimod.QsiModuleSpec.from_json(data, F), data
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad module spec: {exc!r}") from exc


def _names(F, data, extra_args):
    extra = dict(data.get("names", {})) if data else {}
    for item in extra_args or []:
        if "=" not in item:
            raise InputError(f"--name expects LABEL=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        extra[k] = v
    try:
        conv = {k: F.parse(str(v)) for k, v in extra.items()}
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return qsimod.default_names(F, conv)


def _r_element(R, text):
    try:
        return R.A(text.replace("tau", "τ"))
    except (ValueError, KeyError) as exc:
        raise InputError(f"cannot parse element {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args):
    F = _field(args)
    spec, _ = _module(args, F)
    rep = qsimod.validate(spec)
    return Outcome(rep.ok, [("valid" if rep.ok else "invalid") + ": " + "; ".join(rep.messages)],
                   {"valid": rep.ok, "messages": rep.messages, "module": spec.to_json(), **rep.data})


def cmd_solve(args):
    F = _field(args)
    spec, data = _module(args, F)
    rep = qsimod.validate(spec)
    if not rep.ok:
        return Outcome(False, ["invalid module: " + "; ".join(rep.messages)], {"messages": rep.messages})
    try:
        sol = qsimod.solve(spec, args.order)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    names = _names(F, data, args.name)
    check = qsimod.verify_solution(sol, args.order)
    triv = qsimod.trivializing_matrix(sol, args.order)
    Y = sol.Y.to_string(names)
    Z = triv.Z.to_string(names)
    ok = check.ok and triv.report.ok
    lines = [f"Y = {Y}", f"Z = Y^-1 = {Z}", f"exact: {sol.exact}"]
    lines += [f"note: {n}" for n in sol.notes]
    lines.append("solution check: " + ("pass" if check.ok else "FAIL " + "; ".join(check.messages)))
    lines.append("trivialization check: " + ("pass" if triv.report.ok else "FAIL " + "; ".join(triv.report.messages)))
    return Outcome(ok, lines, {"Y": sol.Y.format(names), "Z": triv.Z.format(names), "exact": sol.exact,
                               "notes": sol.notes, "solution_check": check.ok,
                               "solution_messages": check.messages, "trivialization_check": triv.report.ok,
                               "trivialization_messages": triv.report.messages})


def cmd_galois_group(args):
    F = _field(args)
    spec, _ = _module(args, F)
    rep = qsimod.validate(spec)
    if not rep.ok:
        return Outcome(False, ["invalid module: " + "; ".join(rep.messages)], {"messages": rep.messages})
    try:
        disc = corepr.corepresentation_hopf(spec, args.degree_bound)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    except RuntimeError as exc:
        return Outcome(False, [f"generation failed: {exc}"])
    lines = ["generators: " + ", ".join(disc.generators), "relations:"]
    lines += [f"  {r}" for r in disc.relation_strings()]
    lines.append("graded dimensions (degree, presented, image): "
                 + ", ".join(f"({d}, {a}, {b})" for d, a, b in disc.graded_dimensions))
    lines.append("witnesses:")
    for nm, x in disc.witnesses.items():
        lines.append(f"  {nm}: {x!r}")
    lines.append("coefficient matrix: "
                 + str([[corepr.format_entry(x, disc) for x in row] for row in
                        corepr.coefficient_functionals(spec).entries]))
    lines.append(f"bialgebra: {'pass' if disc.bialgebra.ok else 'FAIL'}; "
                 f"Hopf axioms: {'pass' if disc.axioms.ok else 'FAIL'} ({disc.axioms.checked} checks); "
                 f"complete: {disc.complete}")
    lines += [f"note: {n}" for n in disc.notes]
    ok = disc.bialgebra.ok and disc.axioms.ok and disc.complete
    return Outcome(ok, lines, disc.to_json())


def _builtin_hopf(name, F):
    if name.startswith("Taft"):
        try:
            N = int(name[4:])
        except ValueError as exc:
            raise InputError(f"unknown builtin {name!r}") from exc
        if F.root_of_unity_order() != N:
            F = None
        try:
            return hopf.Taft(N, F)
        except ValueError as exc:
            raise Refusal(str(exc)) from exc
    if name == "Hq":
        return hopf.Hq(F)
    if name == "GHq":
        return hopf.GHq(F)
    if name == "frakH":
        return hopf.frakH(F)
    if name == "G12_1":
        return hopf.galois_group_12_1(F)
    if name.startswith("G12_3"):
        l = name.partition(":")[2] or "3"
        return hopf.galois_group_12_3(F, F.parse(l))
    raise InputError(f"unknown builtin {name!r}; choose Hq, GHq, frakH, G12_1, G12_3[:l], TaftN")


def cmd_hopf_check(args):
    F = _field(args)
    try:
        H = _builtin_hopf(args.builtin, F)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    bi = hopf.verify_bialgebra(H)
    ax = hopf.verify_hopf_axioms(H, args.degree)
    lines = [f"{H.name}: bialgebra {'pass' if bi.ok else 'FAIL'} ({bi.checked} checks), "
             f"Hopf axioms {'pass' if ax.ok else 'FAIL'} ({ax.checked} checks)"]
    fails = [list(map(str, f)) for f in bi.failures + ax.failures]
    lines += [f"  failure: {' | '.join(f)}" for f in fails[:20]]
    return Outcome(bi.ok and ax.ok, lines, {"name": H.name, "bialgebra": bi.ok, "axioms": ax.ok,
                                            "checked": bi.checked + ax.checked, "failures": fails})


def cmd_torsor(args):
    F = _field(args)
    try:
        R, CA = pvt.coaction_R(F)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    checks = [("R is a qsi algebra", R.verify()), ("coaction", CA.verify()),
              ("equivariance", pvt.coaction_equivariance(R, CA, args.degree)),
              ("Galois map", pvt.galois_map_check(CA, args.degree))]
    lines = [f"{label}: {'pass' if rep.ok else 'FAIL ' + '; '.join(rep.messages)}" for label, rep in checks]
    return Outcome(all(r.ok for _, r in checks), lines,
                   {label: {"ok": r.ok, "messages": r.messages} for label, r in checks})


def cmd_taft(args):
    try:
        CA = pvt.taft_torsor(args.N, args.lam)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    H = CA.H
    lines, data, ok = [], {"N": args.N, "lambda": args.lam}, True
    checks = args.check or ["torsor"]
    if "torsor" in checks:
        v = CA.verify()
        g = pvt.galois_map_check(CA)
        ok &= v.ok and g.ok
        lines.append(f"comodule algebra: {'pass' if v.ok else 'FAIL ' + '; '.join(v.messages)}")
        lines.append(f"Galois map: {'pass' if g.ok else 'FAIL'} " + "; ".join(g.messages))
        data["torsor"] = {"comodule_algebra": v.ok, "galois": g.ok, **{k: str(x) for k, x in g.data.items()}}
    cl = None
    if "cleft" in checks or "trivialize" in checks:
        cl = pvt.cleft_check(CA, pvt.identity_phi(CA))
        ok &= cl.ok
        lines.append(f"cleft: {'pass' if cl.ok else 'FAIL ' + '; '.join(cl.messages)}")
        data["cleft"] = cl.ok
    if "trivialize" in checks:
        t = pvt.cleft_trivialize(pvt.taft_two_dim_comodule(H), CA, pvt.identity_phi(CA), cl)
        ok &= t.ok
        lines.append(f"trivializes the 2-dimensional comodule: {'pass' if t.ok else 'FAIL'} " + "; ".join(t.messages))
        data["trivialize"] = t.ok
    return Outcome(ok, lines, data)


def cmd_constants(args):
    F = _field(args)
    try:
        R = pvt.builtin_R(F)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    basis = pvt.constants(R, pvt.r_window(R, args.q_degree, args.tau_degree))
    shown = [repr(b) for b in basis]
    ok = len(basis) == 1 and basis[0].is_scalar()
    return Outcome(ok, [f"constants in window |Q-deg| <= {args.q_degree}, τ-deg <= {args.tau_degree}: "
                        + (", ".join(shown) or "0")], {"basis": shown, "only_scalars": ok})


def cmd_normalize(args):
    F = _field(args)
    try:
        R = pvt.builtin_R(F)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    a, b, c, d = (_r_element(R, s) for s in (args.a, args.b, args.c, args.d))
    try:
        rep = pvt.normalize_fundamental_system(R, a, b, c, d)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    lines = ["normalized onto R" if rep.ok else "failed: " + "; ".join(map(str, rep.messages))]
    if rep.ok:
        lines.append(f"a' = {rep.a}, b' = {rep.b}, f = {rep.f}, g = {rep.g}")
    return Outcome(rep.ok, lines, {"ok": rep.ok, "messages": list(map(str, rep.messages)),
                                   "a": repr(rep.a), "b": repr(rep.b), "f": repr(rep.f), "g": str(rep.g)})


def cmd_hull(args):
    F = _field(args)
    try:
        L = hull.RationalQsiField(F)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    lines, data, ok = [], {}, True
    if args.witness:
        try:
            w = hull.load_witness(F, _load_json(args.witness))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad witness file: {exc!r}") from exc
        rep = hull.deformation_witness(w, args.order)
        ok &= rep.ok
        lines.append(f"deformation: {'pass' if rep.ok else 'FAIL ' + '; '.join(rep.messages)}; "
                     f"e - 1 nilpotent: {rep.data.get('e_minus_1_nilpotent')}")
        data["deformation"] = {"ok": rep.ok, "messages": rep.messages, **rep.data}
    else:
        try:
            a = L(args.element)
            b = L(args.other) if args.other else None
        except (ValueError, TypeError, SyntaxError) as exc:
            raise InputError(f"cannot parse rational function: {exc}") from exc
        img = hull.universal_hopf(L, a, args.order)
        lines.append(f"ι({args.element}) = {img}")
        data["image"] = repr(img)
        if b is not None:
            rep = hull.verify_qsi_morphism(L, a, b, args.order)
            ok &= rep.ok
            lines.append(f"morphism check with b = {args.other}: {'pass' if rep.ok else 'FAIL ' + '; '.join(rep.messages)}")
            data["morphism"] = rep.ok
        if args.c is not None:
            rep = hull.hull_stability_check(F, F.parse(args.c), args.order)
            ok &= rep.ok
            lines.append(f"hull stability (c = {args.c}): {'pass' if rep.ok else 'FAIL ' + '; '.join(rep.messages)}")
            data["stability"] = rep.ok
    return Outcome(ok, lines, data)


def cmd_simplicity(args):
    F = _field(args)
    try:
        R = pvt.builtin_R(F)
    except ValueError as exc:
        raise Refusal(str(exc)) from exc
    elems = []
    if args.element:
        elems.append(_r_element(R, args.element))
    rng = random.Random(args.seed)
    for _ in range(args.random):
        elems.append(_random_r_element(R, rng, args.max_degree))
    if not elems:
        raise InputError("give --element or --random")
    lines, certs, ok = [], [], True
    for x in elems:
        if x.is_zero():
            continue
        cert = pvt.simplicity_reduce(R, x)
        good = pvt.replay(R, cert) == R.A.one()
        ok &= good
        moves = [list(map(str, m)) for m in cert.moves]
        certs.append({"start": repr(x), "moves": moves, "replayed": good})
        lines.append(f"{x}: {len(cert)} move(s) {moves} -> {'1' if good else 'FAIL'}")
    return Outcome(ok, lines, {"certificates": certs})


def _random_r_element(R, rng, max_degree):
    """Random nonzero combination of Q^a τ^b with |a| + b ≤ max_degree."""
    F = R.F
    words = [w for w in pvt.r_window(R, max_degree, max_degree) if len(w) <= max_degree]
    while True:
        terms = {}
        for w in rng.sample(words, rng.randint(1, 4)):
            c = F(rng.randint(-5, 5))
            if c != 0:
                terms[w] = c
        x = R.A.element(terms)
        if not x.is_zero():
            return x


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", help='value of q: a rational "p/r", "indeterminate", or "zetaN" (root of unity)')
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--json-out", metavar="PATH", help="write the machine-readable report here")

    p = argparse.ArgumentParser(prog="qsigalois", description="Exact q-skew iterative difference Galois computations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check BA = qAB for a module spec")
    s.add_argument("spec")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", parents=[common], help="solution matrix Y and its inverse")
    s.add_argument("spec")
    s.add_argument("--order", type=int, default=qsimod.DEFAULT_ORDER)
    s.add_argument("--name", action="append", help="label a geometric sequence, e.g. L=3")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("galois-group", parents=[common], help="Hopf algebra of coefficient functionals")
    s.add_argument("spec")
    s.add_argument("--degree-bound", type=int, default=2)
    s.set_defaults(func=cmd_galois_group)

    s = sub.add_parser("hopf-check", parents=[common], help="bialgebra and Hopf axioms of a builtin")
    s.add_argument("--builtin", required=True)
    s.add_argument("--degree", "--degree-bound", type=int, default=4, dest="degree")
    s.set_defaults(func=cmd_hopf_check)

    s = sub.add_parser("torsor", parents=[common], help="coaction and Galois map of R")
    s.add_argument("--degree", "--degree-bound", type=int, default=3, dest="degree")
    s.set_defaults(func=cmd_torsor)

    s = sub.add_parser("taft", parents=[common], help="torsors over Taft(N)")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=int, default=0)
    s.add_argument("--check", action="append", choices=["torsor", "cleft", "trivialize"])
    s.set_defaults(func=cmd_taft)

    s = sub.add_parser("constants", parents=[common], help="constants of R in a window")
    s.add_argument("--q-degree", type=int, default=4)
    s.add_argument("--tau-degree", type=int, default=4)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("normalize", parents=[common], help="normalize a fundamental system in R")
    for nm, default in (("a", "Q"), ("b", "τ"), ("c", "0"), ("d", "1")):
        s.add_argument(f"--{nm}", default=default)
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("hull", parents=[common], help="universal Hopf morphism and deformations")
    s.add_argument("--element", default="t")
    s.add_argument("--other", help="second rational function for the morphism check")
    s.add_argument("--c", help="constant c for the hull stability check")
    s.add_argument("--witness", help="JSON file with a deformation witness (e, f)")
    s.add_argument("--order", type=int, default=hull.DEFAULT_ORDER)
    s.set_defaults(func=cmd_hull)

    s = sub.add_parser("simplicity", parents=[common], help="reduce nonzero elements of R to 1")
    s.add_argument("--element")
    s.add_argument("--random", type=int, default=0, help="number of seeded random elements")
    s.add_argument("--max-degree", type=int, default=3)
    s.set_defaults(func=cmd_simplicity)
    return p


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    for nm in ("order", "degree_bound", "degree", "q_degree", "tau_degree", "max_degree"):
        if getattr(args, nm, 1) is not None and getattr(args, nm, 1) < 0:
            print(f"error: --{nm.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return EXIT_INPUT
    try:
        out = args.func(args)
        code = EXIT_PASS if out.ok else EXIT_FAIL
        status = "pass" if out.ok else "fail"
    except InputError as exc:
        out, code, status = Outcome(False, [f"input error: {exc}"]), EXIT_INPUT, "input-error"
    except Refusal as exc:
        out, code, status = Outcome(False, [f"refused: {exc}"]), EXIT_REFUSED, "refused"
    stream = sys.stdout if code in (EXIT_PASS, EXIT_FAIL) else sys.stderr
    for line in out.lines:
        print(line, file=stream)
    json_out = args.json_out
    if json_out is None and args.command == "solve" and code in (EXIT_PASS, EXIT_FAIL):
        json_out = args.spec.rsplit(".json", 1)[0] + ".solution.json"
    if json_out:
        report = {"command": args.command, "config": _config(args), "status": status,
                  "exit_code": code, "result": out.data, "lines": out.lines}
        try:
            with open(json_out, "w", encoding="utf-8") as fh:
                json.dump(report, fh, indent=2, ensure_ascii=False, default=str)
        except OSError as exc:
            print(f"cannot write {json_out}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
