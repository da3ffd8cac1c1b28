"""Command-line interface: ``lukamax <command> ...``.

Every command prints a JSON document (or a readable rendering with
``--pretty``) and exits 0 when the checked claim holds, 1 when it is refuted
and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import jfour, lattice, qvar, reproduce
from .algebra import AlgebraError, CloneCapExceeded, FiniteAlgebra, list_presets, load_algebra, make_chain, synth_unary, term_function
from .formula import FormulaError, parse, render
from .matrix import (
    DEFAULT_MAX_VARS,
    MatrixLogic,
    TooManyVariables,
    apply_unary,
    cpl,
    entails,
    is_paraconsistent,
    is_valid,
    lam,
    luk,
    lukbar,
    parse_sequent,
    rule_valid,
)
from .recovery import HypothesesNotMet, build_setup, classical_setup, recover

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# logic and algebra specs


def _ints(text: str, what: str) -> List[int]:
    try:
        return [int(x) for x in text.split(":")]
    except ValueError:
        raise UsageError(f"bad {what} spec {text!r}") from None


def parse_logic(spec: str) -> MatrixLogic:
    """``luk:n:i``, ``luk:n`` (filter {1}), ``lukbar:n:i``, ``cpl``, ``j4``, ``j4bar`` or ``alg:<path>[:designated]``."""
    if spec == "cpl":
        return cpl()
    if spec == "j4":
        return jfour.j4()
    if spec == "j4bar":
        return jfour.j4bar()
    head, _, rest = spec.partition(":")
    if head in ("luk", "lukbar"):
        nums = _ints(rest, head)
        if len(nums) == 1 and head == "luk":
            nums.append(nums[0])
        if len(nums) != 2:
            raise UsageError(f"{head} needs n and i, as in {head}:3:1")
        n, i = nums
        if n < 1 or not 1 <= i <= n:
            raise UsageError("need 1 <= i <= n")
        return luk(n, i) if head == "luk" else lukbar(n, i)
    if head == "alg":
        return _alg_logic(rest)
    raise UsageError(f"unknown logic {spec!r}; use luk:n:i, lukbar:n:i, cpl, j4, j4bar or alg:<path>[:designated]")


def _alg_logic(rest: str) -> MatrixLogic:
    path, des_text = rest, None
    try:
        A = load_algebra(path)
    except AlgebraError:
        if ":" not in rest:
            raise
        path, des_text = rest.rsplit(":", 1)
        A = load_algebra(path)
    if des_text is not None:
        des = [A.element(tok.strip()) for tok in des_text.split(",") if tok.strip()]
    elif A.designated is not None:
        des = sorted(A.designated)
    else:
        raise UsageError(f"{path} declares no designated set; append :<elements>")
    return MatrixLogic(A, des, ("alg", path), A.name)


def parse_algebra_spec(spec: str) -> FiniteAlgebra:
    """``luk:n`` (the chain LV(n+1)), any logic spec, or a preset/file name."""
    head, _, rest = spec.partition(":")
    if head == "luk" and rest and ":" not in rest:
        return make_chain(_ints(rest, "luk")[0])
    if head in ("luk", "lukbar", "alg") or spec in ("cpl", "j4", "j4bar"):
        return parse_logic(spec).algebra
    return load_algebra(spec)


# ---------------------------------------------------------------------------
# output


def _emit(args, doc: dict, pretty_lines: Optional[Sequence[str]] = None) -> None:
    if getattr(args, "pretty", False):
        if pretty_lines is None:
            pretty_lines = _pretty_dict(doc)
        print("\n".join(pretty_lines))
    else:
        print(json.dumps(doc, indent=2, sort_keys=False, default=str))


def _pretty_dict(doc, indent: int = 0) -> List[str]:
    pad = "  " * indent
    out = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_pretty_dict(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {v}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                out.append(f"{pad}-")
                out.extend(_pretty_dict(v, indent + 1))
            else:
                out.append(f"{pad}- {v}")
    else:
        out.append(f"{pad}{doc}")
    return out


def _table_lines(A: FiniteAlgebra, f) -> List[str]:
    t = term_function(A, f)
    width = max(len(x) for x in A.labels)
    return [f"  {A.labels[a]:>{width}} | {A.labels[int(t[a])]}" for a in range(A.size)]


def _verdict_doc(L: MatrixLogic, what: str, v) -> dict:
    doc = {"logic": L.name, "query": what}
    doc.update(v.to_json())
    return doc


def _max_vars(args) -> int:
    return getattr(args, "max_vars", None) or DEFAULT_MAX_VARS


def _clone_cap(args) -> int:
    return getattr(args, "clone_cap", None) or 5_000_000


def _logic_and_text(args, items: List[str], what: str):
    if len(items) == 2:
        return parse_logic(items[0]), items[1]
    if len(items) == 1 and getattr(args, "logic", None):
        return parse_logic(args.logic), items[0]
    raise UsageError(f"give a logic and a {what} (or pass --logic)")


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    L, text = _logic_and_text(args, args.items, "sequent")
    s = parse_sequent(text, L.sig)
    v = entails(L, s, _max_vars(args))
    _emit(args, _verdict_doc(L, s.render(), v))
    return EXIT_OK if v.holds else EXIT_REFUTED


def cmd_valid(args) -> int:
    L, text = _logic_and_text(args, args.items, "formula")
    f = parse(text, L.sig)
    v = is_valid(L, f, _max_vars(args))
    _emit(args, _verdict_doc(L, render(f), v))
    return EXIT_OK if v.holds else EXIT_REFUTED


def cmd_rule(args) -> int:
    L, text = _logic_and_text(args, args.items, "rule")
    s = parse_sequent(text, L.sig)
    v = rule_valid(L, s, _max_vars(args))
    _emit(args, _verdict_doc(L, s.render(), v))
    return EXIT_OK if v.holds else EXIT_REFUTED


def cmd_paraconsistent(args) -> int:
    L = parse_logic(args.logic_spec or args.logic or "")
    neg = parse(args.neg, L.sig)
    ok, wit = is_paraconsistent(L, neg)
    doc = {"logic": L.name, "negation": render(neg), "paraconsistent": ok}
    if wit:
        doc["witness"] = {k: L.label(v) for k, v in wit.items()}
    _emit(args, doc)
    return EXIT_OK if ok else EXIT_REFUTED


def _parse_assignment(L: MatrixLogic, text: Optional[str]):
    if not text:
        return None
    out = {}
    for part in text.split(","):
        var, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"bad assignment {part!r}; use var=value")
        out[var.strip()] = L.algebra.element(val.strip())
    return out


def cmd_recover(args) -> int:
    L1 = parse_logic(args.logic_spec or args.logic or "")
    cap = _clone_cap(args)
    try:
        if args.against:
            L2 = parse_logic(args.against)
            emb = _embedding(L1, L2, args.embedding)
            setup = build_setup(L1, L2, emb, cap=cap)
        else:
            setup = classical_setup(L1, cap=cap)
    except HypothesesNotMet as exc:
        _emit(args, {"logic": L1.name, "recovered": False, "reason": str(exc), "missing": list(exc.missing)})
        return EXIT_REFUTED
    phi = parse(args.phi, L1.sig) if args.phi else None
    art = recover(setup, phi, _parse_assignment(L1, args.e0))
    doc = {"logic": L1.name, "recovered": True, **art.to_json()}
    lines = None
    if args.pretty:
        lines = _pretty_dict({k: v for k, v in doc.items() if k != "circ_table"})
        if art.circ is not None:
            lines += ["circ truth table:"] + _table_lines(L1.algebra, art.circ)
        for (i, j), f in sorted(setup.alpha.items()):
            lines += [f"alpha {i},{j} = {render(f)}:"] + _table_lines(L1.algebra, f)
    _emit(args, doc, lines)
    return EXIT_OK


def _embedding(L1: MatrixLogic, L2: MatrixLogic, text: Optional[str]) -> List[int]:
    if text:
        return [L1.algebra.element(tok.strip()) for tok in text.split(",")]
    A1, A2 = L1.algebra, L2.algebra
    if A1.kind == "chain" and A2.kind == "chain":
        (n,), (m,) = A1.params, A2.params
        if n % m:
            raise UsageError(f"LV{m + 1} does not embed in LV{n + 1}")
        return [k * (n // m) for k in range(m + 1)]
    try:
        return [A1.element(lbl) for lbl in A2.labels]
    except AlgebraError:
        raise UsageError("cannot guess the embedding; pass --embedding") from None


def cmd_maximal(args) -> int:
    n, i, m = args.n, args.i, args.m
    if not 1 <= i <= n:
        raise UsageError("need 1 <= i <= n")
    if args.wrt == "cpl":
        ok = lattice.maximal_wrt_cpl(n, range(i, n + 1))
        doc = {"logic": f"L^{i}_{n}", "wrt": "CPL", "maximal": ok, "criterion": "sufficient: n prime and 0 undesignated"}
    elif m is None:
        raise UsageError("pass --m <divisor> or --wrt cpl")
    elif args.extensions:
        exts = lattice.maximal_extensions(n, m, i)
        ok = bool(exts)
        doc = {"n": n, "i": i, "m": m, "extensions": [e.members() for e in exts]}
    elif args.divset:
        S = lattice.DivisorSet(n, _int_list(args.divset), i)
        cert = lattice.axiomatic_ext_maximal(S, m)
        ok = cert.maximal
        doc = {"n": n, "i": i, "divset": S.members(), "m": m, **cert.to_json()}
    else:
        ok = lattice.maximal_pair(n, m)
        doc = {"logic": f"L^{i}_{n}", "wrt": str(lattice.restrict_logic(n, i, m)), "maximal": ok}
    _emit(args, doc)
    return EXIT_OK if ok else EXIT_REFUTED


def _int_list(text: str) -> List[int]:
    try:
        val = json.loads(text if text.strip().startswith("[") else f"[{text}]")
    except json.JSONDecodeError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None
    if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
        raise UsageError(f"expected a list of integers, got {text!r}")
    return val


def _family(text: str):
    val = json.loads(text if text.strip().startswith("[") else f"[{text}]")
    if val and all(isinstance(x, int) for x in val):
        val = [val]
    return [qvar.as_critical(v) for v in val]


def cmd_qvar(args) -> int:
    sub = args.qcmd
    if sub == "critical":
        cs = _int_list(args.chains)
        ok = qvar.is_critical(cs)
        doc = {"chains": cs, "critical": ok}
    elif sub == "include":
        F, G = _family(args.F), _family(args.G)
        ok = qvar.q_included(F, G)
        doc = {"F": [c.to_json() for c in F], "G": [c.to_json() for c in G], "included": ok}
    elif sub == "minimal":
        fams = qvar.minimal_over(args.over, args.k) if args.over else qvar.minimal_over_boolean(args.k)
        ok = True
        doc = {"k": args.k, "over": args.over or "boolean", "minimal": [[c.to_json() for c in f] for f in fams]}
    elif sub == "qid":
        qi = qvar.contradiction_qi(args.q) if args.n is None else qvar.general_contradiction_qi(args.n, args.q)
        A = qvar.as_critical(_int_list(args.on)).algebra()
        v = qvar.quasi_identity_holds(A, qi, _max_vars(args))
        ok = v.holds
        doc = {"quasi_identity": qi.render(), "algebra": A.name, **v.to_json()}
    else:
        rep = qvar.strong_max_report(args.q, args.j) if args.n is None else qvar.general_strong_max_report(args.n, args.j, args.q)
        ok = rep.ok
        doc = rep.to_json()
    _emit(args, doc)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_proof(args) -> int:
    try:
        cal, premises, steps, _ = jfour.load_proof(args.file)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot read proof file: {exc}") from None
    v = jfour.check_proof(cal, premises, steps)
    lines = None
    if args.pretty:
        lines = [f"{cal.name}: {'accepted' if v.accepted else 'rejected'}"]
        lines += [f"  {s.index:>3}. {s.formula:<40} {'ok ' if s.ok else 'BAD'} {s.message}" for s in v.steps]
        if v.error:
            lines.append(f"  error: {v.error}")
    _emit(args, v.to_json(), lines)
    return EXIT_OK if v.accepted else EXIT_REFUTED


def _element_or_index(A: FiniteAlgebra, tok: str) -> int:
    # bare integers are element indices, so "1:2" on LV5 means 1/4 -> 1/2
    tok = tok.strip()
    return A.element(int(tok)) if tok.isdigit() else A.element(tok)


def cmd_synth(args) -> int:
    A = parse_algebra_spec(args.algebra)
    target = {}
    for t in args.target:
        for part in t.split(","):
            src, sep, dst = part.partition(":")
            if not sep:
                raise UsageError(f"bad target {part!r}; use source:image")
            target[_element_or_index(A, src)] = _element_or_index(A, dst)
    try:
        f = synth_unary(A, target, _clone_cap(args))
    except CloneCapExceeded as exc:
        _emit(args, {"algebra": A.name, "found": False, "reason": str(exc)})
        return EXIT_REFUTED
    doc = {"algebra": A.name, "target": {A.labels[a]: A.labels[b] for a, b in target.items()}, "found": f is not None}
    if f is None:
        _emit(args, doc)
        return EXIT_REFUTED
    doc["term"] = render(f)
    doc["table"] = {A.labels[a]: A.labels[int(b)] for a, b in enumerate(term_function(A, f))}
    lines = [render(f)] + _table_lines(A, f) if args.pretty else None
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_translate(args) -> int:
    L = parse_logic(args.logic_spec)
    if L.ident[0] != "luk":
        raise UsageError("translate works on luk:n:i logics")
    _, n, i = L.ident
    f = parse(args.formula, L.sig)
    if args.direction == "tau":
        t, src, dst = lam(n, i), f"L^{i}_{n}", f"L^{n}_{n}"
    else:
        t, src, dst = lam(n, n), f"L^{n}_{n}", f"L^{i}_{n}"
    out = apply_unary(t, f)
    _emit(args, {"from": src, "to": dst, "term": render(t), "formula": render(f), "translation": render(out)})
    return EXIT_OK


def cmd_reproduce(args) -> int:
    only = []
    for item in args.only or []:
        only.extend(x.strip() for x in item.split(",") if x.strip())
    for name in only:
        if name not in reproduce.SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(reproduce.SUITES)}")
    qs = args.q or None

    def progress(res):
        if args.pretty:
            print(f"[{'PASS' if res.ok else 'FAIL'}] {res.name} ({res.seconds:.1f}s)")
            for c in res.claims:
                print(f"    {'ok  ' if c.ok else 'FAIL'} {c.name}")
            sys.stdout.flush()

    results = reproduce.run(only or None, qs, progress)
    ok = all(r.ok for r in results)
    if not args.pretty:
        print(json.dumps({"ok": ok, "suites": [r.to_json() for r in results]}, indent=2, default=str))
    else:
        print("all claims pass" if ok else "some claims FAIL")
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_presets(args) -> int:
    _emit(args, {"presets": list_presets()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="pretty", action="store_false", default=argparse.SUPPRESS, help="JSON output (default)")
    g.add_argument("--pretty", dest="pretty", action="store_true", default=argparse.SUPPRESS, help="readable output")
    p.add_argument("--logic", default=argparse.SUPPRESS, help="logic spec used when none is given positionally")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="accepted for compatibility; work runs in one process")
    p.add_argument("--max-vars", type=int, default=argparse.SUPPRESS, help=f"variable bound for exhaustive checks (default {DEFAULT_MAX_VARS})")
    p.add_argument("--clone-cap", type=int, default=argparse.SUPPRESS, help="bound on the clone search size")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="lukamax", description="Finite Lukasiewicz logics: consequence, recovery, maximality, quasivarieties, J4 proofs.", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=fn)
        return p

    for name, fn, what in (("check", cmd_check, "sequent"), ("valid", cmd_valid, "formula"), ("rule", cmd_rule, "rule")):
        p = add(name, fn, f"decide a {what} in a matrix logic")
        p.add_argument("items", nargs="+", metavar="LOGIC_OR_TEXT", help=f"[LOGIC] {what.upper()}")

    p = add("paraconsistent", cmd_paraconsistent, "look for a paraconsistency witness")
    p.add_argument("logic_spec", nargs="?")
    p.add_argument("--neg", default="!p", help="negation template in p (default !p)")

    p = add("recover", cmd_recover, "build the maximality setup and the recovery operator")
    p.add_argument("logic_spec", nargs="?")
    p.add_argument("--against", help="the smaller logic (default: the Boolean subalgebra)")
    p.add_argument("--embedding", help="images of the smaller algebra's elements, comma separated")
    p.add_argument("--phi", help="separating theorem (found automatically if omitted)")
    p.add_argument("--e0", help="refuting assignment for --phi, e.g. p1=1/2")

    p = add("maximal", cmd_maximal, "number-theoretic maximality deciders")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, default=1, help="filter index (default 1)")
    p.add_argument("--m", type=int, help="divisor m of n: compare with L^{i/n}_m")
    p.add_argument("--wrt", choices=["cpl"], help="use the sufficient criterion for maximality w.r.t. CPL")
    p.add_argument("--divset", help="divisor set of an axiomatic extension, e.g. 2,3")
    p.add_argument("--extensions", action="store_true", help="list the extensions maximal w.r.t. L^{i/n}_m")

    p = add("qvar", cmd_qvar, "quasivarieties of MV-algebras")
    qs = p.add_subparsers(dest="qcmd", required=True)
    q = qs.add_parser("critical", parents=[common])
    q.add_argument("chains")
    q = qs.add_parser("include", parents=[common])
    q.add_argument("F")
    q.add_argument("G")
    q = qs.add_parser("minimal", parents=[common])
    q.add_argument("k", type=int)
    q.add_argument("--over", type=int, help="base chain parameter n (default: Boolean algebras)")
    q = qs.add_parser("qid", parents=[common])
    q.add_argument("q", type=int)
    q.add_argument("--on", required=True, help="critical algebra, e.g. [3,1]")
    q.add_argument("--n", type=int, help="use the nq(x & !x) variant with subchain n")
    q = qs.add_parser("strongmax", parents=[common])
    q.add_argument("q", type=int)
    q.add_argument("j", type=int, help="filter index (with --n: the index i of L^i_n)")
    q.add_argument("--n", type=int)

    p = add("proof", cmd_proof, "check a Hilbert proof file")
    p.add_argument("action", choices=["check"])
    p.add_argument("file")

    p = add("synth", cmd_synth, "find a one-variable term with prescribed values")
    p.add_argument("algebra", help="luk:n, a logic spec or a preset name")
    p.add_argument("--target", action="append", required=True, help="source:image pairs (indices or labels)")

    p = add("translate", cmd_translate, "translate a formula between L^i_n and L^n_n")
    p.add_argument("logic_spec")
    p.add_argument("formula")
    p.add_argument("--direction", choices=["tau", "sigma"], default="tau")

    p = add("reproduce", cmd_reproduce, "run the reproduction battery")
    p.add_argument("--only", action="append", help="suite name(s), comma separated")
    p.add_argument("--q", type=int, action="append", help="prime(s) for the explosion and strongmax suites")

    add("presets", cmd_presets, "list the shipped algebra presets")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    for name, default in (("pretty", False), ("logic", None), ("jobs", 1), ("max_vars", None), ("clone_cap", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.jobs is not None and args.jobs < 1:
        ap.error("--jobs must be positive")
    try:
        return args.func(args)
    except (UsageError, FormulaError, AlgebraError, TooManyVariables, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
