"""Command-line front end: ``asaut <command> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 a resource limit was hit or
the computation could not settle, 3 a golden mismatch or a structure violation.
Progress lines go to standard error so standard output stays parseable.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .analyzer import (
    Stratum,
    _data,
    analyze,
    beta_strata,
    cached_analysis,
    classify_sz,
    classify_values,
    compare_with_golden,
    extract_beta_polynomial,
    generic_family,
    golden_table,
    sz_family,
    theorem_table,
    u2k_experiment,
    unipotent_ideal,
)
from .curve import SZ_EQUATIONS, CurveSpec, parse_assignments, scholten_zhu
from .errors import (
    AsautError,
    LimitExceeded,
    NotStabilized,
    PatternMiss,
    SquarefreenessUnknown,
    StructureViolation,
    UnsupportedGenus,
)
from .groebner import Limits
from .oracle import (
    check_witness,
    enumerate_automorphisms,
    stabilize,
    stabilize_point,
    verify_group_structure,
)

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _progress(stats) -> None:
    print(f"[groebner] pairs={stats.pairs_processed} basis={stats.basis_size} pending={stats.pending_pairs} "
          f"zero={stats.zero_reductions} {stats.elapsed:.1f}s", file=sys.stderr, flush=True)


def _oracle_progress(m, count) -> None:
    print(f"[oracle] GF(2^{m}): {count} automorphisms", file=sys.stderr, flush=True)


def _limits(args) -> Limits:
    try:
        lim = Limits.from_env()
    except ValueError as exc:
        raise UsageError(f"ASAUT_LIMITS: {exc}") from None
    if getattr(args, "time_limit", None) is not None:
        lim.max_seconds = args.time_limit
    return lim


def _presets(items) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in items or ():
        try:
            out.update(parse_assignments(item))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def _coeffs(text: str | None) -> dict[str, int]:
    try:
        return parse_assignments(text or "")
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _strata_lines(strata, indent: str = "  ") -> list[str]:
    lines = []
    for s in strata:
        extra = f" ({s.alias})" if s.alias else ""
        lines.append(f"{indent}{s.ra}{extra}  #Aut={s.aut_order}  if {s.describe()}")
    return lines


# --------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    fam = generic_family(args.n)
    a = analyze(fam, args.order, _presets(args.set), method=args.method, limits=_limits(args),
                progress=_progress)
    lines = [f"n={a.n}  order={a.order}  presets={a.presets or {}}"]
    for st in a.stages:
        lines.append(f"stage {st['order']} presets={st['presets']}: basis of {st['basis_size']} elements")
    lines.append("alpha constraints:")
    lines += [f"  ({c.cofactor}) * ({'alpha' if c.d == 1 else f'alpha^{c.d}'} + 1)" for c in a.alpha_constraints]
    lines.append("beta relations:")
    lines += [f"  {b}" for b in a.beta_data]
    lines.append("strata:")
    lines += _strata_lines(a.strata)
    if a.heuristic:
        lines.append("note: the gcd rule for r is heuristic beyond n=6")
    _emit(args, a.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_unipotent(args) -> int:
    presets = _presets(args.set)
    Gu = unipotent_ideal(generic_family(args.n), presets, args.order, method=args.method, limits=_limits(args),
                         progress=_progress)
    beta = extract_beta_polynomial(Gu)
    strata = [{"l": ell, "conditions": Stratum(c, 1, ell).condition_strings()} for ell, c in beta_strata(beta)]
    payload = {"n": args.n, "order": args.order, "presets": presets, "basis": Gu.strings(),
               "eliminated": Gu.eliminated, "beta_data": [str(b) for b in beta], "beta_strata": strata}
    lines = [f"unipotent ideal, n={args.n}, order={args.order}: {len(Gu)} elements"]
    lines += [f"  {g}" for g in Gu.strings()]
    lines.append("beta relations:")
    lines += [f"  {b}" for b in beta]
    lines.append("unipotent strata:")
    lines += [f"  l={s['l']}  if {' and '.join(' or '.join(c) for c in s['conditions']) or 'always'}" for s in strata]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _concrete_curve(n: int, coeffs: dict, m: int) -> CurveSpec:
    return CurveSpec.concrete(n, coeffs, m)


def _dump(args, res) -> None:
    if args.dump_automorphisms in (None, "json"):
        return
    rows = [a.to_json() for a in res.automorphisms]
    text = json.dumps(rows, indent=1)
    if args.dump_automorphisms == "-":
        print(text, file=sys.stderr)
    else:
        with open(args.dump_automorphisms, "w") as fh:
            fh.write(text + "\n")


def cmd_enumerate(args) -> int:
    curve = _concrete_curve(args.n, _coeffs(args.coeffs), args.field_deg)
    if args.stabilize and args.n <= 6:
        # the symbolic beta relations say which field holds every automorphism
        coeffs = {f"a_{i}": c.value for i, c in enumerate(curve.coeffs)}
        res = stabilize_point(cached_analysis(generic_family(args.n)), coeffs, curve.field.degree,
                              args.threads, _oracle_progress)[0]
    elif args.stabilize:
        res = stabilize(curve, threads=args.threads, progress=_oracle_progress)
    else:
        res = enumerate_automorphisms(curve, threads=args.threads)
    payload = res.to_json(dump=args.dump_automorphisms == "json")
    rep = res.report
    lines = [f"{curve} over GF(2^{res.m}) (modulus {res.field.modulus:#b}): {len(res)} automorphisms"]
    if args.stabilize:
        lines.append(f"stabilized ({res.settled_by}); counts {res.counts}")
    if rep is not None:
        lines.append(f"counted structure: RA = {rep.ra_structure}  (#Im rho={rep.r}, #U=2^{rep.ell})")
    if args.stabilize:
        verify_group_structure(res)
        lines.append("group structure verified")
    _dump(args, res)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _agreement(analysis, coeffs: dict, field_degree: int, report, threads: int) -> tuple[dict, bool | None]:
    try:
        res, order, _ = stabilize_point(analysis, coeffs, field_degree, threads, _oracle_progress)
    except NotStabilized as exc:
        return {"stabilized": False, "counts": {str(k): v for k, v in exc.counts.items()}}, None
    verify_group_structure(res)
    agree = len(res) == report.aut_order
    return {"stabilized": True, "m": res.m, "count": len(res), "settled_by": res.settled_by,
            "alpha_order": order, "counts": {str(k): v for k, v in res.counts.items()}}, agree


def _report_text(report, oracle: dict, agree) -> str:
    lines = [f"RA = {report.ra_structure}" + (f" ({report.alias})" if report.alias else "")
             + f"  #Aut = {report.aut_order}  (r={report.r}, l={report.ell})"]
    if report.stratum:
        lines.append(f"stratum: {report.stratum}")
    if report.heuristic:
        lines.append("note: the gcd rule for r is heuristic beyond n=6")
    if oracle.get("stabilized"):
        lines.append(f"oracle: {oracle['count']} automorphisms over GF(2^{oracle['m']}) "
                     f"({'agrees' if agree else 'DISAGREES'})")
    else:
        lines.append(f"oracle: not stabilized (counts {oracle['counts']}); agreement unverified")
    return "\n".join(lines)


def cmd_classify(args) -> int:
    curve = _concrete_curve(args.n, _coeffs(args.coeffs), args.field_deg)
    analysis = cached_analysis(generic_family(args.n))
    values = {f"a_{i}": c for i, c in enumerate(curve.coeffs)}
    report = classify_values(analysis, values, curve.field)
    coeffs = {k: v.value for k, v in values.items()}
    oracle, agree = ({}, None) if args.no_oracle else _agreement(analysis, coeffs, args.field_deg, report,
                                                                 args.threads)
    payload = dict(report.to_json(), oracle=oracle, agreement=agree)
    _emit(args, payload, _report_text(report, oracle, agree) if oracle else _report_text(
        report, {"counts": {}}, None))
    return EXIT_MISMATCH if agree is False else EXIT_OK


def cmd_sz(args) -> int:
    g = args.genus
    if SZ_EQUATIONS.get(g) == "none":
        raise UsageError(f"genus {g}: the Scholten-Zhu table lists 'none' for this genus")
    if args.coeffs is None:
        a = cached_analysis(sz_family(g))
        lines = [f"g={g}: {SZ_EQUATIONS[g]}", "strata:"] + _strata_lines(a.strata)
        _emit(args, dict(a.to_json(), genus=g, equation=SZ_EQUATIONS[g]), "\n".join(lines))
        return EXIT_OK
    coeffs = _coeffs(args.coeffs)
    report = classify_sz(g, coeffs, args.field_deg)
    curve = scholten_zhu(g, coeffs, args.field_deg)
    analysis = cached_analysis(sz_family(g))
    oracle, agree = ({}, None) if args.no_oracle else _agreement(analysis, coeffs, args.field_deg, report,
                                                                 args.threads)
    payload = dict(report.to_json(), genus=g, curve=str(curve), oracle=oracle, agreement=agree)
    _emit(args, payload, f"g={g}: {curve}\n" + _report_text(report, oracle or {"counts": {}}, agree))
    return EXIT_MISMATCH if agree is False else EXIT_OK


def _verify_witnesses(which: int, rows: list[dict], threads: int) -> list[dict]:
    analyses = {row["key"]: row["analysis"] for row in rows if "analysis" in row}
    out = []
    for w in _data("golden.json")["witnesses"]:
        if w["family"] not in analyses:
            continue
        entry = {"family": w["family"], "ra": w["ra"], "aut_order": w["aut_order"], "coeffs": w["coeffs"],
                 "field_degree": w["field_degree"]}
        if w["coeffs"] is None:
            entry["status"] = "no witness within GF(2^16)"
        else:
            try:
                chk = check_witness(analyses[w["family"]], w["coeffs"], w["field_degree"], threads=threads)
                entry.update(chk)
                entry["status"] = "agree" if chk["agree"] else "mismatch"
            except NotStabilized as exc:
                entry["status"] = "not stabilized"
                entry["counts"] = {str(k): v for k, v in exc.counts.items()}
        print(f"[oracle] {w['family']} {w['ra']}: {entry['status']}", file=sys.stderr, flush=True)
        out.append(entry)
    return out


def cmd_table(args) -> int:
    which = args.theorem
    rows = theorem_table(which, limits=_limits(args) if args.time_limit else None,
                         progress=_progress if args.time_limit else None)
    problems = compare_with_golden(rows, which)
    golden = {r["key"]: r for r in golden_table(which)}
    lines = []
    payload_rows = []
    for row in rows:
        head = row["key"] + (f" (n={row['n']})" if "g" in row else "")
        if "error" in row:
            lines.append(f"{head}: {row['error']['kind']}: {row['error']['message']}")
            payload_rows.append({k: v for k, v in row.items() if k != "analysis"})
            continue
        lines.append(head)
        lines += _strata_lines(row["analysis"].strata)
        payload_rows.append({"key": row["key"], "n": row["n"], "g": row.get("g"), "strata": row["strata"],
                             "cells": [c["cell"] for c in golden[row["key"]]["strata"]]})
    witnesses = _verify_witnesses(which, rows, args.threads) if args.verify_oracle else []
    for w in witnesses:
        lines.append(f"oracle {w['family']} {w['ra']} #Aut={w['aut_order']}: {w['status']}"
                     + (f" (count {w['count']} over GF(2^{w['m']}))" if "count" in w else ""))
    lines.append("golden comparison: " + ("all cells match" if not problems else f"{len(problems)} mismatches"))
    lines += [f"  {p}" for p in problems]
    payload = {"theorem": which, "rows": payload_rows, "mismatches": problems, "oracle": witnesses}
    _emit(args, payload, "\n".join(lines))
    if any("error" in row for row in rows):
        return EXIT_LIMIT
    if problems or any(w["status"] == "mismatch" for w in witnesses):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_u2k(args) -> int:
    res = u2k_experiment(args.m, limits=_limits(args), progress=_progress)
    lines = [f"n = 2^{res['m']} = {res['n']}"]
    for name, pat in res["patterns"].items():
        fixed = ", ".join(f"{k}={v}" for k, v in pat["presets"].items()) or "none"
        lines.append(f"{name} (fixed: {fixed})")
        lines += [f"  beta relation: {b}" for b in pat["beta_relations"]]
        for s in pat["strata"]:
            cond = " and ".join(" or ".join(c) for c in s["conditions"]) or "always"
            lines.append(f"  U = {s['U']}  if {cond}")
    _emit(args, res, "\n".join(lines))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="asaut", description="Automorphism groups of y^2 + y = x(x^{2n} + ...) in characteristic 2.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, groebner=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--threads", type=int, default=1, help="worker cap for enumeration")
        if groebner:
            sp.add_argument("--time-limit", type=float, default=None, help="seconds per Groebner run")
            sp.add_argument("--method", choices=("eliminate", "direct"), default="eliminate",
                            help="solve for gamma_n..gamma_1 before Buchberger (default) or run it on the raw system")

    sp = sub.add_parser("analyze", help="automorphism ideal and strata for generic n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", choices=("lex", "grevlex"), default=None)
    sp.add_argument("--set", action="append", metavar="a_i=v", help="fix a coefficient to 0 or 1")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("unipotent", help="unipotent ideal (alpha = 1)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--order", choices=("lex", "grevlex"), default="lex")
    sp.add_argument("--set", action="append", metavar="a_i=v")
    common(sp)
    sp.set_defaults(func=cmd_unipotent)

    sp = sub.add_parser("enumerate", help="brute-force enumeration over GF(2^m)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--field-deg", type=int, required=True)
    sp.add_argument("--coeffs", default="")
    sp.add_argument("--stabilize", action="store_true", help="walk up the field-degree schedule")
    sp.add_argument("--dump-automorphisms", nargs="?", const="json", default=None, metavar="PATH",
                    help="include the sorted list in --json output, or write it to PATH ('-' for stderr)")
    common(sp, groebner=False)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("classify", help="group structure of one curve, cross-checked by the oracle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--coeffs", default="")
    sp.add_argument("--field-deg", type=int, default=1)
    sp.add_argument("--no-oracle", action="store_true")
    common(sp, groebner=False)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("table", help="reproduce a classification table and compare with golden data")
    sp.add_argument("--theorem", type=int, choices=(2, 3), required=True)
    sp.add_argument("--verify-oracle", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sz", help="Scholten-Zhu curves")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--coeffs", default=None, help="parameter values, e.g. c_3=1; omit for the symbolic strata")
    sp.add_argument("--field-deg", type=int, default=1)
    sp.add_argument("--no-oracle", action="store_true")
    common(sp, groebner=False)
    sp.set_defaults(func=cmd_sz)

    sp = sub.add_parser("experiment-u2k", help="unipotent part for n = 2^m under two coefficient patterns")
    sp.add_argument("--m", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_u2k)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnsupportedGenus) as exc:
        print(f"asaut: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        snap = exc.snapshot
        print(f"asaut: limit exceeded: {exc}; pairs={snap.get('pairs_processed')} basis={snap.get('basis_size')} "
              f"pending={snap.get('pending_pairs')}", file=sys.stderr)
        return EXIT_LIMIT
    except (NotStabilized, PatternMiss, SquarefreenessUnknown) as exc:
        print(f"asaut: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except StructureViolation as exc:
        print(f"asaut: structure violation: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (AsautError, ValueError) as exc:
        print(f"asaut: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
