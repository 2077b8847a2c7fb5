"""Command-line front end.

Coefficients are given in the ambient's Picard basis, so ``6H - 4E`` on
BlP3 is written ``6 -4``.  Exit codes: 0 success (any decided or open
verdict), 2 invalid input, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .ambient import AmbientThreefold, load_ambient, make_ambient, parse_kind
from .errors import HyplabError, InvariantViolation
from .hyperbolicity import Status, classify, cor_main_bound, certified_genus_bound, plan_for, survey
from .oracles import derive_tensor, exhaustive_epsilon_check, h0_oracle
from .sections import is_section_dominating, monomial_basis

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT = 0, 2, 3

_NEG_RANGE = re.compile(r"^-\d+:-?\d+$")

CSV_FIELDS = ["ambient", "params", "class", "status", "epsilon", "witness", "reason"]


class UsageError(HyplabError):
    pass


def _int_list(values) -> list[int]:
    try:
        return [int(v) for v in values]
    except ValueError as exc:
        raise UsageError(f"expected integers, got {' '.join(values)}") from exc


def _resolve(ns) -> tuple[AmbientThreefold, list[int]]:
    words = list(ns.args)
    if ns.ambient_file:
        A = load_ambient(ns.ambient_file)
    else:
        if not words:
            raise UsageError("missing ambient kind")
        kind = parse_kind(words.pop(0))
        params = {}
        if ns.e is not None:
            params["e"] = ns.e
        if ns.n is not None:
            params["n"] = ns.n
        A = make_ambient(kind, params)
    coeffs = _int_list(words)
    if getattr(ns, "m", None) is not None:
        if coeffs:
            raise UsageError("give either --m or explicit coefficients")
        coeffs = [ns.m] + [0] * (A.picard_rank - 1)
    return A, coeffs


def _divisor(A, coeffs, what="class"):
    if len(coeffs) != A.picard_rank:
        raise UsageError(f"{what} needs {A.picard_rank} coefficients on {A.id}, got {len(coeffs)}")
    return A.divisor(*coeffs)


def _fraction(q: Fraction | None):
    return None if q is None else {"num": q.numerator, "den": q.denominator}


def _csv_row(d: dict) -> dict:
    eps = d.get("epsilon")
    return {
        "ambient": d["ambient"],
        "params": ";".join(f"{k}={v}" for k, v in sorted(d["params"].items())),
        "class": " ".join(str(x) for x in d["class"]),
        "status": d["status"],
        "epsilon": "" if eps is None else f"{eps['num']}/{eps['den']}",
        "witness": d.get("witness", {}).get("kind", "") if d.get("witness") else "",
        "reason": d["reason"],
    }


def _emit(ns, payload, rows=None, human=None):
    out = sys.stdout
    if ns.json:
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    elif ns.csv and rows is not None:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(_csv_row(r))
        out.write(buf.getvalue())
    else:
        out.write((human if human is not None else _human(payload)) + "\n")


def _human(d, indent="") -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict) and v:
            lines.append(f"{indent}{k}:")
            lines.append(_human(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for item in v:
                lines.append(f"{indent}  - {json.dumps(item, ensure_ascii=False)}")
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines)


def _verdict_line(d: dict) -> str:
    eps = d.get("epsilon")
    eps_s = f"  epsilon={eps['num']}/{eps['den']}" if eps else ""
    wit = f"  witness={d['witness']['kind']}" if d.get("witness") else ""
    params = ",".join(f"{k}={v}" for k, v in sorted(d["params"].items()))
    name = f"{d['ambient']}({params})" if params else d["ambient"]
    return f"{name} {d['class']}: {d['status']}{eps_s}{wit}  ({d['reason']})"


# ---------------------------------------------------------------------------
# commands


def cmd_classify(ns) -> int:
    A, coeffs = _resolve(ns)
    D = _divisor(A, coeffs)
    Href = _divisor(A, _int_list(ns.href), "--href") if ns.href else None
    v = classify(A, D, Href)
    d = v.to_dict(verbose=ns.verbose)
    _emit(ns, d, [d], _verdict_line(d))
    return EXIT_INVALID if v.status is Status.Invalid else EXIT_OK


def cmd_epsilon(ns) -> int:
    A, coeffs = _resolve(ns)
    D = _divisor(A, coeffs)
    Href = _divisor(A, _int_list(ns.href), "--href") if ns.href else None
    v = classify(A, D, Href)
    if v.status is not Status.Hyperbolic:
        d = {"ambient": A.kind.value, "params": A.param, "class": coeffs, "status": v.status.value, "reason": v.reason}
        _emit(ns, d)
        return EXIT_INVALID
    d = {
        "ambient": A.kind.value,
        "params": A.param,
        "class": coeffs,
        "epsilon": _fraction(v.epsilon),
        "attaining_ray": list(v.attaining_ray.coeffs),
        "bundle_index": v.bundle_index,
    }
    if ns.cap:
        ok, viol = exhaustive_epsilon_check(A, D, v.epsilon, ns.cap, Href)
        d["check"] = {"cap": ns.cap, "passed": ok, "violation": viol}
        if not ok:
            _emit(ns, d)
            return EXIT_INVARIANT
    _emit(ns, d, human=f"epsilon = {v.epsilon} (ray {list(v.attaining_ray.coeffs)}, bundle {v.bundle_index})"
          + (f"; check at cap {ns.cap}: passed" if ns.cap else ""))
    return EXIT_OK


def cmd_bound(ns) -> int:
    A, coeffs = _resolve(ns)
    D = _divisor(A, coeffs)
    if not ns.C:
        raise UsageError("bound needs --C")
    C = _divisor(A, _int_list(ns.C), "--C")
    if ns.L:
        cert = cor_main_bound(A, D, C, [_divisor(A, _int_list(L), "--L") for L in ns.L])
        d = {"ambient": A.kind.value, "params": A.param, "class": coeffs, "curve": list(C.coeffs), **cert.to_dict()}
    else:
        plan = plan_for(A, D)
        value, idx = certified_genus_bound(A, D, C, plan)
        L, kind = plan.bundles[idx]
        d = {
            "ambient": A.kind.value,
            "params": A.param,
            "class": coeffs,
            "curve": list(C.coeffs),
            "line_bundle": list(L.coeffs),
            "bound_kind": kind.value,
            "genus_bound": value,
        }
    _emit(ns, d)
    return EXIT_OK


def cmd_sd_check(ns) -> int:
    A, coeffs = _resolve(ns)
    if coeffs:
        raise UsageError("sd-check takes the class through --E")
    if not ns.E:
        raise UsageError("sd-check needs --E")
    E = _divisor(A, _int_list(ns.E), "--E")
    Ls = [_divisor(A, _int_list(L), "--L") for L in (ns.L or [])]
    rep = is_section_dominating(A, E, Ls, strict=ns.strict, verbose=ns.verbose)
    d = {"ambient": A.kind.value, "params": A.param, "E": list(E.coeffs), "L": [list(L.coeffs) for L in Ls]}
    d.update(rep.to_dict(verbose=ns.verbose))
    _emit(ns, d, human=f"section-dominating: {str(rep.verdict).lower()}" + (f" ({rep.reason})" if rep.reason else ""))
    return EXIT_OK


def cmd_h0(ns) -> int:
    A, coeffs = _resolve(ns)
    D = _divisor(A, coeffs)
    space = monomial_basis(A, D)
    d = {"ambient": A.kind.value, "params": A.param, "class": coeffs, "h0": space.h0, "oracle": h0_oracle(A, D)}
    if ns.verbose:
        d["monomials"] = [list(m) for m in space.basis]
    if d["h0"] != d["oracle"]:
        _emit(ns, d)
        return EXIT_INVARIANT
    _emit(ns, d, human=f"h0 = {space.h0}")
    return EXIT_OK


def _parse_box(specs: Sequence[str]) -> list[range]:
    box = []
    for s in specs:
        lo, sep, hi = s.partition(":")
        try:
            box.append(range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1))
        except ValueError as exc:
            raise UsageError(f"bad range {s!r}; use lo:hi") from exc
    return box


def cmd_survey(ns) -> int:
    A, coeffs = _resolve(ns)
    if coeffs:
        raise UsageError("survey takes ranges through --box")
    if not ns.box:
        raise UsageError("survey needs --box lo:hi per Picard coordinate")
    rows = [v.to_dict(verbose=False) for v in survey(A, _parse_box(ns.box))]
    for r in rows:
        r.pop("certificates", None)
    _emit(ns, {"ambient": A.kind.value, "params": A.param, "rows": rows}, rows, "\n".join(_verdict_line(r) for r in rows))
    return EXIT_OK


def selftest_report(cap: int = 60) -> list[dict]:
    report = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except HyplabError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.append({"check": name, "pass": bool(ok), "detail": detail})

    grids = [("P1P1P1", {}), ("P2xP1", {}), ("BlP3", {})]
    grids += [("FexP1", {"e": e}) for e in range(1, 6)]
    grids += [("P111n", {"n": n}) for n in range(1, 6)]
    for kind, params in grids:
        A = make_ambient(kind, params)
        check(f"tensor {A.id}", lambda: (derive_tensor(kind, params) == A.tensor, "derived == frozen"))
    for kind, params in grids[:4] + grids[8:10]:
        A = make_ambient(kind, params)

        def h0_grid(A=A):
            bad = [c for c in _small_box(A) if monomial_basis(A, A.divisor(*c)).h0 != h0_oracle(A, A.divisor(*c))]
            return not bad, f"mismatches: {bad[:3]}" if bad else "enumeration == closed form"

        check(f"h0 {A.id}", h0_grid)
    for kind, params, coeffs in [("P1P1P1", {}, (3, 3, 3)), ("BlP3", {}, (7, -4)), ("P2xP1", {}, (4, 3))]:
        A = make_ambient(kind, params)

        def eps(A=A, coeffs=coeffs):
            v = classify(A, A.divisor(*coeffs))
            ok, viol = exhaustive_epsilon_check(A, v.divisor, v.epsilon, cap)
            return ok, f"epsilon {v.epsilon}" if ok else viol

        check(f"epsilon {A.id} {list(coeffs)}", eps)
    return report


def _small_box(A):
    if A.kind.value == "BlP3":
        return [(a, -b) for a in range(0, 5) for b in range(-1, a + 1)]
    if A.kind.value == "FexP1":
        return [(a1, a2, a3) for a1 in range(3) for a2 in range(4) for a3 in range(3)]
    return list(itertools.product(range(4), repeat=A.picard_rank))


def cmd_selftest(ns) -> int:
    report = selftest_report(ns.cap or 60)
    failed = sum(not r["pass"] for r in report)
    human = "\n".join(f"{'PASS' if r['pass'] else 'FAIL'}  {r['check']}: {r['detail']}" for r in report)
    _emit(ns, {"checks": report, "failed": failed}, human=human)
    return EXIT_INVARIANT if failed else EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "bound": cmd_bound,
    "epsilon": cmd_epsilon,
    "sd-check": cmd_sd_check,
    "h0": cmd_h0,
    "survey": cmd_survey,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyplab", description="Algebraic hyperbolicity of surfaces in toric threefolds.")
    p.add_argument("--version", action="version", version=f"hyplab {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("args", nargs="*", help="ambient kind followed by class coefficients")
    p.add_argument("--e", type=int, help="Hirzebruch parameter for FexP1")
    p.add_argument("--n", type=int, help="weight for P111n")
    p.add_argument("--m", type=int, help="P111n shorthand for the class mH")
    p.add_argument("--E", nargs="+", help="sd-check target class")
    p.add_argument("--L", nargs="+", action="append", help="a line bundle (repeatable)")
    p.add_argument("--C", nargs="+", help="curve class for bound")
    p.add_argument("--href", nargs="+", help="alternative degree class")
    p.add_argument("--box", nargs="+", help="survey ranges lo:hi, one per coordinate")
    p.add_argument("--cap", type=int, help="degree cap for exhaustive checks")
    p.add_argument("--ambient-file", help="load a custom ambient from JSON")
    p.add_argument("--strict", action="store_true", help="sd-check: raise on failed hypotheses")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.add_argument("--verbose", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # a leading space keeps ranges like -6:0 from reading as options; int() ignores it
    argv = [f" {a}" if _NEG_RANGE.match(a) else a for a in argv]
    try:
        ns = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[ns.command](ns)
    except InvariantViolation as exc:
        print(f"hyplab: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (HyplabError, OSError, ValueError) as exc:
        print(f"hyplab: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
