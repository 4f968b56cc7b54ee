"""``quivermod`` command line.

Exit codes: 0 success or positive verdict, 2 input error, 3 negative verdict
(unstable, relation violated, not injective, not generic), 4 enumeration budget
exceeded.  JSON output uses sorted keys.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import adhm as adhm_mod
from .errors import BudgetExceeded, QuivermodError
from .forms import framed_moduli_dimension, is_generic, moduli_dimension, nakajima_dimension
from .invariants import fingerprint
from .kronecker import cohomology_table, pencil_fiberwise_injective, splitting_type
from .linalg import QQ, GF, Subspace
from .nakajima import (
    DoubledFramedRepresentation, DoubledRepresentation, check_deformed_preprojective, check_framed_preprojective,
    framed_moment_map, moment_map, nakajima_general_stability,
)
from .partitions import check_partition
from .quiver import Representation, reduce_mod_p
from .serialize import (
    SchemaError, adhm_from_json, adhm_to_json, builtin_quiver, document_kind, dumps, loads, matrix_to_json,
    pencil_from_json, quiver_from_json, rep_from_json, validate_schema,
)
from .stability import DEFAULT_BUDGET, UNSTABLE, decide_theta_stability_exhaustive

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_BUDGET = 0, 2, 3, 4


class InputError(QuivermodError):
    pass


# ---------------------------------------------------------------- argument helpers


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _scalar_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}") from None


def _read_document(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _load_quiver(arg: str):
    try:
        return builtin_quiver(arg)
    except SchemaError:
        pass
    doc = _read_document(arg)
    if isinstance(doc, dict) and document_kind(doc) == "rep":
        return quiver_from_json(doc["quiver"])
    return quiver_from_json(doc)


def _load_rep(path: str, mod: int | None):
    v = rep_from_json(_read_document(path))
    if mod is None:
        return v
    if isinstance(v, Representation):
        return reduce_mod_p(v, mod)
    return type(v)(v.base, reduce_mod_p(v.rep, mod))


def _fmt_vec(vec) -> str:
    return "(" + ", ".join(str(x) for x in vec) + ")"


def _subspace_json(s: Subspace) -> list:
    return [[s.field.format(x) for x in row] for row in s.basis]


def _scalar(x) -> str:
    return QQ.format(x) if isinstance(x, (int, Fraction)) else str(x)


def _verdict_report(verdict) -> dict:
    report = {"status": verdict.status, "theta_beta": verdict.theta_beta}
    if verdict.witness is not None:
        report["witness"] = {"beta": list(verdict.witness.beta),
                             "subspaces": [_subspace_json(s) for s in verdict.witness.subspaces]}
    return report


def _verdict_text(verdict) -> str:
    line = verdict.status
    if verdict.witness is not None:
        line += f": witness β = {_fmt_vec(verdict.witness.beta)}, θ·β = {verdict.theta_beta}"
    return line


# ---------------------------------------------------------------- commands


def cmd_check_stability(args):
    v = _load_rep(args.rep, args.mod)
    if not isinstance(v, Representation):
        v = v.rep
    verdict = decide_theta_stability_exhaustive(v, args.theta, args.budget, args.jobs)
    code = EXIT_NEGATIVE if verdict.status == UNSTABLE else EXIT_OK
    return code, _verdict_report(verdict), _verdict_text(verdict)


def cmd_invariants(args):
    v = _load_rep(args.rep, args.mod)
    if not isinstance(v, Representation):
        v = v.rep
    fp = fingerprint(v, args.max_len)
    f = v.field
    entries = [{"cycle": list(c.arrows), "trace": f.format(val)} for c, val in fp.entries]
    text = "\n".join(f"tr({' '.join(e['cycle'])}) = {e['trace']}" for e in entries) or "no cycles"
    return EXIT_OK, {"field": f.name, "fingerprint": entries}, text


def cmd_moment_map(args):
    v = _load_rep(args.rep, args.mod)
    if isinstance(v, DoubledFramedRepresentation):
        mu = framed_moment_map(v)
        check_fn = check_framed_preprojective
    elif isinstance(v, DoubledRepresentation):
        mu = moment_map(v)
        check_fn = check_deformed_preprojective
    else:
        raise InputError("$.kind: moment-map needs a doubled or doubled-framed representation")
    lam = args.lam if args.lam is not None else [0] * v.base.vertex_count
    check = check_fn(v, lam)
    report = {
        "mu": [matrix_to_json(m) for m in mu],
        "residuals": [matrix_to_json(r) for r in check.residuals],
        "holds": check.holds,
        "trace_obstruction": check.trace_obstruction,
    }
    lines = [f"vertex {i}: residual {'zero' if r.is_zero() else 'nonzero'}" for i, r in enumerate(check.residuals)]
    lines.append("relation holds" if check.holds else "relation violated")
    if check.trace_obstruction:
        lines.append("λ·α ≠ 0: the fiber is empty")
    return (EXIT_OK if check.holds else EXIT_NEGATIVE), report, "\n".join(lines)


def cmd_nakajima_stability(args):
    v = _load_rep(args.rep, None)
    if not isinstance(v, DoubledFramedRepresentation):
        raise InputError("$.kind: nakajima-stability needs a doubled-framed representation")
    verdict = nakajima_general_stability(v, args.theta, args.mod, args.budget, args.jobs)
    code = EXIT_NEGATIVE if verdict.status == UNSTABLE else EXIT_OK
    return code, _verdict_report(verdict), _verdict_text(verdict)


def _poly_text(poly: dict, field) -> str:
    terms = []
    for (a, b), c in sorted(poly.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
        mono = "*".join(p for p in (f"x^{a}" if a > 1 else "x" * a, f"y^{b}" if b > 1 else "y" * b) if p)
        coeff = field.format(c)
        if not mono:
            terms.append(coeff)
        elif coeff == "1":
            terms.append(mono)
        elif coeff == "-1":
            terms.append("-" + mono)
        else:
            terms.append(f"{coeff}*{mono}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


def cmd_adhm(args):
    action = args.action
    if action == "from-staircase":
        if args.partition is None:
            raise InputError("--partition is required for from-staircase")
        parts = check_partition(args.partition)
        d = adhm_mod.adhm_from_monomial_ideal(parts)
        return EXIT_OK, adhm_to_json(d), dumps(adhm_to_json(d))
    d = adhm_from_json(_read_document(args.data))
    if action == "check":
        res = adhm_mod.adhm_residual(d)
        ok = res.is_zero()
        return ((EXIT_OK if ok else EXIT_NEGATIVE), {"holds": ok, "residual": matrix_to_json(res)},
                "[B1,B2] + ij = 0" if ok else "relation violated")
    if action == "stable":
        ok, sub = adhm_mod.adhm_is_stable(d)
        report = {"stable": ok}
        if sub is not None:
            report["proper_invariant_subspace"] = _subspace_json(sub)
        return (EXIT_OK if ok else EXIT_NEGATIVE), report, "stable" if ok else \
            f"unstable: proper invariant subspace of dimension {sub.dim} contains Im i"
    if action == "ideal":
        ideal = adhm_mod.ideal_from_adhm(d)
        gens = [g for g in ideal.generators() if max(a + b for a, b in g) <= args.degree]
        report = {
            "colength": ideal.colength,
            "standard_monomials": [list(m) for m in ideal.standard_monomials],
            "generators": [_poly_text(g, d.field) for g in gens],
            "degree_bound": args.degree,
        }
        if args.partition is not None:
            parts = check_partition(args.partition)
            report["matches_staircase"] = adhm_mod.adhm_roundtrip(parts, d)
        text = f"colength {ideal.colength}\nstandard monomials: {report['standard_monomials']}\n" + \
            "\n".join(f"  {g}" for g in report["generators"])
        code = EXIT_NEGATIVE if report.get("matches_staircase") is False else EXIT_OK
        return code, report, text
    if action == "hilbert-chow":
        pts = adhm_mod.hilbert_chow(d)
        report = {"points": [[_scalar(x), _scalar(y)] for x, y in pts]}
        return EXIT_OK, report, " + ".join(f"[({_scalar(x)}, {_scalar(y)})]" for x, y in pts)
    if action == "monad":
        a, b = adhm_mod.monad_matrices(d)
        ba = b @ a
        zero = ba.is_zero()
        rng = random.Random(args.seed)
        points = [(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(args.samples)]
        points = [p for p in points if any(p)]
        report = {
            "ba_zero": zero,
            "ba": {",".join(map(str, e)): matrix_to_json(m) for e, m in ba.terms},
            "middle_dimension": adhm_mod.monad_middle_dimension(d),
            "chern": list(adhm_mod.chern_metadata(d)),
        }
        if zero:
            ok, bad = adhm_mod.monad_pointwise_check(d, points)
            report["pointwise_ranks_ok"] = ok
            if bad is not None:
                report["rank_drop_at"] = list(bad)
            report["a_degenerate_at"] = [list(p) for p in adhm_mod.monad_degeneracy_points(d, points)]
        text = f"ba = {'0' if zero else 'nonzero'}; middle dimension {report['middle_dimension']}; " \
               f"(r, c1, c2) = {_fmt_vec(report['chern'])}"
        return (EXIT_OK if zero else EXIT_NEGATIVE), report, text
    raise InputError(f"unknown adhm action {action!r}")


def cmd_p1(args):
    p = pencil_from_json(_read_document(args.pencil))
    res = pencil_fiberwise_injective(p)
    if not res.injective:
        report = {"injective": False, "fiber": [_scalar(x) for x in res.fiber] if res.fiber else None,
                  "gcd": [_scalar(c) for c in res.factor.coefficients]}
        where = f"[{_scalar(res.fiber[0])}:{_scalar(res.fiber[1])}]" if res.fiber else "an irrational fiber"
        return EXIT_NEGATIVE, report, f"not injective at {where}"
    table = cohomology_table(p, args.max_s)
    st = splitting_type(p)
    report = {"injective": True, "type": list(st), "table": list(table)}
    return EXIT_OK, report, f"E = {' + '.join(f'O({d})' for d in st) or '0'}; h^0(E(-s)) = {list(table)}"


def cmd_dims(args):
    q = _load_quiver(args.quiver)
    alpha = args.alpha
    if args.nakajima or args.framed:
        if args.alpha_prime is None:
            raise InputError("--alpha-prime is required with --nakajima or --framed")
        fn = nakajima_dimension if args.nakajima else framed_moduli_dimension
        value = fn(q, alpha, args.alpha_prime)
    else:
        value = moduli_dimension(q, alpha)
    return EXIT_OK, value, str(value)


def cmd_generic(args):
    q = _load_quiver(args.quiver)
    lam = args.lam if args.lam is not None else [0] * q.vertex_count
    ok, gamma = is_generic(q, args.theta, lam, args.alpha)
    report = {"generic": ok, "witness": list(gamma) if gamma is not None else None}
    text = "generic" if ok else f"not generic: witness γ = {_fmt_vec(gamma)}"
    return (EXIT_OK if ok else EXIT_NEGATIVE), report, text


def cmd_validate(args):
    doc = _read_document(args.input)
    errors = validate_schema(doc)
    report = {"ok": not errors, "diagnostics": errors}
    return (EXIT_OK if not errors else EXIT_INPUT), report, "ok" if not errors else "\n".join(errors)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)

    enum = argparse.ArgumentParser(add_help=False)
    enum.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    enum.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="quivermod", description="Exact computations with quiver representations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-stability", parents=[common, enum], help="King stability by exhaustive search")
    p.add_argument("--rep", required=True)
    p.add_argument("--theta", type=_int_list, required=True)
    p.add_argument("--mod", type=int)
    p.set_defaults(func=cmd_check_stability)

    p = sub.add_parser("invariants", parents=[common], help="traces along oriented cycles")
    p.add_argument("--rep", required=True)
    p.add_argument("--max-len", type=int)
    p.add_argument("--mod", type=int)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("moment-map", parents=[common], help="moment map residuals")
    p.add_argument("--rep", required=True)
    p.add_argument("--lambda", dest="lam", type=_scalar_list)
    p.add_argument("--mod", type=int)
    p.set_defaults(func=cmd_moment_map)

    p = sub.add_parser("nakajima-stability", parents=[common, enum], help="stability of framed doubled data")
    p.add_argument("--rep", required=True)
    p.add_argument("--theta", type=_int_list, required=True)
    p.add_argument("--mod", type=int)
    p.set_defaults(func=cmd_nakajima_stability)

    p = sub.add_parser("adhm", parents=[common], help="ADHM data, ideals and monads")
    p.add_argument("action", choices=("check", "stable", "ideal", "from-staircase", "hilbert-chow", "monad"))
    p.add_argument("--data", default="-")
    p.add_argument("--partition", type=_int_list)
    p.add_argument("--degree", type=int, default=10**9, help="degree bound for listed generators")
    p.add_argument("--samples", type=int, default=10, help="random points for the monad rank check")
    p.set_defaults(func=cmd_adhm)

    p = sub.add_parser("p1", parents=[common], help="pencils and bundles on the projective line")
    p.add_argument("action", choices=("splitting-type",))
    p.add_argument("--pencil", required=True)
    p.add_argument("--max-s", type=int)
    p.set_defaults(func=cmd_p1)

    p = sub.add_parser("dims", parents=[common], help="moduli dimensions")
    p.add_argument("--quiver", required=True, help="quiver file or builtin name (jordan, A<n>, K<n>)")
    p.add_argument("--alpha", type=_int_list, required=True)
    p.add_argument("--alpha-prime", type=_int_list)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--nakajima", action="store_true")
    kind.add_argument("--framed", action="store_true")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("generic", parents=[common], help="genericity of (theta, lambda)")
    p.add_argument("--quiver", required=True)
    p.add_argument("--theta", type=_int_list, required=True)
    p.add_argument("--lambda", dest="lam", type=_int_list)
    p.add_argument("--alpha", type=_int_list, required=True)
    p.set_defaults(func=cmd_generic)

    p = sub.add_parser("validate", parents=[common], help="check a document against its schema")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)
    return parser


_VECTOR_FLAGS = ("--theta", "--lambda", "--alpha", "--alpha-prime", "--partition")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Let ``--theta -1,1`` through: argparse would read ``-1,1`` as an option."""
    out = []
    k = 0
    while k < len(argv):
        tok = argv[k]
        nxt = argv[k + 1] if k + 1 < len(argv) else None
        if tok in _VECTOR_FLAGS and nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
            out.append(f"{tok}={nxt}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "mod", None) is not None:
        try:
            GF(args.mod)
        except QuivermodError as exc:
            print(f"error: --mod: {exc}", file=stderr)
            return EXIT_INPUT
    try:
        code, report, text = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_BUDGET
    except (QuivermodError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(report, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main(argv: Sequence[str] | None = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
