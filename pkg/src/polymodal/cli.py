"""Command-line interface.

Exit status: 0 success, 1 logical negative (formula false at the expected
world, no model found, a verification check failed), 2 usage or input error,
3 budget exhausted.  Errors are reported on stderr as ``error: <kind>: <msg>``.

``--format kv`` prints one ``key=value`` pair per line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checker import check_labeling, check_naive
from .errors import BudgetError, ConsistencyError, PMLError
from .formulas import dag_size, modal_depth, size
from .kripke import encode_list, parse_model, render_model
from .oracle import sat_bounded
from .syntax import parse_formula, parse_term, parse_vocab
from .tables import enumerate_tables

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Out:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def emit(self, key: str, value, text: str | None = None):
        if self.fmt == "kv":
            print(f"{key}={value}", file=self.stream)
        else:
            print(text if text is not None else f"{key}: {value}", file=self.stream)


def _read_formula(arg: str, vocab=None):
    text = Path(arg[1:]).read_text() if arg.startswith("@") else arg
    return parse_formula(text.strip(), vocab)


def _read_model(path: str):
    return parse_model(Path(path).read_text())


def _worlds(ws) -> str:
    return "{" + ", ".join(map(str, sorted(ws))) + "}"


def _vocab_arg(text):
    return parse_vocab(text) if text else None


# -- subcommands ------------------------------------------------------------


def cmd_check(args, out: _Out) -> int:
    model = _read_model(args.model)
    phi = _read_formula(args.formula, list(model.symbols))
    truth = check_naive(model, phi) if args.naive else check_labeling(model, phi)
    if out.fmt == "kv":
        out.emit("engine", "naive" if args.naive else "labeling")
    out.emit("truth", ",".join(map(str, sorted(truth))), text=_worlds(truth))
    if args.expect is not None and args.expect not in truth:
        out.emit("expect", f"fail {args.expect}", text=f"world {args.expect} does not satisfy the formula")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_reduce_neg(args, out: _Out) -> int:
    from .reduce_neg import reduce_neg

    phi = _read_formula(args.formula)
    red = reduce_neg(phi)
    out.emit("theta", red.theta)
    out.emit("eta_conjuncts", red.pairs)
    out.emit("size_source", size(phi))
    out.emit("size_eta", size(red.eta))
    out.emit("dag_size_eta", dag_size(red.eta))
    return EXIT_OK


def cmd_reduce_tables(args, out: _Out) -> int:
    from .reduce_tables import reduce_tables

    phi = _read_formula(args.formula, _vocab_arg(args.vocab))
    red = reduce_tables(phi, _vocab_arg(args.vocab), args.cap)
    out.emit("star", red.star)
    out.emit("translated", red.translated)
    for i, (f, p) in enumerate(red.fresh.items()):
        out.emit(f"fresh.{i}", f"{p.name}={f}", text=f"{p.name} := {f}")
    out.emit("candidates", len(red.candidates))
    for name in ("xi1", "xi2", "xi3"):
        out.emit(f"{name}_conjuncts", red.counts[name])
    out.emit("dag_size_theta", dag_size(red.theta))
    out.emit("modal_depth_star", modal_depth(red.star))
    if args.show_theta:
        out.emit("theta", red.theta)
    return EXIT_OK


def cmd_normalize_term(args, out: _Out) -> int:
    from .terms import normalize_term, term_size

    term = parse_term(args.term, _vocab_arg(args.vocab), args.arity)
    norm = normalize_term(term)
    out.emit("term", norm, text=str(norm))
    out.emit("size_in", term_size(term))
    out.emit("size_out", term_size(norm))
    return EXIT_OK


def cmd_tables(args, out: _Out) -> int:
    vocab = parse_vocab(args.vocab)
    for rho in enumerate_tables(vocab, args.arity):
        out.emit(f"table.{rho.index}", rho, text=f"{rho.index} {rho}")
    return EXIT_OK


def cmd_sat(args, out: _Out) -> int:
    phi = _read_formula(args.formula, _vocab_arg(args.vocab))
    verdict = sat_bounded(phi, args.max_worlds, _vocab_arg(args.vocab), budget_ms=args.budget_ms)
    out.emit("verdict", verdict, text=str(verdict))
    if not verdict.satisfiable:
        return EXIT_NEGATIVE
    text = render_model(verdict.model)
    if args.out:
        Path(args.out).write_text(text)
    elif out.fmt == "kv":
        for line in text.splitlines():
            out.emit("model", line)
    else:
        print(text, end="", file=out.stream)
    return EXIT_OK


def cmd_verify(args, out: _Out) -> int:
    phi = _read_formula(args.formula)
    checks: list[tuple[str, bool, str]] = []
    if args.reduction == "neg":
        _verify_neg(phi, args, checks)
    else:
        _verify_tables(phi, args, checks)
    ok = True
    for name, passed, detail in checks:
        ok &= passed
        status = "pass" if passed else "fail"
        out.emit(name, f"{status} {detail}".strip(), text=f"{status} {name} {detail}".rstrip())
    return EXIT_OK if ok else EXIT_NEGATIVE


def _attempt(checks, name, fn):
    try:
        detail = fn()
        checks.append((name, True, detail or ""))
        return True
    except ConsistencyError as e:
        checks.append((name, False, str(e)))
        return False


def _verify_neg(phi, args, checks):
    from .reduce_neg import backward_model_neg, complete_model, double_model, forward_model_neg, reduce_neg, transfer_mismatches

    red = reduce_neg(phi)
    v = sat_bounded(phi, args.max_worlds, budget_ms=args.budget_ms)
    checks.append(("source_sat", True, str(v)))
    if v.satisfiable:
        _attempt(checks, "forward", lambda: f"theta holds at {forward_model_neg(red, v.model, v.world)[1]}")
    vt = sat_bounded(red.theta, args.max_worlds, red.target_symbols, budget_ms=args.budget_ms)
    checks.append(("theta_sat", True, str(vt)))
    if vt.satisfiable:

        def back():
            model, world = backward_model_neg(red, vt.model, vt.world)
            completed = complete_model(red, vt.model)
            bad = transfer_mismatches(red, completed, double_model(red, completed))
            if bad:
                raise ConsistencyError(f"{len(bad)} transfer mismatches")
            return f"source holds at {world} of {model.worlds}"

        _attempt(checks, "backward", back)
    if v.satisfiable != vt.satisfiable:
        checks.append(("equisat", not v.satisfiable, "one-sided finding at this bound"))


def _verify_tables(phi, args, checks):
    from .reduce_tables import backward_model_tbl, forward_model_tbl, reduce_tables, star_model

    red = reduce_tables(phi, _vocab_arg(args.vocab), args.cap)
    v = sat_bounded(phi, args.max_worlds, budget_ms=args.budget_ms)
    checks.append(("source_sat", True, str(v)))
    if not v.satisfiable:
        return
    sm = star_model(red, v.model)
    fm = {}

    def forward():
        fm["model"], fm["world"] = forward_model_tbl(red, sm, v.world)
        return "translation and xi1, xi2, xi3 hold"

    if _attempt(checks, "forward", forward):

        def back():
            model, world = backward_model_tbl(red, fm["model"], fm["world"], args.depth)
            return f"table normal form holds at {world} of {model.worlds}"

        _attempt(checks, "backward", back)


def cmd_encode(args, out: _Out) -> int:
    enc = encode_list(_read_model(args.model))
    out.emit("bytes", enc.data.decode("ascii"), text=enc.data.decode("ascii"))
    out.emit("size", enc.size)
    return EXIT_OK


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polymodal", description="Polyadic Boolean modal logic toolkit")
    ap.add_argument("--format", choices=("text", "kv"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="truth set of a formula in a model")
    p.add_argument("model")
    p.add_argument("formula", help="formula text, or @file")
    p.add_argument("--naive", action="store_true", help="use the reference evaluator")
    p.add_argument("--expect", type=int, help="exit 1 unless this world satisfies the formula")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("reduce-neg", help="translate a formula with complemented relations")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_reduce_neg)

    p = sub.add_parser("reduce-tables", help="table normal form and translation")
    p.add_argument("formula")
    p.add_argument("--vocab", help='e.g. "R/2,S/2"')
    p.add_argument("--cap", type=int, default=2)
    p.add_argument("--show-theta", action="store_true")
    p.set_defaults(fn=cmd_reduce_tables)

    p = sub.add_parser("normalize-term", help="hoist negations in a term")
    p.add_argument("term")
    p.add_argument("--vocab")
    p.add_argument("--arity", type=int)
    p.set_defaults(fn=cmd_normalize_term)

    p = sub.add_parser("tables", help="list the k-tables of a vocabulary")
    p.add_argument("--vocab", required=True)
    p.add_argument("--arity", type=int, required=True)
    p.set_defaults(fn=cmd_tables)

    p = sub.add_parser("sat", help="bounded model search")
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--vocab")
    p.add_argument("--out", help="write the witness model here")
    p.add_argument("--budget-ms", type=int)
    p.set_defaults(fn=cmd_sat)

    p = sub.add_parser("verify-reduction", help="run both model constructions of a reduction")
    p.add_argument("reduction", choices=("neg", "tables"))
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--depth", type=int)
    p.add_argument("--vocab")
    p.add_argument("--cap", type=int, default=2)
    p.add_argument("--budget-ms", type=int)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("encode", help="list encoding of a model")
    p.add_argument("model")
    p.set_defaults(fn=cmd_encode)
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    for name in ("max_worlds", "depth", "cap"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            print(f"error: usage: --{name.replace('_', '-')} must be positive", file=stderr)
            return EXIT_USAGE
    out = _Out(args.format, stdout)
    try:
        return args.fn(args, out)
    except BudgetError as e:
        print(f"error: {e.kind}: {e}", file=stderr)
        return EXIT_BUDGET
    except ConsistencyError as e:
        print(f"error: {e.kind}: {e}", file=stderr)
        return EXIT_NEGATIVE
    except PMLError as e:
        print(f"error: {e.kind}: {e}", file=stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: io: {e}", file=stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as e:
        print(f"error: input: {e}", file=stderr)
        return EXIT_USAGE
