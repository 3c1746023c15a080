"""Command-line front end.

Every subcommand parses its series arguments, runs one analysis and prints
either an aligned text report or a JSON envelope::

    {command, field, deg, inputs, result, evidence, elapsed_ms}

Exit status is 0 on success, 1 for a domain error (its name is reported) and
2 for a usage error, including malformed expressions.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import eigen, pseudo, riordan, stabilizer
from .errors import BadBranch, ExprSyntaxError, NoSecondEntry, OrderMismatch, RiordanError, UnknownIdentifier
from .expr import evaluate, parse
from .fields import field_by_name
from .matrix import DenseMatrix
from .riordan import RiordanPair
from .series import (
    DEFAULT_DEG,
    OrderCertificate,
    TruncatedSeries,
    comp_inverse,
    compose,
    format_series,
    nth_root_general,
    nth_root_unit,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- context --------------------------------------------------------------
class Context:
    def __init__(self, args):
        self.args = args
        self.field = field_by_name(args.field, args.tol)
        self.tol = None if self.field.name == "rat" else args.tol
        self.deg = args.deg
        self.inputs: list[str] = []
        self.evidence: list[str] = []

    def series(self, flag: str, required: bool = True) -> TruncatedSeries | None:
        text = getattr(self.args, flag, None)
        if text is None:
            if required:
                raise UsageError(f"missing required option {_FLAG_NAMES[flag]}")
            return None
        self.inputs.append(f"{flag}={text}")
        return evaluate(parse(text), self.deg, self.field, self.tol)

    def pair(self, gflag: str = "g", fflag: str = "f") -> RiordanPair:
        return RiordanPair(self.series(gflag), self.series(fflag))

    def scalar(self, text: str):
        v = Fraction(text) if self.field.name == "rat" else complex(text.replace("i", "j"))
        return self.field.coerce(v)


_FLAG_NAMES = {"g": "-g", "f": "-f", "g2": "--g2", "f2": "--f2", "h": "--h"}


def _evidence_text(item) -> str:
    if isinstance(item, str):
        return item
    tag = item.get("tag", "")
    rest = " ".join(f"{k}={_plain(v)}" for k, v in item.items() if k != "tag" and v is not None and v != "")
    return f"{tag} {rest}".strip()


def _plain(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# -- handlers: riordan ----------------------------------------------------
def cmd_riordan_mul(ctx):
    A = ctx.pair()
    B = ctx.pair("g2", "f2")
    C = riordan.multiply(A, B)
    return {"g": C.g, "F": C.F}


def cmd_riordan_inv(ctx):
    A = ctx.pair()
    B = riordan.inverse(A)
    ok = riordan.multiply(A, B).equals(RiordanPair.identity(B.deg, ctx.field), ctx.tol)
    ctx.evidence.append(f"product-with-input-is-identity {_plain(ok)}")
    return {"g": B.g, "F": B.F}


def cmd_riordan_entry(ctx):
    A = ctx.pair()
    i, j = ctx.args.i, ctx.args.j
    return {"i": i, "j": j, "entry": riordan.entry(A, i, j)}


def cmd_riordan_matrix(ctx):
    A = ctx.pair()
    return {"n": ctx.args.n, "matrix": riordan.truncate(A, ctx.args.n)}


def cmd_riordan_decompose(ctx):
    A = ctx.pair()
    n = ctx.args.n
    left, right = riordan.almost_decompose(A)
    L, R = left.matrix(n), right.matrix(n)
    T = riordan.truncate(A, n)
    two = (L @ R).equals(T, ctx.tol)
    chain = riordan.matrix_product(riordan.almost_factor_chain(A, n)).equals(T, ctx.tol)
    ctx.evidence.append(f"two-factor-product-matches {_plain(two)}")
    ctx.evidence.append(f"{n}-factor-chain-matches {_plain(chain)}")
    return {
        "left_a": left.a,
        "left_g": left.g,
        "left_F": left.F,
        "right_a": right.a,
        "right_g": right.g,
        "right_F": right.F,
        "left": L,
        "right": R,
        "two_factor_ok": two,
        "chain_ok": chain,
    }


# -- handlers: eigen ------------------------------------------------------
def _report_result(rep: eigen.EigenReport, limit: int) -> dict:
    out = {"verdict": rep.label, "trunc_degree": rep.trunc_degree}
    if rep.level is not None:
        out["level"] = rep.level
    for v in rep.witnesses[:limit]:
        out[f"witness_{v.level}"] = v.h
        out[f"eigenvalue_{v.level}"] = v.eigenvalue
    if rep.linearizer is not None:
        out["linearizer"] = rep.linearizer.theta
        out["linearizer_method"] = rep.linearizer.method
    if rep.diagonalizer is not None:
        out["diag_h"], out["diag_theta"] = rep.diagonalizer
    return out


def cmd_eigen_classify(ctx):
    A = ctx.pair()
    rep = eigen.classify(A, tol=ctx.tol)
    ctx.evidence.extend(_evidence_text(e) for e in rep.evidence)
    return _report_result(rep, ctx.args.witnesses)


def cmd_eigen_vector(ctx):
    A = ctx.pair()
    v = eigen.solve_level_k(A, ctx.args.level, tol=ctx.tol)
    ok = eigen.is_eigenvector(A, v, ctx.tol)
    ctx.evidence.append(f"eigen-equation-verified {_plain(ok)}")
    ctx.evidence.append(f"redundant-rows-checked {v.checks}")
    if v.free:
        ctx.evidence.append("free-coefficients-set-to-zero " + ",".join(map(str, v.free)))
    return {"level": v.level, "eigenvalue": v.eigenvalue, "h": v.h}


def cmd_eigen_diagonalize(ctx):
    A = ctx.pair()
    h, theta = eigen.diagonalize(A, tol=ctx.tol)
    ctx.evidence.append("conjugate-equals-g0-f1x true")
    return {"h": h, "theta": theta, "g0": A.g0, "f1": A.f1}


def cmd_eigen_linearize(ctx):
    F = ctx.series("f")
    L = eigen.linearize(F, tol=ctx.tol)
    ctx.evidence.append("theta(F)=f1*theta verified")
    return {"theta": L.theta, "f1": L.f1, "method": L.method}


# -- handlers: pseudo -----------------------------------------------------
def _sigma_list(sigma) -> list:
    return [float(s) for s in sigma]


def cmd_pseudo_check(ctx):
    A = ctx.pair()
    n = ctx.args.n
    involution = pseudo.is_pseudo_involution(A, n, ctx.tol)
    T = riordan.truncate(A, n)
    f = pseudo.svd(T)
    pairs = pseudo.reciprocal_pairs_check(f.sigma, ctx.args.eps)
    ctx.evidence.append(f"jacobi-sweeps {f.sweeps}")
    return {
        "n": n,
        "pseudo_involution": involution,
        "reciprocal_pairs": pairs.ok,
        "max_pair_defect": pairs.max_defect,
    }


def cmd_pseudo_svd(ctx):
    A = ctx.pair()
    n = ctx.args.n
    T = riordan.truncate(A, n)
    f = pseudo.svd(T)
    pairs = pseudo.reciprocal_pairs_check(f.sigma, ctx.args.eps)
    structure = pseudo.structure_check(T, f)
    ctx.evidence.append(f"jacobi-sweeps {f.sweeps}")
    ctx.evidence.append(f"reciprocal-pairs {_plain(pairs.ok)}")
    ctx.evidence.append(f"structure-check {_plain(structure)}")
    return {
        "n": n,
        "sigma": _sigma_list(f.sigma),
        "pairs": [
            {"i": i, "j": j, "sigma_i": si, "sigma_j": sj, "defect": d} for i, j, si, sj, d in pairs.pairs
        ],
        "reciprocal_pairs": pairs.ok,
        "max_pair_defect": pairs.max_defect,
        "structure_check": structure,
    }


def cmd_pseudo_bench(ctx):
    A = ctx.pair()
    rows = pseudo.pairing_defects(A, range(2, ctx.args.n + 1))
    return {"defects": [{"n": n, "max_defect": d} for n, d in rows]}


# -- handlers: stabilizer -------------------------------------------------
def _solution(sol: stabilizer.StabilizerSolution) -> dict:
    return {"f1": sol.f1_branch, "F": sol.pair.F}


def cmd_stab_find(ctx):
    g = ctx.series("g")
    h = ctx.series("h")
    if ctx.args.branch is not None:
        branch = ctx.scalar(ctx.args.branch)
    else:
        t = stabilizer.TargetVector.from_series(h, ctx.tol)
        if t.k is None:
            raise NoSecondEntry("h has no nonzero entry beyond h0")
        roots = ctx.field.kth_roots(stabilizer.root_target(g, t, ctx.tol), t.k)
        if not roots:
            raise BadBranch("no k-th root of the target constant in this field")
        branch = roots[0]
    sol = stabilizer.stabilizer_F(g, h, branch, ctx.tol)
    ctx.evidence.append("stabilizer-equation-verified true")
    return {"g": sol.pair.g, **_solution(sol)}


def cmd_stab_enumerate(ctx):
    g = ctx.series("g")
    h = ctx.series("h")
    t = stabilizer.TargetVector.from_series(h, ctx.tol)
    sols = stabilizer.enumerate_S_g(g, t, ctx.tol)
    ctx.evidence.append(f"k {t.k}")
    ctx.evidence.append(f"admissible {_plain(stabilizer.admissible_g_check(g, t, ctx.tol))}")
    out = {"k": t.k, "count": len(sols)}
    for i, sol in enumerate(sols):
        out[f"f1_{i}"] = sol.f1_branch
        out[f"F_{i}"] = sol.pair.F
    return out


def cmd_stab_monomial(ctx):
    g = ctx.series("g")
    h = ctx.series("h")
    sols = stabilizer.monomial_stabilizers(h, g, ctx.tol)
    ok = all(stabilizer.stabilizes(s.pair, h, ctx.tol) for s in sols)
    ctx.evidence.append(f"stabilizer-equation-verified {_plain(ok)}")
    out = {"count": len(sols)}
    for i, sol in enumerate(sols):
        out[f"f1_{i}"] = sol.f1_branch
        out[f"F_{i}"] = sol.pair.F
    return out


# -- handlers: series -----------------------------------------------------
def cmd_series_eval(ctx):
    s = ctx.series("g")
    return {"series": s, "class": s.series_class(ctx.tol)}


def cmd_series_compose(ctx):
    h = ctx.series("g")
    F = ctx.series("f")
    return {"composition": compose(h, F, ctx.tol)}


def cmd_series_invert(ctx):
    F = ctx.series("f")
    Fbar = comp_inverse(F, ctx.tol)
    ok = compose(F, Fbar, ctx.tol) == TruncatedSeries.x(Fbar.deg, ctx.field) if ctx.tol is None else True
    ctx.evidence.append(f"round-trip {_plain(ok)}")
    return {"inverse": Fbar}


def cmd_series_root(ctx):
    a = ctx.series("g")
    k = ctx.args.k
    order = a.order(ctx.tol)
    if order is None:
        raise OrderMismatch("the zero series has no root with a nonzero leading term")
    lead = a.coeffs[order]
    if ctx.args.branch is not None:
        b = ctx.scalar(ctx.args.branch)
    else:
        roots = ctx.field.kth_roots(lead, k)
        if not roots:
            raise BadBranch(f"{lead} has no {k}-th root in this field")
        b = roots[0]
    if order == 0:
        if not ctx.field.eq(b**k, lead, ctx.tol):
            raise BadBranch(f"branch {b} does not satisfy b^{k} = {lead}")
        root = nth_root_unit(a.scale(1 / lead), k, ctx.tol).scale(b)
    else:
        root = nth_root_general(a, k, b, ctx.tol)
    return {"k": k, "root": root}


# -- argument parsing -----------------------------------------------------
COMMANDS = {
    "riordan": {
        "mul": (cmd_riordan_mul, ["g", "f", "g2", "f2"]),
        "inv": (cmd_riordan_inv, ["g", "f"]),
        "entry": (cmd_riordan_entry, ["g", "f", "i", "j"]),
        "matrix": (cmd_riordan_matrix, ["g", "f", "n"]),
        "decompose": (cmd_riordan_decompose, ["g", "f", "n"]),
    },
    "eigen": {
        "classify": (cmd_eigen_classify, ["g", "f", "witnesses"]),
        "vector": (cmd_eigen_vector, ["g", "f", "level"]),
        "diagonalize": (cmd_eigen_diagonalize, ["g", "f"]),
        "linearize": (cmd_eigen_linearize, ["f"]),
    },
    "pseudo": {
        "check": (cmd_pseudo_check, ["g", "f", "n", "eps"]),
        "svd": (cmd_pseudo_svd, ["g", "f", "n", "eps"]),
        "bench": (cmd_pseudo_bench, ["g", "f", "n"]),
    },
    "stab": {
        "find": (cmd_stab_find, ["g", "h", "branch"]),
        "enumerate": (cmd_stab_enumerate, ["g", "h"]),
        "monomial": (cmd_stab_monomial, ["g", "h"]),
    },
    "series": {
        "eval": (cmd_series_eval, ["g"]),
        "compose": (cmd_series_compose, ["g", "f"]),
        "invert": (cmd_series_invert, ["f"]),
        "root": (cmd_series_root, ["g", "k", "branch"]),
    },
}


def _add_option(p, name: str):
    if name == "g":
        p.add_argument("-g", dest="g", metavar="EXPR", help="unit series g (or the series operand)")
    elif name == "f":
        p.add_argument("-f", dest="f", metavar="EXPR", help="delta series F")
    elif name == "g2":
        p.add_argument("--g2", metavar="EXPR", help="g of the right factor")
    elif name == "f2":
        p.add_argument("--f2", metavar="EXPR", help="F of the right factor")
    elif name == "h":
        p.add_argument("--h", metavar="EXPR", help="target vector as a series")
    elif name in ("i", "j"):
        p.add_argument(f"--{name}", type=int, required=True)
    elif name == "n":
        p.add_argument("--n", type=int, default=6, help="matrix size (default 6)")
    elif name == "level":
        p.add_argument("--level", type=int, required=True, metavar="K")
    elif name == "k":
        p.add_argument("--k", type=int, default=2, help="root index (default 2)")
    elif name == "branch":
        p.add_argument("--branch", metavar="VALUE", help="root branch, e.g. -1 or 1/2 (c64: 0.5+0.8j)")
    elif name == "eps":
        p.add_argument("--eps", type=float, default=1e-7, help="reciprocal pairing tolerance")
    elif name == "witnesses":
        p.add_argument("--witnesses", type=int, default=4, help="number of witnesses to show")


_VALUE_FLAGS = {"-g", "-f", "--g2", "--f2", "--h", "--branch"}


def _attach_values(argv: list[str]) -> list[str]:
    """Glue each expression to its flag so values such as ``-x`` are not read as options."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(tok + argv[i + 1] if not tok.startswith("--") else f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--deg", type=int, default=DEFAULT_DEG, help="truncation degree N (default 16)")
    common.add_argument("--field", choices=["rat", "c64"], default="rat")
    common.add_argument("--tol", type=float, default=1e-10, help="zero tolerance for c64")
    common.add_argument("--json", action="store_true", help="print a JSON envelope")
    common.add_argument("--timing", action="store_true", help="report elapsed_ms (JSON output)")

    top = _Parser(prog="riordanlab", description="Riordan matrix toolkit")
    groups = top.add_subparsers(dest="group", metavar="GROUP", parser_class=_Parser)
    groups.required = True
    for gname, cmds in COMMANDS.items():
        gp = groups.add_parser(gname, help=f"{gname} commands")
        sub = gp.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
        sub.required = True
        for cname, (handler, opts) in cmds.items():
            cp = sub.add_parser(cname, parents=[common])
            for o in opts:
                _add_option(cp, o)
            cp.set_defaults(handler=handler)
    return top


# -- output ---------------------------------------------------------------
def _json_value(v, field):
    if isinstance(v, TruncatedSeries):
        return {
            "coeffs": [v.field.serialize(c) for c in v.coeffs],
            "deg": v.deg,
            "exact": v.exact,
        }
    if isinstance(v, DenseMatrix):
        return [[v.field.serialize(c) for c in r] for r in v.rows]
    if isinstance(v, OrderCertificate):
        return v.as_dict()
    if isinstance(v, dict):
        return {k: _json_value(x, field) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x, field) for x in v]
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return float(f"{v:.17g}")
    if isinstance(v, (Fraction, complex)):
        return field.serialize(field.coerce(v))
    return str(v)


def dumps(obj, indent: int = 0) -> str:
    """JSON with two-space indentation; arrays of scalars stay on one line."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in obj) + "]"
        if all(isinstance(v, dict) and all(not isinstance(x, (dict, list)) for x in v.values()) for v in obj):
            items = [inner + json.dumps(v, ensure_ascii=False) for v in obj]
        else:
            items = [inner + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def _text_scalar(v, field) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (Fraction, complex)):
        return field.display(field.coerce(v))
    return str(v)


def _table(headers: list, rows: list) -> list[str]:
    widths = [max(len(str(x)) for x in col) for col in zip(headers, *rows)]
    fmt = lambda r: "  ".join(str(x).rjust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    return [fmt(headers), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]


def render_text(env: dict, result: dict, field) -> str:
    lines = [f"{env['command']}  (field {env['field']}, truncation degree {env['deg']})"]
    for s in env["inputs"]:
        lines.append(f"  input {s}")
    series = {k: v for k, v in result.items() if isinstance(v, TruncatedSeries)}
    for k, v in result.items():
        if isinstance(v, (TruncatedSeries, DenseMatrix)):
            continue
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            keys = list(v[0])
            lines.extend("  " + r for r in _table(keys, [[_text_scalar(d[c], field) for c in keys] for d in v]))
        elif isinstance(v, list):
            lines.append(f"{k}: " + "  ".join(_text_scalar(x, field) for x in v))
        else:
            lines.append(f"{k}: {_text_scalar(v, field)}")
    if series:
        top = max(s.deg for s in series.values())
        rows = []
        for n in range(top + 1):
            rows.append([n] + [field.display(s.coeffs[n]) if n <= s.deg else "" for s in series.values()])
        lines.append("coefficients:")
        lines.extend("  " + r for r in _table(["n", *series], rows))
        for k, s in series.items():
            lines.append(f"  {k} = {format_series(s, 8) if s.deg > 8 else format_series(s)}")
    for k, v in result.items():
        if isinstance(v, DenseMatrix):
            lines.append(f"{k}:")
            cells = [[field.display(c) for c in r] for r in v.rows]
            w = max(len(c) for r in cells for c in r)
            lines.extend("  " + "  ".join(c.rjust(w) for c in r) for r in cells)
    if env["evidence"]:
        lines.append("evidence:")
        lines.extend(f"  {e}" for e in env["evidence"])
    if env["elapsed_ms"] is not None:
        lines.append(f"elapsed_ms: {env['elapsed_ms']}")
    return "\n".join(lines)


def _envelope(args, ctx, result, elapsed):
    return {
        "command": f"{args.group} {args.command}",
        "field": args.field,
        "deg": args.deg,
        "inputs": ctx.inputs,
        "result": result,
        "evidence": ctx.evidence,
        "elapsed_ms": elapsed,
    }


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_values(list(sys.argv[1:] if argv is None else argv)))
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.deg < 1:
        print("usage error: --deg must be at least 1", file=err)
        return 2
    ctx = Context(args)
    field = ctx.field
    start = time.perf_counter()
    code = 0
    try:
        result = args.handler(ctx)
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        result, code = {"error": exc.name, "message": str(exc)}, 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except RiordanError as exc:
        result, code = {"error": exc.name, "message": str(exc)}, 1
    elapsed = round((time.perf_counter() - start) * 1000, 3) if args.timing else None
    env = _envelope(args, ctx, result, elapsed)
    if args.json:
        env["result"] = _json_value(result, field)
        print(dumps(env), file=out)
    elif code:
        print(f"error: {result['error']}: {result['message']}", file=err)
    else:
        print(render_text(env, result, field), file=out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
