"""``zsf`` command line: zeros, transform, verify and corpus subcommands.

Exit codes: 0 success, 1 malformed input document, 2 tall system,
3 other solver error, 4 verification or corpus failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import TallSystemUnsupported, ZSFError
from .matcore import CMultiset, Tolerances, match_multisets
from .oracle import siso_numerator, square_mimo_zero_roots
from .sysmodel import StateSpace, SystemShape, classify, dynamic_extension
from .zerosolver import invariant_zeros, verify_zero_set
from .zsform import structure_residuals, transform

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_TALL = 2
EXIT_SOLVER = 3
EXIT_FAILED = 4

TOL_KEYS = ("rank_rtol", "zero_atol", "match_tol")
CORPUS = [f"example{i}.json" for i in range(1, 6)]


class DocumentError(ValueError):
    pass


@dataclass
class SystemDocument:
    name: str
    A: list
    B: list
    C: list
    D: list | None = None
    tolerances: dict = field(default_factory=dict)
    expected_zeros: list | None = None

    def system(self) -> StateSpace:
        return StateSpace(self.A, self.B, self.C, self.D)

    def tol(self, **flags) -> Tolerances:
        return Tolerances().updated(**self.tolerances).updated(**flags)

    def expected(self) -> CMultiset | None:
        if self.expected_zeros is None:
            return None
        return CMultiset.from_values([complex(re, im) for re, im in self.expected_zeros])

    def to_dict(self) -> dict:
        out = {"name": self.name, "A": self.A, "B": self.B, "C": self.C}
        if self.D is not None:
            out["D"] = self.D
        if self.tolerances:
            out["tolerances"] = self.tolerances
        if self.expected_zeros is not None:
            out["expected_zeros"] = self.expected_zeros
        return out


def _matrix_field(data, key, required=True):
    if key not in data:
        if required:
            raise DocumentError(f"field '{key}': missing")
        return None
    value = data[key]
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise DocumentError(f"field '{key}': expected a non-empty 2-D array (list of rows)")
    width = len(value[0])
    for i, row in enumerate(value):
        if len(row) != width:
            raise DocumentError(f"field '{key}': row {i} has {len(row)} entries, expected {width}")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise DocumentError(f"field '{key}[{i}][{j}]': not a finite number: {x!r}")
    return value


def parse_document(data) -> SystemDocument:
    if not isinstance(data, dict):
        raise DocumentError("top level must be a JSON object")
    name = data.get("name", "unnamed")
    if not isinstance(name, str):
        raise DocumentError("field 'name': expected a string")
    mats = {k: _matrix_field(data, k, required=(k != "D")) for k in "ABCD"}
    nx = len(mats["A"])
    if len(mats["A"][0]) != nx:
        raise DocumentError(f"field 'A': must be square, got {nx}x{len(mats['A'][0])}")
    if len(mats["B"]) != nx:
        raise DocumentError(f"field 'B': expected {nx} rows, got {len(mats['B'])}")
    if len(mats["C"][0]) != nx:
        raise DocumentError(f"field 'C': expected {nx} columns, got {len(mats['C'][0])}")
    nu, ny = len(mats["B"][0]), len(mats["C"])
    if mats["D"] is not None and (len(mats["D"]), len(mats["D"][0])) != (ny, nu):
        raise DocumentError(f"field 'D': expected shape {ny}x{nu}")
    tols = data.get("tolerances", {}) or {}
    if not isinstance(tols, dict) or set(tols) - set(TOL_KEYS):
        raise DocumentError(f"field 'tolerances': allowed keys are {', '.join(TOL_KEYS)}")
    for k, v in tols.items():
        if not isinstance(v, (int, float)) or not v > 0:
            raise DocumentError(f"field 'tolerances.{k}': must be a positive number")
    expected = data.get("expected_zeros")
    if expected is not None:
        if not isinstance(expected, list) or not all(
                isinstance(p, list) and len(p) == 2 and all(isinstance(x, (int, float)) for x in p)
                for p in expected):
            raise DocumentError("field 'expected_zeros': expected a list of [re, im] pairs")
    return SystemDocument(name, mats["A"], mats["B"], mats["C"], mats["D"], dict(tols), expected)


def loads_document(text: str, source="<string>") -> SystemDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None
    return parse_document(data)


def load_document(path) -> SystemDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise DocumentError(f"{path}: {e.strerror}") from None
    return loads_document(text, str(path))


def dumps_document(doc: SystemDocument) -> str:
    """JSON with one matrix row per line."""
    parts = []
    for key, value in doc.to_dict().items():
        if key in ("name", "tolerances"):
            body = json.dumps(value)
        else:
            rows = ",\n".join("    " + json.dumps(row) for row in value)
            body = "[\n" + rows + "\n  ]"
        parts.append(f"  {json.dumps(key)}: {body}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def corpus_documents():
    root = resources.files("zsf") / "corpus"
    return [(name, loads_document(root.joinpath(name).read_text(), name)) for name in CORPUS]


def fmt_complex(z, digits=8) -> str:
    z = complex(z)
    real = 0.0 if abs(z.real) < 10 ** -digits else z.real
    if z.imag == 0:
        return f"{real:.{digits}g}"
    sign = "+" if z.imag > 0 else "-"
    return f"{real:.{digits}g}{sign}{abs(z.imag):.{digits}g}j"


def fmt_list(ms) -> str:
    vals = ms.expanded() if isinstance(ms, CMultiset) else ms
    return ", ".join(fmt_complex(z) for z in vals) if len(vals) else "(none)"


def fmt_matrix(m, indent="  ") -> str:
    m = np.asarray(m)
    if m.size == 0:
        return f"{indent}[] ({m.shape[0]}x{m.shape[1]})"
    return "\n".join(indent + "  ".join(f"{x:10.4g}" for x in row) for row in m)


def _tol_flags(args):
    return {"rank_rtol": getattr(args, "tol_rank", None),
            "zero_atol": getattr(args, "tol_zero", None),
            "match_tol": getattr(args, "tol_match", None)}


def _json_out(obj):
    print(json.dumps(obj, indent=2))


def cmd_zeros(args) -> int:
    doc = load_document(args.file)
    tol = doc.tol(**_tol_flags(args))
    zs = invariant_zeros(doc.system(), tol)
    if args.json:
        _json_out({"name": doc.name, **zs.as_dict()})
        return EXIT_OK
    print(f"system: {doc.name}")
    print(f"shape: {zs.shape.value}")
    if zs.extended:
        print("note: dynamic extension applied (D != 0)")
    if zs.shape is SystemShape.WIDE:
        print(f"candidates: {fmt_list(zs.candidates)}")
        print("  candidate        mult  rank  generic  confirmed")
        for c in zs.checks:
            print(f"  {fmt_complex(c.value):<16} {c.multiplicity:>4}  {c.rank_at_zero:>4}"
                  f"  {c.rank_nominal:>7}  {'yes' if c.confirmed else 'no'}")
        print(f"confirmed: {fmt_list(zs.zeros)}")
    print(f"zeros: {fmt_list(zs.zeros)}")
    return EXIT_OK


def cmd_transform(args) -> int:
    doc = load_document(args.file)
    tol = doc.tol(**_tol_flags(args))
    sys_ = doc.system()
    extended = not sys_.is_strictly_proper(tol)
    if extended:
        sys_ = dynamic_extension(sys_)
    form = transform(sys_, tol)
    if args.json:
        _json_out({"name": doc.name, "extended": extended, **form.as_dict()})
        return EXIT_OK
    print(f"system: {doc.name}")
    if extended:
        print("note: dynamic extension applied (D != 0)")
    print(f"rho = {list(form.rho.per_output)} (total {form.rho.total}), l_z = {form.l_z}")
    print(f"B_z selection: {form.selection.selection_method}, cond(T) = {form.cond_T:.3g}")
    for name in ("T", "S", "A_eta", "A_eta_xi", "A_xi_eta", "A_xi", "B_xi", "C_xi"):
        print(f"{name}:")
        print(fmt_matrix(getattr(form, name)))
    print("structure residuals:")
    for k, v in structure_residuals(form).items():
        print(f"  {k}: {v:.3g}")
    return EXIT_OK


def _oracle_roots(sys_, tol):
    shape = classify(sys_)
    if shape is SystemShape.SISO:
        return "siso-numerator", siso_numerator(sys_).roots(tol)
    if shape is SystemShape.SQUARE:
        return "rosenbrock-determinant", square_mimo_zero_roots(sys_, tol)
    return None, None


def cmd_verify(args) -> int:
    doc = load_document(args.file)
    tol = doc.tol(**_tol_flags(args))
    sys_ = doc.system()
    zs = invariant_zeros(sys_, tol)
    report = verify_zero_set(sys_, zs, tol)
    ok = report.ok
    print(f"system: {doc.name} ({zs.shape.value})")
    print(f"zeros: {fmt_list(zs.zeros)}")
    for c in report.checks:
        print(f"  {fmt_complex(c.value):<16} rank {c.rank_at_zero}/{c.rank_nominal}"
              f"  {'confirmed' if c.confirmed else 'UNCONFIRMED'}")
    method, roots = _oracle_roots(sys_, tol)
    if method is not None:
        agree = match_multisets(zs.zeros, roots, tol.match_tol)
        ok &= agree
        print(f"oracle ({method}): {fmt_list(roots)} -> {'agree' if agree else 'MISMATCH'}")
    else:
        print("oracle: not available for this shape")
    expected = doc.expected()
    if expected is not None:
        agree = match_multisets(zs.zeros, expected, tol.match_tol)
        ok &= agree
        print(f"expected: {fmt_list(expected)} -> {'agree' if agree else 'MISMATCH'}")
    print("verify: PASS" if ok else "verify: FAIL")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_corpus(args) -> int:
    rows = []
    for fname, doc in corpus_documents():
        tol = doc.tol(**_tol_flags(args))
        try:
            zs = invariant_zeros(doc.system(), tol)
            passed = match_multisets(zs.zeros, doc.expected(), tol.match_tol)
            got = fmt_list(zs.zeros)
        except ZSFError as e:
            passed, got = False, f"error: {e}"
        rows.append((fname, doc.name, got, passed))
    if getattr(args, "json", False):
        _json_out([{"file": f, "name": n, "zeros": g, "pass": p} for f, n, g, p in rows])
    else:
        print(f"{'file':<15} {'result':<6} zeros")
        for fname, name, got, passed in rows:
            print(f"{fname:<15} {'PASS' if passed else 'FAIL':<6} {got}    # {name}")
    return EXIT_OK if all(r[3] for r in rows) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zsf", description="Invariant zeros via the zero-subspace form.")
    sub = parser.add_subparsers(dest="command", required=True)

    def tol_flags(p):
        p.add_argument("--tol-rank", type=float, help="relative singular-value rank cutoff")
        p.add_argument("--tol-zero", type=float, help="absolute zero threshold")
        p.add_argument("--tol-match", type=float, help="pairing tolerance for zeros")

    p = sub.add_parser("zeros", help="compute invariant zeros")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    tol_flags(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("transform", help="show the zero-subspace form")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    tol_flags(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="cross-check zeros by rank drop and oracle")
    p.add_argument("file")
    tol_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="run the bundled examples")
    p.add_argument("--json", action="store_true")
    tol_flags(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except TallSystemUnsupported as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TALL
    except (ZSFError, ValueError, np.linalg.LinAlgError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
