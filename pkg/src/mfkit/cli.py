"""mfkit command line: one verb per computation, JSON on stdout.

Exit codes: 0 success, 2 result computed but not stabilized at the given
bounds, 1 error (bad input, invalid factorization, ...).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .exactalg import Field, PolySyntaxError, UnknownVariable, parse_poly
from .mfcore import (MFError, dual, knorrer_double, mf_to_json, read_mf, stabilized_residue_field,
                     trivial_mf, ts_tensor, write_mf)

EXIT_OK, EXIT_ERROR, EXIT_UNSTABLE = 0, 1, 2
DEFAULTS = {"dmax": 16, "nmax": 6, "K": 2}


class CLIError(Exception):
    def __init__(self, msg: str, code: str = "error"):
        super().__init__(msg)
        self.code = code


# ------------------------------------------------------------------ helpers

def _env_default(name: str, fallback):
    v = os.environ.get(name)
    return v if v not in (None, "") else fallback


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("bounds must be >= 1")
    return v


def _field(s: str) -> Field:
    try:
        return Field.parse(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _vars(args) -> Optional[List[str]]:
    return [v.strip() for v in args.vars.split(",")] if args.vars else None


def _poly(args, src: str):
    p = parse_poly(src, _vars(args))
    if args.weights:
        w = tuple(int(x) for x in args.weights.split(","))
        if len(w) != p.ring.n:
            raise CLIError(f"--weights needs {p.ring.n} entries", "bad_weights")
        p = p.embed(p.ring.with_weights(w))
    return p


def _mf(args, path: str):
    try:
        return read_mf(path)
    except OSError as e:
        raise CLIError(f"cannot read {path}: {e.strerror}", "io")
    except json.JSONDecodeError as e:
        raise CLIError(f"{path} is not JSON: {e}", "bad_json")


def _mf_pair(args):
    if args.self:
        kind, src = args.self
        f = _poly(args, src)
        if kind == "stab":
            m = stabilized_residue_field(f)
        elif kind == "trivial":
            m = trivial_mf(f)
        else:
            raise CLIError(f"--self kind must be 'stab' or 'trivial', not {kind!r}", "usage")
        return m, m
    if not args.mf:
        raise CLIError("give one or two factorization files, or --self KIND POLY", "usage")
    m = _mf(args, args.mf[0])
    n = _mf(args, args.mf[1]) if len(args.mf) > 1 else m
    return m, n


def _quadric(args):
    from .clifford import QuadraticForm
    if args.quadric and args.gram:
        raise CLIError("use either --quadric or --gram", "usage")
    if args.quadric:
        return QuadraticForm.from_quadric(args.quadric, _vars(args))
    if args.gram:
        rows = [[Fraction(x.strip()) for x in r.split(",")] for r in args.gram.split(";")]
        return QuadraticForm.from_gram(rows)
    raise CLIError("a quadratic form is required (--quadric or --gram)", "usage")


def _emit_mf(args, m) -> Tuple[dict, int]:
    if args.output:
        write_mf(m, args.output)
    return {"mf": mf_to_json(m), "written": args.output}, EXIT_OK


def _stab(doc: dict, ok: bool) -> Tuple[dict, int]:
    return doc, (EXIT_OK if ok else EXIT_UNSTABLE)


# ------------------------------------------------------------------- verbs

def cmd_validate(args):
    try:
        m = read_mf(args.file)
    except MFError as e:
        raise CLIError(str(e), "invalid_factorization")
    except OSError as e:
        raise CLIError(f"cannot read {args.file}: {e.strerror}", "io")
    return {"valid": True, "rank": m.rank, "f": str(m.f), "vars": list(m.ring.names)}, EXIT_OK


def cmd_milnor(args):
    from .hochschild import milnor_number
    r = milnor_number(_poly(args, args.poly), args.dmax, args.field)
    return _stab(r.to_json("milnor"), r.stabilized)


def cmd_global_milnor(args):
    from .hochschild import global_jacobian_dim
    r = global_jacobian_dim(_poly(args, args.poly), args.dmax, args.field)
    return _stab(r.to_json("global_milnor"), r.stabilized)


def cmd_ext(args):
    from .homalg import ext_k, ext_tate
    m, n = _mf_pair(args)
    r = (ext_k if args.mode == "k" else ext_tate)(m, n, args.dmax, args.field)
    doc = {"even": r.even, "odd": r.odd, "mode": args.mode, "stabilized": r.stabilized,
           "D_used": r.D_used, "certificate": r.certificate}
    return _stab(doc, r.stabilized)


def cmd_ext_beta(args):
    from .homalg import ext_beta
    if args.nmax < 2:
        raise CLIError("--nmax must be at least 2 for a beta-module fit", "usage")
    m, n = _mf_pair(args)
    r = ext_beta(m, n, args.nmax, args.dmax, args.field)
    mod = r.module
    doc = {"even": r.tate.even if r.tate else None, "odd": r.tate.odd if r.tate else None,
           "free_rank": list(mod.free_rank) if mod else None,
           "torsion": [[a, p] for a, p in mod.torsion] if mod else None,
           "stabilized": r.stabilized and r.determined, "determined": r.determined,
           "reason": r.fit.reason, "D_used": r.D_used, "N_used": r.N_used,
           "slice_totals": {str(N): list(v) for N, v in r.slice_totals.items()}}
    return _stab(doc, r.stabilized and r.determined)


def cmd_hh(args):
    from .hochschild import hh_tate
    r = hh_tate(_poly(args, args.poly), args.dmax, args.field)
    return _stab(r.to_json(), r.stabilized)


def cmd_hh_cochain(args):
    from .hochschild import hh_cochain_tate
    r = hh_cochain_tate(_poly(args, args.poly), args.dmax, args.field)
    return _stab(r.to_json(), r.stabilized)


def cmd_hc(args):
    from .hochschild import hc_tate
    r = hc_tate(_poly(args, args.poly), args.K, args.dmax, args.field)
    doc = r.to_json()
    doc["K"] = args.K
    return _stab(doc, r.stabilized)


def cmd_hkr_check(args):
    from .hochschild import hkr_intertwine_check
    ok = hkr_intertwine_check(_poly(args, args.poly), args.mmax, args.degmax)
    return {"hkr_intertwines": ok, "m_max": args.mmax, "deg_max": args.degmax}, (EXIT_OK if ok else EXIT_ERROR)


def cmd_socle(args):
    from .hochschild import JacobianError, socle_pairing
    f = _poly(args, args.poly)
    try:
        sp = socle_pairing(f, f.ring.weights)
    except JacobianError as e:
        raise CLIError(str(e), "jacobian")
    return sp.to_json(f.ring), EXIT_OK


def _ts_rename(args, m, n) -> Dict[str, str]:
    if not args.rename:
        clash = sorted(set(m.ring.names) & set(n.ring.names))
        if clash:
            raise CLIError(f"variable names collide: {clash}; pass --rename old=new,...", "variable_collision")
        return {}
    try:
        return dict(kv.split("=", 1) for kv in args.rename.split(","))
    except ValueError:
        raise CLIError("--rename takes old=new pairs separated by commas", "usage")


def cmd_ts(args):
    m, n = _mf(args, args.mf[0]), _mf(args, args.mf[1])
    ren = _ts_rename(args, m, n)
    t = ts_tensor(m, n, ren or None)
    doc, code = _emit_mf(args, t)
    doc["renamed"] = ren
    return doc, code


def cmd_dual(args):
    return _emit_mf(args, dual(_mf(args, args.mf)))


def cmd_knorrer(args):
    return _emit_mf(args, knorrer_double(_mf(args, args.mf)))


def cmd_clifford(args):
    from .clifford import CliffordAlgebra, mf_end_algebra
    Q = _quadric(args)
    r = mf_end_algebra(Q, args.N, args.D)
    alg = CliffordAlgebra(Q)
    names = Q.names
    doc = {"n": Q.n, "gram": [[str(x) for x in row] for row in Q.Q], "N": r.N, "D": r.D,
           "even": r.dims[0], "odd": r.dims[1], "clifford_dims": list(r.clifford_dims),
           "degree_dims": {str(j): v for j, v in r.degree_dims.items()},
           "products": {f"{names[a]}*{names[b]}": alg.format(el) for (a, b), el in sorted(r.products.items())},
           "checks": r.checks, "matches_clifford": r.ok}
    return doc, EXIT_OK if r.ok else EXIT_ERROR


def cmd_clifford_compare(args):
    from .clifford import compare_clifford
    Q = _quadric(args)
    ok = compare_clifford(Q, args.N, args.D)
    return {"compare": ok, "n": Q.n, "N": args.N, "D": args.D}, EXIT_OK if ok else EXIT_ERROR


def cmd_hyperbolic(args):
    from .clifford import hyperbolic_triviality
    r = hyperbolic_triviality(args.r, args.nmax, args.dmax, args.field)
    return _stab(r.to_json(), r.stabilized)


VERBS = {
    "validate": cmd_validate, "milnor": cmd_milnor, "global-milnor": cmd_global_milnor, "ext": cmd_ext,
    "ext-beta": cmd_ext_beta, "hh": cmd_hh, "hh-cochain": cmd_hh_cochain, "hc": cmd_hc,
    "hkr-check": cmd_hkr_check, "socle": cmd_socle, "ts": cmd_ts, "dual": cmd_dual, "knorrer": cmd_knorrer,
    "clifford": cmd_clifford, "clifford-compare": cmd_clifford_compare, "hyperbolic": cmd_hyperbolic,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=argparse.SUPPRESS,
                        help="Q (default) or Fp:p; env MFKIT_FIELD")
    common.add_argument("--dmax", type=_positive, default=argparse.SUPPRESS,
                        help="degree bound D_max (default 16); env MFKIT_DMAX")
    common.add_argument("--nmax", type=_positive, default=argparse.SUPPRESS, help="beta-slices N_max (default 6)")
    common.add_argument("--vars", default=argparse.SUPPRESS, help="fix the variable order, e.g. x,y,z")
    common.add_argument("--weights", default=argparse.SUPPRESS, help="grading weights w1,w2,...")
    common.add_argument("--table", action="store_true", default=argparse.SUPPRESS, help="aligned text output")

    p = argparse.ArgumentParser(prog="mfkit", parents=[common],
                                description="Exact invariants of matrix factorizations and singularities.")
    p.add_argument("--version", action="version", version=f"mfkit {__version__}")
    sub = p.add_subparsers(dest="verb", metavar="VERB")
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("validate", "check pq = qp = f*I for a factorization file")
    s.add_argument("file")
    for name, h in (("milnor", "local Milnor number at the origin"),
                    ("global-milnor", "dim k[x]/(df) over all critical points"),
                    ("hh", "Hochschild homology after inverting beta (twisted de Rham)"),
                    ("hh-cochain", "Hochschild cohomology after inverting beta (polyvectors)"),
                    ("hc", "u-truncated cyclic complex"),
                    ("hkr-check", "exhaustive HKR intertwining check"),
                    ("socle", "socle pairing on the Jacobian ring")):
        s = add(name, h)
        s.add_argument("poly")
        if name == "hc":
            s.add_argument("-K", type=_positive, default=DEFAULTS["K"], help="u-truncation (default 2)")
        if name == "hkr-check":
            s.add_argument("--mmax", type=_positive, default=3)
            s.add_argument("--degmax", type=int, default=3)
    for name, h in (("ext", "Ext between two factorizations"), ("ext-beta", "Ext over k[[beta]] (module fit)")):
        s = add(name, h)
        s.add_argument("mf", nargs="*", help="factorization files (one file: End)")
        s.add_argument("--self", nargs=2, metavar=("KIND", "POLY"),
                       help="End of a built-in factorization: stab (residue field) or trivial")
        if name == "ext":
            s.add_argument("--mode", choices=("tate", "k"), default="tate",
                           help="tate: beta inverted (default); k: over the ambient ring")
    s = add("ts", "Thom-Sebastiani tensor product of two factorization files")
    s.add_argument("mf", nargs=2)
    s.add_argument("--rename", help="rename variables of the second factor, e.g. x=x2,y=y2")
    s.add_argument("-o", "--output")
    for name, h in (("dual", "dual factorization"), ("knorrer", "tensor with (u, v) of uv in fresh variables")):
        s = add(name, h)
        s.add_argument("mf")
        s.add_argument("-o", "--output")
    for name, h in (("clifford", "End algebra of the residue field of a quadric vs its Clifford algebra"),
                    ("clifford-compare", "true iff the End algebra matches the Clifford algebra")):
        s = add(name, h)
        s.add_argument("--quadric")
        s.add_argument("--gram", help="rows separated by ';', entries by ','")
        s.add_argument("-N", type=_positive, default=4, help="beta-truncation of the resolution (default 4)")
        s.add_argument("-D", type=_positive, default=8, help="polynomial degree bound (default 8)")
    s = add("hyperbolic", "End of a Lagrangian for the rank-r hyperbolic form")
    s.add_argument("r", type=_positive)
    return p


def _resolve_config(args) -> None:
    if not hasattr(args, "field"):
        try:
            args.field = Field.parse(_env_default("MFKIT_FIELD", "Q"))
        except ValueError as e:
            raise CLIError(f"MFKIT_FIELD: {e}", "config")
    if not hasattr(args, "dmax"):
        try:
            args.dmax = int(_env_default("MFKIT_DMAX", DEFAULTS["dmax"]))
        except ValueError:
            raise CLIError("MFKIT_DMAX must be an integer", "config")
        if args.dmax < 1:
            raise CLIError("MFKIT_DMAX must be >= 1", "config")
    if not hasattr(args, "nmax"):
        args.nmax = DEFAULTS["nmax"]
    for k in ("vars", "weights"):
        if not hasattr(args, k):
            setattr(args, k, None)
    if not hasattr(args, "table"):
        args.table = False


def _provenance(args, argv) -> dict:
    return {"command": ["mfkit"] + list(argv), "version": __version__,
            "config": {"field": str(args.field), "D_max": args.dmax, "N_max": args.nmax,
                       "window": 3, "vars": args.vars, "weights": args.weights}}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render_table(doc: dict) -> str:
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict) and v:
            for k in v:
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        else:
            rows.append((prefix, json.dumps(v) if not isinstance(v, str) else v))

    walk("", doc)
    w = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


def run(argv: Sequence[str]) -> Tuple[dict, int]:
    """Parse and execute; returns (document, exit code).  Never raises for user errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else EXIT_ERROR
        return {"error": "usage", "code": "usage"} if code else {}, (EXIT_ERROR if code else EXIT_OK)
    resolved = False
    try:
        _resolve_config(args)
        resolved = True
        doc, code = VERBS[args.verb](args)
    except CLIError as e:
        doc, code = {"error": str(e), "code": e.code}, EXIT_ERROR
    except PolySyntaxError as e:
        doc, code = {"error": str(e), "code": "syntax", "line": e.line, "column": e.col}, EXIT_ERROR
    except UnknownVariable as e:
        doc, code = {"error": str(e), "code": "unknown_variable"}, EXIT_ERROR
    except MFError as e:
        doc, code = {"error": str(e), "code": "invalid_factorization"}, EXIT_ERROR
    except (ValueError, ZeroDivisionError) as e:
        doc, code = {"error": str(e), "code": type(e).__name__}, EXIT_ERROR
    doc = _jsonable(doc)
    if resolved:
        doc["provenance"] = _provenance(args, argv)
    doc["exit_code"] = code
    return doc, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    doc, code = run(argv)
    if not doc:
        return code
    table = "--table" in argv
    if table:
        print(render_table(doc))
    else:
        print(json.dumps(doc, sort_keys=True))
    if "error" in doc:
        print(f"mfkit: {doc['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
