"""Command-line interface: ``superhh validate | hh | morita | export | builtin-list``.

Exit codes: 0 success (or verified), 1 mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bimod import GradedBimodule, validate_bimodule
from .builders import ALGEBRA_BUILTINS, CONTEXT_BUILTINS, MoritaContext, algebra_builtin, context_builtin
from .exactlin import QQ, Field, parse_field
from .formats import FormatError, Workspace, algebra_to_doc, context_to_docs, dumps, load_paths
from .hochschild import hochschild_complex, homology
from .morita import SIGN_RULES, verify_context
from .superalg import AxiomError, SuperAlgebra, validate

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _field_arg(text: str | None) -> Field | None:
    if text is None:
        return None
    try:
        return parse_field(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _is_builtin(ref: str) -> bool:
    return ref.startswith("builtin:")


def _load(paths, field, workspace: Workspace | None = None) -> Workspace:
    try:
        return load_paths(paths, field, workspace)
    except FormatError as exc:
        raise InputError(str(exc)) from None
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None


def _split_ref(ref: str) -> tuple[str, str | None]:
    """``path#name`` -> (path, name)."""
    if "#" in ref and not Path(ref).exists():
        path, name = ref.rsplit("#", 1)
        return path, name
    return ref, None


def _builtin_algebra(ref: str, field: Field | None) -> SuperAlgebra:
    try:
        return algebra_builtin(ref, field or QQ)
    except (KeyError, ValueError) as exc:
        raise InputError(exc.args[0] if exc.args else str(exc)) from None


def _pick(items: dict, name: str | None, what: str):
    if name is not None:
        if name not in items:
            raise InputError(f"no {what} named {name!r}")
        return items[name]
    if not items:
        raise InputError(f"no {what} found")
    return next(iter(items.values()))


# commands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    field = _field_arg(args.field)
    objects = []
    files = [p for p in args.paths if not _is_builtin(p)]
    for ref in args.paths:
        if _is_builtin(ref):
            try:
                ctx = context_builtin(ref, field or QQ)
                objects += [ctx.A, ctx.B, ctx.P, ctx.Q]
            except KeyError:
                objects.append(_builtin_algebra(ref, field))
    if files:
        objects += _load(files, field).objects()
    failed = False
    for obj in objects:
        rep = validate(obj) if isinstance(obj, SuperAlgebra) else validate_bimodule(obj)
        print(rep.summary())
        failed |= not rep.ok
    return EXIT_FAIL if failed else EXIT_OK


def cmd_hh(args) -> int:
    field = _field_arg(args.field)
    path, name = _split_ref(args.algebra)
    coeff_ref = args.coefficients
    if _is_builtin(path):
        A = _builtin_algebra(path, field)
        ws = Workspace(algebras={A.name: A})
        if coeff_ref:
            _load([_split_ref(coeff_ref)[0]], field, ws)
    else:
        paths = [path] + ([_split_ref(coeff_ref)[0]] if coeff_ref else [])
        ws = _load(list(dict.fromkeys(paths)), field)
        A = _pick(ws.algebras, name, "algebra")
    M = None
    if coeff_ref:
        M = _pick(ws.bimodules, _split_ref(coeff_ref)[1], "bimodule")
        if M.left != A or M.right != A:
            raise InputError(f"{M.name} is not an {A.name}-bimodule")
    for rep in [validate(A)] + ([validate_bimodule(M)] if M is not None else []):
        if not rep.ok:
            print(rep.summary(), file=sys.stderr)
            return EXIT_FAIL
    cx = hochschild_complex(A, M, args.max_degree, normalized=args.normalized)
    table = homology(cx, algebra=A.name, coefficients=(M.name if M is not None else A.name),
                     normalized=args.normalized)
    if args.json:
        print(table.to_json())
    else:
        coeffs = M.name if M is not None else A.name
        print(f"HH_*({A.name}; {coeffs}) over {A.field.tag}, degrees 0..{args.max_degree}")
        print(table.to_text())
    return EXIT_OK


def _context_from_files(paths, field) -> MoritaContext:
    ws = _load(paths, field)
    mods: list[GradedBimodule] = list(ws.bimodules.values())
    if len(mods) == 1:
        P = Q = mods[0]
    elif len(mods) >= 2:
        P, Q = mods[0], mods[1]
    else:
        raise InputError("a context needs the bimodules P and Q")
    try:
        return MoritaContext(P.left, P.right, P, Q, note=" ".join(str(p) for p in paths))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_morita(args) -> int:
    field = _field_arg(args.field)
    refs = args.context
    if len(refs) == 1 and _is_builtin(refs[0]):
        try:
            ctx = context_builtin(refs[0], field or QQ)
        except (KeyError, ValueError) as exc:
            raise InputError(exc.args[0] if exc.args else str(exc)) from None
    else:
        ctx = _context_from_files(refs, field)
    for rep in ctx.validate():
        if not rep.ok:
            print(rep.summary(), file=sys.stderr)
            return EXIT_FAIL
    report = verify_context(ctx, args.max_degree, sign_rule=args.omega_sign, with_e2=args.e2)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.verdict == "verified" else EXIT_FAIL


def cmd_export(args) -> int:
    field = _field_arg(args.field) or QQ
    name = args.name if _is_builtin(args.name) else f"builtin:{args.name}"
    try:
        doc = context_to_docs(context_builtin(name, field))
    except KeyError:
        try:
            doc = algebra_to_doc(algebra_builtin(name, field))
        except (KeyError, ValueError) as exc:
            raise InputError(exc.args[0] if exc.args else str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_builtin_list(args) -> int:
    if args.json:
        print(json.dumps({"algebras": ALGEBRA_BUILTINS, "contexts": CONTEXT_BUILTINS},
                         sort_keys=True, ensure_ascii=False))
        return EXIT_OK
    print("algebras:")
    for k, v in ALGEBRA_BUILTINS.items():
        print(f"  builtin:{k:<22}{v}")
    print("contexts:")
    for k, v in CONTEXT_BUILTINS.items():
        print(f"  builtin:{k:<22}{v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superhh", description="Super Hochschild homology and Morita checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check algebra/bimodule axioms")
    p.add_argument("paths", nargs="+", help="JSON files or builtin:<name>")
    p.add_argument("--field", default=None, help="Q or Fp:<prime> (overrides the files)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("hh", help="Hochschild homology dimensions")
    p.add_argument("algebra", help="builtin:<name>, a JSON file, or file#name")
    p.add_argument("--coefficients", default=None, help="bimodule file (or file#name); default: the algebra")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--field", default=None)
    p.add_argument("--normalized", action="store_true", help="use the normalized complex")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hh)

    p = sub.add_parser("morita", help="verify Morita invariance on a context")
    p.add_argument("--context", nargs="+", required=True, help="builtin:matrix:p,q | builtin:self:<alg> | files")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--field", default=None)
    p.add_argument("--e2", action="store_true", help="also compute both E2 pages")
    p.add_argument("--json", action="store_true")
    p.add_argument("--omega-sign", choices=SIGN_RULES, default="koszul", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_morita)

    p = sub.add_parser("export", help="write a builtin as JSON")
    p.add_argument("name", help="algebra or context builtin")
    p.add_argument("--out", default=None)
    p.add_argument("--field", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("builtin-list", help="list builtins")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_builtin_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "max_degree", 1) < 1:
        print("error: --max-degree must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AxiomError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
