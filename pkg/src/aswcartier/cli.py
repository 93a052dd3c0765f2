"""Command line interface: ``aswc <command> [options]``.

Exit codes: 0 success, 1 a verification or table comparison failed,
2 the input was rejected.  Errors are printed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asw import CoverSpec, MinimalProfile, genus, is_minimal, validate_datum
from .basis import enumerate_basis, is_regular
from .cartier import cartier_manin, rank_and_anumber
from .gf import GFError, make_field
from .keyterms import rank_lower_bound
from .parse import parse_ratfunc_expr
from .ratfunc import RatFunc
from .suite import (RunConfig, compare_tables, probe_image, regenerate_tables,
                    sample_with_growth, verify_suite)

COMMANDS = ("info", "matrix", "anumber", "keyterms", "tables", "sample", "probe-image", "verify")


class InputError(ValueError):
    code = "bad_input"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="characteristic (odd prime)")
    common.add_argument("--k", type=int, default=None, help="field degree; omitted means auto")
    common.add_argument("--modulus", type=_int_list, default=None,
                        help="coefficients of t^0..t^k of the defining polynomial")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=50)
    common.add_argument("--format", choices=("json", "table", "csv"), default="json")
    common.add_argument("--profile", type=_int_list, default=None, metavar="n1,n2,n3,n4")
    common.add_argument("--infinity-order", type=int, default=None,
                        help="pole order of f at infinity when sampling a profile")
    common.add_argument("--f", dest="f", default=None, metavar="EXPR")
    common.add_argument("--h", dest="h", default=None, metavar="EXPR")
    common.add_argument("--cover", default=None, metavar="FILE", help="cover JSON file")
    common.add_argument("--tries", type=int, default=20, help="probe-image attempts")

    ap = argparse.ArgumentParser(prog="aswc", description="Cartier operator on Z/p^2 Artin-Schreier-Witt covers")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return ap


def _config(args) -> RunConfig:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    if args.modulus is not None and args.k is None:
        raise InputError("--modulus needs --k")
    return RunConfig(p=args.p, k=args.k, modulus=args.modulus, seed=args.seed,
                     trials=args.trials, format=args.format)


def _profile(args) -> MinimalProfile:
    if len(args.profile) != 4:
        raise InputError("--profile takes four counts n1,n2,n3,n4")
    return MinimalProfile.from_counts(*args.profile, p=args.p, infinity_order=args.infinity_order)


def _cover(args, cfg: RunConfig) -> CoverSpec:
    if args.cover:
        try:
            with open(args.cover) as fh:
                return CoverSpec.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read cover file: {exc}") from None
    if args.f:
        F = make_field(cfg.p, cfg.k or 1, cfg.modulus)
        f = parse_ratfunc_expr(args.f, F)
        h = parse_ratfunc_expr(args.h, F) if args.h else RatFunc(F)
        return CoverSpec.from_witt(f, h)
    if args.h:
        raise InputError("--h needs --f")
    if args.profile:
        return sample_with_growth(cfg.p, cfg.k, _profile(args), cfg.seed, cfg.modulus)
    raise InputError("give a cover with --f/--h, --cover or --profile")


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    width = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, width)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    return "".join(",".join(str(c) for c in r) + "\n" for r in [header] + rows)


def _emit(obj, fmt: str, header=None, rows=None) -> str:
    if fmt == "json" or header is None:
        return json.dumps(obj, sort_keys=True) + "\n"
    return _table(header, rows) if fmt == "table" else _csv(header, rows)


# --- commands ------------------------------------------------------------------

def cmd_info(args, cfg):
    c = _cover(args, cfg)
    datum = c.branching_datum()
    ok, reasons = validate_datum(datum, c.p)
    g = genus(datum, c.p)
    try:
        basis = enumerate_basis(c, check=False)
        nbasis, regular = len(basis), is_regular(c, basis)
    except ValueError:
        nbasis = regular = None
    out = {"cover": c.to_json(), "datum": datum.to_json(), "valid": ok, "reasons": reasons,
           "minimal": is_minimal(datum, c.p), "genus": g, "basis_size": nbasis,
           "basis_regular": regular}
    keys = ("datum", "valid", "minimal", "genus", "basis_size", "basis_regular")
    rows = [[k, json.dumps(out[k])] for k in keys]
    return _emit(out, cfg.format, ["field", "value"], rows), 0


def cmd_matrix(args, cfg):
    c = _cover(args, cfg)
    M = cartier_manin(c)
    F = c.field
    labels = [b.label(F) for b in M.basis]
    rows = [[labels[j]] + [F.format(a) for a in row] for j, row in enumerate(M.rows)]
    return _emit(M.to_json(), cfg.format, ["C(omega)"] + labels, rows), 0


def cmd_anumber(args, cfg):
    c = _cover(args, cfg)
    M = cartier_manin(c)
    rank, a = rank_and_anumber(M)
    out = {"g": M.g, "rank": rank, "a": a}
    return _emit(out, cfg.format, ["g", "rank", "a"], [[M.g, rank, a]]), 0


def cmd_keyterms(args, cfg):
    c = _cover(args, cfg)
    rep = rank_lower_bound(c)
    F = c.field
    out = rep.to_json()
    rows = [[r.omega.label(F), r.alpha, r.beta, r.kappa.label(F) if r.kappa else "",
             F.format(r.c) if r.c is not None else ""] for r in rep.records]
    return _emit(out, cfg.format, ["omega", "alpha", "beta", "kappa", "c"], rows), 0


def cmd_tables(args, cfg):
    if cfg.p != 3:
        raise InputError("the key-term tables are stated for p = 3")
    gen = regenerate_tables(cfg.seed, cfg.k)
    cmp = compare_tables(gen)
    ok = all(r["match"] for r in cmp)
    tables = [{k: v for k, v in t.items() if not k.startswith("_")} for t in gen]
    out = {"ok": ok, "comparison": cmp, "tables": tables}
    rows = [[r["id"], "match" if r["match"] else "MISMATCH", len(r["diffs"])] for r in cmp]
    return _emit(out, cfg.format, ["table", "status", "diffs"], rows), 0 if ok else 1


def cmd_sample(args, cfg):
    if not args.profile:
        raise InputError("sample needs --profile")
    c = sample_with_growth(cfg.p, cfg.k, _profile(args), cfg.seed, cfg.modulus)
    return json.dumps(c.to_json(), sort_keys=True) + "\n", 0


def cmd_probe_image(args, cfg):
    if cfg.p != 3:
        raise InputError("probe-image samples p = 3 covers")
    out = probe_image(cfg.seed, args.tries, cfg.k)
    return _emit(out, cfg.format, ["found", "detail"],
                 [[out["found"], out.get("omega", "")]]), 0


def cmd_verify(args, cfg):
    rep = verify_suite(cfg)
    rows = [[name, count] for name, count in rep["summary"].items()]
    return _emit(rep, cfg.format, ["check", "passed"], rows), 0 if rep["ok"] else 1


HANDLERS = {
    "info": cmd_info, "matrix": cmd_matrix, "anumber": cmd_anumber,
    "keyterms": cmd_keyterms, "tables": cmd_tables, "sample": cmd_sample,
    "probe-image": cmd_probe_image, "verify": cmd_verify,
}


def run(argv=None) -> tuple[str, int]:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    return HANDLERS[args.command](args, cfg)


def _report(exc: Exception) -> None:
    err = {"error": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
    sys.stderr.write(json.dumps(err) + "\n")


def main(argv=None) -> int:
    try:
        text, code = run(argv)
    except (ValueError, GFError, LookupError, ZeroDivisionError) as exc:
        _report(exc)
        return 2
    except RuntimeError as exc:
        # an internal consistency check failed on otherwise valid input
        _report(exc)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
