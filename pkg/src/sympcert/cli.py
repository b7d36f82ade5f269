"""Command-line front end: ``sympcert <command> ...``.

Every command that writes ``--out FILE`` also writes ``FILE.manifest.json``
recording the argument list, seed, tool version, input and output digests
and wall time.  ``sympcert reproduce FILE.manifest.json`` re-runs the command
into a scratch directory and compares the outputs.

Exit codes: 0 pass, 1 certification failure, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .groebner import LEX, DEGREVLEX, GroebnerBasis, buchberger
from .polyring import PolyError, from_json, parse
from .relations import RelationId, default_profile, sp4_basis, sp4_generators

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# options whose values are input files; the manifest stores them absolute
INPUT_OPTIONS = ("--gb", "--claims", "--script", "--generators", "--input")
NUMERIC_COMMANDS = ("periods",)
PERIOD_TOL = 1e-9


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# IO helpers
# ---------------------------------------------------------------------------


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise UsageError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _profile(args, rid: RelationId, base=None):
    prof = base or default_profile(rid)
    overrides = {}
    for item in args.profile or []:
        if "=" not in item:
            raise UsageError(f"--profile expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    mode = getattr(args, "mode", None)
    if mode:
        key = {RelationId.RSUPSING: "rsupsing_mode", RelationId.QE2E2: "qe2e2_mode"}.get(rid)
        if key is None:
            raise UsageError(f"--mode applies to RSUPSING and QE2E2, not {rid}")
        overrides[key] = mode
    return prof.with_overrides(**overrides)


def _relation(text: str) -> RelationId:
    try:
        return RelationId(text)
    except ValueError as exc:
        raise UsageError(f"unknown relation {text!r}; choose from "
                         f"{', '.join(r.value for r in RelationId)}") from exc


def _load_gb(path):
    if path is None:
        return sp4_basis()
    return GroebnerBasis.from_json(_read_json(path))


# ---------------------------------------------------------------------------
# Commands: each returns (exit code, output text)
# ---------------------------------------------------------------------------


def cmd_groebner(args):
    if args.generators:
        data = _read_json(args.generators)
        gens = [parse(g) if isinstance(g, str) else from_json(g) for g in data]
    elif args.ideal == "sp4":
        gens = sp4_generators()
    else:
        raise UsageError("give --ideal sp4 or --generators FILE")
    order = {"lex": LEX, "degrevlex": DEGREVLEX}[args.order]
    gb = buchberger(gens, order)
    return EXIT_PASS, gb.dumps() + "\n"


def cmd_reduce(args):
    gb = _load_gb(args.gb)
    if args.poly is not None:
        p = parse(args.poly, gb.elements[0].table)
    elif args.input:
        p = from_json(_read_json(args.input), gb.elements[0].table)
    else:
        raise UsageError("give --poly TEXT or --input FILE")
    nf = gb.reduce(p)
    if args.text:
        return EXIT_PASS, f"{nf}\n"
    return EXIT_PASS, nf.dumps(gb.order) + "\n"


def cmd_relations_build(args):
    from .relations import build_relation
    rid = _relation(args.id)
    prof = _profile(args, rid)
    p = build_relation(rid, prof)
    out = {"relation": rid.value, "profile": prof.to_dict(), "poly": p.to_json()}
    return EXIT_PASS, _dump(out)


def cmd_coeffs(args):
    from .certifier.coeffs import coefficient_rules
    from .relations import build_relation
    rid = _relation(args.relation)
    prof = _profile(args, rid)
    gb = _load_gb(args.gb)
    cmap = coefficient_rules(gb.reduce(build_relation(rid, prof)))
    out = {"relation": rid.value, "profile": prof.to_dict(), "basis_digest": gb.digest(),
           "coefficients": cmap.to_json()}
    return EXIT_PASS, _dump(out)


def _cert_result(cert):
    return (EXIT_PASS if cert.passed else EXIT_FAIL), cert.dumps()


def cmd_certify_vanishing(args):
    from .certifier.instances import vanishing_certify, vanishing_profile
    rid = _relation(args.relation)
    prof = _profile(args, rid, vanishing_profile(rid))
    cert = vanishing_certify(args.case, rid, seed=args.seed, trials=args.trials, profile=prof)
    return _cert_result(cert)


def cmd_certify_nontrivial(args):
    from .certifier.nontrivial import nontriviality_certify
    rid = _relation(args.relation)
    cert = nontriviality_certify(rid, _profile(args, rid), _load_gb(args.gb), seed=args.seed)
    return _cert_result(cert)


def cmd_check_coeffs(args):
    from .certifier.coeffs import QUOTED_CLAIMS, Claim, check_claims
    rid = _relation(args.relation)
    if args.claims:
        data = _read_json(args.claims)
        if isinstance(data, dict):
            data = data.get("claims", [])
        claims = [Claim.from_json(rid.value, c) for c in data]
    else:
        claims = [c for c in QUOTED_CLAIMS if c.relation == rid.value]
    if not claims:
        raise UsageError(f"no claims for {rid}")
    return _cert_result(check_claims(rid, claims))


def cmd_check_derivation(args):
    from .certifier.derivation import PROOF_SCRIPTS, DerivationScript, derivation_check
    if args.script:
        script = DerivationScript.from_json(_read_json(args.script))
    elif args.builtin:
        rid = _relation(args.builtin)
        if rid.value not in PROOF_SCRIPTS:
            raise UsageError(f"no transcribed script for {rid}; have {sorted(PROOF_SCRIPTS)}")
        script = PROOF_SCRIPTS[rid.value]
    else:
        raise UsageError("give --script FILE or --builtin RELATION")
    return _cert_result(derivation_check(script))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def cmd_periods(args):
    import numpy as np
    from . import periodlab as pl
    curve = pl.CurveSpec(_fraction(args.g2), _fraction(args.g3))
    basis = pl.elliptic_periods(curve)
    rows = []
    checks = args.check or ["legendre", "split", "isogeny"]
    if "legendre" in checks:
        rows.append(("legendre_raw", pl.legendre_residual(basis), 1e-9))
        rows.append(("legendre_paper", pl.legendre_residual(basis.to_paper()), 1e-9))
    if "split" in checks:
        other = pl.elliptic_periods(pl.CurveSpec(*pl.LEMNISCATIC))
        m = pl.assemble_split_period(basis.to_paper(), other.to_paper())
        expect = np.linalg.det(basis.to_paper().matrix()) * np.linalg.det(other.to_paper().matrix())
        rows.append(("split_det", float(abs(np.linalg.det(m) - expect)), 1e-12))
    if "isogeny" in checks:
        n = 3
        rows.append(("isogeny_[3]", pl.isogeny_residual(n * np.eye(2), basis, basis, n * np.eye(2)), 1e-10))
    ok = all(r <= tol for _, r, tol in rows)
    out = {
        "curve": {"g2": str(curve.g2), "g3": str(curve.g3)},
        "omega1": [basis.omega1.real, basis.omega1.imag],
        "omega2": [basis.omega2.real, basis.omega2.imag],
        "eta1": [basis.eta1.real, basis.eta1.imag],
        "eta2": [basis.eta2.real, basis.eta2.imag],
        "residuals": {name: {"value": r, "tolerance": tol, "ok": r <= tol} for name, r, tol in rows},
        "outcome": "pass" if ok else "fail",
    }
    table = [f"{'check':<16}{'residual':>14}{'tolerance':>12}  ok"]
    table += [f"{name:<16}{r:>14.3e}{tol:>12.0e}  {'yes' if r <= tol else 'NO'}" for name, r, tol in rows]
    print("\n".join(table), file=sys.stderr if args.out is None else sys.stdout)
    return (EXIT_PASS if ok else EXIT_FAIL), _dump(out)


# ---------------------------------------------------------------------------
# Manifests
# ---------------------------------------------------------------------------


def _absolute_inputs(argv: list[str]) -> tuple[list[str], list[str]]:
    out, inputs = [], []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in INPUT_OPTIONS and i + 1 < len(argv):
            path = str(Path(argv[i + 1]).resolve())
            out += [a, path]
            inputs.append(path)
            i += 2
            continue
        if "=" in a and a.split("=", 1)[0] in INPUT_OPTIONS:
            opt, val = a.split("=", 1)
            path = str(Path(val).resolve())
            out += [opt, path]
            inputs.append(path)
            i += 1
            continue
        out.append(a)
        i += 1
    return out, inputs


def _strip_out(argv: list[str]) -> list[str]:
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out="):
            continue
        out.append(a)
    return out


def build_manifest(argv, args, out_path, seconds: float, exit_code: int) -> dict:
    argv_abs, inputs = _absolute_inputs(_strip_out(list(argv)))
    return {
        "argv": argv_abs,
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "inputs": {p: sha256_file(p) for p in inputs},
        "outputs": {str(Path(out_path).resolve()): sha256_file(out_path)},
        "exit_code": exit_code,
        "comparison": "numeric" if args.command in NUMERIC_COMMANDS else "exact",
        "wall_time_s": round(seconds, 3),
    }


def _numeric_close(a, b, tol: float) -> bool:
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_numeric_close(a[k], b[k], tol) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_numeric_close(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
    return a == b


def cmd_reproduce(args):
    manifest = _read_json(args.manifest)
    for key in ("argv", "inputs", "outputs"):
        if key not in manifest:
            raise UsageError(f"manifest lacks {key!r}")
    for path, digest in manifest["inputs"].items():
        if not Path(path).exists():
            raise UsageError(f"manifest input missing: {path}")
        if sha256_file(path) != digest:
            print(f"input changed since the run: {path}", file=sys.stderr)
            return EXIT_FAIL, None
    (recorded_path, recorded_digest), = manifest["outputs"].items()
    if not Path(recorded_path).exists():
        raise UsageError(f"manifest output missing: {recorded_path}")
    with tempfile.TemporaryDirectory() as tmp:
        fresh = Path(tmp) / "out.json"
        code = _dispatch(list(manifest["argv"]) + ["--out", str(fresh)], record=False)
        if code == EXIT_USAGE:
            return EXIT_USAGE, None
        fresh_digest = sha256_file(fresh)
        same = fresh_digest == recorded_digest and sha256_file(recorded_path) == recorded_digest
        if not same and manifest.get("comparison") == "numeric":
            same = _numeric_close(_read_json(fresh), _read_json(recorded_path), PERIOD_TOL)
    status = "identical" if same else "DIFFERENT"
    print(f"{recorded_path}: {status}", file=sys.stderr)
    return (EXIT_PASS if same else EXIT_FAIL), None


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p, seed: bool = False, profile: bool = False, gb: bool = False):
    p.add_argument("--out", help="write JSON here (plus a .manifest.json); default stdout")
    if seed:
        p.add_argument("--seed", type=int, default=1)
    if profile:
        p.add_argument("--profile", action="append", metavar="KEY=VALUE",
                       help="profile override, repeatable")
        p.add_argument("--mode", choices=("verbatim", "corrected"),
                       help="RSUPSING / QE2E2 variant")
    if gb:
        p.add_argument("--gb", help="basis file from `sympcert groebner` (default: recompute)")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sympcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sympcert {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal")
    p.add_argument("--ideal", choices=("sp4",))
    p.add_argument("--generators", help="JSON list of polynomial strings or JSON polys")
    p.add_argument("--order", choices=("lex", "degrevlex"), default="lex")
    _common(p)
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("reduce", help="normal form of a polynomial")
    p.add_argument("--poly", help="polynomial text")
    p.add_argument("--input", help="polynomial JSON file")
    p.add_argument("--text", action="store_true", help="print the remainder as text")
    _common(p, gb=True)
    p.set_defaults(func=cmd_reduce)

    rel = sub.add_parser("relations", help="relation polynomials")
    rsub = rel.add_subparsers(dest="action", parser_class=_Parser)
    rsub.required = True
    p = rsub.add_parser("build")
    p.add_argument("--id", required=True)
    _common(p, profile=True)
    p.set_defaults(func=cmd_relations_build)

    p = sub.add_parser("coeffs", help="coefficient map of a relation's normal form")
    p.add_argument("--relation", required=True)
    _common(p, profile=True, gb=True)
    p.set_defaults(func=cmd_coeffs)

    cert = sub.add_parser("certify", help="vanishing or non-triviality certificates")
    csub = cert.add_subparsers(dest="action", parser_class=_Parser)
    csub.required = True
    p = csub.add_parser("vanishing")
    p.add_argument("--case", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--trials", type=int, default=100)
    _common(p, seed=True, profile=True)
    p.set_defaults(func=cmd_certify_vanishing)
    p = csub.add_parser("nontrivial")
    p.add_argument("--relation", required=True)
    _common(p, seed=True, profile=True, gb=True)
    p.set_defaults(func=cmd_certify_nontrivial)

    chk = sub.add_parser("check", help="quoted coefficients and proof scripts")
    ksub = chk.add_subparsers(dest="action", parser_class=_Parser)
    ksub.required = True
    p = ksub.add_parser("coeffs")
    p.add_argument("--relation", required=True)
    p.add_argument("--claims", help="JSON list of {monomial, claimed, mode, assuming, units}")
    _common(p)
    p.set_defaults(func=cmd_check_coeffs)
    p = ksub.add_parser("derivation")
    p.add_argument("--script", help="derivation script JSON")
    p.add_argument("--builtin", help="use the transcribed script of this relation")
    _common(p)
    p.set_defaults(func=cmd_check_derivation)

    p = sub.add_parser("periods", help="numeric period checks for y^2 = 4x^3 - g2 x - g3")
    p.add_argument("--g2", required=True)
    p.add_argument("--g3", required=True)
    p.add_argument("--check", action="append", choices=("legendre", "split", "isogeny"))
    _common(p)
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("reproduce", help="re-run a manifest and compare outputs")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_reproduce, out=None)
    return parser


def _dispatch(argv: list[str], record: bool = True) -> int:
    try:
        args = make_parser().parse_args(argv)
        t0 = time.perf_counter()
        code, text = args.func(args)
        seconds = time.perf_counter() - t0
        if text is not None:
            if args.out:
                write_atomic(args.out, text)
                if record:
                    manifest = build_manifest(argv, args, args.out, seconds, code)
                    write_atomic(f"{args.out}.manifest.json", _dump(manifest))
            else:
                sys.stdout.write(text)
        return code
    except UsageError as exc:
        print(f"sympcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PolyError, ValueError, KeyError, OSError) as exc:
        print(f"sympcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv=None) -> int:
    return _dispatch(list(sys.argv[1:] if argv is None else argv))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
