"""Command-line interface: compute objects, run verification suites,
convert between normalizations, and manage the on-disk build cache.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 construction failure, 4 conversion failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import dispersionless as dl
from .diffpoly import DiffPoly, LocalFunctional, MuPoly
from .errors import ConstructionFailure, DepthInsufficient, IlwError, NotRealEven
from .hierarchy import (HierarchyConfig, LaxData, build_lax, pd_polynomial,
                        verify, verify_all)
from .report import VerificationReport
from .scalars import Scalar
from .shiftops import ShiftOperator

SCHEMA = "ilw-lax/1"


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- cache ---------------------------------------------------------------------

def resolve_cache_dir(explicit: Optional[str]) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get("ILW_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME")
    root = Path(base) if base else Path.home() / ".cache"
    return root / "ilwlax"


def _cache_path(cache_dir: Path, config: HierarchyConfig) -> Path:
    return cache_dir / f"lax_K{config.eps_order}_N{config.lambda_depth}.json"


def store_lax(lax: LaxData, cache_dir: Path) -> Path:
    """Atomic write: temp file in the same directory, then rename."""
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = _cache_path(cache_dir, lax.config)
    doc = {"schema": SCHEMA}
    doc.update(lax.to_json())
    fd, tmp = tempfile.mkstemp(dir=str(cache_dir), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(_dumps(doc))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_lax(config: HierarchyConfig, cache_dir: Path) -> Optional[LaxData]:
    """Load and re-validate a cached build; corrupt entries are reported
    on stderr and ignored."""
    path = _cache_path(cache_dir, config)
    if not path.is_file():
        return None
    try:
        doc = json.loads(path.read_text())
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unexpected schema {doc.get('schema')!r}")
        return LaxData.from_json(doc, d_max=config.d_max)
    except Exception as exc:  # noqa: BLE001 - any corruption means "recompute"
        print(f"warning: ignoring corrupt cache entry {path}: {exc}",
              file=sys.stderr)
        return None


def obtain_lax(config: HierarchyConfig, cache_dir: Path) -> LaxData:
    lax = load_lax(config, cache_dir)
    if lax is not None:
        return lax
    lax = build_lax(config)
    try:
        store_lax(lax, cache_dir)
    except OSError as exc:
        print(f"warning: could not persist build: {exc}", file=sys.stderr)
    return lax


# -- argument plumbing ------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--K", type=int, default=6, help="series truncation order")
    parser.add_argument("--N", type=int, default=5, help="shift depth")
    parser.add_argument("--dMax", type=int, default=3, help="highest flow index")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--gauge", choices=("tau", "mu"), default="tau")
    parser.add_argument("--side", choices=("lax", "ilw"), default="lax")
    parser.add_argument("--d", type=int, default=None, help="object index")
    parser.add_argument("--d1", type=int, default=None)
    parser.add_argument("--d2", type=int, default=None)
    parser.add_argument("--cache-dir", default=None)
    parser.add_argument("--seed", type=int, default=0)


def _config(args) -> HierarchyConfig:
    try:
        return HierarchyConfig(eps_order=args.K, lambda_depth=args.N, d_max=args.dMax)
    except (ValueError, DepthInsufficient) as exc:
        raise UsageError(str(exc))


def _need(args, name: str) -> int:
    value = getattr(args, name.lstrip("-").replace("-", "_"))
    if value is None:
        raise UsageError(f"option --{name} is required for this command")
    return value


def _emit(args, text_body: str, json_doc: dict) -> None:
    if args.format == "json":
        doc = {"schema": SCHEMA}
        doc.update(json_doc)
        print(_dumps(doc))
    else:
        print(text_body)


# -- compute -------------------------------------------------------------------

def _mu_density(functional: LocalFunctional) -> MuPoly:
    return MuPoly.from_diffpoly(functional.mu_representative())


def cmd_compute(args) -> int:
    config = _config(args)
    cache_dir = resolve_cache_dir(args.cache_dir)
    what = args.object
    if what == "pd":
        d = _need(args, "d")
        if d < 1:
            raise UsageError("--d must be >= 1 for pd")
        pd = pd_polynomial(d)
        terms = []
        for j in range(d, 0, -1):
            c = pd.coeffs[j - 1]
            body = "y" if j == 1 else f"y^{j}"
            if d - j:
                body += "*t" if d - j == 1 else f"*t^{d - j}"
            terms.append(body if c == 1 else f"({c})*{body}")
        _emit(args, " + ".join(terms), pd.to_json())
        return 0

    lax = obtain_lax(config, cache_dir)
    if what == "lax":
        n = _need(args, "d")
        if not 0 <= n <= config.lambda_depth:
            raise UsageError(f"lax coefficient index must be in 0..{config.lambda_depth}")
        obj = lax.a(n)
        _emit(args, obj.render(),
              {"kind": "lax_coefficient", "n": n, "object": obj.to_json()})
    elif what == "log":
        n = _need(args, "d")
        if not 1 <= n <= config.lambda_depth:
            raise UsageError(f"log coefficient index must be in 1..{config.lambda_depth}")
        obj = lax.f(n)
        _emit(args, obj.render(),
              {"kind": "log_coefficient", "n": n, "object": obj.to_json()})
    elif what == "flow":
        d = _need(args, "d")
        obj = lax.flow(d)
        _emit(args, obj.render(), {"kind": "flow", "d": d, "object": obj.to_json()})
    elif what == "hamiltonian":
        d = _need(args, "d")
        func = lax.hamiltonian(d) if args.side == "lax" else lax.ilw_hamiltonian(d)
        if args.gauge == "mu":
            mu = _mu_density(func)
            _emit(args, mu.render(),
                  {"kind": "hamiltonian", "side": args.side, "d": d, "gauge": "mu",
                   "density": mu.to_json()})
        else:
            _emit(args, func.render(),
                  {"kind": "hamiltonian", "side": args.side, "d": d, "gauge": "tau",
                   "density": func.density.to_json()})
    else:
        raise UsageError(f"unknown compute object {what!r}")
    return 0


# -- verify --------------------------------------------------------------------

def _report_doc(report: VerificationReport) -> dict:
    doc = {"schema": SCHEMA}
    doc.update(report.to_json())
    return doc


def _emit_reports(args, reports: List[VerificationReport]) -> int:
    if args.format == "json":
        if len(reports) == 1:
            print(_dumps(_report_doc(reports[0])))
        else:
            print(_dumps([_report_doc(r) for r in reports]))
    else:
        for report in reports:
            print(report.render())
    return 0 if all(r.passed for r in reports) else 1


def _random_scalar(rng: random.Random, order: int) -> Scalar:
    s = Scalar.zero(order)
    for _ in range(rng.randint(1, 2)):
        s = s + Scalar.term(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                            order, i=rng.randint(0, 1), tau=rng.randint(0, 1),
                            eps=rng.randint(0, min(2, order)))
    return s


def _random_poly(rng: random.Random, order: int) -> DiffPoly:
    p = DiffPoly.zero(order)
    for _ in range(rng.randint(1, 3)):
        pairs = {}
        for _ in range(rng.randint(1, 2)):
            k = rng.randint(0, 3)
            pairs[k] = pairs.get(k, 0) + 1
        p = p + DiffPoly.monomial(pairs, _random_scalar(rng, order))
    return p


def _residue_identity_reports(args, config: HierarchyConfig) -> List[VerificationReport]:
    """Randomized instances of the vanishing of the integral of
    res [f S^m, g S^n]."""
    import time as _time
    rng = random.Random(args.seed)
    start = _time.perf_counter()
    for trial in range(20):
        m = rng.randint(-3, 3)
        n = rng.randint(-3, 3)
        f = _random_poly(rng, config.eps_order)
        g = _random_poly(rng, config.eps_order)
        comm = ShiftOperator.of_poly(f, m).commutator(ShiftOperator.of_poly(g, n))
        func = LocalFunctional(comm.residue())
        if not func.is_zero():
            millis = int(1000 * (_time.perf_counter() - start))
            return [VerificationReport(
                "residue_identity", (args.seed, trial), False,
                func.density.to_json(), millis)]
    millis = int(1000 * (_time.perf_counter() - start))
    return [VerificationReport("residue_identity", (args.seed,), True, None, millis)]


def cmd_verify(args) -> int:
    config = _config(args)
    cache_dir = resolve_cache_dir(args.cache_dir)
    check = args.check
    if check == "residue-identity":
        return _emit_reports(args, _residue_identity_reports(args, config))
    if check == "dispersionless":
        d = args.d if args.d is not None else config.d_max + 2
        reports = dl.check_dispersionless_identities(d)
        return _emit_reports(args, reports)
    lax = obtain_lax(config, cache_dir)
    if check == "all":
        return _emit_reports(args, verify_all(lax))
    if check == "defining-equation":
        reports = [verify(lax, "defining_equation")]
    elif check == "log-commutation":
        reports = [verify(lax, "log_commutation", (_need(args, "d"),))]
    elif check == "log-residue-recursion":
        reports = [verify(lax, "log_residue_recursion", (_need(args, "d"),))]
    elif check == "flow-commutativity":
        reports = [verify(lax, "flow_commutativity",
                          (_need(args, "d1"), _need(args, "d2")))]
    elif check == "conservation":
        reports = [verify(lax, "conservation", (_need(args, "d"),))]
    elif check == "hamiltonian-flow-match":
        reports = [verify(lax, "hamiltonian_flow_match", (_need(args, "d"),))]
    elif check == "triangular-relation":
        reports = [verify(lax, "triangular_relation", (_need(args, "d"),))]
    elif check == "ilw-h2":
        reports = [verify(lax, "ilw_h2_explicit")]
    elif check == "ilw-equation":
        reports = [verify(lax, "ilw_equation_form")]
    elif check == "brackets":
        reports = [verify(lax, "brackets", (_need(args, "d1"), _need(args, "d2")))]
    elif check == "symbol-match":
        reports = [verify(lax, "symbol_match")]
    else:
        raise UsageError(f"unknown verification {check!r}")
    return _emit_reports(args, reports)


# -- render --------------------------------------------------------------------

def cmd_render(args) -> int:
    config = _config(args)
    what = args.object
    if what == "hamiltonian":
        cache_dir = resolve_cache_dir(args.cache_dir)
        lax = obtain_lax(config, cache_dir)
        d = _need(args, "d")
        func = lax.hamiltonian(d) if args.side == "lax" else lax.ilw_hamiltonian(d)
        if args.gauge == "mu":
            mu = _mu_density(func)
            _emit(args, mu.render(), {"kind": "density", "gauge": "mu",
                                      "density": mu.to_json()})
        else:
            _emit(args, func.render(), {"kind": "density", "gauge": "tau",
                                        "density": func.density.to_json()})
        return 0
    if what == "functional":
        doc = json.load(sys.stdin)
        poly = DiffPoly.from_json(doc["density"] if "density" in doc else doc)
        if args.gauge == "mu":
            mu = _mu_density(LocalFunctional(poly))
            _emit(args, mu.render(), {"kind": "density", "gauge": "mu",
                                      "density": mu.to_json()})
        else:
            _emit(args, poly.render(), {"kind": "density", "gauge": "tau",
                                        "density": poly.to_json()})
        return 0
    if what == "symbol":
        doc = json.load(sys.stdin)
        op = ShiftOperator.from_json(doc)
        _emit(args, op.render_symbol(), {"kind": "symbol",
                                         "symbol": op.render_symbol()})
        return 0
    raise UsageError(f"unknown render object {what!r}")


# -- cache ----------------------------------------------------------------------

def cmd_cache(args) -> int:
    cache_dir = resolve_cache_dir(args.cache_dir)
    action = args.action
    if action == "list":
        entries = sorted(cache_dir.glob("lax_K*_N*.json")) if cache_dir.is_dir() else []
        if args.format == "json":
            print(_dumps({"schema": SCHEMA, "entries": [e.name for e in entries]}))
        else:
            for entry in entries:
                print(entry.name)
        return 0
    if action == "purge":
        if cache_dir.is_dir():
            for entry in cache_dir.glob("lax_K*_N*.json"):
                entry.unlink()
        return 0
    if action == "build":
        config = _config(args)
        lax = build_lax(config)
        path = store_lax(lax, cache_dir)
        if args.format == "json":
            print(_dumps({"schema": SCHEMA, "stored": path.name}))
        else:
            print(f"stored {path}")
        return 0
    raise UsageError(f"unknown cache action {action!r}")


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilwlax",
        description="Exact Lax-side computations and verifications for the "
                    "intermediate long wave hierarchy.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="compute and print one object")
    p_compute.add_argument("object",
                           choices=("lax", "log", "flow", "hamiltonian", "pd"))
    _add_common(p_compute)

    p_verify = sub.add_parser("verify", help="run verification checks")
    p_verify.add_argument("check", choices=(
        "all", "defining-equation", "log-commutation", "log-residue-recursion",
        "flow-commutativity", "conservation", "hamiltonian-flow-match",
        "triangular-relation", "ilw-h2", "ilw-equation", "dispersionless",
        "brackets", "symbol-match", "residue-identity"))
    _add_common(p_verify)

    p_render = sub.add_parser("render", help="convert or pretty-print objects")
    p_render.add_argument("object", choices=("hamiltonian", "functional", "symbol"))
    _add_common(p_render)

    p_cache = sub.add_parser("cache", help="manage the on-disk build cache")
    p_cache.add_argument("action", choices=("list", "purge", "build"))
    _add_common(p_cache)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"compute": cmd_compute, "verify": cmd_verify,
                "render": cmd_render, "cache": cmd_cache}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ConstructionFailure as exc:
        print(f"construction failure: {exc}", file=sys.stderr)
        return 3
    except NotRealEven as exc:
        print(f"conversion failure: {exc}", file=sys.stderr)
        return 4
    except DepthInsufficient as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except IlwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
