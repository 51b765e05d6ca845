"""Command-line interface: ``albert-theta {enumerate,theta,verify,zeta,lattice,xelements}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 compute budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .enumerate import ShellCache, get_shell, weighted_count_blocks
from .lattice import make_lattice
from .localzeta import zeta_table
from .modforms import InsufficientPrecisionError, NotModularError, QSeries, delta, eisenstein, format_combination, \
    graded_basis, solve_in_span
from .weightpoly import BudgetExceededError, WeightPolynomial, builtin_B, search_xelements, solve_collinear, \
    theta_series

SCHEMA = "albert-theta/v1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("albert_theta")

# rough element counts, printed before opt-in expensive runs
_COST = {("JE", 3): "about 2.5e9 norm-9 lattice vectors (hours)", ("JZ", 5): "about 1.9e7 elements"}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    lattice: str = "JZ"
    degree: int = 0
    poly: str = "const"
    prec: int = 1
    normalization: str = "plain"
    cache_dir: str | None = None
    workers: int = 1
    fmt: str = "json"
    force: bool = False

    def __post_init__(self):
        if self.prec < 1:
            raise UsageError("precision must be >= 1")
        if self.degree < 0:
            raise UsageError("degree must be >= 0")
        if self.workers < 1:
            raise UsageError("worker count must be >= 1")


def _cache(cfg: JobConfig) -> ShellCache:
    return ShellCache(cfg.cache_dir)


def _emit(obj: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        for k in sorted(obj):
            v = obj[k]
            w.writerow([k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v])


# --- enumerate ----------------------------------------------------------------------


def cmd_enumerate(cfg: JobConfig, trace: int, out) -> int:
    name = cfg.lattice
    if trace < 1:
        raise UsageError("trace must be >= 1")
    if name == "JE" and trace >= 3 and not cfg.force:
        log.error("JE trace %d needs --force (%s)", trace, _COST.get(("JE", 3)))
        return EXIT_BUDGET
    result = {"schema": SCHEMA, "command": "enumerate", "lattice": name, "trace": trace}
    if name == "JZ" and trace >= 5:
        count, weighted = weighted_count_blocks(trace)
        result.update(count=count, weighted_count=weighted, cached=False)
    else:
        if cfg.force and (name, trace) in _COST:
            log.warning("running %s trace %d: %s", name, trace, _COST[(name, trace)])
        shell = get_shell(name, trace, _cache(cfg), workers=cfg.workers)
        result.update(count=len(shell), weighted_count=shell.weighted_count,
                      cached=str(_cache(cfg).path(name, trace)))
    _emit(result, cfg.fmt, out)
    return EXIT_OK


# --- theta ----------------------------------------------------------------------


def _parse_indices(spec: str) -> list[int]:
    try:
        return [int(t) for t in spec.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad index list {spec!r}") from exc


def _points(name: str, cache: ShellCache):
    L = make_lattice(name)
    pts = []
    for n in (1, 2):
        pts += [L.element(c) for c in get_shell(name, n, cache).coords]
    return pts


def build_polynomial(cfg: JobConfig) -> WeightPolynomial:
    spec = cfg.poly
    if spec == "const":
        if cfg.degree not in (0,):
            raise UsageError("the constant polynomial has degree 0")
        return WeightPolynomial.constant()
    if cfg.degree < 1:
        raise UsageError("non-constant polynomials need --degree >= 1")
    L = make_lattice(cfg.lattice)
    if spec == "builtin-B":
        if cfg.lattice != "JZ":
            raise UsageError("builtin-B is a J_Z element")
        return WeightPolynomial(cfg.degree, builtin_B())
    if spec.startswith("triple:"):
        idx = _parse_indices(spec[len("triple:"):])
        if len(idx) != 3:
            raise UsageError("triple: needs three indices into the trace-1 and trace-2 points")
        pts = _points(cfg.lattice, _cache(cfg))
        try:
            T1, T2, T3 = (pts[i] for i in idx)
        except IndexError as exc:
            raise UsageError(f"index out of range (there are {len(pts)} points)") from exc
        return WeightPolynomial(cfg.degree, solve_collinear(L, T1, T2, T3, provenance=f"triple {idx}"))
    if spec.startswith("search:"):
        k = _parse_indices(spec[len("search:"):])
        if len(k) != 1:
            raise UsageError("search: takes one index")
        found = search_xelements(L, _points(cfg.lattice, _cache(cfg)), want=k[0] + 1)
        if len(found) <= k[0]:
            raise UsageError(f"only {len(found)} X elements found")
        return WeightPolynomial(cfg.degree, found[k[0]])
    if spec.startswith("json:"):
        obj = json.loads(Path(spec[len("json:"):]).read_text())
        return WeightPolynomial.from_json(obj)
    raise UsageError(f"unknown polynomial spec {spec!r}")


def named_basis(k: int, space: str, prec: int) -> tuple[list[QSeries], list[str]]:
    """A basis of M_k / S_k with readable names where one is customary."""
    D = delta(prec)
    if space == "M" and k == 12:
        return [eisenstein(12, prec), D], ["E12", "Delta"]
    if space == "S" and 12 <= k <= 22 and k != 14:
        extra = {12: (None, "Delta"), 16: (4, "E4*Delta"), 18: (6, "E6*Delta")}
        if k in extra:
            e, nm = extra[k]
            return [D if e is None else eisenstein(e, prec) * D], [nm]
    basis = graded_basis(k, space, prec)
    return basis, [f"{space}{k}[{i}]" for i in range(len(basis))]


def identify_named(f: QSeries, space: str) -> str:
    basis, names = named_basis(f.weight, space, f.prec)
    return format_combination(solve_in_span(f, basis), names)


def cmd_theta(cfg: JobConfig, out, identify: bool, out_dir: str | None) -> int:
    P = build_polynomial(cfg)
    L = make_lattice(cfg.lattice)
    if P.lattice_name not in (None, L.name):
        raise UsageError(f"polynomial belongs to {P.lattice_name}")
    norm = cfg.normalization.replace("-", "_")
    b, s = theta_series(L, P, cfg.prec, norm, _cache(cfg), allow_expensive=cfg.force)
    result = {
        "schema": SCHEMA,
        "command": "theta",
        "lattice": L.name,
        "normalization": norm,
        "polynomial": P.to_json(),
        "components": {"rational": b.to_json(), "surd": s.to_json()},
    }
    status = EXIT_OK
    if identify:
        space = "M" if P.generator is None else "S"
        ids = {}
        for name, comp in (("rational", b), ("surd", s)):
            try:
                ids[name] = identify_named(comp, space)
            except (NotModularError, InsufficientPrecisionError) as exc:
                ids[name] = f"not identified: {exc}"
                status = EXIT_FAIL
        result["identify"] = ids
    if out_dir is not None:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for name, comp in (("rational", b), ("surd", s)):
            stem = f"theta_{L.name}_{P.degree}_{name}"
            if cfg.fmt == "csv":
                (d / f"{stem}.csv").write_text(comp.to_csv())
            else:
                (d / f"{stem}.json").write_text(json.dumps(comp.to_json(), indent=2, sort_keys=True) + "\n")
    if cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "rational", "surd"])
        for i in range(b.prec + 1):
            w.writerow([i, str(b[i]), str(s[i])])
        if identify:
            for k, v in result["identify"].items():
                w.writerow([f"identify_{k}", v, ""])
    else:
        _emit(result, "json", out)
    if identify:
        for k, v in result["identify"].items():
            log.info("%s component: %s", k, v)
    return status


# --- verify --------------------------------------------------------------------


def cmd_verify(suite: str, out, force: bool = False, cache_dir: str | None = None) -> int:
    from .acceptance import CHECKS, SUITES

    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    cache = ShellCache(cache_dir)
    ok = True
    for name in SUITES[suite]:
        fn = CHECKS[name]
        kwargs = {}
        if name in ("A1", "A2", "A3", "A4", "A5", "A7"):
            kwargs["cache"] = cache
        if name == "A1":
            kwargs["force"] = force
        res = fn(**kwargs)
        out.write(res.line() + "\n")
        for f in res.failures:
            out.write(f"  - {f}\n")
        ok &= res.passed
    return EXIT_OK if ok else EXIT_FAIL


# --- zeta ---------------------------------------------------------------------


def cmd_zeta(alphas, primes, N: int, fmt: str, out) -> int:
    rows = [r.as_dict() for r in zeta_table(alphas, primes, N)]
    if fmt == "csv":
        cols = ["alpha", "p", "N", "truncated", "closed", "abs_difference", "tail_bound", "ratio", "within_bound"]
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
    else:
        _emit({"schema": SCHEMA, "command": "zeta", "rows": rows}, "json", out)
    return EXIT_OK


def cmd_lattice(name: str, export: str | None, out) -> int:
    obj = {"schema": SCHEMA, **make_lattice(name).to_json()}
    text = json.dumps(obj, sort_keys=True) + "\n"
    if export:
        Path(export).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_xelements(cfg: JobConfig, count: int, out) -> int:
    L = make_lattice(cfg.lattice)
    found = search_xelements(L, _points(cfg.lattice, _cache(cfg)), want=count)
    _emit({"schema": SCHEMA, "command": "xelements", "lattice": L.name,
           "elements": [x.to_json() for x in found]}, "json", out)
    return EXIT_OK


# --- argument parsing ------------------------------------------------------------


def _lattice(s: str) -> str:
    key = s.upper()
    if key not in ("JZ", "JE"):
        raise argparse.ArgumentTypeError("lattice must be jz or je")
    return key


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="albert-theta", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, lattice=True):
        if lattice:
            p.add_argument("--lattice", type=_lattice, default="JZ")
        p.add_argument("--cache-dir", default=None, help="shell cache (default $ALBERT_THETA_CACHE)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--force", action="store_true", help="allow expensive enumerations")

    p = sub.add_parser("enumerate", help="rank-1 shell of a given trace")
    common(p)
    p.add_argument("--trace", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("theta", help="weighted theta series")
    common(p)
    p.add_argument("--poly", default="const", help="const | builtin-B | triple:i,j,k | search:k | json:PATH")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--normalization", choices=("plain", "elkies-gross", "elkies_gross"), default="plain")
    p.add_argument("--identify", action="store_true")
    p.add_argument("--out-dir", default=None)

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("suite", choices=("weight12", "weight14", "weight16", "span24", "local-zeta", "algebra-laws"))
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("zeta", help="local zeta table")
    p.add_argument("--alpha", nargs="+", default=["1", "1/2", "3"])
    p.add_argument("--primes", nargs="+", type=int, default=[2, 3, 5])
    p.add_argument("--N", type=int, default=60)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("lattice", help="export a lattice descriptor")
    p.add_argument("--lattice", type=_lattice, default="JZ")
    p.add_argument("--export", default=None)

    p = sub.add_parser("xelements", help="list constructed rank-1 trace-0 elements")
    common(p)
    p.add_argument("--count", type=int, default=4)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "enumerate":
            cfg = JobConfig("enumerate", lattice=args.lattice, cache_dir=args.cache_dir, workers=args.workers,
                            fmt=args.format, force=args.force)
            return cmd_enumerate(cfg, args.trace, out)
        if args.command == "theta":
            degree = args.degree if args.degree is not None else (0 if args.poly == "const" else 1)
            cfg = JobConfig("theta", lattice=args.lattice, degree=degree, poly=args.poly, prec=args.prec,
                            normalization=args.normalization, cache_dir=args.cache_dir, fmt=args.format,
                            force=args.force)
            return cmd_theta(cfg, out, args.identify, args.out_dir)
        if args.command == "verify":
            return cmd_verify(args.suite, out, force=args.force, cache_dir=args.cache_dir)
        if args.command == "zeta":
            try:
                alphas = [Fraction(a) for a in args.alpha]
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(str(exc)) from exc
            return cmd_zeta(alphas, args.primes, args.N, args.format, out)
        if args.command == "lattice":
            return cmd_lattice(args.lattice, args.export, out)
        if args.command == "xelements":
            cfg = JobConfig("xelements", lattice=args.lattice, cache_dir=args.cache_dir, fmt=args.format)
            return cmd_xelements(cfg, args.count, out)
    except BudgetExceededError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except (ValueError, FileNotFoundError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    return EXIT_USAGE


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by tests)."""
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
