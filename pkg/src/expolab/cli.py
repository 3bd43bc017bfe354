"""Command-line front end.

    expolab zeros --dim 3 --m-max 20
    expolab decide --domain cube --dim 2 --input A.json
    expolab construct planar --n 3
    expolab audit --dim 2 --input A.json --phi power:0.5,2
    expolab experiment --domain ball --dim 2 --n 3 --trials 20 --seed 1

Frequency sets are read as ``{"dim": d, "points": [[...], ...]}``.

Exit codes: usage and numeric errors give 2.  ``decide`` gives 0 for an
incompleteness witness, 1 for certified completeness and 3 when the search
was inconclusive.  ``audit`` gives 0 iff the phi audit passes, 1 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bessel import DEFAULT_TOLERANCE, BesselOrder, ZeroTable, build_zero_table
from .density import (
    PowerLaw,
    Tabulated,
    density_report,
    distance_lattice_check,
    envelope_profile,
    phi_audit,
)
from .errors import ExpolabError, ZeroTableError
from .indicator_ft import INTEGRALITY_TOL, DomainSpec
from .witness import (
    DEFAULT_CUTOFF,
    GAP_TOL,
    ZERO_TOL,
    CompleteCertified,
    FrequencySet,
    Incomplete,
    ball_collinear_analysis,
    ball_equatorial_witness,
    ball_planar_witness,
    choose_certified_alphas,
    collinear_configuration,
    decide,
    random_tuple_experiment,
    witness_residuals,
)

EXIT_OK = 0
EXIT_COMPLETE = 1
EXIT_ERROR = 2
EXIT_INCONCLUSIVE = 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    domain: DomainSpec
    input_path: str | None = None
    seed: int = 0
    zero_table_cutoff: float = DEFAULT_CUTOFF
    zero_tol: float = ZERO_TOL
    integrality_tol: float = INTEGRALITY_TOL
    gap_tol: float = GAP_TOL
    table_tol: float = DEFAULT_TOLERANCE
    output: str = "json"
    threads: int = 1

    def __post_init__(self):
        for name in ("zero_tol", "integrality_tol", "gap_tol", "table_tol", "zero_table_cutoff"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.output not in ("json", "csv"):
            raise UsageError("output must be json or csv")
        if self.threads < 0:
            raise UsageError("threads must be >= 0")


# --------------------------------------------------------------------------
# zero-table disk cache

def cache_dir() -> Path:
    env = os.environ.get("EXPOLAB_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "expolab"


def cached_zero_table(two_nu: int, m_max: int, tolerance: float) -> ZeroTable:
    """Load a table from the disk cache (revalidated) or build and store it."""
    path = cache_dir() / f"zeros_{two_nu}_{m_max}_{tolerance:.6e}.json"
    if path.exists():
        try:
            return ZeroTable.from_json(path.read_text(), validate=True)
        except (ZeroTableError, ValueError, KeyError):
            pass  # corrupt or stale entry, rebuild below
    table = build_zero_table(BesselOrder(two_nu), m_max, tolerance)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(table.to_json())
        tmp.replace(path)
    except OSError:
        pass
    return table


def table_covering(two_nu: int, r_max: float, tolerance: float) -> ZeroTable:
    # round m_max up to a multiple of 16 so nearby requests share a cache file
    m_max = int(math.ceil((2 * (r_max + 1) + 4) / 16)) * 16
    return cached_zero_table(two_nu, m_max, tolerance)


# --------------------------------------------------------------------------
# output

def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(doc) -> str:
    """Deterministic JSON: sorted keys, repr-exact floats."""
    return json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _points_rows(A: FrequencySet):
    return [[i, *map(float, p)] for i, p in enumerate(A.points)]


def _points_header(d: int):
    return ["index", *(f"x{k + 1}" for k in range(d))]


# --------------------------------------------------------------------------
# commands

def load_set(path: str, dim: int) -> FrequencySet:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, list):
        doc = {"dim": dim, "points": doc}
    if "set" in doc:
        doc = doc["set"]
    A = FrequencySet.from_dict(doc)
    if A.dim != dim:
        raise UsageError(f"input set has dimension {A.dim}, --dim is {dim}")
    return A


def cmd_zeros(args, cfg: RunConfig) -> int:
    table = cached_zero_table(cfg.domain.dim, args.m_max, cfg.table_tol)
    if cfg.output == "csv":
        rows = [[m, lo, hi, 0.5 * (lo + hi)] for m, lo, hi in table.zeros]
        _emit(csv_text(["m", "lo", "hi", "midpoint"], rows), args.out)
    else:
        _emit(dumps(json.loads(table.to_json())), args.out)
    return EXIT_OK


def _exit_for(cert) -> int:
    if isinstance(cert, Incomplete):
        return EXIT_OK
    if isinstance(cert, CompleteCertified):
        return EXIT_COMPLETE
    return EXIT_INCONCLUSIVE


def _certificate_csv(cert) -> str:
    doc = cert.to_dict()
    return csv_text(["field", "value"], [[k, json.dumps(_plain(v), sort_keys=True)]
                                         for k, v in sorted(doc.items())])


def cmd_decide(args, cfg: RunConfig) -> int:
    if not cfg.input_path:
        raise UsageError("decide needs --input")
    A = load_set(cfg.input_path, cfg.domain.dim)
    table = None
    if cfg.domain.kind.value == "ball":
        diam = float(np.ptp(A.points, axis=0).max()) * math.sqrt(cfg.domain.dim) if len(A) else 0.0
        reach = max(cfg.zero_table_cutoff, 2 * args.scan_radius * math.sqrt(cfg.domain.dim) + diam) + 2
        table = table_covering(cfg.domain.dim, reach, cfg.table_tol)
    cert = decide(cfg.domain, A, table, cutoff=cfg.zero_table_cutoff, zero_tol=cfg.zero_tol,
                  gap_tolerance=cfg.gap_tol, scan_radius=args.scan_radius, scan_step=args.scan_step)
    if cfg.output == "csv":
        _emit(_certificate_csv(cert), args.out)
    else:
        _emit(dumps({"set": A.to_dict(), "certificate": cert.to_dict()}), args.out)
    return _exit_for(cert)


def cmd_construct(args, cfg: RunConfig) -> int:
    d, n = cfg.domain.dim, args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    if args.kind == "equatorial":
        if d < 3:
            raise UsageError("equatorial construction needs --dim >= 3")
        A, b = ball_equatorial_witness(n, d, table_covering(d, 4.0, cfg.table_tol), cfg.zero_tol)
        cert = _with_residuals(A, b)
    elif args.kind == "planar":
        if d != 2:
            raise UsageError("planar construction is two-dimensional; use --dim 2")
        table = table_covering(2, max(12.0, 1.0 + 1.5 * (n // 2)), cfg.table_tol)
        A, b = ball_planar_witness(n, table, cfg.zero_tol)
        cert = _with_residuals(A, b)
    else:
        if d < 3:
            raise UsageError("collinear-complete construction needs --dim >= 3")
        if n < 3:
            raise UsageError("collinear-complete construction needs --n >= 3")
        table = table_covering(d, cfg.zero_table_cutoff + 0.5, cfg.table_tol)
        alphas = choose_certified_alphas(n - 2, table, cfg.zero_table_cutoff, dim=d)
        A = collinear_configuration(alphas, d)
        cert = ball_collinear_analysis(alphas, table, cfg.zero_table_cutoff, cfg.gap_tol, dim=d)
    if cfg.output == "csv":
        _emit(csv_text(_points_header(d), _points_rows(A)), args.out)
    else:
        _emit(dumps({"kind": args.kind, "set": A.to_dict(), "certificate": cert.to_dict()}), args.out)
    return EXIT_OK


def _with_residuals(A: FrequencySet, b) -> Incomplete:
    res = witness_residuals(DomainSpec.ball(A.dim), A, b)
    return Incomplete(tuple(map(float, b)), tuple(map(float, res)))


def parse_phi(text: str, d: int):
    """``envelope``, ``power:C,P`` or ``table:PATH`` (JSON list of [t, phi])."""
    if text == "envelope":
        return envelope_profile(d)
    kind, _, rest = text.partition(":")
    try:
        if kind == "power":
            c, p = (float(v) for v in rest.split(","))
            return PowerLaw(c, p)
        if kind == "table":
            return Tabulated(tuple(map(tuple, json.loads(Path(rest).read_text()))))
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad --phi {text!r}: {exc}") from exc
    raise UsageError(f"unknown --phi {text!r}; use envelope, power:C,P or table:PATH")


def cmd_audit(args, cfg: RunConfig) -> int:
    if not cfg.input_path:
        raise UsageError("audit needs --input")
    d = cfg.domain.dim
    A = load_set(cfg.input_path, d)
    phi = parse_phi(args.phi, d)
    dist_max = float(np.ptp(A.points, axis=0).max()) * math.sqrt(d) if len(A) > 1 else 0.0
    audit = phi_audit(A, phi, d, table_covering(d, dist_max + 1, cfg.table_tol))
    lattice = distance_lattice_check(A, d, args.r_min, args.eps)
    density = None
    if len(A) >= 2:
        radii = [float(r) for r in args.radii.split(",")]
        density = density_report(A, radii, args.grid_step).to_dict()
    if cfg.output == "csv":
        rows = [[i, j, dist, bound] for i, j, dist, _, bound in audit.violations]
        _emit(csv_text(["pair_i", "pair_j", "distance", "bound_or_gap"], rows), args.out)
    else:
        _emit(dumps({"phi": phi.to_dict(), "phismall": phi.satisfies_phismall(d),
                     "audit": audit.to_dict(), "lattice": lattice.to_dict(),
                     "density": density}), args.out)
    return EXIT_OK if audit.passed else EXIT_COMPLETE


def cmd_experiment(args, cfg: RunConfig) -> int:
    summary = random_tuple_experiment(cfg.domain, args.n, args.trials, cfg.seed,
                                      scan_radius=args.scan_radius, scan_step=args.scan_step,
                                      threads=cfg.threads)
    doc = summary.to_dict()
    if cfg.output == "csv":
        keys = list(doc)
        _emit(csv_text(keys, [[doc[k] for k in keys]]), args.out)
    else:
        _emit(dumps(doc), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser, domain: bool = True, dim_default: int | None = None) -> None:
    p.add_argument("--dim", type=int, required=dim_default is None, default=dim_default)
    if domain:
        p.add_argument("--domain", choices=["ball", "cube"], default="ball")
    p.add_argument("--input")
    p.add_argument("--output", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=float, default=DEFAULT_CUTOFF)
    p.add_argument("--zero-tol", type=float, default=ZERO_TOL)
    p.add_argument("--gap-tol", type=float, default=GAP_TOL)
    p.add_argument("--table-tol", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--threads", type=int, default=1, help="0 = all cores")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expolab",
                                     description="Exponential systems on the cube and the ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeros", help="zero table of r -> J_{d/2}(2 pi r)")
    _common(p, domain=False)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--tol", dest="table_tol", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("decide", help="decide completeness of E(A)")
    _common(p)
    p.add_argument("--scan-radius", type=float, default=5.0)
    p.add_argument("--scan-step", type=float, default=1e-2)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("construct", help="explicit ball configurations")
    p.add_argument("kind", choices=["equatorial", "planar", "collinear-complete"])
    _common(p, domain=False, dim_default=2)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("audit", help="phi audit, lattice gaps and density")
    _common(p, domain=False)
    p.add_argument("--phi", default="envelope", help="envelope | power:C,P | table:PATH")
    p.add_argument("--r-min", type=float, default=5.0)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--radii", default="2,4,8")
    p.add_argument("--grid-step", type=float, default=1.0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("experiment", help="random tuple experiment")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--scan-radius", type=float, default=5.0)
    p.add_argument("--scan-step", type=float, default=2e-2)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        domain = DomainSpec(getattr(args, "domain", "ball"), args.dim)
        cfg = RunConfig(args.command, domain, args.input, args.seed, args.cutoff,
                        args.zero_tol, INTEGRALITY_TOL, args.gap_tol, args.table_tol,
                        args.output, args.threads)
    except (UsageError, ValueError) as exc:
        parser.error(str(exc))
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except (ExpolabError, ValueError, OSError) as exc:
        print(f"expolab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
