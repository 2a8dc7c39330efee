"""Command-line front end: tables, Figure 1 data, certificates, the beta
crossing and the assembled theorem report.

    froude-bound tables  [--beta 0,0.001] [--format csv|json] [--out PATH]
    froude-bound figure1 [--grid 1500x1500] [--out PATH]
    froude-bound verify  [--grid NXxNY] [--workers N]
    froude-bound optimize [--tol 1e-6]
    froude-bound theorem [--beta B] [--theta T] [--grid NXxNY] [--workers N]

Exit status is 0 only when every row solved and every certificate passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, replace

from . import __version__
from .case_close import close_bound, close_params, feasibility
from .case_far import DEFAULT_THETA, far_case_bound
from .case_moderate import FIGURE1_REGION, moderate_bound, verify_chain, verify_monotone, write_figure1_csv
from .core import CaseBound, round_up, verify_lemma_constants
from .errors import BracketError, FroudeBoundError
from .numerics import DEFAULT_ROOT_TOL

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TABLE1_BETAS = (0.0, 0.001, 0.00201, 0.005, 0.01, 0.05, 0.09)
TABLE2_BETAS = (0.0, 0.001, 0.00201)
BETA_BRACKET = (1e-5, 0.01)
DEFAULT_TOL_BETA = 1e-6
FR_ACCEPT = 1.37845
TABLE_HEADER = ("beta", "d_lower", "fr_upper", "residual")


# --- tables ---


def _table_rows(solver, betas):
    rows, errors = [], []
    for beta in betas:
        try:
            rows.append(solver(beta))
        except FroudeBoundError as exc:
            errors.append({"beta": beta, "type": type(exc).__name__, "message": str(exc)})
    return rows, errors


def cmd_tables(betas=None) -> dict:
    """Solve both tables; with ``betas=None`` each table uses its own default rows."""
    mod_betas = TABLE1_BETAS if betas is None else tuple(betas)
    close_betas = TABLE2_BETAS if betas is None else tuple(betas)
    mod_rows, mod_err = _table_rows(moderate_bound, mod_betas)
    close_rows, close_err = _table_rows(close_bound, close_betas)
    return {
        "moderate": mod_rows,
        "close": close_rows,
        "errors": {"moderate": mod_err, "close": close_err},
    }


def _row(b: CaseBound) -> dict:
    return {"beta": b.beta, "d_lower": b.d_lower, "fr_upper": b.fr_upper, "residual": b.root.residual}


def render_tables(tables: dict, fmt: str = "csv") -> str:
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "tables": {
                "moderate": {"inequality": "S >= J((1-beta)r, r)", "rows": [_row(b) for b in tables["moderate"]]},
                "close": {"inequality": "S >= Jbar(d, beta)", "rows": [_row(b) for b in tables["close"]]},
            },
        }
        if any(tables["errors"].values()):
            doc["errors"] = tables["errors"]
        return json.dumps(doc, indent=2) + "\n"

    out = io.StringIO()
    for name, caption in (("moderate", "S >= J((1-beta)r, r)"), ("close", "S >= Jbar(d, beta)")):
        out.write(f"# {name}: {caption}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        for b in tables[name]:
            w.writerow([f"{b.beta:.5f}", f"{b.d_lower:.5f}", f"{b.fr_upper:.5f}", f"{b.root.residual:.3e}"])
        for err in tables["errors"][name]:
            out.write(f"# error beta={err['beta']}: {err['type']}: {err['message']}\n")
        out.write("\n")
    return out.getvalue()


# --- beta crossing ---


@dataclass(frozen=True)
class OptimizeResult:
    beta_star: float
    fr_star: float
    moderate: CaseBound
    close: CaseBound
    iterations: int

    def to_dict(self) -> dict:
        return {
            "beta_star": self.beta_star,
            "fr_star": self.fr_star,
            "iterations": self.iterations,
            "moderate": self.moderate.to_dict(),
            "close": self.close.to_dict(),
        }


def crossing_gap(beta: float) -> float:
    """Close-case minus moderate-case Froude bound (unrounded)."""
    return close_bound(beta).fr_raw - moderate_bound(beta).fr_raw


def cmd_optimize(tol_beta: float = DEFAULT_TOL_BETA, bracket=BETA_BRACKET) -> OptimizeResult:
    """Bisect for the beta where the close and moderate bounds cross.

    The close bound grows with beta and the moderate one shrinks, so the
    crossing minimises their maximum.
    """
    if not 1e-7 <= tol_beta <= 1e-3:
        raise ValueError(f"tol_beta must lie in [1e-7, 1e-3], got {tol_beta!r}")
    lo, hi = bracket
    g_lo, g_hi = crossing_gap(lo), crossing_gap(hi)
    if not (g_lo < 0 < g_hi):
        raise BracketError(f"crossing gap has no sign change on [{lo}, {hi}]: {g_lo:.3e}, {g_hi:.3e}")
    n = 0
    while hi - lo > tol_beta:
        mid = 0.5 * (lo + hi)
        if crossing_gap(mid) < 0:
            lo = mid
        else:
            hi = mid
        n += 1
    beta = 0.5 * (lo + hi)
    mod, close = moderate_bound(beta), close_bound(beta)
    return OptimizeResult(beta, max(mod.fr_upper, close.fr_upper), mod, close, n)


# --- theorem ---


@dataclass
class TheoremConfig:
    beta: float | None = None
    theta: float = DEFAULT_THETA
    grid: tuple[int, int] = (FIGURE1_REGION.nx, FIGURE1_REGION.ny)
    tol_beta: float = DEFAULT_TOL_BETA
    workers: int = 1
    chain_grid: int = 400
    lemma_grid: int = 10_000


@dataclass
class TheoremReport:
    far: CaseBound
    moderate_at_beta: CaseBound
    close_at_beta: CaseBound
    beta_star: float
    fr_final: float
    certificates: list = field(default_factory=list)
    tool_version: str = __version__
    tolerances: dict = field(default_factory=dict)

    @property
    def certificates_passed(self) -> bool:
        return all(c["passed"] for c in self.certificates)

    @property
    def passed(self) -> bool:
        return self.certificates_passed and self.fr_final <= FR_ACCEPT

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "status": "ok" if self.passed else "failed",
            "beta_star": self.beta_star,
            "fr_final": self.fr_final,
            "far": self.far.to_dict(),
            "moderate_at_beta": self.moderate_at_beta.to_dict(),
            "close_at_beta": self.close_at_beta.to_dict(),
            "certificates": self.certificates,
            "tolerances": self.tolerances,
        }


def run_certificates(grid=(1500, 1500), workers=1, chain_grid=400, lemma_grid=10_000) -> list[dict]:
    region = replace(FIGURE1_REGION, nx=grid[0], ny=grid[1])
    mono = verify_monotone(region, workers=workers)
    certs = [{"name": "monotone", **mono.to_dict()}]
    certs.append(verify_chain(chain_grid).to_dict() | {"rigor": "chain-analytic"})
    certs.append(verify_lemma_constants(lemma_grid).to_dict())
    return certs


def cmd_theorem(config: TheoremConfig | None = None) -> TheoremReport:
    cfg = config or TheoremConfig()
    certs = run_certificates(cfg.grid, cfg.workers, cfg.chain_grid, cfg.lemma_grid)
    far = far_case_bound(cfg.theta)
    if cfg.beta is None:
        opt = cmd_optimize(cfg.tol_beta)
        beta, mod, close = opt.beta_star, opt.moderate, opt.close
    else:
        beta = cfg.beta
        mod, close = moderate_bound(beta), close_bound(beta)
    feas = feasibility(close_params(close.d_raw, beta)).to_dict()
    certs.append(feas)
    fr_final = round_up(max(far.fr_upper, mod.fr_upper, close.fr_upper))
    tolerances = {
        "root_tol": DEFAULT_ROOT_TOL,
        "tol_beta": cfg.tol_beta,
        "grid": f"{cfg.grid[0]}x{cfg.grid[1]}",
        "chain_grid": cfg.chain_grid,
        "lemma_grid": cfg.lemma_grid,
        "report_decimals": 5,
        "fr_accept": FR_ACCEPT,
    }
    return TheoremReport(far, mod, close, beta, fr_final, certs, __version__, tolerances)


# --- argument handling ---


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 1500x1500, got {text!r}")
    if nx < 2 or ny < 2:
        raise argparse.ArgumentTypeError("grid dimensions must be at least 2")
    return nx, ny


def _parse_betas(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"beta list must be comma separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="froude-bound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", parents=[common], help="depth and Froude bounds per beta")
    p.add_argument("--beta", type=_parse_betas, default=None)

    p = sub.add_parser("figure1", parents=[common], help="dJ/d eta_hat grid as CSV")
    p.add_argument("--grid", type=_parse_grid, default=(1500, 1500))

    p = sub.add_parser("verify", parents=[common], help="run all certificates")
    p.add_argument("--grid", type=_parse_grid, default=(1500, 1500))

    p = sub.add_parser("optimize", parents=[common], help="beta where the case bounds cross")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL_BETA)

    p = sub.add_parser("theorem", parents=[common], help="full pipeline and final bound")
    p.add_argument("--beta", type=_parse_betas, default=None, help="force a single beta")
    p.add_argument("--theta", type=float, default=DEFAULT_THETA)
    p.add_argument("--grid", type=_parse_grid, default=(1500, 1500))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL_BETA)
    return parser


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _bounds_csv(bounds: list[CaseBound], extra: dict) -> str:
    out = io.StringIO()
    for k, v in extra.items():
        out.write(f"# {k}={v}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("case", "beta", "theta", "d_lower", "fr_upper"))
    for b in bounds:
        w.writerow([b.case_id, f"{b.beta:.8f}", f"{b.theta:.5f}", f"{b.d_lower:.5f}", f"{b.fr_upper:.5f}"])
    return out.getvalue()


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    fmt = args.format
    try:
        if args.command == "tables":
            tables = cmd_tables(args.beta)
            with _output(args.out) as fh:
                fh.write(render_tables(tables, fmt or "csv"))
            return int(any(tables["errors"].values()))

        if args.command == "figure1":
            region = replace(FIGURE1_REGION, nx=args.grid[0], ny=args.grid[1])
            with _output(args.out) as fh:
                n = write_figure1_csv(fh, region)
            log.info("wrote %d rows", n)
            return 0

        if args.command == "verify":
            certs = run_certificates(args.grid, args.workers)
            ok = all(c["passed"] for c in certs)
            with _output(args.out) as fh:
                fh.write(_dump({"schema_version": SCHEMA_VERSION, "tool_version": __version__,
                                "status": "ok" if ok else "failed", "certificates": certs}))
            return 0 if ok else 1

        if args.command == "optimize":
            res = cmd_optimize(args.tol)
            with _output(args.out) as fh:
                if fmt == "csv":
                    fh.write(_bounds_csv([res.moderate, res.close],
                                         {"beta_star": repr(res.beta_star), "fr_star": f"{res.fr_star:.5f}"}))
                else:
                    fh.write(_dump({"schema_version": SCHEMA_VERSION, "tool_version": __version__,
                                    **res.to_dict()}))
            return 0

        if args.command == "theorem":
            if args.beta is not None and len(args.beta) != 1:
                raise SystemExit("theorem: --beta takes a single value")
            cfg = TheoremConfig(
                beta=None if args.beta is None else args.beta[0],
                theta=args.theta,
                grid=args.grid,
                tol_beta=args.tol,
                workers=args.workers,
            )
            report = cmd_theorem(cfg)
            with _output(args.out) as fh:
                if fmt == "csv":
                    fh.write(_bounds_csv([report.far, report.moderate_at_beta, report.close_at_beta],
                                         {"beta_star": repr(report.beta_star), "fr_final": f"{report.fr_final:.5f}",
                                          "status": "ok" if report.passed else "failed"}))
                else:
                    fh.write(_dump(report.to_dict()))
            return 0 if report.passed else 1
    except (FroudeBoundError, ValueError) as exc:
        doc = {"schema_version": SCHEMA_VERSION, "tool_version": __version__,
               "error": {"type": type(exc).__name__, "message": str(exc)}}
        if fmt == "csv":
            sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        else:
            sys.stdout.write(_dump(doc))
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
