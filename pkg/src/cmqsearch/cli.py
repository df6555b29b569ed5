"""Command-line surface: table / plan / sweep / verify / compare.

Exit codes: 0 success, 2 ambiguous range query, 3 below coverage,
4 solver-config failure, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from cmqsearch import analytic, planner, simulator
from cmqsearch.analytic import PhaseAngle, TargetFraction
from cmqsearch.errors import CmqsearchError, DomainError, VerificationError
from cmqsearch.kernels import p_success
from cmqsearch.optimizer import PhasePlan, PhaseSegment, SolverConfig, largest_min_success
from cmqsearch.planner import KigrQuery, PlanTable

SCHEMA_VERSION = 1
DEFAULT_CACHE = "cmqsearch-plans.json"


@dataclass(frozen=True)
class RunConfig:
    p_cri: float = 0.90
    lambda0: float = 1e-2
    lambda_tol: float = 1e-12
    phase_tol: float = 1e-12
    level_tol: float = 1e-9
    grid_points: int = 10_000
    max_nk: int = 64
    fmt: str = "json"
    cache: str = DEFAULT_CACHE
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.p_cri < 1.0:
            raise DomainError(f"p_cri must be in (0, 1), got {self.p_cri}")
        if not 0.0 < self.lambda0 < 1.0:
            raise DomainError(f"lambda0 must be in (0, 1), got {self.lambda0}")

    def solver_config(self) -> SolverConfig:
        return SolverConfig(lambda_tol=self.lambda_tol, phase_tol=self.phase_tol,
                            level_tol=self.level_tol, grid_points=self.grid_points,
                            max_nk=self.max_nk)


# ---------------------------------------------------------------- plan-table IO

def table_to_doc(table: PlanTable) -> dict:
    """Versioned plan-table document; floats stored as repr strings so the
    serialization is byte-stable and round-trips exactly."""
    return {
        "version": SCHEMA_VERSION,
        "p_cri": repr(table.p_cri),
        "lambda0": repr(table.lambda0),
        "tolerances": {
            "lambda_tol": repr(table.cfg.lambda_tol),
            "phase_tol": repr(table.cfg.phase_tol),
            "level_tol": repr(table.cfg.level_tol),
            "grid_points": table.cfg.grid_points,
            "max_nk": table.cfg.max_nk,
        },
        "plans": [
            {
                "k": p.k,
                "band": [repr(p.boundaries[0]), repr(p.boundaries[-1])],
                "n_k": p.n_k,
                "phases": [repr(x) for x in p.phases],
                "boundaries": [repr(x) for x in p.boundaries],
                "q_k_pi": repr(p.q_k_pi),
                "level_residual": repr(p.level_residual),
            }
            for p in table.plans
        ],
    }


def doc_to_table(doc: dict) -> PlanTable:
    if doc.get("version") != SCHEMA_VERSION:
        raise DomainError(f"unsupported plan-table version {doc.get('version')}")
    tol = doc["tolerances"]
    cfg = SolverConfig(lambda_tol=float(tol["lambda_tol"]),
                       phase_tol=float(tol["phase_tol"]),
                       level_tol=float(tol["level_tol"]),
                       grid_points=int(tol["grid_points"]),
                       max_nk=int(tol["max_nk"]))
    p_cri = float(doc["p_cri"])
    plans = []
    for rec in doc["plans"]:
        bounds = [float(x) for x in rec["boundaries"]]
        phases = [float(x) for x in rec["phases"]]
        segments = tuple(
            PhaseSegment(m=i + 1, lo=bounds[i], hi=bounds[i + 1],
                         phi=PhaseAngle(phases[i]))
            for i in range(len(phases))
        )
        plans.append(PhasePlan(k=int(rec["k"]), p_cri=p_cri, n_k=int(rec["n_k"]),
                               segments=segments, q_k_pi=float(rec["q_k_pi"]),
                               level_residual=float(rec["level_residual"])))
    return PlanTable(p_cri=p_cri, lambda0=float(doc["lambda0"]),
                     plans=tuple(plans), cfg=cfg)


def serialize_table(table: PlanTable) -> str:
    return json.dumps(table_to_doc(table), indent=2, sort_keys=True) + "\n"


def write_table(table: PlanTable, path: str) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(serialize_table(table))
        os.replace(tmp, target)
    except OSError as exc:
        raise CmqsearchError(f"cannot write plan table to {path}: {exc}") from exc


def load_or_build_table(cfg: RunConfig) -> PlanTable:
    """Use the cached table when it matches the run config, else rebuild it."""
    path = Path(cfg.cache)
    if path.exists():
        table = doc_to_table(json.loads(path.read_text()))
        if (table.p_cri == cfg.p_cri and table.lambda0 == cfg.lambda0
                and table.cfg == cfg.solver_config()):
            return table
    table = planner.build_table(cfg.p_cri, cfg.lambda0, cfg.solver_config())
    write_table(table, cfg.cache)
    return table


# ---------------------------------------------------------------------- commands

def cmd_table(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    table = planner.build_table(cfg.p_cri, cfg.lambda0, cfg.solver_config())
    write_table(table, cfg.cache)
    if cfg.fmt == "json":
        out.write(serialize_table(table))
    else:
        out.write("k,band_lo,band_hi,n_k,phases,q_k_pi\n")
        for p in table.plans:
            phases = ";".join(repr(x) for x in p.phases)
            out.write(f"{p.k},{p.boundaries[0]!r},{p.boundaries[-1]!r},"
                      f"{p.n_k},{phases},{p.q_k_pi!r}\n")
    return 0


def cmd_plan(cfg: RunConfig, query: KigrQuery, out=None) -> int:
    out = out or sys.stdout
    table = load_or_build_table(cfg)
    k, m = planner.classify(query, table)
    seg = table.plan(k).segments[m - 1]
    record = {
        "k": k,
        "m": m,
        "phi": repr(seg.phi.phi),
        "guaranteed_p": repr(table.plan(k).q_k_pi),
        "segment": [repr(seg.lo), repr(seg.hi)],
    }
    if cfg.fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write("k,m,phi,guaranteed_p\n")
        out.write(f"{k},{m},{seg.phi.phi!r},{table.plan(k).q_k_pi!r}\n")
    return 0


def _log_grid(lambda0: float, n: int) -> list[float]:
    # Log-spaced over [lambda0, 1): small-lambda bands are geometrically thin.
    hi = math.nextafter(1.0, 0.0)
    return [float(x) for x in np.geomspace(lambda0, hi, n, endpoint=False)]


def cmd_sweep(cfg: RunConfig, algorithms: list[str], grid: int,
              fixed_phi: float, out=None) -> int:
    out = out or sys.stdout
    if grid < 2:
        raise DomainError(f"grid must be >= 2, got {grid}")
    known = {"ours", "grover", "fixed", "yoder_bound", "long"}
    bad = set(algorithms) - known
    if bad:
        raise DomainError(f"unknown algorithms: {sorted(bad)} (choose from {sorted(known)})")
    table = load_or_build_table(cfg) if "ours" in algorithms else None
    phi_f = PhaseAngle(fixed_phi)
    out.write("lambda,algorithm,k,p\n")
    for lam_val in _log_grid(cfg.lambda0, grid):
        lam = TargetFraction(lam_val)
        for alg in algorithms:
            if alg == "ours":
                k, phi = planner.plan_for(lam, table)
                p = repr(p_success(k, phi.phi, lam_val))
            elif alg == "grover":
                k = analytic.grover_iterations(lam)
                p = repr(p_success(k, math.pi, lam_val) if k > 0 else lam_val)
            elif alg == "fixed":
                k = planner.baseline_fixed_phase(phi_f, lam)
                p = repr(p_success(k, phi_f.phi, lam_val) if k > 0 else lam_val)
            elif alg == "long":
                k, phi_l = planner.baseline_long(lam)
                p = repr(p_success(k, phi_l, lam_val))
            else:  # yoder_bound: iteration lower bound only, no probability curve
                k = planner.baseline_yoder_bound(cfg.p_cri, lam)
                p = ""
            out.write(f"{lam_val!r},{alg},{k},{p}\n")
    return 0


def cmd_compare(cfg: RunConfig, lam_val: float, fixed_phi: float, out=None) -> int:
    out = out or sys.stdout
    table = load_or_build_table(cfg)
    rec = planner.compare(TargetFraction(lam_val), table, cfg.p_cri, PhaseAngle(fixed_phi))
    doc = {
        "lambda": repr(rec.lam),
        "k_ours": rec.k_ours,
        "k_grover": rec.k_grover,
        "k_fixed": rec.k_fixed,
        "k_long": rec.k_long,
        "phi_long": repr(rec.phi_long),
        "k_yoder_lb": rec.k_yoder_lb,
        "yoder_ratio": repr(rec.k_yoder_lb / rec.k_ours),
        "p_ours": repr(rec.p_ours),
        "p_grover": repr(rec.p_grover),
        "p_fixed": repr(rec.p_fixed),
    }
    if cfg.fmt == "json":
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        keys = list(doc)
        out.write(",".join(keys) + "\n")
        out.write(",".join(str(doc[x]) for x in keys) + "\n")
    return 0


# ----------------------------------------------------------------- verification

def _suite_oracle(cfg: RunConfig) -> None:
    phis = [math.pi, 2.432, 1.465, 0.7]
    for n in (2, 4, 6, 8, 10):
        big = 1 << n
        for m in sorted({1, 3, big // 4, big // 2}):
            marked = range(m)
            for k in (0, 3, 6, 9, 12):
                for phi in phis:
                    got = simulator.statevector_run(n, marked, k, PhaseAngle(phi))
                    want = p_success(k, phi, m / big)
                    if abs(got - want) >= 1e-10:
                        raise VerificationError(
                            f"oracle mismatch at n={n} M={m} k={k} phi={phi}: "
                            f"|{got} - {want}| >= 1e-10"
                        )


def _suite_equal_level(cfg: RunConfig) -> None:
    table = load_or_build_table(cfg)
    for plan in table.plans:
        if plan.level_residual >= 10.0 * cfg.level_tol:
            raise VerificationError(
                f"equal-level residual {plan.level_residual} on band {plan.k} "
                f">= {10.0 * cfg.level_tol}"
            )
        if plan.q_k_pi < cfg.p_cri:
            raise VerificationError(
                f"band {plan.k} level {plan.q_k_pi} below p_cri={cfg.p_cri}"
            )


def _suite_monotonicity(cfg: RunConfig) -> None:
    solver = cfg.solver_config()
    for k in (1, 2, 3):
        prev = 0.0
        for n in (1, 2, 3):
            q, _, _ = largest_min_success(k, n, solver)
            if q <= prev + 1e-6:
                raise VerificationError(
                    f"Q({k}, n={n})={q} not above Q({k}, n={n - 1})={prev}"
                )
            prev = q


def _suite_long_certainty(cfg: RunConfig) -> None:
    rng = np.random.default_rng(cfg.seed)
    for _ in range(20):
        n = int(rng.integers(2, 11))
        m = int(rng.integers(1, 1 << n))
        p = simulator.run_long_exact(n, range(m))
        if abs(p - 1.0) >= 1e-9:
            raise VerificationError(f"exact-search run at n={n} M={m} gave P={p}")


def cmd_verify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    suites = [
        ("oracle_equivalence", _suite_oracle),
        ("equal_level", _suite_equal_level),
        ("monotonicity", _suite_monotonicity),
        ("long_certainty", _suite_long_certainty),
    ]
    failed = None
    for name, suite in suites:
        try:
            suite(cfg)
        except CmqsearchError as exc:
            out.write(f"{name}: FAIL ({exc})\n")
            failed = failed or exc
        else:
            out.write(f"{name}: PASS\n")
    if failed is not None:
        raise VerificationError(str(failed))
    return 0


# ------------------------------------------------------------------ entry point

def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split("..")
        return float(lo), float(hi)
    except ValueError as exc:
        raise DomainError(f"range must look like LO..HI, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pcri", type=float, default=0.90)
    common.add_argument("--lambda0", type=float, default=1e-2)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache", default=os.environ.get("CMQSEARCH_CACHE", DEFAULT_CACHE))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--lambda-tol", type=float, default=1e-12)
    common.add_argument("--phase-tol", type=float, default=1e-12)
    common.add_argument("--level-tol", type=float, default=1e-9)
    common.add_argument("--grid-points", type=int, default=10_000)
    common.add_argument("--max-nk", type=int, default=64)

    ap = argparse.ArgumentParser(prog="cmqsearch", allow_abbrev=False,
                                 description="Complementary-multiphase search planner")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("table", parents=[common],
                   help="build the plan table and write it to the cache")

    plan = sub.add_parser("plan", parents=[common],
                          help="look up (k, m, phi) for a lambda or range")
    plan.add_argument("--lambda", dest="lam", type=float)
    plan.add_argument("--range", dest="range_", metavar="LO..HI")

    sweep = sub.add_parser("sweep", parents=[common],
                           help="emit per-lambda CSV over a log grid")
    sweep.add_argument("--algorithms", default="ours,grover",
                       help="comma list: ours,grover,fixed,yoder_bound,long")
    sweep.add_argument("--grid", type=int, default=1000)
    sweep.add_argument("--phi", type=float, default=0.1 * math.pi,
                       help="phase for the fixed-phase baseline")

    sub.add_parser("verify", parents=[common], help="run the verification suites")

    comp = sub.add_parser("compare", parents=[common],
                          help="baseline comparison at one lambda")
    comp.add_argument("--lambda", dest="lam", type=float, required=True)
    comp.add_argument("--phi", type=float, default=0.1 * math.pi)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(p_cri=args.pcri, lambda0=args.lambda0,
                        lambda_tol=args.lambda_tol, phase_tol=args.phase_tol,
                        level_tol=args.level_tol, grid_points=args.grid_points,
                        max_nk=args.max_nk, fmt=args.format, cache=args.cache,
                        seed=args.seed)
        if args.command == "table":
            return cmd_table(cfg)
        if args.command == "plan":
            if (args.lam is None) == (args.range_ is None):
                raise DomainError("provide exactly one of --lambda or --range")
            if args.lam is not None:
                query = KigrQuery(exact_lambda=args.lam)
            else:
                query = KigrQuery(range=_parse_range(args.range_))
            return cmd_plan(cfg, query)
        if args.command == "sweep":
            algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
            return cmd_sweep(cfg, algorithms, args.grid, args.phi)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "compare":
            return cmd_compare(cfg, args.lam, args.phi)
        raise AssertionError(args.command)  # pragma: no cover
    except CmqsearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
