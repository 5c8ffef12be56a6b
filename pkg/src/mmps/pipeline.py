"""Report-producing stages shared by the command-line tool.

Each stage takes a system (plus earlier results where needed) and returns a
plain dictionary ready for JSON; ``analyze`` only chains them.
"""

from __future__ import annotations

import logging

import numpy as np

from .fixedpoints import FixedPointSet, fixed_point_set, sigma_bounds
from .growth import RATE_TOL, GrowthRateReport, GrowthSolution, solve_all
from .io import encode_matrix
from .linalg import RANK_TOL
from .linearization import LinearizedSystem, linearize_with_region
from .model import check_time_invariance, validate
from .normalization import ZERO_TOL, NormalizedSystem, extract_footprint, normalize, verify_structure
from .solvability import NotSolvable, certify
from .stability import StabilityReport, classify, corollary_check

log = logging.getLogger("mmps")


def footprint_dict(fp) -> dict:
    return {"label": fp.label(), "a_sel": list(fp.a_sel), "b_sel": list(fp.b_sel)}


def stage_validate(system) -> dict:
    report = validate(system)
    ok_ti, residuals = check_time_invariance(system)
    return {"valid": report.ok, "violations": report.violations,
            "time_invariant": ok_ti, "time_invariance_residuals": residuals,
            "row_sums": system.CD @ system.s, "n": system.n, "m": system.m, "p": system.p}


def stage_solvability(system) -> dict:
    cert = certify(system)
    if isinstance(cert, NotSolvable):
        return {"solvable": False, "cycle": list(cert.cycle), "S": cert.S}
    return {"solvable": True, "order": list(cert.order), "T_is_identity":
            bool(np.array_equal(cert.T, np.eye(system.n))), "S": cert.S}


def stage_growth(system, parallel: int = 1) -> tuple[dict, GrowthRateReport]:
    log.info("solving footprint LPs (parallel=%d)", parallel)
    rep = solve_all(system, parallel=parallel)
    log.info("LP outcomes: %s", rep.counts())
    out = {"rates": rep.rates(), **rep.counts(),
           "solutions": [{"lambda": s.lam, "footprint": footprint_dict(s.footprint),
                          "x_e": s.x_e} for s in rep.solutions]}
    return out, rep


def select_solutions(rep: GrowthRateReport, lam: float | None) -> list[GrowthSolution]:
    if lam is None:
        return list(rep.solutions)
    return [s for s in rep.solutions if abs(s.lam - lam) <= RATE_TOL * max(1.0, abs(lam))]


def stage_fixed_points(system, sol: GrowthSolution, tol: float | None = None) -> tuple[dict, FixedPointSet]:
    fps = fixed_point_set(system, sol, tol or RANK_TOL)
    bounds = sigma_bounds(fps)
    fc = fps.constraints
    return {
        "lambda": sol.lam, "footprint": footprint_dict(sol.footprint),
        "H_eq_shape": list(fc.H_eq.shape), "H_ineq_shape": list(fc.H_ineq.shape),
        "rank_H_eq": fps.rank_Heq, "num_directions": fps.num_directions,
        "x_particular": fps.x_particular, "x_directions": fps.x_directions.T,
        "sigma_bounds": [list(b) for b in bounds],
    }, fps


def stage_normalize(system, sol: GrowthSolution, tol: float | None = None) -> tuple[dict, NormalizedSystem]:
    zero_tol = tol or ZERO_TOL
    ns = normalize(system, sol)
    check = verify_structure(ns, zero_tol)
    fps = extract_footprint(ns, zero_tol) if check.ok else []
    return {
        "lambda": sol.lam, "footprint": footprint_dict(sol.footprint), "x_e": sol.x_e,
        "A_tilde": encode_matrix(ns.A_tilde, "A"), "B_tilde": encode_matrix(ns.B_tilde, "B"),
        "structure_ok": check.ok, "structure_violations": check.violations,
        "zero_pattern_footprints": [f.label() for f in fps],
    }, ns


def stage_linearize(system, ns: NormalizedSystem) -> tuple[dict, LinearizedSystem]:
    lin = linearize_with_region(system, ns)
    return {"lambda": lin.lam, "footprint": footprint_dict(lin.footprint),
            "M": lin.M, "H": lin.H, "h": lin.h, "region_rows": list(lin.row_labels),
            "M_fixes_shift": bool(np.abs(lin.M @ system.s - system.s).max() <= 1e-9)}, lin


def stage_stability(system, lin: LinearizedSystem, fps: FixedPointSet | None = None,
                    unit_tol: float | None = None) -> tuple[dict, StabilityReport]:
    kw = {} if unit_tol is None else {"unit_tol": unit_tol}
    rep = classify(lin.M, shift=system.s, footprint=lin.footprint, **kw)
    out = {"verdict": rep.verdict, "scope": rep.scope, "reasons": rep.reasons,
           "unit_eigen_count": rep.unit_eigen_count,
           "spectral_radius": rep.spectrum.spectral_radius,
           "eigenvalues": rep.spectrum.eigenvalues,
           "unit_eigenvalues": [{"value": u.value, "algebraic": u.algebraic,
                                 "geometric": u.geometric} for u in rep.spectrum.unit]}
    if fps is not None:
        cc = corollary_check(rep, fps)
        out["rank_deficiency_check"] = {"passed": cc.passed, "rank_deficiency": cc.rank_deficiency,
                                        "message": cc.message}
    return out, rep


def analyze(system, parallel: int = 1, tol: float | None = None) -> tuple[dict, bool]:
    """Full pipeline.

    Returns the report and a flag that is false when the system has no
    evaluation order or no growth rate. Stability verdicts are reported
    per footprint and do not affect the flag.
    """
    report: dict = {"model": stage_validate(system)}
    solv = stage_solvability(system)
    report["solvability"] = solv
    if not solv["solvable"]:
        return report, False
    growth, rep = stage_growth(system, parallel)
    report["growth_rates"] = growth
    ok = bool(rep.solutions)
    per_rate, verdicts = [], []
    for lam, sols in rep.grouped():
        entries = []
        for sol in sols:
            fp_out, fps = stage_fixed_points(system, sol, tol)
            norm_out, ns = stage_normalize(system, sol, tol)
            lin_out, lin = stage_linearize(system, ns)
            stab_out, stab = stage_stability(system, lin, fps)
            verdicts.append({"lambda": lam, "footprint": sol.footprint.label(), "verdict": stab.verdict})
            entries.append({"fixed_points": fp_out, "normalization": norm_out,
                            "linearization": lin_out, "stability": stab_out})
        per_rate.append({"lambda": lam, "footprints": entries})
    report["per_rate"] = per_rate
    report["summary"] = {"rates": rep.rates(), "verdicts": verdicts}
    return report, ok
