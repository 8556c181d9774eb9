"""Rows for free-energy tables and phase-diagram reports."""

from typing import Any, Dict, List, Optional

from src.models.results import CriticalPointEstimate, FreeEnergyEstimate


FREE_ENERGY_COLUMNS = ("beta", "eps", "F", "stderr", "method")
PHASE_COLUMNS = ("beta", "kind", "eps_c", "stderr", "method", "passed")


def free_energy_row(beta: float, eps: float, estimate: FreeEnergyEstimate) -> Dict[str, Any]:
    """One CSV row for an estimate."""
    return {"beta": beta, "eps": eps, "F": estimate.value, "stderr": estimate.stderr,
            "method": estimate.method}


def phase_report(beta: float, eps_c_quenched: Optional[CriticalPointEstimate],
                 eps_c_annealed: Optional[CriticalPointEstimate],
                 bounds: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Phase-diagram entry for one beta.

    passed is False when the quenched critical point lies below the annealed
    one beyond both brackets.
    """
    passed = True
    if eps_c_quenched is not None and eps_c_annealed is not None:
        passed = eps_c_quenched.upper >= eps_c_annealed.lower
    if bounds is not None:
        passed = passed and bool(bounds.get("passed", True))
    return {
        "beta": beta,
        "eps_c_quenched": None if eps_c_quenched is None else eps_c_quenched.to_dict(),
        "eps_c_annealed": None if eps_c_annealed is None else eps_c_annealed.to_dict(),
        "bounds": bounds,
        "passed": passed,
    }


def phase_rows(entry: Dict[str, Any]) -> List[Dict[str, Any]]:
    """One row per critical point of a phase entry.

    stderr is half the final bracket width.
    """
    rows = []
    for kind in ("annealed", "quenched"):
        estimate = entry[f"eps_c_{kind}"]
        if estimate is None:
            continue
        rows.append({
            "beta": entry["beta"],
            "kind": kind,
            "eps_c": estimate["value"],
            "stderr": 0.5 * (estimate["upper"] - estimate["lower"]),
            "method": estimate["method"],
            "passed": entry["passed"],
        })
    return rows
