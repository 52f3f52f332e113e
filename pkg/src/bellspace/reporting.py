"""Report assembly and stable rendering.

``build_analysis_report`` runs the whole verification pipeline -- identity
chain, counterfactual mass, locality and no-signaling checks, correlations,
CHSH bounds, joint-distribution feasibility -- over a space and returns one
plain-data document. The JSON rendering is diff-stable: key order is fixed by
construction and every float prints with 12 significant digits.
"""

from __future__ import annotations

import io
import json
import math
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import chsh as chsh_mod
from . import locality as locality_mod
from . import queries
from .errors import NullConditioningError
from .fine import witness_as_mapping
from .montecarlo import ConvergencePoint, EmpiricalEstimate, Trials, empirical_chsh
from .quantum import ScanResult
from .space import DEFAULT_TOLERANCE, SETTINGS, ConditionalTable, SampleSpace, SettingDistribution, build_space

try:
    _VERSION = version("bellspace")
except PackageNotFoundError:  # running from a source tree
    _VERSION = "unknown"


# ---------------------------------------------------------------------------
# stable JSON
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".12g")


def _emit(obj, out: io.StringIO, indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        for k, (key, value) in enumerate(obj.items()):
            out.write(pad + "  " + json.dumps(str(key)) + ": ")
            _emit(value, out, indent + 1)
            out.write(",\n" if k < len(obj) - 1 else "\n")
        out.write(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.write("[]")
            return
        out.write("[\n")
        for k, value in enumerate(seq):
            out.write(pad + "  ")
            _emit(value, out, indent + 1)
            out.write(",\n" if k < len(seq) - 1 else "\n")
        out.write(pad + "]")
    elif obj is None:
        out.write("null")
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(_format_float(float(obj)))
    else:
        out.write(json.dumps(str(obj)))


def render_json(report: dict) -> str:
    out = io.StringIO()
    _emit(report, out, 0)
    out.write("\n")
    return out.getvalue()


def _matrix(arr: np.ndarray) -> list:
    """2x2 array as nested lists with NaN mapped to None."""
    return [
        [None if math.isnan(float(v)) else float(v) for v in row] for row in np.asarray(arr, dtype=float)
    ]


def _line_dict(line) -> dict:
    return {
        "name": line.name,
        "lhs": line.lhs,
        "rhs": line.rhs,
        "deviation": line.deviation,
        "status": line.status,
    }


def _identity_section(report) -> dict:
    return {
        "passed": report.passed,
        "max_deviation": report.max_deviation,
        "not_applicable": len(report.not_applicable()),
        "lines": [_line_dict(line) for line in report.lines],
    }


def _locality_section(report) -> dict:
    section = {
        "passed": report.passed,
        "max_deviation": report.max_deviation,
    }
    if getattr(report, "note", None):
        section["note"] = report.note
    section["lines"] = [_line_dict(line) for line in report.lines]
    return section


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def build_analysis_report(
    settings: SettingDistribution,
    table: ConditionalTable,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    exact_lp: bool = False,
    mode: str = "analyze",
    scan: ScanResult | None = None,
    empirical: EmpiricalEstimate | None = None,
    simulation: dict | None = None,
) -> dict:
    """Run all checks on the space built from (settings, table) and collect a
    single report document. ``empirical`` annotates reports computed from
    estimated tables (ingest); ``simulation`` attaches a simulate summary."""
    space = build_space(settings, table)

    report: dict = {
        "bellspace": {
            "version": _VERSION,
            "mode": mode,
            "tolerance": tolerance,
            "exact_lp": exact_lp,
        }
    }

    report["space"] = {
        "setting_weights": _matrix(settings.weights),
        "conditional_blocks": {
            f"{i},{j}": _matrix(table.q[i - 1, j - 1]) for i in SETTINGS for j in SETTINGS
        },
        "atom_probabilities": {str(atom): p for atom, p in space.atoms()},
        "total_probability": space.total_probability(),
    }

    if empirical is not None:
        undefined = empirical.undefined_pairs()
        blocks = empirical.block_frequencies
        undefined_cells = int(np.isnan(blocks).sum()) + len(undefined)
        report["empirical"] = {
            "n": empirical.n,
            "cell_counts": [[int(v) for v in row] for row in empirical.cell_counts],
            "block_frequencies": {
                f"{i},{j}": _matrix(blocks[i - 1, j - 1]) for i in SETTINGS for j in SETTINGS
            },
            "undefined_setting_pairs": [f"{i},{j}" for i, j in undefined],
            "undefined_cell_count": undefined_cells,
            "note": (
                "conditional blocks of empty setting cells are undefined; "
                "they enter the reconstructed space with zero weight"
            )
            if undefined
            else None,
        }

    nondet = queries.nondetection_identities(space, tolerance=tolerance)
    det = queries.detection_identities(space, tolerance=tolerance)
    report["identities"] = {
        "nondetection": _identity_section(nondet),
        "detection": _identity_section(det),
        "counterfactual_mass": queries.counterfactual_mass(space),
    }

    locality: dict = {}
    locality["setting_independence"] = _locality_section(
        locality_mod.setting_independence(space, tolerance=tolerance)
    )
    locality["remote_setting_independence"] = _locality_section(
        locality_mod.remote_setting_independence(space, tolerance=tolerance)
    )
    locality["detection_factorizations"] = _locality_section(
        locality_mod.detection_factorizations(space, tolerance=tolerance)
    )
    locality["marginal_consistency"] = _locality_section(
        locality_mod.marginal_consistency(space, tolerance=tolerance)
    )
    try:
        cond = locality_mod.conditional_marginal_consistency(space, tolerance=tolerance)
        locality["conditional_marginal_consistency"] = {
            "passed": cond.passed,
            "max_deviation": cond.max_deviation,
            "lines": [_line_dict(line) for line in cond.lines],
        }
    except NullConditioningError as exc:
        locality["conditional_marginal_consistency"] = {"error": str(exc)}
    report["locality"] = locality

    chsh_rep = chsh_mod.chsh_report(space, tolerance=tolerance, exact_lp=exact_lp)
    corr = chsh_rep.correlation_set
    report["correlations"] = {
        "weights": _matrix(corr.weights),
        "absolute": _matrix(corr.absolute),
        "conditional": _matrix(corr.conditional),
        "undefined_pairs": [f"{i},{j}" for i, j in corr.undefined_pairs()],
    }

    uniform = bool(np.all(np.abs(settings.weights - 0.25) <= tolerance))
    report["chsh"] = {
        "s_abs": chsh_rep.s_abs,
        "s_cond": chsh_rep.s_cond,
        "bounds": [
            {
                "name": b.name,
                "value": b.value,
                "threshold": b.threshold,
                "satisfied": b.satisfied,
            }
            for b in chsh_rep.bounds
        ],
        "uniform_weight_implied_bounds": (
            {"from_classical_2": 8.0, "from_strengthened_1": 4.0} if uniform else None
        ),
    }

    if chsh_rep.fine is not None:
        fine = chsh_rep.fine
        report["fine"] = {
            "status": "feasible" if fine.feasible else "infeasible",
            "arithmetic": fine.arithmetic,
            "residual": fine.residual,
            "iterations": fine.iterations,
            "witness": witness_as_mapping(fine.witness) if fine.witness is not None else None,
            "max_witness_deviation": fine.max_witness_deviation,
            "violated": (
                {
                    "signs": "".join("+" if s > 0 else "-" for s in fine.violated_signs),
                    "value": fine.violated_value,
                    "threshold": 2.0,
                }
                if fine.violated_signs is not None
                else None
            ),
        }
    else:
        report["fine"] = {"status": "not-run", "reason": chsh_rep.fine_error}

    if scan is not None:
        report["scan"] = {
            "resolution": scan.resolution,
            "n_points": scan.n_points,
            "max_abs_s_cond": scan.max_abs_s,
            "tsirelson_bound": chsh_mod.TSIRELSON_BOUND,
            "below_tsirelson": scan.max_abs_s <= chsh_mod.TSIRELSON_BOUND + 1e-9,
            "best_angles_degrees": {
                "a": [math.degrees(t) for t in scan.best_angles.theta_a],
                "b": [math.degrees(t) for t in scan.best_angles.theta_b],
            },
        }

    if simulation is not None:
        report["simulation"] = simulation

    return report


def build_simulation_summary(
    space: SampleSpace,
    trials: Trials,
    est: EmpiricalEstimate,
    convergence: list[ConvergencePoint] | None = None,
) -> dict:
    """Empirical-vs-exact deviations for a simulated stream."""
    exact = space.probs.reshape(-1)
    freq = est.atom_counts.reshape(-1) / est.n
    max_atom_dev = float(np.abs(freq - exact).max())

    exact_corr = chsh_mod.correlations(space)
    s_abs_exact = chsh_mod.chsh_combination(exact_corr.absolute)
    s_cond_exact = (
        chsh_mod.chsh_combination(exact_corr.conditional) if exact_corr.all_defined else None
    )
    s_abs_emp, s_cond_emp = empirical_chsh(est)

    summary = {
        "n": est.n,
        "seed": trials.seed,
        "rng_algorithm": trials.rng_algorithm,
        "max_atom_probability_deviation": max_atom_dev,
        "empirical_s_abs": s_abs_emp,
        "exact_s_abs": s_abs_exact,
        "empirical_s_cond": s_cond_emp,
        "exact_s_cond": s_cond_exact,
        "s_cond_deviation": (
            abs(s_cond_emp - s_cond_exact)
            if s_cond_emp is not None and s_cond_exact is not None
            else None
        ),
        "cell_counts": [[int(v) for v in row] for row in est.cell_counts],
    }
    if convergence is not None:
        summary["convergence"] = [
            {"n": point.n, "max_abs_deviation": point.max_abs_deviation} for point in convergence
        ]
    return summary


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _verdict(flag: bool | None) -> str:
    if flag is None:
        return "undefined"
    return "pass" if flag else "FAIL"


def render_text(report: dict) -> str:
    """Short human-readable summary of a report document."""
    lines: list[str] = []
    meta = report["bellspace"]
    lines.append(f"bellspace {meta['version']} [{meta['mode']}]  tolerance={meta['tolerance']:g}")

    if "empirical" in report:
        emp = report["empirical"]
        lines.append(
            f"empirical input: n={emp['n']}, undefined setting pairs: "
            f"{emp['undefined_setting_pairs'] or 'none'} "
            f"(undefined cells: {emp['undefined_cell_count']})"
        )

    ident = report["identities"]
    lines.append(
        "identity chain: nondetection "
        + _verdict(ident["nondetection"]["passed"])
        + f" (max dev {ident['nondetection']['max_deviation']:.3g}, "
        + f"n/a {ident['nondetection']['not_applicable']}), detection "
        + _verdict(ident["detection"]["passed"])
        + f" (max dev {ident['detection']['max_deviation']:.3g}, "
        + f"n/a {ident['detection']['not_applicable']})"
    )
    lines.append(f"counterfactual mass: {ident['counterfactual_mass']:.12g}")

    loc = report["locality"]
    for key, label in (
        ("setting_independence", "setting independence"),
        ("remote_setting_independence", "remote-setting independence"),
        ("detection_factorizations", "detection factorizations"),
        ("marginal_consistency", "marginal consistency"),
        ("conditional_marginal_consistency", "conditional marginal consistency"),
    ):
        section = loc[key]
        if "error" in section:
            lines.append(f"{label}: not applicable ({section['error']})")
        else:
            text = f"{label}: {_verdict(section['passed'])} (max dev {section['max_deviation']:.3g})"
            if section.get("note"):
                text += f" -- {section['note']}"
            lines.append(text)

    ch = report["chsh"]
    s_cond = "undefined" if ch["s_cond"] is None else f"{ch['s_cond']:.6f}"
    lines.append(f"CHSH: S_abs = {ch['s_abs']:.6f}, S_cond = {s_cond}")
    for bound in ch["bounds"]:
        value = "undefined" if bound["value"] is None else f"{bound['value']:.6f}"
        status = (
            "undefined"
            if bound["satisfied"] is None
            else ("holds" if bound["satisfied"] else "VIOLATED")
        )
        lines.append(f"  {bound['name']}: {value} vs {bound['threshold']:.6f} -> {status}")

    fine = report["fine"]
    if fine["status"] == "not-run":
        lines.append(f"joint distribution: not run ({fine['reason']})")
    elif fine["status"] == "feasible":
        lines.append(
            f"joint distribution: exists (witness max marginal deviation "
            f"{fine['max_witness_deviation']:.3g}, {fine['arithmetic']} arithmetic)"
        )
    else:
        v = fine["violated"]
        lines.append(
            f"joint distribution: does not exist -- CHSH combination {v['signs']} "
            f"= {v['value']:.6f} > 2 ({fine['arithmetic']} arithmetic)"
        )

    if "scan" in report:
        scan = report["scan"]
        lines.append(
            f"angle scan: max |S_cond| = {scan['max_abs_s_cond']:.12f} over {scan['n_points']} "
            f"points (resolution {scan['resolution']}), tsirelson bound "
            f"{'respected' if scan['below_tsirelson'] else 'EXCEEDED'}"
        )

    if "simulation" in report:
        sim = report["simulation"]
        lines.append(
            f"simulation: n={sim['n']} seed={sim['seed']} rng={sim['rng_algorithm']}"
        )
        lines.append(
            f"  max atom-frequency deviation {sim['max_atom_probability_deviation']:.3g}"
        )
        if sim.get("empirical_s_cond") is not None and sim.get("exact_s_cond") is not None:
            lines.append(
                f"  S_cond empirical {sim['empirical_s_cond']:.6f} vs exact "
                f"{sim['exact_s_cond']:.6f} (|dev| {sim['s_cond_deviation']:.4g})"
            )
    return "\n".join(lines) + "\n"
