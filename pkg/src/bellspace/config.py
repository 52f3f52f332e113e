"""Run configuration: a single YAML document describing weights plus a table.

Two input forms mirror the two natural sources of conditional data:

explicit blocks::

    settings:
      weights: [[0.25, 0.25], [0.25, 0.25]]   # rows are a=1,2; columns b=1,2
    table:
      blocks:
        "1,1": [[0.5, 0.0], [0.0, 0.5]]       # [[q(+,+), q(+,-)], [q(-,+), q(-,-)]]
        "1,2": [0.5, 0.0, 0.0, 0.5]           # flat form, same order
        "2,1": ...
        "2,2": ...

quantum angles::

    settings:
      a: [0.5, 0.5]        # product weights from per-side marginals
      b: [0.5, 0.5]
    angles:
      a: [0.0, 45.0]
      b: [22.5, -22.5]
      units: degrees        # or radians (default degrees)
      convention: photon    # or spin

``settings`` takes either ``weights`` (full 2x2 joint) or both ``a`` and ``b``
(product of marginals). Exactly one of ``table`` / ``angles`` must be present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigParseError, ConfigValidationError, InvalidDistributionError
from .quantum import PHOTON, SPIN, AngleSettings, singlet_table
from .space import DEFAULT_TOLERANCE, ConditionalTable, SettingDistribution


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs plus a plain-data echo for reports."""

    settings: SettingDistribution
    table: ConditionalTable
    source: dict


def _require_mapping(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigValidationError(f"{what} must be a mapping, got {type(obj).__name__}")
    return obj


def _number_list(obj, what: str, length: int) -> list[float]:
    if not isinstance(obj, (list, tuple)) or len(obj) != length:
        raise ConfigValidationError(f"{what} must be a list of {length} numbers")
    out = []
    for k, v in enumerate(obj):
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(float(v)):
            raise ConfigValidationError(f"{what}[{k}] must be a finite number, got {v!r}")
        out.append(float(v))
    return out


def _parse_settings(section, tolerance: float) -> SettingDistribution:
    section = _require_mapping(section, "settings")
    has_weights = "weights" in section
    has_marginals = "a" in section or "b" in section
    if has_weights and has_marginals:
        raise ConfigValidationError("settings: give either 'weights' or 'a'/'b' marginals, not both")
    try:
        if has_weights:
            w = section["weights"]
            if not isinstance(w, list) or len(w) != 2:
                raise ConfigValidationError("settings.weights must be a 2x2 list of lists")
            rows = [_number_list(w[0], "settings.weights[0]", 2), _number_list(w[1], "settings.weights[1]", 2)]
            return SettingDistribution.from_weights(rows, tolerance=tolerance)
        if "a" not in section or "b" not in section:
            raise ConfigValidationError("settings needs 'weights' or both 'a' and 'b'")
        return SettingDistribution.from_marginals(
            _number_list(section["a"], "settings.a", 2),
            _number_list(section["b"], "settings.b", 2),
            tolerance=tolerance,
        )
    except InvalidDistributionError as exc:
        raise ConfigValidationError(f"settings: {exc}") from exc


def _parse_block(value, what: str) -> list[list[float]]:
    if isinstance(value, (list, tuple)) and len(value) == 4 and not isinstance(value[0], (list, tuple)):
        flat = _number_list(value, what, 4)
        return [flat[:2], flat[2:]]
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return [_number_list(value[0], f"{what}[0]", 2), _number_list(value[1], f"{what}[1]", 2)]
    raise ConfigValidationError(f"{what} must be a 2x2 block or a flat list of 4 entries")


def _parse_table(section, tolerance: float) -> ConditionalTable:
    section = _require_mapping(section, "table")
    blocks_raw = _require_mapping(section.get("blocks"), "table.blocks")
    blocks = {}
    for i in (1, 2):
        for j in (1, 2):
            key = f"{i},{j}"
            if key not in blocks_raw:
                raise ConfigValidationError(f"table.blocks is missing block '{key}'")
            blocks[(i, j)] = _parse_block(blocks_raw[key], f"table.blocks['{key}']")
    unknown = set(blocks_raw) - {f"{i},{j}" for i in (1, 2) for j in (1, 2)}
    if unknown:
        raise ConfigValidationError(f"table.blocks has unknown keys: {sorted(unknown)}")
    try:
        return ConditionalTable.from_blocks(blocks, tolerance=tolerance)
    except InvalidDistributionError as exc:
        raise ConfigValidationError(f"table: {exc}") from exc


def _parse_angles(section) -> ConditionalTable:
    section = _require_mapping(section, "angles")
    a = _number_list(section.get("a"), "angles.a", 2)
    b = _number_list(section.get("b"), "angles.b", 2)
    units = section.get("units", "degrees")
    if units not in ("degrees", "radians"):
        raise ConfigValidationError(f"angles.units must be 'degrees' or 'radians', got {units!r}")
    convention = section.get("convention", PHOTON)
    if convention not in (PHOTON, SPIN):
        raise ConfigValidationError(f"angles.convention must be 'photon' or 'spin', got {convention!r}")
    if units == "degrees":
        angles = AngleSettings.from_degrees((a[0], a[1]), (b[0], b[1]))
    else:
        angles = AngleSettings((a[0], a[1]), (b[0], b[1]))
    return singlet_table(angles, convention=convention)


def parse_config(text: str, *, tolerance: float = DEFAULT_TOLERANCE) -> RunConfig:
    """Parse and validate a config document.

    Raises :class:`ConfigParseError` for syntax problems and
    :class:`ConfigValidationError` for structural/semantic ones.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"config is not valid YAML: {exc}") from exc
    if doc is None:
        raise ConfigValidationError("config is empty")
    doc = _require_mapping(doc, "config document")

    unknown = set(doc) - {"settings", "table", "angles"}
    if unknown:
        raise ConfigValidationError(f"unknown top-level keys: {sorted(unknown)}")
    if "settings" not in doc:
        raise ConfigValidationError("config needs a 'settings' section")
    has_table = "table" in doc
    has_angles = "angles" in doc
    if has_table == has_angles:
        raise ConfigValidationError("config needs exactly one of 'table' or 'angles'")

    settings = _parse_settings(doc["settings"], tolerance)
    table = _parse_table(doc["table"], tolerance) if has_table else _parse_angles(doc["angles"])
    return RunConfig(settings=settings, table=table, source=doc)


def load_config(path: str | Path, *, tolerance: float = DEFAULT_TOLERANCE) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, tolerance=tolerance)
