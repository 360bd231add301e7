"""Gaze analytics for attention-game logs: ingest, I-VT, event matching, metrics and reports."""

from __future__ import annotations

import json
from typing import Any, Mapping

from . import _core
from ._core import GazelabError, classify, match, parse_coordinate, quantile

__version__ = _core.__version__

__all__ = [
    "GazelabError",
    "analyze",
    "calibrate",
    "calibrate_velocity",
    "classify",
    "load_summary",
    "match",
    "parse_coordinate",
    "quantile",
    "synth",
]


def _levels(levels: Mapping[int, str] | str) -> dict[int, str]:
    return {1: levels} if isinstance(levels, str) else {int(k): v for k, v in levels.items()}


def analyze(
    levels: Mapping[int, str] | str,
    config: str = "",
    params: Mapping[str, Any] | None = None,
    table_format: str = "csv",
) -> dict[str, Any]:
    """Analyse one or more level logs given as CSV text keyed by level."""
    params_json = json.dumps(dict(params)) if params else ""
    return json.loads(_core.analyze_json(_levels(levels), config, params_json, table_format))


def calibrate(levels: Mapping[int, str] | str, config: str = "") -> dict[str, Any]:
    """Data-driven threshold and reaction-time window suggestions."""
    return json.loads(_core.calibrate_json(_levels(levels), config))


def calibrate_velocity(velocities, percentile: float = 75.0, outlier_cut_percentile: float = 99.5) -> dict[str, Any]:
    return json.loads(_core.calibrate_velocity_json(list(velocities), percentile, outlier_cut_percentile))


def load_summary(csv_text: str, level: int = 1, config: str = "") -> dict[str, Any]:
    """Cleaning counts and session shape for one level log."""
    return json.loads(_core.load_summary_json(csv_text, level, config))


def synth(**spec: Any) -> tuple[str, dict[str, Any]]:
    """Deterministic synthetic session: (csv_text, expected metrics)."""
    csv_text, truth = _core.synth(**spec)
    return csv_text, json.loads(truth)
