"""CSV and summary output for :class:`~qrbfnn.experiments.RunReport`."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import yaml

from .experiments import ConfigError, ExperimentConfig, RunReport

PathLike = Union[str, Path]


def _fmt(x: float) -> str:
    # fixed significant digits keep reruns byte-identical; non-finite values stay visible
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.10g}"


def csv_lines(report: RunReport) -> list:
    extra = list(report.extra_columns)
    lines = [",".join(["iteration", "mse_db", "mean_q"] + extra)]
    cols = [report.mse_db, report.mean_q] + [report.extra_columns[k] for k in extra]
    for i in range(report.mse.size):
        lines.append(",".join([str(i + 1)] + [_fmt(c[i]) for c in cols]))
    return lines


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def emit_report(report: RunReport, path: PathLike) -> Tuple[Path, Path]:
    """Write the per-iteration CSV to ``path`` and a JSON summary next to it.

    Returns the two paths written. The summary is ``<stem>.summary.json``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(csv_lines(report)) + "\n")
    summary = path.with_name(path.stem + ".summary.json")
    summary.write_text(json.dumps(_jsonable(report.summary()), indent=2, sort_keys=True) + "\n")
    return path, summary


def load_config(path: PathLike) -> ExperimentConfig:
    """Read an experiment config from a YAML file.

    A ``preset`` key starts from that named preset and applies the remaining
    keys on top (``train``, ``variant`` and ``task`` are merged field-wise).
    """
    from .presets import get_preset

    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    base = data.pop("preset", None)
    if base is not None:
        try:
            merged = get_preset(base).to_dict()
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        for key, value in data.items():
            if key in ("train", "variant", "task") and isinstance(value, dict):
                merged[key] = {**merged[key], **value}
            else:
                merged[key] = value
        data = merged
    return ExperimentConfig.from_dict(data)


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(_jsonable(cfg.to_dict()), sort_keys=False)
