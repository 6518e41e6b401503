"""
Config Loader
Model configuration JSON and measured curve CSV ingestion
"""

import csv
import json
import logging
import os

from analysis.value_function import ModelPair
from closed_form.pnorm_model import PNormModel
from common.errors import ConfigParseError, MaganisoError
from curves.energy_profile import FRAMES
from curves.principal_curve import make_linear_curve, make_tabulated_curve
from model.exponent_rule import ExponentRule
from model.model_config import SolverSettings, make_model

logger = logging.getLogger(__name__)

CSV_HEADER = ['h', 'b']
SOLVER_FIELDS = ('abs_tol', 'rel_tol', 'max_iter')


def load_curve_csv(path):
    """
    Load a measured principal curve

    The file has a header row `h,b`, then one sample per row; lines
    starting with `#` are comments.

    Args:
        path: CSV file path

    Returns:
        TabulatedCurve
    """
    try:
        with open(path, newline='') as handle:
            rows = [row for row in csv.reader(handle)
                    if row and not row[0].lstrip().startswith('#')]
    except OSError as exc:
        raise ConfigParseError(f"cannot read curve file {path}: {exc}")

    if not rows or [cell.strip() for cell in rows[0]] != CSV_HEADER:
        raise ConfigParseError(f"{path}: header row must be 'h,b'")

    try:
        samples = [(float(h), float(b)) for h, b in rows[1:]]
    except ValueError as exc:
        raise ConfigParseError(f"{path}: {exc}")

    logger.debug(f"Loaded {len(samples)} curve samples from {path}")
    return make_tabulated_curve(samples)


def _parse_curve(entry, base_dir, name):
    if not isinstance(entry, dict) or len(entry) != 1:
        raise ConfigParseError(f"{name} must hold exactly one of 'linear', 'csv', 'samples'")

    kind, value = next(iter(entry.items()))
    if kind == 'linear':
        return make_linear_curve(value)
    if kind == 'csv':
        return load_curve_csv(os.path.join(base_dir, value))
    if kind == 'samples':
        return make_tabulated_curve(value)
    raise ConfigParseError(f"{name}: unknown curve kind {kind!r}")


def _parse_exponent(entry):
    if not isinstance(entry, dict) or len(entry) != 1:
        raise ConfigParseError("exponent must hold exactly one of 'constant', 'table'")

    kind, value = next(iter(entry.items()))
    if kind == 'constant':
        return ExponentRule.constant(value)
    if kind == 'table':
        return ExponentRule.tabulated(value)
    raise ConfigParseError(f"exponent: unknown kind {kind!r}")


def _parse_solver(entry):
    defaults = SolverSettings.from_settings()
    entry = entry or {}
    unknown = set(entry) - set(SOLVER_FIELDS)
    if unknown:
        raise ConfigParseError(f"solver: unknown fields {sorted(unknown)}")

    return SolverSettings(
        abs_tol=float(entry.get('abs_tol', defaults.abs_tol)),
        rel_tol=float(entry.get('rel_tol', defaults.rel_tol)),
        max_iter=int(entry.get('max_iter', defaults.max_iter)),
    )


def _parse_pnorm(entry):
    try:
        return PNormModel(
            frame=entry['frame'],
            scales=tuple(float(c) for c in entry['scales']),
            exponent=float(entry['exponent']),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigParseError(f"closed_form.pnorm: missing or malformed field {exc}")


def _parse_single(data, base_dir):
    if 'closed_form' in data:
        closed = data['closed_form']
        if not isinstance(closed, dict) or 'pnorm' not in closed:
            raise ConfigParseError("closed_form must hold a 'pnorm' entry")
        return _parse_pnorm(closed['pnorm'])

    missing = [key for key in ('frame', 'axis1', 'axis2', 'exponent') if key not in data]
    if missing:
        raise ConfigParseError(f"model config is missing {missing}")
    if data['frame'] not in FRAMES:
        raise ConfigParseError(f"frame must be one of {FRAMES}, got {data['frame']!r}")

    return make_model(
        data['frame'],
        _parse_curve(data['axis1'], base_dir, 'axis1'),
        _parse_curve(data['axis2'], base_dir, 'axis2'),
        _parse_exponent(data['exponent']),
        _parse_solver(data.get('solver')),
    )


def parse_model(data, base_dir='.'):
    """
    Build a model from parsed JSON

    Args:
        data: Dict in the model config schema (single model or 'pair')
        base_dir: Directory that relative CSV paths are resolved against

    Returns:
        ModelConfig, PNormModel or ModelPair
    """
    if not isinstance(data, dict):
        raise ConfigParseError("model config must be a JSON object")

    try:
        if 'pair' in data:
            sides = data['pair']
            if not isinstance(sides, dict):
                raise ConfigParseError("pair must be a JSON object")
            return ModelPair(
                coenergy=_parse_single(sides['coenergy'], base_dir) if 'coenergy' in sides else None,
                energy=_parse_single(sides['energy'], base_dir) if 'energy' in sides else None,
            )
        return _parse_single(data, base_dir)
    except MaganisoError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigParseError(f"invalid model config: {exc}")


def load_model(path):
    """
    Load a model config file

    Args:
        path: JSON file path

    Returns:
        ModelConfig, PNormModel or ModelPair
    """
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigParseError(f"cannot read model file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: invalid JSON ({exc})")

    model = parse_model(data, os.path.dirname(os.path.abspath(path)))
    logger.info(f"Model loaded from {path}")
    return model
