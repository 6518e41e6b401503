"""
Commands
Command-line front end: evaluations, figure data and duality checks
"""

import argparse
import contextlib
import logging
import sys

import numpy as np

from analysis.contours import (DEFAULT_CONTOUR_SAMPLES,
                               DEFAULT_HARD_AXIS_SAMPLES,
                               DEFAULT_LOCUS_SAMPLES, hard_axis,
                               locus_constant_induction, trace_contour)
from analysis.convexity import DEFAULT_GRID, DEFAULT_TRIPLES, convexity_scan
from analysis.legendre import DEFAULT_RESOLUTION, legendre_suite
from analysis.value_function import ModelPair, value_function
from closed_form.pnorm_model import PNormModel, pnorm_hessian
from common.errors import MaganisoError, UsageError
from common.settings import get_settings
from curves.energy_profile import COENERGY
from law.material_law import hessian
from model.level_function import DEFAULT_UNIQUENESS_SAMPLES, check_uniqueness
from model.level_solver import solve_level_report
from model.model_config import ModelConfig, model_hash
from storage.config_loader import load_model
from storage.output_writer import format_number, write_json, write_polylines

logger = logging.getLogger(__name__)

PROG = 'maganiso'
DUALITY_GRID = 9
DUALITY_HALF_WIDTH = 2.0


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def parse_numbers(text, count=None, name='value'):
    """Parse 'a,b,...' into floats, optionally checking the count"""
    try:
        values = tuple(float(part) for part in text.split(','))
    except ValueError:
        raise UsageError(f"{name} must be comma-separated numbers, got {text!r}")
    if count is not None and len(values) != count:
        raise UsageError(f"{name} needs {count} numbers, got {len(values)}")
    return values


def _single(loaded):
    if isinstance(loaded, ModelPair):
        return loaded.primary
    return loaded


def _pair(loaded, dual_path):
    pair = ModelPair.of(loaded)
    if dual_path is None:
        return pair

    dual = _single(load_model(dual_path))
    if dual.frame == COENERGY:
        return ModelPair(coenergy=dual, energy=pair.energy)
    return ModelPair(coenergy=pair.coenergy, energy=dual)


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w') as handle:
            yield handle


def cmd_eval(args, loaded):
    model = _single(loaded)
    point = parse_numbers(args.point, 2, '--point')
    if isinstance(model, ModelConfig):
        value = solve_level_report(model, point).level
    else:
        value = value_function(model).value(point)
    print(format_number(value))
    return 0


def cmd_grad(args, loaded):
    model = _single(loaded)
    point = parse_numbers(args.point, 2, '--point')
    gradient = value_function(model).gradient(point)
    print(','.join(format_number(v) for v in gradient))
    return 0


def cmd_hess(args, loaded):
    model = _single(loaded)
    point = parse_numbers(args.point, 2, '--point')
    if isinstance(model, PNormModel):
        tensor = pnorm_hessian(model, point)
    else:
        tensor = hessian(model, point)
    print(','.join(format_number(v) for v in tensor.to_list()))
    return 0


def cmd_contour(args, loaded):
    model = _single(loaded)
    levels = parse_numbers(args.levels, name='--levels')
    blocks = [(f"level={format_number(level)}", trace_contour(model, level, args.samples))
              for level in levels]
    with _output(args.output) as handle:
        write_polylines(handle, 'contour', model_hash(model), blocks)
    return 0


def cmd_locus(args, loaded):
    pair = _pair(loaded, args.dual)
    polyline = locus_constant_induction(pair, args.bmag, args.samples)
    with _output(args.output) as handle:
        write_polylines(handle, 'locus', model_hash(pair), [(f"bmag={format_number(args.bmag)}", polyline)])
    return 0


def cmd_hard_axis(args, loaded):
    pair = _pair(loaded, args.dual)
    result = hard_axis(pair, args.bmag, args.samples)
    print(format_number(result.angle))
    if args.output is not None:
        with _output(args.output) as handle:
            write_json(handle, 'hard-axis', model_hash(pair), result.to_dict())
    return 0


def cmd_convexity(args, loaded):
    model = _single(loaded)
    region = parse_numbers(args.box, 4, '--box')
    report = convexity_scan(model, region, grid=args.grid, triples=args.triples, seed=args.seed)
    with _output(args.output) as handle:
        write_json(handle, 'convexity', model_hash(model), report.to_dict())
    return 0


def cmd_check_uniqueness(args, loaded):
    model = _single(loaded)
    if not isinstance(model, ModelConfig):
        raise UsageError("check-uniqueness needs an implicit model")
    point = parse_numbers(args.point, 2, '--point')
    level_range = parse_numbers(args.range, 2, '--range')
    report = check_uniqueness(model, point, level_range, args.samples)
    with _output(args.output) as handle:
        write_json(handle, 'check-uniqueness', model_hash(model), report.to_dict())
    return 0


def cmd_conjugate_check(args, loaded):
    pair = _pair(loaded, args.dual)
    if pair.coenergy is None or pair.energy is None:
        raise UsageError("conjugate-check needs one coenergy and one energy model")

    axis = np.linspace(-DUALITY_HALF_WIDTH, DUALITY_HALF_WIDTH, DUALITY_GRID)
    grid_x, grid_y = np.meshgrid(axis, axis, indexing='ij')
    points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)

    result = legendre_suite(pair.energy, pair.coenergy, points, resolution=args.resolution)
    print(format_number(result.max_deviation))
    if args.output is not None:
        with _output(args.output) as handle:
            write_json(handle, 'conjugate-check', model_hash(pair), result.to_dict())
    return 0


def build_parser():
    """Argument parser with one sub-parser per command"""
    parser = CommandParser(prog=PROG, description="Anisotropic magnetic material models")
    commands = parser.add_subparsers(dest='command', parser_class=CommandParser)
    commands.required = True

    def add(name, handler, help_text):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument('--model', required=True, help="model config JSON")
        sub.add_argument('--output', default=None, help="output file (default stdout)")
        sub.set_defaults(handler=handler)
        return sub

    for name, handler, text in (('eval', cmd_eval, "value at a point"),
                                ('grad', cmd_grad, "vector law at a point"),
                                ('hess', cmd_hess, "differential tensor at a point")):
        add(name, handler, text).add_argument('--point', required=True, help="x1,x2")

    sub = add('contour', cmd_contour, "contours of equal level")
    sub.add_argument('--levels', required=True, help="L1,L2,...")
    sub.add_argument('--samples', type=int, default=DEFAULT_CONTOUR_SAMPLES)

    sub = add('locus', cmd_locus, "field locus for constant induction magnitude")
    sub.add_argument('--bmag', type=float, required=True)
    sub.add_argument('--samples', type=int, default=DEFAULT_LOCUS_SAMPLES)
    sub.add_argument('--dual', default=None, help="conjugate model config")

    sub = add('hard-axis', cmd_hard_axis, "direction of hard magnetization")
    sub.add_argument('--bmag', type=float, required=True)
    sub.add_argument('--samples', type=int, default=DEFAULT_HARD_AXIS_SAMPLES)
    sub.add_argument('--dual', default=None, help="conjugate model config")

    sub = add('convexity', cmd_convexity, "convexity scan over a box")
    sub.add_argument('--box', required=True, help="x0,x1,y0,y1")
    sub.add_argument('--grid', type=int, default=DEFAULT_GRID)
    sub.add_argument('--triples', type=int, default=DEFAULT_TRIPLES)
    sub.add_argument('--seed', type=int, default=0)

    sub = add('check-uniqueness', cmd_check_uniqueness, "sample the level equation residual")
    sub.add_argument('--point', required=True, help="x1,x2")
    sub.add_argument('--range', required=True, help="lo,hi")
    sub.add_argument('--samples', type=int, default=DEFAULT_UNIQUENESS_SAMPLES)

    sub = add('conjugate-check', cmd_conjugate_check, "grid Legendre transform against the dual model")
    sub.add_argument('--dual', required=True, help="conjugate model config")
    sub.add_argument('--resolution', type=int, default=DEFAULT_RESOLUTION)

    return parser


def configure_logging(level):
    logging.basicConfig(
        level=getattr(logging, level),
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )


def run(argv=None):
    """
    Run one command

    Args:
        argv: Argument list (defaults to sys.argv[1:])

    Returns:
        Exit status: 0 success, 1 model or solver error, 2 usage error
    """
    try:
        configure_logging(get_settings().log_level)
        args = build_parser().parse_args(argv)
        loaded = load_model(args.model)
        return args.handler(args, loaded)
    except UsageError as exc:
        print(f"error: UsageError: {exc}", file=sys.stderr)
        return 2
    except MaganisoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
