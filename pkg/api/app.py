"""
Flask Application
JSON service for evaluating anisotropic material models
"""

from flask import Flask, request, jsonify
import logging
import os

from analysis.contours import DEFAULT_CONTOUR_SAMPLES, trace_contour
from analysis.value_function import ModelPair, value_function
from closed_form.pnorm_model import PNormModel, pnorm_hessian
from common.errors import MaganisoError
from common.settings import get_settings
from law.material_law import evaluate
from model.model_config import ModelConfig, model_hash
from storage.config_loader import parse_model

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

app = Flask(__name__)

MAX_CONTOUR_SAMPLES = 4096


class RequestError(MaganisoError):
    """Malformed request body"""


def _model_and_point():
    body = request.get_json(silent=True)
    if not isinstance(body, dict) or 'model' not in body or 'point' not in body:
        raise RequestError("body must be a JSON object with 'model' and 'point'")

    model = parse_model(body['model'])
    if isinstance(model, ModelPair):
        model = model.primary

    point = body['point']
    if not isinstance(point, list) or len(point) != 2:
        raise RequestError("point must be a list of two numbers")
    try:
        point = (float(point[0]), float(point[1]))
    except (TypeError, ValueError):
        raise RequestError("point must be a list of two numbers")
    return model, point


@app.errorhandler(MaganisoError)
def handle_model_error(exc):
    """Map library errors to HTTP 400"""
    logger.info(f"Request failed: {type(exc).__name__}: {exc}")
    return jsonify({'error': type(exc).__name__, 'message': str(exc)}), 400


@app.route('/')
def index():
    """Root endpoint"""
    return jsonify({
        'message': 'Anisotropic Material Model Service',
        'version': '1.0.0',
        'endpoints': ['/health', '/api/eval', '/api/grad', '/api/hess', '/api/contour'],
    })


@app.route('/health')
def health():
    """Health check"""
    return jsonify({'status': 'healthy'})


@app.route('/api/eval', methods=['POST'])
def eval_point():
    """Level and warnings at one point"""
    model, point = _model_and_point()

    if isinstance(model, ModelConfig):
        result = evaluate(model, point)
        return jsonify({'value': result.level, 'warnings': list(result.warnings),
                        'model_hash': model_hash(model)})

    return jsonify({'value': value_function(model).value(point), 'warnings': [],
                    'model_hash': model_hash(model)})


@app.route('/api/grad', methods=['POST'])
def grad_point():
    """Vector law at one point"""
    model, point = _model_and_point()

    if isinstance(model, ModelConfig):
        result = evaluate(model, point)
        return jsonify({'gradient': list(result.gradient), 'warnings': list(result.warnings)})

    gradient = value_function(model).gradient(point)
    return jsonify({'gradient': [float(v) for v in gradient], 'warnings': []})


@app.route('/api/hess', methods=['POST'])
def hess_point():
    """Differential tensor at one point"""
    model, point = _model_and_point()

    if isinstance(model, PNormModel):
        tensor = pnorm_hessian(model, point)
    else:
        tensor = evaluate(model, point, with_hessian=True).hessian

    return jsonify({
        'hessian': [float(v) for v in tensor.to_list()],
        'positive_definite': tensor.is_positive_definite(),
    })


@app.route('/api/contour', methods=['POST'])
def contour():
    """Contour of equal level as a list of points"""
    body = request.get_json(silent=True)
    if not isinstance(body, dict) or 'model' not in body or 'level' not in body:
        raise RequestError("body must be a JSON object with 'model' and 'level'")

    model = parse_model(body['model'])
    if isinstance(model, ModelPair):
        model = model.primary

    try:
        level = float(body['level'])
        samples = int(body.get('samples', DEFAULT_CONTOUR_SAMPLES))
    except (TypeError, ValueError):
        raise RequestError("level must be a number and samples an integer")
    if not 3 <= samples <= MAX_CONTOUR_SAMPLES:
        raise RequestError(f"samples must lie in [3, {MAX_CONTOUR_SAMPLES}]")

    polyline = trace_contour(model, level, samples)
    return jsonify({
        'level': level,
        'thetas': polyline.thetas.tolist(),
        'points': polyline.points.tolist(),
        'model_hash': model_hash(model),
    })


if __name__ == '__main__':
    port = get_settings().port
    debug = os.getenv('DEBUG', 'False').lower() == 'true'

    print("=" * 60)
    print("Anisotropic Material Model Service")
    print("=" * 60)
    print(f"Starting on port {port}")
    print("Endpoints:")
    print("  - POST /api/eval     level at a point")
    print("  - POST /api/grad     vector law")
    print("  - POST /api/hess     differential tensor")
    print("  - POST /api/contour  equal-level contour")
    print("=" * 60)

    app.run(host='0.0.0.0', port=port, debug=debug)
