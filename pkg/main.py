"""
Anisotropic Material Models - Main Demonstration
Walks through the linear anisotropic examples, figure data and duality
"""

import logging

import numpy as np

from analysis.contours import hard_axis, locus_constant_induction, trace_contour
from analysis.convexity import convexity_scan
from analysis.legendre import legendre_oracle
from analysis.value_function import ModelPair
from closed_form.pnorm_model import PNormModel, conjugate_exponent, pnorm_value
from closed_form.special_model import SpecialModel, special_value
from curves.energy_profile import EnergyProfile
from curves.principal_curve import make_linear_curve, make_tabulated_curve
from law.material_law import differential_tensor_pair, evaluate
from model.exponent_rule import ExponentRule
from model.level_solver import solve_level
from model.model_config import make_model


def print_section(title):
    """Print section header"""
    print("\n" + "=" * 70)
    print(f"  {title}")
    print("=" * 70)


def demo_level_solve():
    """Implicit model against the explicit p-norm"""
    print_section("1. Implicit Model vs Closed Form")

    for n in (2.0, 13.0 / 3.0):
        model = make_model('coenergy', make_linear_curve(2.0), make_linear_curve(1.0), n)
        closed = PNormModel('coenergy', (2.0, 1.0), n)
        for point in [(2.0, 1.0), (-3.0, 0.5), (0.0, 4.0)]:
            implicit = solve_level(model, point)
            explicit = pnorm_value(closed, point)
            print(f"   n={n:.4f} h={point}: implicit {implicit:.12f}  closed form {explicit:.12f}")


def demo_material_law():
    """Vector law and differential tensors of a conjugate pair"""
    print_section("2. Material Law and Differential Tensors")

    n = 13.0 / 3.0
    p = conjugate_exponent(n)
    coenergy = make_model('coenergy', make_linear_curve(2.0), make_linear_curve(1.0), n)
    energy = make_model('energy', make_linear_curve(2.0), make_linear_curve(1.0), p)
    print(f"\n   Exponents: n = {n:.6f}, p = n/(n-1) = {p:.6f}")

    h = (1.5, 0.8)
    result = evaluate(coenergy, h, with_hessian=True)
    print(f"   h = {h}")
    print(f"   w*(h) = {result.level:.8f}")
    print(f"   b(h)  = ({result.gradient[0]:.8f}, {result.gradient[1]:.8f})")
    print(f"   mu'   = {[round(v, 8) for v in result.hessian.to_list()]}")

    mu, nu, error = differential_tensor_pair(coenergy, energy, h)
    print(f"   nu'(b(h)) = {[round(v, 8) for v in nu.to_list()]}")
    print(f"   max |mu' nu' - I| = {error:.2e}")


def demo_figures():
    """Contours, loci and the hard axis"""
    print_section("3. Contours, Loci and Hard Axis")

    for n in (2.0, 13.0 / 3.0):
        model = make_model('coenergy', make_linear_curve(2.0), make_linear_curve(1.0), n)
        contour = trace_contour(model, 0.5, samples=8)
        radii = ', '.join(f"{r:.4f}" for r in contour.radii)
        print(f"\n   n={n:.4f} contour at 0.5, radii: {radii}")

        energy = make_model('energy', make_linear_curve(2.0), make_linear_curve(1.0), conjugate_exponent(n))
        pair = ModelPair(coenergy=model, energy=energy)
        locus = locus_constant_induction(pair, 1.0, samples=8)
        print(f"   |h| along the |b|=1 locus: {', '.join(f'{r:.4f}' for r in locus.radii)}")

        result = hard_axis(pair, 1.0)
        print(f"   hard axis: phi = {result.angle:.5f} rad, |h| = {result.field_magnitude:.5f}")


def demo_duality():
    """Grid Legendre transform against the closed-form conjugate"""
    print_section("4. Convex Duality")

    energy = PNormModel('energy', (2.0, 1.0), 13.0 / 10.0)
    coenergy = energy.conjugate()
    for h in [(1.0, 1.0), (-0.5, 1.5)]:
        oracle = legendre_oracle(energy, h, resolution=401)
        exact = pnorm_value(coenergy, h)
        print(f"   h={h}: grid sup {oracle:.6f}  conjugate {exact:.6f}")


def demo_measured_curves():
    """Tabulated curves, proportional axes and a variable exponent"""
    print_section("5. Measured Curves and Variable Exponents")

    h = np.linspace(0.0, 5.0, 12)
    samples1 = np.stack([h, 1.6 * np.tanh(h)], axis=1)
    samples2 = np.stack([h, 1.6 * np.tanh(h / 2.0)], axis=1)
    curve1 = make_tabulated_curve(samples1)
    curve2 = make_tabulated_curve(samples2)

    model = make_model('coenergy', curve1, curve2, 3.0)
    print(f"\n   Tabulated axes, n=3: w*(1, 1) = {solve_level(model, (1.0, 1.0)):.8f}")
    print(f"   Axis reproduction: w*(2, 0) = {solve_level(model, (2.0, 0.0)):.10f}, "
          f"w*_1(2) = {float(curve1.coenergy(2.0)):.10f}")

    special = SpecialModel.from_profiles(
        EnergyProfile(make_linear_curve(2.0)),
        EnergyProfile(make_linear_curve(1.0)),
        3.0,
    )
    print(f"   Proportional axes (lam={special.lam:.4f}): value at (2, 1) = {special_value(special, (2.0, 1.0)):.10f}")

    rule = ExponentRule.tabulated([[0.1, 2.0], [1.0, 3.0], [5.0, 4.0]])
    variable = make_model('coenergy', curve1, curve2, rule)
    screened = 'flagged' if variable.screening.flagged else 'monotone'
    print(f"   Variable exponent screen: {variable.screening.checked} points, {screened}")
    report = convexity_scan(variable, (-2.0, 2.0, -2.0, 2.0), grid=21, triples=500)
    print(f"   Convexity scan: min eigenvalue {report.min_eigenvalue:.4e}, convex={report.convex}")


def main():
    """Run all demonstrations"""
    logging.basicConfig(level=logging.INFO)

    print("\n" + "=" * 70)
    print("  Anisotropic Material Models - Demonstration")
    print("=" * 70)

    try:
        demo_level_solve()
        demo_material_law()
        demo_figures()
        demo_duality()
        demo_measured_curves()

        print("\n" + "=" * 70)
        print("  All Demonstrations Completed!")
        print("=" * 70)
        print("\nTo run the HTTP service:")
        print("  python api/app.py")
        print("\nTo use the command line:")
        print("  python -m cli eval --model fixtures/lin_n2.json --point 2,1")
        print("\nTo run tests:")
        print("  python tests.py")
        print()

    except Exception as e:
        print(f"\nError: {e}")
        import traceback
        traceback.print_exc()


if __name__ == '__main__':
    main()
