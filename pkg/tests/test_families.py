import json
import math

import numpy as np
import pytest

from sepsurf.expr import EvalDomainError, Func1D
from sepsurf.families import (
    ConicalPower,
    DegenerateSurfaceError,
    ExpCylinder,
    GeneralizedCone,
    InvalidFamilyError,
    PRESETS,
    RightCylinder,
    RotationalCGC,
    RotationalParabolic,
    TabulatedFunc1D,
    Translation,
    admissible_box,
    build_surface,
    family_from_json,
    family_to_json,
    preset_box,
    preset_surface,
    rotational_profile,
)
from sepsurf.geometry import curvature_batch
from sepsurf.verify import collect_samples


# -- construction of the showcase surfaces ------------------------------------------


def test_generalized_cone_is_product_surface():
    # p=2, q=-1, unit coefficients: the zero set is x^2 = y z on the positive chart
    surf = build_surface(GeneralizedCone(p=2.0, m=(1, 1, 1)))
    for x, y in ((1.2, 0.9), (0.7, 1.4), (1.0, 1.0)):
        z = x * x / y
        assert abs(surf.value((x, y, z))) <= 1e-12


def test_exp_cylinder_equation():
    surf = build_surface(ExpCylinder(m=(1, 1, 1), n=(-1, 1, 1)))
    x, y = 1.0, 0.3
    z = math.log(math.exp(x) - math.exp(y))
    assert abs(surf.value((x, y, z))) <= 1e-12


def test_conical_power_reciprocal_sum():
    # k=2 gives exponent -1: 1/x + 1/y + 1/z = 0 with z on the negative chart
    surf = build_surface(ConicalPower(k=2.0, m=(1, 1, 1)))
    for x, y in ((1.0, 1.0), (0.8, 1.6)):
        z = -1.0 / (1.0 / x + 1.0 / y)
        assert abs(surf.value((x, y, z))) <= 1e-12
    assert surf.h.contains(-0.5) and not surf.h.contains(0.5)


def test_conical_power_non_integer_exponent():
    # k=-1 gives exponent 1/2: sqrt(x) + sqrt(y) = sqrt(z), a flat cone
    spec = ConicalPower(k=-1.0, m=(1, 1, 1))
    surf = build_surface(spec)
    x, y = 1.0, 0.25
    z = (math.sqrt(x) + math.sqrt(y)) ** 2
    assert abs(surf.value((x, y, z))) <= 1e-12


def test_right_cylinder_constant_component():
    spec = RightCylinder(
        f=Func1D.parse("cosh(x)"), g=Func1D.parse("y^2", "y"), a=-3.0, plane="z")
    surf = build_surface(spec)
    jet = surf.h.jet3(0.37)
    assert jet.as_tuple() == (-3.0, 0.0, 0.0, 0.0)
    y = math.sqrt(3.0 - math.cosh(0.5))
    assert abs(surf.value((0.5, y, 123.0))) <= 1e-12


def test_right_cylinder_other_planes():
    spec = RightCylinder(
        f=Func1D.parse("y^2", "y"), g=Func1D.parse("z^2", "z"), a=-1.0, plane="x")
    surf = build_surface(spec)
    assert abs(surf.value((99.0, 0.6, 0.8))) <= 1e-12


def test_translation_surface_graph():
    surf = build_surface(Translation(a=0.75, g=Func1D.parse("y^2", "y")))
    x, y = 0.4, -1.1
    assert abs(surf.value((x, y, 0.75 * x + y * y))) <= 1e-12


def test_rotational_parabolic_completing_square():
    spec = RotationalParabolic(a=1.0, b=0.0, c=2.0, h=Func1D.parse("z^4+3", "z"))
    surf = build_surface(spec)
    x, y, z = 0.5, 1.0, 0.9
    expected = x * x + x + y * y + 2.0 - (z ** 4 + 3)
    assert surf.value((x, y, z)) == pytest.approx(expected, abs=1e-12)


# -- parameter validation --------------------------------------------------------------


def test_exp_cylinder_same_sign_rejected():
    with pytest.raises(InvalidFamilyError):
        ExpCylinder(m=(1, 1, 1), n=(1, 2, 3))


def test_translation_zero_slope_rejected():
    with pytest.raises(InvalidFamilyError):
        Translation(a=0.0, g=Func1D.parse("y^2", "y"))


def test_generalized_cone_degenerate_powers_rejected():
    with pytest.raises(InvalidFamilyError):
        GeneralizedCone(p=0.0, m=(1, 1, 1))
    with pytest.raises(InvalidFamilyError):
        GeneralizedCone(p=1.0, m=(1, 1, 1))
    with pytest.raises(InvalidFamilyError):
        GeneralizedCone(p=2.0, m=(1, 0, 1))


def test_conical_power_k_validation():
    with pytest.raises(InvalidFamilyError):
        ConicalPower(k=0.0, m=(1, 1, 1))
    with pytest.raises(InvalidFamilyError):
        ConicalPower(k=1.0, m=(1, 1, 1))
    with pytest.raises(InvalidFamilyError):
        ConicalPower(k=2.0, m=(1, 1, 1), signs=(1, 1, 1))


def test_conical_power_even_exponent_degenerates():
    # k = (2n-1)/(2n) makes the exponent an even integer: only the apex
    with pytest.raises(DegenerateSurfaceError):
        build_surface(ConicalPower(k=0.5, m=(1, 1, 1)))
    # negative even exponent: empty zero set
    with pytest.raises(DegenerateSurfaceError):
        build_surface(ConicalPower(k=1.5, m=(1, 1, 1)))


def test_conical_power_even_exponent_with_signs_is_a_cone():
    # explicit mixed signs rescue the even exponent: x^2 + y^2 = z^2
    spec = ConicalPower(k=0.5, m=(1, 1, 1), signs=(1, 1, -1))
    surf = build_surface(spec)
    assert abs(surf.value((0.6, 0.8, 1.0))) <= 1e-12


def test_rotational_cgc_validation():
    with pytest.raises(InvalidFamilyError):
        RotationalCGC(K=0.0, r0=1.0)
    with pytest.raises(InvalidFamilyError):
        RotationalCGC(K=1.0, r0=-1.0)
    with pytest.raises(InvalidFamilyError):
        RotationalCGC(K=1.0, r0=1.0, dr0=1.0)


def test_profile_step_bound_enforced():
    with pytest.raises(InvalidFamilyError):
        rotational_profile(1.0, 1.0, 0.0, arc_span=3.0, step=0.01)


# -- the rotational profile -------------------------------------------------------------


def test_profile_recovers_the_sphere():
    tab = rotational_profile(1.0, 1.0, 0.0)
    zs = np.linspace(tab.domain[0] + 1e-6, tab.domain[1] - 1e-6, 500)
    worst = np.max(np.abs(tab.value_array(zs) - (zs * zs - 1.0)))
    assert worst <= 1e-6
    assert tab.truncated  # |r'| -> 1 at the poles before the arc span ends


def test_profile_energy_conserved():
    for K, r0, dr0 in ((1.0, 0.5, 0.0), (-1.0, 0.5, 0.0), (0.8, 0.6, 0.15)):
        tab = rotational_profile(K, r0, dr0)
        r, p = tab.profile_nodes["r"], tab.profile_nodes["dr"]
        e0 = dr0 * dr0 + K * r0 * r0
        assert np.max(np.abs(p * p + K * r * r - e0)) <= 1e-8


def test_profile_negative_curvature_band():
    spec = RotationalCGC(K=-1.0, r0=0.5, dr0=0.0)
    surf = build_surface(spec)
    pts = collect_samples(surf, admissible_box(spec), 400, seed=11)
    K = curvature_batch(surf, pts)
    K = K[np.isfinite(K)]
    assert np.max(np.abs(K - (-1.0))) <= 1e-4


def test_tabulated_jets_match_differences():
    tab = rotational_profile(-1.0, 0.5, 0.0)
    zs = np.linspace(tab.domain[0] * 0.8, tab.domain[1] * 0.8, 40)
    h = 1e-5
    for z in zs:
        j = tab.jet3(float(z))
        d1 = (tab.value(z + h) - tab.value(z - h)) / (2 * h)
        d2 = (tab.value(z + h) - 2 * tab.value(z) + tab.value(z - h)) / h ** 2
        assert j.d1 == pytest.approx(d1, rel=1e-7, abs=1e-7)
        assert j.d2 == pytest.approx(d2, rel=1e-4, abs=1e-4)


def test_tabulated_outside_domain_errors():
    tab = rotational_profile(1.0, 1.0, 0.0)
    with pytest.raises(EvalDomainError):
        tab.value(tab.domain[1] + 1.0)


def test_tabulated_breakpoints_must_increase():
    with pytest.raises(ValueError):
        TabulatedFunc1D(np.array([0.0, 0.0, 1.0]), np.zeros(3), np.zeros(3), np.zeros(3))


# -- admissible boxes ---------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_preset_boxes_contain_points(name):
    surf = preset_surface(name)
    pts = collect_samples(surf, preset_box(name), 200, seed=5)
    assert len(pts) >= 200
    assert np.max(np.abs(surf.value_arrays(pts))) <= 1e-9


def test_admissible_box_generalized_cone_unit_chart():
    box = admissible_box(GeneralizedCone(p=2.0, m=(1, 1, 1)))
    assert box == (0.5, 2.0, 0.5, 2.0, 0.5, 2.0)


def test_admissible_box_conical_chart_signs():
    # x and y bases positive, the z chart on the negative side
    box = admissible_box(ConicalPower(k=2.0, m=(1, 1, 1)))
    assert box[0] > 0 and box[2] > 0
    assert box[5] < 0


def test_admissible_box_fallback_families():
    spec = RotationalCGC(K=1.0, r0=0.55, dr0=0.0)
    box = admissible_box(spec)
    surf = build_surface(spec)
    pts = collect_samples(surf, box, 100, seed=5)
    assert len(pts) >= 100


# -- serialization ------------------------------------------------------------------------


@pytest.mark.parametrize("spec", [
    RightCylinder(f=Func1D.parse("cosh(x)"), g=Func1D.parse("y^2", "y"), a=-3.0, plane="z"),
    Translation(a=0.75, g=Func1D.parse("y^2+sin(y)", "y")),
    RotationalParabolic(a=0.4, b=-0.2, c=0.0, h=Func1D.parse("(0.8*z+2)^2-0.05", "z")),
    RotationalCGC(K=-1.0, r0=0.5, dr0=0.1),
    GeneralizedCone(p=2.0, m=(1, 1, 1)),
    ExpCylinder(m=(1, 1, 1), n=(-1, 1, 1)),
    ConicalPower(k=2.0, m=(1, 1, 1)),
    ConicalPower(k=-0.7, m=(1.5, -1.0, 2.0), n=(0.1, 0.0, -0.2), signs=(1, -1, 1)),
])
def test_family_json_round_trip(spec):
    doc = json.loads(json.dumps(family_to_json(spec)))
    again = family_from_json(doc)
    assert family_to_json(again) == family_to_json(spec)


def test_family_json_validation():
    with pytest.raises(InvalidFamilyError):
        family_from_json({"family": "no-such-family", "params": {}})
    with pytest.raises(InvalidFamilyError):
        family_from_json({"family": "generalized-cone",
                          "params": {"p": 2.0, "q": 0.5, "m": [1, 1, 1]}})


# -- geometric family properties -------------------------------------------------------------


def test_cone_apex_scaling():
    spec = GeneralizedCone(p=2.0, m=(1, 1, 1), n=(0.2, -0.1, 0.3))
    surf = build_surface(spec)
    pts = collect_samples(surf, admissible_box(spec), 100, seed=3)[:50]
    apex = np.array(spec.apex)
    for t in (0.5, 2.0):
        q = apex + t * (pts - apex)
        vals = surf.value_arrays(q)
        good = np.isfinite(vals)
        assert np.any(good)
        assert np.max(np.abs(vals[good])) <= 1e-9


def test_exp_cylinder_ruling():
    spec = ExpCylinder(m=(1.0, 0.8, -1.2), n=(-0.9, 1.4, 0.7))
    surf = build_surface(spec)
    pts = collect_samples(surf, admissible_box(spec), 100, seed=3)[:50]
    d = np.array(spec.generator)
    for t in (-1.0, -0.5, 0.5, 1.0):
        vals = surf.value_arrays(pts + t * d)
        assert np.max(np.abs(vals)) <= 1e-9
