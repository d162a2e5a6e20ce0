import numpy as np
import pytest

from sepsurf.expr import Func1D
from sepsurf.families import (
    Translation,
    admissible_box,
    build_surface,
    preset_box,
    preset_surface,
)
from sepsurf.verify import (
    TooFewPointsError,
    catalog,
    check_constant_K,
    classify,
    collect_samples,
    estimate_structure,
    random_family,
    run_theorem_suite,
)


def _samples(surface, box, n=260, seed=42, axis=None):
    if axis is None:
        axis = getattr(surface, "preferred_axis", 2)
    return collect_samples(surface, box, n, seed=seed, axis=axis)


@pytest.fixture(scope="module")
def entries():
    return {e.name: e for e in catalog(42)}


# -- constancy ---------------------------------------------------------------------


def test_flat_cone_is_zero(entries):
    e = entries["paper-fig1-left"]
    rep = check_constant_K(e.surface, _samples(e.surface, e.box))
    assert rep.is_zero and rep.is_constant


def test_sphere_is_constant_one(entries):
    e = entries["sphere-r1"]
    rep = check_constant_K(e.surface, _samples(e.surface, e.box))
    assert rep.is_constant and not rep.is_zero
    assert rep.K_mean == pytest.approx(1.0, abs=1e-9)


def test_catenoid_not_constant(entries):
    e = entries["catenoid"]
    rep = check_constant_K(e.surface, _samples(e.surface, e.box))
    assert not rep.is_constant and not rep.is_zero


def test_too_few_points():
    s = preset_surface("paper-fig1-left")
    pts = _samples(s, preset_box("paper-fig1-left"))[:10]
    with pytest.raises(TooFewPointsError):
        check_constant_K(s, pts)


def test_zero_implies_constant(entries):
    for e in entries.values():
        rep = check_constant_K(e.surface, _samples(e.surface, e.box, axis=e.axis),
                               tol=1e-4)
        assert not rep.is_zero or rep.is_constant


# -- structure evidence --------------------------------------------------------------


def test_translation_sets_rate_flag():
    surf = build_surface(Translation(a=1.0, g=Func1D.parse("y^2", "y")))
    ev = estimate_structure(surf, _samples(surf, admissible_box(
        Translation(a=1.0, g=Func1D.parse("y^2", "y")))))
    # both the x and z components are linear here
    assert ev.X_const <= 1e-12 and ev.Z_const <= 1e-12
    assert ev.Y_const > 1.0


def test_sphere_pairwise_rates_equal(entries):
    e = entries["sphere-r1"]
    ev = estimate_structure(e.surface, _samples(e.surface, e.box))
    assert ev.pair_XY <= 1e-12 and ev.pair_XZ <= 1e-12 and ev.pair_YZ <= 1e-12
    assert ev.X_const == pytest.approx(4.0)


def test_exp_cylinder_branch_constant(entries):
    e = entries["paper-fig1-middle"]
    ev = estimate_structure(e.surface, _samples(e.surface, e.box))
    assert ev.kappa_estimate == pytest.approx(0.5, abs=1e-12)
    assert ev.kappa_agreement <= 1e-9


# -- classification -------------------------------------------------------------------


def test_classify_presets(entries):
    expected = {
        "paper-fig1-left": ("generalized-cone", 0.0),
        "paper-fig1-middle": ("exp-cylinder", 1.0),
        "paper-fig1-right": ("conical-power", 2.0),
    }
    for name, (label, k) in expected.items():
        e = entries[name]
        res = classify(e.surface, _samples(e.surface, e.box))
        assert res.label == label
        assert res.parameters["k"] == pytest.approx(k, abs=1e-9)


def test_classify_sphere(entries):
    e = entries["sphere-r2"]
    res = classify(e.surface, _samples(e.surface, e.box))
    assert res.label == "rotational-cgc"
    assert res.parameters["K"] == pytest.approx(0.25, rel=1e-8)


def test_classify_cylinder_translation_rotational(entries):
    cases = (
        ("right-cylinder-cosh", "right-cylinder"),
        ("translation-quadratic", "translation"),
        ("rotational-cone", "rotational-flat"),
        ("spindle-K1", "rotational-cgc"),
        ("catenoid", "not-constant-curvature"),
    )
    for name, label in cases:
        e = entries[name]
        res = classify(e.surface, _samples(e.surface, e.box, axis=e.axis))
        assert res.label == label, name


def test_classify_conical_k_recovery():
    rng = np.random.default_rng(99)
    for _ in range(5):
        spec, box = random_family("conical-power", rng)
        surf = build_surface(spec)
        res = classify(surf, _samples(surf, box))
        assert res.label == "conical-power"
        assert res.parameters["k"] == pytest.approx(spec.k, rel=1e-6)


def test_classification_json_shape(entries):
    e = entries["paper-fig1-right"]
    res = classify(e.surface, _samples(e.surface, e.box))
    doc = res.to_json()
    assert set(doc) == {"label", "params", "evidence", "constancy"}
    assert doc["constancy"]["is_zero"] is True


def test_tolerance_monotone(entries):
    e = entries["sphere-r1"]
    pts = _samples(e.surface, e.box)
    seen_pass = False
    for tol in (1e-14, 1e-11, 1e-8, 1e-5, 1e-2):
        rep = check_constant_K(e.surface, pts, tol=tol)
        if seen_pass:
            assert rep.is_constant
        seen_pass = seen_pass or rep.is_constant
    assert seen_pass


# -- suite plumbing ---------------------------------------------------------------------


def test_random_families_build_and_sample():
    rng = np.random.default_rng(4)
    for tag in ("right-cylinder", "translation", "rotational-parabolic",
                "generalized-cone", "exp-cylinder", "conical-power",
                "rotational-cgc"):
        spec, box = random_family(tag, rng)
        surf = build_surface(spec)
        pts = _samples(surf, box, n=80, seed=3)
        assert len(pts) >= 80
        assert np.max(np.abs(surf.value_arrays(pts))) <= 1e-9


def test_classifier_suite_passes():
    rep = run_theorem_suite("classifier", seed=202)
    assert rep.passed, [c.name for c in rep.checks if not c.passed]
    names = [c.name for c in rep.checks]
    assert "classifier-round-trip-mislabels" in names
    assert "contradiction-sentinel-fires" in names


def test_suite_report_json_deterministic():
    a = run_theorem_suite("classifier", seed=7).to_json()
    b = run_theorem_suite("classifier", seed=7).to_json()
    assert a == b


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_theorem_suite("everything")
