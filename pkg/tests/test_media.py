import json
import math

import numpy as np
import pytest

import interface_lab as il
from interface_lab import media


def test_solid_speeds_examples():
    assert media.solid_speeds(media.SolidParams(2.0, 1.0, 1.0)) == (1.0, 2.0)
    c_s, c_p = media.solid_speeds(media.SolidParams(1.0, 1.0, 1.0))
    assert c_s == 1.0
    assert c_p == pytest.approx(math.sqrt(3.0), abs=0)


def test_solid_validation_names_field():
    with pytest.raises(ValueError, match="lambda_s must be positive"):
        media.SolidParams(0.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="mu_s"):
        media.SolidParams(1.0, -2.0, 1.0)
    with pytest.raises(ValueError, match="rho_s"):
        media.SolidParams(1.0, 1.0, 0.0)


def test_fluid_speed_examples():
    assert media.fluid_speed(media.FluidParams(2.25, 1.0)) == 1.5
    assert media.fluid_speed(media.FluidParams(1.0, 4.0)) == 0.5
    with pytest.raises(ValueError):
        media.FluidParams(-1.0, 1.0)


def test_speed_ordering_and_scaling(rng):
    for _ in range(200):
        lam, mu, rho = 10.0 ** rng.uniform(-2, 2, size=3)
        c_s, c_p = media.solid_speeds(media.SolidParams(lam, mu, rho))
        assert c_s < c_p
        k = 10.0 ** rng.uniform(-3, 3)
        c_s2, c_p2 = media.solid_speeds(media.SolidParams(k * lam, k * mu, k * rho))
        assert c_s2 == pytest.approx(c_s, rel=1e-15)
        assert c_p2 == pytest.approx(c_p, rel=1e-15)


def test_material_point_derived_speeds(canonical):
    assert (canonical.c_s, canonical.c_p, canonical.c_f) == (1.0, 2.0, 1.5)


def test_profile_reproduces_linear_data():
    prof = media.SampledProfile([(r, 3.0 - 0.5 * r) for r in np.linspace(0, 2, 7)])
    for r in np.linspace(0.0, 2.0, 41):
        assert prof.value(float(r)) == pytest.approx(3.0 - 0.5 * r, rel=1e-14)
        if 0.0 < r < 2.0:
            assert prof.deriv(float(r)) == pytest.approx(-0.5, rel=1e-12)
    assert np.allclose(prof.values(np.linspace(0, 2, 17)),
                       3.0 - 0.5 * np.linspace(0, 2, 17))


def test_profile_validation():
    with pytest.raises(ValueError, match="strictly positive"):
        media.SampledProfile([(0.0, 1.0), (1.0, -1.0)])
    with pytest.raises(ValueError, match="strictly increasing"):
        media.SampledProfile([(0.0, 1.0), (0.0, 2.0)])
    with pytest.raises(ValueError, match="at least two"):
        media.SampledProfile([(0.0, 1.0)])


def test_model_json_roundtrip(tmp_path):
    model = il.canonical_radial_model()
    cfg = {
        "solid": {"lambda_s": 2.0, "mu_s": 1.0, "rho_s": 1.0},
        "fluid": {"lambda_f": 2.25, "rho_f": 1.0},
        "radial": {
            "R_outer": 2.0, "R_core": 1.0,
            "profiles": {
                "c_p": [[float(r), 2.0] for r in np.linspace(1, 2, 5)],
                "c_s": [[float(r), 1.0] for r in np.linspace(1, 2, 5)],
                "c_f": [[float(r), 1.5] for r in np.linspace(0, 1, 5)],
            },
        },
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(cfg))
    mat, radial = media.load_model(str(path))
    assert mat.c_f == model.interface.c_f
    assert radial is not None
    assert radial.c_p_profile.value(1.5) == 2.0
    assert radial.satisfies_cond_g()


def test_interface_material_must_match_profiles():
    mat = il.material_point(2.0, 1.0, 1.0, 2.25, 1.0)  # c_f = 1.5
    rs = np.linspace(1.0, 2.0, 5)
    rf = np.linspace(0.0, 1.0, 5)
    with pytest.raises(ValueError, match="does not match"):
        media.RadialModel(
            2.0, 1.0,
            media.SampledProfile([(r, 2.0) for r in rs]),
            media.SampledProfile([(r, 1.0) for r in rs]),
            media.SampledProfile([(r, 1.4) for r in rf]),  # limit 1.4 != 1.5
            mat)


def test_model_missing_key():
    with pytest.raises(ValueError, match="missing required key"):
        media.model_from_dict({"solid": {"lambda_s": 1, "mu_s": 1, "rho_s": 1}})
