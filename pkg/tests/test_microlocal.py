import cmath
import math

import numpy as np
import pytest

from interface_lab import microlocal as ml


def cov(xi1, xi2, tau):
    return ml.BoundaryCovector(xi1, xi2, tau)


class TestClassify:
    def test_hyperbolic_hyperbolic(self, canonical):
        label = ml.classify(cov(1, 0, -3), canonical)
        assert (label.solid_region, label.fluid_region) == ("hyperbolic", "hyperbolic")
        assert label.tau_sign == "-"

    def test_mixed_elliptic(self, canonical):
        label = ml.classify(cov(1, 0, -1.2), canonical)
        assert label.solid_region == "mixed"    # 4 > 1.44 > 1
        assert label.fluid_region == "elliptic"  # 0.64 < 1

    def test_glancing_rejected_with_speed(self, canonical):
        with pytest.raises(ml.GlancingRejection) as exc:
            ml.classify(cov(1, 0, -2), canonical)
        assert exc.value.speed == "c_p"
        assert "p-glancing" in str(exc.value)

    def test_rotation_invariance(self, canonical, rng):
        for _ in range(100):
            r = rng.uniform(0.2, 3.0)
            s = rng.uniform(0.05, 20.0)
            theta = rng.uniform(0, 2 * math.pi)
            tau = -r * math.sqrt(s)
            try:
                a = ml.classify(cov(r, 0, tau), canonical)
                b = ml.classify(cov(r * math.cos(theta), r * math.sin(theta), tau),
                                canonical)
            except ml.GlancingRejection:
                continue
            assert a == b

    def test_partition_is_exhaustive(self, canonical, rng):
        solid_seen, fluid_seen = set(), set()
        for _ in range(500):
            xi1 = 10 ** rng.uniform(-1, 1)
            tau = -(10 ** rng.uniform(-1, 1))
            try:
                label = ml.classify(cov(xi1, 0, tau), canonical)
            except ml.GlancingRejection:
                continue
            solid_seen.add(label.solid_region)
            fluid_seen.add(label.fluid_region)
        assert solid_seen == {"hyperbolic", "mixed", "elliptic"}
        assert fluid_seen == {"hyperbolic", "elliptic"}


class TestVerticalWavenumbers:
    def test_all_propagating(self, canonical):
        w = ml.vertical_wavenumbers(cov(1, 0, -3), canonical)
        assert w.xi3_p == pytest.approx(math.sqrt(9 / 4 - 1))
        assert w.xi3_s == pytest.approx(math.sqrt(8))
        assert w.xi3_f == pytest.approx(math.sqrt(3))

    def test_mixed_branches(self, canonical):
        w = ml.vertical_wavenumbers(cov(1, 0, -1.2), canonical)
        assert w.xi3_s == pytest.approx(math.sqrt(0.44))
        assert w.xi3_p == pytest.approx(0.8j)
        assert w.xi3_f == pytest.approx(0.6j)

    def test_fully_evanescent(self, canonical):
        w = ml.vertical_wavenumbers(cov(1, 0, -0.5), canonical)
        for val in (w.xi3_s, w.xi3_p, w.xi3_f):
            assert val.real == 0.0 and val.imag > 0.0

    def test_glancing_error(self, canonical):
        with pytest.raises(ml.GlancingRejection):
            ml.vertical_wavenumbers(cov(1, 0, -1.0), canonical)

    def test_branch_continuity_toward_glancing(self, canonical):
        # |xi3_p| -> 0 approaching tau^2 = c_p^2 xi1^2 from both sides
        eps = 1e-9
        taus = -2.0 * (1.0 + np.geomspace(1e-3, 1e-7, 9))
        mags = [abs(ml.vertical_wavenumber(cov(1, 0, float(t)), 2.0, eps))
                for t in taus]
        assert all(np.diff(mags) < 0)
        assert mags[-1] < 1e-3
        taus = -2.0 * (1.0 - np.geomspace(1e-3, 1e-7, 9))
        mags = [abs(ml.vertical_wavenumber(cov(1, 0, float(t)), 2.0, eps))
                for t in taus]
        assert all(np.diff(mags) < 0)


class TestFrames:
    def test_axis_aligned_rotation(self):
        frame = ml.rotate_to_frame(cov(0, 2, -3))
        assert frame.covector.xi1 == pytest.approx(2.0)
        assert frame.covector.xi2 == 0.0
        assert frame.covector.tau == -3.0
        assert (frame.cos, frame.sin) == pytest.approx((0.0, 1.0))

    def test_norm_reduction(self):
        frame = ml.rotate_to_frame(cov(3, 4, -7))
        assert frame.covector.xi1 == pytest.approx(5.0)
        assert frame.covector.tau == -7.0

    def test_round_trip(self, rng):
        for _ in range(200):
            xi1, xi2 = rng.normal(size=2)
            frame = ml.rotate_to_frame(cov(xi1, xi2, -1.0))
            rot = frame.rotation()
            back = rot.T @ np.array([frame.covector.xi1, 0.0])
            assert np.allclose(back, [xi1, xi2], rtol=1e-14, atol=1e-14)
            v = rng.normal(size=3) + 1j * rng.normal(size=3)
            w = ml.rotate_vector_back(frame, ml.rotate_vector_to_frame(frame, v))
            assert np.max(np.abs(w - v)) <= 1e-14 * np.max(np.abs(v))

    def test_zero_tangential_is_identity(self):
        frame = ml.rotate_to_frame(cov(0.0, 0.0, -1.0))
        assert (frame.cos, frame.sin) == (1.0, 0.0)


def test_evanescent_built_without_complex_sqrt(canonical):
    # the evanescent value is exactly i*sqrt(positive real): imaginary part
    # positive, real part exactly zero, no branch-cut artifacts
    w = ml.vertical_wavenumber(cov(1, 0, -0.5), canonical.c_s)
    assert w.real == 0.0
    assert w.imag == math.sqrt(1 - 0.25)
    assert w == 1j * math.sqrt(0.75)
    assert cmath.isclose(w * w, -(1 - 0.25))
