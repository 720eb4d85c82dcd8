import math

import numpy as np
import pytest

from interface_lab import symbols as sym
from interface_lab.microlocal import BoundaryCovector
from interface_lab.sampling import sample_case

SQ8 = math.sqrt(8.0)
SQ125 = math.sqrt(1.25)


def cov(xi1, xi2, tau):
    return BoundaryCovector(xi1, xi2, tau)


class TestAcousticDtn:
    def test_outgoing_hyperbolic(self, canonical):
        val = sym.acoustic_dtn_symbol(sym.OUTGOING, cov(1, 0, -3), canonical)
        assert val == pytest.approx(1j * math.sqrt(3.0))

    def test_incoming_is_negated(self, canonical):
        out = sym.acoustic_dtn_symbol(sym.OUTGOING, cov(1, 0, -3), canonical)
        inc = sym.acoustic_dtn_symbol(sym.INCOMING, cov(1, 0, -3), canonical)
        assert inc == -out

    def test_evanescent_negative_real(self, canonical):
        val = sym.acoustic_dtn_symbol(sym.EVANESCENT, cov(1, 0, -1.2), canonical)
        assert val == pytest.approx(-0.6)

    def test_flavor_region_mismatch(self, canonical):
        with pytest.raises(sym.FlavorMismatch):
            sym.acoustic_dtn_symbol(sym.INCOMING, cov(1, 0, -1.2), canonical)
        with pytest.raises(sym.FlavorMismatch):
            sym.acoustic_dtn_symbol(sym.EVANESCENT, cov(1, 0, -3), canonical)


class TestPotentialMap:
    def test_outgoing_rows(self, canonical):
        u = sym.potential_map_symbol(sym.OUTGOING, cov(1, 0, -3), canonical)
        assert np.allclose(u[0], [0.0, -SQ8, 1.0])
        assert np.allclose(u[2], [0.0, 1.0, SQ125])

    def test_incoming_flips_vertical_signs(self, canonical):
        u_out = sym.potential_map_symbol(sym.OUTGOING, cov(1, 0, -3), canonical)
        u_in = sym.potential_map_symbol(sym.INCOMING, cov(1, 0, -3), canonical)
        flip = u_out.copy()
        flip[0, 1] *= -1
        flip[1, 0] *= -1
        flip[2, 2] *= -1
        assert np.allclose(u_in, flip)

    def test_mixed_outgoing_entry(self, canonical):
        u = sym.potential_map_symbol(sym.MIXED_OUTGOING, cov(1, 0, -1.2), canonical)
        assert u[2, 2] == pytest.approx(0.8j)
        # mixed incoming: shear signs flip, evanescent p entry unchanged
        ui = sym.potential_map_symbol(sym.MIXED_INCOMING, cov(1, 0, -1.2), canonical)
        assert ui[2, 2] == pytest.approx(0.8j)
        assert ui[0, 1] == pytest.approx(-u[0, 1])

    def test_kind_region_mismatch(self, canonical):
        with pytest.raises(sym.FlavorMismatch):
            sym.potential_map_symbol(sym.OUTGOING, cov(1, 0, -1.2), canonical)


class TestTractionMap:
    def test_outgoing_entries(self, canonical):
        m = sym.traction_map_symbol(sym.OUTGOING, cov(1, 0, -3), canonical)
        assert m[1, 0] == pytest.approx(8.0)   # -mu xi1^2 + rho tau^2
        assert m[2, 2] == pytest.approx(7.0)   # -2 mu xi1^2 + rho tau^2

    def test_mixed_outgoing_entry(self, canonical):
        m = sym.traction_map_symbol(sym.MIXED_OUTGOING, cov(1, 0, -1.2), canonical)
        assert m[0, 2] == pytest.approx(1.6j)

    def test_evanescent_shear_row_imaginary(self, canonical):
        m = sym.traction_map_symbol(sym.EVANESCENT, cov(0.8, 0.6, -0.5), canonical)
        assert m[2, 0].real == 0.0
        assert m[2, 1].real == 0.0
        assert m[2, 1].imag != 0.0

    def test_evanescent_in_flips_shear_sign(self, canonical):
        # mixed case: in/out differ exactly by the sign of xi3_s
        m_out = sym.traction_map_symbol(sym.MIXED_OUTGOING, cov(1, 0, -1.2), canonical)
        m_in = sym.traction_map_symbol(sym.MIXED_INCOMING, cov(1, 0, -1.2), canonical)
        flip = m_out.copy()
        flip[2, 0] *= -1
        flip[2, 1] *= -1
        assert np.allclose(m_in, flip)


_KIND_FOR_CASE = {"HH": sym.OUTGOING, "MH": sym.MIXED_OUTGOING, "EE": sym.EVANESCENT}


def test_homogeneity_degrees(rng):
    for case, kind in _KIND_FOR_CASE.items():
        for _ in range(25):
            mat, c = sample_case(rng, case)
            lam = 10 ** rng.uniform(-2, 2)
            scaled = cov(lam * c.xi1, lam * c.xi2, lam * c.tau)
            u1 = sym.potential_map_symbol(kind, c, mat)
            u2 = sym.potential_map_symbol(kind, scaled, mat)
            assert np.allclose(u2, lam * u1, rtol=1e-12)
            m1 = sym.traction_map_symbol(kind, c, mat)
            m2 = sym.traction_map_symbol(kind, scaled, mat)
            assert np.allclose(m2, lam ** 2 * m1, rtol=1e-12)
    # acoustic scalar: degree 1
    for case, flavor in (("HH", sym.OUTGOING), ("EE", sym.EVANESCENT)):
        for _ in range(25):
            mat, c = sample_case(rng, case)
            lam = 10 ** rng.uniform(-2, 2)
            scaled = cov(lam * c.xi1, lam * c.xi2, lam * c.tau)
            l1 = sym.acoustic_dtn_symbol(flavor, c, mat)
            l2 = sym.acoustic_dtn_symbol(flavor, scaled, mat)
            assert l2 == pytest.approx(lam * l1, rel=1e-12)


def test_tau_conjugation_symmetry(rng):
    for case, kind in _KIND_FOR_CASE.items():
        for _ in range(25):
            mat, c = sample_case(rng, case)
            pos = cov(c.xi1, c.xi2, -c.tau)
            assert np.allclose(sym.potential_map_symbol(kind, pos, mat),
                               np.conj(sym.potential_map_symbol(kind, c, mat)))
            assert np.allclose(sym.traction_map_symbol(kind, pos, mat),
                               np.conj(sym.traction_map_symbol(kind, c, mat)))


def test_hyperbolic_traction_is_real(canonical, rng):
    # the i factor in the traction map definition makes these entries real
    for _ in range(50):
        mat, c = sample_case(rng, "HH")
        m = sym.traction_map_symbol(sym.OUTGOING, c, mat)
        assert np.max(np.abs(m.imag)) == 0.0


def test_general_frame_entries(canonical):
    # literal xi1, xi2 entries away from the reduced frame
    c = cov(0.6, 0.8, -3.0)
    u = sym.potential_map_symbol(sym.OUTGOING, c, canonical)
    assert u[0, 2] == pytest.approx(0.6)
    assert u[1, 2] == pytest.approx(0.8)
    m = sym.traction_map_symbol(sym.OUTGOING, c, canonical)
    mu = canonical.solid.mu_s
    assert m[0, 0] == pytest.approx(-mu * 0.6 * 0.8)
    assert m[2, 2] == pytest.approx(-2 * mu * 1.0 + 9.0)
