"""Independent oracles used by the tests.

Everything here is built from first principles on explicit exponential
plane-wave solutions in homogeneous half-spaces: displacement fields from
curl/grad potentials, Cauchy stress, transmission-condition residuals,
time-averaged energy flux, and the two-fluid limit system.  None of it
reuses the library's symbol matrices or case systems.
"""

from __future__ import annotations

import math

import numpy as np

from interface_lab import microlocal


def potential_to_displacement(xi):
    """u = -i curl(q1, q2, 0) - i grad(q_p) for a single plane wave."""
    x1, x2, x3 = xi
    return np.array([[0, -x3, x1], [x3, 0, x2], [-x2, x1, x3]], dtype=complex)


def cauchy_stress(lam, mu, xi, a):
    xi = np.asarray(xi, dtype=complex)
    a = np.asarray(a, dtype=complex)
    div = 1j * np.dot(xi, a)
    return lam * div * np.eye(3) + mu * 1j * (np.outer(xi, a) + np.outer(a, xi))


def branch_wavevectors(case, mat, cov):
    """Plane-wave branches (solid list, fluid list) for one case solution.

    Solid entries are (wavevector, selector) with selector picking the
    shear pair or the pressure slot; the shared evanescent p amplitude of
    the mixed cases enters with weight 2 (it multiplies both the incoming
    and outgoing family columns of the system).
    """
    x1, tau = cov.xi1, cov.tau
    xs = microlocal.vertical_wavenumber(cov, mat.c_s, name="c_s")
    xp = microlocal.vertical_wavenumber(cov, mat.c_p, name="c_p")
    xf = microlocal.vertical_wavenumber(cov, mat.c_f, name="c_f")
    return x1, tau, xs, xp, xf


def transmission_residual(case, mat, cov, incoming, outgoing):
    """Max pointwise residual of the two transmission conditions at x3 = 0,
    relative to the size of the individual terms entering them."""
    x1, tau, xs, xp, xf = branch_wavevectors(case, mat, cov)
    lam, mu = mat.solid.lambda_s, mat.solid.mu_s
    rho_f = mat.fluid.rho_f
    solid = [((x1, 0, -xs), (incoming.b1_s, incoming.b2_s, 0)),
             ((x1, 0, xs), (outgoing.b1_s, outgoing.b2_s, 0))]
    if case == "HH":
        solid.append(((x1, 0, -xp), (0, 0, incoming.b_p)))
        solid.append(((x1, 0, xp), (0, 0, outgoing.b_p)))
    elif case == "MH":
        solid.append(((x1, 0, xp), (0, 0, 2.0 * outgoing.b_p)))
    else:
        raise ValueError("plane-wave oracle covers the HH and MH cases")
    fluid = [((x1, 0, xf), incoming.b_f), ((x1, 0, -xf), outgoing.b_f)]
    du_dt3 = 0j
    sig_col = np.zeros(3, dtype=complex)
    scale = 0.0
    for xi, q in solid:
        a = potential_to_displacement(xi) @ np.asarray(q, dtype=complex)
        du_dt3 += 1j * tau * a[2]
        sig = cauchy_stress(lam, mu, xi, a)
        sig_col += sig[:, 2]
        scale = max(scale, float(np.max(np.abs(sig))), abs(tau * a[2]))
    dpsi_3 = 0j
    psi_t = 0j
    for xi, b in fluid:
        dpsi_3 += 1j * xi[2] * b
        psi_t += 1j * tau * b
        scale = max(scale, abs(xi[2] * b) / rho_f, abs(tau * b))
    # nu . d_t u = -rho_f^-1 d_nu psi with nu = -e3
    kinematic = abs(-du_dt3 - dpsi_3 / rho_f)
    # N(u) = -d_t psi nu: tangential tractions vanish, normal matches
    dynamic = float(np.max(np.abs(
        np.array([-sig_col[0], -sig_col[1], -sig_col[2] - psi_t]))))
    return max(kinematic, dynamic) / scale


def solid_branch_flux(lam, mu, tau, xi, q):
    """Time-averaged x3 energy flux of one propagating elastic branch."""
    a = potential_to_displacement(xi) @ np.asarray(q, dtype=complex)
    sig = cauchy_stress(lam, mu, xi, a)
    v = 1j * tau * a
    return -0.5 * float(np.real(np.dot(sig[2, :], np.conj(v))))


def fluid_branch_flux(rho_f, tau, xi3, b):
    """Time-averaged x3 energy flux of one propagating acoustic branch."""
    return -0.5 * tau * float(np.real(xi3)) * abs(b) ** 2 / rho_f


def hh_energy_balance(mat, cov, incoming, outgoing):
    """(incoming flux toward interface, outgoing flux away) for HH."""
    x1, tau, xs, xp, xf = branch_wavevectors("HH", mat, cov)
    lam, mu = mat.solid.lambda_s, mat.solid.mu_s
    rho_f = mat.fluid.rho_f
    flux_in = (
        -solid_branch_flux(lam, mu, tau, (x1, 0, -xs.real),
                           (incoming.b1_s, incoming.b2_s, 0))
        - solid_branch_flux(lam, mu, tau, (x1, 0, -xp.real),
                            (0, 0, incoming.b_p))
        + fluid_branch_flux(rho_f, tau, xf.real, incoming.b_f))
    flux_out = (
        solid_branch_flux(lam, mu, tau, (x1, 0, xs.real),
                          (outgoing.b1_s, outgoing.b2_s, 0))
        + solid_branch_flux(lam, mu, tau, (x1, 0, xp.real),
                            (0, 0, outgoing.b_p))
        - fluid_branch_flux(rho_f, tau, -xf.real, outgoing.b_f))
    return flux_in, flux_out


def two_fluid_coefficients(lam2, rho2, rho1, c1, xi1, tau):
    """Reflection/transmission of a fluid-fluid interface, unit incidence.

    Upper medium treated as a fluid with bulk modulus lam2 (the mu -> 0
    limit of the solid), described by the displacement potential
    u = -i grad(q_p); lower fluid by the pressure potential psi.  Imposes
    continuity of normal velocity and pressure on explicit plane waves,
    solved directly as a 2x2 system.  Returns (b_p, b_f_out).
    """
    c2 = math.sqrt(lam2 / rho2)
    xi3p = math.sqrt(tau ** 2 / c2 ** 2 - xi1 ** 2)
    xi3f = math.sqrt(tau ** 2 / c1 ** 2 - xi1 ** 2)
    a = np.array([
        [-tau * xi3p, xi3f / rho1],
        [lam2 * tau / c2 ** 2, 1.0],
    ], dtype=complex)
    rhs = np.array([xi3f / rho1, -1.0], dtype=complex)
    b_p, b_f_out = np.linalg.solve(a, rhs)
    return b_p, b_f_out
