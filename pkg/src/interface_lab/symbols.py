"""Principal-symbol objects at the interface.

Three families, each in the flavors admitted by the covector's region:

  * acoustic DtN scalars for the fluid half-space (order 1),
  * 3x3 potential-to-trace matrices U mapping potential amplitudes
    (b1_s, b2_s, b_p) to the Dirichlet trace of the elastic wave (order 1),
  * 3x3 potential-to-traction matrices M mapping the same amplitudes to
    i times the traction trace (order 2); the i factor makes the entries
    real in the fully hyperbolic case.

Matrices carry literal xi1 and xi2 entries, valid at a point where the
metric is Euclidean; solving happens in the reduced frame (xi2 = 0), and
the general-frame path exists to exercise rotation covariance.

tau > 0 is handled by conjugating the value at (xi', -tau), matching the
solution-level conjugation convention used by the interface solvers.
"""

from __future__ import annotations

import math

import numpy as np

from .media import MaterialPoint
from .microlocal import (
    DEFAULT_EPS_GLANCING,
    ELLIPTIC,
    HYPERBOLIC,
    MIXED,
    BoundaryCovector,
    classify,
    vertical_wavenumber,
)

OUTGOING = "outgoing"
INCOMING = "incoming"
MIXED_OUTGOING = "mixed_outgoing"
MIXED_INCOMING = "mixed_incoming"
EVANESCENT = "evanescent"

SOLID_KINDS = (OUTGOING, INCOMING, MIXED_OUTGOING, MIXED_INCOMING, EVANESCENT)
FLUID_FLAVORS = (OUTGOING, INCOMING, EVANESCENT)

_SOLID_REGION_FOR_KIND = {
    OUTGOING: HYPERBOLIC,
    INCOMING: HYPERBOLIC,
    MIXED_OUTGOING: MIXED,
    MIXED_INCOMING: MIXED,
    EVANESCENT: ELLIPTIC,
}


class FlavorMismatch(ValueError):
    """Requested symbol flavor is incompatible with the covector's region."""


def _neg_tau(cov: BoundaryCovector) -> BoundaryCovector:
    return BoundaryCovector(cov.xi1, cov.xi2, -cov.tau)


def _solid_wavenumbers(kind: str, cov: BoundaryCovector, mat: MaterialPoint,
                       eps_g: float) -> tuple[complex, complex]:
    """(xi3_s, xi3_p) with the sign/branch prescribed by the kind."""
    xs = vertical_wavenumber(cov, mat.c_s, eps_g, "c_s")
    xp = vertical_wavenumber(cov, mat.c_p, eps_g, "c_p")
    if kind == INCOMING:
        return -xs, -xp
    if kind == MIXED_INCOMING:
        return -xs, xp
    return xs, xp  # outgoing, mixed_outgoing, evanescent


def _check_solid_kind(kind: str, cov: BoundaryCovector, mat: MaterialPoint,
                      eps_g: float) -> None:
    if kind not in SOLID_KINDS:
        raise ValueError(f"unknown solid symbol kind {kind!r}")
    label = classify(cov, mat, eps_g)
    want = _SOLID_REGION_FOR_KIND[kind]
    if label.solid_region != want:
        raise FlavorMismatch(
            f"solid kind {kind!r} requires the {want} region, covector is "
            f"{label.solid_region}")


def acoustic_dtn_symbol(flavor: str, cov: BoundaryCovector, mat: MaterialPoint,
                        eps_g: float = DEFAULT_EPS_GLANCING) -> complex:
    """Principal symbol of the fluid Dirichlet-to-Neumann map.

    outgoing -> +i xi3_f, incoming -> -i xi3_f (hyperbolic region);
    evanescent -> -sqrt(|xi'|^2 - c_f^-2 tau^2), a negative real (elliptic).
    """
    if flavor not in FLUID_FLAVORS:
        raise ValueError(f"unknown acoustic flavor {flavor!r}")
    if cov.tau > 0:
        return complex(np.conj(acoustic_dtn_symbol(flavor, _neg_tau(cov), mat, eps_g)))
    label = classify(cov, mat, eps_g)
    if flavor == EVANESCENT:
        if label.fluid_region != ELLIPTIC:
            raise FlavorMismatch("evanescent acoustic symbol requires the fluid "
                                 f"elliptic region, covector is {label.fluid_region}")
        xi_sq = cov.xi1 ** 2 + cov.xi2 ** 2
        return complex(-math.sqrt(xi_sq - (cov.tau / mat.c_f) ** 2), 0.0)
    if label.fluid_region != HYPERBOLIC:
        raise FlavorMismatch(f"{flavor} acoustic symbol requires the fluid "
                             f"hyperbolic region, covector is {label.fluid_region}")
    xi3_f = vertical_wavenumber(cov, mat.c_f, eps_g, "c_f")
    return 1j * xi3_f if flavor == OUTGOING else -1j * xi3_f


def potential_map_symbol(kind: str, cov: BoundaryCovector, mat: MaterialPoint,
                         eps_g: float = DEFAULT_EPS_GLANCING) -> np.ndarray:
    """3x3 potential-to-trace matrix for the requested kind."""
    if cov.tau > 0:
        return np.conj(potential_map_symbol(kind, _neg_tau(cov), mat, eps_g))
    _check_solid_kind(kind, cov, mat, eps_g)
    xs, xp = _solid_wavenumbers(kind, cov, mat, eps_g)
    x1, x2 = cov.xi1, cov.xi2
    return np.array([
        [0.0, -xs, x1],
        [xs, 0.0, x2],
        [-x2, x1, xp],
    ], dtype=complex)


def traction_map_symbol(kind: str, cov: BoundaryCovector, mat: MaterialPoint,
                        eps_g: float = DEFAULT_EPS_GLANCING) -> np.ndarray:
    """3x3 potential-to-traction matrix (i times the traction trace)."""
    if cov.tau > 0:
        return np.conj(traction_map_symbol(kind, _neg_tau(cov), mat, eps_g))
    _check_solid_kind(kind, cov, mat, eps_g)
    xs, xp = _solid_wavenumbers(kind, cov, mat, eps_g)
    x1, x2 = cov.xi1, cov.xi2
    mu = mat.solid.mu_s
    rho_tau2 = mat.solid.rho_s * cov.tau ** 2
    return np.array([
        [-mu * x1 * x2, mu * (2 * x1 ** 2 + x2 ** 2) - rho_tau2, 2 * mu * x1 * xp],
        [-mu * (x1 ** 2 + 2 * x2 ** 2) + rho_tau2, mu * x1 * x2, 2 * mu * x2 * xp],
        [-2 * mu * x2 * xs, 2 * mu * x1 * xs, -2 * mu * (x1 ** 2 + x2 ** 2) + rho_tau2],
    ], dtype=complex)


def normal_trace_row(kind: str, cov: BoundaryCovector, mat: MaterialPoint,
                     eps_g: float = DEFAULT_EPS_GLANCING) -> np.ndarray:
    """Row symbol of nu . U for the interface normal nu = -e3."""
    return -potential_map_symbol(kind, cov, mat, eps_g)[2, :]
