"""Boundary covectors at the interface: frames, region labels, wavenumbers.

A boundary covector (xi1, xi2, tau) lives over a point of the interface; the
interface-tangent metric is Euclidean in the working frame.  All solve paths
reduce to the frame where the tangential covector points along the first
axis (xi2 = 0); rotations map between the general and reduced frames.

Branch conventions (tau < 0 throughout; tau > 0 handled by conjugation at
the solution level):
  propagating   xi3 = sqrt(c^-2 tau^2 - |xi'|^2)        real, >= 0
  evanescent    xi3 = i * sqrt(|xi'|^2 - c^-2 tau^2)    purely imaginary, Im > 0
Evanescent values are built explicitly as i*sqrt(positive) rather than via a
complex square root of a negative number, removing branch-cut ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .media import MaterialPoint

DEFAULT_EPS_GLANCING = 1e-9

HYPERBOLIC = "hyperbolic"
MIXED = "mixed"
ELLIPTIC = "elliptic"


class GlancingRejection(Exception):
    """Covector lies (within tolerance) on a glancing set for one speed."""

    def __init__(self, speed_name: str, detail: str = ""):
        self.speed = speed_name
        msg = f"covector is {speed_name.replace('c_', '')}-glancing"
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class BoundaryCovector:
    """Tangential wavenumbers and frequency covariable (xi1, xi2, tau)."""

    xi1: float
    xi2: float
    tau: float

    def __post_init__(self) -> None:
        if self.xi1 == 0.0 and self.xi2 == 0.0 and self.tau == 0.0:
            raise ValueError("boundary covector must be nonzero")

    @property
    def xi_norm(self) -> float:
        return math.hypot(self.xi1, self.xi2)


@dataclass(frozen=True)
class ReducedFrame:
    """Rotation to the xi2 = 0 frame together with the reduced covector."""

    cos: float
    sin: float
    covector: BoundaryCovector

    def rotation(self) -> np.ndarray:
        return np.array([[self.cos, self.sin], [-self.sin, self.cos]])


@dataclass(frozen=True)
class RegionLabel:
    solid_region: str  # hyperbolic | mixed | elliptic
    fluid_region: str  # hyperbolic | elliptic
    tau_sign: str      # '+' | '-'


@dataclass(frozen=True)
class VerticalWavenumbers:
    """Complex vertical wavenumbers (xi3_s, xi3_p, xi3_f) with branch rules."""

    xi3_s: complex
    xi3_p: complex
    xi3_f: complex


def _glancing_margin(tau_sq: float, q: float, eps_g: float) -> bool:
    return abs(tau_sq - q) <= eps_g * (tau_sq + q)


def classify(cov: BoundaryCovector, mat: MaterialPoint,
             eps_g: float = DEFAULT_EPS_GLANCING) -> RegionLabel:
    """Region label of a covector against the three speeds at the point.

    The comparison tau^2 vs c^2 |xi'|^2 is made with a relative glancing band
    of width eps_g; a covector inside the band for any speed is rejected with
    a GlancingRejection naming that speed.
    """
    tau_sq = cov.tau ** 2
    xi_sq = cov.xi1 ** 2 + cov.xi2 ** 2
    for name, c in (("c_p", mat.c_p), ("c_s", mat.c_s), ("c_f", mat.c_f)):
        if _glancing_margin(tau_sq, c * c * xi_sq, eps_g):
            raise GlancingRejection(name)
    if tau_sq > mat.c_p ** 2 * xi_sq:
        solid = HYPERBOLIC
    elif tau_sq > mat.c_s ** 2 * xi_sq:
        solid = MIXED
    else:
        solid = ELLIPTIC
    fluid = HYPERBOLIC if tau_sq > mat.c_f ** 2 * xi_sq else ELLIPTIC
    return RegionLabel(solid, fluid, "+" if cov.tau > 0 else "-")


def vertical_wavenumber(cov: BoundaryCovector, speed: float,
                        eps_g: float = DEFAULT_EPS_GLANCING,
                        name: str = "c") -> complex:
    """Branch-correct vertical wavenumber for one speed."""
    tau_sq = cov.tau ** 2
    xi_sq = cov.xi1 ** 2 + cov.xi2 ** 2
    disc = tau_sq / speed ** 2 - xi_sq
    if _glancing_margin(tau_sq, speed * speed * xi_sq, eps_g):
        raise GlancingRejection(name)
    if disc > 0.0:
        return complex(math.sqrt(disc), 0.0)
    return complex(0.0, math.sqrt(-disc))


def vertical_wavenumbers(cov: BoundaryCovector, mat: MaterialPoint,
                         eps_g: float = DEFAULT_EPS_GLANCING) -> VerticalWavenumbers:
    """All three vertical wavenumbers, each on its region-dictated branch."""
    return VerticalWavenumbers(
        xi3_s=vertical_wavenumber(cov, mat.c_s, eps_g, "c_s"),
        xi3_p=vertical_wavenumber(cov, mat.c_p, eps_g, "c_p"),
        xi3_f=vertical_wavenumber(cov, mat.c_f, eps_g, "c_f"),
    )


def rotate_to_frame(cov: BoundaryCovector) -> ReducedFrame:
    """Rotation taking (xi1, xi2) to (|xi'|, 0); identity when |xi'| = 0."""
    r = cov.xi_norm
    if r == 0.0:
        return ReducedFrame(1.0, 0.0, BoundaryCovector(0.0, 0.0, cov.tau))
    c, s = cov.xi1 / r, cov.xi2 / r
    return ReducedFrame(c, s, BoundaryCovector(r, 0.0, cov.tau))


def rotate_amplitudes_to_frame(frame: ReducedFrame, b1: complex, b2: complex) -> tuple[complex, complex]:
    """Shear potential pair (b1, b2) expressed in the reduced frame."""
    c, s = frame.cos, frame.sin
    return c * b1 + s * b2, -s * b1 + c * b2


def rotate_amplitudes_back(frame: ReducedFrame, b1: complex, b2: complex) -> tuple[complex, complex]:
    c, s = frame.cos, frame.sin
    return c * b1 - s * b2, s * b1 + c * b2


def rotate_vector_back(frame: ReducedFrame, v) -> np.ndarray:
    """Inverse frame rotation on a 3-component amplitude (identity on the third)."""
    v = np.asarray(v, dtype=complex)
    c, s = frame.cos, frame.sin
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]])


def rotate_vector_to_frame(frame: ReducedFrame, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    c, s = frame.cos, frame.sin
    return np.array([c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2]])
