"""Scholte interface waves: secular function, root, kernel mode, speed field.

In the elliptic-elliptic region the transmission system is homogeneous; it
admits nontrivial solutions exactly where its determinant vanishes.  With
z = tau^2/xi1^2 and the xi1^5 prefactor stripped, the vanishing condition is
the scalar secular equation

    S(z) = z^2 rho_s sqrt(1 - z/c_p^2)
           + rho_f^-1 sqrt(1 - z/c_f^2) * ((2 mu_s - rho_s z)^2
             - 4 mu_s^2 sqrt(1 - z/c_s^2) sqrt(1 - z/c_p^2)) = 0.

On (0, min(c_s^2, c_f^2)) all radicands are positive and S is real; it is
negative near 0 and positive at the upper end, so a real simple root -- the
squared Scholte speed -- always exists for positive parameters.  Only this
principal-branch real root is computed; leaky/complex roots are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import interface
from .media import MaterialPoint
from .microlocal import BoundaryCovector


class NoRootFound(Exception):
    """No sign change located in the admissible interval (should not happen)."""


@dataclass(frozen=True)
class ScholteRoot:
    c_sc_sq: float
    residual: float
    bracket: tuple[float, float]
    derivative_estimate: float

    @property
    def c_sc(self) -> float:
        return math.sqrt(self.c_sc_sq)


def secular(z, mat: MaterialPoint):
    """Secular function at trial squared speed z (scalar or array).

    Valid on 0 < z < min(c_s^2, c_f^2), where all three square roots are
    real; outside that interval a ValueError is raised (complex continuation
    is out of scope).
    """
    z_arr = np.asarray(z, dtype=float)
    z_top = min(mat.c_s ** 2, mat.c_f ** 2)
    if np.any(z_arr <= 0.0) or np.any(z_arr >= z_top):
        raise ValueError(
            f"z must lie in the real-branch interval (0, {z_top}); got {z}")
    rho_s, rho_f, mu = mat.solid.rho_s, mat.fluid.rho_f, mat.solid.mu_s
    rp = np.sqrt(1.0 - z_arr / mat.c_p ** 2)
    rs = np.sqrt(1.0 - z_arr / mat.c_s ** 2)
    rf = np.sqrt(1.0 - z_arr / mat.c_f ** 2)
    val = (z_arr ** 2 * rho_s * rp
           + (rf / rho_f) * ((2.0 * mu - rho_s * z_arr) ** 2 - 4.0 * mu * mu * rs * rp))
    return float(val) if np.isscalar(z) or z_arr.ndim == 0 else val


def _secular_scale(z: float, mat: MaterialPoint) -> float:
    rho_s, rho_f, mu = mat.solid.rho_s, mat.fluid.rho_f, mat.solid.mu_s
    rp = math.sqrt(max(1.0 - z / mat.c_p ** 2, 0.0))
    rs = math.sqrt(max(1.0 - z / mat.c_s ** 2, 0.0))
    rf = math.sqrt(max(1.0 - z / mat.c_f ** 2, 0.0))
    return (z ** 2 * rho_s * rp
            + (rf / rho_f) * ((2.0 * mu - rho_s * z) ** 2 + 4.0 * mu * mu * rs * rp))


def find_scholte_speed(mat: MaterialPoint, scan_points: int = 1024,
                       rel_tol: float = 1e-14) -> ScholteRoot:
    """Bracketed root of the secular function: the squared Scholte speed.

    A uniform scan locates the first sign change; a bisection loop with
    secant acceleration refines it.  Simplicity is verified by a centered
    finite difference of the secular function at the root.
    """
    z_top = min(mat.c_s ** 2, mat.c_f ** 2)
    delta = 1e-12 * z_top
    zs = np.linspace(delta, z_top - delta, scan_points)
    vals = secular(zs, mat)
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] <= 0.0)[0]
    if idx.size == 0:
        raise NoRootFound(
            "secular function has no sign change in (0, min(c_s^2, c_f^2))")
    i = int(idx[0])
    lo, hi = float(zs[i]), float(zs[i + 1])
    f_lo, f_hi = float(vals[i]), float(vals[i + 1])
    bracket = (lo, hi)
    for _ in range(200):
        if hi - lo <= rel_tol * z_top:
            break
        # secant proposal, clipped into the bracket; fallback to bisection
        if f_hi != f_lo:
            z_sec = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        else:
            z_sec = 0.5 * (lo + hi)
        if not (lo < z_sec < hi):
            z_sec = 0.5 * (lo + hi)
        f_sec = secular(z_sec, mat)
        if f_sec == 0.0:
            lo = hi = z_sec
            break
        if f_lo * f_sec < 0.0:
            hi, f_hi = z_sec, f_sec
        else:
            lo, f_lo = z_sec, f_sec
        # guarantee progress: one plain bisection step
        z_mid = 0.5 * (lo + hi)
        f_mid = secular(z_mid, mat)
        if f_mid == 0.0:
            lo = hi = z_mid
            break
        if f_lo * f_mid < 0.0:
            hi, f_hi = z_mid, f_mid
        else:
            lo, f_lo = z_mid, f_mid
    root = 0.5 * (lo + hi)
    h = 1e-6 * z_top
    z_minus = max(root - h, delta)
    z_plus = min(root + h, z_top - delta)
    deriv = (secular(z_plus, mat) - secular(z_minus, mat)) / (z_plus - z_minus)
    return ScholteRoot(root, abs(secular(root, mat)), bracket, deriv)


def scholte_kernel_mode(mat: MaterialPoint, xi1: float = 1.0,
                        root: ScholteRoot | None = None):
    """Unit kernel vector of the elliptic-elliptic system on the Scholte set.

    Returns (amplitudes, diagnostics): the evanescent amplitude set with
    zero SH component, normalized so the fluid amplitude is real positive,
    and the two smallest singular values of the system matrix.
    """
    if root is None:
        root = find_scholte_speed(mat)
    tau = -math.sqrt(root.c_sc_sq) * xi1
    cov = BoundaryCovector(xi1, 0.0, tau)
    system = interface.assemble("EE", cov, mat)
    u, s, vh = np.linalg.svd(system.a_out)
    scale = float(np.max(np.abs(system.a_out)))
    if s[-2] <= 1e-6 * scale:
        raise ValueError("elliptic-elliptic nullspace is not one-dimensional")
    mode = vh[-1].conj()
    phase = mode[2] / abs(mode[2])
    mode = mode / phase
    amps = interface.AmplitudeSet(
        b1_s=0.0, b2_s=mode[0], b_p=mode[1], b_f=mode[2],
        directions={"b1_s": "ev", "b2_s": "ev", "b_p": "ev", "b_f": "ev"})
    diagnostics = {
        "sigma_min": float(s[-1]),
        "sigma_next": float(s[-2]),
        "matrix_scale": scale,
        "kernel_residual": float(np.max(np.abs(system.a_out @ mode))),
    }
    return amps, diagnostics


def scholte_speed_field(materials) -> np.ndarray:
    """Pointwise Scholte speeds c_Sc for a sampled material field."""
    return np.array([find_scholte_speed(m).c_sc for m in materials])
