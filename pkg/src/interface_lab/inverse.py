"""Travel-time forward tables and fluid-speed recovery in radial models.

The forward model produces boundary-to-boundary first-arrival times via the
ray tracer.  The fluid profile is recovered from a fluid-refracted phase
(default SFS: shear legs bracketing one fluid leg) by

  1. reading the ray parameter p = R sin(takeoff)/c(R) off each record,
  2. stripping the known solid legs with radial quadrature, leaving the
     interface-to-interface fluid travel-time curve Delta_f(p),
  3. Abel/Herglotz-Wiechert inversion of the fluid ball:

         ln(R_core / r_turn(p1)) = (1/pi) * int_0^{Delta_1}
                                   arccosh(p(Delta)/p1) dDelta,

     evaluated after the substitution u = sqrt(Delta_1 - Delta), which
     removes the square-root endpoint behavior so that a plain trapezoid
     rule converges cleanly; then c_f(r_turn) = r_turn / p1.

The speed ordering c_s < c_f at the interface guarantees that shear legs
reach grazing fluid rays, so the whole fluid depth range is probed.  The
inversion requires the monotone ray parameter d/dr (r/c_f) > 0; violations
are detected in the data (non-monotone Delta_f(p)) and refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .media import RadialModel, SampledProfile
from .rays import NotReachable, phase_scan, two_point_time


class FoliationError(Exception):
    """Data violate the monotone-ray-parameter (foliation-type) condition."""


@dataclass(frozen=True)
class TravelTimeRecord:
    src: float       # boundary angular position, radians
    rcv: float
    phase: str
    time: float
    takeoff: float   # radians, from the inward radial direction


@dataclass
class RecoveryReport:
    radii: np.ndarray
    recovered: np.ndarray
    true_profile: np.ndarray | None
    rms_relative_error: float | None
    interface_radius_estimate: float | None


def forward_table(model: RadialModel, deltas, phases,
                  **shoot_kw) -> tuple[list[TravelTimeRecord], list[tuple]]:
    """First-arrival records for each (delta, phase); unreachable ones are
    omitted and reported in the skipped list with the reason."""
    if not model.satisfies_cond_g():
        raise ValueError(
            "model violates the interface speed ordering c_s(core+) < c_f(core-)")
    bad = model.convexity_violations()
    if bad:
        raise ValueError(
            f"model violates d/dr(r/c) > 0 in layer(s): {', '.join(bad)}")
    records: list[TravelTimeRecord] = []
    skipped: list[tuple] = []
    n_scan = shoot_kw.pop("n_scan", 128)
    for phase in phases:
        scan = phase_scan(model, phase, n_scan=n_scan,
                          **{k: v for k, v in shoot_kw.items()
                             if k in ("eps_g", "max_time", "rtol")})
        for delta in deltas:
            try:
                t, takeoff = two_point_time(model, 0.0, float(delta), phase,
                                            scan=scan, **shoot_kw)
            except NotReachable as exc:
                skipped.append((float(delta), phase, str(exc)))
                continue
            records.append(TravelTimeRecord(0.0, float(delta), phase, t, takeoff))
    return records, skipped


def ray_parameter(model: RadialModel, rec: TravelTimeRecord) -> float:
    """Angular ray parameter p = R sin(takeoff) / c_mode(R) of a record."""
    mode = rec.phase.replace("→", "").replace("->", "").strip()[0].upper()
    c = model.speed_profile(mode).value(model.r_outer)
    return model.r_outer * math.sin(rec.takeoff) / c


def solid_leg(profile: SampledProfile, p: float, r_lo: float, r_hi: float,
              n: int = 192) -> tuple[float, float]:
    """(angular distance, time) of one radial leg between two radii.

    Assumes the leg does not turn: r/c(r) > p throughout, which the speed
    ordering at the interface guarantees for fluid-probing rays.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n)
    r = 0.5 * (r_hi - r_lo) * nodes + 0.5 * (r_hi + r_lo)
    w = 0.5 * (r_hi - r_lo) * weights
    c = profile.values(r)
    eta = r / c
    rad = eta * eta - p * p
    if np.any(rad <= 0.0):
        raise FoliationError(
            "solid leg turns above the interface for this ray parameter")
    root = np.sqrt(rad)
    delta = float(np.sum(w * p / (r * root)))
    time = float(np.sum(w * eta * eta / (r * root)))
    return delta, time


def _strip_solid_legs(model: RadialModel, records, phase: str):
    """(p, Delta_fluid, T_fluid) arrays for one fluid-refracted phase."""
    legs = phase.replace("→", "").replace("->", "").strip().upper()
    if legs.count("F") != 1 or legs[0] == "F" or legs[-1] == "F":
        raise ValueError("fluid stripping expects phases with a single fluid leg")
    mode_down = legs[0]
    mode_up = legs[-1]
    rows = []
    for rec in records:
        if rec.phase.replace("→", "").replace("->", "").upper() != legs:
            continue
        p = ray_parameter(model, rec)
        delta_total = abs(math.remainder(rec.rcv - rec.src, 2.0 * math.pi))
        d1, t1 = solid_leg(model.speed_profile(mode_down), p,
                           model.r_core, model.r_outer)
        d2, t2 = solid_leg(model.speed_profile(mode_up), p,
                           model.r_core, model.r_outer)
        delta_f = delta_total - d1 - d2
        t_f = rec.time - t1 - t2
        if delta_f <= 0.0 or t_f <= 0.0:
            raise FoliationError(
                "stripped fluid leg is empty; solid model inconsistent with data")
        rows.append((p, delta_f, t_f))
    if len(rows) < 4:
        raise ValueError("need at least 4 fluid-refracted records to invert")
    rows.sort(key=lambda r: r[1])  # by fluid-leg distance, grazing first
    p = np.array([r[0] for r in rows])
    d = np.array([r[1] for r in rows])
    t = np.array([r[2] for r in rows])
    return p, d, t


def _grazing_anchor(p: np.ndarray, d: np.ndarray) -> float:
    """Extrapolated grazing ray parameter eta(R_core) = lim p(Delta -> 0).

    Near grazing p(Delta) is even in Delta; a linear fit of p against
    Delta^2 over the most grazing samples gives the intercept.
    """
    k = min(4, len(p))
    coeffs = np.polyfit(d[:k] ** 2, p[:k], 1)
    eta_r = float(coeffs[1])
    return max(eta_r, float(p[0]) * (1.0 + 1e-12))


def invert_fluid_speed(model: RadialModel, records, phase: str = "SFS",
                       n_integral: int = 4000) -> tuple[np.ndarray, np.ndarray]:
    """Recover the fluid speed profile from a fluid-refracted phase table.

    Returns (radii, speeds) over the probed depth range, deepest first.
    The known solid profiles of the model strip the solid legs; the fluid
    core is then inverted with the Herglotz-Wiechert integral.
    """
    p, d, _ = _strip_solid_legs(model, records, phase)
    if np.any(np.diff(d) <= 0.0) or np.any(np.diff(p) >= 0.0):
        raise FoliationError(
            "foliation-type condition violated: fluid-leg distance is not "
            "monotone in the ray parameter (d/dr(r/c_f) > 0 fails)")
    eta_r = _grazing_anchor(p, d)
    d_ext = np.concatenate([[0.0], d])
    p_ext = np.concatenate([[eta_r], p])
    p_of_delta = PchipInterpolator(d_ext, p_ext, extrapolate=False)
    radii = np.empty(len(p))
    speeds = np.empty(len(p))
    for i in range(len(p)):
        u = np.linspace(0.0, math.sqrt(d[i]), n_integral)
        deltas = np.maximum(d[i] - u * u, 0.0)
        ratio = np.maximum(p_of_delta(deltas) / p[i], 1.0)
        integrand = 2.0 * u * np.arccosh(ratio)
        integral = float(np.trapezoid(integrand, u))
        r_turn = model.r_core * math.exp(-integral / math.pi)
        radii[i] = r_turn
        speeds[i] = r_turn / p[i]
    order = np.argsort(radii)
    return radii[order], speeds[order]


def estimate_interface_radius(model: RadialModel, records,
                              direct_phase: str | None = None) -> float:
    """Interface radius from the shadow edge of the direct diving branch.

    The deepest observed diving ray turns just above the interface; its ray
    parameter approximates eta(R_core) = R_core / c(R_core), which the known
    solid profile converts into a radius.  The estimate error scales with
    the distance-grid spacing near the edge.  Requires a fluid-refracted
    phase in the table as evidence that an interface exists at all.
    """
    phases = {rec.phase for rec in records}
    has_fluid = any("F" in ph for ph in phases)
    if not has_fluid:
        raise ValueError("no interface signature: table has no fluid-refracted phase")
    if direct_phase is None:
        for cand in ("S", "P"):
            if cand in phases:
                direct_phase = cand
                break
        else:
            raise ValueError("no direct solid phase in the table")
    direct = [rec for rec in records if rec.phase == direct_phase]
    if not direct:
        raise ValueError(f"no {direct_phase} records in the table")
    edge = max(direct, key=lambda rec: abs(
        math.remainder(rec.rcv - rec.src, 2.0 * math.pi)))
    p_edge = ray_parameter(model, edge)
    prof = model.speed_profile(direct_phase)

    def eta_gap(r: float) -> float:
        return r / prof.value(r) - p_edge

    lo = 1e-6 * model.r_outer
    if eta_gap(lo) > 0.0 or eta_gap(model.r_outer) < 0.0:
        raise ValueError("shadow-edge ray parameter outside the solid profile range")
    return float(brentq(eta_gap, lo, model.r_outer, xtol=1e-12 * model.r_outer))


def recovery_report(model: RadialModel, radii: np.ndarray, speeds: np.ndarray,
                    interface_estimate: float | None = None) -> RecoveryReport:
    """Compare a recovered fluid profile against the model truth."""
    truth = model.c_f_profile.values(radii)
    rel = (speeds - truth) / truth
    rms = float(np.sqrt(np.mean(rel ** 2)))
    return RecoveryReport(radii, speeds, truth, rms, interface_estimate)
