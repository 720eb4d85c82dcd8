"""Kinematic ray tracing in radially symmetric two-layer models.

Rays are null bicharacteristics of tau^2 - c(x)^2 |xi|^2, integrated in
Cartesian coordinates in the plane of propagation with the Hamiltonian
H = (c(x)^2 |xi|^2 - tau^2)/2:

    dx/dt = c^2 xi,      dxi/dt = -c grad(c) |xi|^2,

so the parameter is travel time (|dx/dt| = c on shell).  An adaptive RK4
(step doubling) integrates the system; after every accepted step |xi| is
projected back to the characteristic set |xi| = |tau|/c(x), which kills
secular on-shell drift without changing the ray direction.

Interface events preserve the tangential covector and tau exactly; the
branching weights come from the transmission solver, with evanescent
branches recorded and dropped.  Scholte surface rays run the analogous
Hamiltonian flow constrained to the interface sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import interface as interface_mod
from .media import RadialModel
from .microlocal import (
    DEFAULT_EPS_GLANCING,
    BoundaryCovector,
    GlancingRejection,
    vertical_wavenumber,
)


class NotReachable(Exception):
    """No ray of the requested phase connects the two boundary points."""


@dataclass
class RayState:
    x: tuple[float, float]
    xi: tuple[float, float]
    tau: float
    t: float
    mode: str                  # P | S | F | Scholte
    polarization: str = "sv"   # sv | sh, meaningful for mode S

    def radius(self) -> float:
        return math.hypot(self.x[0], self.x[1])

    def angle(self) -> float:
        return math.atan2(self.x[1], self.x[0])


@dataclass
class RayEvent:
    kind: str                  # interface_hit | surface_hit | transmit | reflect
                               # | convert | total_reflect | evanescent_branch_dropped
    location: tuple[float, float]
    t: float
    incident_mode: str
    emergent_mode: str | None = None
    amplitude: complex = 1.0


@dataclass
class RaySegment:
    mode: str
    samples: list            # (t, x0, x1) triples
    stop: str


@dataclass
class Ray:
    segments: list[RaySegment] = field(default_factory=list)
    events: list[RayEvent] = field(default_factory=list)
    amplitude: complex = 1.0
    total_time: float = 0.0
    terminated_reason: str | None = None


@dataclass
class SegmentResult:
    samples: list
    terminal: RayState
    stop: str                # interface | surface | max_time
    dphi: float              # signed angular advance of the segment


def onshell_residual(c: float, state: RayState) -> float:
    n2 = state.xi[0] ** 2 + state.xi[1] ** 2
    return abs(state.tau ** 2 - c * c * n2) / state.tau ** 2


def _derivs(prof, x0, x1, k0, k1):
    r = math.hypot(x0, x1)
    c = prof.value(r)
    dc = prof.deriv(r)
    cc = c * c
    n2 = k0 * k0 + k1 * k1
    if r > 0.0 and dc != 0.0:
        g = -c * n2 * dc / r
        return cc * k0, cc * k1, g * x0, g * x1
    return cc * k0, cc * k1, 0.0, 0.0


def _rk4(prof, y, h):
    x0, x1, k0, k1 = y
    a = _derivs(prof, x0, x1, k0, k1)
    b = _derivs(prof, x0 + 0.5 * h * a[0], x1 + 0.5 * h * a[1],
                k0 + 0.5 * h * a[2], k1 + 0.5 * h * a[3])
    c = _derivs(prof, x0 + 0.5 * h * b[0], x1 + 0.5 * h * b[1],
                k0 + 0.5 * h * b[2], k1 + 0.5 * h * b[3])
    d = _derivs(prof, x0 + h * c[0], x1 + h * c[1],
                k0 + h * c[2], k1 + h * c[3])
    return (x0 + h / 6.0 * (a[0] + 2 * b[0] + 2 * c[0] + d[0]),
            x1 + h / 6.0 * (a[1] + 2 * b[1] + 2 * c[1] + d[1]),
            k0 + h / 6.0 * (a[2] + 2 * b[2] + 2 * c[2] + d[2]),
            k1 + h / 6.0 * (a[3] + 2 * b[3] + 2 * c[3] + d[3]))


def _renorm(prof, y, tau):
    x0, x1, k0, k1 = y
    c = prof.value(math.hypot(x0, x1))
    n = math.hypot(k0, k1)
    if n == 0.0:
        return y
    s = abs(tau) / (c * n)
    return (x0, x1, s * k0, s * k1)


def _angle_inc(x0, x1, y0, y1):
    return math.atan2(x0 * y1 - x1 * y0, x0 * y0 + x1 * y1)


def trace_segment(model: RadialModel, state: RayState,
                  stop=("interface", "surface"), max_time: float | None = None,
                  rtol: float = 1e-10, h0: float | None = None,
                  h_max: float | None = None, fixed_step: float | None = None,
                  renormalize: bool = True, record: bool = True,
                  max_steps: int = 2_000_000) -> SegmentResult:
    """Integrate one ray leg until a boundary of its layer or max_time.

    Boundary hits are located by bisecting the step to
    |r - R_boundary| <= 1e-12 R_outer, after which the position is snapped
    onto the boundary circle.  fixed_step disables the adaptive control
    (used by convergence studies); renormalize toggles the on-shell
    projection.
    """
    prof = model.speed_profile(state.mode)
    in_fluid = state.mode == "F"
    r_core, r_outer = model.r_core, model.r_outer
    snap = 1e-12 * r_outer
    watch_interface = "interface" in stop
    watch_surface = "surface" in stop and not in_fluid
    y = (state.x[0], state.x[1], state.xi[0], state.xi[1])
    t = state.t
    t_end = math.inf if max_time is None else state.t + max_time
    c_here = prof.value(math.hypot(y[0], y[1]))
    if h_max is None:
        h_max = 0.05 * r_outer / c_here
    h = fixed_step if fixed_step is not None else (h0 or 0.01 * r_outer / c_here)
    samples = [(t, y[0], y[1])] if record else []
    dphi = 0.0

    def crossed(r_prev, r_new):
        if watch_interface and not in_fluid and r_prev > r_core + snap \
                and r_new <= r_core:
            return "interface", r_core
        if watch_interface and in_fluid and r_prev < r_core - snap \
                and r_new >= r_core:
            return "interface", r_core
        if watch_surface and r_prev < r_outer - snap and r_new >= r_outer:
            return "surface", r_outer
        return None, None

    for _ in range(max_steps):
        if t >= t_end:
            return SegmentResult(samples, RayState(
                (y[0], y[1]), (y[2], y[3]), state.tau, t, state.mode,
                state.polarization), "max_time", dphi)
        h_try = min(h, t_end - t) if max_time is not None else h
        if fixed_step is not None:
            y_new = _rk4(prof, y, h_try)
            h_next = h
        else:
            while True:
                full = _rk4(prof, y, h_try)
                half = _rk4(prof, _rk4(prof, y, 0.5 * h_try), 0.5 * h_try)
                scale_x = r_outer
                scale_k = math.hypot(y[2], y[3])
                err = max(abs(half[0] - full[0]) / scale_x,
                          abs(half[1] - full[1]) / scale_x,
                          abs(half[2] - full[2]) / scale_k,
                          abs(half[3] - full[3]) / scale_k)
                if err <= rtol or h_try <= 1e-15:
                    y_new = half
                    grow = 0.9 * (rtol / err) ** 0.2 if err > 0 else 4.0
                    h_next = min(h_max, h_try * min(4.0, max(0.5, grow)))
                    break
                h_try *= max(0.1, 0.9 * (rtol / err) ** 0.2)
                if h_try < 1e-16:
                    raise RuntimeError("step-size underflow in ray integration")
        r_prev = math.hypot(y[0], y[1])
        r_new = math.hypot(y_new[0], y_new[1])
        kind, r_target = crossed(r_prev, r_new)
        if kind is not None:
            lo, hi = 0.0, h_try
            y_hit, t_hit = y_new, t + h_try
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                y_mid = _rk4(prof, y, mid)
                r_mid = math.hypot(y_mid[0], y_mid[1])
                inside = r_mid < r_target if (in_fluid or kind == "surface") \
                    else r_mid > r_target
                if inside:
                    lo = mid
                else:
                    hi = mid
                y_hit, t_hit = y_mid, t + mid
                if abs(r_mid - r_target) <= snap:
                    break
            r_hit = math.hypot(y_hit[0], y_hit[1])
            scale = r_target / r_hit
            y_hit = (y_hit[0] * scale, y_hit[1] * scale, y_hit[2], y_hit[3])
            if renormalize:
                y_hit = _renorm(prof, y_hit, state.tau)
            dphi += _angle_inc(y[0], y[1], y_hit[0], y_hit[1])
            if record:
                samples.append((t_hit, y_hit[0], y_hit[1]))
            return SegmentResult(samples, RayState(
                (y_hit[0], y_hit[1]), (y_hit[2], y_hit[3]), state.tau, t_hit,
                state.mode, state.polarization), kind, dphi)
        if renormalize:
            y_new = _renorm(prof, y_new, state.tau)
        dphi += _angle_inc(y[0], y[1], y_new[0], y_new[1])
        y = y_new
        t += h_try
        h = h_next if fixed_step is None else h
        if record:
            samples.append((t, y[0], y[1]))
    raise RuntimeError("ray integration exceeded the step budget")


def _unit_frames(x):
    r = math.hypot(x[0], x[1])
    rhat = (x[0] / r, x[1] / r)
    that = (-rhat[1], rhat[0])
    return rhat, that


_SLOT_FOR_MODE = {"P": "b_p", "F": "b_f"}


def _boundary_covector(state: RayState):
    rhat, that = _unit_frames(state.x)
    xi_t = state.xi[0] * that[0] + state.xi[1] * that[1]
    if xi_t < 0:
        that = (-that[0], -that[1])
        xi_t = -xi_t
    return rhat, that, xi_t


def _spawn(state, that, rhat, xi_t, xi3, inward):
    sgn = -1.0 if inward else 1.0
    xi = (xi_t * that[0] + sgn * xi3 * rhat[0],
          xi_t * that[1] + sgn * xi3 * rhat[1])
    return xi


def interface_branch(model: RadialModel, state: RayState,
                     eps_g: float = DEFAULT_EPS_GLANCING
                     ) -> tuple[list[RayEvent], list[RayState]]:
    """Branch an incident ray at the solid-fluid interface.

    Returns the event list (hit, then one event per outgoing or dropped
    branch) and the spawned propagating states, each carrying the potential
    amplitude factor of its branch.  Glancing incidence raises
    GlancingRejection; the caller terminates the ray with a diagnostic.
    """
    mat = model.interface
    rhat, that, xi_t = _boundary_covector(state)
    cov = BoundaryCovector(xi_t, 0.0, state.tau)
    events = [RayEvent("interface_hit", state.x, state.t, state.mode)]
    if state.mode == "S" and state.polarization == "sh":
        c_s_here = model.c_s_profile.value(model.r_core)
        xi3 = vertical_wavenumber(cov, c_s_here, eps_g, "c_s").real
        xi = _spawn(state, that, rhat, xi_t, xi3, inward=False)
        events.append(RayEvent("total_reflect", state.x, state.t, "S", "S", -1.0))
        return events, [RayState(state.x, xi, state.tau, state.t, "S", "sh")]
    case = interface_mod.case_of(cov, mat, eps_g)
    slot = "b2_s" if state.mode == "S" else _SLOT_FOR_MODE[state.mode]
    incoming = interface_mod.AmplitudeSet(**{slot: 1.0 + 0.0j})
    system = interface_mod.assemble(case, cov, mat, eps_g)
    sol = interface_mod.solve_outgoing(system, incoming, check_conditioning=False)
    tags = sol.outgoing.directions
    out_modes = (("b2_s", "S"), ("b_p", "P"), ("b_f", "F"))
    states = []
    incident_side = "fluid" if state.mode == "F" else "solid"
    for name, mode in out_modes:
        amp = getattr(sol.outgoing, name)
        if tags[name] == "ev":
            events.append(RayEvent("evanescent_branch_dropped", state.x, state.t,
                                   state.mode, mode, amp))
            continue
        side = "fluid" if mode == "F" else "solid"
        speed = model.speed_profile(mode).value(model.r_core)
        xi3 = vertical_wavenumber(cov, speed, eps_g).real
        xi = _spawn(state, that, rhat, xi_t, xi3, inward=(side == "fluid"))
        if side != incident_side:
            kind = "transmit"
        elif mode == state.mode:
            kind = "total_reflect" if case == "EH" and mode == "F" else "reflect"
        else:
            kind = "convert"
        events.append(RayEvent(kind, state.x, state.t, state.mode, mode, amp))
        states.append(RayState(state.x, xi, state.tau, state.t, mode, "sv"))
    return events, states


def free_surface_reflect(model: RadialModel, state: RayState,
                         eps_g: float = DEFAULT_EPS_GLANCING
                         ) -> tuple[list[RayEvent], list[RayState]]:
    """Specular reflection at the outer boundary, kinematic amplitudes.

    P and SV convert into each other when the converted vertical wavenumber
    is real; amplitude factors are 1 (free-surface amplitude coefficients
    are out of scope).  SH reflects into itself.
    """
    if state.mode == "F":
        raise ValueError("fluid rays do not reach the outer boundary")
    mat = model.interface
    rhat, that, xi_t = _boundary_covector(state)
    cov = BoundaryCovector(xi_t, 0.0, state.tau) if xi_t > 0 else None
    events = [RayEvent("surface_hit", state.x, state.t, state.mode)]
    states = []
    c_same = model.speed_profile(state.mode).value(model.r_outer)
    c_other_mode = "S" if state.mode == "P" else "P"
    c_other = model.speed_profile(c_other_mode).value(model.r_outer)
    tau_sq = state.tau ** 2
    if cov is not None:
        disc_same = tau_sq / c_same ** 2 - xi_t ** 2
        if abs(tau_sq - c_same ** 2 * xi_t ** 2) <= eps_g * (
                tau_sq + c_same ** 2 * xi_t ** 2):
            raise GlancingRejection("c_" + state.mode.lower())
        xi3_same = math.sqrt(disc_same)
    else:
        xi3_same = abs(state.tau) / c_same
    xi = _spawn(state, that, rhat, xi_t, xi3_same, inward=True)
    events.append(RayEvent("reflect", state.x, state.t, state.mode, state.mode, 1.0))
    states.append(RayState(state.x, xi, state.tau, state.t, state.mode,
                           state.polarization))
    convertible = (state.polarization == "sv" and xi_t > 0.0)
    if convertible:
        disc = tau_sq / c_other ** 2 - xi_t ** 2
        if disc > eps_g * (tau_sq + c_other ** 2 * xi_t ** 2):
            xi_c = _spawn(state, that, rhat, xi_t, math.sqrt(disc), inward=True)
            events.append(RayEvent("convert", state.x, state.t, state.mode,
                                   c_other_mode, 1.0))
            states.append(RayState(state.x, xi_c, state.tau, state.t,
                                   c_other_mode, "sv"))
    return events, states


def takeoff_state(model: RadialModel, src_angle: float, takeoff: float,
                  mode: str, tau: float = -1.0, toward_positive: bool = True) -> RayState:
    """Boundary source state: takeoff measured from the inward radial direction."""
    c = model.speed_profile(mode).value(model.r_outer)
    ca, sa = math.cos(src_angle), math.sin(src_angle)
    rhat = (ca, sa)
    that = (-sa, ca) if toward_positive else (sa, -ca)
    d = (-math.cos(takeoff) * rhat[0] + math.sin(takeoff) * that[0],
         -math.cos(takeoff) * rhat[1] + math.sin(takeoff) * that[1])
    k = abs(tau) / c
    return RayState((model.r_outer * ca, model.r_outer * sa),
                    (k * d[0], k * d[1]), tau, 0.0, mode)


def trace_ray(model: RadialModel, state: RayState, max_events: int = 8,
              eps_g: float = DEFAULT_EPS_GLANCING, **trace_kw) -> Ray:
    """Trace a single broken ray, following the strongest branch at events."""
    ray = Ray()
    current = state
    for _ in range(max_events):
        seg = trace_segment(model, current, **trace_kw)
        ray.segments.append(RaySegment(current.mode, seg.samples, seg.stop))
        ray.total_time = seg.terminal.t
        if seg.stop == "max_time":
            ray.terminated_reason = "max_time"
            return ray
        try:
            if seg.stop == "interface":
                events, branches = interface_branch(model, seg.terminal, eps_g)
            else:
                events, branches = free_surface_reflect(model, seg.terminal, eps_g)
        except GlancingRejection as exc:
            ray.terminated_reason = str(exc)
            return ray
        ray.events.extend(events)
        if not branches:
            ray.terminated_reason = "no propagating branch"
            return ray
        weights = []
        for ev in events:
            if ev.kind in ("transmit", "reflect", "convert", "total_reflect"):
                weights.append(ev.amplitude)
        best = int(np.argmax([abs(w) for w in weights]))
        current = branches[best]
        ray.amplitude *= weights[best]
    ray.terminated_reason = "max_events"
    return ray


def _parse_phase(phase: str) -> tuple[str, ...]:
    cleaned = phase.replace("→", "").replace("->", "").replace(" ", "")
    legs = tuple(cleaned.upper())
    if not legs:
        raise ValueError("empty phase")
    for m in legs:
        if m not in ("P", "S", "F"):
            raise ValueError(f"unknown leg mode {m!r} in phase {phase!r}")
    if legs[0] == "F" or legs[-1] == "F":
        raise ValueError("phase must start and end with a solid leg")
    return legs


def _next_leg_state(model: RadialModel, state: RayState, next_mode: str,
                    eps_g: float) -> RayState | None:
    """Kinematic continuation at the interface into the requested mode."""
    rhat, that, xi_t = _boundary_covector(state)
    cov = BoundaryCovector(xi_t, 0.0, state.tau)
    speed = model.speed_profile(next_mode).value(model.r_core)
    try:
        xi3 = vertical_wavenumber(cov, speed, eps_g)
    except GlancingRejection:
        return None
    if xi3.imag != 0.0:
        return None  # requested branch is evanescent here
    inward = next_mode == "F"
    xi = _spawn(state, that, rhat, xi_t, xi3.real, inward=inward)
    return RayState(state.x, xi, state.tau, state.t, next_mode, "sv")


def shoot_phase(model: RadialModel, takeoff: float, phase, *,
                eps_g: float = DEFAULT_EPS_GLANCING, max_time: float | None = None,
                rtol: float = 1e-10) -> tuple[float, float] | None:
    """Angular distance and travel time of one phase ray, or None if the
    takeoff does not realize the phase."""
    legs = _parse_phase(phase) if isinstance(phase, str) else phase
    state = takeoff_state(model, 0.0, takeoff, legs[0])
    total_phi = 0.0
    for i, mode in enumerate(legs):
        final = i == len(legs) - 1
        seg = trace_segment(model, state, stop=("interface", "surface"),
                            max_time=max_time, rtol=rtol, record=False)
        total_phi += seg.dphi
        if seg.stop == "max_time":
            return None
        if final:
            if seg.stop != "surface":
                return None
            return abs(total_phi), seg.terminal.t
        if seg.stop != "interface":
            return None
        nxt = _next_leg_state(model, seg.terminal, legs[i + 1], eps_g)
        if nxt is None:
            return None
        state = nxt
    return None


def phase_scan(model: RadialModel, phase, n_scan: int = 128,
               eps_g: float = DEFAULT_EPS_GLANCING,
               max_time: float | None = None, rtol: float = 1e-10):
    """Takeoff scan of one phase: list of (alpha, (delta, time) | None).

    Precompute once and hand to two_point_time when tabulating many
    distances of the same phase.
    """
    legs = _parse_phase(phase) if isinstance(phase, str) else phase
    if max_time is None:
        max_time = _default_max_time(model, legs)
    alphas = np.linspace(1e-6, 0.5 * math.pi - 1e-6, n_scan)
    return [(float(a), shoot_phase(model, float(a), legs, eps_g=eps_g,
                                   max_time=max_time, rtol=rtol))
            for a in alphas]


def _default_max_time(model: RadialModel, legs) -> float:
    c_floor = min(float(np.min(model.speed_profile(m).knots_v))
                  for m in ("P", "S", "F"))
    return 6.0 * model.r_outer * (len(legs) + 1) / c_floor


def two_point_time(model: RadialModel, src: float, rcv: float, phase: str,
                   n_scan: int = 128, tol_delta: float = 1e-12,
                   eps_g: float = DEFAULT_EPS_GLANCING,
                   max_time: float | None = None,
                   rtol: float = 1e-10, scan=None) -> tuple[float, float]:
    """First-arrival travel time of a phase between two boundary points.

    Shooting over the takeoff angle: a scan locates brackets of the target
    angular distance (bisecting onto the edges of the feasible takeoff
    windows where needed), bisection closes each bracket, and the earliest
    arrival is returned as (time, takeoff).  Raises NotReachable when no
    takeoff realizes the phase at this distance.
    """
    legs = _parse_phase(phase)
    delta = abs(math.remainder(rcv - src, 2.0 * math.pi))
    if delta <= 0.0:
        return 0.0, 0.0
    if max_time is None:
        max_time = _default_max_time(model, legs)

    def shoot(alpha):
        return shoot_phase(model, alpha, legs, eps_g=eps_g, max_time=max_time,
                           rtol=rtol)

    if scan is None:
        scan = phase_scan(model, legs, n_scan, eps_g, max_time, rtol)

    def window_edge(a_ok, s_ok, a_bad):
        # last feasible shot between a feasible and an infeasible takeoff
        lo, s_lo, hi = a_ok, s_ok, a_bad
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            sm = shoot(mid)
            if sm is None:
                hi = mid
            else:
                lo, s_lo = mid, sm
            if hi - lo <= 1e-13:
                break
        return lo, s_lo

    def refine(a_lo, f_lo, a_hi, seed):
        t_best, alpha_best = seed
        lo, hi = a_lo, a_hi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            sm = shoot(mid)
            if sm is None:      # stepped out of the feasible window
                hi = mid
                continue
            fm = sm[0] - delta
            t_best, alpha_best = sm[1], mid
            if abs(fm) <= tol_delta or hi - lo <= 1e-15:
                break
            if f_lo * fm <= 0.0:
                hi = mid
            else:
                lo, f_lo = mid, fm
        return t_best, alpha_best

    candidates = []
    for i in range(len(scan) - 1):
        (a_i, s_i), (a_j, s_j) = scan[i], scan[i + 1]
        if s_i is None and s_j is None:
            continue
        if s_i is not None and s_j is not None:
            lo, f_lo, hi, f_hi = a_i, s_i[0] - delta, a_j, s_j[0] - delta
            seed = (s_j[1], a_j)
        elif s_i is not None:
            a_e, s_e = window_edge(a_i, s_i, a_j)
            lo, f_lo, hi, f_hi = a_i, s_i[0] - delta, a_e, s_e[0] - delta
            seed = (s_e[1], a_e)
        else:
            a_e, s_e = window_edge(a_j, s_j, a_i)
            lo, f_lo, hi, f_hi = a_e, s_e[0] - delta, a_j, s_j[0] - delta
            seed = (s_e[1], a_e)
        if f_lo == 0.0:
            candidates.append(((s_i or s_e)[1], lo))
            continue
        if f_lo * f_hi > 0.0:
            continue
        candidates.append(refine(lo, f_lo, hi, seed))
    if not candidates:
        raise NotReachable(
            f"no {''.join(legs)} ray connects boundary points {delta:.4f} rad apart")
    t, a = min(candidates)
    return t, a


# -- Scholte surface rays ----------------------------------------------------

def _surface_derivs(radius, speed_fn, grad_fn, x, k):
    c = speed_fn(x)
    if grad_fn is not None:
        g = np.asarray(grad_fn(x), dtype=float)
    else:
        h = 1e-6 * radius
        g = np.zeros(3)
        for i in range(3):
            xp = np.array(x)
            xm = np.array(x)
            xp[i] += h
            xm[i] -= h
            xp *= radius / np.linalg.norm(xp)
            xm *= radius / np.linalg.norm(xm)
            g[i] = (speed_fn(xp) - speed_fn(xm)) / (2.0 * h)
    xhat = x / radius
    g = g - np.dot(g, xhat) * xhat        # tangential gradient
    n2 = float(np.dot(k, k))
    dx = c * c * k
    dk = -c * n2 * g - (c * c * n2 / radius ** 2) * x
    return dx, dk


def surface_ray(radius: float, speed_fn, start_point, start_dir,
                duration: float, tau: float = -1.0, n_steps: int = 2000,
                grad_fn=None, renormalize: bool = True) -> list:
    """Trace a surface wave ray on the interface sphere.

    speed_fn maps a 3-point on the sphere to the local surface wave speed;
    the flow is the Hamiltonian flow of tau^2 - c(x)^2 |xi'|^2 constrained
    to the sphere (geodesics of the metric c^-2 g).  Returns samples
    (t, x, y, z).
    """
    x = np.asarray(start_point, dtype=float)
    x = radius * x / np.linalg.norm(x)
    d = np.asarray(start_dir, dtype=float)
    d = d - np.dot(d, x) * x / radius ** 2
    nd = np.linalg.norm(d)
    if nd == 0.0:
        raise ValueError("start direction must have a tangential component")
    d /= nd
    k = (abs(tau) / speed_fn(x)) * d
    h = duration / n_steps
    samples = [(0.0, *x)]
    t = 0.0
    for _ in range(n_steps):
        a_x, a_k = _surface_derivs(radius, speed_fn, grad_fn, x, k)
        b_x, b_k = _surface_derivs(radius, speed_fn, grad_fn,
                                   x + 0.5 * h * a_x, k + 0.5 * h * a_k)
        c_x, c_k = _surface_derivs(radius, speed_fn, grad_fn,
                                   x + 0.5 * h * b_x, k + 0.5 * h * b_k)
        d_x, d_k = _surface_derivs(radius, speed_fn, grad_fn,
                                   x + h * c_x, k + h * c_k)
        x = x + (h / 6.0) * (a_x + 2 * b_x + 2 * c_x + d_x)
        k = k + (h / 6.0) * (a_k + 2 * b_k + 2 * c_k + d_k)
        x *= radius / np.linalg.norm(x)
        k = k - (np.dot(k, x) / radius ** 2) * x
        if renormalize:
            k *= abs(tau) / (speed_fn(x) * np.linalg.norm(k))
        t += h
        samples.append((t, *x))
    return samples
