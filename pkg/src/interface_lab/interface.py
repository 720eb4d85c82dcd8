"""Reflection/transmission systems at the solid-fluid interface.

Six non-glancing cases, labelled by (solid region, fluid region):

  HH  hyperbolic-hyperbolic   all body waves propagate
  MH  mixed-hyperbolic        p wave evanescent (needs c_f < c_p)
  EH  elliptic-hyperbolic     solid fully evanescent (needs c_f < c_s)
  HE  hyperbolic-elliptic     fluid evanescent (needs c_f > c_p)
  ME  mixed-elliptic          only SV propagates (needs c_f > c_s)
  EE  elliptic-elliptic       everything evanescent; Scholte territory

Each case couples the shear-vertical, pressure and fluid potential
amplitudes through a 3x3 system; the shear-horizontal amplitude decouples
and is totally reflected (b1_out = -b1_in) wherever it propagates, with no
evanescent SH component in the elliptic cases.

Unknowns are potential amplitudes (not displacement amplitudes); physical
traces go through the potential-to-trace symbols.  tau > 0 inputs are
solved at (xi', -tau) with conjugated data and the result conjugated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg, symbols
from .media import MaterialPoint
from .microlocal import (
    DEFAULT_EPS_GLANCING,
    BoundaryCovector,
    RegionLabel,
    classify,
    rotate_amplitudes_back,
    rotate_amplitudes_to_frame,
    rotate_to_frame,
    vertical_wavenumber,
)

CASES = ("HH", "MH", "EH", "HE", "ME", "EE")

_CASE_FROM_REGIONS = {
    ("hyperbolic", "hyperbolic"): "HH",
    ("mixed", "hyperbolic"): "MH",
    ("elliptic", "hyperbolic"): "EH",
    ("hyperbolic", "elliptic"): "HE",
    ("mixed", "elliptic"): "ME",
    ("elliptic", "elliptic"): "EE",
}

# direction tag (out/ev) of each outgoing-side amplitude, per case
CASE_OUTGOING_TAGS = {
    "HH": {"b1_s": "out", "b2_s": "out", "b_p": "out", "b_f": "out"},
    "MH": {"b1_s": "out", "b2_s": "out", "b_p": "ev", "b_f": "out"},
    "EH": {"b1_s": "ev", "b2_s": "ev", "b_p": "ev", "b_f": "out"},
    "HE": {"b1_s": "out", "b2_s": "out", "b_p": "out", "b_f": "ev"},
    "ME": {"b1_s": "out", "b2_s": "out", "b_p": "ev", "b_f": "ev"},
    "EE": {"b1_s": "ev", "b2_s": "ev", "b_p": "ev", "b_f": "ev"},
}

# incoming amplitude slots admitted by each case (b1_s rides along with b2_s)
CASE_INCOMING_SLOTS = {
    "HH": ("b1_s", "b2_s", "b_p", "b_f"),
    "MH": ("b1_s", "b2_s", "b_f"),
    "EH": ("b_f",),
    "HE": ("b1_s", "b2_s", "b_p"),
    "ME": ("b1_s", "b2_s"),
    "EE": (),
}

# columns of the coupled 3x3 system, per case (unknowns then incoming)
_COUPLED_INCOMING = {
    "HH": ("b2_s", "b_p", "b_f"),
    "MH": ("b2_s", "b_f"),
    "EH": ("b_f",),
    "HE": ("b2_s", "b_p"),
    "ME": ("b2_s",),
    "EE": (),
}

_CONDITIONING_FLOOR = 1e-8


class EllipticityFailure(Exception):
    """The case system turned out numerically singular off glancing."""


class ConditioningWarning(UserWarning):
    """Determinant small relative to the symbol scale (near-glancing)."""


def case_label(region: RegionLabel) -> str:
    return _CASE_FROM_REGIONS[(region.solid_region, region.fluid_region)]


def case_of(cov: BoundaryCovector, mat: MaterialPoint,
            eps_g: float = DEFAULT_EPS_GLANCING) -> str:
    return case_label(classify(cov, mat, eps_g))


@dataclass
class AmplitudeSet:
    """Complex potential amplitudes (SH, SV, pressure, fluid)."""

    b1_s: complex = 0.0
    b2_s: complex = 0.0
    b_p: complex = 0.0
    b_f: complex = 0.0
    directions: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"b1_s": self.b1_s, "b2_s": self.b2_s,
                "b_p": self.b_p, "b_f": self.b_f}

    def conjugate(self) -> "AmplitudeSet":
        return AmplitudeSet(np.conj(self.b1_s), np.conj(self.b2_s),
                            np.conj(self.b_p), np.conj(self.b_f),
                            dict(self.directions))

    def max_norm(self) -> float:
        return max(abs(self.b1_s), abs(self.b2_s), abs(self.b_p), abs(self.b_f))


@dataclass
class InterfaceSystem:
    """One assembled case system in the reduced (xi2 = 0) frame."""

    case: str
    a_out: np.ndarray          # 3x3 on the coupled unknowns (b2_s, b_p, b_f)
    a_in: np.ndarray           # 3xm on the admitted coupled incoming slots
    sh_factor: float           # -mu_s xi1^2 + rho_s tau^2
    covector: BoundaryCovector # reduced-frame covector used for assembly
    material: MaterialPoint
    incoming_order: tuple = ()

    def rhs(self, incoming: AmplitudeSet) -> np.ndarray:
        vec = np.array([getattr(incoming, name) for name in self.incoming_order],
                       dtype=complex)
        if vec.size == 0:
            return np.zeros(3, dtype=complex)
        return self.a_in @ vec


@dataclass
class TransmissionSolution:
    case: str
    outgoing: AmplitudeSet
    residual: float
    det_numeric: complex
    det_closed_form: complex


def _case_wavenumbers(case: str, cov: BoundaryCovector, mat: MaterialPoint,
                      eps_g: float) -> tuple[complex, complex, complex]:
    """(xi3_s, xi3_p, xi3_f) on the branches the case dictates."""
    xs = vertical_wavenumber(cov, mat.c_s, eps_g, "c_s")
    xp = vertical_wavenumber(cov, mat.c_p, eps_g, "c_p")
    xf = vertical_wavenumber(cov, mat.c_f, eps_g, "c_f")
    return xs, xp, xf


def _coupled_matrices(case: str, x1: float, tau: float, xs: complex, xp: complex,
                      xf: complex, mat: MaterialPoint) -> tuple[np.ndarray, np.ndarray]:
    mu = mat.solid.mu_s
    rho_f = mat.fluid.rho_f
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    double_p = case in ("MH", "ME")  # single evanescent p shared by in and out
    pk = 2.0 if double_p else 1.0
    a_out = np.array([
        [tau * x1, pk * tau * xp, -xf / rho_f],
        [d, 2.0 * pk * mu * x1 * xp, 0.0],
        [2.0 * mu * x1 * xs, -pk * d, tau],
    ], dtype=complex)
    cols = {
        "b2_s": np.array([-tau * x1, -d, 2.0 * mu * x1 * xs], dtype=complex),
        "b_p": np.array([tau * xp, 2.0 * mu * x1 * xp, d], dtype=complex),
        "b_f": np.array([-xf / rho_f, 0.0, -tau], dtype=complex),
    }
    names = _COUPLED_INCOMING[case]
    a_in = (np.stack([cols[n] for n in names], axis=1) if names
            else np.zeros((3, 0), dtype=complex))
    return a_out, a_in


def assemble(case: str, cov: BoundaryCovector, mat: MaterialPoint,
             eps_g: float = DEFAULT_EPS_GLANCING) -> InterfaceSystem:
    """Assemble the coupled 3x3 system of the case in the reduced frame.

    The covector may be given in a general frame; assembly uses |xi'|.
    The case must agree with the classification of the covector.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    actual = case_of(cov, mat, eps_g)
    if actual != case:
        raise ValueError(f"case {case} inconsistent with covector region {actual}")
    x1 = cov.xi_norm
    tau = -abs(cov.tau)
    work = BoundaryCovector(x1, 0.0, tau)
    xs, xp, xf = _case_wavenumbers(case, work, mat, eps_g)
    a_out, a_in = _coupled_matrices(case, x1, tau, xs, xp, xf, mat)
    if cov.tau > 0:
        a_out = np.conj(a_out)
        a_in = np.conj(a_in)
    sh = -mat.solid.mu_s * x1 * x1 + mat.solid.rho_s * tau * tau
    return InterfaceSystem(case, a_out, a_in, sh, BoundaryCovector(x1, 0.0, cov.tau),
                           mat, _COUPLED_INCOMING[case])


def closed_form_determinant(case: str, cov: BoundaryCovector, mat: MaterialPoint,
                            eps_g: float = DEFAULT_EPS_GLANCING) -> complex:
    """Closed-form determinant of the coupled case matrix.

    All six cases share the shape

        k * (tau^4 rho_s xi3_p
             + rho_f^-1 xi3_f ((2 mu xi1^2 - rho_s tau^2)^2
                               + 4 mu^2 xi1^2 xi3_s xi3_p))

    with the wavenumbers on the case branches, and k = 2 when the single
    evanescent p amplitude is shared by the incoming and outgoing sides
    (MH, ME), else k = 1.  In EE this is i times the Scholte secular
    function of z = tau^2/xi1^2, scaled by xi1^5.
    """
    x1 = cov.xi_norm
    tau = -abs(cov.tau)
    work = BoundaryCovector(x1, 0.0, tau)
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    xs, xp, xf = _case_wavenumbers(case, work, mat, eps_g)
    mu = mat.solid.mu_s
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    k = 2.0 if case in ("MH", "ME") else 1.0
    val = k * (tau ** 4 * mat.solid.rho_s * xp
               + (xf / mat.fluid.rho_f) * (d * d + 4.0 * mu * mu * x1 * x1 * xs * xp))
    return complex(np.conj(val)) if cov.tau > 0 else complex(val)


def determinant_scale(case: str, cov: BoundaryCovector, mat: MaterialPoint,
                      eps_g: float = DEFAULT_EPS_GLANCING) -> float:
    """Sum of the absolute values of the closed-form summands."""
    x1 = cov.xi_norm
    work = BoundaryCovector(x1, 0.0, -abs(cov.tau))
    xs, xp, xf = _case_wavenumbers(case, work, mat, eps_g)
    mu = mat.solid.mu_s
    tau = work.tau
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    k = 2.0 if case in ("MH", "ME") else 1.0
    return k * (abs(tau ** 4 * mat.solid.rho_s * xp)
                + abs(xf / mat.fluid.rho_f) * (abs(d) ** 2
                                               + 4.0 * mu * mu * x1 * x1 * abs(xs * xp)))


def _check_incoming(case: str, incoming: AmplitudeSet) -> None:
    allowed = CASE_INCOMING_SLOTS[case]
    for name, value in incoming.as_dict().items():
        if name not in allowed and value != 0:
            raise ValueError(
                f"incoming amplitude {name} is not admitted in case {case}")


def solve_outgoing(system: InterfaceSystem, incoming: AmplitudeSet,
                   check_conditioning: bool = True) -> TransmissionSolution:
    """Outgoing/evanescent amplitudes for the given incoming ones.

    The SH amplitude never couples: b1_out = -b1_in where SH propagates, and
    the evanescent SH component vanishes identically in EH/EE.
    """
    case = system.case
    if case == "EE":
        raise ValueError("EE is homogeneous; use the scholte module for its kernel")
    _check_incoming(case, incoming)
    cov, mat = system.covector, system.material
    scale_sh = mat.solid.mu_s * cov.xi_norm ** 2 + mat.solid.rho_s * cov.tau ** 2
    if abs(system.sh_factor) <= 1e-14 * scale_sh:
        raise EllipticityFailure("SH factor vanished off glancing")
    rhs = system.rhs(incoming)
    try:
        x = linalg.solve(system.a_out, rhs)
    except linalg.SingularMatrixError as exc:
        raise EllipticityFailure(f"case {case} system singular: {exc}") from exc
    residual = float(np.max(np.abs(system.a_out @ x - rhs)))
    det_numeric = linalg.det(system.a_out)
    det_closed = closed_form_determinant(case, cov, mat)
    if check_conditioning:
        scale = determinant_scale(case, cov, mat)
        if abs(det_numeric) < _CONDITIONING_FLOOR * scale:
            warnings.warn(
                f"case {case} determinant below {_CONDITIONING_FLOOR:g} of the "
                "symbol scale; covector is close to glancing",
                ConditioningWarning, stacklevel=2)
    tags = CASE_OUTGOING_TAGS[case]
    b1_out = 0.0 if tags["b1_s"] == "ev" else -incoming.b1_s
    outgoing = AmplitudeSet(b1_s=b1_out, b2_s=x[0], b_p=x[1], b_f=x[2],
                            directions=dict(tags))
    return TransmissionSolution(case, outgoing, residual, det_numeric, det_closed)


def solve_at(cov: BoundaryCovector, mat: MaterialPoint, incoming: AmplitudeSet,
             case: str | None = None,
             eps_g: float = DEFAULT_EPS_GLANCING) -> TransmissionSolution:
    """Classify (unless a case is forced), reduce the frame, and solve.

    For a general-frame covector the shear amplitudes are interpreted in the
    rotated frame of the caller and are rotated into/out of the reduced
    frame; pressure and fluid amplitudes are rotation invariant.
    """
    frame = rotate_to_frame(cov)
    b1, b2 = rotate_amplitudes_to_frame(frame, incoming.b1_s, incoming.b2_s)
    reduced_in = AmplitudeSet(b1, b2, incoming.b_p, incoming.b_f)
    use_case = case or case_of(cov, mat, eps_g)
    system = assemble(use_case, frame.covector, mat, eps_g)
    sol = solve_outgoing(system, reduced_in)
    b1o, b2o = rotate_amplitudes_back(frame, sol.outgoing.b1_s, sol.outgoing.b2_s)
    sol.outgoing.b1_s, sol.outgoing.b2_s = b1o, b2o
    return sol


@dataclass
class ControlSolution:
    case: str
    values: dict
    rank: int
    residual: float
    det_numeric: complex = 0.0
    det_closed_form: complex = 0.0


def _control_wavenumbers(cov, mat, eps_g):
    x1 = cov.xi_norm
    tau = -abs(cov.tau)
    work = BoundaryCovector(x1, 0.0, tau)
    xs = vertical_wavenumber(work, mat.c_s, eps_g, "c_s")
    xp = vertical_wavenumber(work, mat.c_p, eps_g, "c_p")
    xf = vertical_wavenumber(work, mat.c_f, eps_g, "c_f")
    return x1, tau, xs, xp, xf


def mh_control_matrix(cov: BoundaryCovector, mat: MaterialPoint,
                      eps_g: float = DEFAULT_EPS_GLANCING) -> np.ndarray:
    """3x3 matrix of the solid-controls-fluid system in the mixed case."""
    x1, tau, xs, xp, _ = _control_wavenumbers(cov, mat, eps_g)
    mu = mat.solid.mu_s
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    m = np.array([
        [tau * x1, 2.0 * tau * xp, tau * x1],
        [d, 4.0 * mu * x1 * xp, d],
        [2.0 * mu * x1 * xs, -2.0 * d, -2.0 * mu * x1 * xs],
    ], dtype=complex)
    return np.conj(m) if cov.tau > 0 else m


def mh_control_determinant(cov: BoundaryCovector, mat: MaterialPoint,
                           eps_g: float = DEFAULT_EPS_GLANCING) -> complex:
    """-8 mu_s rho_s tau^3 xi1 xi3_s xi3_p~ for the mixed control system."""
    x1, tau, xs, xp, _ = _control_wavenumbers(cov, mat, eps_g)
    val = -8.0 * mat.solid.mu_s * mat.solid.rho_s * tau ** 3 * x1 * xs * xp
    return complex(np.conj(val)) if cov.tau > 0 else complex(val)


def fluid_to_sv_control_matrix(cov: BoundaryCovector, mat: MaterialPoint,
                               eps_g: float = DEFAULT_EPS_GLANCING) -> np.ndarray:
    """3x3 matrix of the fluid-controls-SV system in the mixed case."""
    x1, tau, _, xp, xf = _control_wavenumbers(cov, mat, eps_g)
    mu = mat.solid.mu_s
    rho_f = mat.fluid.rho_f
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    m = np.array([
        [-xf / rho_f, xf / rho_f, -2.0 * tau * xp],
        [0.0, 0.0, -4.0 * mu * x1 * xp],
        [-tau, -tau, 2.0 * d],
    ], dtype=complex)
    return np.conj(m) if cov.tau > 0 else m


def fluid_to_sv_control_determinant(cov: BoundaryCovector, mat: MaterialPoint,
                                    eps_g: float = DEFAULT_EPS_GLANCING) -> complex:
    """8 rho_f^-1 mu_s tau xi1 xi3_f xi3_p~ for the fluid-to-SV system."""
    x1, tau, _, xp, xf = _control_wavenumbers(cov, mat, eps_g)
    val = 8.0 * mat.solid.mu_s * tau * x1 * xf * xp / mat.fluid.rho_f
    return complex(np.conj(val)) if cov.tau > 0 else complex(val)


def control_solid_to_fluid(case: str, cov: BoundaryCovector, mat: MaterialPoint,
                           b_f_in: complex, b_f_out: complex,
                           eps_g: float = DEFAULT_EPS_GLANCING) -> ControlSolution:
    """Solid amplitudes producing prescribed incoming/outgoing fluid waves.

    HH: the 3x4 system is underdetermined; the minimum-norm representative
    is returned along with its numeric rank (expected 3).  MH: the 3x3
    system is inverted; its determinant is checked against the closed form.
    """
    if case not in ("HH", "MH"):
        raise ValueError("fluid control is posed in the HH and MH cases only")
    if case_of(cov, mat, eps_g) != case:
        raise ValueError("case inconsistent with covector region")
    if cov.tau > 0:
        flipped = BoundaryCovector(cov.xi1, cov.xi2, -cov.tau)
        sol = control_solid_to_fluid(case, flipped, mat, np.conj(b_f_in),
                                     np.conj(b_f_out), eps_g)
        sol.values = {k: np.conj(v) for k, v in sol.values.items()}
        sol.det_numeric = np.conj(sol.det_numeric)
        sol.det_closed_form = np.conj(sol.det_closed_form)
        return sol
    x1, tau, xs, xp, xf = _control_wavenumbers(cov, mat, eps_g)
    if x1 == 0.0 or tau == 0.0:
        raise ValueError("control requires xi1 tau != 0")
    mu = mat.solid.mu_s
    rho_f = mat.fluid.rho_f
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    n = np.array([
        [-xf / rho_f, xf / rho_f],
        [0.0, 0.0],
        [-tau, -tau],
    ], dtype=complex)
    rhs = n @ np.array([b_f_in, b_f_out], dtype=complex)
    if case == "HH":
        m = np.array([
            [tau * x1, tau * xp, tau * x1, -tau * xp],
            [d, 2.0 * mu * x1 * xp, d, -2.0 * mu * x1 * xp],
            [2.0 * mu * x1 * xs, -d, -2.0 * mu * x1 * xs, -d],
        ], dtype=complex)
        rank = linalg.rank_row_reduce(m)
        if rank < 3:
            raise EllipticityFailure("HH control system rank deficient")
        x = linalg.minimum_norm_solve(m, rhs)
        residual = float(np.max(np.abs(m @ x - rhs)))
        values = {"b2_s_out": x[0], "b_p_out": x[1],
                  "b2_s_in": x[2], "b_p_in": x[3]}
        return ControlSolution(case, values, rank, residual)
    m = mh_control_matrix(cov, mat, eps_g)
    det_closed = mh_control_determinant(cov, mat, eps_g)
    det_numeric = linalg.det(m)
    try:
        x = linalg.solve(m, rhs)
    except linalg.SingularMatrixError as exc:
        raise EllipticityFailure(f"MH control singular: {exc}") from exc
    residual = float(np.max(np.abs(m @ x - rhs)))
    values = {"b2_s_out": x[0], "b_p_ev": x[1], "b2_s_in": x[2]}
    return ControlSolution(case, values, 3, residual, det_numeric, det_closed)


def control_fluid_to_sv(cov: BoundaryCovector, mat: MaterialPoint,
                        b2_s_out: complex, b2_s_in: complex,
                        eps_g: float = DEFAULT_EPS_GLANCING) -> ControlSolution:
    """Fluid amplitudes realizing prescribed SV amplitudes in the mixed case."""
    if case_of(cov, mat, eps_g) != "MH":
        raise ValueError("fluid-to-SV control is posed in the MH case")
    if cov.tau > 0:
        flipped = BoundaryCovector(cov.xi1, cov.xi2, -cov.tau)
        sol = control_fluid_to_sv(flipped, mat, np.conj(b2_s_out),
                                  np.conj(b2_s_in), eps_g)
        sol.values = {k: np.conj(v) for k, v in sol.values.items()}
        sol.det_numeric = np.conj(sol.det_numeric)
        sol.det_closed_form = np.conj(sol.det_closed_form)
        return sol
    x1, tau, xs, _, _ = _control_wavenumbers(cov, mat, eps_g)
    if x1 == 0.0 or tau == 0.0:
        raise ValueError("control requires xi1 tau != 0")
    mu = mat.solid.mu_s
    d = 2.0 * mu * x1 * x1 - mat.solid.rho_s * tau * tau
    p = np.array([
        [tau * x1, tau * x1],
        [d, d],
        [2.0 * mu * x1 * xs, -2.0 * mu * x1 * xs],
    ], dtype=complex)
    rhs = p @ np.array([b2_s_out, b2_s_in], dtype=complex)
    m = fluid_to_sv_control_matrix(cov, mat, eps_g)
    det_closed = fluid_to_sv_control_determinant(cov, mat, eps_g)
    det_numeric = linalg.det(m)
    scale = np.max(np.abs(m)) ** 3
    if abs(det_numeric) <= 1e-13 * scale:
        raise EllipticityFailure("fluid-to-SV control determinant below tolerance")
    x = linalg.solve(m, rhs)
    residual = float(np.max(np.abs(m @ x - rhs)))
    values = {"b_f_in": x[0], "b_f_out": x[1], "b_p_ev": x[2]}
    return ControlSolution("MH", values, 3, residual, det_numeric, det_closed)


# -- general-frame (xi2 != 0) assembly, used for rotation covariance -------

_FULL_KINDS = {
    # (solid outgoing-side kind, solid incoming kind or None, shared p?,
    #  fluid unknown flavor, fluid incoming flavor or None)
    "HH": (symbols.OUTGOING, symbols.INCOMING, False,
           symbols.OUTGOING, symbols.INCOMING),
    "MH": (symbols.MIXED_OUTGOING, symbols.MIXED_INCOMING, True,
           symbols.OUTGOING, symbols.INCOMING),
    "EH": (symbols.EVANESCENT, None, False, symbols.OUTGOING, symbols.INCOMING),
    "HE": (symbols.OUTGOING, symbols.INCOMING, False, symbols.EVANESCENT, None),
    "ME": (symbols.MIXED_OUTGOING, symbols.MIXED_INCOMING, True,
           symbols.EVANESCENT, None),
    "EE": (symbols.EVANESCENT, None, False, symbols.EVANESCENT, None),
}


def assemble_full(case: str, cov: BoundaryCovector, mat: MaterialPoint,
                  eps_g: float = DEFAULT_EPS_GLANCING):
    """Full 4x4 system built from the symbol matrices at a general covector.

    Returns (a_out, a_in, unknown_names, incoming_names).  At xi2 = 0 this
    decouples into the printed 3x3 system plus the scalar SH law; away from
    xi2 = 0 it realizes the rotation-covariant general-frame path.
    """
    if case_of(cov, mat, eps_g) != case:
        raise ValueError("case inconsistent with covector region")
    if cov.tau > 0:
        flipped = BoundaryCovector(cov.xi1, cov.xi2, -cov.tau)
        a_out, a_in, unknown, incoming = assemble_full(case, flipped, mat, eps_g)
        return np.conj(a_out), np.conj(a_in), unknown, incoming
    kind_out, kind_in, shared_p, fl_out, fl_in = _FULL_KINDS[case]
    tau = cov.tau
    rho_f = mat.fluid.rho_f
    u_o = symbols.potential_map_symbol(kind_out, cov, mat, eps_g)
    m_o = symbols.traction_map_symbol(kind_out, cov, mat, eps_g)
    lam_u = symbols.acoustic_dtn_symbol(fl_out, cov, mat, eps_g)
    if kind_in is not None:
        u_i = symbols.potential_map_symbol(kind_in, cov, mat, eps_g)
        m_i = symbols.traction_map_symbol(kind_in, cov, mat, eps_g)
    else:
        u_i = m_i = None
    if shared_p:
        # evanescent p amplitude shared by the in and out sides: columns add
        u_unk = np.column_stack([u_o[:, 0], u_o[:, 1], u_o[:, 2] + u_i[:, 2]])
        m_unk = np.column_stack([m_o[:, 0], m_o[:, 1], m_o[:, 2] + m_i[:, 2]])
        u_in_solid, m_in_solid = u_i[:, :2], m_i[:, :2]
        incoming_solid = ("b1_s", "b2_s")
    elif kind_in is not None:
        u_unk, m_unk = u_o, m_o
        u_in_solid, m_in_solid = u_i, m_i
        incoming_solid = ("b1_s", "b2_s", "b_p")
    else:
        u_unk, m_unk = u_o, m_o
        u_in_solid = m_in_solid = np.zeros((3, 0), dtype=complex)
        incoming_solid = ()
    it = 1j * tau
    nu_col = np.array([0.0, 0.0, -1.0], dtype=complex)
    a_out = np.zeros((4, 4), dtype=complex)
    a_out[0, :3] = it * (-u_unk[2, :])        # nu . d_t U on the unknowns
    a_out[0, 3] = lam_u / rho_f
    a_out[1:, :3] = -1j * m_unk
    a_out[1:, 3] = it * nu_col
    unknown_names = ("b1_s", "b2_s", "b_p", "b_f")
    n_in = len(incoming_solid) + (1 if fl_in is not None else 0)
    a_in = np.zeros((4, n_in), dtype=complex)
    if incoming_solid:
        a_in[0, :len(incoming_solid)] = -it * (-u_in_solid[2, :])
        a_in[1:, :len(incoming_solid)] = 1j * m_in_solid
    incoming_names = list(incoming_solid)
    if fl_in is not None:
        lam_i = symbols.acoustic_dtn_symbol(fl_in, cov, mat, eps_g)
        a_in[0, -1] = -lam_i / rho_f
        a_in[1:, -1] = -it * nu_col
        incoming_names.append("b_f")
    return a_out, a_in, unknown_names, tuple(incoming_names)


def solve_full(case: str, cov: BoundaryCovector, mat: MaterialPoint,
               incoming: AmplitudeSet,
               eps_g: float = DEFAULT_EPS_GLANCING) -> AmplitudeSet:
    """Solve the general-frame 4x4 system directly (testing path)."""
    if case == "EE":
        raise ValueError("EE is homogeneous")
    a_out, a_in, _, incoming_names = assemble_full(case, cov, mat, eps_g)
    _check_incoming(case, incoming)
    vec = np.array([getattr(incoming, n) for n in incoming_names], dtype=complex)
    rhs = a_in @ vec if vec.size else np.zeros(4, dtype=complex)
    x = linalg.solve(a_out, rhs)
    return AmplitudeSet(b1_s=x[0], b2_s=x[1], b_p=x[2], b_f=x[3],
                        directions=dict(CASE_OUTGOING_TAGS[case]))


# -- reporting helpers -------------------------------------------------------

_MODE_SLOT = {"p": "b_p", "sv": "b2_s", "sh": "b1_s", "f": "b_f"}
_MODE_ADMITTED = {
    "p": ("HH", "HE"),
    "sv": ("HH", "MH", "HE", "ME"),
    "sh": ("HH", "MH", "HE", "ME"),
    "f": ("HH", "MH", "EH"),
}


@dataclass
class ScanRow:
    theta_deg: float
    case: str | None
    amplitudes: dict
    det_abs: float
    skipped: str | None = None


def incident_speed(mode: str, mat: MaterialPoint) -> float:
    if mode == "p":
        return mat.c_p
    if mode in ("sv", "sh"):
        return mat.c_s
    if mode == "f":
        return mat.c_f
    raise ValueError(f"unknown incident mode {mode!r}")


def angle_scan(mat: MaterialPoint, mode: str, angles_deg,
               tau: float = -1.0,
               eps_g: float = DEFAULT_EPS_GLANCING) -> list[ScanRow]:
    """Reflection/transmission coefficients versus incidence angle.

    The incidence angle theta maps to the covector through
    xi1 = |tau| sin(theta) / c_incident.  Glancing angles are reported as
    skipped rows rather than errors.
    """
    if mode not in _MODE_SLOT:
        raise ValueError(f"unknown incident mode {mode!r}")
    c_inc = incident_speed(mode, mat)
    rows: list[ScanRow] = []
    for theta in angles_deg:
        xi1 = abs(tau) * math.sin(math.radians(theta)) / c_inc
        cov = BoundaryCovector(xi1, 0.0, tau)
        try:
            case = case_of(cov, mat, eps_g)
        except Exception as exc:  # glancing
            rows.append(ScanRow(theta, None, {}, math.nan, skipped=str(exc)))
            continue
        if case not in _MODE_ADMITTED[mode]:
            rows.append(ScanRow(theta, case, {}, math.nan,
                                skipped=f"{mode} wave not incident in case {case}"))
            continue
        incoming = AmplitudeSet(**{_MODE_SLOT[mode]: 1.0 + 0.0j})
        if mode == "sh":
            amps = {"b1_s": -1.0 + 0.0j, "b2_s": 0j, "b_p": 0j, "b_f": 0j}
            det_abs = abs(closed_form_determinant(case, cov, mat, eps_g))
            rows.append(ScanRow(theta, case, amps, det_abs))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            sol = solve_at(cov, mat, incoming, eps_g=eps_g)
        rows.append(ScanRow(theta, case, sol.outgoing.as_dict(),
                            abs(sol.det_numeric)))
    return rows
