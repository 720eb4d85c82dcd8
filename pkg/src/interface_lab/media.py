"""Material parameters, derived wave speeds, and radially symmetric media.

Units are caller-defined but must be mutually consistent; everything here is
unit-agnostic.  The canonical test material used throughout the test suite is
``lambda_s=2, mu_s=1, rho_s=1, lambda_f=2.25, rho_f=1``, giving the
integer-friendly speeds ``(c_s, c_p, c_f) = (1, 2, 1.5)``.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator


def _require_positive(value: float, name: str) -> float:
    if not (value > 0.0) or not math.isfinite(value):
        raise ValueError(f"{name} must be positive")
    return float(value)


@dataclass(frozen=True)
class SolidParams:
    """Isotropic elastic solid: Lame parameters and density."""

    lambda_s: float
    mu_s: float
    rho_s: float

    def __post_init__(self) -> None:
        _require_positive(self.lambda_s, "lambda_s")
        _require_positive(self.mu_s, "mu_s")
        _require_positive(self.rho_s, "rho_s")


@dataclass(frozen=True)
class FluidParams:
    """Compressible inviscid fluid: bulk modulus and density."""

    lambda_f: float
    rho_f: float

    def __post_init__(self) -> None:
        _require_positive(self.lambda_f, "lambda_f")
        _require_positive(self.rho_f, "rho_f")


def solid_speeds(p: SolidParams) -> tuple[float, float]:
    """Shear and pressure speeds (c_s, c_p) of an isotropic solid.

    c_s = sqrt(mu_s/rho_s), c_p = sqrt((lambda_s + 2 mu_s)/rho_s); the strict
    ordering c_s < c_p holds because lambda_s > 0.
    """
    c_s = math.sqrt(p.mu_s / p.rho_s)
    c_p = math.sqrt((p.lambda_s + 2.0 * p.mu_s) / p.rho_s)
    return c_s, c_p


def fluid_speed(p: FluidParams) -> float:
    """Acoustic speed c_f = sqrt(lambda_f/rho_f) of the fluid."""
    return math.sqrt(p.lambda_f / p.rho_f)


@dataclass(frozen=True)
class MaterialPoint:
    """Solid and fluid parameters at one interface point, with derived speeds."""

    solid: SolidParams
    fluid: FluidParams

    @property
    def c_s(self) -> float:
        return math.sqrt(self.solid.mu_s / self.solid.rho_s)

    @property
    def c_p(self) -> float:
        return math.sqrt((self.solid.lambda_s + 2.0 * self.solid.mu_s) / self.solid.rho_s)

    @property
    def c_f(self) -> float:
        return math.sqrt(self.fluid.lambda_f / self.fluid.rho_f)


def material_point(lambda_s: float, mu_s: float, rho_s: float,
                   lambda_f: float, rho_f: float) -> MaterialPoint:
    """Build a MaterialPoint from the five raw parameters."""
    return MaterialPoint(SolidParams(lambda_s, mu_s, rho_s), FluidParams(lambda_f, rho_f))


def canonical_material() -> MaterialPoint:
    """The repo-wide canonical material with speeds (c_s, c_p, c_f) = (1, 2, 1.5)."""
    return material_point(2.0, 1.0, 1.0, 2.25, 1.0)


class SampledProfile:
    """Monotone cubic (PCHIP) interpolant of a tabulated radial speed profile.

    Construction uses scipy's PCHIP slopes; evaluation is a local Hermite
    cubic with plain-float arithmetic so the ray integrator can call it per
    step without array overhead.  Evaluation clamps to the sampled interval,
    which keeps boundary-overshoot probes during event bisection finite.
    """

    def __init__(self, samples) -> None:
        pts = sorted((float(r), float(v)) for r, v in samples)
        if len(pts) < 2:
            raise ValueError("profile needs at least two (r, value) samples")
        r = np.array([p[0] for p in pts])
        v = np.array([p[1] for p in pts])
        if np.any(np.diff(r) <= 0):
            raise ValueError("profile radii must be strictly increasing")
        if np.any(v <= 0):
            raise ValueError("profile values must be strictly positive")
        interp = PchipInterpolator(r, v, extrapolate=False)
        # CubicHermiteSpline layout: value = sum_k c[k,i] * (x - r_i)^(3-k)
        self._breaks = r.tolist()
        self._coeffs = interp.c.T.tolist()  # per-interval [c3, c2, c1, c0]
        self._r_lo = float(r[0])
        self._r_hi = float(r[-1])
        self._pchip = interp
        self.knots_r = r
        self.knots_v = v

    @property
    def r_min(self) -> float:
        return self._r_lo

    @property
    def r_max(self) -> float:
        return self._r_hi

    def _locate(self, r: float) -> tuple[int, float]:
        if r <= self._r_lo:
            return 0, 0.0
        if r >= self._r_hi:
            return len(self._coeffs) - 1, self._breaks[-1] - self._breaks[-2]
        i = bisect_right(self._breaks, r) - 1
        return i, r - self._breaks[i]

    def value(self, r: float) -> float:
        i, s = self._locate(r)
        c3, c2, c1, c0 = self._coeffs[i]
        return ((c3 * s + c2) * s + c1) * s + c0

    def deriv(self, r: float) -> float:
        if r <= self._r_lo or r >= self._r_hi:
            return 0.0  # clamped extension is constant
        i, s = self._locate(r)
        c3, c2, c1, _ = self._coeffs[i]
        return (3.0 * c3 * s + 2.0 * c2) * s + c1

    def values(self, r: np.ndarray) -> np.ndarray:
        """Vectorized evaluation (clamped) for table-scale work."""
        rc = np.clip(np.asarray(r, dtype=float), self._r_lo, self._r_hi)
        return self._pchip(rc)

    __call__ = value


@dataclass(frozen=True)
class RadialModel:
    """Desk-scale radially symmetric model: solid shell over a fluid core.

    The solid occupies R_core <= r <= R_outer with speed profiles c_p(r),
    c_s(r); the fluid occupies r <= R_core with profile c_f(r).  The material
    point at the interface (one-sided limits at r = R_core) supplies the
    parameters entering reflection/transmission amplitude factors.
    """

    r_outer: float
    r_core: float
    c_p_profile: SampledProfile
    c_s_profile: SampledProfile
    c_f_profile: SampledProfile
    interface: MaterialPoint

    def __post_init__(self) -> None:
        _require_positive(self.r_outer, "R_outer")
        _require_positive(self.r_core, "R_core")
        if not self.r_core < self.r_outer:
            raise ValueError("R_core must be smaller than R_outer")
        tol = 1e-9 * self.r_outer
        for name, prof, lo, hi in (
            ("c_p", self.c_p_profile, self.r_core, self.r_outer),
            ("c_s", self.c_s_profile, self.r_core, self.r_outer),
            ("c_f", self.c_f_profile, 0.0, self.r_core),
        ):
            if prof.r_min > lo + tol or prof.r_max < hi - tol:
                raise ValueError(f"{name} profile must cover [{lo}, {hi}]")
        # the interface material must be the one-sided limit of the profiles
        for name, prof, speed in (("c_p", self.c_p_profile, self.interface.c_p),
                                  ("c_s", self.c_s_profile, self.interface.c_s),
                                  ("c_f", self.c_f_profile, self.interface.c_f)):
            limit = prof.value(self.r_core)
            if abs(limit - speed) > 1e-9 * speed:
                raise ValueError(
                    f"interface material speed {name}={speed} does not match "
                    f"the profile limit {limit} at r = R_core")

    def speed_profile(self, mode: str) -> SampledProfile:
        if mode == "P":
            return self.c_p_profile
        if mode == "S":
            return self.c_s_profile
        if mode == "F":
            return self.c_f_profile
        raise ValueError(f"unknown mode {mode!r}")

    def satisfies_cond_g(self) -> bool:
        """Speed ordering c_s(Gamma+) < c_f(Gamma-) excluding trapped fluid rays."""
        return self.c_s_profile.value(self.r_core) < self.c_f_profile.value(self.r_core)

    def convexity_violations(self, n: int = 400) -> list[str]:
        """Layers where d/dr (r/c) > 0 fails on a dense sample grid."""
        bad = []
        for name, prof, lo, hi in (
            ("c_p", self.c_p_profile, self.r_core, self.r_outer),
            ("c_s", self.c_s_profile, self.r_core, self.r_outer),
            ("c_f", self.c_f_profile, 1e-6 * self.r_core, self.r_core),
        ):
            r = np.linspace(lo, hi, n)
            c = prof.values(r)
            dc = np.array([prof.deriv(ri) for ri in r])
            if np.any(c - r * dc <= 0):
                bad.append(name)
        return bad


def model_from_dict(cfg: dict) -> tuple[MaterialPoint, RadialModel | None]:
    """Parse the model description {"solid": .., "fluid": .., "radial": ..?}."""
    try:
        solid = SolidParams(cfg["solid"]["lambda_s"], cfg["solid"]["mu_s"],
                            cfg["solid"]["rho_s"])
        fluid = FluidParams(cfg["fluid"]["lambda_f"], cfg["fluid"]["rho_f"])
    except KeyError as exc:
        raise ValueError(f"model file missing required key: {exc}") from exc
    mat = MaterialPoint(solid, fluid)
    radial = None
    if "radial" in cfg:
        rad = cfg["radial"]
        try:
            profiles = rad["profiles"]
            radial = RadialModel(
                r_outer=float(rad["R_outer"]),
                r_core=float(rad["R_core"]),
                c_p_profile=SampledProfile(profiles["c_p"]),
                c_s_profile=SampledProfile(profiles["c_s"]),
                c_f_profile=SampledProfile(profiles["c_f"]),
                interface=mat,
            )
        except KeyError as exc:
            raise ValueError(f"radial model missing required key: {exc}") from exc
    return mat, radial


def load_model(path: str) -> tuple[MaterialPoint, RadialModel | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def canonical_radial_model(r_outer: float = 2.0, r_core: float = 1.0) -> RadialModel:
    """Constant-speed two-layer ball with the canonical interface material."""
    mat = canonical_material()
    n = 9
    rs_solid = np.linspace(r_core, r_outer, n)
    rs_fluid = np.linspace(0.0, r_core, n)
    return RadialModel(
        r_outer=r_outer,
        r_core=r_core,
        c_p_profile=SampledProfile([(r, mat.c_p) for r in rs_solid]),
        c_s_profile=SampledProfile([(r, mat.c_s) for r in rs_solid]),
        c_f_profile=SampledProfile([(r, mat.c_f) for r in rs_fluid]),
        interface=mat,
    )
