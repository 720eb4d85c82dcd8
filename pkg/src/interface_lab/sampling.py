"""Random valid (material, covector) samples for each transmission case.

Materials are drawn log-uniformly over several decades; the fluid modulus is
then adjusted so that the speed ordering the case needs (e.g. c_f < c_s for
EH) holds.  Covectors are drawn by picking s = tau^2/xi1^2 log-uniformly
inside the case's admissible band, with a relative margin keeping clear of
the glancing sets.  tau < 0 throughout.
"""

from __future__ import annotations

import math

import numpy as np

from .media import MaterialPoint, material_point
from .microlocal import BoundaryCovector

_MARGIN = 1e-3


def sample_material(rng: np.random.Generator, decades: float = 4.0) -> MaterialPoint:
    lo, hi = -decades / 2.0, decades / 2.0

    def draw():
        return 10.0 ** rng.uniform(lo, hi)

    return material_point(draw(), draw(), draw(), draw(), draw())


def _with_fluid_speed(mat: MaterialPoint, c_f: float) -> MaterialPoint:
    lam_f = c_f ** 2 * mat.fluid.rho_f
    return material_point(mat.solid.lambda_s, mat.solid.mu_s, mat.solid.rho_s,
                          lam_f, mat.fluid.rho_f)


def sample_material_for_case(rng: np.random.Generator, case: str,
                             decades: float = 4.0) -> MaterialPoint:
    """Material satisfying the speed ordering the case requires."""
    mat = sample_material(rng, decades)
    u = rng.uniform(0.15, 0.85)
    if case == "EH":          # needs c_f < c_s
        return _with_fluid_speed(mat, mat.c_s * u)
    if case == "HE":          # needs c_f > c_p
        return _with_fluid_speed(mat, mat.c_p / u)
    if case == "MH":          # needs c_f < c_p (and a nonempty band above c_s)
        c_f = mat.c_s + (mat.c_p - mat.c_s) * rng.uniform(0.1, 0.9)
        return _with_fluid_speed(mat, c_f)
    if case == "ME":          # needs c_f > c_s
        return _with_fluid_speed(mat, mat.c_s / u)
    return mat                # HH, EE: any ordering works


def _band(case: str, mat: MaterialPoint) -> tuple[float, float]:
    """Admissible interval of s = tau^2/xi1^2 for the case (open)."""
    cs2, cp2, cf2 = mat.c_s ** 2, mat.c_p ** 2, mat.c_f ** 2
    if case == "HH":
        lo = max(cp2, cf2)
        return lo, 16.0 * lo
    if case == "MH":
        return max(cs2, cf2), cp2
    if case == "EH":
        return cf2, cs2
    if case == "HE":
        return cp2, cf2
    if case == "ME":
        return cs2, min(cp2, cf2)
    if case == "EE":
        lo = min(cs2, cf2)
        return lo / 16.0, lo
    raise ValueError(f"unknown case {case!r}")


def sample_covector_for_case(rng: np.random.Generator, case: str,
                             mat: MaterialPoint,
                             margin: float = _MARGIN) -> BoundaryCovector:
    lo, hi = _band(case, mat)
    lo = lo * (1.0 + margin)
    hi = hi * (1.0 - margin)
    if not lo < hi:
        raise ValueError(f"empty {case} band for this material")
    s = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    xi1 = 10.0 ** rng.uniform(-1.0, 1.0)
    return BoundaryCovector(xi1, 0.0, -xi1 * math.sqrt(s))


def sample_case(rng: np.random.Generator, case: str,
                decades: float = 4.0) -> tuple[MaterialPoint, BoundaryCovector]:
    """(material, covector) pair lying in the requested case region."""
    for _ in range(100):
        mat = sample_material_for_case(rng, case, decades)
        try:
            cov = sample_covector_for_case(rng, case, mat)
        except ValueError:
            continue
        return mat, cov
    raise RuntimeError(f"could not sample a {case} configuration")
