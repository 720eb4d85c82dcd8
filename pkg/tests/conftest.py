import numpy as np
import pytest

import interface_lab as il
from interface_lab import media


@pytest.fixture
def canonical():
    return il.canonical_material()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def linear_fluid_model(a: float = 1.6, b: float = 0.2) -> media.RadialModel:
    """Two-layer ball: constant solid speeds (1, 2), linear fluid profile."""
    c_f_interface = a - b * 1.0
    mat = il.material_point(2.0, 1.0, 1.0, c_f_interface ** 2 * 1.0, 1.0)
    rs = np.linspace(1.0, 2.0, 9)
    rf = np.linspace(0.0, 1.0, 9)
    return media.RadialModel(
        2.0, 1.0,
        media.SampledProfile([(r, 2.0) for r in rs]),
        media.SampledProfile([(r, 1.0) for r in rs]),
        media.SampledProfile([(r, a - b * r) for r in rf]),
        mat)


def linear_solid_model(gradient: float = 0.5) -> media.RadialModel:
    """Solid shell with linear c_s(r) = 2 - gradient*r on [1, 2]."""
    mat = il.material_point(2.0, 1.0, 1.0, 2.25, 1.0)
    rs = np.linspace(1.0, 2.0, 9)
    rf = np.linspace(0.0, 1.0, 9)
    c_s_at_core = 2.0 - gradient
    scale = 1.0 / c_s_at_core  # keep the interface material canonical-like
    return media.RadialModel(
        2.0, 1.0,
        media.SampledProfile([(r, 2.0) for r in rs]),
        media.SampledProfile([(r, scale * (2.0 - gradient * r)) for r in rs]),
        media.SampledProfile([(r, 1.5) for r in rf]),
        mat)
