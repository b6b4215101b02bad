"""
Shared fixtures and hypothesis strategies.
"""

import math

import hypothesis.strategies as st
import pytest

from rankone.models.matrix import Mat2
from rankone.schemas.request import CheckConfig, SampleSpec

finite = st.floats(
    min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False
)
log_stretch = st.floats(min_value=-2.5, max_value=2.5)
angle = st.floats(min_value=-math.pi, max_value=math.pi)


@st.composite
def glp2(draw: st.DrawFn) -> Mat2:
    """F = R(a) diag(l1, l2) R(b) with log-uniform-ish stretches."""
    l1 = math.exp(draw(log_stretch))
    l2 = math.exp(draw(log_stretch))
    return (
        Mat2.rotation(draw(angle))
        @ Mat2.diag(l1, l2)
        @ Mat2.rotation(draw(angle))
    )


@st.composite
def any_matrix(draw: st.DrawFn) -> Mat2:
    return Mat2(draw(finite), draw(finite), draw(finite), draw(finite))


@pytest.fixture
def fast_cfg() -> CheckConfig:
    """Default grid bounds on 256 points."""
    return CheckConfig(grid_n=256)


@pytest.fixture
def default_cfg() -> CheckConfig:
    """The configured grid: 2048 points on [1 + 1e-6, 1e3]."""
    return CheckConfig.from_settings()


@pytest.fixture
def small_spec() -> SampleSpec:
    return SampleSpec(n_points=300, seed=7)


FAST_GRID = "1.000001,1000,256"
