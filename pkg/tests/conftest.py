import pytest

from arrangelab.arrangement import build
from arrangelab.geometry import LineEq


@pytest.fixture
def triangle_lines():
    # y = 0, y = x, y = -x + 1
    return [
        LineEq.from_slope_intercept(0, 0),
        LineEq.from_slope_intercept(1, 0),
        LineEq.from_slope_intercept(-1, 1),
    ]


@pytest.fixture
def triangle(triangle_lines):
    return build(triangle_lines)


@pytest.fixture
def cross_lines():
    # y = x, y = -x
    return [LineEq.from_slope_intercept(1, 0), LineEq.from_slope_intercept(-1, 0)]


@pytest.fixture
def cross(cross_lines):
    return build(cross_lines)
