"""Shared fixtures: reference systems built through the config parser."""

import numpy as np
import pytest

from ifscert import PointSet, parse_config

CANTOR_CONFIG = """
{
  "schema_version": 1,
  "dim": 1,
  "working_box": {"min": [0.0], "max": [1.0]},
  "mode": "pc",
  "default_c": 0.5,
  "phi": {"kind": "linear", "c": 0.3333333333333333},
  "maps": {"explicit": [
    {"kind": "affine", "matrix": [[0.3333333333333333]], "offset": [0.0]},
    {"kind": "affine", "matrix": [[0.3333333333333333]], "offset": [0.6666666666666666]}
  ]}
}
"""

SIERPINSKI_CONFIG = """
{
  "schema_version": 1,
  "dim": 2,
  "working_box": {"min": [0.0, 0.0], "max": [1.0, 1.0]},
  "mode": "pc",
  "phi": {"kind": "linear", "c": 0.5},
  "maps": {"explicit": [
    {"kind": "similarity", "scale": 0.5, "offset": [0.0, 0.0]},
    {"kind": "similarity", "scale": 0.5, "offset": [0.5, 0.0]},
    {"kind": "similarity", "scale": 0.5, "offset": [0.25, 0.4330127018922193]}
  ]}
}
"""

# One piecewise map halving [0,1] toward 0 and [2,3] toward 2; orbits never
# leave their component, so the attractor depends on the start.
TWO_COMPONENT_CONFIG = """
{
  "schema_version": 1,
  "dim": 1,
  "working_box": {"min": [-0.5], "max": [3.5]},
  "mode": "pc",
  "phi": {"kind": "linear", "c": 0.5},
  "maps": {"explicit": [
    {"kind": "piecewise", "pieces": [
      {"box": {"min": [-0.5], "max": [1.5]},
       "map": {"kind": "affine", "matrix": [[0.5]], "offset": [0.0]}},
      {"box": {"min": [1.5], "max": [3.5]},
       "map": {"kind": "affine", "matrix": [[0.5]], "offset": [1.0]}}
    ]}
  ]}
}
"""

ORBITAL_CONFIG = """
{
  "schema_version": 1,
  "dim": 1,
  "working_box": {"min": [0.0], "max": [1.0]},
  "mode": "orbital",
  "phi": {"kind": "linear", "c": 0.5},
  "maps": {"explicit": [
    {"kind": "affine", "matrix": [[0.45]], "offset": [0.0]},
    {"kind": "affine", "matrix": [[0.45]], "offset": [0.55]}
  ]}
}
"""


@pytest.fixture(scope="session")
def cantor_config():
    return parse_config(CANTOR_CONFIG)


@pytest.fixture(scope="session")
def cantor(cantor_config):
    return cantor_config.build_system()


@pytest.fixture(scope="session")
def sierpinski_config():
    return parse_config(SIERPINSKI_CONFIG)


@pytest.fixture(scope="session")
def sierpinski(sierpinski_config):
    return sierpinski_config.build_system()


@pytest.fixture(scope="session")
def two_component():
    return parse_config(TWO_COMPONENT_CONFIG).build_system()


@pytest.fixture(scope="session")
def orbital_system():
    return parse_config(ORBITAL_CONFIG).build_system()


def cantor_endpoint_oracle(level: int) -> PointSet:
    """All images of {0, 1} under words of the given length, generated with
    plain numpy arithmetic (independent of the library's operator code)."""
    pts = np.array([0.0, 1.0])
    for _ in range(level):
        pts = np.unique(np.concatenate([pts / 3.0, pts / 3.0 + 2.0 / 3.0]))
    return PointSet(pts)


def brute_directed(A: np.ndarray, B: np.ndarray) -> float:
    """Independent O(n*m) oracle for the directed distance."""
    best = 0.0
    for a in A:
        d = np.sqrt(((B - a) ** 2).sum(axis=1)).min()
        best = max(best, float(d))
    return best


def brute_hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    return max(brute_directed(A, B), brute_directed(B, A))
