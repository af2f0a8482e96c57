import numpy as np
import pytest

from ccproj import PencilFrame, SectionFan, convex_hull, gen_quadric


def mgon(radius, m, center=(0.0, 0.0), phase=0.0):
    a = phase + 2 * np.pi * np.arange(m) / m
    return convex_hull(np.stack([center[0] + radius * np.cos(a),
                                 center[1] + radius * np.sin(a)], axis=1))


def quadric_fan(k=12, m=64, mode="inscribed"):
    return gen_quadric(k, m, mode).fan


def mark_validated(fan):
    return SectionFan(fan.frame, fan.thetas, fan.sections, validated=True)


@pytest.fixture(scope="session")
def frame():
    return PencilFrame.standard()


@pytest.fixture(scope="session")
def quad12():
    return quadric_fan(12, 64)


@pytest.fixture(scope="session")
def quad8():
    return quadric_fan(8, 48)


@pytest.fixture(scope="session")
def oct_dirs():
    return np.array([0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4])


@pytest.fixture(scope="session")
def oct_fan(quad12, oct_dirs):
    from ccproj import octagonalize
    return octagonalize(quad12, oct_dirs)
