import math
import time

import numpy as np
import pytest

from meridian4 import curves
from meridian4.surface import MeridianSurface

U_DOM = (0.0, 1.0)
V_DOM = (0.0, 3.0)


def surface(profile, curve):
    return MeridianSurface(profile, curve)


def plane():
    return surface(curves.linear_f_profile(1.0, U_DOM), curves.CircleCurve(0.0, V_DOM))


def case_one(kappa0=1.0):
    return surface(curves.linear_f_profile(1.0, U_DOM), curves.CircleCurve(kappa0, V_DOM))


def constant_f(a=1.0, kappa0=1.0):
    return surface(curves.constant_f_profile(a, U_DOM), curves.CircleCurve(kappa0, V_DOM))


def linear_both(a=0.6, a1=1.0, kappa0=1.0):
    return surface(curves.linear_both_profile(a, a1, U_DOM), curves.CircleCurve(kappa0, V_DOM))


def sine(kappa0=1.0):
    return surface(curves.sine_profile(0.5, 1.5, U_DOM), curves.CircleCurve(kappa0, V_DOM))


def frenet(kappa, domain=V_DOM, dkappa=None):
    return curves.FrenetCurve(kappa, domain, dkappa=dkappa)


@pytest.fixture(scope="session")
def wavy_curve():
    return frenet(lambda v: 0.5 + 0.3 * math.sin(v), dkappa=lambda v: 0.3 * math.cos(v))


@pytest.fixture(scope="session")
def battery(wavy_curve):
    """Analytically distinct profiles, each on an analytic and a numeric curve."""
    profiles = {
        "sine": curves.sine_profile(0.5, 1.5, U_DOM),
        "sine-fast": curves.sine_profile(0.2, 2.0, U_DOM, frequency=3.0, eps=-1),
        "linear-both": curves.linear_both_profile(0.6, 1.0, U_DOM),
        "constant-f": curves.constant_f_profile(1.5, U_DOM),
        "case-one": curves.linear_f_profile(1.0, U_DOM),
    }
    out = {}
    for name, prof in profiles.items():
        out[name + "/circle"] = surface(prof, curves.CircleCurve(0.7, V_DOM))
        out[name + "/frenet"] = surface(prof, wavy_curve)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


_SESSION = {}


def pytest_sessionstart(session):
    _SESSION["start"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import sys
    acc = sys.modules.get("test_acceptance")
    lines = list(getattr(acc, "RESULTS", []))
    if not lines:
        return
    elapsed = time.perf_counter() - _SESSION.get("start", time.perf_counter())
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    terminalreporter.write_line(
        f"[{'PASS' if elapsed < 60 else 'FAIL'}] suite runtime: {elapsed:.1f} s (< 60 s)")
