"""Meridian surfaces ``z(u, v) = f(u) r(v) + g(u) e4`` in E^4.

Tangent frame ``x = z_u = f' r + g' e4``, ``y = z_v / f = t``; normal frame
``n1 = n``, ``n2 = -g' r + f' e4``. Second-order quantities (shape operators,
second fundamental form, curvatures, connection coefficients) are closed
forms in the profile jet and the spherical curvature.
"""

from dataclasses import dataclass

import numpy as np

from .curves import CurveFrame, MeridianProfile, ProfileJet, SphericalCurve
from .errors import DomainError
from .linalg4 import E4


@dataclass(frozen=True)
class FrameAt:
    x: np.ndarray
    y: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    u: float
    v: float

    def as_matrix(self):
        """Rows ``x, y, n1, n2``."""
        return np.array([self.x, self.y, self.n1, self.n2])


@dataclass(frozen=True)
class SurfaceData:
    """Everything needed pointwise: profile jet, curve frame and curvature."""

    jet: ProfileJet
    curve: CurveFrame
    kappa: float
    frame: FrameAt


class MeridianSurface:
    """Meridian surface over the rectangle ``profile.domain x curve.domain``.

    ``f`` must not vanish on the profile domain; this is checked on
    ``check_samples`` equally spaced parameters at construction.
    """

    def __init__(self, profile: MeridianProfile, curve: SphericalCurve, check_samples=65):
        self.profile = profile
        self.curve = curve
        lo, hi = profile.domain
        fs = [profile.derivatives(u)[0] for u in np.linspace(lo, hi, check_samples)]
        if min(abs(f) for f in fs) == 0.0 or (min(fs) < 0.0 < max(fs)):
            raise DomainError("f vanishes on the profile domain; the patch is not regular")
        self.f_sign = 1 if fs[0] > 0 else -1

    def __repr__(self):
        return f"MeridianSurface(profile={self.profile!r}, curve={self.curve!r})"

    @property
    def domain(self):
        return self.profile.domain, self.curve.domain

    def data(self, u, v) -> SurfaceData:
        jet = self.profile.jet(u)
        cf = self.curve.frame(v)
        kappa = self.curve.kappa(v)
        x = jet.df * cf.r + jet.dg * E4
        n2 = -jet.dg * cf.r + jet.df * E4
        frame = FrameAt(x, cf.t.copy(), cf.n.copy(), n2, float(u), float(v))
        return SurfaceData(jet, cf, kappa, frame)


def eval_point(S: MeridianSurface, u, v):
    """Position ``f(u) r(v) + g(u) e4``."""
    jet = S.profile.jet(u)
    r = S.curve.frame(v).r
    return jet.f * r + S.profile.g(u) * E4


def tangent_vectors(S: MeridianSurface, u, v):
    """Coordinate tangents ``(z_u, z_v)``."""
    d = S.data(u, v)
    return d.frame.x, d.jet.f * d.frame.y


def first_fundamental_form(S: MeridianSurface, u, v):
    """``(E, F, G)`` from the coordinate tangents."""
    zu, zv = tangent_vectors(S, u, v)
    return float(zu @ zu), float(zu @ zv), float(zv @ zv)


def frame_at(S: MeridianSurface, u, v) -> FrameAt:
    return S.data(u, v).frame


def shape_operators(S: MeridianSurface, u, v):
    """Shape operators ``(A_n1, A_n2)`` in the ``(x, y)`` basis."""
    d = S.data(u, v)
    f = d.jet.f
    A1 = np.array([[0.0, 0.0], [0.0, d.kappa / f]])
    A2 = np.array([[d.jet.kappa_alpha, 0.0], [0.0, d.jet.dg / f]])
    return A1, A2


def second_fundamental_form(S: MeridianSurface, u, v):
    """``(h(x,x), h(x,y), h(y,y))`` as ambient vectors, read off the shape operators."""
    d = S.data(u, v)
    A1, A2 = shape_operators(S, u, v)
    n1, n2 = d.frame.n1, d.frame.n2
    hxx = A1[0, 0] * n1 + A2[0, 0] * n2
    hxy = A1[0, 1] * n1 + A2[0, 1] * n2
    hyy = A1[1, 1] * n1 + A2[1, 1] * n2
    return hxx, hxy, hyy


def gauss_curvature(S: MeridianSurface, u, v):
    jet = S.profile.jet(u)
    return jet.kappa_alpha * jet.dg / jet.f


def mean_curvature_vector(S: MeridianSurface, u, v):
    d = S.data(u, v)
    f = d.jet.f
    return (d.kappa / (2 * f)) * d.frame.n1 + ((d.jet.kappa_alpha * f + d.jet.dg) / (2 * f)) * d.frame.n2


# keys name the derivative: "y_n1" is the derivative of n1 along y
CONNECTION_KEYS = ("x_x", "x_y", "y_x", "y_y", "x_n1", "y_n1", "x_n2", "y_n2")


def connection_coefficients(S: MeridianSurface, u, v):
    """Ambient derivatives of the adapted frame in frame coordinates.

    Keys are ``"<direction>_<field>"``: ``"y_x"`` holds the 4 coefficients
    on ``(x, y, n1, n2)`` of the derivative of ``x`` along ``y``. Directional
    derivatives along ``x`` and ``y`` are ``d/du`` and ``(1/f) d/dv``.
    """
    d = S.data(u, v)
    f, f1, g1, ka, k = d.jet.f, d.jet.df, d.jet.dg, d.jet.kappa_alpha, d.kappa
    return {
        "x_x": np.array([0.0, 0.0, 0.0, ka]),
        "x_y": np.zeros(4),
        "y_x": np.array([0.0, f1 / f, 0.0, 0.0]),
        "y_y": np.array([-f1 / f, 0.0, k / f, g1 / f]),
        "x_n1": np.zeros(4),
        "y_n1": np.array([0.0, -k / f, 0.0, 0.0]),
        "x_n2": np.array([-ka, 0.0, 0.0, 0.0]),
        "y_n2": np.array([0.0, -g1 / f, 0.0, 0.0]),
    }


def sample_grid(S: MeridianSurface, nu, nv, margin=0.0):
    """Equally spaced parameters ``(us, vs)`` kept ``margin`` away from the boundary."""
    (u0, u1), (v0, v1) = S.domain
    if u1 - u0 <= 2 * margin or v1 - v0 <= 2 * margin:
        raise DomainError("margin leaves no interior")
    return (np.linspace(u0 + margin, u1 - margin, nu),
            np.linspace(v0 + margin, v1 - margin, nv))


def is_totally_geodesic(S: MeridianSurface, us, vs, tol=1e-9):
    """``max(|kappa_alpha|, |kappa|, |g'|) <= tol`` over the samples."""
    worst = 0.0
    for u in us:
        jet = S.profile.jet(u)
        worst = max(worst, abs(jet.kappa_alpha), abs(jet.dg))
    for v in vs:
        worst = max(worst, abs(S.curve.kappa(v)))
    return worst <= tol
