"""Gauss map ``G = x ^ y`` of a meridian surface and its Laplacian.

Two independent routes to the Laplacian are provided. :func:`laplacian_closed`
evaluates the closed-form expansion on the moving bivector basis.
:func:`laplacian_fd` applies the surface Laplacian (positive-spectrum sign
convention) directly to the six component functions of ``G``. With the
orthonormal frame ``e1 = d/du``, ``e2 = (1/f) d/dv`` and
``nabla_{e1} e1 = 0``, ``nabla_{e2} e2 = -(f'/f) e1`` it reduces to

    Delta G = -(G_uu + G_vv / f^2 + (f'/f) G_u)
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg4 import wedge
from .surface import FrameAt, MeridianSurface

MOVING_BASIS = ("x^y", "x^n1", "x^n2", "y^n1", "y^n2", "n1^n2")
FD_STEP = 1e-3


def moving_basis(frame: FrameAt):
    """Rows are the ambient bivectors of :data:`MOVING_BASIS` at ``frame``."""
    x, y, n1, n2 = frame.x, frame.y, frame.n1, frame.n2
    return np.array([wedge(x, y), wedge(x, n1), wedge(x, n2),
                     wedge(y, n1), wedge(y, n2), wedge(n1, n2)])


@dataclass(frozen=True)
class FrameBivector:
    """A bivector given both on the moving basis and in ambient coordinates."""

    coefficients: np.ndarray
    ambient: np.ndarray

    @classmethod
    def from_coefficients(cls, coefficients, frame):
        c = np.asarray(coefficients, dtype=float)
        return cls(c, c @ moving_basis(frame))

    @classmethod
    def from_ambient(cls, ambient, frame):
        a = np.asarray(ambient, dtype=float)
        return cls(moving_basis(frame) @ a, a)

    def __getitem__(self, label):
        return float(self.coefficients[MOVING_BASIS.index(label)])


LaplacianDecomposition = FrameBivector


def gauss_map(S: MeridianSurface, u, v):
    fr = S.data(u, v).frame
    return wedge(fr.x, fr.y)


def laplacian_coefficients(d):
    """Moving-basis coefficients of the Laplacian from pointwise data ``d``."""
    jet = d.jet
    f, f1, g1, k = jet.f, jet.df, jet.dg, d.kappa
    f2 = f * f
    dk = d.dkappa
    return np.array([
        (jet.fk**2 + k * k + g1 * g1) / f2,
        -dk / f2,
        0.0,
        -k * f1 / f2,
        -(f1 * g1 - f * jet.dfk) / f2,
        0.0,
    ])


class _PointData:
    __slots__ = ("jet", "kappa", "dkappa", "frame")

    def __init__(self, S, u, v):
        d = S.data(u, v)
        self.jet, self.kappa, self.frame = d.jet, d.kappa, d.frame
        self.dkappa = S.curve.dkappa(v)


def laplacian_closed(S: MeridianSurface, u, v) -> LaplacianDecomposition:
    """Closed-form Laplacian of the Gauss map at ``(u, v)``."""
    d = _PointData(S, u, v)
    return FrameBivector.from_coefficients(laplacian_coefficients(d), d.frame)


def _check_margin(S, u, v, h):
    (u0, u1), (v0, v1) = S.domain
    need = 2 * h * (1 - 1e-9)
    if min(u - u0, u1 - u, v - v0, v1 - v) < need:
        raise DomainError(f"({u}, {v}) closer than 2h={2 * h} to the boundary")


def _laplacian_fd_single(S, u, v, h, f, f1):
    G = gauss_map(S, u, v)
    Gup, Gum = gauss_map(S, u + h, v), gauss_map(S, u - h, v)
    Gvp, Gvm = gauss_map(S, u, v + h), gauss_map(S, u, v - h)
    Guu = (Gup - 2 * G + Gum) / (h * h)
    Gvv = (Gvp - 2 * G + Gvm) / (h * h)
    Gu = (Gup - Gum) / (2 * h)
    return -(Guu + Gvv / (f * f) + (f1 / f) * Gu)


def laplacian_fd(S: MeridianSurface, u, v, h=FD_STEP, richardson=True):
    """Finite-difference Laplacian of ``G`` (ambient Bivector4).

    Central differences at step ``h``; with ``richardson`` the results at
    ``h`` and ``h/2`` are combined to cancel the O(h^2) term.
    """
    _check_margin(S, u, v, h)
    f, f1, _, _ = S.profile.derivatives(u)
    coarse = _laplacian_fd_single(S, u, v, h, f, f1)
    if not richardson:
        return coarse
    fine = _laplacian_fd_single(S, u, v, h / 2, f, f1)
    return (4 * fine - coarse) / 3
