"""Spherical curves on S^2(1) and unit-speed meridian profiles.

A spherical curve supplies the moving frame ``{r, t, n}`` obeying

    r' = t,   t' = kappa n - r,   n' = -kappa t

embedded in E^4 with a vanishing fourth component. A meridian profile is the
plane curve ``(f(u), g(u))`` with ``f'^2 + g'^2 = 1``; ``f`` and its first
three derivatives are supplied analytically and ``g`` is always derived from
the branch sign and quadrature.
"""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate

from .errors import DomainError, NotUnitSpeed, SingularProfile

FRENET_STEP = 1e-4
_DOMAIN_SLACK = 1e-12


def _check_domain(x, domain, what):
    lo, hi = domain
    slack = _DOMAIN_SLACK * max(1.0, abs(lo), abs(hi))
    if not (lo - slack <= x <= hi + slack):
        raise DomainError(f"{what}={x!r} outside domain [{lo}, {hi}]")


def _validate_interval(domain, what):
    lo, hi = (float(d) for d in domain)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"{what} domain must be a finite interval lo < hi, got {domain}")
    return lo, hi


def _fd_derivative(func, x, h=1e-3):
    # five-point central stencil, truncation O(h^4)
    return (func(x - 2 * h) - 8 * func(x - h) + 8 * func(x + h) - func(x + 2 * h)) / (12 * h)


class CurveFrame(NamedTuple):
    r: np.ndarray
    t: np.ndarray
    n: np.ndarray


# --------------------------------------------------------------------------
# spherical curves
# --------------------------------------------------------------------------


class SphericalCurve:
    """Arc-length parametrized curve on the unit sphere of E^3 in E^4."""

    domain: tuple

    def frame(self, v) -> CurveFrame:
        raise NotImplementedError

    def kappa(self, v) -> float:
        raise NotImplementedError

    def dkappa(self, v) -> float:
        raise NotImplementedError

    def point(self, v):
        return self.frame(v).r


class CircleCurve(SphericalCurve):
    """Circle of constant spherical curvature ``kappa0``.

    The circle has Euclidean radius ``R = 1/sqrt(1 + kappa0^2)`` and lies in
    the plane ``x3 = kappa0 R``; ``kappa0 = 0`` is a great circle.
    """

    def __init__(self, kappa0, domain=None):
        self.kappa0 = float(kappa0)
        if not math.isfinite(self.kappa0):
            raise ValueError("kappa0 must be finite")
        self.radius = 1.0 / math.sqrt(1.0 + self.kappa0**2)
        self.height = self.kappa0 * self.radius
        if domain is None:
            domain = (0.0, 2.0 * math.pi * self.radius)
        self.domain = _validate_interval(domain, "curve")

    def __repr__(self):
        return f"CircleCurve(kappa0={self.kappa0!r}, domain={self.domain!r})"

    def frame(self, v):
        _check_domain(v, self.domain, "v")
        R, k = self.radius, self.kappa0
        c, s = math.cos(v / R), math.sin(v / R)
        r = np.array([R * c, R * s, self.height, 0.0])
        t = np.array([-s, c, 0.0, 0.0])
        n = np.array([-k * R * c, -k * R * s, R, 0.0])
        return CurveFrame(r, t, n)

    def kappa(self, v):
        _check_domain(v, self.domain, "v")
        return self.kappa0

    def dkappa(self, v):
        _check_domain(v, self.domain, "v")
        return 0.0


def _gram_schmidt(F):
    r = F[0] / np.linalg.norm(F[0])
    t = F[1] - np.dot(F[1], r) * r
    t /= np.linalg.norm(t)
    n = F[2] - np.dot(F[2], r) * r - np.dot(F[2], t) * t
    n /= np.linalg.norm(n)
    return np.array([r, t, n])


def _frenet_rhs(F, k):
    return np.array([F[1], k * F[2] - F[0], -k * F[1]])


def _rk4_step(F, h, k0, kmid, k1):
    a = _frenet_rhs(F, k0)
    b = _frenet_rhs(F + 0.5 * h * a, kmid)
    c = _frenet_rhs(F + 0.5 * h * b, kmid)
    d = _frenet_rhs(F + h * c, k1)
    return F + (h / 6.0) * (a + 2.0 * b + 2.0 * c + d)


def _frenet_generators(k):
    k = np.asarray(k, dtype=float)
    K = np.zeros(k.shape + (3, 3))
    K[..., 0, 1] = 1.0
    K[..., 1, 0] = -1.0
    K[..., 1, 2] = k
    K[..., 2, 1] = -k
    return K


def _rk4_propagators(h, k0, kmid, k1):
    """Batched RK4 one-step matrices for the linear system F' = K(v) F."""
    K0, Km, K1 = _frenet_generators(k0), _frenet_generators(kmid), _frenet_generators(k1)
    eye = np.eye(3)
    A2 = Km @ (eye + 0.5 * h * K0)
    A3 = Km @ (eye + 0.5 * h * A2)
    A4 = K1 @ (eye + h * A3)
    return eye + (h / 6.0) * (K0 + 2.0 * A2 + 2.0 * A3 + A4)


def _propagate(F0, props):
    # sequential part in plain floats: numpy call overhead dominates 3x3 work
    out = np.empty((len(props), 3, 3))
    F = [list(row) for row in F0]
    for i, M in enumerate(props.tolist()):
        G = [[M[a][0] * F[0][c] + M[a][1] * F[1][c] + M[a][2] * F[2][c] for c in range(3)]
             for a in range(3)]
        r, t, n = G
        nr = math.sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
        r = [r[0] / nr, r[1] / nr, r[2] / nr]
        d = t[0] * r[0] + t[1] * r[1] + t[2] * r[2]
        t = [t[0] - d * r[0], t[1] - d * r[1], t[2] - d * r[2]]
        nt = math.sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2])
        t = [t[0] / nt, t[1] / nt, t[2] / nt]
        d1 = n[0] * r[0] + n[1] * r[1] + n[2] * r[2]
        d2 = n[0] * t[0] + n[1] * t[1] + n[2] * t[2]
        n = [n[0] - d1 * r[0] - d2 * t[0], n[1] - d1 * r[1] - d2 * t[1],
             n[2] - d1 * r[2] - d2 * t[2]]
        nn = math.sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2])
        n = [n[0] / nn, n[1] / nn, n[2] / nn]
        F = [r, t, n]
        out[i] = F
    return out


def _vectorized(func):
    probe = np.array([0.0, 0.0])
    try:
        out = np.asarray(func(probe), dtype=float)
        if out.shape == probe.shape:
            return lambda x: np.asarray(func(x), dtype=float)
    except Exception:
        pass
    return np.vectorize(lambda x: float(func(x)), otypes=[float])


class FrenetCurve(SphericalCurve):
    """Spherical curve obtained by integrating the Frenet system for ``kappa(v)``.

    Integration uses classical RK4 at a fixed step with Gram-Schmidt
    re-orthonormalization after every step. Evaluation between nodes takes
    one extra RK4 sub-step from the nearest node, so the frame is smooth in
    ``v`` up to the integrator's local error.

    Parameters
    ----------
    kappa : callable
        Spherical curvature as a function of arc length.
    domain : (float, float)
        Arc-length interval J.
    v0 : float, optional
        Where ``frame0`` is prescribed. Defaults to the start of ``domain``.
    frame0 : (3, 3) or (3, 4) array_like, optional
        Rows ``r, t, n`` at ``v0``; default ``e1, e2, e3``. Must be
        orthonormal with ``n = r x t``.
    dkappa : callable, optional
        Analytic derivative of ``kappa``; otherwise a five-point central
        difference is used.
    """

    def __init__(self, kappa: Callable, domain, v0=None, frame0=None, dkappa=None,
                 step=FRENET_STEP):
        self.domain = _validate_interval(domain, "curve")
        self._kappa = kappa
        self._dkappa = dkappa
        self.step = float(step)
        lo, hi = self.domain
        self.v0 = lo if v0 is None else float(v0)
        _check_domain(self.v0, self.domain, "v0")

        if frame0 is None:
            F0 = np.eye(3)
        else:
            F0 = np.asarray(frame0, dtype=float)[:, :3]
            if F0.shape != (3, 3):
                raise ValueError("frame0 must have three rows r, t, n")
            if np.max(np.abs(F0 @ F0.T - np.eye(3))) > 1e-9:
                raise ValueError("frame0 must be orthonormal")
            if np.linalg.norm(F0[2] - np.cross(F0[0], F0[1])) > 1e-9:
                raise ValueError("frame0 must satisfy n = r x t")

        h = self.step
        n_back = int(math.ceil((self.v0 - lo) / h - 1e-9))
        n_fwd = int(math.ceil((hi - self.v0) / h - 1e-9))
        kvec = _vectorized(kappa)
        nodes = np.empty((n_back + n_fwd + 1, 3, 3))
        nodes[n_back] = F0
        for sign, count in ((1.0, n_fwd), (-1.0, n_back)):
            if count == 0:
                continue
            vs = self.v0 + sign * h * np.arange(count + 1)
            props = _rk4_propagators(sign * h, kvec(vs[:-1]), kvec(vs[:-1] + 0.5 * sign * h),
                                     kvec(vs[1:]))
            traj = _propagate(F0, props)
            if sign > 0:
                nodes[n_back + 1:] = traj
            else:
                nodes[:n_back] = traj[::-1]
        self._nodes = nodes
        self._n_back = n_back

    def __repr__(self):
        return f"FrenetCurve(domain={self.domain!r}, v0={self.v0!r}, step={self.step!r})"

    def _frame3(self, v):
        h = self.step
        k = int(round((v - self.v0) / h))
        k = min(max(k, -self._n_back), len(self._nodes) - 1 - self._n_back)
        vk = self.v0 + k * h
        F = self._nodes[k + self._n_back]
        delta = v - vk
        if delta == 0.0:
            return F
        kap = self._kappa
        return _gram_schmidt(_rk4_step(F, delta, kap(vk), kap(vk + 0.5 * delta), kap(v)))

    def frame(self, v):
        _check_domain(v, self.domain, "v")
        F = self._frame3(v)
        r, t, n = (np.append(row, 0.0) for row in F)
        return CurveFrame(r, t, n)

    def kappa(self, v):
        _check_domain(v, self.domain, "v")
        return float(self._kappa(v))

    def dkappa(self, v):
        _check_domain(v, self.domain, "v")
        if self._dkappa is not None:
            return float(self._dkappa(v))
        return float(_fd_derivative(lambda x: float(self._kappa(x)), v))


def frenet_frame(curve: SphericalCurve, v) -> CurveFrame:
    """Frame ``(r, t, n)`` of ``curve`` at arc length ``v``."""
    return curve.frame(v)


def spherical_curvature(curve: SphericalCurve, v) -> float:
    return curve.kappa(v)


def spherical_curvature_deriv(curve: SphericalCurve, v) -> float:
    return curve.dkappa(v)


# --------------------------------------------------------------------------
# meridian profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileJet:
    """Derivative data of a meridian profile at one parameter value.

    ``fk`` is ``f * kappa_alpha`` and ``dfk`` its derivative in ``u``.
    ``g`` is only filled in by :func:`profile_eval`.
    """

    u: float
    f: float
    df: float
    d2f: float
    d3f: float
    dg: float
    d2g: float
    kappa_alpha: float
    fk: float
    dfk: float
    g: float = math.nan


class MeridianProfile:
    """Unit-speed meridian ``(f(u), g(u))`` with ``g' = eps sqrt(1 - f'^2)``.

    Parameters
    ----------
    f, df, d2f, d3f : callable
        ``f`` and its first three derivatives.
    domain : (float, float)
        Parameter interval I.
    eps : {+1, -1}
        Branch sign of ``g'``.
    g_offset : float
        Value of ``g`` at the start of the domain.
    derivative_error : float
        Estimated absolute error of ``d3f``; zero for analytic input.
    """

    degenerate = False

    def __init__(self, f, df, d2f, d3f, domain, eps=1, g_offset=0.0, name="custom",
                 derivative_error=0.0):
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        self._f, self._df, self._d2f, self._d3f = f, df, d2f, d3f
        self.domain = _validate_interval(domain, "profile")
        self.eps = int(eps)
        self.g_offset = float(g_offset)
        self.name = name
        self.derivative_error = float(derivative_error)

    def __repr__(self):
        return (f"{type(self).__name__}(name={self.name!r}, domain={self.domain!r}, "
                f"eps={self.eps})")

    def derivatives(self, u):
        """Return ``(f, f', f'', f''')`` at ``u`` (no domain check)."""
        return (float(self._f(u)), float(self._df(u)), float(self._d2f(u)),
                float(self._d3f(u)))

    def dg(self, u):
        _, f1, _, _ = self.derivatives(u)
        return self.eps * _unit_complement(f1, u)

    def jet(self, u) -> ProfileJet:
        _check_domain(u, self.domain, "u")
        f, f1, f2, f3 = self.derivatives(u)
        s = _unit_complement(f1, u)
        g1 = self.eps * s
        if s == 0.0:
            if f2 != 0.0:
                raise SingularProfile(
                    f"g'=0 with f''={f2!r} at u={u!r}: meridian curvature undefined")
            return ProfileJet(u, f, f1, f2, f3, 0.0, 0.0, 0.0, 0.0, 0.0)
        g2 = -f1 * f2 / g1
        ka = -f2 / g1
        dfk = -((f1 * f2 + f * f3) * g1 * g1 + f * f1 * f2 * f2) / g1**3
        return ProfileJet(u, f, f1, f2, f3, g1, g2, ka, f * ka, dfk)

    def g(self, u):
        _check_domain(u, self.domain, "u")
        u0 = self.domain[0]
        if u == u0:
            return self.g_offset
        val, _ = integrate.quad(self.dg, u0, u, epsabs=1e-11, epsrel=1e-12, limit=200)
        return self.g_offset + val


def _unit_complement(f1, u):
    s2 = 1.0 - f1 * f1
    if s2 < 0.0:
        if s2 < -1e-12:
            raise NotUnitSpeed(f"|f'|={abs(f1)!r} > 1 at u={u!r}")
        s2 = 0.0
    return math.sqrt(s2)


class DegenerateProfile(MeridianProfile):
    """Branch ``g' == 0``: ``f(u) = sign*u + a`` and ``g`` constant."""

    degenerate = True

    def __init__(self, a, domain, sign=1, g_offset=0.0):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.a = float(a)
        self.sign = int(sign)
        super().__init__(
            lambda u: sign * u + self.a, lambda u: float(sign), lambda u: 0.0,
            lambda u: 0.0, domain, eps=1, g_offset=g_offset, name="linear-f")

    def dg(self, u):
        return 0.0

    def jet(self, u):
        _check_domain(u, self.domain, "u")
        f, f1, _, _ = self.derivatives(u)
        return ProfileJet(u, f, f1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def g(self, u):
        _check_domain(u, self.domain, "u")
        return self.g_offset


def profile_eval(profile: MeridianProfile, u) -> ProfileJet:
    """Full jet of ``profile`` at ``u`` including ``g`` by quadrature."""
    jet = profile.jet(u)
    return ProfileJet(**{**jet.__dict__, "g": profile.g(u)})


def quadrature_g(profile: MeridianProfile, u) -> float:
    return profile.g(u)


# -- named analytic profiles ----------------------------------------------


def linear_f_profile(a, domain, sign=1, g_offset=0.0):
    """``f = sign*u + a`` with ``g`` constant (the ``g' = 0`` branch)."""
    return DegenerateProfile(a, domain, sign=sign, g_offset=g_offset)


def constant_f_profile(a, domain, eps=1, g_offset=0.0):
    """``f = a``, ``g = eps*u + b``."""
    a = float(a)
    return MeridianProfile(lambda u: a, lambda u: 0.0, lambda u: 0.0, lambda u: 0.0,
                           domain, eps=eps, g_offset=g_offset, name="constant-f")


def linear_both_profile(a, a1, domain, eps=1, g_offset=0.0):
    """``f = a*u + a1``, ``g' = eps*sqrt(1 - a^2)`` (requires ``|a| < 1``)."""
    a, a1 = float(a), float(a1)
    if not abs(a) < 1.0:
        raise NotUnitSpeed("linear-both profile needs |a| < 1; use linear-f for |a| = 1")
    return MeridianProfile(lambda u: a * u + a1, lambda u: a, lambda u: 0.0,
                           lambda u: 0.0, domain, eps=eps, g_offset=g_offset,
                           name="linear-both")


def sine_profile(amplitude, offset, domain, eps=1, g_offset=0.0, frequency=1.0):
    """``f = offset + amplitude*sin(frequency*u)``; needs ``|amplitude*frequency| < 1``."""
    A, c, w = float(amplitude), float(offset), float(frequency)
    if not abs(A * w) < 1.0:
        raise NotUnitSpeed("sine profile needs |amplitude*frequency| < 1")
    return MeridianProfile(
        lambda u: c + A * math.sin(w * u),
        lambda u: A * w * math.cos(w * u),
        lambda u: -A * w * w * math.sin(w * u),
        lambda u: -A * w**3 * math.cos(w * u),
        domain, eps=eps, g_offset=g_offset, name="sine-demo")
