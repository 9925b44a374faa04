"""Initial-value construction of the non-trivial meridian profiles.

Two families are integrated, both on the branch ``g' = +sqrt(1 - f'^2)``:

* first kind, great circle: ``f' s + f (f f'' / s)' = 0`` with ``s = sqrt(1 - f'^2)``.
  Integrated as the first-order system in ``(f, f', w)``, ``w = f f''/s``:
  ``f'' = w s / f``, ``w' = -f' s / f``.
* second kind, great circle: ``(ln phi)' = -f' f'' / (1 - f'^2)`` where ``phi``
  is a rational function of ``f, f', f'', f'''``. The equation is linear in
  ``f''''``, which is isolated and integrated with state
  ``(f, f', f'', f''')``. Along solutions ``phi / s`` is constant; that
  first integral is monitored at every accepted step.

A third helper, :func:`solve_fkappa_constant`, produces profiles with
``f kappa_alpha`` constant. It exists to probe the case that admits no
pointwise 1-type surfaces.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .curves import MeridianProfile
from .errors import (BranchBoundaryReached, InvalidInitialState, InvariantDrift,
                     SingularDenominator)

RTOL = 1e-10
ATOL = 1e-12
BRANCH_MARGIN = 1e-6
INVARIANT_TOL = 1e-6
CSV_COLUMNS = ("u", "f", "df", "d2f")


@dataclass
class OdeSolution:
    """Result of an integration: uniform samples plus dense output.

    ``derivatives(u)`` gives ``(f, f', f'', f''')`` anywhere on ``span``
    from the integrator's 4th-order dense output. ``boundary_reached`` is
    set when the run stopped early at ``|f'| -> 1`` or ``f -> 0``.
    """

    kind: str
    initial: tuple
    requested_span: tuple
    span: tuple
    u: np.ndarray
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    d3f: np.ndarray
    step_nodes: np.ndarray
    boundary_reached: bool = False
    message: str = ""
    interpolant_order: int = 4
    first_integral: float = math.nan
    first_integral_drift: float = 0.0
    _dense: object = field(default=None, repr=False)
    _jet: object = field(default=None, repr=False)

    @property
    def n_steps(self):
        return len(self.step_nodes) - 1

    def derivatives(self, u):
        return self._jet(self._dense(u))

    def to_profile(self, g_offset=0.0):
        """In-memory profile backed by the dense output."""
        d = self.derivatives
        return MeridianProfile(
            lambda u: d(u)[0], lambda u: d(u)[1], lambda u: d(u)[2], lambda u: d(u)[3],
            self.span, eps=1, g_offset=g_offset, name=f"ode-{self.kind}")

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for row in zip(self.u, self.f, self.df, self.d2f):
                w.writerow([f"{x:.17g}" for x in row])


# -- right-hand sides ------------------------------------------------------


def _first_kind_jet(y):
    f, f1, w = (float(c) for c in y)
    s = math.sqrt(max(1.0 - f1 * f1, 0.0))
    f2 = w * s / f
    dw = -f1 * s / f
    ds = -f1 * f2 / s
    f3 = (dw * s + w * ds) / f - w * s * f1 / (f * f)
    return f, f1, f2, f3


def _first_kind_rhs(u, y):
    f, f1, w = y
    s = math.sqrt(max(1.0 - f1 * f1, 0.0))
    return [f1, w * s / f, -f1 * s / f]


def _second_kind_terms(f, f1, f2, f3):
    """Numerator/denominator of ``-phi/s`` and their ``u``-derivatives less the ``f''''`` part."""
    s2 = 1.0 - f1 * f1
    ds2 = -2.0 * f1 * f2
    s4 = s2 * s2
    ds4 = 2.0 * s2 * ds2
    P = f1 * f2 + f * f3
    P0 = f2 * f2 + 2.0 * f1 * f3
    N = f * s2 * P + f * f * f1 * f2 * f2 + f1 * s4
    D = f * f1 * s2 * P + f * f * f2 * f2 + s4
    aN = (f1 * s2 * P + f * ds2 * P + f * s2 * P0 + 2 * f * f1 * f1 * f2 * f2
          + f * f * f2**3 + 2 * f * f * f1 * f2 * f3 + f2 * s4 + f1 * ds4)
    aD = ((f1 * f1 + f * f2) * s2 * P + f * f1 * ds2 * P + f * f1 * s2 * P0
          + 2 * f * f1 * f2 * f2 + 2 * f * f * f2 * f3 + ds4)
    return N, D, aN, aD, s2


def second_kind_fourth_derivative(f, f1, f2, f3):
    N, D, aN, aD, s2 = _second_kind_terms(f, f1, f2, f3)
    return (N * aD - aN * D) / (f * f * s2 * s2 * (f * f * f2 * f2 + s2 * s2))


def _second_kind_rhs(u, y):
    f, f1, f2, f3 = y
    return [f1, f2, f3, second_kind_fourth_derivative(f, f1, f2, f3)]


def _second_kind_jet(y):
    return tuple(float(c) for c in y)


def phi_second_kind(f, f1, f2, f3):
    """The function whose logarithmic derivative defines the second-kind ODE."""
    s2 = 1.0 - f1 * f1
    dff2 = f1 * f2 + f * f3
    num = -math.sqrt(s2) * (f * s2 * dff2 + f * f * f1 * f2 * f2 + f1 * s2 * s2)
    den = f * f1 * dff2 * s2 + f * f * f2 * f2 + s2 * s2
    return num / den


def _fkappa_jet(a):
    def jet(y):
        f, f1 = (float(c) for c in y)
        s = math.sqrt(max(1.0 - f1 * f1, 0.0))
        f2 = -a * s / f
        ds = -f1 * f2 / s
        f3 = -a * (ds * f - s * f1) / (f * f)
        return f, f1, f2, f3
    return jet


# -- driver ------------------------------------------------------------------


def _validate_initial(f0, df0, span):
    if not all(math.isfinite(x) for x in (f0, df0, *span)):
        raise InvalidInitialState("initial data must be finite")
    if f0 <= 0.0:
        raise InvalidInitialState(f"f0 must be positive, got {f0!r}")
    if abs(df0) >= 1.0 - BRANCH_MARGIN:
        raise InvalidInitialState(f"|f'0|={abs(df0)!r} too close to 1")
    if not span[1] > span[0]:
        raise InvalidInitialState("span must be (u0, u1) with u1 > u0")


def _branch_event(u, y):
    return 1.0 - BRANCH_MARGIN - abs(y[1])


def _radius_event(u, y):
    return y[0] - BRANCH_MARGIN


_branch_event.terminal = True
_radius_event.terminal = True


def _integrate(kind, rhs, jet, y0, span, initial, rtol, atol, n_samples, strict):
    span = (float(span[0]), float(span[1]))
    sol = solve_ivp(rhs, span, y0, method="RK45", rtol=rtol, atol=atol,
                    dense_output=True, events=(_branch_event, _radius_event))
    if sol.status < 0:
        raise InvalidInitialState(f"integration failed: {sol.message}")
    end = float(sol.t[-1])
    stopped = sol.status == 1
    us = np.linspace(span[0], end, n_samples)
    rows = np.array([jet(sol.sol(u)) for u in us])
    dense = sol.sol
    lo, hi = span[0], end

    def clipped(u):
        return dense(min(max(u, lo), hi))

    out = OdeSolution(
        kind=kind, initial=initial, requested_span=span, span=(span[0], end), u=us,
        f=rows[:, 0], df=rows[:, 1], d2f=rows[:, 2], d3f=rows[:, 3],
        step_nodes=np.asarray(sol.t), boundary_reached=stopped,
        message="branch boundary reached" if stopped else "completed",
        _dense=clipped, _jet=jet)
    if stopped and strict:
        raise BranchBoundaryReached(f"stopped at u={end!r}", solution=out)
    return out


def solve_first_kind(f0, df0, d2f0, span, rtol=RTOL, atol=ATOL, n_samples=1001, strict=False):
    """Integrate the first-kind profile equation from ``(f0, f'0, f''0)``."""
    f0, df0, d2f0 = float(f0), float(df0), float(d2f0)
    _validate_initial(f0, df0, span)
    w0 = f0 * d2f0 / math.sqrt(1.0 - df0 * df0)
    return _integrate("first", _first_kind_rhs, _first_kind_jet, [f0, df0, w0], span,
                      (f0, df0, d2f0), rtol, atol, n_samples, strict)


def solve_second_kind(f0, df0, d2f0, span, d3f0=0.0, rtol=RTOL, atol=ATOL, n_samples=1001,
                      strict=False, invariant_tol=INVARIANT_TOL):
    """Integrate the second-kind profile equation from ``(f0, f'0, f''0, f'''0)``.

    The equation involves the fourth derivative, so ``f'''0`` is part of
    the initial data (default 0). Raises :class:`SingularDenominator` when
    ``f''0 = 0`` (the start is a linear-profile point) or when ``phi``
    vanishes or blows up at ``u0``.
    """
    f0, df0, d2f0, d3f0 = float(f0), float(df0), float(d2f0), float(d3f0)
    _validate_initial(f0, df0, span)
    if not math.isfinite(d3f0):
        raise InvalidInitialState("f'''0 must be finite")
    if d2f0 == 0.0:
        raise SingularDenominator("f''0 = 0: meridian curvature vanishes at u0, "
                                  "linear profiles are a separate case")
    N, D, _, _, _ = _second_kind_terms(f0, df0, d2f0, d3f0)
    if abs(D) < 1e-12 or abs(N) < 1e-12:
        raise SingularDenominator(f"phi degenerate at u0 (numerator {N!r}, denominator {D!r})")
    out = _integrate("second", _second_kind_rhs, _second_kind_jet, [f0, df0, d2f0, d3f0],
                     span, (f0, df0, d2f0, d3f0), rtol, atol, n_samples, strict)
    ratio0 = -N / D
    drift = 0.0
    for u in out.step_nodes:
        f, f1, f2, f3 = out.derivatives(u)
        Nu, Du, _, _, _ = _second_kind_terms(f, f1, f2, f3)
        drift = max(drift, abs(-Nu / Du - ratio0) / max(1.0, abs(ratio0)))
    out.first_integral = ratio0
    out.first_integral_drift = drift
    if drift > invariant_tol:
        raise InvariantDrift(f"phi/sqrt(1-f'^2) drifted by {drift:.3e}")
    return out


def solve_fkappa_constant(a, f0, df0, span, rtol=RTOL, atol=ATOL, n_samples=1001,
                          strict=False):
    """Profile with ``f kappa_alpha == a``, i.e. ``f f'' = -a sqrt(1 - f'^2)``."""
    a, f0, df0 = float(a), float(f0), float(df0)
    _validate_initial(f0, df0, span)
    jet = _fkappa_jet(a)

    def rhs(u, y):
        return [y[1], jet(y)[2]]

    d2f0 = jet([f0, df0])[2]
    return _integrate("fkappa", rhs, jet, [f0, df0], span, (f0, df0, d2f0),
                      rtol, atol, n_samples, strict)


# -- residual oracles --------------------------------------------------------


def _stencil(func, u, h):
    return (func(u - 2 * h) - 8 * func(u - h) + 8 * func(u + h) - func(u + 2 * h)) / (12 * h)


def _interior(sol, us, h):
    lo, hi = sol.span
    us = np.asarray(us, dtype=float)
    return us[(us - 2 * h >= lo) & (us + 2 * h <= hi)]


def first_kind_residual(sol, us, h=1e-2):
    """Pointwise ``f' s + f (f f''/s)'`` with the outer derivative by finite differences."""
    def q(u):
        f, f1, f2, _ = sol.derivatives(u)
        return f * f2 / math.sqrt(1.0 - f1 * f1)

    res = []
    for u in _interior(sol, us, h):
        f, f1, _, _ = sol.derivatives(u)
        res.append(f1 * math.sqrt(1.0 - f1 * f1) + f * _stencil(q, u, h))
    return np.array(res)


def second_kind_residual(sol, us, h=1e-2):
    """Pointwise ``(ln|phi|)' + f' f''/(1 - f'^2)`` with the derivative by finite differences."""
    def lnphi(u):
        return math.log(abs(phi_second_kind(*sol.derivatives(u))))

    res = []
    for u in _interior(sol, us, h):
        _, f1, f2, _ = sol.derivatives(u)
        res.append(_stencil(lnphi, u, h) + f1 * f2 / (1.0 - f1 * f1))
    return np.array(res)


# -- CSV round trip -------------------------------------------------------------


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header[:4] != CSV_COLUMNS:
            raise ValueError(f"expected columns {CSV_COLUMNS}, got {header}")
        data = np.array([[float(x) for x in row[:4]] for row in reader if row])
    if data.ndim != 2 or len(data) < 4:
        raise ValueError("profile CSV needs at least 4 rows")
    return data


def profile_from_samples(u, f, df, d2f, eps=1, g_offset=0.0, name="sampled",
                         consistency_tol=1e-6):
    """Profile through ``(f, f', f'')`` samples.

    ``f''`` is a cubic spline through its samples, and ``f'``, ``f`` are its
    exact antiderivatives anchored at the first sample, so all four
    derivatives are mutually consistent. ``f'''`` is of lower accuracy; its
    gap to a spline on every other node is stored as ``derivative_error``.

    Raises
    ------
    ValueError
        If the integrated ``f, f'`` miss their samples by more than
        ``consistency_tol``.
    """
    u = np.asarray(u, dtype=float)
    f, df, d2f = (np.asarray(a, dtype=float) for a in (f, df, d2f))
    if len(u) < 8:
        raise ValueError("profile samples need at least 8 rows")
    if np.any(np.diff(u) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")
    spl2 = CubicSpline(u, d2f)
    spl1 = spl2.antiderivative()
    spl1.c[-1] += df[0]
    spl0 = spl1.antiderivative()
    spl0.c[-1] += f[0]
    gap = max(np.max(np.abs(spl1(u) - df)), np.max(np.abs(spl0(u) - f)))
    if gap > consistency_tol:
        raise ValueError(f"samples of f, f', f'' are inconsistent (gap {gap:.3e})")
    d3 = spl2.derivative()
    coarse = CubicSpline(u[::2], d2f[::2]).derivative()
    err = float(np.max(np.abs(d3(u) - coarse(u))))
    return MeridianProfile(
        lambda x: float(spl0(x)), lambda x: float(spl1(x)), lambda x: float(spl2(x)),
        lambda x: float(d3(x)), (float(u[0]), float(u[-1])), eps=eps, g_offset=g_offset,
        name=name, derivative_error=err)


def load_profile_csv(path, eps=1, g_offset=0.0):
    data = read_csv(path)
    return profile_from_samples(data[:, 0], data[:, 1], data[:, 2], data[:, 3], eps=eps,
                                g_offset=g_offset, name="from-ode-csv")
