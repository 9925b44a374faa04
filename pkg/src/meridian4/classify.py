"""Pointwise 1-type classification of meridian surfaces.

A surface has pointwise 1-type Gauss map when ``Delta G = lambda (G + C)`` for
a nowhere-vanishing function ``lambda`` and a constant bivector ``C``. The
classifier decides the structural case from sampled curvature data, then
confirms every positive verdict by the definitional check on a grid with
both Laplacian routes.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BranchMismatch, GridTooSmall, LambdaVanishes
from .gaussmap import FD_STEP, FrameBivector, gauss_map, laplacian_closed, laplacian_fd
from .surface import MeridianSurface, sample_grid

MIN_GRID = 8
MIN_LINE_SAMPLES = 33


@dataclass(frozen=True)
class Tolerances:
    condition_tol: float = 1e-9
    residual_tol: float = 1e-5
    drift_tol: float = 1e-4

    def __post_init__(self):
        for name in ("condition_tol", "residual_tol", "drift_tol"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive, got {val!r}")


class Verdict(str, Enum):
    HARMONIC_PLANE = "Harmonic-Plane"
    FIRST_KIND_CASE_I_IMPOSSIBLE = "FirstKind-CaseI-impossible"
    FIRST_KIND_II_I = "FirstKind-II-i"
    FIRST_KIND_II_II = "FirstKind-II-ii"
    SECOND_KIND_I = "SecondKind-I"
    SECOND_KIND_II_I = "SecondKind-II-i"
    SECOND_KIND_II_II = "SecondKind-II-ii"
    SECOND_KIND_II_III_IMPOSSIBLE = "SecondKind-II-iii-impossible"
    NOT_POINTWISE_1_TYPE = "NotPointwise1Type"

    def __str__(self):
        return self.value


FIRST_KIND = (Verdict.FIRST_KIND_II_I, Verdict.FIRST_KIND_II_II)
SECOND_KIND = (Verdict.SECOND_KIND_I, Verdict.SECOND_KIND_II_I, Verdict.SECOND_KIND_II_II)


def is_definite(verdict):
    """True for verdicts that name a pointwise 1-type family or the plane."""
    return verdict == Verdict.HARMONIC_PLANE or verdict in FIRST_KIND + SECOND_KIND


# -- closed forms ------------------------------------------------------------


def compute_lambda(S: MeridianSurface, u, v):
    """Closed-form ``lambda``: ``(kappa^2+1)/f^2`` when ``g' = 0``, else the general quotient."""
    jet = S.profile.jet(u)
    k = S.curve.kappa(v)
    f = jet.f
    if S.profile.degenerate:
        return (k * k + 1.0) / (f * f)
    if jet.dg == 0.0:
        raise BranchMismatch(f"g' = 0 at u={u!r} on a non-degenerate profile")
    g1 = jet.dg
    return (g1 * (1.0 + jet.fk**2 + k * k) - f * jet.df * jet.dfk) / (f * f * g1)


def compute_C(S: MeridianSurface, case, u, v, tol=1e-9):
    """Closed-form constant bivector ``C`` of the given case at ``(u, v)``.

    ``case`` is a :class:`Verdict` (or its string value). Returns a
    :class:`FrameBivector`; raises :class:`BranchMismatch` when the case's
    preconditions fail at the point.
    """
    case = Verdict(case)
    d = S.data(u, v)
    jet, k, frame = d.jet, d.kappa, d.frame
    dk = S.curve.dkappa(v)
    f, f1, g1 = jet.f, jet.df, jet.dg
    coeffs = np.zeros(6)
    if case in FIRST_KIND:
        if S.profile.degenerate:
            raise BranchMismatch("first kind requires g' != 0")
        return FrameBivector.from_coefficients(coeffs, frame)
    if case == Verdict.SECOND_KIND_I:
        if not S.profile.degenerate and abs(g1) > tol:
            raise BranchMismatch("case I requires g' = 0")
        if abs(k) <= tol:
            raise BranchMismatch("kappa = 0: the surface is planar and lambda vanishes")
        c = k * k + 1.0
        coeffs[0] = -1.0 / c
        coeffs[3] = -k * f1 / c
    elif case == Verdict.SECOND_KIND_II_I:
        if S.profile.degenerate or abs(jet.kappa_alpha) > tol:
            raise BranchMismatch("case II-i requires g' != 0 and kappa_alpha = 0")
        c = -1.0 / (1.0 + k * k)
        coeffs[:] = [c * f1 * f1, c * dk, 0.0, c * k * f1, c * f1 * g1, 0.0]
    elif case == Verdict.SECOND_KIND_II_II:
        if S.profile.degenerate or abs(k) > tol:
            raise BranchMismatch("case II-ii requires g' != 0 and kappa = 0")
        lam = compute_lambda(S, u, v)
        if abs(lam) <= tol:
            raise BranchMismatch("lambda vanishes")
        phi = -(f1 * g1 - f * jet.dfk) / (lam * f * f)
        coeffs[0] = phi * f1 / g1
        coeffs[4] = phi
    elif case == Verdict.SECOND_KIND_II_III_IMPOSSIBLE:
        if S.profile.degenerate or abs(k) <= tol or abs(jet.fk) <= tol:
            raise BranchMismatch("case II-iii requires kappa != 0 and f kappa_alpha != 0")
        c = -1.0 / (1.0 + jet.fk**2 + k * k)
        coeffs[0] = c * f1 * f1
        coeffs[3] = c * k * f1
        coeffs[4] = c * f1 * g1
    else:
        raise BranchMismatch(f"no closed-form C for {case}")
    return FrameBivector.from_coefficients(coeffs, frame)


# -- definitional check ------------------------------------------------------


@dataclass
class PointwiseCheck:
    residual_max: float
    C_drift_max: float
    C_frame_drift_max: float
    C_ref: FrameBivector
    lambda_samples: list
    center: tuple


def _check_grid(grid):
    us, vs = (np.asarray(g, dtype=float) for g in grid)
    if len(us) < MIN_GRID or len(vs) < MIN_GRID:
        raise GridTooSmall(f"need at least {MIN_GRID}x{MIN_GRID} points, got {len(us)}x{len(vs)}")
    return us, vs


def default_grid(S: MeridianSurface, nu=16, nv=16, h=FD_STEP):
    # the Richardson stencil reaches h; keep a 2h band free plus slack
    return sample_grid(S, nu, nv, margin=2.5 * h)


def _laplacian(S, u, v, mode, h):
    if mode == "closed":
        return laplacian_closed(S, u, v).ambient
    if mode == "fd":
        return laplacian_fd(S, u, v, h=h)
    raise ValueError(f"unknown laplacian mode {mode!r}")


def verify_pointwise(S: MeridianSurface, grid, tol=Tolerances(), lam=None, c_ref=None,
                     laplacian="closed", h=FD_STEP):
    """Check ``Delta G = lambda (G + C_ref)`` on ``grid``.

    Parameters
    ----------
    lam : callable, optional
        ``lam(u, v)``; defaults to :func:`compute_lambda`.
    c_ref : array_like, optional
        Ambient bivector. Defaults to ``Delta G / lambda - G`` at the grid
        center.
    laplacian : {"closed", "fd"}
        Which Laplacian route to use.

    Raises
    ------
    LambdaVanishes
        If ``|lambda| < condition_tol`` anywhere, or ``Delta G`` vanishes on
        the whole grid (a harmonic map admits no non-zero ``lambda``).
    """
    us, vs = _check_grid(grid)
    lam = lam or (lambda u, v: compute_lambda(S, u, v))
    uc, vc = 0.5 * (us[0] + us[-1]), 0.5 * (vs[0] + vs[-1])

    samples = []
    for u in us:
        for v in vs:
            L = lam(u, v)
            if not abs(L) >= tol.condition_tol:
                raise LambdaVanishes(f"|lambda|={abs(L):.3e} at ({u}, {v})")
            samples.append((float(u), float(v), float(L), _laplacian(S, u, v, laplacian, h),
                            gauss_map(S, u, v)))
    if max(np.linalg.norm(s[3]) for s in samples) <= tol.condition_tol:
        raise LambdaVanishes("Delta G vanishes on the grid (harmonic Gauss map)")

    frame_c = S.data(uc, vc).frame
    if c_ref is None:
        Lc = lam(uc, vc)
        if not abs(Lc) >= tol.condition_tol:
            raise LambdaVanishes(f"|lambda|={abs(Lc):.3e} at the grid center")
        c_amb = _laplacian(S, uc, vc, laplacian, h) / Lc - gauss_map(S, uc, vc)
    else:
        c_amb = np.asarray(c_ref, dtype=float)
    C_ref = FrameBivector.from_ambient(c_amb, frame_c)

    residual = drift = frame_drift = 0.0
    for u, v, L, dG, G in samples:
        residual = max(residual, float(np.linalg.norm(dG - L * (G + c_amb))))
        C_here = dG / L - G
        drift = max(drift, float(np.linalg.norm(C_here - c_amb)))
        coeffs = FrameBivector.from_ambient(C_here, S.data(u, v).frame).coefficients
        frame_drift = max(frame_drift, float(np.linalg.norm(coeffs - C_ref.coefficients)))
    return PointwiseCheck(residual, drift, frame_drift, C_ref,
                          [(u, v, L) for u, v, L, _, _ in samples], (uc, vc))


# -- classification ------------------------------------------------------------


@dataclass
class ClassificationReport:
    verdict: Verdict
    matched_case: Verdict
    lambda_samples: list = field(default_factory=list)
    C_estimate: FrameBivector = None
    C_closed_form: FrameBivector = None
    reference_point: tuple = None
    residual_max: float = math.nan
    C_drift_max: float = math.nan
    C_frame_drift_max: float = math.nan
    residual_fd_max: float = math.nan
    laplacian_max: float = math.nan
    lambda_spread: float = math.nan
    necessary_max: float = math.nan
    notes: list = field(default_factory=list)

    @property
    def definite(self):
        return is_definite(self.verdict)

    @property
    def proper(self):
        """Non-constant ``lambda`` (only meaningful for positive verdicts)."""
        return bool(self.lambda_spread > 0) and not self.lambda_constant

    lambda_constant_tol = 1e-10

    @property
    def lambda_constant(self):
        return bool(self.lambda_spread <= self.lambda_constant_tol)

    def to_text(self):
        """Flat ``key = value`` record, floats with 17 significant digits."""
        def num(x):
            return f"{x:.17g}"

        lines = [f"verdict = {self.verdict}", f"matched_case = {self.matched_case}"]
        for key in ("residual_max", "C_drift_max", "C_frame_drift_max", "residual_fd_max",
                    "laplacian_max", "lambda_spread", "necessary_max"):
            lines.append(f"{key} = {num(getattr(self, key))}")
        if self.lambda_samples:
            lines.append(f"lambda_constant = {str(self.lambda_constant).lower()}")
        if self.reference_point is not None:
            lines.append("reference_point = " + " ".join(num(x) for x in self.reference_point))
        for name, value in (("C_estimate", self.C_estimate), ("C_closed_form", self.C_closed_form)):
            if value is not None:
                lines.append(f"{name}.frame = " + " ".join(num(x) for x in value.coefficients))
                lines.append(f"{name}.ambient = " + " ".join(num(x) for x in value.ambient))
        lines.append(f"lambda_samples.count = {len(self.lambda_samples)}")
        for i, (u, v, L) in enumerate(self.lambda_samples):
            lines.append(f"lambda_samples[{i}] = {num(u)} {num(v)} {num(L)}")
        for i, note in enumerate(self.notes):
            lines.append(f"notes[{i}] = {note}")
        return "\n".join(lines) + "\n"


def _line(values, n):
    return np.linspace(values[0], values[-1], max(len(values), n))


def _necessary_conditions(S, us, vs, check):
    """Max residual of the three necessary identities with the fitted ``lambda``."""
    c = check.C_ref.ambient
    worst = 0.0
    for u in us:
        jet = S.profile.jet(u)
        for v in vs:
            k, dk = S.curve.kappa(v), S.curve.dkappa(v)
            dG = laplacian_closed(S, u, v).ambient
            G = gauss_map(S, u, v)
            w = G + c
            lam = float(dG @ w / (w @ w))
            third = (lam * jet.f**2 * jet.dg
                     - (jet.dg * (1 + jet.fk**2 + k * k) - jet.f * jet.df * jet.dfk))
            worst = max(worst, abs(jet.kappa_alpha * dk), abs(k * jet.dfk), abs(third))
    return worst


def classify(S: MeridianSurface, grid=None, tol=Tolerances(), h=FD_STEP):
    """Decide which pointwise 1-type family ``S`` belongs to.

    Tests run in a fixed order: harmonicity; the ``g' = 0`` branch; first
    kind; then the second-kind subcases. Every positive verdict is confirmed
    by :func:`verify_pointwise` with the closed-form Laplacian and again with
    the finite-difference Laplacian.
    """
    us, vs = _check_grid(grid if grid is not None else default_grid(S, h=h))
    ctol = tol.condition_tol
    # conditions involving f''' inherit the profile's derivative error
    ctol3 = max(ctol, 10.0 * S.profile.derivative_error)
    NOT = Verdict.NOT_POINTWISE_1_TYPE

    lap_max = max(np.linalg.norm(laplacian_closed(S, u, v).ambient) for u in us for v in vs)
    if lap_max <= ctol:
        report = ClassificationReport(Verdict.HARMONIC_PLANE, Verdict.HARMONIC_PLANE,
                                      laplacian_max=lap_max)
        report.notes.append("Delta G vanishes on the grid; totally geodesic")
        return report

    uline, vline = _line(us, MIN_LINE_SAMPLES), _line(vs, MIN_LINE_SAMPLES)
    jets = [S.profile.jet(u) for u in uline]
    kap = np.array([S.curve.kappa(v) for v in vline])
    dkap = np.array([S.curve.dkappa(v) for v in vline])
    f1 = np.array([j.df for j in jets])
    g1 = np.array([j.dg for j in jets])
    ka = np.array([j.kappa_alpha for j in jets])
    fk = np.array([j.fk for j in jets])
    r1 = np.array([j.df * j.dg - j.f * j.dfk for j in jets])

    kappa_zero = np.max(np.abs(kap)) <= ctol
    kappa_const = np.ptp(kap) <= ctol

    notes = []
    candidate = None
    matched = None
    if S.profile.degenerate or np.max(np.abs(g1)) <= ctol:
        if kappa_const and not kappa_zero:
            candidate = Verdict.SECOND_KIND_I
        else:
            matched = Verdict.FIRST_KIND_CASE_I_IMPOSSIBLE
            notes.append("g' = 0 with non-constant kappa: no first kind (C = 0 forces a plane) "
                         "and second kind needs constant kappa")
    elif np.min(np.abs(g1)) <= ctol:
        matched = NOT
        notes.append("g' vanishes on part of the grid; mixed branch")
    else:
        first = (np.max(np.abs(dkap)) <= ctol
                 and np.max(np.abs(kap)) * np.max(np.abs(f1)) <= ctol
                 and np.max(np.abs(r1)) <= ctol3)
        if first and kappa_zero:
            candidate = Verdict.FIRST_KIND_II_I
        elif first and np.max(np.abs(f1)) <= ctol:
            candidate = Verdict.FIRST_KIND_II_II
        elif np.max(np.abs(ka)) <= ctol:
            if kappa_const:
                candidate = Verdict.SECOND_KIND_II_I
            else:
                matched = Verdict.SECOND_KIND_II_I
                notes.append("kappa_alpha = 0 but kappa is not constant")
        elif kappa_zero:
            candidate = Verdict.SECOND_KIND_II_II
        elif kappa_const and np.ptp(fk) <= ctol3 and np.min(np.abs(fk)) > ctol:
            matched = Verdict.SECOND_KIND_II_III_IMPOSSIBLE
            notes.append("kappa and f kappa_alpha constant and non-zero: C cannot be constant")
        else:
            matched = NOT
            notes.append("necessary conditions kappa_alpha kappa' = 0, kappa (f kappa_alpha)' = 0 fail")

    if candidate is None:
        report = ClassificationReport(NOT, matched, laplacian_max=lap_max, notes=notes)
        _attach_probe(report, S, us, vs, tol, h)
        return report

    report = ClassificationReport(candidate, candidate, laplacian_max=lap_max, notes=notes)
    try:
        closed = verify_pointwise(S, (us, vs), tol)
        fd = verify_pointwise(S, (us, vs), tol, c_ref=closed.C_ref.ambient, laplacian="fd", h=h)
    except LambdaVanishes as exc:
        report.verdict = NOT
        report.notes.append(f"definitional check failed: {exc}")
        return report
    _fill(report, closed)
    report.residual_fd_max = fd.residual_max
    report.necessary_max = _necessary_conditions(S, us, vs, closed)
    try:
        report.C_closed_form = compute_C(S, candidate, *closed.center, tol=ctol)
    except BranchMismatch as exc:
        report.notes.append(f"closed-form C unavailable: {exc}")

    failures = []
    if closed.residual_max > tol.residual_tol:
        failures.append(f"residual {closed.residual_max:.3e} > {tol.residual_tol:g}")
    if closed.C_drift_max > tol.drift_tol:
        failures.append(f"C drift {closed.C_drift_max:.3e} > {tol.drift_tol:g}")
    if fd.residual_max > 10 * tol.residual_tol:
        failures.append(f"FD residual {fd.residual_max:.3e} > {10 * tol.residual_tol:g}")
    if candidate in FIRST_KIND and np.linalg.norm(closed.C_ref.ambient) > tol.drift_tol:
        failures.append("first kind but C estimate is not zero")
    if failures:
        report.verdict = NOT
        report.notes.extend(failures)
    if min(L for _, _, L in report.lambda_samples) <= 0:
        report.notes.append("lambda is not positive on the grid")
    return report


def _fill(report, check):
    report.lambda_samples = check.lambda_samples
    report.C_estimate = check.C_ref
    report.reference_point = check.center
    report.residual_max = check.residual_max
    report.C_drift_max = check.C_drift_max
    report.C_frame_drift_max = check.C_frame_drift_max
    lams = [L for _, _, L in check.lambda_samples]
    report.lambda_spread = float(np.ptp(lams))


def _attach_probe(report, S, us, vs, tol, h):
    """Record how badly the definitional check fails for a negative verdict."""
    try:
        check = verify_pointwise(S, (us, vs), tol)
    except (LambdaVanishes, BranchMismatch) as exc:
        report.notes.append(f"definitional probe skipped: {exc}")
        return
    _fill(report, check)
    if report.matched_case == Verdict.FIRST_KIND_CASE_I_IMPOSSIBLE:
        first_res = 0.0
        for u in us:
            for v in vs:
                dG, G = laplacian_closed(S, u, v).ambient, gauss_map(S, u, v)
                first_res = max(first_res, float(np.linalg.norm(dG - (dG @ G) * G)))
        report.notes.append(f"first-kind residual max |Delta G - <Delta G, G> G| = {first_res:.17g}")
