"""Flat ``key = value`` surface configuration records.

Example::

    # developable ruled surface
    profile.kind = linear-f
    profile.a = 1
    profile.a1 = 1
    curve.kind = circle
    curve.kappa0 = 1
    domain.u = 0 1
    domain.v = 0 3
    grid = 16x16

All quantities are dimensionless. Blank lines and ``#`` comments are ignored.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from . import curves
from .errors import ConfigError, MeridianError
from .odes import load_profile_csv
from .surface import MeridianSurface

PROFILE_KINDS = ("linear-f", "constant-f", "linear-both", "sine-demo", "from-ode-csv")
CURVE_KINDS = ("circle", "numeric")

_PROFILE_KEYS = {
    "linear-f": {"a", "a1"},
    "constant-f": {"a"},
    "linear-both": {"a", "a1", "b"},
    "sine-demo": {"amplitude", "offset", "frequency"},
    "from-ode-csv": {"csv"},
}
_COMMON_PROFILE_KEYS = {"kind", "eps", "g_offset"}
_CURVE_KEYS = {"circle": {"kind", "kappa0"}, "numeric": {"kind", "table", "kappa", "v0"}}
_TOP_KEYS = {"domain.u", "domain.v", "grid"}


@dataclass
class SurfaceConfig:
    profile: dict
    curve: dict
    domain_u: tuple = None
    domain_v: tuple = None
    grid: tuple = (16, 16)
    source: str = "<string>"
    lines: dict = field(default_factory=dict)

    def line_of(self, key):
        return self.lines.get(key)


def parse_grid(text, line=None, key="grid"):
    try:
        nu, nv = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"expected NxM, got {text!r}", line, key) from None
    if nu < 2 or nv < 2:
        raise ConfigError("grid needs at least 2 points per axis", line, key)
    return nu, nv


def _pair(text, line, key):
    parts = text.replace(",", " ").split()
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"expected two numbers 'lo hi', got {text!r}", line, key) from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ConfigError(f"need finite lo < hi, got {text!r}", line, key)
    return lo, hi


def parse_config(text, source="<string>"):
    raw, lines = {}, {}
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", no)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", no)
        if key in raw:
            raise ConfigError("duplicate key", no, key)
        raw[key], lines[key] = value, no

    profile = {k[len("profile."):]: v for k, v in raw.items() if k.startswith("profile.")}
    curve = {k[len("curve."):]: v for k, v in raw.items() if k.startswith("curve.")}
    for key in raw:
        if not (key.startswith("profile.") or key.startswith("curve.") or key in _TOP_KEYS):
            raise ConfigError("unknown key", lines[key], key)

    pkind = profile.get("kind")
    if pkind not in PROFILE_KINDS:
        raise ConfigError(f"must be one of {', '.join(PROFILE_KINDS)}",
                          lines.get("profile.kind"), "profile.kind")
    allowed = _PROFILE_KEYS[pkind] | _COMMON_PROFILE_KEYS
    for k in profile:
        if k not in allowed:
            raise ConfigError(f"not a parameter of {pkind}", lines[f"profile.{k}"], f"profile.{k}")
    ckind = curve.get("kind", "circle")
    if ckind not in CURVE_KINDS:
        raise ConfigError(f"must be one of {', '.join(CURVE_KINDS)}",
                          lines.get("curve.kind"), "curve.kind")
    for k in curve:
        if k not in _CURVE_KEYS[ckind]:
            raise ConfigError(f"not a parameter of {ckind} curves", lines[f"curve.{k}"],
                              f"curve.{k}")
    curve["kind"] = ckind

    cfg = SurfaceConfig(profile, curve, source=source, lines=lines)
    if "domain.u" in raw:
        cfg.domain_u = _pair(raw["domain.u"], lines["domain.u"], "domain.u")
    elif pkind != "from-ode-csv":
        raise ConfigError("missing (required unless profile.kind = from-ode-csv)", None,
                          "domain.u")
    if "domain.v" in raw:
        cfg.domain_v = _pair(raw["domain.v"], lines["domain.v"], "domain.v")
    elif ckind == "numeric":
        raise ConfigError("missing (required for numeric curves)", None, "domain.v")
    if "grid" in raw:
        cfg.grid = parse_grid(raw["grid"], lines["grid"])
    return cfg


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text, source=str(path))


def _num(cfg, section, key, default=None):
    store = cfg.profile if section == "profile" else cfg.curve
    full = f"{section}.{key}"
    if key not in store:
        if default is None:
            raise ConfigError("missing", None, full)
        return default
    try:
        val = float(store[key])
    except ValueError:
        raise ConfigError(f"not a number: {store[key]!r}", cfg.line_of(full), full) from None
    if not math.isfinite(val):
        raise ConfigError("must be finite", cfg.line_of(full), full)
    return val


def _sign(cfg, key, default=1.0):
    val = _num(cfg, "profile", key, default)
    if val not in (1.0, -1.0):
        raise ConfigError("must be +1 or -1", cfg.line_of(f"profile.{key}"), f"profile.{key}")
    return int(val)


def build_profile(cfg: SurfaceConfig):
    kind = cfg.profile["kind"]
    dom = cfg.domain_u
    g0 = _num(cfg, "profile", "g_offset", 0.0)
    try:
        if kind == "linear-f":
            a = _num(cfg, "profile", "a", 1.0)
            if abs(a) != 1.0:
                raise ConfigError("linear-f has g' = 0, so |a| must be 1",
                                  cfg.line_of("profile.a"), "profile.a")
            return curves.linear_f_profile(_num(cfg, "profile", "a1"), dom, sign=int(a),
                                           g_offset=g0)
        if kind == "constant-f":
            return curves.constant_f_profile(_num(cfg, "profile", "a"), dom,
                                             eps=_sign(cfg, "eps"), g_offset=g0)
        if kind == "linear-both":
            a = _num(cfg, "profile", "a")
            eps = _sign(cfg, "eps")
            if "b" in cfg.profile:
                b = _num(cfg, "profile", "b")
                if abs(a * a + b * b - 1.0) > 1e-12 or b == 0.0:
                    raise ConfigError("need a^2 + b^2 = 1 with b != 0",
                                      cfg.line_of("profile.b"), "profile.b")
                eps = 1 if b > 0 else -1
            return curves.linear_both_profile(a, _num(cfg, "profile", "a1"), dom, eps=eps,
                                              g_offset=g0)
        if kind == "sine-demo":
            return curves.sine_profile(_num(cfg, "profile", "amplitude", 0.5),
                                       _num(cfg, "profile", "offset", 1.5), dom,
                                       eps=_sign(cfg, "eps"), g_offset=g0,
                                       frequency=_num(cfg, "profile", "frequency", 1.0))
        # from-ode-csv
        csv_path = Path(cfg.profile["csv"])
        if not csv_path.is_absolute() and cfg.source != "<string>":
            csv_path = Path(cfg.source).parent / csv_path
        prof = load_profile_csv(csv_path, eps=_sign(cfg, "eps"), g_offset=g0)
        if dom is not None:
            lo, hi = prof.domain
            if dom[0] < lo or dom[1] > hi:
                raise ConfigError(f"outside the sampled range [{lo}, {hi}]",
                                  cfg.line_of("domain.u"), "domain.u")
            prof.domain = dom
        return prof
    except ConfigError:
        raise
    except (MeridianError, ValueError, OSError) as exc:
        raise ConfigError(str(exc), cfg.line_of("profile.kind"), "profile") from None


def _kappa_table(cfg):
    if "table" in cfg.curve:
        path = Path(cfg.curve["table"])
        if not path.is_absolute() and cfg.source != "<string>":
            path = Path(cfg.source).parent / path
        try:
            data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc), cfg.line_of("curve.table"), "curve.table") from None
    elif "kappa" in cfg.curve:
        try:
            data = np.array([[float(x) for x in item.split(":")]
                             for item in cfg.curve["kappa"].split(",")])
        except ValueError:
            raise ConfigError("expected 'v:kappa, v:kappa, ...'", cfg.line_of("curve.kappa"),
                              "curve.kappa") from None
    else:
        raise ConfigError("numeric curves need curve.table or curve.kappa", None, "curve")
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 2:
        raise ConfigError("kappa table needs at least two (v, kappa) rows", None, "curve")
    if np.any(np.diff(data[:, 0]) <= 0):
        raise ConfigError("kappa table abscissae must increase", None, "curve")
    return data


def build_curve(cfg: SurfaceConfig):
    if cfg.curve["kind"] == "circle":
        return curves.CircleCurve(_num(cfg, "curve", "kappa0", 0.0), cfg.domain_v)
    data = _kappa_table(cfg)
    spline = CubicSpline(data[:, 0], data[:, 1])
    return curves.FrenetCurve(spline, cfg.domain_v, dkappa=spline.derivative(),
                              v0=_optional_v0(cfg))


def _optional_v0(cfg):
    return _num(cfg, "curve", "v0") if "v0" in cfg.curve else None


def build_surface(cfg: SurfaceConfig):
    profile = build_profile(cfg)
    curve = build_curve(cfg)
    try:
        return MeridianSurface(profile, curve)
    except MeridianError as exc:
        raise ConfigError(str(exc), cfg.line_of("profile.kind"), "profile") from None
