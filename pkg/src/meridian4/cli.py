"""Command-line front end.

Subcommands::

    meridian4 classify    --config PATH [--grid NxM] [--tol-residual X] [--tol-drift X] [--out PATH]
    meridian4 verify      --config PATH [--mode closed|fd|both] [--grid NxM] [--out PATH]
    meridian4 solve-ode   --kind first|second --f0 X --df0 X --d2f0 X [--d3f0 X] --span A B --out PATH
    meridian4 export-mesh --config PATH [--projection drop:K | matrix:m11,...,m34] [--grid NxM] --out PATH

Exit codes: 0 success (definite verdict / discrepancy within tolerance),
2 classify found no pointwise 1-type family, 1 any error or a failed
verification.
"""

import argparse
import logging
import sys
from contextlib import contextmanager

import numpy as np

from .classify import Tolerances, Verdict, classify, default_grid
from .config import build_surface, load_config, parse_grid
from .errors import GridTooSmall, MeridianError
from .gaussmap import FD_STEP, laplacian_closed, laplacian_fd
from .odes import solve_first_kind, solve_second_kind
from .surface import eval_point, sample_grid

log = logging.getLogger("meridian4")

EXIT_OK, EXIT_ERROR, EXIT_NOT_1_TYPE = 0, 1, 2
VERIFY_TOL = 1e-5


def _num(x):
    return f"{x:.17g}"


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _grid_arg(text):
    try:
        return parse_grid(text)
    except MeridianError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _resolve_grid(args, cfg):
    return args.grid if args.grid is not None else cfg.grid


# -- classify ---------------------------------------------------------------------


def cmd_classify(args):
    cfg = load_config(args.config)
    S = build_surface(cfg)
    tol = Tolerances(condition_tol=args.tol_condition, residual_tol=args.tol_residual,
                     drift_tol=args.tol_drift)
    nu, nv = _resolve_grid(args, cfg)
    report = classify(S, default_grid(S, nu, nv), tol)
    with _output(args.out) as fh:
        fh.write(report.to_text())
    log.info("verdict %s", report.verdict)
    return EXIT_NOT_1_TYPE if report.verdict == Verdict.NOT_POINTWISE_1_TYPE else EXIT_OK


# -- verify -------------------------------------------------------------------------


def cmd_verify(args):
    cfg = load_config(args.config)
    S = build_surface(cfg)
    nu, nv = _resolve_grid(args, cfg)
    if nu < 8 or nv < 8:
        raise GridTooSmall(f"need at least 8x8 points, got {nu}x{nv}")
    us, vs = default_grid(S, nu, nv)
    lines = [f"mode = {args.mode}", f"grid = {nu}x{nv}", f"fd_step = {_num(FD_STEP)}"]
    errs = []
    i = 0
    for u in us:
        for v in vs:
            lines.append(f"point[{i}] = {_num(u)} {_num(v)}")
            closed = fd = None
            if args.mode in ("closed", "both"):
                closed = laplacian_closed(S, u, v).ambient
                lines.append(f"closed[{i}] = " + " ".join(_num(c) for c in closed))
            if args.mode in ("fd", "both"):
                fd = laplacian_fd(S, u, v)
                lines.append(f"fd[{i}] = " + " ".join(_num(c) for c in fd))
            if closed is not None and fd is not None:
                errs.append(np.linalg.norm(fd - closed) / max(1.0, np.linalg.norm(closed)))
            i += 1
    status = EXIT_OK
    if errs:
        worst, mean = max(errs), float(np.mean(errs))
        lines += [f"discrepancy_max = {_num(worst)}", f"discrepancy_mean = {_num(mean)}",
                  f"tolerance = {_num(VERIFY_TOL)}", f"pass = {str(worst <= VERIFY_TOL).lower()}"]
        status = EXIT_OK if worst <= VERIFY_TOL else EXIT_ERROR
    with _output(args.out) as fh:
        fh.write("\n".join(lines) + "\n")
    return status


# -- solve-ode ----------------------------------------------------------------------


def cmd_solve_ode(args):
    span = tuple(args.span)
    if args.kind == "first":
        sol = solve_first_kind(args.f0, args.df0, args.d2f0, span, n_samples=args.samples)
    else:
        sol = solve_second_kind(args.f0, args.df0, args.d2f0, span, d3f0=args.d3f0,
                                n_samples=args.samples)
    if sol.boundary_reached:
        log.warning("branch boundary reached at u=%s; writing the partial solution", sol.span[1])
    if args.out is None or args.out == "-":
        sys.stdout.write("u,f,df,d2f\n")
        for row in zip(sol.u, sol.f, sol.df, sol.d2f):
            sys.stdout.write(",".join(_num(x) for x in row) + "\n")
    else:
        sol.write_csv(args.out)
    return EXIT_OK


# -- export-mesh ----------------------------------------------------------------------


def parse_projection(text):
    """``drop:K`` (1-based axis of E^4 to drop) or ``matrix:`` followed by 12 numbers (3x4, row-major)."""
    kind, _, rest = text.partition(":")
    if kind == "drop":
        k = int(rest or 4)
        if not 1 <= k <= 4:
            raise ValueError("drop axis must be 1..4")
        return np.delete(np.eye(4), k - 1, axis=0)
    if kind == "matrix":
        vals = [float(x) for x in rest.replace(" ", "").split(",") if x]
        if len(vals) != 12:
            raise ValueError("orthographic matrix needs 12 entries (3x4 row-major)")
        return np.array(vals).reshape(3, 4)
    raise ValueError(f"unknown projection {text!r}; use drop:K or matrix:...")


def mesh_lines(S, nu, nv, P):
    """OBJ-style ``v``/``f`` lines of the projected grid mesh (1-based faces)."""
    (u0, u1), (v0, v1) = S.domain
    us, vs = np.linspace(u0, u1, nu), np.linspace(v0, v1, nv)
    out = []
    for u in us:
        for v in vs:
            x, y, z = P @ eval_point(S, u, v)
            out.append(f"v {_num(x)} {_num(y)} {_num(z)}")
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b, c, d = a + nv, a + nv + 1, a + 1
            out.append(f"f {a} {b} {c}")
            out.append(f"f {a} {c} {d}")
    return out


def cmd_export_mesh(args):
    cfg = load_config(args.config)
    S = build_surface(cfg)
    P = parse_projection(args.projection)
    if np.linalg.matrix_rank(P) < 3:
        log.warning("projection matrix has rank < 3; the mesh will be degenerate")
    nu, nv = _resolve_grid(args, cfg)
    with _output(args.out) as fh:
        fh.write("\n".join(mesh_lines(S, nu, nv, P)) + "\n")
    return EXIT_OK


# -- entry point -------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="meridian4",
                                description="Meridian surfaces in E^4 and their Gauss maps.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a configured surface")
    c.add_argument("--config", required=True)
    c.add_argument("--tol-residual", type=float, default=Tolerances.residual_tol)
    c.add_argument("--tol-drift", type=float, default=Tolerances.drift_tol)
    c.add_argument("--tol-condition", type=float, default=Tolerances.condition_tol)
    c.add_argument("--grid", type=_grid_arg)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="compare closed-form and finite-difference Laplacians")
    v.add_argument("--config", required=True)
    v.add_argument("--mode", choices=("closed", "fd", "both"), default="both")
    v.add_argument("--grid", type=_grid_arg)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("solve-ode", help="integrate a profile ODE and write CSV")
    o.add_argument("--kind", choices=("first", "second"), required=True)
    o.add_argument("--f0", type=float, required=True)
    o.add_argument("--df0", type=float, required=True)
    o.add_argument("--d2f0", type=float, required=True)
    o.add_argument("--d3f0", type=float, default=0.0, help="second kind only")
    o.add_argument("--span", type=float, nargs=2, required=True, metavar=("U0", "U1"))
    o.add_argument("--samples", type=int, default=1001)
    o.add_argument("--out")
    o.set_defaults(func=cmd_solve_ode)

    m = sub.add_parser("export-mesh", help="write a projected triangle mesh")
    m.add_argument("--config", required=True)
    m.add_argument("--projection", default="drop:4")
    m.add_argument("--grid", type=_grid_arg)
    m.add_argument("--out")
    m.set_defaults(func=cmd_export_mesh)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (MeridianError, ValueError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
