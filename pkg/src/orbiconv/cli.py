"""Command-line pipeline for periodicity curves, basis dumps, smoothing and meshes.

Every run writes its outputs plus ``manifest.json`` into ``--out-dir``.  The
manifest records all parameters and a SHA-256 for every output file; it holds
no timestamps or absolute paths, so identical flags give identical bytes.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .basis import (
    ORDERING,
    BasisSpec,
    enumerate_basis,
    evaluate_mode,
    max_resolvable_modes,
    sample_mode,
)
from .engine import (
    NyquistError,
    check_resolvable,
    dirichlet_energy,
    evaluate_expansion,
    forward_transform,
    inner_product,
    inverse_transform,
    lowpass_filter_field,
    truncate,
)
from .export import fmt, sha256_file, write_csv, write_json, write_jsonl
from .field import GridField
from .geometry import F0_HZ, export_mesh
from .periodicity import PeriodicityConfig, p_jnd, p_jnd_sym, p_plus_field, p_plus_grid

EXIT_OK, EXIT_USAGE, EXIT_NYQUIST, EXIT_IO = 0, 2, 3, 4

FORMATS = {
    "periodicity-curve": ("csv", "json"),
    "basis": ("json", "csv"),
    "smooth": ("csv",),
    "section": ("csv", "json"),
    "moebius": ("ply",),
}


class UsageError(ValueError):
    pass


def _positive_int(raw: str) -> int:
    v = int(raw)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw}")
    return v


def _nonneg_int(raw: str) -> int:
    v = int(raw)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {raw}")
    return v


def _positive_float(raw: str) -> float:
    v = float(raw)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {raw}")
    return v


def _int_list(raw: str) -> list[int]:
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


# -- shared pieces -----------------------------------------------------------


def _cfg(args) -> PeriodicityConfig:
    return PeriodicityConfig(jnd_cents=args.jnd_cents)


def _basis(args):
    spec = BasisSpec(gamma=args.gamma, n_modes=args.n_modes)
    basis = enumerate_basis(spec)
    check_resolvable(basis, args.grid)
    return basis


def _check_n_cut(args):
    if args.n_cut >= args.n_modes:
        raise UsageError(f"--n-cut {args.n_cut} must be below --n-modes {args.n_modes}")


def _field_rows(field: GridField, domain: str):
    c = field.coords()
    s = field.samples
    for i in range(field.n):
        for j in range(field.n):
            if domain == "fundamental" and j > i:
                break
            yield (c[i], c[j], s[i, j])


def write_field_csv(path, field: GridField, domain: str = "fundamental") -> Path:
    return write_csv(path, ["x", "y", "value"], _field_rows(field, domain))


def write_coeff_csv(path, coeffs, basis) -> Path:
    rows = ((m.k, m.c1, m.c2, m.eigenvalue, c) for m, c in zip(basis, coeffs.coeffs))
    return write_csv(path, ["k", "c1", "c2", "eigenvalue", "coefficient"], rows)


def _manifest(args, outputs: dict, diagnostics: dict | None = None) -> dict:
    flags = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("func", "out_dir") and not k.startswith("_")
    }
    return {
        "command": args.command,
        "version": __version__,
        "flags": flags,
        "parameters": {
            "gamma": args.gamma,
            "jnd_cents": args.jnd_cents,
            "n_cut": args.n_cut,
            "n_modes": args.n_modes,
            "grid": args.grid,
            "f0_hz": args.f0,
        },
        "basis_ordering": ORDERING,
        "truncation": f"first {args.n_modes} symmetric modes",
        "quadrature": "rectangle rule on the uniform torus grid, orbifold weight 1/2",
        "diagnostics": diagnostics or {},
        "outputs": {name: sha256_file(p) for name, p in sorted(outputs.items())},
    }


def _finish(args, outputs: dict, diagnostics: dict | None = None) -> dict:
    manifest = _manifest(args, outputs, diagnostics)
    write_json(Path(args.out_dir) / "manifest.json", manifest)
    return manifest


def _section_points(args):
    c = args.gamma / 2.0
    t = np.linspace(-c, c, args.section_points)
    return t, c + t, c - t


def _p_plus_on(xs, ys, args):
    cfg = _cfg(args)
    return np.array([p_plus_field(x, y, cfg, args.gamma) for x, y in zip(xs, ys)])


# -- subcommands -------------------------------------------------------------


def cmd_periodicity_curve(args) -> dict:
    if not (0.0 <= args.d_min <= args.d_max <= 1200.0):
        raise UsageError("need 0 <= --d-min <= --d-max <= 1200")
    if not args.d_step > 0:
        raise UsageError("--d-step must be positive")
    cfg = _cfg(args)
    count = int(math.floor((args.d_max - args.d_min) / args.d_step + 1e-9)) + 1
    rows = []
    for i in range(count):
        d = args.d_min + i * args.d_step
        rows.append((d, p_jnd(d, cfg), p_jnd_sym(d, cfg)))
    out = Path(args.out_dir)
    if args.format == "json":
        path = write_json(out / "periodicity_curve.json", [
            {"d_cents": float(fmt(d)), "P_JND": float(fmt(a)), "P_plus": float(fmt(b))}
            for d, a, b in rows
        ])
    else:
        path = write_csv(out / "periodicity_curve.csv", ["d_cents", "P_JND", "P_plus"], rows)
    return _finish(args, {path.name: path})


def cmd_basis(args) -> dict:
    basis = _basis(args)
    out = Path(args.out_dir)
    outputs = {}
    p = write_jsonl(out / "basis_manifest.jsonl", (m.as_record() for m in basis))
    outputs[p.name] = p
    for k in _int_list(args.dump_modes):
        if not 0 <= k < len(basis):
            raise UsageError(f"--dump-modes index {k} outside the basis")
        field = GridField(args.gamma, sample_mode(basis[k], args.grid))
        p = write_field_csv(out / f"mode_{k:04d}.csv", field, args.domain)
        outputs[p.name] = p
    return _finish(args, outputs, {"max_resolvable_modes": max_resolvable_modes(args.grid, args.gamma)})


def _smoothing(args):
    """Sample P+, transform it, and return (field, basis, coefficients)."""
    _check_n_cut(args)
    basis = _basis(args)
    field = p_plus_grid(args.grid, args.gamma, _cfg(args))
    return field, basis, forward_transform(field, basis)


def cmd_smooth(args) -> dict:
    field, basis, fc = _smoothing(args)
    kept = truncate(fc, args.n_cut)
    smoothed = inverse_transform(kept, basis, args.gamma, args.grid)
    kernel = lowpass_filter_field(args.n_cut, basis, args.gamma, args.grid)
    resid = field - smoothed
    out = Path(args.out_dir)
    outputs = {}
    for name, f in (("periodicity_field.csv", field), ("filter_field.csv", kernel),
                    ("smoothed_field.csv", smoothed)):
        p = write_field_csv(out / name, f, args.domain)
        outputs[p.name] = p
    p = write_coeff_csv(out / "coefficients.csv", fc, basis)
    outputs[p.name] = p
    p = write_jsonl(out / "basis_manifest.jsonl", (m.as_record() for m in basis))
    outputs[p.name] = p
    diagnostics = {
        "smoothed_min": float(smoothed.samples.min()),
        "smoothed_max": float(smoothed.samples.max()),
        "field_min": float(field.samples.min()),
        "field_max": float(field.samples.max()),
        "l2_norm": math.sqrt(inner_product(field, field)),
        "l2_residual": math.sqrt(max(inner_product(resid, resid), 0.0)),
        "dirichlet_energy_smoothed": dirichlet_energy(kept, basis),
        "negative_overshoot": bool(smoothed.samples.min() < 0.0),
    }
    return _finish(args, outputs, diagnostics)


def section_table(args):
    """Rows (t, sampled P+, smoothed P+) along the line (c + t, c - t)."""
    field, basis, fc = _smoothing(args)
    t, xs, ys = _section_points(args)
    kept = args.n_cut + 1
    sampled = _p_plus_on(xs, ys, args)
    smoothed = evaluate_expansion(fc.coeffs[:kept], basis[:kept], xs, ys)
    return t, sampled, smoothed


def cmd_section(args) -> dict:
    t, sampled, smoothed = section_table(args)
    out = Path(args.out_dir)
    rows = list(zip(t, sampled, smoothed))
    if args.format == "json":
        path = write_json(out / "section.json", [
            {"arc_parameter": float(fmt(a)), "P_plus_sampled": float(fmt(b)),
             "P_plus_smoothed": float(fmt(c))} for a, b, c in rows
        ])
    else:
        path = write_csv(out / "section.csv",
                         ["arc_parameter", "P_plus_sampled", "P_plus_smoothed"], rows)
    return _finish(args, {path.name: path}, {
        "smoothed_min": float(np.min(smoothed)),
        "sampled_min": float(np.min(sampled)),
    })


def moebius_field(args):
    """Vectorized scalar function (x, y) -> value selected by ``--field``."""
    if args.field == "periodicity":
        cfg = _cfg(args)

        def fn(x, y):
            return np.vectorize(lambda a, b: p_plus_field(a, b, cfg, args.gamma))(x, y)
        return fn
    if args.field == "eigenfunction":
        spec = BasisSpec(gamma=args.gamma, n_modes=max(args.mode_index + 1, 1))
        mode = enumerate_basis(spec)[args.mode_index]
        return lambda x, y: evaluate_mode(mode, x, y)
    _, basis, fc = _smoothing(args)
    kept = args.n_cut + 1
    return lambda x, y: evaluate_expansion(fc.coeffs[:kept], basis[:kept], x, y)


def cmd_moebius(args) -> dict:
    fn = moebius_field(args)
    path = Path(args.out_dir) / "moebius.ply"
    mesh = export_mesh(fn, args.resolution, path, args.gamma)
    return _finish(args, {path.name: path}, {
        "vertices": int(len(mesh.vertices)),
        "faces": int(len(mesh.faces)),
        "scalar_min": float(mesh.scalars.min()),
        "scalar_max": float(mesh.scalars.max()),
    })


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=_positive_float, default=12.0,
                        help="period of the pitch torus in semitones (default 12)")
    common.add_argument("--grid", type=_positive_int, default=144,
                        help="torus grid resolution per axis (default 144)")
    common.add_argument("--jnd-cents", type=_positive_float, default=20.0)
    common.add_argument("--n-cut", type=_nonneg_int, default=529,
                        help="keep modes k <= n-cut when smoothing (default 529)")
    common.add_argument("--n-modes", type=_positive_int, default=2048,
                        help="number of enumerated basis modes (default 2048)")
    common.add_argument("--f0", type=_positive_float, default=F0_HZ,
                        help="reference frequency of pitch 0 in Hz (recorded only)")
    common.add_argument("--out-dir", default=".")
    common.add_argument("--format", default=None)
    common.add_argument("--domain", choices=("fundamental", "torus"), default="fundamental",
                        help="grid CSV extent: triangle y <= x, or the full torus")

    parser = argparse.ArgumentParser(
        prog="orbiconv",
        description="Spectral smoothing of interval periodicity on the dyad orbifold.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("periodicity-curve", parents=[common],
                       help="P_JND and P_plus as functions of the interval in cents")
    p.add_argument("--d-min", type=float, default=0.0)
    p.add_argument("--d-max", type=float, default=1200.0)
    p.add_argument("--d-step", type=float, default=1.0)
    p.set_defaults(func=cmd_periodicity_curve)

    p = sub.add_parser("basis", parents=[common], help="basis manifest and sampled modes")
    p.add_argument("--dump-modes", default="",
                   help="comma list / ranges of mode indices to dump as grid CSVs, e.g. 0-8")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("smooth", parents=[common],
                       help="sampled P_plus, the low-pass kernel and the smoothed field")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("section", parents=[common],
                       help="P_plus and its smoothing along the anti-diagonal section")
    p.add_argument("--section-points", type=_positive_int, default=1201)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("moebius", parents=[common], help="PLY mesh of the Moebius strip")
    p.add_argument("--resolution", type=_positive_int, default=48)
    p.add_argument("--field", choices=("periodicity", "smoothed", "eigenfunction"),
                   default="smoothed")
    p.add_argument("--mode-index", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_moebius)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    allowed = FORMATS[args.command]
    if args.format is None:
        args.format = allowed[0]
    elif args.format not in allowed:
        parser.error(f"{args.command} supports --format {', '.join(allowed)}")
    try:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NyquistError as exc:
        print(f"{parser.prog}: refused: {exc}", file=sys.stderr)
        return EXIT_NYQUIST
    except OSError as exc:
        print(f"{parser.prog}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
