"""Command-line front end.

Conventions shared by all subcommands: ranges are ``a..b`` (inclusive) or
comma lists; probes are ``kind:key=val,...``; models are
``name[:R=...,genus=...]``.  CSV output uses scientific notation with 16
digits after the point, JSON is plain UTF-8; identical inputs give
byte-identical outputs.  Exit codes: 0 success, 2 usage error, 3 numerical
failure (with a JSON error body on stdout/file).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fitting, flow, geometry, lattice, pairings, spectra, weyl
from .density import density_curve
from .probes import parse_probe
from .spectra import model_quadrature, parse_model


def _fmt(x: float) -> str:
    return format(float(x), ".16e")


def parse_int_range(text: str):
    """'a..b' inclusive, or 'a,b,c', or a single integer."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(v) for v in text.split(",")]


def parse_float_list(text: str):
    return [float(v) for v in text.split(",")]


def _write(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload) -> None:
    _write(args, json.dumps(payload, indent=2) + "\n")


def cmd_spectrum(args):
    model = parse_model(args.model)
    lines = spectra.spectrum(model, args.N, args.cutoff)
    rows = ["nu,multiplicity,nu_over_N"]
    rows += [f"{_fmt(l.nu)},{l.multiplicity},{_fmt(l.nu / args.N)}" for l in lines]
    _write(args, "\n".join(rows) + "\n")


def cmd_density(args):
    model = parse_model(args.model)
    phi = parse_probe(args.probe)
    values = density_curve(model, phi, parse_int_range(args.N), tol=args.tol)
    rows = ["N,Y_N,tail_bound,continuous_part_bound"]
    rows += [
        f"{v.N},{_fmt(v.value)},{_fmt(v.tail_bound)},{_fmt(v.continuous_part_bound)}"
        for v in values
    ]
    _write(args, "\n".join(rows) + "\n")


def cmd_f0(args):
    phi = parse_probe(args.probe)
    if args.quadrature:
        with open(args.quadrature, encoding="utf-8") as fh:
            quad = geometry.quadrature_from_csv(fh.read())
    elif args.model:
        quad = model_quadrature(parse_model(args.model))
    else:
        raise ValueError("f0 needs either --quadrature or --model")
    value = geometry.integrate_f0(quad, phi, truncation_tol=args.tol)
    _emit_json(args, {"f0": value, "nodes": len(quad.nodes)})


def cmd_pairing(args):
    phi = parse_probe(args.probe)
    spec = pairings.PairingSpec(tuple(parse_float_list(args.c)), args.ell, args.V)
    closed = pairings.closed_form_pairing(spec, phi, tol=args.tol)
    schedule = parse_float_list(args.eps) if args.eps else pairings.DEFAULT_EPS_SCHEDULE
    reg = pairings.regularized_pairing(spec, phi, schedule)
    _emit_json(
        args,
        {
            "spec": {"c": list(spec.c), "ell": spec.ell, "V": spec.V},
            "sum_form": [closed.real, closed.imag],
            "integral_form": [reg.value.real, reg.value.imag],
            "discrepancy": abs(closed - reg.value),
            "eps_table": [[eps, val.real, val.imag] for eps, val in reg.eps_table],
        },
    )


def cmd_weyl(args):
    model = parse_model(args.model)
    quad = model_quadrature(model)
    limit = weyl.demailly_limit(quad, args.lam, model.dim)
    rows = ["N,lambda,count,scaled,demailly_limit,rel_error"]
    for N in parse_int_range(args.N):
        res = weyl.counting_function(model, N, args.lam)
        rel = abs(res.scaled - limit) / abs(limit) if limit else float("nan")
        rows.append(
            f"{N},{_fmt(args.lam)},{res.count},{_fmt(res.scaled)},{_fmt(limit)},{_fmt(rel)}"
        )
    _write(args, "\n".join(rows) + "\n")


def cmd_flow(args):
    a = parse_float_list(args.a)
    fm = flow.flow_matrix(a, args.t)
    check = flow.det_identity(a, args.t)
    _emit_json(
        args,
        {
            "a": a,
            "t": args.t,
            "matrix": [[float(v) for v in row] for row in fm.matrix],
            "periods": flow.periods(a, args.tmax),
            "det_check": {"lhs": check.lhs, "rhs": check.rhs},
        },
    )


def cmd_lattice(args):
    op = lattice.build_operator(args.n, args.N, lattice.parse_field(args.field))
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(lattice.operator_to_csv(op))
    if args.report:
        rep = lattice.landau_report(op, args.N)
        _emit_json(
            args,
            {
                "n": args.n,
                "N": args.N,
                "cluster_count": rep.cluster_count,
                "cluster_mean": rep.cluster_mean,
                "cluster_spread": rep.cluster_spread,
                "midgap_threshold": rep.midgap_threshold,
            },
        )
    else:
        vals = lattice.lowest_eigenvalues(op, args.k)
        _write(args, "eigenvalue\n" + "\n".join(_fmt(v) for v in vals) + "\n")


def cmd_fit(args):
    with open(args.infile, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        idx_n, idx_y = header.index("N"), header.index("Y_N")
        samples = []
        for line in fh:
            if not line.strip():
                continue
            parts = line.split(",")
            samples.append((int(parts[idx_n]), float(parts[idx_y])))
    result = fitting.fit_expansion(samples, parse_float_list(args.powers))
    _emit_json(
        args,
        {
            "powers": list(result.powers),
            "coefficients": list(result.coefficients),
            "residual_rms": result.residual_rms,
            "condition": result.condition_estimate,
        },
    )


def _apply_config(argv):
    """Splice in arguments from a flat key=value file given as --config PATH."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise SystemExit(2)
    path = argv[idx + 1]
    extra = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            extra += [f"--{key.strip()}", val.strip()]
    return argv[:idx] + extra + argv[idx + 2 :]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magtrace",
        description="Spectral densities, trace coefficients and Weyl counts for magnetic Laplacians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--tol", type=float, default=1e-12, help="certified truncation tolerance")

    p = sub.add_parser("spectrum", help="exact model spectrum as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--cutoff", type=float, required=True, help="keep lines with nu/N <= cutoff")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("density", help="smoothed spectral density Y_N as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--N", required=True, help="range a..b or comma list")
    p.add_argument("--probe", required=True, help="kind:mu=...,sigma=...[,degree=...]")
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("f0", help="leading coefficient from a quadrature")
    p.add_argument("--probe", required=True)
    p.add_argument("--quadrature", default=None, help="quadrature CSV file")
    p.add_argument("--model", default=None, help="constant-field model instead of a file")
    common(p)
    p.set_defaults(func=cmd_f0)

    p = sub.add_parser("pairing", help="closed-form vs regularized distribution pairing")
    p.add_argument("--c", required=True, help="comma list of sin frequencies")
    p.add_argument("--ell", type=float, default=0.0)
    p.add_argument("--V", type=float, default=0.0)
    p.add_argument("--probe", required=True)
    p.add_argument("--eps", default=None, help="descending epsilon schedule (comma list)")
    common(p)
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("weyl", help="counting function vs Demailly limit as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("flow", help="linearized-flow matrix, periods and det identity")
    p.add_argument("--a", required=True, help="comma list of frequencies")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--tmax", type=float, default=10.0)
    common(p)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("lattice", help="discrete magnetic Laplacian eigenvalues / Landau report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--field", default="const", help="const or cosx:<amplitude>")
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--report", action="store_true")
    p.add_argument("--dump", default=None, help="write the operator CSV here")
    common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("fit", help="fit expansion coefficients to a density CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--powers", required=True, help="comma list of exponents")
    common(p)
    p.set_defaults(func=cmd_fit)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_config(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, RuntimeError, OSError, np.linalg.LinAlgError) as exc:
        body = json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n"
        if getattr(args, "out", None):
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body)
        sys.stderr.write(body)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
