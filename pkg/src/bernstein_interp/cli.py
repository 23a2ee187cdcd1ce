"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 construction failure, 4 no
admissible generator.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import conditions, constructions, serialization, verification
from .constructions import ConstructionError, GeneratorError, GeneratingFunction
from .sequences import (
    DiscreteSequence,
    SequenceError,
    TruncationError,
    check_weak_separation,
    largest_separation_epsilon,
)
from .serialization import SpecError

EXIT_OK, EXIT_INVALID, EXIT_CONSTRUCTION, EXIT_NO_GENERATOR = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}")


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(t) for t in text.split(",")]
    except ValueError:
        parts = []
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(*parts)


def _grid(text: str):
    parts = text.split(":")
    try:
        xmin, xmax, ymin, ymax = (float(p) for p in parts[:4])
        n = int(parts[4])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError("grid must be XMIN:XMAX:YMIN:YMAX:N")
    if len(parts) != 5 or n < 2 or not (xmax > xmin and ymax > ymin):
        raise argparse.ArgumentTypeError("grid must be XMIN:XMAX:YMIN:YMAX:N with N >= 2")
    return xmin, xmax, ymin, ymax, n


def _x_grid(text: str):
    if text == "auto":
        return "auto"
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--x-grid takes 'auto' or an integer")
    if n < 2:
        raise argparse.ArgumentTypeError("--x-grid needs at least 2 points")
    return n


def _grid_points(grid):
    xmin, xmax, ymin, ymax, n = grid
    xs = np.linspace(xmin, xmax, n)
    ys = np.linspace(ymin, ymax, n)
    X, Y = np.meshgrid(xs, ys)
    return X.ravel(), Y.ravel()


def _load_sequence(path) -> DiscreteSequence:
    return serialization.sequence_from_spec(serialization.read_document(path))


def _resolve_x_grid(seq: DiscreteSequence, opt):
    if opt == "auto":
        return None
    re = seq.points.real
    return np.linspace(re.min(), re.max(), opt) if re.min() < re.max() else np.array([re[0]])


def _emit(args, payload) -> None:
    text = serialization.dumps(payload)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _sequence_summary(seq: DiscreteSequence) -> dict:
    return {
        "family": seq.family_tag,
        "count": len(seq),
        "truncation_radius": seq.truncation_radius,
    }


def cmd_analyze(args) -> int:
    seq = _load_sequence(args.input)
    if len(seq) == 0:
        raise CliError("sequence is empty")
    x_grid = _resolve_x_grid(seq, args.x_grid)
    eps_max = largest_separation_epsilon(seq, args.alpha)
    eps = args.epsilon if args.epsilon is not None else min(0.5 * eps_max, 1.0)
    sep = check_weak_separation(seq, eps, args.alpha)
    report = conditions.analyze(
        seq, b=args.b, x_grid=x_grid, radii=args.radii, separation=sep, threads=args.threads
    )
    _emit(args, {
        "command": "analyze",
        "sequence": _sequence_summary(seq),
        "largest_separation_epsilon": eps_max,
        "report": report,
    })
    return EXIT_OK


def cmd_construct(args) -> int:
    seq = _load_sequence(args.input)
    if args.grid and not args.csv:
        raise CliError("--grid needs --csv PATH")
    try:
        F = constructions.build_perturbed_sine(seq, args.delta, args.center)
    except ConstructionError as exc:
        raise CliError(str(exc), EXIT_CONSTRUCTION)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.grid:
        X, Y = _grid_points(args.grid)
        L = F.log_abs(X + 1j * Y)
        serialization.write_csv(args.csv, ("x", "y", "log_abs_F"), zip(X, Y, L))
    _emit(args, {
        "command": "construct",
        "sequence": _sequence_summary(seq),
        "generator": serialization.generator_to_doc(F),
    })
    return EXIT_OK


def _lattice_generator(seq: DiscreteSequence) -> GeneratingFunction | None:
    if seq.family_tag != "lattice":
        return None
    m = seq.metadata
    shift = complex(m.get("real_offset", 0.0), m["imag_offset"])
    return GeneratingFunction.shifted_sine(shift, m["spacing"])


def cmd_interpolate(args) -> int:
    seq = _load_sequence(args.input)
    values, exponent = serialization.values_from_doc(serialization.read_document(args.values))
    if values.size != len(seq):
        raise CliError(f"{values.size} values for {len(seq)} nodes")
    if args.generator:
        F = serialization.generator_from_doc(serialization.read_document(args.generator))
    else:
        F = _lattice_generator(seq)
    if F is None:
        raise CliError(
            "no generator: lattice families get a shifted sine, other sequences "
            "need --generator PATH", EXIT_NO_GENERATOR)
    if args.grid and not args.csv:
        raise CliError("--grid needs --csv PATH")
    try:
        params = constructions.WeightParameters(M=args.M)
    except ValueError as exc:
        raise CliError(str(exc))
    try:
        itp = constructions.Interpolant(F, seq, values, params, exponent)
    except GeneratorError as exc:
        raise CliError(f"generator is not admissible: {exc}", EXIT_NO_GENERATOR)
    rep = verification.interpolation_report(itp)
    if args.grid:
        X, Y = _grid_points(args.grid)
        f = itp(X + 1j * Y)
        serialization.write_csv(args.csv, ("x", "y", "re", "im"), zip(X, Y, f.real, f.imag))
    _emit(args, {
        "command": "interpolate",
        "sequence": _sequence_summary(seq),
        "generator": serialization.generator_to_doc(F),
        "M": params.M,
        "value_exponent": exponent,
        "value_bound_K": itp.K,
        "report": rep,
    })
    return EXIT_OK


def _function_for(args) -> GeneratingFunction:
    if args.generator:
        return serialization.generator_from_doc(serialization.read_document(args.generator))
    if args.input:
        if args.delta is None:
            raise CliError("--input needs --delta to build a perturbed sine")
        try:
            return constructions.build_perturbed_sine(_load_sequence(args.input), args.delta)
        except ConstructionError as exc:
            raise CliError(str(exc), EXIT_CONSTRUCTION)
    return GeneratingFunction.shifted_sine()


def cmd_jensen(args) -> int:
    F = _function_for(args)
    c, r = args.center, args.radius
    if not r > 0:
        raise CliError("--radius must be positive")
    zeros = F.zeros(c.real - r, c.real + r)
    zeros = zeros[np.abs(zeros - c) <= r]
    try:
        terms = verification.jensen_terms(F, zeros, c, r, args.quad_points)
    except (verification.QuadratureError, ValueError) as exc:
        raise CliError(str(exc))
    _emit(args, {
        "command": "jensen",
        "generator": serialization.generator_to_doc(F),
        "center": c,
        "radius": r,
        "zeros_in_disc": zeros,
        "terms": terms,
        "residual": terms.residual,
    })
    return EXIT_OK


def cmd_type_fit(args) -> int:
    F = _function_for(args)
    try:
        est = verification.estimate_exponential_type(
            F.log_abs, args.half_width, args.heights, log_space=True
        )
    except ValueError as exc:
        raise CliError(str(exc))
    _emit(args, {
        "command": "type-fit",
        "generator": serialization.generator_to_doc(F),
        "estimate": est,
    })
    return EXIT_OK


def cmd_union_check(args) -> int:
    a, b = _load_sequence(args.input), _load_sequence(args.second)
    try:
        rep = verification.union_interpolation_check(
            a, b, args.epsilon, args.alpha, _resolve_x_grid(a.union(b), args.x_grid)
        )
    except SequenceError as exc:
        raise CliError(str(exc))
    _emit(args, {"command": "union-check", "report": rep})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bernstein-interp",
        description="Condition checks and constructions for interpolation sequences "
        "of entire functions of exponential type bounded on the real line.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        sp.add_argument("--input", required=needs_input, metavar="PATH")
        sp.add_argument("--output", metavar="PATH", help="report path (default: stdout)")
        sp.add_argument("--threads", type=int, default=1, metavar="N")

    sp = sub.add_parser("analyze", help="run every condition checker")
    common(sp)
    sp.add_argument("--x-grid", type=_x_grid, default="auto")
    sp.add_argument("--radii", type=_floats, default=None, metavar="LIST")
    sp.add_argument("--b", type=float, default=None, help="base point of the balance integral")
    sp.add_argument("--epsilon", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("construct", help="build a perturbed sine avoiding the sequence")
    common(sp)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--center", type=_complex_arg, default=0j, metavar="RE,IM")
    sp.add_argument("--grid", type=_grid, default=None, metavar="XMIN:XMAX:YMIN:YMAX:N")
    sp.add_argument("--csv", metavar="PATH")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("interpolate", help="evaluate the interpolation series")
    common(sp)
    sp.add_argument("--values", required=True, metavar="PATH")
    sp.add_argument("--generator", metavar="PATH")
    sp.add_argument("--M", type=float, default=8.0)
    sp.add_argument("--grid", type=_grid, default=None, metavar="XMIN:XMAX:YMIN:YMAX:N")
    sp.add_argument("--csv", metavar="PATH")
    sp.set_defaults(func=cmd_interpolate)

    for name, func, helptext in (
        ("jensen", cmd_jensen, "check Jensen's formula for a generator"),
        ("type-fit", cmd_type_fit, "estimate the exponential type of a generator"),
    ):
        sp = sub.add_parser(name, help=helptext)
        common(sp, needs_input=False)
        sp.add_argument("--generator", metavar="PATH")
        sp.add_argument("--delta", type=float, default=None)
        sp.set_defaults(func=func)
        if name == "jensen":
            sp.add_argument("--center", type=_complex_arg, default=complex(0.5, 0), metavar="RE,IM")
            sp.add_argument("--radius", type=float, default=1.0)
            sp.add_argument("--quad-points", type=int, default=64)
        else:
            sp.add_argument("--half-width", type=float, default=10.0)
            sp.add_argument("--heights", type=_floats, default=[5.0, 10.0, 20.0, 40.0])

    sp = sub.add_parser("union-check", help="compare a union with its two parts")
    common(sp)
    sp.add_argument("--second", required=True, metavar="PATH")
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--x-grid", type=_x_grid, default="auto")
    sp.set_defaults(func=cmd_union_check)
    return p


# flags whose values may legitimately start with "-"
_SIGNED_VALUE_FLAGS = ("--grid", "--center", "--radii", "--heights", "--b")


def _attach_signed_values(argv: list[str]) -> list[str]:
    """Rewrite ``--grid -5:5:-5:5:201`` as ``--grid=-5:5:-5:5:201`` for argparse."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_signed_values(argv))
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SpecError, SequenceError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
