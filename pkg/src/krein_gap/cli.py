"""Command-line entry point: ``krein-gap <subcommand> ...``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 I/O or
malformed JSON.  Nothing is written unless the whole computation succeeds.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import io as kio
from . import verify
from .criterion import CriterionSpec, TwoPointSpec, delta_restriction_gaps, trichotomy_table, two_point_report
from .errors import NumericError, ValidationError
from .green import GreenQuery, PointPerturbation, negative_eigenvalue, perturbed_green
from .interval import admissible_interval
from .linalg import default_tol
from .resolvent import build_perturbation, extreme_perturbations

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class InputError(Exception):
    """Unreadable file or malformed JSON."""


def _load(path: str):
    try:
        return kio.load_json(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise ValidationError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["none" if v is None else (repr(v) if isinstance(v, float) else v)
                    for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# subcommands; each returns the output text
# --------------------------------------------------------------------------

def cmd_interval(args, tol):
    split = kio.split_from_json(_load(args.split), tol)
    if args.K:
        k = kio.matrix_from_json(_load(args.K), tol)
    else:
        from .cayley import to_contraction
        k = to_contraction(kio.matrix_from_json(_load(args.A), tol), tol)
    return _dumps(admissible_interval(k, split, tol=tol).to_json())


def cmd_perturb(args, tol):
    a = kio.matrix_from_json(_load(args.A), tol)
    split = kio.split_from_json(_load(args.split), tol)
    if args.extreme:
        ext = extreme_perturbations(a, split, tol=tol)
        out = {}
        for name, end in (("minimal", ext.minimal), ("maximal", ext.maximal)):
            out[name] = {"Y": end.Y.tolist(), "is_relation": end.is_relation,
                         "A_Y": None if end.is_relation else end.operator.tolist()}
        return _dumps(out)
    if not args.Y:
        raise ValidationError("perturb: need --Y or --extreme")
    y = kio.matrix_from_json(_load(args.Y), tol)
    a_y = build_perturbation(a, split, y.entries, tol)
    return _dumps({"A_Y": kio.matrix_to_json(a_y.entries)})


def cmd_resolvent_check(args, tol):
    res = verify.krein_resolvent_suite(args.seed, args.instances, args.check_tol)
    return _dumps({"seed": args.seed, "instances": args.instances,
                   "max_rel_err": res.detail["max_rel_err"],
                   "failures": res.detail["failures"]})


def cmd_criterion(args, tol):
    rep = delta_restriction_gaps(CriterionSpec(args.n, args.l))
    return _dumps(rep.to_json())


def cmd_trichotomy(args, tol):
    rows = trichotomy_table(args.max_n, args.max_l)
    if args.format == "json":
        return _dumps(rows)
    cols = ["n", "l", "I1", "I2", "G1", "G2", "verdict"]
    return _csv(cols, [[r[c] for c in cols] for r in rows])


def cmd_two_point(args, tol):
    return _dumps(two_point_report(TwoPointSpec(args.x0)).to_json())


def cmd_greens(args, tol):
    z = _floats(args.z, "z")
    if len(z) not in (1, 2):
        raise ValidationError("z: expected RE or RE,IM")
    zc = complex(z[0], z[1] if len(z) == 2 else 0.0)
    q = GreenQuery(zc, _floats(args.x, "x"), _floats(args.xp, "xp"))
    g = perturbed_green(PointPerturbation(args.dim, args.alpha), q)
    return _dumps({"value_re": g.real, "value_im": g.imag})


def cmd_eigenvalue(args, tol):
    v = negative_eigenvalue(PointPerturbation(args.dim, args.alpha))
    return _dumps({"exists": v is not None, "value": v})


def cmd_spectrum_sweep(args, tol):
    if args.steps < 2:
        raise ValidationError("steps: need at least 2")
    if not args.alpha_max > args.alpha_min:
        raise ValidationError("alpha range: need alpha-max > alpha-min")
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps)
    rows = [[float(a), negative_eigenvalue(PointPerturbation(args.dim, float(a)))]
            for a in alphas]
    if args.format == "json":
        return _dumps([{"alpha": a, "eigenvalue": v} for a, v in rows])
    return _csv(["alpha", "eigenvalue"], rows)


def cmd_verify(args, tol):
    results = verify.run_all(args.seed)
    lines = [f"# seed {args.seed}"] + [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} suites passed")
    text = "\n".join(lines) + "\n"
    if passed != len(results):
        raise _VerifyFailed(text)
    return text


class _VerifyFailed(NumericError):
    def __init__(self, text):
        super().__init__("verify: at least one suite failed")
        self.text = text


# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors are validation errors (exit 1), not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol", type=float, help="tolerance (default: KREIN_GAP_TOL or 1e-10)")
    common.add_argument("--seed", type=int, default=42)

    p = _Parser(prog="krein-gap", description="Extension intervals, gaps and point spectra.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("interval", parents=[common], help="admissible interval [Xmin, Xmax]")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--K", help="PSD contraction (matrix JSON)")
    g.add_argument("--A", help="PSD operator (matrix JSON); its fractional transform is used")
    s.add_argument("--split", required=True)
    s.set_defaults(func=cmd_interval)

    s = sub.add_parser("perturb", parents=[common], help="perturbation A_Y or the extreme pair")
    s.add_argument("--A", required=True)
    s.add_argument("--split", required=True)
    s.add_argument("--Y")
    s.add_argument("--extreme", action="store_true")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("resolvent-check", parents=[common],
                       help="resolvent formula against direct inversion")
    s.add_argument("--instances", type=int, default=100)
    s.add_argument("--check-tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_resolvent_check)

    s = sub.add_parser("criterion", parents=[common], help="rank-one gaps for k^(2l) in R^n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.set_defaults(func=cmd_criterion)

    s = sub.add_parser("trichotomy", parents=[common], help="verdict table over (n, l)")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--max-l", type=int, required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_trichotomy)

    s = sub.add_parser("two-point", parents=[common], help="planar two-point defect")
    s.add_argument("--x0", type=float, default=1.0)
    s.set_defaults(func=cmd_two_point)

    s = sub.add_parser("greens", parents=[common], help="perturbed Green function")
    s.add_argument("--dim", type=int, choices=(2, 3), required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--z", required=True, help="RE or RE,IM")
    s.add_argument("--x", required=True, help="comma-separated coordinates")
    s.add_argument("--xp", required=True)
    s.set_defaults(func=cmd_greens)

    s = sub.add_parser("eigenvalue", parents=[common], help="negative eigenvalue, if any")
    s.add_argument("--dim", type=int, choices=(2, 3), required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.set_defaults(func=cmd_eigenvalue)

    s = sub.add_parser("spectrum-sweep", parents=[common], help="eigenvalue against alpha")
    s.add_argument("--dim", type=int, choices=(2, 3), required=True)
    s.add_argument("--alpha-min", type=float, required=True)
    s.add_argument("--alpha-max", type=float, required=True)
    s.add_argument("--steps", type=int, default=21)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_spectrum_sweep)

    s = sub.add_parser("verify", parents=[common], help="run every oracle suite")
    s.set_defaults(func=cmd_verify)
    return p


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved_tol = os.environ.get("KREIN_GAP_TOL")
    try:
        if args.seed < 0:
            raise ValidationError(f"seed: must be non-negative, got {args.seed}")
        if args.tol is not None and not (args.tol > 0 and math.isfinite(args.tol)):
            raise ValidationError(f"tol: must be positive, got {args.tol}")
        if args.tol is not None:
            # the override reaches every default_tol() call for this run
            os.environ["KREIN_GAP_TOL"] = repr(args.tol)
        tol = default_tol()
        text = args.func(args, tol)
        _emit(text, args.out)
        return EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _VerifyFailed as exc:
        _emit(exc.text, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {args.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        if saved_tol is None:
            os.environ.pop("KREIN_GAP_TOL", None)
        else:
            os.environ["KREIN_GAP_TOL"] = saved_tol


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
