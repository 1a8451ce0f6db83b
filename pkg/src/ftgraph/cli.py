"""Command-line front end.

Exit codes: 0 success, 1 asserted-false (``classify`` on a non-free-like
matrix, ``converge`` missing its targets), 2 usage or validation error,
3 numerical failure.

Examples::

    ftgraph scatter free3.json
    ftgraph scatter free3.json --k 1 --general-ab
    ftgraph classify smatrix.json --tol 1e-9
    ftgraph approximate coupling.json --d 0.1 --out graph.json
    ftgraph converge coupling.json --k 1 --d-start 0.2 --d-steps 6 --csv conv.csv
    ftgraph enumerate-freelike --n 3 --case minus --time-reversal
"""

import argparse
import sys

from . import io
from .approx import build_approximation, reconstruction_residual
from .coupling import ft_scattering, ks_scattering, max_dist, st_to_ab
from .errors import ClassificationError, FTGraphError, NotFreeLikeError, SingularSystemError
from .freelike import Case, classify_freelike, enumerate_time_reversal, realize_smatrix
from .solver import convergence_study, halving_grid

ORDER_TARGET = 0.8
FINAL_ERROR_TARGET = 0.05


class _Exit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _num(x):
    x = round(float(x), 6) + 0.0  # no "-0.000000"
    return f"{x:+.6f}"


def format_matrix(S):
    return "\n".join("  ".join(f"{_num(z.real)}{_num(z.imag)}i" for z in row) for row in S)


def _load(path):
    try:
        return io.read_json(path)
    except OSError as exc:
        raise _Exit(2, f"cannot read {path}: {exc.strerror}") from None


def cmd_scatter(args):
    c = io.coupling_from_dict(_load(args.coupling))
    if args.general_ab:
        k = 1.0 if args.k is None else args.k
        S = ks_scattering(st_to_ab(c), k)
        print(f"# S(k) at k = {k} via (A, B)-form")
    else:
        S = ft_scattering(c)
        if args.k is not None:
            print("# scale-invariant coupling: S does not depend on k (use --general-ab to evaluate S(k))")
    print(format_matrix(S.S))
    if args.out:
        io.write_json(io.smatrix_to_dict(S), args.out)
    return 0


def cmd_classify(args):
    obj = _load(args.input)
    if "S" in obj:
        S = io.smatrix_from_dict(obj)
    else:
        S = ft_scattering(io.coupling_from_dict(obj))
    try:
        form = classify_freelike(S, args.tol)
    except NotFreeLikeError:
        print("not free-like")
        return 1
    except ClassificationError as exc:
        raise _Exit(2, str(exc)) from None
    phases = ", ".join(f"{x:.6f}" for x in form.phases)
    print(f"{form.case.value}, p={form.p}, phases [{phases}], permutation {list(form.permutation)}")
    err = max_dist(realize_smatrix(form).S, S.S)
    print(f"reconstruction error: {err:.3e}")
    return 0


def cmd_approximate(args):
    c = io.coupling_from_dict(_load(args.coupling))
    if not args.d > 0:
        raise _Exit(2, f"--d must be positive, got {args.d}")
    g = build_approximation(c, args.d)
    obj = io.graph_to_dict(g)
    obj["reconstruction_residual"] = float(reconstruction_residual(c, g))
    text = io.write_json(obj, args.out)
    if args.out is None:
        print(text)
    return 0


def cmd_converge(args):
    c = io.coupling_from_dict(_load(args.coupling))
    if args.d_steps < 3:
        raise _Exit(2, f"--d-steps must be at least 3, got {args.d_steps}")
    if not (args.d_start > 0 and args.k > 0):
        raise _Exit(2, "--d-start and --k must be positive")
    try:
        report = convergence_study(c, args.k, halving_grid(args.d_start, args.d_steps))
    except FTGraphError as exc:
        raise _Exit(3, f"{exc} (k={args.k})") from None
    if report.failed:
        raise _Exit(3, f"singular system at k={args.k} for d in {report.failed}; retry with k +- 1e-3")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    for d, e in report.rows:
        print(f"d = {d:.6g}  error = {e:.6e}")
    final = report.errors[-1]
    print(f"fitted order: {report.fitted_order:.4f}")
    print(f"final error: {final:.6e}")
    ok = report.fitted_order >= ORDER_TARGET and final < FINAL_ERROR_TARGET
    return 0 if ok else 1


def cmd_enumerate(args):
    if not args.time_reversal:
        raise _Exit(2, "continuous family; use --time-reversal for the finite subfamily")
    if args.n < 2:
        raise _Exit(2, f"--n must be at least 2, got {args.n}")
    case = Case.parse(args.case)
    items = []
    for c, S in enumerate_time_reversal(args.n, case):
        obj = io.coupling_to_dict(c)
        obj["S"] = io.encode_matrix(S.S)
        items.append(obj)
    text = io.write_json(items, args.out)
    if args.out is None:
        print(text)
    else:
        print(f"wrote {len(items)} couplings to {args.out}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="ftgraph", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="scattering matrix of an ST-form coupling")
    p.add_argument("coupling", help="coupling-spec JSON file")
    p.add_argument("--k", type=float, default=None, help="momentum (used with --general-ab)")
    p.add_argument("--general-ab", action="store_true", help="evaluate S(k) through the (A, B)-form")
    p.add_argument("--out", help="write S as JSON")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("classify", help="classify a free-like scattering matrix")
    p.add_argument("input", help="scattering-matrix or coupling-spec JSON file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("approximate", help="approximating graph of a coupling")
    p.add_argument("coupling")
    p.add_argument("--d", type=float, required=True, help="approximation scale")
    p.add_argument("--out")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("converge", help="convergence of S(k; d) as d halves")
    p.add_argument("coupling")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--d-start", type=float, default=0.2)
    p.add_argument("--d-steps", type=int, default=6)
    p.add_argument("--csv", help="write d,error rows to this path")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("enumerate-freelike", help="time-reversal symmetric free-like couplings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--case", choices=["minus", "plus", "balanced"], required=True)
    p.add_argument("--time-reversal", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SingularSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FTGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
