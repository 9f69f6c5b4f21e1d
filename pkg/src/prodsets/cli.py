"""Command-line entry point: one subcommand per experiment, CSV/JSON output.

Exit codes: 0 success, 2 invalid parameters (or an infeasible search),
3 memory-budget exceeded, 4 a theorem-backed check failed.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import kernels
from .analytic import (
    density_omega_threshold,
    mertens_product,
    omega_poly,
    phi_legendre,
    turan_check,
)
from .audit import (
    AuditReport,
    SweepRow,
    choose_parameters,
    lemma22_empirical,
    quantitative_sweep,
    theorem1_audit,
)
from .config import set_memory_budget, _parse_bytes
from .construct import build_construction, verify_square_identity
from .errors import AuditFailure, CapacityError, DomainError, InfeasibleError
from .products import mult_table_count, product_window
from .sets import density_trace, materialize, parse_rule

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_ASSERT = 0, 2, 3, 4


def _num(v):
    """Format a value for output: ints as-is, floats at 12 significant digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return _num(v)
    if isinstance(v, float):
        return float(format(v, ".12g"))
    if isinstance(v, (list, tuple)):
        return [_jsonable(e) for e in v]
    if isinstance(v, dict):
        return {k: _jsonable(e) for k, e in v.items()}
    return v


class Table:
    """Column-ordered result rows; rendered as CSV or JSON."""

    def __init__(self, columns, rows, scalar=None, extra=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.scalar = scalar
        self.extra = extra or {}

    def render(self, fmt):
        if fmt is None and self.scalar is not None:
            return _num(self.rows[0][self.columns.index(self.scalar)]) + "\n"
        if fmt == "json":
            records = [dict(zip(self.columns, map(_jsonable, r))) for r in self.rows]
            body = {"rows": records, **_jsonable(self.extra)}
            return json.dumps(body, sort_keys=True) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_num(v) for v in r])
        return buf.getvalue()


def _int(text):
    try:
        return int(text)
    except ValueError:
        v = float(text)
        if not v.is_integer():
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        return int(v)


def _int_list(text):
    return [_int(t) for t in text.split(",") if t]


def _float_list(text):
    return [float(t) for t in text.split(",") if t]


def _primes(text):
    return tuple(_int(t) for t in text.replace("/", ",").split(",") if t)


# Subcommands -----------------------------------------------------------------


def cmd_phi(args):
    return Table(["x", "y", "phi"], [[args.x, args.y, phi_legendre(args.x, args.y)]], "phi")


def cmd_mertens(args):
    return Table(["y", "product"], [[args.y, mertens_product(args.y)]], "product")


def cmd_omegapoly(args):
    poly = omega_poly(args.y, args.K)
    rows = [[j, float(c)] for j, c in enumerate(poly.coeffs)]
    return Table(["j", "coeff"], rows, extra={"y": args.y, "K": poly.K,
                                              "tail_bound": poly.tail_bound})


def cmd_density(args):
    d = density_omega_threshold(args.y, args.k, args.primes)
    P = "/".join(map(str, sorted(set(args.primes))))
    return Table(["y", "k", "P", "density"], [[args.y, args.k, P, d]], "density")


def cmd_trace(args):
    rule = parse_rule(args.rule)
    checkpoints = sorted(set(args.checkpoints)) if args.checkpoints else None
    trace = density_trace(rule, checkpoints)
    return Table(["x", "count", "ratio"], trace.checkpoints, extra={"rule": rule.describe()})


def cmd_product(args):
    A, B = parse_rule(args.a_rule), parse_rule(args.b_rule)
    Aw, Bw = materialize(A, args.x), materialize(B, args.x)
    prod = product_window(Aw, Bw, (A.describe(), B.describe()))
    if args.dump:
        prod.window.save(args.dump)
    row = [args.x, Aw.count, Bw.count, prod.count, args.x - prod.count]
    return Table(["x", "count_a", "count_b", "count_product", "missing"], [row],
                 extra={"a": A.describe(), "b": B.describe()})


def cmd_multtable(args):
    rows = [[n, mult_table_count(n)] for n in sorted(args.n)]
    for r in rows:
        r.append(r[1] / r[0] ** 2)
    return Table(["n", "M_n", "ratio"], rows, "M_n" if len(rows) == 1 else None)


class _Record:
    def __init__(self, construction):
        self.c = construction

    def render(self, fmt):
        if fmt is None:
            return self.c.to_record()
        fields = dict(self.c.__dict__)
        fields["P"] = "/".join(map(str, self.c.P))
        cols = list(fields)
        return Table(cols, [[fields[c] for c in cols]]).render(fmt)


def cmd_construct(args):
    return _Record(build_construction(args.alpha, args.epsilon, args.delta, args.prime_cap,
                                      args.y_max, args.k_max))


def cmd_verify_square(args):
    rep = verify_square_identity(args.y, args.k, args.primes, args.N, args.target_k)
    cols = ["y", "k", "P", "N", "target_k", "square_count", "target_count", "mismatches",
            "witnesses"]
    row = [rep.y, rep.k, "/".join(map(str, rep.P)), rep.N, rep.target_k, rep.square_count,
           rep.target_count, rep.mismatches, "/".join(map(str, rep.witnesses))]
    table = Table(cols, [row])
    if rep.mismatches:
        table.failure = (f"square identity failed: {rep.mismatches} mismatches, "
                         f"first {list(rep.witnesses)}")
    return table


def cmd_audit(args):
    A, B = parse_rule(args.a_rule), parse_rule(args.b_rule)
    y, u = args.y, args.u
    if y is None or u is None:
        y0, u0, _, _ = choose_parameters(args.x, A, B)
        y = y0 if y is None else y
        u = u0 if u is None else u
    rep = theorem1_audit(A, B, args.x, y, u)
    return Table(AuditReport.COLUMNS, [rep.row()],
                 extra={"a": A.describe(), "b": B.describe()})


def cmd_lemma21(args):
    rows = []
    for y in range(args.y_min, args.y_max + 1):
        phi = phi_legendre(args.x, y)
        rows.append([args.x, y, phi, phi * math.log(y) / args.x])
    return Table(["x", "y", "phi", "ratio"], rows)


def cmd_lemma22(args):
    rows = []
    for u in sorted(args.u):
        r = lemma22_empirical(args.x, args.y, u)
        rows.append([r.x, r.y, r.u, r.smooth_bound, r.count, r.bound_ratio])
    return Table(["x", "y", "u", "smooth_bound", "count", "bound_ratio"], rows)


def cmd_turan(args):
    r = turan_check(args.y, args.lam, args.side)
    return Table(["y", "lambda", "side", "index", "lhs", "rhs", "ratio"],
                 [[r.y, r.lam, r.side, r.index, r.lhs, r.rhs, r.ratio]])


def cmd_sweep(args):
    rows = quantitative_sweep(args.a, args.grid)
    return Table(SweepRow.COLUMNS, [r.row() for r in rows], extra={"a": args.a})


# Parser ----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default: bare value / record / CSV)")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--threads", type=_int, default=None,
                        help="worker threads (default: all available)")
    common.add_argument("--memory-budget", default=None,
                        help="bytes, suffixes k/m/g allowed (env PRODSETS_MEMORY_BUDGET)")

    parser = argparse.ArgumentParser(prog="prodsets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("phi", cmd_phi, "count y-rough integers up to x")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)

    p = add("mertens", cmd_mertens, "prod over p <= y of (1 - 1/p)")
    p.add_argument("--y", type=float, required=True)

    p = add("omegapoly", cmd_omegapoly, "Omega_y generating polynomial coefficients")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--K", type=_int, default=None)

    p = add("density", cmd_density, "exact density of B_{y,k,P}")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--k", type=_int, required=True)
    p.add_argument("--primes", type=_primes, default=())

    p = add("trace", cmd_trace, "finite-x density ratios of a rule set")
    p.add_argument("--rule", required=True)
    p.add_argument("--checkpoints", type=_int_list, default=None)

    p = add("product", cmd_product, "product set of two rule sets within [1, x]")
    p.add_argument("--a-rule", required=True)
    p.add_argument("--b-rule", required=True)
    p.add_argument("--x", type=_int, required=True)
    p.add_argument("--dump", default=None, help="write the product bitset here")

    p = add("multtable", cmd_multtable, "distinct products in the n x n table")
    p.add_argument("--n", type=_int_list, required=True)

    p = add("construct", cmd_construct, "dense set whose square is sparse")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--prime-cap", type=_int, default=10**7)
    p.add_argument("--y-max", type=float, default=1e5)
    p.add_argument("--k-max", type=_int, default=8)

    p = add("verify-square", cmd_verify_square, "check B_{y,k,P}^2 = B_{y,2k,P} on [1, N]")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--k", type=_int, required=True)
    p.add_argument("--primes", type=_primes, default=())
    p.add_argument("--N", type=_int, required=True)
    p.add_argument("--target-k", type=_int, default=None)

    p = add("audit", cmd_audit, "measure the counting inequality on [1, x]")
    p.add_argument("--a-rule", required=True)
    p.add_argument("--b-rule", required=True)
    p.add_argument("--x", type=_int, required=True)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--u", type=float, default=None)

    p = add("lemma21", cmd_lemma21, "Phi(x, y) log y / x over a range of y")
    p.add_argument("--x", type=_int, required=True)
    p.add_argument("--y-min", type=_int, default=2)
    p.add_argument("--y-max", type=_int, required=True)

    p = add("lemma22", cmd_lemma22, "integers with a large smooth divisor")
    p.add_argument("--x", type=_int, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--u", type=_float_list, required=True)

    p = add("turan", cmd_turan, "Omega-tail sums against (log y)^(-Q(lambda))")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--side", choices=("<=", ">=", "le", "ge"), required=True)

    p = add("sweep", cmd_sweep, "quantitative audit sweep over RoughComplement(a)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--grid", type=_int_list, required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        if args.memory_budget is not None:
            set_memory_budget(_parse_bytes(args.memory_budget))
        if args.threads is not None and args.threads < 1:
            raise DomainError(f"--threads must be >= 1, got {args.threads}")
        kernels.set_threads(args.threads)
        result = args.func(args)
        text = result.render(args.format)
    except (DomainError, InfeasibleError) as exc:
        print(f"prodsets {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapacityError as exc:
        print(f"prodsets {args.command}: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except AuditFailure as exc:
        print(f"prodsets {args.command}: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    finally:
        if args.memory_budget is not None:
            set_memory_budget(None)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    failure = getattr(result, "failure", None)
    if failure:
        print(f"prodsets {args.command}: {failure}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
