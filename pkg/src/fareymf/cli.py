"""Command line: fareymf {levels,tau,spectrum,theory,verify,measure}.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
Numbers are written with 17 significant digits so they round-trip exactly.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import farey_core as fc
from . import reference as ref
from .partition import QGrid, make_qgrid, tau_bar
from .spectra import NumericalError, SpectrumCurve, computational_spectrum, legendre_spectrum
from .theory import default_K, theoretical_points
from .verify import DEFAULT_TABLE_K, PHI_SOURCES, build_table

WORKERS_ENV = "FAREYMF_WORKERS"
ENDPOINT_GUARD = 20


class ValidationError(ValueError):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) or hasattr(v, "dtype"):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return f"{v:.17g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if hasattr(v, "dtype"):
        return v.item()
    return v


def write_table(columns, rows, out, fmt_name: str, meta: dict | None = None) -> None:
    if fmt_name == "json":
        doc = {"columns": list(columns), "rows": [[_jsonable(x) for x in r] for r in rows]}
        if meta:
            doc["meta"] = meta
        text = json.dumps(doc, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(x) for x in r])
        text = buf.getvalue()
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _workers(args) -> int:
    if args.workers is not None:
        w = args.workers
    else:
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            w = int(raw)
        except ValueError:
            raise ValidationError(f"{WORKERS_ENV}={raw!r} is not an integer") from None
    if w < 1:
        raise ValidationError("worker count must be >= 1")
    return w


def _qgrid(args) -> QGrid:
    if args.q:
        try:
            vals = sorted(float(x) for x in args.q.split(","))
        except ValueError:
            raise ValidationError(f"--q expects comma separated numbers, got {args.q!r}") from None
        return QGrid.from_values(vals)
    if args.q_steps is None and args.q_min is None and args.q_max is None:
        return make_qgrid()
    q_min = -25.0 if args.q_min is None else args.q_min
    q_max = 40.0 if args.q_max is None else args.q_max
    steps = 201 if args.q_steps is None else args.q_steps
    if steps < 2 or not q_max > q_min:
        raise ValidationError("q grid needs --q-steps >= 2 and --q-max > --q-min")
    return QGrid.uniform(q_min, q_max, steps)


def _k_range(text):
    if text is None:
        return None
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise ValidationError(f"--k-range expects LO..HI, got {text!r}") from None
    return lo, hi


def _m_grid(args):
    if getattr(args, "table1", False) or not args.m:
        if args.m:
            raise ValidationError("use either --m or --table1")
        grid = ref.table1_grid()
        if args.K is not None:
            grid = [(m, args.K) for m, _ in grid]
        return grid
    try:
        ms = [float(x) for x in args.m.split(",")]
    except ValueError:
        raise ValidationError(f"--m expects comma separated numbers, got {args.m!r}") from None
    if any(not m > 1 for m in ms):
        raise ValidationError("every m must exceed 1")
    return [(m, args.K if args.K is not None else default_K(m)) for m in ms]


def cmd_levels(args):
    dom = fc.as_domain(args.domain)
    if args.table_index:
        from .verify import table_level
        args.k = table_level(args.k)
    if args.k < 0 or args.k > fc.DEPTH_CAP:
        raise ValidationError(f"k must be in 0..{fc.DEPTH_CAP}")
    if args.stats_only:
        if args.k < 1:
            raise ValidationError("--stats-only needs k >= 1")
        st = fc.level_stats(args.k, dom, workers=_workers(args))
        cols = ["k", "count", "pi_bar_k", "min_len", "max_len", "length_sum"]
        rows = [[st.k, st.interval_count, st.pi_bar_k, float(st.min_length), float(st.max_length), st.length_sum]]
    else:
        if args.k > ENDPOINT_GUARD:
            raise ValidationError(f"endpoint export is limited to k <= {ENDPOINT_GUARD}; use --stats-only")
        pts = fc.level_endpoints(args.k, dom)
        cols = ["num", "den"]
        rows = [[p.numerator, p.denominator] for p in pts]
    write_table(cols, rows, args.out, args.format)


def cmd_tau(args):
    if args.k < 1:
        raise ValidationError("k must be >= 1")
    samples = tau_bar(args.k, _qgrid(args), args.domain, workers=_workers(args))
    write_table(["q", "tau", "tau_prime", "log_sum", "k"],
                [[s.q, s.tau, s.tau_prime, s.log_sum, s.k] for s in samples], args.out, args.format)


def _write_curve(curve: SpectrumCurve, args):
    if args.format == "json":
        text = json.dumps(curve.to_dict()) + "\n"
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        cols = ["alpha", "f"] + (["q"] if curve.q is not None else [])
        rows = [[a, f] + ([q] if curve.q is not None else [])
                for a, f, q in zip(curve.alpha, curve.f, curve.q if curve.q is not None else curve.alpha)]
        write_table(cols, rows, args.out, "csv")
    if args.plot:
        _plot(curve, args.plot)


def _plot(curve: SpectrumCurve, path: str):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(curve.alpha, curve.f, ".-", ms=3)
    ax.set_xlabel("alpha")
    ax.set_ylabel("f")
    ax.set_title(f"{curve.kind} spectrum")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_spectrum(args):
    if args.kind == "theoretical":
        from .theory import theoretical_spectrum
        curve = theoretical_spectrum(_m_grid(args))
    else:
        if args.k < 1:
            raise ValidationError("k must be >= 1")
        qs = _qgrid(args)
        if args.kind == "computational":
            curve = computational_spectrum(args.k, qs, args.domain, workers=_workers(args))
        else:
            curve = legendre_spectrum(tau_bar(args.k, qs, args.domain, workers=_workers(args)))
    _write_curve(curve, args)


def cmd_theory(args):
    pts = theoretical_points(_m_grid(args))
    write_table(["m", "K", "y", "z", "alpha", "f_H"],
                [[p.m, p.K, p.y, p.z, p.alpha, p.f_H] for p in pts], args.out, args.format)


def cmd_verify(args):
    if not 1 <= args.table <= 12:
        raise ValidationError("--table must be 1..12")
    if args.k < 2:
        raise ValidationError("--k must be >= 2")
    t = build_table(args.table, k=args.k, k_range=_k_range(args.k_range),
                    phi_source=args.phi_source, workers=_workers(args))
    write_table(t.columns, t.rows, args.out, args.format, {"table": t.table, "notes": t.notes})
    if args.format == "csv" and args.out not in (None, "-"):
        for n in t.notes:
            print(n, file=sys.stderr)


def cmd_measure(args):
    r = fc.dyadic_measure(args.m, args.j, args.domain)
    if args.format == "json":
        doc = {"m": r.m, "j": r.j, "left": _jsonable(r.left), "right": _jsonable(r.right),
               "measure": _jsonable(r.measure), "measure_float": float(r.measure),
               "resolution_level": r.resolution_level}
        print(json.dumps(doc))
    else:
        print(f"interval [{fmt(r.left)}, {fmt(r.right)}]")
        print(f"measure {fmt(r.measure)} = {fmt(float(r.measure))}")
        print(f"resolution_level {r.resolution_level}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fareymf", description="Multifractal spectra of the Farey-Brocot partition")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, domain=True):
        sp.add_argument("--out", "-o", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--workers", type=int, default=None,
                        help=f"traversal threads (default ${WORKERS_ENV} or 1)")
        if domain:
            sp.add_argument("--domain", choices=("full", "half"), default="full")

    def qflags(sp):
        sp.add_argument("--q-min", type=float, default=None)
        sp.add_argument("--q-max", type=float, default=None)
        sp.add_argument("--q-steps", type=int, default=None)
        sp.add_argument("--q", default=None, help="explicit comma separated q values")

    def mflags(sp):
        sp.add_argument("--m", default=None, help="comma separated m values")
        sp.add_argument("--K", type=int, default=None, help="digit cap override")
        sp.add_argument("--table1", action="store_true", help="use the table-1 (m, K) grid")

    sp = sub.add_parser("levels", help="endpoints or statistics of level k")
    sp.add_argument("k", type=int)
    sp.add_argument("--stats-only", action="store_true")
    sp.add_argument("--table-index", action="store_true",
                    help="read k as a table index, i.e. partition level k-1")
    common(sp)
    sp.set_defaults(func=cmd_levels)

    sp = sub.add_parser("tau", help="tau_k(q) and tau_k'(q)")
    sp.add_argument("k", type=int)
    qflags(sp)
    common(sp)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("spectrum", help="computational, Legendre or theoretical spectrum")
    sp.add_argument("--kind", choices=("computational", "legendre", "theoretical"), default="computational")
    sp.add_argument("--k", type=int, default=14)
    sp.add_argument("--plot", default=None, help="also write a PNG chart here")
    qflags(sp)
    mflags(sp)
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("theory", help="solutions of the (y, z) system")
    mflags(sp)
    common(sp, domain=False)
    sp.set_defaults(func=cmd_theory)

    sp = sub.add_parser("verify", help="regenerate a numbered table with the printed values alongside")
    sp.add_argument("--table", type=int, required=True)
    sp.add_argument("--k", type=int, default=DEFAULT_TABLE_K, help="table index k (partition level k-1)")
    sp.add_argument("--k-range", default=None, help="LO..HI for tables 2 and 3")
    sp.add_argument("--phi-source", choices=PHI_SOURCES, default="table")
    common(sp, domain=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("measure", help="exact measure of [m/2^j, (m+1)/2^j]")
    sp.add_argument("m", type=int)
    sp.add_argument("j", type=int)
    sp.add_argument("--domain", choices=("full", "half"), default="full")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_measure)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors; report those as validation failures
        return 0 if e.code == 0 else 1
    try:
        args.func(args)
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
