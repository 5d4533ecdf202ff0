"""Batch command-line front end.

Every run echoes its resolved configuration as one JSON line on stderr;
reports go to stdout, or to ``--out`` as ``<command>.<format>``.
Cache directory precedence: ``--cache-dir`` > $SELBERGLAB_CACHE_DIR >
~/.cache/selberglab.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import lefschetz, mellin, quadform, replab, selberg
from .geodesics import CACHE_ENV, SpectrumCache, enumerate_classes, h_index, local_lefschetz

DEFAULT_CACHE = Path.home() / ".cache" / "selberglab"

CONVENTIONS = (
    "Conventions: N(gamma) = eps_plus(D)^2 with multiplicity h_narrow(D); "
    "phi(a) = psi(a^(-2 rho)) = psi(N); Psi weights are log N(gamma0) over all classes."
)


def _fmt_float(x: float) -> str:
    return format(x, ".12g")


def _normalize(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return float(_fmt_float(v)) if math.isfinite(v) else str(v)
    if isinstance(v, complex):
        return [_normalize(v.real), _normalize(v.imag)]
    if isinstance(v, dict):
        return {str(k): _normalize(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_normalize(x) for x in v]
    if hasattr(v, "item"):
        return _normalize(v.item())
    return str(v)


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, complex):
        return f"{_fmt_float(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt_float(abs(v.imag))}j"
    if hasattr(v, "item"):
        return _csv_cell(v.item())
    return str(v)


def emit_report(results, fmt: str, columns: list[str] | None = None) -> bytes:
    """Serialize deterministically: sorted JSON keys, 12 significant digits."""
    if fmt == "json":
        return (json.dumps(_normalize(results), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        rows = results if isinstance(results, list) else [results]
        if columns is None:
            if not rows:
                raise ValueError("empty CSV report needs explicit columns")
            columns = list(rows[0])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_csv_cell(row[c]) for c in columns])
        return buf.getvalue().encode()
    raise ValueError(f"unsupported report format {fmt!r}")


def _float(text: str) -> float:
    return float(text)


def _add_common(p: argparse.ArgumentParser, fmt: str) -> None:
    p.add_argument("--cache-dir", help=f"spectrum cache directory (default: ${CACHE_ENV}, then {DEFAULT_CACHE})")
    p.add_argument("--out", help="write the report to this directory instead of stdout")
    p.add_argument("--format", choices=["csv", "json"], default=fmt, help=f"report format (default {fmt})")


def _add_psi(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=_float, default=4.0, help="decay exponent of the reference test function (default 4)")
    p.add_argument("--k", type=int, default=3, help="vanishing order at the support edge (default 3)")
    p.add_argument("--T", type=_float, default=1.0, help="support edge / scale (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selberglab",
        description="Lefschetz formula checks for PSL2(Z). " + CONVENTIONS,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("enumerate", help="hyperbolic classes with N(gamma) <= X")
    p.add_argument("--X", type=_float, default=100.0, help="norm bound (default 100)")
    _add_common(p, "csv")

    p = sub.add_parser("classnum", help="narrow and wide class numbers")
    p.add_argument("--D", type=int, help="a single discriminant")
    p.add_argument("--xmax", type=_float, default=100.0, help="all valid D <= xmax when --D is absent (default 100)")
    _add_common(p, "csv")

    p = sub.add_parser("pell", help="fundamental Pell solution and unit of O_D")
    p.add_argument("--D", type=int, required=True, help="discriminant")
    _add_common(p, "json")

    p = sub.add_parser("zeta", help="truncated log Z(s) and Z'/Z(s), Re(s) > 1")
    p.add_argument("--s", type=complex, default=2 + 0j, help="point, e.g. 2 or 2+3j (default 2)")
    p.add_argument("--X", type=_float, default=1e4, help="norm bound (default 1e4)")
    p.add_argument("--K", type=int, help="Euler factor cutoff (default: N_min^(-Re s - K) < 1e-16)")
    _add_common(p, "json")

    p = sub.add_parser("mellin-check", help="closed-form vs quadrature Mellin transform, inversion round trip")
    _add_psi(p)
    p.add_argument("--C", type=_float, default=0.0, help="inversion line Re(s) = C (default 0)")
    p.add_argument("--H", type=_float, default=2000.0, help="inversion truncation height (default 2000)")
    _add_common(p, "csv")

    p = sub.add_parser("verify", help="geometric vs contour side, plus residue at s=1 and --zeros data")
    _add_psi(p)
    p.add_argument("--C", type=_float, default=1.25, help="contour abscissa, 1 < C < beta (default 1.25)")
    p.add_argument("--H", type=_float, default=0.0, help="truncation height; 0 = adaptive (default)")
    p.add_argument("--X", type=_float, default=1e5, help="norm bound (default 1e5)")
    p.add_argument("--zeros", help="CSV of zeros/poles re,im,order[,label]")
    _add_common(p, "json")

    p = sub.add_parser("pgt", help="prime geodesic counting Psi(X)/X over decades")
    p.add_argument("--xmax", type=_float, default=1e6, help="largest X (default 1e6)")
    p.add_argument("--decades", type=int, default=3, help="number of decades ending at xmax (default 3)")
    _add_common(p, "csv")

    p = sub.add_parser("classsum", help="Psi(X) against the class-number/regulator sum")
    p.add_argument("--xmax", type=_float, default=1e4, help="largest X (default 1e4)")
    p.add_argument("--decades", type=int, default=2, help="number of decades ending at xmax (default 2)")
    _add_common(p, "csv")

    p = sub.add_parser("replab", help="Lefschetz numbers L_lambda(pi) of PSL2(R) as JSON")
    p.add_argument("--nmax", type=int, default=3, help="discrete series / finite-dim up to n (default 3)")
    p.add_argument("--s", type=complex, action="append", default=[],
                   help="principal series parameter; repeatable")
    _add_common(p, "json")

    p = sub.add_parser("cache", help="build or extend the spectrum cache up to a norm bound")
    p.add_argument("--xmax", type=_float, default=1e6, help="norm bound to cover (default 1e6)")
    p.add_argument("--overwrite", action="store_true", help="discard the existing cache file and rebuild")
    _add_common(p, "json")
    return parser


def _cache_dir(args) -> Path:
    return Path(args.cache_dir or os.environ.get(CACHE_ENV) or DEFAULT_CACHE)


def _decades(xmax: float, decades: int) -> list[float]:
    if decades < 1:
        raise ValueError("--decades must be >= 1")
    return [xmax / 10 ** (decades - 1 - i) for i in range(decades)]


def _run(args, cache: SpectrumCache):
    cmd = args.command
    if cmd == "enumerate":
        rows = [
            {"D": c.family.D, "n": c.n, "multiplicity": c.multiplicity, "log_norm": c.log_norm,
             "L": local_lefschetz(c), "h_index": h_index(c)}
            for c in enumerate_classes(args.X, cache)
        ]
        return rows, ["D", "n", "multiplicity", "log_norm", "L", "h_index"]
    if cmd == "classnum":
        Ds = [args.D] if args.D is not None else quadform.valid_discriminants(1, int(args.xmax))
        rows = []
        for D in Ds:
            rec = cache.record(D)
            rows.append({"D": D, "h_narrow": rec.h_narrow, "h_wide": rec.h_wide})
        return rows, ["D", "h_narrow", "h_wide"]
    if cmd == "pell":
        rec = cache.record(args.D)
        return {"D": rec.D, "x": rec.pell_x, "y": rec.pell_y, "unit_norm": rec.unit_norm,
                "log_eps_fund": rec.log_eps_fund, "log_eps_plus": rec.log_eps_plus,
                "h_narrow": rec.h_narrow, "h_wide": rec.h_wide}, None
    if cmd == "zeta":
        lz = selberg.log_zeta(args.s, args.X, args.K, cache)
        zl = selberg.zeta_logderiv(args.s, args.X, cache)
        return {"s": args.s, "X": args.X, "log_zeta": lz.value, "log_zeta_tail": lz.tail,
                "logderiv": zl.value, "logderiv_tail": zl.tail}, None
    if cmd == "mellin-check":
        psi = mellin.ReferenceTestFunction(args.beta, args.k, args.T)
        rows = []
        for sigma in (0.0, 1.0):
            for tau in (0.0, 5.0, 20.0):
                s = complex(sigma, tau)
                if sigma >= psi.beta:
                    continue
                closed = mellin.mellin(psi, s)
                quad = mellin.mellin_quadrature(psi, s)
                rows.append({"kind": "mellin", "point": s, "reference": closed, "computed": quad,
                             "rel_err": abs(quad - closed) / abs(closed)})
        for t in (1.5, 2.0, 10.0):
            t = t * args.T
            inv = mellin.inverse_mellin(psi, args.C, args.H, t)
            ref = mellin.evaluate(psi, t)
            rows.append({"kind": "inverse", "point": t, "reference": ref, "computed": inv,
                         "rel_err": abs(inv - ref) / abs(ref) if ref else abs(inv)})
        return rows, ["kind", "point", "reference", "computed", "rel_err"]
    if cmd == "verify":
        psi = mellin.ReferenceTestFunction(args.beta, args.k, args.T)
        zeros = None
        if args.zeros:
            with open(args.zeros, "rb") as fh:
                zeros = selberg.load_zero_data(fh)
        return lefschetz.verification_report(psi, args.C, args.H, args.X, zeros, cache), None
    if cmd == "pgt":
        rows = []
        for X in _decades(args.xmax, args.decades):
            psi = lefschetz.psi_counting(X, cache)
            rows.append({"X": X, "psi": psi, "ratio": psi / X})
        return rows, ["X", "psi", "ratio"]
    if cmd == "classsum":
        rows = []
        for X in _decades(args.xmax, args.decades):
            a = lefschetz.psi_counting(X, cache)
            b = lefschetz.class_number_form(X, cache)
            rows.append({"X": X, "psi": a, "classsum": b, "rel_diff": abs(a - b) / a if a else 0.0})
        return rows, ["X", "psi", "classsum", "rel_diff"]
    if cmd == "replab":
        reps: list = []
        for n in range(1, args.nmax + 1):
            reps += [replab.FiniteDim(n), replab.DiscreteSeries(n, 1), replab.DiscreteSeries(n, -1)]
        for s in args.s:
            s = s.real if s.imag == 0 else s
            reps += [r for r in replab.composition_factors(s) if r not in reps]
        return replab.lefschetz_table(reps), None
    if cmd == "cache":
        before = len(cache)
        lefschetz.psi_counting(args.xmax, cache)
        return {"path": str(cache.path), "records": len(cache), "added": len(cache) - before,
                "xmax": args.xmax}, None
    raise AssertionError(cmd)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items())}
    config["cache_dir"] = str(_cache_dir(args))
    print(json.dumps(_normalize(config), sort_keys=True), file=sys.stderr)
    try:
        cache_dir = _cache_dir(args)
        overwrite = args.command == "cache" and args.overwrite
        cache = SpectrumCache(cache_dir, load=not overwrite)
        results, columns = _run(args, cache)
        if cache.dirty or overwrite:
            cache.save(overwrite=True)
        payload = emit_report(results, args.format, columns)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        target = out / f"{args.command}.{args.format}"
        target.write_bytes(payload)
        print(str(target))
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return 0


def main() -> None:
    sys.exit(run())
