"""``qseq`` command line.

Exit codes: 0 success or match, 1 semantic mismatch (NO_MATCH, failed
validation), 2 usage, input or precondition error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

from . import bdproc, cfhankel, mg1wait, mm1seq, momentops, numeval, oeisio
from .ratcore import (
    SeriesError,
    as_rational,
    format_rational,
    gf_series,
    parse_rational_list,
)

CONFIG_ENV = "QSEQ_CONFIG"

FAMILIES = ("busy", "busy-excess", "emptiness", "catalan", "schroeder-large", "schroeder-little")
TRANSFORMS = ("excess", "lifetime", "em", "inv-em", "invert", "convolve", "scale")
CHECKS = ("busy-pdf", "mixing-h1", "mixing-be", "catalan-egf", "bd-consistency")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _emit(values, fmt: str, meta: dict, offset: int = 0, out=None):
    out = out or sys.stdout
    values = list(values)
    if fmt == "plain":
        out.write(",".join(_fmt_value(v) for v in values) + "\n")
    elif fmt == "json":
        payload = dict(meta)
        payload["values"] = [_fmt_value(v) for v in values]
        out.write(json.dumps(payload) + "\n")
    elif fmt == "bfile":
        ints = []
        for v in values:
            q = as_rational(v)
            if q.denominator != 1:
                raise UsageError(f"b-file output needs integers, got {format_rational(q)}")
            ints.append(q.numerator)
        for i, v in enumerate(ints):
            out.write(f"{offset + i} {v}\n")
    else:
        raise UsageError(f"unknown format {fmt!r}")


def _fmt_value(v) -> str:
    if isinstance(v, (int, Fraction)):
        return format_rational(v)
    return str(v)


# ---------------------------------------------------------------- inputs


def _read_sequence(text: str | None) -> list[Fraction]:
    if text is None:
        text = sys.stdin.read()
    return parse_rational_list(text)


def _family_values(family: str, sigma: Fraction, count: int, form: str):
    if count < 1:
        raise UsageError("--count must be at least 1")
    N = count - 1
    if family == "catalan":
        if form == "poly":
            raise UsageError("--form poly applies to the sigma families only")
        gf = [Fraction(mm1seq.catalan(n)) for n in range(count)]
    else:
        if family == "schroeder-large":
            tag, sigma = mm1seq.FamilyTag.BUSY_EXCESS, Fraction(1)
        elif family == "schroeder-little":
            tag, sigma = mm1seq.FamilyTag.EMPTINESS, Fraction(1)
        else:
            tag = mm1seq.FamilyTag(family)
        if form == "poly":
            if family.startswith("schroeder"):
                raise UsageError("--form poly applies to busy, busy-excess, emptiness")
            return [mm1seq.family_poly(tag, n) for n in range(count)]
        gf = mm1seq.family_coefficients(tag, mm1seq.SigmaParameter(sigma), N)
    if form == "moments":
        return [factorial(n) * c for n, c in enumerate(gf)]
    return gf


def _candidate(args) -> list[int]:
    if args.family:
        values = _family_values(args.family, args.sigma, args.count, args.form)
    else:
        values = _read_sequence(args.input)
    out = []
    for v in values:
        q = as_rational(v)
        if q.denominator != 1:
            raise UsageError(f"OEIS matching needs integers, got {format_rational(q)}")
        out.append(q.numerator)
    return out


def _store(args):
    path = Path(args.dump) if args.dump else oeisio.default_dump_path()
    try:
        return oeisio.load_stripped(path)
    except OSError as exc:
        raise UsageError(f"cannot read dump {path}: {exc}") from exc


# ---------------------------------------------------------------- commands


def cmd_gen(args) -> int:
    values = _family_values(args.family, args.sigma, args.count, args.form)
    meta = {
        "family": args.family,
        "sigma": format_rational(args.sigma),
        "count": args.count,
        "chain": [f"gen:{args.form}"],
    }
    if args.form == "poly":
        if args.format == "bfile":
            raise UsageError("b-file output needs integers")
        if args.format == "json":
            meta["values"] = [[str(c) for c in p.coeffs] for p in values]
            sys.stdout.write(json.dumps(meta) + "\n")
        else:
            sys.stdout.write("".join(f"{p}\n" for p in values))
        return 0
    _emit(values, args.format, meta, args.offset)
    return 0


def cmd_transform(args) -> int:
    seq = _read_sequence(args.input)
    op = args.op
    if op in ("em", "inv-em", "invert"):
        phi = gf_series(seq)
        fn = {
            "em": momentops.exp_mixture,
            "inv-em": momentops.inverse_exp_mixture,
            "invert": momentops.invert_operator,
        }[op]
        result = list(fn(phi))
    else:
        m = momentops.MomentSequence(tuple(seq))
        if op == "excess":
            result = list(momentops.stationary_excess(m))
        elif op == "lifetime":
            result = list(momentops.stationary_lifetime(m))
        elif op == "scale":
            if args.factor is None:
                raise UsageError("--op scale needs --factor")
            result = list(momentops.scale_moments(m, args.factor))
        else:
            if args.other is None:
                raise UsageError("--op convolve needs --with")
            other = momentops.MomentSequence(tuple(parse_rational_list(args.other)))
            result = list(momentops.binomial_convolution(m, other))
    _emit(result, args.format, {"chain": [f"transform:{op}"], "count": len(result)}, args.offset)
    return 0


def cmd_cf(args) -> int:
    phi = gf_series(_read_sequence(args.input))
    K = phi.order if args.terms is None else args.terms
    cf = cfhankel.series_to_sfraction(phi, K)
    meta = {"chain": ["cf"], "count": len(cf)}
    if isinstance(cf, cfhankel.TerminatingCF):
        meta["terminated"] = True
        print(f"TerminatingCF: {len(cf)} coefficients before a zero", file=sys.stderr)
    _emit(list(cf), args.format, meta, args.offset)
    return 0


def cmd_hankel(args) -> int:
    phi = gf_series(_read_sequence(args.input))
    n_max = phi.order // 2 if args.terms is None else args.terms
    if args.oracle:
        H = cfhankel.hankel_transform(phi, n_max)
    else:
        cf = cfhankel.series_to_sfraction(phi, 2 * n_max)
        if isinstance(cf, cfhankel.TerminatingCF):
            raise UsageError(
                f"TerminatingCF after {len(cf)} coefficients; rerun with --oracle"
            )
        H = cfhankel.hankel_from_sfraction(cf, n_max)
    meta = {"chain": ["hankel:oracle" if args.oracle else "hankel:cf"], "count": len(H)}
    _emit(list(H), args.format, meta, args.offset)
    return 0


def cmd_oeis_verify(args) -> int:
    store = _store(args)
    verdict = oeisio.verify(store, _candidate(args), args.anumber, args.max_shift)
    if args.format == "json":
        print(json.dumps({
            "anumber": verdict.anumber,
            "status": verdict.status.value,
            "shift": verdict.shift,
            "overlap": verdict.overlap,
        }))
    else:
        print(verdict)
    return 0 if verdict.status is oeisio.MatchStatus.MATCH else 1


def cmd_oeis_search(args) -> int:
    store = _store(args)
    hits = oeisio.search(store, _candidate(args), args.min_overlap)
    if args.format == "json":
        print(json.dumps([{"anumber": a, "shift": s} for a, s in hits]))
    else:
        for a, s in hits:
            print(f"{a} shift {s}")
    return 0 if hits else 1


def cmd_oeis_fetch(args) -> int:
    rec = oeisio.fetch_remote(
        args.anumber, offline=not args.online, endpoint=args.endpoint, timeout=args.timeout
    )
    if args.format == "json":
        print(json.dumps({"anumber": rec.anumber, "offset": rec.offset,
                          "terms": [str(t) for t in rec.terms]}))
    else:
        print(rec.to_stripped())
    return 0


def cmd_wait(args) -> int:
    moments = parse_rational_list(args.service_moments) if args.service_moments else None
    service = mg1wait.ServiceMoments.named(args.service, moments)
    N = args.count - 1
    if N < 0:
        raise UsageError("--count must be at least 1")
    sigma = mm1seq.SigmaParameter(args.sigma)
    if args.route == "takacs":
        E = list(mg1wait.takacs_moments(service, sigma, N).E)
    elif args.route == "pk":
        E = [factorial(n) * c for n, c in enumerate(mg1wait.pk_waiting_series(service, sigma, N))]
    else:
        if service.kind is not mg1wait.ServiceKind.CATALAN_H1:
            raise UsageError(f"route {args.route} is specific to catalan-h1 service")
        if args.route == "rep2":
            E = list(mg1wait.catalan_waiting_moments(sigma, N).E)
        else:
            w = mg1wait.catalan_mixing_recursion(sigma, N)
            E = [factorial(n) * c for n, c in enumerate(w)]
    values = E if args.form == "moments" else [e / factorial(n) for n, e in enumerate(E)]
    meta = {"service": args.service, "sigma": format_rational(sigma.sigma), "count": args.count,
            "chain": [f"wait:{args.route}:{args.form}"]}
    _emit(values, args.format, meta, args.offset)
    return 0


def _parse_rates(spec: str) -> bdproc.BDRates:
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise UsageError("--rates must be mm1:SIGMA or file:PATH")
    if kind == "mm1":
        return bdproc.BDRates.mm1(as_rational(arg))
    if kind == "file":
        try:
            return bdproc.BDRates.from_file(arg)
        except OSError as exc:
            raise UsageError(f"cannot read rates file: {exc}") from exc
    raise UsageError(f"unknown rates source {kind!r}")


def cmd_bd(args) -> int:
    rates = _parse_rates(args.rates)
    N = args.count - 1
    if args.mode == "cf":
        values = list(bdproc.p00_sfraction(rates, args.count))
    else:
        values = list(bdproc.p00_series(rates, N))
    _emit(values, args.format, {"rates": args.rates, "chain": [f"bd:{args.mode}"],
                                "count": len(values)}, args.offset)
    return 0


# ---------------------------------------------------------------- validate


def _row(name, target, value, tol, relative=True):
    target_f = float(target)
    abs_err = abs(float(value) - target_f)
    rel_err = abs_err / abs(target_f) if target_f else abs_err
    ok = (rel_err if relative else abs_err) <= tol
    return {
        "check": name,
        "target": _fmt_value(target) if isinstance(target, (int, Fraction)) else repr(target),
        "value": repr(float(value)) if not isinstance(value, Fraction) else format_rational(value),
        "abs_err": abs_err,
        "rel_err": rel_err,
        "pass": ok,
    }


def _validate_rows(args) -> list[dict]:
    tol = args.tol
    rows = []
    if args.check == "mixing-h1":
        spec = numeval.DensitySpec.mixing_h1()
        for n in range(args.count):
            rows.append(_row(f"h1 moment {n}", mm1seq.catalan(n), numeval.quad_moment(spec, n), tol))
    elif args.check == "mixing-be":
        sigma = mm1seq.SigmaParameter(args.sigma)
        spec = numeval.DensitySpec.mixing_be(float(sigma.sigma))
        for n in range(args.count):
            target = mm1seq.excess_coefficient(n, sigma)
            rows.append(_row(f"b_e mixing moment {n}", target, numeval.quad_moment(spec, n), tol))
    elif args.check == "busy-pdf":
        rho = as_rational(args.rho)
        spec = numeval.DensitySpec.busy_pdf(float(rho))
        rows.append(_row("mass", Fraction(1), numeval.quad_moment(spec, 0), tol))
        rows.append(_row("mean", 1 / (1 - rho), numeval.quad_moment(spec, 1), tol))
        rows.append(_row("second moment", 2 / (1 - rho) ** 3, numeval.quad_moment(spec, 2), tol))
        for x in (Fraction(-1, 2), Fraction(-1, 4), Fraction(0)):
            closed = numeval.busy_lt_closed_form(float(rho), float(-x))
            value = numeval.busy_mgf_quadrature(float(rho), float(x))
            rows.append(_row(f"mgf at x={format_rational(x)}", closed, value, tol))
    elif args.check == "catalan-egf":
        x = as_rational(args.x)
        target = numeval.catalan_egf_partial_sum(x, 80)
        rows.append(_row(f"egf at x={format_rational(x)}", target, numeval.catalan_egf(float(x)),
                         tol, relative=False))
    elif args.check == "bd-consistency":
        rates = _parse_rates(args.rates or f"mm1:{format_rational(args.sigma)}")
        N = args.count - 1
        via_cf = bdproc.p00_series(rates, N)
        direct = bdproc.p00_series_direct(rates, N)
        expected = None
        if args.rates is None or args.rates.startswith("mm1:"):
            s = as_rational((args.rates or f"mm1:{args.sigma}").split(":", 1)[1])
            expected = mm1seq.emptiness_coefficient_rec(N, s)
        for n in range(N + 1):
            target = (-1) ** n * expected[n] if expected is not None else direct[n]
            row = _row(f"coefficient {n}", target, via_cf[n], 0.0, relative=False)
            row["pass"] = row["pass"] and via_cf[n] == direct[n]
            rows.append(row)
    return rows


def cmd_validate(args) -> int:
    rows = _validate_rows(args)
    if args.format == "json":
        print(json.dumps(rows))
    else:
        header = f"{'check':<24} {'target':>22} {'value':>24} {'abs_err':>10} {'rel_err':>10}  result"
        print(header)
        for r in rows:
            print(f"{r['check']:<24} {r['target']:>22} {r['value']:>24} "
                  f"{r['abs_err']:>10.2e} {r['rel_err']:>10.2e}  {'PASS' if r['pass'] else 'FAIL'}")
    return 0 if all(r["pass"] for r in rows) else 1


# ---------------------------------------------------------------- parser


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_format(p):
    p.add_argument("--format", choices=("plain", "json", "bfile"), default="plain")
    p.add_argument("--offset", type=int, default=0, help="first index for b-file output")


def _add_family(p, required: bool):
    p.add_argument("--family", choices=FAMILIES, required=required)
    p.add_argument("--sigma", type=_rational_arg, default=Fraction(1))
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--form", choices=("gf", "moments", "poly"), default="gf")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="qseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    leaves = {}

    p = sub.add_parser("gen", help="generate a sequence family")
    _add_family(p, required=True)
    _add_format(p)
    p.set_defaults(func=cmd_gen)
    leaves["gen"] = p

    p = sub.add_parser("transform", help="apply a moment-sequence operator")
    p.add_argument("--op", choices=TRANSFORMS, required=True)
    p.add_argument("--input", help="comma-separated rationals (default: stdin)")
    p.add_argument("--factor", type=_rational_arg)
    p.add_argument("--with", dest="other", help="second moment sequence for convolve")
    _add_format(p)
    p.set_defaults(func=cmd_transform)
    leaves["transform"] = p

    p = sub.add_parser("cf", help="S-fraction coefficients of a GF")
    p.add_argument("--input")
    p.add_argument("--terms", type=int)
    _add_format(p)
    p.set_defaults(func=cmd_cf)
    leaves["cf"] = p

    p = sub.add_parser("hankel", help="even Hankel transform H_0, H_2, ...")
    p.add_argument("--input")
    p.add_argument("--terms", type=int, help="largest n in H_{2n}")
    p.add_argument("--oracle", action="store_true", help="use determinants instead of the CF")
    _add_format(p)
    p.set_defaults(func=cmd_hankel)
    leaves["hankel"] = p

    p = sub.add_parser("oeis", help="verify against an OEIS stripped dump")
    osub = p.add_subparsers(dest="action", required=True)
    for action, func in (("verify", cmd_oeis_verify), ("search", cmd_oeis_search)):
        q = osub.add_parser(action)
        _add_family(q, required=False)
        q.add_argument("--input")
        q.add_argument("--dump", help=f"stripped dump (default ${oeisio.DUMP_ENV} or bundled fixture)")
        if action == "verify":
            q.add_argument("--anumber", required=True)
            q.add_argument("--max-shift", type=int, default=3)
        else:
            q.add_argument("--min-overlap", type=int, default=oeisio.MIN_OVERLAP)
        q.add_argument("--format", choices=("plain", "json"), default="plain")
        q.set_defaults(func=func)
        leaves[f"oeis-{action}"] = q
    q = osub.add_parser("fetch")
    q.add_argument("--anumber", required=True)
    q.add_argument("--online", action="store_true", help="permit network access")
    q.add_argument("--offline", dest="online", action="store_false")
    q.add_argument("--endpoint")
    q.add_argument("--timeout", type=float, default=10.0)
    q.add_argument("--format", choices=("plain", "json"), default="plain")
    q.set_defaults(func=cmd_oeis_fetch, online=False)
    leaves["oeis-fetch"] = q

    p = sub.add_parser("wait", help="M/G/1 waiting-time moments")
    p.add_argument("--service", choices=[k.value for k in mg1wait.ServiceKind], default="catalan-h1")
    p.add_argument("--service-moments", help="g_0,g_1,... for custom service")
    p.add_argument("--sigma", type=_rational_arg, default=Fraction(1))
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--route", choices=("takacs", "rep2", "rep3", "pk"), default="takacs")
    p.add_argument("--form", choices=("moments", "gf"), default="moments")
    _add_format(p)
    p.set_defaults(func=cmd_wait)
    leaves["wait"] = p

    p = sub.add_parser("bd", help="birth-death return-probability transform")
    p.add_argument("--rates", required=True, help="mm1:SIGMA or file:PATH")
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--mode", choices=("series", "cf"), default="series")
    _add_format(p)
    p.set_defaults(func=cmd_bd)
    leaves["bd"] = p

    p = sub.add_parser("validate", help="numeric checks against exact targets")
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--sigma", type=_rational_arg, default=Fraction(1))
    p.add_argument("--rho", type=_rational_arg, default=Fraction(1, 2))
    p.add_argument("--x", type=_rational_arg, default=Fraction(1))
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--rates")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_validate)
    leaves["validate"] = p

    return parser, leaves


def _apply_config(leaves: dict[str, argparse.ArgumentParser]):
    """Defaults from the JSON file named by $QSEQ_CONFIG.

    Top-level keys apply to every command with that option; an object under
    a command name (``"gen"``, ``"oeis-verify"``, ...) applies to that one.
    Keys are option names with dashes or underscores.
    """
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return
    try:
        config = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for name, parser in leaves.items():
        dests = {a.dest: a for a in parser._actions}
        merged = {k: v for k, v in config.items() if not isinstance(v, dict)}
        merged.update(config.get(name, {}))
        defaults = {}
        for key, value in merged.items():
            dest = key.replace("-", "_")
            action = dests.get(dest)
            if action is None:
                continue
            if isinstance(value, str) and action.type is not None:
                value = action.type(value)
            defaults[dest] = value
        parser.set_defaults(**defaults)
        # a configured default satisfies an otherwise required option
        for dest in defaults:
            dests[dest].required = False


def main(argv=None) -> int:
    parser, leaves = build_parser()
    try:
        _apply_config(leaves)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, oeisio.OeisError, SeriesError, ValueError, TypeError,
            ZeroDivisionError, numeval.NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
