"""Command line front end.

Every command prints either human text (default) or one JSON report:

    {"command": {...}, "version": ..., "result": {...}, "citations": [...], "timing_ms": ...}

Exit codes: 0 success, 1 domain error (a JSON error object with
``--format json``), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, dimgroup, measure, morphisms, params, presets, spectra, towers, words
from .errors import FerencziError
from .linalg import Interval, fraction_str, parse_fraction

LOCATE_NOTE = ("addresses refer to the natural decomposition w_{m+1} = w_m 1^{a_0} ... w_m, "
               "which differs from the rotated proper-morphism towers by a rotation word")


class UsageError(Exception):
    pass


# schedule source


def _preset_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        try:
            out[key.replace("-", "_")] = int(value)
        except ValueError:
            raise UsageError(f"--param {key}: {value!r} is not an integer") from None
    return out


class SourceError(FerencziError):
    code = "bad_schedule_source"


def load_schedule(args) -> params.ParameterSchedule:
    if args.preset and args.schedule:
        raise UsageError("give either --preset or --schedule, not both")
    if args.preset:
        try:
            return presets.get(args.preset, **_preset_params(args.param))
        except KeyError as exc:
            raise SourceError(exc.args[0]) from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, FerencziError):
                raise
            raise SourceError(f"preset {args.preset}: {exc}") from None
    if args.schedule:
        if args.param:
            raise UsageError("--param only applies to presets")
        try:
            return params.load(args.schedule)
        except OSError as exc:
            raise SourceError(f"cannot read {args.schedule}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise SourceError(f"{args.schedule} is not valid JSON: {exc}") from None
    raise UsageError("this command needs --preset NAME or --schedule FILE")


# commands; each returns (result payload, citations, text lines)


def _fmt(x):
    if isinstance(x, Interval):
        return x.to_json()
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return fraction_str(x)
    return x


def _text_matrix(m) -> list[str]:
    cells = [[fraction_str(x) for x in row] for row in m.table()]
    width = max([len(c) for row in cells for c in row] + [len(str(c)) for c in m.cols])
    head = " " * (width + 3) + " ".join(str(c).rjust(width) for c in m.cols)
    return [head] + [f"{str(r).rjust(width)} | " + " ".join(c.rjust(width) for c in row)
                     for r, row in zip(m.rows, cells)]


def cmd_words(s, args):
    n = args.level
    w = words.generating_word(s, n)
    return {"level": n, "length": len(w), "word": w}, [], [w]


def cmd_language(s, args):
    fs = words.language(s, args.length)
    lines = [f"{len(fs)} factors of length {fs.length} (from w_{fs.level})"] + fs.sorted()
    return dict(fs.to_json(), count=len(fs)), [], lines


def cmd_locate(s, args):
    top = args.top
    addrs = words.locate(s, args.position, args.level, top)
    back = words.encode(s, addrs, top)
    res = {"position": args.position, "top": top, "addresses": [a.to_json() for a in addrs],
           "re_encoded": back, "note": LOCATE_NOTE}
    lines = [f"position {args.position} of w_{top}:"]
    for a in addrs:
        extra = f" (spacer length {a.value})" if a.kind == "spacer" else ""
        lines.append(f"  level {a.level}: {a.kind} {a.index}, offset {a.offset}{extra}")
    lines.append(f"note: {LOCATE_NOTE}")
    return res, [], lines


def cmd_tail(s, args):
    u = words.asymptotic_tail(s, args.length)
    return {"length": args.length, "tail": u}, [], [u]


def cmd_matrices(s, args):
    m, n = args.level, (args.to if args.to is not None else args.level + 1)
    if n <= m:
        raise UsageError("--to must exceed --level")
    tau = morphisms.telescope(s, args.variant, m, n)
    mat = morphisms.composition_matrix(tau)
    res = {"variant": args.variant, "from": m, "to": n, "morphism": tau.to_json(),
           "matrix": mat.to_json(), "predicates": morphisms.predicates(tau)}
    lines = [f"tau_[{m},{n}) ({args.variant}):"]
    for a, w in sorted(tau.images.items()):
        lines.append(f"  {a} -> {' '.join(map(str, w))}")
    lines += ["composition matrix M(b, a) = |tau(a)|_b:"] + ["  " + x for x in _text_matrix(mat)]
    lines.append("predicates: " + ", ".join(f"{k}={v}" for k, v in res["predicates"].items()))
    if args.variant == morphisms.PROPER and n == m + 1:
        wit = morphisms.rotation_witness(tau, morphisms.build(s, morphisms.TILDE, m))
        res["rotation_witness"] = wit.to_json() if wit else None
        if wit:
            lines.append(f"rotation witness ({wit.direction}): {' '.join(map(str, wit.word)) or '(empty word)'}")
    n0 = params.alphabets(s).n0
    if args.variant == morphisms.PROPER and m >= n0:
        closed = towers.product_closed_form(s, m, n)
        inv = towers.inverse_closed_form(s, m, n)
        direct = towers.direct_product(s, m, n)
        res["closed_form"] = {"f": towers.f_range(s, m, n).to_json(), "product": closed.to_json(),
                              "inverse": inv.to_json(), "agrees_with_direct": closed == direct}
        lines += ["closed form inverse (I - f u / Q):"] + ["  " + x for x in _text_matrix(inv)]
        lines.append(f"closed form agrees with direct product: {closed == direct}")
    return res, [], lines


def cmd_heights(s, args):
    rows = []
    lines = []
    for n in range(args.level + 1):
        h = towers.heights(s, n)
        rows.append({"level": n, "heights": h.to_json()})
        lines.append(f"h_{n}: " + ", ".join(f"{a}:{fraction_str(x)}" for a, x in h.items()))
    return {"levels": rows}, ["h_n(a) = a + |w_{n-1}| for n >= 1"], lines


def cmd_measure(s, args):
    n = args.level
    mv = measure.measure_vector(s, n)
    masses = measure.tower_masses(s, n)
    res = {"measure": mv.to_json(), "tower_masses": {str(a): _fmt(x) for a, x in sorted(masses.items())}}
    lines = [f"mu_{n}(a) = mu(B_{n}(a)):"]
    lines += [f"  {a}: {_fmt(x)}" for a, x in sorted(mv.values.items())]
    lines += [f"tower masses at level {n}:"] + [f"  {a}: {_fmt(x)}" for a, x in sorted(masses.items())]
    if args.cylinder is not None:
        try:
            width = parse_fraction(args.width)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--width {args.width!r} is not a rational number") from None
        br = measure.cylinder_measure(s, args.cylinder, width=width)
        res["cylinder"] = {"word": args.cylinder, "bracket": [fraction_str(br.lo), fraction_str(br.hi)]}
        lines.append(f"mu([{args.cylinder}]) in [{float(br.lo):.10g}, {float(br.hi):.10g}]")
    return res, ["mu_m is proportional to sum_{k>=m} f_k / Q_{m-1,k}"], lines


def cmd_rank(s, args):
    rep = measure.rank_report(s)
    tower = params.alphabets(s)
    res = dict(rep.to_json(), topological_rank=tower.d)
    cites = rep.citations + [dimgroup.CITE_RANK]
    lines = [f"topological rank d_W = {tower.d}",
             f"A_mu = {sorted(rep.a_mu)} (d_W_mu = {rep.d_mu}); exact finite rank: {rep.exact_finite_rank}"]
    lines += [f"  {v.letter}: {v.verdict}: {v.evidence}" for _, v in sorted(rep.letters.items())]
    return res, cites, lines


def cmd_spectra(s, args):
    rep = spectra.continuous_eigenvalues(s)
    fac = spectra.max_equicontinuous_factor(s)
    mix = spectra.mixing_certificate(s, depth=args.depth)
    meas = spectra.measurable_eigenvalue_report(s, limit=args.limit)
    res = {"continuous": rep.to_json(), "factor": fac, "mixing": mix.to_json(), "measurable": meas}
    cites = rep.citations + fac["citations"] + [spectra.CITE_MIXING] + meas["citations"]
    lines = [f"continuous eigenvalue denominators: {rep.rational_denominators} (q_max = {rep.q_max})",
             f"weakly mixing: {rep.weakly_mixing}; irrational continuous eigenvalues: none",
             f"maximal equicontinuous factor: {fac['factor']}",
             f"topological mixing: {mix.conclusion}",
             f"measurable: A_mu = {meas['A_mu']}, irrational: {meas['irrational']}"]
    return res, cites, lines


def _alpha(args):
    if args.alpha is not None:
        if args.alpha_radius is not None:
            raise UsageError("--alpha-radius goes with --alpha-center")
        try:
            return parse_fraction(args.alpha)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--alpha {args.alpha!r} is not a rational number") from None
    if args.alpha_center is None or args.alpha_radius is None:
        raise UsageError("give --alpha P/Q or both --alpha-center and --alpha-radius")
    try:
        return spectra.IrrationalAlpha(parse_fraction(args.alpha_center), parse_fraction(args.alpha_radius))
    except (ValueError, ZeroDivisionError):
        raise UsageError("alpha center and radius must be rational numbers") from None


def cmd_veech(s, args):
    trace = spectra.veech_test(s, _alpha(args), max_level=args.horizon)
    res = trace.to_json()
    lines = [f"alpha = {_fmt(res['alpha'])}, A_mu = {trace.letters}"]
    for n, vals in trace.table:
        lines.append(f"  n={n}: " + ", ".join(f"||alpha h_n({a})|| = {_fmt(v)}" for a, v in vals.items()))
    lines.append(f"verdict: {trace.verdict}")
    if trace.witness and "claim" in trace.witness:
        lines.append(f"  {trace.witness['claim']}")
    lines += [f"warning: {w}" for w in trace.warnings]
    return res, res["citations"], lines


def cmd_mixing(s, args):
    mix = spectra.mixing_certificate(s, depth=args.depth)
    res = dict(mix.to_json(), holds=mix.holds)
    lines = [f"max spacer = {mix.bound}"]
    lines += [f"  k={k}: |w_k|={n}, zeros in factors of length |w_k| range over [{a}, {b}], gap {b - a}"
              for k, n, a, b in mix.samples]
    if mix.truncated:
        lines.append("  (stopped early at the materialization cap)")
    lines.append(f"conclusion: {mix.conclusion}")
    return res, [spectra.CITE_MIXING], lines


def cmd_dimgroup(s, args):
    d = dimgroup.dimension_group(s)
    res = d.to_json()
    coords = ", ".join(res["coordinates"])
    lines = [f"G_W = {d.group_name()}  (coordinates {coords}; last is a' = {d.a_prime})",
             f"positive cone: {{{d.cone_string()}}} u {{0}}",
             f"order unit: ({', '.join(str(x) for x in res['unit'])})",
             f"z = ({', '.join(str(_fmt(d.z[a])) for a in d.letters)})",
             f"topological rank = {d.rank}"]
    return res, d.citations, lines


def cmd_oe(s, args):
    oe = dimgroup.orbit_equivalence(s)
    res = oe.to_json()
    lines = [f"c = {_fmt(oe.c)}",
             f"J_W generated by {[_fmt(x) for x in oe.generators]} and {res['coset']}",
             f"rationally independent generators: {oe.rationally_independent}"]
    return res, oe.citations, lines


def _read_data(text: str) -> dimgroup.FerencziTypeData:
    try:
        if text.lstrip().startswith("{"):
            obj = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                obj = json.load(fh)
    except OSError as exc:
        raise SourceError(f"cannot read {text}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SourceError(f"realization data is not valid JSON: {exc}") from None
    try:
        B = tuple(obj["B"])
        r = obj["r"]
        base = (tuple(r.get("preperiod", ())), tuple(r["period"]))
        z = {b: parse_fraction(obj["z"][str(b)]) for b in B}
        v = {b: int(obj["v"][str(b)]) for b in B}
        return dimgroup.FerencziTypeData(B, base, z, v, int(obj["w"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, FerencziError):
            raise
        raise SourceError(f"realization data needs B, r.period, z, v and w: {exc!r}") from None


def data_to_json(data: dimgroup.FerencziTypeData) -> dict:
    return {"B": list(data.B), "r": {"preperiod": list(data.r[0]), "period": list(data.r[1])},
            "z": {str(b): fraction_str(data.z[b]) for b in data.B},
            "v": {str(b): data.v[b] for b in data.B}, "w": data.w}


def cmd_realize(args):
    if args.data is not None:
        if args.preset or args.schedule:
            raise UsageError("give --data or a schedule source, not both")
        data = _read_data(args.data)
    else:
        data = dimgroup.data_from_schedule(load_schedule(args))
    out = dimgroup.realize(data, max_span=args.max_span)
    check = dimgroup.dimension_group(out)
    res = {"data": data_to_json(data), "schedule": out.to_json(),
           "dimension_group": check.to_json()}
    lines = ["schedule: " + out.dumps(),
             f"dimension group: {check.group_name()}, cone {{{check.cone_string()}}}, "
             f"unit ({', '.join(str(check.u[a]) for a in check.letters)})"]
    return res, [dimgroup.CITE_DG], lines


def cmd_presets(args):
    rows = []
    for name in presets.presets():
        doc = (presets.PRESETS[name].__doc__ or "").strip().splitlines()[0]
        rows.append({"name": name, "description": doc, "schedule": presets.get(name).to_json()})
    return {"presets": rows}, [], [f"{r['name']}: {r['description']}" for r in rows]


COMMANDS = {
    "words": cmd_words, "language": cmd_language, "locate": cmd_locate, "tail": cmd_tail,
    "matrices": cmd_matrices, "heights": cmd_heights, "measure": cmd_measure, "rank": cmd_rank,
    "spectra": cmd_spectra, "veech": cmd_veech, "mixing": cmd_mixing, "dimgroup": cmd_dimgroup,
    "oe": cmd_oe,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ferenczi", description="Exact computations for minimal rank-one subshifts.")
    parser.add_argument("--version", action="version", version=f"ferenczi {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help="named schedule (see `ferenczi presets`)")
    common.add_argument("--param", action="append", metavar="KEY=INT", help="preset parameter")
    common.add_argument("--schedule", metavar="FILE", help="schedule JSON file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("words", "generating word w_n")
    p.add_argument("--level", type=int, required=True)
    p = add("language", "factors of a given length")
    p.add_argument("--length", type=int, required=True)
    p = add("locate", "tower address of a position of w_top")
    p.add_argument("--position", type=int, required=True)
    p.add_argument("--top", type=int, required=True)
    p.add_argument("--level", type=int, default=0, help="lowest level to descend to")
    p = add("tail", "prefix of the asymptotic tail word")
    p.add_argument("--length", type=int, required=True)
    p = add("matrices", "morphisms and composition matrices")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--to", type=int, help="telescope up to this level (default level + 1)")
    p.add_argument("--variant", choices=morphisms.VARIANTS, default=morphisms.PROPER)
    p = add("heights", "height vectors h_0 .. h_n")
    p.add_argument("--level", type=int, required=True)
    p = add("measure", "invariant measure at a level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--cylinder", help="also bracket mu([word])")
    p.add_argument("--width", default="1/1000000", help="target bracket width")
    add("rank", "exact finite rank classification")
    p = add("spectra", "eigenvalue and mixing report")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--limit", type=int, default=24, help="largest rational denominator tried when d_W_mu = 1")
    p = add("veech", "Veech criterion for exp(2 pi i alpha)")
    p.add_argument("--alpha")
    p.add_argument("--alpha-center")
    p.add_argument("--alpha-radius")
    p.add_argument("--horizon", type=int, default=12, help="last level shown in the table")
    p = add("mixing", "certificate that the subshift is not topologically mixing")
    p.add_argument("--depth", type=int, default=3)
    add("dimgroup", "dimension group descriptor")
    add("oe", "orbit equivalence invariants")
    p = add("realize", "schedule from Ferenczi-type dimension group data")
    p.add_argument("--data", help="JSON file or inline JSON with B, r, z, v, w")
    p.add_argument("--max-span", type=int, default=64)
    sub.add_parser("presets", help="list the named schedules").add_argument(
        "--format", choices=("text", "json"), default="text")
    return parser


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "format"}


def run(args) -> dict:
    """Execute one parsed request and return the report."""
    start = time.perf_counter()
    if args.command == "presets":
        result, cites, lines = cmd_presets(args)
    elif args.command == "realize":
        result, cites, lines = cmd_realize(args)
    else:
        schedule = load_schedule(args)
        result, cites, lines = COMMANDS[args.command](schedule, args)
    report = {"command": _echo(args), "version": __version__, "result": result,
              "citations": cites, "timing_ms": round((time.perf_counter() - start) * 1000, 3)}
    report["_text"] = lines
    return report


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "text")
    try:
        report = run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ferenczi: error: {exc}", file=sys.stderr)
        return 2
    except FerencziError as exc:
        if fmt == "json":
            print(json.dumps(exc.to_json()))
        else:
            print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return 1
    lines = report.pop("_text")
    if fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))
        if report["citations"]:
            print("backed by:")
            for c in report["citations"]:
                print(f"  - {c}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
