"""Command line interface.

Subcommands: digits, construct, verify, freq, limsup, report. Output is
CSV or JSON on stdout or --out FILE; data output is byte-deterministic
(--meta prepends a provenance header meant to be excluded from golden
comparisons). Exit codes: 0 success, 1 verification failure, 2 usage or
precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .construction import (
    build_construction,
    construction_to_dict,
    default_l,
    verify_value_identities,
)
from .exactcore import (
    PerfectSquareError,
    PrecisionError,
    VerificationError,
    is_perfect_square,
    sqrt_bits,
)
from .stats import (
    FrequencyRelationReport,
    SubsequenceSpec,
    default_checkpoints,
    frequency_curve,
    frequency_relation_report,
    limsup_estimate,
)
from .tails import (
    alignment_report,
    verify_nu_tail_equality,
    verify_omega1_complement,
    verify_omega2_shift,
)


class UsageError(Exception):
    pass


DEFAULT_BITS = 4096

CONFIG_KEYS = {
    "s": str, "l": int, "bits": int, "format": str, "out": str,
    "plot": str, "checkpoints": str, "subseq": str, "start": int,
    "step": int, "ratio": str, "indices": str, "burn_in": int,
    "meta": lambda t: t.strip().lower() in ("1", "true", "yes", "on"),
}


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config file: {e}")
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"config line {lineno}: unknown entry {line!r}")
        values[key] = CONFIG_KEYS[key](raw.strip())
    return values


def _opt(args, config: dict, key: str, default=None):
    v = getattr(args, key, None)
    if v is None:
        v = config.get(key)
    if v is None:
        v = default
    return v


def _parse_s_selection(spec: str) -> tuple[list[int], list[int]]:
    """Expand "2..50" / "2,3,7" syntax; squares are filtered, not fatal."""
    values: list[int] = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                a, b = part.split("..", 1)
                values.extend(range(int(a), int(b) + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise UsageError(f"cannot parse s selection {spec!r}")
    if not values:
        raise UsageError("empty s selection")
    seen = set()
    ordered = [v for v in values if not (v in seen or seen.add(v))]
    selected = [v for v in ordered if v >= 2 and not is_perfect_square(v)]
    filtered = [v for v in ordered if v not in set(selected)]
    if not selected:
        raise UsageError(
            "no usable s: every requested value is a perfect square (or < 2), "
            "and the pipelines require an irrational square root"
        )
    return selected, filtered


def _warn_filtered(filtered: list[int]) -> None:
    for v in filtered:
        print(f"warning: skipping s={v} (perfect square; rational root)",
              file=sys.stderr)


def _subsequence(args, config) -> SubsequenceSpec:
    kind = _opt(args, config, "subseq", "geometric")
    if kind == "arithmetic":
        return SubsequenceSpec.arithmetic(
            int(_opt(args, config, "start", 16)),
            int(_opt(args, config, "step", 16)),
        )
    if kind == "geometric":
        try:
            ratio = Fraction(str(_opt(args, config, "ratio", "2")))
        except (ValueError, ZeroDivisionError):
            raise UsageError("cannot parse --ratio as an exact fraction")
        return SubsequenceSpec.geometric(int(_opt(args, config, "start", 16)), ratio)
    if kind == "explicit":
        text = _opt(args, config, "indices")
        if not text:
            raise UsageError("explicit subsequence needs --indices n1,n2,...")
        try:
            return SubsequenceSpec.explicit([int(x) for x in text.split(",") if x.strip()])
        except ValueError as e:
            raise UsageError(str(e))
    raise UsageError(f"unknown subsequence kind {kind!r}")


def _decimal(fr: Fraction) -> str:
    return format(float(fr), ".15g")


def _csv_text(header: list[str], rows: list[list], comments: list[str]) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _meta_lines(command: str, options: dict) -> list[str]:
    opts = " ".join(f"{k}={v}" for k, v in sorted(options.items()) if v is not None)
    return [f"surdbits {__version__}", f"command: {command}", f"options: {opts}"]


def _meta_dict(command: str, options: dict) -> dict:
    return {
        "tool": f"surdbits {__version__}",
        "command": command,
        "options": {k: str(v) for k, v in sorted(options.items()) if v is not None},
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_digits(args, config) -> int:
    out = _opt(args, config, "out")
    b = sqrt_bits(args.s, args.n)
    text = str(b) + "\n"
    if _opt(args, config, "meta", False):
        head = "".join(f"# {line}\n" for line in
                       _meta_lines("digits", {"s": args.s, "n": args.n}))
        text = head + text
    _emit(text, out)
    return 0


def cmd_construct(args, config) -> int:
    bits = int(_opt(args, config, "bits", DEFAULT_BITS))
    l = _opt(args, config, "l")
    out = _opt(args, config, "out")
    fmt = _opt(args, config, "fmt") or config.get("format") or "json"
    meta = _opt(args, config, "meta", False)
    cs = build_construction(args.s, l, bits)
    d = construction_to_dict(cs)
    options = {"s": args.s, "l": cs.l, "bits": bits}
    if fmt == "json":
        obj = {}
        if meta:
            obj["_meta"] = _meta_dict("construct", options)
        obj.update(d)
        _emit(_json_text(obj), out)
    else:
        comments = _meta_lines("construct", options) if meta else []
        rows = [[k, v] for k, v in d.items()]
        _emit(_csv_text(["field", "value"], rows, comments), out)
    return 0


def _verify_rows(s: int, l: int, bits: int):
    """Run the full verification battery for one s; yields report rows
    and collects failures instead of raising."""
    rows: list[list] = []
    failures: list[str] = []
    cs = build_construction(s, l, bits)

    def fail(check: str, exc: Exception) -> None:
        detail = str(exc)
        position = getattr(exc, "position", None)
        if position is not None:
            detail += f" (position {position})"
        rows.append([s, l, bits, check, "fail", "", "", "", "", detail])
        failures.append(f"s={s} {check}: {detail}")

    try:
        report = verify_value_identities(cs)
        rows.append([s, l, bits, "value_identities", "pass", "", "", "", "",
                     f"nu1-nu2={report.nu_difference}"])
    except (VerificationError, PrecisionError) as e:
        fail("value_identities", e)

    try:
        m = verify_nu_tail_equality(cs)
        if m.offset_a > 4 * l + 2:
            raise VerificationError(
                f"nu tail begins at {m.offset_a}, past the 4l+2 bound",
                position=m.offset_a,
            )
        rows.append([s, l, bits, "nu_tail_equality", "pass", m.offset_a,
                     m.offset_b, m.alignment_index, m.verified_length, ""])
    except (VerificationError, PrecisionError) as e:
        fail("nu_tail_equality", e)

    for check, fn in (("omega1_complement", verify_omega1_complement),
                      ("omega2_shift", verify_omega2_shift)):
        try:
            m = fn(cs)
            rows.append([s, l, bits, check, "pass", m.offset_a, m.offset_b,
                         m.alignment_index, m.verified_length, ""])
        except (VerificationError, PrecisionError) as e:
            fail(check, e)

    try:
        rep = alignment_report(cs)
        span = (bits - 1) - rep.common_position + 1
        rows.append([s, l, bits, "alignment", "pass", rep.common_position,
                     rep.common_r, rep.common_r, span, f"shift={rep.shift}"])
    except (VerificationError, PrecisionError) as e:
        fail("alignment", e)

    return rows, failures


VERIFY_HEADER = ["s", "l", "bits", "check", "status", "offset_a", "offset_b",
                 "alignment_index", "verified_length", "detail"]


def cmd_verify(args, config) -> int:
    spec = _opt(args, config, "s")
    if spec is None:
        raise UsageError("verify needs --s (e.g. --s 2..50)")
    selected, filtered = _parse_s_selection(str(spec))
    _warn_filtered(filtered)
    bits = int(_opt(args, config, "bits", DEFAULT_BITS))
    l_override = _opt(args, config, "l")
    fmt = _opt(args, config, "fmt") or config.get("format") or "csv"
    out = _opt(args, config, "out")
    meta = _opt(args, config, "meta", False)

    plan = []
    for s in selected:
        l = l_override if l_override is not None else default_l(s)
        if (1 << l) <= s:
            raise UsageError(f"l={l} inadmissible for s={s}: need 2^l > s")
        if bits < 8 * l:
            raise UsageError(
                f"precision too small: s={s} needs bits >= 8l = {8 * l}, got {bits}"
            )
        plan.append((s, l))

    all_rows: list[list] = []
    all_failures: list[str] = []
    for s, l in plan:
        rows, failures = _verify_rows(s, l, bits)
        all_rows.extend(rows)
        all_failures.extend(failures)

    options = {"s": spec, "bits": bits, "l": l_override}
    if fmt == "json":
        obj: dict = {}
        if meta:
            obj["_meta"] = _meta_dict("verify", options)
        obj["bits"] = bits
        obj["results"] = [dict(zip(VERIFY_HEADER, row)) for row in all_rows]
        obj["failures"] = len(all_failures)
        _emit(_json_text(obj), out)
    else:
        comments = _meta_lines("verify", options) if meta else []
        _emit(_csv_text(VERIFY_HEADER, all_rows, comments), out)

    for line in all_failures:
        print(f"FAIL {line}", file=sys.stderr)
    return 1 if all_failures else 0


def cmd_freq(args, config) -> int:
    bits = int(_opt(args, config, "bits", DEFAULT_BITS))
    out = _opt(args, config, "out")
    plot = _opt(args, config, "plot")
    fmt = _opt(args, config, "fmt") or config.get("format") or "csv"
    meta = _opt(args, config, "meta", False)
    cp_text = _opt(args, config, "checkpoints")
    if cp_text is not None:
        try:
            checkpoints = [int(x) for x in str(cp_text).split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"cannot parse checkpoints {cp_text!r}")
        if not checkpoints:
            raise UsageError("checkpoint list is empty")
    else:
        checkpoints = default_checkpoints(bits)

    b = sqrt_bits(args.s, bits)
    curve = frequency_curve(b, checkpoints)
    options = {"s": args.s, "bits": bits, "checkpoints": cp_text}
    if fmt == "json":
        obj = {}
        if meta:
            obj["_meta"] = _meta_dict("freq", options)
        obj.update({
            "s": args.s,
            "bits": bits,
            "points": [
                {"n": p.n, "ones_count": p.ones, "f_n": _decimal(p.value),
                 "f_n_exact": str(p.value)}
                for p in curve.points
            ],
        })
        _emit(_json_text(obj), out)
    else:
        comments = _meta_lines("freq", options) if meta else []
        rows = [[p.n, p.ones, _decimal(p.value), str(p.value)]
                for p in curve.points]
        _emit(_csv_text(["n", "ones_count", "f_n", "f_n_exact"], rows, comments), out)

    if plot:
        from .plotting import save_frequency_plot
        save_frequency_plot([(f"sqrt({args.s})", curve)], plot,
                            title=f"binary digit frequency of sqrt({args.s})")
    return 0


LIMSUP_HEADER = ["s", "bits", "subsequence", "burn_in", "k_min", "k_max",
                 "inf_observed", "sup_observed", "spread", "inf_decimal",
                 "sup_decimal"]


def cmd_limsup(args, config) -> int:
    bits = int(_opt(args, config, "bits", DEFAULT_BITS))
    burn_in = int(_opt(args, config, "burn_in", 4))
    out = _opt(args, config, "out")
    fmt = _opt(args, config, "fmt") or config.get("format") or "csv"
    meta = _opt(args, config, "meta", False)
    spec = _subsequence(args, config)

    b = sqrt_bits(args.s, bits)
    est = limsup_estimate(b, spec, burn_in)
    spread = est.sup_observed - est.inf_observed
    options = {"s": args.s, "bits": bits, "subseq": spec.describe(),
               "burn_in": burn_in}
    note = FrequencyRelationReport.CAVEAT
    if fmt == "json":
        obj = {}
        if meta:
            obj["_meta"] = _meta_dict("limsup", options)
        obj.update({
            "s": args.s,
            "bits": bits,
            "subsequence": spec.describe(),
            "burn_in": burn_in,
            "k_range": list(est.k_range),
            "inf_observed": str(est.inf_observed),
            "sup_observed": str(est.sup_observed),
            "spread": str(spread),
            "inf_decimal": _decimal(est.inf_observed),
            "sup_decimal": _decimal(est.sup_observed),
            "note": note,
        })
        _emit(_json_text(obj), out)
    else:
        comments = ([note] + _meta_lines("limsup", options)) if meta else [note]
        row = [args.s, bits, spec.describe(), burn_in, est.k_range[0],
               est.k_range[1], str(est.inf_observed), str(est.sup_observed),
               str(spread), _decimal(est.inf_observed), _decimal(est.sup_observed)]
        _emit(_csv_text(LIMSUP_HEADER, [row], comments), out)
    return 0


REPORT_HEADER = ["s", "l", "bits", "k", "n_k", "f_omega1", "f_omega2",
                 "f_sum", "deviation", "bound", "within_bound",
                 "f_from_nu1", "f_from_nu2"]


def cmd_report(args, config) -> int:
    spec_text = _opt(args, config, "s")
    if spec_text is None:
        raise UsageError("report needs --s (e.g. --s 2,3,5)")
    selected, filtered = _parse_s_selection(str(spec_text))
    _warn_filtered(filtered)
    bits = int(_opt(args, config, "bits", DEFAULT_BITS))
    l_override = _opt(args, config, "l")
    burn_in = int(_opt(args, config, "burn_in", 4))
    out = _opt(args, config, "out")
    plot = _opt(args, config, "plot")
    fmt = _opt(args, config, "fmt") or config.get("format") or "csv"
    meta = _opt(args, config, "meta", False)
    subseq = _subsequence(args, config)

    for s in selected:
        l = l_override if l_override is not None else default_l(s)
        if bits < 8 * l:
            raise UsageError(
                f"precision too small: s={s} needs bits >= 8l = {8 * l}, got {bits}"
            )

    reports = [frequency_relation_report(s, l_override, bits, subseq, burn_in)
               for s in selected]

    def cell(fr: Fraction | None) -> str:
        return "" if fr is None else str(fr)

    options = {"s": spec_text, "bits": bits, "subseq": subseq.describe(),
               "burn_in": burn_in, "l": l_override}
    if fmt == "json":
        obj: dict = {}
        if meta:
            obj["_meta"] = _meta_dict("report", options)
        obj["note"] = FrequencyRelationReport.CAVEAT
        obj["bits"] = bits
        obj["subsequence"] = subseq.describe()
        obj["burn_in"] = burn_in
        obj["blocks"] = [
            {
                "s": rep.s,
                "l": rep.l,
                "forced_from_nu1": rep.forced_from_nu1,
                "forced_from_nu2": rep.forced_from_nu2,
                "rows": [
                    {
                        "k": row.k, "n_k": row.n_k,
                        "f_omega1": str(row.f_omega1),
                        "f_omega2": str(row.f_omega2),
                        "f_sum": str(row.f_sum),
                        "deviation": str(row.deviation),
                        "bound": str(row.bound),
                        "within_bound": row.within_bound,
                        "f_from_nu1": cell(row.f_from_nu1) or None,
                        "f_from_nu2": cell(row.f_from_nu2) or None,
                    }
                    for row in rep.rows
                ],
            }
            for rep in reports
        ]
        _emit(_json_text(obj), out)
    else:
        comments = [FrequencyRelationReport.CAVEAT]
        if meta:
            comments += _meta_lines("report", options)
        rows = []
        for rep in reports:
            for row in rep.rows:
                rows.append([
                    rep.s, rep.l, bits, row.k, row.n_k,
                    str(row.f_omega1), str(row.f_omega2), str(row.f_sum),
                    str(row.deviation), str(row.bound),
                    "true" if row.within_bound else "false",
                    cell(row.f_from_nu1), cell(row.f_from_nu2),
                ])
        _emit(_csv_text(REPORT_HEADER, rows, comments), out)

    if plot:
        from .plotting import save_relation_plot
        save_relation_plot(reports, plot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="key=value file supplying defaults; flags win")
    common.add_argument("--out", metavar="PATH", help="write output to PATH")
    common.add_argument("--meta", action="store_true", default=None,
                        help="prepend a provenance header")
    common.add_argument("--seed-free", action="store_true", default=None,
                        help="accepted for compatibility; every computation "
                             "here is already deterministic")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")

    parser = argparse.ArgumentParser(
        prog="surdbits",
        description="exact binary digits of square roots and of values "
                    "constructed to mirror them",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("digits", parents=[common],
                       help="print exact digits of sqrt(s)")
    p.add_argument("s", type=int)
    p.add_argument("n", type=int, help="fractional digit count")
    p.set_defaults(func=cmd_digits)

    p = sub.add_parser("construct", parents=[common],
                       help="build the four constructed values")
    p.add_argument("s", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--bits", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common],
                       help="run the exact structural verification battery")
    p.add_argument("--s", metavar="SPEC", help="e.g. 2..50 or 2,3,7")
    p.add_argument("--l", type=int)
    p.add_argument("--bits", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("freq", parents=[common],
                       help="digit-frequency curve of sqrt(s)")
    p.add_argument("s", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--checkpoints", metavar="LIST")
    p.add_argument("--plot", metavar="PATH")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("limsup", parents=[common],
                       help="attained sup/inf of f_{n_k} along a subsequence")
    p.add_argument("s", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--subseq", choices=["arithmetic", "geometric", "explicit"])
    p.add_argument("--start", type=int)
    p.add_argument("--step", type=int)
    p.add_argument("--ratio")
    p.add_argument("--indices", metavar="LIST")
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.set_defaults(func=cmd_limsup)

    p = sub.add_parser("report", parents=[common],
                       help="frequency-relation report over a set of s")
    p.add_argument("--s", metavar="SPEC")
    p.add_argument("--l", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--subseq", choices=["arithmetic", "geometric", "explicit"])
    p.add_argument("--start", type=int)
    p.add_argument("--step", type=int)
    p.add_argument("--ratio")
    p.add_argument("--indices", metavar="LIST")
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--plot", metavar="PATH")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config) if args.config else {}
        return args.func(args, config)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (PerfectSquareError, PrecisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except VerificationError as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
