"""Command-line surface: reciprocal sums, continued fractions, statistics,
the quotient-sequence constant, diagnostics, and checkpoint resume.

Every subcommand that writes files also writes a `manifest.json` with the
echoed configuration, package version, catalog checksum and a sha256 digest
per output file; digests are stable across reruns with identical
configuration (wall time is recorded but excluded from determinism).

Exit codes: 0 ok, 2 configuration error, 3 precision/certification failure,
4 checkpoint error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from fractions import Fraction
from pathlib import Path

import mpmath

from cflab import __version__
from cflab.catalog import SEQUENCE_KINDS, SequenceSpec, load_catalog
from cflab.contfrac import (
    CFExpansion,
    cf_expand_certified,
    cf_expand_paper,
    cf_expand_rational,
    cf_from_quotient_sequence,
    convergent_list,
)
from cflab.diagnostics import build_report
from cflab.errors import (
    CertificationError,
    CflabError,
    CheckpointError,
    ConfigError,
    PrecisionError,
)
from cflab.exact import DecimalApprox, digit_census, reciprocal_sum, to_decimal
from cflab.runner import STREAM_STATS, StatsConfig, StatsRun

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECISION = 3
EXIT_CHECKPOINT = 4

# Keys a --config file may set; identical to the argparse dest names.
CONFIG_KEYS = {
    "kind", "terms", "precision", "mode", "stride", "out", "stats",
    "checkpoint_interval", "kernel", "source_name", "n_max", "kuzmin_m_max",
}

PRESETS = {
    # terms / precision pairs sized for minutes vs hours of work
    "desk": {"terms": 12, "precision": 2000},
    "stretch": {"terms": 20, "precision": 100_000},
}


def _load_config_file(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        if p.suffix == ".toml":
            data = tomllib.loads(p.read_text())
        else:
            data = json.loads(p.read_text())
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a table/object")
    bad = set(data) - CONFIG_KEYS
    if bad:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(bad))}")
    return data


def _catalog():
    return load_catalog(os.environ.get("CFLAB_CATALOG") or None)


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(outdir: Path, command: str, config: dict,
                    outputs: list[Path], started: float) -> None:
    catalog = _catalog()
    cat_digest = hashlib.sha256(
        ",".join(map(str, catalog.exponents)).encode()
    ).hexdigest()
    manifest = {
        "command": command,
        "config": config,
        "version": __version__,
        "catalog_sha256": cat_digest,
        "wall_time_s": round(time.monotonic() - started, 3),
        "outputs": {p.name: _sha256_file(p) for p in sorted(outputs)},
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- subcommands ---


def cmd_sum(args) -> int:
    started = time.monotonic()
    spec = SequenceSpec(kind=args.kind, catalog=_catalog())
    terms = args.terms
    if terms is None:
        raise ConfigError("sum requires --terms")
    if args.precision is None or args.precision < 1:
        raise ConfigError("sum requires --precision >= 1")
    r = reciprocal_sum(spec, terms)
    dec = to_decimal(r, args.precision)
    out = _outdir(args)
    (out / "numerator.txt").write_text(str(r.numerator) + "\n")
    (out / "denominator.txt").write_text(str(r.denominator) + "\n")
    (out / "decimal.txt").write_text(dec.digits + "\n")
    (out / "decimal.json").write_text(dec.to_json() + "\n")
    outputs = [out / n for n in
               ("numerator.txt", "denominator.txt", "decimal.txt", "decimal.json")]
    _write_manifest(out, "sum", {
        "kind": args.kind, "terms": terms, "precision": args.precision,
    }, outputs, started)
    print(dec.digits[:62])
    return EXIT_OK


def _input_rational(args) -> Fraction:
    if args.num and args.den:
        num = int(Path(args.num).read_text().strip())
        den = int(Path(args.den).read_text().strip())
        return Fraction(num, den)
    if args.sum_dir:
        d = Path(args.sum_dir)
        return Fraction(
            int((d / "numerator.txt").read_text().strip()),
            int((d / "denominator.txt").read_text().strip()),
        )
    if args.kind and args.terms:
        return reciprocal_sum(SequenceSpec(kind=args.kind, catalog=_catalog()),
                              args.terms)
    raise ConfigError(
        "cf needs an input: --num/--den, --sum-dir, or --kind/--terms"
    )


def cmd_cf(args) -> int:
    started = time.monotonic()
    r = _input_rational(args)
    if args.mode == "exact":
        cf = cf_expand_rational(r, kernel=args.kernel)
    elif args.mode == "certified":
        if args.precision is None:
            raise ConfigError("certified mode requires --precision")
        eps = Fraction(1, 10**args.precision)
        cf = cf_expand_certified(r - eps, r + eps, kernel=args.kernel)
    elif args.mode == "paper":
        if args.precision is None:
            raise ConfigError("paper mode requires --precision")
        cf = cf_expand_paper(r, args.precision, kernel=args.kernel)
    else:
        raise ConfigError(f"unknown mode {args.mode!r}")
    out = _outdir(args)
    (out / "cf.txt").write_text(cf.to_text())
    (out / "cf.json").write_text(cf.to_json() + "\n")
    _write_manifest(out, "cf", {
        "mode": args.mode, "precision": args.precision, "kind": args.kind,
        "terms": args.terms,
    }, [out / "cf.txt", out / "cf.json"], started)
    if cf.quotients:
        largest = max(cf.quotients)
        index = cf.quotients.index(largest) + 1
        print(f"quotients: {len(cf.quotients)}  "
              f"largest: a_{index} = {largest}")
    else:
        print("quotients: 0 (integer input)")
    return EXIT_OK


def cmd_stats(args) -> int:
    started = time.monotonic()
    which = tuple(s.strip() for s in args.stats.split(",") if s.strip())
    stream_stats = tuple(w for w in which if w != "digits")
    out = _outdir(args)
    outputs: list[Path] = []
    config_echo = {"stats": list(which), "stride": args.stride,
                   "checkpoint_interval": args.checkpoint_interval}
    if "digits" in which:
        if not args.decimal:
            raise ConfigError("the digits statistic requires --decimal <file>")
        text = Path(args.decimal).read_text().strip()
        if text.startswith("{"):
            text = DecimalApprox.from_json(text).digits
        counts, freqs = digit_census(text)
        name = args.source_name or Path(args.decimal).stem
        path = out / f"{name}_digits.csv"
        with open(path, "w", newline="") as fh:
            fh.write("digit,count,frequency\n")
            for d in range(10):
                fh.write(f"{d},{counts[d]},{freqs[d]!r}\n")
        outputs.append(path)
    if stream_stats:
        if not args.cf:
            raise ConfigError("streamed statistics require --cf <file>")
        cfg = StatsConfig(
            cf_path=args.cf, out_dir=str(out), which=stream_stats,
            stride=args.stride, checkpoint_interval=args.checkpoint_interval,
            source_name=args.source_name or "", kuzmin_m_max=args.kuzmin_m_max,
        )
        run = StatsRun(cfg)
        run.run()
        outputs.extend(run.output_paths().values())
    _write_manifest(out, "stats", config_echo, outputs, started)
    for p in sorted(outputs):
        print(f"wrote {p}")
    return EXIT_OK


def _sci_notation(ln_value: float | mpmath.mpf) -> str:
    """value = e^{ln_value} rendered with 10 significant digits and a
    two-digit-minimum signed exponent, e.g. 2.131173744e-06."""
    with mpmath.workdps(30):
        l10 = mpmath.mpf(ln_value) / mpmath.ln(10)
        exp10 = int(mpmath.floor(l10))
        mant = mpmath.mpf(10) ** (l10 - exp10)
        scaled = int(mpmath.nint(mant * 10**9))
        if scaled >= 10**10:
            scaled //= 10
            exp10 += 1
    s = str(scaled)
    mantissa = f"{s[0]}.{s[1:].zfill(9)}"
    sign = "-" if exp10 < 0 else "+"
    return f"{mantissa}e{sign}{abs(exp10):02d}"


def cmd_um(args) -> int:
    started = time.monotonic()
    if args.terms is None:
        raise ConfigError("um requires --terms")
    spec = SequenceSpec(kind=args.kind, catalog=_catalog())
    cf, dec = cf_from_quotient_sequence(spec, args.terms, args.precision)
    out = _outdir(args)
    (out / "um_decimal.txt").write_text(dec.digits + "\n")
    (out / "um_decimal.json").write_text(dec.to_json() + "\n")
    (out / "um_cf.txt").write_text(cf.to_text())
    series = convergent_list(cf)
    with mpmath.workdps(30):
        with open(out / "um_report.csv", "w", newline="") as fh:
            fh.write("k,inv_Q_k_squared\n")
            for k in range(3, args.terms + 1):
                q = series[k][1]
                ln_inv_q2 = -2 * mpmath.log(mpmath.mpf(q))
                fh.write(f"{k},{_sci_notation(ln_inv_q2)}\n")
    outputs = [out / n for n in
               ("um_decimal.txt", "um_decimal.json", "um_cf.txt", "um_report.csv")]
    _write_manifest(out, "um", {
        "kind": args.kind, "terms": args.terms, "precision": dec.precision,
    }, outputs, started)
    print(dec.digits[:62])
    return EXIT_OK


def cmd_diagnostics(args) -> int:
    started = time.monotonic()
    if not args.cf:
        raise ConfigError("diagnostics requires --cf <file>")
    cf = CFExpansion.from_text(Path(args.cf).read_text())
    series = convergent_list(cf)
    r = None
    r_digits = 0
    if args.value:
        dec = DecimalApprox.from_json(Path(args.value).read_text())
        r = dec.value()
        r_digits = dec.precision
    n_max = args.n_max or len(cf.quotients) - 1
    report = build_report(cf, series, r, r_digits, n_max)
    out = _outdir(args)
    (out / "diagnostics.json").write_text(report.to_json() + "\n")
    (out / "diagnostics.csv").write_text(report.to_csv())
    _write_manifest(out, "diagnostics", {"n_max": n_max, "value_digits": r_digits},
                    [out / "diagnostics.json", out / "diagnostics.csv"], started)
    if args.summary:
        print(json.dumps(report.summary(), indent=2))
    else:
        print(f"wrote {out / 'diagnostics.json'}")
    return EXIT_OK


def cmd_resume(args) -> int:
    path = Path(args.checkpoint)
    if not path.exists():
        raise CheckpointError(f"checkpoint not found: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from exc
    conf = payload.get("config")
    if not isinstance(conf, dict):
        raise CheckpointError("checkpoint carries no configuration")
    cfg = StatsConfig(
        cf_path=conf["cf_path"], out_dir=conf["out_dir"],
        which=tuple(conf["which"]), stride=conf["stride"],
        checkpoint_interval=conf["checkpoint_interval"],
        source_name=conf["source_name"], kuzmin_m_max=conf["kuzmin_m_max"],
    )
    run = StatsRun(cfg, checkpoint_path=path)
    run.load_checkpoint(payload)
    if run.finished:
        print(f"run already complete at n={run.n}; nothing to do")
        return EXIT_OK
    run.run(resume=True)
    print(f"resumed at n={payload['n']}, finished at n={run.n}")
    return EXIT_OK


# --- parser ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cflab",
        description="Continued-fraction laboratory for reciprocal-sum constants",
    )
    parser._cflab_subparsers = []
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        parser._cflab_subparsers.append(p)
        p.add_argument("--config", help="TOML or JSON file with option defaults")
        p.add_argument("--preset", choices=sorted(PRESETS))
        if needs_out:
            p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--precision", type=int, default=None,
                       help="decimal digits d")
        p.add_argument("--terms", type=int, default=None,
                       help="number of sequence terms n")
        p.add_argument("--kind", choices=SEQUENCE_KINDS, default="mersenne")

    p = sub.add_parser("sum", help="reciprocal sum as exact rational + decimal")
    common(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("cf", help="continued-fraction expansion")
    common(p)
    p.add_argument("--mode", choices=("exact", "certified", "paper"),
                   default="exact")
    p.add_argument("--num", help="file holding the exact numerator")
    p.add_argument("--den", help="file holding the exact denominator")
    p.add_argument("--sum-dir", help="directory produced by `cflab sum`")
    p.add_argument("--kernel", choices=("compiled", "python"), default=None)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("stats", help="running statistics over a CF file")
    common(p)
    p.add_argument("--cf", help="CF text file")
    p.add_argument("--decimal", help="decimal file for the digits census")
    p.add_argument("--stats", default="khinchin,levy",
                   help="comma list from: " + ",".join(STREAM_STATS) + ",digits")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--checkpoint-interval", type=int, default=10_000)
    p.add_argument("--kuzmin-m-max", type=int, default=1000)
    p.add_argument("--source-name", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("um", help="quotient-sequence constant + convergence report")
    common(p)
    p.set_defaults(func=cmd_um)

    p = sub.add_parser("diagnostics", help="irrationality-measure diagnostics")
    common(p)
    p.add_argument("--cf", help="CF text file")
    p.add_argument("--value", help="decimal.json of the underlying value")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_diagnostics)

    p = sub.add_parser("resume", help="continue a checkpointed stats run")
    p.add_argument("checkpoint", help="checkpoint file path")
    p.set_defaults(func=cmd_resume)

    return parser


def _apply_config_and_preset(parser, argv):
    """Peek at --config/--preset and install their values as defaults."""
    defaults = {}
    for flag, loader in (("--preset", lambda v: dict(PRESETS[v])),
                         ("--config", _load_config_file)):
        if flag in argv:
            i = argv.index(flag)
            if i + 1 >= len(argv):
                raise ConfigError(f"{flag} requires a value")
            value = argv[i + 1]
            if flag == "--preset" and value not in PRESETS:
                raise ConfigError(f"unknown preset {value!r}")
            defaults.update(loader(value))
    if defaults:
        # defaults must land on the subparsers: they own the argument dests
        for sp in parser._cflab_subparsers:
            sp.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_and_preset(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PrecisionError, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except CheckpointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except CflabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
