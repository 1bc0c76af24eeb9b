"""Command-line front end: ``smcstats run | bench | gen-inputs``."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .engine import EngineConfig
from .errors import InputParseError, RangeOverflowError, SMCError
from .stats import PROGRAMS, ProgramResult, required_bits, run_program

TABLE2_SHAPES = ["4x4", "4x8", "4x16", "4x32", "4x64", "4x128", "8x8", "8x16", "8x32", "8x64"]
STDDEV_SIZES = ["16", "64", "256", "1024", "4096"]


# -- input files ---------------------------------------------------------------

def read_party_file(path, program: str):
    """Parse one input party's file: integers per line (stddev) or one row of counts (chisq)."""
    path = Path(path)
    values = []
    rows = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                nums = [int(tok) for tok in text.split()]
            except ValueError:
                raise InputParseError(path, lineno, f"not an integer list: {text!r}") from None
            if program.startswith("stddev"):
                if len(nums) != 1:
                    raise InputParseError(path, lineno, "expected one integer per line")
                values.append(nums[0])
            else:
                if rows:
                    raise InputParseError(path, lineno, "chi-squared party files hold a single row")
                rows.append(nums)
    if program.startswith("stddev"):
        return values
    if not rows:
        raise InputParseError(path, 0, "no data row")
    return rows[0]


def write_party_file(path, seed: int, party: int, lines):
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# seed={seed} party={party}\n")
        for line in lines:
            fh.write(f"{line}\n")
    return path


def gen_inputs(program: str, out_dir, seed: int, sizes=None, rows=None, cols=None,
               low=None, high=None) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    paths = []
    if program.startswith("stddev"):
        low = 0 if low is None else low
        high = 1000 if high is None else high
        for pid, size in enumerate(sizes):
            vals = [rng.randint(low, high) for _ in range(size)]
            paths.append(write_party_file(out_dir / f"party{pid}.txt", seed, pid, vals))
    else:
        low = 1 if low is None else low
        high = 100 if high is None else high
        for pid in range(rows):
            row = " ".join(str(rng.randint(low, high)) for _ in range(cols))
            paths.append(write_party_file(out_dir / f"party{pid}.txt", seed, pid, [row]))
    return paths


# -- reports ---------------------------------------------------------------------

def build_report(result: ProgramResult, config: EngineConfig, prec: int) -> dict:
    report = {
        "program": result.program,
        "result": float(result.value),
        "result_exact": str(result.value),
        "config": {**config.to_dict(), "prec": prec},
        "ledger": result.ledger,
    }
    if result.df is not None:
        report["df"] = result.df
    return report


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, obj))


def format_kv(report: dict) -> str:
    pairs: list = []
    _flatten("", report, pairs)
    return "".join(f"{k}={'' if v is None else v}\n" for k, v in pairs)


def _parse_scalar(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_kv(text: str) -> dict:
    """Inverse of :func:`format_kv` (numbers come back as int or float)."""
    out: dict = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        node = out
        *parents, leaf = key.split(".")
        for p in parents:
            node = node.setdefault(p, {})
        node[leaf] = _parse_scalar(value)
    return out


def format_human(report: dict, elapsed: float) -> str:
    led = report["ledger"]
    lines = [f"program        {report['program']}",
             f"result         {report['result']:.6f}"]
    if "df" in report:
        lines.append(f"df             {report['df']}")
    lines += [f"interactive    {led['interactive_ops']} ops",
              f"rounds         {led['rounds']}",
              f"bytes sent     {led['bytes_sent']}",
              f"wall clock     {elapsed:.3f} s",
              "per gate:"]
    for kind, e in led["per_gate"].items():
        lines.append(f"  {kind:<14} count={e['count']:<7} ops={e['ops']:<7} rounds={e['rounds']}")
    lines.append("phases:")
    for name, e in led["phases"].items():
        lines.append(f"  {name:<14} ops={e['interactive_ops']:<7} rounds={e['rounds']}")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str, elapsed: float = 0.0) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt in ("kv", "machine"):
        return format_kv(report)
    return format_human(report, elapsed)


# -- commands --------------------------------------------------------------------

def _config_from_args(args) -> EngineConfig:
    base = EngineConfig.from_file(args.config).to_dict() if args.config else {}
    for key, attr in [("n", "parties"), ("t", "threshold"), ("prime", "prime"), ("seed", "seed"),
                      ("frac_bits", "frac_bits"), ("cost_profile", "cost_profile")]:
        val = getattr(args, attr)
        if val is not None:
            base[key] = val
    return EngineConfig.from_dict(base)


def cmd_run(args) -> int:
    config = _config_from_args(args)
    if not args.input:
        raise SMCError("at least one --input file is required")
    data = [read_party_file(p, args.program) for p in args.input]
    result = run_program(args.program, data, config, prec=args.prec, iterations=args.iterations)
    report = build_report(result, config, args.prec)
    sys.stdout.write(render(report, args.format, result.elapsed))
    return 0


def _parse_sweep(program: str, sweep: str | None):
    items = sweep.split(",") if sweep else (STDDEV_SIZES if program.startswith("stddev") else TABLE2_SHAPES)
    out = []
    for item in items:
        item = item.strip().lower()
        if program.startswith("stddev"):
            out.append(int(item))
        else:
            n, _, m = item.partition("x")
            out.append((int(n), int(m)))
    return out


def bench(program: str, sizes, config: EngineConfig, seed: int = 0, prec: int = 1) -> list[dict]:
    """Optimized vs baseline runs on seeded data at every size."""
    family = "stddev" if program.startswith("stddev") else "chisq"
    cap = config.prime.bit_length() - 2
    for size in sizes:
        need = required_bits(family, size, config.input_bits, prec)
        if need > cap:
            raise RangeOverflowError(f"{family} at size {size} needs {need} bits; field holds {cap}")
    rows = []
    for size in sizes:
        rng = random.Random(f"{seed}:{size}")
        if family == "stddev":
            parties = 3
            data = [[rng.randint(0, 1000) for _ in range(size // parties + (i < size % parties))]
                    for i in range(parties)]
            label = str(size)
        else:
            n, m = size
            data = [[rng.randint(1, 100) for _ in range(m)] for _ in range(n)]
            label = f"{n}x{m}"
        row = {"size": label}
        for variant, name in (("opt", family), ("unopt", f"{family}-unopt")):
            t0 = time.perf_counter()
            res = run_program(name, data, config, prec=prec)
            led = res.ledger
            row[f"{variant}_seconds"] = round(time.perf_counter() - t0, 4)
            row[f"{variant}_ops"] = led["interactive_ops"]
            row[f"{variant}_rounds"] = led["rounds"]
            if family == "chisq":
                row[f"{variant}_divisions"] = led["per_gate"].get("div_fixed", {}).get("count", 0)
            else:
                row[f"{variant}_square_rounds"] = led["phases"]["squares"]["rounds"]
            row[f"{variant}_result"] = float(res.value)
        row["ops_improvement_pct"] = round(100 * (1 - row["opt_ops"] / row["unopt_ops"]), 2)
        row["rounds_improvement_pct"] = round(100 * (1 - row["opt_rounds"] / row["unopt_rounds"]), 2)
        if family == "chisq":
            row["division_improvement_pct"] = round(100 * (1 - row["opt_divisions"] / row["unopt_divisions"]), 2)
        rows.append(row)
    return rows


def cmd_bench(args) -> int:
    config = _config_from_args(args)
    sizes = _parse_sweep(args.program, args.sweep)
    rows = bench(args.program, sizes, config, seed=config.seed or 0, prec=args.prec)
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    elif args.format in ("kv", "machine"):
        for row in rows:
            sys.stdout.write(" ".join(f"{k}={v}" for k, v in row.items()) + "\n")
    else:
        cols = [k for k in rows[0] if not k.endswith("_result")]
        sys.stdout.write("  ".join(f"{c:>14}" for c in cols) + "\n")
        for row in rows:
            sys.stdout.write("  ".join(f"{row[c]!s:>14}" for c in cols) + "\n")
    return 0


def cmd_gen_inputs(args) -> int:
    if args.program.startswith("stddev"):
        if args.sizes:
            sizes = [int(s) for s in args.sizes.split(",")]
        else:
            k = args.parties_in
            sizes = [args.total // k + (i < args.total % k) for i in range(k)]
        paths = gen_inputs(args.program, args.out_dir, args.seed, sizes=sizes, low=args.low, high=args.high)
    else:
        paths = gen_inputs(args.program, args.out_dir, args.seed, rows=args.rows, cols=args.cols,
                           low=args.low, high=args.high)
    for p in paths:
        print(p)
    return 0


def _add_engine_args(p):
    p.add_argument("--program", choices=PROGRAMS, required=True)
    p.add_argument("--config", help="JSON engine configuration file")
    p.add_argument("--parties", type=int, help="computational parties n (>= 3)")
    p.add_argument("--threshold", type=int, help="threshold t (n >= 2t+1)")
    p.add_argument("--prime", help="field modulus, decimal or 0x-hex")
    p.add_argument("--seed", type=int)
    p.add_argument("--frac-bits", dest="frac_bits", type=int)
    p.add_argument("--prec", type=int, default=1, help="decimal digits of the square root")
    p.add_argument("--cost-profile", dest="cost_profile", choices=["default", "picco", "picco-emulation"])
    p.add_argument("--format", choices=["human", "kv", "machine", "json"], default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smcstats", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one secure program on per-party input files")
    _add_engine_args(run)
    run.add_argument("--input", action="append", default=[], help="input party file (repeatable)")
    run.add_argument("--iterations", type=int, help="override the Newton iteration count")
    run.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="optimized vs baseline sweep")
    _add_engine_args(b)
    b.add_argument("--sweep", help="comma list: sizes (stddev) or NxM shapes (chisq)")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen-inputs", help="write seeded per-party input files")
    g.add_argument("--program", choices=PROGRAMS, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out-dir", required=True)
    g.add_argument("--sizes", help="stddev: comma list of per-party sizes")
    g.add_argument("--total", type=int, default=64, help="stddev: total size split over --input-parties")
    g.add_argument("--input-parties", dest="parties_in", type=int, default=3)
    g.add_argument("--rows", type=int, default=4)
    g.add_argument("--cols", type=int, default=4)
    g.add_argument("--low", type=int)
    g.add_argument("--high", type=int)
    g.set_defaults(func=cmd_gen_inputs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputParseError as e:
        print(f"smcstats: parse error: {e}", file=sys.stderr)
        return 2
    except (SMCError, OSError, ZeroDivisionError, OverflowError, ValueError) as e:
        print(f"smcstats: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
