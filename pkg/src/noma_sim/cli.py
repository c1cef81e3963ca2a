"""``noma-sim`` command line: ``ber``, ``capacity`` and ``margin`` subcommands.

Exit status: 0 success, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import capacity_sweep, power_factor_to_db
from .constellation import AMPLITUDE_CONVENTIONS, get_constellation
from .montecarlo import SimConfig, build_sim_config, run_sweep
from .receiver import ReceiverConfig, overload_margin
from .walsh import MAX_ORDER, SpreadingConfig

EXIT_USAGE = 2
EXIT_IO = 3

BER_HEADER = "ebn0_db_a,ebn0_db_b,class,iteration,bits,errors,ber,theory"
CAPACITY_HEADER = "alpha,p_over_n0,atten2_db,r1_noma,r2_noma,r_noma,r1_owma,r2_owma,r_owma,gain_pct"


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` (stop included within half a step), a comma list, or one value."""
    text = text.strip()
    if ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range {text!r} is not start:stop:step")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError(f"range step must be positive, got {step}")
    count = math.floor((stop - start) / step + 0.5) + 1
    if count < 1:
        raise ValueError(f"range {text!r} is empty")
    return [round(start + i * step, 10) for i in range(count)]


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6g}"


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------- ber


def ber_rows(records, theory: bool) -> list[str]:
    rows = [BER_HEADER]
    for rec in records:
        for cls, bits, errors, th in (
            ("A", rec.bits_a, rec.errors_a, rec.theory_a),
            ("B", rec.bits_b, rec.errors_b, rec.theory_b),
        ):
            for i, e in enumerate(errors):
                cells = [rec.ebn0_db_a, rec.ebn0_db_b, cls, i + 1, bits, e, e / bits, th if theory else None]
                rows.append(",".join(c if isinstance(c, str) else fmt(c) for c in cells))
    return rows


def _seed(args) -> int:
    if args.seed is not None:
        seed = args.seed
    else:
        env = os.environ.get("NOMA_SIM_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"NOMA_SIM_SEED must be an integer, got {env!r}") from None
    if not 0 <= seed < 2**64:
        raise UsageError(f"--seed must be in [0, 2**64), got {seed}")
    return seed


def _check_geometry(n: int, m: int, row_offset: int = 0) -> None:
    if n < 1 or n & (n - 1) or n > MAX_ORDER:
        raise UsageError(f"--n must be a power of two in [1, {MAX_ORDER}], got {n}")
    if not 0 <= m <= n:
        raise UsageError(f"--m must be in [0, --n={n}], got {m}")
    if row_offset < 0 or row_offset + m > n:
        raise UsageError(f"--row-offset {row_offset} with --m {m} exceeds the {n} Hadamard rows")


def _ber_config(args) -> SimConfig:
    if args.from_manifest:
        try:
            manifest = json.loads(Path(args.from_manifest).read_text())
        except OSError as exc:
            raise OSError(f"cannot read manifest: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"--from-manifest: not a JSON manifest ({exc})") from None
        return SimConfig.from_dict(manifest["config"])
    _check_geometry(args.n, args.m, args.row_offset)
    if args.iters < 1:
        raise UsageError(f"--iters must be >= 1, got {args.iters}")
    if args.min_errors < 1:
        raise UsageError(f"--min-errors must be >= 1, got {args.min_errors}")
    if args.max_bits < 1:
        raise UsageError(f"--max-bits must be >= 1, got {args.max_bits}")
    if args.block_frames < 1:
        raise UsageError(f"--block-frames must be >= 1, got {args.block_frames}")
    if args.mode == "tdma" and args.cp_len not in (None, 0):
        raise UsageError("--cp-len must be 0 (or omitted) with --mode tdma")
    if args.cp_len is not None and not 0 <= args.cp_len <= args.n:
        raise UsageError(f"--cp-len must be in [0, --n], got {args.cp_len}")
    if args.ref_class == "b" and args.m == 0:
        raise UsageError("--ref-class b needs --m >= 1")
    try:
        sweep = parse_range(args.ebn0)
    except ValueError as exc:
        raise UsageError(f"--ebn0: {exc}") from None
    if not sweep or any(b <= a for a, b in zip(sweep, sweep[1:])):
        raise UsageError(f"--ebn0 must list strictly increasing values, got {args.ebn0!r}")
    return build_sim_config(
        args.n,
        args.m,
        args.mod_a,
        args.mod_b,
        args.iters,
        sweep,
        amplitude=args.amplitude,
        cp_len=args.cp_len,
        mode=args.mode,
        row_offset=args.row_offset,
        ref_class=args.ref_class,
        master_seed=_seed(args),
        min_errors=args.min_errors,
        max_bits=args.max_bits,
        block_frames=args.block_frames,
    )


def cmd_ber(args) -> int:
    cfg = _ber_config(args)
    if args.workers < 1:
        raise UsageError(f"--workers must be >= 1, got {args.workers}")
    out = Path(args.out)
    csv_path = out.with_name(out.name + ".csv")
    manifest_path = out.with_name(out.name + ".manifest.json")
    if not csv_path.parent.is_dir():
        raise OSError(f"output directory {csv_path.parent} does not exist")

    def progress(rec):
        if not args.quiet:
            print(
                f"Eb/N0 A={fmt(rec.ebn0_db_a)} dB B={fmt(rec.ebn0_db_b)} dB frames={rec.frames} "
                f"ber_a={[fmt(x) for x in rec.ber_a]} ber_b={[fmt(x) for x in rec.ber_b]}",
                file=sys.stderr,
            )

    started = datetime.now(timezone.utc).isoformat()
    records = run_sweep(cfg, workers=args.workers, progress=progress)
    finished = datetime.now(timezone.utc).isoformat()
    _write_text(csv_path, "\n".join(ber_rows(records, args.theory)) + "\n")
    manifest = {
        "tool": "noma-sim",
        "version": __version__,
        "command": "ber",
        "master_seed": cfg.master_seed,
        "config": cfg.to_dict(),
        "started": started,
        "finished": finished,
        "points": [
            {
                "ebn0_db_a": fmt(r.ebn0_db_a),
                "ebn0_db_b": fmt(r.ebn0_db_b),
                "frames": r.frames,
                "capped": r.capped,
                "runtime_s": round(r.runtime_s, 6),
            }
            for r in records
        ],
    }
    _write_text(manifest_path, json.dumps(manifest, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------- capacity


def cmd_capacity(args) -> int:
    try:
        alphas = parse_range(args.alpha)
        snrs = parse_range(args.p_over_n0)
    except ValueError as exc:
        raise UsageError(f"--alpha/--p-over-n0: {exc}") from None
    if args.power_factor is not None:
        try:
            attens = [power_factor_to_db(f) for f in parse_range(args.power_factor)]
        except ValueError as exc:
            raise UsageError(f"--power-factor: {exc}") from None
    else:
        try:
            attens = parse_range(args.atten_db)
        except ValueError as exc:
            raise UsageError(f"--atten-db: {exc}") from None
    if any(not 0 <= a <= 1 for a in alphas):
        raise UsageError("--alpha values must lie in [0, 1]")
    if any(s < 0 for s in snrs):
        raise UsageError("--p-over-n0 values must be >= 0")
    if any(a < 0 for a in attens):
        raise UsageError("--atten-db values must be >= 0")
    try:
        rows = capacity_sweep(alphas, snrs, attens)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [CAPACITY_HEADER]
    for row in rows:
        s, nm, ow = row.split, row.noma, row.owma
        vals = [s.alpha, s.p_over_n0, s.atten2_db, nm.r1, nm.r2, nm.r_total, ow.r1, ow.r2, ow.r_total, row.gain_pct]
        lines.append(",".join(fmt(v) for v in vals))
    text = "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        _write_text(out.with_name(out.name + ".csv"), text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- margin


def cmd_margin(args) -> int:
    _check_geometry(args.n, args.m)
    cfg = ReceiverConfig(
        SpreadingConfig(args.n, args.m),
        get_constellation(args.mod_a, args.amplitude),
        get_constellation(args.mod_b, args.amplitude),
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        diag = overload_margin(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    print(diag.report())
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="noma-sim", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def link_flags(sp):
        sp.add_argument("--n", type=int, default=64, help="carriers / chips per frame (power of two)")
        sp.add_argument("--m", type=int, default=4, help="number of MC-CDMA users")
        sp.add_argument("--mod-a", choices=("qam16", "qpsk"), default="qam16")
        sp.add_argument("--mod-b", choices=("qpsk", "qam16"), default="qpsk")
        sp.add_argument(
            "--amplitude",
            choices=AMPLITUDE_CONVENTIONS,
            default="lattice",
            help="symbol amplitude convention (default: odd-integer lattice)",
        )

    b = sub.add_parser("ber", help="Monte Carlo BER sweep")
    link_flags(b)
    b.add_argument("--iters", type=int, default=2)
    b.add_argument("--ebn0", default="4:16:1", help="start:stop:step in dB, or a comma list")
    b.add_argument("--ref-class", choices=("a", "b"), default="a")
    b.add_argument("--seed", type=int, default=None, help="master seed (fallback: $NOMA_SIM_SEED, then 0)")
    b.add_argument("--min-errors", type=int, default=200)
    b.add_argument("--max-bits", type=lambda s: int(float(s)), default=10**8)
    b.add_argument("--cp-len", type=int, default=None)
    b.add_argument("--mode", choices=("ofdma", "tdma"), default="ofdma")
    b.add_argument("--row-offset", type=int, default=0)
    b.add_argument("--block-frames", type=int, default=1024)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", default="ber")
    b.add_argument("--theory", action="store_true", help="fill the theory column")
    b.add_argument("--from-manifest", metavar="PATH", help="rerun the configuration stored in a manifest")
    b.add_argument("--quiet", action="store_true")
    b.set_defaults(func=cmd_ber)

    c = sub.add_parser("capacity", help="two-user NOMA vs orthogonal capacity table")
    c.add_argument("--alpha", default="0.8", help="value, list or start:stop:step")
    c.add_argument("--p-over-n0", default="15")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--atten-db", default="6.0206")
    g.add_argument("--power-factor", default=None, help="user-2 power division factor, e.g. 4")
    c.add_argument("--out", default=None, help="write <out>.csv instead of stdout")
    c.set_defaults(func=cmd_capacity)

    mg = sub.add_parser("margin", help="eye-opening diagnostic for a spread-user load")
    link_flags(mg)
    mg.set_defaults(func=cmd_margin)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"noma-sim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"noma-sim {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
