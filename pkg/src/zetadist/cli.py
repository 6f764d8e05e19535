"""Command-line front end: generators -> computations -> CSV/JSON outputs,
with a reproducibility manifest beside every file written.

Exit codes: 0 success, 1 domain error, 2 resource error, 3 I/O error.
Errors are emitted as one JSON object on stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .arith import ArithmeticFunction, LogLinear, von_mangoldt
from .dist import RNG_ALGORITHM, build_distribution, moments_analytic, moments_direct, sample
from .errors import DomainError, ResourceLimitError, ZetadistError
from .generators import generate, parse_spec
from .levy import classify, quasi_levy_measure
from .series import EvalPoint, evaluate_cf, evaluate_series
from .zeroscan import Rectangle, count_zeros, estimate_sigma0

FLOAT_FMT = "%.17g"

_RUN_START = time.monotonic()


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


@dataclass
class RunManifest:
    """Everything needed to reproduce one output file byte-for-byte
    (exact outputs) or bit-for-bit on the same binary (float outputs)."""

    command: list[str]
    source: str
    N: Optional[int] = None
    seed: Optional[int] = None
    tolerances: dict = field(default_factory=dict)
    tool_version: str = __version__
    rng_algorithm: Optional[str] = None
    wall_time_s: float = 0.0

    def write(self, out_path: Path) -> None:
        if self.wall_time_s == 0.0:
            self.wall_time_s = time.monotonic() - _RUN_START
        payload = {
            "command": self.command,
            "source": self.source,
            "N": self.N,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "tool_version": self.tool_version,
            "rng_algorithm": self.rng_algorithm,
            "wall_time_s": round(self.wall_time_s, 6),
        }
        manifest_path = out_path.with_name(out_path.name + ".manifest.json")
        manifest_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _resolve_function(text: str, length: int) -> tuple[ArithmeticFunction, str]:
    """Generator spec or a JSON file path; returns (function, source label)."""
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise IOError(f"cannot read {text}: {exc}") from exc
        try:
            fn = ArithmeticFunction.from_json(raw.decode("utf-8"))
        except (ValueError, KeyError, TypeError, UnicodeDecodeError) as exc:
            raise DomainError(f"malformed function file {text}: {exc}") from exc
        return fn, f"file:{text}:sha256:{hashlib.sha256(raw).hexdigest()}"
    spec = parse_spec(text, length)
    return generate(spec), f"gen:{spec.cli_name()}:N={length}"


class _Out:
    """stdout by default; with --out DIR, a named file plus its manifest."""

    def __init__(self, out_dir: Optional[str], filename: str):
        self.path = Path(out_dir) / filename if out_dir else None
        self.lines: list[str] = []

    def write_line(self, line: str) -> None:
        self.lines.append(line)

    def finish(self, manifest: RunManifest) -> None:
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.path is None:
            sys.stdout.write(text)
        else:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                self.path.write_text(text, encoding="utf-8")
            except OSError as exc:
                raise IOError(str(exc)) from exc
            manifest.write(self.path)


def _t_values(arg: str) -> list[float]:
    """Parse --t: single value or start:stop:steps."""
    parts = arg.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 2:
                return [start]
            return list(np.linspace(start, stop, steps))
    except ValueError:
        pass
    raise DomainError(f"bad --t value {arg!r}: expected t or start:stop:steps")


def _loglinear_str(v: LogLinear) -> str:
    if v.is_zero():
        return "0"
    return " + ".join(f"({c})*log({p})" for p, c in sorted(v.terms.items()))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    out = _Out(args.out, "function.json")
    out.write_line(fn.to_json())
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.max))
    return 0


def cmd_convolve(args) -> int:
    from .arith import dirichlet_convolve

    fa, sa = _resolve_function(args.a, args.max)
    fb, sb = _resolve_function(args.b, args.max)
    out = _Out(args.out, "convolution.json")
    out.write_line(dirichlet_convolve(fa, fb).to_json())
    out.finish(RunManifest(command=sys.argv[1:], source=f"{sa};{sb}", N=args.max))
    return 0


def cmd_inverse(args) -> int:
    from .arith import dirichlet_inverse

    fn, source = _resolve_function(args.a, args.max)
    out = _Out(args.out, "inverse.json")
    out.write_line(dirichlet_inverse(fn).to_json())
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.max))
    return 0


def cmd_acoeffs(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    lam = von_mangoldt(fn)
    out = _Out(args.out, "acoeffs.csv")
    out.write_line("n,A_exact,A_float")
    for n in range(2, args.max + 1):
        v = lam[n]
        out.write_line(f"{n},{_loglinear_str(v)},{_fmt(v.evaluate())}")
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.max))
    return 0


def cmd_eval(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    out = _Out(args.out, "eval.csv")
    out.write_line("sigma,t,re,im,tail_bound,N")
    for t in _t_values(args.t):
        r = evaluate_series(fn, EvalPoint(args.sigma, t), order=args.order, N=args.N, tol=args.tol)
        out.write_line(
            f"{_fmt(args.sigma)},{_fmt(t)},{_fmt(r.value.real)},{_fmt(r.value.imag)},{_fmt(r.tail_bound)},{r.N_used}"
        )
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.N or args.max,
                           tolerances={"tol": args.tol}))
    return 0


def cmd_cf(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    out = _Out(args.out, "cf.csv")
    out.write_line("sigma,t,re,im")
    for t in _t_values(args.t):
        v = evaluate_cf(fn, args.sigma, t, N=args.N)
        out.write_line(f"{_fmt(args.sigma)},{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)}")
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.N or args.max))
    return 0


def _parse_rect(arg: str) -> Rectangle:
    try:
        s1, s2, t1, t2 = (float(x) for x in arg.split(","))
    except ValueError as exc:
        raise DomainError(f"bad --rect value {arg!r}: expected sigma1,sigma2,t1,t2") from exc
    return Rectangle(s1, s2, t1, t2)


def cmd_zeros(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    report = count_zeros(fn, _parse_rect(args.rect), N=args.N, quad_tol=args.tol)
    out = _Out(args.out, "zeros.json")
    out.write_line(json.dumps(report.to_json_obj(), sort_keys=True))
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=report.N_used,
                           tolerances={"quad_tol": args.tol}))
    return 0


def cmd_sigma0(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    est = estimate_sigma0(fn, T=args.height, sigma_hi=args.sigma_hi, tol=args.tol,
                          sigma_lo=args.sigma_lo, N=args.N)
    out = _Out(args.out, "sigma0.json")
    out.write_line(json.dumps({
        "bracket": list(est.bracket),
        "certificate": est.certificate,
        "degenerate": est.degenerate,
        "height_T": est.height,
        "strip": [est.sigma_lo, est.sigma_hi],
    }, sort_keys=True))
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.N,
                           tolerances={"tol": args.tol}))
    return 0


def cmd_dist(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    d = build_distribution(fn, args.sigma, args.tol)
    out = _Out(args.out, "dist.csv")
    out.write_line("n,x,pmf")
    head = min(args.head, d.N)
    for n in range(1, head + 1):
        out.write_line(f"{n},{_fmt(-math.log(n))},{_fmt(float(d.pmf[n - 1]))}")
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=d.N,
                           tolerances={"tol": args.tol}))
    return 0


def cmd_moments(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    if args.method == "analytic":
        lam = von_mangoldt(fn)
        mean, var = moments_analytic(lam, args.sigma)
    else:
        d = build_distribution(fn, args.sigma, args.tol)
        mean, var = moments_direct(d)
    out = _Out(args.out, "moments.json")
    out.write_line(json.dumps({"mean": mean, "variance": var, "method": args.method}, sort_keys=True))
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=args.max,
                           tolerances={"tol": args.tol}))
    return 0


def cmd_sample(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    d = build_distribution(fn, args.sigma, args.tol)
    draws = sample(d, args.count, args.seed, workers=args.threads, max_tail_mass=args.max_tail_mass)
    out = _Out(args.out, "samples.txt")
    for x in draws:
        out.write_line(_fmt(float(x)))
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=d.N, seed=args.seed,
                           tolerances={"tol": args.tol, "max_tail_mass": args.max_tail_mass},
                           rng_algorithm=RNG_ALGORITHM))
    return 0


def cmd_levy(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    lam = von_mangoldt(fn)
    m = quasi_levy_measure(lam, args.sigma)
    out = _Out(args.out, "levy.csv")
    out.write_line("n,position,mass")
    for n, pos, mass in zip(m.ns, m.positions, m.masses):
        out.write_line(f"{int(n)},{_fmt(float(pos))},{_fmt(float(mass))}")
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=lam.N))
    return 0


def cmd_classify(args) -> int:
    fn, source = _resolve_function(args.gen, args.max)
    lam = von_mangoldt(fn)
    result = classify(fn, lam, T=args.height, sigma_hi=args.sigma_hi,
                      sigma_lo=args.sigma_lo, tol=args.tol, N=args.N)
    out = _Out(args.out, "classification.json")
    out.write_line(json.dumps(result.to_json_obj(), sort_keys=True))
    out.finish(RunManifest(command=sys.argv[1:], source=source, N=lam.N,
                           tolerances={"tol": args.tol}))
    return 0


# -- paper-tables: recompute the published worked values ---------------------

def _pattern_rows(name: str, maxn: int, expected_ratio) -> list[tuple[str, str, str, bool]]:
    """Rows (label, published, computed, match) for one family's
    A(n)/log n pattern at prime powers."""
    from .arith import factorize

    fn, _ = _resolve_function(name, maxn)
    lam = von_mangoldt(fn)
    rows = []
    for n in range(2, maxn + 1):
        fac = factorize(n)
        if len(fac) == 1:
            p, r = next(iter(fac.items()))
            want = expected_ratio(p, r)
            want_ll = LogLinear.log_of(n, want)
        else:
            want_ll = LogLinear()
        got = lam[n]
        rows.append((f"{name} A({n})", _loglinear_str(want_ll), _loglinear_str(got), got == want_ll))
    return rows


def cmd_paper_tables(args) -> int:
    maxn = args.max
    lines: list[str] = []
    failures = 0
    known_flags = 0

    def emit(label: str, published: str, computed: str, match: bool, known: bool = False):
        nonlocal failures, known_flags
        if match and not known:
            status = "OK"
        elif match and known:
            # a documented discrepancy that suddenly matches means the
            # recursion itself changed: that is a failure, not a pass
            status = "UNEXPECTED-MATCH"
            failures += 1
        elif known:
            status = "KNOWN-DISCREPANCY"
            known_flags += 1
        else:
            status = "MISMATCH"
            failures += 1
        lines.append(f"{status:18} {label:24} published={published:24} computed={computed}")

    patterns = [
        ("ones", lambda p, r: Fraction(1, r)),
        ("pow:-1", lambda p, r: Fraction(1, p**r) / r),
        ("dk:2", lambda p, r: Fraction(2, r)),
        ("dk:3", lambda p, r: Fraction(3, r)),
        ("oneplusq:2", lambda p, r: Fraction((-1) ** (r - 1), r) if p == 2 else Fraction(0)),
        ("absmu", lambda p, r: Fraction((-1) ** (r - 1), r)),
    ]
    for name, ratio in patterns:
        for label, published, computed, match in _pattern_rows(name, maxn, ratio):
            emit(label, published, computed, match)

    # The square/half family: published table vs the exact recursion.
    # The published list shows A(n) = log n at n = 2,3,5,7 and (1/8)log 8 at
    # n = 8, but the same source's own displayed recursion steps give
    # (1/2)log n and (1/8)log 2; the recursion is authoritative here and the
    # disagreements are flagged as known.
    ez, _ = _resolve_function("ezstar", max(maxn, 12))
    lam = von_mangoldt(ez)
    h_published = {
        2: (LogLinear.log_of(2), True),
        3: (LogLinear.log_of(3), True),
        4: (LogLinear.log_of(4, Fraction(7, 8)), False),
        5: (LogLinear.log_of(5), True),
        6: (LogLinear.log_of(6, Fraction(1, 4)), False),
        7: (LogLinear.log_of(7), True),
        8: (LogLinear.log_of(8, Fraction(1, 8)), True),
        12: (LogLinear.log_of(12, Fraction(-1, 8)), False),
    }
    for n, (published, known) in h_published.items():
        got = lam[n]
        emit(f"ezstar A({n})", _loglinear_str(published), _loglinear_str(got), got == published, known=known)

    out = _Out(args.out, "paper-tables.txt")
    out.write_line(f"reference tables: recomputed worked values up to n={maxn}")
    for line in lines:
        out.write_line(line)
    out.write_line(f"summary: {failures} unexpected mismatches, {known_flags} known discrepancies flagged")
    out.finish(RunManifest(command=sys.argv[1:], source="paper-tables", N=maxn))
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zetadist",
        description="Dirichlet-series zeta distributions: exact coefficients, "
        "series evaluation, zero scanning, sampling and classification.",
        epilog="Set ZETADIST_MAX_N to override the default truncation cap (10^7).",
    )
    ap.add_argument("--out", help="write outputs (plus manifests) into this directory")
    ap.add_argument("--threads", type=int, default=1, help="worker cap for sampling")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, gen_flag="--gen"):
        p.add_argument(gen_flag, required=True,
                       help="generator spec (ones, pow:<a>, dk:<k>, oneplusq:<q>[:<c>], absmu, ezstar) or JSON file")
        p.add_argument("--max", type=int, default=10**5, help="generated coefficient length")

    p = sub.add_parser("gen", help="emit a coefficient family as JSON")
    common(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("convolve", help="Dirichlet convolution of two functions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--max", type=int, default=10**4)
    p.set_defaults(fn=cmd_convolve)

    p = sub.add_parser("inverse", help="Dirichlet inverse")
    p.add_argument("--a", required=True)
    p.add_argument("--max", type=int, default=10**4)
    p.set_defaults(fn=cmd_inverse)

    p = sub.add_parser("acoeffs", help="exact A(n) table")
    common(p)
    p.set_defaults(fn=cmd_acoeffs)

    p = sub.add_parser("eval", help="evaluate the series (CSV)")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", default="0", help="t or start:stop:steps")
    p.add_argument("--order", type=int, default=0, choices=(0, 1, 2))
    p.add_argument("--N", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("cf", help="normalized characteristic function values (CSV)")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", default="0")
    p.add_argument("--N", type=int)
    p.set_defaults(fn=cmd_cf)

    p = sub.add_parser("zeros", help="certified zero count in a rectangle (JSON)")
    common(p)
    p.add_argument("--rect", required=True, help="sigma1,sigma2,t1,t2")
    p.add_argument("--N", type=int)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(fn=cmd_zeros)

    p = sub.add_parser("sigma0", help="bounded-height zero-free abscissa bracket (JSON)")
    common(p)
    p.add_argument("--height", type=float, required=True)
    p.add_argument("--sigma-hi", type=float, default=4.0)
    p.add_argument("--sigma-lo", type=float)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--N", type=int)
    p.set_defaults(fn=cmd_sigma0)

    p = sub.add_parser("dist", help="PMF head of the zeta distribution (CSV)")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--head", type=int, default=20)
    p.set_defaults(fn=cmd_dist)

    p = sub.add_parser("moments", help="mean and variance (JSON)")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--method", choices=("analytic", "direct"), default="analytic")
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("sample", help="reproducible draws, one per line")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12,
                   help="relative tail-mass tolerance for the truncation")
    p.add_argument("--max-tail-mass", type=float, default=1e-12,
                   help="refuse to sample when the tail mass exceeds this gate")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("levy", help="quasi-Levy measure atoms (CSV)")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.set_defaults(fn=cmd_levy)

    p = sub.add_parser("classify", help="divisibility trichotomy verdict (JSON)")
    common(p)
    p.add_argument("--height", type=float, required=True)
    p.add_argument("--sigma-hi", type=float, default=4.0)
    p.add_argument("--sigma-lo", type=float)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--N", type=int)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("paper-tables", help="recompute the published worked values and flag discrepancies")
    p.add_argument("--max", type=int, default=64)
    p.set_defaults(fn=cmd_paper_tables)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    global _RUN_START
    _RUN_START = time.monotonic()
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimitError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except OSError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except ZetadistError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
