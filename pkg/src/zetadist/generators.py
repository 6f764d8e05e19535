"""Builders for the coefficient families used throughout the package.

Every generated function satisfies a(1) > 0, a(n) >= 0 and carries a growth
certificate |a(n)| <= C n^eps valid for the whole infinite sequence, so tail
bounds downstream are rigorous.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .arith import (
    ArithmeticFunction,
    GrowthBound,
    Rational,
    dirichlet_convolve,
    primes_up_to,
    smallest_factor_sieve,
)
from .errors import (
    DomainError,
    InvalidLengthError,
    ResourceLimitError,
    UnsupportedExactnessError,
)

KINDS = ("ones", "power", "divisor", "one-plus-q", "abs-moebius", "euler-zagier-star")

DIVISOR_GROWTH_EPS = 0.25


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one coefficient family, plus the truncation length."""

    kind: str
    length: int
    alpha: Optional[Rational] = None  # power
    k: Optional[int] = None           # divisor
    q: Optional[int] = None           # one-plus-q
    c: Optional[Rational] = None      # one-plus-q mass at q (default 1)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"unknown generator kind {self.kind!r}")
        if self.length < 1:
            raise InvalidLengthError(f"invalid length {self.length}")
        if self.kind == "power":
            if self.alpha is None or self.alpha > 0:
                raise DomainError("power generator needs alpha <= 0")
        if self.kind == "divisor":
            if self.k is None or self.k < 2:
                raise DomainError("divisor generator needs k >= 2")
        if self.kind == "one-plus-q":
            if self.q is None or self.q < 2:
                raise DomainError("one-plus-q generator needs q >= 2")
            if self.c is not None and self.c <= 0:
                raise DomainError("one-plus-q mass must be positive")

    def cli_name(self) -> str:
        if self.kind == "ones":
            return "ones"
        if self.kind == "power":
            return f"pow:{self.alpha}"
        if self.kind == "divisor":
            return f"dk:{self.k}"
        if self.kind == "one-plus-q":
            if self.c is None or self.c == 1:
                return f"oneplusq:{self.q}"
            return f"oneplusq:{self.q}:{self.c}"
        if self.kind == "abs-moebius":
            return "absmu"
        return "ezstar"


def parse_spec(text: str, length: int) -> GeneratorSpec:
    """Parse the CLI grammar: ones | pow:<a> | dk:<k> | oneplusq:<q>[:<c>] | absmu | ezstar."""
    parts = text.split(":")
    head = parts[0]
    try:
        if head == "ones" and len(parts) == 1:
            return GeneratorSpec("ones", length)
        if head == "pow" and len(parts) == 2:
            return GeneratorSpec("power", length, alpha=Fraction(parts[1]))
        if head == "dk" and len(parts) == 2:
            return GeneratorSpec("divisor", length, k=int(parts[1]))
        if head == "oneplusq" and len(parts) in (2, 3):
            c = Fraction(parts[2]) if len(parts) == 3 else None
            return GeneratorSpec("one-plus-q", length, q=int(parts[1]), c=c)
        if head == "absmu" and len(parts) == 1:
            return GeneratorSpec("abs-moebius", length)
        if head == "ezstar" and len(parts) == 1:
            return GeneratorSpec("euler-zagier-star", length)
    except ValueError as exc:
        raise DomainError(f"bad generator spec {text!r}: {exc}") from None
    raise DomainError(f"bad generator spec {text!r}")


def divisor_growth_constant(k: int, eps: float = DIVISOR_GROWTH_EPS) -> float:
    """Smallest C (up to the enumeration grid) with d_k(n) <= C n^eps for all n.

    d_k is multiplicative with d_k(p^e) = C(e+k-1, k-1).  A prime factor
    contributes max_e C(e+k-1,k-1)/p^(e*eps), which is 1 once
    p^eps >= 2^(k-1) (then p^(e*eps) >= 2^(e(k-1)) >= (e+1)^(k-1)), so the
    supremum over n is a finite product over p < 2^((k-1)/eps).  The factor
    ratio in e is monotone decreasing, so each per-prime max is found by
    scanning to the peak.
    """
    bound = 2 ** ((k - 1) / eps)
    if bound > (1 << 22):
        raise ResourceLimitError(
            f"divisor-family growth constant for k={k} needs a prime product up "
            f"to {bound:.3g}; choose a smaller k"
        )
    C = 1.0
    for p in primes_up_to(int(bound)):
        if p >= bound:
            break
        best, prev, e = 1.0, 1.0, 1
        while True:
            f = comb(e + k - 1, k - 1) / p ** (e * eps)
            if f > best:
                best = f
            if f < prev and f < 1.0:
                break
            prev, e = f, e + 1
        C *= best
    return C


def _square_flags(N: int) -> list[bool]:
    flags = [False] * (N + 1)
    i = 1
    while i * i <= N:
        flags[i * i] = True
        i += 1
    return flags


def generate(spec: GeneratorSpec) -> ArithmeticFunction:
    """Materialize the coefficient family described by ``spec``."""
    N = spec.length
    name = spec.cli_name()
    one = Fraction(1)
    zero = Fraction(0)

    if spec.kind == "ones":
        return ArithmeticFunction([one] * N, growth=GrowthBound(1.0, 0.0), name=name)

    if spec.kind == "power":
        alpha = spec.alpha
        if alpha.denominator != 1:
            raise UnsupportedExactnessError(
                f"n^({alpha}) has irrational coefficients; only integer exponents are exact"
            )
        e = -int(alpha)
        coeffs = [Fraction(1, n**e) for n in range(1, N + 1)]
        return ArithmeticFunction(coeffs, growth=GrowthBound(1.0, 0.0), name=name)

    if spec.kind == "divisor":
        ones = ArithmeticFunction([one] * N, name="ones")
        acc = ones
        for _ in range(spec.k - 1):
            acc = dirichlet_convolve(acc, ones)
        C = divisor_growth_constant(spec.k)
        return ArithmeticFunction(
            acc.coeffs, growth=GrowthBound(C, DIVISOR_GROWTH_EPS), name=name
        )

    if spec.kind == "one-plus-q":
        q, c = spec.q, spec.c if spec.c is not None else one
        coeffs = [zero] * N
        coeffs[0] = one
        if q <= N:
            coeffs[q - 1] = c
        return ArithmeticFunction(
            coeffs,
            growth=GrowthBound(max(1.0, float(c)), 0.0),
            name=name,
            support_limit=q,
        )

    if spec.kind == "abs-moebius":
        spf = smallest_factor_sieve(N)
        coeffs = [zero] * (N + 1)
        coeffs[1] = one
        for n in range(2, N + 1):
            m, squarefree = n, True
            while m > 1:
                p = spf[m]
                m //= p
                if m % p == 0:
                    squarefree = False
                    break
            coeffs[n] = one if squarefree else zero
        return ArithmeticFunction(coeffs[1:], growth=GrowthBound(1.0, 0.0), name=name)

    # euler-zagier-star: 1 on perfect squares, 1/2 otherwise
    half = Fraction(1, 2)
    flags = _square_flags(N)
    coeffs = [one if flags[n] else half for n in range(1, N + 1)]
    return ArithmeticFunction(coeffs, growth=GrowthBound(1.0, 0.0), name=name)
