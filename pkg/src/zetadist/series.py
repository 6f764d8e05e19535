"""Numerical evaluation of the Dirichlet series, its derivatives, the
normalized characteristic function, and the logarithm series, with rigorous
truncation-tail bounds derived from growth certificates.

All floating point lives here (and downstream); values are complex doubles.
n^{-s} is computed as exp(-s log n) with the platform log.
"""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .arith import ArithmeticFunction, MangoldtSequence
from .errors import DomainError, OutOfDomainError, ResourceLimitError

DEFAULT_N = 10**5
DEFAULT_N_CAP = 10**7
DERIVATIVE_EPS_BUMP = 0.1
_CHUNK = 1 << 20


class NotCharacteristicWarning(UserWarning):
    """The normalized quotient is not a characteristic function
    (some coefficient is negative)."""


def n_cap() -> int:
    """Global truncation cap; override with the ZETADIST_MAX_N env var."""
    raw = os.environ.get("ZETADIST_MAX_N")
    return int(raw) if raw else DEFAULT_N_CAP


@dataclass(frozen=True)
class EvalPoint:
    """A point sigma + i t in the half-plane of absolute convergence."""

    sigma: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if not self.sigma > 1.0:
            raise OutOfDomainError(f"sigma={self.sigma} must exceed 1")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class EvalResult:
    """Truncated value plus an absolute bound on the discarded tail.

    ``tail_bound`` is +inf when no growth certificate makes a bound possible;
    it is exactly 0 for series known to be finitely supported within the
    truncation.
    """

    value: complex
    tail_bound: float
    N_used: int

    @property
    def certified(self) -> bool:
        return math.isfinite(self.tail_bound)


def tail_bound(C: float, eps: float, sigma: float, N: int) -> float:
    """Bound on |sum_{n>N} a(n) n^{-s}| when |a(n)| <= C n^eps and Re s = sigma.

    Integral comparison of the decreasing summand:
    C * (N^{1+eps-sigma}/(sigma-eps-1) + N^{eps-sigma}).
    """
    if N < 1:
        raise DomainError(f"N={N} must be >= 1")
    if not sigma > 1.0 + eps:
        raise OutOfDomainError(f"sigma={sigma} must exceed 1+eps={1.0 + eps}")
    return C * (N ** (1.0 + eps - sigma) / (sigma - eps - 1.0) + N ** (eps - sigma))


def derivative_growth(C: float, eps: float, order: int, delta: float = DERIVATIVE_EPS_BUMP) -> tuple[float, float]:
    """Growth certificate for a(n) log^order(n) given one for a(n).

    log^k(n) <= (k/(delta e))^k * n^delta for every n >= 1 (the maximum of
    log^k(x)/x^delta over x >= 1), so C picks up that factor and eps gains
    delta.
    """
    if order == 0:
        return C, eps
    return C * (order / (delta * math.e)) ** order, eps + delta


def _tail_for(a: ArithmeticFunction, sigma: float, N: int, order: int) -> float:
    if a.support_limit is not None and N >= a.support_limit:
        return 0.0
    if a.growth is None:
        return math.inf
    C, eps = derivative_growth(a.growth.C, a.growth.eps, order)
    return tail_bound(C, eps, sigma, N)


def _require_domain(a: ArithmeticFunction, sigma: float, order: int) -> None:
    if a.growth is not None:
        _, eps = derivative_growth(a.growth.C, a.growth.eps, order)
        if not sigma > 1.0 + eps:
            raise OutOfDomainError(
                f"sigma={sigma} not above 1+eps={1.0 + eps} required by the growth certificate"
                + (f" (eps bumped by {DERIVATIVE_EPS_BUMP} for order {order})" if order else "")
            )


def _resolve_n(a: ArithmeticFunction, sigma: float, N: Optional[int], tol: Optional[float], order: int) -> int:
    cap = n_cap()
    if N is not None:
        if N < 1:
            raise DomainError(f"N={N} must be >= 1")
        return min(N, len(a))
    if tol is None:
        return min(DEFAULT_N, len(a))
    # auto mode: smallest N with tail <= tol (monotone in N), subject to caps
    if a.support_limit is not None and a.support_limit <= min(len(a), cap):
        return min(len(a), max(a.support_limit, 1))
    if a.growth is None:
        raise OutOfDomainError("tolerance-driven truncation needs a growth certificate")
    lo, hi = 1, min(len(a), cap)
    if _tail_for(a, sigma, hi, order) > tol:
        if len(a) < cap:
            raise ResourceLimitError(
                f"tolerance {tol} needs more than the {len(a)} stored coefficients"
            )
        raise ResourceLimitError(f"tolerance {tol} unreachable within the N cap {cap}")
    while lo < hi:
        mid = (lo + hi) // 2
        if _tail_for(a, sigma, mid, order) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _partial_sum(a: ArithmeticFunction, s: complex, order: int, N: int) -> complex:
    fa = a.float_coeffs()
    logn = a.log_n()
    total = 0.0 + 0.0j
    for start in range(0, N, _CHUNK):
        stop = min(start + _CHUNK, N)
        ln = logn[start:stop]
        terms = fa[start:stop] * np.exp(-s * ln)
        if order:
            terms = terms * (-ln) ** order
        total += complex(terms.sum())
    return total


def evaluate_series(
    a: ArithmeticFunction,
    s: EvalPoint,
    order: int = 0,
    N: Optional[int] = None,
    tol: Optional[float] = None,
) -> EvalResult:
    """sum_{n<=N} a(n) (-log n)^order n^{-s} with a tail bound.

    order 0/1/2 give the series, its first and its second derivative.  With a
    growth certificate present, sigma must exceed 1+eps (1+eps+0.1 for
    derivative orders, which absorb the log factor into the exponent); without
    one the value is returned with tail_bound=+inf and a warning.
    """
    if order not in (0, 1, 2):
        raise DomainError(f"order={order} not in (0, 1, 2)")
    _require_domain(a, s.sigma, order)
    N_used = _resolve_n(a, s.sigma, N, tol, order)
    value = _partial_sum(a, s.s, order, N_used)
    tb = _tail_for(a, s.sigma, N_used, order)
    if math.isinf(tb):
        warnings.warn("no growth certificate: tail bound is +inf", stacklevel=2)
    return EvalResult(value=value, tail_bound=tb, N_used=N_used)


def evaluate_series_batch(a: ArithmeticFunction, points: np.ndarray, order: int = 0, N: Optional[int] = None):
    """Values of the truncated series (and derivative orders up to ``order``)
    at a batch of complex points; one pass over the coefficients.

    Returns an array of shape (order+1, len(points)).  No tail bookkeeping:
    this is the evaluation kernel used by the contour scanner, which handles
    tails itself.
    """
    pts = np.asarray(points, dtype=np.complex128)
    N_used = min(N if N is not None else DEFAULT_N, len(a))
    fa = a.float_coeffs()
    logn = a.log_n()
    out = np.zeros((order + 1, pts.size), dtype=np.complex128)
    chunk = max(1024, _CHUNK // max(1, pts.size))
    for start in range(0, N_used, chunk):
        stop = min(start + chunk, N_used)
        ln = logn[start:stop]
        e = np.exp(-np.multiply.outer(pts, ln))
        w = fa[start:stop]
        for k in range(order + 1):
            out[k] += e @ (w * (-ln) ** k)
    return out


def evaluate_cf(
    a: ArithmeticFunction,
    sigma: float,
    t: float,
    N: Optional[int] = None,
    tol: Optional[float] = None,
) -> complex:
    """The normalized value Z(sigma+it)/Z(sigma), both at the same truncation.

    This is a characteristic function exactly when all coefficients are
    nonnegative; a negative coefficient triggers NotCharacteristicWarning but
    the quotient is still returned.
    """
    if not sigma > 1.0:
        raise OutOfDomainError(f"sigma={sigma} must exceed 1")
    if float(a.float_coeffs().min()) < 0.0:
        warnings.warn(
            "negative coefficient present: quotient is not a characteristic function",
            NotCharacteristicWarning,
            stacklevel=2,
        )
    _require_domain(a, sigma, 0)
    N_used = _resolve_n(a, sigma, N, tol, 0)
    num = _partial_sum(a, complex(sigma, t), 0, N_used)
    den = _partial_sum(a, complex(sigma, 0.0), 0, N_used)
    if den == 0:
        raise DomainError("normalizer Z(sigma) vanished at this truncation")
    return num / den


def evaluate_log_series(
    lam: MangoldtSequence,
    a1: Fraction,
    s: EvalPoint,
    growth: Optional[tuple[float, float]] = None,
) -> EvalResult:
    """log a(1) + sum_{2<=n<=N} (A(n)/log n) n^{-s}: the series whose
    exponential reproduces the Dirichlet series.

    The tail is certified only when the caller supplies ``growth`` = (C, eps)
    with |A(n)/log n| <= C n^eps; the convergence abscissa of this series is
    not derivable from stored data, so absent a certificate the result is
    heuristic (tail_bound=+inf).
    """
    if a1 <= 0:
        raise DomainError(f"a(1)={a1} must be positive for the logarithm")
    ns, vals = lam.float_arrays()
    if ns.size:
        ln = np.log(ns.astype(np.float64))
        value = complex(((vals / ln) * np.exp(-s.s * ln)).sum())
    else:
        value = 0.0 + 0.0j
    value += math.log(float(a1))
    if growth is None:
        tb = math.inf
    else:
        C, eps = growth
        tb = tail_bound(C, eps, s.sigma, lam.N)
    return EvalResult(value=value, tail_bound=tb, N_used=lam.N)
