"""Confluent (1F1) and Gauss (2F1) hypergeometric series.

Both functions sum the power series directly, carrying the Pochhammer
symbols multiplicatively inside the running term.  A non-positive
integer numerator parameter turns the series into a polynomial, which is
then summed exactly to its last non-zero term regardless of ``tol`` and
``max_terms``.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, PoleError

__all__ = ["SeriesParams", "hyp1f1", "hyp2f1", "series_terms"]


@dataclass(frozen=True)
class SeriesParams:
    max_terms: int = 500
    tol: float = 1e-15

    def __post_init__(self) -> None:
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


DEFAULT = SeriesParams()


def _real(name: str, value) -> float:
    if isinstance(value, complex):
        raise TypeError(f"{name} must be real, got complex {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v!r}")
    return v


def _nonpositive_int(v: float) -> bool:
    return v <= 0 and v == math.floor(v)


def series_terms(
    numer: Sequence[float], denom: float, x: float, max_terms: int | None = None
) -> Iterator[float]:
    """Yield the terms of sum_k prod_i (numer_i)_k x^k / ((denom)_k k!).

    Generation stops after the last non-zero term of a terminating series,
    or after ``max_terms`` terms if given.  Raises PoleError if ``(denom)_k``
    vanishes before the series has terminated.
    """
    term = 1.0
    k = 0
    while True:
        yield term
        if max_terms is not None and k + 1 >= max_terms:
            return
        if any(a + k == 0 for a in numer):
            return
        if denom + k == 0:
            raise PoleError(
                f"denominator parameter {denom} reaches a pole at term {k + 1}"
            )
        ratio = x / ((denom + k) * (k + 1))
        for a in numer:
            ratio *= a + k
        term *= ratio
        k += 1


def _sum(numer: Sequence[float], denom: float, x: float, params: SeriesParams) -> float:
    if x == 0.0:
        return 1.0
    if any(_nonpositive_int(a) for a in numer):
        # polynomial: no truncation, independent of tol/max_terms
        return math.fsum(series_terms(numer, denom, x))

    total = 0.0
    terms = []
    prev = None
    for k, term in enumerate(series_terms(numer, denom, x)):
        terms.append(term)
        total += term
        shrinking = prev is None or abs(term) <= abs(prev)
        if k > 0 and shrinking and abs(term) < params.tol * abs(total):
            return math.fsum(terms)
        if k + 1 >= params.max_terms:
            break
        prev = term
    raise ConvergenceError(
        f"series did not converge within {params.max_terms} terms (x={x})"
    )


def hyp1f1(a: float, c: float, x: float, params: SeriesParams = DEFAULT) -> float:
    """Kummer's function 1F1(a; c; x) for real arguments."""
    a, c, x = _real("a", a), _real("c", c), _real("x", x)
    return _sum((a,), c, x, params)


def hyp2f1(
    a: float, b: float, c: float, x: float, params: SeriesParams = DEFAULT
) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; x).

    Only the disc |x| < 1 is supported unless ``a`` or ``b`` is a
    non-positive integer, in which case any finite x is accepted.
    """
    a, b, c, x = _real("a", a), _real("b", b), _real("c", c), _real("x", x)
    terminating = _nonpositive_int(a) or _nonpositive_int(b)
    if not terminating and abs(x) >= 1.0:
        raise DomainError(f"2F1 series diverges for |x| >= 1 (x={x})")
    return _sum((a, b), c, x, params)
