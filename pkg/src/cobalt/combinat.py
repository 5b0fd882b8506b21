"""Combinatorial sequences and dimension formulas used as independent oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any


@dataclass(frozen=True)
class SequenceTable:
    name: str
    values: tuple[int, ...]
    definition: str  # "closed_form", "recurrence" or "egf_extraction"


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    if n < 0:
        raise ValueError("bell(n) needs n >= 0")
    # Bell triangle recurrence B_{n+1} = sum C(n,k) B_k
    if n == 0:
        return 1
    return sum(comb(n - 1, k) * bell(k) for k in range(n))


def generalized_bell(n: int, k: int) -> int:
    """Set partitions of n elements with one of k labels per block."""
    if n < 0 or k < 0:
        raise ValueError("generalized_bell needs n, k >= 0")
    return sum(stirling2(n, j) * k**j for j in range(n + 1))


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("catalan(n) needs n >= 0")
    return comb(2 * n, n) // (n + 1)


def narayana(n: int, k: int) -> int:
    if not 1 <= k <= n:
        raise ValueError(f"narayana({n}, {k}) needs 1 <= k <= n")
    return comb(n, k) * comb(n, k - 1) // n


def catalan_h(n: int, h: int) -> int:
    """c_{n,h} = C(2n, n-h) - C(2n, n-h-1), zero outside the valid range."""

    def c(a: int, b: int) -> int:
        return comb(a, b) if 0 <= b <= a else 0

    return c(2 * n, n - h) - c(2 * n, n - h - 1)


@lru_cache(maxsize=None)
def a_seq(n: int) -> int:
    """a_n = 2 a_{n-1} + (n-1) a_{n-2} with a_0 = 1, a_1 = 2."""
    if n < 0:
        raise ValueError("a_seq(n) needs n >= 0")
    if n == 0:
        return 1
    if n == 1:
        return 2
    return 2 * a_seq(n - 1) + (n - 1) * a_seq(n - 2)


def a_seq_closed(n: int) -> int:
    """sum_j C(n, 2j) 2^(n-2j) (2j-1)!!, the expansion of exp(2t + t^2/2)."""

    def dfact(m: int) -> int:
        out = 1
        while m > 1:
            out *= m
            m -= 2
        return out

    return sum(comb(n, 2 * j) * 2 ** (n - 2 * j) * dfact(2 * j - 1) for j in range(n // 2 + 1))


# ----------------------------------------------------------- EGF utilities


def _egf_exp(f: list[Fraction], order: int) -> list[Fraction]:
    """exp of a power series with zero constant term, via g' = f' g."""
    g = [Fraction(0)] * (order + 1)
    g[0] = Fraction(1)
    for n in range(1, order + 1):
        g[n] = sum(k * f[k] * g[n - k] for k in range(1, n + 1) if k < len(f)) / n
    return g


def _series_mul(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    return [sum(a[i] * b[n - i] for i in range(n + 1) if i < len(a) and n - i < len(b)) for n in range(order + 1)]


def _component_egf(m: int, order: int) -> list[Fraction]:
    """Sum over components g + l <= m + 1 of t^l / l!: (m + 2 - l) labels for l circles."""
    f = [Fraction(0)] * (order + 1)
    for ell in range(1, min(m + 1, order) + 1):
        f[ell] = Fraction(m + 2 - ell, factorial(ell))
    return f


def am_count_egf(n: int, m: int) -> int:
    """|A^m(n)| from the exponential generating function."""
    g = _egf_exp(_component_egf(m, n), n)
    return int(g[n] * factorial(n))


def d_nm_egf(n: int, m: int) -> int:
    """Total number of components over A^m(n), from F exp(F)."""
    f = _component_egf(m, n)
    g = _series_mul(f, _egf_exp(f, n), n)
    return int(g[n] * factorial(n))


def d_nm(n: int, m: int) -> int:
    """Total number of connected components of all elements of A^m(n), by direct count."""
    if m < 1:
        raise ValueError("d_nm needs m >= 1")
    from .surf import enumerate_Am

    return sum(len(s.blocks) for s in enumerate_Am(n, m))


def d_n_linear_closed(n: int) -> int:
    """Closed form n (a_n + 2 a_{n-1}) / 2 for m = 1."""
    if n == 0:
        return 0
    return n * (a_seq(n) + 2 * a_seq(n - 1)) // 2


def generalized_bell_egf(n: int, k: int) -> int:
    """B_n^(k) from exp(k (e^t - 1))."""
    f = [Fraction(0)] + [Fraction(k, factorial(j)) for j in range(1, n + 1)]
    return int(_egf_exp(f, n)[n] * factorial(n))


# ----------------------------------------------------- invariant dimensions


def integer_partitions(k: int, largest: int | None = None) -> list[tuple[int, ...]]:
    if largest is None:
        largest = k
    if k == 0:
        return [()]
    out = []
    for first in range(min(k, largest), 0, -1):
        for rest in integer_partitions(k - first, first):
            out.append((first,) + rest)
    return out


def z_lambda(part: tuple[int, ...]) -> int:
    """Centralizer size prod i^{m_i} m_i! of a permutation with cycle type part."""
    out = 1
    for i in set(part):
        mi = part.count(i)
        out *= i**mi * factorial(mi)
    return out


def sym_invariant_dim(k: int, n: int) -> int:
    """Dimension of S_k-invariants in V^{(x) n}, V the natural k-dim permutation module."""
    if k < 1:
        raise ValueError("sym_invariant_dim needs k >= 1")
    total = sum(Fraction(part.count(1) ** n, z_lambda(part)) for part in integer_partitions(k))
    if total.denominator != 1:
        raise ArithmeticError("character average is not an integer")
    return int(total)


# ---------------------------------------------------- conjecture predictors


@dataclass(frozen=True)
class Prediction:
    n: int
    s: int
    exp_beta1_minus_s: int
    exp_beta1: int
    dim_at_s: int
    conjectural: bool = field(default=True)


def predicted_beta1_exponent(n: int) -> int:
    """2 n a_{n-1} + a_n - c_{n+1}."""
    if n == 0:
        return 0
    return 2 * n * a_seq(n - 1) + a_seq(n) - catalan(n + 1)


def linear_conjecture_predictors(n: int, s: int, beta0: Any = 1) -> Prediction:
    """Predicted exponents of (beta1 - s) and beta1 in the linear-theory determinant.

    The dimension at beta1 = s is a rank computation on the A^1(n) spanning set.
    Both outputs are conjectural and flagged as such.
    """
    if s == 0:
        raise ValueError("the (beta1 - s) predictor needs s != 0")
    from .gram import linear_state_dim

    dim = linear_state_dim(n, beta0, s)
    return Prediction(n=n, s=s, exp_beta1_minus_s=a_seq(n) - dim, exp_beta1=predicted_beta1_exponent(n), dim_at_s=dim)


def sequence_table(name: str, count: int) -> SequenceTable:
    """Named sequence tables for CSV export."""
    makers = {
        "bell": (bell, "recurrence"),
        "catalan": (catalan, "closed_form"),
        "a": (a_seq, "recurrence"),
        "bell2": (lambda n: generalized_bell(n, 2), "closed_form"),
        "bell3": (lambda n: generalized_bell(n, 3), "closed_form"),
        "d1": (lambda n: d_nm_egf(n, 1), "egf_extraction"),
    }
    if name not in makers:
        raise KeyError(f"unknown sequence {name!r}; choose from {sorted(makers)}")
    fn, kind = makers[name]
    return SequenceTable(name=name, values=tuple(fn(i) for i in range(count)), definition=kind)
