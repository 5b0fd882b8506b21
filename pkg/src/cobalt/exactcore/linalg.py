"""Exact linear algebra: fraction-free determinants, ranks, kernels.

Matrices are lists of rows. The determinant routine is one generic Bareiss
elimination that runs on any integral-domain element type with exact
division: Python ints, Fractions, prime-field elements, ``MultiPoly``, or
FLINT's multivariate polynomials (used as a fast arithmetic backend for
symbolic tables).
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Any, Sequence

import flint

from .fields import Domain, PrimeFieldElement, QQ
from .multipoly import MultiPoly, flint_context

Matrix = list[list[Any]]

# Primes above 2^30 used for multi-modular rank.
MODULAR_PRIMES = (1073741827, 1073741831, 1073741833, 1073741839, 1073741843)


def _exact_div(a: Any, b: Any) -> Any:
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"Bareiss division not exact: {a} / {b}")
        return q
    if isinstance(a, MultiPoly):
        return a.exact_div(b)
    if isinstance(a, (flint.fmpz_mpoly, flint.fmpq_mpoly)):
        try:
            return a / b
        except Exception as exc:  # flint raises DomainError
            raise ArithmeticError(f"Bareiss division not exact: {exc}") from exc
    if isinstance(a, flint.fmpz):
        q, r = divmod(a, b)
        if r != 0:
            raise ArithmeticError("Bareiss division not exact")
        return q
    return a / b


def _check_square(m: Sequence[Sequence[Any]]) -> int:
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError(f"matrix is not square: {n} rows, a row of length {len(row)}")
    return n


def det_fraction_free(m: Sequence[Sequence[Any]], one: Any = 1) -> Any:
    """Determinant by single-step fraction-free (Bareiss) elimination.

    Every division is checked to be exact; a remainder raises ArithmeticError.
    """
    n = _check_square(m)
    if n == 0:
        return one
    a = [list(row) for row in m]
    sign = 1
    prev: Any = one
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return a[k][k] * 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            if lead == 0:
                for j in range(k + 1, n):
                    if row_i[j] != 0:
                        row_i[j] = _exact_div(row_i[j] * pivot, prev)
            else:
                for j in range(k + 1, n):
                    row_i[j] = _exact_div(row_i[j] * pivot - lead * row_k[j], prev)
            row_i[k] = pivot * 0
        prev = pivot
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def det_cofactor(m: Sequence[Sequence[Any]]) -> Any:
    """Determinant by Laplace expansion along the first row (small matrices only)."""
    n = _check_square(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total: Any = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_polynomial(m: Sequence[Sequence[Any]]) -> MultiPoly | Fraction:
    """Exact determinant of a matrix of MultiPoly/rational entries.

    Entries are moved into FLINT multivariate polynomials (integer
    coefficients when possible) and the same Bareiss routine is run there.
    """
    n = _check_square(m)
    names: list[str] = []
    for row in m:
        for x in row:
            if isinstance(x, MultiPoly):
                for v in x.vars:
                    if v not in names:
                        names.append(v)
    if not names:
        return det_rational([[_as_fraction(x) for x in row] for row in m])
    variables = tuple(names)
    polys = [[x.embed(variables) if isinstance(x, MultiPoly) else MultiPoly.constant(variables, x) for x in row] for row in m]
    integral = all(p.coefficients_integral() for row in polys for p in row)
    ctx = flint_context(variables, integral)
    fm = [[p.to_flint(ctx) for p in row] for row in polys]
    d = det_fraction_free(fm, one=ctx.from_dict({(0,) * len(variables): 1}))
    if n == 0:
        return MultiPoly.constant(variables, 1)
    return MultiPoly.from_flint(variables, d)


def _as_fraction(x: Any) -> Fraction:
    if isinstance(x, MultiPoly):
        return Fraction(x.constant_value())
    return Fraction(x)


def det_rational(m: Sequence[Sequence[Any]]) -> Fraction:
    """Exact determinant of a rational matrix (FLINT backend)."""
    n = _check_square(m)
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, int) for row in m for x in row):
        return Fraction(int(flint.fmpz_mat(n, n, [x for row in m for x in row]).det()))
    entries = []
    for row in m:
        for x in row:
            f = _as_fraction(x)
            entries.append(flint.fmpq(f.numerator, f.denominator))
    d = flint.fmpq_mat(n, n, entries).det()
    return Fraction(int(d.p), int(d.q))


# ---------------------------------------------------------------------- rank


def _integer_rows(m: Sequence[Sequence[Any]]) -> list[list[int]]:
    """Scale each row of a rational matrix to integers (rank-preserving)."""
    out = []
    for row in m:
        if all(type(x) is int for x in row):
            out.append(list(row))
            continue
        fr = [_as_fraction(x) for x in row]
        den = reduce(lcm, (f.denominator for f in fr), 1)
        out.append([int(f * den) for f in fr])
    return out


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows or not rows[0]:
        return 0
    return int(flint.nmod_mat([[x % p for x in row] for row in rows], p).rank())


def rank_mod_p_python(rows: Sequence[Sequence[int]], p: int) -> int:
    """Gaussian elimination over F_p in pure Python (reference implementation)."""
    a = [[x % p for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        pivot_row = [x * inv % p for x in a[r]]
        a[r] = pivot_row
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], pivot_row)]
        r += 1
        if r == len(a):
            break
    return r


def rank_fraction_free(m: Sequence[Sequence[Any]]) -> int:
    """Exact rank over QQ by fraction-free elimination on integer rows."""
    a = _integer_rows(m)
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(r + 1, len(a)):
            lead = a[i][c]
            a[i] = [_exact_div(x * pv - lead * y, prev) for x, y in zip(a[i], a[r])]
        prev = pv
        r += 1
        if r == len(a):
            break
    return r


def rank_exact(m: Sequence[Sequence[Any]], primes: Sequence[int] = MODULAR_PRIMES[:3]) -> int:
    """Exact rank of a matrix over QQ or F_p.

    Over F_p this is plain elimination. Over QQ the rank is computed modulo
    several primes above 2^30 (each a lower bound for the rational rank);
    when they disagree the rank is certified by exact elimination.
    """
    if not m or not m[0]:
        return 0
    first = next((x for row in m for x in row if isinstance(x, PrimeFieldElement)), None)
    if first is not None:
        return rank_mod_p([[int(x) if isinstance(x, PrimeFieldElement) else x for x in row] for row in m], first.p)
    rows = _integer_rows(m)
    ranks = [rank_mod_p(rows, p) for p in primes]
    if len(set(ranks)) == 1:
        return ranks[0]
    return int(flint.fmpz_mat(rows).rank())


# ------------------------------------------------------------ kernels, rref


def rref(m: Sequence[Sequence[Any]], domain: Domain = QQ) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over a field, with pivot columns."""
    a = [[domain(x) for x in row] for row in m]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = domain.inverse(a[r][c])
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def nullspace(m: Sequence[Sequence[Any]], domain: Domain = QQ) -> list[list[Any]]:
    """Basis of {v : m v = 0} over a field."""
    if not m:
        return []
    ncols = len(m[0])
    red, pivots = rref(m, domain)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [domain.zero] * ncols
        v[f] = domain.one
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence[Any]], b: Sequence[Any], domain: Domain = QQ) -> list[Any] | None:
    """One solution of m x = b over a field, or None if inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = rref(aug, domain)
    ncols = len(m[0]) if m else 0
    if ncols in pivots:
        return None
    x = [domain.zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), 0) for col in bt] for row in a]


def transpose(m: Sequence[Sequence[Any]]) -> Matrix:
    return [list(col) for col in zip(*m)]
