"""The endomorphism algebra of one circle in the skein category.

Basis: x^n for 0 <= n < K, then x^n u x^k for 0 <= n, k < K. Products are
computed from the relations u x^j u = alpha_j u and U(x) = 0, where U is the
handle polynomial. Elements are dense coefficient lists over the series'
coefficient ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

from .exactcore import QQ, Domain, UniPoly, det_polynomial, nullspace, rank_exact
from .exactcore.fields import PolyRing
from .exactcore.linalg import rref
from .genfun import RationalSeries, coefficients, handle_polynomial, series

Vector = list


class SkeinError(ValueError):
    pass


def generic_series(K: int) -> RationalSeries:
    """Z = (a0 + ... + a_{K-1} T^{K-1}) / (1 + b1 T + ... + bK T^K) with free parameters."""
    a = [f"a{i}" for i in range(K)]
    b = [f"b{i}" for i in range(1, K + 1)]
    num = " + ".join(f"{v}*T^{i}" for i, v in enumerate(a))
    den = "1 + " + " + ".join(f"{v}*T^{i}" for i, v in enumerate(b, start=1))
    return series(num, den, params=a + b)


@dataclass(frozen=True)
class SkeinAlgebra:
    z: RationalSeries
    K: int
    alphas: tuple[Any, ...]
    reductions: tuple[tuple[Any, ...], ...]  # x^m mod U for 0 <= m <= 2K
    labels: tuple[str, ...]
    table: dict[tuple[int, int], dict[int, Any]] = field(repr=False)

    @property
    def domain(self) -> Domain:
        return self.z.domain

    @property
    def dimension(self) -> int:
        return len(self.labels)

    # ---- indices

    def x_index(self, n: int) -> int:
        return n

    def u_index(self, n: int, k: int) -> int:
        return self.K + n * self.K + k

    def word_of(self, i: int) -> tuple[int, int | None]:
        """(n, None) for x^n, (n, k) for x^n u x^k."""
        if i < self.K:
            return i, None
        j = i - self.K
        return divmod(j, self.K)

    # ---- vectors

    def zero(self) -> Vector:
        return [self.domain.zero] * self.dimension

    def basis_vector(self, i: int) -> Vector:
        v = self.zero()
        v[i] = self.domain.one
        return v

    def one(self) -> Vector:
        return self.basis_vector(0)

    @property
    def x(self) -> Vector:
        if self.K == 1:
            # x reduces to a scalar when K = 1
            return [self.reductions[1][0] if i == 0 else self.domain.zero for i in range(self.dimension)]
        return self.basis_vector(1)

    @property
    def u(self) -> Vector:
        return self.basis_vector(self.u_index(0, 0))

    def element(self, terms: dict[str, Any]) -> Vector:
        """Build a vector from {label: coefficient}."""
        v = self.zero()
        for lab, c in terms.items():
            v[self.labels.index(lab)] = v[self.labels.index(lab)] + self.domain(c)
        return v

    def mul(self, a: Sequence[Any], b: Sequence[Any]) -> Vector:
        dom = self.domain
        out = self.zero()
        nz_a = [(i, c) for i, c in enumerate(a) if c != 0]
        nz_b = [(j, c) for j, c in enumerate(b) if c != 0]
        for i, ca in nz_a:
            for j, cb in nz_b:
                cc = ca * cb
                for l, s in self.table[i, j].items():
                    out[l] = out[l] + cc * s
        return [dom(c) for c in out]

    def add(self, a: Sequence[Any], b: Sequence[Any]) -> Vector:
        return [p + q for p, q in zip(a, b)]

    def sub(self, a: Sequence[Any], b: Sequence[Any]) -> Vector:
        return [p - q for p, q in zip(a, b)]

    def smul(self, c: Any, a: Sequence[Any]) -> Vector:
        c = self.domain(c)
        return [c * p for p in a]

    def trace(self, v: Sequence[Any]) -> Any:
        acc = self.domain.zero
        for i, c in enumerate(v):
            if c != 0:
                acc = acc + c * self.basis_trace(i)
        return acc

    def basis_trace(self, i: int) -> Any:
        n, k = self.word_of(i)
        if k is None:
            return self.alphas[n + 1]
        return self.alphas[n + k]

    def bar(self, v: Sequence[Any]) -> Vector:
        out = list(v)
        for i in range(self.K, self.dimension):
            n, k = self.word_of(i)
            out[self.u_index(k, n)] = v[i]
        return out

    # ---- words

    def word(self, letters: str) -> Vector:
        """Evaluate a word in x and u by multiplying left to right."""
        v = self.one()
        for ch in letters:
            v = self.mul(v, self.x if ch == "x" else self.u)
        return v

    def word_rewrite(self, letters: str, strategy: str = "u-first") -> Vector:
        """Normal form of a word by rewriting rules instead of the structure table.

        ``u-first`` collapses u x^j u -> alpha_j u before reducing x-powers;
        ``x-first`` reduces every x-run mod U before collapsing u's.
        """
        if any(ch not in "xu" for ch in letters):
            raise SkeinError(f"word {letters!r} has letters other than x and u")
        terms: dict[tuple[int, ...], Any] = {_runs(letters): self.domain.one}
        if strategy == "x-first":
            terms = self._reduce_runs(terms)
            terms = self._collapse_u(terms)
            terms = self._reduce_runs(terms)
        elif strategy == "u-first":
            terms = self._collapse_u(terms)
            terms = self._reduce_runs(terms)
        else:
            raise SkeinError(f"unknown strategy {strategy!r}")
        out = self.zero()
        for runs, c in terms.items():
            if len(runs) == 1:
                out[runs[0]] = out[runs[0]] + c
            else:
                out[self.u_index(runs[0], runs[1])] = out[self.u_index(runs[0], runs[1])] + c
        return out

    def _collapse_u(self, terms: dict[tuple[int, ...], Any]) -> dict[tuple[int, ...], Any]:
        # runs = (x-run, x-run, ...) separated by single u's
        out: dict[tuple[int, ...], Any] = {}
        for runs, c in terms.items():
            coef = c
            while len(runs) > 2:
                j = runs[1]
                coef = coef * self._alpha(j)
                runs = (runs[0],) + runs[2:]
            out[runs] = out.get(runs, self.domain.zero) + coef
        return {r: c for r, c in out.items() if c != 0}

    def _alpha(self, j: int) -> Any:
        if j < len(self.alphas):
            return self.alphas[j]
        return coefficients(self.z, j)[j]

    def _reduce_runs(self, terms: dict[tuple[int, ...], Any]) -> dict[tuple[int, ...], Any]:
        out: dict[tuple[int, ...], Any] = {}
        for runs, c in terms.items():
            expanded: list[tuple[tuple[int, ...], Any]] = [((), c)]
            for m in runs:
                red = self._power(m)
                expanded = [(r + (i,), cc * ci) for r, cc in expanded for i, ci in enumerate(red) if ci != 0]
            for r, cc in expanded:
                out[r] = out.get(r, self.domain.zero) + cc
        return {r: c for r, c in out.items() if c != 0}

    def _power(self, m: int) -> tuple[Any, ...]:
        if m < len(self.reductions):
            return self.reductions[m]
        return tuple(_reduce_power(m, handle_polynomial(self.z).coeffs, self.domain))

    @cached_property
    def gram(self) -> list[list[Any]]:
        return trace_gram(self)


def _runs(letters: str) -> tuple[int, ...]:
    runs = [0]
    for ch in letters:
        if ch == "x":
            runs[-1] += 1
        else:
            runs.append(0)
    return tuple(runs)


def _reduce_power(m: int, U: UniPoly, dom: Domain) -> list[Any]:
    """Coefficients of x^m mod the monic polynomial U, length deg U."""
    K = U.degree
    vec = [dom.zero] * K
    if m < K:
        vec[m] = dom.one
        return vec
    vec = [dom.zero] * (K - 1) + [dom.one]  # x^{K-1}
    for _ in range(m - K + 1):
        top = vec[-1]
        vec = [dom.zero] + vec[:-1]
        vec = [dom(vec[i] - top * U[i]) for i in range(K)]
    return vec


def build_BS(z: RationalSeries) -> SkeinAlgebra:
    """Structure constants, trace values and reduction data for B_S."""
    dom = z.domain
    K = z.K
    if K < 1:
        raise SkeinError("the zero series has no skein algebra")
    U = handle_polynomial(z).coeffs
    reds = [tuple(_reduce_power(m, U, dom)) for m in range(2 * K + 1)]
    alphas = tuple(coefficients(z, 2 * K))
    labels = [("1" if n == 0 else ("x" if n == 1 else f"x^{n}")) for n in range(K)]
    xs = ["" if n == 0 else ("x" if n == 1 else f"x^{n}") for n in range(K)]
    labels += [f"{xs[n]}u{xs[k]}" for n in range(K) for k in range(K)]

    def uidx(n: int, k: int) -> int:
        return K + n * K + k

    table: dict[tuple[int, int], dict[int, Any]] = {}
    dim = K + K * K
    for i in range(dim):
        ni, ki = (i, None) if i < K else divmod(i - K, K)
        for j in range(dim):
            nj, kj = (j, None) if j < K else divmod(j - K, K)
            out: dict[int, Any] = {}
            if ki is None and kj is None:
                for l, c in enumerate(reds[ni + nj]):
                    if c != 0:
                        out[l] = c
            elif ki is None:
                for l, c in enumerate(reds[ni + nj]):
                    if c != 0:
                        out[uidx(l, kj)] = c
            elif kj is None:
                for l, c in enumerate(reds[ki + nj]):
                    if c != 0:
                        out[uidx(ni, l)] = c
            else:
                c = alphas[ki + nj]
                if c != 0:
                    out[uidx(ni, kj)] = c
            table[i, j] = out
    return SkeinAlgebra(z, K, alphas, tuple(reds), tuple(labels), table)


# ------------------------------------------------------------------ checks


def trace_gram(alg: SkeinAlgebra) -> list[list[Any]]:
    """Matrix of tr(b_i b_j) in the standard basis."""
    d = alg.dimension
    G = [[alg.domain.zero] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            acc = alg.domain.zero
            for l, c in alg.table[i, j].items():
                acc = acc + c * alg.basis_trace(l)
            G[i][j] = acc
    return G


def trace_gram_det(alg: SkeinAlgebra) -> Any:
    G = alg.gram
    if isinstance(alg.domain, PolyRing):
        return det_polynomial(G)
    from .exactcore import det_fraction_free

    return det_fraction_free(G)


def check_associative(alg: SkeinAlgebra, cap: int | None = None) -> list[tuple[int, int, int]]:
    """Basis triples (i, j, k) with (b_i b_j) b_k != b_i (b_j b_k); empty means associative."""
    d = alg.dimension if cap is None else min(cap, alg.dimension)
    bad = []
    tab = alg.table
    zero = alg.domain.zero
    for i in range(d):
        for j in range(d):
            left_ij = tab[i, j]
            for k in range(d):
                lhs: dict[int, Any] = {}
                for l, c in left_ij.items():
                    for m, s in tab[l, k].items():
                        lhs[m] = lhs.get(m, zero) + c * s
                rhs: dict[int, Any] = {}
                for l, c in tab[j, k].items():
                    for m, s in tab[i, l].items():
                        rhs[m] = rhs.get(m, zero) + c * s
                keys = set(lhs) | set(rhs)
                if any(lhs.get(m, zero) != rhs.get(m, zero) for m in keys):
                    bad.append((i, j, k))
    return bad


def check_trace_symmetric(alg: SkeinAlgebra) -> bool:
    G = alg.gram
    d = alg.dimension
    return all(G[i][j] == G[j][i] for i in range(d) for j in range(d))


def check_bar_antiautomorphism(alg: SkeinAlgebra) -> bool:
    d = alg.dimension
    for i in range(d):
        bi = alg.bar(alg.basis_vector(i))
        for j in range(d):
            bj = alg.bar(alg.basis_vector(j))
            lhs = alg.bar(alg.mul(alg.basis_vector(i), alg.basis_vector(j)))
            if lhs != alg.mul(bj, bi):
                return False
    return True


def check_confluence(alg: SkeinAlgebra, words: int = 50, max_len: int = 8, seed: int = 0) -> list[str]:
    """Random words on which the rewriting strategies and the structure table disagree."""
    rng = random.Random(seed)
    bad = []
    for _ in range(words):
        w = "".join(rng.choice("xu") for _ in range(rng.randint(0, max_len)))
        a = alg.word_rewrite(w, "u-first")
        b = alg.word_rewrite(w, "x-first")
        c = alg.word(w)
        if not (a == b == c):
            bad.append(w)
    return bad


def u_ideal_span(alg: SkeinAlgebra) -> list[Vector]:
    """Products b_i u b_j over all basis pairs, spanning the two-sided ideal (u)."""
    u = alg.u
    out = []
    for i in range(alg.dimension):
        left = alg.mul(alg.basis_vector(i), u)
        for j in range(alg.dimension):
            out.append(alg.mul(left, alg.basis_vector(j)))
    return out


# -------------------------------------------------------- radical quotient


@dataclass(frozen=True)
class QuotientAlgebra:
    """B_S modulo the radical of its trace form."""

    algebra: SkeinAlgebra
    kernel: tuple[tuple[Any, ...], ...]
    pivots: tuple[int, ...]
    basis: tuple[int, ...]  # indices of B_S basis vectors spanning a complement
    structure: dict[tuple[int, int], tuple[Any, ...]] = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def radical_dimension(self) -> int:
        return len(self.kernel)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.algebra.labels[i] for i in self.basis)

    def reduce(self, v: Sequence[Any]) -> Vector:
        """Representative of v with zero pivot coordinates (same class mod the radical)."""
        w = list(v)
        for kv, p in zip(self.kernel, self.pivots):
            c = w[p]
            if c != 0:
                w = [a - c * b for a, b in zip(w, kv)]
        return w

    def coordinates(self, v: Sequence[Any]) -> tuple[Any, ...]:
        w = self.reduce(v)
        return tuple(w[i] for i in self.basis)

    def equal(self, a: Sequence[Any], b: Sequence[Any]) -> bool:
        return self.coordinates(a) == self.coordinates(b)

    def is_negligible(self, v: Sequence[Any]) -> bool:
        return all(c == 0 for c in self.coordinates(v))

    def induced_gram(self) -> list[list[Any]]:
        G = self.algebra.gram
        return [[G[i][j] for j in self.basis] for i in self.basis]


def radical_quotient(alg: SkeinAlgebra) -> QuotientAlgebra:
    """Kernel of the trace form, checked to be a two-sided ideal, and the quotient structure."""
    dom = alg.domain
    if not dom.is_field:
        raise SkeinError("radical quotient needs concrete field coefficients")
    G = alg.gram
    ker = nullspace(G, dom)
    # put the kernel basis in reduced echelon form so each vector owns one pivot
    if ker:
        red, pivots = rref(ker, dom)
        ker = [list(r) for r in red[: len(pivots)]]
    else:
        pivots = []
    for v in ker:
        if any(c != 0 for c in _matvec(G, v, dom)):
            raise SkeinError("kernel vector does not annihilate the trace form")
    for v in ker:
        for i in range(alg.dimension):
            b = alg.basis_vector(i)
            for w in (alg.mul(b, v), alg.mul(v, b)):
                if any(c != 0 for c in _matvec(G, w, dom)):
                    raise SkeinError("radical of the trace form is not a two-sided ideal")
    basis = tuple(i for i in range(alg.dimension) if i not in pivots)
    q = QuotientAlgebra(alg, tuple(tuple(v) for v in ker), tuple(pivots), basis, {})
    for i in basis:
        for j in basis:
            q.structure[i, j] = q.coordinates(alg.mul(alg.basis_vector(i), alg.basis_vector(j)))
    return q


def _matvec(G: Sequence[Sequence[Any]], v: Sequence[Any], dom: Domain) -> list[Any]:
    out = []
    for row in G:
        acc = dom.zero
        for a, b in zip(row, v):
            if a != 0 and b != 0:
                acc = acc + a * b
        out.append(acc)
    return out


# ------------------------------------------------------------ linear case


@dataclass(frozen=True)
class Mat2Split:
    ok: bool
    quotient_dimension: int
    checks: dict[str, bool]

    def __bool__(self) -> bool:
        return self.ok


def linear_elements(alg: SkeinAlgebra, beta0: Any, beta1: Any) -> dict[str, Vector]:
    """z, the central idempotent and the four matrix-unit images for Z = beta0 + beta1 T."""
    dom = alg.domain
    b0, b1 = dom(beta0), dom(beta1)
    inv = dom.inverse(b1)
    one, u = alg.one(), alg.u
    x = alg.x
    xu, ux = alg.mul(x, u), alg.mul(u, x)
    zz = alg.sub(alg.sub(alg.add(xu, ux), alg.smul(b0, x)), alg.smul(b1, one))
    return {
        "z": zz,
        "e": alg.smul(-inv, zz),
        "E11": alg.smul(inv, ux),
        "E12": alg.smul(inv, alg.sub(u, alg.smul(b0 * inv, ux))),
        "E21": x,
        "E22": alg.smul(inv, alg.sub(xu, alg.smul(b0, x))),
    }


def verify_mat2_split(q: QuotientAlgebra, beta0: Any, beta1: Any) -> Mat2Split:
    """Check B = Mat_2 x k for Z = beta0 + beta1 T with beta1 not in {0, 2}."""
    alg = q.algebra
    dom = alg.domain
    b1 = dom(beta1)
    if b1 == 0 or b1 == 2:
        raise SkeinError("the Mat_2 x k splitting needs beta1 not in {0, 2}")
    el = linear_elements(alg, beta0, beta1)
    checks: dict[str, bool] = {}
    zz, e = el["z"], el["e"]
    checks["z^2 = -beta1 z"] = q.equal(alg.mul(zz, zz), alg.smul(-b1, zz))
    checks["e idempotent"] = q.equal(alg.mul(e, e), e)
    checks["e central"] = all(
        q.equal(alg.mul(e, alg.basis_vector(i)), alg.mul(alg.basis_vector(i), e)) for i in range(alg.dimension)
    )
    units = {(i, j): el[f"E{i}{j}"] for i in (1, 2) for j in (1, 2)}
    ok_units = True
    for (i, j), a in units.items():
        for (k, l), b in units.items():
            expect = units[i, l] if j == k else alg.zero()
            ok_units &= q.equal(alg.mul(a, b), expect)
    checks["matrix units"] = ok_units
    checks["e orthogonal to units"] = all(
        q.is_negligible(alg.mul(e, a)) and q.is_negligible(alg.mul(a, e)) for a in units.values()
    )
    checks["units sum to 1 - e"] = q.equal(alg.add(alg.add(units[1, 1], units[2, 2]), e), alg.one())
    checks["dimension 5"] = q.dimension == 5
    return Mat2Split(all(checks.values()), q.dimension, checks)


def ideal_image_dimension(q: QuotientAlgebra) -> int:
    """Dimension of the image of (u) = span{x^n u x^k} in the quotient."""
    alg = q.algebra
    rows = [list(q.coordinates(alg.basis_vector(i))) for i in range(alg.K, alg.dimension)]
    if not rows or not rows[0]:
        return 0
    return rank_exact(rows) if alg.domain == QQ else len(rref(rows, alg.domain)[1])
