"""Rational generating series Z(T) = P(T)/Q(T) of closed-surface evaluations.

A series is stored normalized: P and Q coprime and Q(0) = 1. Coefficients
may live in QQ, a prime field, or a polynomial ring of symbolic parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import flint

from .exactcore import (
    GF,
    QQ,
    Domain,
    MultiPoly,
    PolyRing,
    PrimeField,
    UniPoly,
    det_polynomial,
    parse_polynomial,
    poly_gcd,
    poly_invmod,
    poly_lcm,
    rational_roots,
    squarefree_factorization,
)
from .exactcore.multipoly import flint_context

_T = "_T"


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class RationalSeries:
    """Normalized Z = P/Q. Build with ``normalize`` or ``series``."""

    P: UniPoly
    Q: UniPoly

    @property
    def domain(self) -> Domain:
        return self.Q.domain

    @property
    def N(self) -> int:
        return self.P.degree

    @property
    def M(self) -> int:
        return self.Q.degree

    @property
    def K(self) -> int:
        return max(self.N + 1, self.M)

    @property
    def params(self) -> tuple[str, ...]:
        dom = self.domain
        return dom.variables if isinstance(dom, PolyRing) else ()

    def is_zero(self) -> bool:
        return self.P.is_zero()

    def coefficients(self, upto: int) -> list[Any]:
        return coefficients(self, upto)

    def __str__(self) -> str:
        num = self.P.to_str(ascending=True)
        if self.Q == 1:
            return num
        return f"({num}) / ({self.Q.to_str(ascending=True)})"

    def to_dict(self) -> dict[str, Any]:
        return {
            "numerator": self.P.to_str(ascending=True),
            "denominator": self.Q.to_str(ascending=True),
            "ring": str(self.domain),
            "N": self.N,
            "M": self.M,
            "K": self.K,
        }


@dataclass(frozen=True)
class HandlePolynomial:
    coeffs: UniPoly
    K: int

    def __str__(self) -> str:
        return self.coeffs.to_str("x")


@dataclass(frozen=True)
class PartialFractionDecomposition:
    terms: tuple[tuple[UniPoly, UniPoly], ...]
    polynomial_part: UniPoly

    def recombine(self) -> tuple[UniPoly, UniPoly]:
        """Return (numerator, denominator) of sum P_i/Q_i + R."""
        dom = self.polynomial_part.domain
        num = UniPoly.zero(dom)
        den = UniPoly.one(dom)
        for p, q in self.terms:
            num = num * q + p * den
            den = den * q
        return num + self.polynomial_part * den, den

    def merged(self, index: int) -> tuple[tuple[UniPoly, UniPoly], ...]:
        """Terms with the polynomial part folded into term ``index`` (numerator P_i + R Q_i)."""
        out = list(self.terms)
        p, q = out[index]
        out[index] = (p + self.polynomial_part * q, q)
        return tuple(out)


# ------------------------------------------------------------------ helpers


def _to_flint_2d(f: UniPoly, params: tuple[str, ...], ctx: Any) -> Any:
    """UniPoly over QQ[params] -> fmpq_mpoly in (_T, *params)."""
    terms: dict[tuple[int, ...], Any] = {}
    for i, c in enumerate(f.coeffs):
        c = c if isinstance(c, MultiPoly) else MultiPoly.constant(params, c)
        for e, v in c.embed(params).terms.items():
            v = Fraction(v)
            terms[(i,) + e] = flint.fmpq(v.numerator, v.denominator)
    return ctx.from_dict(terms)


def _from_flint_2d(g: Any, params: tuple[str, ...], dom: PolyRing) -> UniPoly:
    coeffs: dict[int, dict[tuple[int, ...], Any]] = {}
    for e, v in g.to_dict().items():
        e = tuple(int(x) for x in e)
        coeffs.setdefault(e[0], {})[e[1:]] = Fraction(int(v.p), int(v.q))
    if not coeffs:
        return UniPoly.zero(dom)
    deg = max(coeffs)
    return UniPoly([MultiPoly(params, coeffs.get(i, {})) for i in range(deg + 1)], dom)


def _param_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    dom = a.domain
    params = dom.variables
    ctx = flint_context((_T,) + params, integral=False)
    g = _to_flint_2d(a, params, ctx).gcd(_to_flint_2d(b, params, ctx))
    return _from_flint_2d(g, params, dom)


def _random_point(params: Sequence[str], rng: random.Random) -> dict[str, Fraction]:
    return {v: Fraction(rng.randint(-97, 97) or 1, rng.randint(1, 13)) for v in params}


def specialize_poly(f: UniPoly, values: dict[str, Any], domain: Domain = QQ) -> UniPoly:
    return UniPoly(
        [c.evaluate(values) if isinstance(c, MultiPoly) else c for c in f.coeffs],
        domain,
    )


# ---------------------------------------------------------------- normalize


def normalize(P: UniPoly, Q: UniPoly, check_points: int = 3, seed: int = 0) -> RationalSeries:
    """Cancel gcd(P, Q) and scale so that Q(0) = 1."""
    if P.domain != Q.domain:
        raise SeriesError("numerator and denominator over different coefficient rings")
    dom = Q.domain
    if Q.is_zero() or not dom.is_unit(Q[0]):
        raise SeriesError("series undefined: Q(0) must be a unit")
    if P.is_zero():
        return RationalSeries(UniPoly.zero(dom), UniPoly.one(dom))
    inv = dom.inverse(Q[0])
    P, Q = P.scale(inv), Q.scale(inv)
    if dom.is_field:
        g = poly_gcd(P, Q)
        if g.degree > 0:
            P, Q = P.exact_div(g), Q.exact_div(g)
            inv = dom.inverse(Q[0])
            P, Q = P.scale(inv), Q.scale(inv)
        return RationalSeries(P, Q)
    g = _param_gcd(P, Q)
    if g.degree > 0:
        P, Q = P.exact_div(g), Q.exact_div(g)
        if not dom.is_unit(Q[0]):
            raise SeriesError("cancelled denominator lost its unit constant term")
        inv = dom.inverse(Q[0])
        P, Q = P.scale(inv), Q.scale(inv)
    _check_coprime_by_specialization(P, Q, check_points, seed)
    return RationalSeries(P, Q)


def _check_coprime_by_specialization(P: UniPoly, Q: UniPoly, points: int, seed: int) -> None:
    params = P.domain.variables
    rng = random.Random(seed)
    shared = 0
    for _ in range(points):
        pt = _random_point(params, rng)
        p, q = specialize_poly(P, pt), specialize_poly(Q, pt)
        if p.is_zero() or poly_gcd(p, q).degree > 0:
            shared += 1
    if points and shared == points:
        raise SeriesError("numerator and denominator share a factor at every sampled parameter point")


def series(num: str | UniPoly, den: str | UniPoly = "1", params: Iterable[str] = (), characteristic: int = 0) -> RationalSeries:
    """Build a normalized series from text such as ``series("beta", "1-gamma*T", ["beta", "gamma"])``."""
    params = tuple(params)
    if params and characteristic:
        raise SeriesError("symbolic parameters are only supported in characteristic 0")
    dom: Domain = PolyRing(params) if params else (GF(characteristic) if characteristic else QQ)

    def conv(x: str | UniPoly) -> UniPoly:
        if isinstance(x, UniPoly):
            return x.convert(dom) if x.domain != dom else x
        return text_to_unipoly(x, params, dom)

    return normalize(conv(num), conv(den))


def text_to_unipoly(text: str, params: tuple[str, ...], dom: Domain) -> UniPoly:
    if "T" in params:
        raise SeriesError("the name T is reserved for the series variable")
    mp = parse_polynomial(text, ("T",) + params)
    return multipoly_to_unipoly(mp, params, dom)


def multipoly_to_unipoly(mp: MultiPoly, params: tuple[str, ...], dom: Domain) -> UniPoly:
    mp = mp.embed(("T",) + params) if mp.vars != ("T",) + params else mp
    deg = max((e[0] for e in mp.terms), default=-1)
    buckets: list[dict[tuple[int, ...], Any]] = [dict() for _ in range(deg + 1)]
    for e, c in mp.terms.items():
        buckets[e[0]][e[1:]] = c
    if params:
        return UniPoly([MultiPoly(params, b) for b in buckets], dom)
    return UniPoly([b.get((), 0) for b in buckets], dom)


def specialize(z: RationalSeries, values: dict[str, Any], characteristic: int = 0) -> RationalSeries:
    """Substitute concrete values for all parameters."""
    dom: Domain = GF(characteristic) if characteristic else QQ
    return normalize(specialize_poly(z.P, values, dom), specialize_poly(z.Q, values, dom))


def reduce_mod(z: RationalSeries, p: int) -> RationalSeries:
    """Image of a series over QQ in characteristic p (then renormalized)."""
    if z.domain != QQ:
        raise SeriesError("reduction mod p needs a series over QQ")
    dom = GF(p)
    try:
        return normalize(z.P.convert(dom), z.Q.convert(dom))
    except ZeroDivisionError as exc:
        raise SeriesError(f"series has a coefficient with denominator divisible by {p}") from exc


# ------------------------------------------------------------ coefficients


def coefficients(z: RationalSeries, upto: int) -> list[Any]:
    """alpha_0 .. alpha_upto from Q * Z = P (Q(0) = 1)."""
    dom = z.domain
    Q = z.Q.coeffs
    out: list[Any] = []
    for n in range(upto + 1):
        acc = z.P[n]
        for i in range(1, min(n, len(Q) - 1) + 1):
            acc = acc - Q[i] * out[n - i]
        out.append(dom(acc))
    return out


def long_division_coefficients(P: UniPoly, Q: UniPoly, upto: int) -> list[Any]:
    """Power-series division by repeated subtraction; independent of ``coefficients``."""
    dom = Q.domain
    inv = dom.inverse(Q[0])
    rem = [P[i] for i in range(upto + 1)]
    out = []
    for n in range(upto + 1):
        c = rem[n] * inv
        out.append(dom(c))
        for j in range(len(Q.coeffs)):
            if n + j <= upto:
                rem[n + j] = rem[n + j] - c * Q[j]
    return out


def handle_polynomial(z: RationalSeries) -> HandlePolynomial:
    """U(x) = x^K Q(1/x), monic of degree K."""
    K = z.K
    return HandlePolynomial(z.Q.reversed(K), K)


# ------------------------------------------------------------------ scaling


def scale(z: RationalSeries, lam: Any) -> RationalSeries:
    """Z'(T) = lam^{-1} Z(lam T), so alpha'_n = lam^{n-1} alpha_n.

    Over a parameter ring lam need only divide the numerator exactly.
    """
    dom = z.domain
    lam = dom(lam)
    if lam == 0:
        raise SeriesError("scaling factor must be invertible")
    P = UniPoly([dom.div(c * lam**i, lam) for i, c in enumerate(z.P.coeffs)], dom)
    Q = UniPoly([c * lam**i for i, c in enumerate(z.Q.coeffs)], dom)
    return normalize(P, Q)


# --------------------------------------------------------------- sums etc.


def add(z1: RationalSeries, z2: RationalSeries) -> RationalSeries:
    if z1.domain != z2.domain:
        raise SeriesError("cannot add series over different coefficient rings")
    return normalize(z1.P * z2.Q + z2.P * z1.Q, z1.Q * z2.Q)


def negate(z: RationalSeries) -> RationalSeries:
    return RationalSeries(-z.P, z.Q)


def berlekamp_massey(seq: Sequence[Any], dom: Domain) -> tuple[int, UniPoly]:
    """Shortest linear recurrence over a field: (length L, connection polynomial C with C(0)=1)."""
    C = [dom.one]
    B = [dom.one]
    L = 0
    m = 1
    b = dom.one
    for n in range(len(seq)):
        d = seq[n]
        for i in range(1, L + 1):
            if i < len(C):
                d = d + C[i] * seq[n - i]
        if d == 0:
            m += 1
            continue
        coef = d * dom.inverse(b)
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [dom.zero] * (need - len(C))
        for i, bi in enumerate(B):
            C[i + m] = C[i + m] - coef * bi
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    return L, UniPoly(C, dom)


def _fit_rational(seq: Sequence[Any], dom: Domain, L: int, C: UniPoly) -> tuple[UniPoly, UniPoly]:
    S = UniPoly(seq[:L], dom)
    P = (C * S).truncate(L)
    return P, C


def hadamard(z1: RationalSeries, z2: RationalSeries, surplus: int = 10, seed: int = 0) -> RationalSeries:
    """Termwise product alpha_n beta_n, reconstructed as a rational function.

    Uses 2 K1 K2 + 2 terms to find the shortest recurrence and checks the
    result on ``surplus`` further coefficients.
    """
    if z1.domain != z2.domain:
        raise SeriesError("cannot multiply series over different coefficient rings")
    dom = z1.domain
    if z1.is_zero() or z2.is_zero():
        return normalize(UniPoly.zero(dom), UniPoly.one(dom))
    bound = z1.K * z2.K
    total = 2 * bound + 2 + surplus
    a, b = coefficients(z1, total), coefficients(z2, total)
    c = [x * y for x, y in zip(a, b)]
    fit_len = 2 * bound + 2
    if dom.is_field:
        L, C = berlekamp_massey(c[:fit_len], dom)
        P, Q = _fit_rational(c, dom, L, C)
    else:
        P, Q = _hadamard_symbolic(c, fit_len, dom, seed)
    z = normalize(P, Q)
    if coefficients(z, total) != c:
        raise SeriesError("cannot certify rationality of the Hadamard product")
    return z


def _hadamard_symbolic(c: list[Any], fit_len: int, dom: PolyRing, seed: int) -> tuple[UniPoly, UniPoly]:
    rng = random.Random(seed)
    L = 0
    for _ in range(2):
        pt = _random_point(dom.variables, rng)
        spec = [x.evaluate(pt) for x in c[:fit_len]]
        L = max(L, berlekamp_massey([Fraction(v) for v in spec], QQ)[0])
    if L == 0:
        return UniPoly.zero(dom), UniPoly.one(dom)
    # Cramer's rule on the Hankel system sum_{i=1..L} q_i c_{n-i} = -c_n, n = L..2L-1.
    H = [[c[n - i] for i in range(1, L + 1)] for n in range(L, 2 * L)]
    rhs = [-c[n] for n in range(L, 2 * L)]
    dH = det_polynomial(H)
    if dH == 0:
        raise SeriesError("cannot certify rationality: singular Hankel system")
    q = [dom.one]
    for i in range(L):
        Hi = [row[:i] + [r] + row[i + 1:] for row, r in zip(H, rhs)]
        try:
            q.append(dom(det_polynomial(Hi)).exact_div(dom(dH)))
        except ArithmeticError as exc:
            raise SeriesError("cannot certify rationality: non-polynomial recurrence") from exc
    C = UniPoly(q, dom)
    return _fit_rational(c, dom, L, C)


# --------------------------------------------------------- partial fractions


def default_factors(Q: UniPoly) -> list[UniPoly]:
    """Pairwise-coprime factors of Q over QQ with constant term 1.

    Each rational root r contributes (1 - T/r)^m; what remains of each
    square-free layer is kept as a single factor.
    """
    if Q.domain != QQ:
        raise SeriesError("automatic factorization only over QQ")
    buckets: dict[Any, UniPoly] = {}
    rest_factors: list[UniPoly] = []
    for g, m in squarefree_factorization(Q):
        rest = g
        for r in rational_roots(g):
            lin = UniPoly((-r, 1), QQ)
            buckets[r] = lin**m
            rest = rest.exact_div(lin)
        if rest.degree > 0:
            rest_factors.append(rest**m)
    factors = [buckets[r] for r in sorted(buckets, key=lambda x: (abs(x), x))] + rest_factors
    return [f.normalized_at_zero() for f in factors]


def partial_fractions(z: RationalSeries, q_factors: Sequence[UniPoly] | None = None) -> PartialFractionDecomposition:
    """Z = sum P_i/Q_i + R with deg P_i < deg Q_i, one term per supplied coprime factor."""
    dom = z.domain
    if not dom.is_field:
        raise SeriesError("partial fractions need coefficients in a field")
    if q_factors is None:
        q_factors = default_factors(z.Q) if z.Q.degree > 0 else []
    factors = [f.convert(dom).normalized_at_zero() for f in q_factors]
    prod = UniPoly.one(dom)
    for f in factors:
        prod = prod * f
    if prod != z.Q:
        raise SeriesError("product of the supplied factors is not the denominator")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if poly_gcd(factors[i], factors[j]).degree > 0:
                raise SeriesError("supplied factors are not pairwise coprime")
    R, P0 = z.P.divmod(z.Q)
    terms = []
    for f in factors:
        cof = z.Q.exact_div(f)
        Pi = (P0 * poly_invmod(cof, f)) % f
        terms.append((Pi, f))
    return PartialFractionDecomposition(tuple(terms), R)


# -------------------------------------------------------------- regularity


@dataclass(frozen=True)
class RegularPairReport:
    is_regular: bool
    U_pair: HandlePolynomial
    U_sum: HandlePolynomial


def regular_pair(zb: RationalSeries, zg: RationalSeries) -> RegularPairReport:
    """Compare the handle polynomial of the sum with the lcm of the two handle polynomials."""
    if not zb.domain.is_field:
        raise SeriesError("regular_pair needs coefficients in a field")
    ub, ug = handle_polynomial(zb).coeffs, handle_polynomial(zg).coeffs
    pair = poly_lcm(ub, ug)
    s = handle_polynomial(add(zb, zg)).coeffs
    return RegularPairReport(
        is_regular=(s == pair),
        U_pair=HandlePolynomial(pair, pair.degree),
        U_sum=HandlePolynomial(s, s.degree),
    )


def divides(a: UniPoly, b: UniPoly) -> bool:
    if a.is_zero():
        return b.is_zero()
    return (b % a).is_zero()
