"""Dense univariate polynomials over a coefficient domain."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Any, Iterable, Sequence

from .fields import QQ, Domain, GF, PrimeField, PrimeFieldElement


class UniPoly:
    """Polynomial sum(c[i] * T^i) with coefficients in ``domain``. Immutable."""

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs: Iterable[Any], domain: Domain = QQ):
        cs = [domain(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Any, ...] = tuple(cs)
        self.domain = domain

    @classmethod
    def _raw(cls, coeffs: list[Any], domain: Domain) -> UniPoly:
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.domain = domain
        return obj

    @classmethod
    def zero(cls, domain: Domain = QQ) -> UniPoly:
        return cls((), domain)

    @classmethod
    def one(cls, domain: Domain = QQ) -> UniPoly:
        return cls((1,), domain)

    @classmethod
    def monomial(cls, k: int, c: Any = 1, domain: Domain = QQ) -> UniPoly:
        return cls([0] * k + [c], domain)

    @classmethod
    def gen(cls, domain: Domain = QQ) -> UniPoly:
        return cls((0, 1), domain)

    # ------------------------------------------------------------------ basics

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, i: int) -> Any:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.domain.zero

    def lc(self) -> Any:
        if not self.coeffs:
            return self.domain.zero
        return self.coeffs[-1]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def convert(self, domain: Domain) -> UniPoly:
        return UniPoly(self.coeffs, domain)

    # -------------------------------------------------------------- arithmetic

    def _coerce(self, other: Any) -> UniPoly | None:
        if isinstance(other, UniPoly):
            if other.domain != self.domain:
                raise ValueError(f"mixed coefficient domains {self.domain} and {other.domain}")
            return other
        try:
            return UniPoly((other,), self.domain)
        except (TypeError, ValueError):
            return None

    def __add__(self, other: Any) -> UniPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly._raw([self[i] + o[i] for i in range(n)], self.domain)

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly._raw([-c for c in self.coeffs], self.domain)

    def __sub__(self, other: Any) -> UniPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly._raw([self[i] - o[i] for i in range(n)], self.domain)

    def __rsub__(self, other: Any) -> UniPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> UniPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UniPoly.zero(self.domain)
        out = [self.domain.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly._raw(out, self.domain)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UniPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly.one(self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Any) -> UniPoly:
        c = self.domain(c)
        return UniPoly._raw([a * c for a in self.coeffs], self.domain)

    def shift(self, k: int) -> UniPoly:
        """Multiply by T^k."""
        if not self.coeffs:
            return self
        return UniPoly._raw([self.domain.zero] * k + list(self.coeffs), self.domain)

    def truncate(self, n: int) -> UniPoly:
        """Reduce modulo T^n."""
        return UniPoly._raw(list(self.coeffs[:n]), self.domain)

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        """Euclidean division; the divisor's leading coefficient must be a unit."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        dom = self.domain
        inv_lc = dom.inverse(other.lc())
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return UniPoly.zero(dom), self
        quot = [dom.zero] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lc
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return UniPoly._raw(quot, dom), UniPoly._raw(rem[:dq], dom)

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def exact_div(self, other: Any) -> UniPoly:
        if not isinstance(other, UniPoly):
            c = self.domain(other)
            return UniPoly._raw([self.domain.div(a, c) for a in self.coeffs], self.domain)
        if other.is_constant():
            return self.exact_div(other[0])
        if self.domain.is_unit(other.lc()):
            q, r = self.divmod(other)
            if not r.is_zero():
                raise ArithmeticError(f"({self}) is not divisible by ({other})")
            return q
        # Non-unit leading coefficient over a parameter ring: long division with exact coefficient division.
        dom = self.domain
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            if self.is_zero():
                return self
            raise ArithmeticError(f"({self}) is not divisible by ({other})")
        quot = [dom.zero] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = dom.div(rem[k + dq], other.lc())
            quot[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        if any(r != 0 for r in rem):
            raise ArithmeticError(f"({self}) is not divisible by ({other})")
        return UniPoly._raw(quot, dom)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # ------------------------------------------------------------- evaluation

    def __call__(self, x: Any) -> Any:
        acc: Any = self.domain.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, g: UniPoly) -> UniPoly:
        acc = UniPoly.zero(self.domain)
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly._raw([c * i for i, c in enumerate(self.coeffs)][1:], self.domain)

    def reversed(self, k: int | None = None) -> UniPoly:
        """T^k * self(1/T); k defaults to the degree."""
        if k is None:
            k = self.degree
        if k < self.degree:
            raise ValueError("reversal degree smaller than polynomial degree")
        cs = list(self.coeffs) + [self.domain.zero] * (k + 1 - len(self.coeffs))
        return UniPoly._raw(cs[::-1], self.domain)

    def map_coeffs(self, f: Any, domain: Domain) -> UniPoly:
        return UniPoly([f(c) for c in self.coeffs], domain)

    # ------------------------------------------------------------ field tools

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return self.scale(self.domain.inverse(self.lc()))

    def normalized_at_zero(self) -> UniPoly:
        """Scale so the constant term is 1."""
        return self.scale(self.domain.inverse(self[0]))

    def content_free(self) -> UniPoly:
        """Over QQ: scale to a primitive integer polynomial with positive leading coefficient."""
        if self.domain != QQ or self.is_zero():
            return self
        den = lcm(*(Fraction(c).denominator for c in self.coeffs))
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        from math import gcd

        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return UniPoly([Fraction(v, g) for v in ints], QQ)

    # ---------------------------------------------------------------- printing

    def to_str(self, var: str = "T", ascending: bool = False) -> str:
        if not self.coeffs:
            return "0"
        parts: list[tuple[str, str]] = []
        order = range(len(self.coeffs)) if ascending else range(len(self.coeffs) - 1, -1, -1)
        for i in order:
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            sign, body = _coeff_text(c)
            if mono:
                if body == "1":
                    text = mono
                elif "+" in body or " - " in body:
                    text = f"({body})*{mono}"
                else:
                    text = f"{body}*{mono}"
            else:
                text = body
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str()}, {self.domain})"


def _coeff_text(c: Any) -> tuple[str, str]:
    from .multipoly import MultiPoly

    if isinstance(c, MultiPoly):
        if c.is_constant():
            v = c.constant_value()
            return ("-" if v < 0 else "+", str(abs(v)))
        if len(c.terms) == 1:
            ((_, coef),) = c.terms.items()
            if coef < 0:
                return ("-", str(-c))
        return ("+", str(c))
    if isinstance(c, PrimeFieldElement):
        return ("+", str(c.value))
    return ("-" if c < 0 else "+", str(abs(c)))


# -------------------------------------------------------------------- gcd etc.


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor over a field."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd undefined: both polynomials are zero")
    if not a.domain.is_field:
        raise TypeError("poly_gcd requires coefficients in a field")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    dom = a.domain
    r0, r1 = a, b
    s0, s1 = UniPoly.one(dom), UniPoly.zero(dom)
    t0, t1 = UniPoly.zero(dom), UniPoly.one(dom)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        raise ValueError("gcd undefined: both polynomials are zero")
    inv = dom.inverse(r0.lc())
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly.zero(a.domain)
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def poly_invmod(a: UniPoly, m: UniPoly) -> UniPoly:
    g, s, _ = poly_xgcd(a % m, m)
    if g.degree != 0:
        raise ArithmeticError(f"{a} is not invertible modulo {m}")
    return s % m


def _pth_root(f: UniPoly, p: int) -> UniPoly:
    """For f = g(T^p) over F_p return g (Frobenius is the identity on F_p)."""
    cs = f.coeffs
    if any(c != 0 for i, c in enumerate(cs) if i % p):
        raise ArithmeticError("polynomial is not a p-th power")
    return UniPoly._raw(list(cs[::p]), f.domain)


def squarefree_factorization(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Monic square-free factors with multiplicities, product equals monic(f)."""
    if f.is_zero():
        raise ValueError("square-free factorization of the zero polynomial")
    dom = f.domain
    p = dom.characteristic
    f = f.monic()
    if f.degree <= 0:
        return []
    out: dict[int, UniPoly] = {}

    def add(g: UniPoly, m: int) -> None:
        if g.degree > 0:
            out[m] = out[m] * g if m in out else g

    fp = f.derivative()
    if fp.is_zero():
        for g, m in squarefree_factorization(_pth_root(f, p)):
            add(g, m * p)
        return sorted([(g, m) for m, g in out.items()], key=lambda t: t[1])
    c = poly_gcd(f, fp)
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        add(w.exact_div(y), i)
        i += 1
        w = y
        c = c.exact_div(y)
    if c.degree > 0:
        if p == 0:
            raise ArithmeticError("square-free factorization failed to terminate")
        for g, m in squarefree_factorization(_pth_root(c, p)):
            add(g, m * p)
    return sorted([(g, m) for m, g in out.items()], key=lambda t: t[1])


def squarefree_part(q: UniPoly) -> tuple[UniPoly, bool, bool]:
    """Return (radical of q, q separable?, inseparable factor detected?).

    The radical is monic. In characteristic p, ``inseparable_detected`` flags a
    factor whose multiplicity is a multiple of p, the situation where the
    derivative chain hits a p-th power.
    """
    if q.is_zero():
        raise ValueError("squarefree_part of the zero polynomial")
    factors = squarefree_factorization(q)
    rad = UniPoly.one(q.domain)
    for g, _ in factors:
        rad = rad * g
    separable = all(m == 1 for _, m in factors)
    p = q.domain.characteristic
    insep = p > 0 and any(m % p == 0 for _, m in factors)
    return rad, separable, insep


def rational_roots(f: UniPoly) -> list[Fraction]:
    """All distinct rational roots of f over QQ."""
    if f.domain != QQ:
        raise TypeError("rational_roots requires a polynomial over QQ")
    if f.is_zero():
        raise ValueError("zero polynomial has every root")
    g = f.content_free()
    ints = [int(c) for c in g.coeffs]
    roots: list[Fraction] = []
    k = 0
    while k < len(ints) and ints[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
    ints = ints[k:]
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and _eval_int(ints, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _eval_int(ints: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    import flint

    if n == 0:
        return [1]
    divs = [1]
    for prime, e in flint.fmpz(n).factor():
        prime = int(prime)
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ------------------------------------------------------- factoring over F_p


def _powmod(base: UniPoly, e: int, m: UniPoly) -> UniPoly:
    result = UniPoly.one(base.domain)
    base = base % m
    while e:
        if e & 1:
            result = (result * base) % m
        e >>= 1
        if e:
            base = (base * base) % m
    return result


def distinct_degree_factorization(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """For square-free monic f over F_p: list of (product of all degree-d irreducible factors, d)."""
    dom = f.domain
    if not isinstance(dom, PrimeField):
        raise TypeError("distinct-degree factorization needs a prime field")
    p = dom.p
    out: list[tuple[UniPoly, int]] = []
    x = UniPoly.gen(dom)
    h = x
    d = 0
    f = f.monic()
    while f.degree >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f.exact_div(g)
            h = h % f if f.degree > 0 else h
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def equal_degree_split(f: UniPoly, d: int, rng: Any) -> list[UniPoly]:
    """Cantor-Zassenhaus splitting of a product of distinct degree-d irreducibles over F_p."""
    dom = f.domain
    p = dom.p
    n = f.degree
    if n == d:
        return [f.monic()]
    while True:
        a = UniPoly([rng.randrange(p) for _ in range(n)], dom)
        if a.degree < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1)) splits in characteristic 2
            t = a
            acc = a
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = _powmod(a, (p**d - 1) // 2, f) - UniPoly.one(dom)
        g = poly_gcd(f, b)
        if 0 < g.degree < n:
            return equal_degree_split(g, d, rng) + equal_degree_split(f.exact_div(g), d, rng)


def irreducible_factors_mod_p(f: UniPoly, max_degree: int | None = 4, seed: int = 0) -> list[tuple[UniPoly, int]] | None:
    """Monic irreducible factors of f over F_p with multiplicities.

    Returns None ("undetermined") when some irreducible factor has degree
    above ``max_degree``.
    """
    import random

    rng = random.Random(seed)
    out: list[tuple[UniPoly, int]] = []
    for g, m in squarefree_factorization(f):
        for prod, d in distinct_degree_factorization(g):
            if max_degree is not None and d > max_degree:
                return None
            for h in equal_degree_split(prod, d, rng):
                out.append((h, m))
    out.sort(key=lambda t: (t[0].degree, [int(c) for c in t[0].coeffs]))
    return out


def factor_over_QQ(f: UniPoly) -> list[tuple[UniPoly, int]] | None:
    """Factor over QQ into monic irreducibles when possible with rational roots.

    Linear factors come from the rational-root test; a leftover factor of
    degree at most 3 without rational roots is irreducible. Returns None when
    a leftover of degree 4 or more remains (its factorization is not certified).
    """
    out: list[tuple[UniPoly, int]] = []
    for g, m in squarefree_factorization(f):
        rest = g
        for r in rational_roots(g):
            lin = UniPoly((-r, 1), QQ)
            out.append((lin, m))
            rest = rest.exact_div(lin)
        if rest.degree >= 4:
            return None
        if rest.degree >= 1:
            out.append((rest.monic(), m))
    return out


def reduce_mod_p(f: UniPoly, p: int) -> UniPoly:
    """Image of a polynomial over QQ in F_p[T]."""
    return UniPoly(f.coeffs, GF(p))
