"""Sparse multivariate polynomials with rational coefficients.

Terms are stored as a dict from exponent tuples to coefficients. Integral
coefficients are kept as ``int`` and the rest as ``Fraction``; both are
rationals, the split only saves time. Printing and comparison use the graded
lexicographic order on the declared variable order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Mapping

import flint

Exponent = tuple[int, ...]


def _num(c: Any) -> int | Fraction:
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _grlex_key(e: Exponent) -> tuple[int, Exponent]:
    return (sum(e), e)


class MultiPoly:
    """Element of QQ[vars]. Treat instances as immutable."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exponent, Any] | None = None):
        self.vars: tuple[str, ...] = tuple(variables)
        k = len(self.vars)
        clean: dict[Exponent, int | Fraction] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != k:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent {e}")
                if c != 0:
                    clean[e] = _num(c)
        self.terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, Any]) -> MultiPoly:
        obj = cls.__new__(cls)
        obj.vars = variables
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, variables: Iterable[str], c: Any) -> MultiPoly:
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Iterable[str], name: str) -> MultiPoly:
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def gens(cls, variables: Iterable[str]) -> list[MultiPoly]:
        variables = tuple(variables)
        return [cls.variable(variables, v) for v in variables]

    # ------------------------------------------------------------------ basics

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> int | Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), 0)

    def constant_term(self) -> int | Fraction:
        return self.terms.get((0,) * len(self.vars), 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def leading_term(self) -> tuple[Exponent, int | Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list[tuple[Exponent, int | Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def coefficients_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    # ---------------------------------------------------------------- coercion

    def embed(self, variables: Iterable[str]) -> MultiPoly:
        """Re-express in a variable list containing every variable actually used."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        pos = []
        for i, name in enumerate(self.vars):
            if name in variables:
                pos.append(variables.index(name))
            else:
                if any(e[i] for e in self.terms):
                    raise ValueError(f"variable {name} not in {variables}")
                pos.append(None)
        k = len(variables)
        terms: dict[Exponent, Any] = {}
        for e, c in self.terms.items():
            new = [0] * k
            for i, x in enumerate(e):
                if x:
                    new[pos[i]] = x
            terms[tuple(new)] = c
        return MultiPoly._raw(variables, terms)

    def _align(self, other: Any) -> tuple[MultiPoly, MultiPoly] | None:
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return self, other
            merged = list(self.vars)
            for v in other.vars:
                if v not in merged:
                    merged.append(v)
            merged_t = tuple(merged)
            return self.embed(merged_t), other.embed(merged_t)
        if isinstance(other, (int, Fraction)):
            return self, MultiPoly.constant(self.vars, other)
        return None

    # -------------------------------------------------------------- arithmetic

    def __add__(self, other: Any) -> MultiPoly:
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = _num(s) if isinstance(s, Fraction) else s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(a.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> MultiPoly:
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other: Any) -> MultiPoly:
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b + (-a)

    def __mul__(self, other: Any) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: _num(c * other) for e, c in self.terms.items()})
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms: dict[Exponent, Any] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other: Any) -> MultiPoly:
        """Quotient self/other, raising ArithmeticError if the division leaves a remainder."""
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a polynomial by zero")
            inv = Fraction(1) / Fraction(other)
            return self * inv
        pair = self._align(other)
        if pair is None:
            raise TypeError(f"cannot divide by {other!r}")
        a, b = pair
        if b.is_zero():
            raise ZeroDivisionError("division of a polynomial by zero")
        if b.is_constant():
            return a.exact_div(b.constant_value())
        lead_e, lead_c = b.leading_term()
        rem = dict(a.terms)
        quot: dict[Exponent, Any] = {}
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            shift = tuple(x - y for x, y in zip(e, lead_e))
            if any(x < 0 for x in shift):
                raise ArithmeticError(f"division is not exact: ({a}) / ({b})")
            q = _num(Fraction(c) / lead_c)
            quot[shift] = q
            for eb, cb in b.terms.items():
                t = tuple(x + y for x, y in zip(eb, shift))
                s = rem.get(t, 0) - q * cb
                if s:
                    rem[t] = _num(s)
                else:
                    rem.pop(t, None)
        return MultiPoly._raw(a.vars, quot)

    def __truediv__(self, other: Any) -> MultiPoly:
        return self.exact_div(other)

    def __rtruediv__(self, other: Any) -> MultiPoly:
        return MultiPoly.constant(self.vars, other).exact_div(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return self.terms == other.terms
            pair = self._align(other)
            return pair[0].terms == pair[1].terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                named = frozenset(
                    (tuple((v, x) for v, x in zip(self.vars, e) if x), c) for e, c in self.terms.items()
                )
                self._hash = hash(named)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # ------------------------------------------------------------- evaluation

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        """Substitute values for variables; returns a scalar if all variables are bound."""
        if all(v in values for v in self.vars if self.degree_in(v) > 0):
            total: Any = 0
            powers: dict[tuple[int, int], Any] = {}
            for e, c in self.terms.items():
                term: Any = c
                for i, x in enumerate(e):
                    if x:
                        key = (i, x)
                        if key not in powers:
                            powers[key] = values[self.vars[i]] ** x
                        term = term * powers[key]
                total = total + term
            return total
        return self.subs(values)

    def subs(self, mapping: Mapping[str, Any]) -> MultiPoly:
        """Substitute polynomials or numbers for some variables, keeping the rest."""
        keep = tuple(v for v in self.vars if v not in mapping)
        result = MultiPoly(keep)
        gens = {v: MultiPoly.variable(keep, v) for v in keep}
        for e, c in self.terms.items():
            term: Any = MultiPoly.constant(keep, c)
            for name, x in zip(self.vars, e):
                if x:
                    val = mapping[name] if name in mapping else gens[name]
                    term = term * (val ** x)
            result = result + term
        if isinstance(result, MultiPoly):
            return result
        return MultiPoly.constant(keep, result)

    def derivative(self, name: str) -> MultiPoly:
        i = self.vars.index(name)
        terms: dict[Exponent, Any] = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = c * e[i]
        return MultiPoly(self.vars, terms)

    # ---------------------------------------------------------------- printing

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (name if x == 1 else f"{name}^{x}") for name, x in zip(self.vars, e) if x
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    # ------------------------------------------------------------ flint bridge

    def to_flint(self, ctx: Any) -> Any:
        """Convert to an fmpz_mpoly or fmpq_mpoly in a context with the same variables."""
        if isinstance(ctx, flint.fmpz_mpoly_ctx):
            return ctx.from_dict({e: int(c) for e, c in self.terms.items()}) if self.terms else ctx.from_dict({})
        return ctx.from_dict({e: flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for e, c in self.terms.items()})

    @classmethod
    def from_flint(cls, variables: Iterable[str], p: Any) -> MultiPoly:
        terms: dict[Exponent, Any] = {}
        for e, c in p.to_dict().items():
            key = tuple(int(x) for x in e)
            if isinstance(c, flint.fmpq):
                terms[key] = Fraction(int(c.p), int(c.q))
            else:
                terms[key] = int(c)
        return cls(variables, terms)


def flint_context(variables: Iterable[str], integral: bool = True) -> Any:
    names = tuple(variables)
    if integral:
        return flint.fmpz_mpoly_ctx.get(names, "deglex")
    return flint.fmpq_mpoly_ctx.get(names, "deglex")
