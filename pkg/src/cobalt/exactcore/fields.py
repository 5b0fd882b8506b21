"""Coefficient domains: the rationals, prime fields and parameter rings.

A domain is a small descriptor object that knows how to coerce values into
its elements, which elements are units, and how to divide exactly. Elements
themselves are plain Python numbers (``Fraction``), ``PrimeFieldElement``
instances or ``MultiPoly`` instances, all of which support ``+ - *`` with
integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import flint

from .multipoly import MultiPoly

Rational = Fraction


def is_prime(n: int) -> bool:
    return n >= 2 and bool(flint.fmpz(n).is_prime())


@dataclass(frozen=True, slots=True)
class PrimeFieldElement:
    """An element of the prime field F_p, stored as a reduced residue."""

    value: int
    p: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other: Any) -> int | None:
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed prime fields F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return None

    def __add__(self, other: Any) -> PrimeFieldElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement((self.value + o) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other: Any) -> PrimeFieldElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement((self.value - o) % self.p, self.p)

    def __rsub__(self, other: Any) -> PrimeFieldElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement((o - self.value) % self.p, self.p)

    def __mul__(self, other: Any) -> PrimeFieldElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value * o % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> PrimeFieldElement:
        return PrimeFieldElement(-self.value % self.p, self.p)

    def inverse(self) -> PrimeFieldElement:
        if self.value == 0:
            raise ZeroDivisionError(f"0 is not invertible in F_{self.p}")
        return PrimeFieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other: Any) -> PrimeFieldElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * PrimeFieldElement(o, self.p).inverse()

    def __rtruediv__(self, other: Any) -> PrimeFieldElement:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(o, self.p) * self.inverse()

    def __pow__(self, e: int) -> PrimeFieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElement(pow(self.value, e, self.p), self.p)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def signed(self) -> int:
        """Representative in (-p/2, p/2]."""
        return self.value - self.p if self.value > self.p // 2 else self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.p})"

    def __str__(self) -> str:
        return str(self.value)


class Domain:
    """Base class for coefficient domains."""

    is_field: bool = True
    characteristic: int = 0
    name: str = "?"

    @property
    def zero(self) -> Any:
        return self(0)

    @property
    def one(self) -> Any:
        return self(1)

    def __call__(self, x: Any) -> Any:
        raise NotImplementedError

    def is_unit(self, a: Any) -> bool:
        return a != 0

    def div(self, a: Any, b: Any) -> Any:
        """Exact division a/b; raises if b does not divide a."""
        raise NotImplementedError

    def inverse(self, a: Any) -> Any:
        return self.div(self.one, a)

    def __repr__(self) -> str:
        return self.name


class RationalField(Domain):
    name = "QQ"

    def __call__(self, x: Any) -> Fraction:
        if isinstance(x, MultiPoly):
            if not x.is_constant():
                raise ValueError(f"{x} is not a rational constant")
            x = x.constant_value()
        if isinstance(x, PrimeFieldElement):
            raise TypeError("cannot lift a prime-field element to QQ")
        return Fraction(x)

    def div(self, a: Any, b: Any) -> Fraction:
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return Fraction(a) / Fraction(b)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")


QQ = RationalField()


class PrimeField(Domain):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x: Any) -> PrimeFieldElement:
        if isinstance(x, PrimeFieldElement):
            if x.p != self.p:
                raise ValueError(f"element of F_{x.p} used in F_{self.p}")
            return x
        if isinstance(x, MultiPoly):
            if not x.is_constant():
                raise ValueError(f"{x} is not a constant")
            x = x.constant_value()
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return PrimeFieldElement(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return PrimeFieldElement(int(x) % self.p, self.p)

    def div(self, a: Any, b: Any) -> PrimeFieldElement:
        return self(a) / self(b)

    def elements(self) -> list[PrimeFieldElement]:
        return [PrimeFieldElement(v, self.p) for v in range(self.p)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


class PolyRing(Domain):
    """Polynomial ring QQ[v1, ..., vk] in declared parameters."""

    is_field = False

    def __init__(self, variables: tuple[str, ...] | list[str]):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate parameter names")
        self.name = "QQ[" + ",".join(self.variables) + "]"

    def __call__(self, x: Any) -> MultiPoly:
        if isinstance(x, MultiPoly):
            if x.vars == self.variables:
                return x
            return x.embed(self.variables)
        if isinstance(x, PrimeFieldElement):
            raise TypeError("cannot embed a prime-field element in a rational parameter ring")
        return MultiPoly.constant(self.variables, x)

    def gens(self) -> list[MultiPoly]:
        return [MultiPoly.variable(self.variables, v) for v in self.variables]

    def is_unit(self, a: Any) -> bool:
        a = self(a)
        return a.is_constant() and not a.is_zero()

    def div(self, a: Any, b: Any) -> MultiPoly:
        return self(a).exact_div(self(b))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and other.variables == self.variables

    def __hash__(self) -> int:
        return hash(("PolyRing", self.variables))


def domain_of(values: list[Any]) -> Domain:
    """Smallest domain holding every value in the list."""
    for v in values:
        if isinstance(v, PrimeFieldElement):
            return GF(v.p)
    names: list[str] = []
    for v in values:
        if isinstance(v, MultiPoly) and not v.is_constant():
            for name in v.vars:
                if name not in names:
                    names.append(name)
    if names:
        return PolyRing(names)
    return QQ
