"""Elements of F[t]/(f) for a monic modulus f over a field F."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .unipoly import UniPoly, poly_invmod


@dataclass(frozen=True)
class QuotientRingElement:
    representative: UniPoly
    modulus: UniPoly

    def __post_init__(self) -> None:
        m = self.modulus
        if m.degree < 1:
            raise ValueError("modulus must have degree at least 1")
        if m.lc() != 1:
            raise ValueError("modulus must be monic")
        if self.representative.domain != m.domain:
            raise ValueError("representative and modulus over different fields")
        if self.representative.degree >= m.degree:
            object.__setattr__(self, "representative", self.representative % m)

    @classmethod
    def generator(cls, modulus: UniPoly) -> QuotientRingElement:
        return cls(UniPoly.gen(modulus.domain), modulus)

    def _lift(self, other: Any) -> UniPoly:
        if isinstance(other, QuotientRingElement):
            if other.modulus != self.modulus:
                raise ValueError("elements of different quotient rings")
            return other.representative
        if isinstance(other, UniPoly):
            return other
        return UniPoly((other,), self.modulus.domain)

    def __add__(self, other: Any) -> QuotientRingElement:
        return QuotientRingElement(self.representative + self._lift(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Any) -> QuotientRingElement:
        return QuotientRingElement(self.representative - self._lift(other), self.modulus)

    def __rsub__(self, other: Any) -> QuotientRingElement:
        return QuotientRingElement(self._lift(other) - self.representative, self.modulus)

    def __neg__(self) -> QuotientRingElement:
        return QuotientRingElement(-self.representative, self.modulus)

    def __mul__(self, other: Any) -> QuotientRingElement:
        return QuotientRingElement((self.representative * self._lift(other)) % self.modulus, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> QuotientRingElement:
        return QuotientRingElement(poly_invmod(self.representative, self.modulus), self.modulus)

    def __truediv__(self, other: Any) -> QuotientRingElement:
        o = other if isinstance(other, QuotientRingElement) else QuotientRingElement(self._lift(other), self.modulus)
        return self * o.inverse()

    def __pow__(self, e: int) -> QuotientRingElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = QuotientRingElement(UniPoly.one(self.modulus.domain), self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuotientRingElement):
            return self.modulus == other.modulus and self.representative == other.representative
        try:
            return self.representative == self._lift(other) % self.modulus
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.representative, self.modulus))

    def is_constant(self) -> bool:
        return self.representative.degree <= 0

    def constant(self) -> Any:
        if not self.is_constant():
            raise ValueError(f"{self} is not in the base field")
        return self.representative[0]

    def trace(self) -> Any:
        """Trace of multiplication by this element, the sum over all conjugates."""
        m = self.modulus
        d = m.degree
        total = m.domain.zero
        basis = UniPoly.one(m.domain)
        t = UniPoly.gen(m.domain)
        for i in range(d):
            total = total + ((self.representative * basis) % m)[i]
            basis = (basis * t) % m
        return total

    def __str__(self) -> str:
        return f"{self.representative.to_str('t')} mod ({self.modulus.to_str('t')})"


def qr_in_prime_field(e: QuotientRingElement) -> bool:
    """True iff the element lies in the base field (degree-0 representative).

    Over a prime field F_p with irreducible modulus this is membership in F_p.
    """
    return e.representative.degree <= 0
