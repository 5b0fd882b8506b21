"""Decide whether a rational series admits an abelian realization.

Four conditions are checked over the base field of the series (QQ or F_p):

1. the generating function is rational (holds by construction),
2. the denominator Q is separable,
3. deg P <= deg Q + 1,
4. in characteristic p, every residue of Z(T) dT / T^2 lies in the prime field.

Residues at the roots of an irreducible factor f of Q are computed in
F[t]/(f); conjugate roots give conjugate residues, so one computation per
factor suffices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from .exactcore import QQ, GF, QuotientRingElement, UniPoly, qr_in_prime_field
from .exactcore.fields import PolyRing
from .exactcore.unipoly import factor_over_QQ, irreducible_factors_mod_p, squarefree_factorization
from .genfun import RationalSeries, SeriesError, coefficients, normalize, reduce_mod

UNDETERMINED = "undetermined"
MAX_FACTOR_DEGREE = 4

Residue = Union[Any, QuotientRingElement]


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class PoleResidue:
    """Residue of Z(T) dT/T^2 at a pole; ``factor`` is the monic minimal polynomial of the pole."""

    where: str
    factor: UniPoly | None
    value: Residue

    @property
    def degree(self) -> int:
        return 1 if self.factor is None else self.factor.degree

    def in_prime_field(self) -> bool:
        if isinstance(self.value, QuotientRingElement):
            return qr_in_prime_field(self.value)
        return True

    def total(self) -> Any:
        """Sum of the residue over all conjugate poles."""
        if isinstance(self.value, QuotientRingElement):
            return self.value.trace()
        return self.value

    def __str__(self) -> str:
        return f"{self.where}: {self.value}"


@dataclass
class RealizationReport:
    characteristic: int
    series: RationalSeries
    cond_rational: bool
    cond_separable: bool | str
    cond_degree: bool
    cond_residues: bool | str
    witnesses: list[tuple[str, str]] = field(default_factory=list)
    residues: list[PoleResidue] = field(default_factory=list)

    @property
    def conditions(self) -> tuple[bool | str, ...]:
        return (self.cond_rational, self.cond_separable, self.cond_degree, self.cond_residues)

    @property
    def verdict(self) -> str:
        conds = self.conditions
        if any(c is False for c in conds):
            return "fails"
        if all(c is True for c in conds):
            return "admits"
        return UNDETERMINED

    @property
    def failed(self) -> list[int]:
        """Indices (1-based) of the conditions that are false."""
        return [i + 1 for i, c in enumerate(self.conditions) if c is False]

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": 1,
            "characteristic": self.characteristic,
            "series": self.series.to_dict(),
            "conditions": {
                "rational": self.cond_rational,
                "separable": self.cond_separable,
                "degree": self.cond_degree,
                "residues": self.cond_residues,
            },
            "verdict": self.verdict,
            "failed": self.failed,
            "residues": [{"pole": r.where, "value": str(r.value)} for r in self.residues],
            "witnesses": [{"condition": c, "explanation": e} for c, e in self.witnesses],
        }


# ------------------------------------------------------------------ residues


def _factor(Q: UniPoly, seed: int = 0) -> list[tuple[UniPoly, int]] | None:
    p = Q.domain.characteristic
    if p:
        return irreducible_factors_mod_p(Q, max_degree=MAX_FACTOR_DEGREE, seed=seed)
    return factor_over_QQ(Q)


def _polynomial_part_top(z: RationalSeries) -> Any:
    """r1, the T-coefficient of the polynomial part when deg P = deg Q + 1, else 0."""
    dom = z.domain
    if z.N == z.M + 1:
        return dom.div(z.P[z.N], z.Q[z.M])
    if z.N > z.M + 1:
        raise RealizationError("polynomial part has degree above 1")
    return dom.zero


def residues(z: RationalSeries, seed: int = 0) -> list[PoleResidue]:
    """Residues of Z(T) dT / T^2 at the finite nonzero poles, at 0 and at infinity.

    Raises RealizationError when Q is not separable or a factor of Q is too
    large to factor with certainty.
    """
    dom = z.domain
    if isinstance(dom, PolyRing) or not dom.is_field:
        raise RealizationError("residues need a series over QQ or F_p")
    if z.Q.degree > 0 and any(m > 1 for _, m in squarefree_factorization(z.Q)):
        raise RealizationError("denominator is not separable")
    out: list[PoleResidue] = []
    dQ = z.Q.derivative()
    finite_total = dom.zero
    if z.Q.degree > 0:
        facs = _factor(z.Q, seed)
        if facs is None:
            raise RealizationError(f"denominator has an irreducible factor of degree above {MAX_FACTOR_DEGREE}")
        for f, _ in facs:
            t = QuotientRingElement.generator(f)
            val = (t * 0 + z.P) / (t * t * dQ)  # P(t) / (t^2 Q'(t))
            if f.degree == 1:
                t0 = -f[0]
                r = PoleResidue(f"T={t0}", None, val.constant())
            else:
                r = PoleResidue(f"root of {f.to_str('T')}", f, val)
            out.append(r)
            finite_total = finite_total + r.total()
    alpha1 = coefficients(z, 1)[1]
    out.append(PoleResidue("T=0", None, alpha1))
    at_inf = -_polynomial_part_top(z)
    # Residue Theorem: the sum over all poles on P^1 vanishes
    if finite_total + alpha1 + at_inf != 0:
        raise RealizationError("residue sum does not vanish; internal inconsistency")
    out.append(PoleResidue("T=oo", None, at_inf))
    return out


# ----------------------------------------------------------------- decision


def _in_char(z: RationalSeries, characteristic: int) -> RationalSeries:
    if characteristic == 0:
        if z.domain != QQ:
            raise RealizationError("characteristic 0 check needs a series over QQ")
        return z
    dom = z.domain
    if dom == GF(characteristic):
        return normalize(z.P, z.Q)
    if dom != QQ:
        raise RealizationError(f"cannot view a series over {dom} in characteristic {characteristic}")
    return reduce_mod(z, characteristic)


def check_abelian(z: RationalSeries, characteristic: int = 0, seed: int = 0) -> RealizationReport:
    """Run the four-condition test; the series is reduced mod p and renormalized first."""
    try:
        zz = _in_char(z, characteristic)
    except SeriesError as exc:
        raise RealizationError(str(exc)) from exc
    p = characteristic
    wit: list[tuple[str, str]] = [("rational", f"Z = {zz}")]

    if zz.Q.degree > 0:
        sqf = squarefree_factorization(zz.Q)
        repeated = [(g, m) for g, m in sqf if m > 1]
        separable: bool | str = not repeated
        if repeated:
            g, m = repeated[0]
            note = f"({g.to_str('T')})^{m} divides the denominator"
            if p and m % p == 0:
                note += "; a p-th power factor, so Fr(Q) is not square free"
            wit.append(("separable", note))
    else:
        separable = True

    degree_ok = zz.N <= zz.M + 1
    if not degree_ok:
        wit.append(("degree", f"deg P = {zz.N} exceeds deg Q + 1 = {zz.M + 1}"))

    res_list: list[PoleResidue] = []
    cond_res: bool | str
    if separable is not True or not degree_ok:
        cond_res = UNDETERMINED if p else True
    else:
        try:
            res_list = residues(zz, seed)
        except RealizationError as exc:
            res_list = []
            cond_res = UNDETERMINED if p else True
            if p:
                wit.append(("residues", str(exc)))
        else:
            if p == 0:
                cond_res = True
            else:
                bad = [r for r in res_list if not r.in_prime_field()]
                cond_res = not bad
                for r in bad:
                    wit.append(("residues", f"residue at {r.where} is {r.value}, outside F_{p}"))
    return RealizationReport(p, zz, True, separable, degree_ok, cond_res, wit, res_list)
