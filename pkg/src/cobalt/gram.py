"""Gram matrices of the gluing pairing on spanning sets of decorated surfaces.

The pairing of two surfaces with the same boundary is the evaluation of the
closed surface obtained by gluing them: the product of alpha_g over its
connected components. Everything here reduces to that rule plus exact linear
algebra from ``exactcore``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Any, Iterable, Mapping, Sequence

import flint

from . import combinat
from .exactcore import (
    QQ,
    MultiPoly,
    PolyRing,
    UniPoly,
    det_polynomial,
    det_rational,
    nullspace,
    rank_exact,
)
from .exactcore.multipoly import flint_context
from .genfun import RationalSeries, coefficients, series, specialize
from .surf import (
    DecoratedSurface,
    enumerate_Am,
    enumerate_crossingless,
    enumerate_matchings,
    enumerate_spanning,
    glue,
    glue_components,
    matching_from_partition,
    meander_h1h2,
)

SYMBOLIC_LIMIT = 100


class GramError(ValueError):
    pass


# ---------------------------------------------------------------- evaluation


class Evaluator:
    """alpha_g on demand, and products over multisets of genera (cached)."""

    def __init__(self, z: RationalSeries):
        self.z = z
        self.alpha: list[Any] = coefficients(z, 8)
        self._cache: dict[tuple[int, ...], Any] = {}

    def a(self, g: int) -> Any:
        if g >= len(self.alpha):
            self.alpha = coefficients(self.z, max(g, 2 * len(self.alpha)))
        return self.alpha[g]

    def product(self, genera: tuple[int, ...]) -> Any:
        v = self._cache.get(genera)
        if v is None:
            v = self.z.domain.one
            for g in genera:
                v = v * self.a(g)
            self._cache[genera] = v
        return v


def pairing(a: DecoratedSurface, b: DecoratedSurface, z: RationalSeries) -> Any:
    """alpha of (-a) glued to b: product of alpha_genus over the components."""
    if a.n != b.n:
        raise GramError(f"cannot pair surfaces with {a.n} and {b.n} boundary circles")
    ev = Evaluator(z)
    return ev.product(glue(a, b).component_genera)


def genus_keys(rows: Sequence[DecoratedSurface], cols: Sequence[DecoratedSurface] | None = None) -> tuple[list[tuple[int, ...]], list[list[int]]]:
    """Glued-genus multisets for every (row, column) pair.

    Returns a table of distinct sorted genus tuples and a matrix of indices
    into it. Component structure depends only on the two partitions, so it is
    computed once per pair of partitions and reused across genus labels.
    """
    cols = rows if cols is None else cols
    if rows and cols and rows[0].n != cols[0].n:
        raise GramError("all surfaces must have the same number of boundary circles")
    rgroups: dict[tuple[int, ...], list[int]] = {}
    for i, s in enumerate(rows):
        rgroups.setdefault(s.labels, []).append(i)
    cgroups: dict[tuple[int, ...], list[int]] = {}
    for j, s in enumerate(cols):
        cgroups.setdefault(s.labels, []).append(j)
    table: list[tuple[int, ...]] = []
    index: dict[tuple[int, ...], int] = {}
    out = [[0] * len(cols) for _ in rows]
    for rl, ridx in rgroups.items():
        ka = len(rows[ridx[0]].blocks)
        for cl, cidx in cgroups.items():
            kb = len(cols[cidx[0]].blocks)
            comps = glue_components(rl, ka, cl, kb)
            rsum = [[sum(rows[i].genus[x] for x in ba) for ba, _, _ in comps] for i in ridx]
            csum = [[sum(cols[j].genus[x] for x in bb) for _, bb, _ in comps] for j in cidx]
            bases = [base for _, _, base in comps]
            for ii, i in enumerate(ridx):
                rs = rsum[ii]
                row = out[i]
                for jj, j in enumerate(cidx):
                    cs = csum[jj]
                    key = tuple(sorted(b + x + y for b, x, y in zip(bases, rs, cs)))
                    k = index.get(key)
                    if k is None:
                        k = len(table)
                        index[key] = k
                        table.append(key)
                    row[j] = k
    return table, out


def gram_matrix(surfaces: Sequence[DecoratedSurface], z: RationalSeries) -> list[list[Any]]:
    """Symmetric matrix of pairings in the given order."""
    if not surfaces:
        return []
    table, idx = genus_keys(surfaces)
    ev = Evaluator(z)
    values = [ev.product(k) for k in table]
    return [[values[k] for k in row] for row in idx]


# ------------------------------------------------------------ spanning sets


def spanning_set(n: int, spec: str, z: RationalSeries | None = None) -> list[DecoratedSurface]:
    """``full`` (genus < K), ``full:K``, ``Am:m`` or ``crossingless``."""
    spec = spec.strip()
    if spec == "crossingless":
        return enumerate_crossingless(n)
    if spec.startswith("Am:"):
        return enumerate_Am(n, int(spec[3:]))
    if spec.startswith("full:"):
        return enumerate_spanning(n, int(spec[5:]))
    if spec == "full":
        if z is None:
            raise GramError("the full spanning set needs a series to fix K")
        return enumerate_spanning(n, z.K)
    raise GramError(f"unknown spanning set {spec!r}; use full, full:K, Am:m or crossingless")


def state_dim(n: int, z: RationalSeries, spanning: Sequence[DecoratedSurface] | None = None) -> int:
    """dim A(n): rank of the Gram matrix on a spanning set (default: genus < K)."""
    if z.params:
        raise GramError("state_dim needs concrete parameter values; use generic_dim")
    surfaces = enumerate_spanning(n, z.K) if spanning is None else list(spanning)
    if not surfaces:
        return 0
    return rank_exact(gram_matrix(surfaces, z))


def generic_dim(n: int, z: RationalSeries, spanning: Sequence[DecoratedSurface] | None = None, points: int = 3, seed: int = 0) -> int:
    """Rank at random rational specializations; the points must agree."""
    if not z.params:
        return state_dim(n, z, spanning)
    rng = random.Random(seed)
    ranks = []
    for _ in range(points):
        pt = random_point(z.params, rng)
        ranks.append(state_dim(n, specialize(z, pt), spanning if spanning is not None else enumerate_spanning(n, z.K)))
    if len(set(ranks)) != 1:
        raise GramError(f"generic rank not stable across sample points: {ranks}")
    return ranks[0]


@lru_cache(maxsize=16)
def _am_keys(n: int, m: int) -> tuple[list[tuple[int, ...]], list[list[int]]]:
    return genus_keys(enumerate_Am(n, m))


def linear_state_dim(n: int, beta0: Any, s: Any) -> int:
    """dim A(n) for Z = beta0 + s T, as a rank on the A^1(n) spanning set."""
    z = series(f"{Fraction(beta0)} + {Fraction(s)}*T")
    table, idx = _am_keys(n, 1)
    ev = Evaluator(z)
    values = [Fraction(ev.product(k)) for k in table]
    # one common denominator for the whole matrix leaves the rank unchanged
    den = 1
    for v in values:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in values]
    return rank_exact([[ints[k] for k in row] for row in idx])


def random_point(params: Sequence[str], rng: random.Random) -> dict[str, Fraction]:
    out = {}
    for v in params:
        num = 0
        while num == 0:
            num = rng.randint(-10**4, 10**4)
        out[v] = Fraction(num, rng.randint(1, 97))
    return out


# --------------------------------------------------------------- determinants


def gram_det(surfaces: Sequence[DecoratedSurface], z: RationalSeries, limit: int = SYMBOLIC_LIMIT) -> Any:
    """Exact determinant by fraction-free elimination over the parameter ring."""
    if len(surfaces) > limit:
        raise GramError(f"matrix size {len(surfaces)} exceeds the symbolic limit {limit}; use verify_factorization in PIT mode")
    m = gram_matrix(surfaces, z)
    if not z.params:
        return det_rational(m)
    return det_polynomial(m)


Claim = Sequence[tuple[MultiPoly, int]]


def expand_claim(claim: Claim, sign: int, variables: Sequence[str]) -> MultiPoly:
    variables = tuple(variables)
    integral = all(f.embed(variables).coefficients_integral() for f, _ in claim)
    ctx = flint_context(variables, integral)
    acc = ctx.from_dict({(0,) * len(variables): sign})
    for f, e in claim:
        acc = acc * f.embed(variables).to_flint(ctx) ** e
    return MultiPoly.from_flint(variables, acc)


def evaluate_claim(claim: Claim, sign: int, point: Mapping[str, Any]) -> Fraction:
    v = Fraction(sign)
    for f, e in claim:
        v *= Fraction(f.evaluate(point)) ** e
    return v


@dataclass
class FactorizationCheck:
    verified: bool
    mode: str  # "exact" or "PIT"
    points: list[dict[str, str]] = field(default_factory=list)
    determinant: Any = field(default=None, repr=False)
    probabilistic: bool = False

    def __bool__(self) -> bool:
        return self.verified


def verify_factorization(
    det_claim: Claim,
    sign: int,
    surfaces: Sequence[DecoratedSurface],
    z: RationalSeries,
    mode: str = "auto",
    points: int = 5,
    seed: int = 0,
    limit: int = SYMBOLIC_LIMIT,
) -> FactorizationCheck:
    """Compare sign * prod(f^e) with the Gram determinant.

    Exact mode expands both sides. PIT mode evaluates both at seeded random
    rational points (resampling points where the claim vanishes) and is
    labelled probabilistic.
    """
    if mode == "auto":
        mode = "exact" if len(surfaces) <= limit else "PIT"
    params = z.params
    if mode == "exact":
        det = gram_det(surfaces, z, limit=max(limit, len(surfaces)))
        if not params:
            claim_val = evaluate_claim(det_claim, sign, {})
            return FactorizationCheck(Fraction(det) == claim_val, "exact", determinant=det)
        variables = list(params)
        for f, _ in det_claim:
            for v in f.vars:
                if v not in variables:
                    variables.append(v)
        lhs = det.embed(tuple(variables))
        rhs = expand_claim(det_claim, sign, variables)
        return FactorizationCheck(lhs == rhs, "exact", determinant=det)
    if mode != "PIT":
        raise GramError(f"unknown verification mode {mode!r}")
    rng = random.Random(seed)
    table, idx = genus_keys(surfaces)
    used = []
    ok = True
    attempts = 0
    while len(used) < points:
        attempts += 1
        if attempts > 20 * points:
            raise GramError("could not find points where the claimed determinant is nonzero")
        pt = random_point(params, rng)
        claim_val = evaluate_claim(det_claim, sign, pt)
        if claim_val == 0:
            continue
        zs = specialize(z, pt)
        ev = Evaluator(zs)
        values = [ev.product(k) for k in table]
        det = det_rational([[values[k] for k in row] for row in idx])
        used.append({k: str(v) for k, v in pt.items()})
        if det != claim_val:
            ok = False
            break
    return FactorizationCheck(ok, "PIT", points=used, probabilistic=True)


def parse_claim(factors: Iterable[tuple[str, int]], variables: Sequence[str]) -> list[tuple[MultiPoly, int]]:
    from .exactcore import parse_polynomial

    return [(parse_polynomial(text, tuple(variables)), int(e)) for text, e in factors]


# ----------------------------------------------------------------- leading term


def involution_pi0(surfaces: Sequence[DecoratedSurface], m: int) -> list[int]:
    """Index permutation replacing each genus g by m + 1 - g - (circles)."""
    pos = {s: i for i, s in enumerate(surfaces)}
    out = []
    for s in surfaces:
        t = s.with_genus([m + 1 - g - len(b) for b, g in zip(s.blocks, s.genus)])
        out.append(pos[t])
    return out


def permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leading_term_report(n: int, m: int, det: MultiPoly, top: str) -> dict[str, Any]:
    """Check that det = sign(pi0) * top^{d} + terms of lower degree or involving other variables."""
    surfaces = enumerate_Am(n, m)
    d = sum(len(s.blocks) for s in surfaces)
    sign = permutation_sign(involution_pi0(surfaces, m))
    i = det.vars.index(top)
    pure = {e: c for e, c in det.terms.items() if all(x == 0 for k, x in enumerate(e) if k != i)}
    top_exp = tuple(d if k == i else 0 for k in range(len(det.vars)))
    ok = det.total_degree() == d and pure.get(top_exp) == sign and all(sum(e) < d for e in pure if e != top_exp)
    return {"d": d, "sign": sign, "total_degree": det.total_degree(), "holds": ok}


# -------------------------------------------------------------------- meanders


def _meander_data(n: int) -> tuple[list[DecoratedSurface], list[list[tuple[int, int]]]]:
    surfaces = enumerate_crossingless(n)
    matchings = [matching_from_partition(s) for s in surfaces]
    h = [[meander_h1h2(a, b) for b in matchings] for a in matchings]
    return surfaces, h


def meander_matrix(n: int, beta: Any = None) -> list[list[Any]]:
    """D_n(beta): entry beta^{h2} when h1 = 1, else 0 (crossingless canonical order)."""
    if beta is None:
        beta = MultiPoly.variable(("beta",), "beta")
    _, h = _meander_data(n)
    return [[beta**h2 if h1 == 1 else 0 * beta for h1, h2 in row] for row in h]


def meander_entry_matrix(n: int) -> list[list[MultiPoly]]:
    """M(y1, y2) with entries y1^{h1} y2^{h2}."""
    v = ("y1", "y2")
    _, h = _meander_data(n)
    return [[MultiPoly(v, {(h1, h2): 1}) for h1, h2 in row] for row in h]


def chebyshev_U(h: int) -> UniPoly:
    """Second-kind Chebyshev polynomial via U_{k+1} = y U_k - U_{k-1}."""
    y = UniPoly.gen(QQ)
    prev, cur = UniPoly.zero(QQ), UniPoly.one(QQ)
    for _ in range(h):
        prev, cur = cur, y * cur - prev
    return cur


def meander_formula(n: int) -> MultiPoly:
    """(y1 y2)^{c_n/2} * prod_h U_h(sqrt(y1 y2))^{c_{n,h} - c_{n,h+1}}, expanded."""
    if n < 1:
        raise GramError("meander_formula needs n >= 1")
    s = UniPoly.gen(QQ)
    f = s ** combinat.catalan(n)
    for h in range(1, n + 1):
        e = combinat.catalan_h(n, h) - combinat.catalan_h(n, h + 1)
        if e < 0:
            raise GramError("negative Chebyshev exponent")
        f = f * chebyshev_U(h) ** e
    terms = {}
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        if i % 2:
            raise ArithmeticError("odd power of sqrt(y1 y2) survived in the meander product")
        terms[(i // 2, i // 2)] = c
    return MultiPoly(("y1", "y2"), terms)


# ------------------------------------------------------------ graded dimension


def graded_dimension(n: int) -> list[int]:
    """Crossingless surfaces counted by degree 0, 2, ..., 2(n-1)."""
    from .surf import degree

    out = [0] * max(n, 1)
    for s in enumerate_crossingless(n):
        out[degree(s) // 2] += 1
    return out


# --------------------------------------------------------------- vectors


@dataclass
class SurfaceVector:
    terms: dict[DecoratedSurface, Any]

    def __post_init__(self) -> None:
        clean = {}
        for s, c in self.terms.items():
            if c != 0:
                clean[s] = clean.get(s, 0) + c
        ns = {s.n for s in clean}
        if len(ns) > 1:
            raise GramError("all surfaces in a vector must share the same boundary")
        self.terms = {s: c for s, c in clean.items() if c != 0}

    @property
    def n(self) -> int | None:
        return next(iter(self.terms)).n if self.terms else None

    @classmethod
    def from_literals(cls, items: Iterable[tuple[Any, str]]) -> SurfaceVector:
        acc: dict[DecoratedSurface, Any] = {}
        for c, lit in items:
            s = DecoratedSurface.parse(lit)
            acc[s] = acc.get(s, 0) + c
        return cls(acc)

    def __add__(self, other: SurfaceVector) -> SurfaceVector:
        acc = dict(self.terms)
        for s, c in other.terms.items():
            acc[s] = acc.get(s, 0) + c
        return SurfaceVector(acc)

    def scaled(self, c: Any) -> SurfaceVector:
        return SurfaceVector({s: c * v for s, v in self.terms.items()})


def symmetrize(s: DecoratedSurface) -> list[DecoratedSurface]:
    """Distinct images of s under permutations of the boundary circles (one per coset of the stabilizer)."""
    import itertools

    seen: dict[DecoratedSurface, None] = {}
    for perm in itertools.permutations(range(1, s.n + 1)):
        seen.setdefault(s.permuted(perm), None)
    return list(seen)


def vector_pairings(v: SurfaceVector, z: RationalSeries, against: Sequence[DecoratedSurface] | None = None) -> list[Any]:
    if not v.terms:
        return []
    n = v.n
    against = enumerate_spanning(n, z.K) if against is None else against
    ev = Evaluator(z)
    out = []
    for t in against:
        acc: Any = 0
        for s, c in v.terms.items():
            acc = acc + c * ev.product(glue(s, t).component_genera)
        out.append(acc)
    return out


def verify_negligible(v: SurfaceVector, z: RationalSeries, against: Sequence[DecoratedSurface] | None = None) -> bool:
    """True iff v pairs to zero with every surface of the genus < K spanning set."""
    return all(x == 0 for x in vector_pairings(v, z, against))


def kernel_vectors(surfaces: Sequence[DecoratedSurface], z: RationalSeries) -> list[SurfaceVector]:
    """Basis of the Gram kernel at concrete parameters, as surface vectors."""
    if z.params:
        raise GramError("kernel computation needs concrete parameters")
    m = gram_matrix(surfaces, z)
    return [SurfaceVector({s: c for s, c in zip(surfaces, vec) if c != 0}) for vec in nullspace(m, z.domain)]


# ---------------------------------------------------------------------- report


@dataclass
class GramReport:
    n: int
    series: RationalSeries
    spanning_set_id: str
    matrix_size: int
    rank: int | str = "not computed"
    determinant: Any = "not computed"
    factorization_verified: FactorizationCheck | None = None
    claim: list[tuple[str, int]] | None = None
    claim_sign: int = 1

    def to_dict(self) -> dict[str, Any]:
        det: Any
        if isinstance(self.determinant, str):
            det = self.determinant
        else:
            det = {"terms": str(self.determinant)}
        out: dict[str, Any] = {
            "schema": 1,
            "n": self.n,
            "series": self.series.to_dict(),
            "spanning_set": self.spanning_set_id,
            "size": self.matrix_size,
            "rank": self.rank,
            "det": det,
        }
        if self.factorization_verified is not None:
            fv = self.factorization_verified
            if fv.mode == "PIT" and isinstance(self.determinant, str):
                out["det"] = "PIT-verified" if fv.verified else "PIT-mismatch"
            out["factorization"] = {
                "claim": {"sign": self.claim_sign, "factors": [[f, e] for f, e in (self.claim or [])]},
                "verified": fv.verified,
                "mode": fv.mode,
                "probabilistic": fv.probabilistic,
                "points": fv.points,
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
