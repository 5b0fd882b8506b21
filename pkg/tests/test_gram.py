from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cobalt import combinat
from cobalt.exactcore import MultiPoly, UniPoly, det_polynomial, det_rational
from cobalt.genfun import scale, series, specialize
from cobalt.gram import (
    GramError,
    SurfaceVector,
    chebyshev_U,
    generic_dim,
    gram_det,
    gram_matrix,
    graded_dimension,
    kernel_vectors,
    leading_term_report,
    linear_state_dim,
    meander_entry_matrix,
    meander_formula,
    meander_matrix,
    pairing,
    parse_claim,
    spanning_set,
    state_dim,
    symmetrize,
    vector_pairings,
    verify_factorization,
    verify_negligible,
)
from cobalt.surf import DecoratedSurface, enumerate_Am, enumerate_crossingless, enumerate_spanning, euler_characteristic

RANK_ONE = ("beta", "gamma")
LINEAR = ("beta0", "beta1")
QUADRATIC = ("beta0", "beta1", "beta2")


@pytest.fixture(scope="module")
def z_rank_one():
    return series("beta", "1-gamma*T", RANK_ONE)


@pytest.fixture(scope="module")
def z_linear():
    return series("beta0+beta1*T", "1", LINEAR)


@pytest.fixture(scope="module")
def z_quadratic():
    return series("beta0+beta1*T+beta2*T^2", "1", QUADRATIC)


# -------------------------------------------------------------- pairings


def test_pairing_examples(z_rank_one):
    b, g = MultiPoly.gens(RANK_ONE)
    y = DecoratedSurface.parse("{1,2,3}")
    assert pairing(y, y, z_rank_one) == b * g**2
    disks = DecoratedSurface.parse("{1}{2}{3}")
    assert pairing(disks, disks, z_rank_one) == b**3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gram_matrix_symmetric(n, z_rank_one):
    m = gram_matrix(enumerate_spanning(n, 2), z_rank_one)
    assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))


def test_spanning_set_specs(z_rank_one):
    assert len(spanning_set(3, "full", z_rank_one)) == 5
    assert len(spanning_set(3, "full:2")) == 22
    assert len(spanning_set(3, "Am:1")) == 14
    assert len(spanning_set(4, "crossingless")) == 14
    with pytest.raises(GramError):
        spanning_set(3, "full")
    with pytest.raises(GramError):
        spanning_set(3, "bogus")


# ----------------------------------------------------------- determinants


def test_rank_one_n3_determinant(z_rank_one):
    claim = parse_claim([("beta", 5), ("beta*gamma-1", 4), ("beta*gamma-2", 1)], RANK_ONE)
    check = verify_factorization(claim, 1, enumerate_spanning(3, 1), z_rank_one, mode="exact")
    assert check.verified and check.mode == "exact" and not check.probabilistic


def test_rank_one_n4_claim_and_perturbation(z_rank_one):
    good = [("beta", 15), ("gamma", 1), ("beta*gamma-1", 14), ("beta*gamma-2", 7), ("beta*gamma-3", 1)]
    bad = [("beta", 15), ("gamma", 1), ("beta*gamma-1", 13), ("beta*gamma-2", 7), ("beta*gamma-3", 1)]
    surfaces = enumerate_spanning(4, 1)
    assert verify_factorization(parse_claim(good, RANK_ONE), 1, surfaces, z_rank_one)
    assert not verify_factorization(parse_claim(bad, RANK_ONE), 1, surfaces, z_rank_one)
    # PIT route on the same claims
    assert verify_factorization(parse_claim(good, RANK_ONE), 1, surfaces, z_rank_one, mode="PIT")
    assert not verify_factorization(parse_claim(bad, RANK_ONE), 1, surfaces, z_rank_one, mode="PIT")


def test_double_pole_n2():
    z = series("beta", "1-2*gamma*T+gamma^2*T^2", RANK_ONE)
    b, g = MultiPoly.gens(RANK_ONE)
    assert gram_det(enumerate_spanning(2, 2), z) == -(b**10) * g**12


def test_linear_n2(z_linear):
    claim = parse_claim([("beta1-2", 1), ("beta1", 8)], LINEAR)
    assert verify_factorization(claim, 1, enumerate_Am(2, 1), z_linear, mode="exact")


def test_linear_n5_by_pit(z_linear):
    claim = parse_claim([("beta1-3", 20), ("beta1-2", 110), ("beta1", 440)], LINEAR)
    check = verify_factorization(claim, -1, enumerate_Am(5, 1), z_linear, mode="PIT", seed=7)
    assert check.verified and check.probabilistic and len(check.points) == 5


def test_symbolic_limit(z_rank_one):
    with pytest.raises(GramError):
        gram_det(enumerate_spanning(4, 1), z_rank_one, limit=10)


def test_det_constant_series():
    z = series("2", "1")
    d = gram_det(enumerate_spanning(2, 1), z)
    # the torus evaluates to alpha_1 = 0
    assert d == det_rational([[4, 2], [2, 0]]) == -4


# ---------------------------------------------------------------- scaling


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_scaling_is_an_isometry(n, z_rank_one):
    mu = Fraction(3, 2)
    w = scale(z_rank_one, mu**2)
    surfaces = enumerate_spanning(n, 1)
    G, H = gram_matrix(surfaces, z_rank_one), gram_matrix(surfaces, w)
    chi = [euler_characteristic(s) for s in surfaces]
    for i in range(len(surfaces)):
        for j in range(len(surfaces)):
            assert H[i][j] == G[i][j] * mu ** (-chi[i] - chi[j])
    dG, dH = det_polynomial(G), det_polynomial(H)
    assert dH == dG * mu ** (-2 * sum(chi))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_scaling_with_symbolic_mu(n):
    V = ("beta", "gamma", "mu")
    z = series("mu^2*beta", "1-gamma*T", V)
    mu = MultiPoly.variable(V, "mu")
    w = scale(z, mu**2)
    surfaces = enumerate_spanning(n, 1)
    chi = [euler_characteristic(s) for s in surfaces]
    G, H = gram_matrix(surfaces, z), gram_matrix(surfaces, w)
    for i in range(len(surfaces)):
        for j in range(len(surfaces)):
            # H_ij * mu^(chi_i + chi_j) = G_ij, kept polynomial by multiplying through
            e = chi[i] + chi[j]
            if e >= 0:
                assert H[i][j] * mu**e == G[i][j]
            else:
                assert H[i][j] == G[i][j] * mu ** (-e)
    pt = {"beta": Fraction(2, 3), "gamma": Fraction(-5, 7)}
    for m in (Fraction(1, 3), Fraction(5, 2)):
        zz = specialize(z, {**pt, "mu": m})
        ww = specialize(w, {**pt, "mu": m})
        assert state_dim(n, zz) == state_dim(n, ww)


# ------------------------------------------------------------ dimensions


@pytest.mark.parametrize("n", range(1, 7))
def test_constant_one_dimension_is_catalan(n):
    assert state_dim(n, series("1", "1")) == combinat.catalan(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_rank_one_generic_dimension_is_bell(n, z_rank_one):
    assert generic_dim(n, z_rank_one, points=5, seed=n) == combinat.bell(n)


def test_linear_state_dim_matches_gram(z_linear):
    for n in (1, 2, 3):
        for b0, s in [(1, 1), (Fraction(2, 3), 5), (1, 2), (0, 3)]:
            zz = specialize(z_linear, {"beta0": b0, "beta1": s})
            assert linear_state_dim(n, b0, s) == state_dim(n, zz, enumerate_Am(n, 1))


def test_state_dim_needs_concrete_params(z_rank_one):
    with pytest.raises(GramError):
        state_dim(2, z_rank_one)


# --------------------------------------------------------------- meanders


def test_meander_small():
    b = MultiPoly.variable(("beta",), "beta")
    assert meander_matrix(1) == [[b]]
    assert meander_matrix(2) == [[b**2, b], [b, 0 * b]]
    for n in range(1, 5):
        m = meander_matrix(n)
        assert m[0][0] == b**n


def test_chebyshev_and_catalan_triangle():
    assert chebyshev_U(2) == UniPoly([-1, 0, 1])
    assert chebyshev_U(3) == UniPoly([0, -2, 0, 1])
    assert combinat.catalan_h(4, 1) == 28


@pytest.mark.parametrize("n", range(1, 5))
def test_meander_formula_matches_determinant(n):
    assert det_polynomial(meander_entry_matrix(n)) == meander_formula(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_meander_matrix_matches_gram_of_constant_series(n):
    z = series("beta", "1", ("beta",))
    d1 = gram_det(enumerate_crossingless(n), z)
    d2 = det_polynomial(meander_matrix(n))
    assert d1 == d2
    assert not d2.is_zero()


def test_meander_formula_against_sympy_n2():
    y1, y2 = sympy.symbols("y1 y2")
    M = sympy.Matrix([[y1 * y2**2, y1 * y2], [y1 * y2, y1**2 * y2]])
    assert sympy.expand(M.det()) == sympy.expand(
        sum(c * y1**e[0] * y2**e[1] for e, c in meander_formula(2).terms.items())
    )


def test_graded_dimension():
    assert graded_dimension(1) == [1]
    assert graded_dimension(3) == [1, 3, 1]
    for n in range(1, 9):
        g = graded_dimension(n)
        assert sum(g) == combinat.catalan(n)
        assert g == [combinat.narayana(n, n - k) for k in range(n)]


# ------------------------------------------------------------- negligible


def _v(items):
    return SurfaceVector.from_literals(items)


def test_zero_vector_is_negligible(z_rank_one):
    assert verify_negligible(SurfaceVector({}), z_rank_one)


def test_eight_term_relation():
    z = series("beta", "1", ("beta",))
    b = MultiPoly.variable(("beta",), "beta")
    v = _v([
        (1, "{1,2}{3,4}"), (1, "{1,3}{2,4}"), (1, "{1,4}{2,3}"),
        (-1, "{1,2,3}{4}"), (-1, "{1,2,4}{3}"), (-1, "{1,3,4}{2}"), (-1, "{2,3,4}{1}"),
        (b, "{1,2,3,4}"),
    ])
    assert verify_negligible(v, z)
    # dropping a term breaks it
    assert not verify_negligible(_v([(1, "{1,2}{3,4}"), (b, "{1,2,3,4}")]), z)


def test_two_dotted_cups(z_linear):
    b0, b1 = MultiPoly.gens(LINEAR)
    v = _v([(1, "{1:g1}{2:g1}"), (-b1, "{1,2:g1}")])
    assert verify_negligible(v, z_linear)
    # both sides pair with the pair of disks to beta1^2
    assert vector_pairings(_v([(1, "{1:g1}{2:g1}")]), z_linear, [DecoratedSurface.parse("{1}{2}")]) == [b1**2]


def test_seven_term_relation(z_linear):
    b0, b1 = MultiPoly.gens(LINEAR)
    items = [(b1**3, "{1,2,3}"), (-b0, "{1:g1}{2:g1}{3:g1}")]
    for k in (1, 2, 3):
        i, j = [x for x in (1, 2, 3) if x != k]
        items.append((b1, str(DecoratedSurface(3, ((i,), (j,), (k,)), (1, 1, 0)))))
        items.append((-(b1**2), str(DecoratedSurface(3, ((i, j), (k,)), (0, 1)))))
    assert verify_negligible(_v(items), z_linear)


def _orbit(c, lit):
    return [(c, str(s)) for s in symmetrize(DecoratedSurface.parse(lit))]


def test_quadratic_relations(z_quadratic):
    b0, b1, b2 = MultiPoly.gens(QUADRATIC)
    assert verify_negligible(_v([(1, "{1:g3}")]), z_quadratic)
    assert verify_negligible(_v([(b2, "{1,2:g2}"), (-1, "{1:g2}{2:g2}")]), z_quadratic)
    rhs = _orbit(b2**2, "{1,2:g1}{3:g2}") + _orbit(-b2, "{1:g1}{2:g2}{3:g2}") + _orbit(b1, "{1:g2}{2:g2}{3:g2}")
    assert verify_negligible(_v([(b2**3, "{1,2,3:g1}")] + [(-c, l) for c, l in rhs]), z_quadratic)
    rhs = (
        _orbit(b2**4, "{1,2,3:g0}{4:g2}") + _orbit(b2**4, "{1,2:g1}{3,4:g1}")
        + _orbit(-(b2**3), "{1,2:g0}{3:g2}{4:g2}") + _orbit(-(b2**3), "{1,2:g1}{3:g1}{4:g2}")
        + _orbit(b1 * b2**2, "{1,2:g1}{3:g2}{4:g2}") + _orbit(b2**2, "{1:g0}{2:g2}{3:g2}{4:g2}")
        + _orbit(2 * b2**2, "{1:g1}{2:g1}{3:g2}{4:g2}") + _orbit(-3 * b1 * b2, "{1:g1}{2:g2}{3:g2}{4:g2}")
        + _orbit(3 * b1**2 - b0 * b2, "{1:g2}{2:g2}{3:g2}{4:g2}")
    )
    assert verify_negligible(_v([(b2**5, "{1,2,3,4:g0}")] + [(-c, l) for c, l in rhs]), z_quadratic)


def test_symmetrize_orbit_sizes():
    assert len(symmetrize(DecoratedSurface.parse("{1,2:g1}{3:g2}"))) == 3
    assert len(symmetrize(DecoratedSurface.parse("{1:g1}{2:g1}{3:g2}{4:g2}"))) == 6


@pytest.mark.parametrize("n", [3, 4])
def test_kernel_vectors_are_negligible(n):
    z = series("1", "1")
    surfaces = enumerate_spanning(n, 1)
    ker = kernel_vectors(surfaces, z)
    assert len(ker) == len(surfaces) - combinat.catalan(n)
    assert all(verify_negligible(v, z) for v in ker)


@given(st.fractions(-5, 5, max_denominator=4), st.integers(1, 4))
def test_kernel_vectors_linear_specializations(b0, s):
    z = series(f"{b0} + {s}*T", "1")
    surfaces = enumerate_Am(3, 1)
    for v in kernel_vectors(surfaces, z):
        assert verify_negligible(v, z, surfaces)


# ----------------------------------------------------------- leading term


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_leading_term(m, n, z_linear, z_quadratic):
    z = z_linear if m == 1 else z_quadratic
    det = gram_det(enumerate_Am(n, m), z)
    rep = leading_term_report(n, m, det, f"beta{m}")
    assert rep["holds"]
    assert rep["d"] == combinat.d_nm(n, m)
