from fractions import Fraction

import pytest

from mfkit.exactalg import Ring, parse_poly
from mfkit.hochschild import (BarWord, HochschildError, JacobianError, JacobianRing, TwistedComplex, apply_B,
                              cyclic_bar_B, expand, global_jacobian_dim, hc_tate, hh_beta, hh_cochain_tate,
                              hh_tate, hkr_intertwine_check, hkr_intertwines, hkr_map, milnor_number,
                              socle_pairing, thom_sebastiani_sum)
from mfkit.hochschild import forms as F
from oracles import cyclic_cohomology, jacobian_dim, koszul_df_cohomology, naive_rank

P = parse_poly


# --- Milnor numbers

@pytest.mark.parametrize("src,mu", [("x^2", 1), ("x^4", 3), ("x^3+y^3", 4), ("x^2*y+y^4", 5)])
def test_milnor_examples(src, mu):
    f = P(src)
    r = milnor_number(f)
    assert r.stabilized and r.value == mu == jacobian_dim(f, K=7, D=10)


def test_milnor_non_isolated_is_flagged():
    r = milnor_number(P("x^2*y"), 10)
    assert not r.stabilized and not r.isolated
    doc = r.to_json()
    assert doc["milnor"] is None and doc["status"] == "not isolated at this bound"


def test_milnor_is_local():
    # x^2 + x^3 has critical points 0 and -2/3; only the origin counts locally
    f = P("x^2 + x^3")
    assert milnor_number(f).value == 1
    assert global_jacobian_dim(f).value == 2


def test_global_jacobian_dim_examples():
    f = P("x^3 - 3*x")
    r = global_jacobian_dim(f)
    assert r.stabilized and r.value == 2 == jacobian_dim(f)
    assert global_jacobian_dim(P("x^2")).value == 1


def test_global_jacobian_dim_multiplicative():
    f, g = P("x^3 - 3*x"), P("y^3 - y")
    h = thom_sebastiani_sum(f, g)
    assert global_jacobian_dim(h).value == global_jacobian_dim(f).value * global_jacobian_dim(g).value == 4


def test_thom_sebastiani_sum_renames_clashes():
    h = thom_sebastiani_sum(P("x^3"), P("x^2"))
    assert h.ring.n == 2
    assert milnor_number(h).value == 2


def test_milnor_rejects_constant():
    with pytest.raises(ValueError):
        milnor_number(Ring(("x",)).const(3))


# --- twisted complexes

FAMILY = ["x^2", "x^3", "x^4", "x^3+y^3", "x^2*y+y^4"]


@pytest.mark.parametrize("src,expected", [("x^3", (0, 2)), ("x^2+y^2", (1, 0)), ("x^3+y^3", (4, 0))])
def test_hh_tate_examples(src, expected):
    r = hh_tate(P(src))
    assert r.stabilized and r.dims == expected


@pytest.mark.parametrize("src", ["x^3", "x^2+y^2", "x^3+y^3", "x^3-3*x"])
def test_hh_tate_against_koszul_oracle(src):
    f = P(src)
    assert hh_tate(f).dims == koszul_df_cohomology(f, K=5, D=9)


@pytest.mark.parametrize("src,expected", [("x^3", (2, 0)), ("x^2+y^2", (1, 0))])
def test_hh_cochain_examples(src, expected):
    r = hh_cochain_tate(P(src))
    assert r.stabilized and r.dims == expected


@pytest.mark.parametrize("src", FAMILY)
def test_cochain_is_parity_shift_of_chains(src):
    f = P(src)
    n = f.ring.n
    a, b = hh_tate(f).dims, hh_cochain_tate(f).dims
    assert b == (a if n % 2 == 0 else a[::-1])
    mu = milnor_number(f).value
    assert sum(a) == sum(b) == mu and b == (mu, 0)


def test_hh_non_isolated_unstabilized():
    assert not hh_tate(P("x^2*y"), 10).stabilized


def test_hc_k1_equals_hh():
    for src in ["x^2", "x^3+y^3", "x^3-3*x"]:
        f = P(src)
        assert hc_tate(f, 1).dims == hh_tate(f).dims


@pytest.mark.parametrize("src,K", [("x^2", 2), ("x^3", 2), ("x^4", 3)])
def test_hc_against_oracle(src, K):
    f = P(src)
    r = hc_tate(f, K)
    assert r.stabilized and r.dims == cyclic_cohomology(f, K)


def test_hc_rejects_bad_truncation():
    with pytest.raises(HochschildError):
        hc_tate(P("x^2"), 0)


@pytest.mark.parametrize("src", ["x^3", "x^3+y^3", "x^2*y+y^4", "x^3-3*x"])
def test_twisted_identities(src):
    T = TwistedComplex(P(src), "mixed", K=2)
    assert all(T.check_identities(5).values())


def test_twisted_complex_rejects_unknown_kind():
    with pytest.raises(HochschildError):
        TwistedComplex(P("x^2"), "bogus")


# --- beta-level Hochschild homology with support

def test_hh_beta_point():
    R = Ring(())
    r = hh_beta(R.zero())
    assert r.module is not None and r.module.free_rank == (1, 0)


@pytest.mark.parametrize("src", ["x^2", "x^3", "x^3+y^3"])
def test_hh_beta_free_rank_matches_tate(src):
    f = P(src)
    r = hh_beta(f)
    assert r.free_rank_stable
    assert r.module.free_rank == hh_tate(f).dims


def test_hh_beta_requires_grading():
    with pytest.raises(HochschildError):
        hh_beta(P("x^3 - 3*x"))


# --- forms

def test_form_operations():
    R = Ring(("x", "y"))
    x, y = R.var("x"), R.var("y")
    w = F.wedge(F.exact(x), F.exact(y))
    assert F.forms_equal(F.wedge(F.exact(y), F.exact(x)), F.scale(w, -1))
    assert F.forms_equal(F.de_rham(F.de_rham(F.function_form(x * x * y))), {})
    f = x ** 3 + y ** 3
    once = F.df_wedge(f, F.function_form(x))
    assert F.forms_equal(F.df_wedge(f, once), {})


# --- cyclic bar operator and HKR

def test_B_on_single_factor():
    R = Ring(("a", "f"))
    a, f = R.var("a"), R.var("f")
    assert cyclic_bar_B(BarWord((a,)), f) == [(-1, BarWord((a, f)))]


def test_B_on_two_factors():
    R = Ring(("a", "b", "f"))
    a, b, f = R.var("a"), R.var("b"), R.var("f")
    assert cyclic_bar_B(BarWord((a, b)), f) == [(-1, BarWord((a, f, b))), (1, BarWord((a, b, f)))]


def test_B_squared_vanishes_after_expansion():
    R = Ring(("x", "y"))
    x, y = R.var("x"), R.var("y")
    f = x * x + y ** 3
    for w in [BarWord((x,)), BarWord((x, y)), BarWord((x + y, y * y, x))]:
        assert expand(apply_B(apply_B({w: Fraction(1)}, f), f)) == {}


def test_hkr_single_factor_example():
    R = Ring(("x",))
    x = R.var("x")
    f = x * x
    assert hkr_intertwines(BarWord((x,)), f)
    lhs = hkr_map(BarWord((x, f)))
    # HKR(x (x) f) = x d(x^2) = 2x^2 dx
    assert F.forms_equal(lhs, {(0,): 2 * x * x})


def test_hkr_constant_factor_gives_zero():
    R = Ring(("x",))
    x = R.var("x")
    w = BarWord((x, R.const(3)))
    assert F.forms_equal(hkr_map(w), {})
    assert hkr_intertwines(w, x ** 3)


@pytest.mark.parametrize("src", ["x^2", "x^3+y^3", "x*y", "x^2*y+y^4"])
def test_hkr_exhaustive(src):
    assert hkr_intertwine_check(P(src), 3, 3)


def test_hkr_wrong_sign_fails():
    assert not hkr_intertwine_check(P("x^2"), 2, 1, sign=1)


def test_barword_validation():
    with pytest.raises(ValueError):
        BarWord(())


# --- Jacobian ring and socle pairing

def test_jacobian_ring_basis_x3():
    J = JacobianRing(P("x^3"))
    assert J.stabilized and J.basis == [(0,), (1,)]
    assert J.multiply((1,), (1,)) == {}


def test_jacobian_ring_closed_under_products():
    J = JacobianRing(P("x^3+y^3"))
    B = set(J.basis)
    assert (0, 0) in B and J.dim == 4
    for prod in J.multiplication_table().values():
        assert set(prod) <= B


def test_socle_pairing_examples():
    sp = socle_pairing(P("x^2"))
    assert sp.basis == [(0,)] and sp.matrix == [[1]] and sp.nondegenerate
    sp = socle_pairing(P("x^3"))
    assert sp.matrix == [[0, 1], [1, 0]]
    sp = socle_pairing(P("x^3+y^3"))
    assert len(sp.matrix) == 4 and naive_rank(sp.matrix) == 4


def test_socle_pairing_rejects_non_quasi_homogeneous():
    with pytest.raises(JacobianError):
        socle_pairing(P("x^3 - 3*x"))


def test_socle_pairing_rejects_non_isolated():
    with pytest.raises(JacobianError):
        socle_pairing(P("x^2*y"))
