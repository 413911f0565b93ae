"""Randomized invariants (hypothesis)."""
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from mfkit.clifford import CliffordAlgebra, QuadraticForm
from mfkit.exactalg import MultiPoly, Ring, exact_rank_kernel, rank, truncate
from mfkit.hochschild import BarWord, TwistedComplex, hkr_intertwines, milnor_number, thom_sebastiani_sum
from mfkit.mfcore import dual, koszul_mf, mf_from_json, mf_to_json, shift, superpotential, ts_tensor, validate
from oracles import naive_rank

R2 = Ring(("x", "y"))
FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, ring=R2, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = tuple(draw(st.integers(0, max_deg)) for _ in range(ring.n))
        terms[m] = draw(coeffs)
    return MultiPoly(ring, terms)


@FAST
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a
    assert a - a == R2.zero()


@FAST
@given(polys(), polys(), st.integers(0, 1))
def test_leibniz(f, g, i):
    assert (f * g).diff(i) == f.diff(i) * g + f * g.diff(i)


@FAST
@given(polys(max_deg=5), st.integers(0, 8), st.integers(0, 8))
def test_truncate_idempotent_and_monotone(f, d1, d2):
    lo, hi = min(d1, d2), max(d1, d2)
    t = truncate(f, lo)
    assert truncate(t, lo) == t
    assert truncate(truncate(f, hi), lo) == t
    assert set(t.terms) <= set(truncate(f, hi).terms)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_transpose_and_naive(m):
    mt = [list(col) for col in zip(*m)]
    r, ker = exact_rank_kernel(m)
    assert r == rank(mt) == naive_rank(m)
    assert r + len(ker) == len(m[0])
    for v in ker:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)


@st.composite
def koszul_data(draw):
    n = draw(st.integers(1, 2))
    a = [draw(polys(max_deg=2, max_terms=2)) for _ in range(n)]
    b = [draw(polys(max_deg=2, max_terms=2)) for _ in range(n)]
    return a, b


@FAST
@given(koszul_data())
def test_constructors_produce_valid_factorizations(data):
    a, b = data
    m = koszul_mf(a, b)
    assert validate(m)
    assert validate(dual(m)) and superpotential(dual(m)) == -m.f
    assert validate(shift(m)) and shift(shift(m)) == m
    assert mf_from_json(mf_to_json(m)) == m


@FAST
@given(polys(Ring(("x",)), max_deg=3, max_terms=2), polys(Ring(("y",)), max_deg=3, max_terms=2))
def test_ts_tensor_valid_and_additive(f1, f2):
    m = koszul_mf([Ring(("x",)).var("x")], [f1])
    n = koszul_mf([Ring(("y",)).var("y")], [f2])
    t = ts_tensor(m, n)
    assert validate(t)
    assert superpotential(t) == m.f.embed(t.ring) + n.f.embed(t.ring)
    assert t.rank == 2 * m.rank * n.rank


@st.composite
def quadratic_forms(draw):
    n = draw(st.integers(1, 3))
    Q = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            Q[i][j] = Q[j][i] = draw(st.integers(-3, 3))
    return QuadraticForm.from_gram(Q)


@settings(max_examples=20, deadline=None)
@given(quadratic_forms())
def test_clifford_associative_and_relations(Q):
    A = CliffordAlgebra(Q)
    assert A.is_associative()
    for i in range(Q.n):
        for j in range(Q.n):
            s = A.mul(A.gen(i), A.gen(j))
            t = A.mul(A.gen(j), A.gen(i))
            tot = {k: s.get(k, 0) + t.get(k, 0) for k in set(s) | set(t)}
            want = {((), 1): -2 * Q.Q[i][j]} if Q.Q[i][j] else {}
            assert {k: v for k, v in tot.items() if v} == want


monomial_polys = st.builds(lambda a, b: R2.monomial((a, b)), st.integers(0, 2), st.integers(0, 2))


@FAST
@given(st.lists(monomial_polys, min_size=1, max_size=3), polys(max_deg=3, max_terms=3))
def test_hkr_intertwines_random_words(word, f):
    assert hkr_intertwines(BarWord(tuple(word)), f)


@settings(max_examples=15, deadline=None)
@given(polys(max_deg=4, max_terms=3))
def test_twisted_differentials_square_to_zero(f):
    assume(not f.is_constant())
    T = TwistedComplex(f, "mixed", K=2, graded=False)
    assert all(T.check_identities(3).values())


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5))
def test_milnor_thom_sebastiani(a, b):
    f = Ring(("x",)).var("x") ** a
    g = Ring(("y",)).var("y") ** b
    assert milnor_number(thom_sebastiani_sum(f, g)).value == (a - 1) * (b - 1)
