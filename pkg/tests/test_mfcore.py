import json
from itertools import permutations, product

import pytest

from mfkit.exactalg import PolyMatrix, Ring, parse_poly
from mfkit.mfcore import (InvalidFactorization, MatrixFactorization, MFError, direct_sum, dual, knorrer_double,
                          koszul_mf, mf_from_json, mf_to_json, read_mf, shift, stabilized_residue_field,
                          superpotential, trivial_mf, ts_tensor, validate, write_mf)

P = parse_poly


def one_var(name="x"):
    R = Ring((name,))
    return R, R.var(name)


def mf1(f, p, q):
    R = f.ring
    return MatrixFactorization(f, PolyMatrix(R, [[p]]), PolyMatrix(R, [[q]]))


def test_validate_examples():
    R, x = one_var()
    assert validate(trivial_mf(x ** 2))
    assert validate(mf1(x ** 2, x, x))
    assert not validate(mf1(x ** 3, x, x))


def test_koszul_examples():
    R, x = one_var()
    m = koszul_mf([x], [x])
    assert m.rank == 1 and m.f == x * x and validate(m)
    S = Ring(("u", "v"))
    u, v = S.var("u"), S.var("v")
    assert koszul_mf([u], [v]).f == u * v
    T = Ring(("x", "y"))
    X, Y = T.var("x"), T.var("y")
    k = koszul_mf([X, Y], [X, Y ** 2])
    assert k.rank == 2 and k.f == X ** 2 + Y ** 3 and validate(k)


def test_koszul_errors():
    R, x = one_var()
    with pytest.raises(MFError):
        koszul_mf([x], [x, x])
    with pytest.raises(MFError):
        koszul_mf([], [])


def test_koszul_rank_is_power_of_two():
    R = Ring(("a", "b", "c"))
    gens = list(R.gens())
    m = koszul_mf(gens, [g ** 2 for g in gens])
    assert m.rank == 4 and validate(m)


def test_stabilized_residue_field_examples():
    m = stabilized_residue_field(P("x^2"))
    assert m.rank == 1 and validate(m)
    assert {str(m.p[0, 0]), str(m.q[0, 0])} == {"x"}
    assert validate(stabilized_residue_field(P("x*y")))
    s = stabilized_residue_field(P("x^3 + y^3"))
    assert s.rank == 2 and validate(s)


def test_stabilized_residue_field_needs_vanishing_constant():
    with pytest.raises(MFError):
        stabilized_residue_field(P("x^2 + 1"))


def test_dual_examples():
    R, x = one_var()
    d = dual(mf1(x ** 2, x, x))
    assert d.f == -(x ** 2) and d.p[0, 0] == x and d.q[0, 0] == -x
    t = dual(trivial_mf(x ** 3))
    assert t.f == -(x ** 3) and validate(t)
    T = Ring(("x", "y"))
    X, Y = T.var("x"), T.var("y")
    k = dual(koszul_mf([X, Y], [X, Y ** 2]))
    assert validate(k) and superpotential(k) == -(X ** 2 + Y ** 3)


def test_dual_is_involutive_up_to_sign():
    m = stabilized_residue_field(P("x^3 + y^3"))
    dd = dual(dual(m))
    assert dd.f == m.f and validate(dd)
    assert dd.p == m.p and dd.q == m.q


def test_ts_examples():
    a = koszul_mf([P("x")], [P("x")])
    b = koszul_mf([P("y")], [P("y")])
    t = ts_tensor(a, b)
    assert t.rank == 2 and validate(t) and t.f == P("x^2 + y^2")
    assert ts_tensor(t, koszul_mf([P("z")], [P("z")])).rank == 4
    c3 = koszul_mf([P("x")], [P("x^2")])
    d3 = koszul_mf([P("y")], [P("y^2")])
    s = ts_tensor(c3, d3)
    assert validate(s) and s.f == P("x^3 + y^3")


def test_ts_with_zero_potential_unit():
    R0 = Ring(("z",))
    unit = trivial_mf(R0.zero())
    m = koszul_mf([P("x")], [P("x^2")])
    t = ts_tensor(m, unit)
    # the graded tensor of ranks r and s has rank 2rs: here m plus a second copy
    assert validate(t) and t.rank == 2 * m.rank and superpotential(t) == P("x^3").embed(t.ring)


def test_ts_requires_disjoint_names_or_rename():
    m = koszul_mf([P("x")], [P("x^2")])
    with pytest.raises(ValueError):
        ts_tensor(m, m)
    t = ts_tensor(m, m, {"x": "y"})
    assert validate(t) and t.f == P("x^3 + y^3")


def test_knorrer_examples():
    R, x = one_var()
    k = knorrer_double(mf1(x ** 2, x, x))
    assert k.rank == 2 and validate(k)
    names = k.ring.names
    assert k.f == P("x^2 + u*v", list(names))
    t = knorrer_double(trivial_mf(x ** 3))
    assert t.rank == 2 and validate(t)


def test_knorrer_doubles_rank():
    s = stabilized_residue_field(P("x^3 + y^3"))
    assert knorrer_double(s).rank == 2 * s.rank


def test_shift_and_sum():
    m = stabilized_residue_field(P("x^3 + y^3"))
    assert shift(shift(m)) == m
    assert validate(shift(m))
    assert validate(direct_sum(m, m))
    n = trivial_mf(m.f)
    assert direct_sum(m, n).rank == m.rank + n.rank


def test_direct_sum_needs_same_potential():
    with pytest.raises(MFError):
        direct_sum(trivial_mf(P("x^2")), trivial_mf(P("x^3")))


def test_json_round_trip(tmp_path):
    m = knorrer_double(stabilized_residue_field(P("x^3")))
    path = tmp_path / "m.json"
    write_mf(m, str(path))
    back = read_mf(str(path))
    assert back == m and back.degrees == m.degrees
    assert mf_from_json(json.loads(json.dumps(mf_to_json(m)))) == m


def test_reader_rejects_invalid_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"f": "x^3", "rank": 1, "vars": ["x"], "p": [["x"]], "q": [["x"]]}))
    with pytest.raises(InvalidFactorization) as e:
        read_mf(str(path))
    assert "factorization identity fails at (0,0)" in str(e.value)


def test_reader_rejects_bad_shape():
    with pytest.raises(MFError):
        mf_from_json({"f": "x^2", "rank": 2, "p": [["x"]], "q": [["x"]]})


# --- isomorphism up to signed permutations of the even and odd bases

def _signed_perms(r):
    for perm in permutations(range(r)):
        for signs in product((1, -1), repeat=r):
            yield perm, signs


def _perm_matrix(ring, perm, signs):
    r = len(perm)
    z, one = ring.zero(), ring.one()
    return PolyMatrix(ring, [[one * signs[i] if perm[i] == j else z for j in range(r)] for i in range(r)])


def signed_perm_isomorphic(m, n) -> bool:
    """Search for signed permutations A (even), B (odd) with A p_m = p_n B and B q_m = q_n A."""
    if m.rank != n.rank or m.f != n.f:
        return False
    R = m.ring
    mats = [_perm_matrix(R, perm, s) for perm, s in _signed_perms(m.rank)]
    for A in mats:
        target = n.q * A
        for B in mats:
            if B * m.q == target and A * m.p == n.p * B:
                return True
    return False


def test_ts_associative_up_to_signed_permutation():
    a = koszul_mf([P("x")], [P("x^2")])
    b = koszul_mf([P("y")], [P("y")])
    c = koszul_mf([P("z")], [P("z^3")])
    left = ts_tensor(ts_tensor(a, b), c)
    right = ts_tensor(a, ts_tensor(b, c))
    assert left.ring == right.ring
    assert validate(left) and validate(right)
    assert signed_perm_isomorphic(left, right)


def test_dual_reverses_ts_up_to_signed_permutation():
    a = koszul_mf([P("x")], [P("x^2")])
    b = stabilized_residue_field(P("y^2"))
    lhs = dual(ts_tensor(a, b))
    rhs = ts_tensor(dual(a), dual(b))
    assert superpotential(lhs) == superpotential(rhs)
    assert signed_perm_isomorphic(lhs, rhs)


def test_isomorphism_search_detects_difference():
    a = koszul_mf([P("x")], [P("x^2")])
    b = koszul_mf([P("x^2")], [P("x")])
    assert not signed_perm_isomorphic(a, b)


def test_superpotential_bookkeeping():
    m = stabilized_residue_field(P("x^3"))
    n = stabilized_residue_field(P("y^2"))
    assert superpotential(ts_tensor(m, n)) == P("x^3 + y^2")
    assert superpotential(dual(m)) == -P("x^3")
