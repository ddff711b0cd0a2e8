from fractions import Fraction

import pytest

from koszul.constructors import (
    DeterminantDatum,
    FourTermError,
    build_gl_class,
    build_voisin_class,
    check_four_term,
    check_ks_conditions,
    datum_from_ks,
    datum_from_split,
    has_generalized_zero,
    ks_alpha,
    ks_matrix_from_class,
    mu_cokernel,
    plucker_check,
    pullback,
    split_detect,
    split_rational,
    voisin_subspace,
)
from koszul.core import PreconditionError, is_nonzero_class
from koszul.models import CurveModel, free_mult, mult_table
from koszul.multilinear import KoszulClass, Pairing, SkewMap, apply_differential

H = Fraction(1, 2)
Q_GRAM = [[0, 0, 0, H, 0], [0, 0, 0, 0, -H], [0, 0, 1, 0, 0], [H, 0, 0, 0, 0], [0, -H, 0, 0, 0]]
Q_CLASS = KoszulClass(1, 5, {((0,), 3): 1, ((1,), 4): -1, ((2,), 2): 1})
E = lambda i, n=4: [Fraction(int(i == j)) for j in range(n)]


@pytest.fixture(scope="module")
def conic_datum():
    return datum_from_split(split_rational(1, 1))


def test_split_datum_values(conic_datum):
    d = conic_datum.d
    assert d.evaluate(E(0), E(3)) == [0, 1, 0]  # (x,0)^(0,y) = xy
    assert not any(d.evaluate(E(0), E(1)))
    assert not any(d.evaluate(E(2), E(2)))


def test_four_term(conic_datum):
    assert check_four_term(conic_datum)
    broken = SkewMap(4, 3, {(0, 1): (1, 0, 0), (2, 3): (0, 0, 1)})
    m = mult_table(CurveModel.rational(2))
    assert not check_four_term(DeterminantDatum(broken, m, strict=False))
    with pytest.raises(FourTermError):
        DeterminantDatum(broken, m)


def test_conic_voisin_class(conic_datum):
    t = [1, 0, 0, 1]  # (x, y)
    U = [E(1), E(2), E(3)]  # (y,0), (0,x), (0,y)
    assert voisin_subspace(conic_datum, t, U) == [[0, 0, -1], [1, 0, 0], [0, 1, 0]]
    c = build_voisin_class(conic_datum, t, U, 1)
    assert c == KoszulClass(1, 3, {((0,), 2): 1, ((1,), 1): -1})
    assert is_nonzero_class(conic_datum.mult, c)
    assert split_detect(conic_datum, t, U) is None


def test_voisin_preconditions(conic_datum):
    with pytest.raises(PreconditionError):
        build_voisin_class(conic_datum, E(0), [E(1), E(2), E(3)], 1)  # e1 is in ker d_t
    with pytest.raises(PreconditionError):
        build_voisin_class(conic_datum, [1, 0, 0, 1], [E(1), E(2)], 1)


def test_split_with_t_in_summand():
    s = split_rational(1, 2)
    D = datum_from_split(s)
    t = E(0, 5)
    # splitting-compatible lift of W, shifted by multiples of t
    U = [[Fraction(k + 1) if i == 0 else Fraction(int(i == j)) for i in range(5)] for k, j in enumerate((2, 3, 4))]
    c = build_voisin_class(D, t, U, 1)
    assert not c.is_zero()
    assert not is_nonzero_class(D.mult, c)
    assert split_detect(D, t, U) is not None


def test_split_detect_trivial_h():
    D = datum_from_split(split_rational(1, 2))
    U = [E(j, 5) for j in (2, 3, 4)]
    assert split_detect(D, E(0, 5), U) == [0, 0, 0]


@pytest.mark.parametrize("d1,d2", [(1, 1), (1, 2), (2, 2)])
def test_gl_nonzero(d1, d2):
    g = build_gl_class(split_rational(d1, d2))
    assert g.p == d1 + d2 - 1
    assert is_nonzero_class(split_rational(d1, d2).mult, g.cls)


def test_gl_base_divisor_rejected():
    with pytest.raises(PreconditionError, match="base divisor"):
        build_gl_class(split_rational(2, 1), [1, 0, 0], [1, 0])  # x^2 and x share x


def test_ks_on_q():
    m = mult_table(CurveModel.quadric_presented(5, [Q_GRAM]))
    A = ks_matrix_from_class(Q_CLASS)
    assert A.A.h == 4
    assert ks_alpha(A, m) == apply_differential(Q_CLASS, m)
    rep = check_ks_conditions(A, m)
    assert (rep.independent_first_row, rep.nonzero_pfaffian, rep.pfaffians_vanish_on_X) == (True, True, True)
    assert plucker_check(A, m).on_grassmannian
    back = build_voisin_class(datum_from_ks(A, m), E(0), [E(i) for i in (1, 2, 3)], 1)
    assert back == Q_CLASS


def test_ks_on_conic():
    m = mult_table(CurveModel.rational(2))
    c = KoszulClass(1, 3, {((0,), 2): 1, ((1,), 1): -1})
    with pytest.raises(PreconditionError):
        ks_matrix_from_class(c)  # support has dimension p+1
    A = ks_matrix_from_class(c, [[0, 0, -1], [1, 0, 0], [0, 1, 0]])
    assert ks_alpha(A, m) == {}
    rep = check_ks_conditions(A, m)
    assert rep.independent_first_row and rep.pfaffians_vanish_on_X
    # (ii) is read in the free quadric space, where the Pfaffian is nonzero
    assert rep.nonzero_pfaffian


def test_ks_dependent_first_row():
    m = free_mult(2)
    a = SkewMap(4, 2, {(0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (0, 1)})
    assert not check_ks_conditions(ks_from(a), m).independent_first_row


def ks_from(a):
    from koszul.constructors import KSMatrix

    return KSMatrix(a, 1)


def test_ks_zero_lower_block():
    a = SkewMap(4, 3, {(0, 1): (1, 0, 0), (0, 2): (0, 1, 0), (0, 3): (0, 0, 1)})
    assert ks_alpha(ks_from(a), free_mult(3)) == {}


def test_ks_identity_free_random():
    import random

    rng = random.Random(7)
    for p, n in ((1, 4), (2, 5), (3, 6)):
        mult = free_mult(n)
        from koszul.multilinear import wedge_basis

        coeffs = {(I, s): rng.randint(-2, 2) for I in wedge_basis(p + 2, p) for s in range(n)}
        c = KoszulClass(p, n, coeffs)
        W = [E(i, n) for i in range(p + 2)]
        A = ks_matrix_from_class(c, W)
        assert ks_alpha(A, mult) == apply_differential(c, mult)


def test_plucker_numeric():
    assert plucker_check([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]).to_dict() == {
        "on_grassmannian": False,
        "on_linear_space": False,
    }
    u, v = [1, 2, 0, 1], [0, 1, 1, 3]
    z = [[u[i] * v[j] - u[j] * v[i] for j in range(4)] for i in range(4)]
    assert plucker_check(z).on_grassmannian
    with pytest.raises(ValueError):
        plucker_check([[0, 1], [1, 0]])


def test_mu_cokernel():
    assert mu_cokernel(Pairing(2, 1, 2, {(0, 0): (1, 0), (1, 0): (0, 1)})) == 0
    assert mu_cokernel(Pairing(2, 2, 5, {})) == 5


def test_generalized_zero_split_and_declared():
    D = datum_from_split(split_rational(2, 1))
    res = has_generalized_zero(D)
    u, v = res.witness
    assert not any(D.d.evaluate(u, v))
    declared = SkewMap(3, 1, {(0, 2): (1,), (1, 2): (1,)})
    res = has_generalized_zero(DeterminantDatum(declared, free_mult(1), strict=False))
    assert res.witness == ([1, 0, 0], [0, 1, 0])


def test_generalized_zero_enumeration_finds_non_basis_witness():
    D = datum_from_split(split_rational(1, 2))
    import random

    rng = random.Random(11)
    while True:
        # mix coordinates until no basis pair is isotropic
        M = [[rng.randint(-1, 1) for _ in range(5)] for _ in range(5)]
        P = pullback(D, M)
        if all(any(P.d.entry(a, b)) for a in range(5) for b in range(a + 1, 5)):
            break
    res = has_generalized_zero(P)
    assert res.certificate["stage"] == "enumeration"
    u, v = res.witness
    assert not any(P.d.evaluate(u, v))


def test_elms_no_generalized_zero():
    m = mult_table(CurveModel.quadric_presented(5, [Q_GRAM]))
    res = has_generalized_zero(datum_from_ks(ks_matrix_from_class(Q_CLASS), m), primes=[5, 7])
    assert res.witness is None
    assert [f["points"] for f in res.certificate["fields"]] == [156, 400]


def test_env_primes(monkeypatch):
    from koszul.constructors import _primes_for

    monkeypatch.setenv("KOSZUL_GENZERO_PRIMES", "3, 13")
    assert _primes_for(4) == (3, 13)
    monkeypatch.delenv("KOSZUL_GENZERO_PRIMES")
    assert _primes_for(4) == (5, 7, 11) and _primes_for(8) == (5,) and _primes_for(9) == ()
