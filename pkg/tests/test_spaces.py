"""Nondegenerate spaces: invariants, Witt decomposition, sublagrangian
reduction, and the classification backing `isometric`."""
from fractions import Fraction

import pytest

from qchain.fields import F2, F3, F5, QQ
from qchain.forms import FormParam, QForm, all_params, restrict, tau
from qchain.linalg import identity, mul, transpose
from qchain.rng import SplitMix64, rand_invertible
from qchain.spaces import (
    DegenerateFormError,
    FormError,
    GWClass,
    QSpace,
    apply_iso,
    arf_invariant,
    democratic_arf,
    diagonalize_symmetric,
    gw0_class,
    h_mu,
    hyperbolic,
    hyperbolic_can,
    invariants,
    is_sublagrangian,
    isometric,
    isometry_invariants,
    isotropic_vector,
    legendre,
    negate,
    orthogonal_sum,
    rand_metabolic,
    rand_qspace,
    rational_square_class,
    squarefree_int,
    sublagrangian_reduce,
    symplectic_basis,
    witt_class,
    witt_decompose,
    zero_space,
)

QUAD = FormParam(1, "quadratic")
SYM = FormParam(1, "symmetric")


def qspace(param, field, rep):
    """Space with a literal representative (bypasses tau, which is the
    norm map 1 + sigma for the symmetric and even flavors)."""
    return QSpace(QForm(param, field, len(rep), rep))


def test_degenerate_rejected():
    with pytest.raises(DegenerateFormError):
        qspace(SYM, F3, [[0]])
    # quadratic [[1]] over F_2 polarizes to 0
    with pytest.raises(DegenerateFormError):
        QSpace(tau(QUAD, F2, [[1]]))


def test_hyperbolic_polars():
    h = hyperbolic(QUAD, F3, 1)
    assert h.polar == [[0, 1], [1, 0]]
    hc = hyperbolic_can(FormParam(-1, "quadratic"), F3, 1)
    assert hc.polar == [[0, 1], [2, 0]]
    assert hyperbolic(SYM, F5, 2).rank == 4


def test_h_mu_polar():
    mu = tau(QUAD, F3, [[1]])
    x = h_mu(mu)
    assert x.rank == 2
    assert x.polar == [[2, 1], [1, 0]]  # [[rho(mu), 1],[eps, 0]]
    # H^0 = H (the canonical variant; they agree when eps = 1)
    assert h_mu(QForm.zero(QUAD, F3, 1)) == hyperbolic(QUAD, F3, 1)
    skew = FormParam(-1, "symmetric")
    assert h_mu(QForm.zero(skew, F5, 1)) == hyperbolic_can(skew, F5, 1)
    assert h_mu(tau(skew, F5, [[0, 1], [0, 0]])).polar[2][0] == 4  # eps = -1


def test_invariants_fp():
    assert str(invariants(qspace(SYM, F3, [[1]]))) == "rank=1 disc=sq"
    assert invariants(qspace(SYM, F3, [[2]])).disc == -1
    assert invariants(qspace(QUAD, F3, [[1]])).disc == -1  # polar [[2]]
    assert invariants(qspace(SYM, F5, [[1, 0], [0, 2]])).disc == -1
    assert invariants(hyperbolic(SYM, F3, 1)).disc == -1  # det -1 = 2 nonsq
    assert invariants(hyperbolic(SYM, F5, 1)).disc == 1   # det -1 = 4 = 2^2


def test_invariants_f2():
    assert invariants(qspace(QUAD, F2, [[1, 1], [0, 1]])).arf == 1
    assert invariants(hyperbolic(QUAD, F2, 1)).arf == 0
    alt = invariants(qspace(SYM, F2, [[0, 1], [1, 0]]))
    assert alt.alternating is True
    assert invariants(qspace(SYM, F2, [[1]])).alternating is False


def test_invariants_rational():
    x = qspace(SYM, QQ, [[Fraction(1, 2), 0, 0],
                         [0, Fraction(-2), 0],
                         [0, 0, Fraction(3)]])
    inv = invariants(x)
    assert (inv.rank, inv.signature, inv.disc_q) == (3, 1, -3)
    skew = qspace(FormParam(-1, "symmetric"), QQ,
                  [[0, Fraction(1)], [Fraction(-1), 0]])
    inv2 = invariants(skew)
    assert (inv2.signature, inv2.disc_q) == (0, 1)


def test_legendre_and_square_classes():
    assert [legendre(F3, d) for d in (1, 2)] == [1, -1]
    assert [legendre(F5, d) for d in (1, 2, 3, 4)] == [1, -1, -1, 1]
    assert legendre(F2, 1) == 1
    assert squarefree_int(18) == 2
    assert squarefree_int(-12) == -3
    assert rational_square_class(Fraction(-9, 2)) == -2


def test_diagonalize_symmetric():
    rng = SplitMix64(7)
    for field in (F3, F5, QQ):
        for _ in range(20):
            n = rng.randint(1, 4)
            x = rand_qspace(rng, SYM, field, n)
            diag = diagonalize_symmetric(field, x.polar)
            rep = [[diag[i] if i == j else field.zero() for j in range(len(diag))]
                   for i in range(len(diag))]
            y = qspace(SYM, field, rep)
            if field.is_rational:
                assert invariants(y) == invariants(x)
            else:
                assert isometric(x, y)


def test_arf_examples():
    assert arf_invariant(qspace(QUAD, F2, [[1, 1], [0, 1]])) == 1
    assert arf_invariant(hyperbolic(QUAD, F2, 2)) == 0
    # arf counts the minority value; democratic oracle agrees on samples
    rng = SplitMix64(9)
    for _ in range(25):
        x = rand_qspace(rng, QUAD, F2, rng.randint(0, 3) * 2)
        assert arf_invariant(x) == democratic_arf(x)


def test_symplectic_basis_property():
    rng = SplitMix64(11)
    for field in (F2, F3, F5):
        for _ in range(10):
            x = rand_qspace(rng, FormParam(-1, "even"), field, 2 * rng.randint(1, 3))
            pairs = symplectic_basis(field, x.polar)
            assert 2 * len(pairs) == x.rank
            for i, (e, f) in enumerate(pairs):
                col = lambda v: [[c] for c in v]
                pair_val = mul(field, transpose(col(e), 1),
                               mul(field, x.polar, col(f), 1), 1)
                assert pair_val == [[field.one()]]
                for j, (e2, f2) in enumerate(pairs):
                    if j <= i:
                        continue
                    for u in (e, f):
                        for v in (e2, f2):
                            z = mul(field, transpose(col(u), 1),
                                    mul(field, x.polar, col(v), 1), 1)
                            assert z == [[field.zero()]]


def test_isotropic_vector_contract():
    assert isotropic_vector(qspace(SYM, F3, [[1]])) is None
    v = isotropic_vector(hyperbolic(QUAD, F3, 1))
    assert v is not None and any(c != 0 for c in v)
    col = [[c] for c in v]
    h = hyperbolic(QUAD, F3, 1)
    assert restrict(col, h.form, 1) == QForm.zero(QUAD, F3, 1)
    # rank >= 3 over F_p always has one
    rng = SplitMix64(13)
    for field in (F3, F5):
        for _ in range(10):
            x = rand_qspace(rng, SYM, field, 3)
            assert isotropic_vector(x) is not None
    with pytest.raises(FormError):
        isotropic_vector(qspace(SYM, QQ, [[Fraction(1)]]))


def test_witt_decompose_contract():
    k, kernel = witt_decompose(hyperbolic(QUAD, F3, 2))
    assert (k, kernel.rank) == (2, 0)
    k, kernel = witt_decompose(qspace(SYM, F3, [[1]]))
    assert (k, kernel.rank) == (0, 1)
    rng = SplitMix64(15)
    for param in all_params():
        for field in (F2, F3, F5):
            for _ in range(10):
                x = rand_qspace(rng, param, field, rng.randint(0, 4))
                k, kernel = witt_decompose(x)
                assert 2 * k + kernel.rank == x.rank
                assert kernel.rank <= 2  # anisotropic over F_p
                assert isotropic_vector(kernel) is None


def test_sublagrangian_reduce():
    h = hyperbolic(QUAD, F3, 1)
    lag = [[1], [0]]
    assert is_sublagrangian(h, lag)
    assert sublagrangian_reduce(h, lag).rank == 0
    with pytest.raises(FormError):
        sublagrangian_reduce(qspace(SYM, F3, [[1]]), [[1]])
    # Witt class is invariant under reduction by any sublagrangian
    rng = SplitMix64(17)
    for param in all_params():
        for field in (F2, F3, F5):
            for _ in range(10):
                x, lag = rand_metabolic(rng, param, field, rng.randint(1, 2))
                # reduce by the first column only: a proper sublagrangian
                first = [[row[0]] for row in lag]
                y = sublagrangian_reduce(x, first)
                assert witt_class(y) == witt_class(x)
                assert witt_class(x).is_zero


def test_isometric_and_transport():
    rng = SplitMix64(19)
    for param in all_params():
        for field in (F2, F3, F5):
            for _ in range(15):
                x = rand_qspace(rng, param, field, rng.randint(0, 3))
                g = rand_invertible(rng, field, x.rank)
                assert isometric(x, apply_iso(g, x))
    assert not isometric(qspace(SYM, F3, [[1]]), qspace(SYM, F3, [[2]]))
    with pytest.raises(FormError):
        isometric(qspace(SYM, F3, [[1]]), qspace(SYM, F5, [[1]]))
    with pytest.raises(FormError):
        isometry_invariants(qspace(SYM, QQ, [[Fraction(1)]]))


def test_gwclass_group_laws():
    for field in (F2, F3, QQ):
        for param in all_params():
            e = GWClass.identity(field, param)
            rng = SplitMix64(21)
            for _ in range(10):
                x = gw0_class(rand_qspace(rng, param, field, rng.randint(0, 3)))
                assert x.add(e) == x
                assert x.add(x.neg()) == e
                y = gw0_class(rand_qspace(rng, param, field, rng.randint(0, 3)))
                assert x.add(y) == y.add(x)


def test_gw0_additive_on_sums():
    rng = SplitMix64(23)
    for param in all_params():
        for field in (F3, QQ):
            for _ in range(10):
                a = rand_qspace(rng, param, field, rng.randint(0, 3))
                b = rand_qspace(rng, param, field, rng.randint(0, 3))
                assert gw0_class(orthogonal_sum(a, b)) == gw0_class(a).add(gw0_class(b))
                assert gw0_class(negate(a)).rank == a.rank


def test_witt_class_contract():
    assert witt_class(hyperbolic(SYM, F5, 3)).is_zero
    assert not witt_class(qspace(SYM, F3, [[1]])).is_zero
    with pytest.raises(FormError):
        witt_class(qspace(SYM, QQ, [[Fraction(1)]]))
    assert witt_class(zero_space(SYM, F3)).is_zero


def test_rand_streams_deterministic():
    a = rand_qspace(SplitMix64(99), QUAD, F5, 3)
    b = rand_qspace(SplitMix64(99), QUAD, F5, 3)
    assert a == b
    x1, l1 = rand_metabolic(SplitMix64(42), SYM, F3, 2)
    x2, l2 = rand_metabolic(SplitMix64(42), SYM, F3, 2)
    assert x1 == x2 and l1 == l2
    assert is_sublagrangian(x1, l1)


def test_identity_on_spaces():
    x = qspace(SYM, F3, [[1]])
    assert apply_iso(identity(F3, 1), x) == x
