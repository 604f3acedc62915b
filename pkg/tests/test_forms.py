"""The Mackey functor of forms: sigma/tau/rho, canonical representatives,
restriction functoriality, pushout gluing, and the axiom suite."""
import pytest

from qchain.fields import F2, F3, F5, QQ
from qchain.forms import (
    FormError,
    FormParam,
    QForm,
    all_params,
    canonicalize_eq,
    check_form_axioms,
    glue_pushout_form,
    orthogonal_sum_q,
    q_add,
    q_basis,
    q_coords,
    q_dim,
    q_from_coords,
    q_neg,
    restrict,
    rho,
    sigma,
    tau,
)
from qchain.linalg import identity, mul, transpose
from qchain.rng import SplitMix64, rand_mat

QUAD = FormParam(1, "quadratic")
SYM = FormParam(1, "symmetric")
FIELDS = (F2, F3, F5, QQ)


def test_param_validation():
    with pytest.raises(FormError):
        FormParam(2, "quadratic").validate()
    with pytest.raises(FormError):
        FormParam(1, "hermitian").validate()
    assert len(list(all_params())) == 6


def test_sigma_values():
    assert sigma(QUAD, F3, [[1, 2], [0, 1]]) == [[1, 0], [2, 1]]
    assert sigma(FormParam(-1, "quadratic"), F5, [[1]]) == [[4]]
    b = [[1, 2], [2, 5]]
    assert sigma(SYM, F3, b) == [[1, 2], [2, 2]]  # transpose, entries mod 3
    # involution
    rng = SplitMix64(1)
    for param in all_params():
        for field in FIELDS:
            m = rand_mat(rng, field, 3, 3)
            assert sigma(param, field, sigma(param, field, m)) == m


def test_tau_values():
    assert tau(QUAD, F3, [[1]]).rep == [[1]]
    assert tau(SYM, F3, [[1]]).rep == [[2]]
    # lower entry folds into the upper triangle
    assert tau(QUAD, F2, [[0, 0], [1, 0]]).rep == [[0, 1], [0, 0]]


def test_rho_values():
    assert rho(tau(QUAD, F3, [[1]])) == [[2]]
    assert rho(tau(QUAD, F2, [[0, 1], [0, 0]])) == [[0, 1], [1, 0]]
    assert rho(tau(FormParam(-1, "quadratic"), F5, [[0, 1], [0, 0]])) == [[0, 1], [4, 0]]


def test_rho_tau_is_one_plus_sigma():
    rng = SplitMix64(2)
    from qchain.linalg import add

    for param in all_params():
        for field in FIELDS:
            for _ in range(20):
                n = rng.randint(0, 4)
                b = rand_mat(rng, field, n, n)
                assert rho(tau(param, field, b)) == add(field, b, sigma(param, field, b))


def test_restrict_values():
    assert restrict([[2]], tau(QUAD, F5, [[1]])).rep == [[4]]
    q = tau(QUAD, F3, [[0, 1], [0, 0]])
    assert restrict(identity(F3, 2), q) == q
    assert restrict([[1], [0]], q).rep == [[0]]
    with pytest.raises(FormError):
        restrict([[1]], q)


def test_restrict_functorial():
    rng = SplitMix64(3)
    for param in all_params():
        for field in FIELDS:
            for _ in range(10):
                ny, nx, nw = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
                b = rand_mat(rng, field, ny, ny)
                q = tau(param, field, b)
                f = rand_mat(rng, field, ny, nx)
                g = rand_mat(rng, field, nx, nw)
                lhs = restrict(mul(field, f, g), q, nw)
                rhs = restrict(g, restrict(f, q, nx), nw)
                assert lhs == rhs


def test_canonicalize_eq():
    assert canonicalize_eq(tau(QUAD, F2, [[0, 1], [0, 0]]),
                           tau(QUAD, F2, [[0, 0], [1, 0]]))
    assert not canonicalize_eq(tau(QUAD, F3, [[1]]), tau(QUAD, F3, [[2]]))
    assert canonicalize_eq(QForm(SYM, F5, 2, [[1, 2], [2, 3]]),
                           QForm(SYM, F5, 2, [[1, 2], [2, 3]]))


def test_subgroup_membership_enforced():
    # symmetric flavor rejects a non-symmetric representative
    with pytest.raises(FormError):
        QForm(SYM, F3, 2, [[0, 1], [2, 0]])
    # even flavor with eps=-1 over F_3 is alternating matrices only
    with pytest.raises(FormError):
        QForm(FormParam(-1, "even"), F3, 1, [[1]])


def test_group_structure_and_coords():
    rng = SplitMix64(4)
    for param in all_params():
        for field in (F2, F3, QQ):
            for n in range(4):
                dim = q_dim(param, field, n)
                basis = q_basis(param, field, n)
                assert len(basis) == dim
                coords = [rand_mat(rng, field, 1, 1)[0][0] for _ in range(dim)]
                q = q_from_coords(param, field, n, coords)
                assert q_coords(q) == coords
                assert q_add(q, q_neg(q)) == QForm.zero(param, field, n)


def test_orthogonal_sum_block():
    a = tau(QUAD, F3, [[1]])
    b = tau(QUAD, F3, [[2]])
    assert orthogonal_sum_q(a, b).rep == [[1, 0], [0, 2]]
    with pytest.raises(FormError):
        orthogonal_sum_q(a, tau(QUAD, F5, [[1]]))


def test_glue_pushout_form_cases():
    # A = 0, D = B + C: boundary data with a cross pairing
    s = [[]]  # 1x0
    f = [[]]
    g = [[1], [0]]
    t = [[0], [1]]
    q_b = tau(QUAD, F3, [[1]])
    q_c = tau(QUAD, F3, [[1]])
    xi = glue_pushout_form(QUAD, F3, (0, 1, 1, 2), s, f, g, t, q_b, q_c, [[1]])
    assert xi.rep == [[1, 1], [0, 1]]
    # beta = 0 gives the orthogonal sum
    xi0 = glue_pushout_form(QUAD, F3, (0, 1, 1, 2), s, f, g, t, q_b, q_c, [[0]])
    assert xi0 == orthogonal_sum_q(q_b, q_c)
    # all-zero data glues to the zero form
    z = QForm.zero(QUAD, F3, 1)
    assert glue_pushout_form(QUAD, F3, (0, 1, 1, 2), s, f, g, t, z, z,
                             [[0]]) == QForm.zero(QUAD, F3, 2)


def test_glue_rejects_bad_squares():
    q1 = tau(QUAD, F3, [[1]])
    # non-surjective (g t)
    with pytest.raises(FormError):
        glue_pushout_form(QUAD, F3, (0, 1, 1, 2), [[]], [[]],
                          [[1], [0]], [[1], [0]], q1, q1, [[0]])
    # incompatible cross pairing: rho(qC) f != beta s forces a corner failure
    s2 = [[1]]
    f2 = [[1]]
    g2 = [[1]]
    t2 = [[1]]
    with pytest.raises(FormError):
        glue_pushout_form(QUAD, F3, (1, 1, 1, 1), s2, f2, g2, t2, q1, q1, [[1]])


def test_axiom_suite_quick():
    for param in all_params():
        for field in FIELDS:
            rep = check_form_axioms(param, field, trials=40, seed=1)
            assert rep.passed, (param, field.name, rep.failure)
            assert rep.checks == 3 * rep.trials
