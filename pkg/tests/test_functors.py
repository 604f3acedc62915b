"""Hyperbolic category round-trips, morphism-category forms, and S2
objects."""
import pytest

from qchain.fields import F2, F3, F5, QQ
from qchain.forms import FormParam, QForm, all_params, rho, tau
from qchain.functors import (
    FunctorError,
    HPair,
    MorForm,
    S2Object,
    forget,
    hyper,
    mor_to_hyp,
    mor_transport,
    s2_class,
)
from qchain.linalg import identity
from qchain.rng import SplitMix64, rand_invertible
from qchain.spaces import (
    DegenerateFormError,
    gw0_class,
    hyperbolic,
    hyperbolic_can,
    isometric,
    rand_metabolic,
    rand_qspace,
)

QUAD = FormParam(1, "quadratic")
SYM = FormParam(1, "symmetric")


def test_hpair_validation():
    HPair(F3, 2, 1, [[1, 0]])
    HPair(F3, 2, 0, [])
    with pytest.raises(FunctorError):
        HPair(F3, 2, 1, [[1]])


def test_hyper_of_identity_is_hyperbolic_can():
    for param in all_params():
        for field in (F2, F3, QQ):
            got = hyper(param, HPair(field, 1, 1, identity(field, 1)))
            assert got == hyperbolic_can(param, field, 1)


def test_hyper_needs_invertible_form():
    with pytest.raises(DegenerateFormError):
        hyper(QUAD, HPair(F3, 1, 1, [[0]]))
    with pytest.raises(DegenerateFormError):
        hyper(QUAD, HPair(F3, 2, 2, [[1, 0], [2, 0]]))


def test_hyper_after_forget():
    # hyper(forget(X)) is isometric to X + (-X): rank doubles and the
    # class is hyperbolic
    rng = SplitMix64(1)
    for param in all_params():
        for field in (F2, F3, F5):
            for _ in range(8):
                x = rand_qspace(rng, param, field, rng.randint(1, 3))
                h = hyper(param, forget(x))
                assert h.rank == 2 * x.rank
                assert isometric(h, hyperbolic(param, field, x.rank))


def test_mor_form_validation():
    xi = tau(QUAD, F3, [[1]])
    m = MorForm([[1]], xi, rho(xi))
    assert (m.x_dim, m.y_dim) == (1, 1)
    with pytest.raises(FunctorError):
        MorForm([[1]], xi, [[1]])  # f# a = [[1]] but rho(xi) = [[2]]
    with pytest.raises(FunctorError):
        MorForm([[1, 0]], xi, [[2]])  # f has the wrong shape
    # zero-target object carries only the zero form
    MorForm([], QForm.zero(QUAD, F3, 1), [])


def test_mor_to_hyp_and_transport():
    xi = tau(QUAD, F3, [[1]])
    m = MorForm([[1]], xi, rho(xi))
    assert mor_to_hyp(m) == HPair(F3, 1, 1, [[2]])
    rng = SplitMix64(2)
    for _ in range(10):
        u = rand_invertible(rng, F3, 1)
        v = rand_invertible(rng, F3, 1)
        m2 = mor_transport(m, u, v)  # validates f# a = rho(xi) on build
        assert m2.x_dim == 1 and m2.y_dim == 1
    with pytest.raises(FunctorError):
        mor_transport(m, identity(F3, 1), [[0]])


def test_mor_transport_roundtrip():
    rng = SplitMix64(3)
    for param in (QUAD, SYM):
        for field in (F3, F5):
            x = rand_qspace(rng, param, field, 2)
            m = MorForm(identity(field, 2), x.form, rho(x.form))
            u = rand_invertible(rng, field, 2)
            v = rand_invertible(rng, field, 2)
            m2 = mor_transport(m, u, v)
            from qchain.linalg import inverse

            back = mor_transport(m2, inverse(field, u), inverse(field, v))
            assert back == m


def test_s2_object():
    rng = SplitMix64(4)
    for param in all_params():
        for field in (F2, F3, F5):
            space, lag = rand_metabolic(rng, param, field, 2)
            s = S2Object(lag, space.form)
            assert s.lag_rank == 2
            assert s2_class(s) == gw0_class(hyperbolic(param, field, 2))
    # a sublagrangian that is not a Lagrangian is rejected
    space, lag = rand_metabolic(SplitMix64(5), QUAD, F3, 2)
    half = [[row[0]] for row in lag]
    with pytest.raises(FunctorError):
        S2Object(half, space.form)
    # and so is a subspace where the form does not vanish
    one = tau(QUAD, F3, [[1, 0], [0, 2]])
    with pytest.raises(FunctorError):
        S2Object([[1], [0]], one)
