"""Hyperbolic category, forgetful/hyperbolic functors, and friends.

The hyperbolic category of free modules has objects (X, Y) with strict
duality (X, Y)# = (Y, X); a symmetric form on (X, Y) is just a map
f: X -> Y. The two functors relating it to quadratic spaces are

  forget: X |-> (X, X#) with form rho(xi), and
  hyper: (X, Y, f) |-> X + Y# with form tau([[0, 0], [can_Y f, 0]]),

so hyper produces a space exactly when f is invertible (the polar is
[[0, f^T], [eps f, 0]]); for f = 1 it is the canonical hyperbolic space.

MorForm is a form on an object f: X -> Y of the morphism category: a pair
(xi, a) with xi in Q(X), a: X -> Y^* and f# a = rho(xi). The comparison
functor to the hyperbolic category keeps (X, Y#) and sends (xi, a) to a.

S2Object is a metabolic space with a chosen Lagrangian, the explicit model
of a rank-2 filtered object; its class in GW_0 is hyperbolic on the
Lagrangian, which s2_class recomputes and asserts.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fields import Field
from .forms import FormError, FormParam, QForm, restrict, rho, tau
from .linalg import (
    Mat,
    block_matrix,
    mat_eq,
    mul,
    ncols,
    nrows,
    rank,
    scalar_mul,
    shape,
    transpose,
)
from .spaces import GWClass, QSpace, gw0_class, hyperbolic


class FunctorError(FormError):
    """Invalid hyperbolic-category or morphism-category data."""


@dataclass(frozen=True)
class HPair:
    """An object (X, Y) of the hyperbolic category with a form f: X -> Y,
    stored as a y_dim x x_dim matrix."""

    field: Field
    x_dim: int
    y_dim: int
    f: Mat

    def __post_init__(self):
        ok = (shape(self.f) == (self.y_dim, self.x_dim)
              or (self.y_dim == 0 and self.f == []))
        if not ok:
            raise FunctorError("HPair form is not a %d x %d matrix"
                               % (self.y_dim, self.x_dim))

    def __eq__(self, other) -> bool:
        return (isinstance(other, HPair) and self.field == other.field
                and self.x_dim == other.x_dim and self.y_dim == other.y_dim
                and mat_eq(self.f, other.f))


def forget(x: QSpace) -> HPair:
    """The forgetful functor: X |-> (X, X#) with form the polarization."""
    n = x.rank
    return HPair(x.field, n, n, rho(x.form))


def hyper(param: FormParam, p: HPair) -> QSpace:
    """The hyperbolic functor: (X, Y, f) |-> X + Y# with form
    tau([[0, 0], [can_Y f, 0]]). Raises DegenerateFormError unless f is
    invertible (the polar is [[0, f^T], [eps f, 0]])."""
    field = p.field
    eps = field.of_int(param.epsilon)
    rep = block_matrix(field,
                       [[None, None],
                        [scalar_mul(field, eps, p.f), None]],
                       [p.x_dim, p.y_dim], [p.x_dim, p.y_dim])
    return QSpace(tau(param, field, rep))


@dataclass(frozen=True)
class MorForm:
    """A form (xi, a) on the object f: X -> Y of the morphism category:
    xi in Q(X) and a: X -> Y^* with f# a = rho(xi)."""

    f: Mat
    xi: QForm
    a: Mat

    def __post_init__(self):
        x = self.xi.n
        field = self.xi.field
        y = nrows(self.f)
        if self.f and x > 0 and ncols(self.f) != x:
            raise FunctorError("f does not have %d columns" % x)
        if nrows(self.a) != y or (self.a and x > 0 and ncols(self.a) != x):
            raise FunctorError("a and f have different shapes")
        lhs = mul(field, transpose(self.f, x), self.a, y, x)
        if not mat_eq(lhs, rho(self.xi)):
            raise FunctorError("f# a differs from rho(xi)")

    @property
    def field(self) -> Field:
        return self.xi.field

    @property
    def x_dim(self) -> int:
        return self.xi.n

    @property
    def y_dim(self) -> int:
        return nrows(self.f)


def mor_to_hyp(m: MorForm) -> HPair:
    """The comparison functor to the hyperbolic category:
    (f: X -> Y) |-> (X, Y#), (xi, a) |-> a."""
    return HPair(m.field, m.x_dim, m.y_dim, m.a)


def mor_transport(m: MorForm, u: Mat, v: Mat) -> MorForm:
    """Change of basis by isomorphisms u on X and v on Y: the transported
    form is (v^-1 f u, u-restriction of xi, v^T a u)."""
    from .linalg import inverse

    field = m.field
    v_inv = inverse(field, v)
    if v_inv is None:
        raise FunctorError("v is not invertible")
    x, y = m.x_dim, m.y_dim
    f2 = mul(field, v_inv, mul(field, m.f, u, x, x), y, x)
    a2 = mul(field, transpose(v, y), mul(field, m.a, u, x, x), y, x)
    return MorForm(f2, restrict(u, m.xi, x), a2)


@dataclass(frozen=True)
class S2Object:
    """A metabolic space with a chosen Lagrangian: independent columns
    L -> Y with xi restricting to zero and rank L = rank Y / 2 (so L is
    all of its own orthogonal complement)."""

    l_incl: Mat
    xi: QForm

    def __post_init__(self):
        field = self.xi.field
        n = self.xi.n
        l = ncols(self.l_incl)
        if self.l_incl and nrows(self.l_incl) != n:
            raise FunctorError("Lagrangian columns do not live in the space")
        QSpace(self.xi)
        if rank(field, self.l_incl) != l:
            raise FunctorError("Lagrangian columns are dependent")
        if restrict(self.l_incl, self.xi, l) != QForm.zero(self.xi.param, field, l):
            raise FunctorError("form does not vanish on the Lagrangian")
        if 2 * l != n:
            raise FunctorError(
                "columns span a sublagrangian, not a Lagrangian (%d of %d)"
                % (l, n))

    @property
    def lag_rank(self) -> int:
        return ncols(self.l_incl)


def s2_class(s: S2Object) -> GWClass:
    """The class of the underlying space; always [H(L)], which is
    recomputed and asserted."""
    cls = gw0_class(QSpace(s.xi))
    want = gw0_class(hyperbolic(s.xi.param, s.xi.field, s.lag_rank))
    assert cls == want, "S2 class %s is not hyperbolic %s" % (cls, want)
    return cls
