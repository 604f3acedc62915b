"""Quadratic forms on free modules, in three flavors and both duality signs.

For a fixed sign eps in {+1, -1} the duality involution on bilinear forms
(n x n matrices) is sigma(B) = eps * B^T. The quadratic-forms group Q(R^n)
comes in three flavors:

  quadratic  Q = Mat_n / im(1 - sigma),  tau = class map,  rho([B]) = B + eps*B^T
  even       Q = im(1 + sigma),          tau = 1 + sigma,  rho = inclusion
  symmetric  Q = fixed points of sigma,  tau = 1 + sigma,  rho = inclusion

A QForm stores a canonical representative: for the quadratic flavor the
lower triangle is folded into the upper triangle (and the diagonal is
dropped when eps = -1 in odd characteristic, where it dies in the
quotient); for the even and symmetric flavors the representative is the
form itself, with subgroup membership validated exactly.

Restriction along f: X -> Y is q |-> [f^T q f]; together with tau and rho
this satisfies rho(tau(B)) = B + sigma(B), the polarization identity
(f+g).(xi) = f.(xi) + g.(xi) + tau(g^T rho(xi) f), and left-exactness of
Q on short exact sequences. `check_form_axioms` verifies all three on
randomized instances, deciding exactness by exact linear solving.
"""
from __future__ import annotations

from typing import List, NamedTuple, Optional, Sequence, Tuple

from .fields import Elem, Field
from .linalg import (
    Mat,
    add,
    block_diag,
    copy_mat,
    hstack,
    identity,
    is_zero_mat,
    kernel_basis,
    mat_from_rows,
    mul,
    ncols,
    nrows,
    rank,
    shape,
    solve,
    sub,
    transpose,
    zeros,
)
from .rng import SplitMix64, rand_mat, rand_invertible

FLAVORS = ("quadratic", "even", "symmetric")


class FormError(ValueError):
    """Invalid form data: wrong symmetry class, shape mismatch, failed glue."""


class FormParam(NamedTuple):
    """Duality sign and flavor selecting one of the six form theories."""

    epsilon: int
    flavor: str

    def validate(self) -> "FormParam":
        if self.epsilon not in (1, -1):
            raise FormError("epsilon must be +1 or -1, got %r" % (self.epsilon,))
        if self.flavor not in FLAVORS:
            raise FormError("flavor must be one of %s, got %r" % (FLAVORS, self.flavor))
        return self

    def __str__(self) -> str:
        return "%s(eps=%+d)" % (self.flavor, self.epsilon)


def all_params():
    for flavor in FLAVORS:
        for eps in (1, -1):
            yield FormParam(eps, flavor)


# ---------------------------------------------------------------------------
# sigma and canonical representatives
# ---------------------------------------------------------------------------

def sigma(param: FormParam, field: Field, b: Mat) -> Mat:
    """The duality involution sigma(B) = eps * B^T on square matrices."""
    n = nrows(b)
    eps = field.of_int(param.epsilon)
    return [[field.mul(eps, b[j][i]) for j in range(n)] for i in range(n)]


def _diag_in_quotient(param: FormParam, field: Field) -> bool:
    """Does the diagonal survive in the quadratic-flavor quotient?"""
    return not (param.epsilon == -1 and field.char != 2)


def canonicalize(param: FormParam, field: Field, b: Mat) -> Mat:
    """Canonical representative of the class of b in Q(R^n).

    quadratic: fold the strict lower triangle onto the upper triangle
    (entry b_ij + eps*b_ji), zero the lower triangle; the diagonal is kept
    except when eps = -1 away from characteristic 2.
    even/symmetric: b itself after an exact membership check.
    """
    n = nrows(b)
    if n and ncols(b) != n:
        raise FormError("form representative must be square, got %dx%d" % shape(b))
    if param.flavor == "quadratic":
        eps = field.of_int(param.epsilon)
        keep_diag = _diag_in_quotient(param, field)
        c = zeros(field, n, n)
        for i in range(n):
            if keep_diag:
                c[i][i] = b[i][i]
            for j in range(i + 1, n):
                c[i][j] = field.add(b[i][j], field.mul(eps, b[j][i]))
        return c
    if param.flavor == "symmetric":
        if b != sigma(param, field, b):
            raise FormError("symmetric-flavor rep must satisfy B = eps*B^T")
        return copy_mat(b)
    # even flavor: membership in im(1 + sigma)
    if field.char != 2:
        if b != sigma(param, field, b):
            raise FormError("even-flavor rep must satisfy B = eps*B^T")
    else:
        if b != transpose(b, n) or any(b[i][i] != 0 for i in range(n)):
            raise FormError("even-flavor rep over F_2 must be alternating")
    return copy_mat(b)


class QForm:
    """An element of Q(R^n) for one (field, param), stored canonically."""

    __slots__ = ("param", "field", "n", "rep")

    def __init__(self, param: FormParam, field: Field, n: int, rep: Mat, _canonical: bool = False):
        param.validate()
        if not _canonical:
            rep = canonicalize(param, field, rep)
        if nrows(rep) != n or (n and ncols(rep) != n):
            raise FormError("rep shape %s does not match n=%d" % (shape(rep), n))
        self.param = param
        self.field = field
        self.n = n
        self.rep = rep

    @classmethod
    def zero(cls, param: FormParam, field: Field, n: int) -> "QForm":
        return cls(param, field, n, zeros(field, n, n), _canonical=True)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QForm)
            and self.param == other.param
            and self.field == other.field
            and self.n == other.n
            and self.rep == other.rep
        )

    def __hash__(self):
        return hash((self.param, self.field, self.n, tuple(tuple(r) for r in self.rep)))

    def __repr__(self) -> str:
        return "QForm(%s, %s, n=%d, rep=%r)" % (self.param, self.field, self.n, self.rep)

    def value(self, v: Sequence[Elem]) -> Elem:
        """The quadratic value q(v) = v^T rep v (class-independent)."""
        f = self.field
        acc = f.zero()
        for i in range(self.n):
            if v[i] == 0:
                continue
            for j in range(self.n):
                acc = f.add(acc, f.mul(f.mul(v[i], self.rep[i][j]), v[j]))
        return acc


def q_add(a: QForm, b: QForm) -> QForm:
    _check_same(a, b)
    return QForm(a.param, a.field, a.n, add(a.field, a.rep, b.rep))


def q_sub(a: QForm, b: QForm) -> QForm:
    _check_same(a, b)
    return QForm(a.param, a.field, a.n, sub(a.field, a.rep, b.rep))


def q_neg(a: QForm) -> QForm:
    return QForm(a.param, a.field, a.n, [[a.field.neg(x) for x in row] for row in a.rep])


def _check_same(a: QForm, b: QForm) -> None:
    if a.param != b.param or a.field != b.field or a.n != b.n:
        raise FormError("mismatched forms: %r vs %r" % (a, b))


# ---------------------------------------------------------------------------
# tau, rho, restriction
# ---------------------------------------------------------------------------

def tau(param: FormParam, field: Field, b: Mat) -> QForm:
    """The transfer tau: bilinear forms -> Q."""
    n = nrows(b)
    if param.flavor == "quadratic":
        return QForm(param, field, n, b)
    return QForm(param, field, n, add(field, b, sigma(param, field, b)), _canonical=True)


def rho(q: QForm) -> Mat:
    """The polarization rho: Q -> bilinear forms; rho(tau(B)) = B + sigma(B)."""
    if q.param.flavor == "quadratic":
        return add(q.field, q.rep, sigma(q.param, q.field, q.rep))
    return copy_mat(q.rep)


def restrict(f: Mat, q: QForm, f_cols: Optional[int] = None) -> QForm:
    """Restriction Q(f): Q(Y) -> Q(X) along f: X -> Y, as [f^T rep f]."""
    rows = len(f)
    cols = len(f[0]) if f else (f_cols if f_cols is not None else 0)
    if rows != q.n:
        raise FormError("restrict: map target dim %d does not match form dim %d" % (rows, q.n))
    if cols == 0 or q.n == 0:
        return QForm.zero(q.param, q.field, cols)
    support = [(i, j, v) for i, row in enumerate(q.rep)
               for j, v in enumerate(row) if v != 0]
    if len(support) <= 2:
        # basis elements and their ilk: f^T rep f as a sum of scaled outer
        # products of rows of f, skipping the dense n^3 products
        field = q.field
        m = zeros(field, cols, cols)
        for i, j, v in support:
            fi, fj = f[i], f[j]
            for a in range(cols):
                x = fi[a]
                if x == 0:
                    continue
                xv = field.mul(x, v)
                out_a = m[a]
                for b in range(cols):
                    y = fj[b]
                    if y != 0:
                        out_a[b] = field.add(out_a[b], field.mul(xv, y))
        return QForm(q.param, q.field, cols, m)
    ft = transpose(f, cols)
    m = mul(q.field, mul(q.field, ft, q.rep, cols), f, q.n)
    return QForm(q.param, q.field, cols, m)


def canonicalize_eq(a: QForm, b: QForm) -> bool:
    """Equality in Q (canonical representatives compared entrywise)."""
    _check_same(a, b)
    return a.rep == b.rep


def orthogonal_sum_q(a: QForm, b: QForm) -> QForm:
    if a.param != b.param or a.field != b.field:
        raise FormError("orthogonal sum of mismatched forms")
    rep = block_diag(a.field, [(a.rep, a.n, a.n), (b.rep, b.n, b.n)])
    return QForm(a.param, a.field, a.n + b.n, rep)


# ---------------------------------------------------------------------------
# coordinates: Q(R^n) as an explicit F-vector space
# ---------------------------------------------------------------------------

_Q_PAIRS_CACHE: dict = {}


def q_index_pairs(param: FormParam, field: Field, n: int) -> List[Tuple[int, int]]:
    """Index pairs (i, j) of the free coordinates of Q(R^n) in the canonical
    representative; row-major upper triangle, diagonal first per row when
    it is present."""
    key = (param, field.char, n)
    cached = _Q_PAIRS_CACHE.get(key)
    if cached is not None:
        return cached
    if param.flavor == "quadratic" or param.flavor == "symmetric":
        diag = _diag_in_quotient(param, field) if param.flavor == "quadratic" else not (
            param.epsilon == -1 and field.char != 2
        )
    else:  # even
        diag = field.char != 2 and param.epsilon == 1
    pairs: List[Tuple[int, int]] = []
    for i in range(n):
        if diag:
            pairs.append((i, i))
        for j in range(i + 1, n):
            pairs.append((i, j))
    _Q_PAIRS_CACHE[key] = pairs
    return pairs


def q_dim(param: FormParam, field: Field, n: int) -> int:
    return len(q_index_pairs(param, field, n))


def q_coords(q: QForm) -> List[Elem]:
    return [q.rep[i][j] for (i, j) in q_index_pairs(q.param, q.field, q.n)]


def q_from_coords(param: FormParam, field: Field, n: int, coords: Sequence[Elem]) -> QForm:
    pairs = q_index_pairs(param, field, n)
    assert len(coords) == len(pairs), "coordinate count mismatch"
    rep = zeros(field, n, n)
    eps = field.of_int(param.epsilon)
    for (i, j), v in zip(pairs, coords):
        rep[i][j] = v
        if param.flavor != "quadratic" and i != j:
            rep[j][i] = field.mul(eps, v)
    return QForm(param, field, n, rep, _canonical=(param.flavor == "quadratic"))


_Q_BASIS_CACHE: dict = {}


def q_basis(param: FormParam, field: Field, n: int) -> List[QForm]:
    """The canonical basis of Q(R^n) as an F-vector space. QForm is
    immutable, so the cached list is shared (copied shallowly)."""
    key = (param, field.char, n)
    cached = _Q_BASIS_CACHE.get(key)
    if cached is None:
        dim = q_dim(param, field, n)
        cached = []
        for k in range(dim):
            coords = [field.zero()] * dim
            coords[k] = field.one()
            cached.append(q_from_coords(param, field, n, coords))
        _Q_BASIS_CACHE[key] = cached
    return list(cached)


# ---------------------------------------------------------------------------
# hyperbolic bilinear seeds
# ---------------------------------------------------------------------------

def cross_rep(field: Field, k: int, lower: Elem) -> Mat:
    """The 2k x 2k block matrix [[0, 0], [lower * I_k, 0]]."""
    m = zeros(field, 2 * k, 2 * k)
    for i in range(k):
        m[k + i][i] = lower
    return m


# ---------------------------------------------------------------------------
# gluing along a bicartesian square (pullback description of Q)
# ---------------------------------------------------------------------------

def glue_pushout_form(
    param: FormParam,
    field: Field,
    dims: Tuple[int, int, int, int],
    s: Mat,
    f: Mat,
    g: Mat,
    t: Mat,
    q_b: QForm,
    q_c: QForm,
    beta: Mat,
) -> QForm:
    """Glue a form on the pushout D of a bicartesian square.

    The square has corners A, B, C, D with maps s: A -> B, f: A -> C,
    g: B -> D, t: C -> D, and 0 -> A -> B (+) C -> D -> 0 exact via
    (s; -f) and (g t). Given q_b on B, q_c on C and a cross pairing
    beta: B -> C^* satisfying the compatibility conditions

        s.(q_b) + f.(q_c) = tau(f^T beta s)
        s^T rho(q_b) = f^T beta
        rho(q_c) f   = beta s

    there is a unique xi on D with g.(xi) = q_b, t.(xi) = q_c and
    t^T rho(xi) g = beta; it is found by exact linear solving and the
    uniqueness is asserted.
    """
    na, nb, nc, nd = dims
    # exactness of 0 -> A -> B + C -> D -> 0
    stack = vcat_cols(field, s, f, nb, nc, na, negate_second=True)
    if rank(field, stack) != na:
        raise FormError("glue: (s; -f) is not injective")
    gt = hstack([g, t], nd) if nd else []
    if rank(field, gt) != nd:
        raise FormError("glue: (g t) is not surjective")
    comp = mul(field, gt, stack, nb + nc) if nd else []
    if comp and not is_zero_mat(comp):
        raise FormError("glue: square does not commute (g s != t f)")
    if (nb + nc) - nd != na or rank(field, stack) + nd != nb + nc:
        # middle exactness for split sequences over a field is a rank count
        raise FormError("glue: sequence 0 -> A -> B+C -> D -> 0 is not exact")

    # compatibility of the boundary data
    ft = transpose(f, na)
    st = transpose(s, na)
    lhs1 = q_add(restrict(s, q_b, na), restrict(f, q_c, na))
    rhs1 = tau(param, field, mul(field, mul(field, ft, beta, nc), s, nb))
    if not canonicalize_eq(lhs1, rhs1):
        raise FormError("glue: corner condition s.(qB) + f.(qC) = tau(f^T beta s) fails")
    lhs2 = mul(field, st, rho(q_b), nb)
    rhs2 = mul(field, ft, beta, nc)
    if lhs2 != rhs2:
        raise FormError("glue: condition s^T rho(qB) = f^T beta fails")
    lhs3 = mul(field, rho(q_c), f, nc)
    rhs3 = mul(field, beta, s, nb)
    if lhs3 != rhs3:
        raise FormError("glue: condition rho(qC) f = beta s fails")

    # solve for xi on D in Q-coordinates
    basis = q_basis(param, field, nd)
    cols: List[List[Elem]] = []
    for b_elt in basis:
        col: List[Elem] = []
        col.extend(q_coords(restrict(g, b_elt, nb)))
        col.extend(q_coords(restrict(t, b_elt, nc)))
        cross = mul(field, mul(field, transpose(t, nc), rho(b_elt), nd), g, nd)
        col.extend(x for row in cross for x in row)
        cols.append(col)
    m = transpose(cols, len(cols[0]) if cols else 0) if cols else []
    rhs_vec: List[Elem] = []
    rhs_vec.extend(q_coords(q_b))
    rhs_vec.extend(q_coords(q_c))
    rhs_vec.extend(x for row in beta for x in row)
    rhs_mat = [[x] for x in rhs_vec]
    if not cols:
        if any(x != 0 for x in rhs_vec):
            raise FormError("glue: no solution on zero-dimensional D")
        return QForm.zero(param, field, nd)
    if len(m) != len(rhs_mat):
        raise FormError("glue: internal shape mismatch")
    x = solve(field, m, rhs_mat, len(basis))
    if x is None:
        raise FormError("glue: boundary data does not glue (no solution)")
    ker = kernel_basis(field, m, len(basis))
    assert ncols(ker) == 0, "glue: solution is not unique (implementation bug)"
    return q_from_coords(param, field, nd, [row[0] for row in x])


def vcat_cols(field: Field, top: Mat, bottom: Mat, rows_top: int, rows_bottom: int,
              cols: int, negate_second: bool = False) -> Mat:
    """Stack [top; bottom] (with optional negation of the bottom block),
    tolerating empty blocks whose shapes are passed explicitly."""
    out = zeros(field, rows_top + rows_bottom, cols)
    for i in range(min(rows_top, len(top))):
        for j in range(len(top[i])):
            out[i][j] = top[i][j]
    for i in range(min(rows_bottom, len(bottom))):
        for j in range(len(bottom[i])):
            v = bottom[i][j]
            out[rows_top + i][j] = field.neg(v) if negate_second else v
    return out


# ---------------------------------------------------------------------------
# randomized axiom verification
# ---------------------------------------------------------------------------

class AxiomReport(NamedTuple):
    passed: bool
    trials: int
    checks: int
    failure: Optional[str]


def check_form_axioms(
    param: FormParam,
    field: Field,
    trials: int = 200,
    seed: int = 1,
    max_dim: int = 6,
) -> AxiomReport:
    """Randomized exact verification of the three category-of-forms axioms:
    rho tau = 1 + sigma, the polarization identity, and left-exactness of Q
    on split short exact sequences (decided by exact solving)."""
    rng = SplitMix64(seed)
    checks = 0
    for trial in range(trials):
        n = rng.randint(0, max_dim)
        b = rand_mat(rng, field, n, n)
        lhs = rho(tau(param, field, b))
        rhs = add(field, b, sigma(param, field, b))
        checks += 1
        if lhs != rhs:
            return AxiomReport(False, trial + 1, checks,
                               "rho tau != 1 + sigma at n=%d, b=%r" % (n, b))

        # polarization identity for two maps into a formed module
        m = rng.randint(0, max_dim)
        xi = _rand_qform(rng, param, field, n)
        fmap = rand_mat(rng, field, n, m)
        gmap = rand_mat(rng, field, n, m)
        fg = add(field, fmap, gmap) if n else zeros(field, n, m)
        lhs_q = restrict(fg, xi, m)
        if n == 0 or m == 0:
            cross = zeros(field, m, m)
        else:
            cross = mul(field, mul(field, transpose(gmap, m), rho(xi), n), fmap, n)
        rhs_q = q_add(q_add(restrict(fmap, xi, m), restrict(gmap, xi, m)),
                      tau(param, field, cross))
        checks += 1
        if not canonicalize_eq(lhs_q, rhs_q):
            return AxiomReport(False, trial + 1, checks,
                               "polarization identity fails at n=%d m=%d" % (n, m))

        # left-exactness on a random split short exact sequence
        nx = rng.randint(0, max_dim // 2)
        nz = rng.randint(0, max_dim // 2)
        ny = nx + nz
        u = rand_invertible(rng, field, ny)
        incl = [[u[i][j] for j in range(nx)] for i in range(ny)]
        uinv = _inverse_checked(field, u)
        proj = [uinv[i] for i in range(nx, ny)]
        ok, msg = _check_left_exact(param, field, nx, ny, nz, incl, proj)
        checks += 1
        if not ok:
            return AxiomReport(False, trial + 1, checks, msg)
    return AxiomReport(True, trials, checks, None)


def _inverse_checked(field: Field, m: Mat) -> Mat:
    from .linalg import inverse

    inv = inverse(field, m)
    assert inv is not None
    return inv


def _rand_qform(rng: SplitMix64, param: FormParam, field: Field, n: int) -> QForm:
    dim = q_dim(param, field, n)
    coords = [_rand_scalar(rng, field) for _ in range(dim)]
    return q_from_coords(param, field, n, coords)


def _rand_scalar(rng: SplitMix64, field: Field):
    from .rng import rand_elem

    return rand_elem(rng, field)


def _check_left_exact(param, field, nx, ny, nz, incl, proj):
    """Exactness of 0 -> Q(Z) -> Q(Y) -> E(Y, X^*) x Q(X) for X >-> Y ->> Z.

    Decided as: p. injective, k o p. = 0, and rank(k) = dim Q(Y) - dim Q(Z),
    which together force ker(k) = im(p.) without a kernel-basis comparison
    (the saved eliminations dominate the cost over the rationals).
    """
    basis_y = q_basis(param, field, ny)
    basis_z = q_basis(param, field, nz)
    # matrix of p.: Q(Z) -> Q(Y)
    p_cols = [q_coords(restrict(proj, bz, ny)) for bz in basis_z]
    dim_qy = q_dim(param, field, ny)
    p_mat = transpose(p_cols, dim_qy) if p_cols else [[] for _ in range(dim_qy)]
    if rank(field, p_mat) != len(basis_z):
        return False, "left-exactness: p. not injective (nx=%d nz=%d)" % (nx, nz)
    # matrix of k: xi |-> (i^T rho(xi), i.(xi))
    incl_t = transpose(incl, nx)
    k_cols = []
    for by in basis_y:
        col: List[Elem] = []
        pairing = mul(field, incl_t, rho(by), ny)
        col.extend(x for row in pairing for x in row)
        col.extend(q_coords(restrict(incl, by, nx)))
        k_cols.append(col)
    k_rows = len(k_cols[0]) if k_cols else 0
    k_mat = transpose(k_cols, k_rows) if k_cols else []
    comp = mul(field, k_mat, p_mat, dim_qy, len(basis_z))
    if any(x != 0 for row in comp for x in row):
        return False, "left-exactness: ker != im at nx=%d nz=%d" % (nx, nz)
    if rank(field, k_mat) != dim_qy - len(basis_z):
        return False, "left-exactness: ker != im at nx=%d nz=%d" % (nx, nz)
    return True, ""
