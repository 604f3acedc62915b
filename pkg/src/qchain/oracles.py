"""Exhaustive classification oracles over F_p.

Everything here is deliberately brute force and independent of the
invariant shortcuts in spaces.py: isometry classes come from enumerating
whole GL-orbits, Witt reduction finds isotropic vectors by scanning every
vector of the space, and the Witt group's Cayley table is computed by
literally reducing orthogonal sums of class representatives. Forms of
rank up to 2 are classified completely; ranks 3 and 4 are swept in full
where the coordinate space is small enough (the result records which
sweeps were exhaustive) and by a seeded sample otherwise, with every
sampled reduction cross-checked against witt_decompose.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Tuple

from .fields import Elem, Field
from .forms import (
    FormError,
    FormParam,
    QForm,
    orthogonal_sum_q,
    q_dim,
    q_from_coords,
    restrict,
    rho,
)
from .linalg import Mat, complement, kernel_basis, mul, rank, solve
from .rng import SplitMix64
from .spaces import QSpace, rand_qspace, witt_decompose


class OracleError(FormError):
    pass


def field_elems(field: Field) -> List[Elem]:
    if field.is_rational:
        raise OracleError("exhaustive oracles need a finite field")
    return [field.of_int(i) for i in range(field.char)]


def form_key(q: QForm) -> Tuple:
    """Hashable identity of a form: its canonical representative."""
    return (q.n, tuple(int(v) for row in q.rep for v in row))


def all_forms(param: FormParam, field: Field, n: int) -> Iterator[QForm]:
    """Every element of Q(F_p^n), via the coordinate space."""
    dim = q_dim(param, field, n)
    for coords in itertools.product(field_elems(field), repeat=dim):
        yield q_from_coords(param, field, n, list(coords))


_GL_CACHE: Dict[Tuple[int, int], List[Mat]] = {}


def all_gl(field: Field, n: int) -> List[Mat]:
    """All invertible n x n matrices over F_p (cached; keep n <= 2)."""
    key = (field.char, n)
    if key not in _GL_CACHE:
        elems = field_elems(field)
        out = []
        for entries in itertools.product(elems, repeat=n * n):
            m = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
            if rank(field, m) == n:
                out.append(m)
        _GL_CACHE[key] = out
    return _GL_CACHE[key]


def orbit_classes(param: FormParam, field: Field,
                  n: int) -> Tuple[List[QForm], Dict[Tuple, int]]:
    """Isometry classes of nondegenerate forms of rank n by full orbit
    enumeration: (lex-first representatives, form key -> class index)."""
    gl = all_gl(field, n)
    reps: List[QForm] = []
    class_of: Dict[Tuple, int] = {}
    for q in all_forms(param, field, n):
        key = form_key(q)
        if key in class_of:
            continue
        if rank(field, rho(q)) != n:
            continue
        idx = len(reps)
        reps.append(q)
        for g in gl:
            class_of[form_key(restrict(g, q, n))] = idx
    return reps, class_of


def brute_isotropic(q: QForm) -> Optional[List[Elem]]:
    """First nonzero vector (lex order) on which the form restricts to
    zero, by scanning all of F_p^n."""
    field = q.field
    zero1 = QForm.zero(q.param, field, 1)
    for v in itertools.product(field_elems(field), repeat=q.n):
        if all(x == field.zero() for x in v):
            continue
        col = [[x] for x in v]
        if restrict(col, q) == zero1:
            return list(v)
    return None


def brute_split(x: QSpace, v: List[Elem]) -> QSpace:
    """Quotient out the isotropic line spanned by v: restrict the form to
    a complement of v inside its own orthogonal complement."""
    field = x.field
    n = x.rank
    vb = mul(field, [list(v)], x.polar, n, n)
    perp = kernel_basis(field, vb, n)
    a = solve(field, perp, [[vi] for vi in v], n - 1)
    assert a is not None, "isotropic vector is not in its own complement"
    c = complement(field, a, n - 1)
    w = mul(field, perp, c, n - 1, n - 2)
    return QSpace(restrict(w, x.form, n - 2))


def brute_reduce(x: QSpace) -> QSpace:
    """Witt reduction by exhaustive isotropic-vector search."""
    cur = x
    while cur.rank > 0:
        v = brute_isotropic(cur.form)
        if v is None:
            break
        cur = brute_split(cur, v)
    return cur


@dataclass(frozen=True)
class ScanReport:
    rank: int
    total: int
    nondegenerate: int
    anisotropic: int
    exhaustive: bool


@dataclass
class WittTableResult:
    param: FormParam
    char: int
    class_reps: List[QForm]
    class_ranks: List[int]
    cayley: List[List[int]]
    orders: List[int]
    unit_class: Optional[int]
    scans: List[ScanReport] = dc_field(default_factory=list)
    checks: List[Tuple[str, bool, str]] = dc_field(default_factory=list)

    @property
    def group_order(self) -> int:
        return len(self.class_reps)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, ok, detail))


# scans beyond this many coordinate tuples fall back to sampling
_FULL_SCAN_CAP = 70000


def witt_table(param: FormParam, field: Field, max_rank: int = 4,
               seed: int = 13, samples: int = 300) -> WittTableResult:
    """Compute the Witt group of (field, param) by brute force.

    Classes are the anisotropic isometry classes of rank <= 2 (plus zero);
    the group law is reduction of orthogonal sums. Ranks up to max_rank
    are swept exhaustively when the coordinate space is below the scan
    cap, and by a seeded sample cross-checked against witt_decompose
    otherwise.
    """
    if field.is_rational:
        raise OracleError("witt_table needs a finite field")
    if max_rank < 2:
        raise OracleError("witt_table needs max_rank >= 2")

    # complete isometry classification in ranks 1 and 2
    class_index: Dict[Tuple, int] = {}
    reps: List[QForm] = [QForm.zero(param, field, 0)]
    ranks: List[int] = [0]
    class_index[form_key(reps[0])] = 0
    scans = []
    for n in (1, 2):
        n_reps, n_classes = orbit_classes(param, field, n)
        aniso = 0
        for q in n_reps:
            if brute_isotropic(q) is None:
                idx = len(reps)
                reps.append(q)
                ranks.append(n)
                aniso += 1
                for key, cls in n_classes.items():
                    if cls == n_classes[form_key(q)]:
                        class_index[key] = idx
        total = field.char ** q_dim(param, field, n)
        scans.append(ScanReport(n, total, len(n_reps), aniso, True))

    result = WittTableResult(param, field.char, reps, ranks, [], [], None,
                             scans)

    def class_of(x: QSpace) -> int:
        red = brute_reduce(x)
        key = form_key(red.form)
        if key not in class_index:
            raise OracleError("reduction left an unclassified form of rank %d"
                              % red.rank)
        return class_index[key]

    # higher ranks: exhaustively confirm that nothing anisotropic is missed
    # where the coordinate space is small, otherwise sample
    rng = SplitMix64(seed)
    for n in range(3, max_rank + 1):
        total = field.char ** q_dim(param, field, n)
        if total <= _FULL_SCAN_CAP:
            nondeg = 0
            aniso = 0
            for q in all_forms(param, field, n):
                if rank(field, rho(q)) != n:
                    continue
                nondeg += 1
                if brute_isotropic(q) is None:
                    aniso += 1
            scans.append(ScanReport(n, total, nondeg, aniso, True))
            result.check("no anisotropic class of rank %d" % n, aniso == 0,
                         "%d found in full scan" % aniso)
        else:
            nondeg = 0
            aniso = 0
            for _ in range(samples):
                x = rand_qspace(rng, param, field, n)
                nondeg += 1
                if brute_isotropic(x.form) is None:
                    aniso += 1
            scans.append(ScanReport(n, samples, nondeg, aniso, False))
            result.check("no anisotropic sample of rank %d" % n, aniso == 0,
                         "%d found in %d samples" % (aniso, samples))

    # Cayley table by reduction of sums of representatives
    g = len(reps)
    cayley = [[class_of(QSpace(orthogonal_sum_q(reps[i], reps[j])))
               for j in range(g)] for i in range(g)]
    result.cayley = cayley

    result.check("zero class is neutral",
                 all(cayley[0][j] == j and cayley[j][0] == j for j in range(g)))
    result.check("commutative",
                 all(cayley[i][j] == cayley[j][i]
                     for i in range(g) for j in range(g)))
    result.check("associative",
                 all(cayley[cayley[i][j]][k] == cayley[i][cayley[j][k]]
                     for i in range(g) for j in range(g) for k in range(g)))
    result.check("every element invertible",
                 all(any(cayley[i][j] == 0 for j in range(g))
                     for i in range(g)))

    # representative independence: sums of random orbit members reduce to
    # the same class as the table entry
    ok = True
    detail = ""
    for i in range(g):
        for j in range(g):
            for _ in range(2):
                a = _twist(rng, field, reps[i])
                b = _twist(rng, field, reps[j])
                got = class_of(QSpace(orthogonal_sum_q(a, b)))
                if got != cayley[i][j]:
                    ok = False
                    detail = "classes %d + %d gave %d, table says %d" % (
                        i, j, got, cayley[i][j])
    result.check("sum respects isometry classes", ok, detail)

    orders = []
    for i in range(g):
        acc = i
        order = 1
        while acc != 0:
            acc = cayley[acc][i]
            order += 1
            if order > 4 * g:
                raise OracleError("element order exceeds group bound")
        orders.append(order)
    result.orders = orders

    one = q_from_coords(param, field, 1, [field.one()]) \
        if q_dim(param, field, 1) == 1 else None
    if one is not None and rank(field, rho(one)) == 1:
        result.unit_class = class_index[form_key(one)]

    # seeded cross-check of the brute reduction against witt_decompose
    mismatches = 0
    trials = 0
    for _ in range(samples):
        n = 1 + rng.randint(0, max_rank - 1)
        x = rand_qspace(rng, param, field, n)
        red = brute_reduce(x)
        k, kernel = witt_decompose(x)
        trials += 1
        if kernel.rank != red.rank or 2 * k + kernel.rank != x.rank:
            mismatches += 1
            continue
        if class_index.get(form_key(kernel.form)) != class_index.get(
                form_key(red.form)):
            mismatches += 1
    result.check("witt_decompose agrees with brute reduction",
                 mismatches == 0, "%d of %d samples differ" % (mismatches, trials))

    return result


def _twist(rng: SplitMix64, field: Field, q: QForm) -> QForm:
    from .rng import rand_invertible

    g = rand_invertible(rng, field, q.n)
    return restrict(g, q, q.n)
