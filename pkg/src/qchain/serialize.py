"""Line-based exact text format for the objects of this package.

A document is a sequence of `key value...` lines; `#` starts a comment and
blank lines are ignored. The first directive must be `format qchain/1`.
Header keys: optional `name` and `seed`, then `field` (F2, F3, F5, Q, or
Fp for any prime), `param <eps> <flavor>`, and `payload <kind>` with kind
one of qspace, complex, poincare, mor_form, s2_object. Payload data
follows, then any number of `expect <key> <value>` lines recording
invariants to be checked against recomputation.

Numbers are exact: decimal integers over F_p (canonicalized mod p) and
integers or `num/den` fractions over Q. Matrices are row-major entry
lists on a single line, with dimensions implied by the declared ranks;
zero matrices are omitted. Parsing re-validates every mathematical
invariant of the payload (nondegeneracy, d o d = 0, the Poincare
conditions, ...), and serialize(parse(text)) is the canonical form of
`text`: serialization is deterministic, so round-tripping a canonical
document is the identity.

Payload grammars:

  qspace      rank n; rep <n*n entries>
  complex     dim k n_k (per nonzero degree); diff k <entries> (d_k,
              dim(k-1) x dim(k), omitted when zero)
  poincare    complex lines; xi <n_0*n_0 entries>; phi k <entries>
              (phi_k, dim(-k) x dim(k), omitted when zero)
  mor_form    x_dim n; y_dim m; f <m*n entries>; xi <n*n entries>;
              a <m*n entries>
  s2_object   rank n; lag_rank l; lag <n*l entries>; xi <n*n entries>
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import Elem, Field, field_by_name
from .forms import FLAVORS, FormError, FormParam, QForm
from .linalg import Mat, zeros
from .complexes import (
    ChainComplex,
    ChainError,
    ChainMap,
    PoincareComplex,
    PoincareError,
    dualize,
    make_poincare,
)
from .functors import MorForm, S2Object
from .spaces import QSpace

PAYLOAD_KINDS = ("qspace", "complex", "poincare", "mor_form", "s2_object")


class ParseError(ValueError):
    """Syntax error with position: `line` and `col` are 1-based."""

    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__("line %d, col %d: %s" % (line, col, msg))
        self.line = line
        self.col = col


class DocumentError(ValueError):
    """A parsed payload failed mathematical validation."""


@dataclass(frozen=True)
class Document:
    field: Field
    param: FormParam
    kind: str
    payload: object
    name: Optional[str] = None
    seed: Optional[int] = None
    expects: Tuple[Tuple[str, str], ...] = ()


# ---------------------------------------------------------------------------
# tokenized lines
# ---------------------------------------------------------------------------

class _Line:
    __slots__ = ("no", "key", "args", "cols")

    def __init__(self, no: int, raw: str):
        self.no = no
        self.args: List[str] = []
        self.cols: List[int] = []
        i = 0
        for tok in raw.split():
            at = raw.index(tok, i)
            self.args.append(tok)
            self.cols.append(at + 1)
            i = at + len(tok)
        self.key = self.args[0]

    def arg(self, i: int, what: str) -> str:
        if i >= len(self.args):
            raise ParseError("missing %s" % what, self.no,
                             self.cols[-1] + len(self.args[-1]))
        return self.args[i]

    def int_arg(self, i: int, what: str) -> int:
        tok = self.arg(i, what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError("%s must be an integer, got %r" % (what, tok),
                             self.no, self.cols[i])

    def rest(self, i: int) -> List[str]:
        return self.args[i:]


def _tokenize(text: str) -> List[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            out.append(_Line(no, body))
    return out


# ---------------------------------------------------------------------------
# exact scalars
# ---------------------------------------------------------------------------

def parse_elem(field: Field, tok: str, line: int, col: int) -> Elem:
    try:
        if "/" in tok:
            if not field.is_rational:
                raise ValueError("fractions need the rational field")
            num, den = tok.split("/", 1)
            return Fraction(int(num), int(den))
        return field.of_int(int(tok))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError("bad number %r (%s)" % (tok, e), line, col)


def elem_str(e: Elem) -> str:
    return str(e)


def _mat_str(m: Mat) -> str:
    return " ".join(elem_str(v) for row in m for v in row)


def _is_zero_mat(field: Field, m: Mat) -> bool:
    z = field.zero()
    return all(v == z for row in m for v in row)


def _parse_mat(field: Field, ln: _Line, start: int, rows: int,
               cols: int) -> Mat:
    toks = ln.rest(start)
    if len(toks) != rows * cols:
        raise ParseError(
            "expected %d entries for a %d x %d matrix, got %d"
            % (rows * cols, rows, cols, len(toks)), ln.no,
            ln.cols[min(start, len(ln.cols) - 1)])
    m = zeros(field, rows, cols)
    for idx, tok in enumerate(toks):
        m[idx // cols][idx % cols] = parse_elem(field, tok, ln.no,
                                                ln.cols[start + idx])
    return m


# ---------------------------------------------------------------------------
# parse
# ---------------------------------------------------------------------------

def parse(text: str) -> Document:
    lines = _tokenize(text)
    if not lines:
        raise ParseError("empty document", 1)
    head = lines[0]
    if head.key != "format" or head.arg(1, "format tag") != "qchain/1":
        raise ParseError("first directive must be `format qchain/1`",
                         head.no, head.cols[0])

    name: Optional[str] = None
    seed: Optional[int] = None
    field: Optional[Field] = None
    param: Optional[FormParam] = None
    kind: Optional[str] = None
    body: List[_Line] = []
    expects: List[Tuple[str, str]] = []

    for ln in lines[1:]:
        if ln.key == "name":
            name = ln.arg(1, "name")
        elif ln.key == "seed":
            seed = ln.int_arg(1, "seed")
        elif ln.key == "field":
            try:
                field = field_by_name(ln.arg(1, "field name"))
            except ValueError as e:
                raise ParseError(str(e), ln.no, ln.cols[1])
        elif ln.key == "param":
            eps = ln.int_arg(1, "epsilon")
            flavor = ln.arg(2, "flavor")
            if eps not in (1, -1) or flavor not in FLAVORS:
                raise ParseError("param must be `1|-1 %s`"
                                 % "|".join(FLAVORS), ln.no, ln.cols[1])
            param = FormParam(eps, flavor)
        elif ln.key == "payload":
            kind = ln.arg(1, "payload kind")
            if kind not in PAYLOAD_KINDS:
                raise ParseError("unknown payload kind %r" % kind, ln.no,
                                 ln.cols[1])
        elif ln.key == "expect":
            expects.append((ln.arg(1, "expect key"),
                            " ".join(ln.rest(2))))
        else:
            body.append(ln)

    for missing, val in (("field", field), ("param", param),
                         ("payload", kind)):
        if val is None:
            raise ParseError("missing `%s` directive" % missing,
                             lines[-1].no)

    builder = _BUILDERS[kind]
    try:
        payload = builder(field, param, body)
    except (FormError, ChainError, PoincareError) as e:
        raise DocumentError("%s payload failed validation: %s" % (kind, e))
    return Document(field, param, kind, payload, name, seed, tuple(expects))


def load(path: str) -> Document:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _body_map(body: Sequence[_Line], multi: Sequence[str]) -> Dict:
    out: Dict[str, object] = {k: [] for k in multi}
    for ln in body:
        if ln.key in multi:
            out[ln.key].append(ln)
        elif ln.key in out:
            raise ParseError("duplicate `%s` line" % ln.key, ln.no)
        else:
            out[ln.key] = ln
    return out


def _require(m: Dict, key: str, body: Sequence[_Line]) -> _Line:
    ln = m.get(key)
    if ln is None:
        last = body[-1].no if body else 1
        raise ParseError("missing `%s` line" % key, last)
    return ln


def _build_qspace(field: Field, param: FormParam,
                  body: Sequence[_Line]) -> QSpace:
    m = _body_map(body, ())
    n = _require(m, "rank", body).int_arg(1, "rank")
    rep_ln = m.get("rep")
    rep = _parse_mat(field, rep_ln, 1, n, n) if rep_ln is not None \
        else zeros(field, n, n)
    _reject_unknown(m, ("rank", "rep"))
    return QSpace(QForm(param, field, n, rep))


def _build_complex_parts(field: Field, m: Dict) -> ChainComplex:
    dims: Dict[int, int] = {}
    for ln in m["dim"]:
        k = ln.int_arg(1, "degree")
        if k in dims:
            raise ParseError("duplicate dim for degree %d" % k, ln.no)
        dims[k] = ln.int_arg(2, "dimension")
    diffs: Dict[int, Mat] = {}
    for ln in m["diff"]:
        k = ln.int_arg(1, "degree")
        if k in diffs:
            raise ParseError("duplicate diff for degree %d" % k, ln.no)
        diffs[k] = _parse_mat(field, ln, 2, dims.get(k - 1, 0),
                              dims.get(k, 0))
    return ChainComplex(field, dims, diffs)


def _build_complex(field: Field, param: FormParam,
                   body: Sequence[_Line]) -> ChainComplex:
    m = _body_map(body, ("dim", "diff"))
    _reject_unknown(m, ("dim", "diff"))
    return _build_complex_parts(field, m)


def _build_poincare(field: Field, param: FormParam,
                    body: Sequence[_Line]) -> PoincareComplex:
    m = _body_map(body, ("dim", "diff", "phi"))
    cx = _build_complex_parts(field, m)
    n0 = cx.dim(0)
    xi_ln = m.get("xi")
    xi_rep = _parse_mat(field, xi_ln, 1, n0, n0) if xi_ln is not None \
        else zeros(field, n0, n0)
    xi = QForm(param, field, n0, xi_rep)
    comps: Dict[int, Mat] = {}
    for ln in m["phi"]:
        k = ln.int_arg(1, "degree")
        if k in comps:
            raise ParseError("duplicate phi for degree %d" % k, ln.no)
        comps[k] = _parse_mat(field, ln, 2, cx.dim(-k), cx.dim(k))
    _reject_unknown(m, ("dim", "diff", "phi", "xi"))
    phi = ChainMap(cx, dualize(cx), comps)
    return make_poincare(param, cx, xi, phi)


def _build_mor_form(field: Field, param: FormParam,
                    body: Sequence[_Line]) -> MorForm:
    m = _body_map(body, ())
    x = _require(m, "x_dim", body).int_arg(1, "x_dim")
    y = _require(m, "y_dim", body).int_arg(1, "y_dim")

    def matline(key: str) -> Mat:
        ln = m.get(key)
        return _parse_mat(field, ln, 1, y, x) if ln is not None \
            else zeros(field, y, x)

    f = matline("f")
    a = matline("a")
    xi_ln = m.get("xi")
    xi_rep = _parse_mat(field, xi_ln, 1, x, x) if xi_ln is not None \
        else zeros(field, x, x)
    _reject_unknown(m, ("x_dim", "y_dim", "f", "a", "xi"))
    return MorForm(f, QForm(param, field, x, xi_rep), a)


def _build_s2(field: Field, param: FormParam,
              body: Sequence[_Line]) -> S2Object:
    m = _body_map(body, ())
    n = _require(m, "rank", body).int_arg(1, "rank")
    l = _require(m, "lag_rank", body).int_arg(1, "lag_rank")
    lag_ln = m.get("lag")
    lag = _parse_mat(field, lag_ln, 1, n, l) if lag_ln is not None \
        else zeros(field, n, l)
    xi_ln = m.get("xi")
    xi_rep = _parse_mat(field, xi_ln, 1, n, n) if xi_ln is not None \
        else zeros(field, n, n)
    _reject_unknown(m, ("rank", "lag_rank", "lag", "xi"))
    return S2Object(lag, QForm(param, field, n, xi_rep))


def _reject_unknown(m: Dict, known: Sequence[str]) -> None:
    for key, val in m.items():
        if key not in known:
            ln = val[0] if isinstance(val, list) else val
            raise ParseError("unknown directive `%s` in payload" % key,
                             ln.no, ln.cols[0])


_BUILDERS = {
    "qspace": _build_qspace,
    "complex": _build_complex,
    "poincare": _build_poincare,
    "mor_form": _build_mor_form,
    "s2_object": _build_s2,
}


# ---------------------------------------------------------------------------
# serialize
# ---------------------------------------------------------------------------

def serialize(doc: Document) -> str:
    out = ["format qchain/1"]
    if doc.name is not None:
        out.append("name %s" % doc.name)
    if doc.seed is not None:
        out.append("seed %d" % doc.seed)
    out.append("field %s" % doc.field.name)
    out.append("param %d %s" % (doc.param.epsilon, doc.param.flavor))
    out.append("payload %s" % doc.kind)
    out.extend(_SERIALIZERS[doc.kind](doc))
    for key, val in doc.expects:
        out.append(("expect %s %s" % (key, val)).rstrip())
    return "\n".join(out) + "\n"


def _ser_qspace(doc: Document) -> List[str]:
    x: QSpace = doc.payload
    lines = ["rank %d" % x.rank]
    if not _is_zero_mat(doc.field, x.form.rep):
        lines.append("rep %s" % _mat_str(x.form.rep))
    return lines


def _ser_complex_parts(field: Field, cx: ChainComplex) -> List[str]:
    lines = []
    for k in sorted(cx.dims):
        lines.append("dim %d %d" % (k, cx.dim(k)))
    for k in cx.degrees():
        d = cx.d(k)
        if d and d[0] and not _is_zero_mat(field, d):
            lines.append("diff %d %s" % (k, _mat_str(d)))
    return lines


def _ser_complex(doc: Document) -> List[str]:
    return _ser_complex_parts(doc.field, doc.payload)


def _ser_poincare(doc: Document) -> List[str]:
    p: PoincareComplex = doc.payload
    lines = _ser_complex_parts(doc.field, p.cx)
    if not _is_zero_mat(doc.field, p.xi.rep):
        lines.append("xi %s" % _mat_str(p.xi.rep))
    for k in p.cx.degrees():
        f = p.phi.f(k)
        if f and f[0] and not _is_zero_mat(doc.field, f):
            lines.append("phi %d %s" % (k, _mat_str(f)))
    return lines


def _ser_mor_form(doc: Document) -> List[str]:
    mf: MorForm = doc.payload
    field = doc.field
    lines = ["x_dim %d" % mf.x_dim, "y_dim %d" % mf.y_dim]
    if mf.f and mf.f[0] and not _is_zero_mat(field, mf.f):
        lines.append("f %s" % _mat_str(mf.f))
    if not _is_zero_mat(field, mf.xi.rep):
        lines.append("xi %s" % _mat_str(mf.xi.rep))
    if mf.a and mf.a[0] and not _is_zero_mat(field, mf.a):
        lines.append("a %s" % _mat_str(mf.a))
    return lines


def _ser_s2(doc: Document) -> List[str]:
    s: S2Object = doc.payload
    field = doc.field
    lines = ["rank %d" % s.xi.n, "lag_rank %d" % s.lag_rank]
    if s.l_incl and s.l_incl[0] and not _is_zero_mat(field, s.l_incl):
        lines.append("lag %s" % _mat_str(s.l_incl))
    if not _is_zero_mat(field, s.xi.rep):
        lines.append("xi %s" % _mat_str(s.xi.rep))
    return lines


_SERIALIZERS = {
    "qspace": _ser_qspace,
    "complex": _ser_complex,
    "poincare": _ser_poincare,
    "mor_form": _ser_mor_form,
    "s2_object": _ser_s2,
}


# ---------------------------------------------------------------------------
# expectation checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpectCheck:
    key: str
    want: str
    got: str

    @property
    def ok(self) -> bool:
        return self.want == self.got


def evaluate_expectations(doc: Document) -> List[ExpectCheck]:
    """Recompute each `expect` line's value; `got` is the recomputation
    (or an error tag for keys that do not apply to the payload)."""
    out = []
    for key, want in doc.expects:
        try:
            got = _expect_value(doc, key)
        except Exception as e:  # surfaced in the report, not raised
            got = "<error: %s>" % e
        out.append(ExpectCheck(key, want, got))
    return out


def _expect_value(doc: Document, key: str) -> str:
    from .spaces import gw0_class, invariants, witt_class
    from .surgery import gw0_of_complex

    p = doc.payload
    if key == "rank":
        if doc.kind == "qspace":
            return str(p.rank)
        if doc.kind == "complex":
            return str(sum(p.dims.values()))
        if doc.kind == "poincare":
            return str(p.cx.dim(0))
        return str(p.xi.n)
    if key == "lag_rank" and doc.kind == "s2_object":
        return str(p.lag_rank)
    if key == "homology" and doc.kind == "complex":
        from .complexes import homology_ranks

        ranks = homology_ranks(p)
        return ",".join("%d:%d" % (k, r) for k, r in sorted(ranks.items())
                        if r) or "none"
    if doc.kind == "qspace":
        inv = invariants(p)
        scalar = {"disc": inv.disc, "arf": inv.arf,
                  "signature": inv.signature, "disc_q": inv.disc_q}
        if key in scalar:
            if scalar[key] is None:
                raise DocumentError("%s does not apply to this form" % key)
            if key == "disc":
                return "sq" if inv.disc == 1 else "nonsq"
            return str(scalar[key])
        if key == "witt_kernel_rank":
            return str(witt_class(p).kernel_rank)
        if key == "gw":
            return str(gw0_class(p))
    if key == "gw" and doc.kind == "poincare":
        return str(gw0_of_complex(p))
    raise DocumentError("unknown expect key %r for payload %s"
                        % (key, doc.kind))
