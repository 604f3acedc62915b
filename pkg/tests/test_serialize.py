"""The qchain/1 text format: parsing with positioned errors, payload
validation, canonical serialization, and expect evaluation."""
from fractions import Fraction

import pytest

from qchain.fields import F2, F3, QQ, field_by_name
from qchain.forms import FormParam, QForm, tau
from qchain.complexes import ChainComplex, hyp_complex, module_complex
from qchain.functors import MorForm, S2Object
from qchain.rng import SplitMix64
from qchain.serialize import (
    Document,
    DocumentError,
    ParseError,
    elem_str,
    evaluate_expectations,
    parse,
    parse_elem,
    serialize,
)
from qchain.spaces import QSpace, rand_metabolic, rand_qspace

QUAD = FormParam(1, "quadratic")
SYM = FormParam(1, "symmetric")


def test_parse_elem():
    assert parse_elem(F3, "5", 1, 1) == 2
    assert parse_elem(F3, "-1", 1, 1) == 2
    assert parse_elem(QQ, "3/4", 1, 1) == Fraction(3, 4)
    with pytest.raises(ParseError):
        parse_elem(F3, "1/2", 1, 1)
    with pytest.raises(ParseError):
        parse_elem(QQ, "x", 2, 7)
    assert elem_str(Fraction(-3, 4)) == "-3/4"
    assert elem_str(2) == "2"


def test_minimal_qspace_document():
    doc = parse("""# a comment
format qchain/1
name demo
field F3
param 1 symmetric
payload qspace
rank 1
rep 1
expect rank 1
expect disc sq
""")
    assert doc.name == "demo"
    assert doc.kind == "qspace"
    assert doc.payload.rank == 1
    checks = evaluate_expectations(doc)
    assert all(c.ok for c in checks)


def test_parse_error_positions():
    with pytest.raises(ParseError) as ei:
        parse("")
    assert ei.value.line == 1
    with pytest.raises(ParseError) as ei:
        parse("format qchain/2\n")
    assert ei.value.line == 1
    with pytest.raises(ParseError) as ei:
        parse("format qchain/1\nfield F7000000000\n")
    assert ei.value.line == 2
    text = ("format qchain/1\nfield F3\nparam 1 symmetric\n"
            "payload qspace\nrank 1\nrep x\n")
    with pytest.raises(ParseError) as ei:
        parse(text)
    assert (ei.value.line, ei.value.col) == (6, 5)
    with pytest.raises(ParseError):
        parse("format qchain/1\nfield F3\nparam 2 symmetric\n")
    with pytest.raises(ParseError):
        parse("format qchain/1\nfield F3\nparam 1 symmetric\npayload blob\n")
    # missing directives are reported, not crashed on
    with pytest.raises(ParseError):
        parse("format qchain/1\nfield F3\n")


def test_document_validation_errors():
    # degenerate qspace payload
    with pytest.raises(DocumentError):
        parse("format qchain/1\nfield F3\nparam 1 symmetric\n"
              "payload qspace\nrank 1\nrep 0\n")
    # d o d != 0 is named by degree
    with pytest.raises(DocumentError) as ei:
        parse("format qchain/1\nfield F3\nparam 1 quadratic\n"
              "payload complex\ndim 0 1\ndim 1 1\ndim 2 1\n"
              "diff 1 1\ndiff 2 1\n")
    assert "d_1 o d_2" in str(ei.value)
    # matrix entry counts must match the declared dims
    with pytest.raises(ParseError):
        parse("format qchain/1\nfield F3\nparam 1 quadratic\n"
              "payload complex\ndim 0 2\ndim 1 1\ndiff 1 1 1 1\n")


def test_duplicate_and_unknown_directives():
    with pytest.raises(ParseError):
        parse("format qchain/1\nfield F3\nparam 1 symmetric\n"
              "payload qspace\nrank 1\nrank 2\nrep 1\n")
    with pytest.raises(ParseError):
        parse("format qchain/1\nfield F3\nparam 1 symmetric\n"
              "payload qspace\nrank 1\nrep 1\nwidth 3\n")


def test_roundtrip_all_kinds():
    rng = SplitMix64(1)
    docs = []
    x = rand_qspace(rng, SYM, F3, 2)
    docs.append(Document(F3, SYM, "qspace", x, name="s", seed=4))
    cx = ChainComplex(QQ, {0: 2, 1: 1}, {1: [[Fraction(1, 2)], [0]]})
    docs.append(Document(QQ, QUAD, "complex", cx))
    docs.append(Document(F3, QUAD, "poincare",
                         hyp_complex(QUAD, module_complex(F3, 1, 1))))
    xi = tau(QUAD, F3, [[1]])
    from qchain.forms import rho

    docs.append(Document(F3, QUAD, "mor_form", MorForm([[1]], xi, rho(xi))))
    space, lag = rand_metabolic(rng, QUAD, F2, 1)
    docs.append(Document(F2, QUAD, "s2_object", S2Object(lag, space.form),
                         expects=(("rank", "2"),)))
    for doc in docs:
        text = serialize(doc)
        again = parse(text)
        assert serialize(again) == text
        assert again.kind == doc.kind
        assert again.expects == doc.expects


def test_canonicalization_of_noncanonical_input():
    # a non-canonical representative parses to the canonical one
    text = ("format qchain/1\nfield F2\nparam 1 quadratic\n"
            "payload qspace\nrank 2\nrep 0 0 1 0\n")
    doc = parse(text)
    assert doc.payload.form.rep == [[0, 1], [0, 0]]
    assert "rep 0 1 0 0" in serialize(doc)


def test_expect_evaluation_errors_are_reported():
    doc = parse("format qchain/1\nfield F3\nparam 1 symmetric\n"
                "payload qspace\nrank 1\nrep 1\nexpect arf 0\n")
    checks = evaluate_expectations(doc)
    assert len(checks) == 1 and not checks[0].ok
    assert checks[0].got.startswith("<error")
    doc2 = parse("format qchain/1\nfield F3\nparam 1 symmetric\n"
                 "payload qspace\nrank 1\nrep 1\nexpect parity odd\n")
    assert not evaluate_expectations(doc2)[0].ok


def test_field_by_name():
    assert field_by_name("F3") is F3
    assert field_by_name("Q") is QQ
    assert field_by_name("F5").char == 5
    with pytest.raises(ValueError):
        field_by_name("F4")
    with pytest.raises(ValueError):
        field_by_name("R")
