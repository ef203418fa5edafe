from pathlib import Path

import pytest

from linres.clausal import (
    check_reslin,
    check_reslin_neq,
    format_derivation,
    instance_clauses,
    neq_input_clauses,
    parse_derivation,
    read_derivation,
    target_clause,
)
from linres.errors import MalformedProof, ParseError
from linres.instances import read_instance

FIXTURES = Path(__file__).parent / "fixtures"

NEQ_FROM_INPUTS = """\
p 5
vars 1
calculus reslin-neq
line 0 clause 1 | 4 != by input 0
line 1 clause 1 | 0 != by input 1
line 2 clause 1 | 1 != by input 2
line 3 clause 1 | 2 != by input 3
line 4 clause 1 | 3 != by axiom
line 5 clause by res 1:0 2:0 3:0 4:0 0:0
"""


@pytest.fixture
def x1_eq_3():
    return read_instance(FIXTURES / "x1_eq_3.lsys")


@pytest.fixture
def fixture_derivation():
    return read_derivation(FIXTURES / "x1_eq_3.lder")


def test_reslin_fixture_is_accepted(fixture_derivation, x1_eq_3):
    assert check_reslin(fixture_derivation, instance_clauses(x1_eq_3))


def test_reslin_wrong_multiplier_is_rejected_at_its_line(x1_eq_3):
    text = (FIXTURES / "x1_eq_3.lder").read_text().replace("by res 0 0 1 0 1 4", "by res 0 0 1 0 2 4")
    verdict = check_reslin(parse_derivation(text), instance_clauses(x1_eq_3))
    assert not verdict
    assert verdict.location == "line 2"


def test_reslin_must_end_in_the_empty_clause(x1_eq_3):
    text = "\n".join((FIXTURES / "x1_eq_3.lder").read_text().splitlines()[:-1])
    verdict = check_reslin(parse_derivation(text), instance_clauses(x1_eq_3))
    assert not verdict
    assert verdict.location == "line 4"


def test_reslin_rejects_forward_references(x1_eq_3):
    text = "p 5\nvars 1\ncalculus reslin\nline 0 clause 1 | 1 = by simp 0\n"
    verdict = check_reslin(parse_derivation(text), instance_clauses(x1_eq_3))
    assert not verdict
    assert "earlier line" in verdict.diagnostic


def test_reslin_weakening_adds_one_literal(x1_eq_3):
    text = (
        "p 5\nvars 1\ncalculus reslin\n"
        "line 0 clause 1 | 3 = by input 0\n"
        "line 1 clause 1 | 3 =; 1 | 2 = by weak 0\n"
        "line 2 clause 1 | 3 =; 1 | 2 =; 1 | 1 =; 1 | 0 = by weak 1\n"
    )
    derivation = parse_derivation(text)
    verdict = check_reslin(derivation, instance_clauses(x1_eq_3))
    assert verdict.location == "line 2"
    assert verdict.diagnostic == "weakening must add exactly one literal"


def test_reslin_rejects_inequality_literals(x1_eq_3):
    text = "p 5\nvars 1\ncalculus reslin\nline 0 clause 1 | 3 != by input 0\n"
    verdict = check_reslin(parse_derivation(text), instance_clauses(x1_eq_3))
    assert not verdict
    assert verdict.location == "line 0"


def test_neq_boolean_axiom_derives_the_target(x1_eq_3):
    derivation = parse_derivation("p 5\nvars 1\ncalculus reslin-neq\nline 0 clause 1 | 3 != by axiom\n")
    assert target_clause(x1_eq_3).same_as(derivation.lines[0].clause)
    assert check_reslin_neq(derivation, x1_eq_3)


@pytest.mark.parametrize("rhs", [0, 1])
def test_neq_axiom_excludes_zero_and_one(rhs, x1_eq_3):
    derivation = parse_derivation(f"p 5\nvars 1\ncalculus reslin-neq\nline 0 clause 1 | {rhs} != by axiom\n")
    assert not check_reslin_neq(derivation, x1_eq_3)


def test_neq_refutation_from_inputs(x1_eq_3):
    assert [c.literals[0].poly.rhs for c in neq_input_clauses(x1_eq_3)] == [4, 0, 1, 2]
    derivation = parse_derivation(NEQ_FROM_INPUTS)
    assert check_reslin_neq(derivation, x1_eq_3, from_inputs=True)
    assert not check_reslin_neq(derivation, x1_eq_3)


def test_neq_resolution_needs_premises_in_residue_order(x1_eq_3):
    text = NEQ_FROM_INPUTS.replace("res 1:0 2:0 3:0 4:0 0:0", "res 2:0 1:0 3:0 4:0 0:0")
    verdict = check_reslin_neq(parse_derivation(text), x1_eq_3, from_inputs=True)
    assert verdict.location == "line 5"
    assert verdict.diagnostic == "premise 1 does not cite f != 1"


def test_calculus_mismatch_raises(fixture_derivation, x1_eq_3):
    with pytest.raises(MalformedProof):
        check_reslin_neq(fixture_derivation, x1_eq_3)


def test_formatted_derivation_parses_back(fixture_derivation):
    assert parse_derivation(format_derivation(fixture_derivation)) == fixture_derivation


@pytest.mark.parametrize(
    "text",
    [
        "p 5\nvars 1\ncalculus resolution\n",
        "p 5\nvars 1\ncalculus reslin\nline 1 clause by axiom\n",
        "p 5\nvars 1\ncalculus reslin\nline 0 clause 1 | 3 by axiom\n",
        "p 5\nvars 1\ncalculus reslin\nline 0 clause 1 | 3 = by magic\n",
        "p 5\nvars 1\ncalculus reslin-neq\nline 0 clause by res 0 1\n",
    ],
)
def test_derivation_parse_errors(text):
    with pytest.raises(ParseError):
        parse_derivation(text)
