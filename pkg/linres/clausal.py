""" derivation checkers for resolution over linear equations and over linear inequalities

derivation file format (UTF-8, '#' comments, line indices 0-based and consecutive):

    p <prime>
    vars <n>
    calculus <reslin|reslin-neq>
    line <i> clause <lit>; <lit>; ... by <justification>

A literal is `<c_0 ... c_{n-1}> | <rhs> =` or `... | <rhs> !=`; the empty clause has no literals.
Justifications:

    axiom
    input <j>
    res <k> <i> <l> <j> <alpha> <beta>      reslin: literal i of line k with literal j of line l
    res <k_0>:<i_0> ... <k_{p-1}>:<i_{p-1}>   reslin-neq: premise t cites f != t
    simp <k>
    weak <k>                                 reslin only
    lincomb <k> <i> <g_0 ... g_{n-1}> | <b>  reslin-neq only
"""

import logging
from collections import Counter
from dataclasses import dataclass

from linres.errors import FieldError, MalformedProof, ParseError
from linres.gf import AffinePoly, Field
from linres.instances import LinearSystem
from linres.parsing import content_lines, expect_header, format_row, parse_int, parse_row
from linres.verdict import Verdict

logger = logging.getLogger(__name__)


CALCULI = ("reslin", "reslin-neq")


# CLAUSES

@dataclass(frozen=True)
class Literal:
    poly: AffinePoly
    negated: bool = False       # False: poly = 0, True: poly != 0

    def key(self):
        return (self.poly.vector, self.negated)

    @property
    def relation(self):
        return "!=" if self.negated else "="

    def is_false_constant(self):
        """0 = c with c != 0 (equations) or 0 != 0 (inequalities)."""
        if self.negated:
            return self.poly.is_zero()
        return self.poly.is_constant() and self.poly.constant != 0

    def format(self):
        return format_row(self.poly.coeffs, self.poly.rhs) + " " + self.relation

    def __str__(self):
        return self.poly.format(self.relation)


@dataclass(frozen=True)
class LinClause:
    literals: tuple[Literal, ...] = ()

    def multiset(self):
        return Counter(lit.key() for lit in self.literals)

    def same_as(self, other):
        return self.multiset() == other.multiset()

    def without(self, index):
        return LinClause(self.literals[:index] + self.literals[index + 1:])

    def union(self, *others):
        lits = self.literals
        for other in others:
            lits = lits + other.literals
        return LinClause(lits)

    def __len__(self):
        return len(self.literals)

    def __str__(self):
        if not self.literals:
            return "[]"
        return " v ".join(str(lit) for lit in self.literals)


def equation_clause(*polys):
    return LinClause(tuple(Literal(q, False) for q in polys))


def inequality_clause(*polys):
    return LinClause(tuple(Literal(q, True) for q in polys))


def instance_clauses(inst: LinearSystem):
    """Unit equation clauses f - a = 0, one per row."""
    return [equation_clause(q) for q in inst.equations]


def neq_input_clauses(inst: LinearSystem):
    """f = a written as inequalities: unit clauses f != b for every b != a, row by row."""
    clauses = []
    for q in inst.equations:
        for delta in range(1, inst.p):
            clauses.append(inequality_clause(q.shift(-delta)))
    return clauses


def target_clause(inst: LinearSystem):
    """The disjunction of f != a over the rows f = a."""
    return inequality_clause(*inst.equations)


# DERIVATIONS

@dataclass(frozen=True)
class Justification:
    rule: str
    premises: tuple[int, ...] = ()
    params: tuple = ()


@dataclass(frozen=True)
class DerivationLine:
    clause: LinClause
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    calculus: str
    field: Field
    n: int
    lines: tuple[DerivationLine, ...]

    def __post_init__(self):
        if self.calculus not in CALCULI:
            raise MalformedProof(f"unknown calculus {self.calculus!r}")


def _single_difference(bigger: LinClause, smaller: LinClause):
    """The one literal key in `bigger` but not in `smaller` (multisets), or None."""
    if smaller.multiset() - bigger.multiset():
        return None
    diff = bigger.multiset() - smaller.multiset()
    if sum(diff.values()) != 1:
        return None
    return next(iter(diff))


def _literal(lines, k, i):
    clause = lines[k].clause
    if not 0 <= i < len(clause):
        return None
    return clause.literals[i]


def _is_unit_var(poly: AffinePoly):
    support = poly.support
    return len(support) == 1 and poly.coeffs[support[0]] == 1


def _check_reslin_line(t, line, lines, inputs, field):
    just, clause = line.justification, line.clause
    if any(lit.negated for lit in clause.literals):
        return "Res(lin) clauses contain equations only"
    rule = just.rule

    if rule == "axiom":
        if len(clause) == 2:
            x = min(clause.literals, key=lambda lit: lit.poly.constant).poly
            if x.constant == 0 and _is_unit_var(x) and clause.same_as(equation_clause(x, x.shift(-1))):
                return None
        return "not a boolean axiom x = 0 v x - 1 = 0"

    if rule == "input":
        (j,) = just.params
        if not 0 <= j < len(inputs):
            return f"input {j} does not exist"
        return None if clause.same_as(inputs[j]) else f"clause differs from input {j}"

    if rule == "res":
        k, l = just.premises
        i, j, alpha, beta = just.params
        f, g = _literal(lines, k, i), _literal(lines, l, j)
        if f is None or g is None:
            return "cited literal index out of range"
        combined = f.poly.scale(alpha) + g.poly.scale(beta)
        expected = lines[k].clause.without(i).union(lines[l].clause.without(j), equation_clause(combined))
        return None if clause.same_as(expected) else "clause is not C v D v (alpha f + beta g) = 0"

    if rule == "simp":
        (k,) = just.premises
        removed = _single_difference(lines[k].clause, clause)
        if removed is None:
            return "simplification must drop exactly one literal"
        lit = Literal(AffinePoly.from_vector(removed[0], field), removed[1])
        return None if lit.is_false_constant() else "simplification may only drop a = 0 with a != 0"

    if rule == "weak":
        (k,) = just.premises
        if _single_difference(clause, lines[k].clause) is None:
            return "weakening must add exactly one literal"
        return None

    return f"rule {rule!r} is not a Res(lin) rule"


def _check_neq_line(t, line, lines, inputs, field):
    just, clause = line.justification, line.clause
    if not all(lit.negated for lit in clause.literals):
        return "Res(lin!=) clauses contain inequalities only"
    rule = just.rule
    p = field.p

    if rule == "axiom":
        if len(clause) == 1:
            q = clause.literals[0].poly
            if q.is_constant() and q.constant != 0:
                return None
            if _is_unit_var(q) and 2 <= q.rhs <= p - 1:
                return None
        return "not a boolean axiom x != c (2 <= c < p) or a truth axiom 0 != c (c != 0)"

    if rule == "input":
        (j,) = just.params
        if inputs is None:
            return "input lines need the instance-inputs mode"
        if not 0 <= j < len(inputs):
            return f"input {j} does not exist"
        return None if clause.same_as(inputs[j]) else f"clause differs from input {j}"

    if rule == "res":
        if len(just.premises) != p:
            return f"resolution needs {p} premises (one per residue), got {len(just.premises)}"
        rest = []
        base = None
        for value, (k, i) in enumerate(zip(just.premises, just.params)):
            lit = _literal(lines, k, i)
            if lit is None:
                return "cited literal index out of range"
            if base is None:
                base = lit.poly
            if lit.poly != base.shift(-value):
                return f"premise {value} does not cite f != {value}"
            rest.append(lines[k].clause.without(i))
        expected = rest[0].union(*rest[1:])
        return None if clause.same_as(expected) else "clause is not the union of the premise remainders"

    if rule == "simp":
        (k,) = just.premises
        removed = _single_difference(lines[k].clause, clause)
        if removed is None:
            return "simplification must drop exactly one literal"
        lit = Literal(AffinePoly.from_vector(removed[0], field), removed[1])
        return None if lit.is_false_constant() else "simplification may only drop 0 != 0"

    if rule == "lincomb":
        (k,) = just.premises
        i, g = just.params
        lit = _literal(lines, k, i)
        if lit is None:
            return "cited literal index out of range"
        expected = lines[k].clause.without(i).union(inequality_clause(lit.poly + g, g))
        return None if clause.same_as(expected) else "clause is not C v f + g != a + b v g != b"

    return f"rule {rule!r} is not a Res(lin!=) rule"


def _run(derivation, inputs, line_check, target):
    if not derivation.lines:
        return Verdict.reject("line 0", "derivation has no lines")
    lines = derivation.lines
    for t, line in enumerate(lines):
        for k in line.justification.premises:
            if not 0 <= k < t:
                return Verdict.reject(f"line {t}", f"premise {k} is not an earlier line")
        for lit in line.clause.literals:
            if lit.poly.n != derivation.n or lit.poly.field != derivation.field:
                return Verdict.reject(f"line {t}", "literal over the wrong field or variable count")
        problem = line_check(t, line, lines, inputs, derivation.field)
        if problem is not None:
            logger.info("derivation rejected at line %d: %s", t, problem)
            return Verdict.reject(f"line {t}", problem)
    if not lines[-1].clause.same_as(target):
        return Verdict.reject(f"line {len(lines) - 1}", f"last clause is not the target {target}")
    return Verdict.accept()


def check_reslin(derivation: Derivation, inputs) -> Verdict:
    """Res(lin) refutation of the input clauses: every line checks and the last line is empty."""
    if derivation.calculus != "reslin":
        raise MalformedProof(f"expected a reslin derivation, got {derivation.calculus}")
    return _run(derivation, list(inputs), _check_reslin_line, LinClause())


def check_reslin_neq(derivation: Derivation, inst: LinearSystem, from_inputs=False) -> Verdict:
    """Res(lin!=) derivation of the disjunction of f != a over inst, from axioms alone. With
    from_inputs the instance enters as unit inequalities and the target is the empty clause."""
    if derivation.calculus != "reslin-neq":
        raise MalformedProof(f"expected a reslin-neq derivation, got {derivation.calculus}")
    if from_inputs:
        return _run(derivation, neq_input_clauses(inst), _check_neq_line, LinClause())
    return _run(derivation, None, _check_neq_line, target_clause(inst))


# FILES

def _parse_literal(text, n, field, lineno):
    tokens = text.split()
    if not tokens or tokens[-1] not in ("=", "!="):
        raise ParseError(f"literal {text.strip()!r} must end with '=' or '!='", lineno)
    coeffs, rhs = parse_row(tokens[:-1], n, field.p, lineno)
    return Literal(AffinePoly.equation(coeffs, rhs, field), tokens[-1] == "!=")


def _parse_justification(tokens, calculus, n, field, lineno):
    if not tokens:
        raise ParseError("missing justification", lineno)
    rule, args = tokens[0], tokens[1:]

    def ints(values):
        return tuple(parse_int(v, lineno) for v in values)

    if rule == "axiom" and not args:
        return Justification("axiom")
    if rule == "input" and len(args) == 1:
        return Justification("input", (), ints(args))
    if rule in ("simp", "weak") and len(args) == 1:
        return Justification(rule, ints(args))
    if rule == "res" and calculus == "reslin" and len(args) == 6:
        k, i, l, j, alpha, beta = ints(args)
        return Justification("res", (k, l), (i, j, alpha % field.p, beta % field.p))
    if rule == "res" and calculus == "reslin-neq" and args:
        pairs = []
        for arg in args:
            k, sep, i = arg.partition(":")
            if not sep:
                raise ParseError(f"expected <line>:<literal>, got {arg!r}", lineno)
            pairs.append((parse_int(k, lineno), parse_int(i, lineno)))
        return Justification("res", tuple(k for k, _ in pairs), tuple(i for _, i in pairs))
    if rule == "lincomb" and len(args) == n + 4:
        k, i = ints(args[:2])
        coeffs, b = parse_row(args[2:], n, field.p, lineno)
        return Justification("lincomb", (k,), (i, AffinePoly.equation(coeffs, b, field)))
    raise ParseError(f"malformed justification {' '.join(tokens)!r}", lineno)


def parse_derivation(text) -> Derivation:
    lines = content_lines(text)
    lineno, p = expect_header(lines, "p", 1)
    try:
        field = Field(p)
    except FieldError as exc:
        raise ParseError(str(exc), lineno) from None
    lineno, n = expect_header(lines, "vars", lineno)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing 'calculus' header") from None
    if len(tokens) != 2 or tokens[0] != "calculus" or tokens[1] not in CALCULI:
        raise ParseError(f"expected 'calculus <{'|'.join(CALCULI)}>'", lineno)
    calculus = tokens[1]

    out = []
    for lineno, tokens in lines:
        if len(tokens) < 4 or tokens[0] != "line" or tokens[2] != "clause" or "by" not in tokens:
            raise ParseError("expected 'line <i> clause <literals> by <justification>'", lineno)
        if parse_int(tokens[1], lineno, "line index") != len(out):
            raise ParseError(f"line index must be {len(out)}", lineno)
        cut = tokens.index("by")
        body = " ".join(tokens[3:cut])
        literals = tuple(_parse_literal(part, n, field, lineno) for part in body.split(";") if part.strip())
        just = _parse_justification(tokens[cut + 1:], calculus, n, field, lineno)
        out.append(DerivationLine(LinClause(literals), just))
    return Derivation(calculus, field, n, tuple(out))


def _format_justification(just: Justification):
    if just.rule == "axiom":
        return "axiom"
    if just.rule == "input":
        return f"input {just.params[0]}"
    if just.rule in ("simp", "weak"):
        return f"{just.rule} {just.premises[0]}"
    if just.rule == "res" and len(just.premises) == 2 and len(just.params) == 4:
        k, l = just.premises
        i, j, alpha, beta = just.params
        return f"res {k} {i} {l} {j} {alpha} {beta}"
    if just.rule == "res":
        return "res " + " ".join(f"{k}:{i}" for k, i in zip(just.premises, just.params))
    if just.rule == "lincomb":
        i, g = just.params
        return f"lincomb {just.premises[0]} {i} " + format_row(g.coeffs, g.rhs)
    raise MalformedProof(f"cannot format rule {just.rule!r}")


def format_derivation(derivation: Derivation):
    out = [f"p {derivation.field.p}", f"vars {derivation.n}", f"calculus {derivation.calculus}"]
    for t, line in enumerate(derivation.lines):
        body = "; ".join(lit.format() for lit in line.clause.literals)
        clause = f"clause {body} " if body else "clause "
        out.append(f"line {t} {clause}by {_format_justification(line.justification)}")
    return "\n".join(out) + "\n"


def read_derivation(path) -> Derivation:
    with open(path, encoding="utf-8") as f:
        return parse_derivation(f.read())


def write_derivation(derivation: Derivation, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_derivation(derivation))
