""" game positions, prover moves and delayer decisions for both Prover-Delayer games """

import hashlib
from dataclasses import dataclass, field, replace
from enum import StrEnum

from linres.errors import IllegalMove
from linres.gf import AffinePoly, FVector
from linres.instances import LinearSystem, form_image
from linres.parsing import format_row


class GameKind(StrEnum):
    LINTREES = "lintrees"
    TREELIKE = "treelike-reslin"


def _digest(text):
    return hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()


# DECISIONS

class Fallback(StrEnum):
    TRUNCATED_UNSAT = "truncated-unsat"         # [F + G]_{w <= tau} has no 0-1 model
    LIFT_OUTSIDE_IMAGE = "lift-outside-image"   # forced value of l is not in l({0,1}^n)
    FEW_BRANCH_VALUES = "few-branch-values"     # fewer than two lifted values lie in l({0,1}^n)


@dataclass(frozen=True)
class Choose:
    value: int                  # lintrees: a in f({0,1}^n); treelike: 0 = first, 1 = second
    fallback: Fallback | None = None

    def format(self):
        return f"choose {self.value}"


@dataclass(frozen=True)
class Branch:
    values: tuple[int, int]
    picked: int | None = None
    fallback: Fallback | None = None

    def format(self):
        c1, c2 = self.values
        return f"branch {c1} {c2} picked {self.picked}"


Decision = Choose | Branch


# LINTREES

@dataclass
class LinTreesPosition:
    """H = F plus the equations added so far; `branching` flags the ones added at branching points."""

    instance: LinearSystem
    added: list[AffinePoly] = field(default_factory=list)
    branching: list[bool] = field(default_factory=list)

    @property
    def n(self):
        return self.instance.n

    @property
    def field(self):
        return self.instance.field

    def equations(self):
        return list(self.instance.equations) + self.added

    def span(self):
        return self.instance.span.extend(self.added) if self.added else self.instance.span

    def branching_equations(self):
        return [q for q, b in zip(self.added, self.branching) if b]

    def nonbranching_equations(self):
        return [q for q, b in zip(self.added, self.branching) if not b]

    def base_span(self):
        """<F + G>: the instance together with the branching equations."""
        g = self.branching_equations()
        return self.instance.span.extend(g) if g else self.instance.span

    def is_over(self):
        return self.span().inconsistent

    def add(self, equation: AffinePoly, branched: bool):
        self.added.append(equation)
        self.branching.append(branched)

    def apply(self, move, decision, pick):
        """Play one round. `pick(values)` is Prover's choice at a branching point."""
        form = tuple(move.form)
        if len(form) != self.n:
            raise IllegalMove(f"form has {len(form)} coefficients, expected {self.n}")
        values = form_image(form, self.field.p)
        if isinstance(decision, Choose):
            if decision.value not in values:
                raise IllegalMove(f"value {decision.value} is not in f({{0,1}}^n) = {values}")
            self.add(AffinePoly.equation(form, decision.value, self.field), False)
            return decision
        c1, c2 = decision.values
        if c1 == c2 or c1 not in values or c2 not in values:
            raise IllegalMove(f"branch values {c1}, {c2} must be distinct elements of {values}")
        picked = pick(decision.values)
        if picked not in decision.values:
            raise IllegalMove(f"prover picked {picked}, not one of {decision.values}")
        self.add(AffinePoly.equation(form, picked, self.field), True)
        return replace(decision, picked=picked)

    def digest(self):
        text = ";".join(f"{'b' if b else 'c'}{q.vector}" for q, b in zip(self.added, self.branching))
        return _digest(text)


@dataclass(frozen=True)
class LinTreesMove:
    form: FVector

    def format(self):
        return "form " + " ".join(str(c) for c in self.form)


# TREE-LIKE RES(LIN)

@dataclass
class TreelikePosition:
    """H!= as polynomials q, each read as q != 0. Starts with 0 != a for every a != 0."""

    instance: LinearSystem
    inequalities: list[AffinePoly] = field(default_factory=list)

    def __post_init__(self):
        if not self.inequalities:
            n, F = self.instance.n, self.instance.field
            self.inequalities = [AffinePoly.constant_poly(-a, n, F) for a in range(1, F.p)]

    @property
    def n(self):
        return self.instance.n

    @property
    def field(self):
        return self.instance.field

    def contains(self, poly: AffinePoly):
        return poly in self.inequalities

    def add(self, poly: AffinePoly):
        self.inequalities.append(poly)

    def apply(self, move, decision, pick):
        """Play one round. Choose/Branch values are sides: 0 = first, 1 = second."""
        if not self.contains(move.pivot):
            raise IllegalMove(f"cited inequality {move.pivot.format('!=')} is not in H")
        if move.first + move.second != move.pivot:
            raise IllegalMove("(f - a) + (g - b) differs from h - c")
        if isinstance(decision, Choose):
            if decision.value not in (0, 1):
                raise IllegalMove(f"side {decision.value} is neither 0 nor 1")
            self.add(move.sides()[decision.value])
            return decision
        picked = pick()
        if picked not in (0, 1):
            raise IllegalMove(f"prover picked side {picked}")
        self.add(move.sides()[picked])
        return replace(decision, picked=picked)

    def endgame_reason(self):
        present = set(q.vector for q in self.inequalities)
        if AffinePoly.zero(self.n, self.field).vector in present:
            return "0 != 0"
        for j in range(self.n):
            x = AffinePoly.variable(j, self.n, self.field)
            if x.vector in present and x.shift(-1).vector in present:
                return f"x{j} != 0 and x{j} != 1"
        for q in self.instance.equations:
            if q.vector in present:
                return f"negated instance equation {q}"
        return None

    def is_over(self):
        return self.endgame_reason() is not None

    def digest(self):
        return _digest(";".join(str(q.vector) for q in self.inequalities))


@dataclass(frozen=True)
class TreelikeMove:
    """Prover cites h != c in H!= and splits h - c = (f - a) + (g - b)."""

    pivot: AffinePoly
    first: AffinePoly
    second: AffinePoly

    def sides(self):
        return (self.first, self.second)

    def format(self):
        parts = [self.pivot, self.first, self.second]
        return "split " + " ; ".join(format_row(q.coeffs, q.rhs) for q in parts)
