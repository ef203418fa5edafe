""" the lower-bound Delayer strategy for LinTrees games and its invariant monitor

each round, with P = <F + G> (instance plus branching equations) and T = [P]_{w <= tau}:
    l' = alpha*l + r := red_P(l)
    T forces l' = c over 0-1 points       -> choose l = c / alpha
    otherwise                             -> branch on the two smallest c keeping T + {l' = c} 0-1 satisfiable
    T itself 0-1 unsatisfiable            -> fallback truncated-unsat
    forced c / alpha outside l({0,1}^n)   -> fallback lift-outside-image
    fewer than two usable branch values   -> fallback few-branch-values
a fallback picks the first value of l({0,1}^n) keeping H solvable over F_p, else 0
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from linres.combinatorics import c_e, c_i
from linres.errors import InfeasibleParams
from linres.gf import AffinePoly, FMatrix, evaluate_rows, reduce_min_weight, solve, truncated_span, zero_one_models
from linres.games.state import Branch, Choose, Fallback, GameKind
from linres.instances import form_image

logger = logging.getLogger(__name__)


def _ceil(x):
    return math.ceil(x - 1e-9)


def _floor(x):
    return math.floor(x + 1e-9)


@dataclass(frozen=True)
class StrategyParams:
    tau: int
    tau0: int
    s_max: int
    c_e: float
    c_i: float

    def __post_init__(self):
        if not self.tau >= self.tau0 >= 1:
            raise InfeasibleParams(f"need tau >= tau0 >= 1, got tau={self.tau}, tau0={self.tau0}")
        if self.s_max < 0:
            raise InfeasibleParams(f"s_max must be non-negative, got {self.s_max}")

    @classmethod
    def for_distance(cls, d, p, tau=None, tau0=None, s_max=None):
        """tau = ceil(d^0.8), tau0 = ceil(d^0.6), s_max = floor(0.5 * C_I^(-1/3) * d^0.2)."""
        ce, ci = c_e(p), c_i(p)
        d = max(d, 1)
        return cls(
            tau=tau if tau is not None else max(1, _ceil(d**0.8)),
            tau0=tau0 if tau0 is not None else max(1, _ceil(d**0.6)),
            s_max=s_max if s_max is not None else _floor(0.5 * ci ** (-1 / 3) * d**0.2),
            c_e=ce,
            c_i=ci,
        )


def _fallback(position, form, cause: Fallback):
    """First value of f({0,1}^n) keeping H + {f = a} solvable over F_p, else 0."""
    logger.info("delayer fallback: %s", cause)
    F = position.field
    H = position.equations()
    rows = [q.coeffs for q in H]
    rhs = [q.rhs for q in H]
    for a in form_image(form, F.p):
        if solve(FMatrix(rows + [list(form)], F), rhs + [a]) is not None:
            return Choose(a, fallback=cause)
    return Choose(0, fallback=cause)


def lower_bound_decide(position, form, params: StrategyParams, budget=None):
    n, F = position.n, position.field
    p = F.p
    P = position.base_span()
    T = truncated_span(P, params.tau, budget)
    models = zero_one_models(T.matrix(), n, p, budget)
    if len(models) == 0:
        return _fallback(position, form, Fallback.TRUNCATED_UNSAT)

    reduced, alpha, _ = reduce_min_weight(P, AffinePoly(tuple(form), 0, F), budget)
    inverse = F.inverse(alpha)
    image = set(form_image(form, p))
    values = sorted(set(int(v) for v in evaluate_rows(np.array([reduced.vector]), models, p)[:, 0]))
    lifted = [(c * inverse) % p for c in values]

    if len(values) == 1:
        if lifted[0] in image:
            return Choose(lifted[0])
        return _fallback(position, form, Fallback.LIFT_OUTSIDE_IMAGE)

    usable = [a for a in lifted if a in image]
    if len(usable) >= 2:
        return Branch((usable[0], usable[1]))
    return _fallback(position, form, Fallback.FEW_BRANCH_VALUES)


class LowerBoundDelayer:
    kind = GameKind.LINTREES

    def __init__(self, params: StrategyParams, budget=None):
        self.params = params
        self.budget = budget

    def start(self, position, rng):
        self.rng = rng

    def decide(self, position, move):
        return lower_bound_decide(position, move.form, self.params, self.budget)

    def observe(self, position, move, decision):
        pass


# INVARIANTS

@dataclass(frozen=True)
class InvariantRecord:
    round: int
    branchings: int
    truncated_satisfiable: bool
    implied: bool
    fallback_seen: bool
    within_s_max: bool

    @property
    def violated(self):
        """Rounds after a fallback never count; satisfiability of T is owed only while branchings < s_max."""
        if self.fallback_seen:
            return False
        return not self.implied or (self.within_s_max and not self.truncated_satisfiable)


def implied_modulo(T_models, P, poly, p):
    """Is there r in P with poly + r vanishing on every 0-1 model of T?"""
    if len(T_models) == 0:
        return True
    target = (-evaluate_rows(np.array([poly.vector]), T_models, p)[:, 0]) % p
    if P.dim == 0:
        return bool(np.all(target == 0))
    columns = evaluate_rows(P.matrix(), T_models, p)
    return solve(FMatrix(columns, P.field), [int(v) for v in target]) is not None


def check_invariants(position, params: StrategyParams, round_index, fallback_seen, budget=None):
    n, p = position.n, position.field.p
    P = position.base_span()
    T = truncated_span(P, params.tau, budget)
    models = zero_one_models(T.matrix(), n, p, budget)
    implied = all(implied_modulo(models, P, q, p) for q in position.nonbranching_equations())
    branchings = sum(position.branching)
    return InvariantRecord(
        round=round_index,
        branchings=branchings,
        truncated_satisfiable=len(models) > 0,
        implied=implied,
        fallback_seen=fallback_seen,
        within_s_max=branchings < params.s_max,
    )


class MonitoredDelayer:
    """Wraps a LinTrees delayer and records both strategy invariants before every decision."""

    kind = GameKind.LINTREES

    def __init__(self, inner, params: StrategyParams, budget=None):
        self.inner = inner
        self.params = params
        self.budget = budget
        self.records = []

    def start(self, position, rng):
        self.records = []
        self._fallback_seen = False
        self.inner.start(position, rng)

    def decide(self, position, move):
        record = check_invariants(position, self.params, len(self.records), self._fallback_seen, self.budget)
        decision = self.inner.decide(position, move)
        self.records.append(record)
        if decision.fallback:
            self._fallback_seen = True
        return decision

    def observe(self, position, move, decision):
        self.inner.observe(position, move, decision)
