""" brute-force (s, r)-robustness profiles and path witnesses for BinRegDags refutations

A pair (rho, G) is valid for support size s when
    1. G is a subspace of <F>,
    2. G|_rho has no 0-1 solution,
    3. the elements of G together mention every variable in supp(rho),
and r(s) is the least rank of the columns supp(rho) of G over all valid pairs (None: no pair).
"""

import csv
import itertools
import logging
from dataclasses import dataclass

import numpy as np

from linres.config import enumeration_budget
from linres.errors import BudgetExceeded, MalformedProof, NeverReached
from linres.gf import AffineSpan, FMatrix, PartialAssignment, boolean_cube, evaluate_rows, iter_span_elements, rank, solve, zero_one_models
from linres.instances import LinearSystem, code_distance
from linres.refutations import Refutation, build_layered_refutation, check_refutation

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ("s", "r", "support", "values", "dim", "d", "r_le_s", "s_lt_d")


# SUBSPACES

def _galois_count(dim, p):
    """Number of subspaces of every positive dimension of F_p^dim."""
    total = 0
    for j in range(1, dim + 1):
        num = den = 1
        for i in range(j):
            num *= p ** (dim - i) - 1
            den *= p ** (j - i) - 1
        total += num // den
    return total


def iter_subspaces(span: AffineSpan, dims=None, budget=None):
    """Every nonzero subspace of `span` once, by dimension, via canonical echelon coordinates."""
    p, dim = span.field.p, span.dim
    limit = enumeration_budget(budget)
    count = _galois_count(dim, p)
    if count > limit:
        raise BudgetExceeded(f"subspaces of a {dim}-dimensional span", count, limit)
    basis = span.matrix()
    for j in dims if dims is not None else range(1, dim + 1):
        for pivots in itertools.combinations(range(dim), j):
            free = [(r, c) for r, piv in enumerate(pivots) for c in range(piv + 1, dim) if c not in pivots]
            for values in itertools.product(range(p), repeat=len(free)):
                coords = np.zeros((j, dim), dtype=np.int64)
                for r, piv in enumerate(pivots):
                    coords[r, piv] = 1
                for (r, c), v in zip(free, values):
                    coords[r, c] = v
                yield AffineSpan.from_array((coords @ basis) % p, span.n, span.field)


# PROFILES

@dataclass(frozen=True)
class ProfileRow:
    s: int
    r: int | None
    rho: PartialAssignment | None = None
    subspace: AffineSpan | None = None
    d: int = 0

    @property
    def r_le_s(self):
        return self.r is None or self.r <= self.s

    @property
    def s_lt_d(self):
        return self.r is None or self.r <= 1 or self.s < self.d

    def is_robust(self, r):
        """(s, r)-robust: every valid pair has rank at least r."""
        return self.r is None or self.r >= r


@dataclass(frozen=True)
class RobustnessProfile:
    instance: LinearSystem
    d: int
    rows: tuple[ProfileRow, ...]

    def __getitem__(self, s):
        return self.rows[s]

    def consistent(self):
        return all(row.r_le_s and row.s_lt_d for row in self.rows)


def robustness_profile(inst: LinearSystem, s_max, budget=None) -> RobustnessProfile:
    n, p = inst.n, inst.p
    d = code_distance(inst.A, budget)
    best = {s: None for s in range(s_max + 1)}

    for G in iter_subspaces(inst.span, budget=budget):
        models = zero_one_models(G.matrix(), n, p, budget)
        mentioned = G.linear_support()
        linear = G.linear_matrix()
        for s in range(min(s_max, n) + 1):
            for support in itertools.combinations(range(n), s):
                if not mentioned.issuperset(support):
                    continue
                seen = {tuple(int(v) for v in row) for row in models[:, list(support)]}
                missing = next((vals for vals in itertools.product((0, 1), repeat=s) if vals not in seen), None)
                if missing is None:
                    continue
                r = rank(FMatrix(linear[:, list(support)], G.field)) if s else 0
                if best[s] is None or r < best[s][0]:
                    best[s] = (r, PartialAssignment.of(n, dict(zip(support, missing))), G)

    rows = []
    for s in range(s_max + 1):
        if best[s] is None:
            rows.append(ProfileRow(s, None, d=d))
        else:
            r, rho, G = best[s]
            rows.append(ProfileRow(s, r, rho, G, d))
        logger.debug("r(%d) = %s", s, rows[-1].r)
    return RobustnessProfile(inst, d, tuple(rows))


def verify_witness(inst: LinearSystem, row: ProfileRow, budget=None):
    """Re-check the three conditions and the reported rank by scanning every element of G."""
    if row.r is None:
        return True
    G, rho = row.subspace, row.rho
    n, p = inst.n, inst.p
    if len(rho) != row.s or not inst.span.includes(G):
        return False

    mentioned = set()
    for _, elems in iter_span_elements(G, budget):
        mentioned.update(int(j) for j in np.flatnonzero(elems[:, :n].any(axis=0)))
    if not mentioned.issuperset(rho.support):
        return False

    fixed = rho.as_dict()
    free = [j for j in range(n) if j not in fixed]
    rows = G.matrix()
    for chunk in boolean_cube(len(free), budget):
        points = np.zeros((len(chunk), n), dtype=np.int64)
        points[:, free] = chunk
        for j, v in fixed.items():
            points[:, j] = v
        if np.all(evaluate_rows(rows, points, p) == 0, axis=1).any():
            return False

    columns = sorted(rho.support)
    r = rank(FMatrix(G.linear_matrix()[:, columns], G.field)) if columns else 0
    return r == row.r


@dataclass(frozen=True)
class ProbeRow:
    rho: PartialAssignment
    min_equations: int | None


def probe_min_unsat(inst: LinearSystem, s, budget=None):
    """Per rho of support s: fewest equations of a 0-1 unsatisfiable system inside the span of
    (A x = b)|_rho, or None when that span itself has a 0-1 solution. A report only."""
    n, p = inst.n, inst.p
    rows = []
    for support in itertools.combinations(range(n), s):
        for values in itertools.product((0, 1), repeat=s):
            rho = PartialAssignment.of(n, dict(zip(support, values)))
            restricted = inst.span.restrict(rho)
            found = None
            if len(zero_one_models(restricted.matrix(), n, p, budget)) == 0:
                for G in iter_subspaces(restricted, budget=budget):
                    if len(zero_one_models(G.matrix(), n, p, budget)) == 0:
                        found = G.dim
                        break
            rows.append(ProbeRow(rho, found))
    return rows


def layered_size_consistency(inst: LinearSystem, profile: RobustnessProfile, budget=None):
    """The layered refutation has at least 2^(r/2) nodes whenever r(s) = r > 1 with s < d/2."""
    size = None
    for row in profile.rows:
        if row.r is None or row.r <= 1 or not row.s < profile.d / 2:
            continue
        if size is None:
            size = build_layered_refutation(inst, budget=budget).size
        if size < 2 ** (0.5 * row.r):
            logger.warning("layered refutation has %d nodes, below 2^(%d/2)", size, row.r)
            return False
    return True


def write_profile_csv(profile: RobustnessProfile, stream):
    writer = csv.DictWriter(stream, fieldnames=PROFILE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in profile.rows:
        writer.writerow({
            "s": row.s,
            "r": "inf" if row.r is None else row.r,
            "support": " ".join(str(j) for j in sorted(row.rho.support)) if row.rho else "",
            "values": " ".join(str(v) for _, v in row.rho.bindings) if row.rho else "",
            "dim": row.subspace.dim if row.subspace else "",
            "d": row.d,
            "r_le_s": row.r_le_s,
            "s_lt_d": row.s_lt_d,
        })


# PATH WITNESSES

@dataclass(frozen=True)
class PathWitness:
    node: int
    depth: int
    rho_hat: PartialAssignment
    preimage: LinearSystem          # F_rho, inside <F> and restricting to the node system


def _path(proof: Refutation, point):
    """(node id, bindings so far) along the edges that agree with the full point."""
    node_id, bound = proof.root, {}
    steps = [(node_id, dict(bound))]
    while not proof.node(node_id).terminal:
        var = proof.node(node_id).split_var
        edge = next((e for e in proof.children(node_id) if e.value == point[var]), None)
        if edge is None:
            raise MalformedProof(f"node {node_id} has no edge for x{var} = {point[var]}")
        bound[var] = int(point[var])
        node_id = edge.dst
        steps.append((node_id, dict(bound)))
    return steps


def _minimal_subassignment(F: LinearSystem, node_span: AffineSpan, bound):
    """Smallest (then lexicographically first) rho inside `bound` with node_span in <F|_rho>."""
    variables = sorted(bound)
    for size in range(len(variables) + 1):
        for subset in itertools.combinations(variables, size):
            rho = PartialAssignment.of(F.n, {j: bound[j] for j in subset})
            if F.span.restrict(rho).includes(node_span):
                return rho
    return None


def _preimage(F: LinearSystem, node_system: LinearSystem, rho):
    """F_rho: one combination of F per node equation whose restriction is exactly that equation."""
    restricted = F.restrict(rho).augmented()
    columns = FMatrix(restricted.T, F.field)
    combos = []
    for q in node_system.augmented():
        c = solve(columns, [int(v) for v in q])
        if c is None:
            raise MalformedProof("node equation outside the restricted instance span")
        combos.append((np.array(c, dtype=np.int64) @ F.augmented()) % F.p)
    if not combos:
        return LinearSystem.of([], [], F.field, n=F.n)
    rows = np.array(combos, dtype=np.int64)
    return LinearSystem(FMatrix(rows[:, :-1], F.field), tuple(int(v) for v in (-rows[:, -1]) % F.p))


def path_witness(proof: Refutation, point, s, budget=None) -> PathWitness:
    if proof.kind != "binregdag":
        raise MalformedProof(f"path witnesses need a binregdag proof, got {proof.kind}")
    F = proof.node(proof.root).system
    if not check_refutation(proof, F, budget):
        raise MalformedProof("proof is rejected by the checker")
    point = tuple(int(v) for v in point)
    if len(point) != proof.n or any(v not in (0, 1) for v in point):
        raise MalformedProof(f"need a full 0-1 assignment of {proof.n} variables")
    if s > proof.n:
        raise NeverReached(f"no path prefix binds {s} > {proof.n} variables")

    for depth, (node_id, bound) in enumerate(_path(proof, point)):
        system = proof.node(node_id).system
        rho = _minimal_subassignment(F, system.span, bound)
        if rho is not None and len(rho) == s:
            logger.debug("support %d first reached at node %d (depth %d)", s, node_id, depth)
            return PathWitness(node_id, depth, rho, _preimage(F, system, rho))
    raise NeverReached(f"no prefix of the path of {point} has a minimal subassignment of size {s}")
