""" zero-one sumsets over F_p^m and the constructive procedures built on them

A_1 + ... + A_t always means the zero-one sumset {sum eps_v * v : eps in {0,1}} over every
vector of every block, i.e. the image of the boolean cube under the column map. Points of
F_p^m are encoded base p, most significant coordinate first.
"""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from linres.config import enumeration_budget
from linres.errors import BudgetExceeded, DimensionError, InvariantViolation, NotFound, PreconditionFailed
from linres.gf import (
    AffinePoly,
    AffineSpan,
    Field,
    FMatrix,
    FVector,
    PartialAssignment,
    evaluate_rows,
    field_points,
    iter_span_elements,
    rank,
    span_sum,
    span_weight,
    truncated_span,
    zero_one_models,
)
from linres.instances import code_distance

logger = logging.getLogger(__name__)


# CONSTANTS

def c_e(p):
    """C_{E,p} = 1 / (log(p+1)/log(p) - 1)."""
    return 1.0 / (math.log(p + 1) / math.log(p) - 1.0)


def c_i(p):
    return 6.0 * c_e(p)


# FAMILIES

@dataclass(frozen=True)
class BasisFamily:
    """Blocks A_1..A_t, each m linearly independent vectors of F_p^m."""

    field: Field
    m: int
    blocks: tuple[tuple[FVector, ...], ...]

    def __post_init__(self):
        for i, block in enumerate(self.blocks):
            if len(block) != self.m or any(len(v) != self.m for v in block):
                raise DimensionError(f"block {i} is not {self.m} vectors of length {self.m}")
            if rank(FMatrix(block, self.field)) != self.m:
                raise DimensionError(f"block {i} has rank below {self.m}")

    @property
    def t(self):
        return len(self.blocks)

    def vectors(self):
        return [v for block in self.blocks for v in block]


def random_basis_family(field: Field, m, t, rng) -> BasisFamily:
    blocks = []
    while len(blocks) < t:
        candidate = rng.integers(0, field.p, size=(m, m))
        if rank(FMatrix(candidate, field)) == m:
            blocks.append(tuple(tuple(int(c) for c in row) for row in candidate))
    return BasisFamily(field, m, tuple(blocks))


# SUMSETS

class SumsetSearch:
    """Incremental zero-one sumset with one witness per reached point (first found)."""

    def __init__(self, p, m, budget=None):
        limit = enumeration_budget(budget)
        if p**m > limit:
            raise BudgetExceeded(f"F_{p}^{m} sumset mask", p**m, limit)
        self.p, self.m = p, m
        self.points = np.vstack(list(field_points(p, m, budget)))
        self.powers = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
        self.reached = np.zeros(p**m, dtype=bool)
        self.reached[0] = True
        self.parent = np.full(p**m, -1, dtype=np.int64)
        self.via = np.full(p**m, -1, dtype=np.int64)
        self.vectors = []

    def encode(self, vector):
        return int(np.dot(np.mod(np.asarray(vector, dtype=np.int64), self.p), self.powers))

    def _translate(self, vector):
        return ((self.points + np.asarray(vector, dtype=np.int64)) % self.p) @ self.powers

    def add(self, vector):
        index = len(self.vectors)
        self.vectors.append(tuple(int(c) for c in vector))
        src = np.flatnonzero(self.reached)
        dst = self._translate(vector)[src]
        fresh = ~self.reached[dst]
        self.reached[dst[fresh]] = True
        self.parent[dst[fresh]] = src[fresh]
        self.via[dst[fresh]] = index

    def __contains__(self, vector):
        return bool(self.reached[self.encode(vector)])

    def __len__(self):
        return int(self.reached.sum())

    def is_full(self):
        return bool(self.reached.all())

    def as_set(self):
        return frozenset(tuple(int(c) for c in self.points[i]) for i in np.flatnonzero(self.reached))

    def witness(self, vector) -> FVector:
        """0-1 coefficients over the vectors added so far summing to `vector`."""
        code = self.encode(vector)
        if not self.reached[code]:
            raise NotFound(f"{tuple(vector)} is not in the sumset")
        eps = [0] * len(self.vectors)
        while code != 0:
            eps[int(self.via[code])] = 1
            code = int(self.parent[code])
        return tuple(eps)

    def line_start(self, direction):
        """Smallest a with a + alpha*direction reached for every alpha, or None."""
        ok = self.reached.copy()
        for alpha in range(1, self.p):
            ok &= self.reached[self._translate(np.asarray(direction, dtype=np.int64) * alpha)]
        hits = np.flatnonzero(ok)
        if hits.size == 0:
            return None
        return tuple(int(c) for c in self.points[hits[0]])


class SumsetWitnessMap:
    """point of F_p^m -> 0-1 coefficient vector over the family's vectors."""

    def __init__(self, search: SumsetSearch):
        self._search = search

    def __getitem__(self, point):
        return self._search.witness(point)

    def __contains__(self, point):
        return point in self._search

    def __len__(self):
        return len(self._search)

    def keys(self):
        return sorted(self._search.as_set())


def _family_vectors(family, field=None):
    if isinstance(family, BasisFamily):
        return family.field, family.m, family.vectors()
    vectors = [tuple(int(c) for c in v) for v in family]
    if field is None:
        raise DimensionError("a plain vector list needs its field")
    if not vectors:
        raise DimensionError("empty vector family has no ambient dimension")
    return field, len(vectors[0]), vectors


def zero_one_sumset(family, field=None, budget=None):
    """(set of points, witness map) for the zero-one sumset of every vector in `family`."""
    field, m, vectors = _family_vectors(family, field)
    search = SumsetSearch(field.p, m, budget)
    for v in vectors:
        search.add(v)
    logger.debug("zero-one sumset of %d vectors covers %d of %d points", len(vectors), len(search), field.p**m)
    return search.as_set(), SumsetWitnessMap(search)


def cover_check_addcomb(family: BasisFamily, budget=None):
    points, _ = zero_one_sumset(family, budget=budget)
    return len(points) == family.field.p**family.m


def _independent_of(vectors, v, field):
    if not vectors:
        return any(c % field.p for c in v)
    return rank(FMatrix(list(vectors) + [v], field)) > rank(FMatrix(list(vectors), field))


def find_line(S, family: BasisFamily, budget=None):
    """(v, a): v from some block, v outside <S>, and the whole line a + alpha*v inside the sumset.

    Blocks are added one at a time; after each, directions of the next block (every block
    after the last one) are tried."""
    field, m = family.field, family.m
    S = [tuple(int(c) for c in s) for s in S]
    if len(S) >= m:
        raise PreconditionFailed(f"|S| = {len(S)} must be below m = {m}")
    search = SumsetSearch(field.p, m, budget)
    blocks = family.blocks
    for i, block in enumerate(blocks):
        for v in block:
            search.add(v)
        directions = blocks[i + 1] if i + 1 < len(blocks) else family.vectors()
        for v in directions:
            if not _independent_of(S, v, field):
                continue
            a = search.line_start(v)
            if a is not None:
                logger.debug("line through %s in direction %s after %d blocks", a, v, i + 1)
                return v, a
    raise NotFound(f"no full line among {family.t} blocks")


def extract_independent_blocks(M: FMatrix, m):
    """Greedy disjoint m-subsets of linearly independent columns, in column order."""
    remaining = list(range(M.cols))
    blocks = []
    while True:
        block = []
        for j in remaining:
            if rank(M.columns(block + [j])) > len(block):
                block.append(j)
                if len(block) == m:
                    break
        if len(block) < m:
            return blocks
        blocks.append(tuple(block))
        remaining = [j for j in remaining if j not in block]


def ecc_sat_solve(M: FMatrix, a, budget=None):
    """x in {0,1}^n with M x = a, for M of distance at least C_E * m^3."""
    m, n, p = M.rows, M.cols, M.field.p
    if len(a) != m:
        raise DimensionError(f"target has length {len(a)}, matrix has {m} rows")
    if m == 0:
        return (0,) * n
    d = code_distance(M, budget)
    need = c_e(p) * m**3
    if d < need:
        raise PreconditionFailed(f"distance {d} is below C_E * m^3 = {need:.2f}")

    blocks = extract_independent_blocks(M, m)
    if len(blocks) < math.ceil(c_e(p) * m**2):
        logger.warning("only %d independent blocks extracted, expected %d", len(blocks), math.ceil(c_e(p) * m**2))
    used = [j for block in blocks for j in block]
    order = used + [j for j in range(n) if j not in set(used)]

    search = SumsetSearch(p, m, budget)
    target = tuple(int(c) % p for c in a)
    for j in order:
        if target in search:
            break
        search.add(M.column(j))
    eps = search.witness(target)

    x = [0] * n
    for position, bit in enumerate(eps):
        if bit:
            x[order[position]] = 1
    logger.debug("ecc-sat solution after %d of %d columns (%d blocks)", len(eps), n, len(blocks))
    return tuple(x)


# IMPLICATION AND NARROW EQUATIONS

class Implication(StrEnum):
    IMPLIED_IN_SPAN = "implied_in_span"
    IMPLIED_NOT_IN_SPAN = "implied_not_in_span"
    NOT_IMPLIED = "not_implied"


def implied_equation_check(P: AffineSpan, h: AffinePoly, budget=None):
    """(classification, witness): witness is a 0-1 model of P where h != 0, else None."""
    models = zero_one_models(P.matrix(), P.n, P.field.p, budget)
    if len(models):
        values = evaluate_rows(np.array([h.vector]), models, P.field.p)[:, 0]
        bad = np.flatnonzero(values)
        if bad.size:
            return Implication.NOT_IMPLIED, tuple(int(c) for c in models[bad[0]])
    if P.contains(h):
        return Implication.IMPLIED_IN_SPAN, None
    return Implication.IMPLIED_NOT_IN_SPAN, None


def _light_element(span: AffineSpan, below, budget=None):
    """First element of minimum positive weight if that weight is below `below`, else None."""
    best = None
    for _, elems in iter_span_elements(span, budget):
        weights = np.count_nonzero(elems[:, : span.n], axis=1)
        weights = np.where(weights > 0, weights, span.n + 1)
        i = int(np.argmin(weights))
        if weights[i] <= span.n and (best is None or weights[i] < best[0]):
            best = (int(weights[i]), elems[i])
    if best is None or best[0] >= below:
        return None
    return AffinePoly.from_vector(best[1], span.field)


def _full_assignment(rho0, n):
    if isinstance(rho0, PartialAssignment):
        if len(rho0) != n:
            raise PreconditionFailed("rho0 must assign every variable")
        return rho0.as_dict()
    if len(rho0) != n:
        raise DimensionError(f"rho0 has {len(rho0)} values, expected {n}")
    return {j: int(v) for j, v in enumerate(rho0)}


def kill_narrow(P: AffineSpan, R: AffineSpan, rho0, tau0, budget=None) -> PartialAssignment:
    """rho inside rho0 with |supp(rho)| <= dim(R)*tau0 and every nonconstant element of
    (P + R)|_rho of weight at least tau0."""
    n, p = P.n, P.field.p
    values = _full_assignment(rho0, n)
    dim_r = R.dim

    w = span_weight(P, budget)
    if w is not None and dim_r > 0.5 * w / tau0 - 1:
        raise PreconditionFailed(f"dim(R) = {dim_r} exceeds 0.5 * {w} / {tau0} - 1")
    Q = span_sum(P, R)
    T = truncated_span(Q, 2 * dim_r * tau0, budget)
    point = np.array([[values[j] for j in range(n)]], dtype=np.int64)
    if T.dim and np.any(evaluate_rows(T.matrix(), point, p)):
        raise PreconditionFailed("rho0 does not satisfy the truncated span of P + R")

    rho = PartialAssignment(n)
    steps = 0
    while (light := _light_element(Q.restrict(rho), tau0, budget)) is not None:
        steps += 1
        if steps > dim_r:
            raise InvariantViolation(f"kill_narrow needed more than dim(R) = {dim_r} steps")
        rho = rho.extend({j: values[j] for j in light.support})
        logger.debug("step %d: killed %s, |rho| = %d", steps, light, len(rho))

    if len(rho) > dim_r * tau0:
        raise InvariantViolation(f"|supp(rho)| = {len(rho)} exceeds dim(R) * tau0 = {dim_r * tau0}")
    left = span_weight(Q.restrict(rho), budget)
    if left is not None and left < tau0:
        raise InvariantViolation(f"restricted span still has weight {left} < {tau0}")
    return rho


@dataclass(frozen=True)
class DimBound:
    hypothesis: bool                # w(P) > (dim(R) + 1) * tau0
    literal_hypothesis: bool        # w(P) > dim(R) * tau0
    truncated_dim: int
    bound: int

    @property
    def holds(self):
        return not self.hypothesis or self.truncated_dim <= self.bound

    @property
    def literal_gap(self):
        """The weaker weight condition holds and the dimension bound still fails."""
        return self.literal_hypothesis and not self.hypothesis and self.truncated_dim > self.bound

    def __bool__(self):
        return self.holds


def trunc_dim_bound_check(P: AffineSpan, R: AffineSpan, tau0, budget=None) -> DimBound:
    """dim([P + R]_{w <= tau0}) <= dim(R) for a consistent P with w(P) > (dim(R) + 1) * tau0.

    Any dim(R) + 1 independent light elements of P + R combine to a nonzero element of P of
    weight at most (dim(R) + 1) * tau0. Under w(P) > dim(R) * tau0 alone the bound can fail:
    P = <x_0>, R = 0, tau0 = 2.
    """
    w = span_weight(P, budget)
    T = truncated_span(span_sum(P, R), tau0, budget)
    return DimBound(
        hypothesis=not P.inconsistent and (w is None or w > (R.dim + 1) * tau0),
        literal_hypothesis=not P.inconsistent and (w is None or w > R.dim * tau0),
        truncated_dim=T.dim,
        bound=R.dim,
    )


# IMAGE SIZE

@dataclass(frozen=True)
class ImageWitness:
    image_size: int
    bound: float
    prefix: tuple[int, ...]                      # r independent columns
    suffix: tuple[tuple[int, int], ...]          # (column, value) of the heaviest fiber
    fiber: int


def _independent_columns(M: FMatrix):
    chosen = []
    for j in range(M.cols):
        if rank(M.columns(chosen + [j])) > len(chosen):
            chosen.append(j)
    return chosen


def image_size_bound_check(M: FMatrix, X, eps):
    """(|M(X)| >= 2^(r - eps*n), witness) for X inside {0,1}^n with |X| >= 2^((1-eps)*n)."""
    n, p = M.cols, M.field.p
    if not 0 <= eps <= 1:
        raise PreconditionFailed(f"eps must lie in [0, 1], got {eps}")
    points = np.array(sorted(set(tuple(int(c) for c in x) for x in X)), dtype=np.int64).reshape(-1, n)
    if points.size and (np.any((points != 0) & (points != 1))):
        raise PreconditionFailed("X must be a subset of {0,1}^n")
    if len(points) == 0:
        raise PreconditionFailed("X is empty")
    if len(points) < 2 ** ((1 - eps) * n) - 1e-9:
        raise PreconditionFailed(f"|X| = {len(points)} is below 2^((1 - {eps}) * {n})")

    image = {tuple(int(c) for c in row) for row in (points @ M.entries.T) % p}
    prefix = _independent_columns(M)
    r = len(prefix)
    rest = [j for j in range(n) if j not in set(prefix)]
    fibers = {}
    for x in points:
        key = tuple(int(x[j]) for j in rest)
        fibers[key] = fibers.get(key, 0) + 1
    suffix, fiber = max(sorted(fibers.items()), key=lambda kv: kv[1])
    bound = 2 ** (r - eps * n)
    witness = ImageWitness(len(image), bound, tuple(prefix), tuple(zip(rest, suffix)), fiber)
    return len(image) >= bound - 1e-9, witness
