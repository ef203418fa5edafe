""" LinSys instances (A, b): code distance, 0-1 image, generators and the instance file format

file format (UTF-8, '#' comments):

    p <prime>
    dims <k> <n>
    c_0 ... c_{n-1} | b_i        (k lines)
"""

import itertools
import json
import logging
from dataclasses import dataclass

import numpy as np

from linres.config import MAX_RETRIES, enumeration_budget
from linres.errors import (
    BudgetExceeded,
    DimensionError,
    FieldError,
    InfeasibleParams,
    NotUnsat,
    ParseError,
    RetriesExhausted,
)
from linres.gf import (
    AffinePoly,
    AffineSpan,
    Field,
    FMatrix,
    FVector,
    PartialAssignment,
    boolean_cube,
    field_points,
    rank,
    solve,
)
from linres.parsing import content_lines, expect_header, format_row, parse_row

logger = logging.getLogger(__name__)


# CONFIG

GENERATOR_KINDS = {
    "reed-solomon": "reed-solomon",
    "rs": "reed-solomon",
    "random-distance": "random-distance",
    "random": "random-distance",
}


# SYSTEMS

@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Equations A . x = b over F_p. Rows are kept exactly as given."""

    A: FMatrix
    b: FVector

    def __post_init__(self):
        b = tuple(int(v) % self.A.field.p for v in self.b)
        if len(b) != self.A.rows:
            raise DimensionError(f"b has length {len(b)}, A has {self.A.rows} rows")
        object.__setattr__(self, "b", b)

    @classmethod
    def of(cls, rows, rhs, field, n=None):
        if not rows:
            if n is None:
                raise DimensionError("an empty system needs an explicit variable count")
            return cls(FMatrix.zeros(0, n, field), ())
        return cls(FMatrix(rows, field), tuple(rhs))

    @classmethod
    def from_polys(cls, polys, n, field):
        """Each polynomial q is read as the equation q = 0."""
        polys = list(polys)
        return cls.of([q.coeffs for q in polys], [q.rhs for q in polys], field, n=n)

    @property
    def field(self):
        return self.A.field

    @property
    def p(self):
        return self.A.field.p

    @property
    def k(self):
        return self.A.rows

    @property
    def n(self):
        return self.A.cols

    @property
    def equations(self):
        return tuple(AffinePoly.equation(self.A.row(i), self.b[i], self.field) for i in range(self.k))

    @property
    def span(self):
        return AffineSpan.of(self.equations, self.n, self.field)

    def augmented(self):
        """k x (n+1) array of the polynomials A_i . x - b_i."""
        return np.hstack([self.A.entries, (-np.array(self.b, dtype=np.int64) % self.p).reshape(-1, 1)])

    def restrict(self, rho: PartialAssignment):
        if rho.n != self.n:
            raise DimensionError(f"assignment over {rho.n} variables, system over {self.n}")
        if not rho.bindings:
            return self
        idx = [j for j, _ in rho.bindings]
        vals = np.array([v for _, v in rho.bindings], dtype=np.int64)
        entries = self.A.entries.copy()
        b = (np.array(self.b, dtype=np.int64) - entries[:, idx] @ vals) % self.p
        entries[:, idx] = 0
        return LinearSystem(FMatrix(entries, self.field), tuple(int(v) for v in b))

    def stack(self, polys):
        extra = LinearSystem.from_polys(polys, self.n, self.field)
        if extra.k == 0:
            return self
        return LinearSystem(FMatrix(np.vstack([self.A.entries, extra.A.entries]), self.field), self.b + extra.b)

    def is_fp_solvable(self):
        return solve(self.A, self.b) is not None

    def satisfied_by(self, point):
        return all(q.evaluate(point) == 0 for q in self.equations)

    def key(self):
        return (self.A.entries.tobytes(), self.b)

    def __eq__(self, other):
        if not isinstance(other, LinearSystem):
            return NotImplemented
        return self.A == other.A and self.b == other.b

    def __hash__(self):
        return hash((self.A, self.b))

    def __str__(self):
        return "{" + ", ".join(str(q) for q in self.equations) + "}"


# IMAGES

class ZeroOneImage:
    """A({0,1}^n) as a boolean mask over F_p^k (indexed by coordinates)."""

    def __init__(self, mask, p):
        mask = np.asarray(mask, dtype=bool)
        mask.setflags(write=False)
        self._mask = mask
        self.p = p
        self.k = mask.ndim

    def __contains__(self, vector):
        vector = tuple(int(v) % self.p for v in vector)
        if len(vector) != self.k:
            raise DimensionError(f"vector of length {len(vector)} in an image inside F_p^{self.k}")
        return bool(self._mask[vector])

    def __len__(self):
        return int(self._mask.sum())

    def __iter__(self):
        for idx in np.argwhere(self._mask):
            yield tuple(int(v) for v in idx)

    def is_full(self):
        return bool(self._mask.all())

    def first_missing(self) -> FVector | None:
        """Lexicographically smallest vector outside the image."""
        missing = np.flatnonzero(~self._mask.ravel())
        if missing.size == 0:
            return None
        if self.k == 0:
            return ()
        return tuple(int(v) for v in np.unravel_index(int(missing[0]), self._mask.shape))

    def as_set(self):
        return frozenset(self)


def _shift_or(mask, shift):
    if mask.ndim == 0:
        return mask
    axes = tuple(range(mask.ndim))
    return mask | np.roll(mask, shift=tuple(int(s) for s in shift), axis=axes)


def zero_one_image(A: FMatrix, budget=None) -> ZeroOneImage:
    """Exact image of the boolean cube, built column by column as a sumset over F_p^k."""
    p, k, n = A.field.p, A.rows, A.cols
    limit = enumeration_budget(budget)
    if p**k > limit:
        raise BudgetExceeded("0-1 image mask", p**k, limit)
    mask = np.zeros((p,) * k, dtype=bool)
    mask[(0,) * k] = True
    for j in range(n):
        mask = _shift_or(mask, A.entries[:, j])
    return ZeroOneImage(mask, p)


def form_image(form, p):
    """Sorted values of the linear form over {0,1}^n, without enumerating the cube."""
    coeffs = form.coeffs if isinstance(form, AffinePoly) else tuple(form)
    mask = np.zeros(p, dtype=bool)
    mask[0] = True
    for c in coeffs:
        if c % p:
            mask = mask | np.roll(mask, int(c) % p)
    return tuple(int(v) for v in np.flatnonzero(mask))


def zero_one_sat(system: LinearSystem, budget=None) -> FVector | None:
    """The lexicographically first 0-1 solution, or None."""
    rows = system.A.entries
    target = np.array(system.b, dtype=np.int64)
    for points in boolean_cube(system.n, budget):
        hits = np.all((points @ rows.T) % system.p == target, axis=1)
        if hits.any():
            return tuple(int(v) for v in points[int(np.argmax(hits))])
    return None


def code_distance(A: FMatrix, budget=None):
    """min over nonzero y of weight(y . A); 0 iff the rows are dependent."""
    p, k = A.field.p, A.rows
    if k == 0:
        raise DimensionError("code distance of a matrix with no rows is undefined")
    best = A.cols
    for ys in field_points(p, k, budget):
        ys = ys[np.any(ys != 0, axis=1)]
        if ys.size == 0:
            continue
        weights = np.count_nonzero((ys @ A.entries) % p, axis=1)
        best = min(best, int(weights.min()))
        if best == 0:
            break
    return best


# GENERATORS

def reed_solomon_matrix(field: Field, n, k):
    """Rows (j^i) for i in [0, k) at evaluation points j in [0, n); needs k <= n <= p."""
    if n > field.p:
        raise InfeasibleParams(f"Reed-Solomon needs n <= p, got n={n}, p={field.p}")
    if not 0 < k <= n:
        raise InfeasibleParams(f"Reed-Solomon needs 0 < k <= n, got k={k}, n={n}")
    entries = [[pow(j, i, field.p) for j in range(n)] for i in range(k)]
    return FMatrix(entries, field)


def random_matrix(field: Field, k, n, rng):
    return FMatrix(rng.integers(0, field.p, size=(k, n)), field)


@dataclass(frozen=True)
class EccInstance:
    system: LinearSystem
    d: int
    kind: str
    seed: int | None = None

    @property
    def k(self):
        return self.system.k

    @property
    def n(self):
        return self.system.n

    @property
    def p(self):
        return self.system.p

    @classmethod
    def from_system(cls, system, kind="file", seed=None, budget=None):
        """Recompute d and re-verify 0-1 unsatisfiability."""
        witness = zero_one_sat(system, budget)
        if witness is not None:
            raise NotUnsat(witness)
        return cls(system, code_distance(system.A, budget), kind, seed)

    def manifest(self):
        return {
            "kind": self.kind,
            "seed": self.seed,
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "d": self.d,
            "b": list(self.system.b),
        }


def gen_instance(kind, p, n, k, min_d=0, seed=None, *, matrix=None, budget=None) -> EccInstance:
    field = Field(p)
    try:
        kind = GENERATOR_KINDS[kind]
    except KeyError:
        raise InfeasibleParams(f"unknown generator kind {kind!r}") from None

    if matrix is not None:
        A = matrix if isinstance(matrix, FMatrix) else FMatrix(matrix, field)
        d = code_distance(A, budget)
        if d < min_d:
            raise InfeasibleParams(f"forced matrix has distance {d} < {min_d}")
    else:
        if 2**n >= p**k:
            raise InfeasibleParams(f"2^{n} >= {p}^{k}: the 0-1 image may cover F_{p}^{k}")
        if kind == "reed-solomon":
            A = reed_solomon_matrix(field, n, k)
            d = code_distance(A, budget)
            if d < min_d:
                raise InfeasibleParams(f"Reed-Solomon ({k}, {n}) has distance {d} < {min_d}")
        else:
            rng = np.random.default_rng(seed)
            for attempt in range(1, MAX_RETRIES + 1):
                A = random_matrix(field, k, n, rng)
                d = code_distance(A, budget)
                if d >= min_d:
                    logger.debug("random-distance matrix accepted after %d attempts (d=%d)", attempt, d)
                    break
            else:
                raise RetriesExhausted(f"no {k}x{n} matrix with distance >= {min_d} in {MAX_RETRIES} tries")

    b = zero_one_image(A, budget).first_missing()
    if b is None:
        raise InfeasibleParams("the 0-1 image covers F_p^k; no unsatisfiable right-hand side exists")

    logger.info("generated %s instance p=%d k=%d n=%d d=%d", kind, p, A.rows, A.cols, d)
    return EccInstance(LinearSystem(A, b), d, kind, seed)


def optimal_rate_check(A: FMatrix, budget=None):
    """(True, None) iff rank(A_I) >= (k/n)|I| for all nonempty I; otherwise (False, I) for the
    smallest violating I (by size, then lexicographically)."""
    k, n = A.rows, A.cols
    limit = enumeration_budget(budget)
    if 2**n > limit:
        raise BudgetExceeded("column subsets", 2**n, limit)
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            if rank(A.columns(subset)) * n < k * size:
                return False, subset
    return True, None


# FILES

def format_instance(system: LinearSystem):
    lines = [f"p {system.p}", f"dims {system.k} {system.n}"]
    lines += [format_row(system.A.row(i), system.b[i]) for i in range(system.k)]
    return "\n".join(lines) + "\n"


def parse_instance(text) -> LinearSystem:
    lines = content_lines(text)
    _, p = expect_header(lines, "p", 1)
    try:
        field = Field(p)
    except FieldError as exc:
        raise ParseError(str(exc), 1) from None

    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing 'dims <k> <n>' header") from None
    if len(tokens) != 3 or tokens[0] != "dims":
        raise ParseError("expected 'dims <k> <n>'", lineno)
    try:
        k, n = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise ParseError("dims must be integers", lineno) from None
    if k < 0 or n < 0:
        raise ParseError("dims must be non-negative", lineno)

    rows, rhs = [], []
    for lineno, tokens in lines:
        if len(rows) == k:
            raise ParseError(f"more than {k} equation rows", lineno)
        coeffs, value = parse_row(tokens, n, p, lineno)
        rows.append(coeffs)
        rhs.append(value)
    if len(rows) != k:
        raise ParseError(f"expected {k} equation rows, found {len(rows)}")
    return LinearSystem.of(rows, rhs, field, n=n)


def read_instance(path) -> LinearSystem:
    with open(path, encoding="utf-8") as f:
        return parse_instance(f.read())


def write_instance(system: LinearSystem, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_instance(system))


def write_manifest(instance: EccInstance, path, instance_path=None):
    manifest = instance.manifest()
    if instance_path is not None:
        manifest["instance"] = str(instance_path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("manifest written to %s", path)
