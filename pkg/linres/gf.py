""" exact arithmetic and linear algebra over F_p: matrices, affine polynomials, spans, restrictions """

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from linres.config import ENUM_CHUNK, enumeration_budget
from linres.errors import BudgetExceeded, DimensionError, FieldError, LinresError

logger = logging.getLogger(__name__)

FVector = tuple[int, ...]


# FIELD

@dataclass(frozen=True)
class Field:
    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, (int, np.integer)):
            raise FieldError(f"modulus must be an integer, got {self.p!r}")
        if self.p < 5:
            raise FieldError(f"modulus must be at least 5, got {self.p}")
        if not isprime(int(self.p)):
            raise FieldError(f"modulus must be prime, got {self.p}")
        object.__setattr__(self, "p", int(self.p))

    def reduce(self, values):
        return np.mod(np.asarray(values, dtype=np.int64), self.p)

    def vector(self, entries) -> FVector:
        return tuple(int(v) % self.p for v in entries)

    def inverse(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def elements(self):
        return range(self.p)

    def __str__(self):
        return f"F_{self.p}"


# MATRICES

@dataclass(frozen=True, eq=False)
class FMatrix:
    entries: np.ndarray
    field: Field

    def __post_init__(self):
        arr = np.mod(np.array(self.entries, dtype=np.int64), self.field.p)
        if arr.ndim != 2:
            raise DimensionError(f"matrix entries must be 2-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def zeros(cls, rows, cols, field):
        return cls(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, size, field):
        return cls(np.eye(size, dtype=np.int64), field)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def row(self, i) -> FVector:
        return tuple(int(v) for v in self.entries[i])

    def column(self, j) -> FVector:
        return tuple(int(v) for v in self.entries[:, j])

    def columns(self, indices):
        return FMatrix(self.entries[:, list(indices)].reshape(self.rows, len(indices)), self.field)

    def hstack(self, other):
        if other.field != self.field or other.rows != self.rows:
            raise DimensionError("hstack needs matching fields and row counts")
        return FMatrix(np.hstack([self.entries, other.entries]), self.field)

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.field.p, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"FMatrix({self.tolist()}, p={self.field.p})"


def _rref_array(a, p, pivot_limit=None):
    """Gauss-Jordan elimination mod p. Returns the reduced array and its pivot columns."""
    r = np.mod(np.array(a, dtype=np.int64), p)
    m, cols = r.shape
    limit = cols if pivot_limit is None else pivot_limit
    pivots = []
    row = 0
    for col in range(limit):
        if row == m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        found = row + int(nz[0])
        if found != row:
            r[[row, found]] = r[[found, row]]
        r[row] = (r[row] * pow(int(r[row, col]), -1, p)) % p
        factors = r[:, col].copy()
        factors[row] = 0
        r = (r - np.outer(factors, r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rref(matrix: FMatrix) -> tuple[FMatrix, int]:
    """Reduced row echelon form (zero rows last) and rank."""
    reduced, pivots = _rref_array(matrix.entries, matrix.field.p)
    return FMatrix(reduced, matrix.field), len(pivots)


def rank(matrix: FMatrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return len(_rref_array(matrix.entries, matrix.field.p)[1])


def solve(matrix: FMatrix, rhs: Sequence[int]) -> FVector | None:
    """One solution of matrix @ x = rhs (free variables set to 0), or None if unsolvable."""
    p = matrix.field.p
    if len(rhs) != matrix.rows:
        raise DimensionError(f"rhs has length {len(rhs)}, matrix has {matrix.rows} rows")
    if matrix.rows == 0:
        return (0,) * matrix.cols
    augmented = np.hstack([matrix.entries, np.mod(np.array(rhs, dtype=np.int64), p).reshape(-1, 1)])
    reduced, pivots = _rref_array(augmented, p)
    if pivots and pivots[-1] == matrix.cols:
        return None
    x = [0] * matrix.cols
    for row, col in enumerate(pivots):
        x[col] = int(reduced[row, -1])
    return tuple(x)


# PARTIAL ASSIGNMENTS

@dataclass(frozen=True)
class PartialAssignment:
    n: int
    bindings: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        seen = {}
        for index, value in self.bindings:
            index, value = int(index), int(value)
            if not 0 <= index < self.n:
                raise DimensionError(f"variable x{index} outside [0, {self.n})")
            if value not in (0, 1):
                raise LinresError(f"x{index} bound to {value}; only 0 and 1 are allowed")
            if seen.get(index, value) != value:
                raise LinresError(f"x{index} bound twice with different values")
            seen[index] = value
        object.__setattr__(self, "bindings", tuple(sorted(seen.items())))

    @classmethod
    def of(cls, n, mapping: Mapping[int, int]):
        return cls(n, tuple(mapping.items()))

    @classmethod
    def from_point(cls, point, support=None):
        indices = range(len(point)) if support is None else support
        return cls(len(point), tuple((j, int(point[j])) for j in indices))

    @property
    def support(self):
        return frozenset(j for j, _ in self.bindings)

    def as_dict(self):
        return dict(self.bindings)

    def get(self, index, default=None):
        return self.as_dict().get(index, default)

    def extend(self, mapping):
        merged = self.as_dict()
        extra = mapping.as_dict() if isinstance(mapping, PartialAssignment) else dict(mapping)
        for j, v in extra.items():
            if merged.get(j, v) != v:
                raise LinresError(f"x{j} already bound to {merged[j]}")
            merged[j] = v
        return PartialAssignment.of(self.n, merged)

    def restricted_to(self, indices):
        keep = set(indices)
        return PartialAssignment(self.n, tuple((j, v) for j, v in self.bindings if j in keep))

    def __len__(self):
        return len(self.bindings)

    def __contains__(self, index):
        return index in self.support

    def __str__(self):
        if not self.bindings:
            return "{}"
        return "{" + ", ".join(f"x{j}<-{v}" for j, v in self.bindings) + "}"


# AFFINE POLYNOMIALS

@dataclass(frozen=True)
class AffinePoly:
    """The polynomial coeffs . x + constant; the equation f = a is stored as f - a."""

    coeffs: FVector
    constant: int
    field: Field

    def __post_init__(self):
        p = self.field.p
        object.__setattr__(self, "coeffs", tuple(int(c) % p for c in self.coeffs))
        object.__setattr__(self, "constant", int(self.constant) % p)

    @classmethod
    def equation(cls, coeffs, rhs, field):
        return cls(tuple(coeffs), -int(rhs), field)

    @classmethod
    def variable(cls, index, n, field, value=0):
        coeffs = [0] * n
        coeffs[index] = 1
        return cls(tuple(coeffs), -int(value), field)

    @classmethod
    def zero(cls, n, field):
        return cls((0,) * n, 0, field)

    @classmethod
    def constant_poly(cls, c, n, field):
        return cls((0,) * n, c, field)

    @classmethod
    def from_vector(cls, vector, field):
        vector = tuple(int(v) for v in vector)
        return cls(vector[:-1], vector[-1], field)

    @property
    def n(self):
        return len(self.coeffs)

    @property
    def rhs(self):
        return (-self.constant) % self.field.p

    @property
    def vector(self) -> FVector:
        return self.coeffs + (self.constant,)

    @property
    def weight(self):
        return sum(1 for c in self.coeffs if c)

    @property
    def support(self):
        return tuple(j for j, c in enumerate(self.coeffs) if c)

    def is_zero(self):
        return self.constant == 0 and not any(self.coeffs)

    def is_constant(self):
        return not any(self.coeffs)

    def linear_part(self):
        return AffinePoly(self.coeffs, 0, self.field)

    def _check(self, other):
        if other.field != self.field or other.n != self.n:
            raise DimensionError("polynomials over different fields or variable counts")

    def __add__(self, other):
        self._check(other)
        return AffinePoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.constant + other.constant, self.field)

    def __sub__(self, other):
        self._check(other)
        return AffinePoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
                          self.constant - other.constant, self.field)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, alpha):
        return AffinePoly(tuple(alpha * c for c in self.coeffs), alpha * self.constant, self.field)

    def shift(self, delta):
        return AffinePoly(self.coeffs, self.constant + delta, self.field)

    def restrict(self, rho: PartialAssignment):
        if rho.n != self.n:
            raise DimensionError(f"assignment over {rho.n} variables, polynomial over {self.n}")
        coeffs = list(self.coeffs)
        constant = self.constant
        for j, v in rho.bindings:
            constant += coeffs[j] * v
            coeffs[j] = 0
        return AffinePoly(tuple(coeffs), constant, self.field)

    def evaluate(self, point):
        return (sum(c * int(x) for c, x in zip(self.coeffs, point)) + self.constant) % self.field.p

    def format(self, relation="="):
        """Render as an equation/inequality `form <relation> rhs`, variables 0-based."""
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"x{j}" if c == 1 else f"{c}x{j}")
        lhs = " + ".join(terms) if terms else "0"
        return f"{lhs} {relation} {self.rhs}"

    def __str__(self):
        return self.format("=")


# AFFINE SPANS

def _leading(row):
    nz = np.nonzero(row)[0]
    return int(nz[0]) if nz.size else -1


@dataclass(frozen=True)
class AffineSpan:
    """A space of affine polynomials in canonical reduced echelon form over n + 1 coordinates,
    constant last. Equal spans have identical rows."""

    rows: tuple[FVector, ...]
    n: int
    field: Field

    @classmethod
    def of(cls, polys: Iterable[AffinePoly], n, field):
        vectors = [poly.vector for poly in polys]
        for v in vectors:
            if len(v) != n + 1:
                raise DimensionError(f"polynomial over {len(v) - 1} variables in a span over {n}")
        return cls.from_array(np.array(vectors, dtype=np.int64).reshape(len(vectors), n + 1), n, field)

    @classmethod
    def from_array(cls, arr, n, field):
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, n + 1)
        if arr.shape[0] == 0:
            return cls((), n, field)
        reduced, pivots = _rref_array(arr, field.p)
        rows = tuple(tuple(int(v) for v in reduced[i]) for i in range(len(pivots)))
        return cls(rows, n, field)

    @classmethod
    def zero(cls, n, field):
        return cls((), n, field)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def basis(self):
        return tuple(AffinePoly.from_vector(r, self.field) for r in self.rows)

    @property
    def pivots(self):
        return tuple(_leading(r) for r in self.rows)

    @property
    def inconsistent(self):
        """True iff 0 = c for some c != 0 lies in the span."""
        return self.n in self.pivots

    def matrix(self):
        return np.array(self.rows, dtype=np.int64).reshape(self.dim, self.n + 1)

    def linear_matrix(self):
        return self.matrix()[:, : self.n]

    def reduce(self, poly: AffinePoly):
        """Remainder of poly modulo the span (zero iff poly is in the span)."""
        vec = np.array(poly.vector, dtype=np.int64)
        p = self.field.p
        for row, piv in zip(self.rows, self.pivots):
            if vec[piv]:
                vec = (vec - vec[piv] * np.array(row, dtype=np.int64)) % p
        return AffinePoly.from_vector(vec, self.field)

    def contains(self, poly: AffinePoly):
        if poly.n != self.n or poly.field != self.field:
            raise DimensionError("polynomial and span disagree on field or variable count")
        return self.reduce(poly).is_zero()

    def includes(self, other):
        return all(self.contains(b) for b in other.basis)

    def __add__(self, other):
        return span_sum(self, other)

    def extend(self, polys):
        return AffineSpan.from_array(
            np.vstack([self.matrix(), np.array([q.vector for q in polys], dtype=np.int64).reshape(-1, self.n + 1)]),
            self.n, self.field)

    def restrict(self, rho: PartialAssignment):
        return AffineSpan.of((b.restrict(rho) for b in self.basis), self.n, self.field)

    def linear_support(self):
        """Union of the supports of all elements (equals the union over the basis)."""
        return frozenset(j for row in self.rows for j in range(self.n) if row[j])

    def __str__(self):
        if not self.rows:
            return "<0>"
        return "<" + ", ".join(str(b) for b in self.basis) + ">"


def span_sum(first: AffineSpan, second: AffineSpan) -> AffineSpan:
    """V + W with span semantics: every v + w for v in <V>, w in <W>."""
    if first.n != second.n or first.field != second.field:
        raise DimensionError("spans over different fields or variable counts")
    return AffineSpan.from_array(np.vstack([first.matrix(), second.matrix()]), first.n, first.field)


def span_contains(span: AffineSpan, poly: AffinePoly) -> bool:
    return span.contains(poly)


def restrict(obj, rho: PartialAssignment):
    """Restriction F|_rho of a polynomial, linear system or span."""
    return obj.restrict(rho)


def weight(obj) -> int:
    if isinstance(obj, AffinePoly):
        return obj.weight
    return int(np.count_nonzero(np.asarray(obj)))


# ENUMERATION

def _digits(start, stop, base, width):
    """Rows start..stop-1 written in base `base` with `width` digits, most significant first."""
    idx = np.arange(start, stop, dtype=np.int64)
    if width == 0:
        return np.zeros((len(idx), 0), dtype=np.int64)
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % base


def _check_budget(what, size, budget):
    limit = enumeration_budget(budget)
    if size > limit:
        raise BudgetExceeded(what, size, limit)


def field_points(p, width, budget=None, chunk=ENUM_CHUNK) -> Iterator[np.ndarray]:
    """All of F_p^width in lexicographic order, in chunks."""
    total = p**width
    _check_budget(f"F_{p}^{width}", total, budget)
    for start in range(0, total, chunk):
        yield _digits(start, min(start + chunk, total), p, width)


def boolean_cube(n, budget=None, chunk=ENUM_CHUNK) -> Iterator[np.ndarray]:
    """All of {0,1}^n in lexicographic order (x0 most significant), in chunks."""
    total = 2**n
    _check_budget(f"{{0,1}}^{n}", total, budget)
    for start in range(0, total, chunk):
        yield _digits(start, min(start + chunk, total), 2, n)


def evaluate_rows(rows: np.ndarray, points: np.ndarray, p):
    """Values of each affine row (m x (n+1)) at each point (N x n): an N x m array."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, points.shape[1] + 1)
    return (points @ rows[:, :-1].T + rows[:, -1]) % p


def zero_one_models(rows: np.ndarray, n, p, budget=None) -> np.ndarray:
    """Every 0-1 point where all affine rows vanish, in lexicographic order."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n + 1)
    found = []
    for points in boolean_cube(n, budget):
        ok = np.all(evaluate_rows(rows, points, p) == 0, axis=1)
        if ok.any():
            found.append(points[ok])
    if not found:
        return np.zeros((0, n), dtype=np.int64)
    return np.vstack(found)


def is_zero_one_satisfiable(rows, n, p, budget=None):
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n + 1)
    for points in boolean_cube(n, budget):
        if np.all(evaluate_rows(rows, points, p) == 0, axis=1).any():
            return True
    return False


def iter_span_elements(span: AffineSpan, budget=None):
    """Pairs (coefficients, elements) over all p^dim elements, coefficient-lexicographic."""
    p = span.field.p
    basis = span.matrix()
    for coeffs in field_points(p, span.dim, budget):
        yield coeffs, (coeffs @ basis) % p if span.dim else np.zeros((len(coeffs), span.n + 1), dtype=np.int64)


def span_elements(span: AffineSpan, budget=None) -> np.ndarray:
    chunks = [elems for _, elems in iter_span_elements(span, budget)]
    return np.vstack(chunks)


def span_weight(span: AffineSpan, budget=None):
    """Minimum weight over elements with a nonzero linear part; None when there is none."""
    best = None
    for _, elems in iter_span_elements(span, budget):
        weights = np.count_nonzero(elems[:, : span.n], axis=1)
        weights = weights[weights > 0]
        if weights.size:
            low = int(weights.min())
            best = low if best is None else min(best, low)
    return best


def truncated_span(span: AffineSpan, tau, budget=None) -> AffineSpan:
    """[V]_{w <= tau}: the span of all elements of V of weight at most tau."""
    acc = np.zeros((0, span.n + 1), dtype=np.int64)
    for _, elems in iter_span_elements(span, budget):
        light = elems[np.count_nonzero(elems[:, : span.n], axis=1) <= tau]
        light = light[np.any(light != 0, axis=1)]
        if light.size:
            acc = AffineSpan.from_array(np.vstack([acc, light]), span.n, span.field).matrix()
            if acc.shape[0] == span.dim:
                break
    result = AffineSpan.from_array(acc, span.n, span.field)
    logger.debug("truncated span tau=%s: dim %d -> %d", tau, span.dim, result.dim)
    return result


def reduce_min_weight(span: AffineSpan, poly: AffinePoly, budget=None):
    """red_P(h): (h', alpha, r) with h' = alpha*h + r, r in P, alpha != 0 and weight(h') minimal.
    Ties go to the smallest alpha, then the smallest echelon coordinates of r."""
    if poly.n != span.n or poly.field != span.field:
        raise DimensionError("polynomial and span disagree on field or variable count")
    p = span.field.p
    _check_budget("reduction search", (p - 1) * p**span.dim, budget)
    h = np.array(poly.vector, dtype=np.int64)
    best = None
    for alpha in range(1, p):
        for coeffs, elems in iter_span_elements(span, budget):
            cand = (alpha * h + elems) % p
            weights = np.count_nonzero(cand[:, : span.n], axis=1)
            i = int(np.argmin(weights))
            if best is None or weights[i] < best[0]:
                best = (int(weights[i]), alpha, cand[i], elems[i])
        if best[0] == 0:
            break
    _, alpha, reduced, r = best
    return AffinePoly.from_vector(reduced, span.field), alpha, AffinePoly.from_vector(r, span.field)
