""" splitting refutations (LinTrees, BinDags, BinRegDags, LinDags): data model, checkers, builders

proof file format (UTF-8, '#' comments, ids are non-negative integers):

    kind <lintree|bindag|binregdag|lindag>
    p <prime>
    vars <n>
    root <id>
    node <id> [terminal]
    split var <j>                     # bindag, binregdag
    split form <c_0 ... c_{n-1}>      # lintree, lindag
    eq <c_0 ... c_{n-1}> | <rhs>      # node system rows (dag kinds only)
    edge <from> <to> <c_0 ... c_{n-1}> | <value>

Nodes are written in id order, edges sorted by (from, to, label) after all nodes.
"""

import heapq
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from linres.config import enumeration_budget
from linres.errors import BudgetExceeded, FieldError, MalformedProof, NotUnsat, ParseError
from linres.gf import AffinePoly, Field, FVector, PartialAssignment
from linres.instances import LinearSystem, form_image, zero_one_sat
from linres.parsing import content_lines, expect_header, format_row, parse_int, parse_residue, parse_row
from linres.verdict import Verdict

logger = logging.getLogger(__name__)


KINDS = ("lintree", "bindag", "binregdag", "lindag")
VAR_SPLIT_KINDS = frozenset({"bindag", "binregdag"})


@dataclass(frozen=True)
class Node:
    id: int
    system: LinearSystem | None = None
    split_var: int | None = None
    split_form: FVector | None = None
    terminal: bool = False

    def form(self, n):
        """The linear form this node splits on, as a coefficient vector."""
        if self.split_form is not None:
            return self.split_form
        if self.split_var is not None:
            return tuple(1 if j == self.split_var else 0 for j in range(n))
        return None


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    label: AffinePoly       # the equation form = value, stored as form - value

    @property
    def value(self):
        return self.label.rhs

    def sort_key(self):
        return (self.src, self.dst, self.label.vector)


@dataclass(frozen=True)
class Refutation:
    kind: str
    field: Field
    n: int
    root: int
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedProof(f"unknown refutation kind {self.kind!r}")
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda v: v.id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=Edge.sort_key)))
        ids = [v.id for v in self.nodes]
        if len(set(ids)) != len(ids):
            raise MalformedProof("duplicate node ids")

    @cached_property
    def by_id(self):
        return {v.id: v for v in self.nodes}

    @cached_property
    def out_edges(self):
        out = defaultdict(list)
        for e in self.edges:
            out[e.src].append(e)
        return out

    def node(self, node_id):
        return self.by_id[node_id]

    def children(self, node_id):
        return self.out_edges.get(node_id, [])

    @property
    def size(self):
        return len(self.nodes)


# STRUCTURE

def topological_order(proof: Refutation):
    """Kahn's algorithm, smallest id first. Raises MalformedProof on structural defects."""
    by_id = proof.by_id
    if proof.root not in by_id:
        raise MalformedProof(f"root {proof.root} is not a node")

    indegree = {v: 0 for v in by_id}
    for e in proof.edges:
        if e.src not in by_id or e.dst not in by_id:
            raise MalformedProof(f"edge {e.src}->{e.dst} references a missing node")
        indegree[e.dst] += 1

    if indegree[proof.root] != 0:
        raise MalformedProof(f"root {proof.root} has incoming edges")
    sources = [v for v, d in indegree.items() if d == 0 and v != proof.root]
    if sources:
        raise MalformedProof(f"node {sources[0]} is unreachable from the root")
    if proof.kind == "lintree":
        shared = [v for v, d in indegree.items() if d > 1]
        if shared:
            raise MalformedProof(f"node {shared[0]} has several parents in a tree")

    order = []
    heap = [proof.root]
    remaining = dict(indegree)
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for e in proof.children(v):
            remaining[e.dst] -= 1
            if remaining[e.dst] == 0:
                heapq.heappush(heap, e.dst)
    if len(order) != len(by_id):
        raise MalformedProof("the proof graph has a cycle")
    return order


def _check_node_shape(proof: Refutation, node: Node):
    has_system = node.system is not None
    if proof.kind == "lintree" and has_system:
        raise MalformedProof(f"lintree node {node.id} carries a system")
    if proof.kind != "lintree":
        if not has_system:
            raise MalformedProof(f"node {node.id} has no system")
        if node.system.n != proof.n or node.system.field != proof.field:
            raise MalformedProof(f"node {node.id} system has the wrong shape")

    if node.terminal:
        if node.split_var is not None or node.split_form is not None:
            raise MalformedProof(f"terminal node {node.id} has a split label")
        if proof.children(node.id):
            raise MalformedProof(f"terminal node {node.id} has outgoing edges")
        return

    if proof.kind in VAR_SPLIT_KINDS:
        if node.split_var is None or node.split_form is not None:
            raise MalformedProof(f"node {node.id} must split on a variable")
        if not 0 <= node.split_var < proof.n:
            raise MalformedProof(f"node {node.id} splits on x{node.split_var}, outside [0, {proof.n})")
    else:
        if node.split_form is None or node.split_var is not None:
            raise MalformedProof(f"node {node.id} must split on a linear form")
        if len(node.split_form) != proof.n:
            raise MalformedProof(f"node {node.id} split form has the wrong length")
    if not proof.children(node.id):
        raise MalformedProof(f"non-terminal node {node.id} has no outgoing edges")


# CHECKERS

def _coverage(proof: Refutation, node: Node):
    """Edges must carry the node's form and cover f({0,1}^n) with exactly one edge per value."""
    form = node.form(proof.n)
    out = proof.children(node.id)
    for e in out:
        if e.label.coeffs != tuple(form):
            return Verdict.reject(f"edge {e.src}->{e.dst}", "edge label does not use the node's split form")
    values = sorted(e.value for e in out)
    expected = list(form_image(form, proof.field.p))
    if values != expected:
        return Verdict.reject(f"node {node.id}", f"edge values {values} do not cover f({{0,1}}^n) = {expected}")
    return None


def _check_lintree(proof, inst, order, budget):
    path = {proof.root: ()}
    for v in order:
        node = proof.node(v)
        solvable = inst.stack(path[v]).is_fp_solvable()
        if node.terminal and solvable:
            return Verdict.reject(f"node {v}", "leaf system is still solvable over F_p")
        if not node.terminal and not solvable:
            return Verdict.reject(f"node {v}", "internal node is already unsolvable over F_p")
        if node.terminal:
            continue
        bad = _coverage(proof, node)
        if bad is not None:
            return bad
        for e in proof.children(v):
            path[e.dst] = path[v] + (e.label,)
    return Verdict.accept()


def _check_root(proof, inst, budget):
    root = proof.node(proof.root)
    if root.system != inst:
        return Verdict.reject(f"node {root.id}", "root system differs from the instance")
    if zero_one_sat(root.system, budget) is not None:
        return Verdict.reject(f"node {root.id}", "root system is 0-1 satisfiable")
    return None


def _check_terminal(node):
    if node.system.is_fp_solvable():
        return Verdict.reject(f"node {node.id}", "terminal system is solvable over F_p")
    return None


def _check_binregdag(proof, inst, order, budget):
    bad = _check_root(proof, inst, budget)
    if bad is not None:
        return bad
    for v in order:
        node = proof.node(v)
        if zero_one_sat(node.system, budget) is not None:
            return Verdict.reject(f"node {v}", "system is 0-1 satisfiable")
        if node.terminal:
            bad = _check_terminal(node)
            if bad is not None:
                return bad
            continue
        bad = _coverage(proof, node)
        if bad is not None:
            return bad
        parent = node.system.span
        for e in proof.children(v):
            rho = PartialAssignment.of(proof.n, {node.split_var: e.value})
            if not parent.restrict(rho).includes(proof.node(e.dst).system.span):
                return Verdict.reject(f"edge {e.src}->{e.dst}", "child span is not inside the restricted parent span")
    return Verdict.accept()


def _check_linsplit(proof, inst, order, budget):
    bad = _check_root(proof, inst, budget)
    if bad is not None:
        return bad
    for v in order:
        node = proof.node(v)
        if node.terminal:
            bad = _check_terminal(node)
            if bad is not None:
                return bad
            continue
        bad = _coverage(proof, node)
        if bad is not None:
            return bad
        parent = node.system.span
        for e in proof.children(v):
            allowed = parent.extend([e.label])
            child = proof.node(e.dst).system.span.extend([e.label])
            if not allowed.includes(child):
                return Verdict.reject(f"edge {e.src}->{e.dst}", "child system with the edge equation is not implied by the parent")
    return Verdict.accept()


CHECKERS = {
    "lintree": _check_lintree,
    "binregdag": _check_binregdag,
    "bindag": _check_linsplit,
    "lindag": _check_linsplit,
}


def check_refutation(proof: Refutation, inst: LinearSystem, budget=None) -> Verdict:
    if proof.n != inst.n or proof.field != inst.field:
        raise MalformedProof(f"proof over F_{proof.field.p}^{proof.n}, instance over F_{inst.p}^{inst.n}")
    order = topological_order(proof)
    for v in order:
        _check_node_shape(proof, proof.node(v))

    verdict = CHECKERS[proof.kind](proof, inst, order, budget)
    if not verdict:
        logger.info("%s proof rejected at %s: %s", proof.kind, verdict.location, verdict.diagnostic)
    return verdict


# BUILDERS

def _variable_order(n, order):
    order = list(range(n)) if order is None else [int(j) for j in order]
    if sorted(order) != list(range(n)):
        raise MalformedProof(f"variable order {order} is not a permutation of 0..{n - 1}")
    return order


def build_layered_refutation(inst: LinearSystem, order=None, budget=None) -> Refutation:
    """Layer i holds the distinct restrictions of A . x = b by the first i variables of `order`.
    Every node below layer n splits on the next variable; layer n is terminal."""
    witness = zero_one_sat(inst, budget)
    if witness is not None:
        raise NotUnsat(witness)
    n, F = inst.n, inst.field
    order = _variable_order(n, order)

    nodes = [Node(0, inst, split_var=order[0] if n else None, terminal=n == 0)]
    edges = []
    current = [(0, inst)]
    next_id = 1
    for depth, var in enumerate(order):
        last = depth == n - 1
        layer = {}
        for parent_id, system in current:
            for value in (0, 1):
                child = system.restrict(PartialAssignment.of(n, {var: value}))
                key = child.key()
                if key not in layer:
                    layer[key] = (next_id, child)
                    nodes.append(Node(next_id, child, split_var=None if last else order[depth + 1], terminal=last))
                    next_id += 1
                edges.append(Edge(parent_id, layer[key][0], AffinePoly.variable(var, n, F, value)))
        current = list(layer.values())
        logger.debug("layer %d (x%d): %d nodes", depth + 1, var, len(current))

    return Refutation("binregdag", F, n, 0, tuple(nodes), tuple(edges))


def build_decision_tree(inst: LinearSystem, order=None, budget=None) -> Refutation:
    """LinTrees refutation splitting on single variables, cut at the first F_p-unsolvable node."""
    n, F = inst.n, inst.field
    limit = enumeration_budget(budget)
    if 2 ** (n + 1) > limit:
        raise BudgetExceeded("decision tree", 2 ** (n + 1), limit)
    witness = zero_one_sat(inst, budget)
    if witness is not None:
        raise NotUnsat(witness)
    order = _variable_order(n, order)

    nodes, edges = [], []

    def grow(path, depth):
        node_id = len(nodes)
        if not inst.stack(path).is_fp_solvable():
            nodes.append(Node(node_id, terminal=True))
            return node_id
        var = order[depth]
        form = tuple(1 if j == var else 0 for j in range(n))
        nodes.append(Node(node_id, split_form=form))
        for value in (0, 1):
            eq = AffinePoly.variable(var, n, F, value)
            child = grow(path + (eq,), depth + 1)
            edges.append(Edge(node_id, child, eq))
        return node_id

    grow((), 0)
    return Refutation("lintree", F, n, 0, tuple(nodes), tuple(edges))


def layer_sizes(proof: Refutation):
    """Node counts by distance from the root."""
    depth = {proof.root: 0}
    frontier = [proof.root]
    while frontier:
        nxt = []
        for v in frontier:
            for e in proof.children(v):
                if e.dst not in depth:
                    depth[e.dst] = depth[v] + 1
                    nxt.append(e.dst)
        frontier = nxt
    sizes = [0] * (max(depth.values()) + 1)
    for d in depth.values():
        sizes[d] += 1
    return sizes


# FILES

def format_refutation(proof: Refutation):
    lines = [f"kind {proof.kind}", f"p {proof.field.p}", f"vars {proof.n}", f"root {proof.root}"]
    for node in proof.nodes:
        lines.append(f"node {node.id}" + (" terminal" if node.terminal else ""))
        if node.split_var is not None:
            lines.append(f"split var {node.split_var}")
        if node.split_form is not None:
            lines.append("split form " + " ".join(str(c) for c in node.split_form))
        if node.system is not None:
            for i in range(node.system.k):
                lines.append("eq " + format_row(node.system.A.row(i), node.system.b[i]))
    for e in proof.edges:
        lines.append(f"edge {e.src} {e.dst} " + format_row(e.label.coeffs, e.value))
    return "\n".join(lines) + "\n"


def parse_refutation(text) -> Refutation:
    lines = content_lines(text)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty proof file") from None
    if len(tokens) != 2 or tokens[0] != "kind" or tokens[1] not in KINDS:
        raise ParseError(f"expected 'kind <{'|'.join(KINDS)}>'", lineno)
    kind = tokens[1]
    lineno, p = expect_header(lines, "p", lineno)
    try:
        F = Field(p)
    except FieldError as exc:
        raise ParseError(str(exc), lineno) from None
    lineno, n = expect_header(lines, "vars", lineno)
    lineno, root = expect_header(lines, "root", lineno)

    blocks = {}         # id -> dict(terminal, split_var, split_form, rows, rhs, line)
    order = []
    edges = []
    current = None
    for lineno, tokens in lines:
        head = tokens[0]
        if head == "node":
            if edges:
                raise ParseError("node declared after edges", lineno)
            if len(tokens) not in (2, 3) or (len(tokens) == 3 and tokens[2] != "terminal"):
                raise ParseError("expected 'node <id> [terminal]'", lineno)
            node_id = parse_int(tokens[1], lineno, "node id")
            if node_id in blocks:
                raise ParseError(f"duplicate node {node_id}", lineno)
            current = {"terminal": len(tokens) == 3, "split_var": None, "split_form": None, "rows": [], "rhs": []}
            blocks[node_id] = current
            order.append(node_id)
        elif head == "split":
            if current is None or edges:
                raise ParseError("split line outside a node block", lineno)
            if current["split_var"] is not None or current["split_form"] is not None:
                raise ParseError("node has two split lines", lineno)
            if len(tokens) == 3 and tokens[1] == "var":
                j = parse_int(tokens[2], lineno, "variable index")
                if not 0 <= j < n:
                    raise ParseError(f"split variable x{j} outside [0, {n})", lineno)
                current["split_var"] = j
            elif len(tokens) == n + 2 and tokens[1] == "form":
                current["split_form"] = tuple(parse_residue(t, p, lineno) for t in tokens[2:])
            else:
                raise ParseError(f"expected 'split var <j>' or 'split form <{n} coeffs>'", lineno)
        elif head == "eq":
            if current is None or edges:
                raise ParseError("eq line outside a node block", lineno)
            if kind == "lintree":
                raise ParseError("lintree nodes carry no systems", lineno)
            coeffs, rhs = parse_row(tokens[1:], n, p, lineno)
            current["rows"].append(coeffs)
            current["rhs"].append(rhs)
        elif head == "edge":
            if len(tokens) < 3:
                raise ParseError("expected 'edge <from> <to> <coeffs> | <value>'", lineno)
            src = parse_int(tokens[1], lineno, "node id")
            dst = parse_int(tokens[2], lineno, "node id")
            for endpoint in (src, dst):
                if endpoint not in blocks:
                    raise ParseError(f"edge references undeclared node {endpoint}", lineno)
            coeffs, value = parse_row(tokens[3:], n, p, lineno)
            edges.append(Edge(src, dst, AffinePoly.equation(coeffs, value, F)))
        else:
            raise ParseError(f"unknown line type {head!r}", lineno)

    if root not in blocks:
        raise ParseError(f"root {root} is not a declared node")
    nodes = []
    for node_id in order:
        b = blocks[node_id]
        system = None if kind == "lintree" else LinearSystem.of(b["rows"], b["rhs"], F, n=n)
        nodes.append(Node(node_id, system, b["split_var"], b["split_form"], b["terminal"]))
    return Refutation(kind, F, n, root, tuple(nodes), tuple(edges))


def read_refutation(path) -> Refutation:
    with open(path, encoding="utf-8") as f:
        return parse_refutation(f.read())


def write_refutation(proof: Refutation, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_refutation(proof))
