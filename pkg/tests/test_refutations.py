import itertools
from dataclasses import replace

import pytest

from linres.errors import MalformedProof, NotUnsat, ParseError
from linres.gf import AffinePoly
from linres.instances import LinearSystem, gen_instance, zero_one_image
from linres.refutations import (
    Edge,
    Node,
    Refutation,
    build_decision_tree,
    build_layered_refutation,
    check_refutation,
    format_refutation,
    layer_sizes,
    parse_refutation,
)


def _rebuild(proof, nodes=None, edges=None, kind=None):
    return Refutation(kind or proof.kind, proof.field, proof.n, proof.root,
                      tuple(nodes if nodes is not None else proof.nodes),
                      tuple(edges if edges is not None else proof.edges))


def _bump_edge(proof, index):
    edges = list(proof.edges)
    e = edges[index]
    edges[index] = replace(e, label=e.label.shift(-1))
    return _rebuild(proof, edges=edges)


def test_layered_refutation_of_two_variable_instance(sum_eq_3):
    proof = build_layered_refutation(sum_eq_3)
    assert proof.kind == "binregdag"
    assert layer_sizes(proof) == [1, 2, 3]
    assert check_refutation(proof, sum_eq_3)


def test_layered_refutation_size_is_bounded_by_image(rs_7_7_3):
    system = rs_7_7_3.system
    proof = build_layered_refutation(system)
    assert check_refutation(proof, system)
    assert proof.size <= (system.n + 1) * len(zero_one_image(system.A))
    assert len(layer_sizes(proof)) == system.n + 1


def test_layered_refutation_with_custom_order(sum_eq_3):
    proof = build_layered_refutation(sum_eq_3, order=[1, 0])
    assert proof.node(proof.root).split_var == 1
    assert check_refutation(proof, sum_eq_3)
    with pytest.raises(MalformedProof):
        build_layered_refutation(sum_eq_3, order=[0, 0])


def test_builders_refuse_satisfiable_systems(f5):
    system = LinearSystem.of([[1, 1]], [1], f5)
    with pytest.raises(NotUnsat):
        build_layered_refutation(system)
    with pytest.raises(NotUnsat):
        build_decision_tree(system)


def test_formatted_proof_checks_after_parsing(rs_7_7_3):
    proof = build_layered_refutation(rs_7_7_3.system)
    parsed = parse_refutation(format_refutation(proof))
    assert parsed == proof
    assert check_refutation(parsed, rs_7_7_3.system)


def test_root_rhs_bump_is_rejected(rs_7_7_3):
    proof = build_layered_refutation(rs_7_7_3.system)
    root = proof.node(proof.root)
    system = root.system
    bumped = LinearSystem(system.A, (system.b[0] + 1,) + system.b[1:])
    nodes = [replace(root, system=bumped) if v.id == root.id else v for v in proof.nodes]
    verdict = check_refutation(_rebuild(proof, nodes=nodes), rs_7_7_3.system)
    assert not verdict
    assert verdict.location == f"node {root.id}"


def test_inner_node_rhs_bump_is_rejected(rs_7_7_3):
    proof = build_layered_refutation(rs_7_7_3.system)
    target = next(e.dst for e in proof.children(proof.root))
    node = proof.node(target)
    system = node.system
    row = next(i for i in range(system.k) if any(system.A.row(i)))
    b = list(system.b)
    b[row] += 1
    nodes = [replace(node, system=LinearSystem(system.A, tuple(b))) if v.id == target else v for v in proof.nodes]
    assert not check_refutation(_rebuild(proof, nodes=nodes), rs_7_7_3.system)


def test_edge_value_bump_is_rejected(rs_7_7_3):
    proof = build_layered_refutation(rs_7_7_3.system)
    for index in (0, 5, len(proof.edges) - 1):
        verdict = check_refutation(_bump_edge(proof, index), rs_7_7_3.system)
        assert not verdict
        assert "edge" in verdict.diagnostic


def test_split_variable_swap_is_rejected(sum_eq_3):
    proof = build_layered_refutation(sum_eq_3)
    root = proof.node(proof.root)
    nodes = [replace(root, split_var=1) if v.id == root.id else v for v in proof.nodes]
    verdict = check_refutation(_rebuild(proof, nodes=nodes), sum_eq_3)
    assert not verdict
    assert verdict.diagnostic == "edge label does not use the node's split form"


def test_layered_proof_is_also_a_bindag(sum_eq_3):
    proof = build_layered_refutation(sum_eq_3)
    assert check_refutation(_rebuild(proof, kind="bindag"), sum_eq_3)


def test_layered_proof_rewritten_as_lindag(sum_eq_3):
    proof = build_layered_refutation(sum_eq_3)
    nodes = [
        v if v.terminal else replace(v, split_var=None, split_form=v.form(proof.n))
        for v in proof.nodes
    ]
    assert check_refutation(_rebuild(proof, nodes=nodes, kind="lindag"), sum_eq_3)
    with pytest.raises(MalformedProof):
        check_refutation(_rebuild(proof, kind="lindag"), sum_eq_3)


def test_decision_tree(x0_eq_3, sum_eq_3):
    tree = build_decision_tree(x0_eq_3)
    assert tree.kind == "lintree"
    assert tree.size == 3
    assert check_refutation(tree, x0_eq_3)
    assert check_refutation(build_decision_tree(sum_eq_3), sum_eq_3)


def test_lintree_leaf_must_be_unsolvable(f5, sum_eq_3):
    lone = Refutation("lintree", f5, 2, 0, (Node(0, terminal=True),))
    verdict = check_refutation(lone, sum_eq_3)
    assert not verdict
    assert verdict.diagnostic == "leaf system is still solvable over F_p"


def test_structural_defects_raise(f5, x0_eq_3):
    label = AffinePoly.variable(0, 1, f5, 0)
    with pytest.raises(MalformedProof):
        Refutation("lintree", f5, 1, 0, (Node(0), Node(0)))
    with pytest.raises(MalformedProof):
        Refutation("dag", f5, 1, 0, (Node(0),))
    cyclic = Refutation("lintree", f5, 1, 0, (Node(0, split_form=(1,)), Node(1, split_form=(1,)), Node(2, split_form=(1,))),
                        (Edge(0, 1, label), Edge(1, 2, label), Edge(2, 1, label)))
    with pytest.raises(MalformedProof):
        check_refutation(cyclic, x0_eq_3)
    dangling = Refutation("lintree", f5, 1, 0, (Node(0, split_form=(1,)),), (Edge(0, 7, label),))
    with pytest.raises(MalformedProof):
        check_refutation(dangling, x0_eq_3)


def test_proof_and_instance_must_agree(f7, x0_eq_3):
    proof = build_decision_tree(x0_eq_3)
    with pytest.raises(MalformedProof):
        check_refutation(proof, LinearSystem.of([[1]], [3], f7))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "kind tree\n",
        "kind lintree\np 5\nvars 1\nroot 3\nnode 0 terminal\n",
        "kind lintree\np 5\nvars 1\nroot 0\nnode 0\nsplit var 4\n",
        "kind lintree\np 5\nvars 1\nroot 0\nnode 0\neq 1 | 3\n",
        "kind binregdag\np 5\nvars 1\nroot 0\nnode 0\nedge 0 1 1 | 0\n",
        "kind binregdag\np 5\nvars 1\nroot 0\nnode 0\nnode 0\n",
    ],
)
def test_proof_parse_errors(text):
    with pytest.raises(ParseError):
        parse_refutation(text)


def _seeded_instance(seed):
    if seed % 2 == 0:
        return gen_instance("random", 5, 5 + (seed // 2) % 2, 3, seed=seed).system
    return gen_instance("random", 7, 6 + (seed // 2) % 3, 3, seed=seed).system


def _is_zero_one_unsat(system):
    p = system.p
    A = [system.A.row(i) for i in range(system.k)]
    for x in itertools.product((0, 1), repeat=system.n):
        if all(sum(a * v for a, v in zip(row, x)) % p == b % p for row, b in zip(A, system.b)):
            return False
    return True


def _image_size(system):
    A = [system.A.row(i) for i in range(system.k)]
    return len({tuple(sum(a * v for a, v in zip(row, x)) % system.p for row in A)
                for x in itertools.product((0, 1), repeat=system.n)})


def _mutations(proof, rng):
    """Eight single-point corruptions: rhs bumps on solvable nodes, edge bumps and split swaps."""
    bumpable = [v for v in proof.nodes if v.system.is_fp_solvable()
                and any(any(v.system.A.row(i)) for i in range(v.system.k))]
    splitting = [v for v in proof.nodes if v.split_var is not None]
    for t in range(8):
        if t % 3 == 0:
            node = bumpable[int(rng.integers(len(bumpable)))]
            system = node.system
            row = next(i for i in range(system.k) if any(system.A.row(i)))
            b = list(system.b)
            b[row] += 1
            changed = replace(node, system=LinearSystem(system.A, tuple(b)))
            yield _rebuild(proof, nodes=[changed if v.id == node.id else v for v in proof.nodes])
        elif t % 3 == 1:
            yield _bump_edge(proof, int(rng.integers(len(proof.edges))))
        else:
            node = splitting[int(rng.integers(len(splitting)))]
            other = (node.split_var + 1 + int(rng.integers(proof.n - 1))) % proof.n
            changed = replace(node, split_var=other)
            yield _rebuild(proof, nodes=[changed if v.id == node.id else v for v in proof.nodes])


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(25))
def test_layered_refutations_of_seeded_instances(seed, rng_factory):
    system = _seeded_instance(seed)
    assert system.n <= 10 and system.k <= 3
    assert _is_zero_one_unsat(system)
    proof = build_layered_refutation(system)
    assert check_refutation(proof, system)
    assert proof.size <= (system.n + 1) * _image_size(system)
    rejected = [not check_refutation(bad, system) for bad in _mutations(proof, rng_factory(seed))]
    assert rejected == [True] * 8
