import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mglimits import multigraph as mg
from mglimits.errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    FormatError,
    LabelCountMismatch,
    NonIntegerClassSize,
    OddDiagonal,
    TooLargeForCanonicalization,
    TruncationTooLarge,
)


from helpers import M, TRIANGLE, EDGE, LOOP, multigraphs, random_multigraph


# -- validation --------------------------------------------------------------

def test_validate_accepts_triangle():
    g = mg.validate([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert g.n == 3


def test_validate_rejects_asymmetric():
    with pytest.raises(AsymmetricMatrix) as exc:
        mg.validate([[0, 1], [2, 0]])
    assert (0, 1) in exc.value.args


def test_validate_rejects_odd_diagonal():
    with pytest.raises(OddDiagonal):
        mg.validate([[1]])


def test_validate_rejects_nonsquare():
    with pytest.raises(DimensionMismatch):
        mg.validate([[0, 1, 0], [1, 0, 0]])


def test_validate_rejects_negative():
    with pytest.raises(ValueError):
        mg.validate([[0, -1], [-1, 0]])


def test_multigraph_is_immutable():
    with pytest.raises(AttributeError):
        TRIANGLE.adj = None
    with pytest.raises(ValueError):
        TRIANGLE.adj[0, 1] = 5


# -- edge count and order ----------------------------------------------------

def test_edge_count_triangle():
    assert mg.edge_count(TRIANGLE) == 3


def test_edge_count_single_loop():
    assert mg.edge_count(LOOP) == 1


def test_edge_count_double_edge():
    assert mg.edge_count(M([[0, 2], [2, 0]])) == 2


def test_leq_entrywise():
    assert mg.leq(EDGE, M([[0, 2], [2, 0]]))
    assert not mg.leq(M([[0, 2], [2, 0]]), EDGE)
    assert mg.leq(EDGE, EDGE)


def test_leq_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mg.leq(EDGE, TRIANGLE)


# -- enumeration -------------------------------------------------------------

def test_enumerate_k1():
    got = mg.enumerate_multigraphs(1, 2)
    assert [g.adj.tolist() for g in got] == [[[0]], [[2]]]


def test_enumerate_k2_count():
    # diag evens {0,2} twice, off-diagonal 0..2
    assert len(mg.enumerate_multigraphs(2, 2)) == 2 * 2 * 3


def test_enumerate_k3_simple_count():
    assert len(mg.enumerate_multigraphs(3, 1)) == 2 ** 3


def test_enumerate_is_sorted_lexicographically():
    seen = [tuple(g.adj[np.triu_indices(3)]) for g in mg.enumerate_multigraphs(3, 2)]
    assert seen == sorted(seen)
    assert len(seen) == len(set(seen))


def test_enumerate_max_edges_matches_filter():
    full = mg.enumerate_multigraphs(3, 2)
    capped = mg.enumerate_multigraphs(3, 2, max_edges=2)
    assert capped == [g for g in full if g.edge_count() <= 2]


def test_enumerate_cap():
    with pytest.raises(TruncationTooLarge):
        mg.enumerate_multigraphs(4, 6, cap=1000)


def test_overlays_counts_and_entries():
    for k in (1, 2, 3):
        ov = mg.enumerate_overlays(k)
        assert len(ov) == 2 ** (k * (k + 1) // 2)
        for g in ov:
            off = g.adj[~np.eye(k, dtype=bool)]
            assert set(off.tolist()) <= {0, 1}
            assert set(np.diagonal(g.adj).tolist()) <= {0, 2}
    with pytest.raises(TruncationTooLarge):
        mg.enumerate_overlays(7)


# -- canonical form ----------------------------------------------------------

def brute_canonical(g):
    n = g.n
    best = None
    for p in itertools.permutations(range(n)):
        mat = tuple(int(g.adj[p[i], p[j]]) for i in range(n) for j in range(n))
        if best is None or mat < best:
            best = mat
    return mg.Multigraph(np.array(best).reshape(n, n))


def test_canonical_matches_bruteforce():
    rng = np.random.default_rng(7)
    for _ in range(40):
        g = random_multigraph(rng, int(rng.integers(1, 6)), 3)
        assert mg.canonical_form(g) == brute_canonical(g)


@given(multigraphs(max_n=5))
@settings(max_examples=60, deadline=None)
def test_canonical_invariant_under_relabeling(g):
    rng = np.random.default_rng(g.adj.sum() + g.n)
    p = mg.Permutation(rng.permutation(g.n))
    assert mg.canonical_form(p.apply(g)) == mg.canonical_form(g)


def test_canonical_idempotent():
    rng = np.random.default_rng(3)
    for _ in range(20):
        c = mg.canonical_form(random_multigraph(rng, 5, 2))
        assert mg.canonical_form(c) == c


def test_canonical_cap():
    with pytest.raises(TooLargeForCanonicalization):
        mg.canonical_form(mg.Multigraph.empty(9))


def test_labeled_canonical_fixes_labels():
    # labels 0,1; unlabeled 2,3 permutable only
    g = M([[0, 0, 1, 0], [0, 0, 0, 2], [1, 0, 0, 0], [0, 2, 0, 0]])
    f = mg.KLabeledGraph(2, g)
    c = mg.labeled_canonical_form(f)
    assert c.k == 2
    assert np.array_equal(c.graph.adj[:2, :2], g.adj[:2, :2])
    # swapping unlabeled vertices leaves the labeled canonical form unchanged
    p = mg.Permutation([0, 1, 3, 2])
    f2 = mg.KLabeledGraph(2, p.apply(g))
    assert mg.labeled_canonical_form(f2) == c


# -- permutations ------------------------------------------------------------

def test_permutation_apply_definition():
    rng = np.random.default_rng(11)
    g = random_multigraph(rng, 5, 2)
    p = mg.Permutation([2, 0, 4, 1, 3])
    h = p.apply(g)
    for i in range(5):
        for j in range(5):
            assert h.adj[i, j] == g.adj[p.mapping[i], p.mapping[j]]


def test_permutation_inverse_roundtrip():
    p = mg.Permutation([2, 0, 1])
    g = TRIANGLE
    assert p.inverse().apply(p.apply(g)) == g


def test_permutation_rejects_nonbijection():
    with pytest.raises(ValueError):
        mg.Permutation([0, 0, 1])


# -- gluing ------------------------------------------------------------------

def one_labeled_edge():
    return mg.KLabeledGraph(1, EDGE)


def test_glue_two_one_labeled_edges_gives_path():
    got = mg.glue(one_labeled_edge(), one_labeled_edge())
    assert got.k == 1
    assert got.graph == M([[0, 1, 1], [1, 0, 0], [1, 0, 0]])


def test_glue_identical_two_labeled_edges_is_idempotent():
    f = mg.KLabeledGraph(2, EDGE)
    assert mg.glue(f, f).graph == EDGE


def test_glue_zero_labels_is_disjoint_union():
    got = mg.disjoint_union(EDGE, LOOP)
    assert got == M([[0, 1, 0], [1, 0, 0], [0, 0, 2]])


def test_glue_label_mismatch():
    with pytest.raises(LabelCountMismatch):
        mg.glue(one_labeled_edge(), mg.KLabeledGraph(2, EDGE))


def test_glue_takes_max_between_labels():
    f1 = mg.KLabeledGraph(2, M([[0, 1], [1, 0]]))
    f2 = mg.KLabeledGraph(2, M([[0, 3], [3, 0]]))
    assert mg.glue(f1, f2).graph == M([[0, 3], [3, 0]])


@given(multigraphs(min_n=1, max_n=3), multigraphs(min_n=1, max_n=3), st.integers(0, 1))
@settings(max_examples=40, deadline=None)
def test_glue_commutes_up_to_labeled_canonical(g1, g2, k):
    k = min(k, g1.n, g2.n)
    f1, f2 = mg.KLabeledGraph(k, g1), mg.KLabeledGraph(k, g2)
    a = mg.labeled_canonical_form(mg.glue(f1, f2))
    b = mg.labeled_canonical_form(mg.glue(f2, f1))
    assert a == b


# -- quotient and reconstruct ------------------------------------------------

def test_quotient_empty_graph_single_class():
    q = mg.quotient(mg.Multigraph.empty(3))
    assert q.classes == ((0, 1, 2),)
    assert q.weights == (Fraction(1),)
    assert q.matrix == M([[0]])


def test_quotient_star_pairs_leaves():
    star = M([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    q = mg.quotient(star)
    assert q.classes == ((0, 1), (2,))
    assert q.weights == (Fraction(2, 3), Fraction(1, 3))
    assert q.matrix == M([[0, 1], [1, 0]])


def test_quotient_triangle_all_rows_distinct():
    # row i has a 0 in position i and 1 elsewhere, so no two rows agree
    q = mg.quotient(TRIANGLE)
    assert q.classes == ((0,), (1,), (2,))
    assert q.matrix == TRIANGLE


def test_reconstruct_star_roundtrip():
    star = M([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    got = mg.reconstruct(mg.quotient(star), 3)
    assert mg.canonical_form(got) == mg.canonical_form(star)


def test_reconstruct_scales_up():
    q = mg.quotient(M([[0, 1], [1, 0]]))
    big = mg.reconstruct(q, 4)
    # doubling each class of an edge gives complete bipartite K22
    assert mg.canonical_form(big) == mg.canonical_form(
        M([[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0], [1, 1, 0, 0]]))


def test_reconstruct_rejects_fractional_class():
    star = M([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    with pytest.raises(NonIntegerClassSize):
        mg.reconstruct(mg.quotient(star), 4)


@given(multigraphs(max_n=6))
@settings(max_examples=80, deadline=None)
def test_quotient_reconstruct_roundtrip(g):
    got = mg.reconstruct(mg.quotient(g), g.n)
    assert mg.canonical_form(got) == mg.canonical_form(g)


@given(multigraphs(max_n=6))
@settings(max_examples=40, deadline=None)
def test_quotient_classes_partition_and_blocks_constant(g):
    q = mg.quotient(g)
    flat = sorted(v for c in q.classes for v in c)
    assert flat == list(range(g.n))
    for ci, cls in enumerate(q.classes):
        vals = {int(g.adj[i, j]) for i in cls for j in cls}
        assert vals == {int(q.matrix.adj[ci, ci])}


# -- .mg format --------------------------------------------------------------

def test_mg_parse_basic():
    text = "# a triangle\nn 3\n1 2 1\n1 3 1\n2 3 1\n"
    assert mg.mg_loads(text) == TRIANGLE


def test_mg_loop_lines_store_half():
    g = mg.mg_loads("n 1\n1 1 1\n")
    assert g == LOOP
    assert "1 1 1" in mg.mg_dumps(g)


def test_mg_parse_errors():
    for text in ["", "m 3\n", "n 2\n1 2\n", "n 2\n2 1 1\n", "n 2\n1 3 1\n",
                 "n 2\n1 2 1\n1 2 2\n", "n 2\n1 2 -1\n", "n x\n"]:
        with pytest.raises(FormatError):
            mg.mg_loads(text)


@given(multigraphs(max_n=7))
@settings(max_examples=80, deadline=None)
def test_mg_roundtrip(g):
    assert mg.mg_loads(mg.mg_dumps(g)) == g


def test_mg_file_io(tmp_path):
    path = tmp_path / "t.mg"
    mg.write_mg(TRIANGLE, path, comment="triangle")
    assert mg.read_mg(path) == TRIANGLE
    assert mg.mg_dumps(TRIANGLE, comment="triangle").startswith("# triangle")
