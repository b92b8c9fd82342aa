import itertools
from fractions import Fraction

import numpy as np
import pytest

from mglimits import densities as dens
from mglimits import mobius as mob
from mglimits import multigraph as mg
from mglimits.errors import (
    BasisNotClosed,
    DimensionMismatch,
    EmptyTruncation,
    FormatError,
    MixedVertexCounts,
    TruncationExceeded,
)

from helpers import M, EDGE, LOOP, TRIANGLE, oracle_mobius, random_multigraph


def loops(*vals):
    return [M([[v]]) for v in vals]


def upward_sum_table(mu, k, max_mult):
    """f(A) = sum of mu over keys >= A, built by plain double loop."""
    entries = {}
    for a in mg.enumerate_multigraphs(k, max_mult):
        total = Fraction(0)
        for key, v in mu.items():
            if key.n == a.n and np.all(key.adj >= a.adj):
                total += v
        entries[a] = total
    return mob.ParameterTable(k, entries, max_mult=max_mult)


# -- transform ---------------------------------------------------------------

def test_transform_of_loop_graph_densities():
    table = dens.leq_density_table(LOOP, 1, max_mult=4)
    assert mob.mobius_transform(table, M([[0]])) == Fraction(0)
    assert mob.mobius_transform(table, M([[2]])) == Fraction(1)


def test_transform_of_constant_is_zero():
    for a in (M([[0]]), M([[2]]), EDGE, M([[2, 1], [1, 0]])):
        assert mob.mobius_transform(lambda g: Fraction(1), a) == 0


def test_transform_requires_coverage():
    table = dens.leq_density_table(LOOP, 1, max_mult=4)
    with pytest.raises(TruncationExceeded):
        mob.mobius_transform(table, M([[4]]))


def test_transform_matches_oracle_on_graph_densities():
    rng = np.random.default_rng(21)
    for _ in range(10):
        g = random_multigraph(rng, 4, 2)
        f = lambda a: dens.density(a, g, "hom_leq")
        for a in (M([[0, 1], [1, 0]]), M([[2, 0], [0, 0]]), M([[0, 2], [2, 0]])):
            assert mob.mobius_transform(f, a) == oracle_mobius(f, a)


def test_transform_of_leq_density_is_eq_density():
    # alternating overlay sum of the leq variant recovers the eq variant
    rng = np.random.default_rng(22)
    for _ in range(8):
        g = random_multigraph(rng, 4, 2)
        f = lambda a: dens.density(a, g, "hom_leq")
        for a in mg.enumerate_multigraphs(2, 2):
            assert mob.mobius_transform(f, a) == dens.density(a, g, "hom_eq")


def test_transform_table_matches_pointwise():
    rng = np.random.default_rng(23)
    g = random_multigraph(rng, 5, 2)
    f_table = dens.leq_density_table(g, 2, max_mult=4)
    batch = mob.mobius_transform_table(f_table, max_mult=2)
    for a in mg.enumerate_multigraphs(2, 2):
        assert batch.get(a) == mob.mobius_transform(f_table, a)


def test_transform_table_float_mode():
    f_table = dens.leq_density_table(TRIANGLE, 2, max_mult=3)
    float_table = mob.ParameterTable(
        2, {k: float(v) for k, v in f_table.entries.items()}, max_mult=3)
    batch = mob.mobius_transform_table(float_table, max_mult=1)
    for a, v in batch.entries.items():
        assert abs(v - float(mob.mobius_transform(f_table, a))) < 1e-12


# -- inverse -----------------------------------------------------------------

def test_inverse_point_mass_example():
    g_table = mob.ParameterTable(
        1, {M([[0]]): Fraction(0), M([[2]]): Fraction(1)}, max_mult=2)
    val, res = mob.inverse_mobius(g_table, M([[0]]))
    assert val == Fraction(1) and res == 0
    val, _ = mob.inverse_mobius(g_table, M([[2]]))
    assert val == Fraction(1)


def test_inverse_reports_missing_mass():
    g_table = mob.ParameterTable(1, {M([[0]]): Fraction(3, 4)}, max_mult=0)
    val, res = mob.inverse_mobius(g_table, M([[0]]))
    assert val == Fraction(3, 4)
    assert res == Fraction(1, 4)


def test_inverse_empty_truncation():
    with pytest.raises(EmptyTruncation):
        mob.inverse_mobius(mob.ParameterTable(1, {}), M([[0]]))


def test_inverse_dimension_mismatch():
    g_table = mob.ParameterTable(1, {M([[0]]): Fraction(1)})
    with pytest.raises(DimensionMismatch):
        mob.inverse_mobius(g_table, EDGE)


def test_transform_inverse_roundtrip_exact():
    # f built as an upward sum of a finitely supported mass recovers that mass,
    # and the truncated upward sum of the recovered mass gives back f
    rng = np.random.default_rng(31)
    for k in (1, 2):
        support = mg.enumerate_multigraphs(k, 2)
        mu = {a: Fraction(int(rng.integers(0, 5)), 7) for a in support}
        f_table = upward_sum_table(mu, k, max_mult=4)
        g_table = mob.mobius_transform_table(f_table, max_mult=2)
        for a in support:
            assert g_table.get(a) == mu[a]
        for a in support:
            val, _ = mob.inverse_mobius(g_table, a)
            assert val == f_table.get(a)


def test_overlay_alternating_sum_is_point_indicator():
    # summing signs of overlays that fit under a fixed upper bound picks out equality
    for a in mg.enumerate_multigraphs(2, 1):
        for upper in mg.enumerate_multigraphs(2, 2):
            total = 0
            for e in mg.iter_overlays(2):
                shifted = a.adj + e.adj
                if np.all(shifted <= upper.adj):
                    total += (-1) ** (int(e.adj.sum()) // 2)
            assert total == (1 if np.array_equal(a.adj, upper.adj) else 0)


# -- zeta algebra ------------------------------------------------------------

def test_zeta_matrix_loops():
    z = mob.zeta_matrix(loops(0, 2, 4))
    assert z.tolist() == [[1, 1, 1], [0, 1, 1], [0, 0, 1]]


def test_zeta_inverse_loops():
    zi = mob.zeta_inverse(loops(0, 2, 4))
    assert zi.tolist() == [[1, -1, 0], [0, 1, -1], [0, 0, 1]]


def test_zeta_inverse_closure_failure():
    with pytest.raises(BasisNotClosed):
        mob.zeta_inverse(loops(0, 4))


def test_zeta_mixed_vertex_counts():
    with pytest.raises(MixedVertexCounts):
        mob.zeta_matrix([M([[0]]), EDGE])
    with pytest.raises(MixedVertexCounts):
        mob.ParameterTable(1, {M([[0]]): 1, EDGE: 1})


def test_zeta_inverse_on_full_truncations():
    for k, mm in ((1, 6), (2, 3)):
        basis = mob.sort_basis(mg.enumerate_multigraphs(k, mm))
        z = mob.zeta_matrix(basis)
        zi = mob.zeta_inverse(basis)
        assert np.array_equal(z @ zi, np.eye(len(basis), dtype=np.int64))
        assert np.array_equal(zi @ z, np.eye(len(basis), dtype=np.int64))


def test_sort_basis_order():
    basis = mob.sort_basis(mg.enumerate_multigraphs(2, 2))
    counts = [g.edge_count() for g in basis]
    assert counts == sorted(counts)
    assert basis[0] == mg.Multigraph.empty(2)


# -- factorization -----------------------------------------------------------

def test_factorization_constant_function_deviates():
    rep = mob.factorization_check(lambda g: Fraction(1), 1, max_mult=4)
    assert rep.exact
    assert rep.max_deviation == Fraction(1)


def test_factorization_exact_for_graph_densities():
    # multiplicity-2 target: transform mass lives inside the mm=4 truncation,
    # so the finite factorization is an exact identity
    rng = np.random.default_rng(41)
    for _ in range(4):
        g = random_multigraph(rng, 4, 2)
        f = lambda a: dens.density(a, g, "hom_leq")
        rep = mob.factorization_check(f, 1, max_mult=6)
        assert rep.max_deviation == 0
        rep2 = mob.factorization_check(f, 2, max_mult=4)
        assert rep2.max_deviation == 0


def test_factorization_float_mode():
    rep = mob.factorization_check(lambda g: 1.0, 1, max_mult=4)
    assert not rep.exact
    assert rep.max_deviation == pytest.approx(1.0)


# -- .ptab format ------------------------------------------------------------

def test_ptab_roundtrip_exact():
    rng = np.random.default_rng(51)
    g = random_multigraph(rng, 4, 2)
    table = dens.leq_density_table(g, 2, max_mult=3)
    again = mob.ptab_loads(mob.ptab_dumps(table, comment="densities"))
    assert again.k == table.k and again.max_mult == table.max_mult
    assert again.entries == table.entries
    assert again.is_exact


def test_ptab_roundtrip_float():
    table = mob.ParameterTable(1, {M([[0]]): 0.25, M([[2]]): 0.75}, max_mult=2)
    again = mob.ptab_loads(mob.ptab_dumps(table))
    assert again.get(M([[2]])) == 0.75
    assert not again.is_exact


def test_ptab_parse_errors():
    for text in ["", "j 1 max_mult 2\n", "k 1 max_mult 2\n0 1 extra 1/2\n",
                 "k 1 max_mult 2\n0 x\n", "k 1 max_mult 2\n0 1/0\n",
                 "k 1 max_mult 2\n0 1/2\n0 1/2\n"]:
        with pytest.raises(FormatError):
            mob.ptab_loads(text)


def test_ptab_file_io(tmp_path):
    table = mob.ParameterTable(1, {M([[0]]): Fraction(1)}, max_mult=0)
    path = tmp_path / "t.ptab"
    mob.write_ptab(table, path)
    assert mob.read_ptab(path).entries == table.entries
