import numpy as np
import pytest
from scipy import stats

from mglimits import densities as dens
from mglimits import graphon as gw
from mglimits import multigraph as mg
from mglimits import rng as rngmod
from mglimits import sampler as smp
from mglimits.errors import (
    AsymmetricRepresentation,
    BudgetExceeded,
    OddDiagonalRepresentation,
    OverlappingSplit,
)

from helpers import M, EDGE, LOOP, TRIANGLE, random_multigraph
from test_graphon import two_block_double, random_step_graphon

ALPHA = 0.01


def goodness_of_fit(wins, expected_probs):
    """Chi-square of observed window types against exact probabilities."""
    n, k, _ = wins.shape
    iu = np.triu_indices(k)
    rows = wins[:, iu[0], iu[1]]
    uniq, inv = np.unique(rows, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    counts = np.bincount(inv)
    probs = []
    for row in uniq:
        arr = np.zeros((k, k), dtype=np.int64)
        arr[iu] = row
        arr.T[iu] = row
        probs.append(float(expected_probs(mg.Multigraph(arr))))
    probs = np.array(probs)
    rest = 1.0 - probs.sum()
    if rest > 1e-12:
        counts = np.append(counts, 0)
        probs = np.append(probs, rest)
    _, p = stats.chisquare(counts, probs * n)
    return p


# -- streams and latents -----------------------------------------------------

def test_stream_deterministic():
    a = rngmod.stream(42, "u").random(5)
    b = rngmod.stream(42, "u").random(5)
    assert np.array_equal(a, b)
    c = rngmod.stream(43, "u").random(5)
    assert not np.array_equal(a, c)
    d = rngmod.stream(42, "beta").random(5)
    assert not np.array_equal(a, d)


def test_derive_seeds_stable():
    assert rngmod.derive_seeds(7, 3) == rngmod.derive_seeds(7, 3)
    assert rngmod.derive_seeds(7, 3, salt=1) != rngmod.derive_seeds(7, 3, salt=2)


def test_latent_prefix_property():
    small = smp.draw_latents(3, 99)
    big = smp.draw_latents(5, 99)
    assert np.array_equal(big.u[:3], small.u)
    assert np.array_equal(big.beta[:3, :3], small.beta)


def test_pair_order_is_prefix_consistent():
    assert rngmod.pair_order(3) == rngmod.pair_order(4)[:6]
    assert rngmod.pair_order(2) == [(0, 0), (0, 1), (1, 1)]


# -- window samplers ---------------------------------------------------------

def test_graph_sampler_single_vertex_loop():
    s = smp.sample_from_graph(LOOP, 2, seed=5)
    assert s.window == M([[2, 2], [2, 2]])


def test_injective_sampler_edge_exact():
    for seed in range(5):
        s = smp.sample_from_graph_injective(EDGE, 2, seed)
        assert s.window == EDGE


def test_injective_sampler_pads_with_zeros():
    s = smp.sample_from_graph_injective(EDGE, 3, seed=1)
    assert np.all(s.window.adj[2, :] == 0)
    assert np.all(s.window.adj[:, 2] == 0)
    assert s.window.adj[:2, :2].sum() == 2


def test_sampler_determinism_and_seed_sensitivity():
    g = random_multigraph(np.random.default_rng(1), 5, 2)
    samplers = [smp.GraphSampler(g), smp.InjectiveGraphSampler(g),
                smp.GraphonSampler(two_block_double())]
    for s in samplers:
        assert s.sample(3, 11).window == s.sample(3, 11).window
        wins = s.sample_windows(3, 50, 11)
        assert np.array_equal(wins, s.sample_windows(3, 50, 11))
        assert not np.array_equal(wins, s.sample_windows(3, 50, 12))


def test_window_nesting_across_sizes():
    g = random_multigraph(np.random.default_rng(2), 6, 2)
    w = random_step_graphon(np.random.default_rng(3), 3, 2)
    fn = lambda x, y, b: int(b < 0.5) if x != y else 0
    samplers = [smp.GraphSampler(g), smp.InjectiveGraphSampler(g),
                smp.GraphonSampler(w), smp.FunctionalSampler(fn)]
    for s in samplers:
        for seed in (0, 1, 2):
            small = s.sample(3, seed).window
            big = s.sample(4, seed).window
            assert np.array_equal(big.adj[:3, :3], small.adj)


def test_graph_sampler_windows_match_exact_law():
    g = random_multigraph(np.random.default_rng(4), 4, 2)
    prof = dens.window_profile(g, 2)
    wins = smp.GraphSampler(g).sample_windows(2, 4000, seed=17)
    p = goodness_of_fit(wins, lambda a: prof.density(a, "hom_eq"))
    assert p >= ALPHA


def test_injective_sampler_windows_match_exact_law():
    g = random_multigraph(np.random.default_rng(5), 5, 2)
    prof = dens.window_profile(g, 2)
    wins = smp.InjectiveGraphSampler(g).sample_windows(2, 4000, seed=18)
    p = goodness_of_fit(wins, lambda a: prof.density(a, "inj_eq"))
    assert p >= ALPHA


def test_graphon_sampler_windows_match_exact_law():
    w = random_step_graphon(np.random.default_rng(6), 2, 2)
    wins = smp.GraphonSampler(w).sample_windows(2, 4000, seed=19)
    p = goodness_of_fit(wins, lambda a: gw.graphon_density(a, w, "eq"))
    assert p >= ALPHA


def test_kernel_sampler_matches_step_equivalent():
    # constant kernel equals a one-cell step multigraphon
    step = gw.StepMultigraphon([1], {(0, 0): [0.25, 0.5, 0.25]}, {0: [1.0, 0, 0]})
    kern = gw.SampledMultigraphon(lambda x, y: [0.25, 0.5, 0.25],
                                  lambda x: [1.0, 0.0, 0.0], cap=2)
    wins = smp.GraphonSampler(kern).sample_windows(2, 3000, seed=20)
    p = goodness_of_fit(wins, lambda a: gw.graphon_density(a, step, "eq"))
    assert p >= ALPHA


def threshold_fn(w):
    """Inverse-cdf encoding of a step multigraphon as a functional form."""
    cumw = np.cumsum(w.width_array())
    pc = w.pair_cdf_array()
    dc = w.diag_cdf_array()

    def fn(x, y, b):
        a = min(int(np.searchsorted(cumw, x, side="right")), w.m - 1)
        c = min(int(np.searchsorted(cumw, y, side="right")), w.m - 1)
        cdf = dc[a] if x == y else pc[a, c]
        return int(np.sum(cdf <= b))

    return fn


def test_functional_threshold_encoding_matches_graphon():
    w = random_step_graphon(np.random.default_rng(7), 2, 2)
    wins = smp.FunctionalSampler(threshold_fn(w)).sample_windows(2, 3000, seed=21)
    p = goodness_of_fit(wins, lambda a: gw.graphon_density(a, w, "eq"))
    assert p >= ALPHA


def test_functional_sampler_edge_probability():
    fn = lambda x, y, b: int(b < 0.5) if x != y else 0
    est, stderr = smp.empirical_density(smp.FunctionalSampler(fn), EDGE, "leq",
                                        5000, seed=22)
    assert abs(est - 0.5) <= 4 * max(stderr, 1e-3)


def test_functional_probes_reject_asymmetric():
    with pytest.raises(AsymmetricRepresentation):
        smp.FunctionalSampler(lambda x, y, b: int(x < y))


def test_functional_probes_reject_odd_diagonal():
    with pytest.raises(OddDiagonalRepresentation):
        smp.FunctionalSampler(lambda x, y, b: 1)


def test_bulk_and_single_paths_agree_in_distribution():
    w = two_block_double()
    s = smp.GraphonSampler(w)
    singles = np.stack([s.sample(2, seed).window.adj
                        for seed in rngmod.derive_seeds(23, 400)])
    bulk = s.sample_windows(2, 400, seed=24)
    iu = np.triu_indices(2)
    rows = np.vstack([singles[:, iu[0], iu[1]], bulk[:, iu[0], iu[1]]])
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    res = smp._chi2_homogeneity(inv[:400], inv[400:], int(inv.max()) + 1)
    assert res is None or res[1] >= ALPHA


# -- empirical densities -----------------------------------------------------

def test_empirical_density_matches_exact():
    g = random_multigraph(np.random.default_rng(8), 5, 2)
    s = smp.GraphSampler(g)
    for a in (EDGE, M([[2, 0], [0, 0]])):
        exact = float(dens.density(a, g, "hom_leq"))
        est, stderr = smp.empirical_density(s, a, "leq", 20000, seed=25)
        assert abs(est - exact) <= 4 * max(stderr, 1e-4)


def test_empirical_density_eq_mode_and_stderr():
    s = smp.GraphSampler(EDGE)
    est, stderr = smp.empirical_density(s, EDGE, "eq", 1000, seed=26)
    assert 0 <= est <= 1
    assert stderr == pytest.approx(np.sqrt(est * (1 - est) / 1000))


def test_empirical_density_certain_event_zero_stderr():
    s = smp.InjectiveGraphSampler(EDGE)
    est, stderr = smp.empirical_density(s, EDGE, "eq", 200, seed=27)
    assert est == 1.0 and stderr == 0.0


# -- exchangeability and dissociation ----------------------------------------

def test_exchangeability_passes_for_graphon_sampler():
    w = two_block_double()
    rep = smp.exchangeability_test(smp.GraphonSampler(w), 3, 2000, seed=28)
    assert rep.verdict == "pass"
    assert rep.p_value >= ALPHA


def test_exchangeability_passes_for_graph_sampler():
    g = random_multigraph(np.random.default_rng(9), 4, 2)
    rep = smp.exchangeability_test(smp.GraphSampler(g), 2, 3000, seed=29)
    assert rep.verdict == "pass"


class _BrokenSampler:
    """First row forced heavy: symmetric windows, but not exchangeable."""

    def sample_windows(self, k, count, seed):
        rng = rngmod.stream(seed, "mc")
        wins = np.zeros((count, k, k), dtype=np.int64)
        wins[:, 0, 1] = 1
        wins[:, 1, 0] = 1
        extra = (rng.random(count) < 0.5).astype(np.int64)
        if k > 2:
            wins[:, 1, 2] = extra
            wins[:, 2, 1] = extra
        return wins


def test_exchangeability_detects_broken_sampler():
    rep = smp.exchangeability_test(_BrokenSampler(), 3, 2000, seed=30)
    assert rep.verdict == "fail"


def test_exchangeability_respects_cap():
    with pytest.raises(BudgetExceeded):
        smp.exchangeability_test(smp.GraphSampler(EDGE), 5, 10, seed=0)


def test_dissociation_passes_for_graphon_sampler():
    w = two_block_double()
    rep = smp.dissociation_test(smp.GraphonSampler(w), ((0, 1), (2, 3)), 3000, seed=31)
    assert rep.passed


def mixture_fn(a, x, y, b):
    # half the arrays are empty, half are complete: maximally non-dissociated
    if x == y:
        return 0
    return int(a < 0.5)


def test_dissociation_detects_mixture():
    s = smp.FunctionalSampler(mixture_fn, mixture=True)
    rep = smp.dissociation_test(s, ((0, 1), (2, 3)), 2000, seed=32)
    assert rep.verdict == "fail"
    assert rep.p_value < ALPHA


def test_dissociation_split_validation():
    s = smp.GraphSampler(TRIANGLE)
    with pytest.raises(OverlappingSplit):
        smp.dissociation_test(s, ((0, 1), (1, 2)), 100, seed=0)
    with pytest.raises(OverlappingSplit):
        smp.dissociation_test(s, ((), (1,)), 100, seed=0)
    with pytest.raises(BudgetExceeded):
        smp.dissociation_test(s, ((0, 1, 2), (3,)), 100, seed=0)


def test_dissociation_degenerate_for_constant_windows():
    rep = smp.dissociation_test(smp.InjectiveGraphSampler(LOOP), ((0,), (1,)),
                                500, seed=33)
    assert rep.verdict == "degenerate"


# -- sample objects ----------------------------------------------------------

def test_array_sample_carries_latents_and_source():
    s = smp.sample_from_graphon(two_block_double(), 3, seed=34)
    assert s.k == 3
    assert len(s.latents.u) == 3
    assert s.source.startswith("graphon(")
    assert s.seed == 34


def test_samples_are_valid_multigraphs():
    w = random_step_graphon(np.random.default_rng(10), 3, 4)
    for seed in range(10):
        s = smp.sample_from_graphon(w, 4, seed)
        assert np.array_equal(s.window.adj, s.window.adj.T)
        assert np.all(np.diagonal(s.window.adj) % 2 == 0)
