import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bondscope.descriptors import (
    ALL_TAGS,
    TAG_BARCODE,
    TAG_COORDINATION,
    TAG_GRAPH,
    TAG_RINGS,
    TAG_SHELL_COUNT,
    coordination_profile,
    describe,
    render_key,
    shell_count,
)
from bondscope.network import BondNetwork, extract_environment

from conftest import random_connected_network, random_regular_subdivided


def permuted_copy(net, seed):
    rng = random.Random(seed)
    perm = list(range(net.n_atoms))
    rng.shuffle(perm)
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return (
        BondNetwork(
            [net.species[inv[i]] for i in range(net.n_atoms)],
            [(perm[a], perm[b]) for a, b in net.bonds],
        ),
        perm,
    )


class TestCoordinationProfile:
    def test_isolated_root(self):
        net = BondNetwork(["Si"], [])
        env = extract_environment(net, 0, 1)
        prof = coordination_profile(env)
        assert prof.shells == ((0,), ())

    def test_alternating_valences_on_crystal(self, cristobalite4):
        root = cristobalite4.species.index("Si")
        env = extract_environment(cristobalite4, root, 6)
        prof = coordination_profile(env)
        for shell_idx, vals in enumerate(prof.shells):
            want = 4 if shell_idx % 2 == 0 else 2
            assert all(v == want for v in vals)

    def test_multisets_sorted(self):
        net = BondNetwork(["X"] * 5, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3)])
        env = extract_environment(net, 0, 2)
        for vals in coordination_profile(env).shells:
            assert list(vals) == sorted(vals)

    def test_species_flag_distinguishes_chemistries(self):
        # same valences, different species in shell 1
        a = BondNetwork(["C", "N", "O"], [(0, 1), (1, 2)])
        b = BondNetwork(["C", "O", "O"], [(0, 1), (1, 2)])
        ea = extract_environment(a, 0, 1)
        eb = extract_environment(b, 0, 1)
        assert coordination_profile(ea) == coordination_profile(eb)
        assert coordination_profile(ea, with_species=True) != coordination_profile(
            eb, with_species=True
        )

    def test_shell_count(self, cristobalite4):
        root = cristobalite4.species.index("Si")
        env = extract_environment(cristobalite4, root, 6)
        sc = shell_count(coordination_profile(env))
        assert sc.counts == (1, 4, 4, 12, 12, 36, 24)

    def test_single_atom_shell_count(self):
        net = BondNetwork(["Si"], [])
        env = extract_environment(net, 0, 1)
        assert shell_count(coordination_profile(env)).counts == (1, 0)


class TestDescribe:
    def test_unknown_tag(self):
        net = BondNetwork(["X", "X"], [(0, 1)])
        env = extract_environment(net, 0, 1)
        with pytest.raises(ValueError, match="unknown descriptor"):
            describe(env, "nope")

    def test_deterministic_across_calls(self):
        net = random_connected_network(42, max_atoms=14)
        env = extract_environment(net, 0, 3)
        for tag in ALL_TAGS:
            assert describe(env, tag) == describe(env, tag)

    @given(st.integers(0, 4000))
    @settings(max_examples=60, deadline=None)
    def test_all_tags_isomorphism_invariant(self, seed):
        net = random_connected_network(seed, max_atoms=12)
        copy, perm = permuted_copy(net, seed + 1)
        rng = random.Random(seed + 2)
        root = rng.randrange(net.n_atoms)
        r = rng.randint(2, 3)
        env1 = extract_environment(net, root, r)
        env2 = extract_environment(copy, perm[root], r)
        for tag in ALL_TAGS:
            assert describe(env1, tag) == describe(env2, tag), tag

    @given(st.integers(0, 4000))
    @settings(max_examples=40, deadline=None)
    def test_radius_coarsening(self, seed):
        # equal keys at radius r+1 imply equal keys at radius r
        net = random_regular_subdivided(seed, n_si=12)
        r = 3
        envs = {root: extract_environment(net, root, r) for root in range(net.n_atoms)}
        envs_big = {root: extract_environment(net, root, r + 1) for root in range(net.n_atoms)}
        for tag in ALL_TAGS:
            by_key = {}
            for root in envs:
                by_key.setdefault(describe(envs_big[root], tag), []).append(root)
            for roots in by_key.values():
                small_keys = {describe(envs[root], tag) for root in roots}
                assert len(small_keys) == 1, tag

    @given(st.integers(0, 4000))
    @settings(max_examples=30, deadline=None)
    def test_hierarchy_graph_iso_refines_rings_and_barcode(self, seed):
        # equal canonical form at radius r forces equal barcode and ring keys
        net = random_regular_subdivided(seed, n_si=10)
        r = 3
        by_graph = {}
        for root in range(net.n_atoms):
            env = extract_environment(net, root, r)
            by_graph.setdefault(describe(env, TAG_GRAPH), []).append(env)
        for group in by_graph.values():
            for tag in (TAG_BARCODE, TAG_RINGS, TAG_COORDINATION, TAG_SHELL_COUNT):
                assert len({describe(env, tag) for env in group}) == 1

    @given(st.integers(0, 4000))
    @settings(max_examples=25, deadline=None)
    def test_hierarchy_graph_iso_next_radius_refines_coordination(self, seed):
        # coordination at radius r sees bonds into shell r+1, so it is coarser
        # than graph isomorphism at radius r+1 (not at radius r)
        net = random_regular_subdivided(seed, n_si=12)
        r = 2
        by_graph = {}
        for root in range(net.n_atoms):
            env_big = extract_environment(net, root, r + 1)
            by_graph.setdefault(describe(env_big, TAG_GRAPH), []).append(root)
        for roots in by_graph.values():
            keys = {
                describe(extract_environment(net, root, r), TAG_COORDINATION)
                for root in roots
            }
            assert len(keys) == 1


class TestRendering:
    def test_barcode_rendering(self, quartz4):
        root = quartz4.species.index("Si")
        env = extract_environment(quartz4, root, 6)
        assert render_key(describe(env, TAG_BARCODE)) == "3×(0,6),3×(2,6)"

    def test_ring_rendering(self, quartz4):
        root = quartz4.species.index("Si")
        env = extract_environment(quartz4, root, 6)
        assert render_key(describe(env, TAG_RINGS)) == "6 12-rings"

    def test_shell_count_rendering(self, quartz4):
        root = quartz4.species.index("Si")
        env = extract_environment(quartz4, root, 6)
        assert render_key(describe(env, TAG_SHELL_COUNT)) == "(1,4,4,12,12,36,30)"

    def test_coordination_rendering(self):
        net = BondNetwork(["Si", "O", "O"], [(0, 1), (0, 2)])
        env = extract_environment(net, 0, 1)
        assert render_key(describe(env, TAG_COORDINATION)) == "2 / 1^2"

    def test_graph_rendering_is_stable_digest(self, quartz4):
        root = quartz4.species.index("Si")
        env = extract_environment(quartz4, root, 4)
        text = render_key(describe(env, TAG_GRAPH))
        assert text.startswith("graph-iso[") and len(text) == len("graph-iso[]") + 16

    def test_empty_ring_profile_rendering(self):
        net = BondNetwork(["X", "X"], [(0, 1)])
        env = extract_environment(net, 0, 2)
        assert render_key(describe(env, TAG_RINGS)) == "no rings"
