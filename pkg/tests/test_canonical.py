import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bondscope.canonical import (
    EnvironmentTooLargeError,
    canonical_form,
    primitive_cluster,
    rooted_canonical_bytes,
)
from bondscope.network import BondNetwork, extract_environment

from conftest import random_connected_network


# ---------------------------------------------------------------------------
# exhaustive oracle machinery: graphs on n labeled vertices are edge bitmasks;
# the brute-force canonical form is the minimum remapped mask over all
# permutations fixing the root (vertex 0). Species variants pack a species
# bitmask above the edge bits.


def _edge_bits(n):
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return pairs, {p: i for i, p in enumerate(pairs)}


def root_connected_masks(n):
    """All edge bitmasks whose vertex 0 reaches every vertex."""
    pairs, bit = _edge_bits(n)
    masks = []
    for mask in range(1 << len(pairs)):
        adj = [0] * n
        for (a, b), i in bit.items():
            if mask >> i & 1:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        reached = 1
        frontier = 1
        while frontier:
            nxt = 0
            v = 0
            f = frontier
            while f:
                if f & 1:
                    nxt |= adj[v]
                f >>= 1
                v += 1
            frontier = nxt & ~reached
            reached |= frontier
        if reached == (1 << n) - 1:
            masks.append(mask)
    return np.array(masks, dtype=np.int64)


def brute_canonical(n, masks, n_species_bits=0):
    """Vectorized minimum over root-fixing permutations of the packed mask."""
    pairs, bit = _edge_bits(n)
    n_edges = len(pairs)
    best = masks.copy()
    for perm_rest in itertools.permutations(range(1, n)):
        perm = (0,) + perm_rest
        remapped = np.zeros_like(masks)
        for (a, b), src in bit.items():
            pa, pb = perm[a], perm[b]
            dst = bit[(pa, pb) if pa < pb else (pb, pa)]
            remapped |= ((masks >> src) & 1) << dst
        for v in range(n_species_bits):
            remapped |= ((masks >> (n_edges + v)) & 1) << (n_edges + perm[v])
        np.minimum(best, remapped, out=best)
    return best


def mask_to_adj(n, mask):
    pairs, _ = _edge_bits(n)
    adj = [[] for _ in range(n)]
    for i, (a, b) in enumerate(pairs):
        if mask >> i & 1:
            adj[a].append(b)
            adj[b].append(a)
    return adj


def assert_partitions_equal(brute_vals, our_keys):
    """brute classes and our key classes must be the same partition."""
    assert len(set(zip(brute_vals, our_keys))) == len(set(brute_vals)) == len(set(our_keys))


class TestExhaustiveSmall:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_single_species_partition_matches_bruteforce(self, n):
        masks = root_connected_masks(n)
        brute = brute_canonical(n, masks)
        keys = [rooted_canonical_bytes(mask_to_adj(n, int(m)), "X" * n, 0) for m in masks]
        assert_partitions_equal(brute.tolist(), keys)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_two_species_partition_matches_bruteforce(self, n):
        pairs, _ = _edge_bits(n)
        n_edges = len(pairs)
        base = root_connected_masks(n)
        packed = []
        for m in base.tolist():
            for sp in range(1 << n):
                packed.append(m | sp << n_edges)
        packed = np.array(packed, dtype=np.int64)
        brute = brute_canonical(n, packed, n_species_bits=n)
        keys = []
        for pm in packed.tolist():
            species = "".join("BA"[pm >> (n_edges + v) & 1] for v in range(n))
            keys.append(rooted_canonical_bytes(mask_to_adj(n, pm & ((1 << n_edges) - 1)), species, 0))
        assert_partitions_equal(brute.tolist(), keys)


class TestInvariance:
    def test_path_vs_star_distinct(self):
        path = BondNetwork(["X"] * 4, [(0, 1), (1, 2), (2, 3)])
        star = BondNetwork(["X"] * 4, [(0, 1), (0, 2), (0, 3)])
        kp = canonical_form(extract_environment(path, 0, 3))
        ks = canonical_form(extract_environment(star, 0, 3))
        assert kp != ks

    def test_species_matter(self):
        a = BondNetwork(["Si", "O", "O"], [(0, 1), (0, 2)])
        b = BondNetwork(["Si", "O", "Si"], [(0, 1), (0, 2)])
        assert canonical_form(extract_environment(a, 0, 1)) != canonical_form(
            extract_environment(b, 0, 1)
        )

    def test_root_position_matters(self):
        # path rooted at the end vs at the middle
        net = BondNetwork(["X"] * 3, [(0, 1), (1, 2)])
        assert canonical_form(extract_environment(net, 0, 2)) != canonical_form(
            extract_environment(net, 1, 2)
        )

    @given(st.integers(0, 10_000))
    @settings(max_examples=300, deadline=None)
    def test_random_permutation_pairs(self, seed):
        net = random_connected_network(seed, max_atoms=16)
        rng = random.Random(seed + 1)
        perm = list(range(net.n_atoms))
        rng.shuffle(perm)
        inv = [0] * len(perm)
        for i, p in enumerate(perm):
            inv[p] = i
        permuted = BondNetwork(
            [net.species[inv[i]] for i in range(net.n_atoms)],
            [(perm[a], perm[b]) for a, b in net.bonds],
        )
        root = rng.randrange(net.n_atoms)
        r = rng.randint(1, 4)
        k1 = canonical_form(extract_environment(net, root, r))
        k2 = canonical_form(extract_environment(permuted, perm[root], r))
        assert k1 == k2

    def test_size_cap(self):
        net = random_connected_network(5, max_atoms=20)
        env = extract_environment(net, 0, 3)
        with pytest.raises(EnvironmentTooLargeError):
            canonical_form(env, size_cap=2)


class TestPrimitiveCluster:
    def test_theta_cluster_covers_configuration(self, three_ring_theta):
        env = extract_environment(three_ring_theta, 1, 2)
        key = primitive_cluster(env)
        # cluster = whole 5-atom configuration rooted at the branch atom
        whole = canonical_form(env)
        assert key == whole

    def test_tree_cluster_is_single_vertex(self):
        net = BondNetwork(["Si", "O", "Si"], [(0, 1), (1, 2)])
        env = extract_environment(net, 0, 2)
        key = primitive_cluster(env)
        lone = BondNetwork(["Si"], [])
        assert key == canonical_form(extract_environment(lone, 0, 1))

    def test_cluster_ignores_off_ring_decoration(self):
        ring = [(0, 1), (1, 2), (2, 3), (3, 0)]
        decorated = ring + [(1, 4), (4, 5)]
        env_a = extract_environment(BondNetwork(["X"] * 4, ring), 0, 2)
        env_b = extract_environment(BondNetwork(["X"] * 6, decorated), 0, 2)
        assert primitive_cluster(env_a) == primitive_cluster(env_b)

    @given(st.integers(0, 3000))
    @settings(max_examples=100, deadline=None)
    def test_cluster_invariant_under_permutation(self, seed):
        net = random_connected_network(seed, max_atoms=12)
        rng = random.Random(seed + 7)
        perm = list(range(net.n_atoms))
        rng.shuffle(perm)
        inv = [0] * len(perm)
        for i, p in enumerate(perm):
            inv[p] = i
        permuted = BondNetwork(
            [net.species[inv[i]] for i in range(net.n_atoms)],
            [(perm[a], perm[b]) for a, b in net.bonds],
        )
        root = rng.randrange(net.n_atoms)
        k1 = primitive_cluster(extract_environment(net, root, 3))
        k2 = primitive_cluster(extract_environment(permuted, perm[root], 3))
        assert k1 == k2
