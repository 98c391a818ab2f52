import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bondscope.network import BondNetwork, extract_environment
from bondscope.rings import (
    PrimitiveRingProfile,
    format_ring_profile,
    primitive_rings,
    primitive_rings_through,
    ring_cluster,
)

from conftest import random_connected_network, random_regular_subdivided


# ---------------------------------------------------------------------------
# brute-force oracle: enumerate every simple cycle through the root inside the
# environment and keep those whose in-environment distances match the ring
# distances for every atom pair


def _env_adjacency(env):
    atoms = env.atoms
    index = {a: i for i, a in enumerate(atoms)}
    adj = [[] for _ in atoms]
    for a, b in env.bonds:
        adj[index[a]].append(index[b])
        adj[index[b]].append(index[a])
    return index, adj


def _apsp(adj):
    n = len(adj)
    dist = [[None] * n for _ in range(n)]
    for s in range(n):
        row = dist[s]
        row[s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if row[v] is None:
                        row[v] = d
                        nxt.append(v)
            frontier = nxt
    return dist


def brute_force_primitive_rings(env, max_len):
    """All primitive rings through the root by exhaustive cycle enumeration,
    with primitivity tested against in-environment distances."""
    index, adj = _env_adjacency(env)
    dist = _apsp(adj)
    root = index[env.root]
    rings = set()

    def extend(path, members):
        head = path[-1]
        for nxt in adj[head]:
            if nxt == root and len(path) >= 3 and path[1] < path[-1]:
                rings.add(tuple(path))  # one orientation per cycle
            if nxt not in members and len(path) < max_len:
                members.add(nxt)
                path.append(nxt)
                extend(path, members)
                path.pop()
                members.remove(nxt)

    extend([root], {root})
    lengths = []
    for cycle in rings:
        L = len(cycle)
        ok = True
        for i in range(L):
            for j in range(i + 1, L):
                arc = min(j - i, L - (j - i))
                if dist[cycle[i]][cycle[j]] != arc:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            lengths.append(L)
    return tuple(sorted(lengths))


class TestReferenceCases:
    def test_theta_rooted_at_branch_atom(self, three_ring_theta):
        env = extract_environment(three_ring_theta, 1, 2)
        prof = primitive_rings_through(env, 4)
        assert prof.lengths == (4, 4, 4)

    def test_lone_six_cycle(self):
        net = BondNetwork(["X"] * 6, [(i, (i + 1) % 6) for i in range(6)])
        env = extract_environment(net, 0, 3)
        assert primitive_rings_through(env, 6).lengths == (6,)

    def test_tree_has_no_rings(self):
        net = BondNetwork(["X"] * 5, [(0, 1), (1, 2), (1, 3), (3, 4)])
        env = extract_environment(net, 1, 3)
        assert primitive_rings_through(env, 6).lengths == ()

    def test_max_len_above_containment_bound_rejected(self):
        net = BondNetwork(["X"] * 6, [(i, (i + 1) % 6) for i in range(6)])
        env = extract_environment(net, 0, 2)
        with pytest.raises(ValueError, match="max_len"):
            primitive_rings_through(env, 5)

    def test_triangle_through_root(self):
        net = BondNetwork(["X"] * 3, [(0, 1), (1, 2), (2, 0)])
        env = extract_environment(net, 0, 2)
        assert primitive_rings_through(env, 2).lengths == ()
        assert primitive_rings_through(env, 3).lengths == (3,)

    def test_six_cycle_with_shortcut_is_not_primitive(self):
        # chord path of length 2 between opposite atoms splits the 6-ring
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 6), (6, 3)]
        net = BondNetwork(["X"] * 7, edges)
        env = extract_environment(net, 0, 3)
        prof = primitive_rings_through(env, 6)
        # the 6-ring decomposes into two 5-rings through the chord
        assert prof.lengths == (5, 5)

    def test_even_and_odd_rings_coexist(self):
        # a 5-ring and a 6-ring sharing only the root
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
        edges += [(0, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 0)]
        net = BondNetwork(["X"] * 10, edges)
        env = extract_environment(net, 0, 3)
        assert primitive_rings_through(env, 6).lengths == (5, 6)


class TestOracleAgreement:
    @given(st.integers(0, 10_000))
    @settings(max_examples=200, deadline=None)
    def test_matches_brute_force_on_random_networks(self, seed):
        net = random_connected_network(seed, max_atoms=14)
        r = 3
        env = extract_environment(net, 0, r)
        fast = primitive_rings_through(env, 2 * r).lengths
        brute = brute_force_primitive_rings(env, 2 * r)
        assert fast == brute

    @given(st.integers(0, 2000))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force_on_perfectly_coordinated(self, seed):
        net = random_regular_subdivided(seed, n_si=10)
        env = extract_environment(net, 0, 3)
        fast = primitive_rings_through(env, 6).lengths
        brute = brute_force_primitive_rings(env, 6)
        assert fast == brute

    @given(st.integers(0, 5000))
    @settings(max_examples=60, deadline=None)
    def test_locality_larger_radius_gives_same_rings(self, seed):
        # computed inside radius r, the profile up to 2r equals the same
        # computation inside a strictly larger environment
        net = random_connected_network(seed, max_atoms=20)
        env_small = extract_environment(net, 0, 3)
        env_large = extract_environment(net, 0, 6)
        small = primitive_rings_through(env_small, 6).lengths
        large_truncated = tuple(
            l for l in primitive_rings_through(env_large, 12).lengths if l <= 6
        )
        assert small == large_truncated


class TestRingCluster:
    def test_theta_cluster_is_whole_configuration(self, three_ring_theta):
        env = extract_environment(three_ring_theta, 1, 2)
        atoms, bonds = ring_cluster(env)
        assert atoms == (0, 1, 2, 3, 4)
        assert set(bonds) == set(three_ring_theta.bonds)

    def test_tree_cluster_is_single_vertex(self):
        net = BondNetwork(["X"] * 4, [(0, 1), (1, 2), (2, 3)])
        env = extract_environment(net, 1, 2)
        atoms, bonds = ring_cluster(env)
        assert atoms == (1,)
        assert bonds == ()

    def test_cluster_bonds_are_ring_bonds_only(self):
        # a pendant atom on a cycle never enters the cluster
        edges = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4)]
        net = BondNetwork(["X"] * 5, edges)
        env = extract_environment(net, 0, 2)
        atoms, bonds = ring_cluster(env)
        assert atoms == (0, 1, 2, 3)
        assert (1, 4) not in bonds


class TestFormatting:
    def test_empty(self):
        assert format_ring_profile(PrimitiveRingProfile(())) == "no rings"

    def test_counts(self):
        prof = PrimitiveRingProfile((10, 10, 12, 12, 12))
        assert format_ring_profile(prof) == "2 10-rings, 3 12-rings"

    def test_singular(self):
        assert format_ring_profile(PrimitiveRingProfile((8,))) == "1 8-ring"
