"""Primitive rings through a root atom.

A ring is primitive when the shortest path between any two of its atoms lies
within the ring, i.e. no pair has a shortcut through the rest of the network.
Rings are enumerated from the shortest-path DAG of the root: an even ring of
2k atoms is a pair of internally disjoint shortest paths meeting at an atom in
shell k, an odd ring of 2k+1 atoms is a pair of disjoint shortest paths to the
ends of an intra-shell bond in shell k. Ring lengths count every atom, twice
the silicon-only convention.

Primitivity is checked against parent-network distances served from the
network's shared bounded-distance cache; for rings of at most 2r atoms through
the root this is equivalent to checking inside the radius-r environment (any
shortcut path stays within radius r-1 of the root).
"""

from __future__ import annotations

from dataclasses import dataclass

from .network import BondNetwork, LocalEnvironment


@dataclass(frozen=True)
class PrimitiveRingProfile:
    """Multiset of primitive ring lengths through one root, stored sorted."""

    lengths: tuple

    def multiplicities(self) -> dict:
        out = {}
        for length in self.lengths:
            out[length] = out.get(length, 0) + 1
        return out

    def __len__(self):
        return len(self.lengths)


def _paths_to(target, parents, memo, root):
    """All shortest paths root -> target as vertex tuples, via the parent DAG."""
    if target == root:
        return ((root,),)
    got = memo.get(target)
    if got is not None:
        return got
    paths = []
    for p in parents[target]:
        for pre in _paths_to(p, parents, memo, root):
            paths.append(pre + (target,))
    paths = tuple(paths)
    memo[target] = paths
    return paths


def _is_primitive(ring, network, depth):
    """No pair of ring atoms may be closer in the network than along the ring."""
    L = len(ring)
    for i in range(L):
        a = ring[i]
        ball = network.distances_within(a, depth)
        for j in range(i + 2, L):
            arc = j - i
            m = arc if arc <= L - arc else L - arc
            if m <= 1:
                continue
            d = ball.get(ring[j])
            if d is not None and d < m:
                return False
    return True


def primitive_rings_network(network: BondNetwork, root: int, max_len: int) -> tuple:
    """Primitive rings of at most ``max_len`` atoms through ``root``.

    Returns each ring as a vertex tuple in cyclic order starting at the root.
    """
    if max_len < 3:
        return ()
    k_even = max_len // 2
    k_odd = (max_len - 1) // 2
    k_max = max(k_even, k_odd)

    dist = network.distances_within(root, k_max)
    neighbors = network.neighbors
    # shortest-path DAG restricted to the ball (the cache may hold a deeper one)
    parents = {}
    by_shell = [[] for _ in range(k_max + 1)]
    for u, du in dist.items():
        if du > k_max:
            continue
        by_shell[du].append(u)
        if du:
            parents[u] = [v for v in neighbors[u] if dist.get(v) == du - 1]
    for shell in by_shell:
        shell.sort()

    memo = {}
    depth = k_max - 1  # deepest distance a shortcut test can need
    rings = []

    # even rings: opposite atom at shell k
    for k in range(2, k_even + 1):
        for o in by_shell[k]:
            paths = _paths_to(o, parents, memo, root)
            if len(paths) < 2:
                continue
            for i in range(len(paths) - 1):
                pi = paths[i]
                interior_i = set(pi[1:-1])
                for j in range(i + 1, len(paths)):
                    pj = paths[j]
                    if interior_i.intersection(pj[1:-1]):
                        continue
                    ring = pi + tuple(reversed(pj[1:-1]))
                    if _is_primitive(ring, network, depth):
                        rings.append(ring)

    # odd rings: intra-shell bond at shell k
    for k in range(1, k_odd + 1):
        for o1 in by_shell[k]:
            for o2 in neighbors[o1]:
                if o2 <= o1 or dist.get(o2) != k:
                    continue
                for pi in _paths_to(o1, parents, memo, root):
                    interior_i = set(pi[1:])
                    for pj in _paths_to(o2, parents, memo, root):
                        if interior_i.intersection(pj[1:]):
                            continue
                        ring = pi + tuple(reversed(pj[1:]))
                        if _is_primitive(ring, network, depth):
                            rings.append(ring)

    rings.sort(key=lambda ring: (len(ring), ring))
    return tuple(rings)


def primitive_rings(env: LocalEnvironment, max_len: int) -> tuple:
    """Primitive rings through the environment root, as vertex tuples.

    ``max_len`` may not exceed twice the radius: that bound guarantees every
    ring (and every possible shortcut) is contained in the environment, so the
    local computation agrees with the full network.
    """
    if max_len > 2 * env.radius:
        raise ValueError(
            f"max_len {max_len} exceeds 2*radius = {2 * env.radius}; rings could "
            "leave the environment"
        )
    return primitive_rings_network(env.network, env.root, max_len)


def primitive_rings_through(env: LocalEnvironment, max_len: int) -> PrimitiveRingProfile:
    """Primitive ring profile: lengths of all primitive rings through the root."""
    rings = primitive_rings(env, max_len)
    return PrimitiveRingProfile(tuple(sorted(len(ring) for ring in rings)))


def ring_cluster(env: LocalEnvironment, max_len: int = None) -> tuple:
    """Union of all primitive rings through the root: (atoms, bonds).

    A root on no ring yields the single-vertex cluster. Bonds are the union of
    ring edges, not the induced bonds on the ring atoms.
    """
    if max_len is None:
        max_len = 2 * env.radius
    rings = primitive_rings(env, max_len)
    atoms = {env.root}
    bonds = set()
    for ring in rings:
        atoms.update(ring)
        for i, a in enumerate(ring):
            b = ring[(i + 1) % len(ring)]
            bonds.add((a, b) if a < b else (b, a))
    return tuple(sorted(atoms)), tuple(sorted(bonds))


def format_ring_profile(profile: PrimitiveRingProfile) -> str:
    """Human rendering, e.g. '2 10-rings, 3 12-rings'. Empty profile: 'no rings'."""
    if not profile.lengths:
        return "no rings"
    mult = profile.multiplicities()
    parts = []
    for length in sorted(mult):
        m = mult[length]
        parts.append(f"{m} {length}-ring" + ("s" if m > 1 else ""))
    return ", ".join(parts)
