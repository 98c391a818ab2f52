"""Graph substrate: bond networks, rooted local environments, shell annuli,
connected components, and the first-homology rank.

Atoms are dense integer ids 0..N-1 with an interned species label each. A
local environment of radius r around a root collects every atom within graph
distance r together with all induced bonds; shells are the sets of atoms at
exact distance i. All objects are immutable after construction and all
iteration orders are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence


class BondNetwork:
    """Species-labelled undirected graph, optionally embedded in a periodic cell.

    Parameters
    ----------
    species : sequence of str
        Species label per atom; index is the atom id.
    bonds : iterable of (int, int)
        Unordered atom-id pairs. Self-bonds and out-of-range ids are rejected;
        duplicates collapse.
    positions : (N, 3) array-like of float, optional
        Cartesian coordinates in Angstrom.
    cell : (3, 3) array-like of float, optional
        Periodic cell matrix, rows are the lattice vectors.
    """

    __slots__ = ("species", "bonds", "positions", "cell", "neighbors", "_ball_cache")

    def __init__(self, species, bonds, positions=None, cell=None):
        self.species = tuple(species)
        n = len(self.species)
        normalized = set()
        for a, b in bonds:
            if a == b:
                raise ValueError(f"self-bond on atom {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"bond ({a}, {b}) references an unknown atom id")
            normalized.add((a, b) if a < b else (b, a))
        self.bonds = frozenset(normalized)

        if positions is not None:
            import numpy as np

            positions = np.asarray(positions, dtype=float)
            if positions.shape != (n, 3):
                raise ValueError(
                    f"positions shape {positions.shape} does not match {n} atoms"
                )
            positions.setflags(write=False)
        self.positions = positions
        if cell is not None:
            import numpy as np

            cell = np.asarray(cell, dtype=float)
            if cell.shape != (3, 3):
                raise ValueError("cell must be a 3x3 matrix")
            cell.setflags(write=False)
        self.cell = cell

        adj = [[] for _ in range(n)]
        for a, b in self.bonds:
            adj[a].append(b)
            adj[b].append(a)
        self.neighbors = tuple(tuple(sorted(nb)) for nb in adj)
        # atom -> (depth, {atom: distance}); grown lazily, shared across roots
        self._ball_cache = {}

    @property
    def n_atoms(self) -> int:
        return len(self.species)

    @property
    def atoms(self) -> tuple:
        """Atoms as (id, species) pairs."""
        return tuple(enumerate(self.species))

    def degree(self, atom: int) -> int:
        return len(self.neighbors[atom])

    def distances_within(self, atom: int, depth: int) -> Mapping[int, int]:
        """Distances from `atom` to every atom within `depth` bonds.

        Results are cached on the network (read-only after fill), so repeated
        ring searches across nearby roots reuse each other's BFS work.
        """
        cached = self._ball_cache.get(atom)
        if cached is not None and cached[0] >= depth:
            return cached[1]
        dist = {atom: 0}
        frontier = [atom]
        neighbors = self.neighbors
        for d in range(1, depth + 1):
            nxt = []
            for u in frontier:
                for v in neighbors[u]:
                    if v not in dist:
                        dist[v] = d
                        nxt.append(v)
            if not nxt:
                break
            frontier = nxt
        self._ball_cache[atom] = (depth, dist)
        return dist

    def __repr__(self):
        return (
            f"BondNetwork({self.n_atoms} atoms, {len(self.bonds)} bonds, "
            f"{'periodic' if self.cell is not None else 'open'})"
        )


class LocalEnvironment:
    """Rooted subgraph of all atoms within graph distance ``radius`` of ``root``.

    ``members`` lists (atom-id, shell-index) in (shell, id) order; shell-index
    is the BFS distance from the root in the parent network. ``bonds`` are the
    induced bonds, and every member carries its parent-network degree (the
    coordination profile needs full valences, not induced ones).
    """

    __slots__ = (
        "network",
        "root",
        "radius",
        "members",
        "shells",
        "shell_of",
        "bonds",
        "member_degrees",
        "_local_index",
        "_local_adj",
        "_shell_sizes",
        "_bonds_same",
        "_bonds_prev",
    )

    def __init__(self, network: BondNetwork, root: int, radius: int):
        if radius < 1:
            raise ValueError(f"radius must be >= 1, got {radius}")
        if not (0 <= root < network.n_atoms):
            raise ValueError(f"unknown root atom id {root}")
        self.network = network
        self.root = root
        self.radius = radius

        neighbors = network.neighbors
        shell_of = {root: 0}
        shells = [[root]]
        frontier = [root]
        for d in range(1, radius + 1):
            nxt = []
            for u in frontier:
                for v in neighbors[u]:
                    if v not in shell_of:
                        shell_of[v] = d
                        nxt.append(v)
            nxt.sort()
            shells.append(nxt)
            frontier = nxt
        self.shell_of = shell_of
        self.shells = tuple(tuple(s) for s in shells)
        members = []
        for d, shell in enumerate(shells):
            members.extend((a, d) for a in shell)
        self.members = tuple(members)
        self.member_degrees = tuple(len(neighbors[a]) for a, _ in members)

        local_index = {a: i for i, (a, _) in enumerate(members)}
        self._local_index = local_index

        # Induced bonds, plus local-index bond lists grouped by the higher
        # shell they touch (consumed by the incremental annulus rank scan).
        bonds = []
        bonds_same = [[] for _ in range(radius + 1)]
        bonds_prev = [[] for _ in range(radius + 1)]
        local_adj = [[] for _ in range(len(members))]
        for a, da in members:
            ia = local_index[a]
            for b in neighbors[a]:
                db = shell_of.get(b)
                if db is None:
                    continue
                ib = local_index[b]
                local_adj[ia].append(ib)
                if a < b:
                    bonds.append((a, b))
                    if da == db:
                        bonds_same[da].append((ia, ib))
                    else:
                        bonds_prev[max(da, db)].append((ia, ib))
        self.bonds = tuple(sorted(bonds))
        self._bonds_same = tuple(tuple(x) for x in bonds_same)
        self._bonds_prev = tuple(tuple(x) for x in bonds_prev)
        self._local_adj = tuple(tuple(x) for x in local_adj)
        self._shell_sizes = tuple(len(s) for s in self.shells)

    @property
    def n_atoms(self) -> int:
        return len(self.members)

    @property
    def atoms(self) -> tuple:
        """Member atom ids in (shell, id) order."""
        return tuple(a for a, _ in self.members)

    def degree_of(self, atom: int) -> int:
        """Parent-network degree of a member atom."""
        return self.member_degrees[self._local_index[atom]]

    def species_of(self, atom: int) -> str:
        return self.network.species[atom]

    def __repr__(self):
        return (
            f"LocalEnvironment(root={self.root}, radius={self.radius}, "
            f"{self.n_atoms} atoms, {len(self.bonds)} bonds)"
        )


@dataclass(frozen=True)
class ShellAnnulus:
    """Induced subgraph on the atoms with shell index in [lo, hi]."""

    lo: int
    hi: int
    atoms: tuple
    bonds: tuple


def bfs_distances(network: BondNetwork, root: int) -> dict:
    """Graph distance from ``root`` to every reachable atom.

    Unreachable atoms are absent from the result.
    """
    if not (0 <= root < network.n_atoms):
        raise ValueError(f"unknown root atom id {root}")
    neighbors = network.neighbors
    dist = {root: 0}
    frontier = [root]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in neighbors[u]:
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def extract_environment(network: BondNetwork, root: int, radius: int) -> LocalEnvironment:
    """Local atomic environment of ``radius`` around ``root``."""
    return LocalEnvironment(network, root, radius)


def shell_annulus(env: LocalEnvironment, lo: int, hi: int) -> ShellAnnulus:
    """Annulus S(lo, hi): shells lo..hi of ``env`` with their induced bonds."""
    if not (0 <= lo <= hi <= env.radius):
        raise ValueError(f"invalid annulus bounds ({lo}, {hi}) for radius {env.radius}")
    atoms = []
    for d in range(lo, hi + 1):
        atoms.extend(env.shells[d])
    shell_of = env.shell_of
    bonds = tuple(
        (a, b) for a, b in env.bonds if lo <= shell_of[a] <= hi and lo <= shell_of[b] <= hi
    )
    return ShellAnnulus(lo, hi, tuple(atoms), bonds)


def _as_atoms_bonds(subgraph) -> tuple:
    if isinstance(subgraph, (ShellAnnulus, LocalEnvironment)):
        return subgraph.atoms, subgraph.bonds
    if isinstance(subgraph, BondNetwork):
        return tuple(range(subgraph.n_atoms)), tuple(subgraph.bonds)
    atoms, bonds = subgraph
    return tuple(atoms), tuple(bonds)


def connected_components(subgraph) -> int:
    """Number of connected components; 0 for the empty graph.

    Accepts a ShellAnnulus, LocalEnvironment, BondNetwork, or an
    (atoms, bonds) pair.
    """
    atoms, bonds = _as_atoms_bonds(subgraph)
    if not atoms:
        return 0
    index = {a: i for i, a in enumerate(atoms)}
    parent = list(range(len(atoms)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(atoms)
    for a, b in bonds:
        ra, rb = find(index[a]), find(index[b])
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps


def h1_rank(subgraph) -> int:
    """Rank of the first homology group: #components - #atoms + #bonds.

    Equals the dimension of the cycle space (the number of algebraically
    independent rings).
    """
    atoms, bonds = _as_atoms_bonds(subgraph)
    return connected_components(subgraph) - len(atoms) + len(bonds)


def perfect_coordination_check(env: LocalEnvironment, d0: int, d1: int) -> bool:
    """True iff every member's full-network degree follows the shell-parity rule.

    Even shells must have degree ``d0`` and odd shells ``d1`` (silica: 4 and 2).
    """
    if d0 < 1 or d1 < 1:
        raise ValueError("coordination targets must be >= 1")
    degrees = env.member_degrees
    for i, (_, shell) in enumerate(env.members):
        want = d0 if shell % 2 == 0 else d1
        if degrees[i] != want:
            return False
    return True


def make_root_filter(root_species) -> Callable[[str], bool]:
    """Normalize a species predicate: None (all), a label, a set, or a callable."""
    if root_species is None:
        return lambda s: True
    if callable(root_species):
        return root_species
    if isinstance(root_species, str):
        return lambda s: s == root_species
    allowed = frozenset(root_species)
    return lambda s: s in allowed
