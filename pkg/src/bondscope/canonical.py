"""Canonical form of rooted, species-labelled graphs.

Two environments get the same key exactly when there is a bijection between
them that fixes the root, preserves species, and preserves bonds. The key is
computed by iterative color refinement seeded with (distance from root,
species), followed by individualization-refinement search over the first
non-singleton color cell; the canonical form is the lexicographically minimal
adjacency encoding over the leaves of that search tree.
"""

from __future__ import annotations

from .network import LocalEnvironment
from .rings import ring_cluster


class EnvironmentTooLargeError(ValueError):
    """Environment exceeds the canonical-labeling size cap."""


DEFAULT_SIZE_CAP = 512


def _refine(adj, colors):
    """1-WL color refinement to the stable partition, canonically renumbered."""
    n_colors = -1  # input numbering may be sparse; always renumber once
    while True:
        sigs = []
        for v, c in enumerate(colors):
            nb = [colors[u] for u in adj[v]]
            nb.sort()
            sigs.append((c, *nb))
        distinct = sorted(set(sigs))
        if len(distinct) == n_colors:
            # partition unchanged; (c, ...) sorts by old color, so the
            # numbering is already stable
            return colors
        n_colors = len(distinct)
        remap = {s: i for i, s in enumerate(distinct)}
        colors = [remap[s] for s in sigs]


def _encode(adj, labels, order_of):
    """Adjacency + label encoding under the vertex order ``order_of``."""
    n = len(labels)
    verts = sorted(range(n), key=order_of.__getitem__)
    lab = tuple(labels[v] for v in verts)
    edges = []
    for v in verts:
        pv = order_of[v]
        for u in adj[v]:
            pu = order_of[u]
            if pv < pu:
                edges.append((pv, pu))
    edges.sort()
    return (lab, tuple(edges))


_MAX_AUTOMORPHISM_GENERATORS = 256


class _Search:
    """Individualization-refinement over the first non-singleton cell.

    The canonical form is the minimal leaf encoding. Two leaves with equal
    encodings yield an automorphism; branches reachable from an explored
    sibling by automorphisms that fix the individualized prefix are skipped
    (sound: their subtrees are images of explored ones).
    """

    def __init__(self, adj, labels):
        self.adj = adj
        self.labels = labels
        self.n = len(labels)
        self.best = None
        self.best_colors = None
        self.automorphisms = []

    def run(self, colors):
        self._recurse(colors, ())
        return self.best

    def _recurse(self, colors, prefix):
        n = self.n
        cells = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            enc = _encode(self.adj, self.labels, colors)
            if self.best is None or enc < self.best:
                self.best = enc
                self.best_colors = colors
            elif enc == self.best and len(self.automorphisms) < _MAX_AUTOMORPHISM_GENERATORS:
                # same image under two labelings: position-wise composition
                inv_best = [0] * n
                for v in range(n):
                    inv_best[self.best_colors[v]] = v
                sigma = tuple(inv_best[colors[v]] for v in range(n))
                if any(sigma[v] != v for v in range(n)):
                    fixed = frozenset(v for v in range(n) if sigma[v] == v)
                    self.automorphisms.append((sigma, fixed))
            return
        explored = []
        prefix_set = frozenset(prefix)
        for v in target:
            if explored and self._in_explored_orbit(v, explored, prefix_set):
                continue
            explored.append(v)
            branch = list(colors)
            branch[v] = n  # individualize, then re-refine canonically
            self._recurse(_refine(self.adj, branch), prefix + (v,))

    def _in_explored_orbit(self, v, explored, prefix_set):
        gens = [g for g, fixed in self.automorphisms if prefix_set <= fixed]
        if not gens:
            return False
        orbit = set(explored)
        frontier = list(explored)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = g[x]
                if y == v:
                    return True
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return False


def rooted_canonical_bytes(adj, species, root, distances=None) -> bytes:
    """Canonical key of a rooted species-labelled graph.

    Parameters
    ----------
    adj : sequence of neighbor index sequences (vertices are 0..n-1)
    species : sequence of species labels per vertex
    root : distinguished vertex index
    distances : optional per-vertex distance from the root; computed by BFS
        when absent. Every vertex must be reachable from the root.
    """
    n = len(species)
    if distances is None:
        distances = [-1] * n
        distances[root] = 0
        frontier = [root]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if distances[v] < 0:
                        distances[v] = d
                        nxt.append(v)
            frontier = nxt
        if min(distances) < 0:
            raise ValueError("graph is not connected from the root")

    species_table = sorted(set(species))
    sp_index = {s: i for i, s in enumerate(species_table)}
    labels = tuple((distances[v], sp_index[species[v]]) for v in range(n))
    init = {lab: i for i, lab in enumerate(sorted(set(labels)))}
    colors = _refine(adj, [init[lab] for lab in labels])
    lab, edges = _Search(adj, labels).run(colors)

    parts = [",".join(species_table), str(n)]
    parts.append(";".join(f"{d}.{s}" for d, s in lab))
    parts.append(";".join(f"{a}-{b}" for a, b in edges))
    return "|".join(parts).encode()


def _env_canonical(env: LocalEnvironment, atoms, bonds, size_cap):
    if len(atoms) > size_cap:
        raise EnvironmentTooLargeError(
            f"{len(atoms)} atoms exceeds the canonical-form size cap of {size_cap}"
        )
    index = {a: i for i, a in enumerate(atoms)}
    adj = [[] for _ in atoms]
    for a, b in bonds:
        adj[index[a]].append(index[b])
        adj[index[b]].append(index[a])
    species = [env.species_of(a) for a in atoms]
    return rooted_canonical_bytes(adj, species, index[env.root])


def canonical_form(env: LocalEnvironment, size_cap: int = DEFAULT_SIZE_CAP) -> bytes:
    """Canonical key of the environment as a rooted species-labelled graph."""
    return _env_canonical(env, env.atoms, env.bonds, size_cap)


def primitive_cluster(env: LocalEnvironment, size_cap: int = DEFAULT_SIZE_CAP) -> bytes:
    """Canonical key of the union of all primitive rings through the root.

    Ring lengths are capped at 2r so the cluster is truncated by the radius;
    a root on no ring yields the single-vertex cluster.
    """
    atoms, bonds = ring_cluster(env)
    return _env_canonical(env, atoms, bonds, size_cap)
