"""First-homology barcode of a rooted environment.

F(i, j) is the number of algebraically independent rings of the shell annulus
S(i, j); the barcode is the unique interval multiset BC with

    F(i, j) = #{I in BC : I contained in (i, j)}   for all 0 <= i <= j <= r,

recovered from F by Mobius inversion on the interval-inclusion poset. The
poset here includes degenerate intervals (a, a): a cycle can sit inside a
single shell in non-bipartite networks, and exact reconstruction requires the
corresponding intervals. Bipartite networks never produce them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .network import LocalEnvironment


class InconsistentFMatrixError(ValueError):
    """Mobius inversion produced a negative multiplicity.

    The input F was not a valid annulus rank function; this signals a bug in
    the homology computation upstream, not a property of the environment.
    """


class NotPerfectlyCoordinatedError(ValueError):
    """Shell count is not realizable by a bipartite d0/d1-regular environment."""


@dataclass(frozen=True)
class Barcode:
    """Multiset of shell intervals, stored sorted with multiplicity expanded."""

    intervals: tuple

    def multiplicities(self) -> dict:
        out = {}
        for iv in self.intervals:
            out[iv] = out.get(iv, 0) + 1
        return out

    def __len__(self):
        return len(self.intervals)


def f_matrix(env: LocalEnvironment) -> dict:
    """Annulus rank function F(i, j) = rank H1(S(i, j)) for 0 <= i <= j <= r.

    For each anchor shell i the annuli S(i, i..r) are scanned once, adding one
    shell at a time to an incremental union-find, so the whole table costs
    O(r * (atoms + bonds)) per environment.
    """
    r = env.radius
    sizes = env._shell_sizes
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    bonds_same = env._bonds_same
    bonds_prev = env._bonds_prev
    parent = [0] * env.n_atoms
    F = {}
    for i in range(r + 1):
        comps = 0
        atoms = 0
        nbonds = 0
        for x in range(offsets[i], offsets[r + 1]):
            parent[x] = x
        for j in range(i, r + 1):
            atoms += sizes[j]
            comps += sizes[j]
            edge_groups = (bonds_same[j],) if j == i else (bonds_same[j], bonds_prev[j])
            for group in edge_groups:
                for u, v in group:
                    while parent[u] != u:
                        parent[u] = parent[parent[u]]
                        u = parent[u]
                    while parent[v] != v:
                        parent[v] = parent[parent[v]]
                        v = parent[v]
                    if u != v:
                        parent[u] = v
                        comps -= 1
                    nbonds += 1
            F[(i, j)] = comps - atoms + nbonds
    return F


def _intervals(r: int) -> tuple:
    return tuple((a, b) for a in range(r + 1) for b in range(a, r + 1))


@lru_cache(maxsize=None)
def mobius_function(r: int) -> dict:
    """Mobius function of the interval-inclusion poset on sub-intervals of (0, r).

    Computed by the defining recursion: mu[x, x] = 1 and
    mu[x, y] = -sum of mu[x, z] over x <= z < y. Memoized per radius; the
    table is O(r^4) entries.
    """
    ivs = _intervals(r)
    mu = {}
    for a, b in ivs:
        mu[((a, b), (a, b))] = 1
        # enumerate supersets (c, d) >= (a, b) by increasing size so every
        # strictly-smaller z in [x, y) is already present
        sups = sorted(
            ((c, d) for c in range(a + 1) for d in range(b, r + 1)),
            key=lambda cd: (cd[1] - cd[0]),
        )
        for c, d in sups:
            if (c, d) == (a, b):
                continue
            total = 0
            for e in range(c, a + 1):
                for f in range(b, d + 1):
                    if (e, f) != (c, d):
                        total += mu[((a, b), (e, f))]
            mu[((a, b), (c, d))] = -total
    return mu


@lru_cache(maxsize=None)
def _inversion_terms(r: int) -> tuple:
    """Per interval (c, d): the ((a, b), mu) pairs with nonzero mu."""
    mu = mobius_function(r)
    terms = []
    for c, d in _intervals(r):
        row = []
        for a in range(c, d + 1):
            for b in range(a, d + 1):
                m = mu[((a, b), (c, d))]
                if m:
                    row.append(((a, b), m))
        terms.append(((c, d), tuple(row)))
    return tuple(terms)


def mobius_invert(F: dict, r: int) -> Barcode:
    """Recover the barcode multiplicities G from the annulus rank function F.

    Raises InconsistentFMatrixError if any multiplicity comes out negative.
    The reconstruction identity F(i, j) = #{I subset of (i, j)} then holds
    exactly by the Mobius inversion theorem.
    """
    intervals = []
    for (c, d), row in _inversion_terms(r):
        g = 0
        for ab, m in row:
            f = F.get(ab, 0)
            if f:
                g += f * m
        if g < 0:
            raise InconsistentFMatrixError(
                f"negative multiplicity {g} for interval ({c}, {d})"
            )
        if g:
            intervals.extend([(c, d)] * g)
    intervals.sort()
    return Barcode(tuple(intervals))


def h1_barcode(env: LocalEnvironment) -> Barcode:
    """H1 barcode of a local environment (f_matrix composed with inversion)."""
    return mobius_invert(f_matrix(env), env.radius)


def barcode_rank(bc: Barcode, i: int, j: int) -> int:
    """#{I in BC : I contained in (i, j)} — the reconstruction left-hand side."""
    return sum(1 for a, b in bc.intervals if i <= a and b <= j)


def endpoints_from_shell_count(shell_count, d0: int, d1: int) -> tuple:
    """F(0, r0) for r0 = 0..r of a perfectly coordinated environment.

    Uses the bipartite bond recursion
    #bonds(r, r-1) = d * #atoms(r-1) - #bonds(r-1, r-2) with d = d0 on even
    shells and d1 on odd, then the Euler formula on the cumulative counts. The
    value F(0, r0) equals the number of barcode intervals with both endpoints
    <= r0.
    """
    if d0 < 1 or d1 < 1:
        raise ValueError("coordination targets must be >= 1")
    sc = tuple(shell_count)
    if not sc or sc[0] != 1:
        raise NotPerfectlyCoordinatedError(f"shell count must start with 1, got {sc!r}")
    endpoints = [0]
    bonds_prev = 0
    cum_bonds = 0
    cum_atoms = 1
    for r0 in range(1, len(sc)):
        d = d0 if (r0 - 1) % 2 == 0 else d1
        b = d * sc[r0 - 1] - bonds_prev
        if b < 0:
            raise NotPerfectlyCoordinatedError(
                f"negative bond count {b} between shells {r0} and {r0 - 1}"
            )
        cum_bonds += b
        cum_atoms += sc[r0]
        bonds_prev = b
        f = 1 - cum_atoms + cum_bonds
        if f < 0:
            raise NotPerfectlyCoordinatedError(
                f"negative rank {f} at radius {r0}: shell count too large"
            )
        endpoints.append(f)
    return tuple(endpoints)


def shell_count_from_endpoints(endpoints, d0: int, d1: int) -> tuple:
    """Inverse of endpoints_from_shell_count; recovers the shell count exactly."""
    if d0 < 1 or d1 < 1:
        raise ValueError("coordination targets must be >= 1")
    ep = tuple(endpoints)
    if not ep or ep[0] != 0:
        raise NotPerfectlyCoordinatedError("F(0, 0) must be 0")
    sc = [1]
    bonds_prev = 0
    cum_bonds = 0
    cum_atoms = 1
    for r0 in range(1, len(ep)):
        d = d0 if (r0 - 1) % 2 == 0 else d1
        b = d * sc[r0 - 1] - bonds_prev
        if b < 0:
            raise NotPerfectlyCoordinatedError(
                f"negative bond count {b} between shells {r0} and {r0 - 1}"
            )
        cum_bonds += b
        total_atoms = 1 + cum_bonds - ep[r0]
        n = total_atoms - cum_atoms
        if n < 0:
            raise NotPerfectlyCoordinatedError(f"negative shell size {n} at radius {r0}")
        sc.append(n)
        cum_atoms = total_atoms
        bonds_prev = b
    return tuple(sc)


def format_barcode(bc: Barcode) -> str:
    """Human rendering, e.g. '2×(0,5),(0,6),3×(2,6)'. Empty barcode: 'empty'."""
    if not bc.intervals:
        return "empty"
    mult = bc.multiplicities()
    parts = []
    for iv in sorted(mult):
        m = mult[iv]
        body = f"({iv[0]},{iv[1]})"
        parts.append(body if m == 1 else f"{m}×{body}")
    return ",".join(parts)
