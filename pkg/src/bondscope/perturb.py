"""Valence-preserving bond rewiring.

Disordered reference states for the comparison statistics are made by applying
random double-bond swaps to a crystal: two bonds (a1, b1), (a2, b2) become
(a1, b2), (a2, b1). Every atom keeps its degree, so a perfectly coordinated
network stays perfectly coordinated while its topology scrambles. Swaps that
would duplicate an existing bond or create a self-bond are rejected and
redrawn.
"""

from __future__ import annotations

import random

from .network import BondNetwork


def rewire_bonds(network: BondNetwork, n_swaps: int, seed: int, max_tries: int = None) -> BondNetwork:
    """Apply ``n_swaps`` random valence-preserving double-bond swaps.

    Deterministic for a given seed. Positions and cell are carried through
    unchanged; after rewiring they describe the original geometry only.
    """
    if n_swaps < 0:
        raise ValueError("n_swaps must be >= 0")
    if max_tries is None:
        max_tries = 100 * max(n_swaps, 1)
    rng = random.Random(seed)
    bonds = sorted(network.bonds)
    bond_set = set(bonds)
    done = 0
    tries = 0
    while done < n_swaps:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(
                f"could not place {n_swaps} swaps in {max_tries} tries "
                f"({done} succeeded)"
            )
        i = rng.randrange(len(bonds))
        j = rng.randrange(len(bonds))
        if i == j:
            continue
        a1, b1 = bonds[i]
        a2, b2 = bonds[j]
        # keep the swap species-consistent when the network is bipartite-like:
        # pair the endpoints so each new bond joins the same species slots
        if network.species[a1] != network.species[a2]:
            a2, b2 = b2, a2
        if network.species[a1] != network.species[a2]:
            continue  # bonds are not species-compatible for a clean exchange
        new1 = (a1, b2) if a1 < b2 else (b2, a1)
        new2 = (a2, b1) if a2 < b1 else (b1, a2)
        if new1[0] == new1[1] or new2[0] == new2[1]:
            continue
        if new1 in bond_set or new2 in bond_set or new1 == new2:
            continue
        bond_set.discard(bonds[i])
        bond_set.discard(bonds[j])
        bond_set.add(new1)
        bond_set.add(new2)
        bonds[i] = new1
        bonds[j] = new2
        done += 1
    return BondNetwork(network.species, bond_set, positions=network.positions, cell=network.cell)
