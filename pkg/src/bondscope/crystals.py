"""Deterministic generators for the three silica reference crystals.

Cristobalite and tridymite are built as decorated topological nets (silicon on
the diamond / lonsdaleite net, oxygen subdividing every Si-Si edge) so their
bond lists carry no geometric tolerance at all; ideal coordinates are attached
for export and cutoff tests. Alpha-quartz has no tolerance-free net
description, so it is built from standard fractional coordinates and bonded
with the 2.2 Angstrom Si-O rule; the generated descriptors are validated
against published reference values in the test suite.

Atom ids: silicon first, ordered by (cell, basis) lexicographically; then
oxygen, ordered by the wrapped lattice position of the bond midpoint.
"""

from __future__ import annotations

import numpy as np

from .network import BondNetwork

# diamond net in units of a/4: four fcc sites plus the (1,1,1)-offset four
_DIAMOND_BASIS = ((0, 0, 0), (0, 2, 2), (2, 0, 2), (2, 2, 0))
_DIAMOND_BOND_DIRS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))

CRISTOBALITE_A = 7.16  # ideal cubic cell, Si-O bond 1.55 A

# lonsdaleite net: 4 sites per hexagonal cell, ideal c/a = sqrt(8/3).
# fractional coordinates and the (neighbor basis, cell offset) table.
_LONSDALEITE_FRAC = (
    (1 / 3, 2 / 3, 0.0),
    (2 / 3, 1 / 3, 1 / 2),
    (1 / 3, 2 / 3, 3 / 8),
    (2 / 3, 1 / 3, 7 / 8),
)
_LONSDALEITE_NEIGHBORS = (
    ((2, (0, 0, 0)), (3, (0, 0, -1)), (3, (-1, 0, -1)), (3, (0, 1, -1))),
    ((3, (0, 0, 0)), (2, (0, 0, 0)), (2, (1, 0, 0)), (2, (0, -1, 0))),
    ((0, (0, 0, 0)), (1, (0, 0, 0)), (1, (-1, 0, 0)), (1, (0, 1, 0))),
    ((1, (0, 0, 0)), (0, (0, 0, 1)), (0, (1, 0, 1)), (0, (0, -1, 1))),
)
TRIDYMITE_A = 5.062  # Si-Si bond 3.10 A at ideal c/a
TRIDYMITE_C = TRIDYMITE_A * np.sqrt(8.0 / 3.0)

# alpha-quartz, P3(1)21 setting: Si on the 3a site, O on the 6c site
# (Levien, Prewitt & Weidner, Am. Mineral. 65 (1980) 920).
QUARTZ_A = 4.9160
QUARTZ_C = 5.4054
_QUARTZ_SI_U = 0.4697
_QUARTZ_O_XYZ = (0.4135, 0.2669, 0.1191)


def _check_supercell(n: int):
    if n < 3:
        raise ValueError(f"supercell size must be >= 3, got {n}")


def _decorate_with_oxygen(si_species, si_bonds, si_frac, cell):
    """Insert one O atom on every Si-Si edge; ids follow sorted midpoint keys."""
    keyed = {}
    for a, b, key, frac in si_bonds:
        keyed[key] = (a, b, frac)
    species = list(si_species)
    frac_all = list(si_frac)
    bonds = []
    for key in sorted(keyed):
        a, b, frac = keyed[key]
        o_id = len(species)
        species.append("O")
        frac_all.append(frac)
        bonds.append((a, o_id))
        bonds.append((b, o_id))
    positions = np.asarray(frac_all) @ cell
    return BondNetwork(species, bonds, positions=positions, cell=cell)


def generate_cristobalite(n: int) -> BondNetwork:
    """Ideal cristobalite: Si on the periodic diamond net, O on edge midpoints."""
    _check_supercell(n)
    L = 4 * n  # lattice period in a/4 units
    site_id = {}
    sites = []
    for cx in range(n):
        for cy in range(n):
            for cz in range(n):
                for bx, by, bz in _DIAMOND_BASIS:
                    for off in (0, 1):  # fcc sublattice, then +(1,1,1) sublattice
                        p = ((4 * cx + bx + off) % L, (4 * cy + by + off) % L, (4 * cz + bz + off) % L)
                        site_id[p] = len(sites)
                        sites.append(p)
    si_bonds = []
    for p, a in site_id.items():
        if sum(p) % 4 != 0:  # bonds enumerated from the fcc sublattice only
            continue
        for d in _DIAMOND_BOND_DIRS:
            q = ((p[0] + d[0]) % L, (p[1] + d[1]) % L, (p[2] + d[2]) % L)
            b = site_id[q]
            # O midpoint in a/8 units, wrapped
            key = tuple((2 * p[i] + d[i]) % (2 * L) for i in range(3))
            si_bonds.append((a, b, key, tuple(k / (2 * L) for k in key)))
    cell = np.eye(3) * CRISTOBALITE_A * n
    si_frac = [tuple(c / L for c in p) for p in sites]
    return _decorate_with_oxygen(["Si"] * len(sites), si_bonds, si_frac, cell)


def generate_tridymite(n: int) -> BondNetwork:
    """Ideal tridymite: Si on the periodic lonsdaleite net, O on edge midpoints."""
    _check_supercell(n)
    site_id = {}
    cells = [(cx, cy, cz) for cx in range(n) for cy in range(n) for cz in range(n)]
    for idx, (c, b) in enumerate((c, b) for c in cells for b in range(4)):
        site_id[(c, b)] = idx
    # integer site keys on a 48n grid (thirds in x,y and eighths in z)
    frac48 = tuple(
        tuple(round(f * 48) for f in frac) for frac in _LONSDALEITE_FRAC
    )
    si_bonds = []
    grid = 48 * n
    for (c, b), a in site_id.items():
        ka = tuple((48 * c[i] + frac48[b][i]) % grid for i in range(3))
        for nb, off in _LONSDALEITE_NEIGHBORS[b]:
            c2 = tuple((c[i] + off[i]) % n for i in range(3))
            a2 = site_id[(c2, nb)]
            if a2 < a:
                continue  # each edge once; self-pairs cannot occur for n >= 3
            kb_unwrapped = tuple(48 * c[i] + 48 * off[i] + frac48[nb][i] for i in range(3))
            mid = tuple(((48 * c[i] + frac48[b][i]) + kb_unwrapped[i]) // 2 % grid for i in range(3))
            si_bonds.append((a, a2, mid, tuple(m / grid for m in mid)))
    a_hex = TRIDYMITE_A * n
    c_hex = TRIDYMITE_C * n
    cell = np.array(
        [
            [a_hex, 0.0, 0.0],
            [-0.5 * a_hex, a_hex * np.sqrt(3.0) / 2.0, 0.0],
            [0.0, 0.0, c_hex],
        ]
    )
    si_frac = [
        tuple(((48 * c[i] + frac48[b][i]) % grid) / grid for i in range(3))
        for (c, b) in sorted(site_id, key=site_id.get)
    ]
    return _decorate_with_oxygen(["Si"] * len(site_id), si_bonds, si_frac, cell)


def _quartz_cell_sites():
    u = _QUARTZ_SI_U
    si = ((u, 0.0, 1 / 3), (0.0, u, 2 / 3), (1 - u, 1 - u, 0.0))
    x, y, z = _QUARTZ_O_XYZ
    # orbit of the 6c site under P3(1)21
    o = (
        (x, y, z),
        (-y, x - y, z + 1 / 3),
        (y - x, -x, z + 2 / 3),
        (y, x, -z),
        (-x, y - x, 1 / 3 - z),
        (x - y, -y, 2 / 3 - z),
    )
    wrap = lambda f: tuple(v % 1.0 for v in f)
    return [wrap(s) for s in si], [wrap(s) for s in o]


def generate_quartz(n: int) -> BondNetwork:
    """Alpha-quartz from embedded fractional coordinates, bonded at 2.2 A Si-O."""
    from .ingest import AtomicConfiguration, BondRule, build_bond_network

    _check_supercell(n)
    si_sites, o_sites = _quartz_cell_sites()
    a_hex = QUARTZ_A
    cell1 = np.array(
        [
            [a_hex, 0.0, 0.0],
            [-0.5 * a_hex, a_hex * np.sqrt(3.0) / 2.0, 0.0],
            [0.0, 0.0, QUARTZ_C],
        ]
    )
    species = []
    frac = []
    for cx in range(n):
        for cy in range(n):
            for cz in range(n):
                shift = np.array([cx, cy, cz], dtype=float)
                for s in si_sites:
                    species.append("Si")
                    frac.append((np.asarray(s) + shift) / n)
                for s in o_sites:
                    species.append("O")
                    frac.append((np.asarray(s) + shift) / n)
    cell = cell1 * n
    positions = np.asarray(frac) @ cell
    cfg = AtomicConfiguration(species=tuple(species), positions=positions, cell=cell)
    return build_bond_network(cfg, BondRule.silica())


GENERATORS = {
    "cristobalite": generate_cristobalite,
    "tridymite": generate_tridymite,
    "quartz": generate_quartz,
}
