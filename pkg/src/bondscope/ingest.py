"""Configuration parsing and bond construction.

Supports plain and extended XYZ (``Lattice="..."`` comment line) and the
LAMMPS text dump format (orthorhombic or triclinic box, unscaled ``x y z`` or
scaled ``xs ys zs`` columns), auto-detected by header. Bonds are built from a
species-pair cutoff rule under periodic minimum image: two atoms bond iff
their minimum-image distance is strictly below the cutoff for that pair.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .network import BondNetwork, make_root_filter


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class AtomicConfiguration:
    """Raw atomic configuration: species, Cartesian positions, optional cell."""

    species: tuple
    positions: np.ndarray
    cell: np.ndarray = None
    pbc: tuple = (True, True, True)

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "positions", positions)
        if len(self.species) != len(positions):
            raise ValueError(
                f"{len(self.species)} species vs {len(positions)} positions"
            )
        if self.cell is not None:
            cell = np.asarray(self.cell, dtype=float)
            object.__setattr__(self, "cell", cell)
            if cell.shape != (3, 3):
                raise ValueError("cell must be a 3x3 matrix")
            if any(self.pbc) and abs(np.linalg.det(cell)) < 1e-12:
                raise ValueError("periodic cell must be invertible")
        elif any(self.pbc):
            object.__setattr__(self, "pbc", (False, False, False))

    @property
    def n_atoms(self) -> int:
        return len(self.species)


@dataclass(frozen=True)
class BondRule:
    """Species-pair cutoff table in Angstrom; pairs are unordered."""

    cutoffs: dict

    def __post_init__(self):
        norm = {}
        for pair, cut in self.cutoffs.items():
            a, b = pair
            if cut <= 0:
                raise ValueError(f"cutoff for {a}-{b} must be positive")
            norm[(a, b) if a <= b else (b, a)] = float(cut)
        object.__setattr__(self, "cutoffs", norm)

    @classmethod
    def silica(cls, cutoff: float = 2.2) -> "BondRule":
        """The published rule: Si-O pairs closer than 2.2 A, no Si-Si or O-O."""
        return cls({("O", "Si"): cutoff})

    def cutoff_for(self, sp_a: str, sp_b: str):
        key = (sp_a, sp_b) if sp_a <= sp_b else (sp_b, sp_a)
        return self.cutoffs.get(key)

    @property
    def max_cutoff(self) -> float:
        return max(self.cutoffs.values())

    def shifted(self, delta: float) -> "BondRule":
        return BondRule({p: c + delta for p, c in self.cutoffs.items()})


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


_XYZ_LATTICE_RE = re.compile(r'Lattice="([^"]+)"')
_XYZ_PBC_RE = re.compile(r'pbc="([^"]+)"')


def _as_text(data) -> str:
    return data.decode() if isinstance(data, (bytes, bytearray)) else data


def parse_xyz(data) -> AtomicConfiguration:
    """Parse plain or extended XYZ (Lattice= and pbc= honored in the comment)."""
    lines = _as_text(data).splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    try:
        n = int(lines[0].split()[0])
    except (ValueError, IndexError):
        raise ParseError(f"expected atom count, got {lines[0]!r}", 1) from None
    if len(lines) < n + 2:
        raise ParseError(f"expected {n} atom lines, file has {len(lines) - 2}", len(lines))
    comment = lines[1] if len(lines) > 1 else ""
    cell = None
    pbc = (False, False, False)
    m = _XYZ_LATTICE_RE.search(comment)
    if m:
        vals = [float(x) for x in m.group(1).split()]
        if len(vals) != 9:
            raise ParseError("Lattice= must hold 9 numbers", 2)
        cell = np.array(vals).reshape(3, 3)
        pbc = (True, True, True)
        mp = _XYZ_PBC_RE.search(comment)
        if mp:
            pbc = tuple(tok in ("T", "True", "1") for tok in mp.group(1).split())
    species = []
    positions = []
    for i in range(n):
        lineno = i + 3
        parts = lines[i + 2].split()
        if len(parts) < 4:
            raise ParseError(f"expected 'species x y z', got {lines[i + 2]!r}", lineno)
        species.append(parts[0])
        try:
            positions.append([float(parts[1]), float(parts[2]), float(parts[3])])
        except ValueError:
            raise ParseError(f"bad coordinates in {lines[i + 2]!r}", lineno) from None
    return AtomicConfiguration(tuple(species), np.array(positions), cell, pbc)


def write_xyz(cfg: AtomicConfiguration) -> str:
    """Extended-XYZ text; floats use repr so a parse round-trip is exact."""
    lines = [str(cfg.n_atoms)]
    comment = "Properties=species:S:1:pos:R:3"
    if cfg.cell is not None:
        flat = " ".join(repr(float(v)) for v in cfg.cell.reshape(-1))
        ptok = " ".join("T" if p else "F" for p in cfg.pbc)
        comment = f'Lattice="{flat}" pbc="{ptok}" ' + comment
    lines.append(comment)
    for sp, pos in zip(cfg.species, cfg.positions):
        lines.append(f"{sp} {float(pos[0])!r} {float(pos[1])!r} {float(pos[2])!r}")
    return "\n".join(lines) + "\n"


def parse_lammps_dump(data, species_map: dict) -> AtomicConfiguration:
    """Parse the first snapshot of a LAMMPS text dump.

    ``species_map`` maps the integer atom type to a species label; an unmapped
    type is an error (no guessing). Supports orthorhombic and triclinic boxes
    and id/type with x y z, xs ys zs (scaled), or xu yu zu columns.
    """
    lines = _as_text(data).splitlines()
    i = 0
    natoms = None
    box = None
    tilt = np.zeros(3)
    pbc = (True, True, True)
    while i < len(lines):
        line = lines[i]
        if line.startswith("ITEM: NUMBER OF ATOMS"):
            try:
                natoms = int(lines[i + 1])
            except (ValueError, IndexError):
                raise ParseError("bad atom count", i + 2) from None
            i += 2
        elif line.startswith("ITEM: BOX BOUNDS"):
            toks = line.split()[3:]
            triclinic = toks[:3] == ["xy", "xz", "yz"]
            flags = toks[3:] if triclinic else toks
            if len(flags) >= 3:
                pbc = tuple(f.startswith("p") for f in flags[:3])
            box = []
            for axis in range(3):
                parts = lines[i + 1 + axis].split()
                try:
                    lo, hi = float(parts[0]), float(parts[1])
                    if triclinic:
                        tilt[axis] = float(parts[2])
                except (ValueError, IndexError):
                    raise ParseError("bad box bounds", i + 2 + axis) from None
                box.append((lo, hi))
            i += 4
        elif line.startswith("ITEM: ATOMS"):
            if natoms is None or box is None:
                raise ParseError("ATOMS section before NUMBER OF ATOMS / BOX BOUNDS", i + 1)
            cols = line.split()[2:]
            return _read_dump_atoms(lines, i + 1, natoms, cols, box, tilt, pbc, species_map)
        else:
            i += 1
    raise ParseError("no ITEM: ATOMS section found", len(lines))


def _read_dump_atoms(lines, start, natoms, cols, box, tilt, pbc, species_map):
    col = {name: k for k, name in enumerate(cols)}
    xy, xz, yz = tilt
    # LAMMPS writes bounding-box extents for triclinic cells; undo the tilt
    (xlo_b, xhi_b), (ylo_b, yhi_b), (zlo, zhi) = box
    xlo = xlo_b - min(0.0, xy, xz, xy + xz)
    xhi = xhi_b - max(0.0, xy, xz, xy + xz)
    ylo = ylo_b - min(0.0, yz)
    yhi = yhi_b - max(0.0, yz)
    cell = np.array(
        [
            [xhi - xlo, 0.0, 0.0],
            [xy, yhi - ylo, 0.0],
            [xz, yz, zhi - zlo],
        ]
    )
    if "x" in col:
        pos_cols, scaled = ("x", "y", "z"), False
    elif "xs" in col:
        pos_cols, scaled = ("xs", "ys", "zs"), True
    elif "xu" in col:
        pos_cols, scaled = ("xu", "yu", "zu"), False
    else:
        raise ParseError("ATOMS columns must include x, xs or xu", start)
    if "type" not in col:
        raise ParseError("ATOMS columns must include type", start)
    rows = []
    for k in range(natoms):
        lineno = start + k + 1
        if start + k >= len(lines):
            raise ParseError(f"expected {natoms} atom rows", lineno)
        parts = lines[start + k].split()
        try:
            atom_id = int(parts[col["id"]]) if "id" in col else k + 1
            atype = int(parts[col["type"]])
            xyz = [float(parts[col[c]]) for c in pos_cols]
        except (ValueError, IndexError):
            raise ParseError(f"bad atom row {lines[start + k]!r}", lineno) from None
        if atype not in species_map:
            raise ParseError(
                f"atom type {atype} has no species mapping (use --species-map)", lineno
            )
        if scaled:
            xyz = np.asarray(xyz) @ cell
        else:
            xyz = np.asarray(xyz) - np.array([xlo, ylo, zlo])
        rows.append((atom_id, species_map[atype], xyz))
    rows.sort(key=lambda r: r[0])
    species = tuple(r[1] for r in rows)
    positions = np.array([r[2] for r in rows])
    return AtomicConfiguration(species, positions, cell, pbc)


def detect_and_parse(data, species_map=None) -> AtomicConfiguration:
    """Auto-detect XYZ vs LAMMPS dump by header and parse."""
    text = _as_text(data)
    for line in text.splitlines():
        if line.strip():
            if line.startswith("ITEM:"):
                return parse_lammps_dump(text, species_map or {})
            return parse_xyz(text)
    raise ParseError("empty file", 1)


# ---------------------------------------------------------------------------
# bonding
# ---------------------------------------------------------------------------


def _perpendicular_widths(cell):
    vol = abs(np.linalg.det(cell))
    widths = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        area = np.linalg.norm(np.cross(cell[j], cell[k]))
        widths.append(vol / area)
    return widths


def _pair_distances_ok(cfg, rule):
    if not np.all(np.isfinite(cfg.positions)):
        raise ValueError("positions must be finite")
    if cfg.cell is not None and any(cfg.pbc):
        for axis, width in enumerate(_perpendicular_widths(cfg.cell)):
            if cfg.pbc[axis] and rule.max_cutoff >= width / 2:
                raise ValueError(
                    f"cutoff {rule.max_cutoff} A violates the minimum-image "
                    f"convention: half cell width on axis {axis} is {width / 2:.3f} A"
                )


def _min_image_deltas(cfg, i_idx, j_idx):
    """Displacement vectors j-i under minimum image; i_idx/j_idx are arrays."""
    if cfg.cell is None:
        return cfg.positions[j_idx] - cfg.positions[i_idx]
    inv = np.linalg.inv(cfg.cell)
    frac = cfg.positions @ inv
    d = frac[j_idx] - frac[i_idx]
    for axis in range(3):
        if cfg.pbc[axis]:
            d[:, axis] -= np.round(d[:, axis])
    return d @ cfg.cell


def bond_pairs_bruteforce(cfg: AtomicConfiguration, rule: BondRule) -> set:
    """O(N^2) reference bonding; retained as the test oracle for cell lists."""
    _pair_distances_ok(cfg, rule)
    n = cfg.n_atoms
    ii, jj = np.triu_indices(n, k=1)
    deltas = _min_image_deltas(cfg, ii, jj)
    dist = np.linalg.norm(deltas, axis=1)
    bonds = set()
    for a, b, d in zip(ii, jj, dist):
        cut = rule.cutoff_for(cfg.species[a], cfg.species[b])
        if cut is not None and d < cut:
            bonds.add((int(a), int(b)))
    return bonds


def _cell_list_pairs(cfg, rule):
    """Candidate pairs from a linear-time cell-list scan (bin edge = max cutoff)."""
    n = cfg.n_atoms
    cut = rule.max_cutoff
    if cfg.cell is not None:
        inv = np.linalg.inv(cfg.cell)
        frac = cfg.positions @ inv
        wrapped = frac.copy()
        for axis in range(3):
            if cfg.pbc[axis]:
                wrapped[:, axis] %= 1.0
        widths = _perpendicular_widths(cfg.cell)
        nbins = [max(1, int(widths[a] / cut)) for a in range(3)]
        coords = [np.clip((wrapped[:, a] * nbins[a]).astype(int), 0, nbins[a] - 1) for a in range(3)]
        periodic = cfg.pbc
    else:
        lo = cfg.positions.min(axis=0)
        span = np.maximum(cfg.positions.max(axis=0) - lo, 1e-9)
        nbins = [max(1, int(span[a] / cut)) for a in range(3)]
        coords = [
            np.clip(((cfg.positions[:, a] - lo[a]) / span[a] * nbins[a]).astype(int), 0, nbins[a] - 1)
            for a in range(3)
        ]
        periodic = (False, False, False)

    bins = {}
    for idx in range(n):
        key = (coords[0][idx], coords[1][idx], coords[2][idx])
        bins.setdefault(key, []).append(idx)

    # with fewer than 3 bins the +-1 stencil would alias through the wrap
    stencils = []
    for a in range(3):
        if nbins[a] >= 3 or not periodic[a]:
            stencils.append((-1, 0, 1))
        else:
            stencils.append(tuple(range(nbins[a])))

    pairs = set()
    for (bx, by, bz), members in bins.items():
        for dx in stencils[0]:
            for dy in stencils[1]:
                for dz in stencils[2]:
                    key = (bx + dx, by + dy, bz + dz)
                    kx, ky, kz = key
                    if periodic[0]:
                        kx %= nbins[0]
                    if periodic[1]:
                        ky %= nbins[1]
                    if periodic[2]:
                        kz %= nbins[2]
                    other = bins.get((kx, ky, kz))
                    if not other:
                        continue
                    for i in members:
                        for j in other:
                            if i < j:
                                pairs.add((i, j))
    return pairs


def build_bond_network(cfg: AtomicConfiguration, rule: BondRule) -> BondNetwork:
    """Bond network from a configuration: minimum-image distance strictly below
    the species-pair cutoff. Carries positions and cell through."""
    _pair_distances_ok(cfg, rule)
    pairs = sorted(_cell_list_pairs(cfg, rule))
    bonds = []
    if pairs:
        ii = np.array([p[0] for p in pairs])
        jj = np.array([p[1] for p in pairs])
        dist = np.linalg.norm(_min_image_deltas(cfg, ii, jj), axis=1)
        for (a, b), d in zip(pairs, dist):
            cut = rule.cutoff_for(cfg.species[a], cfg.species[b])
            if cut is not None and d < cut:
                bonds.append((a, b))
    return BondNetwork(cfg.species, bonds, positions=cfg.positions, cell=cfg.cell)


def cutoff_stability(
    cfg: AtomicConfiguration,
    rule: BondRule,
    radius: int,
    delta: float,
    tag: str = "graph-iso",
    root_species=None,
) -> float:
    """Fraction of roots whose radius-``radius`` key is identical when every
    cutoff is shifted by -delta, 0, and +delta."""
    from .stats import root_keys

    networks = [build_bond_network(cfg, rule.shifted(d)) for d in (-delta, 0.0, delta)]
    pred = make_root_filter(root_species)
    roots = [i for i, sp in enumerate(cfg.species) if pred(sp)]
    if not roots:
        raise ValueError("no roots left after species filtering")
    keys = [root_keys(net, tag, radius, roots) for net in networks]
    stable = sum(1 for trio in zip(*keys) if trio[0] == trio[1] == trio[2])
    return stable / len(roots)


# ---------------------------------------------------------------------------
# network JSON export
# ---------------------------------------------------------------------------


def network_to_json(network: BondNetwork) -> str:
    """Edge-list JSON for a bond network (positions/cell included if present)."""
    doc = {
        "atoms": [[i, sp] for i, sp in enumerate(network.species)],
        "bonds": sorted(network.bonds),
    }
    if network.positions is not None:
        doc["positions"] = network.positions.tolist()
    if network.cell is not None:
        doc["cell"] = network.cell.tolist()
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def network_from_json(text) -> BondNetwork:
    doc = json.loads(_as_text(text))
    species = [None] * len(doc["atoms"])
    for i, sp in doc["atoms"]:
        species[i] = sp
    return BondNetwork(
        species,
        [tuple(b) for b in doc["bonds"]],
        positions=doc.get("positions"),
        cell=doc.get("cell"),
    )
