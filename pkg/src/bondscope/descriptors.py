"""The four environment descriptors plus the primitive-cluster baseline, each
reduced to a deterministic, byte-serialized DescriptorKey.

A DescriptorKey is the unit of equivalence-class counting: two environments
fall in the same class exactly when their keys are byte-identical. Every
serialization is injective per descriptor tag and independent of iteration
order, thread count, and process.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .barcode import Barcode, format_barcode, h1_barcode
from .canonical import canonical_form, primitive_cluster
from .network import LocalEnvironment
from .rings import format_ring_profile, primitive_rings_through, PrimitiveRingProfile

TAG_COORDINATION = "coordination"
TAG_SHELL_COUNT = "shell-count"
TAG_RINGS = "primitive-rings"
TAG_BARCODE = "h1-barcode"
TAG_GRAPH = "graph-iso"
TAG_CLUSTER = "primitive-cluster"
ALL_TAGS = (
    TAG_COORDINATION,
    TAG_SHELL_COUNT,
    TAG_RINGS,
    TAG_BARCODE,
    TAG_GRAPH,
    TAG_CLUSTER,
)

# descriptors whose per-root cost the speed benchmark compares
PROFILE_TAGS = (TAG_COORDINATION, TAG_BARCODE, TAG_RINGS)


@dataclass(frozen=True)
class CoordinationProfile:
    """Per-shell sorted multisets of full-network valences; shell 0 is the root.

    With ``with_species`` the multisets hold (species, valence) pairs instead,
    for chemistries where valence alone is ambiguous.
    """

    shells: tuple

    def shell_count(self) -> "ShellCount":
        return ShellCount(tuple(len(s) for s in self.shells))


@dataclass(frozen=True)
class ShellCount:
    """Atoms per shell; counts[0] is always 1 (the root)."""

    counts: tuple


@dataclass(frozen=True)
class DescriptorKey:
    """Canonical serialization of one descriptor value for one root."""

    tag: str
    radius: int
    payload: bytes


def coordination_profile(env: LocalEnvironment, with_species: bool = False) -> CoordinationProfile:
    """Valences of the atoms in each shell, as r+1 sorted multisets."""
    degrees = env.member_degrees
    index = env._local_index
    shells = []
    for shell in env.shells:
        if with_species:
            vals = sorted((env.species_of(a), degrees[index[a]]) for a in shell)
        else:
            vals = sorted(degrees[index[a]] for a in shell)
        shells.append(tuple(vals))
    return CoordinationProfile(tuple(shells))


def shell_count(profile: CoordinationProfile) -> ShellCount:
    """Shell sizes of a coordination profile."""
    return profile.shell_count()


def describe(env: LocalEnvironment, tag: str) -> DescriptorKey:
    """Compute one descriptor of ``env`` and serialize it to a DescriptorKey."""
    if tag == TAG_COORDINATION:
        prof = coordination_profile(env)
        payload = "|".join(",".join(map(str, s)) for s in prof.shells).encode()
    elif tag == TAG_SHELL_COUNT:
        prof = coordination_profile(env)
        payload = ",".join(map(str, prof.shell_count().counts)).encode()
    elif tag == TAG_RINGS:
        prof = primitive_rings_through(env, 2 * env.radius)
        payload = ",".join(map(str, prof.lengths)).encode()
    elif tag == TAG_BARCODE:
        bc = h1_barcode(env)
        payload = ",".join(f"{a}:{b}" for a, b in bc.intervals).encode()
    elif tag == TAG_GRAPH:
        payload = canonical_form(env)
    elif tag == TAG_CLUSTER:
        payload = primitive_cluster(env)
    else:
        raise ValueError(f"unknown descriptor tag {tag!r}")
    return DescriptorKey(tag, env.radius, payload)


def _render_coordination(payload: bytes) -> str:
    shells = []
    for segment in payload.decode().split("|"):
        if not segment:
            shells.append("-")
            continue
        runs = []
        vals = segment.split(",")
        i = 0
        while i < len(vals):
            j = i
            while j < len(vals) and vals[j] == vals[i]:
                j += 1
            runs.append(vals[i] if j - i == 1 else f"{vals[i]}^{j - i}")
            i = j
        shells.append(",".join(runs))
    return " / ".join(shells)


def render_key(key: DescriptorKey) -> str:
    """Human-readable rendering of a key, in the notation of the report tables.

    Renderings are for people; only the payload bytes are contractual. A
    payload this version cannot decode falls back to the digest form.
    """
    try:
        if key.tag == TAG_BARCODE:
            intervals = []
            if key.payload:
                for part in key.payload.decode().split(","):
                    a, b = part.split(":")
                    intervals.append((int(a), int(b)))
            return format_barcode(Barcode(tuple(intervals)))
        if key.tag == TAG_RINGS:
            lengths = (
                tuple(int(x) for x in key.payload.decode().split(",")) if key.payload else ()
            )
            return format_ring_profile(PrimitiveRingProfile(lengths))
        if key.tag == TAG_SHELL_COUNT:
            return "(" + key.payload.decode() + ")"
        if key.tag == TAG_COORDINATION:
            return _render_coordination(key.payload)
    except ValueError:
        pass
    digest = hashlib.sha256(key.payload).hexdigest()[:16]
    return f"{key.tag}[{digest}]"
