"""Empirical distributions over descriptor keys and the comparison statistics:
scaled Shannon entropy, mutual information, uncertainty coefficients,
symmetrized Kullback-Leibler divergence, and ranked-difference tables.

Counts are exact integers; probabilities enter only at the statistics layer,
in double precision, with the natural logarithm throughout. Distribution
building is a map-reduce over roots whose result is independent of the number
of worker threads.
"""

from __future__ import annotations

import base64
import json
import math
import os
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .descriptors import DescriptorKey, describe, render_key
from .network import BondNetwork, LocalEnvironment, make_root_filter


class UndefinedUncertaintyError(ValueError):
    """U(X|Y) is undefined when H(X) = 0 (a single equivalence class)."""


class BoundaryTruncationWarning(UserWarning):
    """Classifying a non-periodic network: environments near a free boundary
    are silently truncated and cannot be detected topologically."""


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Counts per DescriptorKey with the number of classified roots."""

    tag: str
    radius: int
    counts: dict
    total: int
    source: str = ""

    def __post_init__(self):
        if self.total <= 0:
            raise ValueError("total must be positive")
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts must sum to total")

    def frequency(self, key) -> float:
        return self.counts.get(key, 0) / self.total

    @property
    def n_classes(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class JointDistribution:
    """Counts per (key_x, key_y) pair, built from a single pass over roots."""

    tag_x: str
    radius_x: int
    tag_y: str
    radius_y: int
    counts: dict
    total: int

    def marginal_x(self) -> EmpiricalDistribution:
        c = Counter()
        for (kx, _), n in self.counts.items():
            c[kx] += n
        return EmpiricalDistribution(self.tag_x, self.radius_x, dict(c), self.total)

    def marginal_y(self) -> EmpiricalDistribution:
        c = Counter()
        for (_, ky), n in self.counts.items():
            c[ky] += n
        return EmpiricalDistribution(self.tag_y, self.radius_y, dict(c), self.total)


@dataclass(frozen=True)
class ReportRow:
    key: DescriptorKey
    f1: float
    f2: float
    r1: int
    r2: int


@dataclass(frozen=True)
class ComparisonReport:
    """Ranked rows in Appendix-D style plus the divergence summary."""

    rows: tuple
    sort_mode: str
    divergence: float


SORT_MODES = ("f1", "f1-f2", "f2-f1")


def _default_threads() -> int:
    env = os.environ.get("BONDSCOPE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _filtered_roots(network: BondNetwork, root_species) -> list:
    pred = make_root_filter(root_species)
    return [i for i, sp in enumerate(network.species) if pred(sp)]


def _warn_if_open(network: BondNetwork):
    if network.cell is None:
        warnings.warn(
            "network has no periodic cell: environments near the boundary are truncated",
            BoundaryTruncationWarning,
            stacklevel=3,
        )


def _map_roots(fn, roots, threads):
    """Chunked map over roots; merging per-chunk counters is order-independent."""
    if threads is None:
        threads = _default_threads()
    if threads <= 1 or len(roots) < 2 * threads:
        return [fn(r) for r in roots]
    chunk = max(1, len(roots) // (threads * 8))
    pieces = [roots[i : i + chunk] for i in range(0, len(roots), chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(lambda piece: [fn(r) for r in piece], pieces)
        out = []
        for piece in results:
            out.extend(piece)
        return out


def root_keys(network: BondNetwork, tag: str, radius: int, roots, threads=None) -> list:
    """Descriptor key of every root, in root order."""
    return _map_roots(
        lambda r: describe(LocalEnvironment(network, r, radius), tag), list(roots), threads
    )


def classify_all(
    network: BondNetwork,
    tag: str,
    radius: int,
    root_species=None,
    threads=None,
    source: str = "",
) -> EmpiricalDistribution:
    """Empirical distribution of the descriptor over all filtered roots."""
    roots = _filtered_roots(network, root_species)
    if not roots:
        raise ValueError("no roots left after species filtering")
    _warn_if_open(network)
    keys = root_keys(network, tag, radius, roots, threads)
    return EmpiricalDistribution(tag, radius, dict(Counter(keys)), len(roots), source)


def classify_joint(
    network: BondNetwork,
    tag_x: str,
    radius_x: int,
    tag_y: str,
    radius_y: int,
    root_species=None,
    threads=None,
) -> JointDistribution:
    """Joint distribution of two descriptors over the same root set."""
    roots = _filtered_roots(network, root_species)
    if not roots:
        raise ValueError("no roots left after species filtering")
    _warn_if_open(network)

    def one(r):
        kx = describe(LocalEnvironment(network, r, radius_x), tag_x)
        ky = describe(LocalEnvironment(network, r, radius_y), tag_y)
        return (kx, ky)

    pairs = _map_roots(one, roots, threads)
    return JointDistribution(
        tag_x, radius_x, tag_y, radius_y, dict(Counter(pairs)), len(roots)
    )


# ---------------------------------------------------------------------------
# statistics (natural log throughout)
# ---------------------------------------------------------------------------


def shannon_entropy(dist: EmpiricalDistribution) -> float:
    """H = -sum p log p over the equivalence classes, in nats."""
    total = dist.total
    h = -sum((c / total) * math.log(c / total) for c in dist.counts.values() if c)
    return h + 0.0  # never -0.0


def scaled_entropy(dist: EmpiricalDistribution) -> float:
    """H / log(total): 0 for a single class, 1 when every root is unique.

    A single-root distribution has no scale (log 1 = 0) and is defined as 0.
    """
    if dist.total == 1:
        return 0.0
    return shannon_entropy(dist) / math.log(dist.total)


def mutual_information(joint: JointDistribution) -> float:
    """I(X;Y) = sum p(x,y) log[p(x,y)/(p(x)p(y))]; zero-count terms contribute 0."""
    total = joint.total
    px = Counter()
    py = Counter()
    for (kx, ky), n in joint.counts.items():
        px[kx] += n
        py[ky] += n
    info = 0.0
    for (kx, ky), n in joint.counts.items():
        if n:
            info += (n / total) * math.log(n * total / (px[kx] * py[ky]))
    return info


def uncertainty_coefficient(joint: JointDistribution, given: str = "y") -> float:
    """U(X|Y) = I(X;Y) / H(X): the share of X's information that Y carries.

    ``given="y"`` is U(X|Y); ``given="x"`` is U(Y|X). 1 means equality under
    the conditioning descriptor implies equality under the other.
    """
    hx = shannon_entropy(joint.marginal_x() if given == "y" else joint.marginal_y())
    if hx == 0.0:
        raise UndefinedUncertaintyError("H = 0: uncertainty coefficient undefined")
    return mutual_information(joint) / hx


def _check_comparable(p: EmpiricalDistribution, q: EmpiricalDistribution):
    if p.tag != q.tag or p.radius != q.radius:
        raise ValueError(
            f"distributions are not comparable: ({p.tag}, r={p.radius}) vs "
            f"({q.tag}, r={q.radius})"
        )


def symmetrized_kl(p: EmpiricalDistribution, q: EmpiricalDistribution) -> float:
    """D(P||Q) + D(Q||P) with q log(q/p) = 0 whenever either side is zero.

    The zero convention means distributions with disjoint supports compare as
    0; that pathology is kept deliberately (fidelity to the published
    definition beats smoothing). Use add-alpha smoothing to avoid it.
    """
    _check_comparable(p, q)
    div = 0.0
    for key, cp in p.counts.items():
        cq = q.counts.get(key, 0)
        if cp and cq:
            fp = cp / p.total
            fq = cq / q.total
            div += fp * math.log(fp / fq) + fq * math.log(fq / fp)
    return div


def smoothed(dist: EmpiricalDistribution, support, alpha: int = 1) -> EmpiricalDistribution:
    """Add-alpha smoothing over an explicit support; off by default everywhere."""
    counts = dict(dist.counts)
    extra = 0
    for key in support:
        counts[key] = counts.get(key, 0) + alpha
        extra += alpha
    return EmpiricalDistribution(dist.tag, dist.radius, counts, dist.total + extra, dist.source)


def frequency_standard_error(dist: EmpiricalDistribution) -> dict:
    """Binomial standard error sqrt(p(1-p)/total) per class."""
    out = {}
    for key, c in dist.counts.items():
        p = c / dist.total
        out[key] = math.sqrt(p * (1.0 - p) / dist.total)
    return out


def _ranks(dist: EmpiricalDistribution, support) -> dict:
    """1-based ranks over ``support`` by descending frequency; ties break on
    ascending payload bytes (reproducible Appendix-D tables)."""
    ordered = sorted(support, key=lambda k: (-dist.counts.get(k, 0), k.payload))
    return {key: i + 1 for i, key in enumerate(ordered)}


def ranked_diff_table(
    p: EmpiricalDistribution,
    q: EmpiricalDistribution,
    sort_mode: str = "f1",
    top_n: int = 10,
) -> ComparisonReport:
    """Top classes of two distributions under one of the three sort modes."""
    _check_comparable(p, q)
    if sort_mode not in SORT_MODES:
        raise ValueError(f"sort_mode must be one of {SORT_MODES}")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    support = sorted(set(p.counts) | set(q.counts), key=lambda k: k.payload)
    r1 = _ranks(p, support)
    r2 = _ranks(q, support)

    def f1(k):
        return p.frequency(k)

    def f2(k):
        return q.frequency(k)

    score = {
        "f1": lambda k: f1(k),
        "f1-f2": lambda k: f1(k) - f2(k),
        "f2-f1": lambda k: f2(k) - f1(k),
    }[sort_mode]
    chosen = sorted(support, key=lambda k: (-score(k), k.payload))[:top_n]
    rows = tuple(ReportRow(k, f1(k), f2(k), r1[k], r2[k]) for k in chosen)
    return ComparisonReport(rows, sort_mode, symmetrized_kl(p, q))


def rank_frequency_rows(p: EmpiricalDistribution, others=()) -> list:
    """Rank-frequency export: classes ranked by ``p`` (descending) with the
    frequencies and standard errors of every distribution at each rank."""
    for other in others:
        _check_comparable(p, other)
    support = sorted(p.counts, key=lambda k: (-p.counts[k], k.payload))
    dists = (p,) + tuple(others)
    errors = [frequency_standard_error(d) for d in dists]
    rows = []
    for rank, key in enumerate(support, start=1):
        entry = {"rank": rank, "key": key}
        for i, d in enumerate(dists):
            entry[f"f{i + 1}"] = d.frequency(key)
            entry[f"se{i + 1}"] = errors[i].get(key, 0.0)
        rows.append(entry)
    return rows


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def distribution_to_json(dist: EmpiricalDistribution) -> str:
    """Stable JSON rendering: classes sorted by (count desc, payload asc)."""
    classes = [
        {
            "key": base64.b64encode(key.payload).decode("ascii"),
            "text": render_key(key),
            "count": count,
        }
        for key, count in sorted(dist.counts.items(), key=lambda kv: (-kv[1], kv[0].payload))
    ]
    doc = {
        "descriptor": dist.tag,
        "radius": dist.radius,
        "total": dist.total,
        "source": dist.source,
        "classes": classes,
    }
    return json.dumps(doc, indent=1) + "\n"


def distribution_from_json(text) -> EmpiricalDistribution:
    doc = json.loads(text if isinstance(text, str) else text.decode())
    tag = doc["descriptor"]
    radius = doc["radius"]
    counts = {}
    for entry in doc["classes"]:
        key = DescriptorKey(tag, radius, base64.b64decode(entry["key"]))
        counts[key] = counts.get(key, 0) + entry["count"]
    return EmpiricalDistribution(tag, radius, counts, doc["total"], doc.get("source", ""))


def report_to_csv(report: ComparisonReport) -> str:
    """CSV with header (key, f1, f2, r1, r2); keys use the human rendering."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "f1", "f2", "r1", "r2"])
    for row in report.rows:
        writer.writerow([render_key(row.key), f"{row.f1:.6g}", f"{row.f2:.6g}", row.r1, row.r2])
    return buf.getvalue()
