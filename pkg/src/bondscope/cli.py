"""Command-line surface.

Subcommands: classify, compare, mutual-info, barcode, crystal, bench. Machine
artifacts are JSON, tables CSV, figures SVG; every output file is written to a
temporary file and atomically renamed, so a failed run leaves nothing behind.
Result lines go to stdout, timing to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
import time

from . import __version__
from .barcode import format_barcode, h1_barcode
from .crystals import GENERATORS, generate_cristobalite
from .descriptors import ALL_TAGS, PROFILE_TAGS, TAG_GRAPH
from .ingest import (
    AtomicConfiguration,
    BondRule,
    cutoff_stability,
    detect_and_parse,
    write_xyz,
)
from .network import LocalEnvironment
from .stats import (
    classify_all,
    classify_joint,
    distribution_from_json,
    distribution_to_json,
    mutual_information,
    ranked_diff_table,
    rank_frequency_rows,
    report_to_csv,
    root_keys,
    scaled_entropy,
    shannon_entropy,
    SORT_MODES,
    uncertainty_coefficient,
)
from .svg import render_barcode_svg, render_rank_frequency_svg


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bondscope-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_species_map(text):
    mapping = {}
    if not text:
        return mapping
    for item in text.split(","):
        k, _, v = item.partition("=")
        try:
            mapping[int(k)] = v
        except ValueError:
            raise ValueError(f"bad species-map entry {item!r} (want e.g. 1=Si)") from None
        if not v:
            raise ValueError(f"bad species-map entry {item!r} (want e.g. 1=Si)")
    return mapping


def _parse_bond_rules(items):
    if not items:
        return BondRule.silica()
    cutoffs = {}
    for item in items:
        pair, _, value = item.partition("=")
        a, _, b = pair.partition("-")
        if not (a and b and value):
            raise ValueError(f"bad bond rule {item!r} (want e.g. Si-O=2.2)")
        cutoffs[(a, b)] = float(value)
    return BondRule(cutoffs)


def _load_network(args):
    with open(args.input, "rb") as fh:
        data = fh.read()
    cfg = detect_and_parse(data, _parse_species_map(getattr(args, "species_map", None)))
    from .ingest import build_bond_network

    return build_bond_network(cfg, _parse_bond_rules(getattr(args, "bond", None)))


def _default_threads():
    env = os.environ.get("BONDSCOPE_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    network = _load_network(args)
    dist = classify_all(
        network,
        args.descriptor,
        args.radius,
        root_species=args.root_species,
        threads=args.threads,
        source=os.path.basename(args.input),
    )
    _atomic_write(args.out, distribution_to_json(dist))
    print(f"classes: {dist.n_classes}")
    print(f"scaled entropy: {scaled_entropy(dist):.6f}")
    print(f"wall time: {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    with open(args.dist_a) as fh:
        p = distribution_from_json(fh.read())
    with open(args.dist_b) as fh:
        q = distribution_from_json(fh.read())
    report = ranked_diff_table(p, q, sort_mode=args.sort, top_n=args.top)
    _atomic_write(args.out, report_to_csv(report))
    print(f"symmetrized KL divergence: {report.divergence:.6f}")
    shared = sum(1 for k in p.counts if k in q.counts)
    if shared == 0:
        print(
            "warning: supports are disjoint; the zero convention makes the "
            "divergence 0 for them",
            file=sys.stderr,
        )
    if args.rank_freq:
        rows = rank_frequency_rows(p, [q])
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "f1", "se1", "f2", "se2"])
        for r in rows:
            w.writerow([r["rank"], f"{r['f1']:.6g}", f"{r['se1']:.6g}", f"{r['f2']:.6g}", f"{r['se2']:.6g}"])
        _atomic_write(args.rank_freq, buf.getvalue())
    if args.plot:
        rows = rank_frequency_rows(p, [q])
        _atomic_write(
            args.plot,
            render_rank_frequency_svg(rows, labels=("f1", "f2"), title=f"{p.tag}, r={p.radius}"),
        )
    return 0


def cmd_mutual_info(args) -> int:
    network = _load_network(args)
    joint = classify_joint(
        network,
        args.x,
        args.radius_x,
        args.y,
        args.radius_y,
        root_species=args.root_species,
        threads=args.threads,
    )
    info = mutual_information(joint)
    hx = shannon_entropy(joint.marginal_x())
    hy = shannon_entropy(joint.marginal_y())
    print(f"H(X)={hx:.6f} H(Y)={hy:.6f} I(X;Y)={info:.6f}")
    print(f"U(X|Y) = {uncertainty_coefficient(joint, given='y'):.6f}")
    print(f"U(Y|X) = {uncertainty_coefficient(joint, given='x'):.6f}")
    return 0


def cmd_barcode(args) -> int:
    network = _load_network(args)
    env = LocalEnvironment(network, args.root, args.radius)
    bc = h1_barcode(env)
    print(f"BC = {format_barcode(bc)}")
    if args.svg:
        title = f"root {args.root}, radius {args.radius}"
        _atomic_write(args.svg, render_barcode_svg(bc.intervals, args.radius, title))
    return 0


def cmd_crystal(args) -> int:
    network = GENERATORS[args.form](args.n)
    cfg = AtomicConfiguration(
        species=network.species,
        positions=network.positions,
        cell=network.cell,
    )
    _atomic_write(args.out, write_xyz(cfg))
    print(f"{args.form}: {network.n_atoms} atoms, {len(network.bonds)} bonds -> {args.out}")
    return 0


def cmd_bench(args) -> int:
    network = generate_cristobalite(args.supercell)
    si = [i for i, sp in enumerate(network.species) if sp == "Si"]
    roots = [si[k % len(si)] for k in range(args.roots)]
    print(
        f"benchmark network: {network.n_atoms} atoms, {len(si)} Si roots, "
        f"{args.roots} classifications at radius {args.radius}",
        file=sys.stderr,
    )
    timings = {}
    for tag in PROFILE_TAGS:
        t0 = time.perf_counter()
        root_keys(network, tag, args.radius, roots, threads=1)
        timings[tag] = time.perf_counter() - t0
        print(f"{tag}: {timings[tag]:.2f} s")
    fastest = min(timings, key=timings.get)
    print(f"fastest: {fastest}")
    return 0


def cmd_stability(args) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    cfg = detect_and_parse(data, _parse_species_map(args.species_map))
    frac = cutoff_stability(
        cfg,
        _parse_bond_rules(args.bond),
        args.radius,
        args.delta,
        tag=args.descriptor,
        root_species=args.root_species,
    )
    print(f"stable fraction: {frac:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bondscope",
        description="Topological classification and comparison of bond networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_opts(p):
        p.add_argument("input", help="XYZ or LAMMPS dump file")
        p.add_argument("--species-map", default=None, help="dump type mapping, e.g. 1=Si,2=O")
        p.add_argument("--bond", action="append", default=None, help="cutoff rule, e.g. Si-O=2.2 (repeatable)")

    p = sub.add_parser("classify", help="classify all roots and write a distribution JSON")
    add_input_opts(p)
    p.add_argument("--descriptor", choices=ALL_TAGS, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--root-species", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="compare two distribution files")
    p.add_argument("dist_a")
    p.add_argument("dist_b")
    p.add_argument("--sort", choices=SORT_MODES, default="f1")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--out", required=True, help="CSV report path")
    p.add_argument("--rank-freq", default=None, help="optional rank-frequency CSV")
    p.add_argument("--plot", default=None, help="optional rank-frequency SVG")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("mutual-info", help="uncertainty coefficients between two descriptors")
    add_input_opts(p)
    p.add_argument("--x", choices=ALL_TAGS, required=True)
    p.add_argument("--y", choices=ALL_TAGS, required=True)
    p.add_argument("--radius-x", type=int, required=True)
    p.add_argument("--radius-y", type=int, required=True)
    p.add_argument("--root-species", default=None)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_mutual_info)

    p = sub.add_parser("barcode", help="barcode of one root, as text and optional SVG")
    add_input_opts(p)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("crystal", help="generate a reference silica crystal as XYZ")
    p.add_argument("--form", choices=sorted(GENERATORS), required=True)
    p.add_argument("--n", type=int, required=True, help="supercell size (>= 3)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_crystal)

    p = sub.add_parser("bench", help="time the three profile descriptors")
    p.add_argument("--roots", type=int, default=100000, help="number of classifications")
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--supercell", type=int, default=5, help="cristobalite supercell size")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stability", help="fraction of roots stable under cutoff +- delta")
    add_input_opts(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--descriptor", choices=ALL_TAGS, default=TAG_GRAPH)
    p.add_argument("--root-species", default=None)
    p.set_defaults(func=cmd_stability)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # noqa: BLE001 - single CLI error boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
