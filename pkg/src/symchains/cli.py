"""Command-line front end.

Subcommands: build (construct and verify a decomposition, writing a JSON
bundle), catalog (reproduce the n=6 subgroup table), explore (brute-force
search on the open-problem quotients), verify (re-check a bundle).

Exit codes: 0 pass, 1 verification failure (or search exhausted), 2 input
or schema error, 3 resource cap or timeout.  Output is deterministic:
identical invocations produce byte-identical artifacts.  The environment
variable SCO_SEED is reserved and ignored (nothing here is randomized).
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import run_catalog
from .engine import greene_kleitman_scd, search_scd
from .errors import ResourceCapError, SearchTimeoutError
from .perms import CycleSpec, GeneratedGroup, Permutation, parse_permutations
from .posets import (ChainDecomposition, RankedPoset, boolean_lattice,
                     canonical_json, chain_product, decomposition_from_json,
                     decomposition_to_json, poset_from_json, poset_to_json,
                     power_poset, verify_scd)
from .pipeline import necklace_scd, power_quotient_scd, wreath_quotient_scd
from .quotients import quotient

EXIT_PASS = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

BUNDLE_FORMAT = "symchains.bundle/1"


def _parse_group_arg(text: str, degree: int, allow_markers=False):
    """A cycle-power spec from CLI text; '' or '()' or 'e' is trivial;
    optionally 'S'/'A' markers for the full symmetric/alternating group."""
    text = (text or "").strip()
    if allow_markers and text in ("S", "A"):
        return text
    if text in ("", "()", "e", "1"):
        return CycleSpec.trivial(degree)
    return CycleSpec.parse(text, degree)


def _label_str(label, ground_size=None):
    if isinstance(label, int):
        if label == 0:
            return "{}"
        pts = [str(b + 1) for b in range(label.bit_length())
               if (label >> b) & 1]
        return "{" + ",".join(pts) + "}"
    if isinstance(label, tuple):
        return "(" + ",".join(_label_str(x) for x in label) + ")"
    return str(label)


def poset_to_dot(p: RankedPoset, dec: ChainDecomposition | None = None) -> str:
    """Hasse diagram in DOT, ranks aligned, chains colored by id."""
    palette = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
               "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
               "#ccebc5", "#ffed6f"]
    color = {}
    if dec is not None:
        for ci, chain in enumerate(dec.chains):
            for e in chain.elements:
                color[e] = palette[ci % len(palette)]
    lines = ["digraph scd {", "  rankdir=BT;",
             '  node [shape=box, style=filled, fillcolor="#ffffff"];']
    for i, lab in enumerate(p.labels):
        fill = color.get(i, "#ffffff")
        lines.append(f'  n{i} [label="{_label_str(lab)}", fillcolor="{fill}"];')
    for r in range(p.top_rank + 1):
        same = " ".join(f"n{i};" for i in range(len(p)) if p.rank[i] == r)
        lines.append("  { rank=same; " + same + " }")
    for lo, hi in p.covers:
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_text(p: RankedPoset, dec: ChainDecomposition,
                       report) -> str:
    lines = [f"elements: {len(p)}",
             f"level profile: {','.join(str(x) for x in p.level_sizes())}",
             f"chains: {len(dec.chains)}"]
    for ci, chain in enumerate(dec.chains):
        labs = " < ".join(_label_str(p.labels[e]) for e in chain.elements)
        lines.append(f"  chain {ci}: {labs}")
    lines.append(f"verification: {report.summary()}")
    return "\n".join(lines) + "\n"


def make_bundle(p: RankedPoset, dec: ChainDecomposition, report,
                construction: dict, audit: dict) -> dict:
    return {
        "format": BUNDLE_FORMAT,
        "poset": poset_to_json(p),
        "decomposition": decomposition_to_json(dec),
        "meta": {
            "construction": construction,
            "chain_count": len(dec.chains),
            "level_profile": list(p.level_sizes()),
            "verified": bool(report.ok),
            "audit": audit,
        },
    }


def _write_output(args, p, dec, report, construction, audit):
    fmt = args.format
    if fmt == "json":
        payload = canonical_json(make_bundle(p, dec, report, construction,
                                             audit)) + "\n"
        default_name = "scd.json"
    elif fmt == "dot":
        payload = poset_to_dot(p, dec)
        default_name = "scd.dot"
    else:
        payload = decomposition_text(p, dec, report)
        default_name = "scd.txt"
    path = args.output or default_name
    if path == "-":
        sys.stdout.write(payload)
    else:
        with open(path, "w") as fh:
            fh.write(payload)
    return path


def cmd_build(args) -> int:
    timeout = args.timeout
    selected = [bool(args.theorem1), bool(args.necklace), bool(args.dhand)]
    if sum(selected) != 1:
        print("error: select exactly one of --theorem1, --necklace, --dhand",
              file=sys.stderr)
        return EXIT_INPUT
    if args.theorem1:
        if args.k is None or args.t is None:
            print("error: --theorem1 requires --k and --t", file=sys.stderr)
            return EXIT_INPUT
        inner = _parse_group_arg(args.K, args.k, allow_markers=True)
        outer = _parse_group_arg(args.T, args.t)
        result = wreath_quotient_scd(args.k, args.t, inner, outer,
                                     timeout=timeout)
        construction = {"kind": "theorem1", "k": args.k, "t": args.t,
                        "K": args.K or "()", "T": args.T or "()"}
    elif args.necklace:
        if args.n is None:
            print("error: --necklace requires --n", file=sys.stderr)
            return EXIT_INPUT
        result = necklace_scd(args.n, timeout=timeout)
        construction = {"kind": "necklace", "n": args.n}
    else:
        if args.n is None:
            print("error: --dhand requires --n", file=sys.stderr)
            return EXIT_INPUT
        if (args.base_chain is None) == (args.base_boolean is None):
            print("error: --dhand requires exactly one of --base-chain, "
                  "--base-boolean", file=sys.stderr)
            return EXIT_INPUT
        if args.base_chain is not None:
            if args.base_chain < 1:
                print("error: --base-chain must be at least 1", file=sys.stderr)
                return EXIT_INPUT
            base = chain_product([args.base_chain - 1])
            base_scd = ChainDecomposition.from_element_lists(
                base, [list(range(len(base)))])
            base_desc = {"base_chain": args.base_chain}
        else:
            base_scd = greene_kleitman_scd(args.base_boolean)
            base_desc = {"base_boolean": args.base_boolean}
        gspec = _parse_group_arg(args.G, args.n)
        result = power_quotient_scd(base_scd, args.n, gspec, timeout=timeout)
        construction = {"kind": "dhand", "n": args.n, "G": args.G or "()",
                        **base_desc}

    if result.quotient is None:
        p = result.decomposition.host
    else:
        p = result.quotient.poset
    report = result.report
    path = _write_output(args, p, result.decomposition, report, construction,
                         result.audit_json())
    print(f"elements: {len(p)}")
    print(f"level profile: {','.join(str(x) for x in p.level_sizes())}")
    print(f"chains: {len(result.decomposition.chains)}")
    print(f"verification: {report.summary()}")
    if path != "-":
        print(f"wrote {path}")
    return EXIT_PASS if report.ok else EXIT_VERIFY_FAIL


def cmd_catalog(args) -> int:
    results = run_catalog(args.n)
    failed = []
    for r in results:
        print(r.line())
        if not r.ok:
            failed.append(r)
    print(f"{len(results) - len(failed)}/{len(results)} rows pass")
    if failed:
        print("failing rows: " +
              ", ".join(f"{r.index} ({r.description})" for r in failed),
              file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_PASS


def cmd_explore(args) -> int:
    timeout = args.timeout
    if args.problem == 1:
        n = args.n
        if n is None or n < 3:
            print("error: problem 1 needs --n of at least 3", file=sys.stderr)
            return EXIT_INPUT
        rotation = Permutation.from_cycles(n, [tuple(range(1, n + 1))])
        reflection = Permutation([n + 1 - i for i in range(1, n + 1)])
        group = GeneratedGroup(n, [rotation, reflection])
        base = boolean_lattice(n)
        name = f"B_{n} modulo the dihedral group of order {2 * n}"
    elif args.problem == 2:
        if args.k is None or args.t is None:
            print("error: problem 2 needs --k and --t", file=sys.stderr)
            return EXIT_INPUT
        from .perms import symmetric_group
        base = power_poset(chain_product([args.k]), args.t)
        group = symmetric_group(args.t)
        name = (f"monotone sequences bounded by {args.k} of length {args.t} "
                f"(quotient of a chain power by the symmetric group)")
    else:
        if args.n is None:
            print("error: problem 3 needs --n", file=sys.stderr)
            return EXIT_INPUT
        if (args.base_chain is None) == (args.base_boolean is None):
            print("error: problem 3 needs exactly one of --base-chain, "
                  "--base-boolean", file=sys.stderr)
            return EXIT_INPUT
        if args.base_chain is not None:
            factor = chain_product([args.base_chain - 1])
        else:
            factor = boolean_lattice(args.base_boolean)
        base = power_poset(factor, args.n)
        gens, _ = parse_permutations(args.G or "", degree=args.n)
        group = GeneratedGroup(args.n, gens)
        name = f"a power of the base poset modulo <{args.G or '()'}>"

    q = quotient(base, group)
    print(f"quotient: {name}")
    print(f"elements: {len(q.poset)}")
    print(f"level profile: {','.join(str(x) for x in q.poset.level_sizes())}")
    try:
        dec = search_scd(q.poset, timeout=timeout, size_cap=args.cap)
    except SearchTimeoutError:
        print(f"search: timed out after {timeout}s (says nothing about existence)")
        return EXIT_RESOURCE
    if dec is None:
        print("search: exhausted; no symmetric chain decomposition exists")
        return EXIT_VERIFY_FAIL
    report = verify_scd(q.poset, dec)
    print(f"search: found {len(dec.chains)} chains; verification: "
          f"{report.summary()}")
    return EXIT_PASS if report.ok else EXIT_VERIFY_FAIL


def cmd_verify(args) -> int:
    try:
        with open(args.path) as fh:
            bundle = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read bundle: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if not isinstance(bundle, dict) or bundle.get("format") != BUNDLE_FORMAT:
            raise ValueError(f"not a {BUNDLE_FORMAT} bundle")
        p = poset_from_json(bundle["poset"])
        dec = decomposition_from_json(bundle["decomposition"], p)
    except (KeyError, ValueError) as exc:
        print(f"error: bad bundle: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = verify_scd(p, dec)
    print(f"verification: {report.summary()}")
    for line in report.failures():
        print(f"  {line}")
    return EXIT_PASS if report.ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symchains",
        description="Symmetric chain decompositions of Boolean-lattice and "
                    "chain-product quotients by permutation groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct and verify a decomposition")
    b.add_argument("--theorem1", action="store_true",
                   help="Boolean quotient by a wreath product K wr T")
    b.add_argument("--necklace", action="store_true",
                   help="Boolean quotient by the full rotation group")
    b.add_argument("--dhand", action="store_true",
                   help="power of an SCO modulo a cycle-power group")
    b.add_argument("--k", type=int, help="inner degree (theorem1)")
    b.add_argument("--t", type=int, help="outer degree (theorem1)")
    b.add_argument("--n", type=int, help="ground size / power")
    b.add_argument("--K", type=str, default="",
                   help="inner generators in cycle notation, or S or A")
    b.add_argument("--T", type=str, default="",
                   help="outer generators in cycle notation")
    b.add_argument("--G", type=str, default="",
                   help="acting generators in cycle notation (dhand)")
    b.add_argument("--base-chain", type=int,
                   help="base poset: a chain with this many elements")
    b.add_argument("--base-boolean", type=int,
                   help="base poset: a Boolean lattice with this ground size")
    b.add_argument("--format", choices=["json", "dot", "text"],
                   default="json")
    b.add_argument("-o", "--output", type=str, default=None,
                   help="output path ('-' for stdout)")
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--cap", type=int, default=5000,
                   help="search size cap (elements)")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("catalog", help="reproduce the subgroup table")
    c.add_argument("--n", type=int, default=6)
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("explore",
                       help="brute-force search on open-problem quotients")
    e.add_argument("--problem", type=int, choices=[1, 2, 3], required=True)
    e.add_argument("--n", type=int)
    e.add_argument("--k", type=int)
    e.add_argument("--t", type=int)
    e.add_argument("--base-chain", type=int)
    e.add_argument("--base-boolean", type=int)
    e.add_argument("--G", type=str, default="")
    e.add_argument("--timeout", type=float, default=60.0)
    e.add_argument("--cap", type=int, default=5000)
    e.set_defaults(func=cmd_explore)

    v = sub.add_parser("verify", help="re-verify a decomposition bundle")
    v.add_argument("path")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceCapError, SearchTimeoutError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
