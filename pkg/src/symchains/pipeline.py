"""End-to-end SCD constructions for quotients.

Two constructions share one engine.  For a wreath product K wr T acting on
subsets of a k*t ground set arranged in t blocks, the quotient B_n/(K wr T)
decomposes through the product of block quotients (B_k/K)^t: the block SCD
splits the product into grids (products of chains indexed by a chain-id
tuple), T permutes the grid indices, and each orbit-representative grid
modulo its stabilizer is a chain-product quotient with a guaranteed SCD
whose chains pull back to symmetric saturated chains of B_n/(K wr T).

For a power P^n of an arbitrary SCO modulo a cycle-power subgroup of S_n
permuting coordinates, the same grid machinery applies verbatim with the
base SCD of P in place of the block SCD.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian

from .engine import (DEFAULT_SEARCH_TIMEOUT, GridQuotientScd, chain_product_scd,
                     grid_quotient_scd)
from .errors import InternalInconsistencyError
from .perms import (CycleSpec, GeneratedGroup, Permutation, act_on_tuple,
                    alternating_group, orbit_reps_lex, stabilizer_cyclic_powers,
                    symmetric_group, trivial_group, wreath_product,
                    format_generators, default_blocks)
from .posets import (Chain, ChainDecomposition, RankedPoset, ScdReport,
                     boolean_lattice, is_symmetric_saturated_chain,
                     poset_product, power_poset, verify_scd)
from .quotients import (QuotientPoset, embed_mask, quotient, restrict_mask,
                        subset_action, coordinate_action)

__all__ = ["Grid", "GridPartition", "grids_from_scds", "PipelineResult",
           "WreathContext", "wreath_quotient_scd", "PowerContext",
           "power_quotient_scd", "necklace_scd"]


# --- grids ------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """One cell of the grid partition: the product of one chain per factor."""
    index: tuple        # chain ids, 1-based
    factor_chains: tuple  # per factor, the chain's element indices
    lengths: tuple      # per factor, chain size - 1
    span: int           # rank span of the grid
    offset: int         # rank of the grid bottom inside the ambient product


@dataclass(frozen=True)
class GridPartition:
    """Partition of a product of identically decomposed posets into grids."""
    product: RankedPoset
    hosts: tuple
    chains: tuple       # the shared chain list (element index tuples)
    grids: tuple
    grid_by_index: dict
    chain_of: tuple     # per host element: (chain id, height)

    def grid_of(self, element: int) -> Grid:
        label = self.product.labels[element]
        host = self.hosts[0]
        idx = tuple(self.chain_of[host.index[part]][0] for part in label)
        return self.grid_by_index[idx]

    def transport(self, tau: Permutation, element: int) -> int:
        """The local isomorphism induced by tau, sending grid j to grid
        tau(j): contents permute by the coordinate action."""
        label = self.product.labels[element]
        return self.product.index[act_on_tuple(tau, label)]


def grids_from_scds(block_scds) -> GridPartition:
    """Split a product of posets, each carrying the same verified SCD, into
    grids: one product of chains per tuple of chain ids."""
    block_scds = list(block_scds)
    if not block_scds:
        raise ValueError("need at least one block decomposition")
    first = block_scds[0]
    for d in block_scds:
        if (d.host.labels != first.host.labels or
                d.host.covers != first.host.covers):
            raise ValueError("block posets differ; the SCD must be replicated")
        if tuple(c.elements for c in d.chains) != tuple(
                c.elements for c in first.chains):
            raise ValueError("block SCDs differ; the SCD must be replicated")
        rep = verify_scd(d.host, d)
        if not rep.ok:
            raise ValueError(f"block decomposition fails: {rep.summary()}")
    host = first.host
    t = len(block_scds)
    s = len(first.chains)
    chain_of = [None] * len(host)
    for cid, chain in enumerate(first.chains, start=1):
        for h, e in enumerate(chain.elements):
            chain_of[e] = (cid, h)
    product = poset_product([host] * t)
    grids = []
    for index in _cartesian(range(1, s + 1), repeat=t):
        factor_chains = tuple(first.chains[j - 1].elements for j in index)
        lengths = tuple(len(fc) - 1 for fc in factor_chains)
        span = sum(lengths)
        offset = sum(host.rank[fc[0]] for fc in factor_chains)
        if 2 * offset + span != product.top_rank:
            raise ValueError("block chains are not symmetric")
        grids.append(Grid(index, factor_chains, lengths, span, offset))
    return GridPartition(product, tuple([host] * t), first.chains,
                         tuple(grids), {g.index: g for g in grids},
                         tuple(chain_of))


# --- shared grid stage ------------------------------------------------------

@dataclass(frozen=True)
class GridBundle:
    index: tuple
    stabilizer: GeneratedGroup
    gq: GridQuotientScd


def _grid_stage(chain_sizes, t_group: GeneratedGroup, t: int, timeout):
    s = len(chain_sizes)
    reps = orbit_reps_lex(t_group, s, t)
    bundles = {}
    for jbar in reps:
        stab = stabilizer_cyclic_powers(t_group, jbar)
        lengths = tuple(chain_sizes[j - 1] - 1 for j in jbar)
        gq = grid_quotient_scd(lengths, stab.cycle_spec, timeout=timeout)
        bundles[jbar] = GridBundle(jbar, stab, gq)
    return tuple(reps), bundles


def _audit_grids(J, bundles):
    out = []
    for jbar in J:
        b = bundles[jbar]
        chains = [[list(b.gq.scd.host.labels[e]) for e in c.elements]
                  for c in b.gq.scd.chains]
        out.append({"index": list(jbar),
                    "stabilizer": b.stabilizer.cycle_spec.describe(),
                    "chains": chains})
    return out


@dataclass(frozen=True)
class PipelineResult:
    decomposition: ChainDecomposition
    report: ScdReport
    quotient: QuotientPoset
    context: object

    def audit_json(self) -> dict:
        return self.context.audit_json() if self.context is not None else {}


# --- Theorem: Boolean quotients by wreath products --------------------------

def _inner_group(k: int, inner):
    """Resolve the inner-group argument: a CycleSpec, or the markers "S"/"A"
    for the full symmetric/alternating group on [k]."""
    if inner == "S":
        if k < 2:
            return trivial_group(k), "chain", "S"
        return symmetric_group(k), "chain", "S"
    if inner == "A":
        # A_k is a chain quotient only for k >= 3; below that it is trivial.
        if k < 3:
            return trivial_group(k), "search", "A"
        return alternating_group(k), "chain", "A"
    if not isinstance(inner, CycleSpec):
        raise ValueError("inner group must be a CycleSpec or 'S' or 'A'")
    if inner.degree != k:
        raise ValueError(f"inner spec degree {inner.degree} != k={k}")
    return inner.group(), "search", inner.describe()


@dataclass(frozen=True)
class WreathContext:
    """Everything the wreath construction computed, for audits, the grid
    address map, and chain pullbacks."""
    k: int
    t: int
    n: int
    blocks: tuple
    inner_desc: str
    outer_spec: CycleSpec
    block_quotient: QuotientPoset
    block_scd: ChainDecomposition
    chain_of: tuple
    t_group: GeneratedGroup
    J: tuple
    bundles: dict
    group: GeneratedGroup
    target: QuotientPoset

    def subset_profile(self, mask: int):
        """Per block: (chain id, height) of the block restriction's orbit."""
        out = []
        for blk in self.blocks:
            local = restrict_mask(mask, blk)
            out.append(self.chain_of[self.block_quotient.orbit_of[local]])
        return out

    def address_of(self, mask: int):
        """The representative grid and stabilizer-orbit holding the image
        of a subset: the grid-address side of the structure bijection."""
        profile = self.subset_profile(mask)
        jbar = tuple(c for c, _ in profile)
        heights = tuple(h for _, h in profile)
        if jbar not in self.bundles:
            jset = set(self.J)
            for tau in self.t_group.elements():
                if act_on_tuple(tau, jbar) in jset:
                    jbar = act_on_tuple(tau, jbar)
                    heights = act_on_tuple(tau, heights)
                    break
            else:
                raise InternalInconsistencyError(
                    "no group element moves the grid index to a representative")
        return jbar, self.bundles[jbar].gq.element_of_tuple(heights)

    def realize(self, jbar, heights) -> int:
        """A subset representing the grid element with the given heights."""
        mask = 0
        for r, (j, h) in enumerate(zip(jbar, heights)):
            e = self.block_scd.chains[j - 1].elements[h]
            mask |= embed_mask(self.block_quotient.poset.labels[e],
                               self.blocks[r])
        return mask

    def pullback_chain(self, jbar, grid_chain: Chain) -> Chain:
        """Pull a symmetric chain of a grid quotient back to the target
        quotient, re-verifying saturation and symmetry there."""
        bundle = self.bundles[jbar]
        gq_host = bundle.gq.scd.host
        if not is_symmetric_saturated_chain(gq_host, grid_chain):
            raise ValueError("chain fails its grid-local check")
        els = []
        for e in grid_chain.elements:
            heights = gq_host.labels[e]
            mask = self.realize(jbar, heights)
            els.append(self.target.orbit_of[mask])
        chain = Chain(tuple(els))
        if not is_symmetric_saturated_chain(self.target.poset, chain):
            raise InternalInconsistencyError(
                "pulled-back chain is not symmetric saturated in the target")
        return chain

    def audit_json(self) -> dict:
        return {
            "construction": "boolean-wreath-quotient",
            "k": self.k,
            "t": self.t,
            "inner": self.inner_desc,
            "outer": self.outer_spec.describe(),
            "blocks": [list(b) for b in self.blocks],
            "group": format_generators(self.group.generators),
            "block_chains": [list(c.elements) for c in self.block_scd.chains],
            "orbit_representatives": [list(j) for j in self.J],
            "grids": _audit_grids(self.J, self.bundles),
        }


def _block_scd_of_boolean_quotient(k, inner, timeout):
    """SCD of B_k/K: the single full chain for symmetric/alternating K,
    otherwise through the chain-product quotient constructor."""
    group, route, desc = _inner_group(k, inner)
    bq = quotient(boolean_lattice(k), group)
    if route == "chain":
        sizes = bq.poset.level_sizes()
        if any(s != 1 for s in sizes):
            raise InternalInconsistencyError(
                f"B_{k} modulo {desc} is not a chain")
        order = sorted(range(len(bq.poset)), key=bq.poset.rank.__getitem__)
        scd = ChainDecomposition.from_element_lists(bq.poset, [order])
        return group, bq, scd, desc
    # B_k is the product of k 2-chains; the cycle-power quotient
    # constructor yields its SCD over coordinate tuples, which translate
    # back to subset orbits bit by bit.
    spec = inner if isinstance(inner, CycleSpec) else CycleSpec.trivial(k)
    gq = grid_quotient_scd([1] * k, spec, timeout=timeout)
    chains = []
    for chain in gq.scd.chains:
        els = []
        for e in chain.elements:
            tup = gq.scd.host.labels[e]
            mask = sum(bit << i for i, bit in enumerate(tup))
            els.append(bq.orbit_of[mask])
        chains.append(els)
    scd = ChainDecomposition.from_element_lists(bq.poset, chains)
    rep = verify_scd(bq.poset, scd)
    if not rep.ok:
        raise InternalInconsistencyError(
            f"translated block SCD fails verification: {rep.summary()}")
    return group, bq, scd, desc


def wreath_quotient_scd(k: int, t: int, inner, outer: CycleSpec, *,
                        blocks=None,
                        timeout=DEFAULT_SEARCH_TIMEOUT) -> PipelineResult:
    """Verified SCD of B_{kt} modulo the wreath product of K (on [k], a
    cycle-power spec or "S"/"A") by T (on [t], a cycle-power spec).

    ``blocks`` optionally embeds the t blocks of k points anywhere in the
    ground set; the default layout is consecutive blocks with point (i, r)
    at bit (r-1)k + (i-1).
    """
    if k < 1 or t < 1:
        raise ValueError("k and t must be positive")
    if not isinstance(outer, CycleSpec):
        raise ValueError("outer group must be a CycleSpec")
    if outer.degree != t:
        raise ValueError(f"outer spec degree {outer.degree} != t={t}")
    n = k * t
    if blocks is None:
        blocks = default_blocks(k, t)
    blocks = tuple(tuple(b) for b in blocks)

    inner_group_, bq, block_scd, inner_desc = _block_scd_of_boolean_quotient(
        k, inner, timeout)
    chain_of = [None] * len(bq.poset)
    for cid, chain in enumerate(block_scd.chains, start=1):
        for h, e in enumerate(chain.elements):
            chain_of[e] = (cid, h)

    t_group = outer.group()
    chain_sizes = [len(c) for c in block_scd.chains]
    J, bundles = _grid_stage(chain_sizes, t_group, t, timeout)

    group = wreath_product(inner_group_, t_group, blocks)
    target = quotient(boolean_lattice(n), group, subset_action)

    ctx = WreathContext(k, t, n, blocks, inner_desc, outer, bq, block_scd,
                        tuple(chain_of), t_group, J, bundles, group, target)

    chains = []
    for jbar in J:
        for chain in bundles[jbar].gq.scd.chains:
            chains.append(ctx.pullback_chain(jbar, chain).elements)
    dec = ChainDecomposition.from_element_lists(target.poset, chains)
    report = verify_scd(target.poset, dec)
    return PipelineResult(dec, report, target, ctx)


def necklace_scd(n: int, timeout=DEFAULT_SEARCH_TIMEOUT) -> PipelineResult:
    """Verified SCD of the necklace poset: subsets of an n-set modulo the
    full cyclic rotation group."""
    return wreath_quotient_scd(1, n, CycleSpec.trivial(1),
                               CycleSpec.full_cycle(n), timeout=timeout)


# --- Theorem: powers of an SCO modulo cycle-power groups ---------------------

@dataclass(frozen=True)
class PowerContext:
    base: RankedPoset
    base_scd: ChainDecomposition
    n: int
    group_spec: CycleSpec
    chain_of: tuple
    t_group: GeneratedGroup
    J: tuple
    bundles: dict
    group: GeneratedGroup
    target: QuotientPoset

    def tuple_profile(self, label):
        return [self.chain_of[self.base.index[part]] for part in label]

    def address_of(self, label):
        profile = self.tuple_profile(label)
        jbar = tuple(c for c, _ in profile)
        heights = tuple(h for _, h in profile)
        if jbar not in self.bundles:
            jset = set(self.J)
            for tau in self.t_group.elements():
                if act_on_tuple(tau, jbar) in jset:
                    jbar = act_on_tuple(tau, jbar)
                    heights = act_on_tuple(tau, heights)
                    break
            else:
                raise InternalInconsistencyError(
                    "no group element moves the grid index to a representative")
        return jbar, self.bundles[jbar].gq.element_of_tuple(heights)

    def realize(self, jbar, heights):
        return tuple(
            self.base.labels[self.base_scd.chains[j - 1].elements[h]]
            for j, h in zip(jbar, heights))

    def pullback_chain(self, jbar, grid_chain: Chain) -> Chain:
        bundle = self.bundles[jbar]
        gq_host = bundle.gq.scd.host
        if not is_symmetric_saturated_chain(gq_host, grid_chain):
            raise ValueError("chain fails its grid-local check")
        els = []
        for e in grid_chain.elements:
            label = self.realize(jbar, gq_host.labels[e])
            els.append(self.target.orbit_index_of_label(label))
        chain = Chain(tuple(els))
        if not is_symmetric_saturated_chain(self.target.poset, chain):
            raise InternalInconsistencyError(
                "pulled-back chain is not symmetric saturated in the target")
        return chain

    def audit_json(self) -> dict:
        return {
            "construction": "power-quotient",
            "n": self.n,
            "group": self.group_spec.describe(),
            "base_chains": [list(c.elements) for c in self.base_scd.chains],
            "orbit_representatives": [list(j) for j in self.J],
            "grids": _audit_grids(self.J, self.bundles),
        }


def power_quotient_scd(base_scd: ChainDecomposition, n: int,
                       group_spec: CycleSpec, *,
                       timeout=DEFAULT_SEARCH_TIMEOUT) -> PipelineResult:
    """Verified SCD of P^n modulo a cycle-power subgroup of S_n permuting
    coordinates, for any base P carrying a verified SCD."""
    base = base_scd.host
    rep = verify_scd(base, base_scd)
    if not rep.ok:
        raise ValueError(f"base decomposition fails: {rep.summary()}")
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return PipelineResult(base_scd, rep, None, None)
    if not isinstance(group_spec, CycleSpec) or group_spec.degree != n:
        raise ValueError("group must be a CycleSpec of degree n")

    chain_of = [None] * len(base)
    for cid, chain in enumerate(base_scd.chains, start=1):
        for h, e in enumerate(chain.elements):
            chain_of[e] = (cid, h)
    t_group = group_spec.group()
    chain_sizes = [len(c) for c in base_scd.chains]
    J, bundles = _grid_stage(chain_sizes, t_group, n, timeout)

    power = power_poset(base, n)
    target = quotient(power, t_group, coordinate_action)
    ctx = PowerContext(base, base_scd, n, group_spec, tuple(chain_of),
                       t_group, J, bundles, t_group, target)

    chains = []
    for jbar in J:
        for chain in bundles[jbar].gq.scd.chains:
            chains.append(ctx.pullback_chain(jbar, chain).elements)
    dec = ChainDecomposition.from_element_lists(target.poset, chains)
    report = verify_scd(target.poset, dec)
    return PipelineResult(dec, report, target, ctx)
