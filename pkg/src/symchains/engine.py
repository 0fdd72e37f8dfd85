"""Concrete SCD constructors.

Three routes: bracket matching on subsets of the Boolean lattice, staircase
(hook) peeling for products of chains, and a backtracking search that
serves as the oracle realizing existence guarantees for quotients of chain
products by cycle-power groups.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

from .errors import InternalInconsistencyError, ResourceCapError, SearchTimeoutError
from .posets import (Chain, ChainDecomposition, RankedPoset, boolean_lattice,
                     chain_product, poset_product, verify_scd)
from .perms import CycleSpec
from .quotients import QuotientPoset, quotient

GK_GROUND_CAP = 20
SEARCH_SIZE_CAP = 5000
DEFAULT_SEARCH_TIMEOUT = 60.0


def greene_kleitman_scd(n: int) -> ChainDecomposition:
    """The bracketing SCD of B_n.

    Convention: scanning positions 1..n left to right, a present element
    closes a bracket and an absent one opens it; nearest pairs match.  The
    chain through a subset keeps the matched pairs fixed and fills the
    unmatched positions left to right, so every chain adds elements at its
    leftmost free position first.
    """
    if n < 1:
        raise ValueError("ground size must be positive")
    if n > GK_GROUND_CAP:
        raise ResourceCapError(f"ground size {n} exceeds cap {GK_GROUND_CAP}")
    poset = boolean_lattice(n)
    groups = {}
    for mask in range(1 << n):
        stack = []
        matched = 0
        for pos in range(n):
            if (mask >> pos) & 1:
                if stack:
                    matched |= (1 << stack.pop()) | (1 << pos)
            else:
                stack.append(pos)
        bottom = mask & matched
        step = (mask & ~matched).bit_count()
        slot = groups.setdefault(bottom, {})
        assert step not in slot, "bracket matching produced a collision"
        slot[step] = mask
    chains = []
    for bottom, slot in groups.items():
        top_step = len(slot) - 1
        assert sorted(slot) == list(range(top_step + 1))
        chains.append([slot[i] for i in range(top_step + 1)])
    return ChainDecomposition.from_element_lists(poset, chains)


def hook_paths(m: int, n2: int):
    """Partition the m x n2 grid of index pairs into symmetric saturated
    staircase paths (bottom row plus last column, peeled repeatedly)."""
    if m <= n2:
        return [[(h, j) for j in range(n2 - h)] +
                [(i, n2 - 1 - h) for i in range(h + 1, m)]
                for h in range(m)]
    return [[(j, i) for (i, j) in path] for path in hook_paths(n2, m)]


def product_scd(d1: ChainDecomposition,
                d2: ChainDecomposition) -> ChainDecomposition:
    """SCD of the product of two hosts, peeling each pair of chains into
    staircase hooks."""
    for d in (d1, d2):
        rep = verify_scd(d.host, d)
        if not rep.ok:
            raise ValueError(f"input decomposition fails: {rep.summary()}")
    host = poset_product([d1.host, d2.host])
    chains = []
    for c1 in d1.chains:
        for c2 in d2.chains:
            for path in hook_paths(len(c1), len(c2)):
                chains.append([host.index[(d1.host.labels[c1.elements[i]],
                                           d2.host.labels[c2.elements[j]])]
                               for i, j in path])
    return ChainDecomposition.from_element_lists(host, chains)


def product_scd_many(decompositions) -> ChainDecomposition:
    decompositions = list(decompositions)
    if not decompositions:
        raise ValueError("need at least one decomposition")
    out = decompositions[0]
    for d in decompositions[1:]:
        out = product_scd(out, d)
    return out


def chain_product_scd(lengths) -> ChainDecomposition:
    """SCD of a product of chains over flat coordinate tuples, by folding
    hook peels across the factors."""
    lengths = tuple(int(x) for x in lengths)
    if not lengths:
        raise ValueError("need at least one factor")
    poset = chain_product(lengths)
    chains = [[(v,) for v in range(lengths[0] + 1)]]
    for length in lengths[1:]:
        new = []
        for ch in chains:
            for path in hook_paths(len(ch), length + 1):
                new.append([ch[i] + (j,) for i, j in path])
        chains = new
    return ChainDecomposition.from_element_lists(
        poset, [[poset.index[t] for t in ch] for ch in chains])


def search_scd(p: RankedPoset, timeout=DEFAULT_SEARCH_TIMEOUT,
               size_cap=SEARCH_SIZE_CAP):
    """Search for an SCD by extracting outermost symmetric chains first.

    Repeatedly grows a saturated chain from the lexicographically least
    uncovered element of the lowest uncovered rank up to the mirror rank,
    exploring upper covers in element order and backtracking on failure.
    Branches are pruned only when provably dead (level counts that cannot
    split symmetrically, or an uncovered element that no symmetric chain
    through uncovered elements can contain), so the lexicographically first
    decomposition is found and None is returned only after exhausting the
    space.  A timeout raises SearchTimeoutError instead; that says nothing
    about existence.
    """
    n = len(p)
    if n > size_cap:
        raise ResourceCapError(f"poset size {n} exceeds cap {size_cap}")
    top = p.top_rank
    remaining = list(p.level_sizes())

    def counts_feasible():
        for i in range(top // 2 + 1):
            if remaining[i] != remaining[top - i]:
                return False
            if i + 1 <= top - (i + 1) and remaining[i] > remaining[i + 1]:
                return False
        return True

    if not counts_feasible():
        return None

    by_rank = [[] for _ in range(top + 1)]
    order_desc = sorted(range(n), key=lambda x: -p.rank[x])
    for i in range(n):
        by_rank[p.rank[i]].append(i)
    for lst in by_rank:
        lst.sort()

    used = bytearray(n)
    deadline = None if timeout is None else time.monotonic() + timeout
    chains_out = []

    order_asc = list(reversed(order_desc))
    scratch_down = [0] * n
    ranks = p.rank
    lowers = p.lower
    uppers = p.upper

    def reachability():
        """Reachable-rank bounds through uncovered elements, or None if some
        uncovered element admits no symmetric chain: it needs a bottom rank
        b with b >= top - up[y], b >= down[y], and b <= min(r, top-r)."""
        down = scratch_down
        up = [0] * n
        for i in order_asc:
            if used[i]:
                continue
            d = ranks[i]
            for lo in lowers[i]:
                if not used[lo] and down[lo] < d:
                    d = down[lo]
            down[i] = d
        for i in order_desc:
            if used[i]:
                continue
            r = ranks[i]
            u = r
            for hi in uppers[i]:
                if not used[hi] and up[hi] > u:
                    u = up[hi]
            up[i] = u
            lo_bound = down[i]
            if top - u > lo_bound:
                lo_bound = top - u
            hi_bound = r if r <= top - r else top - r
            if lo_bound > hi_bound:
                return None
        return up

    def find_start():
        for r in range(top + 1):
            if remaining[r]:
                for e in by_rank[r]:
                    if not used[e]:
                        return e
        return None

    def solve():
        start = find_start()
        if start is None:
            return True
        up = reachability()
        if up is None:
            return False
        a = p.rank[start]
        target = top - a
        path = [start]

        def extend():
            if deadline is not None and time.monotonic() > deadline:
                raise SearchTimeoutError("SCD search timed out")
            cur = path[-1]
            if p.rank[cur] == target:
                for e in path:
                    used[e] = 1
                    remaining[p.rank[e]] -= 1
                chains_out.append(list(path))
                if counts_feasible() and solve():
                    return True
                chains_out.pop()
                for e in path:
                    used[e] = 0
                    remaining[p.rank[e]] += 1
                return False
            for u in p.upper[cur]:
                if not used[u] and up[u] >= target:
                    path.append(u)
                    if extend():
                        return True
                    path.pop()
            return False

        # The least uncovered element at the lowest uncovered rank must be
        # the bottom of a chain spanning [a, top-a]; trying all saturated
        # paths from it is exhaustive.
        return extend()

    limit = sys.getrecursionlimit()
    need = 4 * n + 1000
    if need > limit:
        sys.setrecursionlimit(need)
    try:
        found = solve()
    finally:
        if need > limit:
            sys.setrecursionlimit(limit)
    if not found:
        return None
    return ChainDecomposition.from_element_lists(p, chains_out)


@dataclass(frozen=True)
class GridQuotientScd:
    """SCD of (product of chains)/K together with the lookup from coordinate
    tuples to elements of the decomposed poset."""
    lengths: tuple
    spec: CycleSpec
    quotient: QuotientPoset
    scd: ChainDecomposition

    def element_of_tuple(self, tup) -> int:
        if self.quotient is None:
            return self.scd.host.index[tuple(tup)]
        return self.quotient.orbit_index_of_label(tuple(tup))


def grid_quotient_scd(lengths, spec: CycleSpec,
                      timeout=DEFAULT_SEARCH_TIMEOUT) -> GridQuotientScd:
    """SCD of a chain product modulo a cycle-power group permuting
    equal-length coordinates.

    A trivial group takes the direct hook-peeling path; otherwise the
    quotient is built and searched.  The search is guaranteed to succeed,
    so exhaustion raises InternalInconsistencyError rather than returning.
    """
    lengths = tuple(int(x) for x in lengths)
    if spec.degree != len(lengths):
        raise ValueError(
            f"group degree {spec.degree} != number of factors {len(lengths)}")
    gens = spec.generators()
    for g in gens:
        for r in range(1, len(lengths) + 1):
            if lengths[g(r) - 1] != lengths[r - 1]:
                raise ValueError(
                    "group permutes coordinates of unequal chain lengths")
    if all(g.is_identity() for g in gens):
        return GridQuotientScd(lengths, spec, None, chain_product_scd(lengths))
    base = chain_product(lengths)
    q = quotient(base, spec.group())
    dec = search_scd(q.poset, timeout=timeout)
    if dec is None:
        raise InternalInconsistencyError(
            f"no SCD found for chain product {lengths} modulo "
            f"{spec.describe()}; this contradicts the quotient guarantee")
    return GridQuotientScd(lengths, spec, q, dec)


def chain_product_quotient_scd(lengths, spec: CycleSpec,
                               timeout=DEFAULT_SEARCH_TIMEOUT) -> ChainDecomposition:
    """SCD of (chain product)/K for K generated by powers of disjoint cycles."""
    return grid_quotient_scd(lengths, spec, timeout=timeout).scd
