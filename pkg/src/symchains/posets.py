"""Finite ranked posets, chains, and symmetric chain decompositions.

Element labels are plain hashable values: subset bitmasks as ints, or
(nested) tuples for chain products and poset products.  Within one poset
all labels are mutually comparable, and the sorted label order is the
canonical element order.  Everything is immutable after construction.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import product as _cartesian

from .errors import ResourceCapError

BOOLEAN_GROUND_CAP = 24
PRODUCT_SIZE_CAP = 10 ** 6


class RankedPoset:
    """A finite graded poset with a unique minimum.

    Stores the cover relation explicitly; rank equals the length of a
    longest chain below each element.  Construction validates gradedness:
    exactly one element of rank 0, every cover raises rank by one, every
    element of positive rank has a lower cover, and every maximal element
    sits at ``top_rank``.  Together these force all maximal chains to run
    from rank 0 to ``top_rank``.
    """

    __slots__ = ("labels", "index", "rank", "covers", "upper", "lower",
                 "top_rank", "family", "ground_size", "lengths", "_cover_set",
                 "_desc")

    def __init__(self, labels, ranks, covers, family="generic",
                 ground_size=None, lengths=None, validate=True):
        self.labels = tuple(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate element labels")
        if len(self.labels) == 0:
            raise ValueError("poset must be nonempty")
        self.rank = tuple(ranks)
        self.covers = tuple(sorted(covers))
        self.top_rank = max(self.rank)
        n = len(self.labels)
        upper = [[] for _ in range(n)]
        lower = [[] for _ in range(n)]
        for lo, hi in self.covers:
            upper[lo].append(hi)
            lower[hi].append(lo)
        self.upper = tuple(tuple(sorted(u)) for u in upper)
        self.lower = tuple(tuple(sorted(lo)) for lo in lower)
        self.family = family
        self.ground_size = ground_size
        self.lengths = lengths
        self._cover_set = None
        self._desc = None
        if validate:
            self._validate()

    def _validate(self):
        n = len(self.labels)
        if len(self.rank) != n:
            raise ValueError("rank list length mismatch")
        bottoms = [i for i in range(n) if self.rank[i] == 0]
        if len(bottoms) != 1:
            raise ValueError("poset must have exactly one rank-0 element")
        for lo, hi in self.covers:
            if not (0 <= lo < n and 0 <= hi < n):
                raise ValueError("cover index out of range")
            if self.rank[hi] != self.rank[lo] + 1:
                raise ValueError(
                    f"cover ({lo},{hi}) does not raise rank by one")
        for i in range(n):
            if self.rank[i] > 0 and not self.lower[i]:
                raise ValueError("second minimal element: not graded")
            if self.rank[i] < self.top_rank and not self.upper[i]:
                raise ValueError(
                    "maximal element below top rank: not graded")

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return (f"RankedPoset({len(self.labels)} elements, "
                f"top_rank={self.top_rank}, family={self.family!r})")

    @property
    def cover_set(self):
        if self._cover_set is None:
            self._cover_set = frozenset(self.covers)
        return self._cover_set

    def descendant_masks(self):
        """Per element, the bitmask (over element indices) of its down-set."""
        if self._desc is None:
            desc = [0] * len(self.labels)
            for i in sorted(range(len(self.labels)), key=self.rank.__getitem__):
                m = 1 << i
                for lo in self.lower[i]:
                    m |= desc[lo]
                desc[i] = m
            self._desc = tuple(desc)
        return self._desc

    def leq(self, i, j):
        """True iff element i <= element j."""
        return (self.descendant_masks()[j] >> i) & 1 == 1

    def level_sizes(self):
        sizes = [0] * (self.top_rank + 1)
        for r in self.rank:
            sizes[r] += 1
        return tuple(sizes)


def boolean_lattice(ground_size: int) -> RankedPoset:
    """Boolean lattice of all subsets of {1..n}, encoded as bitmasks.

    Point i occupies bit i-1; rank is cardinality; element order is
    ascending bitmask value (so index == mask).
    """
    n = ground_size
    if n < 1:
        raise ValueError("ground size must be positive")
    if n > BOOLEAN_GROUND_CAP:
        raise ResourceCapError(
            f"boolean lattice ground size {n} exceeds cap {BOOLEAN_GROUND_CAP}")
    size = 1 << n
    labels = range(size)
    ranks = [m.bit_count() for m in labels]
    covers = []
    for m in range(size):
        for b in range(n):
            if not (m >> b) & 1:
                covers.append((m, m | (1 << b)))
    return RankedPoset(labels, ranks, covers, family="boolean",
                       ground_size=n, validate=False)


def chain_product(lengths) -> RankedPoset:
    """Product of chains: tuples a with 0 <= a_r <= lengths[r], ordered
    componentwise, ranked by coordinate sum."""
    lengths = tuple(int(x) for x in lengths)
    if any(x < 0 for x in lengths):
        raise ValueError("chain lengths must be nonnegative")
    size = 1
    for x in lengths:
        size *= x + 1
    if size > PRODUCT_SIZE_CAP:
        raise ResourceCapError(
            f"chain product size {size} exceeds cap {PRODUCT_SIZE_CAP}")
    labels = list(_cartesian(*(range(x + 1) for x in lengths)))
    index = {lab: i for i, lab in enumerate(labels)}
    ranks = [sum(lab) for lab in labels]
    covers = []
    for i, lab in enumerate(labels):
        for r, val in enumerate(lab):
            if val < lengths[r]:
                covers.append((i, index[lab[:r] + (val + 1,) + lab[r + 1:]]))
    return RankedPoset(labels, ranks, covers, family="chain_product",
                       lengths=lengths, validate=False)


def poset_product(factors) -> RankedPoset:
    """Cartesian product of ranked posets; labels are tuples of factor labels."""
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    size = 1
    for f in factors:
        size *= len(f)
    if size > PRODUCT_SIZE_CAP:
        raise ResourceCapError(
            f"poset product size {size} exceeds cap {PRODUCT_SIZE_CAP}")
    labels = list(_cartesian(*(f.labels for f in factors)))
    index = {lab: i for i, lab in enumerate(labels)}
    idx_tuples = list(_cartesian(*(range(len(f)) for f in factors)))
    ranks = [sum(f.rank[t[r]] for r, f in enumerate(factors))
             for t in idx_tuples]
    covers = []
    for lab, t in zip(labels, idx_tuples):
        i = index[lab]
        for r, f in enumerate(factors):
            for hi in f.upper[t[r]]:
                covers.append(
                    (i, index[lab[:r] + (f.labels[hi],) + lab[r + 1:]]))
    return RankedPoset(labels, ranks, covers, family="product",
                       validate=False)


def power_poset(base: RankedPoset, n: int) -> RankedPoset:
    return poset_product([base] * n)


@dataclass(frozen=True)
class Chain:
    """A rank-ascending sequence of element indices of some host poset."""
    elements: tuple

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class ChainDecomposition:
    """A partition of a host poset into chains."""
    host: RankedPoset
    chains: tuple

    @classmethod
    def from_element_lists(cls, host, lists):
        """Build with canonical ordering: each chain sorted by rank, chains
        sorted by (bottom rank, bottom label)."""
        chains = []
        for els in lists:
            els = sorted(els, key=lambda i: host.rank[i])
            chains.append(Chain(tuple(els)))
        chains.sort(key=lambda c: (host.rank[c.elements[0]],
                                   host.labels[c.elements[0]]))
        return cls(host, tuple(chains))

    def __len__(self):
        return len(self.chains)


def is_symmetric_saturated_chain(p: RankedPoset, c: Chain) -> bool:
    """True iff consecutive elements are covers in p and the end ranks sum
    to p.top_rank."""
    els = c.elements
    if not els:
        raise ValueError("empty chain")
    n = len(p)
    for e in els:
        if not (isinstance(e, int) and 0 <= e < n):
            raise ValueError(f"chain element {e!r} is not an element of the poset")
    cs = p.cover_set
    for a, b in zip(els, els[1:]):
        if (a, b) not in cs:
            return False
    return p.rank[els[0]] + p.rank[els[-1]] == p.top_rank


@dataclass(frozen=True)
class ChainCheck:
    chain: int
    saturated: bool
    symmetric: bool

    @property
    def ok(self):
        return self.saturated and self.symmetric


@dataclass(frozen=True)
class ScdReport:
    """Outcome of verifying a chain decomposition against its host."""
    ok: bool
    chain_checks: tuple
    partition_ok: bool
    missing: tuple
    duplicated: tuple

    def failures(self):
        lines = []
        for cc in self.chain_checks:
            if not cc.saturated:
                lines.append(f"chain {cc.chain}: not saturated")
            if not cc.symmetric:
                lines.append(f"chain {cc.chain}: not symmetric")
        if self.missing:
            lines.append(f"partition: {len(self.missing)} element(s) uncovered")
        if self.duplicated:
            lines.append(f"partition: {len(self.duplicated)} element(s) covered twice")
        return lines

    def summary(self):
        if self.ok:
            return f"pass ({len(self.chain_checks)} chains)"
        return "FAIL: " + "; ".join(self.failures())


def verify_scd(p: RankedPoset, d: ChainDecomposition) -> ScdReport:
    """Check that d is a partition of p into symmetric saturated chains.

    Failures are report entries, not exceptions; only a decomposition whose
    host is a different poset is rejected outright.
    """
    if d.host is not p and (d.host.labels != p.labels or
                            d.host.covers != p.covers or
                            d.host.rank != p.rank):
        raise ValueError("decomposition host differs from the given poset")
    checks = []
    seen = [0] * len(p)
    cs = p.cover_set
    for ci, chain in enumerate(d.chains):
        els = chain.elements
        sat = len(els) > 0
        for a, b in zip(els, els[1:]):
            if (a, b) not in cs:
                sat = False
                break
        sym = (len(els) > 0 and
               p.rank[els[0]] + p.rank[els[-1]] == p.top_rank)
        checks.append(ChainCheck(ci, sat, sym))
        for e in els:
            if 0 <= e < len(p):
                seen[e] += 1
    missing = tuple(i for i, c in enumerate(seen) if c == 0)
    duplicated = tuple(i for i, c in enumerate(seen) if c > 1)
    partition_ok = not missing and not duplicated
    ok = partition_ok and all(c.ok for c in checks)
    return ScdReport(ok, tuple(checks), partition_ok, missing, duplicated)


def partition_sum_scd(host: RankedPoset, parts) -> ChainDecomposition:
    """Assemble an SCD of host from SCDs of saturated symmetric parts.

    ``parts`` is a sequence of (part_poset, decomposition) pairs where each
    part poset's labels are host labels.  Each part must be saturated in the
    host, have unique minimum and maximum with host ranks summing to
    host.top_rank, rank-align with the host, and carry a verified SCD.
    """
    seen = [0] * len(host)
    all_chains = []
    for pi, (part, dec) in enumerate(parts):
        try:
            hidx = [host.index[lab] for lab in part.labels]
        except KeyError as exc:
            raise ValueError(f"part {pi}: element {exc.args[0]!r} not in host")
        cs = host.cover_set
        for lo, hi in part.covers:
            if (hidx[lo], hidx[hi]) not in cs:
                raise ValueError(f"part {pi} is not saturated in the host")
        maxima = [i for i in range(len(part)) if not part.upper[i]]
        minima = [i for i in range(len(part)) if not part.lower[i]]
        if len(maxima) != 1 or len(minima) != 1:
            raise ValueError(f"part {pi} lacks a unique minimum or maximum")
        base_rank = host.rank[hidx[minima[0]]]
        for i in range(len(part)):
            if host.rank[hidx[i]] != base_rank + part.rank[i]:
                raise ValueError(f"part {pi} ranks do not align with the host")
        if base_rank + host.rank[hidx[maxima[0]]] != host.top_rank:
            raise ValueError(f"part {pi} is not symmetric in the host")
        rep = verify_scd(part, dec)
        if not rep.ok:
            raise ValueError(f"part {pi} decomposition fails: {rep.summary()}")
        for chain in dec.chains:
            els = [hidx[e] for e in chain.elements]
            all_chains.append(els)
            for e in els:
                seen[e] += 1
    if any(c != 1 for c in seen):
        raise ValueError("parts do not partition the host")
    result = ChainDecomposition.from_element_lists(host, all_chains)
    rep = verify_scd(host, result)
    if not rep.ok:
        raise ValueError(f"assembled decomposition fails: {rep.summary()}")
    return result


# --- JSON formats -----------------------------------------------------------
#
# Poset:          {"elements": [label...], "covers": [[lo, hi]...], "rank": [int...]}
# Decomposition:  {"poset_hash": str, "chains": [[element index...]...]}
#
# Labels serialize as ints (subset bitmasks) or nested lists (tuples).

def label_to_json(label):
    if isinstance(label, tuple):
        return [label_to_json(x) for x in label]
    return label


def label_from_json(obj):
    if isinstance(obj, list):
        return tuple(label_from_json(x) for x in obj)
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ValueError(f"bad element label: {obj!r}")
    return obj


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def poset_to_json(p: RankedPoset) -> dict:
    return {
        "elements": [label_to_json(lab) for lab in p.labels],
        "covers": [[lo, hi] for lo, hi in p.covers],
        "rank": list(p.rank),
    }


def poset_hash(p: RankedPoset) -> str:
    return hashlib.sha256(canonical_json(poset_to_json(p)).encode()).hexdigest()


def poset_from_json(obj) -> RankedPoset:
    if not isinstance(obj, dict):
        raise ValueError("poset JSON must be an object")
    for key in ("elements", "covers", "rank"):
        if key not in obj or not isinstance(obj[key], list):
            raise ValueError(f"poset JSON missing list field {key!r}")
    labels = [label_from_json(x) for x in obj["elements"]]
    ranks = obj["rank"]
    if not all(isinstance(r, int) and not isinstance(r, bool) and r >= 0
               for r in ranks):
        raise ValueError("poset ranks must be nonnegative integers")
    covers = []
    for pair in obj["covers"]:
        if (not isinstance(pair, list) or len(pair) != 2 or
                not all(isinstance(x, int) for x in pair)):
            raise ValueError(f"bad cover pair: {pair!r}")
        covers.append((pair[0], pair[1]))
    return RankedPoset(labels, ranks, covers)


def decomposition_to_json(d: ChainDecomposition) -> dict:
    return {
        "poset_hash": poset_hash(d.host),
        "chains": [list(c.elements) for c in d.chains],
    }


def decomposition_from_json(obj, host: RankedPoset) -> ChainDecomposition:
    if not isinstance(obj, dict):
        raise ValueError("decomposition JSON must be an object")
    if not isinstance(obj.get("poset_hash"), str):
        raise ValueError("decomposition JSON missing poset_hash")
    if obj["poset_hash"] != poset_hash(host):
        raise ValueError("decomposition poset_hash does not match the poset")
    chains = obj.get("chains")
    if not isinstance(chains, list):
        raise ValueError("decomposition JSON missing chains")
    out = []
    for ch in chains:
        if (not isinstance(ch, list) or
                not all(isinstance(e, int) and 0 <= e < len(host) for e in ch)):
            raise ValueError(f"bad chain: {ch!r}")
        out.append(Chain(tuple(ch)))
    return ChainDecomposition(host, tuple(out))
