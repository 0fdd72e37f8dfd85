"""Orbit posets of permutation-group actions on ranked posets.

The quotient order is [x] <= [y] iff some representatives compare in the
base.  Construction derives covers from rank-adjacent comparability (the
image of the base cover relation), then validates that the transitive
closure of those covers recovers the full quotient order and that the
result is graded with orbit rank equal to base rank.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perms import GeneratedGroup, Permutation, act_on_tuple
from .posets import RankedPoset, boolean_lattice

__all__ = ["QuotientPoset", "quotient", "subset_action", "coordinate_action",
           "BlockFactorization", "base_quotient_factorization"]


def subset_action(perm: Permutation, mask: int) -> int:
    return perm.apply_mask(mask)


def coordinate_action(perm: Permutation, tup) -> tuple:
    return act_on_tuple(perm, tup)


def _infer_action(p: RankedPoset, g: GeneratedGroup):
    first = p.labels[0]
    if isinstance(first, int):
        if p.ground_size is not None and g.ground_size != p.ground_size:
            raise ValueError(
                f"group degree {g.ground_size} != ground size {p.ground_size}")
        return subset_action
    if isinstance(first, tuple):
        if g.ground_size != len(first):
            raise ValueError(
                f"group degree {g.ground_size} != coordinate count {len(first)}")
        return coordinate_action
    raise ValueError("cannot infer an action for this poset; pass one explicitly")


@dataclass(frozen=True)
class QuotientPoset:
    """Orbit poset of a group action, with orbit data.

    ``orbits[i]`` lists base element indices; ``reps[i]`` is the least of
    them (the lexicographically least label, since elements are stored in
    label order); ``orbit_of[j]`` maps base index to orbit index; ``poset``
    is the quotient as a RankedPoset labelled by representative labels.
    """
    base: RankedPoset
    group: GeneratedGroup
    orbits: tuple
    reps: tuple
    orbit_of: tuple
    poset: RankedPoset

    def orbit_index_of_label(self, label) -> int:
        return self.orbit_of[self.base.index[label]]

    def members(self, i):
        return [self.base.labels[j] for j in self.orbits[i]]


def quotient(p: RankedPoset, g: GeneratedGroup, action=None) -> QuotientPoset:
    """Quotient of p by a group of automorphisms.

    Every generator is checked to map covers to covers.  Orbit
    representatives are the least elements in canonical label order.
    """
    if action is None:
        action = _infer_action(p, g)
    n = len(p)

    # Generator images as index maps; doubles as the automorphism check.
    gen_maps = []
    for gen in g.generators:
        img = []
        for lab in p.labels:
            out = action(gen, lab)
            j = p.index.get(out)
            if j is None:
                raise ValueError(
                    f"generator {gen!r} does not preserve the element set")
            img.append(j)
        cs = p.cover_set
        for lo, hi in p.covers:
            if (img[lo], img[hi]) not in cs:
                raise ValueError(f"generator {gen!r} is not an automorphism")
        gen_maps.append(img)

    orbit_of = [-1] * n
    orbits = []
    for start in range(n):
        if orbit_of[start] >= 0:
            continue
        oid = len(orbits)
        members = [start]
        orbit_of[start] = oid
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for img in gen_maps:
                    y = img[x]
                    if orbit_of[y] < 0:
                        orbit_of[y] = oid
                        members.append(y)
                        nxt.append(y)
            frontier = nxt
        orbits.append(tuple(sorted(members)))

    reps = tuple(o[0] for o in orbits)
    for o in orbits:
        r = p.rank[o[0]]
        if any(p.rank[x] != r for x in o):
            raise ValueError("orbit mixes ranks; action is not rank-preserving")

    if not g.generators:
        # Trivial action: the quotient is an identical copy.
        qposet = RankedPoset(p.labels, p.rank, p.covers, family="quotient",
                             ground_size=p.ground_size, lengths=p.lengths,
                             validate=False)
        return QuotientPoset(p, g, tuple((i,) for i in range(n)),
                             tuple(range(n)), tuple(range(n)), qposet)

    m = len(orbits)
    qcovers = sorted({(orbit_of[lo], orbit_of[hi]) for lo, hi in p.covers})
    qlabels = [p.labels[r] for r in reps]
    qranks = [p.rank[r] for r in reps]
    qposet = RankedPoset(qlabels, qranks, qcovers, family="quotient",
                         ground_size=p.ground_size, lengths=p.lengths)

    # The derived covers must generate the true quotient order: [x] <= [y]
    # iff some member of [x] lies below the representative of [y].
    closure = [0] * m
    for j in sorted(range(m), key=qranks.__getitem__):
        acc = 1 << j
        for lo in qposet.lower[j]:
            acc |= closure[lo]
        closure[j] = acc
    base_desc = p.descendant_masks()
    for j in range(m):
        true_mask = 0
        down = base_desc[reps[j]]
        while down:
            low = down & -down
            true_mask |= 1 << orbit_of[low.bit_length() - 1]
            down ^= low
        if true_mask != closure[j]:
            raise ValueError(
                "quotient covers do not generate the quotient order "
                "(quotient is not graded)")

    return QuotientPoset(p, g, tuple(orbits), reps, tuple(orbit_of), qposet)


# --- base-group factorization -----------------------------------------------

def embed_mask(local_mask: int, points) -> int:
    """Place a mask over local points 1..k at the given global points."""
    out = 0
    while local_mask:
        low = local_mask & -local_mask
        out |= 1 << (points[low.bit_length() - 1] - 1)
        local_mask ^= low
    return out


def restrict_mask(mask: int, points) -> int:
    """Extract the local mask over the given global points (in order)."""
    out = 0
    for i, pt in enumerate(points):
        if (mask >> (pt - 1)) & 1:
            out |= 1 << i
    return out


def embed_permutation(perm: Permutation, points, degree) -> Permutation:
    """A permutation of local points 1..k acting on the given global points."""
    images = list(range(1, degree + 1))
    for i in range(1, perm.degree + 1):
        images[points[i - 1] - 1] = points[perm(i) - 1]
    return Permutation(images)


@dataclass(frozen=True)
class BlockFactorization:
    """The isomorphism between B_n modulo the base group K^t and the t-fold
    product of block quotients B_k/K.

    ``split`` sends a base-group orbit to the tuple of block-orbit indices;
    ``join`` inverts it.
    """
    k: int
    t: int
    blocks: tuple
    block_quotient: QuotientPoset
    base_group: GeneratedGroup
    whole: QuotientPoset

    def split(self, orbit_index: int) -> tuple:
        mask = self.whole.poset.labels[orbit_index]
        return tuple(
            self.block_quotient.orbit_of[restrict_mask(mask, blk)]
            for blk in self.blocks)

    def join(self, block_orbits) -> int:
        mask = 0
        for blk, q in zip(self.blocks, block_orbits):
            mask |= embed_mask(self.block_quotient.poset.labels[q], blk)
        return self.whole.orbit_of[mask]

    def check_isomorphism(self):
        """Verify split is a bijection preserving order both ways (desk scale)."""
        m = len(self.whole.poset)
        images = [self.split(i) for i in range(m)]
        if len(set(images)) != m:
            raise AssertionError("split is not injective")
        expected = len(self.block_quotient.poset) ** self.t
        if m != expected:
            raise AssertionError("orbit counts differ from the product size")
        for i in range(m):
            if self.join(images[i]) != i:
                raise AssertionError("join does not invert split")
        bq = self.block_quotient.poset
        for i in range(m):
            for j in range(m):
                lhs = self.whole.poset.leq(i, j)
                rhs = all(bq.leq(a, b) for a, b in zip(images[i], images[j]))
                if lhs != rhs:
                    raise AssertionError(
                        f"order not preserved between orbits {i} and {j}")


def base_quotient_factorization(k: int, t: int,
                                K: GeneratedGroup) -> BlockFactorization:
    """Factor B_{kt} modulo the base group (one copy of K per block) into t
    copies of B_k/K, with the splitting isomorphism."""
    if K.ground_size != k:
        raise ValueError("K must act on [k]")
    n = k * t
    from .perms import default_blocks
    blocks = default_blocks(k, t)
    block_quotient = quotient(boolean_lattice(k), K)
    gens = [embed_permutation(g, blk, n)
            for blk in blocks for g in K.generators]
    base_group = GeneratedGroup(n, gens)
    whole = quotient(boolean_lattice(n), base_group)
    return BlockFactorization(k, t, blocks, block_quotient, base_group, whole)
