"""Permutations of {1..m}, finitely generated groups, wreath products,
orbits and stabilizers, and cycle-power generator specifications.

Everything here is closure-by-multiplication at desk scale; there is no
polynomial-time group machinery.  Points are 1-based throughout, matching
cycle notation; bit positions for subset actions are point-1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import product as _cartesian

from .errors import ResourceCapError

DEFAULT_CLOSURE_CAP = 10 ** 6
TUPLE_ENUM_CAP = 10 ** 6


class Permutation:
    """A bijection of {1..m}, stored as the tuple of images of 1..m."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        m = len(images)
        if sorted(images) != list(range(1, m + 1)):
            raise ValueError(f"not a bijection of 1..{m}: {images}")
        self.images = images

    @classmethod
    def identity(cls, m):
        return cls(range(1, m + 1))

    @classmethod
    def from_cycles(cls, m, cycles):
        images = list(range(1, m + 1))
        seen = set()
        for cyc in cycles:
            for p in cyc:
                if not (1 <= p <= m):
                    raise ValueError(f"point {p} outside 1..{m}")
                if p in seen:
                    raise ValueError(f"point {p} repeated in cycle notation")
                seen.add(p)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, x):
        return self.images[x - 1]

    def __mul__(self, other):
        """(self * other)(x) = self(other(x))."""
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        im = self.images
        return Permutation(im[y - 1] for y in other.images)

    def inverse(self):
        inv = [0] * self.degree
        for x, y in enumerate(self.images, start=1):
            inv[y - 1] = x
        return Permutation(inv)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self):
        return all(y == x for x, y in enumerate(self.images, start=1))

    def cycles(self):
        """Nontrivial cycles, each rotated to start at its least point,
        sorted by least point."""
        seen = [False] * self.degree
        out = []
        for x in range(1, self.degree + 1):
            if seen[x - 1] or self.images[x - 1] == x:
                continue
            cyc = [x]
            seen[x - 1] = True
            y = self.images[x - 1]
            while y != x:
                cyc.append(y)
                seen[y - 1] = True
                y = self.images[y - 1]
            out.append(tuple(cyc))
        return out

    def order(self):
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def moved_points(self):
        return tuple(x for x in range(1, self.degree + 1)
                     if self.images[x - 1] != x)

    def apply_mask(self, mask):
        """Image of a subset bitmask (bit p-1 means point p is present)."""
        out = 0
        im = self.images
        while mask:
            low = mask & -mask
            out |= 1 << (im[low.bit_length() - 1] - 1)
            mask ^= low
        return out

    def extended(self, m):
        if m < self.degree:
            raise ValueError("cannot shrink a permutation")
        return Permutation(self.images + tuple(range(self.degree + 1, m + 1)))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        return f"Permutation({format_permutation(self)!r})"


def act_on_tuple(perm: Permutation, tup):
    """Coordinate action: result_r = tup_{perm^-1(r)}."""
    if len(tup) != perm.degree:
        raise ValueError(
            f"tuple length {len(tup)} != permutation degree {perm.degree}")
    inv = perm.inverse().images
    return tuple(tup[inv[r] - 1] for r in range(len(tup)))


# --- cycle notation ---------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutations(text, degree=None):
    """Parse generators in cycle notation, e.g. "(1 2 3)(4 5 6), (1 4)".

    Generators are separated by top-level commas; points may be separated
    by whitespace or commas inside parentheses; "()" is the identity.
    Returns (list of Permutation, degree).
    """
    chunks = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced parentheses in cycle notation")
        if ch == "," and depth == 0:
            chunks.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError("unbalanced parentheses in cycle notation")
    chunks.append("".join(cur))

    gens_cycles = []
    maxpoint = 0
    for chunk in chunks:
        chunk = chunk.strip()
        if not chunk:
            continue
        rest = _CYCLE_RE.sub("", chunk).strip()
        if rest:
            raise ValueError(f"unparseable cycle notation: {chunk!r}")
        cycles = []
        for body in _CYCLE_RE.findall(chunk):
            pts = [p for p in re.split(r"[\s,]+", body.strip()) if p]
            if not pts:
                continue
            try:
                cyc = tuple(int(p) for p in pts)
            except ValueError:
                raise ValueError(f"bad point in cycle: {body!r}")
            if any(p < 1 for p in cyc):
                raise ValueError("points must be positive")
            maxpoint = max(maxpoint, max(cyc))
            cycles.append(cyc)
        gens_cycles.append(cycles)

    m = degree if degree is not None else max(maxpoint, 1)
    if maxpoint > m:
        raise ValueError(f"point {maxpoint} exceeds degree {m}")
    return [Permutation.from_cycles(m, cycles) for cycles in gens_cycles], m


def format_permutation(perm: Permutation) -> str:
    cycles = perm.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)


def format_generators(perms) -> str:
    return ", ".join(format_permutation(p) for p in perms)


# --- generated groups -------------------------------------------------------

class GeneratedGroup:
    """A permutation group given by generators; elements computed lazily by
    breadth-first closure and cached."""

    def __init__(self, ground_size, generators, cycle_spec=None):
        self.ground_size = ground_size
        gens = []
        for g in generators:
            if g.degree != ground_size:
                raise ValueError("generator degree mismatch")
            gens.append(g)
        self.generators = tuple(gens)
        self.cycle_spec = cycle_spec
        self._elements = None

    def elements(self, cap=DEFAULT_CLOSURE_CAP):
        if self._elements is None:
            self._elements = close_group(self, cap)
        return self._elements

    @property
    def order(self):
        return len(self.elements())

    def __contains__(self, perm):
        return perm in set(self.elements())

    def __repr__(self):
        return (f"GeneratedGroup(ground={self.ground_size}, "
                f"gens=[{format_generators(self.generators)}])")


def close_group(g: GeneratedGroup, cap=DEFAULT_CLOSURE_CAP):
    """All distinct products of generators, sorted; raises on cap overflow."""
    if cap < 1:
        raise ValueError("cap must be positive")
    ident = Permutation.identity(g.ground_size)
    els = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for gen in g.generators:
                b = gen * a
                if b not in els:
                    els.add(b)
                    new.append(b)
                    if len(els) > cap:
                        raise ResourceCapError(
                            f"group closure exceeds cap {cap}")
        frontier = new
    out = sorted(els)
    g._elements = out
    return out


def trivial_group(ground_size) -> GeneratedGroup:
    return GeneratedGroup(ground_size, [],
                          cycle_spec=CycleSpec(ground_size, ()))


def symmetric_group(k) -> GeneratedGroup:
    if k < 2:
        return trivial_group(k)
    gens = [Permutation.from_cycles(k, [(1, 2)])]
    if k > 2:
        gens.append(Permutation.from_cycles(k, [tuple(range(1, k + 1))]))
    return GeneratedGroup(k, gens)


def alternating_group(k) -> GeneratedGroup:
    if k < 3:
        return trivial_group(k)
    gens = [Permutation.from_cycles(k, [(i, i + 1, i + 2)])
            for i in range(1, k - 1)]
    return GeneratedGroup(k, gens)


# --- cycle-power specifications ---------------------------------------------

@dataclass(frozen=True)
class CycleSpec:
    """Generators presented as powers of pairwise disjoint cycles.

    ``powers`` is a tuple of (cycle, power) pairs; the generator it
    describes is the cycle raised to the power.  An empty cycle denotes an
    identity generator.
    """
    degree: int
    powers: tuple

    def __post_init__(self):
        seen = set()
        for cyc, power in self.powers:
            if power < 1:
                raise ValueError("cycle power must be positive")
            for p in cyc:
                if not (1 <= p <= self.degree):
                    raise ValueError(f"point {p} outside 1..{self.degree}")
                if p in seen:
                    raise ValueError("cycle supports are not disjoint")
                seen.add(p)

    @classmethod
    def trivial(cls, degree):
        return cls(degree, ())

    @classmethod
    def full_cycle(cls, degree, power=1):
        if degree < 2:
            return cls.trivial(degree)
        return cls(degree, (((tuple(range(1, degree + 1))), power),))

    @classmethod
    def parse(cls, text, degree):
        """Parse cycle notation and insist the generators are verbatim
        powers of disjoint cycles."""
        gens, m = parse_permutations(text, degree)
        spec = is_powers_of_disjoint_cycles(gens, degree=m)
        if spec is None:
            raise ValueError(
                f"generators are not powers of disjoint cycles: {text!r}")
        return spec

    def generators(self):
        out = []
        for cyc, power in self.powers:
            base = Permutation.from_cycles(self.degree, [cyc] if cyc else [])
            out.append(base ** power)
        return out

    def group(self) -> GeneratedGroup:
        return GeneratedGroup(self.degree, self.generators(), cycle_spec=self)

    def describe(self) -> str:
        if not self.powers:
            return "()"
        parts = []
        for cyc, power in self.powers:
            body = "(" + " ".join(str(p) for p in cyc) + ")"
            parts.append(body if power == 1 else f"{body}^{power}")
        return ", ".join(parts)


def is_powers_of_disjoint_cycles(gens, degree=None):
    """Witness that each generator is a power of a single cycle, the cycles
    pairwise disjoint; None if the list (taken verbatim) admits no witness.

    A generator that is a product of d disjoint equal-length cycles is the
    d-th power of the cycle interleaving them; identity generators get an
    empty witness cycle.
    """
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("need a degree for an empty generator list")
        degree = gens[0].degree
    witnesses = []
    used = set()
    for g in gens:
        if g.degree != degree:
            raise ValueError("generator degree mismatch")
        cycles = g.cycles()
        if not cycles:
            witnesses.append(((), 1))
            continue
        length = len(cycles[0])
        if any(len(c) != length for c in cycles):
            return None
        d = len(cycles)
        # Interleave the cycles: x_1 x_2 .. x_d g(x_1) g(x_2) .. ; its d-th
        # power is exactly g.
        big = tuple(c[j] for j in range(length) for c in cycles)
        support = set(big)
        if support & used:
            return None
        used |= support
        witness = Permutation.from_cycles(degree, [big]) ** d
        if witness != g:
            return None
        witnesses.append((big, d))
    return CycleSpec(degree, tuple(witnesses))


# --- wreath products --------------------------------------------------------

def default_blocks(k, t):
    """Standard block layout: block r holds points (r-1)k+1 .. rk."""
    return tuple(tuple((r - 1) * k + i for i in range(1, k + 1))
                 for r in range(1, t + 1))


def wreath_product(K: GeneratedGroup, T: GeneratedGroup,
                   blocks=None) -> GeneratedGroup:
    """The wreath product of K (on [k]) by T (on [t]) acting on k*t points
    arranged in t blocks of k.

    Generators: a copy of each K-generator inside one block per T-orbit of
    blocks, plus each T-generator permuting whole blocks.  The generated
    group is the full wreath product (order |K|^t * |T|).
    """
    k, t = K.ground_size, T.ground_size
    if blocks is None:
        blocks = default_blocks(k, t)
    blocks = tuple(tuple(b) for b in blocks)
    if len(blocks) != t or any(len(b) != k for b in blocks):
        raise ValueError("blocks must be t lists of k points")
    points = [p for b in blocks for p in b]
    n = len(points)
    if sorted(points) != list(range(1, n + 1)):
        raise ValueError("blocks must partition 1..k*t")

    # One base-copy per T-orbit of block positions (a single copy suffices
    # only when T is transitive).
    reps = []
    unseen = set(range(1, t + 1))
    while unseen:
        r0 = min(unseen)
        reps.append(r0)
        orbit = {r0}
        frontier = [r0]
        while frontier:
            nxt = []
            for r in frontier:
                for tau in T.generators:
                    r2 = tau(r)
                    if r2 not in orbit:
                        orbit.add(r2)
                        nxt.append(r2)
            frontier = nxt
        unseen -= orbit

    gens = []
    for r in reps:
        block = blocks[r - 1]
        for rho in K.generators:
            images = list(range(1, n + 1))
            for i in range(1, k + 1):
                images[block[i - 1] - 1] = block[rho(i) - 1]
            gens.append(Permutation(images))
    for tau in T.generators:
        images = list(range(1, n + 1))
        for r in range(1, t + 1):
            dest = blocks[tau(r) - 1]
            src = blocks[r - 1]
            for i in range(k):
                images[src[i] - 1] = dest[i]
        gens.append(Permutation(images))
    return GeneratedGroup(n, gens)


# --- orbits and stabilizers -------------------------------------------------

def orbit_of_tuple(T: GeneratedGroup, tup):
    """The T-orbit of a tuple under the coordinate action, sorted."""
    tup = tuple(tup)
    orbit = {tup}
    frontier = [tup]
    while frontier:
        nxt = []
        for cur in frontier:
            for gen in T.generators:
                img = act_on_tuple(gen, cur)
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(orbit)


def orbit_reps_lex(T: GeneratedGroup, s: int, t: int, cap=TUPLE_ENUM_CAP):
    """Lexicographically least representatives of the T-orbits on [s]^t,
    in lexicographic order."""
    if s ** t > cap:
        raise ResourceCapError(f"tuple space size {s ** t} exceeds cap {cap}")
    if T.ground_size != t:
        raise ValueError("group degree differs from tuple length")
    seen = set()
    reps = []
    for tup in _cartesian(range(1, s + 1), repeat=t):
        if tup in seen:
            continue
        reps.append(tup)
        seen.update(orbit_of_tuple(T, tup))
    return reps


def stabilizer_brute(T: GeneratedGroup, tup) -> GeneratedGroup:
    """The stabilizer of a tuple, found by filtering all group elements;
    returned with its full element set as generators."""
    tup = tuple(tup)
    els = [g for g in T.elements() if act_on_tuple(g, tup) == tup]
    return GeneratedGroup(T.ground_size, els)


def stabilizer_cyclic_powers(T: GeneratedGroup, tup) -> GeneratedGroup:
    """The stabilizer of a tuple for a group generated by powers of disjoint
    cycles: each generator sigma^r contributes sigma^(r*d) with d minimal
    such that the power fixes the tuple."""
    spec = T.cycle_spec
    if spec is None:
        spec = is_powers_of_disjoint_cycles(T.generators,
                                            degree=T.ground_size)
    if spec is None:
        raise ValueError(
            "group generators are not powers of disjoint cycles")
    tup = tuple(tup)
    new_powers = []
    for cyc, power in spec.powers:
        base = Permutation.from_cycles(spec.degree, [cyc] if cyc else [])
        gen = base ** power
        gen_order = gen.order()
        current = gen
        d = 1
        while d <= gen_order:
            if act_on_tuple(current, tup) == tup:
                break
            current = current * gen
            d += 1
        # d <= gen_order always: gen^order is the identity, which fixes tup.
        new_powers.append((cyc, power * d))
    new_spec = CycleSpec(spec.degree, tuple(new_powers))
    return new_spec.group()
