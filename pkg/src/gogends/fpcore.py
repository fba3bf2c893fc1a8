"""Finite p-group arithmetic: tables, subgroups, homomorphisms.

Groups live entirely as multiplication tables on dense element indices
0..order-1 with index 0 the identity; every element carries a BFS normal
form word in the distinguished generators.  The closed-form catalog
(cyclic, elementary abelian, dihedral/quaternion of order 8, Heisenberg,
direct products) covers every group the workbench needs; orders are
capped at 256.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_ORDER = 256


class GroupError(ValueError):
    """Malformed group data or invariant violation."""


class ImagesInconsistent(GroupError):
    """Generator images do not extend to a homomorphism."""


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class FiniteGroup:
    """Finite p-group given by its multiplication table.

    ``mult[a, b]`` is the index of the product; ``words[x]`` is a tuple of
    generator positions whose left-to-right product equals element x.
    """

    __slots__ = ("name", "prime", "order", "mult", "inverses", "generators", "words", "spec", "_orders", "_hash")

    def __init__(self, name: str, mult, generators, prime: int, check: bool = True):
        table = np.ascontiguousarray(np.asarray(mult, dtype=np.uint16))
        n = table.shape[0]
        if table.shape != (n, n):
            raise GroupError("multiplication table must be square")
        if n == 0 or n > MAX_ORDER:
            raise GroupError(f"order must be in 1..{MAX_ORDER}, got {n}")
        self.name = name
        self.prime = prime
        self.order = n
        self.mult = table
        self.generators = [int(g) for g in generators]
        if check:
            self._validate_table()
        self.inverses = self._compute_inverses()
        self.words = self._bfs_words()
        self.spec = None  # JSON-serialisable construction recipe, if known
        self._orders = None
        self._hash = None

    def _validate_table(self):
        n, table, p = self.order, self.mult, self.prime
        if table.size and int(table.max()) >= n:
            raise GroupError("table entry out of range")
        if not _is_prime_power(n, p):
            raise GroupError(f"order {n} is not a power of {p}")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise GroupError("index 0 must be the identity")
        lhs = table[table]            # lhs[a,b,c] = (a*b)*c
        rhs = table[:, table]         # rhs[a,b,c] = a*(b*c)
        if not np.array_equal(lhs, rhs):
            raise GroupError("multiplication table is not associative")
        for g in self.generators:
            if not 0 <= int(g) < n:
                raise GroupError("generator index out of range")

    def _compute_inverses(self) -> np.ndarray:
        inv = np.empty(self.order, dtype=np.uint16)
        for x in range(self.order):
            hits = np.nonzero(self.mult[x] == 0)[0]
            if hits.size != 1 or self.mult[int(hits[0]), x] != 0:
                raise GroupError(f"element {x} lacks a two-sided inverse")
            inv[x] = hits[0]
        return inv

    def _bfs_words(self) -> list[tuple[int, ...]]:
        words: list[tuple[int, ...] | None] = [None] * self.order
        words[0] = ()
        queue = [0]
        while queue:
            x = queue.pop(0)
            for gi, g in enumerate(self.generators):
                y = int(self.mult[x, g])
                if words[y] is None:
                    words[y] = words[x] + (gi,)
                    queue.append(y)
        if any(w is None for w in words):
            raise GroupError("generators do not generate the group")
        return words  # type: ignore[return-value]

    # -- basic arithmetic ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, x: int) -> int:
        if self._orders is None:
            orders = []
            for a in range(self.order):
                y, k = a, 1
                while y != 0:
                    y = int(self.mult[y, a])
                    k += 1
                orders.append(k)
            self._orders = orders
        return self._orders[x]

    def exponent(self) -> int:
        return reduce(np.lcm, [self.element_order(x) for x in self.elements()], 1)

    def evaluate_word(self, word) -> int:
        x = 0
        for gi in word:
            x = int(self.mult[x, self.generators[gi]])
        return x

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def center(self) -> tuple[int, ...]:
        eq = self.mult == self.mult.T
        return tuple(int(x) for x in np.nonzero(eq.all(axis=1))[0])

    def __eq__(self, other) -> bool:
        """Structural equality: same prime, table, and generating set."""
        if self is other:
            return True
        return (
            isinstance(other, FiniteGroup)
            and self.prime == other.prime
            and self.order == other.order
            and self.generators == other.generators
            and np.array_equal(self.mult, other.mult)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.prime, self.order, tuple(self.generators), self.mult.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism stored as the full image array over source elements."""

    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner (inner.target must be self.source)."""
        if inner.target != self.source:
            raise GroupError("composition target/source mismatch")
        return GroupHom(inner.source, self.target, tuple(self.image[i] for i in inner.image))


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``parent`` as a sorted element-index set."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x: int) -> bool:
        return x in set(self.elements)


# -- catalog construction ------------------------------------------------


def _cyclic_table(n: int) -> np.ndarray:
    idx = np.arange(n)
    return (idx[:, None] + idx[None, :]) % n


def trivial(prime: int) -> FiniteGroup:
    g = FiniteGroup("C1", [[0]], [], prime)
    g.spec = {"type": "trivial", "params": [prime]}
    return g


def cyclic(prime: int, k: int) -> FiniteGroup:
    if k < 0:
        raise GroupError("cyclic exponent must be nonnegative")
    n = prime**k
    if n > MAX_ORDER:
        raise GroupError("order exceeds catalog cap")
    if n == 1:
        g = trivial(prime)
    else:
        g = FiniteGroup(f"C{n}", _cyclic_table(n), [1], prime)
    g.spec = {"type": "cyclic", "params": [prime, k]}
    return g


def elementary_abelian(prime: int, k: int) -> FiniteGroup:
    if k < 1:
        raise GroupError("need at least one factor")
    n = prime**k
    if n > MAX_ORDER:
        raise GroupError("order exceeds catalog cap")
    idx = np.arange(n)
    digits = np.stack([(idx // prime**i) % prime for i in range(k)], axis=1)
    summed = (digits[:, None, :] + digits[None, :, :]) % prime
    table = (summed * np.array([prime**i for i in range(k)])).sum(axis=2)
    gens = [prime**i for i in range(k)]
    g = FiniteGroup(f"E{prime}^{k}", table, gens, prime)
    g.spec = {"type": "elementary_abelian", "params": [prime, k]}
    return g


def dihedral8() -> FiniteGroup:
    # elements r^i s^j with index 2*i + j; s r = r^-1 s
    n = 8
    table = np.zeros((n, n), dtype=np.uint16)
    for a in range(n):
        i1, j1 = divmod(a, 2)
        for b in range(n):
            i2, j2 = divmod(b, 2)
            i = (i1 + (i2 if j1 == 0 else -i2)) % 4
            table[a, b] = 2 * i + (j1 ^ j2)
    g = FiniteGroup("D8", table, [2, 1], 2)
    g.spec = {"type": "dihedral8"}
    return g


def quaternion8() -> FiniteGroup:
    # index = 2*axis + sign_bit over [1, -1, i, -i, j, -j, k, -k]
    prod = {}  # (axis, axis) -> (sign, axis)
    for a in range(4):
        prod[(0, a)] = (1, a)
        prod[(a, 0)] = (1, a)
    for a in (1, 2, 3):
        prod[(a, a)] = (-1, 0)
    for x, y, z in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        prod[(x, y)] = (1, z)
        prod[(y, x)] = (-1, z)
    table = np.zeros((8, 8), dtype=np.uint16)
    for a in range(8):
        ax_a, neg_a = divmod(a, 2)
        for b in range(8):
            ax_b, neg_b = divmod(b, 2)
            sign, axis = prod[(ax_a, ax_b)]
            neg = (neg_a + neg_b + (1 if sign < 0 else 0)) % 2
            table[a, b] = 2 * axis + neg
    g = FiniteGroup("Q8", table, [2, 4], 2)
    g.spec = {"type": "quaternion8"}
    return g


def heisenberg(prime: int) -> FiniteGroup:
    """Unitriangular 3x3 group over GF(p); order p^3, exponent p for odd p."""
    n = prime**3
    if n > MAX_ORDER:
        raise GroupError("order exceeds catalog cap")
    table = np.zeros((n, n), dtype=np.uint16)
    p = prime
    for x in range(n):
        a1, r = divmod(x, p * p)
        b1, c1 = divmod(r, p)
        for y in range(n):
            a2, r2 = divmod(y, p * p)
            b2, c2 = divmod(r2, p)
            a, b = (a1 + a2) % p, (b1 + b2) % p
            c = (c1 + c2 + a1 * b2) % p
            table[x, y] = a * p * p + b * p + c
    g = FiniteGroup(f"Heis{p}", table, [p * p, p], p)
    g.spec = {"type": "heisenberg", "params": [p]}
    return g


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    if a.prime != b.prime:
        raise GroupError("factors must share the prime")
    n = a.order * b.order
    if n > MAX_ORDER:
        raise GroupError("order exceeds catalog cap")
    ia, ib = np.divmod(np.arange(n), b.order)
    table = a.mult[ia[:, None], ia[None, :]].astype(np.int64) * b.order + b.mult[ib[:, None], ib[None, :]]
    gens = [g * b.order for g in a.generators] + list(b.generators)
    g = FiniteGroup(f"{a.name}x{b.name}", table, gens, a.prime)
    if a.spec is not None and b.spec is not None:
        g.spec = {"type": "direct_product", "params": [a.spec, b.spec]}
    return g


def group_from_table(name: str, table, generators, prime: int) -> FiniteGroup:
    """Explicit-table escape hatch (validated like catalog groups)."""
    g = FiniteGroup(name, table, generators, prime)
    g.spec = {
        "name": name,
        "table": [list(map(int, row)) for row in g.mult],
        "generators": list(g.generators),
    }
    return g


def _partitions(total: int):
    """Partitions of ``total`` into weakly decreasing positive parts."""
    if total == 0:
        yield ()
        return

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(total, total)


def catalog_groups(prime: int, max_order: int) -> list[FiniteGroup]:
    """All catalog p-groups of order <= max_order, ascending by order.

    Abelian groups are every product of cyclic factors; the nonabelian
    stock is D8/Q8 (p=2) and the Heisenberg group (odd p), each crossed
    with the abelian groups that fit under the cap.
    """
    max_order = min(max_order, MAX_ORDER)
    abelians: list[FiniteGroup] = []
    k = 0
    while prime**k <= max_order:
        for part in _partitions(k):
            grp = trivial(prime) if not part else cyclic(prime, part[0])
            for exp in part[1:]:
                grp = direct_product(grp, cyclic(prime, exp))
            abelians.append(grp)
        k += 1
    bases: list[FiniteGroup] = []
    if prime == 2 and max_order >= 8:
        bases = [dihedral8(), quaternion8()]
    elif prime > 2 and prime**3 <= max_order:
        bases = [heisenberg(prime)]
    groups = list(abelians)
    for base in bases:
        for ab in abelians:
            if base.order * ab.order <= max_order:
                groups.append(base if ab.order == 1 else direct_product(base, ab))
    groups.sort(key=lambda g: (g.order, g.name))
    return groups


def make_group(spec) -> FiniteGroup:
    """Build a catalog group from a ("name", params...) tuple or dict."""
    if isinstance(spec, dict):
        if "table" in spec:
            return group_from_table(
                spec.get("name", "table-group"),
                spec["table"],
                spec.get("generators", []),
                spec["prime"],
            )
        spec = (spec["type"], *spec.get("params", []))
    kind, *params = spec
    if kind == "trivial":
        return trivial(*params)
    if kind == "cyclic":
        return cyclic(*params)
    if kind == "elementary_abelian":
        return elementary_abelian(*params)
    if kind == "dihedral8":
        return dihedral8()
    if kind == "quaternion8":
        return quaternion8()
    if kind == "heisenberg":
        return heisenberg(*params)
    if kind == "direct_product":
        return direct_product(make_group(params[0]), make_group(params[1]))
    raise GroupError(f"unknown group spec {kind!r}")


# -- subgroups and homomorphisms ------------------------------------------


def subgroup_generated(group: FiniteGroup, seeds) -> Subgroup:
    """Smallest subgroup containing the seed elements."""
    for s in seeds:
        if not 0 <= int(s) < group.order:
            raise GroupError(f"seed {s} out of range")
    closure = {0}
    frontier = [0]
    seeds = [int(s) for s in seeds]
    while frontier:
        x = frontier.pop()
        for s in seeds:
            y = int(group.mult[x, s])
            if y not in closure:
                closure.add(y)
                frontier.append(y)
    return Subgroup(group, tuple(sorted(closure)))


def hom_from_images(src: FiniteGroup, dst: FiniteGroup, gen_images) -> GroupHom:
    """Unique multiplicative extension of generator images, fully verified."""
    gen_images = [int(g) for g in gen_images]
    if len(gen_images) != len(src.generators):
        raise GroupError("need one image per source generator")
    for g in gen_images:
        if not 0 <= g < dst.order:
            raise GroupError(f"image {g} out of range")
    image = np.zeros(src.order, dtype=np.int64)
    for x in range(src.order):
        y = 0
        for gi in src.words[x]:
            y = int(dst.mult[y, gen_images[gi]])
        image[x] = y
    lhs = dst.mult[image[:, None], image[None, :]]
    rhs = image[src.mult]
    if not np.array_equal(lhs, rhs):
        raise ImagesInconsistent("generator images do not define a homomorphism")
    return GroupHom(src, dst, tuple(int(v) for v in image))


def is_injective(hom: GroupHom) -> bool:
    return len(set(hom.image)) == hom.source.order


def kernel_elements(hom: GroupHom) -> tuple[int, ...]:
    return tuple(x for x, y in enumerate(hom.image) if y == 0)


def identity_hom(group: FiniteGroup) -> GroupHom:
    return GroupHom(group, group, tuple(range(group.order)))


def all_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found by closing the lattice under element joins."""
    seen = {(0,)}
    frontier = [(0,)]
    while frontier:
        elems = frontier.pop()
        present = set(elems)
        for g in range(1, group.order):
            if g in present:
                continue
            bigger = subgroup_generated(group, set(elems) | {g}).elements
            if bigger not in seen:
                seen.add(bigger)
                frontier.append(bigger)
    return [Subgroup(group, e) for e in sorted(seen, key=lambda e: (len(e), e))]


def subgroup_as_group(sub: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Abstract group on the subgroup's elements plus the inclusion hom."""
    parent = sub.parent
    elems = list(sub.elements)
    local = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    table = np.zeros((n, n), dtype=np.uint16)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            prod = int(parent.mult[a, b])
            if prod not in local:
                raise GroupError("element set is not closed under multiplication")
            table[i, j] = local[prod]
    gens: list[int] = []
    closure = {0}
    for i in range(1, n):
        if i not in closure:
            gens.append(i)
            closed = {0}
            frontier = [0]
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = int(table[x, g])
                    if y not in closed:
                        closed.add(y)
                        frontier.append(y)
            closure = closed
    grp = FiniteGroup(f"{parent.name}|{n}", table, gens, parent.prime)
    incl = GroupHom(grp, parent, tuple(elems))
    return grp, incl
