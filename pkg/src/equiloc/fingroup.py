"""Finite permutation groups: elements, conjugacy, subgroups, Weyl quotients.

Permutations are tuples of images on {0..degree-1}; composition is
(p * q)(i) = p[q[i]].  Element ids index the lexicographically sorted
element list, which fixes canonical class representatives everywhere.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

Perm = tuple[int, ...]

SUBGROUP_ENUM_BOUND = 200


class GroupTooLarge(ValueError):
    pass


class NotSubgroup(ValueError):
    pass


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[x] for x in q)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_perm(p, n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


class PermGroup:
    """Finite group given by permutation generators, with a cached element list."""

    def __init__(self, degree: int, generators, name: str = ""):
        if degree <= 0:
            raise ValueError("degree must be positive")
        gens = tuple(tuple(g) for g in generators)
        for g in gens:
            if not is_perm(g, degree):
                raise ValueError(f"not a permutation of degree {degree}: {g}")
        self.degree = degree
        self.generators = gens
        self.name = name or f"group deg {degree}"

    @cached_property
    def elements(self) -> tuple[Perm, ...]:
        e = perm_identity(self.degree)
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = perm_mul(g, p)
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _index(self) -> dict[Perm, int]:
        return {p: i for i, p in enumerate(self.elements)}

    @cached_property
    def identity_id(self) -> int:
        return self._index[perm_identity(self.degree)]

    def id_of(self, p: Perm) -> int:
        return self._index[tuple(p)]

    def mul(self, a: int, b: int) -> int:
        return self._index[perm_mul(self.elements[a], self.elements[b])]

    def inv(self, a: int) -> int:
        return self._index[perm_inv(self.elements[a])]

    def conj(self, a: int, g: int) -> int:
        """g a g^-1."""
        ga = perm_mul(self.elements[g], self.elements[a])
        return self._index[perm_mul(ga, perm_inv(self.elements[g]))]

    def element_order(self, a: int) -> int:
        e = self.identity_id
        k, x = 1, a
        while x != e:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*(self.element_order(a) for a in range(self.order)))

    def __repr__(self):
        return f"PermGroup({self.name!r}, degree={self.degree}, order={self.order})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "generators": [list(g) for g in self.generators],
            "name": self.name,
        }


@dataclass(frozen=True)
class Subgroup:
    parent: PermGroup
    members: frozenset[int]

    def __post_init__(self):
        G = self.parent
        mem = self.members
        if G.identity_id not in mem:
            raise NotSubgroup("identity missing")
        for a in mem:
            if G.inv(a) not in mem:
                raise NotSubgroup("not inverse-closed")
            for b in mem:
                if G.mul(a, b) not in mem:
                    raise NotSubgroup("not product-closed")
        if G.order % len(mem):
            raise NotSubgroup("Lagrange violated")

    @property
    def order(self) -> int:
        return len(self.members)

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def conjugate(self, g: int) -> frozenset[int]:
        G = self.parent
        return frozenset(G.conj(a, g) for a in self.members)

    def __repr__(self):
        return f"Subgroup(order={self.order}, members={self.sorted_members()})"


@dataclass(frozen=True)
class ConjClass:
    """Conjugation orbit of elements or of subgroups."""

    kind: str  # "element" | "subgroup"
    representative: object  # element id | frozenset of element ids
    members: tuple  # sorted orbit

    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Family:
    """Conjugation-invariant set of subgroups, stored as subgroup-class ids."""

    parent: PermGroup
    class_ids: frozenset[int]
    is_subgroup_closed: bool


def conjugacy_classes(G: PermGroup) -> list[ConjClass]:
    seen = set()
    classes = []
    for a in range(G.order):
        if a in seen:
            continue
        orbit = {a}
        frontier = [a]
        while frontier:
            nxt = []
            for x in frontier:
                for g in range(G.order):
                    y = G.conj(x, g)
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        seen |= orbit
        classes.append(ConjClass("element", min(orbit), tuple(sorted(orbit))))
    classes.sort(key=lambda c: c.representative)
    assert sum(c.size() for c in classes) == G.order
    assert all(G.order % c.size() == 0 for c in classes)
    return classes


def _closure(G: PermGroup, seed: frozenset[int]) -> frozenset[int]:
    mem = set(seed) | {G.identity_id}
    frontier = list(mem)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(mem):
                for c in (G.mul(a, b), G.mul(b, a)):
                    if c not in mem:
                        mem.add(c)
                        nxt.append(c)
            inv = G.inv(a)
            if inv not in mem:
                mem.add(inv)
                nxt.append(inv)
        frontier = nxt
    return frozenset(mem)


@lru_cache(maxsize=None)
def _all_subgroups_cached(G: PermGroup) -> tuple[frozenset[int], ...]:
    cyclics = {_closure(G, frozenset({a})) for a in range(G.order)}
    subs = set(cyclics)
    subs.add(frozenset({G.identity_id}))
    frontier = list(subs)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if C <= H:
                    continue
                J = _closure(G, H | C)
                if J not in subs:
                    subs.add(J)
                    nxt.append(J)
        frontier = nxt
    return tuple(sorted(subs, key=lambda s: (len(s), tuple(sorted(s)))))


def all_subgroups(G: PermGroup, bound: int = SUBGROUP_ENUM_BOUND) -> list[frozenset[int]]:
    """Every subgroup of G, bottom-up from cyclic subgroups and their joins."""
    if G.order > bound:
        raise GroupTooLarge(f"|G| = {G.order} exceeds bound {bound}")
    return list(_all_subgroups_cached(G))


def subgroup_classes(G: PermGroup, bound: int = SUBGROUP_ENUM_BOUND) -> list[ConjClass]:
    """Conjugacy classes of subgroups, sorted by order then lexicographically."""
    subs = set(all_subgroups(G, bound))
    seen = set()
    classes = []
    for H in sorted(subs, key=lambda s: (len(s), tuple(sorted(s)))):
        if H in seen:
            continue
        orbit = {frozenset(G.conj(a, g) for a in H) for g in range(G.order)}
        assert orbit <= subs, "conjugate of a subgroup must be enumerated"
        seen |= orbit
        rep = min(orbit, key=lambda s: tuple(sorted(s)))
        classes.append(
            ConjClass("subgroup", rep, tuple(sorted(orbit, key=lambda s: tuple(sorted(s)))))
        )
    classes.sort(key=lambda c: (len(c.representative), tuple(sorted(c.representative))))
    return classes


@lru_cache(maxsize=None)
def _subconjugacy(G: PermGroup) -> dict[int, frozenset[int]]:
    """class id -> ids of classes subconjugate to it (i.e. 'below' it)."""
    classes = subgroup_classes(G)
    below: dict[int, frozenset[int]] = {}
    for i, ci in enumerate(classes):
        ids = set()
        for j, cj in enumerate(classes):
            if any(mem <= ci.representative for mem in cj.members):
                ids.add(j)
        below[i] = frozenset(ids)
    return below


def is_family(G: PermGroup, class_ids) -> bool:
    """True iff the set of subgroup classes is closed under passing to subgroups."""
    ids = set(class_ids)
    below = _subconjugacy(G)
    return all(below[i] <= ids for i in ids)


def family_of_gamma(G: PermGroup, gamma: ConjClass) -> Family:
    """Subgroup classes meeting the element class gamma trivially."""
    assert gamma.kind == "element"
    gam = set(gamma.members)
    ids = frozenset(
        i
        for i, c in enumerate(subgroup_classes(G))
        if not (set(c.representative) & gam)
    )
    return Family(G, ids, is_family(G, ids))


def full_family(G: PermGroup) -> Family:
    ids = frozenset(range(len(subgroup_classes(G))))
    return Family(G, ids, True)


def empty_family(G: PermGroup) -> Family:
    return Family(G, frozenset(), True)


def family_from_ids(G: PermGroup, ids) -> Family:
    n = len(subgroup_classes(G))
    ids = frozenset(int(i) for i in ids)
    if not all(0 <= i < n for i in ids):
        raise ValueError(f"subgroup class id out of range 0..{n - 1}")
    return Family(G, ids, is_family(G, ids))


@dataclass(frozen=True)
class WeylData:
    """N_G(H)/H realized on the cosets of H in N_G(H), with a section to G."""

    group: PermGroup
    subgroup: Subgroup
    normalizer: tuple[int, ...]
    coset_reps: tuple[int, ...]  # one element id per coset, index = point of `group`
    section: dict  # perm of `group` -> element id in the normalizer

    def act_rep(self, w: int) -> int:
        """Element id in N_G(H) realizing the w-th Weyl element."""
        return self.section[self.group.elements[w]]


def normalizer(G: PermGroup, H: Subgroup) -> tuple[int, ...]:
    return tuple(g for g in range(G.order) if H.conjugate(g) == H.members)


def weyl_group(G: PermGroup, H: Subgroup) -> WeylData:
    if H.parent is not G:
        raise NotSubgroup("subgroup of a different group")
    N = normalizer(G, H)
    cosets: list[frozenset[int]] = []
    seen: set[int] = set()
    for n in N:
        if n in seen:
            continue
        cs = frozenset(G.mul(n, h) for h in H.members)
        seen |= cs
        cosets.append(cs)
    cosets.sort(key=min)
    reps = tuple(min(c) for c in cosets)
    where = {c: i for i, c in enumerate(cosets)}
    perms: dict[Perm, int] = {}
    for n in N:
        p = tuple(
            where[frozenset(G.mul(n, x) for x in cosets[i])] for i in range(len(cosets))
        )
        if p not in perms:
            perms[p] = n
    gens = sorted(perms)
    W = PermGroup(len(cosets), gens, name=f"W({H.order} in {G.name})")
    assert W.order == len(N) // H.order
    return WeylData(W, H, N, reps, perms)


# --- standard groups -------------------------------------------------------

def trivial_group() -> PermGroup:
    return PermGroup(1, [(0,)], name="1")


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return trivial_group()
    return PermGroup(n, [tuple((i + 1) % n for i in range(n))], name=f"Z/{n}")


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return trivial_group()
    swap = (1, 0) + tuple(range(2, n))
    cyc = tuple((i + 1) % n for i in range(n))
    return PermGroup(n, [swap, cyc], name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return trivial_group()
    three = (1, 2, 0) + tuple(range(3, n))
    if n % 2:
        cyc = tuple((i + 1) % n for i in range(n))
        gens = [three, cyc]
    else:
        gens = [three, (0,) + tuple(1 + (i + 1) % (n - 1) for i in range(n - 1))]
    return PermGroup(n, gens, name=f"A{n}")


def dihedral(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return PermGroup(n, [rot, ref], name=f"D{n}")


def klein_four() -> PermGroup:
    return PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)], name="Z/2xZ/2")


def quaternion8() -> PermGroup:
    """Q8 in its regular representation on {1,-1,i,-i,j,-j,k,-k}."""
    # indices: 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    neg = [1, 0, 3, 2, 5, 4, 7, 6]
    table = {}
    units = list(range(8))
    base = {"1": 0, "i": 2, "j": 4, "k": 6}
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]

    def parse(x):
        s = names[x]
        return (-1 if s.startswith("-") else 1, s.lstrip("-"))

    def encode(sign, sym):
        v = base[sym]
        return neg[v] if sign < 0 else v

    rules = {
        ("1", "1"): (1, "1"),
        ("1", "i"): (1, "i"),
        ("1", "j"): (1, "j"),
        ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"),
        ("j", "1"): (1, "j"),
        ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"),
        ("j", "j"): (-1, "1"),
        ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"),
        ("j", "i"): (-1, "k"),
        ("j", "k"): (1, "i"),
        ("k", "j"): (-1, "i"),
        ("k", "i"): (1, "j"),
        ("i", "k"): (-1, "j"),
    }
    for a in units:
        for b in units:
            (sa, xa), (sb, xb) = parse(a), parse(b)
            s, x = rules[(xa, xb)]
            table[(a, b)] = encode(sa * sb * s, x)
    gen_i = tuple(table[(2, b)] for b in units)  # left multiplication by i
    gen_j = tuple(table[(4, b)] for b in units)
    return PermGroup(8, [gen_i, gen_j], name="Q8")


def direct_product(A: PermGroup, B: PermGroup) -> PermGroup:
    n = A.degree + B.degree
    gens = [g + tuple(A.degree + i for i in range(B.degree)) for g in A.generators]
    gens += [tuple(range(A.degree)) + tuple(A.degree + x for x in g) for g in B.generators]
    return PermGroup(n, gens, name=f"{A.name}x{B.name}")


# --- JSON interface --------------------------------------------------------

def group_from_dict(data: dict) -> PermGroup:
    G = PermGroup(int(data["degree"]), data["generators"], data.get("name", ""))
    if "character_table" in data:
        G.character_table_data = data["character_table"]
    return G


def load_group(path) -> PermGroup:
    with open(path) as fh:
        return group_from_dict(json.load(fh))
