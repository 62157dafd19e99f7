"""Finite (G-)bornological coarse spaces and the fixed-point machinery.

On a finite carrier a coarse structure is determined by its largest entourage
(an equivalence relation: the closure of the generators under diagonal,
inverses, composition, subsets and finite unions), and a bornology by its
largest bounded set.  Both are kept as generator lists plus those maximal
elements; membership is tested against the maxima.  Bornologies need not
cover the carrier: unbounded points are what make finite flasqueness and
completion examples non-trivial.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import fingroup as fg


class StructureMismatch(AssertionError):
    pass


class MorphismCheckFailed(ValueError):
    pass


def _components(n: int, pairs) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
    return [find(x) for x in range(n)]


class BornCoarseSpace:
    def __init__(self, carrier: int, coarse_generators=(), bornology_generators=()):
        assert carrier >= 0
        self.carrier = carrier
        cg = []
        for U in coarse_generators:
            U = frozenset((int(x), int(y)) for x, y in U)
            for x, y in U:
                assert 0 <= x < carrier and 0 <= y < carrier
            cg.append(U)
        self.coarse_generators = tuple(cg)
        bg = []
        for B in bornology_generators:
            B = frozenset(int(x) for x in B)
            assert all(0 <= x < carrier for x in B)
            bg.append(B)
        self.bornology_generators = tuple(bg)

    @cached_property
    def component(self) -> tuple[int, ...]:
        pairs = [p for U in self.coarse_generators for p in U]
        return tuple(_components(self.carrier, pairs))

    @cached_property
    def max_bounded(self) -> frozenset[int]:
        out = set()
        for B in self.bornology_generators:
            out |= B
        return frozenset(out)

    def is_entourage(self, pairs) -> bool:
        return all(self.component[x] == self.component[y] for x, y in pairs)

    def is_bounded(self, points) -> bool:
        return set(points) <= self.max_bounded

    @property
    def covers_carrier(self) -> bool:
        return len(self.max_bounded) == self.carrier

    def max_entourage(self) -> frozenset:
        return frozenset(
            (x, y)
            for x in range(self.carrier)
            for y in range(self.carrier)
            if self.component[x] == self.component[y]
        )

    def is_empty(self) -> bool:
        return self.carrier == 0

    def __repr__(self):
        return (f"BornCoarseSpace(n={self.carrier}, "
                f"components={len(set(self.component))}, "
                f"bounded={len(self.max_bounded)})")


def min_coarse(n: int) -> tuple:
    return ()


def max_coarse(n: int) -> tuple:
    return (frozenset((x, y) for x in range(n) for y in range(n)),) if n else ()


def max_bornology(n: int) -> tuple:
    return (frozenset(range(n)),) if n else ()


class GBornCoarseSpace:
    """Bornological coarse space with an action of a finite group by automorphisms."""

    def __init__(self, group: fg.PermGroup, space: BornCoarseSpace, generator_images,
                 points=None):
        self.group = group
        self.space = space
        gens = [tuple(p) for p in generator_images]
        assert len(gens) == len(group.generators)
        n = space.carrier
        for p in gens:
            assert sorted(p) == list(range(n)), "action image must be a permutation"
        self.action = self._extend(gens)
        self.points = tuple(points) if points is not None else tuple(range(n))
        for g, p in self.action.items():
            self._assert_automorphism(p)
        # invariant entourages are cofinal iff the maximal entourage is invariant,
        # which the automorphism property forces; checked all the same
        self.g_coarse = all(
            self._preserves_components(p) for p in self.action.values()
        )
        assert self.g_coarse

    def _extend(self, gens) -> dict[int, tuple]:
        G = self.group
        n = self.space.carrier
        ident = tuple(range(n))
        act = {G.identity_id: ident}
        frontier = [G.identity_id]
        gen_ids = [G.id_of(g) for g in G.generators]
        while frontier:
            nxt = []
            for a in frontier:
                for gi, gperm in zip(gen_ids, gens):
                    b = G.mul(gi, a)
                    if b not in act:
                        act[b] = tuple(gperm[x] for x in act[a])
                        nxt.append(b)
            frontier = nxt
        assert len(act) == G.order
        return act

    def _preserves_components(self, p) -> bool:
        comp = self.space.component
        return all(comp[p[x]] == comp[p[y]]
                   for x in range(len(p)) for y in range(len(p))
                   if comp[x] == comp[y])

    def _assert_automorphism(self, p):
        # coarse automorphism only: the bornology need not be invariant, which
        # is exactly what makes the completion B_G a nontrivial operation; the
        # completed bornology is always invariant.
        sp = self.space
        comp = sp.component
        for x in range(sp.carrier):
            for y in range(x + 1, sp.carrier):
                assert (comp[x] == comp[y]) == (comp[p[x]] == comp[p[y]]), (
                    "action is not a coarse automorphism")

    def act(self, g: int, x: int) -> int:
        return self.action[g][x]

    def orbit_of_set(self, B) -> frozenset:
        out = set()
        for g in range(self.group.order):
            out |= {self.act(g, x) for x in B}
        return frozenset(out)

    @property
    def carrier(self) -> int:
        return self.space.carrier

    def __repr__(self):
        return f"GBornCoarseSpace({self.group.name}, {self.space!r})"


def trivial_action(G: fg.PermGroup, space: BornCoarseSpace) -> GBornCoarseSpace:
    ident = tuple(range(space.carrier))
    return GBornCoarseSpace(G, space, [ident] * len(G.generators))


@dataclass(frozen=True)
class CoarseMap:
    src: BornCoarseSpace
    dst: BornCoarseSpace
    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x]


@dataclass(frozen=True)
class Rejection:
    reason: str  # "controlled" | "proper" | "equivariance"
    witness: object

    def __bool__(self):
        return False


def check_morphism(f, X, Y, *, equivariant_for=None):
    """Controlled + proper test over generators; returns CoarseMap or Rejection.

    Checking generators suffices: images of generators generate the closure,
    and the preimage of the union of bornology generators bounds every
    preimage of a bounded set.
    """
    SX = X.space if isinstance(X, GBornCoarseSpace) else X
    SY = Y.space if isinstance(Y, GBornCoarseSpace) else Y
    f = tuple(int(v) for v in f)
    assert len(f) == SX.carrier
    assert all(0 <= v < SY.carrier for v in f)
    for U in SX.coarse_generators:
        img = {(f[x], f[y]) for x, y in U}
        if not SY.is_entourage(img):
            bad = next((p for p in U if not SY.is_entourage([(f[p[0]], f[p[1]])])))
            return Rejection("controlled", {"generator": sorted(U), "pair": bad})
    for B in SY.bornology_generators:
        pre = {x for x in range(SX.carrier) if f[x] in B}
        if not SX.is_bounded(pre):
            return Rejection("proper", {"generator": sorted(B), "preimage": sorted(pre)})
    if equivariant_for is not None:
        GX, GY = equivariant_for
        for g in range(GX.group.order):
            for x in range(SX.carrier):
                if f[GX.act(g, x)] != GY.act(g, f[x]):
                    return Rejection("equivariance", {"g": g, "x": x})
    return CoarseMap(SX, SY, f)


def g_completion(X: GBornCoarseSpace) -> GBornCoarseSpace:
    """Same coarse structure; bornology regenerated from G-orbits of generators."""
    new_born = tuple(X.orbit_of_set(B) for B in X.space.bornology_generators)
    space = BornCoarseSpace(X.carrier, X.space.coarse_generators, new_born)
    gens = [X.action[X.group.id_of(g)] for g in X.group.generators]
    return GBornCoarseSpace(X.group, space, gens, points=X.points)


@dataclass
class FixedPointSpace:
    """H-fixed points with the W_G(H)-action through the Weyl section."""

    space: GBornCoarseSpace  # group = Weyl group
    points: tuple[int, ...]  # carrier points inside the ambient space
    weyl: fg.WeylData


def _induced_subspace(ambient: BornCoarseSpace, F: tuple[int, ...]) -> BornCoarseSpace:
    """Subset structure: entourages are subsets of M & FxF, bounded sets subsets
    of max_bounded & F, each presented by one restricted maximal generator."""
    back = {x: i for i, x in enumerate(F)}
    comp = ambient.component
    U = frozenset(
        (back[x], back[y]) for x in F for y in F if comp[x] == comp[y]
    )
    B = frozenset(back[x] for x in F if x in ambient.max_bounded)
    return BornCoarseSpace(len(F), [U] if U else [], [B] if B else [])


def fixed_points(X: GBornCoarseSpace, H: fg.Subgroup) -> FixedPointSpace:
    assert H.parent is X.group
    BX = g_completion(X)
    F = tuple(
        x for x in range(X.carrier) if all(X.act(h, x) == x for h in H.members)
    )
    back = {x: i for i, x in enumerate(F)}
    space = _induced_subspace(BX.space, F)
    w = fg.weyl_group(X.group, H)
    gen_images = []
    for wp in w.group.generators:
        n = w.section[wp]
        gen_images.append(tuple(back[X.act(n, x)] for x in F))
    return FixedPointSpace(GBornCoarseSpace(w.group, space, gen_images, points=F), F, w)


def restrict_morphism_fixed(f: CoarseMap, X: GBornCoarseSpace, Y: GBornCoarseSpace,
                            H: fg.Subgroup):
    """Restriction f^H between fixed-point spaces, passed through check_morphism."""
    FX = fixed_points(X, H)
    FY = fixed_points(Y, H)
    backY = {x: i for i, x in enumerate(FY.points)}
    vals = []
    for x in FX.points:
        y = f.mapping[x]
        if y not in backY:
            return Rejection("controlled", {"unfixed_image": (x, y)})
        vals.append(backY[y])
    return check_morphism(vals, FX.space.space, FY.space.space)


# --- orbits and X^(S) --------------------------------------------------------

@dataclass(frozen=True)
class FiniteGSet:
    """Finite G-set given by the action of every group element."""

    group: fg.PermGroup
    size: int
    action: tuple  # action[g][s]

    def act(self, g: int, s: int) -> int:
        return self.action[g][s]


def orbit_gset(C, obj: int) -> FiniteGSet:
    """The G-set G/K of an orbit-category object, cosets ordered by min element."""
    G = C.group
    K = C.reps[obj]
    cosets = sorted(
        {frozenset(G.mul(g, k) for k in K) for g in range(G.order)}, key=min
    )
    where = {c: i for i, c in enumerate(cosets)}
    action = tuple(
        tuple(where[frozenset(G.mul(g, x) for x in cosets[s])] for s in range(len(cosets)))
        for g in range(G.order)
    )
    return FiniteGSet(G, len(cosets), action)


@dataclass
class OrbitHomSpace:
    """X^(S) in evaluation coordinates at the base coset, plus the ambient points."""

    space: BornCoarseSpace
    points: tuple[int, ...]  # ambient carrier points (K-fixed points of X)
    obj: int


def orbit_hom_space(X: GBornCoarseSpace, C, obj: int) -> OrbitHomSpace:
    """Carrier = equivariant maps G/K -> X realized as K-fixed points via e_{eK}.

    Structure independence over the base point is verified; a failure raises
    StructureMismatch (it would indicate a bug, since the action is by
    automorphisms of the completion).
    """
    G = X.group
    K = C.reps[obj]
    BX = g_completion(X)
    F = tuple(
        x for x in range(X.carrier) if all(X.act(k, x) == x for k in K)
    )
    space = _induced_subspace(BX.space, F)

    # base-point independence: pull back along e_{aK} for every coset rep a
    S = orbit_gset(C, obj)
    comp = space.component
    bounded = space.max_bounded
    for s in range(S.size):
        a = _coset_rep_of(G, K, S, s)
        comp_a = _components(len(F), [
            (i, j)
            for i in range(len(F)) for j in range(len(F))
            if BX.space.component[X.act(a, F[i])] == BX.space.component[X.act(a, F[j])]
        ])
        same = all(
            (comp_a[i] == comp_a[j]) == (comp[i] == comp[j])
            for i in range(len(F)) for j in range(len(F))
        )
        bounded_a = frozenset(
            i for i in range(len(F)) if X.act(a, F[i]) in BX.space.max_bounded
        )
        if not same or bounded_a != bounded:
            raise StructureMismatch(f"base-point dependence at coset {s} of object {obj}")
    return OrbitHomSpace(space, F, obj)


def _coset_rep_of(G, K, S: FiniteGSet, s: int) -> int:
    # cosets listed by min element id; that element is the representative
    cosets = sorted({frozenset(G.mul(g, k) for k in K) for g in range(G.order)}, key=min)
    return min(cosets[s])


def restriction_map(X: GBornCoarseSpace, C, mor_id: int):
    """phi^*: X^(T) -> X^(S) for an orbit morphism phi: S -> T, as a CoarseMap."""
    m = C.morphisms[mor_id]
    src_hom = orbit_hom_space(X, C, m.src)
    dst_hom = orbit_hom_space(X, C, m.dst)
    g = C.coset_rep(mor_id)
    backS = {x: i for i, x in enumerate(src_hom.points)}
    vals = []
    for x in dst_hom.points:
        y = X.act(g, x)
        assert y in backS, "g maps L-fixed into K-fixed points"
        vals.append(backS[y])
    out = check_morphism(vals, dst_hom.space, src_hom.space)
    if isinstance(out, Rejection):
        raise MorphismCheckFailed(f"phi^* rejected: {out}")
    return out


def tensor_min_max(S: FiniteGSet, X: GBornCoarseSpace,
                   trivial_on_second: bool = False) -> GBornCoarseSpace:
    """S_min,max tensor X: carrier S x X, coarse {diag_S x U}, bornology {S x B}."""
    n = X.carrier
    m = S.size
    coarse = []
    for U in X.space.coarse_generators:
        coarse.append(frozenset((s * n + x, s * n + y) for s in range(m) for x, y in U))
    born = []
    for B in X.space.bornology_generators:
        born.append(frozenset(s * n + x for s in range(m) for x in B))
    space = BornCoarseSpace(m * n, coarse, born)
    G = X.group
    gens = []
    for gperm in G.generators:
        g = G.id_of(gperm)
        xact = tuple(range(n)) if trivial_on_second else X.action[g]
        gens.append(tuple(
            S.act(g, s) * n + xact[x] for s in range(m) for x in range(n)
        ))
    return GBornCoarseSpace(G, space, gens)


def evaluation_map(X: GBornCoarseSpace, C, obj: int) -> CoarseMap:
    """e_S: S_min,max tensor X^(S) -> X, (aK, f) |-> f(aK) = a f(eK).

    A rejection is fatal (it would falsify the morphism lemma on a finite
    model), so it raises MorphismCheckFailed.
    """
    G = X.group
    hom = orbit_hom_space(X, C, obj)
    S = orbit_gset(C, obj)
    hom_g = GBornCoarseSpace(G, hom.space,
                             [tuple(range(hom.space.carrier))] * len(G.generators))
    dom = tensor_min_max(S, hom_g)
    K = C.reps[obj]
    n = hom.space.carrier
    vals = []
    for s in range(S.size):
        a = _coset_rep_of(G, K, S, s)
        for i in range(n):
            vals.append(X.act(a, hom.points[i]))
    out = check_morphism(vals, dom, X, equivariant_for=(dom, X))
    if isinstance(out, Rejection):
        raise MorphismCheckFailed(f"e_S rejected for object {obj}: {out}")
    return out


# --- flasqueness and complementary pairs -------------------------------------

@dataclass
class FlasquenessReport:
    is_morphism: bool
    equivariant: bool | None
    close_to_identity: bool
    iterates_controlled: bool
    escapes_bounded: bool
    completion_preserved: bool | None
    witnesses: dict

    @property
    def accepted(self) -> bool:
        base = (self.is_morphism and self.close_to_identity
                and self.iterates_controlled and self.escapes_bounded)
        if self.equivariant is not None:
            base = base and self.equivariant
        if self.completion_preserved is not None:
            base = base and self.completion_preserved
        return base


def flasqueness_witness_check(X, f, _check_completion=True) -> FlasquenessReport:
    is_g = isinstance(X, GBornCoarseSpace)
    S = X.space if is_g else X
    f = tuple(int(v) for v in f)
    witnesses: dict = {}
    if S.carrier == 0:
        return FlasquenessReport(True, True if is_g else None, True, True, True,
                                 True if (is_g and _check_completion) else None, {})
    mor = check_morphism(f, S, S)
    is_morphism = not isinstance(mor, Rejection)
    if not is_morphism:
        witnesses["morphism"] = mor
    equivariant = None
    if is_g:
        equivariant = all(
            f[X.act(g, x)] == X.act(g, f[x])
            for g in range(X.group.order) for x in range(S.carrier)
        )
    close = S.is_entourage((x, f[x]) for x in range(S.carrier))
    if not close:
        witnesses["close_to_identity"] = [
            (x, f[x]) for x in range(S.carrier)
            if not S.is_entourage([(x, f[x])])
        ]
    # distinct iterates of f (finite carrier: the list is finite)
    iterates = [tuple(range(S.carrier))]
    seen = {iterates[0]}
    cur = iterates[0]
    while True:
        cur = tuple(f[x] for x in cur)
        if cur in seen:
            break
        seen.add(cur)
        iterates.append(cur)
    iter_ok = True
    for U in S.coarse_generators:
        spread = {(it[x], it[y]) for it in iterates for x, y in U}
        if not S.is_entourage(spread):
            iter_ok = False
            witnesses.setdefault("iterates", []).append(sorted(U))
    eventual = set(range(S.carrier))
    while True:
        nxt = {f[x] for x in eventual}
        if nxt == eventual:
            break
        eventual = nxt
    escapes = True
    for B in S.bornology_generators:
        if eventual & B:
            escapes = False
            witnesses.setdefault("bounded_hit", []).append(sorted(eventual & B))
    completion = None
    if is_g and _check_completion:
        sub = flasqueness_witness_check(g_completion(X), f, _check_completion=False)
        completion = (sub.is_morphism and sub.close_to_identity
                      and sub.iterates_controlled and sub.escapes_bounded
                      and bool(sub.equivariant))
        if not completion:
            witnesses["completion"] = sub.witnesses
    return FlasquenessReport(is_morphism, equivariant, close, iter_ok, escapes,
                             completion, witnesses)


@dataclass
class ComplementaryPairReport:
    is_complementary: bool
    stage: int | None
    invariant: bool | None
    filtered: bool
    fixed_point_pairs: dict

    def __bool__(self):
        return self.is_complementary


def complementary_pair_check(X, Z, Y_stages) -> ComplementaryPairReport:
    is_g = isinstance(X, GBornCoarseSpace)
    S = X.space if is_g else X
    Z = frozenset(Z)
    stages = [frozenset(s) for s in Y_stages]
    filtered = all(a <= b for a, b in zip(stages, stages[1:]))
    invariant = None
    if is_g:
        invariant = all(X.orbit_of_set(s) == s for s in stages) and X.orbit_of_set(Z) == Z
    stage = None
    allpts = set(range(S.carrier))
    for i, s in enumerate(stages):
        if Z | s == allpts:
            stage = i
            break
    ok = filtered and stage is not None and (invariant is None or invariant)
    fixed_pairs = {}
    if is_g and ok:
        for ci, cls in enumerate(fg.subgroup_classes(X.group)):
            H = fg.Subgroup(X.group, cls.representative)
            FH = fixed_points(X, H)
            fpts = set(FH.points)
            zh = Z & fpts
            sub_ok = any(zh | (s & fpts) == fpts for s in stages) or not fpts
            fixed_pairs[ci] = sub_ok
    return ComplementaryPairReport(ok, stage, invariant, filtered, fixed_pairs)


# --- JSON interface -----------------------------------------------------------

def space_from_dict(data: dict, group: fg.PermGroup | None = None):
    n = int(data["carrier"])
    coarse = [frozenset((int(x), int(y)) for x, y in U)
              for U in data.get("coarse_generators", [])]
    born = [frozenset(int(x) for x in B)
            for B in data.get("bornology_generators", [])]
    space = BornCoarseSpace(n, coarse, born)
    if "action" in data:
        assert group is not None, "action requires a group"
        return GBornCoarseSpace(group, space, [tuple(p) for p in data["action"]])
    return space


def load_space(path, group: fg.PermGroup | None = None):
    import json

    with open(path) as fh:
        return space_from_dict(json.load(fh), group)
