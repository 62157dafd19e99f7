"""Exact chain-level homological algebra.

Chain complexes live over Z or Q with sparse exact differentials; homology is
reported in invariant-factor form (free rank + torsion factors, torsion empty
over Q).  Derived colimits use the simplicial-replacement bar complex over an
explicit finite category, truncated at a bar degree N; homology is then
correct in total degrees <= N-1 because bar degree q only feeds total degrees
>= q.

Simplicial sets are presented by nondegenerate simplices whose faces are
recorded in Eilenberg-Zilber normal form (simplex, degeneracy), so nerves of
categories and honest semi-simplicial complexes share one representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact import (
    SparseMatrix,
    invariant_factors_sparse,
    rank_sparse_field,
    smith_normal_form,  # noqa: F401  (public: part of this module's surface)
)
from .orbitcat import FinCategory, opposite_category, twisted_arrow_category

RING_Z = "Z"
RING_Q = "Q"


# --- monotone-map combinatorics (objects of Delta) --------------------------

def map_compose(f: tuple, g: tuple) -> tuple:
    """f after g, maps given by image tuples."""
    return tuple(f[x] for x in g)


def identity_map(n: int) -> tuple:
    """Identity of [n] (n+1 points)."""
    return tuple(range(n + 1))


def delta(i: int, n: int) -> tuple:
    """Coface [n-1] -> [n] skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def epi_mono_factor(f: tuple) -> tuple[tuple, tuple]:
    """Monotone f = mono . epi; returns (mono image tuple, epi image tuple)."""
    image = sorted(set(f))
    pos = {v: k for k, v in enumerate(image)}
    return tuple(image), tuple(pos[v] for v in f)


def is_identity_map(f: tuple) -> bool:
    return all(v == i for i, v in enumerate(f))


# --- simplicial sets ---------------------------------------------------------

class SimplicialSetFin:
    """Finite (possibly truncated) simplicial set in normal form.

    simplices[n] lists the nondegenerate n-simplices; faces[n][k][i] is the
    normal form (m, key, epi) of d_i applied to the k-th n-simplex, with
    epi: [n-1] ->> [m] and key nondegenerate in dimension m.  A plain
    semi-simplicial set has identity epis throughout.
    """

    def __init__(self, simplices: dict[int, list], faces: dict[int, list], truncated_at=None):
        self.simplices = {n: list(v) for n, v in simplices.items() if v}
        self.faces = faces
        self.truncated_at = truncated_at
        self.index = {
            n: {key: k for k, key in enumerate(v)} for n, v in self.simplices.items()
        }
        self._check_faces()

    @property
    def dims(self) -> list[int]:
        return sorted(self.simplices)

    def is_empty(self) -> bool:
        return not self.simplices

    def n_simplices(self, n: int) -> int:
        return len(self.simplices.get(n, ()))

    def top_dim(self) -> int:
        return max(self.simplices) if self.simplices else -1

    def face(self, n: int, key, i: int):
        """Normal form (m, key', epi) of d_i on a nondegenerate n-simplex."""
        k = self.index[n][key]
        return self.faces[n][k][i]

    def face_formal(self, m: int, key, alpha: tuple, i: int):
        """d_i of the formal simplex alpha*(key), alpha: [n] ->> [m]."""
        n = len(alpha) - 1
        f = map_compose(alpha, delta(i, n))
        mono, beta = epi_mono_factor(f)
        cur = (m, key, identity_map(m))
        skipped = [s for s in range(m + 1) if s not in set(mono)]
        for s in sorted(skipped, reverse=True):
            cm, ck, ce = cur
            if is_identity_map(ce):
                cur = self.faces[cm][self.index[cm][ck]][s]
            else:
                cur = self.face_formal(cm, ck, ce, s)
        cm, ck, ce = cur
        return (cm, ck, map_compose(ce, beta))

    def _check_faces(self):
        for n, keys in self.simplices.items():
            if n == 0:
                continue
            assert n - 1 in self.simplices or not keys or n - 1 >= 0
            for k, key in enumerate(keys):
                row = self.faces[n][k]
                assert len(row) == n + 1, f"{n}-simplex needs {n + 1} faces"
                for m, key2, epi in row:
                    assert key2 in self.index.get(m, {}), "face target missing"
                    assert len(epi) == n, "face epi arity"
        # simplicial identities d_i d_j = d_{j-1} d_i (i < j), via normal forms
        for n in self.dims:
            if n < 2:
                continue
            for key in self.simplices[n]:
                for j in range(1, n + 1):
                    for i in range(j):
                        a = self._double_face(n, key, j, i)
                        b = self._double_face2(n, key, i, j - 1)
                        assert a == b, (n, key, i, j, a, b)

    def _double_face(self, n, key, j, i):
        m, k2, e = self.faces[n][self.index[n][key]][j]
        return self.face_formal(m, k2, e, i)

    def _double_face2(self, n, key, i, j1):
        m, k2, e = self.faces[n][self.index[n][key]][i]
        return self.face_formal(m, k2, e, j1)


def from_simplicial_complex(simplices_by_dim: dict[int, list[tuple]]) -> SimplicialSetFin:
    """Semi-simplicial set of an abstract simplicial complex.

    Simplices are sorted vertex tuples; faces drop one vertex and are always
    nondegenerate (identity epis).
    """
    simp = {n: sorted(set(map(tuple, v))) for n, v in simplices_by_dim.items() if v}
    index = {n: {s: k for k, s in enumerate(v)} for n, v in simp.items()}
    faces = {}
    for n, keys in simp.items():
        if n == 0:
            faces[0] = [[] for _ in keys]
            continue
        rows = []
        for s in keys:
            row = []
            for i in range(n + 1):
                t = s[:i] + s[i + 1:]
                assert t in index[n - 1], f"complex not face-closed at {s}"
                row.append((n - 1, t, identity_map(n - 1)))
            rows.append(row)
        faces[n] = rows
    return SimplicialSetFin(simp, faces)


def empty_simplicial_set() -> SimplicialSetFin:
    return SimplicialSetFin({}, {})


class SimplicialMapFin:
    """Strict map of normal-form simplicial sets (no reordering)."""

    def __init__(self, src: SimplicialSetFin, dst: SimplicialSetFin, images: dict[int, list]):
        self.src = src
        self.dst = dst
        self.images = images  # images[n][k] = (m, key', epi)
        for n in src.dims:
            assert len(images[n]) == src.n_simplices(n)
            for k, key in enumerate(src.simplices[n]):
                m, key2, epi = images[n][k]
                assert key2 in dst.index.get(m, {})
                assert len(epi) == n + 1
        self._check_faces()

    def image_formal(self, m, key, alpha):
        mm, key2, epi = self.images[m][self.src.index[m][key]]
        return (mm, key2, map_compose(epi, alpha))

    def _check_faces(self):
        # image of d_i(x) must equal d_i(image of x), in normal form
        for n in self.src.dims:
            if n == 0:
                continue
            for k, key in enumerate(self.src.simplices[n]):
                m, key2, epi = self.images[n][k]
                for i in range(n + 1):
                    fm, fk, fe = self.src.faces[n][k][i]
                    lhs = self.image_formal(fm, fk, fe)
                    rhs = self.dst.face_formal(m, key2, epi, i)
                    assert lhs == rhs, (n, key, i)


def nerve_of_category(cat: FinCategory, N: int) -> SimplicialSetFin:
    """Truncated nerve in normal form.

    p-simplices are chains of p composable non-identity morphisms (objects in
    dimension 0); an inner face whose composite is an identity is recorded as
    the degeneracy of the stripped chain.
    """
    simplices: dict[int, list] = {}
    if cat.n_objects:
        simplices[0] = [("o", x) for x in range(cat.n_objects)]
    chains_by_p: dict[int, list[tuple[int, ...]]] = {}
    prev = [()]
    for p in range(1, N + 1):
        cur = []
        for ms in prev:
            start_candidates = (
                range(cat.n_morphisms) if not ms else
                [f for f in range(cat.n_morphisms)
                 if cat.morphisms[f].src == cat.morphisms[ms[-1]].dst]
            )
            for f in start_candidates:
                if not cat.is_identity(f):
                    cur.append(ms + (f,))
        if not cur:
            break
        chains_by_p[p] = cur
        simplices[p] = [("c", ms) for ms in cur]
        prev = cur
    faces: dict[int, list] = {0: [[] for _ in simplices.get(0, [])]}
    for p, keys in simplices.items():
        if p == 0:
            continue
        rows = []
        for _, ms in keys:
            row = []
            for i in range(p + 1):
                if i == 0:
                    rest = ms[1:]
                    if rest:
                        row.append((p - 1, ("c", rest), identity_map(p - 1)))
                    else:
                        row.append((0, ("o", cat.morphisms[ms[0]].dst), identity_map(0)))
                elif i == p:
                    rest = ms[:-1]
                    if rest:
                        row.append((p - 1, ("c", rest), identity_map(p - 1)))
                    else:
                        row.append((0, ("o", cat.morphisms[ms[0]].src), identity_map(0)))
                else:
                    comp = cat.compose(ms[i], ms[i - 1])
                    if cat.is_identity(comp):
                        stripped = ms[:i - 1] + ms[i + 1:]
                        epi = tuple(j - (1 if j >= i else 0) for j in range(p))
                        if stripped:
                            row.append((p - 2, ("c", stripped), epi))
                        else:
                            obj = cat.morphisms[ms[0]].src
                            row.append((0, ("o", obj), epi))
                    else:
                        row.append((p - 1, ("c", ms[:i - 1] + (comp,) + ms[i + 1:]),
                                    identity_map(p - 1)))
            rows.append(row)
        faces[p] = rows
    return SimplicialSetFin(simplices, faces, truncated_at=N)


# --- chain complexes ---------------------------------------------------------

class ChainComplex:
    """Bounded complex of finitely generated free modules over Z or Q."""

    def __init__(self, ring: str, ranks: dict[int, int], diffs: dict[int, SparseMatrix]):
        assert ring in (RING_Z, RING_Q)
        self.ring = ring
        self.ranks = {n: r for n, r in ranks.items() if r}
        self.diffs = {}
        for n, d in diffs.items():
            if d.nnz():
                self.diffs[n] = d
        for n, d in self.diffs.items():
            assert d.ncols == self.rank(n) and d.nrows == self.rank(n - 1), (
                n, d.nrows, d.ncols, self.rank(n), self.rank(n - 1))
        for n in list(self.diffs):
            dd = self.diff(n).compose(self.diff(n + 1))
            assert dd.is_zero(), f"d^2 != 0 between degrees {n + 1} and {n - 1}"
        self._homology = None

    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def diff(self, n: int) -> SparseMatrix:
        d = self.diffs.get(n)
        if d is None:
            return SparseMatrix(self.rank(n - 1), self.rank(n))
        return d

    def is_zero(self) -> bool:
        return not self.ranks

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def _diff_rank_and_torsion(self, n: int) -> tuple[int, tuple[int, ...]]:
        d = self.diffs.get(n)
        if d is None or not d.nnz():
            return 0, ()
        if self.ring == RING_Q:
            return rank_sparse_field(d), ()
        factors = invariant_factors_sparse(d)
        return len(factors), tuple(x for x in factors if x != 1)

    def homology(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        """degree -> (free rank, torsion invariant factors), zero entries omitted."""
        if self._homology is not None:
            return self._homology
        info = {}
        degs = set(self.ranks) | {n - 1 for n in self.diffs}
        cache: dict[int, tuple[int, tuple[int, ...]]] = {}

        def dr(n):
            if n not in cache:
                cache[n] = self._diff_rank_and_torsion(n)
            return cache[n]

        out = {}
        for n in sorted(degs):
            rk = self.rank(n)
            if not rk:
                continue
            r_out, _ = dr(n)
            r_in, torsion = dr(n + 1)
            free = rk - r_out - r_in
            assert free >= 0
            if free or torsion:
                out[n] = (free, torsion)
        self._homology = out
        return out

    def __repr__(self):
        return f"ChainComplex({self.ring}, ranks={dict(sorted(self.ranks.items()))})"


def zero_complex(ring: str = RING_Z) -> ChainComplex:
    return ChainComplex(ring, {}, {})


def free_complex(ring: str, ranks: dict[int, int], diffs: dict[int, list] | None = None) -> ChainComplex:
    mats = {}
    if diffs:
        for n, dense in diffs.items():
            mats[n] = SparseMatrix.from_dense(dense)
    return ChainComplex(ring, ranks, mats)


class ChainMap:
    def __init__(self, src: ChainComplex, dst: ChainComplex, mats: dict[int, SparseMatrix], check: bool = True):
        self.src = src
        self.dst = dst
        self.mats = {n: m for n, m in mats.items() if m.nnz()}
        for n, m in self.mats.items():
            assert m.ncols == src.rank(n) and m.nrows == dst.rank(n)
        if check:
            degs = set(src.ranks) | set(dst.ranks)
            for n in degs:
                lhs = self.dst.diff(n).compose(self.mat(n))
                rhs = self.mat(n - 1).compose(self.src.diff(n))
                assert (lhs + rhs.scaled(-1)).is_zero(), f"not a chain map in degree {n}"

    def mat(self, n: int) -> SparseMatrix:
        m = self.mats.get(n)
        if m is None:
            return SparseMatrix(self.dst.rank(n), self.src.rank(n))
        return m

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        mats = {n: SparseMatrix.identity(C.rank(n)) for n in C.ranks}
        return cls(C, C, mats, check=False)

    @classmethod
    def zero(cls, src: ChainComplex, dst: ChainComplex) -> "ChainMap":
        return cls(src, dst, {}, check=False)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        assert other.dst is self.src or other.dst.ranks == self.src.ranks
        mats = {}
        for n in set(self.mats) | set(other.mats):
            mats[n] = self.mat(n).compose(other.mat(n))
        return ChainMap(other.src, self.dst, mats, check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        degs = set(self.mats) | set(other.mats)
        return all(self.mat(n) == other.mat(n) for n in degs)

    def __hash__(self):
        raise TypeError("ChainMap is unhashable")


def chains(X: SimplicialSetFin, ring: str = RING_Z) -> ChainComplex:
    """Normalized chains: faces landing on degenerate simplices contribute 0."""
    ranks = {n: X.n_simplices(n) for n in X.dims}
    diffs = {}
    for n in X.dims:
        if n == 0 or not ranks.get(n):
            continue
        d = SparseMatrix(ranks.get(n - 1, 0), ranks[n])
        for k in range(ranks[n]):
            sign = 1
            for i in range(n + 1):
                m, key2, epi = X.faces[n][k][i]
                if m == n - 1 and is_identity_map(epi):
                    d.add_to(X.index[n - 1][key2], k, sign)
                sign = -sign
        diffs[n] = d
    return ChainComplex(ring, ranks, diffs)


def chain_map_of_simplicial(f: SimplicialMapFin, ring: str = RING_Z) -> ChainMap:
    src = chains(f.src, ring)
    dst = chains(f.dst, ring)
    mats = {}
    for n in f.src.dims:
        m = SparseMatrix(dst.rank(n), src.rank(n))
        for k in range(src.rank(n)):
            mm, key2, epi = f.images[n][k]
            if mm == n and is_identity_map(epi):
                m.add_to(f.dst.index[n][key2], k, 1)
        mats[n] = m
    return ChainMap(src, dst, mats)


def vertex_chain_map(src_complex, dst_complex, vertex_map, ring: str = RING_Z,
                     src_chains: ChainComplex | None = None,
                     dst_chains: ChainComplex | None = None) -> ChainMap:
    """Chain map induced by a simplicial-complex vertex map.

    src/dst are dicts dim -> sorted vertex tuples (complex presentations);
    the image tuple is re-sorted with the permutation sign, collapses give 0.
    """
    src_cx = src_chains if src_chains is not None else chains(from_simplicial_complex(src_complex), ring)
    dst_cx = dst_chains if dst_chains is not None else chains(from_simplicial_complex(dst_complex), ring)
    src_sorted = {n: sorted(set(map(tuple, v))) for n, v in src_complex.items() if v}
    dst_index = {
        n: {s: k for k, s in enumerate(sorted(set(map(tuple, v))))}
        for n, v in dst_complex.items() if v
    }
    mats = {}
    for n, keys in src_sorted.items():
        m = SparseMatrix(dst_cx.rank(n), src_cx.rank(n))
        for k, s in enumerate(keys):
            img = [vertex_map[v] for v in s]
            if len(set(img)) < len(img):
                continue
            sign = _sort_sign(img)
            t = tuple(sorted(img))
            m.add_to(dst_index[n][t], k, sign)
        mats[n] = m
    return ChainMap(src_cx, dst_cx, mats)


def _sort_sign(seq) -> int:
    sign = 1
    arr = list(seq)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[j] < arr[i]:
                arr[i], arr[j] = arr[j], arr[i]
                sign = -sign
    return sign


# --- constructions on complexes ---------------------------------------------

def direct_sum(parts: list[ChainComplex], ring: str) -> tuple[ChainComplex, list[dict[int, int]]]:
    """Sum complex plus per-part degree offsets."""
    ranks: dict[int, int] = {}
    offsets = []
    for p in parts:
        offs = {}
        for n, r in p.ranks.items():
            offs[n] = ranks.get(n, 0)
            ranks[n] = ranks.get(n, 0) + r
        offsets.append(offs)
    diffs = {}
    for n in ranks:
        d = SparseMatrix(ranks.get(n - 1, 0), ranks[n])
        for p, offs in zip(parts, offsets):
            if p.rank(n):
                d.paste(p.diff(n), offs.get(n - 1, 0), offs[n])
        diffs[n] = d
    return ChainComplex(ring, ranks, diffs), offsets


def tensor(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    assert A.ring == B.ring
    return _tensor_impl(A, B)[0]


def _tensor_offsets(A: ChainComplex, B: ChainComplex):
    ranks: dict[int, int] = {}
    offsets: dict[tuple[int, int], int] = {}
    for i in sorted(A.ranks):
        for j in sorted(B.ranks):
            n = i + j
            offsets[(i, j)] = ranks.get(n, 0)
            ranks[n] = ranks.get(n, 0) + A.rank(i) * B.rank(j)
    return ranks, offsets


def _tensor_impl(A: ChainComplex, B: ChainComplex):
    ranks, offsets = _tensor_offsets(A, B)
    diffs: dict[int, SparseMatrix] = {}
    for n in ranks:
        diffs[n] = SparseMatrix(ranks.get(n - 1, 0), ranks[n])
    for (i, j), off in offsets.items():
        n = i + j
        rb = B.rank(j)
        # d_A x id
        if (i - 1, j) in offsets:
            off2 = offsets[(i - 1, j)]
            for r, c, v in A.diff(i).entries():
                for b in range(rb):
                    diffs[n].add_to(off2 + r * rb + b, off + c * rb + b, v)
        # (-1)^i id x d_B
        if (i, j - 1) in offsets:
            off2 = offsets[(i, j - 1)]
            sgn = -1 if i % 2 else 1
            rb2 = B.rank(j - 1)
            for r, c, v in B.diff(j).entries():
                for a in range(A.rank(i)):
                    diffs[n].add_to(off2 + a * rb2 + r, off + a * rb + c, sgn * v)
    return ChainComplex(A.ring, ranks, diffs), offsets


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g for degree-0 chain maps on tensor products."""
    src, s_off = _tensor_impl(f.src, g.src)
    dst, d_off = _tensor_impl(f.dst, g.dst)
    mats = {n: SparseMatrix(dst.rank(n), src.rank(n)) for n in set(src.ranks) | set(dst.ranks)}
    for (i, j), off in s_off.items():
        if (i, j) not in d_off:
            continue
        off2 = d_off[(i, j)]
        n = i + j
        rb_s = g.src.rank(j)
        rb_d = g.dst.rank(j)
        fm = f.mat(i)
        gm = g.mat(j)
        for r1, c1, v1 in fm.entries():
            for r2, c2, v2 in gm.entries():
                mats[n].add_to(off2 + r1 * rb_d + r2, off + c1 * rb_s + c2, v1 * v2)
    return ChainMap(src, dst, mats)


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: Cone_n = C_{n-1} + D_n, d(c, d) = (-dc, dd - f c)."""
    C, D = f.src, f.dst
    ranks = {}
    degs = set()
    for n in C.ranks:
        degs.add(n + 1)
    degs |= set(D.ranks)
    for n in degs:
        r = C.rank(n - 1) + D.rank(n)
        if r:
            ranks[n] = r
    diffs = {}
    for n in ranks:
        d = SparseMatrix(ranks.get(n - 1, 0), ranks[n])
        c_off_dst = 0
        d_off_dst = C.rank(n - 2)
        d.paste(C.diff(n - 1), c_off_dst, 0, scale=-1)
        d.paste(f.mat(n - 1), d_off_dst, 0, scale=-1)
        d.paste(D.diff(n), d_off_dst, C.rank(n - 1))
        diffs[n] = d
    return ChainComplex(C.ring, ranks, diffs)


def quasi_iso_in_range(f: ChainMap, lo: int, hi: int) -> bool:
    """True iff the mapping cone has zero homology in degrees [lo, hi+1]."""
    h = cone(f).homology()
    return all(n not in h for n in range(lo, hi + 2))


# --- diagrams and derived colimits ------------------------------------------

class ChainFunctor:
    """Functor from an explicit finite category to chain complexes."""

    def __init__(self, cat: FinCategory, values: dict[int, ChainComplex],
                 maps: dict[int, ChainMap], check: bool = True):
        self.cat = cat
        self.values = values
        self.maps = maps
        assert set(values) == set(range(cat.n_objects))
        assert set(maps) == set(range(cat.n_morphisms))
        for f, m in maps.items():
            mor = cat.morphisms[f]
            assert m.src is values[mor.src] or m.src.ranks == values[mor.src].ranks
            assert m.dst is values[mor.dst] or m.dst.ranks == values[mor.dst].ranks
        if check:
            for x in range(cat.n_objects):
                assert maps[cat.identities[x]] == ChainMap.identity(values[x])
            for g, f in cat.composable_pairs():
                assert maps[cat.compose(g, f)] == maps[g].compose(maps[f]), (
                    "functoriality fails", g, f)

    def ring(self) -> str:
        for v in self.values.values():
            return v.ring
        return RING_Z


def constant_functor(cat: FinCategory, C: ChainComplex) -> ChainFunctor:
    values = {x: C for x in range(cat.n_objects)}
    maps = {f: ChainMap.identity(C) for f in range(cat.n_morphisms)}
    return ChainFunctor(cat, values, maps, check=False)


@dataclass
class BarComplex:
    """Truncated simplicial-replacement total complex of a chain diagram.

    chains[q] lists nondegenerate q-chains (c0, (m1, ..., mq)) of non-identity
    morphisms c0 -> c1 -> ... -> cq; the value of a chain is D(c0).
    """

    diagram: ChainFunctor
    N: int
    complex: ChainComplex = field(init=False)
    chain_lists: dict[int, list] = field(init=False)
    offsets: dict = field(init=False)

    def __post_init__(self):
        D, N = self.diagram, self.N
        cat = D.cat
        ring = D.ring()
        chain_lists: dict[int, list] = {0: []}
        for x in range(cat.n_objects):
            if not D.values[x].is_zero():
                chain_lists[0].append((x, ()))
        for q in range(1, N + 1):
            cur = []
            for c0, ms in chain_lists[q - 1]:
                tail = cat.morphisms[ms[-1]].dst if ms else c0
                for f in range(cat.n_morphisms):
                    m = cat.morphisms[f]
                    if m.src == tail and not cat.is_identity(f):
                        cur.append((c0, ms + (f,)))
            chain_lists[q] = cur
        self.chain_lists = chain_lists

        ranks: dict[int, int] = {}
        offsets: dict = {}
        for q in sorted(chain_lists):
            for ci, (c0, ms) in enumerate(chain_lists[q]):
                val = D.values[c0]
                for t in val.degrees():
                    n = q + t
                    offsets[(q, ci, t)] = ranks.get(n, 0)
                    ranks[n] = ranks.get(n, 0) + val.rank(t)
        diffs = {n: SparseMatrix(ranks.get(n - 1, 0), ranks[n]) for n in ranks}

        def dest(q, ci, t):
            return offsets.get((q, ci, t))

        chain_index = {
            q: {ch: i for i, ch in enumerate(lst)} for q, lst in chain_lists.items()
        }
        for q in sorted(chain_lists):
            for ci, (c0, ms) in enumerate(chain_lists[q]):
                val = D.values[c0]
                for t in val.degrees():
                    n = q + t
                    src_off = offsets[(q, ci, t)]
                    # internal differential, sign (-1)^q
                    if val.rank(t - 1):
                        off2 = dest(q, ci, t - 1)
                        if off2 is not None:
                            sgn = -1 if q % 2 else 1
                            for r, c, v in val.diff(t).entries():
                                diffs[n].add_to(off2 + r, src_off + c, sgn * v)
                    if q == 0:
                        continue
                    # bar faces
                    for i in range(q + 1):
                        sgn = -1 if i % 2 else 1
                        if i == 0:
                            ch2 = (cat.morphisms[ms[0]].dst, ms[1:])
                            if ch2 in chain_index[q - 1]:
                                ci2 = chain_index[q - 1][ch2]
                                blk = D.maps[ms[0]].mat(t)
                                off2 = dest(q - 1, ci2, t)
                                if off2 is not None:
                                    for r, c, v in blk.entries():
                                        diffs[n].add_to(off2 + r, src_off + c, sgn * v)
                            else:
                                # head object has zero value, so the block is 0
                                assert D.values[cat.morphisms[ms[0]].dst].is_zero()
                        elif i == q:
                            ch2 = (c0, ms[:-1])
                            ci2 = chain_index[q - 1][ch2]
                            off2 = dest(q - 1, ci2, t)
                            if off2 is not None:
                                for c in range(val.rank(t)):
                                    diffs[n].add_to(off2 + c, src_off + c, sgn)
                        else:
                            comp = cat.compose(ms[i], ms[i - 1])
                            if cat.is_identity(comp):
                                continue  # degenerate face, 0 in normalized chains
                            ch2 = (c0, ms[:i - 1] + (comp,) + ms[i + 1:])
                            ci2 = chain_index[q - 1][ch2]
                            off2 = dest(q - 1, ci2, t)
                            if off2 is not None:
                                for c in range(val.rank(t)):
                                    diffs[n].add_to(off2 + c, src_off + c, sgn)
        self.offsets = offsets
        self.complex = ChainComplex(ring, ranks, diffs)


def hocolim_trunc(D: ChainFunctor, N: int) -> BarComplex:
    """Bar-complex model of the homotopy colimit, truncated at bar degree N."""
    assert N >= 0
    return BarComplex(D, N)


def bar_augmentation(bar: BarComplex, target: ChainComplex, legs: dict[int, ChainMap]) -> ChainMap:
    """Chain map from the bar complex induced by a cocone (legs must satisfy
    legs[c'] . D(f) = legs[c] for every f: c -> c'); bar degree 0 maps by the
    legs, higher bar degrees map to 0."""
    D = bar.diagram
    for f in range(D.cat.n_morphisms):
        m = D.cat.morphisms[f]
        assert legs[m.dst].compose(D.maps[f]) == legs[m.src], "legs are not a cocone"
    mats = {n: SparseMatrix(target.rank(n), r) for n, r in bar.complex.ranks.items()}
    for ci, (c0, _) in enumerate(bar.chain_lists[0]):
        val = D.values[c0]
        for t in val.degrees():
            off = bar.offsets[(0, ci, t)]
            for r, c, v in legs[c0].mat(t).entries():
                mats[t].add_to(r, off + c, v)
    return ChainMap(bar.complex, target, mats)


def bar_map(barA: BarComplex, barB: BarComplex, eta: dict[int, ChainMap]) -> ChainMap:
    """Map of bar complexes induced by a natural transformation of diagrams
    over the same category (checked)."""
    DA, DB = barA.diagram, barB.diagram
    assert DA.cat is DB.cat
    assert barA.N == barB.N
    cat = DA.cat
    for f in range(cat.n_morphisms):
        m = cat.morphisms[f]
        lhs = eta[m.dst].compose(DA.maps[f])
        rhs = DB.maps[f].compose(eta[m.src])
        assert lhs == rhs, f"eta not natural at morphism {f}"
    chain_index_B = {
        q: {ch: i for i, ch in enumerate(lst)} for q, lst in barB.chain_lists.items()
    }
    mats = {n: SparseMatrix(barB.complex.rank(n), r) for n, r in barA.complex.ranks.items()}
    for q, lst in barA.chain_lists.items():
        for ci, ch in enumerate(lst):
            c0 = ch[0]
            if ch not in chain_index_B[q]:
                assert DB.values[c0].is_zero()
                continue
            cj = chain_index_B[q][ch]
            for t in DA.values[c0].degrees():
                n = q + t
                offA = barA.offsets[(q, ci, t)]
                offB = barB.offsets.get((q, cj, t))
                if offB is None:
                    continue
                for r, c, v in eta[c0].mat(t).entries():
                    mats[n].add_to(offB + r, offA + c, v)
    return ChainMap(barA.complex, barB.complex, mats)


# --- coends over the twisted arrow category ----------------------------------

from functools import lru_cache


@lru_cache(maxsize=None)
def twisted_op_category(I: FinCategory):
    """Tw(I)^op plus, per object, the (source, target) endpoints in I of the
    underlying arrow; cached so repeated coends share one instance."""
    tw = twisted_arrow_category(I)
    twop = opposite_category(tw)
    src_of = []
    dst_of = []
    for x in range(twop.n_objects):
        f = tw.objects[x][1]
        src_of.append(I.morphisms[f].src)
        dst_of.append(I.morphisms[f].dst)
    return twop, tuple(src_of), tuple(dst_of)


def hocoend_trunc(I: FinCategory, obj_fn, mor_fn, N: int, check: bool = True) -> BarComplex:
    """Derived coend: hocolim over Tw(I)^op of the bifunctor.

    obj_fn(S, T) -> ChainComplex gives the value at an arrow S -> T; for a
    Tw(I)^op morphism (f: S->T) => (g: U->V) with witnesses a: S -> U and
    b: V -> T, mor_fn(a, b, value_src, value_dst) -> ChainMap.
    """
    twop, src_of, dst_of = twisted_op_category(I)
    values = {x: obj_fn(src_of[x], dst_of[x]) for x in range(twop.n_objects)}
    maps = {}
    for mi, m in enumerate(twop.morphisms):
        a, b = m.payload[1]
        maps[mi] = mor_fn(a, b, values[m.src], values[m.dst])
    D = ChainFunctor(twop, values, maps, check=check)
    return hocolim_trunc(D, N)
