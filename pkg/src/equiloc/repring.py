"""Exact character theory for finite groups.

Character tables are computed by Dixon's method: class-sum matrices over a
prime field F_p with p = 1 mod exp(G) and p > 2 sqrt(|G|) are simultaneously
diagonalized, degrees and character values are recovered mod p, and values
are lifted to exact cyclotomics through root-of-unity multiplicities.

Values live in Q(zeta_m) in the power basis reduced mod the m-th cyclotomic
polynomial; all arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from . import fingroup as fg
from .exact import invert_field_dense, kernel_basis_int, mat_mul, smith_normal_form


class GroupTooLarge(ValueError):
    pass


class NoSuchElement(Exception):
    pass


class UnsupportedModule(ValueError):
    pass


# --- cyclotomic numbers -------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (low to high, monic) of the m-th cyclotomic polynomial."""
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _poly_div_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dv in enumerate(den):
            num[i + j] -= c * dv
    assert all(v == 0 for v in num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def _power_reductions(m: int) -> tuple:
    """x^t mod Phi_m for t = 0 .. 2m, as Fraction vectors of length deg."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    if deg:
        cur[0] = Fraction(1)
    for _ in range(2 * m + 1):
        rows.append(tuple(cur))
        top = cur[deg - 1]
        nxt = [Fraction(0)] + cur[: deg - 1]
        if top:
            for j in range(deg):
                nxt[j] -= top * phi[j]
        cur = nxt
    return tuple(rows)


class Cyclotomic:
    """Element of Q(zeta_m) in the power basis, reduced mod Phi_m."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        self.m = m
        deg = len(cyclotomic_polynomial(m)) - 1
        cf = [Fraction(c) for c in coeffs]
        if len(cf) > deg:
            assert all(c == 0 for c in cf[deg:]), "unreduced cyclotomic coefficients"
        cf = cf[:deg] + [Fraction(0)] * (deg - len(cf))
        self.coeffs = tuple(cf)

    @classmethod
    def zero(cls, m: int) -> "Cyclotomic":
        return cls(m, [])

    @classmethod
    def rational(cls, m: int, q) -> "Cyclotomic":
        return cls(m, [Fraction(q)])

    @classmethod
    def root(cls, m: int, k: int = 1) -> "Cyclotomic":
        """zeta_m^k."""
        k %= m
        red = _power_reductions(m)[k]
        return cls(m, red)

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return other
            raise ValueError(f"conductor mismatch {self.m} vs {other.m}")
        return Cyclotomic.rational(self.m, other)

    def __add__(self, other):
        o = self._coerce(other)
        return Cyclotomic(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            q = Fraction(other)
            return Cyclotomic(self.m, [a * q for a in self.coeffs])
        o = self._coerce(other)
        deg = len(self.coeffs)
        red = _power_reductions(self.m)
        out = [Fraction(0)] * deg
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if not b:
                    continue
                r = red[i + j]
                ab = a * b
                for t in range(deg):
                    if r[t]:
                        out[t] += ab * r[t]
        return Cyclotomic(self.m, out)

    __rmul__ = __mul__

    def inv(self) -> "Cyclotomic":
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.m)]
        a = list(self.coeffs)
        g, s = _poly_xgcd(a, phi)
        assert len(g) == 1 and g[0] != 0, "division by zero cyclotomic"
        c = g[0]
        return Cyclotomic(self.m, [x / c for x in s])

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        assert self.is_rational()
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def galois(self, k: int) -> "Cyclotomic":
        """Apply zeta -> zeta^k (k need not be invertible; it is a substitution)."""
        red = _power_reductions(self.m)
        deg = len(self.coeffs)
        out = [Fraction(0)] * deg
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            r = red[(i * k) % self.m]
            for t in range(deg):
                if r[t]:
                    out[t] += a * r[t]
        return Cyclotomic(self.m, out)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(self.m - 1)

    def to_conductor(self, M: int) -> "Cyclotomic":
        assert M % self.m == 0
        step = M // self.m
        red = _power_reductions(M)
        deg = len(red[0])
        out = [Fraction(0)] * deg
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            r = red[(i * step) % M]
            for t in range(deg):
                if r[t]:
                    out[t] += a * r[t]
        return Cyclotomic(M, out)

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.rational_value()})"
        return f"Cyc(m={self.m}, {[str(c) for c in self.coeffs]})"


def _poly_xgcd(a, b):
    """(g, s) with s*a = g mod b, over Fraction coefficient lists."""
    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    r0, r1 = trim([Fraction(x) for x in a]), trim([Fraction(x) for x in b])
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, trim(r)
        s0, s1 = s1, trim(_poly_sub(s0, _poly_mul(q, s1)))
    return r0, s0


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        for j, bv in enumerate(b):
            a[i + j] -= c * bv
    return q, a[: len(b) - 1]


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


# --- character tables ---------------------------------------------------------

@dataclass
class CharacterTable:
    group: fg.PermGroup
    classes: list  # fingroup.ConjClass (element kind)
    class_of: tuple[int, ...]  # element id -> class index
    irreducibles: tuple  # tuple of tuples of Cyclotomic, indexed [char][class]
    degrees: tuple[int, ...]
    conductor: int
    trivial: int  # index of the trivial character

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def inverse_class(self, c: int) -> int:
        G = self.group
        return self.class_of[G.inv(self.classes[c].representative)]

    def value(self, char_idx: int, element_id: int) -> Cyclotomic:
        return self.irreducibles[char_idx][self.class_of[element_id]]

    def virtual_value(self, coeffs, class_idx: int) -> Cyclotomic:
        out = Cyclotomic.zero(self.conductor)
        for j, c in enumerate(coeffs):
            if c:
                out = out + self.irreducibles[j][class_idx] * c
        return out

    def inner_product(self, vals1, vals2) -> Fraction:
        """<f1, f2> for class-function value tuples; must come out rational."""
        G = self.group
        total = Cyclotomic.zero(self.conductor)
        for c, cls in enumerate(self.classes):
            term = vals1[c] * vals2[self.inverse_class(c)]
            total = total + term * cls.size()
        assert total.is_rational(), "inner product must be rational"
        return total.rational_value() / G.order


def _find_dixon_prime(order: int, exponent: int) -> int:
    lower = 2 * isqrt(order) + 1
    p = exponent + 1
    while True:
        if p > lower and (p - 1) % exponent == 0 and _is_prime(p):
            return p
        p += exponent


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, isqrt(n) + 1):
        if n % q == 0:
            return False
    return True


def _nullspace_modp(M, p):
    """Basis of the kernel of M over F_p (column vectors)."""
    rows = [list(r) for r in M]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    piv_col_of_row = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv_col_of_row.append(c)
        r += 1
    pivots = set(piv_col_of_row)
    basis = []
    for c in range(n):
        if c in pivots:
            continue
        v = [0] * n
        v[c] = 1
        for i, pc in enumerate(piv_col_of_row):
            v[pc] = (-rows[i][c]) % p
        basis.append(v)
    return basis


def _solve_modp(A_cols, b, p):
    """Solve sum_j x_j A_cols[j] = b over F_p; A_cols are column vectors."""
    n = len(b)
    k = len(A_cols)
    aug = [[A_cols[j][i] % p for j in range(k)] + [b[i] % p] for i in range(n)]
    r = 0
    piv_cols = []
    for c in range(k):
        piv = None
        for i in range(r, n):
            if aug[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(v * inv) % p for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(a - f * b2) % p for a, b2 in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    x = [0] * k
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][k]
    # consistency
    for i in range(n):
        s = sum(A_cols[j][i] * x[j] for j in range(k)) % p
        assert s == b[i] % p, "inconsistent system"
    return x


@lru_cache(maxsize=None)
def character_table(G: fg.PermGroup, bound: int = fg.SUBGROUP_ENUM_BOUND) -> CharacterTable:
    if G.order > bound:
        if getattr(G, "character_table_data", None) is not None:
            return _table_from_data(G, G.character_table_data)
        raise GroupTooLarge(f"|G| = {G.order} exceeds bound {bound}")
    classes = fg.conjugacy_classes(G)
    k = len(classes)
    class_of = [0] * G.order
    for ci, cls in enumerate(classes):
        for x in cls.members:
            class_of[x] = ci
    sizes = [c.size() for c in classes]
    e = G.exponent
    p = _find_dixon_prime(G.order, e)

    # class multiplication coefficients a[i][l][j]
    reps = [c.representative for c in classes]
    mats = []
    for i in range(k):
        M = [[0] * k for _ in range(k)]
        for x in classes[i].members:
            for l in range(k):
                for y in classes[l].members:
                    M[l][class_of[G.mul(x, y)]] += 1
        for l in range(k):
            for j in range(k):
                assert M[l][j] % sizes[j] == 0
                M[l][j] //= sizes[j]
        # (M_i)[l][j] = a_{i l j}: row l, col j, acting on central characters
        mats.append([[M[l][j] % p for j in range(k)] for l in range(k)])

    # simultaneous eigenvectors over F_p
    spaces = [[tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]]
    for Mi in mats:
        new_spaces = []
        for basis in spaces:
            if len(basis) == 1:
                new_spaces.append(basis)
                continue
            # restrict Mi to the span: Mi * basis_j = sum_l A[l][j] basis_l
            cols = [list(col) for col in basis]
            A = [[0] * len(basis) for _ in range(len(basis))]
            for j, col in enumerate(basis):
                img = [sum(Mi[r][c] * col[c] for c in range(k)) % p for r in range(k)]
                sol = _solve_modp(cols, img, p)
                for l in range(len(basis)):
                    A[l][j] = sol[l]
            found = 0
            for lam in range(p):
                if found == len(basis):
                    break
                ker = _nullspace_modp([[(A[r][c] - (lam if r == c else 0)) % p
                                        for c in range(len(basis))]
                                       for r in range(len(basis))], p)
                if ker:
                    found += len(ker)
                    sub = []
                    for v in ker:
                        w = [sum(v[j] * basis[j][i] for j in range(len(basis))) % p
                             for i in range(k)]
                        sub.append(tuple(w))
                    new_spaces.append(sub)
            assert found == len(basis), "class-sum matrix not diagonalizable"
        spaces = new_spaces
    assert all(len(s) == 1 for s in spaces) and len(spaces) == k, (
        "class algebra did not split into lines")

    id_class = class_of[G.identity_id]
    inv_class = [class_of[G.inv(reps[c])] for c in range(k)]
    chars_modp = []
    degrees = []
    for (v,) in spaces:
        assert v[id_class] % p, "eigenvector vanishes at the identity class"
        scale = pow(v[id_class], -1, p)
        w = [(x * scale) % p for x in v]
        s = sum(w[l] * w[inv_class[l]] * pow(sizes[l], -1, p) for l in range(k)) % p
        d2 = (G.order * pow(s, -1, p)) % p
        d = next(dd for dd in range(1, isqrt(G.order) + 1) if (dd * dd) % p == d2)
        degrees.append(d)
        chars_modp.append([(d * w[j] * pow(sizes[j], -1, p)) % p for j in range(k)])
    assert sum(d * d for d in degrees) == G.order

    # lift: character values as root-of-unity multiplicities
    gen = next(g for g in range(2, p) if _order_modp(g, p) == p - 1)
    z = pow(gen, (p - 1) // e, p)
    zinv = pow(z, -1, p)
    power_class = [[class_of[_element_power(G, reps[c], l)] for l in range(e)]
                   for c in range(k)]
    e_inv = pow(e, -1, p)
    irreducibles = []
    for ci, vals in enumerate(chars_modp):
        row = []
        for c in range(k):
            val = Cyclotomic.zero(e)
            for t in range(e):
                mt = sum(vals[power_class[c][l]] * pow(zinv, t * l, p)
                         for l in range(e)) * e_inv % p
                assert 0 <= mt <= degrees[ci], "multiplicity lift out of range"
                if mt:
                    val = val + Cyclotomic.root(e, t) * mt
            row.append(val)
        irreducibles.append(tuple(row))

    order_key = [(degrees[i], _values_key(irreducibles[i])) for i in range(k)]
    perm = sorted(range(k), key=lambda i: order_key[i])
    irreducibles = tuple(irreducibles[i] for i in perm)
    degrees = tuple(degrees[i] for i in perm)
    trivial = next(
        i for i in range(k)
        if all(v == Cyclotomic.rational(e, 1) for v in irreducibles[i])
    )
    table = CharacterTable(G, classes, tuple(class_of), irreducibles, degrees, e, trivial)
    _validate_table(table)
    return table


def _values_key(row):
    return tuple(tuple((c.numerator, c.denominator) for c in v.coeffs) for v in row)


def _order_modp(g: int, p: int) -> int:
    o, x = 1, g % p
    while x != 1:
        x = x * g % p
        o += 1
    return o


def _element_power(G: fg.PermGroup, a: int, l: int) -> int:
    x = G.identity_id
    for _ in range(l):
        x = G.mul(x, a)
    return x


def _validate_table(t: CharacterTable):
    k = t.n_classes
    assert len(t.irreducibles) == k
    assert sum(d * d for d in t.degrees) == t.group.order
    for i in range(k):
        for j in range(k):
            ip = t.inner_product(t.irreducibles[i], t.irreducibles[j])
            assert ip == (1 if i == j else 0), f"row orthogonality fails at {(i, j)}"
    # column orthogonality
    for c in range(k):
        for c2 in range(k):
            tot = Cyclotomic.zero(t.conductor)
            for i in range(k):
                tot = tot + t.irreducibles[i][c] * t.irreducibles[i][t.inverse_class(c2)]
            expected = Fraction(t.group.order, t.classes[c].size()) if c == c2 else Fraction(0)
            assert tot.is_rational() and tot.rational_value() == expected


def _table_from_data(G: fg.PermGroup, data: dict) -> CharacterTable:
    """Table supplied in the group file, for groups beyond the Dixon bound."""
    classes = fg.conjugacy_classes(G)
    class_of = [0] * G.order
    for ci, cls in enumerate(classes):
        for x in cls.members:
            class_of[x] = ci
    e = G.exponent
    irreducibles = []
    for row in data["irreducibles"]:
        vals = []
        for entry in row:
            if isinstance(entry, int):
                vals.append(Cyclotomic.rational(e, entry))
            elif isinstance(entry, list):
                vals.append(Cyclotomic.rational(e, Fraction(entry[0], entry[1])))
            else:
                vals.append(Cyclotomic(int(entry["conductor"]), [
                    Fraction(a, b) for a, b in entry["coeffs"]
                ]).to_conductor(e))
        irreducibles.append(tuple(vals))
    degrees = tuple(int(v.rational_value()) for v in
                    (row[class_of[G.identity_id]] for row in irreducibles))
    trivial = next(i for i, row in enumerate(irreducibles)
                   if all(v == Cyclotomic.rational(e, 1) for v in row))
    t = CharacterTable(G, classes, tuple(class_of), tuple(irreducibles), degrees, e, trivial)
    _validate_table(t)
    return t


# --- subgroups as groups, restriction and induction ---------------------------

@lru_cache(maxsize=None)
def subgroup_group(G: fg.PermGroup, members: frozenset) -> fg.PermGroup:
    H = fg.PermGroup(G.degree, [G.elements[a] for a in sorted(members)],
                     name=f"{G.name}<{len(members)}>")
    assert H.order == len(members)
    return H


def embed_ids(G: fg.PermGroup, H: fg.PermGroup):
    return tuple(G.id_of(H.elements[i]) for i in range(H.order))


def restriction_matrix(G: fg.PermGroup, H: fg.Subgroup) -> list[list[int]]:
    """Integer matrix of res: R(G) -> R(H); column j decomposes chi_j|_H."""
    tG = character_table(G)
    Hgrp = subgroup_group(G, H.members)
    tH = character_table(Hgrp)
    return _restriction_matrix_tables(tG, tH, embed_ids(G, Hgrp))


def _restriction_matrix_tables(tG: CharacterTable, tH: CharacterTable, embed):
    eG = tG.conductor
    rows = []
    Hgrp = tH.group
    for i in range(tH.n_classes):
        row = []
        psi_i = tH.irreducibles[i]
        for j in range(tG.n_classes):
            tot = Cyclotomic.zero(eG)
            for h in range(Hgrp.order):
                gval = tG.value(j, embed[h])
                hval = psi_i[tH.class_of[Hgrp.inv(h)]].to_conductor(eG)
                tot = tot + gval * hval
            assert tot.is_rational()
            q = tot.rational_value() / Hgrp.order
            assert q.denominator == 1 and q >= 0, "restriction multiplicities"
            row.append(int(q))
        rows.append(row)
    # unit maps to unit
    assert all(rows[i][tG.trivial] == (1 if i == tH.trivial else 0)
               for i in range(tH.n_classes))
    return rows


def class_function_values(t: CharacterTable, coeffs) -> tuple:
    return tuple(t.virtual_value(coeffs, c) for c in range(t.n_classes))


def orbit_morphism_matrix(G: fg.PermGroup, C, mor_id: int) -> list[list[int]]:
    """R(H) -> R(K) for the orbit morphism G/H -> G/K with payload gK:
    conjugate by g into g^-1 H g <= K, then induce up to K."""
    m = C.morphisms[mor_id]
    H = C.reps[m.src]
    K = C.reps[m.dst]
    g = C.coset_rep(mor_id)
    ginv = G.inv(g)
    Hc = frozenset(G.mul(G.mul(ginv, h), g) for h in H)  # g^-1 H g
    tH = character_table(subgroup_group(G, H))
    tHc = character_table(subgroup_group(G, Hc))
    tK = character_table(subgroup_group(G, K))
    embed_H = embed_ids(G, tH.group)
    embed_Hc = embed_ids(G, tHc.group)
    embed_K = embed_ids(G, tK.group)
    e = tH.conductor * tHc.conductor // gcd(tH.conductor, tHc.conductor)
    # conjugation iso R(H) -> R(Hc): psi^g(x) = psi(g x g^-1)
    conj = []
    for i in range(tHc.n_classes):
        row = []
        for j in range(tH.n_classes):
            # <psi_j^g, psi'_i>_{Hc}
            tot = Cyclotomic.zero(e)
            for x in range(tHc.group.order):
                gx = embed_Hc[x]
                hval_elt = G.mul(G.mul(g, gx), ginv)
                a = tH.irreducibles[j][tH.class_of[embed_H.index(hval_elt)]].to_conductor(e)
                b = tHc.irreducibles[i][tHc.class_of[tHc.group.inv(x)]].to_conductor(e)
                tot = tot + a * b
            q = tot.rational_value() / tHc.group.order
            assert q.denominator == 1 and q >= 0
            row.append(int(q))
        conj.append(row)
    res = _restriction_matrix_tables(tK, tHc, tuple(embed_K.index(x) for x in embed_Hc))
    ind = [[res[j][i] for j in range(tHc.n_classes)] for i in range(tK.n_classes)]
    return mat_mul(ind, conj)


# --- the ideal (gamma), Segal elements, vanishing -----------------------------

def in_gamma_ideal(G: fg.PermGroup, coeffs, gamma: fg.ConjClass) -> bool:
    """True iff the virtual character vanishes on gamma."""
    t = character_table(G)
    c = t.class_of[gamma.representative]
    return not t.virtual_value(coeffs, c)


def segal_element(G: fg.PermGroup, H: fg.Subgroup, gamma: fg.ConjClass):
    """eta with eta|_H = 0 and nonzero trace on gamma, or raise NoSuchElement.

    Searches the integer kernel lattice of the restriction matrix; the trace
    functional is linear, so it vanishes on the lattice iff it vanishes on a
    basis.
    """
    A = restriction_matrix(G, H)
    t = character_table(G)
    c = t.class_of[gamma.representative]
    for v in kernel_basis_int(A):
        if t.virtual_value(v, c):
            assert all(sum(row[j] * v[j] for j in range(len(v))) == 0 for row in A)
            return v
    raise NoSuchElement(
        f"no element with zero restriction to |H|={H.order} and nonzero trace on gamma"
    )


def annihilator_of_subgroup(G: fg.PermGroup, H: fg.Subgroup) -> list[list[int]]:
    """Basis of Ann_{R(G)} R(H) = ker(res), since R(H) has a unit."""
    return kernel_basis_int(restriction_matrix(G, H))


def module_vanishes_localized(G: fg.PermGroup, module, gamma: fg.ConjClass):
    """Localized vanishing via an annihilator witness outside (gamma).

    module: fingroup.Subgroup (meaning R(H)) or an explicit annihilator
    lattice basis (list of integer vectors).  Returns (vanishes, witness).
    """
    if isinstance(module, fg.Subgroup):
        basis = annihilator_of_subgroup(G, module)
    elif isinstance(module, (list, tuple)):
        basis = [list(v) for v in module]
    else:
        raise UnsupportedModule(f"no annihilator data for {module!r}")
    t = character_table(G)
    c = t.class_of[gamma.representative]
    for v in basis:
        if t.virtual_value(v, c):
            return True, v
    return False, None


# --- rational classes and localization ----------------------------------------

@dataclass
class RationalClasses:
    partition: list[list[int]]  # element-class ids per rational class
    class_to_rc: tuple[int, ...]
    idempotents: list[list[Fraction]]  # coefficients over the irreducible basis


def rational_class_decomposition(G: fg.PermGroup) -> RationalClasses:
    t = character_table(G)
    k = t.n_classes
    seen = set()
    partition = []
    class_to_rc = [0] * k
    for c in range(k):
        if c in seen:
            continue
        rep = t.classes[c].representative
        o = G.element_order(rep)
        orbit = set()
        for m in range(1, o + 1):
            if gcd(m, o) == 1:
                orbit.add(t.class_of[_element_power(G, rep, m)])
        orbit = sorted(orbit)
        for x in orbit:
            class_to_rc[x] = len(partition)
        seen |= set(orbit)
        partition.append(orbit)
    idempotents = []
    for rc in partition:
        coeffs = []
        for j in range(k):
            tot = Cyclotomic.zero(t.conductor)
            for c in rc:
                tot = tot + t.irreducibles[j][t.inverse_class(c)] * t.classes[c].size()
            assert tot.is_rational(), "idempotent coefficients must be rational"
            coeffs.append(tot.rational_value() / G.order)
        idempotents.append(coeffs)
    assert sum(len(rc) for rc in partition) == k
    return RationalClasses(partition, tuple(class_to_rc), idempotents)


@dataclass
class RModuleMap:
    """Map of R(G)-modules in the rational-class factor picture.

    Factors are indexed by rational classes of G; blocks[rc] is a dense matrix
    over the table's cyclotomic field mapping the rc-factor of the source to
    the rc-factor of the target.
    """

    group: fg.PermGroup
    src_dims: dict[int, int]
    dst_dims: dict[int, int]
    blocks: dict[int, list]


def _evaluation_matrix(t: CharacterTable, e: int):
    return [[t.irreducibles[j][c].to_conductor(e) for j in range(t.n_classes)]
            for c in range(t.n_classes)]


@lru_cache(maxsize=None)
def _eval_and_inverse(G: fg.PermGroup, members: frozenset, e: int):
    t = character_table(subgroup_group(G, members))
    V = _evaluation_matrix(t, e)
    Vinv = invert_field_dense(V)
    assert Vinv is not None
    return V, Vinv


def module_map_from_subgroups(G: fg.PermGroup, src_subgroups, dst_subgroups,
                              int_matrix) -> RModuleMap:
    """RModuleMap of a map  (+)_i R(H_i) -> (+)_j R(K_j)  given over the
    irreducible bases, converted to evaluation coordinates and split into
    rational-class blocks (off-block entries are asserted to vanish: the map
    must be R(G)-linear)."""
    tG = character_table(G)
    e = tG.conductor
    rc = rational_class_decomposition(G)

    def factor_data(subgroups):
        # per summand: table, coordinates (summand, class) grouped by rc of G
        tables = [character_table(subgroup_group(G, H.members if isinstance(H, fg.Subgroup) else H))
                  for H in subgroups]
        coords = []  # (summand, class_idx, rc)
        for si, t in enumerate(tables):
            emb = embed_ids(G, t.group)
            for c in range(t.n_classes):
                g_elt = emb[t.classes[c].representative]
                coords.append((si, c, rc.class_to_rc[tG.class_of[g_elt]]))
        return tables, coords

    src_tables, src_coords = factor_data(src_subgroups)
    dst_tables, dst_coords = factor_data(dst_subgroups)

    # evaluation coordinates: full evaluated matrix V_dst A V_src^-1
    src_off = []
    off = 0
    for t in src_tables:
        src_off.append(off)
        off += t.n_classes
    n_src = off
    dst_off = []
    off = 0
    for t in dst_tables:
        dst_off.append(off)
        off += t.n_classes
    n_dst = off
    A = int_matrix
    assert len(A) == n_dst
    zero = Cyclotomic.zero(e)
    evaluated = [[zero for _ in range(n_src)] for _ in range(n_dst)]
    Vinv_blocks = []
    for si, t in enumerate(src_tables):
        _, Vinv = _eval_and_inverse(G, frozenset(embed_ids(G, t.group)), e)
        Vinv_blocks.append(Vinv)
    V_blocks = []
    for dj, t in enumerate(dst_tables):
        V, _ = _eval_and_inverse(G, frozenset(embed_ids(G, t.group)), e)
        V_blocks.append(V)
    # evaluated = V_dst . A . V_src^{-1}, block by block
    for dj, tD in enumerate(dst_tables):
        for si, tS in enumerate(src_tables):
            blockA = [[Fraction(A[dst_off[dj] + r][src_off[si] + c])
                       for c in range(tS.n_classes)] for r in range(tD.n_classes)]
            tmp = [[zero for _ in range(tS.n_classes)] for _ in range(tD.n_classes)]
            for r in range(tD.n_classes):
                for c in range(tS.n_classes):
                    acc = zero
                    for q in range(tS.n_classes):
                        if blockA[r][q]:
                            acc = acc + Vinv_blocks[si][q][c] * blockA[r][q]
                    tmp[r][c] = acc
            for r in range(tD.n_classes):
                for c in range(tS.n_classes):
                    acc = zero
                    for q in range(tD.n_classes):
                        acc = acc + V_blocks[dj][r][q] * tmp[q][c]
                    evaluated[dst_off[dj] + r][src_off[si] + c] = acc

    n_rc = len(rc.partition)
    src_dims = {r: 0 for r in range(n_rc)}
    dst_dims = {r: 0 for r in range(n_rc)}
    src_pos = []
    for (si, c, r) in src_coords:
        src_pos.append((r, src_dims[r]))
        src_dims[r] += 1
    dst_pos = []
    for (dj, c, r) in dst_coords:
        dst_pos.append((r, dst_dims[r]))
        dst_dims[r] += 1
    blocks = {r: [[zero for _ in range(src_dims[r])] for _ in range(dst_dims[r])]
              for r in range(n_rc)}
    for i_dst in range(n_dst):
        for i_src in range(n_src):
            v = evaluated[i_dst][i_src]
            r_d, p_d = dst_pos[i_dst]
            r_s, p_s = src_pos[i_src]
            if r_d == r_s:
                blocks[r_d][p_d][p_s] = v
            else:
                assert not v, "map is not R(G)-linear: off-block entry"
    return RModuleMap(G, src_dims, dst_dims, blocks)


def rational_localize_map(phi: RModuleMap, gamma: fg.ConjClass):
    """Project to the rational-class factor of gamma; verdict iff isomorphism."""
    G = phi.group
    tG = character_table(G)
    rc = rational_class_decomposition(G)
    r = rc.class_to_rc[tG.class_of[gamma.representative]]
    block = phi.blocks.get(r, [])
    sdim = phi.src_dims.get(r, 0)
    ddim = phi.dst_dims.get(r, 0)
    if sdim != ddim:
        return block, False
    if sdim == 0:
        return block, True
    inv = invert_field_dense([row[:] for row in block])
    return block, inv is not None
