"""Extended affine Weyl groups ``Lambda_G x| W``.

An element ``t_lam * w`` is stored as the pair ``(lam, w)`` with ``lam`` an
ambient (coweight) vector in the cocharacter lattice.  It acts on the
apartment by ``x -> w x + lam``.

An affine root ``(alpha, r)`` is the affine function ``x -> <alpha, x> + r``.
It is positive when ``r > 0``, or ``r == 0`` and ``alpha > 0``.  The simple
affine roots are ``(alpha_i, 0)`` for ``i = 1..rank`` and ``(-theta, 1)``
for ``i = 0``; the matching simple reflections are ``s_i`` and
``s_0 = t_{theta^vee} s_theta``.

With this normalisation ``t_{alpha^vee}`` sends ``(alpha, r)`` to
``(alpha, r - 2)``, and the number of inverted positive affine roots of
``t_lam`` is ``sum_{alpha > 0} |<alpha, lam>|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .cartan import RootDatum, WeylElt, _is_pos

Vec = Tuple[int, ...]

W_J_CAP = 10**6


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True, order=True)
class AffineRoot:
    finite_root: Vec
    level: int

    def __post_init__(self):
        object.__setattr__(self, "finite_root", tuple(int(x) for x in self.finite_root))
        object.__setattr__(self, "level", int(self.level))

    def is_positive(self) -> bool:
        return self.level > 0 or (self.level == 0 and _is_pos(self.finite_root))

    def __neg__(self):
        return AffineRoot(tuple(-x for x in self.finite_root), -self.level)

    def to_json(self) -> dict:
        return {"root": list(self.finite_root), "level": self.level}


def _root_perm(datum: RootDatum, w: WeylElt) -> Tuple[int, ...]:
    """Indices of w(alpha) for alpha running over datum.roots (cached per datum)."""
    cache = datum.__dict__.setdefault("_root_perm_cache", {})
    perm = cache.get(w)
    if perm is None:
        idx = datum.root_index
        perm = tuple(idx[w.act_root(a)] for a in datum.roots)
        cache[w] = perm
    return perm


class ExtAffineWeylElt:
    """The element ``t_translation * finite_part`` of the extended affine Weyl group."""

    __slots__ = ("datum", "t", "w", "_hash", "_len", "_rw")

    def __init__(self, datum: RootDatum, translation: Sequence[int], finite_part: Optional[WeylElt] = None, check: bool = True):
        self.datum = datum
        self.t = tuple(int(x) for x in translation)
        self.w = finite_part if finite_part is not None else WeylElt.identity(datum.dim)
        if check:
            if len(self.t) != datum.dim:
                raise ValueError(f"translation must have length {datum.dim}")
            if not datum.in_lambda_G(self.t):
                raise ValueError(f"translation {list(self.t)} is not a cocharacter")
        self._hash = hash((self.t, self.w.matrix))
        self._len = None
        self._rw = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, datum):
        return cls(datum, (0,) * datum.dim, None, check=False)

    @classmethod
    def translation(cls, datum, lam):
        return cls(datum, lam)

    @classmethod
    def finite(cls, datum, w: WeylElt):
        return cls(datum, (0,) * datum.dim, w, check=False)

    @classmethod
    def simple_reflection(cls, datum, i: int):
        return simple_reflections(datum)[i]

    @classmethod
    def from_word(cls, datum, word: Iterable[int], omega: Optional["ExtAffineWeylElt"] = None):
        out = cls.identity(datum)
        S = simple_reflections(datum)
        for i in word:
            out = out * S[i]
        return out * omega if omega is not None else out

    # -- group law ------------------------------------------------------
    def __mul__(self, other: "ExtAffineWeylElt") -> "ExtAffineWeylElt":
        lam = tuple(a + b for a, b in zip(self.t, self.w.act(other.t)))
        return ExtAffineWeylElt(self.datum, lam, self.w * other.w, check=False)

    def inverse(self) -> "ExtAffineWeylElt":
        wi = self.w.inverse()
        lam = tuple(-x for x in wi.act(self.t))
        return ExtAffineWeylElt(self.datum, lam, wi, check=False)

    def __pow__(self, k: int) -> "ExtAffineWeylElt":
        base = self if k >= 0 else self.inverse()
        out = ExtAffineWeylElt.identity(self.datum)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        return (
            isinstance(other, ExtAffineWeylElt)
            and self.t == other.t
            and self.w == other.w
            and (self.datum is other.datum or self.datum == other.datum)
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        word, om = self.reduced_word()
        return f"<{format_word(word, om)} | t={list(self.t)}>"

    def is_identity(self) -> bool:
        return not any(self.t) and self.w.is_identity()

    def in_affine_weyl(self) -> bool:
        """True when the translation part lies in the coroot lattice."""
        return self.datum.in_lambda(self.t)

    # -- action on affine roots ----------------------------------------
    def act(self, a: AffineRoot) -> AffineRoot:
        beta = self.w.act_root(a.finite_root)
        return AffineRoot(beta, a.level - _dot(beta, self.t))

    def act_raw(self, root: Vec, level: int) -> Tuple[Vec, int]:
        beta = self.w.act_root(root)
        return beta, level - _dot(beta, self.t)

    def inverse_act_raw(self, root: Vec, level: int) -> Tuple[Vec, int]:
        """w^{-1}(root, level) = (w^{-1} root, level + <root, t>)."""
        beta = self.w.inverse().act_root(root)
        return beta, level + _dot(root, self.t)

    # -- length ---------------------------------------------------------
    def length(self) -> int:
        if self._len is None:
            d = self.datum
            roots = d.roots
            perm = _root_perm(d, self.w)
            total = 0
            t = self.t
            for i, a in enumerate(roots):
                beta = roots[perm[i]]
                k = _dot(beta, t)
                rmin = 0 if _is_pos(a) else 1
                rmax = k - 1 if _is_pos(beta) else k
                if rmax >= rmin:
                    total += rmax - rmin + 1
            self._len = total
        return self._len

    def is_left_descent(self, i: int) -> bool:
        """l(s_i w) < l(w), i.e. w^{-1}(a_i) < 0."""
        root, level = simple_affine_roots(self.datum)[i]
        b, r = self.inverse_act_raw(root, level)
        return r < 0 or (r == 0 and not _is_pos(b))

    def is_right_descent(self, i: int) -> bool:
        """l(w s_i) < l(w), i.e. w(a_i) < 0."""
        root, level = simple_affine_roots(self.datum)[i]
        b, r = self.act_raw(root, level)
        return r < 0 or (r == 0 and not _is_pos(b))

    def reduced_word(self) -> Tuple[Tuple[int, ...], "ExtAffineWeylElt"]:
        """``(word, omega)`` with ``self == s_{word[0]} ... s_{word[-1]} * omega``.

        Letters are peeled off on the left, always taking the smallest index
        among the available descents.
        """
        if self._rw is None:
            S = simple_reflections(self.datum)
            word = []
            cur = self
            n = self.datum.rank
            while True:
                for i in range(n + 1):
                    if cur.is_left_descent(i):
                        word.append(i)
                        cur = S[i] * cur
                        break
                else:
                    break
            self._rw = (tuple(word), cur)
        return self._rw

    def omega(self) -> "ExtAffineWeylElt":
        return self.reduced_word()[1]

    def sort_key(self):
        """Length-lex on the canonical reduced word, then the length-zero part."""
        word, om = self.reduced_word()
        return (len(word), word, omega_index(om))


def format_word(word: Sequence[int], omega: Optional[ExtAffineWeylElt] = None) -> str:
    letters = [f"s{i}" for i in word]
    if omega is not None and not omega.is_identity():
        letters.append(f"o{omega_index(omega)}")
    return "*".join(letters) if letters else "1"


# ---------------------------------------------------------------------------
# simple reflections, Omega


def simple_affine_roots(datum: RootDatum) -> Tuple[Tuple[Vec, int], ...]:
    cached = datum.__dict__.get("_simple_affine_roots")
    if cached is None:
        theta = datum.highest_root
        cached = (tuple(-x for x in theta), 1), *((a, 0) for a in datum.simple_roots)
        cached = tuple(cached)
        datum.__dict__["_simple_affine_roots"] = cached
    return cached


def simple_reflections(datum: RootDatum) -> Tuple[ExtAffineWeylElt, ...]:
    cached = datum.__dict__.get("_affine_simple_reflections")
    if cached is None:
        s0 = ExtAffineWeylElt(datum, datum.highest_coroot, datum.reflection(datum.highest_root), check=False)
        rest = [ExtAffineWeylElt.finite(datum, s) for s in datum.simple_reflections]
        cached = (s0, *rest)
        datum.__dict__["_affine_simple_reflections"] = cached
    return cached


def affine_reflection(datum: RootDatum, a: AffineRoot) -> ExtAffineWeylElt:
    """Reflection in the affine root (beta, k): x -> s_beta x - k beta^vee."""
    beta = a.finite_root
    cv = datum.coroot[beta]
    return ExtAffineWeylElt(datum, tuple(-a.level * c for c in cv), datum.reflection(beta), check=False)


def reflect_affine_root(datum: RootDatum, a: AffineRoot, b: AffineRoot) -> AffineRoot:
    """s_a(b) = b - <b_fin, a_fin^vee> a."""
    n = _dot(b.finite_root, datum.coroot[a.finite_root])
    return AffineRoot(
        tuple(x - n * y for x, y in zip(b.finite_root, a.finite_root)),
        b.level - n * a.level,
    )


def omega_group(datum: RootDatum) -> Tuple[ExtAffineWeylElt, ...]:
    """Length-zero elements coming from the torsion of Lambda_G / Lambda."""
    cached = datum.__dict__.get("_omega_group")
    if cached is None:
        elts = {ExtAffineWeylElt.identity(datum)}
        for mu in datum.omega_representatives:
            elts.add(ExtAffineWeylElt(datum, mu, check=False).omega())
        cached = tuple(sorted(elts, key=lambda x: (not x.is_identity(), x.datum.lambda_G_coords(x.t), datum.weyl_word(x.w))))
        datum.__dict__["_omega_group"] = cached
    return cached


def omega_index(om: ExtAffineWeylElt) -> int:
    return omega_group(om.datum).index(om)


def omega_permutation(om: ExtAffineWeylElt) -> Tuple[int, ...]:
    """The permutation of simple affine reflections induced by conjugation by om."""
    S = simple_reflections(om.datum)
    inv = om.inverse()
    perm = []
    for s in S:
        c = om * s * inv
        perm.append(S.index(c))
    return tuple(perm)


# ---------------------------------------------------------------------------
# parsing helpers


def parse_word(datum: RootDatum, text: str) -> ExtAffineWeylElt:
    """Parse ``"s0*s1*o1"``; ``"1"`` or ``""`` is the identity.

    ``s`` alone stands for ``s1`` (rank one shorthand) and ``oK`` is the
    K-th element of the canonical list of length-zero elements.
    """
    text = text.strip()
    out = ExtAffineWeylElt.identity(datum)
    if text in ("", "1", "e"):
        return out
    S = simple_reflections(datum)
    for tok in text.split("*"):
        tok = tok.strip()
        if tok == "s":
            tok = "s1"
        if tok.startswith("s") and tok[1:].isdigit():
            i = int(tok[1:])
            if i > datum.rank:
                raise ValueError(f"no simple reflection {tok} in rank {datum.rank}")
            out = out * S[i]
        elif tok.startswith("o") and tok[1:].isdigit():
            om = omega_group(datum)
            i = int(tok[1:])
            if i >= len(om):
                raise ValueError(f"no length-zero element {tok}")
            out = out * om[i]
        else:
            raise ValueError(f"cannot parse word letter {tok!r}")
    return out


def element_word(x: ExtAffineWeylElt) -> str:
    word, om = x.reduced_word()
    return format_word(word, om)


# ---------------------------------------------------------------------------
# length formulas


def translation_length(datum: RootDatum, lam: Sequence[int]) -> int:
    """sum over positive roots of |<alpha, lam>|."""
    return sum(abs(_dot(a, lam)) for a in datum.positive_roots)


def length(w: ExtAffineWeylElt) -> int:
    return w.length()


def inversion_count(w: ExtAffineWeylElt) -> int:
    """Count positive affine roots made negative, by scanning levels explicitly."""
    d = w.datum
    bound = max((abs(_dot(w.w.act_root(a), w.t)) for a in d.roots), default=0) + 2
    count = 0
    for a in d.roots:
        for r in range(-bound, bound + 1):
            ar = AffineRoot(a, r)
            if ar.is_positive() and not w.act(ar).is_positive():
                count += 1
    return count


def reduced_word(w: ExtAffineWeylElt):
    return w.reduced_word()


# ---------------------------------------------------------------------------
# Bruhat order


def bruhat_leq(u: ExtAffineWeylElt, v: ExtAffineWeylElt) -> bool:
    """Bruhat order; elements in different length-zero components are incomparable."""
    if not (u.datum is v.datum or u.datum == v.datum):
        raise ValueError("elements belong to different groups")
    if u.length() > v.length():
        return False
    ou, ov = u.omega(), v.omega()
    if ou != ov:
        return False
    inv = ov.inverse()
    return _bruhat_coxeter(u * inv, v * inv)


@lru_cache(maxsize=200_000)
def _bruhat_coxeter(x: ExtAffineWeylElt, y: ExtAffineWeylElt) -> bool:
    lx, ly = x.length(), y.length()
    if lx > ly:
        return False
    if lx == ly:
        return x == y
    if lx == 0:
        return True
    S = simple_reflections(y.datum)
    word, _ = y.reduced_word()
    i = word[0]
    s = S[i]
    sy = s * y
    if x.is_left_descent(i):
        return _bruhat_coxeter(s * x, sy)
    return _bruhat_coxeter(x, sy)


def lower_interval(v: ExtAffineWeylElt) -> FrozenSet[ExtAffineWeylElt]:
    """{x : x <= v}."""
    word, om = v.reduced_word()
    S = simple_reflections(v.datum)
    cur = {ExtAffineWeylElt.identity(v.datum)}
    for i in reversed(word):
        s = S[i]
        cur |= {s * x for x in cur}
    return frozenset(x * om for x in cur)


# ---------------------------------------------------------------------------
# Demazure product


def demazure(u: ExtAffineWeylElt, v: ExtAffineWeylElt) -> ExtAffineWeylElt:
    """The Demazure product u * v."""
    word, om = v.reduced_word()
    S = simple_reflections(u.datum)
    x = u
    for i in word:
        if not x.is_right_descent(i):
            x = x * S[i]
    return x * om


# ---------------------------------------------------------------------------
# balls


def ball(datum: RootDatum, n: int, identity_component: bool = False) -> List[ExtAffineWeylElt]:
    """All elements of length <= n, sorted canonically.

    With ``identity_component`` only elements of the affine Weyl group
    ``Lambda x| W`` are returned.
    """
    if datum.central_rank and not identity_component:
        raise ValueError("the length-zero subgroup is infinite; pass identity_component=True")
    starts = [ExtAffineWeylElt.identity(datum)] if identity_component else list(omega_group(datum))
    S = simple_reflections(datum)
    seen = set(starts)
    frontier = list(starts)
    for ell in range(n):
        nxt = []
        for x in frontier:
            for s in S:
                y = s * x
                if y not in seen and y.length() == ell + 1:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=ExtAffineWeylElt.sort_key)


# ---------------------------------------------------------------------------
# parahoric types


@dataclass(frozen=True)
class ParahoricType:
    """A proper subset J of the simple affine reflections, by index 0..rank."""

    J: FrozenSet[int]
    rank: int

    def __init__(self, J, rank: int):
        J = frozenset(int(j) for j in J)
        if any(j < 0 or j > rank for j in J):
            raise ValueError(f"J must be a subset of 0..{rank}")
        if len(J) == rank + 1:
            raise ValueError("J must be a proper subset of the simple affine reflections")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "rank", rank)


def parabolic_subgroup(datum: RootDatum, J: ParahoricType, cap: int = W_J_CAP) -> List[ExtAffineWeylElt]:
    S = simple_reflections(datum)
    gens = [S[j] for j in sorted(J.J)]
    e = ExtAffineWeylElt.identity(datum)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise RuntimeError(f"W_J exceeded {cap} elements; J = {sorted(J.J)} is not of finite type")
        frontier = nxt
    return sorted(seen, key=ExtAffineWeylElt.sort_key)


def longest_element(datum: RootDatum, J) -> ExtAffineWeylElt:
    if not isinstance(J, ParahoricType):
        J = ParahoricType(J, datum.rank)
    return max(parabolic_subgroup(datum, J), key=lambda x: x.length())


def is_right_J_longest(w: ExtAffineWeylElt, J) -> bool:
    return demazure(w, longest_element(w.datum, J)) == w


def is_left_J_longest(w: ExtAffineWeylElt, J) -> bool:
    return demazure(longest_element(w.datum, J), w) == w


# ---------------------------------------------------------------------------
# m-regularity


def pairing_count(alpha: Sequence[int], w: ExtAffineWeylElt) -> int:
    """Number of affine roots (alpha, r) whose sign is flipped by w^{-1}."""
    alpha = tuple(alpha)
    if alpha not in w.datum.root_index:
        raise ValueError(f"{list(alpha)} is not a root")
    k = _dot(alpha, w.t)
    winv_alpha = w.w.inverse().act_root(alpha)
    pos_a = _is_pos(alpha)
    pos_b = _is_pos(winv_alpha)
    bound = abs(k) + 1
    count = 0
    for r in range(-bound, bound + 1):
        a_pos = r > 0 or (r == 0 and pos_a)
        s = r + k
        b_pos = s > 0 or (s == 0 and pos_b)
        if a_pos != b_pos:
            count += 1
    return count


def is_m_regular(w: ExtAffineWeylElt, m: int) -> bool:
    return all(pairing_count(a, w) >= m for a in w.datum.roots)


# ---------------------------------------------------------------------------
# minimal coset representatives


def min_coset_reps(datum: RootDatum, delta_s: Iterable[AffineRoot], length_bound: int) -> List[ExtAffineWeylElt]:
    """Elements w with l(w) <= bound and w(beta) > 0 for every beta in delta_s."""
    delta_s = [b if isinstance(b, AffineRoot) else AffineRoot(*b) for b in delta_s]
    for b in delta_s:
        if not b.is_positive():
            raise ValueError(f"{b} is not a positive affine root")
    comp = datum.central_rank > 0
    return [w for w in ball(datum, length_bound, identity_component=comp) if all(w.act(b).is_positive() for b in delta_s)]


def subsystem_closure(datum: RootDatum, delta_s: Iterable[AffineRoot], max_level: int) -> FrozenSet[AffineRoot]:
    """Affine roots generated from delta_s by its reflections, truncated to |level| <= max_level."""
    delta_s = list(delta_s)
    seen = set(delta_s) | {-b for b in delta_s}
    frontier = list(seen)
    while frontier:
        nxt = []
        for b in frontier:
            for a in delta_s:
                c = reflect_affine_root(datum, a, b)
                if abs(c.level) <= max_level and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(seen)


# ---------------------------------------------------------------------------
# additivity witnesses and finite generation of length filtrations


def _monoid_sums(gens: Sequence[Vec], depth: int) -> List[Vec]:
    dim = len(gens[0]) if gens else 0
    out = {(0,) * dim: 0}
    for k in range(1, depth + 1):
        for combo in combinations_with_replacement(range(len(gens)), k):
            v = tuple(sum(gens[i][j] for i in combo) for j in range(dim))
            out.setdefault(v, k)
    return sorted(out, key=lambda v: (out[v], v))


def _check_sign_condition(datum: RootDatum, gens: Sequence[Vec]):
    for a in datum.positive_roots:
        signs = {(_dot(a, g) > 0) - (_dot(a, g) < 0) for g in gens} - {0}
        if len(signs) > 1:
            raise ValueError(f"generators pair with opposite signs against root {list(a)}")


def find_additivity_witness(datum: RootDatum, gens: Iterable[Sequence[int]], w: ExtAffineWeylElt, check_depth: int) -> Optional[Vec]:
    """Search lam0 (a sum of <= depth generators) with l(lam lam0 w'') = l(lam) + l(lam0 w'').

    The check runs over all w'' <= w and all lam that are sums of at most
    ``check_depth`` generators.  Returns None when no candidate passes.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if not datum.in_lambda(g):
            raise ValueError(f"{list(g)} is not in the coroot lattice")
    _check_sign_condition(datum, gens)
    sums = _monoid_sums(gens, check_depth)
    below = sorted(lower_interval(w), key=ExtAffineWeylElt.sort_key)
    lengths = {lam: translation_length(datum, lam) for lam in sums}
    for lam0 in sums:
        t0 = ExtAffineWeylElt(datum, lam0, check=False)
        ok = True
        for x in below:
            y = t0 * x
            ly = y.length()
            for lam in sums:
                z = ExtAffineWeylElt(datum, lam, check=False) * y
                if z.length() != lengths[lam] + ly:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return lam0
    return None


def _lattice_points(datum: RootDatum, basis: Sequence[Vec], n_max: int) -> Dict[Vec, int]:
    """Points of span_Z(basis) with translation length <= n_max, with lengths."""
    from .lattice import hermite_normal_form, in_lattice

    H = hermite_normal_form(basis)
    if not H:
        return {(0,) * datum.dim: 0}
    box = range(-n_max, n_max + 1)
    out = {}
    for x in product(box, repeat=datum.rank):
        x = tuple(x) + (0,) * datum.central_rank
        if sum(abs(c) for c in x) > n_max:
            continue
        ell = translation_length(datum, x)
        if ell <= n_max and in_lattice(x, H):
            out[x] = ell
    return out


def filtration_fg_check(datum: RootDatum, delta_basis: Sequence[Sequence[int]], n_max: int) -> Optional[int]:
    """Smallest m <= n_max such that the length filtration of Delta is generated in degrees <= m.

    Checks ``Delta^{<=i} = U_{j=1..m} Delta^{<=j} + Delta^{<=i-j}`` for every
    ``m < i <= n_max`` by exhaustive enumeration.  Returns None on failure.
    """
    basis = [tuple(int(x) for x in v) for v in delta_basis if any(v)]
    for v in basis:
        if not datum.in_lambda(v):
            raise ValueError(f"{list(v)} is not in the coroot lattice")
    pts = _lattice_points(datum, basis, n_max)
    nonzero = sorted((p for p in pts if pts[p] > 0), key=lambda p: (pts[p], p))
    if not nonzero:
        return 0
    need = {}
    for lam in nonzero:
        ell = pts[lam]
        best = None
        for mu in nonzero:
            lm = pts[mu]
            if lm >= ell:
                break
            rest = tuple(a - b for a, b in zip(lam, mu))
            if pts.get(rest) == ell - lm:
                best = lm
                break
        need[lam] = best if best is not None else ell
    for m in range(1, n_max + 1):
        if all(need[lam] <= m for lam in nonzero if pts[lam] > m):
            return m
    return None


def filtration_union_holds(datum: RootDatum, delta_basis, n_max: int, m: int) -> bool:
    """Direct check of the union identity by forming the product sets (test oracle)."""
    basis = [tuple(v) for v in delta_basis if any(v)]
    pts = _lattice_points(datum, basis, n_max)
    by_len: Dict[int, List[Vec]] = {}
    for p, ell in pts.items():
        by_len.setdefault(ell, []).append(p)

    def upto(i):
        return [p for p, ell in pts.items() if ell <= i]

    for i in range(m + 1, n_max + 1):
        target = set(upto(i))
        got = set()
        for j in range(1, m + 1):
            A, B = upto(j), upto(i - j)
            for a in A:
                for b in B:
                    c = tuple(x + y for x, y in zip(a, b))
                    if c in target:
                        got.add(c)
        if got != target:
            return False
    return True


# ---------------------------------------------------------------------------
# Hilbert bases of rational cones


def _in_cone(x, gens) -> bool:
    from .linalg import solve

    if not any(x):
        return True
    dim = len(x)
    rk = min(dim, len(gens))
    for k in range(1, rk + 1):
        for sub in combinations(gens, k):
            A = [[Fraction(g[i]) for g in sub] for i in range(dim)]
            sol = solve(A, [Fraction(v) for v in x])
            if sol is not None and all(c >= 0 for c in sol):
                # only accept when the subset is independent (Caratheodory)
                from .linalg import rank as _rank

                if _rank([list(g) for g in sub]) == k:
                    return True
    return False


def hilbert_basis(generators: Iterable[Sequence[int]]) -> List[Vec]:
    """Minimal generating set of (cone spanned by generators) intersected with Z^d."""
    gens = sorted({tuple(int(x) for x in g) for g in generators if any(g)})
    if not gens:
        return []
    dim = len(gens[0])
    if dim > 3:
        raise ValueError("hilbert_basis supports ambient rank <= 3")
    for g in gens:
        if _in_cone(tuple(-x for x in g), gens):
            raise ValueError("the cone is not pointed")
    h = None
    for K in range(1, 50):
        for cand in product(range(-K, K + 1), repeat=dim):
            if all(_dot(cand, g) > 0 for g in gens):
                h = cand
                break
        if h:
            break
    if h is None:  # pragma: no cover
        raise ValueError("no positive grading found")
    H = sum(_dot(h, g) for g in gens)
    lo = [sum(min(0, g[i]) for g in gens) for i in range(dim)]
    hi = [sum(max(0, g[i]) for g in gens) for i in range(dim)]
    cands = []
    for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if any(x) and _dot(h, x) <= H and _in_cone(x, gens):
            cands.append(x)
    cands.sort(key=lambda x: (_dot(h, x), x))
    basis = []
    for x in cands:
        reducible = False
        for y in cands:
            if _dot(h, y) >= _dot(h, x):
                break
            z = tuple(a - b for a, b in zip(x, y))
            if _in_cone(z, gens):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return sorted(basis)
