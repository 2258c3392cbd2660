"""Randomized and exhaustive invariant checks.

Each check compares two independent computations and returns a
:class:`CheckResult`.  The CLI ``selftest`` runs all of them at small sizes;
the acceptance tests run the headline ones at full size.  Random instances
are seeded per instance, so results do not depend on the worker count.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import affine as af
from . import gentrace as gt
from . import linalg as la
from .cartan import build_root_datum, weyl_group, weyl_group_order
from .cyclotomic import cyclotomic_polynomial
from .fixtures import canonical_dumps, fixture_to_json, load_fixture
from .lattice import (
    alt_exterior_trace,
    coinvariants,
    coset_representatives,
    det_bareiss,
    det_one_minus,
    hermite_normal_form,
    lattice_index,
    matmul,
    matrix_order,
    one_minus,
    smith_normal_form,
    transpose,
)
from .packets import PacketDescription, packet_classes, packet_partition, verify_eq_M
from .parallel import pmap
from .twist import (
    FrobeniusTwist,
    TwistedElt,
    _lambda_matrix,
    count_fiber_classes,
    element_from_json,
    element_to_json,
    enumerate_fiber_classes,
    fiber_class_of,
    is_elliptic,
    is_sigma_torsion,
    is_sigma_torsion_bruteforce,
    linear_part,
    twisted_conjugate,
)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg):
        if len(self.failures) < 5:
            self.failures.append(str(msg))
        else:
            self.failures.append("...")
            self.failures = self.failures[:6]

    def to_json(self) -> dict:
        return {"name": self.name, "cases": self.cases, "ok": self.ok, "failures": self.failures}


def _rng(seed: int, i: int) -> random.Random:
    return random.Random(seed * 1_000_003 + i)


# ---------------------------------------------------------------------------
# lattice


def companion(n: int):
    """Companion matrix of the n-th cyclotomic polynomial."""
    p = cyclotomic_polynomial(n)
    d = len(p) - 1
    M = [[0] * d for _ in range(d)]
    for i in range(1, d):
        M[i][i - 1] = 1
    for i in range(d):
        M[i][d - 1] = -p[i]
    return M


def random_elliptic_matrix(rng, max_rank: int = 4):
    """Block sum of cyclotomic companions (n > 1), conjugated by a unimodular matrix."""
    pool = [n for n in (2, 3, 4, 5, 6, 8, 10, 12) if len(cyclotomic_polynomial(n)) - 1 <= max_rank]
    blocks, left = [], rng.randint(1, max_rank)
    while left:
        n = rng.choice([n for n in pool if len(cyclotomic_polynomial(n)) - 1 <= left])
        blocks.append(companion(n))
        left -= len(blocks[-1])
    r = sum(len(b) for b in blocks)
    u = [[0] * r for _ in range(r)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                u[off + i][off + j] = x
        off += len(b)
    P = gt.random_unimodular(rng, r, steps=rng.randint(0, 4))
    return matmul(matmul(P, u), gt._int_inverse(P))


def check_coinvariants(seed: int = 0, count: int = 100) -> CheckResult:
    """|Lambda_u| from Smith form = det(1-u) = alternating trace on exterior powers = Hermite box size."""
    res = CheckResult("lattice.coinvariant_order")
    for i in range(count):
        u = random_elliptic_matrix(_rng(seed, i))
        order = coinvariants(u).order
        d = det_one_minus(u)
        alt = alt_exterior_trace(u)
        H = hermite_normal_form(transpose(one_minus(u)))
        box = lattice_index(H, len(u))
        res.cases += 1
        if not (order == d == alt == box):
            res.fail(f"u={u}: snf {order}, det {d}, alt {alt}, hnf {box}")
    return res


def check_snf(seed: int = 0, count: int = 100) -> CheckResult:
    res = CheckResult("lattice.smith_form")
    for i in range(count):
        rng = _rng(seed, i)
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        s = smith_normal_form(A)
        res.cases += 1
        if matmul(matmul(s.U, s.D), s.V) != A:
            res.fail(f"A != U D V for {A}")
        nz = [x for x in s.diag if x]
        if any(b % a for a, b in zip(nz, nz[1:])) or any(x < 0 for x in s.diag):
            res.fail(f"not a divisibility chain: {s.diag}")
        if abs(det_bareiss(s.U)) != 1 or abs(det_bareiss(s.V)) != 1:
            res.fail("transforms are not unimodular")
    return res


# ---------------------------------------------------------------------------
# cartan


CARTAN_CASES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)]


def check_weyl_groups() -> CheckResult:
    res = CheckResult("cartan.weyl_group_order")
    for typ, n in CARTAN_CASES:
        d = build_root_datum(typ, n)
        W = weyl_group(d)
        res.cases += 1
        if len(W) != weyl_group_order(typ, n):
            res.fail(f"{typ}{n}: {len(W)} elements")
        roots = set(d.roots)
        for s in d.simple_reflections:
            if {tuple(s.act_root(a)) for a in roots} != roots:
                res.fail(f"{typ}{n}: roots not stable")
        for a in d.roots:
            if sum(x * y for x, y in zip(a, d.coroot[a])) != 2:
                res.fail(f"{typ}{n}: <a, a^v> != 2 for {a}")
        ad = build_root_datum(typ, n, "adjoint")
        if len(ad.omega_representatives) != abs(det_bareiss(d.cartan_matrix)):
            res.fail(f"{typ}{n}: |Lambda_ad/Lambda| != det C")
    return res


# ---------------------------------------------------------------------------
# affine


def check_length_threeway(types=(("A", 1), ("A", 2), ("C", 2), ("G", 2)), max_len: int = 10) -> CheckResult:
    """Closed-form length, reduced-word length and inversion count agree; translations match the root sum."""
    res = CheckResult("affine.length_threeway")
    for typ, n in types:
        d = build_root_datum(typ, n)
        for w in af.ball(d, max_len):
            res.cases += 1
            ell = af.length(w)
            word, om = af.reduced_word(w)
            inv = af.inversion_count(w)
            if not (ell == len(word) == inv):
                res.fail(f"{typ}{n} {af.element_word(w)}: {ell}, {len(word)}, {inv}")
            if af.ExtAffineWeylElt.from_word(d, word, om) != w:
                res.fail(f"{typ}{n}: reduced word does not rebuild {af.element_word(w)}")
            if w.w.is_identity():
                formula = sum(max(sum(a * b for a, b in zip(al, w.t)), 0) for al in d.roots)
                if formula != ell:
                    res.fail(f"{typ}{n}: translation {w.t} has length {ell}, root sum {formula}")
    return res


def check_length_laws(seed: int = 0, pairs: int = 300) -> CheckResult:
    """l(uv) <= l(u) + l(v); l(w(lam)) = l(lam); Omega has length 0 and permutes simple reflections."""
    res = CheckResult("affine.length_laws")
    for typ, n, iso in (("A", 2, "sc"), ("A", 2, "adjoint"), ("C", 2, "adjoint"), ("G", 2, "sc")):
        d = build_root_datum(typ, n, iso)
        B = af.ball(d, 5)
        rng = _rng(seed, n)
        for _ in range(pairs):
            u, v = rng.choice(B), rng.choice(B)
            res.cases += 1
            if (u * v).length() > u.length() + v.length():
                res.fail(f"subadditivity fails for {af.element_word(u)}, {af.element_word(v)}")
        for w in B:
            if not w.w.is_identity() or not d.in_lambda(w.t):
                continue
            for x in d.weyl_elements:
                res.cases += 1
                if af.translation_length(d, x.act(w.t)) != w.length():
                    res.fail(f"l(w(lam)) != l(lam) for {w.t}")
        S = set(af.simple_reflections(d))
        for om in af.omega_group(d):
            res.cases += 1
            if om.length() != 0 or {om * s * om.inverse() for s in S} != S:
                res.fail(f"Omega element {af.element_word(om)} misbehaves")
    return res


def _bruhat_down_set(d, z, B):
    return frozenset(x for x in B if x.length() <= z.length() and af.bruhat_leq(x, z))


def check_demazure_law(types=(("A", 1), ("A", 2)), max_total: int = 6) -> CheckResult:
    """{u'v' : u' <= u, v' <= v} = {x : x <= u*v}, the right side by Bruhat tests over a ball."""
    res = CheckResult("affine.demazure_law")
    for typ, n in types:
        d = build_root_datum(typ, n)
        B = af.ball(d, max_total)
        intervals = {}
        down = {}
        for u in B:
            for v in B:
                if u.length() + v.length() > max_total:
                    continue
                res.cases += 1
                Iu = intervals.setdefault(u, af.lower_interval(u))
                Iv = intervals.setdefault(v, af.lower_interval(v))
                z = af.demazure(u, v)
                lhs = {a * b for a in Iu for b in Iv}
                if z not in down:
                    down[z] = _bruhat_down_set(d, z, B)
                if lhs != down[z]:
                    res.fail(f"{typ}{n}: {af.element_word(u)} * {af.element_word(v)}")
                if (z == u * v) != ((u * v).length() == u.length() + v.length()):
                    res.fail(f"{typ}{n}: u*v = uv criterion fails")
                if not (af.bruhat_leq(u, z) and af.bruhat_leq(v, z)):
                    res.fail(f"{typ}{n}: u*v is not above u and v")
    return res


def check_demazure_assoc(seed: int = 0, count: int = 1000, max_len: int = 6) -> CheckResult:
    res = CheckResult("affine.demazure_associativity")
    per = {}
    for typ, n in (("A", 1), ("A", 2)):
        d = build_root_datum(typ, n)
        per[(typ, n)] = af.ball(d, max_len)
    keys = sorted(per)
    for i in range(count):
        rng = _rng(seed, i)
        B = per[keys[i % len(keys)]]
        u, v, w = rng.choice(B), rng.choice(B), rng.choice(B)
        res.cases += 1
        if af.demazure(af.demazure(u, v), w) != af.demazure(u, af.demazure(v, w)):
            res.fail(f"{af.element_word(u)}, {af.element_word(v)}, {af.element_word(w)}")
    return res


def check_regularity(seed: int = 0, max_len: int = 8, pairs: int = 500) -> CheckResult:
    """Sandwich bound around the translation part, and closure of m-regularity under Demazure products."""
    res = CheckResult("affine.regularity")
    d = build_root_datum("A", 2)
    B = af.ball(d, max_len)
    for w in B:
        for a in d.roots:
            res.cases += 1
            k = abs(sum(x * y for x, y in zip(a, w.t)))
            c = af.pairing_count(a, w)
            if not (k - 1 <= c <= k + 1):
                res.fail(f"sandwich fails at {af.element_word(w)}, root {a}")
            if w.w.is_identity() and c != k:
                res.fail(f"translation pairing {w.t}, {a}: {c} != {k}")
        m = min(af.pairing_count(a, w) for a in d.roots)
        if af.is_m_regular(w.inverse(), m) != af.is_m_regular(w, m) or af.is_m_regular(w.inverse(), m + 1) != af.is_m_regular(w, m + 1):
            res.fail(f"inverse symmetry fails at {af.element_word(w)}")
    for i in range(pairs):
        rng = _rng(seed, i)
        w, w2 = rng.choice(B), rng.choice(B)
        m = min(af.pairing_count(a, w) for a in d.roots)
        res.cases += 1
        for z in (af.demazure(w, w2), af.demazure(w2, w)):
            if not af.is_m_regular(z, m):
                res.fail(f"{af.element_word(w)} is {m}-regular but a Demazure product with {af.element_word(w2)} is not")
    return res


def check_parahoric(seed: int = 0, count: int = 60) -> CheckResult:
    """J-longest criteria and l(w*w_J*lam*w_J) <= l(w*w_J) + l(lam)."""
    res = CheckResult("affine.parahoric")
    d = build_root_datum("A", 2)
    B = af.ball(d, 5)
    lams = [x for x in af.ball(d, 4) if x.w.is_identity()]
    for J in ([], [0], [1], [1, 2], [0, 2]):
        wJ = af.longest_element(d, J)
        res.cases += 1
        if not (af.is_right_J_longest(wJ, J) and af.is_left_J_longest(wJ, J)):
            res.fail(f"w_J not J-longest for J={J}")
        WJ = af.parabolic_subgroup(d, af.ParahoricType(J, d.rank))
        if any(x.length() > wJ.length() for x in WJ):
            res.fail(f"w_J not maximal for J={J}")
        for i in range(count):
            rng = _rng(seed, 97 * len(J) + i)
            w, lam = rng.choice(B), rng.choice(lams)
            res.cases += 1
            a = af.demazure(w, wJ)
            lhs = af.demazure(af.demazure(a, lam), wJ).length()
            if lhs > a.length() + lam.length():
                res.fail(f"J={J}: bound fails for {af.element_word(w)}, {lam.t}")
            if af.is_right_J_longest(w, J) != all((w * x).length() <= w.length() for x in WJ):
                res.fail(f"J={J}: right J-longest criterion disagrees for {af.element_word(w)}")
    return res


def random_sublattice_basis(rng, d):
    """Finite-index sublattice of the coroot lattice, in ambient coordinates."""
    r = d.rank
    while True:
        M = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)]
        if det_bareiss(M) != 0 and abs(det_bareiss(M)) <= 6:
            return [d.from_lambda_coords(row) for row in M]


def check_filtration_fg(seed: int = 0, n_max: int = 20, subgroups: int = 3, verify: bool = True) -> CheckResult:
    """A generation degree m exists up to n_max; the union identity is rechecked with product sets."""
    res = CheckResult("affine.filtration_fg")
    for typ, n in (("A", 1), ("A", 2), ("B", 2), ("G", 2)):
        d = build_root_datum(typ, n)
        bases = [list(d.lambda_basis)]
        rng = _rng(seed, n + ord(typ))
        bases += [random_sublattice_basis(rng, d) for _ in range(subgroups)]
        for basis in bases:
            res.cases += 1
            m = af.filtration_fg_check(d, basis, n_max)
            if m is None:
                res.fail(f"{typ}{n}: no generation degree up to {n_max} for {basis}")
                continue
            if verify and not af.filtration_union_holds(d, basis, n_max, m):
                res.fail(f"{typ}{n}: union identity fails with m={m} for {basis}")
    return res


def check_hilbert() -> CheckResult:
    res = CheckResult("affine.hilbert_basis")
    cases = [
        ([(1, 0), (0, 1)], [(0, 1), (1, 0)]),
        ([(1, 0), (1, 2)], [(1, 0), (1, 1), (1, 2)]),
        ([(2, 4)], [(1, 2)]),
        ([(1, 0), (1, 3)], [(1, 0), (1, 1), (1, 2), (1, 3)]),
    ]
    for gens, want in cases:
        res.cases += 1
        got = sorted(af.hilbert_basis(gens))
        if got != sorted(want):
            res.fail(f"{gens}: {got}")
        # every box point of the cone is a nonnegative combination of the basis
        for x in product(range(0, 7), range(-1, 7)):
            if af._in_cone(x, gens) and not _monoid_member(x, got):
                res.fail(f"{x} not generated for {gens}")
    return res


def _monoid_member(x, basis, depth: int = 12) -> bool:
    reach = {(0,) * len(x)}
    for _ in range(depth):
        if tuple(x) in reach:
            return True
        reach = reach | {tuple(a + b for a, b in zip(p, g)) for p in reach for g in basis if all(abs(a + b) <= 12 for a, b in zip(p, g))}
    return tuple(x) in reach


# ---------------------------------------------------------------------------
# twist and packets


TWIST_CASES = [
    ("A", 1, "sc", None),
    ("A", 2, "sc", None),
    ("A", 2, "sc", (1, 0)),
    ("A", 3, "sc", None),
    ("A", 3, "sc", (2, 1, 0)),
    ("B", 2, "sc", None),
    ("C", 3, "sc", None),
    ("G", 2, "sc", None),
    ("D", 4, "sc", (2, 1, 0, 3)),
    ("A", 1, "adjoint", None),
    ("A", 2, "adjoint", None),
    ("A", 3, "adjoint", None),
    ("B", 2, "adjoint", None),
]


def elliptic_cases(limit_per: int = 12):
    out = []
    for typ, n, iso, perm in TWIST_CASES:
        d = build_root_datum(typ, n, iso)
        sigma = FrobeniusTwist(d, perm)
        found = [w for w in d.weyl_elements if is_elliptic(w, sigma)]
        out.extend((d, sigma, w) for w in found[:limit_per])
    return out


def check_fiber_counts() -> CheckResult:
    """Class counts equal |det(1 - linearization)|, and named small cases."""
    res = CheckResult("twist.fiber_counts")
    for d, sigma, w in elliptic_cases():
        res.cases += 1
        u = _lambda_matrix(d, linear_part(w, sigma))
        want = abs(det_bareiss(one_minus(u)))
        got = count_fiber_classes(w, sigma)
        classes = enumerate_fiber_classes(w, sigma)
        if not (got == want == len(classes) == len({fiber_class_of(c) for c in classes})):
            res.fail(f"{d!r} {w}: {got} classes, det {want}")
        # conjugating a representative stays in its class
        mu = d.lambda_basis[0]
        c = classes[-1]
        if fiber_class_of(twisted_conjugate(mu, c, sigma)) != fiber_class_of(c):
            res.fail(f"{d!r}: conjugation moved a class")
    A1 = build_root_datum("A", 1)
    A2 = build_root_datum("A", 2)
    res.cases += 2
    if count_fiber_classes(A1.simple_reflections[0], FrobeniusTwist(A1)) != 2:
        res.fail("A1 count != 2")
    if count_fiber_classes(A2.coxeter_element, FrobeniusTwist(A2)) != 3:
        res.fail("A2 Coxeter count != 3")
    return res


def check_refinement() -> CheckResult:
    """Lambda_G-conjugation partitions classes into equal blocks; A1 adjoint merges to one block."""
    res = CheckResult("twist.refinement")
    for d, sigma, w in elliptic_cases(6):
        p = PacketDescription(d, sigma, w)
        blocks = packet_partition(p)
        res.cases += 1
        sizes = {len(b) for b in blocks}
        total = sum(len(b) for b in blocks)
        if len(sizes) != 1 or total != packet_classes(p).count:
            res.fail(f"{d!r} {w}: block sizes {sorted(len(b) for b in blocks)}")
        if d._hnf_lambda == d._hnf_lambda_G and len(blocks) != total:
            res.fail(f"{d!r}: simply connected case should be discrete")
    A1ad = build_root_datum("A", 1, "adjoint")
    res.cases += 1
    if len(packet_partition(PacketDescription(A1ad, FrobeniusTwist(A1ad), A1ad.simple_reflections[0]))) != 1:
        res.fail("A1 adjoint does not merge to one block")
    return res


def check_torsion(seed: int = 0, count: int = 200) -> CheckResult:
    res = CheckResult("twist.torsion")
    cases = [("A", 1, "sc", None), ("A", 2, "sc", (1, 0)), ("B", 2, "adjoint", None), ("G", 2, "sc", None)]
    for typ, n, iso, perm in cases:
        d = build_root_datum(typ, n, iso)
        sigma = FrobeniusTwist(d, perm)
        B = af.ball(d, 4)
        rng = _rng(seed, n)
        for _ in range(count // len(cases)):
            w = rng.choice(B)
            res.cases += 1
            if is_sigma_torsion(w, sigma) != is_sigma_torsion_bruteforce(w, sigma):
                res.fail(f"{typ}{n}: {af.element_word(w)}")
    return res


def check_packets(seed: int = 0, count: int = 40) -> CheckResult:
    """Packet counts and the packet-level trace identity against random modules."""
    res = CheckResult("packets.eq_M")
    cases = [(d, s, w) for d, s, w in elliptic_cases(4) if d._hnf_lambda == d._hnf_lambda_G]
    A1 = build_root_datum("A", 1)
    A2 = build_root_datum("A", 2)
    res.cases += 2
    if packet_classes(PacketDescription(A1, FrobeniusTwist(A1), A1.simple_reflections[0])).count != 2:
        res.fail("A1 packet count != 2")
    if packet_classes(PacketDescription(A2, FrobeniusTwist(A2), A2.coxeter_element)).count != 3:
        res.fail("A2 Coxeter packet count != 3")

    def one(i):
        rng = _rng(seed, i)
        d, sigma, w = cases[i % len(cases)]
        p = PacketDescription(d, sigma, w)
        G = p.delta_group()
        if G.rank > 3:
            return None
        M = gt.random_module(G, rng, depth=1)
        rep = verify_eq_M(p, M)
        return None if rep.equal else f"{d!r} {w}: {rep.lhs} != {rep.rhs}"

    for msg in pmap(one, range(count)):
        res.cases += 1
        if msg:
            res.fail(msg)
    return res


# ---------------------------------------------------------------------------
# gentrace


def trace_formula_instance(seed: int, i: int, orders=(2, 3, 4, 6)):
    rng = _rng(seed, i)
    order = orders[i % len(orders)]
    # no elliptic rank-3 automorphism has order exactly 3
    rank = rng.choice({2: [1, 2, 3], 3: [2], 4: [2, 3], 6: [2, 3]}[order])
    u = gt.random_elliptic_u(rng, rank, orders=(order,))
    G = gt.DeltaGroup(u)
    M = gt.random_module(G, rng)
    return G, M


def check_trace_formula(seed: int = 0, count: int = 200) -> CheckResult:
    res = CheckResult("gentrace.trace_formula")

    def one(i):
        G, M = trace_formula_instance(seed, i)
        M.validate(G)
        rep = gt.verify_trace_formula(M, G)
        return None if rep.equal else f"u={G.umat}: lhs {rep.lhs} rhs {rep.rhs}"

    for msg in pmap(one, range(count)):
        res.cases += 1
        if msg:
            res.fail(msg)
    return res


def induced_instance(seed: int, i: int):
    rng = _rng(seed, i)
    while True:
        r = rng.choice([1, 2, 3])
        G = gt.DeltaGroup(gt.random_elliptic_u(rng, r))
        basis = gt.random_sublattice(G, rng)
        sub = gt.DeltaGroup(gt.restrict_automorphism(G.umat, basis))
        M0 = gt.random_module(sub, rng, depth=1)
        k = rng.choice([1, 1, 1, 2, 3])
        if not gt._elliptic_power(G, k):
            continue
        lam = tuple(rng.randint(-2, 2) for _ in range(r))
        return gt.DeltaElt(G, lam, k), basis, M0


def check_induced(seed: int = 0, count: int = 100) -> CheckResult:
    """Induction formula against the filtration engine on the Induced module."""
    res = CheckResult("gentrace.induced_identity")

    def one(i):
        delta, basis, M0 = induced_instance(seed, i)
        a = gt.induced_trace(delta, basis, M0)
        b = gt.gen_trace(delta, gt.Induced(basis, M0))
        return None if a == b else f"{delta}: formula {a}, filtration {b}"

    for msg in pmap(one, range(count)):
        res.cases += 1
        if msg:
            res.fail(msg)
    return res


def filtration_specs(G, M):
    """Three different valid filtration specs for a module (the default among them)."""
    r = G.rank
    e = [[1 if j == t else 0 for j in range(r)] for t in range(r)]
    neg = [[-x for x in v] for v in e]
    doubled = gt.orbit_closure(G, e + neg + [[2 * x for x in v] for v in e])
    sums = gt.orbit_closure(G, e + neg + [[a + b for a, b in zip(e[0], v)] for v in e])
    specs = [None, gt.FiltrationSpec(lambda1=doubled), gt.FiltrationSpec(lambda1=sums)]
    # a proper generating subspace where one exists: the u-orbit of the first basis vector
    blocks = M.blocks(G)
    gens = []
    proper = False
    for b in blocks:
        d = b.dim
        if d == 0:
            gens.append(None)
            continue
        v = [1 if j == 0 else 0 for j in range(d)]
        vs = [v]
        for _ in range(d):
            vs.append(la.mat_vec(b.U, vs[-1]))
        sp = la.Subspace(d, vs)
        try:
            gt._check_generating(gt.Block(b.basis, b.rho, b.U, sp.rows))
        except ValueError:
            gens.append(None)
            continue
        proper = proper or sp.dim < d
        gens.append(sp.rows)
    specs.append(gt.FiltrationSpec(generators=gens))
    return specs, proper


def check_filtration_independence(seed: int = 0, count: int = 40) -> CheckResult:
    """Same generalized trace for several filtrations; stopping index past the closed-form capture point."""
    res = CheckResult("gentrace.filtration_independence")

    def one(i):
        rng = _rng(seed, i)
        r = rng.choice([1, 2])
        G = gt.DeltaGroup(gt.random_elliptic_u(rng, r))
        M = gt.random_module(G, rng, depth=1)
        delta = gt.DeltaElt(G, tuple(rng.randint(-2, 2) for _ in range(r)), 1)
        specs, _ = filtration_specs(G, M)
        vals = []
        for spec in specs:
            v, runs = gt.gen_trace_detail(delta, M, spec)
            for run in runs:
                if run.stable_from > run.capture_bound or run.stop_index < run.capture_bound:
                    return f"stabilisation index {run.stable_from} beyond capture {run.capture_bound}"
            vals.append(v)
        if len(set(vals)) != 1:
            return f"values differ across filtrations: {vals}"
        if isinstance(M, gt.FiniteDim) and vals[0] != gt.plain_trace(delta, M):
            return "finite-dimensional trace mismatch"
        return None

    for msg in pmap(one, range(count)):
        res.cases += 1
        if msg:
            res.fail(msg)
    return res


def check_trace_laws(seed: int = 0, count: int = 40) -> CheckResult:
    """Additivity, the twist law, conjugation invariance and Shapiro dimensions."""
    res = CheckResult("gentrace.laws")
    from .cyclotomic import Cyc

    for i in range(count):
        rng = _rng(seed, i)
        r = rng.choice([1, 2])
        G = gt.DeltaGroup(gt.random_elliptic_u(rng, r))
        A = gt.random_module(G, rng, depth=1)
        B = gt.random_module(G, rng, depth=1)
        lam = tuple(rng.randint(-2, 2) for _ in range(r))
        delta = gt.DeltaElt(G, lam, 1)
        S = gt.DirectSum([A, B])
        res.cases += 1
        if gt.gen_trace(delta, S) != gt.gen_trace(delta, A) + gt.gen_trace(delta, B):
            res.fail("gen_trace not additive")
        if gt.trace_on_homology(G, S) != gt.trace_on_homology(G, A) + gt.trace_on_homology(G, B):
            res.fail("homology trace not additive")
        chi = Cyc.root_of_unity(G.order, rng.randrange(G.order))
        if gt.gen_trace(delta, gt.Twist(A, chi)) != chi * gt.gen_trace(delta, A):
            res.fail("twist law fails")
        mu = tuple(rng.randint(-2, 2) for _ in range(r))
        if not gt.conjugation_invariance_check(mu, delta, A):
            res.fail("conjugation invariance fails")
        # Shapiro: an Induced module of finite index against its explicit realisation
        basis = [[rng.choice([1, 2]) if a == b else 0 for b in range(r)] for a in range(r)]
        try:
            sub = gt.DeltaGroup(gt.restrict_automorphism(G.umat, basis))
        except ValueError:
            basis = [[2 if a == b else 0 for b in range(r)] for a in range(r)]
            sub = gt.DeltaGroup(gt.restrict_automorphism(G.umat, basis))
        M0 = gt.random_finite(sub, rng, max_dim=4)
        ind = gt.Induced(basis, M0)
        real = gt.finite_realization(G, ind)
        h1 = [h.dim for h in gt.homology(G, ind)]
        h2 = [h.dim for h in gt.homology(G, real)]
        h0 = [h.dim for h in gt.homology(sub, M0)]
        if not (h1 == h2 == h0):
            res.fail(f"Shapiro dimensions differ: {h1} {h2} {h0}")
        if gt.trace_on_homology(G, ind) != gt.trace_on_homology(G, real):
            res.fail("Shapiro traces differ")
        if gt.gen_trace(delta, ind) != gt.plain_trace(delta, real):
            res.fail("induced generalized trace differs from the realisation")
    return res


def check_weyl_averaging(seed: int = 0, count: int = 50) -> CheckResult:
    res = CheckResult("gentrace.weyl_averaging")
    data = [build_root_datum("A", 1), build_root_datum("A", 2)]

    def one(i):
        rng = _rng(seed, i)
        d = data[i % 2]
        perm = d.diagram_automorphisms[rng.randrange(len(d.diagram_automorphisms))]
        V = gt.random_extended(d, rng, perm)
        try:
            gt.weyl_averaged_trace(V)
        except AssertionError as e:
            return str(e)
        return None

    for msg in pmap(one, range(count)):
        res.cases += 1
        if msg:
            res.fail(msg)
    return res


def check_serialization(seed: int = 0, count: int = 30) -> CheckResult:
    res = CheckResult("cli.round_trip")
    for i in range(count):
        rng = _rng(seed, i)
        r = rng.choice([1, 2, 3])
        G = gt.DeltaGroup(gt.random_elliptic_u(rng, r))
        M = gt.random_module(G, rng)
        text = canonical_dumps(fixture_to_json(G, M))
        G2, M2 = load_fixture(text)
        res.cases += 1
        if G2 != G or M2 != M or canonical_dumps(fixture_to_json(G2, M2)) != text:
            res.fail("module fixture round trip fails")
    for typ, n, iso in (("A", 2, "adjoint"), ("G", 2, "sc"), ("C", 2, "adjoint")):
        d = build_root_datum(typ, n, iso)
        for w in af.ball(d, 4):
            res.cases += 1
            if af.parse_word(d, af.element_word(w)) != w or element_from_json(d, element_to_json(w)) != w:
                res.fail(f"element round trip fails for {af.element_word(w)}")
    return res


# ---------------------------------------------------------------------------


def selftest_suite(seed: int = 0, scale: int = 1):
    """All checks at selftest size; ``scale`` multiplies the random case counts."""
    s = max(1, scale)
    return [
        lambda: check_snf(seed, 30 * s),
        lambda: check_coinvariants(seed, 30 * s),
        check_weyl_groups,
        lambda: check_length_threeway(max_len=6),
        lambda: check_length_laws(seed, 40 * s),
        lambda: check_demazure_law(max_total=4),
        lambda: check_demazure_assoc(seed, 100 * s, 5),
        lambda: check_regularity(seed, 5, 60 * s),
        lambda: check_parahoric(seed, 10 * s),
        lambda: check_filtration_fg(seed, 10, 1),
        check_hilbert,
        check_fiber_counts,
        check_refinement,
        lambda: check_torsion(seed, 40 * s),
        lambda: check_packets(seed, 10 * s),
        lambda: check_trace_formula(seed, 20 * s),
        lambda: check_induced(seed, 20 * s),
        lambda: check_filtration_independence(seed, 10 * s),
        lambda: check_trace_laws(seed, 8 * s),
        lambda: check_weyl_averaging(seed, 10 * s),
        lambda: check_serialization(seed, 10 * s),
    ]
