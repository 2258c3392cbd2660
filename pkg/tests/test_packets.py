import random

import pytest
from hypothesis import given, strategies as st

from weylkit import gentrace as gt
from weylkit.cartan import build_root_datum
from weylkit.lattice import det_one_minus
from weylkit.packets import (
    PacketDescription,
    UnsupportedCase,
    packet_classes,
    packet_partition,
    verify_eq_M,
)
from weylkit.twist import FrobeniusTwist, NonEllipticError, is_elliptic, parse_finite_word

A1 = build_root_datum("A", 1)
A2 = build_root_datum("A", 2)


def packet(d, word, perm=None):
    return PacketDescription(d, FrobeniusTwist(d, perm), parse_finite_word(d, word))


def test_counts():
    assert packet_classes(packet(A1, "s")).count == 2
    assert packet_classes(packet(A2, "cox")).count == 3
    with pytest.raises(NonEllipticError, match="non-elliptic"):
        packet(A1, "1")


def test_eq_M_examples():
    p = packet(A1, "s")
    G = p.delta_group()
    assert G.umat == [[-1]]
    triv = gt.FiniteDim([[[1]]], [[1]])
    sign = gt.FiniteDim([[[-1]]], [[1]])
    rep = verify_eq_M(p, triv)
    assert rep.equal and rep.lhs == 2 and [v for _, v in rep.terms] == [1, 1]
    rep = verify_eq_M(p, sign)
    assert rep.equal and rep.lhs == 0 and sorted(int(v.to_fraction()) for _, v in rep.terms) == [-1, 1]
    q = packet(A2, "cox")
    triv2 = gt.FiniteDim([[[1]], [[1]]], [[1]])
    rep = verify_eq_M(q, triv2)
    assert rep.equal and rep.lhs == 3 and [v for _, v in rep.terms] == [1, 1, 1]


def test_eq_M_unsupported_for_adjoint():
    p = packet(build_root_datum("A", 1, isogeny="adjoint"), "s")
    with pytest.raises(UnsupportedCase):
        verify_eq_M(p, gt.FiniteDim([[[1]]], [[1]]))


def test_partitions():
    assert [len(b) for b in packet_partition(packet(A1, "s"))] == [1, 1]
    ad = build_root_datum("A", 1, isogeny="adjoint")
    assert [len(b) for b in packet_partition(packet(ad, "s"))] == [2]
    ad2 = build_root_datum("A", 2, isogeny="adjoint")
    blocks = packet_partition(packet(ad2, "cox"))
    assert 3 % len(blocks) == 0 and len({len(b) for b in blocks}) == 1


CASES = [(A1, None), (A2, None), (A2, (1, 0)), (build_root_datum("B", 2), None),
         (build_root_datum("G", 2), None), (build_root_datum("A", 3), (2, 1, 0))]


@given(st.integers(0, 10**6))
def test_eq_M_random(seed):
    rng = random.Random(seed)
    d, perm = rng.choice(CASES)
    sigma = FrobeniusTwist(d, perm)
    ws = [w for w in d.weyl_elements if is_elliptic(w, sigma)]
    p = PacketDescription(d, sigma, rng.choice(ws))
    rep = packet_classes(p)
    assert rep.count == abs(det_one_minus(p.linearization())) == len(rep.classes)
    G = p.delta_group()
    M = gt.random_module(G, rng, depth=1)
    assert verify_eq_M(p, M).equal
    blocks = packet_partition(p)
    assert len({len(b) for b in blocks}) == 1
