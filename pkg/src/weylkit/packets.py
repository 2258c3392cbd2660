"""Embedding classes over an elliptic element and the packet-level trace identity."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .cartan import RootDatum, WeylElt
from .cyclotomic import ZERO, Cyc
from .gentrace import DeltaElt, DeltaGroup, DeltaModule, gen_trace, trace_on_homology
from .lattice import det_one_minus
from .twist import (
    FrobeniusTwist,
    NonEllipticError,
    TwistedElt,
    _lambda_matrix,
    elliptic_witness,
    enumerate_fiber_classes,
    linear_part,
    refine_by_larger_lattice,
)


class UnsupportedCase(ValueError):
    pass


def _lambda_G_is_lambda(d: RootDatum) -> bool:
    return d._hnf_lambda == d._hnf_lambda_G


@dataclass
class PacketDescription:
    datum: RootDatum
    sigma: FrobeniusTwist
    wbar: WeylElt
    lambda0: tuple = ()

    def __post_init__(self):
        if self.sigma.datum is not self.datum and self.sigma.datum != self.datum:
            raise ValueError("sigma belongs to a different root datum")
        wit = elliptic_witness(self.wbar, self.sigma, "lambda")
        if wit is not None:
            raise NonEllipticError(wit)
        if not _lambda_G_is_lambda(self.datum) or self.lambda0:
            wit = elliptic_witness(self.wbar, self.sigma, "quotient", self.lambda0)
            if wit is not None:
                raise NonEllipticError(wit)

    def linearization(self) -> List[List[int]]:
        """wbar sigma on the coroot lattice, coroot coordinates."""
        return _lambda_matrix(self.datum, linear_part(self.wbar, self.sigma))

    def delta_group(self) -> DeltaGroup:
        return DeltaGroup(self.linearization())


@dataclass
class PacketReport:
    classes: List[TwistedElt]
    count: int
    det: int


def packet_classes(p: PacketDescription) -> PacketReport:
    classes = enumerate_fiber_classes(p.wbar, p.sigma, "lambda")
    det = abs(det_one_minus(p.linearization()))
    if len(classes) != det:  # pragma: no cover - would be an invariant violation
        raise AssertionError(f"class count {len(classes)} != det(1-u) = {det}")
    return PacketReport(classes, len(classes), det)


@dataclass
class EqMReport:
    lhs: Cyc
    rhs: Cyc
    terms: list = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def verify_eq_M(p: PacketDescription, M: DeltaModule) -> EqMReport:
    """Alternating u-trace on H_*(Lambda, M) against generalized traces over the packet."""
    d = p.datum
    if not _lambda_G_is_lambda(d) or d.central_rank:
        raise UnsupportedCase(
            "only the case Lambda_G = Lambda (semisimple simply connected) is supported; "
            "the general case needs induction from a Levi subgroup"
        )
    G = p.delta_group()
    M.validate(G)
    lhs = trace_on_homology(G, M)
    rhs = ZERO
    terms = []
    for c in packet_classes(p).classes:
        y = d.lambda_coords(c.base.t)
        v = gen_trace(DeltaElt(G, tuple(y), 1), M)
        terms.append((tuple(y), v))
        rhs = rhs + v
    return EqMReport(lhs, rhs, terms)


def packet_partition(p: PacketDescription) -> List[List[TwistedElt]]:
    """Blocks of Lambda-classes identified by conjugation with Lambda_G."""
    blocks = refine_by_larger_lattice(packet_classes(p).classes, p.sigma, p.lambda0)
    sizes = {len(b) for b in blocks}
    if len(sizes) > 1:  # pragma: no cover
        raise AssertionError("partition blocks have unequal sizes")
    return blocks
