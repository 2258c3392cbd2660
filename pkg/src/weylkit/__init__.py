"""weylkit: extended affine Weyl groups, twisted classes and generalized traces.

Everything is exact: integers, fractions and cyclotomic numbers.
"""
from .cyclotomic import Cyc
from .cartan import RootDatum, WeylElt, build_root_datum, load_datum
from .affine import ExtAffineWeylElt, demazure, parse_word, element_word
from .twist import FrobeniusTwist, load_sigma, enumerate_fiber_classes
from .gentrace import (
    DeltaGroup,
    DeltaElt,
    FiniteDim,
    Free,
    Induced,
    DirectSum,
    Twist,
    gen_trace,
    induce,
    induced_trace,
    homology,
    verify_trace_formula,
)
from .packets import PacketDescription, packet_classes, verify_eq_M

__version__ = "0.1.0"
