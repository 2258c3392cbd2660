"""
Lengths and Demazure products in affine A2
==========================================

Elements of the extended affine Weyl group are built from words in the
simple reflections, or from a translation and a finite part.
"""

from weylkit import build_root_datum, parse_word, demazure
from weylkit import affine as af

d = build_root_datum("A", 2)
x = parse_word(d, "s0*s1*s2*s1")
print("length:", x.length())
print("reduced word:", af.format_word(*af.reduced_word(x)))
print("inversions:", af.inversion_count(x))

###############################################################################
# The Demazure product keeps the length from collapsing when a reflection is
# repeated.

u = parse_word(d, "s0*s1")
v = parse_word(d, "s1*s2")
z = demazure(u, v)
print(af.element_word(z), z.length())

###############################################################################
# Pairing counts measure how far an element is from the walls.

for a in d.positive_roots:
    print(a, af.pairing_count(a, x))
