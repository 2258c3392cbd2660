"""
Conjugacy classes over an elliptic element
==========================================

Over an elliptic finite part, the twisted classes of the fiber are counted by
det(1 - wbar sigma).
"""

from weylkit import build_root_datum, FrobeniusTwist, enumerate_fiber_classes
from weylkit.twist import element_to_json
from weylkit.lattice import det_one_minus
from weylkit.packets import PacketDescription

d = build_root_datum("A", 2)
sigma = FrobeniusTwist(d)
wbar = d.coxeter_element
classes = enumerate_fiber_classes(wbar, sigma, "lambda")
for c in classes:
    print(element_to_json(c.base))

p = PacketDescription(d, sigma, wbar)
print("count", len(classes), "det(1-u)", det_one_minus(p.linearization()))

###############################################################################
# In the adjoint group the two classes over s in A1 are identified.

from weylkit.packets import packet_partition
from weylkit.twist import parse_finite_word

ad = build_root_datum("A", 1, isogeny="adjoint")
p = PacketDescription(ad, FrobeniusTwist(ad), parse_finite_word(ad, "s"))
print([len(b) for b in packet_partition(p)])
