"""Exact advantage of the rounding schemes for monarchy-type predicates.

For monarchy the min-sign scheme beats a random assignment by at least the
citizen Fourier coefficient at every satisfying vertex.  For almost-monarchy the
exact leading-order advantage is negative at the vertex with the smallest
margin until the arity reaches 111; this script prints that crossover.
"""
from gapforge.rounding.almost_monarchy import vertex_advantage_closed, vertex_classes
from gapforge.rounding.monarchy import monarchy_advantage

res = monarchy_advantage((1, 1, 1, 1, 1))
print(f"monarchy k=5, all ones: A/eps = {res.advantage} >= floor {res.floor}")

for k in (15, 30, 60, 100, 110, 111, 150):
    worst = min(vertex_classes(k), key=lambda c: vertex_advantage_closed(k, *c))
    v = vertex_advantage_closed(k, *worst)
    print(f"k={k:>3}: worst vertex class (president={worst[0]:+d}, dissenters={worst[1]}) "
          f"A/eps = {float(v):+.5f}")
