"""From the four-form core to a sized end-to-end construction.

The core is a set of 22 integer vectors on which exactly two of four shifted
linear forms are positive, with four distributions whose first and second
moments coincide.  Permutation gadgets hide which distribution is in use, a
unary encoding turns bounded integers into ±1 digits, and the pipeline plan
counts every variable without materializing anything.
"""
from fractions import Fraction

from gapforge.construct.core import core_instance, solve_core_parameters, verify_core
from gapforge.construct.gadget import build_gadget, verify_gadget
from gapforge.construct.pipeline import plan
from oracle_helpers import gadget_moments_agree

core = core_instance()
print("core certificate passes:", verify_core(core).passed)

sol = solve_core_parameters(1, 2, 7)
print(f"solver: d={sol.d}, e={sol.e}, p=({sol.p1}, {sol.p2}, {sol.p3})")

# a three-vector gadget admits exactly the 6 permutations of its inputs
g = build_gadget([(0,), (1,), (2,)], 2)
res = verify_gadget(g)
print("gadget outputs:", len(res.outputs), "all permutations:", res.ok)

# closed-form chained-gadget moments against brute-force enumeration
q = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
print("moments exact on a sample configuration:", gadget_moments_agree([(0, 1), (2, 0), (1, 1)], q))

out = plan()
for s in out["stages"]:
    print(f"{s['stage']:>8}: {s['inputs']} -> {s['outputs']}")
print("plan status:", out["status"])
