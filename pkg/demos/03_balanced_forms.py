"""Making linear forms perfectly balanced, then merging two of them.

A form is perfectly balanced when every non-extreme Hamming layer of the cube
is split evenly by its sign.  Doubling the variables fixes balance without
changing the form on the anti-diagonal y = -x, and the dual-simulation merge
builds one form on k^2 variables that behaves like l1 on row-constant inputs
and like l2 on column-constant ones.
"""
from gapforge.construct.balance import balance_double, merge_dual, restriction, verify_merge
from gapforge.predicate import LinearForm, check_perfectly_balanced

l = LinearForm((3, -1))
print("3x1 - x2 balanced?", check_perfectly_balanced(l))
d = balance_double(l)
print("doubled form:", d.form.weights)
print("doubled balanced?", check_perfectly_balanced(d.form), "restricts back:", restriction(d.form) == l)

l1, l2 = LinearForm((2, 1)), LinearForm((1, 3))
m = merge_dual(l1, l2)
rep = verify_merge(l1, l2, m)
print("merged weights:", [str(w) for w in m.form.weights])
print("merge properties:", [(c.name, c.passed) for c in rep.clauses])
