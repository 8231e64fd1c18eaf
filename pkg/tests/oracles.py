"""Brute-force reference implementations, written without the library's fast paths."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product


def cube(k):
    """All ±1 vectors in the library's bit order (bit i set means x_{i+1} = +1)."""
    return [tuple(1 if m >> i & 1 else -1 for i in range(k)) for m in range(1 << k)]


def fourier_coefficient(fn, k, S):
    """f̂_S = 2^-k Σ_x f(x) Π_{i∈S} x_i, S 0-based."""
    total = 0
    for x in cube(k):
        chi = 1
        for i in S:
            chi *= x[i]
        total += fn(x) * chi
    return Fraction(total, 1 << k)


def leibniz_det(A):
    n = len(A)
    total = Fraction(0)
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= A[i][p[i]]
        total += term
    return total


def psd_by_minors(rows):
    """Every principal minor nonnegative (Leibniz determinants)."""
    n = len(rows)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            if leibniz_det([[Fraction(rows[i][j]) for j in idx] for i in idx]) < 0:
                return False
    return True


def layer_balanced(weights, constant=0):
    """Exactly half of each non-extreme layer positive; None if some value is 0."""
    k = len(weights)
    for j in range(1, k):
        pos = tot = 0
        for x in cube(k):
            if sum(v == 1 for v in x) != j:
                continue
            val = sum(w * v for w, v in zip(weights, x)) + constant
            if val == 0:
                return None
            pos += val > 0
            tot += 1
        if 2 * pos != tot:
            return False
    return True


def injective_sum(units, edges, free, k, b, pair, alpha_label="a"):
    """Σ over injective maps of free vertex labels into citizens 1..k-1 (0-based
    positions in b), of Π b over units times Π pair over edges, divided by the number
    of label permutations that fix the multiset of units and edges."""
    def auts():
        count = 0
        U = sorted(units, key=str)
        Ed = sorted((tuple(sorted(e, key=str)) for e in edges), key=str)
        for p in permutations(free):
            m = dict(zip(free, p))
            m[alpha_label] = alpha_label
            U2 = sorted((m[u] for u in units), key=str)
            E2 = sorted((tuple(sorted((m[u], m[v]), key=str)) for u, v in edges), key=str)
            count += U2 == U and E2 == Ed
        return count

    total = Fraction(0)
    for img in permutations(range(1, k), len(free)):
        m = dict(zip(free, img))
        m[alpha_label] = 0
        v = Fraction(1)
        for u in units:
            v *= b[m[u]]
        for u, w in edges:
            v *= pair(m[u], m[w])
        total += v
    return total / auts()


def all_subsets_advantage(fhat, bias_of, k, sizes):
    """Σ_S f̂_S · bias(S) over subsets of the given sizes, S 0-based."""
    total = Fraction(0)
    for d in sizes:
        for S in combinations(range(k), d):
            c = fhat(S)
            if c:
                total += c * bias_of(S)
    return total


def digit_moments_by_placement(ranges, dist):
    """Moments of (1, digits...) where each integer value v in [a, b] is spread over
    b - a digits with v - a of them +1, every placement equally likely."""
    acc = {}
    for x, p in dist:
        opts = []
        for (a, b), v in zip(ranges, x):
            opts.append([tuple(1 if i in S else -1 for i in range(b - a))
                         for S in combinations(range(b - a), v - a)])
        count = 1
        for o in opts:
            count *= len(o)
        for combo in product(*opts):
            y = (1,) + tuple(d for ds in combo for d in ds)
            for i in range(len(y)):
                for j in range(i, len(y)):
                    acc[(i, j)] = acc.get((i, j), Fraction(0)) + Fraction(p) / count * y[i] * y[j]
    return acc


def gadget_moments_agree(vectors, q):
    """Closed-form chained-gadget moments against the triple-permutation enumeration."""
    from gapforge.construct.gadget import GadgetMoments, chain_oracle

    n = len(vectors[0])
    c = [sum(qi * v[k] for qi, v in zip(q, vectors)) for k in range(n)]
    cc = [[sum(qi * v[k] * v[l] for qi, v in zip(q, vectors)) for l in range(n)] for k in range(n)]
    B = max(1, max(abs(x) for v in vectors for x in v))
    names, mu, M, D = GadgetMoments(vectors, c, cc, B).matrix()
    on, omu, oM, od = chain_oracle(vectors, q, B)
    return names == on and all(a * od == b * D for a, b in zip(mu, omu)) and bool((M * od == oM * D).all())
