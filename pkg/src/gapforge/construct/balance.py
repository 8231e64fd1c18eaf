"""Perfect balancing by doubling, the dual-simulation merge of two balanced forms,
and the matching row/column instance transformation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import floor

import numpy as np

from ..exactnum import rat, rat_str
from ..gapverify import GapInstance
from ..polytope import profile_of_distribution
from ..predicate import Constraint, LinearForm, Predicate
from ..report import Report

F = Fraction
LIMB = 30


def _power_of_two(k: int) -> int:
    if k < 1 or k & (k - 1):
        raise ValueError(f"k = {k} is not a power of 2")
    return k.bit_length() - 1


def exact_signs(weights, X: np.ndarray, constant: int = 0) -> np.ndarray:
    """sign(w·x + constant) for each row of X, with arbitrarily large integer weights.

    Weights are split into 30-bit limbs; each limb's dot product fits in int64
    and carries are propagated exactly.
    """
    w = [int(v) for v in weights]
    X = np.asarray(X, dtype=np.int64)
    top = max([abs(v) for v in w] + [abs(constant), 1]).bit_length()
    nl = top // LIMB + 1
    mask = (1 << LIMB) - 1
    sums = []
    for t in range(nl):
        limb = np.array([(abs(v) >> (LIMB * t) & mask) * (1 if v >= 0 else -1) for v in w], dtype=np.int64)
        s = X @ limb
        c = (abs(constant) >> (LIMB * t) & mask) * (1 if constant >= 0 else -1)
        sums.append(s + c)
    carry = np.zeros(X.shape[0], dtype=np.int64)
    digits = []
    for s in sums:
        s = s + carry
        carry = np.floor_divide(s, 1 << LIMB)
        digits.append(s - carry * (1 << LIMB))
    # value = carry·2^(30·nl) + Σ digits_t 2^(30 t), with 0 <= digits < 2^30
    sign = np.sign(carry)
    nonzero_low = np.zeros(X.shape[0], dtype=bool)
    for d in digits:
        nonzero_low |= d != 0
    return np.where(carry != 0, sign, np.where(nonzero_low, 1, 0)).astype(np.int8)


def _cube(k: int) -> np.ndarray:
    m = np.arange(1 << k)
    return np.where((m[:, None] >> np.arange(k)) & 1, 1, -1).astype(np.int64)


def _integer_weights(l: LinearForm) -> list[int]:
    w, c, _ = l.integer_scaled()
    if c:
        raise ValueError("balanced forms carry no constant term")
    return list(w)


# ---------------------------------------------------------------------------
# tri-valued balanced forms and doubling

def balanced_core(k: int) -> LinearForm:
    """A form on k = 2^j variables over {-1, 0, 1} that is perfectly balanced.

    g(u_1) = u_1 and g'(u, v) = B·h(v - u) + g(u), with h(d) = Σ 5^i d_i (zero only
    at d = 0 since |d_i| <= 2) and B = max|g| + 1.
    """
    j = _power_of_two(k)
    g = [1]
    for _ in range(j):
        B = sum(abs(x) for x in g) + 1
        n = len(g)
        h = [5**i for i in range(n)]
        g = [gi - B * hi for gi, hi in zip(g, h)] + [B * hi for hi in h]
    return LinearForm(tuple(g))


def check_balanced_values(l: LinearForm, values=(-1, 0, 1)) -> tuple[bool, dict | None]:
    """Generalized balance: for every non-constant multiset of values, the distinct
    arrangements split evenly between positive and negative (zeros fail)."""
    from itertools import combinations_with_replacement

    k = l.k
    for ms in combinations_with_replacement(values, k):
        if len(set(ms)) == 1:
            continue
        pos = neg = 0
        for arr in set(permutations(ms)):
            v = l.value(arr)
            if v == 0:
                return False, {"multiset": list(ms), "zero_at": list(arr)}
            pos += v > 0
            neg += v < 0
        if pos != neg:
            return False, {"multiset": list(ms), "positive": pos, "negative": neg}
    return True, None


@dataclass(frozen=True)
class Doubled:
    form: LinearForm  # on (x_1..x_k, y_1..y_k)
    core: LinearForm
    B: int


def balance_double(l: LinearForm) -> Doubled:
    """l' = B·g((x + y)/2) + l(x), perfectly balanced, with l'(x, -x) = l(x) identically."""
    k = l.k
    _power_of_two(k)
    if l.constant:
        raise ValueError("balanced forms carry no constant term")
    # l'(x, -x) = l(x), so a zero of l is a zero of l'
    if k <= 16 and (exact_signs(_integer_weights(l), _cube(k)) == 0).any():
        raise ValueError("the form vanishes somewhere on the cube")
    g = balanced_core(k)
    top = sum(abs(w) for w in l.weights)
    if 3**k <= 1 << 16:
        vals = [abs(g.value(u)) for u in product((-1, 0, 1), repeat=k)]
        low = min(v for v in vals if v)
    else:
        low = 1  # integer coefficients
    B = floor(top / low) + 1
    half = [F(B) * gi / 2 for gi in g.weights]
    w = tuple(hi + li for hi, li in zip(half, l.weights)) + tuple(half)
    return Doubled(LinearForm(w), g, B)


def restriction(l2k: LinearForm) -> LinearForm:
    """Substitute y_i = -x_i symbolically in a form on (x, y)."""
    k = l2k.k // 2
    w = l2k.weights
    return LinearForm(tuple(w[i] - w[k + i] for i in range(k)), l2k.constant)


def pad_to_power_of_two(l: LinearForm) -> tuple[LinearForm, int, int]:
    """Append dummy variables up to a power of 2.

    Dummies get weights 1, 2, 4, ..., and l is scaled by M so they only
    break ties where l = 0: their sum is odd, hence never 0.
    Returns (padded form, number of dummies, M).
    """
    k = l.k
    target = 1 << (k - 1).bit_length()
    extra = target - k
    if extra == 0:
        return l, 0, 1
    w, c, _ = l.integer_scaled()
    dummy = [1 << t for t in range(extra)]
    M = sum(dummy) + 1
    return LinearForm(tuple(M * x for x in w) + tuple(dummy), M * c), extra, M


# ---------------------------------------------------------------------------
# dual-simulation merge

@dataclass(frozen=True)
class Merged:
    form: LinearForm  # on x_ij, row-major
    k: int
    grid: tuple[tuple[Fraction, ...], ...]
    scale: Fraction  # l3 on column-constant inputs equals scale·l2
    terms: tuple  # (y, a, b, B_yab) in ladder order, largest first


def _grid(w: list, wp: list) -> list[list[Fraction]]:
    """Nonnegative-free exact solution of row sums w and column sums wp."""
    k = len(w)
    T = sum(w)
    if T != 0:
        return [[wi * wj / T for wj in wp] for wi in w]
    G = [[F(0)] * k for _ in range(k)]
    G[0][0] = w[0] + wp[0]
    for j in range(1, k):
        G[0][j] = wp[j]
    for i in range(1, k):
        G[i][0] = w[i]
    return G


def ladder_terms(k: int):
    """(y, a, b) triples: y != 0, a and b with bit i0 = 0 where i0 is y's lowest set bit."""
    out = []
    for y in range(1, k):
        i0 = (y & -y).bit_length() - 1
        for a in range(k):
            if a >> i0 & 1:
                continue
            for b in range(k):
                if b >> i0 & 1:
                    continue
                out.append((y, a, b))
    return out


def merge_dual(l1: LinearForm, l2: LinearForm) -> Merged:
    """A single form on k^2 variables simulating l1 on row-constant and l2 on column-constant inputs.

    l2 is rescaled by the positive factor Σw/Σw' when the weight totals differ.
    Constraint terms B_yab (x_ab - x_ab' - x_a'b + x_a'b') with a' = a⊕y,
    b' = b⊕y follow a geometric ladder B_s = B_0·3^s from the bottom rung,
    B_0 = ⌊L/2⌋ + 1 with L the total absolute grid weight: a nonzero term is
    at least 2 in size, and 2·B_0·3^s exceeds 4·Σ_{t<s} B_0·3^t + L.
    """
    k = l1.k
    _power_of_two(k)
    if l2.k != k:
        raise ValueError("the two forms must have the same number of variables")
    if l1.constant or l2.constant:
        raise ValueError("balanced forms carry no constant term")
    w, wp = list(l1.weights), list(l2.weights)
    s1, s2 = sum(w), sum(wp)
    if (s1 == 0) != (s2 == 0) or s1 * s2 < 0:
        raise ValueError("weight totals have incompatible signs; no positive rescaling matches them")
    scale = F(1) if s2 == 0 else s1 / s2
    wp = [scale * x for x in wp]
    G = _grid(w, wp)
    L = sum(abs(x) for row in G for x in row)
    B0 = floor(L / 2) + 1
    triples = ladder_terms(k)
    n = len(triples)
    weights = [G[i][j] for i in range(k) for j in range(k)]
    terms = []
    for rank, (y, a, b) in enumerate(triples):
        B = B0 * 3 ** (n - 1 - rank)
        ap, bp = a ^ y, b ^ y
        weights[a * k + b] += B
        weights[a * k + bp] -= B
        weights[ap * k + b] -= B
        weights[ap * k + bp] += B
        terms.append((y, a, b, B))
    return Merged(LinearForm(tuple(weights)), k, tuple(tuple(r) for r in G), scale, tuple(terms))


def verify_merge(l1: LinearForm, l2: LinearForm, merged: Merged) -> Report:
    """Check the four merge properties and perfect balance by full enumeration of 2^(k^2) inputs."""
    k, l3 = merged.k, merged.form
    rep = Report()
    G = merged.grid
    bad = next(({"row": i + 1} for i in range(k) if sum(G[i]) != l1.weights[i]), None)
    bad = bad or next(({"column": j + 1} for j in range(k) if sum(G[i][j] for i in range(k)) != merged.scale * l2.weights[j]), None)
    rep.add("grid_sums", bad is None, bad)

    bad = None
    for x in product((-1, 1), repeat=k):
        rows = [x[i] for i in range(k) for _ in range(k)]
        cols = [x[j] for _ in range(k) for j in range(k)]
        if l3.value(rows) != l1.value(x):
            bad = {"row_constant": list(x), "l3": rat_str(l3.value(rows)), "l1": rat_str(l1.value(x))}
            break
        if l3.value(cols) != merged.scale * l2.value(x):
            bad = {"column_constant": list(x), "l3": rat_str(l3.value(cols)), "l2": rat_str(l2.value(x))}
            break
    rep.add("simulation", bad is None, bad)

    w = _integer_weights(l3)
    X = _cube(k * k).reshape(-1, k, k)
    row_const = (X == X[:, :, :1]).all(axis=(1, 2))
    col_const = (X == X[:, :1, :]).all(axis=(1, 2))
    perms = [np.array(p) for p in permutations(range(k))]
    col_avg = np.zeros(len(X), dtype=np.int64)
    row_avg = np.zeros(len(X), dtype=np.int64)
    for p in perms:
        col_avg += exact_signs(w, X[:, :, p].reshape(len(X), -1))
        row_avg += exact_signs(w, X[:, p, :].reshape(len(X), -1))
    idx = np.nonzero(~row_const & (col_avg != 0))[0]
    rep.add("column_average", idx.size == 0, {"input": X[idx[0]].tolist(), "sum": int(col_avg[idx[0]])} if idx.size else None)
    idx = np.nonzero(~col_const & (row_avg != 0))[0]
    rep.add("row_average", idx.size == 0, {"input": X[idx[0]].tolist(), "sum": int(row_avg[idx[0]])} if idx.size else None)

    ok, wit = balanced_by_layers(w, k * k)
    rep.add("perfectly_balanced", ok, wit)
    return rep


def balanced_by_layers(w, n: int) -> tuple[bool, dict | None]:
    """Layer test with exact signs; any zero on a non-extreme layer fails."""
    X = _cube(n)
    s = exact_signs(w, X)
    layer = (X > 0).sum(axis=1)
    for j in range(1, n):
        sel = s[layer == j]
        if (sel == 0).any():
            return False, {"layer": j, "reason": "zero value"}
        if 2 * int((sel > 0).sum()) != sel.size:
            return False, {"layer": j, "positive": int((sel > 0).sum()), "total": int(sel.size)}
    return True, None


# ---------------------------------------------------------------------------
# instance transformation

@dataclass(frozen=True)
class TwoFormConstraint:
    """sign(l_which(z_1 x_φ(1), ..., z_k x_φ(k))), φ a permutation of the k variables."""

    which: int  # 1 or 2
    phi: tuple[int, ...]
    signs: tuple[int, ...]


@dataclass(frozen=True)
class TwoFormInstance:
    k: int
    l1: LinearForm
    l2: LinearForm
    constraints: tuple[TwoFormConstraint, ...]
    dists: tuple  # per constraint: ((x_1..x_k), probability) over the k variables


def _lift(x, k):
    return tuple(x[i] for i in range(k) for _ in range(k))


def instance_transform(inst: TwoFormInstance, merged: Merged | None = None) -> tuple[GapInstance, Merged]:
    """Every l1-constraint becomes k! constraints l3(Y) with Y_ij = z_i X_{φ(i), π(j)};
    every l2-constraint becomes Y_ij = z_j X_{φ(j), π(i)}, the transpose, so that
    on lifted inputs x_ij = x_i the copies reproduce l1 and l2 respectively.
    """
    k = inst.k
    merged = merged or merge_dual(inst.l1, inst.l2)
    P = Predicate.from_ltf(merged.form, "l3")
    cons, dists = [], []
    for c, d in zip(inst.constraints, inst.dists):
        if sorted(c.phi) != list(range(k)):
            raise ValueError("constraints must use each of the k variables once")
        for pi in permutations(range(k)):
            phi, z = [], []
            for i in range(k):
                for j in range(k):
                    if c.which == 1:
                        phi.append(c.phi[i] * k + pi[j])
                        z.append(c.signs[i])
                    else:
                        phi.append(c.phi[j] * k + pi[i])
                        z.append(c.signs[j])
            cons.append(Constraint(P, tuple(phi), tuple(z)))
            dists.append(tuple((tuple(_lift(x, k)[v] for v in phi), p) for x, p in d))
    # the bias profile of the lifted shared distribution
    base = [(tuple(x), rat(p)) for x, p in inst.dists[0]]
    bias = profile_of_distribution([(_lift(x, k), p) for x, p in base], k * k)
    return GapInstance(k * k, cons, bias, dists), merged


def toy_two_form_instance() -> TwoFormInstance:
    """k = 2, l1 = 2x1 + x2 and l2 = x1 + 3x2, each applied once; both hold at (1, 1)."""
    l1, l2 = LinearForm((2, 1)), LinearForm((1, 3))
    cons = (TwoFormConstraint(1, (0, 1), (1, 1)), TwoFormConstraint(2, (0, 1), (1, 1)))
    d = (((1, 1), F(1)),)
    return TwoFormInstance(2, l1, l2, cons, (d, d))
