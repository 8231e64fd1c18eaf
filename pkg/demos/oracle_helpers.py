"""Small shared helper for the demos: compare closed-form gadget moments with enumeration."""
from gapforge.construct.gadget import GadgetMoments, chain_oracle


def gadget_moments_agree(vectors, q):
    n = len(vectors[0])
    c = [sum(qi * v[k] for qi, v in zip(q, vectors)) for k in range(n)]
    cc = [[sum(qi * v[k] * v[l] for qi, v in zip(q, vectors)) for l in range(n)] for k in range(n)]
    B = max(1, max(abs(x) for v in vectors for x in v))
    names, mu, M, D = GadgetMoments(vectors, c, cc, B).matrix()
    on, omu, oM, od = chain_oracle(vectors, q, B)
    return names == on and all(a * od == b * D for a, b in zip(mu, omu)) and bool((M * od == oM * D).all())
