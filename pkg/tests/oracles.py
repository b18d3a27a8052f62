"""Independent oracles shared by the tests.

None of these go through the Smith normal form: they use Hermite reduction
of the relation lattice, brute-force assignment, or determinantal divisors.
"""

import itertools

from monad_forge.matrix import hermite_basis


def leibniz_det(ring, rows):
    n = len(rows)
    total = ring.zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.one
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term if inv % 2 == 0 else total - term
    return total


def determinantal_divisors(ring, A):
    """gcd of all k x k minors, k = 1..min(m, n)."""
    out = []
    for k in range(1, min(A.shape) + 1):
        g = ring.zero
        for rs in itertools.combinations(range(A.nrows), k):
            for cs in itertools.combinations(range(A.ncols), k):
                g = ring.gcd(g, leibniz_det(ring, [[A[r, c] for c in cs] for r in rs]))
        out.append(g)
    return out


class LatticeReducer:
    """Unique representatives of ``A^g / L`` for a full-rank relation lattice ``L``."""

    def __init__(self, M):
        self.ring = M.ring
        self.g = M.generators
        cols = M.relations.columns()
        self.rows = hermite_basis(M.ring, cols, self.g)
        self.full = len(self.rows) == self.g

    def reduce(self, v):
        R = self.ring
        v = list(v)
        for row in self.rows:
            p = next(i for i, x in enumerate(row) if x)
            red = R.reduce(v[p], row[p])
            q = R.exact_div(v[p] - red, row[p])
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)


def closure_elements(M, cap=100_000):
    """Every element of a finite module, found by closing {0} under adding
    generators and multiplying by the ring's scalar generators."""
    red = LatticeReducer(M)
    if not red.full:
        return None
    R = M.ring
    g = M.generators
    units = [tuple(R.one if i == j else R.zero for i in range(g)) for j in range(g)]
    zero = red.reduce([R.zero] * g)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            cands = [tuple(a + b for a, b in zip(x, u)) for u in units]
            cands += [tuple(s * a for a in x) for s in R.scalar_generators()]
            for c in cands:
                c = red.reduce(c)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if len(seen) > cap:
                        raise RuntimeError("closure exceeded cap")
        frontier = nxt
    return seen


def brute_hom_count(M, N):
    """Count generator assignments into N that kill every relation of M."""
    elems = sorted(closure_elements(N), key=repr)
    red = LatticeReducer(N)
    zero = red.reduce([N.ring.zero] * N.generators)
    rels = M.relations.columns()
    count = 0
    for images in itertools.product(elems, repeat=M.generators):
        ok = True
        for c in rels:
            v = [N.ring.zero] * N.generators
            for coeff, img in zip(c, images):
                v = [a + coeff * b for a, b in zip(v, img)]
            if red.reduce(v) != zero:
                ok = False
                break
        count += ok
    return count
