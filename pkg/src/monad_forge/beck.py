"""Split coequalizers and a randomized probe of split-exactness over field extensions."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import BadParameters, NotACofork, NotParallel, TooLarge
from .fpmod import Morphism, hom_enumerate
from .matrix import Matrix, MatrixEquations
from .ring import FPX

# -- split coequalizers ----------------------------------------------------------


def _check_fork(f: Morphism, g: Morphism, q: Morphism):
    if f.dom != g.dom or f.cod != g.cod:
        raise NotParallel("split coequalizer needs a parallel pair")
    if q.dom != f.cod:
        raise NotACofork("q must start at the common codomain")
    if q @ f != q @ g:
        raise NotACofork("q does not coequalize the pair")


def split_identities_hold(f, g, q, s, t) -> bool:
    Y, Q = f.cod, q.cod
    return (q @ s == Morphism.identity(Q) and f @ t == Morphism.identity(Y)
            and g @ t == s @ q)


def split_coequalizer_solve(f: Morphism, g: Morphism, q: Morphism, bound: int = 10_000,
                            method: str = "linear"):
    """``(s, t)`` with ``q s = 1``, ``f t = 1`` and ``g t = s q``, or ``None``.

    ``method="linear"`` solves the three identities (plus well-definedness
    of ``s`` and ``t``) as one linear system over the ring.
    ``method="exhaustive"`` searches the finite hom sets directly.
    """
    _check_fork(f, g, q)
    X, Y, Q = f.dom, f.cod, q.cod
    if method == "exhaustive":
        for M in (Y, X):
            if not M.is_finite or M.size > bound:
                raise TooLarge("exhaustive split search needs finite modules within the bound")
        sections = [s for s in hom_enumerate(Q, Y, bound) if q @ s == Morphism.identity(Q)]
        retracts = [t for t in hom_enumerate(Y, X, bound) if f @ t == Morphism.identity(Y)]
        for s, t in itertools.product(sections, retracts):
            if g @ t == s @ q:
                return s, t
        return None
    R = X.ring
    eqs = MatrixEquations(R)
    S = eqs.unknown("S", Y.generators, Q.generators)
    T = eqs.unknown("T", X.generators, Y.generators)
    rY, rX, rQ = Y.relations, X.relations, Q.relations
    z = {}
    for name, m, n in [("Z1", rQ.ncols, Q.generators), ("Z2", rY.ncols, Y.generators),
                       ("Z3", rY.ncols, Y.generators), ("Z4", rY.ncols, rQ.ncols),
                       ("Z5", rX.ncols, rY.ncols)]:
        z[name] = eqs.unknown(name, m, n)
    # q s = 1 (mod relations of Q)
    eqs.equation([(q.matrix, S, None), (rQ, z["Z1"], None)], Matrix.identity(R, Q.generators))
    # f t = 1 (mod relations of Y)
    eqs.equation([(f.matrix, T, None), (rY, z["Z2"], None)], Matrix.identity(R, Y.generators))
    # g t - s q = 0 (mod relations of Y)
    eqs.equation([(g.matrix, T, None), (-Matrix.identity(R, Y.generators), S, q.matrix),
                  (rY, z["Z3"], None)], Matrix.zeros(R, Y.generators, Y.generators))
    # s and t respect relations
    eqs.equation([(None, S, rQ), (rY, z["Z4"], None)], Matrix.zeros(R, Y.generators, rQ.ncols))
    eqs.equation([(None, T, rY), (rX, z["Z5"], None)], Matrix.zeros(R, X.generators, rY.ncols))
    sol = eqs.solve()
    if sol is None:
        return None
    return Morphism(Q, Y, sol["S"], check=False), Morphism(Y, X, sol["T"], check=False)


# -- finite fields as extensions of a prime field --------------------------------


class ExtensionField:
    """``GF(p^k)`` as ``GF(p)[x]/(m)`` for a fixed irreducible ``m`` of degree ``k``.

    ``m`` is the first monic irreducible of degree ``k`` in the
    enumeration order of :meth:`PolynomialsModP.monic`.
    """

    def __init__(self, p: int, k: int):
        if not 1 <= k <= 4:
            raise BadParameters(f"extension degree must be in 1..4, got {k}")
        ring = FPX(p)  # raises for p > 31 or composite
        self.p, self.k = p, k
        self.modulus = next(m for m in ring.monic(k)
                            if len(ring.factor(m).factors) == 1 and ring.factor(m).factors[0][1] == 1)
        coeffs = list(self.modulus.coeffs)
        # companion matrix: multiplication by x on the basis 1, x, ..., x^(k-1)
        self.companion = [[0] * k for _ in range(k)]
        for i in range(1, k):
            self.companion[i][i - 1] = 1
        for i in range(k):
            self.companion[i][k - 1] = (-coeffs[i]) % p
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        m = self.modulus.coeffs
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for i in range(k + 1):
                    prod[d - k + i] = (prod[d - k + i] - c * m[i]) % p
        return tuple(prod[:k])

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        out, base, e = self.one, a, self.p ** self.k - 2
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def random(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def as_matrix(self, a) -> list[list[int]]:
        """Multiplication by ``a`` as a ``k x k`` matrix over ``GF(p)``."""
        cols = []
        basis = [tuple(1 if i == j else 0 for i in range(self.k)) for j in range(self.k)]
        for b in basis:
            cols.append(self.mul(a, b))
        return [[cols[j][i] for j in range(self.k)] for i in range(self.k)]


class _Lin:
    """Dense linear algebra over a field given by add/mul/inv callables."""

    def __init__(self, F):
        self.F = F

    def matmul(self, A, B, inner):
        F = self.F
        ncols = len(B[0]) if B else 0
        out = []
        for row in A:
            r = []
            for j in range(ncols):
                acc = F.zero
                for k in range(inner):
                    if row[k] != F.zero and B[k][j] != F.zero:
                        acc = F.add(acc, F.mul(row[k], B[k][j]))
                r.append(acc)
            out.append(r)
        return out

    def rref(self, A, ncols):
        """Reduced row echelon form and pivot columns."""
        F = self.F
        M = [list(r) for r in A]
        pivots = []
        row = 0
        for col in range(ncols):
            piv = next((i for i in range(row, len(M)) if M[i][col] != F.zero), None)
            if piv is None:
                continue
            M[row], M[piv] = M[piv], M[row]
            inv = F.inv(M[row][col])
            M[row] = [F.mul(inv, x) for x in M[row]]
            for i in range(len(M)):
                if i != row and M[i][col] != F.zero:
                    c = M[i][col]
                    M[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(M[i], M[row])]
            pivots.append(col)
            row += 1
        return M, pivots

    def rank(self, A, ncols):
        return len(self.rref(A, ncols)[1])

    def solve(self, A, B, ncols):
        """Some ``X`` with ``A X = B`` or ``None``."""
        F = self.F
        m = len(A)
        bcols = len(B[0]) if B else 0
        aug = [list(A[i]) + list(B[i]) for i in range(m)]
        M, pivots = self.rref(aug, ncols + bcols)
        if any(p >= ncols for p in pivots):
            return None
        X = [[F.zero] * bcols for _ in range(ncols)]
        for r, pc in enumerate(pivots):
            X[pc] = M[r][ncols:]
        return X

    def kernel(self, A, ncols):
        F = self.F
        M, pivots = self.rref(A, ncols)
        free = [c for c in range(ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = [F.zero] * ncols
            v[fc] = F.one
            for r, pc in enumerate(pivots):
                v[pc] = F.neg(M[r][fc])
            basis.append(v)
        return basis


class _PrimeField:
    def __init__(self, p):
        self.p = p
        self.zero, self.one = 0, 1

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)


@dataclass
class ProbeReport:
    p: int
    k: int
    modulus: str
    trials: int = 0
    rejected: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": self.modulus, "trials": self.trials,
                "rejected": self.rejected, "counterexamples": self.counterexamples, "ok": self.ok}


def _restrict(L: ExtensionField, A, rows, cols):
    """GF(p)-matrix of an L-linear map given as an L-matrix."""
    k = L.k
    out = [[0] * (cols * k) for _ in range(rows * k)]
    for i in range(rows):
        for j in range(cols):
            block = L.as_matrix(A[i][j])
            for a in range(k):
                for b in range(k):
                    out[i * k + a][j * k + b] = block[a][b]
    return out


def _commutes_with_structure(L: ExtensionField, B, rows, cols) -> bool:
    """Does a GF(p)-matrix commute with the action of the generator of L?"""
    lin = _Lin(_PrimeField(L.p))
    x = tuple(1 if i == 1 else 0 for i in range(L.k)) if L.k > 1 else L.one
    Jr = _restrict(L, [[x if i == j else L.zero for j in range(rows)] for i in range(rows)], rows, rows)
    Jc = _restrict(L, [[x if i == j else L.zero for j in range(cols)] for i in range(cols)], cols, cols)
    return lin.matmul(Jr, B, rows * L.k) == lin.matmul(B, Jc, cols * L.k)


def field_extension_probe(p: int, k: int, dims: int = 3, trials: int = 200, seed: int = 0) -> ProbeReport:
    """Random right-exact sequences ``X -> Y -> Z -> 0`` of ``GF(p^k)``-linear maps.

    Each sequence whose restriction to ``GF(p)`` is split exact (checked by
    ranks and by building a ``GF(p)`` splitting) is tested for an
    ``GF(p^k)``-linear splitting ``s, t`` with ``b s = 1`` and
    ``a t + s b = 1``, found by linear solves over the extension field.
    A failure is recorded as a counterexample.
    """
    if dims < 0 or trials < 0:
        raise BadParameters("dims and trials must be nonnegative")
    L = ExtensionField(p, k)
    rng = random.Random(seed)
    lin = _Lin(L)
    base = _Lin(_PrimeField(p))
    report = ProbeReport(p, k, FPX(p).format(L.modulus))
    for trial in range(trials):
        dy = rng.randint(0, dims)
        dz = rng.randint(0, dy)
        dx = rng.randint(0, dims)
        b = [[L.random(rng) for _ in range(dy)] for _ in range(dz)]
        ker = lin.kernel(b, dy)  # vectors of length dy
        c = [[L.random(rng) for _ in range(dx)] for _ in range(len(ker))]
        a = lin.matmul([[v[i] for v in ker] for i in range(dy)], c, len(ker)) if ker else \
            [[L.zero] * dx for _ in range(dy)]
        # hypothesis: restriction to GF(p) is exact with b onto, i.e. split exact
        ar, br = _restrict(L, a, dy, dx), _restrict(L, b, dz, dy)
        kk = L.k
        if base.rank(br, dy * kk) != dz * kk or base.rank(ar, dx * kk) + dz * kk != dy * kk:
            report.rejected += 1
            continue
        if base.solve(br, [[1 if i == j else 0 for j in range(dz * kk)] for i in range(dz * kk)],
                      dy * kk) is None:
            report.rejected += 1
            continue
        report.trials += 1
        ident_z = [[L.one if i == j else L.zero for j in range(dz)] for i in range(dz)]
        s = lin.solve(b, ident_z, dy)
        if s is None:
            report.counterexamples.append({"trial": trial, "reason": "no L-linear section"})
            continue
        sb = lin.matmul(s, b, dz) if dz else [[L.zero] * dy for _ in range(dy)]
        rest = [[L.sub(L.one if i == j else L.zero, sb[i][j]) for j in range(dy)] for i in range(dy)]
        t = lin.solve(a, rest, dx)
        if t is None:
            report.counterexamples.append({"trial": trial, "reason": "no L-linear retraction"})
            continue
        ok = (lin.matmul(b, s, dy) == ident_z if dz else True)
        at = lin.matmul(a, t, dx) if dx else [[L.zero] * dy for _ in range(dy)]
        ok &= all(L.add(at[i][j], sb[i][j]) == (L.one if i == j else L.zero)
                  for i in range(dy) for j in range(dy))
        ok &= _commutes_with_structure(L, _restrict(L, s, dy, dz), dy, dz)
        ok &= _commutes_with_structure(L, _restrict(L, t, dx, dy), dx, dy)
        if not ok:
            report.counterexamples.append({"trial": trial, "reason": "splitting identities fail"})
    return report
