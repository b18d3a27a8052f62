"""Finitely presented modules over a Euclidean ring and their morphisms.

A module is the cokernel of its relation matrix: ``generators`` rows, one
column per relation.  A morphism is a matrix on generators (codomain
generators x domain generators) that sends domain relations into the span
of the codomain relations; two matrices define the same morphism when their
difference has columns in that span.

Every module carries (lazily) the Smith form of its relations.  The Smith
transform gives canonical coordinates: an element ``x`` of ``A^g`` maps to
``U x``, whose torsion components are reduced to canonical residues.  Those
coordinate tuples are what element enumeration, element equality and
morphism equality run on.

>>> from monad_forge.ring import Z
>>> M = PresentedModule.diagonal(Z, [2, 3])
>>> print(decompose(M))
Z/2 + Z/3
>>> len(hom_enumerate(PresentedModule.cyclic(Z, 4), PresentedModule.cyclic(Z, 6)))
2
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import (MixedRings, NotParallel, NotWellDefined, ShapeMismatch, TooLarge)
from .matrix import (Matrix, MatrixEquations, SmithDecomposition, block_diag, kernel_basis,
                     smith_normal_form, solve)
from .ring import EuclideanRing, Z

DEFAULT_ELEMENT_CAP = 10_000
DEFAULT_HOM_CAP = 1_000_000


@dataclass(frozen=True)
class CanonicalModule:
    """``A^rank`` plus cyclic prime-power summands ``A/m^e``, sorted."""

    ring: EuclideanRing
    rank: int
    torsion: tuple = ()  # ((MaximalIdeal, exponent), ...)

    def __post_init__(self):
        tors = tuple(sorted(self.torsion))
        if any(e < 1 for _, e in tors):
            raise ValueError("torsion exponents must be positive")
        object.__setattr__(self, "torsion", tors)

    @property
    def size(self) -> int | None:
        """Number of elements, ``None`` when infinite."""
        if self.rank:
            return None
        return math.prod(m.residue_count ** e for m, e in self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def is_indecomposable(self) -> bool:
        return (self.rank, len(self.torsion)) in {(1, 0), (0, 1)}

    def __add__(self, other: CanonicalModule) -> CanonicalModule:
        if other.ring != self.ring:
            raise MixedRings("direct sum across rings")
        return CanonicalModule(self.ring, self.rank + other.rank, self.torsion + other.torsion)

    def to_module(self) -> PresentedModule:
        """Diagonal presentation: free generators first, then the torsion summands."""
        R = self.ring
        entries = [R.zero] * self.rank + [m.generator ** e for m, e in self.torsion]
        g = len(entries)
        cols = [i for i in range(g) if entries[i]]
        rel = Matrix.diag(R, entries).select_columns(cols) if g else Matrix(R, [], 0)
        return PresentedModule(R, g, rel)

    def summand_strings(self) -> list[str]:
        R = self.ring
        base = "Z" if R == Z else "A"
        out = []
        if self.rank == 1:
            out.append(base)
        elif self.rank > 1:
            out.append(f"{base}^{self.rank}")
        for m, e in self.torsion:
            if R == Z:
                out.append(f"Z/{m.generator ** e}")
            else:
                gen = R.format(m.generator)
                out.append(f"A/({gen})" + (f"^{e}" if e > 1 else ""))
        return out

    def __str__(self):
        parts = self.summand_strings()
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank,
                "torsion": [[self.ring.format(m.generator), e] for m, e in self.torsion]}


@dataclass(frozen=True)
class PresentedModule:
    """Cokernel of ``relations`` (``generators`` rows)."""

    ring: EuclideanRing
    generators: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.nrows != self.generators:
            raise ShapeMismatch(f"{self.generators} generators but relation matrix "
                                f"has {self.relations.nrows} rows")
        if self.relations.ring != self.ring:
            raise MixedRings("relation matrix over a different ring")
        for r in self.relations.rows:
            for e in r:
                self.ring.check(e)

    @classmethod
    def from_rows(cls, ring, rows, ncols=None) -> PresentedModule:
        m = Matrix(ring, rows, ncols)
        return cls(ring, m.nrows, m)

    @classmethod
    def free(cls, ring, n: int) -> PresentedModule:
        return cls(ring, n, Matrix(ring, [[]] * n, 0))

    @classmethod
    def zero(cls, ring) -> PresentedModule:
        return cls.free(ring, 0)

    @classmethod
    def cyclic(cls, ring, d) -> PresentedModule:
        d = ring.coerce(d) if isinstance(d, int) else d
        return cls(ring, 1, Matrix(ring, [[d]], 1))

    @classmethod
    def diagonal(cls, ring, entries) -> PresentedModule:
        entries = [ring.coerce(e) if isinstance(e, int) else e for e in entries]
        return cls(ring, len(entries), Matrix.diag(ring, entries)) if entries else cls.zero(ring)

    def __repr__(self):
        return f"PresentedModule({self.ring.tag}, gens={self.generators}, rels={self.relations.to_strings()})"

    # -- Smith coordinates -------------------------------------------------

    @cached_property
    def snf(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    @cached_property
    def invariants(self) -> tuple:
        """Invariant factor for every Smith coordinate (0 on free coordinates)."""
        diag = self.snf.diagonal
        R = self.ring
        return tuple(diag[i] if i < len(diag) else R.zero for i in range(self.generators))

    @cached_property
    def torsion_coords(self) -> tuple:
        R = self.ring
        return tuple(i for i, d in enumerate(self.invariants) if d and not R.is_unit(d))

    @cached_property
    def free_coords(self) -> tuple:
        return tuple(i for i, d in enumerate(self.invariants) if not d)

    @property
    def rank(self) -> int:
        return len(self.free_coords)

    @property
    def is_finite(self) -> bool:
        return not self.free_coords

    @cached_property
    def size(self) -> int | None:
        if self.free_coords:
            return None
        return math.prod(self.ring.residue_count(self.invariants[i]) for i in self.torsion_coords)

    @cached_property
    def coordinate_moduli(self) -> tuple:
        """Modulus of each coordinate slot (0 for free slots)."""
        return tuple(self.invariants[i] for i in self.torsion_coords) + (self.ring.zero,) * self.rank

    def coordinates(self, x: Sequence) -> tuple:
        """Canonical coordinates of the class of ``x`` (a vector in ``A^g``)."""
        y = self.snf.U.apply(x)
        R = self.ring
        inv = self.invariants
        return (tuple(R.reduce(y[i], inv[i]) for i in self.torsion_coords)
                + tuple(y[i] for i in self.free_coords))

    def from_coordinates(self, coords: Sequence) -> tuple:
        R = self.ring
        y = [R.zero] * self.generators
        for slot, i in enumerate(self.torsion_coords + self.free_coords):
            y[i] = coords[slot]
        return self.snf.U_inv.apply(y)

    def is_zero_vector(self, x: Sequence) -> bool:
        return not any(self.coordinates(x))

    def coordinate_tuples(self, cap: int = DEFAULT_ELEMENT_CAP) -> list[tuple]:
        """All elements as canonical coordinate tuples, in a fixed order."""
        if not self.is_finite:
            raise TooLarge("infinite module has no finite element list")
        if self.size > cap:
            raise TooLarge(f"module has {self.size} elements, cap is {cap}")
        R = self.ring
        return list(itertools.product(*(list(R.residues(d)) for d in self.coordinate_moduli)))

    def elements(self, cap: int = DEFAULT_ELEMENT_CAP) -> list[tuple]:
        """All elements as vectors in ``A^g`` (one representative each)."""
        return [self.from_coordinates(c) for c in self.coordinate_tuples(cap)]

    def solve_relations(self, C: Matrix) -> Matrix | None:
        """``X`` with ``relations @ X == C`` or ``None``."""
        return solve(self.relations, C, self.snf)

    def spans(self, C: Matrix) -> bool:
        return self.solve_relations(C) is not None


class Morphism:
    """Module homomorphism given by a matrix on generators."""

    __slots__ = ("dom", "cod", "matrix", "_key")

    def __init__(self, dom: PresentedModule, cod: PresentedModule, matrix: Matrix, check: bool = True):
        if matrix.shape != (cod.generators, dom.generators):
            raise ShapeMismatch(f"morphism matrix is {matrix.shape}, expected "
                                f"{(cod.generators, dom.generators)}")
        if not (dom.ring == cod.ring == matrix.ring):
            raise MixedRings("morphism across rings")
        self.dom = dom
        self.cod = cod
        self.matrix = matrix
        self._key = None
        if check and not cod.spans(matrix @ dom.relations):
            raise NotWellDefined("matrix does not respect the domain relations")

    @classmethod
    def identity(cls, M: PresentedModule) -> Morphism:
        return cls(M, M, Matrix.identity(M.ring, M.generators), check=False)

    @classmethod
    def zero(cls, M: PresentedModule, N: PresentedModule) -> Morphism:
        return cls(M, N, Matrix.zeros(M.ring, N.generators, M.generators), check=False)

    @property
    def ring(self):
        return self.dom.ring

    @property
    def key(self) -> tuple:
        """Canonical form: codomain coordinates of each generator's image."""
        if self._key is None:
            self._key = tuple(self.cod.coordinates(c) for c in self.matrix.columns())
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.dom == other.dom
                and self.cod == other.cod and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Morphism({self.matrix.to_strings()})"

    def __matmul__(self, other: Morphism) -> Morphism:
        """Composition ``self ∘ other``."""
        if other.cod != self.dom:
            raise ShapeMismatch("composition of non-composable morphisms")
        return Morphism(other.dom, self.cod, self.matrix @ other.matrix, check=False)

    def _parallel(self, other):
        if self.dom != other.dom or self.cod != other.cod:
            raise NotParallel("morphisms are not parallel")

    def __add__(self, other: Morphism) -> Morphism:
        self._parallel(other)
        return Morphism(self.dom, self.cod, self.matrix + other.matrix, check=False)

    def __sub__(self, other: Morphism) -> Morphism:
        self._parallel(other)
        return Morphism(self.dom, self.cod, self.matrix - other.matrix, check=False)

    def __neg__(self) -> Morphism:
        return Morphism(self.dom, self.cod, -self.matrix, check=False)

    def scale(self, c) -> Morphism:
        return Morphism(self.dom, self.cod, self.matrix.scale(c), check=False)

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.key)

    def __call__(self, x: Sequence) -> tuple:
        return self.matrix.apply(x)


# -- basic operations -------------------------------------------------------

def solve_morphism_equation(B: Matrix, C: Matrix) -> Matrix | None:
    """Some ``X`` with ``B @ X == C`` over the ring, else ``None``."""
    return solve(B, C)


@functools.lru_cache(maxsize=4096)
def decompose(M: PresentedModule) -> CanonicalModule:
    """Canonical form ``A^n + sum A/m^e`` of a presented module.

    Non-unit invariant factors are split into prime powers (Chinese
    remainder theorem).
    """
    R = M.ring
    torsion = []
    for i in M.torsion_coords:
        for ideal, e in R.factor(M.invariants[i]).factors:
            torsion.append((ideal, e))
    return CanonicalModule(R, M.rank, tuple(torsion))


def isomorphic(M: PresentedModule, N: PresentedModule) -> bool:
    return decompose(M) == decompose(N)


def minimal_presentation(M: PresentedModule):
    """``(Mmin, to_M, from_M)``: the Smith-diagonal presentation and inverse isomorphisms.

    ``Mmin`` has one generator per torsion slot (invariant factor) followed
    by one per free slot.
    """
    R = M.ring
    slots = M.torsion_coords + M.free_coords
    Mmin = PresentedModule.diagonal(R, M.coordinate_moduli)
    Mmin = PresentedModule(R, len(slots), Mmin.relations.select_columns(
        range(len(M.torsion_coords)))) if slots else PresentedModule.zero(R)
    to_M = Morphism(Mmin, M, M.snf.U_inv.select_columns(slots), check=False)
    from_M = Morphism(M, Mmin, M.snf.U.select_rows(slots), check=False)
    return Mmin, to_M, from_M


def submodule(M: PresentedModule, vectors: Sequence[Sequence], minimal: bool = True):
    """Submodule of ``M`` generated by ``vectors``: ``(S, inclusion)``."""
    R = M.ring
    P = Matrix.from_columns(R, vectors, M.generators)
    K = kernel_basis(P.hstack(-M.relations))
    rel = K.select_rows(range(P.ncols))
    S = PresentedModule(R, P.ncols, rel)
    incl = Morphism(S, M, P, check=False)
    if minimal:
        Smin, to_S, _ = minimal_presentation(S)
        return Smin, incl @ to_S
    return S, incl


def kernel(phi: Morphism, minimal: bool = True):
    """``(K, iota)`` with ``iota: K -> dom`` the kernel inclusion."""
    M, N = phi.dom, phi.cod
    B = phi.matrix.hstack(-N.relations)
    K = kernel_basis(B)
    P = K.select_rows(range(M.generators))
    return submodule(M, P.columns(), minimal=minimal)


def cokernel(phi: Morphism, minimal: bool = True):
    """``(Q, q)`` with ``q: cod -> Q`` the quotient map."""
    N = phi.cod
    Q = PresentedModule(N.ring, N.generators, N.relations.hstack(phi.matrix))
    q = Morphism(N, Q, Matrix.identity(N.ring, N.generators), check=False)
    if minimal:
        Qmin, _, from_Q = minimal_presentation(Q)
        return Qmin, from_Q @ q
    return Q, q


def coequalizer(f: Morphism, g: Morphism, minimal: bool = True):
    """Coequalizer of a parallel pair, computed as the cokernel of ``f - g``."""
    if f.dom != g.dom or f.cod != g.cod:
        raise NotParallel("coequalizer needs a parallel pair")
    return cokernel(f - g, minimal=minimal)


def biproduct(Ms: Sequence[PresentedModule], ring: EuclideanRing | None = None):
    """``(S, injections, projections)`` for the direct sum of ``Ms``."""
    if not Ms and ring is None:
        raise ValueError("biproduct of no modules needs an explicit ring")
    R = Ms[0].ring if Ms else ring
    if any(M.ring != R for M in Ms):
        raise MixedRings("biproduct across rings")
    rel = block_diag(R, [M.relations for M in Ms]) if Ms else Matrix(R, [], 0)
    g = sum(M.generators for M in Ms)
    S = PresentedModule(R, g, rel)
    inj, proj = [], []
    off = 0
    for M in Ms:
        E = Matrix(R, [[R.one if i == off + j else R.zero for j in range(M.generators)]
                       for i in range(g)], M.generators)
        inj.append(Morphism(M, S, E, check=False))
        proj.append(Morphism(S, M, E.T, check=False))
        off += M.generators
    return S, inj, proj


# -- hom sets ---------------------------------------------------------------

def _hom_slots(M: PresentedModule, N: PresentedModule):
    """Per (codomain slot j, domain Smith coordinate i): (modulus e_j, step, gcd)."""
    R = M.ring
    dM = M.invariants
    out = []
    for e in N.coordinate_moduli:
        row = []
        for d in dM:
            c = R.gcd(e, d) if (e or d) else R.zero
            row.append((e, c))
        out.append(row)
    return out


def hom_count(M: PresentedModule, N: PresentedModule) -> int | None:
    """``|Hom(M, N)|`` for finite ``N`` (``None`` if N is infinite)."""
    if not N.is_finite:
        return None
    R = M.ring
    n = 1
    for row in _hom_slots(M, N):
        for e, c in row:
            n *= R.residue_count(c)
    return n


def hom_enumerate(M: PresentedModule, N: PresentedModule,
                  bound: int = DEFAULT_ELEMENT_CAP, limit: int = DEFAULT_HOM_CAP) -> list[Morphism]:
    """Every morphism ``M -> N``, each exactly once, in a fixed order.

    Works in Smith coordinates: a row ``w`` of a morphism into ``A/(e)``
    must satisfy ``w_i d_i = 0 mod e``, i.e. ``w_i`` is a multiple of
    ``e / gcd(e, d_i)``.
    """
    if M.ring != N.ring:
        raise MixedRings("hom across rings")
    if not N.is_finite:
        raise TooLarge("target module is infinite")
    if N.size > bound:
        raise TooLarge(f"target has {N.size} elements, bound is {bound}")
    count = hom_count(M, N)
    if count > limit:
        raise TooLarge(f"hom set has {count} elements, limit is {limit}")
    R = M.ring
    Nmin, to_N, _ = minimal_presentation(N)
    g = M.generators
    out = []
    for X in hom_coordinate_matrices(M, N):
        phi = Morphism(M, N, to_N.matrix @ Matrix(R, X, g), check=False)
        phi._key = tuple(zip(*X)) if X else tuple(() for _ in range(g))
        out.append(phi)
    return out


def hom_coordinate_matrices(M: PresentedModule, N: PresentedModule):
    """Yield every morphism ``M -> N`` as a matrix in the codomain's coordinates.

    Row ``j`` holds the ``j``-th canonical coordinate of each generator's
    image, already reduced.  ``N`` must be finite.
    """
    R = M.ring
    UM = M.snf.U.rows
    g = M.generators
    moduli = N.coordinate_moduli
    choices = []  # admissible w_ij, row-major over (slot j, Smith coordinate i)
    for row in _hom_slots(M, N):
        for e, c in row:
            step = R.exact_div(e, c)
            choices.append([step * t for t in R.residues(c)])
    for combo in itertools.product(*choices):
        X = []
        for j, e in enumerate(moduli):
            w = combo[j * g:(j + 1) * g]
            X.append([R.reduce(sum((w[k] * UM[k][col] for k in range(g)), R.zero), e)
                      for col in range(g)])
        yield X


def inverse(phi: Morphism) -> Morphism | None:
    """Two-sided inverse of ``phi`` if it is an isomorphism."""
    M, N = phi.dom, phi.cod
    R = phi.ring
    B = phi.matrix.hstack(N.relations)
    X = solve(B, Matrix.identity(R, N.generators))
    if X is None:
        return None  # not surjective
    Psi = X.select_rows(range(M.generators))
    if not M.spans(Psi @ N.relations):
        return None
    psi = Morphism(N, M, Psi, check=False)
    if psi @ phi != Morphism.identity(M):
        return None
    return psi


def is_isomorphism(phi: Morphism) -> bool:
    return inverse(phi) is not None


def is_epimorphism(phi: Morphism) -> bool:
    B = phi.matrix.hstack(phi.cod.relations)
    return solve(B, Matrix.identity(phi.ring, phi.cod.generators)) is not None


def is_monomorphism(phi: Morphism) -> bool:
    K, _ = kernel(phi)
    return K.generators == 0


def lift_through(h: Morphism, m: Morphism) -> Morphism | None:
    """Some ``k`` with ``m ∘ k == h`` (``h`` and ``m`` share a codomain)."""
    if h.cod != m.cod:
        raise ShapeMismatch("lift_through needs a shared codomain")
    B = m.matrix.hstack(m.cod.relations)
    X = solve(B, h.matrix)
    if X is None:
        return None
    K = X.select_rows(range(m.dom.generators))
    if not m.dom.spans(K @ h.dom.relations):
        return None
    return Morphism(h.dom, m.dom, K, check=False)


def factor_through(h: Morphism, q: Morphism) -> Morphism | None:
    """Some ``k`` with ``k ∘ q == h`` (``h`` and ``q`` share a domain), else ``None``."""
    if h.dom != q.dom:
        raise ShapeMismatch("factor_through needs a shared domain")
    N, Q, M = h.cod, q.cod, h.dom
    R = M.ring
    sysm = MatrixEquations(R)
    K = sysm.unknown("K", N.generators, Q.generators)
    Z1 = sysm.unknown("Z1", N.relations.ncols, M.generators)
    Z2 = sysm.unknown("Z2", N.relations.ncols, Q.relations.ncols)
    sysm.equation([(None, K, q.matrix), (N.relations, Z1, None)], h.matrix)
    sysm.equation([(None, K, Q.relations), (N.relations, Z2, None)],
                  Matrix.zeros(R, N.generators, Q.relations.ncols))
    sol = sysm.solve()
    if sol is None:
        return None
    return Morphism(Q, N, sol["K"], check=False)


def free_resolution(M: PresentedModule) -> Matrix:
    """Injective relation matrix ``A^k -> A^g`` with the same image as ``M.relations``.

    Over a principal ideal domain the relation module is free, so
    ``0 -> A^k -> A^g -> M -> 0`` is a finite free resolution.
    """
    s = M.snf
    return M.relations @ s.V.select_columns(range(s.rank))
