"""Level functions and the truncation reflectors they define.

A level function assigns to every maximal ideal a bound in {0, 1, ..., inf}
and cuts out the full subcategory of modules whose ``m``-primary summands
have exponent at most the bound.  The reflector truncates each summand
``A/m^e`` to ``A/m^min(e, f(m))``; the unit is the projection.

Two independent routes to the reflection are provided: the structural one
(truncate the canonical form) and an elementwise one that builds the
submodule generated by the "too deep" torsion elements and takes the
quotient.  Tests compare them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateSupport, ParseError, TooLarge
from .families import canonical_modules
from .fpmod import (DEFAULT_ELEMENT_CAP, CanonicalModule, Morphism, PresentedModule,
                    decompose, hom_coordinate_matrices, hom_count, kernel, submodule)
from .matrix import Matrix
from .ring import EuclideanRing, MaximalIdeal

INF = math.inf


def parse_extnat(value) -> int | float:
    if isinstance(value, bool):
        raise ParseError(f"not a level value: {value!r}")
    if isinstance(value, int) and value >= 0:
        return value
    if isinstance(value, float) and value == INF:
        return INF
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("inf", "infinity", "∞"):
            return INF
        if v.isdigit():
            return int(v)
    raise ParseError(f"not a level value: {value!r}")


def format_extnat(v) -> str:
    return "inf" if v == INF else str(v)


def _extnat_json(v):
    return "inf" if v == INF else v


class LevelFunction:
    """Cofinitely constant function from maximal ideals to {0, 1, ..., inf}."""

    __slots__ = ("default", "overrides")

    def __init__(self, default=INF, overrides: dict | None = None):
        self.default = parse_extnat(default)
        items = {m: parse_extnat(v) for m, v in (overrides or {}).items()}
        # canonical form: drop entries equal to the default, sort by ideal
        self.overrides = tuple(sorted((m, v) for m, v in items.items() if v != self.default))

    @classmethod
    def constant(cls, value) -> LevelFunction:
        return cls(value)

    def __call__(self, m: MaximalIdeal):
        for k, v in self.overrides:
            if k == m:
                return v
        return self.default

    @property
    def support(self) -> tuple:
        return tuple(m for m, _ in self.overrides)

    def __eq__(self, other):
        return (isinstance(other, LevelFunction) and self.default == other.default
                and self.overrides == other.overrides)

    def __hash__(self):
        return hash((self.default, self.overrides))

    def __str__(self):
        parts = [f"{m}->{format_extnat(v)}" for m, v in self.overrides]
        parts.append(f"else {format_extnat(self.default)}")
        return ", ".join(parts)

    def __repr__(self):
        return f"LevelFunction({self})"

    def _pointwise(self, other: LevelFunction, op) -> LevelFunction:
        keys = set(self.support) | set(other.support)
        return LevelFunction(op(self.default, other.default),
                             {m: op(self(m), other(m)) for m in keys})

    def meet(self, other: LevelFunction) -> LevelFunction:
        return self._pointwise(other, min)

    def join(self, other: LevelFunction) -> LevelFunction:
        return self._pointwise(other, max)

    def to_json(self) -> dict:
        return {"default": _extnat_json(self.default),
                "values": {str(m): _extnat_json(v) for m, v in self.overrides}}

    @classmethod
    def from_json(cls, ring: EuclideanRing, data: dict) -> LevelFunction:
        if not isinstance(data, dict):
            raise ParseError("level function must be a JSON object")
        values = data.get("values", {})
        if not isinstance(values, dict):
            raise ParseError("level function 'values' must be an object")
        over = {}
        for k, v in values.items():
            m = ring.parse_ideal(k)
            if m in over:
                raise DuplicateSupport(f"ideal {m} listed twice")
            over[m] = v
        return cls(data.get("default", "inf"), over)


# -- membership and reflection ----------------------------------------------

def contains(f: LevelFunction, M: PresentedModule | CanonicalModule) -> bool:
    """Does ``M`` lie in the subcategory cut out by ``f``?  Free parts never obstruct."""
    c = M if isinstance(M, CanonicalModule) else decompose(M)
    return all(e <= f(m) for m, e in c.torsion)


def truncate(f: LevelFunction, c: CanonicalModule) -> CanonicalModule:
    """The canonical form of the reflection: every exponent cut to ``min(e, f(m))``."""
    return CanonicalModule(c.ring, c.rank,
                           tuple((m, min(e, f(m))) for m, e in c.torsion if min(e, f(m)) > 0))


@dataclass(frozen=True)
class Reflection:
    module: PresentedModule
    unit: Morphism
    is_identity: bool = False


def reflect(f: LevelFunction, M: PresentedModule, canonical: bool = False) -> Reflection:
    """Reflection of ``M`` into the subcategory of ``f`` together with its unit.

    Members are returned unchanged with the identity unit unless
    ``canonical`` is set, in which case the target is always the diagonal
    presentation of the truncated canonical form.
    """
    R = M.ring
    if not canonical and contains(f, M):
        return Reflection(M, Morphism.identity(M), True)
    U = M.snf.U
    rows = []  # (sort key, modulus, row of U)
    for i in M.torsion_coords:
        for m, e in R.factor(M.invariants[i]).factors:
            k = min(e, f(m))
            if k > 0:
                rows.append(((m, k), m.generator ** k, U.rows[i]))
    rows.sort(key=lambda t: t[0])
    free = [U.rows[i] for i in M.free_coords]
    moduli = [R.zero] * len(free) + [mod for _, mod, _ in rows]
    gens = len(moduli)
    rel_cols = [j for j in range(len(free), gens)]
    L = PresentedModule(R, gens, Matrix.diag(R, moduli).select_columns(rel_cols)
                        if gens else Matrix(R, [], 0))
    eta = Morphism(M, L, Matrix(R, free + [r for _, _, r in rows], M.generators), check=False)
    return Reflection(L, eta, False)


def reflect_structural_radical(f: LevelFunction, M: PresentedModule, minimal: bool = True):
    """``(U, iota)``: the kernel of the reflection unit."""
    return kernel(reflect(f, M, canonical=True).unit, minimal=minimal)


# -- elementwise oracle -------------------------------------------------------

class _CoordArith:
    """Arithmetic on canonical coordinate tuples of a finite module."""

    def __init__(self, M: PresentedModule):
        self.R = M.ring
        self.mod = M.coordinate_moduli

    def add(self, a, b):
        R = self.R
        return tuple(R.reduce(x + y, d) for x, y, d in zip(a, b, self.mod))

    def scale(self, c, a):
        R = self.R
        return tuple(R.reduce(c * x, d) for x, d in zip(a, self.mod))


def _closure(arith: _CoordArith, gens: Iterable[tuple], scalars: Sequence, zero: tuple) -> set:
    """Submodule generated by ``gens`` (closure under +, negation and scalar generators)."""
    seen = {zero}
    frontier = [zero]
    gens = list(gens)
    steps = [lambda a, g=g: arith.add(a, g) for g in gens]
    steps += [lambda a, s=s: arith.scale(s, a) for s in scalars]
    while frontier:
        nxt = []
        for a in frontier:
            for step in steps:
                b = step(a)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def torsion_elements(f: LevelFunction, M: PresentedModule, cap: int = DEFAULT_ELEMENT_CAP):
    """Elements ``x`` of finite ``M`` that are ``m``-power torsion and lie in ``m^f(m) M``.

    Returned as coordinate tuples.  ``m^inf M`` is read as the intersection
    of all ``m^n M``.
    """
    if not M.is_finite:
        raise TooLarge("elementwise radical needs a finite module")
    R = M.ring
    elems = M.coordinate_tuples(cap)
    arith = _CoordArith(M)
    zero = tuple(R.zero for _ in M.coordinate_moduli)
    primes = sorted({m for i in M.torsion_coords for m, _ in R.factor(M.invariants[i]).factors})
    found = set()
    for m in primes:
        pi = m.generator
        # m-power torsion: the chain x, pi x, pi^2 x, ... strictly shrinks the cyclic
        # submodule until it stabilizes, so pi^n x = 0 for some n iff it holds at n = log2|M|
        kill = pi ** max(1, len(elems).bit_length())
        tors = {x for x in elems if arith.scale(kill, x) == zero}
        # m^k M, iterated to stability for k = inf
        level = f(m)
        image = set(elems)
        k = 0
        while (level == math.inf or k < level):
            nxt = {arith.scale(pi, x) for x in image}
            k += 1
            if nxt == image:
                break
            image = nxt
        found |= tors & image
    return found


def torsion_radical(f: LevelFunction, M: PresentedModule, bound: int = DEFAULT_ELEMENT_CAP,
                    minimal: bool = True):
    """``(U, iota)``: submodule generated by :func:`torsion_elements`, computed elementwise."""
    if not M.is_finite or M.size > bound:
        raise TooLarge("elementwise radical needs a finite module within the bound")
    R = M.ring
    arith = _CoordArith(M)
    zero = tuple(R.zero for _ in M.coordinate_moduli)
    scalars = R.scalar_generators()
    span = {zero}
    gens = []
    for x in sorted(torsion_elements(f, M, bound), key=lambda t: [R.sort_key(c) for c in t]):
        if x not in span:
            gens.append(x)
            span = _closure(arith, gens, scalars, zero)
    return submodule(M, [M.from_coordinates(c) for c in gens], minimal=minimal)


# -- universal property -------------------------------------------------------

@dataclass
class UniversalReport:
    checked_targets: int = 0
    checked_maps: int = 0
    exhaustive_targets: int = 0
    split_targets: int = 0
    trivial: bool = False
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "targets": self.checked_targets, "maps": self.checked_maps,
                "exhaustiveTargets": self.exhaustive_targets, "splitTargets": self.split_targets,
                "identityUnit": self.trivial, "violations": self.violations}


def _reduce_rows(R, X, moduli):
    return tuple(tuple(R.reduce(x, e) for x in row) for row, e in zip(X, moduli))


def _mul(R, A, B, inner):
    ncols = len(B[0]) if B else 0
    return [[sum((a[k] * B[k][j] for k in range(inner)), R.zero) for j in range(ncols)] for a in A]


def _precomposition_image(M, L, E, N):
    """Enumerate ``Hom(L, N)``, precompose with ``E``; return (image size, collisions)."""
    R = M.ring
    moduli = N.coordinate_moduli
    seen = {}
    clashes = []
    for X in hom_coordinate_matrices(L, N):
        key = _reduce_rows(R, _mul(R, X, E, L.generators), moduli)
        if key in seen:
            clashes.append([seen[key], _fmt(R, X)])
        else:
            seen[key] = _fmt(R, X)
    return len(seen), clashes


def universal_property_check(f: LevelFunction, M: PresentedModule, bound: int,
                             targets: Sequence[CanonicalModule] | None = None,
                             exhaustive_limit: int = 256) -> UniversalReport:
    """Check that precomposition with the unit is a bijection
    ``Hom(L, N) -> Hom(M, N)`` for every finite target ``N`` in the subcategory.

    Injectivity shows factorizations are unique; equality of the image size
    with the closed-form count of ``Hom(M, N)`` shows every map factors.
    Targets whose hom set from ``L`` exceeds ``exhaustive_limit`` are checked
    one indecomposable summand at a time: precomposition is additive and
    ``Hom(-, N1 + N2)`` is the product of the two hom sets, so the map is a
    bijection exactly when it is one on every summand.
    """
    R = M.ring
    refl = reflect(f, M)
    if targets is None:
        targets = canonical_modules(R, bound)
    report = UniversalReport(trivial=refl.is_identity)
    L, eta = refl.module, refl.unit
    if not contains(f, L):
        report.violations.append({"kind": "outside", "module": str(decompose(L))})
    E = [list(r) for r in eta.matrix.rows]
    per_summand = {}
    for c in targets:
        if not c.is_finite or c.size > bound or not contains(f, c):
            continue
        N = c.to_module()
        report.checked_targets += 1
        expected = hom_count(M, N)
        if refl.is_identity:
            report.checked_maps += expected
            continue
        if hom_count(L, N) <= exhaustive_limit:
            report.exhaustive_targets += 1
            found, clashes = _precomposition_image(M, L, E, N)
        else:
            report.split_targets += 1
            found, clashes = 1, []
            for s in c.torsion:
                if s not in per_summand:
                    per_summand[s] = _precomposition_image(
                        M, L, E, CanonicalModule(R, 0, (s,)).to_module())
                n, cl = per_summand[s]
                found *= n
                clashes += cl
        report.checked_maps += found
        for pair in clashes[:1]:
            report.violations.append({"target": str(c), "kind": "non-unique",
                                      "factorizations": pair})
        if found != expected:
            report.violations.append({"target": str(c), "kind": "missing",
                                      "expected": expected, "found": found})
    return report


def _fmt(R, X):
    return [[R.format(x) for x in row] for row in X]


# -- poset ---------------------------------------------------------------------

def poset_compare(f: LevelFunction, g: LevelFunction) -> str:
    """Pointwise comparison: ``less``, ``equal``, ``greater`` or ``incomparable``."""
    keys = set(f.support) | set(g.support)
    pairs = [(f(m), g(m)) for m in keys] + [(f.default, g.default)]
    le = all(a <= b for a, b in pairs)
    ge = all(a >= b for a, b in pairs)
    if le and ge:
        return "equal"
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"


def enumerate_levels(support: Sequence[MaximalIdeal], cap: int | None = None, default=INF,
                     values: Sequence | None = None) -> list[LevelFunction]:
    """All level functions with the given default and values on ``support``.

    Values are ``0..cap`` plus ``inf`` unless an explicit ``values`` list is
    given.  Order is lexicographic in the support order.
    """
    if len(set(support)) != len(support):
        raise DuplicateSupport("support lists an ideal twice")
    if values is None:
        values = list(range(cap + 1)) + [INF]
    values = [parse_extnat(v) for v in values]
    return [LevelFunction(default, dict(zip(support, combo)))
            for combo in itertools.product(values, repeat=len(support))]
