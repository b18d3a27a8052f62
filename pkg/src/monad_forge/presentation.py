"""Candidate presentations of the free-module monad and the coequalizer condition.

A presentation here is a full subcategory of finitely generated modules
containing the free ones.  Level presentations come from a level function
(and are reflective); predicate presentations admit an arbitrary set of
exponents per prime and need not be.

The homological condition asks that for every admitted ``Y`` the
coequalizer, inside the subcategory, of the two counit maps out of the
free-on-free object maps isomorphically onto ``Y``.  Those objects are free
on infinite sets, so the difference submodule is generated instead by a
finite relator set on the free module over the elements of ``Y``:

* ``e_a + e_b - e_{a+b}`` for all ``a, b``;
* ``e_{s a} - s e_a`` for each scalar generator ``s`` of the ring (``i`` for
  the Gaussian integers, ``x`` for polynomials, none for the integers);
* ``e_0``.

Any generator ``e_w - e_{aug(w)}`` of the difference submodule, with
``w = sum c_k e_{a_k}``, telescopes into these: ring scalars are integer
combinations of powers of the scalar generators, and additivity handles the
sums (with ``e_0`` taking care of signs).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BadParameters, NoCoequalizer, NotLevel, ParseError, TooLarge
from .families import canonical_modules
from .fpmod import (DEFAULT_ELEMENT_CAP, CanonicalModule, Morphism, PresentedModule, decompose,
                    factor_through, hom_coordinate_matrices, hom_count, is_isomorphism, kernel)
from .matrix import EchelonSpan, Matrix
from .parallel import pmap
from .reflect import INF, LevelFunction, contains, enumerate_levels, poset_compare, reflect
from .ring import MaximalIdeal, ZI

# -- records -------------------------------------------------------------------


@dataclass(frozen=True)
class PresentationRecord:
    """Level(f) or Predicate(admissible exponents per ideal)."""

    kind: str
    level: LevelFunction | None = None
    admit: tuple = ()  # ((MaximalIdeal, frozenset of exponents), ...)
    default_admit: str = "all"
    label: str = ""

    @classmethod
    def from_level(cls, f: LevelFunction, label: str | None = None) -> PresentationRecord:
        return cls("level", level=f, label=label if label is not None else f"level[{f}]")

    @classmethod
    def from_predicate(cls, admit: dict, default_admit: str = "all",
                       label: str | None = None) -> PresentationRecord:
        if default_admit not in ("all", "none"):
            raise ParseError("defaultAdmit must be 'all' or 'none'")
        items = tuple(sorted((m, frozenset(es)) for m, es in admit.items()))
        if label is None:
            label = "predicate[" + ", ".join(f"{m}:{sorted(es)}" for m, es in items) + \
                    f", else {default_admit}]"
        return cls("predicate", admit=items, default_admit=default_admit, label=label)

    def admits_summand(self, m: MaximalIdeal, e: int) -> bool:
        if self.kind == "level":
            return e <= self.level(m)
        for k, es in self.admit:
            if k == m:
                return e in es
        return self.default_admit == "all"

    def admits(self, M: PresentedModule | CanonicalModule) -> bool:
        """Membership; free summands are always admitted."""
        c = M if isinstance(M, CanonicalModule) else decompose(M)
        return all(self.admits_summand(m, e) for m, e in c.torsion)

    def to_json(self) -> dict:
        if self.kind == "level":
            return {"kind": "level", "f": self.level.to_json()}
        return {"kind": "predicate",
                "admit": {str(m): sorted(es) for m, es in self.admit},
                "defaultAdmit": self.default_admit}

    @classmethod
    def from_json(cls, ring, data: dict) -> PresentationRecord:
        if not isinstance(data, dict) or data.get("kind") not in ("level", "predicate"):
            raise ParseError("presentation needs kind 'level' or 'predicate'")
        if data["kind"] == "level":
            return cls.from_level(LevelFunction.from_json(ring, data.get("f", {})))
        admit = data.get("admit", {})
        if not isinstance(admit, dict):
            raise ParseError("'admit' must map ideals to exponent lists")
        parsed = {}
        for k, es in admit.items():
            if not isinstance(es, list) or not all(isinstance(e, int) and e >= 1 for e in es):
                raise ParseError(f"exponent set for {k} must be a list of positive integers")
            parsed[ring.parse_ideal(k)] = es
        return cls.from_predicate(parsed, data.get("defaultAdmit", "all"))


# -- the free module on the elements of a finite module ------------------------


@dataclass(frozen=True)
class ForkPresentation:
    """Free module with one generator per element of ``target``, plus relators."""

    target: PresentedModule
    elements: tuple  # coordinate tuples, index = generator
    relators: tuple  # vectors of length len(elements)
    augmentation: Morphism  # free module -> target, e_a -> a

    @property
    def free(self) -> PresentedModule:
        return self.augmentation.dom

    def labels(self) -> list[str]:
        R = self.target.ring
        return ["e(" + ",".join(R.format(c) for c in a) + ")" for a in self.elements]

    def format_vector(self, v) -> str:
        R = self.target.ring
        terms = []
        for lab, c in zip(self.labels(), v):
            if not c:
                continue
            if c == R.one:
                terms.append(lab)
            elif c == -R.one:
                terms.append("-" + lab)
            else:
                terms.append(f"({R.format(c)}){lab}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def free_on_elements(Y: PresentedModule, bound: int = DEFAULT_ELEMENT_CAP) -> ForkPresentation:
    """One generator per element of ``Y``; additive, scalar and zero relators; ``e_a -> a``."""
    if not Y.is_finite or Y.size > bound:
        raise TooLarge("free_on_elements needs a finite module within the bound")
    R = Y.ring
    elems = Y.coordinate_tuples(bound)
    index = {a: k for k, a in enumerate(elems)}
    n = len(elems)
    mod = Y.coordinate_moduli

    def add(a, b):
        return tuple(R.reduce(x + y, d) for x, y, d in zip(a, b, mod))

    def unit_vec(*pairs):
        v = [R.zero] * n
        for k, c in pairs:
            v[k] = v[k] + c
        return tuple(v)

    rels = []
    for a in elems:
        for b in elems:
            rels.append(unit_vec((index[a], R.one), (index[b], R.one), (index[add(a, b)], -R.one)))
    for s in R.scalar_generators():
        for a in elems:
            sa = tuple(R.reduce(s * x, d) for x, d in zip(a, mod))
            rels.append(unit_vec((index[sa], R.one), (index[a], -s)))
    rels.append(unit_vec((index[tuple(R.zero for _ in mod)], R.one)))
    free = PresentedModule.free(R, n)
    aug = Matrix.from_columns(R, [Y.from_coordinates(a) for a in elems], Y.generators)
    augmentation = Morphism(free, Y, aug, check=False)
    for r in rels:
        if not Y.is_zero_vector(aug.apply(r)):
            raise AssertionError("relator not killed by the augmentation")
    return ForkPresentation(Y, tuple(elems), tuple(rels), augmentation)


# -- bar head ------------------------------------------------------------------


@dataclass
class BarHead:
    stage0: ForkPresentation
    difference_basis: list  # echelon basis of the difference submodule
    ambient: PresentedModule  # free module modulo the difference submodule
    coequalizer: PresentedModule  # ambient reflected into the subcategory
    q: Morphism  # free module -> coequalizer
    canonical_map: Morphism  # coequalizer -> target
    is_iso: bool

    def verify_split(self, samples: int = 64) -> bool:
        """Split-cofork identities of the underlying-set fork on enumerated elements.

        Elements of the free-on-free object are formal sums ``{w: coeff}``.
        With ``s(a) = e_a`` and ``t(w) = e_w``: ``q s = id``, ``d0 t = id``
        and ``d1 t = s q`` where ``d0`` evaluates formal sums and ``d1``
        applies the augmentation inside them.
        """
        fp = self.stage0
        R = fp.target.ring
        n = len(fp.elements)
        Y = fp.target
        index = {a: k for k, a in enumerate(fp.elements)}

        def q(w):
            return Y.coordinates(fp.augmentation.matrix.apply(w))

        def s(a):
            return tuple(R.one if k == index[a] else R.zero for k in range(n))

        def t(w):
            return {w: R.one}

        def d0(formal):
            out = [R.zero] * n
            for w, c in formal.items():
                out = [x + c * y for x, y in zip(out, w)]
            return tuple(out)

        def d1(formal):
            out = {}
            for w, c in formal.items():
                key = s(q(w))
                out[key] = out.get(key, R.zero) + c
            return {k: v for k, v in out.items() if v}

        ok = all(q(s(a)) == a for a in fp.elements)
        ws = [s(a) for a in fp.elements] + list(fp.relators)[:samples]
        for w in ws:
            ok &= d0(t(w)) == w
            ok &= d1(t(w)) == {s(q(w)): R.one}
        return ok

    def difference_contains(self, v) -> bool:
        span = EchelonSpan(self.ambient.ring, len(v))
        for b in self.difference_basis:
            span.insert(b)
        return not span.insert(v)


def _ambient(Y: PresentedModule, bound: int):
    """Free module on the elements of ``Y`` modulo the relators (shared by all presentations)."""
    if not Y.is_finite or Y.size > bound:
        raise TooLarge("bar construction needs a finite module within the bound")
    return _ambient_cached(Y)


@functools.lru_cache(maxsize=512)
def _ambient_cached(Y: PresentedModule):
    fp = free_on_elements(Y, Y.size)
    R = Y.ring
    n = len(fp.elements)
    span = EchelonSpan(R, n)
    for r in fp.relators:
        span.insert(r)
    basis = span.basis()
    rel = Matrix.from_columns(R, basis, n) if basis else Matrix(R, [[]] * n, 0)
    return fp, basis, PresentedModule(R, n, rel)


def _reflect_record(P: PresentationRecord, M: PresentedModule):
    if P.kind == "level":
        r = reflect(P.level, M)
        return r.module, r.unit
    if P.admits(M):
        return M, Morphism.identity(M)
    raise NoCoequalizer("predicate subcategories have no reflector to apply")


def bar_head(P: PresentationRecord, Y: PresentedModule, bound: int = DEFAULT_ELEMENT_CAP) -> BarHead:
    """Coequalizer of the two counit maps, inside the subcategory, and its map to ``Y``."""
    if not P.admits(Y):
        raise BadParameters("bar_head needs an admitted module")
    fp, basis, amb = _ambient(Y, bound)
    # free modules are admitted, so the first stage is the free module itself
    Qmod, eta = _reflect_record(P, amb)
    q_amb = Morphism(fp.free, amb, Matrix.identity(Y.ring, amb.generators), check=False)
    q = eta @ q_amb
    aug_on_amb = Morphism(amb, Y, fp.augmentation.matrix)
    canon = aug_on_amb if eta == Morphism.identity(amb) or Qmod is amb else factor_through(aug_on_amb, eta)
    if canon is None:
        raise NoCoequalizer("augmentation does not factor through the reflection")
    return BarHead(fp, basis, amb, Qmod, q, canon, is_isomorphism(canon))


def reflector_via_coequalizer(f: LevelFunction, X: PresentedModule,
                              bound: int = DEFAULT_ELEMENT_CAP) -> PresentedModule:
    """Left adjoint of the comparison, evaluated as a coequalizer then reflected."""
    _, _, amb = _ambient(X, bound)
    return reflect(f, amb, canonical=True).module


# -- universal arrows into a predicate subcategory ------------------------------


def _precompose_keys(X: PresentedModule, Q: PresentedModule, qm: list, N: PresentedModule):
    """Map ``Hom(Q, N) -> Hom(X, N)`` by precomposition, as (key -> first preimage)."""
    R = X.ring
    mod = N.coordinate_moduli
    g = Q.generators
    out = {}
    dup = None
    for Hm in hom_coordinate_matrices(Q, N):
        key = tuple(tuple(R.reduce(sum((Hm[j][k] * qm[k][c] for k in range(g)), R.zero), e)
                          for c in range(X.generators)) for j, e in enumerate(mod))
        if key in out:
            # prefer a witness where the factored map itself is nonzero
            if dup is None or (not any(any(r) for r in dup[0]) and any(any(r) for r in key)):
                dup = (key, out[key], Hm)
        else:
            out[key] = Hm
    return out, dup


def _fmt_matrix(R, M):
    return [[R.format(x) for x in row] for row in M]


def _universal_arrow_search(X: PresentedModule, admitted: list[CanonicalModule], full: bool):
    """Look for ``(Q, q)`` with ``Q`` admitted such that every map from ``X`` into an
    admitted target factors uniquely through ``q``.

    Targets are the indecomposable admitted modules only: admission is
    decided summand by summand and ``Hom(-, N1 + N2)`` is the product of the
    two hom sets, so unique factorization into every admitted target
    reduces to the indecomposable ones.  Free targets receive only the zero
    map from a finite module and are skipped.

    Returns (found arrow or None, list of rejected candidates with reasons).
    Unless ``full`` is set, candidates are prefiltered by the hom-count
    signature ``N -> |Hom(Q, N)|``, which a universal arrow must share with
    ``X``.
    """
    R = X.ring
    tests = [c for c in admitted if c.is_indecomposable and c.is_finite]
    test_mods = [c.to_module() for c in tests]
    sig_x = [hom_count(X, N) for N in test_mods]
    rejected = []
    for cand in admitted:
        Q = cand.to_module()
        if not full and [hom_count(Q, N) for N in test_mods] != sig_x:
            continue
        Qc = _coordinate_module(Q)
        for qm in hom_coordinate_matrices(X, Q):
            reason = None
            for c_n, N in zip(tests, test_mods):
                image, dup = _precompose_keys(X, Qc, qm, N)
                if dup is not None:
                    h = [list(r) for r in dup[0]]
                    reason = {"kind": "non-unique", "target": str(c_n),
                              "map": _fmt_matrix(R, h),
                              "factorizations": [_fmt_matrix(R, dup[1]), _fmt_matrix(R, dup[2])]}
                    break
                if len(image) != hom_count(X, N):
                    missing = next(hm for hm in hom_coordinate_matrices(X, N)
                                   if tuple(tuple(r) for r in hm) not in image)
                    reason = {"kind": "no-factorization", "target": str(c_n),
                              "map": _fmt_matrix(R, missing)}
                    break
            if reason is None:
                return {"module": str(cand), "q": _fmt_matrix(R, qm)}, rejected
            rejected.append({"candidate": str(cand), "q": _fmt_matrix(R, qm), **reason})
    return None, rejected


def _coordinate_module(Q: PresentedModule) -> PresentedModule:
    """Diagonal presentation matching ``Q``'s canonical coordinates."""
    R = Q.ring
    mod = Q.coordinate_moduli
    cols = [k for k, d in enumerate(mod) if d]
    rel = Matrix.diag(R, list(mod)).select_columns(cols) if mod else Matrix(R, [], 0)
    return PresentedModule(R, len(mod), rel)


# -- the homological condition --------------------------------------------------


@dataclass
class HomologicalReport:
    presentation: PresentationRecord
    bound: int
    evidence: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    criterion: dict = field(default_factory=dict)

    @property
    def brute_force_verdict(self) -> bool:
        return not self.failures

    @property
    def criterion_verdict(self) -> bool:
        return bool(self.criterion.get("verdict"))

    @property
    def agree(self) -> bool:
        return self.brute_force_verdict == self.criterion_verdict

    @property
    def verdict(self) -> bool:
        return self.brute_force_verdict

    def to_json(self) -> dict:
        return {"presentation": self.presentation.to_json(), "label": self.presentation.label,
                "bound": self.bound, "verdict": self.verdict,
                "bruteForce": self.brute_force_verdict, "criterion": self.criterion,
                "agree": self.agree,
                "finitary": self.presentation.kind == "level",
                "evidence": self.evidence, "failures": self.failures}


def _admitted_targets(P: PresentationRecord, ring, bound: int, ideals) -> list[CanonicalModule]:
    return [c for c in canonical_modules(ring, bound, ideals) if P.admits(c)]


def check_homological(P: PresentationRecord, family: Sequence[PresentedModule], bound: int = 16,
                      target_ideals: Sequence[MaximalIdeal] | None = None) -> HomologicalReport:
    """Decide the coequalizer condition on a finite family, two ways.

    Brute force: admitted members must have an isomorphic bar-head
    canonical map; for every non-member an admitted universal arrow (the
    coequalizer inside the subcategory) is searched among admitted modules
    of size ``<= bound``.  Criterion: for level presentations the reflection
    unit is an isomorphism on members; for predicates the admitted exponent
    sets must be downward closed (so the subcategory is closed under
    kernels), with a kernel witness otherwise.
    """
    report = HomologicalReport(P, bound)
    family = list(family)
    if not family:
        report.criterion = _criterion(P, family)
        return report
    R = family[0].ring
    if target_ideals is None:
        target_ideals = sorted({m for M in family for m, _ in decompose(M).torsion})
    admitted = _admitted_targets(P, R, bound, target_ideals)

    def one(Y):
        c = decompose(Y)
        if P.admits(Y):
            bh = bar_head(P, Y, max(bound, Y.size or 0))
            return ("member", str(c), {"module": str(c), "member": True,
                                       "coequalizer": str(decompose(bh.coequalizer)),
                                       "iso": bh.is_iso}, None)
        arrow, rejected = _universal_arrow_search(Y, admitted, full=False)
        if arrow is None:
            _, rejected = _universal_arrow_search(Y, admitted, full=True)
            nonzero = [r for r in rejected if r["kind"] == "non-unique"
                       and any(x != "0" for row in r["map"] for x in row)]
            witness = (nonzero or [r for r in rejected if r["kind"] == "non-unique"]
                       or rejected or [None])[0]
            return ("nonmember", str(c), {"module": str(c), "member": False, "coequalizer": None},
                    {"module": str(c), "reason": "no universal arrow among admitted modules "
                     f"of size <= {bound}", "witness": witness})
        return ("nonmember", str(c), {"module": str(c), "member": False,
                                      "coequalizer": arrow["module"], "q": arrow["q"]}, None)

    for kind, name, ev, fail in pmap(one, family):
        report.evidence.append(ev)
        if kind == "member" and not ev["iso"]:
            report.failures.append({"module": name, "reason": "canonical map is not an isomorphism"})
        if fail is not None:
            report.failures.append(fail)
    report.criterion = _criterion(P, family)
    return report


def _criterion(P: PresentationRecord, family) -> dict:
    if P.kind == "level":
        bad = [str(decompose(Y)) for Y in family
               if contains(P.level, Y) and not is_isomorphism(reflect(P.level, Y, canonical=True).unit)]
        return {"method": "reflection unit is an isomorphism on members",
                "verdict": not bad, "failures": bad}
    # predicate: membership must be downward closed in the exponent at every prime
    for m, es in P.admit:
        for e in sorted(es):
            if e > 1 and (e - 1) not in es:
                R = m.ring
                big = PresentedModule.cyclic(R, m.generator ** e)
                mult = Morphism(big, big, Matrix(R, [[m.generator ** (e - 1)]], 1))
                K, _ = kernel(mult)
                return {"method": "admitted exponents downward closed (closure under kernels)",
                        "verdict": False,
                        "witness": {"ideal": str(m), "admitted": str(decompose(big)),
                                    "kernel": str(decompose(K)),
                                    "map": f"multiplication by {R.format(m.generator ** (e - 1))}"}}
    return {"method": "admitted exponents downward closed (closure under kernels)",
            "verdict": True}


# -- coordinates, poset, Kleisli closure ---------------------------------------


def coordinates(P: PresentationRecord) -> dict:
    """Indecomposables of the subcategory: ``A`` plus ``A/m^e`` for ``e <= f(m)``."""
    if P.kind != "level":
        raise NotLevel("coordinates need a level presentation")
    f = P.level
    explicit = []
    for m, v in f.overrides:
        if v == INF:
            explicit.append(f"A/({m})^e : e >= 1")
        else:
            explicit.extend(f"A/({m})" + (f"^{e}" if e > 1 else "") for e in range(1, v + 1))
    if f.default == 0:
        rest = None
    else:
        excl = ", ".join(f"({m})" for m in f.support)
        cond = f"m not in {{{excl}}}, " if excl else ""
        bound = "e >= 1" if f.default == INF else f"1 <= e <= {f.default}"
        rest = f"A/m^e : {cond}{bound}"
    parts = ["{A}"] + ["{" + x + "}" for x in explicit] + (["{" + rest + "}"] if rest else [])
    return {"free": "A", "explicit": explicit, "cofinite": rest, "text": " U ".join(parts)}


def coordinate_set(f: LevelFunction, witnesses: Sequence[tuple]) -> frozenset:
    """Witness indecomposables ``(m, e)`` lying in the subcategory (``A`` always does)."""
    return frozenset(("A", 0) if w == ("A", 0) else w for w in witnesses
                     if w == ("A", 0) or w[1] <= f(w[0]))


def witness_indecomposables(ideals: Sequence[MaximalIdeal], top: int) -> list[tuple]:
    return [("A", 0)] + [(m, e) for m in ideals for e in range(1, top + 1)]


def subset_compare(a: frozenset, b: frozenset) -> str:
    if a == b:
        return "equal"
    if a <= b:
        return "less"
    if a >= b:
        return "greater"
    return "incomparable"


def level_from_membership(member: Callable[[MaximalIdeal, int], bool],
                          support: Sequence[MaximalIdeal], cap: int, default=INF) -> LevelFunction:
    """Recover a level function from summand membership on ``support``.

    ``f(m)`` is the largest ``e <= cap`` with every ``A/m^k`` (``k <= e``)
    admitted, or ``inf`` when ``A/m^(cap+1)`` is admitted as well.
    """
    values = {}
    for m in support:
        e = 0
        while e <= cap and member(m, e + 1):
            e += 1
        values[m] = INF if e == cap + 1 else e
    return LevelFunction(default, values)


@dataclass
class PosetReport:
    nodes: list
    edges: list  # (lower index, upper index) Hasse covers
    mismatches: list
    witnesses: int

    @property
    def order_embedding(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"nodes": [str(f) for f in self.nodes],
                "edges": [[str(self.nodes[a]), str(self.nodes[b])] for a, b in self.edges],
                "nodeCount": len(self.nodes), "edgeCount": len(self.edges),
                "witnessModules": self.witnesses,
                "orderEmbedding": self.order_embedding, "mismatches": self.mismatches}

    def to_dot(self) -> str:
        lines = ["digraph loc {"]
        for k, f in enumerate(self.nodes):
            lines.append(f'  n{k} [label="{f}"];')
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def loc_poset(support: Sequence[MaximalIdeal], values: Sequence | None = None, cap: int | None = None,
              default=INF, bound: int = 64, ring=None) -> PosetReport:
    """Level presentations on a finite support, ordered, with Hasse covers.

    The pointwise order is certified against inclusion of subcategories on
    every witness module (size ``<= bound``, torsion on the support).
    """
    levels = enumerate_levels(support, cap, default, values)
    if ring is None:
        ring = support[0].ring if support else None
    witnesses = canonical_modules(ring, bound, list(support)) if ring is not None else []
    member = [[contains(f, w) for w in witnesses] for f in levels]
    n = len(levels)
    le = [[False] * n for _ in range(n)]
    mismatches = []
    for a in range(n):
        for b in range(n):
            pointwise = poset_compare(levels[a], levels[b]) in ("less", "equal")
            by_witness = all(y or not x for x, y in zip(member[a], member[b]))
            le[a][b] = pointwise
            if pointwise != by_witness:
                mismatches.append([str(levels[a]), str(levels[b])])
    edges = []
    for a in range(n):
        for b in range(n):
            if a == b or not le[a][b] or le[b][a]:
                continue
            if not any(c not in (a, b) and le[a][c] and le[c][b] and not le[c][a] and not le[b][c]
                       for c in range(n)):
                edges.append((a, b))
    return PosetReport(levels, edges, mismatches, len(witnesses))


def kleisli_closure(p: int, n: int) -> list[tuple[MaximalIdeal, int]]:
    """Prime-power summands of ``ZI/(p^n)``: each ideal above ``p`` with its exponent."""
    if not (2 <= p <= 100) or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise BadParameters(f"p must be a rational prime <= 100, got {p}")
    if not (1 <= n <= 4):
        raise BadParameters(f"n must be in 1..4, got {n}")
    c = decompose(PresentedModule.cyclic(ZI, ZI.coerce(p ** n)))
    best: dict = {}
    for m, e in c.torsion:
        best[m] = max(best.get(m, 0), e)
    return sorted(best.items())
