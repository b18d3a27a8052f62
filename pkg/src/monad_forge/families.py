"""Deterministic and random families of modules used by the exhaustive checks."""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .fpmod import CanonicalModule, PresentedModule
from .matrix import Matrix
from .ring import EuclideanRing, MaximalIdeal


def ideals_up_to(ring: EuclideanRing, bound: int) -> list[MaximalIdeal]:
    """Maximal ideals whose residue field has at most ``bound`` elements."""
    return [ring.ideal(g) for g in ring.irreducibles(bound)]


def _partitions(q: int, budget: int, max_parts: int | None, largest: int | None = None):
    """Non-increasing exponent lists ``(e1 >= e2 >= ...)`` with ``q**sum <= budget``."""
    yield ()
    if max_parts == 0:
        return
    e = 1
    while q ** e <= budget and (largest is None or e <= largest):
        rest = None if max_parts is None else max_parts - 1
        for tail in _partitions(q, budget // q ** e, rest, e):
            yield (e,) + tail
        e += 1


def canonical_modules(ring: EuclideanRing, bound: int,
                      ideals: Sequence[MaximalIdeal] | None = None,
                      max_rank: int = 0,
                      max_summands_per_prime: int | None = None) -> list[CanonicalModule]:
    """All canonical modules with torsion of size ``<= bound`` on the given ideals.

    Free rank runs over ``0..max_rank``.  The list is sorted by (rank,
    size, torsion) so that its order is stable.
    """
    ideals = ideals_up_to(ring, bound) if ideals is None else sorted(ideals)
    torsions = []

    def walk(idx, budget, acc):
        if idx == len(ideals):
            torsions.append(tuple(acc))
            return
        m = ideals[idx]
        q = m.residue_count
        for part in _partitions(q, budget, max_summands_per_prime):
            used = q ** sum(part)
            walk(idx + 1, budget // used, acc + [(m, e) for e in part])

    walk(0, bound, [])
    mods = [CanonicalModule(ring, r, t) for r in range(max_rank + 1) for t in torsions]
    return sorted(mods, key=lambda c: (c.rank, _torsion_size(c), c.torsion))


def _torsion_size(c: CanonicalModule) -> int:
    return CanonicalModule(c.ring, 0, c.torsion).size


def scramble(M: PresentedModule, rng: random.Random, steps: int = 4, entry_size: int = 3) -> PresentedModule:
    """An isomorphic presentation of ``M``.

    Applies random unimodular generator changes, appends combinations of
    existing relations and zero columns, and permutes relation columns.
    """
    R = M.ring
    rel = [list(r) for r in M.relations.rows]
    g, ncols = M.generators, M.relations.ncols
    for _ in range(steps):
        move = rng.randrange(4)
        if move == 0 and g >= 2:
            # generator change: e_j -> e_j + c e_i acts on relations as row_i -= c row_j
            i, j = rng.sample(range(g), 2)
            c = R.random_element(rng, entry_size)
            rel[i] = [a - c * b for a, b in zip(rel[i], rel[j])]
        elif move == 1 and g >= 2:
            i, j = rng.sample(range(g), 2)
            rel[i], rel[j] = rel[j], rel[i]
        elif move == 2 and ncols:
            coeffs = [R.random_element(rng, entry_size) for _ in range(ncols)]
            for r in rel:
                r.append(sum((c * a for c, a in zip(coeffs, r)), R.zero))
            ncols += 1
        else:
            for r in rel:
                r.append(R.zero)
            ncols += 1
    if ncols:
        order = list(range(ncols))
        rng.shuffle(order)
        rel = [[r[k] for k in order] for r in rel]
    return PresentedModule(R, g, Matrix(R, rel, ncols))


def random_presentation(ring: EuclideanRing, rng: random.Random, max_gens: int = 3,
                        max_rels: int = 3, entry_size: int = 6) -> PresentedModule:
    g = rng.randint(0, max_gens)
    r = rng.randint(0, max_rels)
    rows = [[ring.random_element(rng, entry_size) for _ in range(r)] for _ in range(g)]
    return PresentedModule(ring, g, Matrix(ring, rows, r))


def finite_modules(modules: Iterable[PresentedModule], bound: int) -> list[PresentedModule]:
    return [M for M in modules if M.is_finite and M.size <= bound]
