import random

import pytest
from hypothesis import given, settings, strategies as st

from monad_forge.errors import DuplicateSupport, ParseError
from monad_forge.families import canonical_modules
from monad_forge.matrix import Matrix
from monad_forge.fpmod import Morphism, PresentedModule, cokernel, decompose, hom_enumerate
from monad_forge.reflect import (INF, LevelFunction, contains, enumerate_levels, format_extnat,
                                 parse_extnat, poset_compare, reflect, reflect_structural_radical,
                                 torsion_elements, torsion_radical, truncate,
                                 universal_property_check)
from monad_forge.ring import FPX, Z, ZI

TWO, THREE = Z.ideal(2), Z.ideal(3)


def lf(default="inf", **values):
    """Level function on Z from keyword values like p2=1."""
    return LevelFunction(default, {Z.ideal(int(k[1:])): v for k, v in values.items()})


def canon(text_or_module):
    return decompose(text_or_module)


def mod(*entries, ring=Z):
    return PresentedModule.diagonal(ring, list(entries))


# -- level functions ------------------------------------------------------------

def test_extnat_parsing():
    assert parse_extnat("inf") == INF and parse_extnat(3) == 3 and parse_extnat("2") == 2
    assert format_extnat(INF) == "inf"
    for bad in (-1, "x", 1.5, True):
        with pytest.raises(ParseError):
            parse_extnat(bad)


def test_level_function_canonical_form():
    f = LevelFunction(INF, {TWO: 1, THREE: INF})
    assert f == lf(p2=1)
    assert str(f) == "2->1, else inf"
    assert LevelFunction.from_json(Z, f.to_json()) == f
    with pytest.raises(DuplicateSupport):
        LevelFunction.from_json(Z, {"default": "inf", "values": {"2": 1, "+2": 3}})


def test_poset_compare_examples():
    f, g = lf(p2=1, p3=5), lf(p2=2, p3=4)
    assert poset_compare(lf(p2=1), LevelFunction(INF)) == "less"
    assert poset_compare(f, g) == "incomparable"
    assert f.meet(g) == lf(p2=1, p3=4)
    assert f.join(g) == lf(p2=2, p3=5)
    assert poset_compare(g, g) == "equal"


def test_enumerate_levels_examples():
    assert [str(f) for f in enumerate_levels([TWO], cap=1)] == \
        ["2->0, else inf", "2->1, else inf", "else inf"]
    assert enumerate_levels([], cap=3) == [LevelFunction(INF)]
    assert len(enumerate_levels([TWO, THREE], cap=2)) == 16
    with pytest.raises(DuplicateSupport):
        enumerate_levels([TWO, TWO], cap=1)


# -- membership and reflection ------------------------------------------------------

def test_contains_examples():
    f = lf(p2=1)
    assert contains(f, mod(0, 2))
    assert not contains(f, mod(4))
    assert all(contains(LevelFunction(INF), c) for c in canonical_modules(Z, 64, max_rank=1))


def test_contains_cross_checked_by_monomorphisms():
    # for f(2)=1 on 2-groups, membership fails exactly when Z/4 embeds
    f = lf(p2=1)
    for c in canonical_modules(Z, 32, [TWO]):
        M = c.to_module()
        embeds = any(len({h.cod.coordinates(h(x)) for x in mod(4).elements()}) == 4
                     for h in hom_enumerate(mod(4), M))
        assert contains(f, c) == (not embeds), str(c)


def test_reflect_examples():
    f = lf(p2=1)
    r = reflect(f, mod(0, 4, 3))
    assert str(canon(r.module)) == "Z + Z/2 + Z/3"
    M = mod(0, 4, 3)
    r = reflect(LevelFunction(INF), M)
    assert r.is_identity and r.unit == Morphism.identity(M)
    U, iota = torsion_radical(f, mod(4), 64)
    Q, _ = cokernel(iota)
    assert canon(reflect(f, mod(4)).module) == canon(Q) == canon(mod(2))


def test_torsion_radical_examples():
    f = lf(p2=1)
    assert canon(torsion_radical(f, mod(4), 64)[0]) == canon(mod(2))
    assert torsion_elements(f, mod(4)) == {(0,), (2,)}
    assert canon(torsion_radical(LevelFunction(INF), mod(4), 64)[0]).size == 1
    assert canon(torsion_radical(lf(p2=0), mod(2, 3), 64)[0]) == canon(mod(2))


def test_truncate_is_min():
    c = canon(mod(8, 9, 4, 0))
    t = truncate(lf(p2=1, p3=0), c)
    assert str(t) == "Z + Z/2 + Z/2"


@pytest.mark.parametrize("ring", [Z, ZI, FPX(2)], ids=lambda r: r.tag)
def test_unit_is_epi_and_lands_in_subcategory(ring):
    ideals = [ring.ideal(g) for g in ring.irreducibles(5)][:2]
    for f in enumerate_levels(ideals, cap=2):
        for c in canonical_modules(ring, 32, ideals, max_rank=1):
            M = c.to_module()
            r = reflect(f, M)
            assert contains(f, r.module)
            assert canon(r.module) == truncate(f, c)
            Q, _ = cokernel(r.unit)
            assert canon(Q).size == 1


@settings(max_examples=25, deadline=None)
@given(v2=st.sampled_from([0, 1, 2, INF]), v3=st.sampled_from([0, 1, 2, INF]),
       seed=st.integers(0, 2**32))
def test_elementwise_and_structural_agree(v2, v3, seed):
    f = lf(p2=v2, p3=v3)
    fam = canonical_modules(Z, 144, [TWO, THREE])
    c = random.Random(seed).choice(fam)
    M = c.to_module()
    U, iota = torsion_radical(f, M, 256)
    S, _ = reflect_structural_radical(f, M)
    assert canon(U) == canon(S)
    assert canon(cokernel(iota)[0]) == canon(reflect(f, M).module)


# -- universal property -------------------------------------------------------------

def test_universal_property_examples():
    f = lf(p2=1)
    rep = universal_property_check(f, mod(4), 16)
    assert rep.ok and rep.checked_targets > 0
    rep = universal_property_check(LevelFunction(INF), mod(6), 16)
    assert rep.ok and rep.trivial
    # f(2)=0: Z/2 is not a target; every map from Z/2 into an allowed target is zero
    rep = universal_property_check(lf(p2=0), mod(2), 16)
    assert rep.ok


def test_unique_factorization_by_direct_count():
    f = lf(p2=1)
    M = mod(4, 3)
    r = reflect(f, M)
    for c in canonical_modules(Z, 16):
        if not contains(f, c):
            continue
        N = c.to_module()
        lifts = hom_enumerate(r.module, N)
        for h in hom_enumerate(M, N):
            assert sum(1 for k in lifts if k @ r.unit == h) == 1


class _FakeReflection:
    def __init__(self, module, unit):
        self.module, self.unit, self.is_identity = module, unit, False


def test_universal_check_flags_reflection_outside_subcategory(monkeypatch):
    import monad_forge.reflect as mod_reflect

    monkeypatch.setattr(mod_reflect, "reflect",
                        lambda f, M, canonical=False: _FakeReflection(M, Morphism.identity(M)))
    rep = mod_reflect.universal_property_check(lf(p2=1), mod(4), 16)
    assert [v["kind"] for v in rep.violations] == ["outside"]


def test_universal_check_flags_non_unique_factorization(monkeypatch):
    # a "unit" Z/4 -> Z/2 + Z/2 hitting only the first summand: maps out of the second
    # summand are invisible after precomposition, so factorizations are not unique
    import monad_forge.reflect as mod_reflect

    L = mod(2, 2)
    unit = Morphism(mod(4), L, Matrix(Z, [[1], [0]]))
    monkeypatch.setattr(mod_reflect, "reflect", lambda f, M, canonical=False: _FakeReflection(L, unit))
    rep = mod_reflect.universal_property_check(lf(p2=1), mod(4), 16)
    kinds = {v["kind"] for v in rep.violations}
    assert "non-unique" in kinds and "outside" not in kinds
