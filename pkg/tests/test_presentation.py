import itertools

import pytest

from monad_forge.errors import BadParameters, NotLevel, ParseError, TooLarge
from monad_forge.families import canonical_modules
from monad_forge.fpmod import PresentedModule, decompose
from monad_forge.presentation import (PresentationRecord, bar_head, check_homological, coordinate_set,
                                      coordinates, free_on_elements, kleisli_closure,
                                      level_from_membership, loc_poset, reflector_via_coequalizer,
                                      subset_compare, witness_indecomposables)
from monad_forge.reflect import INF, LevelFunction, contains, enumerate_levels, poset_compare
from monad_forge.ring import FPX, Z, ZI

TWO, THREE = Z.ideal(2), Z.ideal(3)


def lf(default="inf", **values):
    return LevelFunction(default, {Z.ideal(int(k[1:])): v for k, v in values.items()})


def level(default="inf", **values):
    return PresentationRecord.from_level(lf(default, **values))


def cyc(n, ring=Z):
    return PresentedModule.cyclic(ring, n)


PRED_TWO = PresentationRecord.from_predicate({TWO: [2]})


# -- records ------------------------------------------------------------------------

def test_record_json_round_trip():
    for P in (level(p2=1), PRED_TWO, PresentationRecord.from_predicate({THREE: [1, 2]}, "none")):
        assert PresentationRecord.from_json(Z, P.to_json()) == P
    assert level(p2=1).to_json() == {"kind": "level", "f": {"default": "inf", "values": {"2": 1}}}
    assert PRED_TWO.to_json() == {"kind": "predicate", "admit": {"2": [2]}, "defaultAdmit": "all"}
    with pytest.raises(ParseError):
        PresentationRecord.from_json(Z, {"kind": "other"})
    with pytest.raises(ParseError):
        PresentationRecord.from_json(Z, {"kind": "predicate", "admit": {"2": [0]}})


def test_predicate_admission():
    assert PRED_TWO.admits(cyc(4)) and not PRED_TWO.admits(cyc(2))
    assert PRED_TWO.admits(cyc(9)) and PRED_TWO.admits(PresentedModule.free(Z, 2))


# -- the free module on elements ------------------------------------------------------

def test_free_on_elements_examples():
    fp = free_on_elements(cyc(2))
    assert len(fp.elements) == 2
    texts = {fp.format_vector(r) for r in fp.relators}
    assert "-e(0) + (2)e(1)" in texts and "e(0)" in texts

    fp = free_on_elements(PresentedModule.zero(Z))
    assert len(fp.elements) == 1 and set(fp.relators) == {(1,)}
    assert fp.augmentation.cod.generators == 0

    fp = free_on_elements(cyc(3))
    assert len(fp.elements) == 3 and len(fp.relators) == 9 + 1


def test_scalar_relators_per_ring():
    assert len(free_on_elements(cyc(ZI.parse("1+i"), ZI)).relators) == 4 + 2 + 1
    R = FPX(2)
    assert len(free_on_elements(cyc(R.parse("x^2"), R)).relators) == 16 + 4 + 1
    with pytest.raises(TooLarge):
        free_on_elements(PresentedModule.free(Z, 1))


@pytest.mark.parametrize("Y", [cyc(2), cyc(4), cyc(3), PresentedModule.diagonal(Z, [2, 2]),
                               cyc(ZI.parse("1+i"), ZI), cyc(FPX(2).parse("x^2"), FPX(2))],
                         ids=["Z2", "Z4", "Z3", "Z2xZ2", "ZI_1+i", "F2x_x2"])
def test_finite_relators_generate_full_difference_submodule(Y):
    """Every difference generator w - e_{aug(w)}, w a formal sum with coefficients taken
    from small residues, lies in the span of the finite relators, and conversely."""
    R = Y.ring
    bh = bar_head(level(), Y)
    fp = bh.stage0
    n = len(fp.elements)
    index = {a: k for k, a in enumerate(fp.elements)}
    # coefficients: residues modulo the exponent, plus their negatives
    exp = Y.coordinate_moduli[-1] if Y.coordinate_moduli else R.one
    coeffs = sorted(set(R.residues(exp)) | {-c for c in R.residues(exp)}, key=R.sort_key)
    if n ** len(coeffs) > 50_000:
        coeffs = coeffs[:3]
    count = 0
    for combo in itertools.product(coeffs, repeat=n):
        w = list(combo)
        a = Y.coordinates(fp.augmentation.matrix.apply(w))
        diff = list(w)
        diff[index[a]] -= R.one
        assert bh.difference_contains(diff)
        count += 1
    assert count > 0
    for r in fp.relators:
        assert bh.difference_contains(r)


# -- bar head ---------------------------------------------------------------------------

def test_bar_head_z2_hand_computation():
    bh = bar_head(level(), cyc(2))
    assert bh.difference_basis == [(1, 0), (0, 2)]
    assert str(decompose(bh.coequalizer)) == "Z/2"
    assert bh.is_iso and bh.verify_split()


def test_bar_head_examples():
    bh = bar_head(level(), PresentedModule.zero(Z))
    assert decompose(bh.coequalizer).size == 1 and bh.is_iso
    assert bar_head(level(p2=1), cyc(2)).is_iso
    with pytest.raises(BadParameters):
        bar_head(level(p2=1), cyc(4))


def test_bar_head_iso_on_members_across_rings():
    for ring in (ZI, FPX(3)):
        ideals = [ring.ideal(g) for g in ring.irreducibles(9)][:2]
        for c in canonical_modules(ring, 27, ideals):
            bh = bar_head(PresentationRecord.from_level(LevelFunction(INF)), c.to_module())
            assert bh.is_iso and bh.verify_split(16)


def test_reflector_via_coequalizer_examples():
    assert str(decompose(reflector_via_coequalizer(LevelFunction(INF), cyc(4)))) == "Z/4"
    assert str(decompose(reflector_via_coequalizer(lf(p2=1), cyc(4)))) == "Z/2"
    assert decompose(reflector_via_coequalizer(lf(p2=0), cyc(8))).size == 1


# -- homological condition ------------------------------------------------------------

FAMILY16 = [c.to_module() for c in canonical_modules(Z, 16, [TWO, THREE])]


def test_homological_level_examples():
    rep = check_homological(level(p2=1), FAMILY16)
    assert rep.verdict and rep.criterion_verdict and rep.agree
    rep = check_homological(level(), FAMILY16)
    assert rep.verdict and rep.agree


def test_homological_predicate_witness():
    rep = check_homological(PRED_TWO, FAMILY16, 16)
    assert not rep.verdict and not rep.criterion_verdict and rep.agree
    fails = {f["module"]: f for f in rep.failures}
    w = fails["Z/2"]["witness"]
    assert w["candidate"] == "Z/4" and w["kind"] == "non-unique"
    a, b = w["factorizations"]
    assert a != b
    assert rep.criterion["witness"]["kernel"] == "Z/2"


def test_homological_empty_family():
    rep = check_homological(level(p2=1), [])
    assert rep.verdict and rep.agree


# -- coordinates and the poset ----------------------------------------------------------

def test_coordinates_examples():
    assert coordinates(level(p2=1))["text"] == "{A} U {A/(2)} U {A/m^e : m not in {(2)}, e >= 1}"
    assert coordinates(level(default=0))["text"] == "{A}"
    assert coordinates(level())["text"] == "{A} U {A/m^e : e >= 1}"
    with pytest.raises(NotLevel):
        coordinates(PRED_TWO)


def test_coordinate_sets_match_poset_compare():
    levels = enumerate_levels([TWO, THREE], cap=2)
    wit = witness_indecomposables([TWO, THREE], 3)
    for f, g in itertools.product(levels, repeat=2):
        a, b = coordinate_set(f, wit), coordinate_set(g, wit)
        assert subset_compare(a, b) == poset_compare(f, g)


def test_level_round_trip_through_membership():
    witnesses = canonical_modules(Z, 64, [TWO, THREE])
    for f in enumerate_levels([TWO, THREE], cap=2):
        g = level_from_membership(lambda m, e: e <= f(m), [TWO, THREE], cap=2)
        assert g == f
        assert all(contains(f, w) == contains(g, w) for w in witnesses)


def test_loc_poset_examples():
    rep = loc_poset([TWO, THREE], values=[0, 1, 2])
    assert len(rep.nodes) == 9 and len(rep.edges) == 12 and rep.order_embedding
    rep = loc_poset([], cap=2, ring=Z)
    assert len(rep.nodes) == 1 and rep.edges == []
    rep = loc_poset([TWO], values=[0, 1, "inf"])
    assert len(rep.nodes) == 3 and len(rep.edges) == 2
    dot = rep.to_dot()
    assert dot.startswith("digraph loc {") and dot.count("->") == 2 + 2  # labels contain "->"


def test_em_maximality():
    top = LevelFunction(INF)
    for f in enumerate_levels([TWO, THREE], cap=2):
        assert poset_compare(f, top) in ("less", "equal")


# -- Kleisli closure ----------------------------------------------------------------------

def test_kleisli_examples():
    assert [(str(m), e) for m, e in kleisli_closure(5, 2)] == [("1+2i", 2), ("2+i", 2)]
    assert [(str(m), e) for m, e in kleisli_closure(3, 1)] == [("3", 1)]
    assert [(str(m), e) for m, e in kleisli_closure(2, 1)] == [("1+i", 2)]
    for bad in [(4, 1), (101, 1), (3, 0), (3, 5)]:
        with pytest.raises(BadParameters):
            kleisli_closure(*bad)
