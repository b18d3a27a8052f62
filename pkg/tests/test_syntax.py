import pytest

from monad_forge.errors import BadParameters, NotWellDefined, ParseError
from monad_forge.fpmod import decompose
from monad_forge.ring import FPX, Z, ZI
from monad_forge.syntax import (format_matrix, parse_ideals, parse_level, parse_matrix, parse_module,
                                parse_morphism, parse_presentation)


@pytest.mark.parametrize("ring,text,canonical", [
    (Z, "Z^2 + Z/8 + Z/9", "Z^2 + Z/8 + Z/9"),
    (Z, "coker diag(2,3)", "Z/2 + Z/3"),
    (Z, "coker [[2,4],[6,8]]", "Z/2 + Z/4"),
    (Z, '{"gens": 2, "rels": [["2","0"],["0","3"]]}', "Z/2 + Z/3"),
    (Z, '{"gens": 1}', "Z"),
    (Z, "0", "0"),
    (Z, "Z/1 + Z/0", "Z"),
    (ZI, "A^1 + A/(1+i)^2", "A + A/(1+i)^2"),
    (ZI, "A/(5)", "A/(1+2i) + A/(2+i)"),
    (FPX(2), "A/(x^2+x) + A", "A + A/(x) + A/(x+1)"),
])
def test_module_literals(ring, text, canonical):
    assert str(decompose(parse_module(ring, text))) == canonical


@pytest.mark.parametrize("text", ["", "Q/3", "Z/(2", "coker [[1,2],[3]]", '{"gens": -1}',
                                  '{"gens": 2, "rels": [["1"]]}', "Z/x", "{bad json"])
def test_bad_module_literals(text):
    with pytest.raises(ParseError):
        parse_module(Z, text)


def test_z_base_only_over_integers():
    with pytest.raises(ParseError):
        parse_module(ZI, "Z/2")


def test_matrix_round_trip():
    M = parse_matrix(ZI, '[["1+i", "2"], ["-i", 0]]')
    assert format_matrix(ZI, M) == [["1+i", "2"], ["-i", "0"]]
    with pytest.raises(ParseError):
        parse_matrix(Z, '[1, 2]')
    with pytest.raises(ParseError):
        parse_matrix(Z, '[[true]]')


def test_morphism_parsing_checks_well_definedness():
    M, N = parse_module(Z, "Z/4"), parse_module(Z, "Z/6")
    assert not parse_morphism(Z, M, N, "[[3]]").is_zero()
    with pytest.raises(NotWellDefined):
        parse_morphism(Z, M, N, "[[1]]")


def test_level_and_presentation_parsing():
    f = parse_level(Z, '{"default":"inf","values":{"2":1}}')
    assert str(f) == "2->1, else inf"
    assert str(parse_level(Z, {"default": 0})) == "else 0"
    P = parse_presentation(Z, '{"kind":"predicate","admit":{"2":[2]},"defaultAdmit":"all"}')
    assert P.kind == "predicate"
    with pytest.raises(ParseError):
        parse_level(Z, '{"default":"inf","values":{"x":1}}')
    with pytest.raises(ParseError):
        parse_level(Z, "[1]")
    with pytest.raises(BadParameters):
        parse_level(Z, '{"values":{"6":1}}')


def test_ideal_lists():
    assert [str(m) for m in parse_ideals(Z, "2, 3")] == ["2", "3"]
    assert [str(m) for m in parse_ideals(ZI, "1+i, 3")] == ["1+i", "3"]
    assert parse_ideals(Z, " ") == []
