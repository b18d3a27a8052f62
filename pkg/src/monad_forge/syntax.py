"""Text and JSON syntax for modules, matrices, level functions and presentations.

Module literals::

    Z^2 + Z/8 + Z/9          A + A/(1+i)^2          0
    coker diag(2,3)          coker [["2","4"],["6","8"]]
    {"gens": 2, "rels": [["2","0"],["0","3"]]}

``Z`` is accepted as the base only over the integers; ``A`` works for every
ring.  Relation matrices list one row per generator.
"""

from __future__ import annotations

import json
import re

from .errors import ParseError
from .fpmod import Morphism, PresentedModule
from .matrix import Matrix
from .presentation import PresentationRecord
from .reflect import LevelFunction
from .ring import EuclideanRing, MaximalIdeal, Z


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_element(ring: EuclideanRing, value):
    if isinstance(value, bool):
        raise ParseError(f"not a ring element: {value!r}")
    if isinstance(value, int):
        return ring.coerce(value)
    if isinstance(value, str):
        return ring.parse(value)
    raise ParseError(f"not a ring element: {value!r}")


def parse_matrix(ring: EuclideanRing, data, ncols: int | None = None) -> Matrix:
    """Matrix from a JSON list of rows (text or already decoded)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"matrix is not valid JSON: {exc}") from None
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix must be a list of rows")
    rows = [[parse_element(ring, x) for x in r] for r in data]
    if ncols is None and rows:
        ncols = len(rows[0])
    if any(len(r) != (ncols or 0) for r in rows):
        raise ParseError("matrix rows have different lengths")
    return Matrix(ring, rows, ncols or 0)


def format_matrix(ring: EuclideanRing, M: Matrix) -> list[list[str]]:
    return [[ring.format(x) for x in r] for r in M.rows]


_TERM = re.compile(r"^(?P<base>[A-Za-z]+)(?:\^(?P<rank>\d+)|/(?P<mod>\(.*\)|[^()^]+)(?:\^(?P<exp>\d+))?)?$")


def _parse_term(ring: EuclideanRing, term: str):
    """One summand: returns (free rank, list of cyclic moduli)."""
    m = _TERM.match(term.replace(" ", ""))
    if not m:
        raise ParseError(f"bad module term {term!r}")
    base = m.group("base")
    if base not in ("A", "Z") or (base == "Z" and ring != Z):
        raise ParseError(f"unknown base {base!r} for ring {ring.tag}")
    if m.group("mod") is None:
        return int(m.group("rank") or 1), []
    text = m.group("mod")
    if text.startswith("("):
        text = text[1:-1]
    d = ring.parse(text) ** int(m.group("exp") or 1)
    if not d:
        return 1, []
    return 0, [d]


def parse_module(ring: EuclideanRing, text: str) -> PresentedModule:
    text = text.strip()
    if not text:
        raise ParseError("empty module literal")
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"module JSON is invalid: {exc}") from None
        if not isinstance(data, dict) or not isinstance(data.get("gens"), int) or data["gens"] < 0:
            raise ParseError("module JSON needs a nonnegative integer 'gens'")
        g = data["gens"]
        rels = data.get("rels", [[] for _ in range(g)])
        if len(rels) != g:
            raise ParseError("module JSON 'rels' needs one row per generator")
        ncols = len(rels[0]) if rels else 0
        return PresentedModule(ring, g, parse_matrix(ring, rels, ncols))
    if text.startswith("coker"):
        body = text[len("coker"):].strip()
        if body.startswith("diag(") and body.endswith(")"):
            entries = [ring.parse(e) for e in _split_top(body[5:-1], ",") if e]
            return PresentedModule.diagonal(ring, entries)
        return PresentedModule.from_rows(ring, parse_matrix(ring, body).rows,
                                         parse_matrix(ring, body).ncols)
    if text == "0":
        return PresentedModule.zero(ring)
    rank, moduli = 0, []
    for term in _split_top(text, "+"):
        r, ds = _parse_term(ring, term)
        rank += r
        moduli += ds
    return PresentedModule.diagonal(ring, [ring.zero] * rank + moduli)


def parse_morphism(ring: EuclideanRing, dom: PresentedModule, cod: PresentedModule, text) -> Morphism:
    M = parse_matrix(ring, text, dom.generators)
    return Morphism(dom, cod, M)


def _load_json(text, what: str):
    if isinstance(text, (dict, list)):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {exc}") from None


def parse_level(ring: EuclideanRing, text) -> LevelFunction:
    return LevelFunction.from_json(ring, _load_json(text, "level function"))


def parse_presentation(ring: EuclideanRing, text) -> PresentationRecord:
    return PresentationRecord.from_json(ring, _load_json(text, "presentation"))


def parse_ideals(ring: EuclideanRing, text: str) -> list[MaximalIdeal]:
    if not text.strip():
        return []
    return [ring.parse_ideal(t) for t in _split_top(text, ",")]
