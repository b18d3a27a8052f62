"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (lines appear in the -v output) or directly with
``python3 tests/test_acceptance.py`` for a bare summary.
"""

import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cli_cases import CASES, GOLDEN, run  # noqa: E402
from monad_forge.beck import field_extension_probe  # noqa: E402
from monad_forge.families import canonical_modules, random_presentation, scramble  # noqa: E402
from monad_forge.fpmod import PresentedModule, cokernel, decompose  # noqa: E402
from monad_forge.matrix import Matrix, smith_normal_form  # noqa: E402
from monad_forge.presentation import (PresentationRecord, bar_head, check_homological,  # noqa: E402
                                      coordinate_set, kleisli_closure, loc_poset, subset_compare,
                                      witness_indecomposables)
from monad_forge.reflect import (INF, LevelFunction, contains, enumerate_levels,  # noqa: E402
                                 poset_compare, torsion_radical, truncate,
                                 universal_property_check)
from monad_forge.ring import FPX, Z, ZI  # noqa: E402
from oracles import closure_elements  # noqa: E402

RINGS = [Z, ZI, FPX(2), FPX(3)]
# exhaustive element counting over polynomial rings is slow in pure Python,
# so those families stop at 64 elements
FAMILY_BOUND = {Z: 256, ZI: 256, FPX(2): 64, FPX(3): 64}
TWO, THREE = Z.ideal(2), Z.ideal(3)
LEVELS = enumerate_levels([TWO, THREE], cap=2)  # values {0, 1, 2, inf}: 16 functions


def random_matrix(ring, rng, m, n, size=8):
    return Matrix(ring, [[ring.random_element(rng, size) for _ in range(n)] for _ in range(m)], n)


def snf_soundness():
    rng = random.Random(2024)
    for R in RINGS:
        for _ in range(300):
            A = random_matrix(R, rng, rng.randint(1, 5), rng.randint(1, 5))
            s = smith_normal_form(A)
            assert s.U @ A @ s.V == s.D
            assert s.U @ s.U_inv == Matrix.identity(R, A.nrows)
            assert s.V @ s.V_inv == Matrix.identity(R, A.ncols)
            assert all(i == j or not s.D[i, j] for i in range(s.D.nrows) for j in range(s.D.ncols))
            diag = s.diagonal
            assert all(R.divides(a, b) for a, b in zip(diag, diag[1:]))


def decomposition_correctness():
    rng = random.Random(7)
    for R in RINGS:
        for c in canonical_modules(R, FAMILY_BOUND[R]):
            # count elements of a disguised presentation without the Smith form
            M = scramble(c.to_module(), rng, steps=5)
            assert len(closure_elements(M)) == c.size == decompose(M).size, str(c)
        for _ in range(200):
            M = random_presentation(R, rng)
            assert decompose(scramble(M, rng, steps=6)) == decompose(M)


def reflector_agreement():
    family = [c for c in canonical_modules(Z, 256, [TWO, THREE])]
    mismatches = 0
    for f in LEVELS:
        for c in family:
            U, iota = torsion_radical(f, c.to_module(), 256)
            if decompose(cokernel(iota)[0]) != truncate(f, c):
                mismatches += 1
    assert len(LEVELS) == 16 and mismatches == 0


def _gcd_hom_count(src, dst):
    """|Hom(src, dst)| for Z-modules in canonical form, from gcds of orders."""
    def orders(c):
        return [int(m.generator) ** e for m, e in c.torsion]
    n = 1
    for b in orders(dst):
        n *= b ** src.rank
        for a in orders(src):
            n *= math.gcd(a, b)
    return n


def universal_property():
    targets = canonical_modules(Z, 64)
    family = canonical_modules(Z, 64, [TWO, THREE], max_rank=1)
    for f in LEVELS:
        members = [t for t in targets if contains(f, t)]
        for c in family:
            rep = universal_property_check(f, c.to_module(), 64, targets)
            assert rep.ok, (str(f), str(c), rep.violations)
            expected = sum(_gcd_hom_count(c, t) for t in members)
            assert rep.checked_maps == expected


def homological_condition():
    fam16 = [c.to_module() for c in canonical_modules(Z, 16, [TWO, THREE])]
    fam64 = [c.to_module() for c in canonical_modules(Z, 64, [TWO, THREE])]
    for f in LEVELS:
        P = PresentationRecord.from_level(f)
        rep = check_homological(P, fam16, 16)
        assert rep.verdict and rep.criterion_verdict
        rep = check_homological(P, [Y for Y in fam64 if P.admits(Y)], 64)
        assert rep.verdict and rep.criterion_verdict
    bh = bar_head(PresentationRecord.from_level(LevelFunction(INF)), PresentedModule.cyclic(Z, 2))
    assert bh.difference_basis == [(1, 0), (0, 2)]
    assert str(decompose(bh.coequalizer)) == "Z/2" and bh.is_iso


def negative_witness():
    P = PresentationRecord.from_predicate({TWO: [2]})
    fam = [c.to_module() for c in canonical_modules(Z, 16, [TWO, THREE])]
    rep = check_homological(P, fam, 16)
    assert not rep.verdict
    w = next(x["witness"] for x in rep.failures if x["module"] == "Z/2")
    assert w["kind"] == "non-unique" and w["candidate"] == "Z/4"
    a, b = w["factorizations"]
    assert a != b
    assert "factorizations" in str(rep.to_json())


def poset_classification():
    rep = loc_poset([TWO, THREE], values=[0, 1, 2])
    assert rep.order_embedding and rep.witnesses > 0
    assert len(rep.nodes) == 9 and len(rep.edges) == 12


def coordinatization():
    wit = witness_indecomposables([TWO, THREE], 3)
    pairs = 0
    for f in LEVELS:
        for g in LEVELS:
            assert subset_compare(coordinate_set(f, wit), coordinate_set(g, wit)) == poset_compare(f, g)
            pairs += 1
    assert pairs == 256


def monadicity_probe():
    for p, k in [(2, 2), (3, 2)]:
        start = time.perf_counter()
        bad = 0
        for seed in range(10):
            rep = field_extension_probe(p, k, dims=3, trials=200, seed=seed)
            bad += len(rep.counterexamples)
        assert bad == 0
        assert time.perf_counter() - start < 5


def kleisli_closure_exponents():
    for p in [2, 3, 5, 7, 11, 13]:
        above = {ZI.ideal(g) for g in ZI.irreducibles(p * p) if ZI.divides(g, ZI.coerce(p))}
        for n in range(1, 4):
            summands = kleisli_closure(p, n)
            assert {m for m, _ in summands} == above
            assert math.prod(m.residue_count ** e for m, e in summands) == p ** (2 * n)
            for m, e in summands:
                assert e == 2 * n if p == 2 else e >= n


def cli_determinism():
    commands = set()
    for name, argv, code in CASES:
        golden = (GOLDEN / f"{name}.out").read_bytes()
        for threads in ("1", "1", "4", "4"):
            assert run(argv, threads) == (code, golden), name
        commands.add(argv[0])
    assert len(commands) == 13


CRITERIA = [
    (1, "SNF soundness", snf_soundness),
    (2, "decomposition correctness", decomposition_correctness),
    (3, "reflector agreement", reflector_agreement),
    (4, "universal property", universal_property),
    (5, "homological condition", homological_condition),
    (6, "negative witness", negative_witness),
    (7, "poset classification", poset_classification),
    (8, "coordinatization", coordinatization),
    (9, "absolute monadicity probe", monadicity_probe),
    (10, "Kleisli closure", kleisli_closure_exponents),
    (11, "CLI determinism", cli_determinism),
]


def run_criterion(number, title, check):
    start = time.perf_counter()
    try:
        check()
        ok, detail = True, ""
    except AssertionError as exc:
        ok, detail = False, f" ({exc})" if str(exc) else ""
    line = f"criterion {number:2d} {title}: {'PASS' if ok else 'FAIL'}" \
           f" [{time.perf_counter() - start:.1f}s]{detail}"
    return ok, line


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, line = run_criterion(number, title, check)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
