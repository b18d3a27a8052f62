import random

import pytest
from hypothesis import given, settings, strategies as st

from monad_forge.errors import ShapeMismatch
from monad_forge.matrix import (EchelonSpan, Matrix, MatrixEquations, hermite_basis, kernel_basis,
                                smith_normal_form, solve)
from monad_forge.ring import FPX, Z, ZI
from oracles import determinantal_divisors, leibniz_det

RINGS = [Z, ZI, FPX(2), FPX(3)]


def random_matrix(ring, rng, m, n, size=6):
    return Matrix(ring, [[ring.random_element(rng, size) for _ in range(n)] for _ in range(m)], n)


def check_snf(A: Matrix):
    R = A.ring
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert s.U @ s.U_inv == Matrix.identity(R, A.nrows)
    assert s.V @ s.V_inv == Matrix.identity(R, A.ncols)
    for i in range(s.D.nrows):
        for j in range(s.D.ncols):
            assert i == j or not s.D[i, j]
    diag = s.diagonal
    for a, b in zip(diag, diag[1:]):
        assert R.divides(a, b)
    for d in diag:
        assert not d or R.normalize(d)[0] == d
    return s


def test_snf_examples():
    s = check_snf(Matrix.diag(Z, [2, 3]))
    assert s.diagonal == [1, 6]
    s = check_snf(Matrix(Z, [[2, 4], [6, 8]]))
    assert s.diagonal == [2, 4]
    s = check_snf(Matrix.zeros(Z, 2, 3))
    assert s.diagonal == [0, 0]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.tag)
def test_snf_diagonal_matches_determinantal_divisors(ring):
    rng = random.Random(11)
    for _ in range(40):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = random_matrix(ring, rng, m, n, 5)
        s = check_snf(A)
        dd = determinantal_divisors(ring, A)
        prod = ring.one
        for k, d in enumerate(s.diagonal):
            prod = prod * d
            assert ring.normalize(prod)[0] == dd[k] if prod else not dd[k]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.tag)
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), m=st.integers(0, 4), n=st.integers(0, 4))
def test_snf_property(ring, seed, m, n):
    A = random_matrix(ring, random.Random(seed), m, n, 8)
    check_snf(A)


def test_solve_examples():
    assert solve(Matrix(Z, [[2]]), Matrix(Z, [[6]])) == Matrix(Z, [[3]])
    assert solve(Matrix(Z, [[2]]), Matrix(Z, [[3]])) is None
    assert solve(Matrix.diag(Z, [2, 3]), Matrix.diag(Z, [4, 9])) == Matrix.diag(Z, [2, 3])
    with pytest.raises(ShapeMismatch):
        solve(Matrix(Z, [[1]]), Matrix(Z, [[1], [2]]))


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.tag)
def test_solve_finds_planted_solutions(ring):
    rng = random.Random(2)
    for _ in range(60):
        B = random_matrix(ring, rng, rng.randint(1, 3), rng.randint(1, 3))
        X0 = random_matrix(ring, rng, B.ncols, rng.randint(1, 2))
        C = B @ X0
        X = solve(B, C)
        assert X is not None and B @ X == C


def test_kernel_basis_annihilated_and_complete():
    rng = random.Random(4)
    for ring in RINGS:
        for _ in range(30):
            B = random_matrix(ring, rng, 2, 4)
            K = kernel_basis(B)
            assert (B @ K).is_zero()
            assert K.ncols == 4 - smith_normal_form(B).rank


# -- Hermite bases -------------------------------------------------------------

def test_hermite_example():
    assert hermite_basis(Z, [(1, 0), (-1, 2)], 2) == [(1, 0), (0, 2)]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.tag)
def test_hermite_basis_depends_only_on_span(ring):
    rng = random.Random(8)
    for _ in range(40):
        vs = [tuple(ring.random_element(rng, 5) for _ in range(3)) for _ in range(rng.randint(1, 3))]
        base = hermite_basis(ring, vs, 3)
        # unimodular recombination keeps the span: add multiples, permute, flip by units
        ws = [list(v) for v in vs]
        for _ in range(4):
            if len(ws) >= 2:
                i, j = rng.sample(range(len(ws)), 2)
                c = ring.random_element(rng, 3)
                ws[i] = [a + c * b for a, b in zip(ws[i], ws[j])]
            rng.shuffle(ws)
            u = rng.choice(ring.units())
            ws[0] = [u * a for a in ws[0]]
        ws.append([ring.zero] * 3)
        assert hermite_basis(ring, ws, 3) == base


def test_echelon_insert_reports_growth():
    span = EchelonSpan(Z, 2)
    assert span.insert((2, 0))
    assert not span.insert((4, 0))
    assert span.insert((3, 0))
    assert span.basis() == [(1, 0)]
    assert not span.insert((0, 0))


# -- matrix equations ------------------------------------------------------------

def test_matrix_equations_two_unknowns():
    R = Z
    eq = MatrixEquations(R)
    eq.unknown("X", 2, 2)
    eq.unknown("Y", 2, 1)
    A = Matrix(R, [[1, 2], [0, 1]])
    B = Matrix(R, [[3], [1]])
    X0 = Matrix(R, [[1, -1], [2, 0]])
    Y0 = Matrix(R, [[5], [7]])
    # A X B + Y = rhs, and X = X0
    eq.equation([(A, "X", B), (None, "Y", None)], A @ X0 @ B + Y0)
    eq.equation([(None, "X", None)], X0)
    sol = eq.solve()
    assert sol["X"] == X0 and sol["Y"] == Y0


def test_matrix_equations_unsolvable():
    eq = MatrixEquations(Z)
    eq.unknown("T", 1, 1)
    eq.equation([(Matrix(Z, [[2]]), "T", None)], Matrix(Z, [[1]]))
    assert eq.solve() is None


def test_matrix_algebra_basics():
    A = Matrix(Z, [[1, 2], [3, 4]])
    assert A.T.T == A
    assert A.det() == leibniz_det(Z, A.rows) == -2
    assert A.hstack(A).shape == (2, 4) and A.vstack(A).shape == (4, 2)
    with pytest.raises(ShapeMismatch):
        Matrix(Z, [[1, 2], [3]])
