"""Exact linear solving over the function field."""

import random

from vermalab.field import FieldElem
from vermalab.linalg import SparseMatrix, solve_linear, vstack
from vermalab.ring import classical_ring

R = classical_ring(2)
X1 = FieldElem.var(R, "x1")
H = FieldElem.var(R, "h")
ONE = FieldElem.one(R)
ZERO = FieldElem.zero(R)


def test_unique_1x1():
    a = SparseMatrix(1, 1, R, {(0, 0): ONE})
    res = solve_linear(a, [H.inverse()])
    assert res.status == "unique"
    assert res.solution[0] == H.inverse()


def test_inconsistent():
    a = SparseMatrix(1, 1, R)
    res = solve_linear(a, [ONE])
    assert res.status == "inconsistent"


def test_underdetermined_kernel_basis():
    a = SparseMatrix(1, 2, R, {(0, 0): X1, (0, 1): X1})
    res = solve_linear(a, [X1])
    assert res.status == "underdetermined"
    assert len(res.kernel) == 1
    # normalized so the first nonzero coordinate is 1
    assert res.kernel[0][0] == ONE and res.kernel[0][1] == -1
    # particular solution still solves
    got = a.apply(res.solution)
    assert (got[0] - X1).is_zero()


def test_solutions_verify_by_substitution():
    rng = random.Random(7)
    pool = [ONE, X1, H, X1 + H, X1 - 2 * H, (X1 + 1) * H]
    for _trial in range(8):
        size = rng.randint(1, 3)
        entries = {}
        for r in range(size):
            for c in range(size):
                if rng.random() < 0.8:
                    entries[(r, c)] = pool[rng.randrange(len(pool))] + rng.randint(-2, 2)
        a = SparseMatrix(size, size, R, entries)
        rhs = [pool[rng.randrange(len(pool))] for _ in range(size)]
        res = solve_linear(a, rhs)
        if res.status == "unique":
            got = a.apply(res.solution)
            assert all((g - w).is_zero() for g, w in zip(got, rhs))
        elif res.status == "underdetermined":
            for vec in res.kernel:
                image = a.apply(vec)
                assert all(v.is_zero() for v in image)


def test_matmul_and_vstack_shapes():
    a = SparseMatrix(2, 2, R, {(0, 0): ONE, (1, 1): H})
    b = SparseMatrix(2, 1, R, {(0, 0): X1, (1, 0): ONE})
    prod = a @ b
    assert prod.rows == 2 and prod.cols == 1
    assert prod.get(1, 0) == H
    stacked = vstack([a, a])
    assert stacked.rows == 4 and stacked.cols == 2


def test_matrix_equality_is_exact():
    a = SparseMatrix(1, 1, R, {(0, 0): (X1 * X1 - H * H) / (X1 - H)})
    b = SparseMatrix(1, 1, R, {(0, 0): X1 + H})
    assert a == b
