import random

import pytest

from flatlab import intlinalg
from flatlab.errors import BasisConstructionFailed


def test_det_known_values():
    assert intlinalg.det_int([[2]]) == 2
    assert intlinalg.det_int([[1, 2], [3, 4]]) == -2
    assert intlinalg.det_int([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30
    assert intlinalg.det_int([[1, 2], [2, 4]]) == 0


def test_det_matches_permutation_expansion():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randrange(1, 5)
        m = [[rng.randrange(-6, 7) for _ in range(n)] for _ in range(n)]
        # reference: Laplace expansion
        def laplace(mat):
            k = len(mat)
            if k == 1:
                return mat[0][0]
            total = 0
            for j in range(k):
                minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
                total += (-1) ** j * mat[0][j] * laplace(minor)
            return total

        assert intlinalg.det_int(m) == laplace(m)


def test_smith_form_reconstructs():
    rng = random.Random(23)
    for _ in range(25):
        rows = rng.randrange(1, 5)
        cols = rng.randrange(1, 5)
        a = [[rng.randrange(-9, 10) for _ in range(cols)] for _ in range(rows)]
        d, u, v = intlinalg.smith_normal_form(a)
        assert intlinalg.mat_mul(intlinalg.mat_mul(u, a), v) == d
        assert abs(intlinalg.det_int(u)) == 1
        assert abs(intlinalg.det_int(v)) == 1
        # diagonal, nonnegative, divisibility chain
        diag = []
        for i in range(rows):
            for j in range(cols):
                if i != j:
                    assert d[i][j] == 0
                elif d[i][j] != 0:
                    diag.append(d[i][j])
        for x in diag:
            assert x > 0
        for x, y in zip(diag, diag[1:]):
            assert y % x == 0


def test_kernel_basis_annihilates_and_is_primitive():
    a = [[2, 4]]
    basis = intlinalg.kernel_basis(a)
    assert len(basis) == 1
    vec = basis[0]
    assert 2 * vec[0] + 4 * vec[1] == 0
    from math import gcd

    assert gcd(abs(vec[0]), abs(vec[1])) == 1

    rng = random.Random(5)
    for _ in range(10):
        rows, cols = 2, 4
        a = [[rng.randrange(-5, 6) for _ in range(cols)] for _ in range(rows)]
        for vec in intlinalg.kernel_basis(a):
            assert intlinalg.mat_vec(a, vec) == [0] * rows


def test_row_hnf_membership():
    basis = intlinalg.row_hnf([[2, 0], [0, 2], [1, 1]])
    # index-two sublattice of Z^2
    assert intlinalg.in_row_lattice(basis, [1, 1])
    assert intlinalg.in_row_lattice(basis, [2, 0])
    assert intlinalg.in_row_lattice(basis, [3, 1])
    assert not intlinalg.in_row_lattice(basis, [1, 0])
    assert not intlinalg.in_row_lattice(basis, [0, 1])


def test_row_hnf_spans_same_lattice():
    rng = random.Random(31)
    for _ in range(10):
        rows = [[rng.randrange(-4, 5) for _ in range(3)] for _ in range(4)]
        basis = intlinalg.row_hnf(rows)
        for r in rows:
            assert intlinalg.in_row_lattice(basis, r)
        for b in basis:
            assert intlinalg.in_row_lattice(intlinalg.row_hnf(rows), b)


def _standard_symplectic(g):
    n = 2 * g
    j = [[0] * n for _ in range(n)]
    for i in range(g):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


def _random_unimodular(n, rng):
    w = intlinalg.identity_int(n)
    for _ in range(4 * n):
        i = rng.randrange(n)
        k = rng.randrange(n)
        if i == k:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for col in range(n):
            w[i][col] += c * w[k][col]
    return w


def test_symplectic_basis_standard_form():
    for g in (1, 2, 3):
        j = _standard_symplectic(g)
        w = intlinalg.symplectic_basis(j)
        assert abs(intlinalg.det_int(w)) == 1


def test_symplectic_basis_random_unimodular_forms():
    rng = random.Random(99)
    for g in (1, 2):
        for _ in range(5):
            j0 = _standard_symplectic(g)
            m = _random_unimodular(2 * g, rng)
            j = intlinalg.mat_mul(
                intlinalg.mat_mul(intlinalg.mat_transpose(m), j0), m
            )
            w = intlinalg.symplectic_basis(j)
            assert abs(intlinalg.det_int(w)) == 1
            gram = intlinalg.mat_mul(
                intlinalg.mat_mul(intlinalg.mat_transpose(w), j), w
            )
            assert gram == _standard_symplectic(g)


def test_symplectic_basis_rejects_non_unimodular():
    with pytest.raises(BasisConstructionFailed):
        intlinalg.symplectic_basis([[0, 2], [-2, 0]])
    with pytest.raises(BasisConstructionFailed):
        intlinalg.symplectic_basis([[0]])
