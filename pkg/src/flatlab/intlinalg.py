"""Integer matrix utilities: determinants, Smith form, lattices, symplectic bases.

Everything here is exact. Matrices are lists of lists (or tuples) of Python
ints; sizes stay small (at most a dozen rows) so textbook algorithms with
explicit transform tracking are the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .errors import BasisConstructionFailed


def identity_int(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def det_int(a) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    m = [list(row) for row in a]
    n = len(m)
    sign_flip = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign_flip = -sign_flip
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign_flip * m[n - 1][n - 1]


def smith_normal_form(a) -> Tuple[List[List[int]], List[List[int]], List[List[int]]]:
    """Return (d, u, v) with u @ a @ v == d diagonal and u, v unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    m = [list(row) for row in a]
    rows, cols = len(m), len(m[0]) if m else 0
    u = identity_int(rows)
    v = identity_int(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        for j in range(cols):
            m[dst][j] += c * m[src][j]
        for j in range(rows):
            u[dst][j] += c * u[src][j]

    def add_col(src, dst, c):
        for r in m:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    t = 0
    while t < min(rows, cols):
        # locate the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, rows):
            if m[i][t] != 0:
                q = m[i][t] // m[t][t]
                add_row(t, i, -q)
                if m[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if m[t][j] != 0:
                q = m[t][j] // m[t][t]
                add_col(t, j, -q)
                if m[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce the divisibility chain
        pivot = m[t][t]
        culprit = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % pivot != 0:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            add_row(culprit, t, 1)
            continue
        if m[t][t] < 0:
            for j in range(cols):
                m[t][j] = -m[t][j]
            for j in range(rows):
                u[t][j] = -u[t][j]
        t += 1
    return m, u, v


def int_inverse(a) -> List[List[int]]:
    """Exact inverse of a unimodular integer matrix.

    Raises BasisConstructionFailed when the matrix is not invertible over
    the integers.
    """
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col] != 0), None)
        if piv is None:
            raise BasisConstructionFailed("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv_p = 1 / work[col][col]
        work[col] = [x * inv_p for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[col])]
    out = []
    for row in work:
        vals = row[n:]
        if any(x.denominator != 1 for x in vals):
            raise BasisConstructionFailed("matrix is not unimodular")
        out.append([int(x) for x in vals])
    return out


def solve_rational(a, b) -> Optional[List[Fraction]]:
    """One exact solution of a x == b, or None when the system is inconsistent.

    Works for any rectangular integer or rational matrix; free variables are
    set to zero.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    work = [[Fraction(x) for x in row] + [Fraction(bv)]
            for row, bv in zip(a, b)]
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv_p = 1 / work[r][col]
        work[r] = [x * inv_p for x in work[r]]
        for i in range(rows):
            if i != r and work[i][col] != 0:
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if work[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        sol[col] = work[i][cols]
    return sol


def kernel_basis(a) -> List[List[int]]:
    """Basis of the saturated right kernel {x : a @ x == 0} over the integers."""
    d, _u, v = smith_normal_form(a)
    rows, cols = len(a), len(a[0]) if a else 0
    out = []
    for j in range(cols):
        dj = d[j][j] if j < min(rows, cols) else 0
        if dj == 0:
            out.append([v[i][j] for i in range(cols)])
    return out


def row_hnf(rows) -> List[List[int]]:
    """Row-echelon integer basis of the lattice spanned by the given rows."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    cols = len(work[0])
    basis: List[List[int]] = []
    pivot_row = 0
    for col in range(cols):
        idx = None
        for i in range(pivot_row, len(work)):
            if work[i][col] != 0:
                idx = i
                break
        if idx is None:
            continue
        work[pivot_row], work[idx] = work[idx], work[pivot_row]
        # gcd-combine every lower row into the pivot
        for i in range(pivot_row + 1, len(work)):
            while work[i][col] != 0:
                if abs(work[i][col]) < abs(work[pivot_row][col]):
                    work[pivot_row], work[i] = work[i], work[pivot_row]
                q = work[i][col] // work[pivot_row][col]
                for j in range(cols):
                    work[i][j] -= q * work[pivot_row][j]
        if work[pivot_row][col] < 0:
            work[pivot_row] = [-x for x in work[pivot_row]]
        pivot_row += 1
        if pivot_row == len(work):
            break
    result = [r for r in work[:pivot_row] if any(r)]
    return result


def in_row_lattice(basis: Sequence[Sequence[int]], vec) -> bool:
    """Whether vec lies in the integer row span of an echelon basis."""
    res = list(vec)
    cols = len(res)
    for row in basis:
        col = next((j for j in range(cols) if row[j] != 0), None)
        if col is None:
            continue
        if res[col] != 0:
            if res[col] % row[col] != 0:
                return False
            q = res[col] // row[col]
            for j in range(cols):
                res[j] -= q * row[j]
    return all(x == 0 for x in res)


def _xgcd_list(vals: Sequence[int]) -> Tuple[int, List[int]]:
    """gcd of vals together with integer coefficients realizing it."""
    g, coeffs = 0, [0] * len(vals)
    for i, x in enumerate(vals):
        if x == 0:
            continue
        if g == 0:
            g = abs(x)
            coeffs = [0] * len(vals)
            coeffs[i] = 1 if x > 0 else -1
            continue
        a, b = g, x
        # extended euclid on (a, b)
        old_r, r = a, b
        old_s, s = 1, 0
        while r != 0:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
        t = (old_r - old_s * a) // b
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] = t
        g = abs(old_r)
        if old_r < 0:
            coeffs = [-c for c in coeffs]
    return g, coeffs


def symplectic_basis(j_mat) -> List[List[int]]:
    """Columns of a unimodular W with W^T J W in standard symplectic form.

    J must be antisymmetric with determinant 1 (a unimodular symplectic
    lattice); raises BasisConstructionFailed otherwise.
    """
    n = len(j_mat)
    if n % 2 != 0:
        raise BasisConstructionFailed("odd rank cannot carry a symplectic form")

    def form(x, y) -> int:
        return sum(x[i] * j_mat[i][k] * y[k] for i in range(n) for k in range(n))

    vecs = [[1 if i == k else 0 for k in range(n)] for i in range(n)]
    pairs: List[Tuple[List[int], List[int]]] = []
    while vecs:
        u_vec = vecs[0]
        rest = vecs[1:]
        vals = [form(u_vec, w) for w in rest]
        g, coeffs = _xgcd_list(vals)
        if g != 1:
            raise BasisConstructionFailed(
                "intersection form is not unimodular on the cycle lattice"
            )
        v_vec = [sum(c * w[k] for c, w in zip(coeffs, rest)) for k in range(n)]
        pairs.append((u_vec, v_vec))
        projected = []
        for w in rest:
            a = form(u_vec, w)
            b = form(v_vec, w)
            projected.append([w[k] - a * v_vec[k] + b * u_vec[k] for k in range(n)])
        vecs = row_hnf(projected)
    w_cols = []
    for u_vec, v_vec in pairs:
        w_cols.append(u_vec)
        w_cols.append(v_vec)
    w = mat_transpose(w_cols)
    # self check: the Gram matrix must be the standard block form
    gram = mat_mul(mat_transpose(w), mat_mul([list(r) for r in j_mat], w))
    for i in range(n):
        for k in range(n):
            expect = 0
            if i % 2 == 0 and k == i + 1:
                expect = 1
            elif i % 2 == 1 and k == i - 1:
                expect = -1
            if gram[i][k] != expect:
                raise BasisConstructionFailed("symplectic reduction self check failed")
    return w
