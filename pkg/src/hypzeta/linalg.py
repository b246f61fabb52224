"""Division-free dense linear algebra over Z_q (and any commutative ring)."""

from __future__ import annotations


def mat_mul(A, B):
    n, m, k = len(A), len(B), len(B[0])
    return [[sum((A[i][l] * B[l][j] for l in range(1, m)), A[i][0] * B[0][j]) for j in range(k)] for i in range(n)]


def mat_apply(A, f):
    return [[f(x) for x in row] for row in A]


def _mat_vec(A, v):
    return [sum((A[i][j] * v[j] for j in range(1, len(v))), A[i][0] * v[0]) for i in range(len(A))]


def berkowitz(A, one):
    """[1, c_1, ..., c_d] with det(xI - A) = sum c_k x^(d-k).

    Equivalently det(I - tA) = sum c_k t^k.  Only ring operations are used,
    so the result is exact for entries with non-trivial valuation.
    """
    d = len(A)
    if d == 0:
        return [one]
    C = [one, -A[0][0]]
    for r in range(1, d):
        row = A[r][:r]
        col = [A[i][r] for i in range(r)]
        lead = [A[i][:r] for i in range(r)]
        vec = [one, -A[r][r]]
        v = col
        for k in range(r):
            vec.append(-sum((row[j] * v[j] for j in range(1, r)), row[0] * v[0]))
            if k + 1 < r:
                v = _mat_vec(lead, v)
        C = [sum((vec[i - j] * C[j] for j in range(1, min(i, r) + 1)), vec[i] * C[0]) for i in range(r + 2)]
    return C


def adjugate_and_det(A):
    """(adj A, det A) via Cayley-Hamilton on the Berkowitz coefficients."""
    d = len(A)
    one = A[0][0] * 0 + 1
    zero = one * 0
    c = berkowitz(A, one)
    ident = [[one if i == j else zero for j in range(d)] for i in range(d)]
    B = ident
    for k in range(1, d):
        B = mat_mul(A, B)
        B = [[B[i][j] + (c[k] if i == j else zero) for j in range(d)] for i in range(d)]
    sign = 1 if (d - 1) % 2 == 0 else -1
    det = c[d] if d % 2 == 0 else -c[d]
    return [[x * sign for x in row] for row in B], det
