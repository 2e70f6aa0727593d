"""Small exact linear algebra helpers: integer column echelon (Hermite-style)
solving with unimodular transforms, extended gcd combinations, and dense
elimination over a prime field.

Everything here operates on tiny matrices (dozens of rows/columns), so
plain lists of Python ints are fine.
"""

from __future__ import annotations

from math import gcd


class LinAlgError(Exception):
    pass


def ext_gcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def ext_gcd_list(values):
    """Return (g, coeffs) with sum(c*v) = g = gcd(values) >= 0."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coeffs = [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        g2, s, t = ext_gcd(g, v)
        coeffs = [s * c for c in coeffs]
        coeffs[i] += t
        g = g2
    return g, coeffs


def column_echelon(matrix):
    """Bring an integer matrix to column echelon form by unimodular column ops.

    Returns (H, U, pivots) with matrix @ U = H; pivots is a list of
    (row, col) positions of the echelon pivots.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    H = [list(row) for row in matrix]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivots = []
    col = 0
    for row in range(m):
        if col >= n:
            break
        # gcd-eliminate across columns col..n-1 in this row
        while True:
            nz = [j for j in range(col, n) if H[row][j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(H[row][j]))
            if j0 != col:
                for r in range(m):
                    H[r][col], H[r][j0] = H[r][j0], H[r][col]
                for r in range(n):
                    U[r][col], U[r][j0] = U[r][j0], U[r][col]
            done = True
            for j in range(col + 1, n):
                if H[row][j]:
                    q = H[row][j] // H[row][col]
                    for r in range(m):
                        H[r][j] -= q * H[r][col]
                    for r in range(n):
                        U[r][j] -= q * U[r][col]
                    if H[row][j]:
                        done = False
            if done:
                break
        if H[row][col]:
            if H[row][col] < 0:
                for r in range(m):
                    H[r][col] = -H[r][col]
                for r in range(n):
                    U[r][col] = -U[r][col]
            pivots.append((row, col))
            col += 1
    return H, U, pivots


def solve_integer(matrix, rhs):
    """One integer solution x of matrix @ x = rhs, or None if none exists."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    H, U, pivots = column_echelon(matrix)
    b = list(rhs)
    y = [0] * n
    for row, col in pivots:
        if b[row] % H[row][col]:
            return None
        y[col] = b[row] // H[row][col]
        for r in range(m):
            b[r] -= y[col] * H[r][col]
    if any(b):
        return None
    return [sum(U[i][j] * y[j] for j in range(n)) for i in range(n)]


def kernel_mod_lattice(matrix, ell: int):
    """Basis of the lattice {x in Z^n : matrix @ x == 0 mod ell}.

    Returned as a list of integer vectors: lifts of a mod-ell kernel basis
    together with ell*e_i for every coordinate.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    reduced = [[v % ell for v in row] for row in matrix]
    basis = [vec for vec in modp_kernel(reduced, ell)]
    basis += [[ell if i == j else 0 for i in range(n)] for j in range(n)]
    return basis


# -- prime field elimination -----------------------------------------


def modp_rref(matrix, p: int):
    """Reduced row echelon form over Z/p. Returns (rref, pivot_columns)."""
    M = [[v % p for v in row] for row in matrix]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if M[i][c]), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [(v * inv) % p for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def modp_rank(matrix, p: int) -> int:
    return len(modp_rref(matrix, p)[1])


def modp_kernel(matrix, p: int):
    """Basis of the right kernel over Z/p (coefficients in [0, p))."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    R, pivots = modp_rref(matrix, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * cols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-R[r][fc]) % p
        basis.append(vec)
    return basis


def modp_solve(matrix, rhs, p: int):
    """One solution of matrix @ x = rhs over Z/p, or None."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    R, pivots = modp_rref(aug, p)
    if cols in pivots:
        return None
    x = [0] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols] % p
    return x


def modp_inverse(matrix, p: int):
    """Inverse of a square matrix over Z/p, or None if singular."""
    n = len(matrix)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(matrix)]
    R, pivots = modp_rref(aug, p)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R[:n]]
