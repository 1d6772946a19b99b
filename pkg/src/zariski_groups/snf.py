"""Smith normal form over the integers with unimodular transforms.

Matrices are lists of rows of Python ints, so arithmetic never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


@dataclass
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal.

    ``U_inv`` and ``V_inv`` are tracked alongside so callers never invert.
    The diagonal satisfies d_0 | d_1 | ... with all d_i >= 0, zeros last.
    """

    S: Matrix
    U: Matrix
    U_inv: Matrix
    V: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(a: Matrix, ncols: int | None = None) -> SmithDecomposition:
    """Reduce ``a`` by row/column operations, pivoting on the smallest nonzero |entry|."""
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    S = [list(map(int, row)) for row in a]
    U, U_inv = identity(m), identity(m)
    V, V_inv = identity(n), identity(n)

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]
        for row in U_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if q == 0:
            return
        for M in (S, U):
            rd, rs = M[dst], M[src]
            for k in range(len(rd)):
                rd[k] += q * rs[k]
        for row in U_inv:
            row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        # col_dst += q * col_src
        if q == 0:
            return
        for M in (S, V):
            for row in M:
                row[dst] += q * row[src]
        rd, rs = V_inv[src], V_inv[dst]
        for k in range(len(rd)):
            rd[k] -= q * rs[k]

    def negate_row(i: int) -> None:
        S[i] = [-x for x in S[i]]
        U[i] = [-x for x in U[i]]
        for row in U_inv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < best[0]):
                    best = (abs(S[i][j]), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                # a smaller remainder exists in row or column t; move it to the pivot
                cand = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithDecomposition(S, U, U_inv, V, V_inv)


def solve_integer_system(a: Matrix, c: list[int], moduli: list[int] | None = None) -> list[int] | None:
    """Find integer ``y`` with ``(a @ y)[j] == c[j]`` modulo ``moduli[j]`` (0 means exact).

    Returns one solution or ``None`` when the system has no integer solution.
    """
    rows = len(a)
    t = len(a[0]) if rows else 0
    moduli = moduli or [0] * rows
    extra = [j for j in range(rows) if moduli[j]]
    M = [list(a[j]) + [(-moduli[j] if moduli[j] and j == e else 0) for e in extra] for j in range(rows)]
    width = t + len(extra)
    if rows == 0:
        return [0] * t
    if width == 0:
        return [] if all(x == 0 for x in c) else None
    dec = smith_normal_form(M)
    u = matvec(dec.U, c)
    diag = dec.diagonal
    v = [0] * width
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if u[i] != 0:
                return None
        else:
            if u[i] % d:
                return None
            v[i] = u[i] // d
    w = matvec(dec.V, v)
    return w[:t]


def integer_kernel(a: Matrix, ncols: int) -> Matrix:
    """Basis (as columns, returned as a list of vectors) of {w in Z^ncols : a @ w == 0}."""
    if not a:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    dec = smith_normal_form(a)
    r = dec.rank
    return [[dec.V[i][j] for i in range(ncols)] for j in range(r, ncols)]
