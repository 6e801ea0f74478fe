"""Exact linear algebra over the rationals.

Matrices are lists of lists of Fraction.  Everything here is dense and
small (ranks up to a few dozen), so plain fraction-free-ish Gaussian
elimination is plenty.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def mat(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k, "shape mismatch"
    out = zeros(n, m)
    for i in range(n):
        for j in range(m):
            out[i][j] = sum((a[i][p] * b[p][j] for p in range(k)), Fraction(0))
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in a]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Fraction) -> Matrix:
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def rank(a: Matrix) -> int:
    """Rank by exact Gaussian elimination."""
    if not a or not a[0]:
        return 0
    m = [row[:] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def det(a: Matrix) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    assert len(a[0]) == n, "determinant of non-square matrix"
    m = [row[:] for row in a]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Solve a @ x = b exactly; None if the system is inconsistent.

    `a` may be rectangular; for underdetermined consistent systems the
    free variables are set to zero (deterministic canonical solution).
    """
    if not a:
        return [[] for _ in b] if all(all(x == 0 for x in row) for row in b) else None
    rows, cols = len(a), len(a[0])
    width = len(b[0]) if b else 0
    aug = [a[i][:] + b[i][:] for i in range(rows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if any(x != 0 for x in aug[i][cols:]):
            return None
    x = zeros(cols, width)
    for i, c in pivots:
        for j in range(width):
            x[c][j] = aug[i][cols + j]
    return x


def adjugate_int(a: list[list[int]]) -> tuple[list[list[int]], int]:
    """(adj(a), det(a)) for an integer matrix, with adj(a) @ a == det(a) * I."""
    n = len(a)
    d = det([[Fraction(x) for x in row] for row in a])
    assert d.denominator == 1
    dint = d.numerator
    if n == 0:
        return [], 1
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [Fraction(a[r][c]) for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            md = det(minor)
            assert md.denominator == 1
            adj[i][j] = (-1) ** (i + j) * md.numerator
    return adj, dint


def charpoly(a: Matrix) -> list[Fraction]:
    """Characteristic polynomial of a square matrix, coefficients low->high.

    Faddeev-LeVerrier: exact over the rationals, monic of degree n.
    """
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        m = mat_mul(a, m)
        tr = sum((m[i][i] for i in range(n)), Fraction(0))
        c = -tr / k
        coeffs[n - k] = c
        for i in range(n):
            m[i][i] += c
    return coeffs


# -- polynomial helpers for Sturm root isolation ---------------------------


def poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def poly_deriv(p: list[Fraction]) -> list[Fraction]:
    return [c * k for k, c in enumerate(p)][1:] or [Fraction(0)]


def poly_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    b = poly_trim(b)
    db = len(b) - 1
    while len(poly_trim(a)) - 1 >= db and any(c != 0 for c in a):
        a = poly_trim(a)
        da = len(a) - 1
        if da < db:
            break
        f = a[-1] / b[-1]
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a = a[:-1]
    return poly_trim(a) if any(c != 0 for c in a) else [Fraction(0)]


def poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = poly_trim(a), poly_trim(b)
    while any(c != 0 for c in b):
        a, b = b, poly_rem(a, b)
    if a[-1] != 0:
        a = [c / a[-1] for c in a]
    return a


def poly_div_exact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """a / b assuming exact divisibility."""
    a, b = poly_trim(a[:]), poly_trim(b)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and any(c != 0 for c in a):
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        out[k] = f
        for i in range(len(b)):
            a[k + i] -= f * b[i]
        a = poly_trim(a[:-1]) if len(a) > 1 else [Fraction(0)]
        if all(c == 0 for c in a):
            break
    return out


def sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    chain = [poly_trim(p), poly_trim(poly_deriv(p))]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        r = poly_rem(chain[-2], chain[-1])
        if all(c == 0 for c in r):
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_halfopen(p: list[Fraction], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of p in (a, b]; p need not be square-free."""
    sf = poly_div_exact(p, poly_gcd(p, poly_deriv(p)))
    chain = sturm_chain(sf)
    return _sign_changes(chain, a) - _sign_changes(chain, b)


def _rational_root_candidates(p: list[Fraction]) -> list[Fraction]:
    from math import gcd

    lcm = 1
    for c in p:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ip = [int(c * lcm) for c in poly_trim(p)]
    while ip and ip[0] == 0:
        ip = ip[1:]
    if not ip:
        return []
    a0, an = abs(ip[0]), abs(ip[-1])

    def divisors(n: int) -> list[int]:
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    cands = set()
    for num in divisors(a0):
        for den in divisors(an):
            cands.add(Fraction(num, den))
    return sorted(cands)


def min_eigenvalue_lower(g: Matrix, iterations: int = 64) -> Fraction:
    """Certified rational lower bound on the least eigenvalue of a symmetric
    positive-definite rational matrix.

    Root isolation on the characteristic polynomial: if the least eigenvalue
    is rational it is returned exactly, otherwise a strict lower bound from
    Sturm bisection (rounded down) is returned.
    """
    n = len(g)
    if n == 0:
        raise ValueError("empty matrix")
    p = charpoly(g)
    hi = min(g[i][i] for i in range(n))  # lambda_min <= min diagonal entry
    if poly_eval(p, hi) == 0 and count_roots_halfopen(p, Fraction(0), hi) == 1:
        return hi
    # exact hit: smallest rational root with nothing below it
    for r in _rational_root_candidates(p):
        if 0 < r <= hi and poly_eval(p, r) == 0:
            if count_roots_halfopen(p, Fraction(0), r) == 1:
                return r
            break
    # bisection: maintain no roots in (0, lo], at least one in (lo, hi]
    lo = Fraction(0)
    if count_roots_halfopen(p, Fraction(0), hi) < 1:
        hi = hi + 1  # eigenvalue equals the diagonal bound only if hit above
    steps = 0
    while lo == 0 or steps < iterations:
        mid = (lo + hi) / 2
        if count_roots_halfopen(p, Fraction(0), mid) >= 1:
            hi = mid
        else:
            lo = mid
        steps += 1
        if steps > iterations + 4096:
            raise ArithmeticError("eigenvalue bisection failed to separate zero")
    return lo
