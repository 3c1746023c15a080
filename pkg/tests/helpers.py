"""Independent oracles and generators shared by the test modules.

Everything here works on plain lists of Fractions and deliberately avoids the
package's own series routines, so a bug in the library cannot hide itself.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as Q

from riordanlab.riordan import RiordanPair
from riordanlab.series import TruncatedSeries


# -- list arithmetic --------------------------------------------------------
def pad(a, N):
    a = list(a)[: N + 1]
    return a + [Q(0)] * (N + 1 - len(a))


def lmul(a, b, N):
    a, b = pad(a, N), pad(b, N)
    out = [Q(0)] * (N + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(N + 1 - i):
                out[i + j] += x * b[j]
    return out


def linv(a, N):
    """1/a by the schoolbook recurrence."""
    a = pad(a, N)
    out = [Q(0)] * (N + 1)
    out[0] = 1 / a[0]
    for n in range(1, N + 1):
        out[n] = -sum(a[j] * out[n - j] for j in range(1, n + 1)) / a[0]
    return out


def lpow(a, k, N):
    out = pad([1], N)
    for _ in range(k):
        out = lmul(out, a, N)
    return out


def compositions(n):
    """All tuples of positive integers summing to n."""
    for cuts in range(n):
        for pos in itertools.combinations(range(1, n), cuts):
            edges = (0, *pos, n)
            yield tuple(edges[i + 1] - edges[i] for i in range(len(edges) - 1))


def compose_by_compositions(h, F, N):
    """[x^n] h(F) = h_0 [n = 0] + sum over compositions (j_1..j_i) of n of h_i f_j1 ... f_ji."""
    h, F = pad(h, N), pad(F, N)
    out = [Q(0)] * (N + 1)
    out[0] = h[0]
    for n in range(1, N + 1):
        total = Q(0)
        for parts in compositions(n):
            term = h[len(parts)]
            for j in parts:
                term *= F[j]
                if not term:
                    break
            total += term
        out[n] = total
    return out


def lagrange_inverse(F, N):
    """[x^n] Fbar = (1/n) [x^(n-1)] (x/F)^n."""
    F = pad(F, N + 1)
    q = linv(F[1:], N)  # x/F
    out = [Q(0)] * (N + 1)
    for n in range(1, N + 1):
        out[n] = lpow(q, n, N)[n - 1] / n
    return out


def dense(g, F, n):
    """Leading n x n block of (g, F) from column generating functions."""
    N = n - 1
    cols = []
    c = pad(g, N)
    for _ in range(n):
        cols.append(c)
        c = lmul(c, F, N)
    return [[cols[j][i] if j <= i else Q(0) for j in range(n)] for i in range(n)]


def rank(rows):
    m = [list(r) for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def level_solvable(g, F, k, N):
    """Does (A - g0 f1^k I) h = 0 have a solution with h_0..h_(k-1) = 0, h_k = 1 in the N+1 block?"""
    n = N + 1
    M = dense(g, F, n)
    lam = pad(g, N)[0] * pad(F, N)[1] ** k
    for i in range(n):
        M[i][i] -= lam
    # unknowns h_(k+1) .. h_N; column k moves to the right-hand side
    A = [[M[i][j] for j in range(k + 1, n)] for i in range(n)]
    b = [-M[i][k] for i in range(n)]
    if not A[0]:
        return all(v == 0 for v in b)
    return rank(A) == rank([row + [v] for row, v in zip(A, b)])


def eigen_equation_holds(g, F, h, k, N, powers=None):
    lhs = lmul(g, compose_by_power_sum(h, F, N, powers), N)
    lam = pad(g, N)[0] * pad(F, N)[1] ** k
    return lhs == [lam * v for v in pad(h, N)]


def power_table(F, N):
    """[F^0, F^1, ..., F^N] by repeated multiplication."""
    out = [pad([1], N)]
    for _ in range(N):
        out.append(lmul(out[-1], F, N))
    return out


def compose_by_power_sum(h, F, N, powers=None):
    """h(F) as sum_j h_j F^j."""
    h = pad(h, N)
    P = power_table(F, N) if powers is None else powers
    out = [Q(0)] * (N + 1)
    for j in range(N + 1):
        if h[j]:
            out = [a + h[j] * b for a, b in zip(out, P[j][: N + 1])]
    return out


def matmul(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def identity(n):
    return [[Q(int(i == j)) for j in range(n)] for i in range(n)]


# -- generators -------------------------------------------------------------
def rand_coeffs(rng, length, lo=-2, hi=2, denoms=(1, 2, 3)):
    return [Q(rng.randint(lo, hi), rng.choice(denoms)) for _ in range(length)]


def nonzero(rng, lo=-3, hi=3, denoms=(1, 2)):
    while True:
        v = Q(rng.randint(lo, hi), rng.choice(denoms))
        if v:
            return v


def poly(coeffs, N=16):
    return TruncatedSeries.polynomial(coeffs, N)


def rand_unit(rng, N=16, length=5):
    return [nonzero(rng)] + rand_coeffs(rng, length - 1)


def rand_delta(rng, N=16, length=5):
    return [Q(0), nonzero(rng)] + rand_coeffs(rng, length - 2)


def rand_pair(rng, N=16) -> RiordanPair:
    return RiordanPair(poly(rand_unit(rng), N), poly(rand_delta(rng), N))


def pseudo_involution(rng, N=12) -> RiordanPair:
    """(u/u(G), -G) with G = phibar(-phi) an involution, so (A M)^2 = I."""
    from riordanlab.series import comp_inverse, compose, div

    u = poly([1] + rand_coeffs(rng, 3, -1, 1, (1, 2)), N)
    phi = poly([0, 1] + rand_coeffs(rng, 3, -1, 1, (1, 2)), N)
    G = compose(comp_inverse(phi), -phi)
    g = div(u, compose(u, G))
    return RiordanPair(g, -G)


def rs_shape_pair(rng, N=16):
    """g = g0 + g_r x^r + ..., F = f1 x + f_s x^s + ... with f1 = +-1 (polynomials)."""
    r = rng.randint(1, 4)
    s = rng.randint(2, 5)
    f1 = rng.choice([Q(1), Q(-1)])
    g = [nonzero(rng)] + [Q(0)] * (r - 1) + [nonzero(rng)] + rand_coeffs(rng, 2)
    F = [Q(0), f1] + [Q(0)] * (s - 2) + [nonzero(rng)] + rand_coeffs(rng, 2, -1, 1, (1,))
    return RiordanPair(poly(g, N), poly(F, N))


def structured_corpus(seed: int = 20240611, N: int = 16) -> list[tuple[str, RiordanPair]]:
    """About 100 pairs covering every branch of the classification."""
    from riordanlab import eigen
    from riordanlab.series import comp_inverse, compose

    rng = random.Random(seed)
    x = poly([0, 1], N)
    out = []
    # f1 of infinite multiplicative order
    for i in range(15):
        g = rand_unit(rng)
        F = [Q(0), rng.choice([Q(2), Q(-3), Q(1, 2), Q(3, 2)])] + rand_coeffs(rng, 3)
        out.append((f"infinite-{i}", RiordanPair(poly(g, N), poly(F, N))))
    # scalar F = f1 x with f1 = -1
    for i in range(8):
        g = rand_unit(rng)
        if i % 2 == 0:  # g(x) g(-x) = 1 case: g = u(x)/u(-x)
            u = poly([1] + rand_coeffs(rng, 3), N)
            gs = u / compose(u, -x)
        else:
            gs = poly(g, N)
        out.append((f"scalar-{i}", RiordanPair(gs, -x)))
    # F of compositional order 2 conjugate to -x
    for i in range(10):
        phi = poly([0, 1] + rand_coeffs(rng, 3, -1, 1, (1, 2)), N)
        F = compose(comp_inverse(phi), -phi)
        if i % 2 == 0:
            u = poly([nonzero(rng)] + rand_coeffs(rng, 3), N)
            g = u / compose(u, F)
        else:
            g = poly([1] + [Q(0)] * rng.choice([1, 3]) + [nonzero(rng)] + rand_coeffs(rng, 2), N)
        out.append((f"order2-{i}", RiordanPair(g, F)))
    # hybrids in display (rs) shape
    for i in range(30):
        out.append((f"rs-{i}", rs_shape_pair(rng, N)))
    # constructed level-k members
    for i in range(10):
        k = i % 4
        F = poly([0, rng.choice([1, -1]), nonzero(rng)] + rand_coeffs(rng, 2, -1, 1, (1,)), N)
        h = poly([0] * k + [1] + rand_coeffs(rng, 3), N)
        out.append((f"levelk-{i}", eigen.construct_level_k(nonzero(rng), F, h)))
    # constructed full members
    for i in range(8):
        F = poly([0, rng.choice([2, Q(1, 3), -2])] + rand_coeffs(rng, 2), N)
        k = i % 3
        h = poly([0] * k + [1] + rand_coeffs(rng, 3), N)
        out.append((f"full-{i}", eigen.construct_full(nonzero(rng), F, h)))
    # none by resonance
    for i in range(6):
        F = [-x, compose(comp_inverse(poly([0, 1, Q(1, 2)], N)), -poly([0, 1, Q(1, 2)], N))][i % 2]
        r = 2 * (1 + i % 2)
        tail = poly([0] * r + [nonzero(rng)] + rand_coeffs(rng, 2), N)
        out.append((f"none-{i}", eigen.construct_none(F, r, tail)))
    # pseudo-involutions and constant g
    for i in range(8):
        out.append((f"pseudo-{i}", pseudo_involution(rng, N)))
    for i in range(5):
        F = poly([0, rng.choice([1, -1, 2]), nonzero(rng)] + rand_coeffs(rng, 2), N)
        out.append((f"const-g-{i}", RiordanPair(poly([nonzero(rng)], N), F)))
    return out
