"""Compiled inner loops: the GSp census and the quadratic-character point count.

Both kernels split their work into independent chunks (``prange``) whose
partial results are summed afterwards, so the outcome does not depend on
scheduling.
"""
import warnings

import numpy as np
from numba import njit, prange

# Numba probes for TBB before falling back to OpenMP/workqueue.
warnings.filterwarnings("ignore", message=".*TBB.*")


# ---------------------------------------------------------------------------
# Census over all (2g)x(2g) matrices mod n
# ---------------------------------------------------------------------------

@njit(cache=True)
def _omega(M, i, j, g, n):
    """Standard symplectic pairing of columns i and j, reduced mod n."""
    s = 0
    for a in range(g):
        s += M[a, i] * M[a + g, j] - M[a + g, i] * M[a, j]
    return s % n


@njit(cache=True)
def _det_one_minus(M, d, n, perms, signs):
    """det(I - M) mod n by the Leibniz expansion."""
    total = 0
    for k in range(perms.shape[0]):
        term = signs[k]
        for r in range(d):
            c = perms[k, r]
            e = -M[r, c]
            if r == c:
                e += 1
            term = (term * e) % n
            if term == 0:
                break
        total += term
    return total % n


@njit(cache=True)
def _classify(M, g, n, units):
    """Return (mu, borel_type) for M in GSp, or (-1, -1).

    borel_type: 0 outside B, 1 in B but not unipotent, 2 unipotent.
    """
    mu = _omega(M, 0, g, g, n)
    if not units[mu]:
        return -1, -1
    d = 2 * g
    for i in range(d):
        for j in range(i + 1, d):
            want = mu if (i < g and j == i + g) else 0
            if _omega(M, i, j, g, n) != want:
                return -1, -1
    btype = 1
    for r in range(g, d):
        for c in range(g):
            if M[r, c] != 0:
                btype = 0
    for r in range(g):
        for c in range(r):
            if M[r, c] != 0:
                btype = 0
    if btype == 1:
        unip = True
        for r in range(d):
            if M[r, r] != 1:
                unip = False
        if unip:
            btype = 2
    return mu, btype


@njit(parallel=True, cache=True)
def census_histogram(g, n, perms, signs, nchunks):
    """Histogram hist[mu, char(1) mod n, borel_type] over GSp_2g(Z/nZ).

    Every matrix in the n^((2g)^2) entry space is visited once.
    """
    d = 2 * g
    nent = d * d
    total = n**nent
    units = np.zeros(n, dtype=np.bool_)
    for u in range(n):
        a, b = u, n
        while b:
            a, b = b, a % b
        units[u] = a == 1
    hist = np.zeros((nchunks, n, n, 3), dtype=np.int64)
    step = (total + nchunks - 1) // nchunks
    for c in prange(nchunks):
        start = c * step
        stop = min(total, start + step)
        if start >= stop:
            continue
        M = np.zeros((d, d), dtype=np.int64)
        rem = start
        for e in range(nent):
            M[e // d, e % d] = rem % n
            rem //= n
        for _ in range(start, stop):
            mu, bt = _classify(M, g, n, units)
            if mu >= 0:
                c1 = _det_one_minus(M, d, n, perms, signs)
                hist[c, mu, c1, bt] += 1
            # odometer increment, entry 0 least significant
            e = 0
            while e < nent:
                r = e // d
                q = e % d
                M[r, q] += 1
                if M[r, q] < n:
                    break
                M[r, q] = 0
                e += 1
    return hist.sum(axis=0)


# ---------------------------------------------------------------------------
# Point counting over F_{p^k}, k in {1, 2, 3}
# ---------------------------------------------------------------------------

@njit(cache=True)
def _fmul(a, b, out, mod, p, k):
    """out = a*b in F_p[t]/(t^k + mod[k-1] t^(k-1) + ... + mod[0])."""
    tmp = np.zeros(2 * k - 1, dtype=np.int64)
    for i in range(k):
        if a[i] == 0:
            continue
        for j in range(k):
            tmp[i + j] = (tmp[i + j] + a[i] * b[j]) % p
    for i in range(2 * k - 2, k - 1, -1):
        c = tmp[i]
        if c != 0:
            for j in range(k):
                tmp[i - k + j] = (tmp[i - k + j] - c * mod[j]) % p
    for i in range(k):
        out[i] = tmp[i]


@njit(cache=True)
def _norm(a, mod, p, k):
    """Norm from F_{p^k} down to F_p."""
    if k == 1:
        return a[0]
    if k == 2:
        a0 = a[0]
        a1 = a[1]
        return (a0 * a0 - (mod[1] * a0 % p) * a1 + (mod[0] * a1 % p) * a1) % p
    # k == 3: determinant of multiplication by a in the basis 1, t, t^2
    x0, x1, x2 = a[0], a[1], a[2]
    y0 = (-x2 * mod[0]) % p
    y1 = (x0 - x2 * mod[1]) % p
    y2 = (x1 - x2 * mod[2]) % p
    z0 = (-y2 * mod[0]) % p
    z1 = (y0 - y2 * mod[1]) % p
    z2 = (y1 - y2 * mod[2]) % p
    det = (x0 * ((y1 * z2 - y2 * z1) % p)) % p
    det -= (y0 * ((x1 * z2 - x2 * z1) % p)) % p
    det += (z0 * ((x1 * y2 - x2 * y1) % p)) % p
    return det % p


@njit(cache=True)
def _chi_table(p):
    """chi over F_p as an int8 table: 0 at 0, +1 on squares, -1 elsewhere."""
    tab = np.full(p, -1, dtype=np.int8)
    s = 0
    inc = 1
    for _ in range((p + 1) // 2):
        tab[s] = 1
        s += inc
        if s >= p:
            s -= p
        inc += 2
        if inc >= p:
            inc -= p
    tab[0] = 0
    return tab


@njit(cache=True)
def _difference_table(fc, p, u0, out):
    """Forward differences of f at u0 over F_p: out[j] = (Delta^j f)(u0)."""
    deg = fc.shape[0] - 1
    for i in range(deg + 1):
        u = (u0 + i) % p
        v = 0
        for j in range(deg, -1, -1):
            v = (v * u + fc[j]) % p
        out[i] = v
    for lvl in range(1, deg + 1):
        for j in range(deg, lvl - 1, -1):
            out[j] = (out[j] - out[j - 1]) % p


@njit(cache=True)
def _cubic_sum(fc, p, tab):
    # Four interleaved chains over quarters of F_p; branch-free modular adds.
    h = (p + 3) // 4
    last = p - 3 * h
    st = np.empty((4, 4), dtype=np.int64)
    for c in range(4):
        _difference_table(fc, p, c * h, st[c])
    a0, a1, a2, a3 = st[0, 0], st[0, 1], st[0, 2], st[0, 3] - p
    b0, b1, b2, b3 = st[1, 0], st[1, 1], st[1, 2], st[1, 3] - p
    c0, c1, c2, c3 = st[2, 0], st[2, 1], st[2, 2], st[2, 3] - p
    e0, e1, e2, e3 = st[3, 0], st[3, 1], st[3, 2], st[3, 3] - p
    total = 0
    for i in range(h):
        total += tab[a0] + tab[b0] + tab[c0]
        if i < last:
            total += tab[e0]
        a0 += a1 - p
        a0 += (a0 >> 63) & p
        a1 += a2 - p
        a1 += (a1 >> 63) & p
        a2 += a3
        a2 += (a2 >> 63) & p
        b0 += b1 - p
        b0 += (b0 >> 63) & p
        b1 += b2 - p
        b1 += (b1 >> 63) & p
        b2 += b3
        b2 += (b2 >> 63) & p
        c0 += c1 - p
        c0 += (c0 >> 63) & p
        c1 += c2 - p
        c1 += (c1 >> 63) & p
        c2 += c3
        c2 += (c2 >> 63) & p
        e0 += e1 - p
        e0 += (e0 >> 63) & p
        e1 += e2 - p
        e1 += (e1 >> 63) & p
        e2 += e3
        e2 += (e2 >> 63) & p
    return total


@njit(cache=True)
def _prime_field_sum(fc, p):
    deg = fc.shape[0] - 1
    tab = _chi_table(p)
    if deg == 3 and p >= 64:
        return _cubic_sum(fc, p, tab)
    diff = np.empty(deg + 1, dtype=np.int64)
    _difference_table(fc, p, 0, diff)
    total = 0
    for _ in range(p):
        total += tab[diff[0]]
        for j in range(deg):
            t = diff[j] + diff[j + 1]
            if t >= p:
                t -= p
            diff[j] = t
    return total


@njit(cache=True)
def _quadratic_ext_sum(f, p, mod, deg, tab):
    """character_sum for k = 2 with the difference table split into coordinates."""
    m0 = mod[0]
    m1 = mod[1]
    x = np.zeros(2, dtype=np.int64)
    val = np.zeros(2, dtype=np.int64)
    tmp = np.zeros(2, dtype=np.int64)
    r = np.zeros(deg + 1, dtype=np.int64)
    q = np.zeros(deg + 1, dtype=np.int64)
    total = 0
    for v in range(p):
        x[1] = v
        for u in range(deg + 1):
            x[0] = u % p
            val[0] = f[deg]
            val[1] = 0
            for j in range(deg - 1, -1, -1):
                _fmul(val, x, tmp, mod, p, 2)
                val[0] = (tmp[0] + f[j]) % p
                val[1] = tmp[1]
            r[u] = val[0]
            q[u] = val[1]
        for lvl in range(1, deg + 1):
            for j in range(deg, lvl - 1, -1):
                r[j] = (r[j] - r[j - 1]) % p
                q[j] = (q[j] - q[j - 1]) % p
        for _ in range(p):
            a0 = r[0]
            a1 = q[0]
            nv = (a0 * a0 + a1 * ((m0 * a1 - m1 * a0) % p)) % p
            total += tab[nv]
            for j in range(deg):
                t = r[j] + r[j + 1] - p
                r[j] = t + ((t >> 63) & p)
                t = q[j] + q[j + 1] - p
                q[j] = t + ((t >> 63) & p)
    return total


@njit(cache=True)
def character_sum(fc, p, k, mod):
    """Sum over x in F_{p^k} of chi(f(x)), chi the quadratic character.

    ``fc`` holds the integer coefficients of f (low degree first).  The value
    chi(a) is read off as the Legendre symbol of the norm of a.  Along each
    line x = c + u (u in F_p) f is advanced by forward differences, so the
    inner loop is additions only.
    """
    if k == 1:
        return _prime_field_sum(fc, p)
    deg = fc.shape[0] - 1
    if k == 2:
        f2 = np.empty(deg + 1, dtype=np.int64)
        for i in range(deg + 1):
            f2[i] = fc[i] % p
        return _quadratic_ext_sum(f2, p, mod, deg, _chi_table(p))
    # squares table of F_p
    sq = np.zeros(p, dtype=np.bool_)
    s = 0
    inc = 1
    for _ in range((p + 1) // 2):
        sq[s] = True
        s += inc
        if s >= p:
            s -= p
        inc += 2
        if inc >= p:
            inc -= p
    f = np.empty(deg + 1, dtype=np.int64)
    for i in range(deg + 1):
        f[i] = fc[i] % p

    nlines = 1
    for _ in range(k - 1):
        nlines *= p
    diff = np.zeros((deg + 1, k), dtype=np.int64)
    x = np.zeros(k, dtype=np.int64)
    val = np.zeros(k, dtype=np.int64)
    tmp = np.zeros(k, dtype=np.int64)
    vals = np.zeros((deg + 1, k), dtype=np.int64)
    total = 0
    for line in range(nlines):
        # base point c = (0, v1, v2)
        rem = line
        for i in range(1, k):
            x[i] = rem % p
            rem //= p
        # f(c + u) for u = 0..deg by Horner
        for u in range(deg + 1):
            x[0] = u % p
            for i in range(k):
                val[i] = 0
            val[0] = f[deg]
            for j in range(deg - 1, -1, -1):
                _fmul(val, x, tmp, mod, p, k)
                for i in range(k):
                    val[i] = tmp[i]
                val[0] = (val[0] + f[j]) % p
            for i in range(k):
                vals[u, i] = val[i]
        # forward difference table
        for j in range(deg + 1):
            for i in range(k):
                diff[j, i] = vals[j, i]
        for lvl in range(1, deg + 1):
            for j in range(deg, lvl - 1, -1):
                for i in range(k):
                    diff[j, i] = (diff[j, i] - diff[j - 1, i]) % p
        # diff[j] now holds the j-th forward difference at u = 0
        for u in range(p):
            nv = _norm(diff[0], mod, p, k)
            if nv != 0:
                total += 1 if sq[nv] else -1
            for j in range(deg):
                for i in range(k):
                    t = diff[j, i] + diff[j + 1, i]
                    if t >= p:
                        t -= p
                    diff[j, i] = t
    return total


@njit(parallel=True, cache=True)
def character_sums(fc, primes, k, mods):
    """character_sum for a block of primes; mods[i] is the modulus for primes[i]."""
    out = np.zeros(primes.shape[0], dtype=np.int64)
    for i in prange(primes.shape[0]):
        out[i] = character_sum(fc, primes[i], k, mods[i])
    return out
