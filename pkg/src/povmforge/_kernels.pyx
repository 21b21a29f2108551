# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: GF(p^k) multiplication/power tables and complex Jacobi."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, atan2, cos, sin

cnp.import_array()

DEF MAXDEG = 64


cdef long _mulmod(long a, long b, long p, int k, const long* mod) nogil:
    cdef long da[MAXDEG]
    cdef long db[MAXDEG]
    cdef long prod[2 * MAXDEG]
    cdef int i, j
    cdef long c, r, base
    for i in range(k):
        da[i] = a % p
        a //= p
        db[i] = b % p
        b //= p
    for i in range(2 * k - 1):
        prod[i] = 0
    for i in range(k):
        if da[i] == 0:
            continue
        for j in range(k):
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p
    # modulus is monic: x^k = -(mod[0] + ... + mod[k-1] x^{k-1})
    for i in range(2 * k - 2, k - 1, -1):
        c = prod[i]
        if c == 0:
            continue
        prod[i] = 0
        for j in range(k):
            prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
            if prod[i - k + j] < 0:
                prod[i - k + j] += p
    r = 0
    base = 1
    for i in range(k):
        r += prod[i] * base
        base *= p
    return r


def gf_mul(long a, long b, long p, int k, modulus):
    """Product of two integer-encoded elements of GF(p^k)."""
    cdef cnp.ndarray[long, ndim=1] mod = np.ascontiguousarray(modulus, dtype=np.int_)
    if k > MAXDEG:
        raise ValueError("extension degree too large for compiled kernel")
    return _mulmod(a, b, p, k, <const long*> mod.data)


def gf_power_table(long g, long count, long p, int k, modulus):
    """Array ``[g**0, g**1, ..., g**(count-1)]`` of integer-encoded elements."""
    cdef cnp.ndarray[long, ndim=1] mod = np.ascontiguousarray(modulus, dtype=np.int_)
    cdef cnp.ndarray[long, ndim=1] out = np.empty(count, dtype=np.int_)
    cdef long i
    cdef long x = 1
    cdef const long* mp = <const long*> mod.data
    if k > MAXDEG:
        raise ValueError("extension degree too large for compiled kernel")
    with nogil:
        for i in range(count):
            out[i] = x
            x = _mulmod(x, g, p, k, mp)
    return out


def jacobi_eigh(a, double tol, int max_sweeps):
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues unsorted;
    ``sweeps == -1`` signals that ``max_sweeps`` was exhausted.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] A = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef int n = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = np.eye(n, dtype=np.complex128)
    cdef int sweep, p, q, r
    cdef double off, total, mag, phi, zeta, t, c, s, app, aqq
    cdef double complex e, jpp, jpq, jqp, jqq, x, y
    cdef int converged = 0

    total = 0.0
    for p in range(n):
        for q in range(n):
            total += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
    total = sqrt(total)

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
        off = sqrt(2.0 * off)
        if off <= tol * total or total == 0.0:
            converged = 1
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                mag = sqrt(A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag)
                if mag == 0.0:
                    continue
                phi = atan2(A[p, q].imag, A[p, q].real)
                app = A[p, p].real
                aqq = A[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                if zeta >= 0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                e = cos(phi) - 1j * sin(phi)
                jpp = c
                jpq = s
                jqp = -s * e
                jqq = c * e
                for r in range(n):
                    x = A[r, p]
                    y = A[r, q]
                    A[r, p] = x * jpp + y * jqp
                    A[r, q] = x * jpq + y * jqq
                for r in range(n):
                    x = A[p, r]
                    y = A[q, r]
                    A[p, r] = jpp.conjugate() * x + jqp.conjugate() * y
                    A[q, r] = jpq.conjugate() * x + jqq.conjugate() * y
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                for r in range(n):
                    x = V[r, p]
                    y = V[r, q]
                    V[r, p] = x * jpp + y * jqp
                    V[r, q] = x * jpq + y * jqq
    w = np.array([A[i, i].real for i in range(n)], dtype=np.float64)
    return w, V, (sweep if converged else -1)
