"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same signatures and return conventions, used when the extension is not built
or when ``POVMFORGE_PURE=1`` is set.
"""

import math

import numpy as np


def _digits(a, p, k):
    out = []
    for _ in range(k):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _mulmod(a, b, p, k, mod):
    da = _digits(a, p, k)
    db = _digits(b, p, k)
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(2 * k - 2, k - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(k):
                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
    r = 0
    for c in reversed(prod[:k]):
        r = r * p + c
    return r


def gf_mul(a, b, p, k, modulus):
    """Product of two integer-encoded elements of GF(p^k)."""
    return _mulmod(int(a), int(b), int(p), int(k), [int(c) for c in modulus])


def gf_power_table(g, count, p, k, modulus):
    """Array ``[g**0, g**1, ..., g**(count-1)]`` of integer-encoded elements."""
    mod = [int(c) for c in modulus]
    out = np.empty(count, dtype=np.int_)
    x = 1
    for i in range(count):
        out[i] = x
        x = _mulmod(x, int(g), int(p), int(k), mod)
    return out


def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues unsorted;
    ``sweeps == -1`` signals that ``max_sweeps`` was exhausted.
    """
    A = np.array(a, dtype=np.complex128, copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    total = float(np.sqrt(np.sum(np.abs(A) ** 2)))
    converged = False
    sweep = 0
    for sweep in range(max_sweeps + 1):
        off = float(np.sqrt(2.0 * np.sum(np.abs(np.triu(A, 1)) ** 2)))
        if total == 0.0 or off <= tol * total:
            converged = True
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phi = math.atan2(apq.imag, apq.real)
                zeta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                if zeta >= 0:
                    t = 1.0 / (zeta + math.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                e = complex(math.cos(phi), -math.sin(phi))
                jpp, jpq, jqp, jqq = c, s, -s * e, c * e
                colp = A[:, p].copy()
                colq = A[:, q]
                A[:, p] = colp * jpp + colq * jqp
                A[:, q] = colp * jpq + colq * jqq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = np.conj(jpp) * rowp + np.conj(jqp) * rowq
                A[q, :] = np.conj(jpq) * rowp + np.conj(jqq) * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = vp * jpp + vq * jqp
                V[:, q] = vp * jpq + vq * jqq
    w = np.real(np.diag(A)).copy()
    return w, V, (sweep if converged else -1)
