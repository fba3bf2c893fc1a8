# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gauss-Jordan elimination over GF(p) for small primes.

Operates in place on a C-contiguous uint8 buffer whose entries are
residues in [0, p).  Semantics are identical to ``_rowred_np.rref_mod_p``;
the parity test suite asserts this on random inputs.  The p = 2 path
reduces to vectorisable XOR row updates; odd primes use a lookup table
instead of per-element division.
"""


def rref_mod_p(unsigned char[:, ::1] a, int p):
    """Reduce ``a`` to reduced row echelon form; return pivot columns."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t cols = a.shape[1]
    cdef Py_ssize_t r = 0, i, j, col, piv
    cdef int inv, f, tmp
    cdef int invtab[256]
    cdef unsigned char modtab[256]
    if p < 2 or p > 16:
        raise ValueError("prime out of supported range")
    for i in range(256):
        modtab[i] = <unsigned char> (i % p)
    for i in range(1, p):
        for j in range(1, p):
            if (i * j) % p == 1:
                invtab[i] = j
                break
    pivots = []
    for col in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(col, cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = <unsigned char> tmp
        if p == 2:
            for i in range(rows):
                if i != r and a[i, col] != 0:
                    for j in range(col, cols):
                        a[i, j] ^= a[r, j]
        else:
            inv = invtab[a[r, col]]
            if inv != 1:
                for j in range(col, cols):
                    a[r, j] = modtab[a[r, j] * inv]
            for i in range(rows):
                if i != r and a[i, col] != 0:
                    f = p - a[i, col]
                    for j in range(col, cols):
                        a[i, j] = modtab[a[i, j] + f * a[r, j]]
        pivots.append(col)
        r += 1
    return pivots
