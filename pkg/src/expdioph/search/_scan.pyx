# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the valuation scan.

Works on residues modulo ``p^K < 2^63`` so that every intermediate value
fits in a uint64.  A residue of zero means the true valuation is ``>= K``
(or the difference is exactly zero); those cells are written to
``zero_buf`` for an exact big-integer recheck by the caller.
"""

from libc.stdint cimport uint64_t, int32_t


cdef inline int _val(uint64_t r, unsigned int p) noexcept nogil:
    cdef int v = 0
    while r % p == 0:
        r //= p
        v += 1
    return v


def scan_stratum(const uint64_t[:] f_res, const uint64_t[:] pow_res, int n1, int n2_lo,
                 int z1_max, uint64_t modulus, unsigned int p, int32_t[:] zero_buf):
    """Max valuation of ``U[n1] + U[n2] - pow[z1]`` over ``n2_lo <= n2 <= n1``
    and ``0 <= z1 <= z1_max``, skipping zero residues.

    Returns ``(best_v, best_n2, best_z1, n_zero)``; ``best_v`` is -1 when
    every cell had a zero residue.  ``zero_buf`` receives ``(n2, z1)`` pairs.
    """
    cdef int best_v = -1, best_n2 = -1, best_z1 = -1, n_zero = 0
    cdef int n2, z1, v
    cdef int cap = zero_buf.shape[0] // 2
    cdef uint64_t a = f_res[n1], s, c, r
    if z1_max >= pow_res.shape[0] or n1 >= f_res.shape[0] or n2_lo < 0:
        raise IndexError("scan range exceeds the residue tables")
    with nogil:
        for n2 in range(n2_lo, n1 + 1):
            s = a + f_res[n2]
            if s >= modulus:
                s -= modulus
            for z1 in range(z1_max + 1):
                c = pow_res[z1]
                if s >= c:
                    r = s - c
                else:
                    r = s + (modulus - c)
                if r == 0:
                    if n_zero < cap:
                        zero_buf[2 * n_zero] = n2
                        zero_buf[2 * n_zero + 1] = z1
                    n_zero += 1
                    continue
                if r % p != 0:
                    v = 0
                else:
                    v = _val(r, p)
                if v > best_v:
                    best_v = v
                    best_n2 = n2
                    best_z1 = z1
    return best_v, best_n2, best_z1, n_zero
