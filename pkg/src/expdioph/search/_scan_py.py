"""Pure-Python twin of the compiled scan kernel (same signature and results)."""

from __future__ import annotations


def scan_stratum(f_res, pow_res, n1, n2_lo, z1_max, modulus, p, zero_buf):
    if z1_max >= len(pow_res) or n1 >= len(f_res) or n2_lo < 0:
        raise IndexError("scan range exceeds the residue tables")
    best_v = best_n2 = best_z1 = -1
    n_zero = 0
    cap = len(zero_buf) // 2
    a = f_res[n1]
    pows = pow_res[: z1_max + 1]
    for n2 in range(n2_lo, n1 + 1):
        s = (a + f_res[n2]) % modulus
        for z1, c in enumerate(pows):
            r = (s - c) % modulus
            if r == 0:
                if n_zero < cap:
                    zero_buf[2 * n_zero] = n2
                    zero_buf[2 * n_zero + 1] = z1
                n_zero += 1
                continue
            if r % p:
                v = 0
            else:
                v = 1
                r //= p
                while r % p == 0:
                    r //= p
                    v += 1
            if v > best_v:
                best_v, best_n2, best_z1 = v, n2, z1
    return best_v, best_n2, best_z1, n_zero
