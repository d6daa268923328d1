# cython: language_level=3, cdivision=True
"""Compiled continued-fraction quotient kernel (Lehmer batching).

Twin of cflab._euclid_py with the word-level inner loop in C.  Quotients and
cofactors are guarded so every int64 operation stays in range and every C
division sees nonnegative operands; a batch that would violate a guard simply
ends early, which is always safe.
"""

_WORD = 62


def lehmer_cf(p, q):
    """Quotients [a0, a1, ...] of the continued fraction of p/q (p >= 0, q >= 1)."""
    if q <= 0 or p < 0:
        raise ValueError("requires p >= 0 and q >= 1")
    cdef long long GUARD_A = 1073741824        # 2^30: largest in-word quotient
    cdef long long GUARD_COF = 2147483648      # 2^31: largest in-word cofactor
    cdef list out = []
    cdef long long x, y, A, B, C, D, a, yc, yd, xa, xb, t, nC, nD
    cdef long long cp, cq, cr
    cdef int emitted
    cdef object shift, P, Q, nP, nQ, a_obj, r_obj
    P = p
    Q = q
    while Q:
        if Q.bit_length() <= 62:
            # One full-precision step brings both operands into int64 range,
            # then the tail runs entirely in C.
            a_obj, r_obj = divmod(P, Q)
            out.append(a_obj)
            cp = Q
            cq = r_obj
            while cq:
                a = cp / cq
                cr = cp - a * cq
                out.append(a)
                cp = cq
                cq = cr
            break
        shift = max(P.bit_length(), Q.bit_length()) - 62
        x = P >> shift
        y = Q >> shift
        A = 1; B = 0; C = 0; D = 1
        emitted = 0
        while True:
            yc = y + C
            yd = y + D
            if yc <= 0 or yd <= 0:
                break
            xa = x + A
            xb = x + B
            if xa < 0 or xb < 0:
                break
            a = xa / yc
            if a != xb / yd:
                break
            if a > GUARD_A:
                break
            nC = A - a * C
            nD = B - a * D
            if nC > GUARD_COF or nC < -GUARD_COF or nD > GUARD_COF or nD < -GUARD_COF:
                break
            out.append(a)
            emitted += 1
            A = C; C = nC
            B = D; D = nD
            t = x - a * y
            x = y
            y = t
        if emitted == 0:
            a_obj, r_obj = divmod(P, Q)
            out.append(a_obj)
            P = Q
            Q = r_obj
        else:
            nP = A * P + B * Q
            nQ = C * P + D * Q
            P = nP
            Q = nQ
    return out
