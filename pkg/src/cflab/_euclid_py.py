"""Pure-Python continued-fraction quotient kernel.

`lehmer_cf` extracts the full Euclidean continued fraction of p/q using
Lehmer's word-level batching (Knuth vol. 2, Algorithm 4.5.2-L adapted to
collect quotients): most quotients are found with single-word arithmetic on
the leading 63 bits, and the big operands are touched only once per batch.
Every emitted quotient is confirmed by the two-sided floor test, so the
output is always exactly the schoolbook Euclid result.

The Cython twin of this module is cflab._euclid; cflab.contfrac picks
whichever is importable.
"""

from __future__ import annotations

_WORD = 62


def schoolbook_cf(p: int, q: int) -> list[int]:
    """Plain Euclidean quotient extraction; the reference kernel."""
    if q <= 0 or p < 0:
        raise ValueError("requires p >= 0 and q >= 1")
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    return out


def lehmer_cf(p: int, q: int) -> list[int]:
    """Quotients [a0, a1, ...] of the continued fraction of p/q (p >= 0, q >= 1)."""
    if q <= 0 or p < 0:
        raise ValueError("requires p >= 0 and q >= 1")
    out: list[int] = []
    while q:
        if q.bit_length() <= _WORD:
            while q:
                a, r = divmod(p, q)
                out.append(a)
                p, q = q, r
            break
        shift = max(p.bit_length(), q.bit_length()) - _WORD
        x = p >> shift
        y = q >> shift
        A, B, C, D = 1, 0, 0, 1
        emitted = 0
        while True:
            yc = y + C
            yd = y + D
            if yc <= 0 or yd <= 0:
                break
            a = (x + A) // yc
            if a != (x + B) // yd:
                break
            out.append(a)
            emitted += 1
            A, C = C, A - a * C
            B, D = D, B - a * D
            x, y = y, x - a * y
        if emitted == 0:
            # No quotient could be confirmed from the leading words
            # (huge quotient); do one full-precision step.
            a, r = divmod(p, q)
            out.append(a)
            p, q = q, r
        else:
            p, q = A * p + B * q, C * p + D * q
    return out
