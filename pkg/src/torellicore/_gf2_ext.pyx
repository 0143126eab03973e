# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled GF(2) elimination on packed 64-bit words.

Produces exactly the same reduced echelon basis as the pure-Python backend.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset


def echelon(rows):
    """Reduced row echelon basis of the span of ``rows`` (ints), sorted by pivot."""
    cdef list src = [int(row) for row in rows if row]
    cdef Py_ssize_t m = len(src)
    if m == 0:
        return []
    cdef Py_ssize_t nbits = 0
    cdef Py_ssize_t i, j, w, r, piv
    for i in range(m):
        b = (<object>src[i]).bit_length()
        if b > nbits:
            nbits = b
    cdef Py_ssize_t nw = (nbits + 63) // 64
    cdef Py_ssize_t nbytes = nw * 8
    cdef uint64_t* buf = <uint64_t*>malloc(m * nw * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cdef bytes raw
    cdef uint64_t* tmp
    cdef uint64_t mask
    cdef Py_ssize_t col, wi
    try:
        for i in range(m):
            raw = (<object>src[i]).to_bytes(nbytes, "little")
            memcpy(&buf[i * nw], <char*>raw, nbytes)
        r = 0
        for col in range(nbits):
            if r == m:
                break
            wi = col >> 6
            mask = (<uint64_t>1) << (col & 63)
            piv = -1
            for i in range(r, m):
                if buf[i * nw + wi] & mask:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for w in range(nw):
                    buf[piv * nw + w], buf[r * nw + w] = buf[r * nw + w], buf[piv * nw + w]
            for i in range(m):
                if i != r and (buf[i * nw + wi] & mask):
                    for w in range(wi, nw):
                        buf[i * nw + w] ^= buf[r * nw + w]
            r += 1
        out = []
        for i in range(r):
            out.append(int.from_bytes((<char*>&buf[i * nw])[:nbytes], "little"))
        return out
    finally:
        free(buf)


def rank(rows):
    """Rank over GF(2) of a family of bitset rows."""
    return len(echelon(rows))
