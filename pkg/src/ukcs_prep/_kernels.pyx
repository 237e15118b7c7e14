# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; semantics match ``_kernels_py`` exactly."""

from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.stdint cimport uint64_t


cdef extern from "Python.h":
    int PyUnicode_4BYTE_KIND
    str PyUnicode_FromKindAndData(int kind, const void* buffer, Py_ssize_t size)


DEF ESCAPE = 1
DEF COVERED = 2
DEF UPPER = 4
DEF DECODE_START = 8


cdef inline unsigned char _cls(const unsigned char* cls, frozenset astral, Py_UCS4 c):
    if c < 0x10000:
        return cls[c]
    return ESCAPE if <long>c in astral else 0


cdef class _Buf:
    """Growable UCS4 output buffer."""

    cdef Py_UCS4* data
    cdef Py_ssize_t size, cap

    def __cinit__(self, Py_ssize_t cap):
        self.cap = cap if cap > 16 else 16
        self.size = 0
        self.data = <Py_UCS4*>PyMem_Malloc(self.cap * sizeof(Py_UCS4))
        if self.data == NULL:
            raise MemoryError()

    def __dealloc__(self):
        PyMem_Free(self.data)

    cdef inline void reserve(self, Py_ssize_t extra) except *:
        cdef Py_ssize_t need = self.size + extra
        cdef Py_UCS4* grown
        if need > self.cap:
            while self.cap < need:
                self.cap *= 2
            grown = <Py_UCS4*>PyMem_Realloc(self.data, self.cap * sizeof(Py_UCS4))
            if grown == NULL:
                raise MemoryError()
            self.data = grown

    cdef inline void put(self, Py_UCS4 c):
        self.data[self.size] = c
        self.size += 1

    cdef str text(self):
        return PyUnicode_FromKindAndData(PyUnicode_4BYTE_KIND, self.data, self.size)


cdef class Prepared:
    """Kernel-side copy of a romanization plan with raw pointers into its arrays."""

    cdef object plan
    cdef bytes cls_bytes
    cdef const unsigned char* cls
    cdef frozenset astral
    cdef const unsigned short[:] key_of
    cdef const unsigned char[:] sep_after
    cdef const unsigned int[:] out_buf
    cdef const unsigned int[:] out_off
    cdef const unsigned short[:] out_len
    cdef const unsigned short[:] bucket
    cdef const unsigned short[:] cand
    cdef const unsigned int[:] form_buf
    cdef const unsigned int[:] form_off
    cdef const unsigned short[:] form_len
    cdef const unsigned int[:] form_src
    cdef Py_ssize_t nkeys, max_out
    cdef Py_UCS4 sep_c, open_c, close_c

    def __init__(self, plan):
        flat = plan.flat
        self.plan = plan
        self.cls_bytes = flat.cls
        self.cls = self.cls_bytes
        self.astral = flat.astral_escape
        self.key_of = flat.key_of
        self.sep_after = plan.sep_matrix
        self.out_buf = flat.out_buf
        self.out_off = flat.out_off
        self.out_len = flat.out_len
        self.bucket = flat.bucket
        self.cand = flat.cand
        self.form_buf = flat.form_buf
        self.form_off = flat.form_off
        self.form_len = flat.form_len
        self.form_src = flat.form_src
        self.nkeys = len(plan.keys)
        self.max_out = plan.max_out
        self.sep_c = plan.sep[0]
        self.open_c = plan.open[0]
        self.close_c = plan.close[0]


def prepare(plan):
    return Prepared(plan)


def romanize(str line, Prepared p):
    cdef const unsigned char* cls = p.cls
    cdef frozenset astral = p.astral
    cdef Py_ssize_t nkeys = p.nkeys
    cdef Py_ssize_t n = len(line)
    cdef Py_ssize_t i = 0, j, k, prev = -1, form, off, t
    cdef Py_UCS4 c
    cdef unsigned char f
    cdef bint adj, changed = False
    cdef _Buf buf = _Buf(n + n // 2 + 8)
    while i < n:
        c = line[i]
        f = _cls(cls, astral, c)
        if f & COVERED:
            k = p.key_of[c]
            buf.reserve(p.max_out + 1)
            if prev >= 0 and p.sep_after[prev * nkeys + k]:
                buf.put(p.sep_c)
            if f & UPPER:
                adj = (i > 0 and _cls(cls, astral, line[i - 1]) & UPPER) or (
                    i + 1 < n and _cls(cls, astral, line[i + 1]) & UPPER
                )
                form = 3 * k + (2 if adj else 1)
            else:
                form = 3 * k
            off = p.out_off[form]
            for t in range(p.out_len[form]):
                buf.put(p.out_buf[off + t])
            prev = k
            changed = True
            i += 1
        elif f & ESCAPE:
            buf.reserve(2)
            buf.put(p.open_c)
            j = i
            while j < n:
                c = line[j]
                if not (_cls(cls, astral, c) & ESCAPE):
                    break
                buf.reserve(3)
                buf.put(c)
                if c == p.close_c:
                    buf.put(c)
                j += 1
            buf.put(p.close_c)
            changed = True
            prev = -1
            i = j
        else:
            buf.reserve(1)
            buf.put(c)
            prev = -1
            i += 1
    if not changed:
        return line
    return buf.text()


def deromanize(str line, Prepared p):
    cdef const unsigned char* cls = p.cls
    cdef Py_UCS4 open_c = p.open_c
    cdef Py_UCS4 close_c = p.close_c
    cdef Py_UCS4 sep_c = p.sep_c
    cdef Py_ssize_t n = len(line)
    cdef Py_ssize_t i = 0, j, start, b, fi = 0, L = 0, t, off
    cdef Py_UCS4 c
    cdef bint ok
    # output never exceeds the input length
    cdef _Buf buf = _Buf(n)
    while i < n:
        c = line[i]
        if c == open_c:
            start = i
            j = i + 1
            while True:
                if j >= n:
                    return "", start
                c = line[j]
                if c == close_c:
                    if j + 1 < n and line[j + 1] == close_c:
                        buf.put(c)
                        j += 2
                        continue
                    j += 1
                    break
                buf.put(c)
                j += 1
            i = j
            continue
        if c == sep_c:
            i += 1
            continue
        if c >= 0x10000 or not (cls[c] & DECODE_START):
            buf.put(c)
            i += 1
            continue
        b = p.bucket[c] - 1
        ok = False
        while p.cand[b] != 0xFFFF:
            fi = p.cand[b]
            L = p.form_len[fi]
            if i + L <= n:
                off = p.form_off[fi]
                ok = True
                for t in range(1, L):
                    if line[i + t] != p.form_buf[off + t]:
                        ok = False
                        break
                if ok:
                    break
            b += 1
        if not ok:
            buf.put(c)
            i += 1
            continue
        buf.put(p.form_src[fi])
        i += L
    return buf.text(), -1


def ngram_counts(list words, dict counts):
    cdef str w, p, g
    cdef Py_ssize_t i, m, nn
    for w in words:
        p = "_" + w + "_"
        m = len(p)
        for i in range(m):
            for nn in range(1, 4):
                if i + nn > m:
                    break
                g = p[i:i + nn]
                if nn == 1 and g == "_":
                    continue
                counts[g] = counts.get(g, 0) + 1


def out_of_place(list doc, dict profile, Py_ssize_t max_penalty):
    cdef Py_ssize_t total = 0, rank = 0, r
    cdef object hit
    for g in doc:
        hit = profile.get(g)
        if hit is None:
            total += max_penalty
        else:
            r = hit
            total += r - rank if r >= rank else rank - r
        rank += 1
    return total


def splitmix64(x):
    cdef uint64_t z = (<uint64_t>(x & 0xFFFFFFFFFFFFFFFF)) + <uint64_t>0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)
