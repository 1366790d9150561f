# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled packed series multiply kernel.

Same contract as reszeta._kernel_py.mul_packed.  The fast path runs the
convolution entirely in C (uint64 keys, int64 coefficients, open-addressing
table) when every key fits in 64 bits and a cheap a-priori bound shows no
intermediate coefficient can overflow int64.  Anything else is delegated to
the exact pure-Python implementation.
"""

from cpython.dict cimport PyDict_Next, PyDict_SetItem
from cpython.object cimport PyObject
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

from . import _kernel_py

BACKEND = "c"

DEF COEF_BOUND_BITS = 62


cdef struct Table:
    uint64_t *keys
    int64_t *vals
    unsigned char *used
    Py_ssize_t cap
    Py_ssize_t size
    int shiftbits


cdef inline int table_init(Table *t, Py_ssize_t want) except -1:
    cdef Py_ssize_t cap = 16
    while cap < want * 2:
        cap <<= 1
    t.keys = <uint64_t *> malloc(cap * sizeof(uint64_t))
    t.vals = <int64_t *> malloc(cap * sizeof(int64_t))
    t.used = <unsigned char *> malloc(cap)
    if t.keys == NULL or t.vals == NULL or t.used == NULL:
        table_free(t)
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(cap):
        t.used[i] = 0
    t.cap = cap
    t.size = 0
    cdef int bits = 0
    while (<Py_ssize_t> 1) << bits < cap:
        bits += 1
    t.shiftbits = 64 - bits
    return 0


cdef inline void table_free(Table *t) noexcept:
    if t.keys != NULL:
        free(t.keys)
        t.keys = NULL
    if t.vals != NULL:
        free(t.vals)
        t.vals = NULL
    if t.used != NULL:
        free(t.used)
        t.used = NULL


cdef inline Py_ssize_t table_slot(Table *t, uint64_t key) noexcept nogil:
    cdef uint64_t h = (key * <uint64_t> 0x9E3779B97F4A7C15) >> t.shiftbits
    cdef Py_ssize_t mask = t.cap - 1
    cdef Py_ssize_t i = <Py_ssize_t> h & mask
    while t.used[i] and t.keys[i] != key:
        i = (i + 1) & mask
    return i


cdef int table_grow(Table *t) except -1:
    # cancelled entries are dropped here, keeping heavy-cancellation
    # workloads cache-resident
    cdef Py_ssize_t live = 0, i, j
    for i in range(t.cap):
        if t.used[i] and t.vals[i] != 0:
            live += 1
    cdef Table fresh
    fresh.keys = NULL
    fresh.vals = NULL
    fresh.used = NULL
    table_init(&fresh, live + 16 if live + 16 > t.cap // 2 else t.cap // 2)
    for i in range(t.cap):
        if t.used[i] and t.vals[i] != 0:
            j = table_slot(&fresh, t.keys[i])
            fresh.keys[j] = t.keys[i]
            fresh.vals[j] = t.vals[i]
            fresh.used[j] = 1
            fresh.size += 1
    table_free(t)
    t[0] = fresh
    return 0


cdef inline int table_add(Table *t, uint64_t key, int64_t delta) except -1:
    cdef Py_ssize_t i = table_slot(t, key)
    if t.used[i]:
        t.vals[i] += delta
    else:
        t.keys[i] = key
        t.vals[i] = delta
        t.used[i] = 1
        t.size += 1
        if t.size * 3 > t.cap * 2:
            table_grow(t)
    return 0


cdef int _extract(dict d, uint64_t *keys, int64_t *vals) except -1:
    """Fill C arrays from a packed dict.  Returns 0, or 1 if unrepresentable."""
    cdef Py_ssize_t pos = 0, i = 0
    cdef PyObject *pk
    cdef PyObject *pv
    cdef object k, v
    while PyDict_Next(d, &pos, &pk, &pv):
        k = <object> pk
        v = <object> pv
        if k < 0 or k.bit_length() > 63:
            return 1
        if v.bit_length() > COEF_BOUND_BITS:
            return 1
        keys[i] = <uint64_t> k
        vals[i] = <int64_t> v
        i += 1
    return 0


def mul_packed(dict a, dict b, Py_ssize_t shift, object dmax):
    """Exact truncated product of packed term dicts."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a

    # Exact overflow bound: every partial sum of an output coefficient is
    # bounded by sum(|a|) * max(|b|).
    cdef object suma = 0, maxb = 0, av, bv
    for av in a.values():
        suma += av if av > 0 else -av
    for bv in b.values():
        if bv > maxb:
            maxb = bv
        elif -bv > maxb:
            maxb = -bv
    if shift >= 63 or (suma * maxb).bit_length() > COEF_BOUND_BITS:
        return _kernel_py.mul_packed(a, b, shift, dmax)

    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef uint64_t *ak = <uint64_t *> malloc(na * sizeof(uint64_t))
    cdef int64_t *av_ = <int64_t *> malloc(na * sizeof(int64_t))
    cdef uint64_t *bk = <uint64_t *> malloc(nb * sizeof(uint64_t))
    cdef int64_t *bv_ = <int64_t *> malloc(nb * sizeof(int64_t))
    cdef Table t
    t.keys = NULL
    t.vals = NULL
    t.used = NULL
    cdef object out
    cdef Py_ssize_t i, j
    cdef uint64_t k, dlimit
    cdef int bad
    try:
        if ak == NULL or av_ == NULL or bk == NULL or bv_ == NULL:
            raise MemoryError()
        bad = _extract(a, ak, av_)
        if not bad:
            bad = _extract(b, bk, bv_)
        if bad:
            return _kernel_py.mul_packed(a, b, shift, dmax)
        dlimit = <uint64_t> dmax
        table_init(&t, na * nb if na * nb < 131072 else 131072)
        for i in range(na):
            for j in range(nb):
                k = ak[i] + bk[j]
                if (k >> shift) > dlimit:
                    continue
                table_add(&t, k, av_[i] * bv_[j])
        out = {}
        for i in range(t.cap):
            if t.used[i] and t.vals[i] != 0:
                PyDict_SetItem(out, t.keys[i], t.vals[i])
        return out
    finally:
        table_free(&t)
        if ak != NULL:
            free(ak)
        if av_ != NULL:
            free(av_)
        if bk != NULL:
            free(bk)
        if bv_ != NULL:
            free(bv_)
