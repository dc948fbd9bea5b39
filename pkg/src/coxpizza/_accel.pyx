# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled accumulation kernel; semantics identical to _kernel_py.

Packed keys are carried as C uint64 (arity <= 8, exponents < 256), so the
monomial bookkeeping runs at C speed; coefficients stay Python ints for
exactness at any magnitude.
"""

from libc.stdint cimport uint64_t

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.list cimport PyList_GET_ITEM
from cpython.object cimport PyObject
from cpython.tuple cimport PyTuple_GET_ITEM


cdef int _leaf(dict acc, const uint64_t[::1] ks, list cs, uint64_t key, object coeff) except -1:
    cdef Py_ssize_t i, n = ks.shape[0]
    cdef uint64_t full
    cdef object kobj, v
    cdef PyObject* hit
    for i in range(n):
        full = key + ks[i]
        v = coeff * <object>PyList_GET_ITEM(cs, i)
        kobj = full
        hit = PyDict_GetItem(acc, kobj)
        if hit == NULL:
            PyDict_SetItem(acc, kobj, v)
        else:
            PyDict_SetItem(acc, kobj, <object>hit + v)
    return 0


cdef int _rec(dict acc, list slot_keys, list slot_coeffs, tuple comp,
              Py_ssize_t t, Py_ssize_t last, uint64_t key, object coeff) except -1:
    cdef Py_ssize_t q = <object>PyTuple_GET_ITEM(comp, t)
    cdef const uint64_t[::1] ks = <object>PyList_GET_ITEM(<list>PyList_GET_ITEM(slot_keys, t), q)
    cdef list cs = <list>PyList_GET_ITEM(<list>PyList_GET_ITEM(slot_coeffs, t), q)
    cdef Py_ssize_t i, n = ks.shape[0]
    if t == last:
        _leaf(acc, ks, cs, key, coeff)
        return 0
    for i in range(n):
        _rec(acc, slot_keys, slot_coeffs, comp, t + 1, last,
             key + ks[i], coeff * <object>PyList_GET_ITEM(cs, i))
    return 0


def accumulate_tensor(dict acc, list slot_keys, list slot_coeffs,
                      list comps, list scales, long sign):
    """acc[k1+...+kE] += sign * scale * c1*...*cE over every composition."""
    cdef Py_ssize_t nc = len(comps)
    cdef Py_ssize_t last = len(slot_keys) - 1
    cdef Py_ssize_t ci
    cdef object scale
    for ci in range(nc):
        scale = <object>PyList_GET_ITEM(scales, ci)
        if sign < 0:
            scale = -scale
        _rec(acc, slot_keys, slot_coeffs, <tuple>PyList_GET_ITEM(comps, ci),
             0, last, 0, scale)
    return None
