# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sparse reduced echelon form over F_p.

Same API and same pivot choices as ``_modp_py.ModpEchelon``.  Values are
kept in [0, p) with p < 2^31, so every product fits a signed 64-bit
integer.
"""
from libcpp.vector cimport vector
from libc.stdint cimport int64_t, int32_t

import numpy as np


cdef inline int64_t _powmod(int64_t b, int64_t e, int64_t p) nogil:
    cdef int64_t r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


cdef class ModpEchelon:
    cdef readonly int64_t p
    cdef readonly Py_ssize_t ncols
    cdef vector[vector[int32_t]] rcols      # pivot id -> sorted columns
    cdef vector[vector[int64_t]] rvals      # pivot id -> values
    cdef vector[int32_t] piv_of_col         # column -> pivot id or -1
    cdef vector[int32_t] col_of_piv         # pivot id -> pivot column
    cdef vector[vector[int32_t]] occ        # column -> pivot ids whose row may contain it
    cdef vector[int64_t] acc
    cdef vector[char] mark
    cdef vector[int32_t] touched

    backend = "compiled"

    def __cinit__(self, Py_ssize_t ncols, int64_t p):
        if p >= 2**31 or p < 3:
            raise ValueError(f"prime {p} outside supported range [3, 2^31)")
        if ncols >= 2**31:
            raise ValueError("too many columns for 32-bit column indices")
        self.p = p
        self.ncols = ncols
        self.piv_of_col.assign(ncols, -1)
        self.occ.resize(ncols)
        self.acc.assign(ncols, 0)
        self.mark.assign(ncols, 0)

    @property
    def rank(self):
        return self.col_of_piv.size()

    def pivot_columns(self):
        return [self.col_of_piv[i] for i in range(self.col_of_piv.size())]

    def copy(self):
        cdef ModpEchelon out = ModpEchelon.__new__(ModpEchelon, 0, self.p)
        out.ncols = self.ncols
        out.rcols = self.rcols
        out.rvals = self.rvals
        out.piv_of_col = self.piv_of_col
        out.col_of_piv = self.col_of_piv
        out.occ = self.occ
        out.acc.assign(self.ncols, 0)
        out.mark.assign(self.ncols, 0)
        return out

    cdef void _scatter(self, int32_t c, int64_t v):
        if not self.mark[c]:
            self.mark[c] = 1
            self.touched.push_back(c)
        self.acc[c] = (self.acc[c] + v) % self.p

    cdef void _eliminate(self):
        # pivot rows only contain non-pivot columns besides their own, so
        # one pass over the originally touched columns suffices
        cdef Py_ssize_t t0 = self.touched.size()
        cdef Py_ssize_t i, j
        cdef int32_t c, k
        cdef int64_t f, negf
        cdef int64_t p = self.p
        for i in range(t0):
            c = self.touched[i]
            k = self.piv_of_col[c]
            if k < 0:
                continue
            f = self.acc[c]
            if f == 0:
                continue
            negf = p - f
            for j in range(<Py_ssize_t>self.rcols[k].size()):
                self._scatter(self.rcols[k][j], (negf * self.rvals[k][j]) % p)

    cdef void _clear(self):
        cdef Py_ssize_t i
        for i in range(<Py_ssize_t>self.touched.size()):
            self.acc[self.touched[i]] = 0
            self.mark[self.touched[i]] = 0
        self.touched.clear()

    cdef int _load(self, cols, vals) except -1:
        cdef Py_ssize_t i, n = len(cols)
        cdef int64_t c
        if len(vals) != n:
            raise ValueError("cols and vals differ in length")
        for i in range(n):
            c = cols[i]
            if c < 0 or c >= self.ncols:
                self._clear()
                raise IndexError(f"column {c} out of range {self.ncols}")
            self._scatter(<int32_t>c, int(vals[i]) % self.p)
        return 0

    cdef dict _residual(self):
        cdef dict out = {}
        cdef Py_ssize_t i
        cdef int32_t c
        for i in range(<Py_ssize_t>self.touched.size()):
            c = self.touched[i]
            if self.acc[c] != 0 and self.piv_of_col[c] < 0:
                out[c] = self.acc[c]
        return out

    def reduce(self, cols, vals):
        """Residual of the row after reduction; empty iff the row is in the span."""
        self._load(cols, vals)
        self._eliminate()
        out = self._residual()
        self._clear()
        return out

    def is_member(self, cols, vals):
        return not self.reduce(cols, vals)

    cdef bint _insert_loaded(self):
        cdef Py_ssize_t i, j, a, b, na, nb
        cdef int32_t c, pc = -1, rid, newid
        cdef size_t best = 0
        cdef int64_t inv, f, negf, p = self.p
        cdef vector[int32_t] ncols_
        cdef vector[int64_t] nvals_
        cdef vector[int32_t] mcols
        cdef vector[int64_t] mvals
        cdef vector[int32_t] users
        self._eliminate()
        # collect residual support, choose pivot with fewest occurrences
        for i in range(<Py_ssize_t>self.touched.size()):
            c = self.touched[i]
            if self.acc[c] != 0 and self.piv_of_col[c] < 0:
                ncols_.push_back(c)
                if pc < 0 or self.occ[c].size() < best or (self.occ[c].size() == best and c < pc):
                    pc = c
                    best = self.occ[c].size()
        if pc < 0:
            self._clear()
            return False
        _sort_i32(ncols_)
        inv = _powmod(self.acc[pc], p - 2, p)
        for i in range(<Py_ssize_t>ncols_.size()):
            nvals_.push_back((self.acc[ncols_[i]] * inv) % p)
        self._clear()
        newid = <int32_t>self.col_of_piv.size()
        # eliminate pc from existing pivot rows that contain it
        users.swap(self.occ[pc])
        for i in range(<Py_ssize_t>users.size()):
            rid = users[i]
            f = _lookup(self.rcols[rid], self.rvals[rid], pc)
            if f == 0:
                continue
            negf = p - f
            mcols.clear()
            mvals.clear()
            a = 0
            b = 0
            na = self.rcols[rid].size()
            nb = ncols_.size()
            while a < na or b < nb:
                if b >= nb or (a < na and self.rcols[rid][a] < ncols_[b]):
                    mcols.push_back(self.rcols[rid][a])
                    mvals.push_back(self.rvals[rid][a])
                    a += 1
                elif a >= na or ncols_[b] < self.rcols[rid][a]:
                    c = ncols_[b]
                    mcols.push_back(c)
                    mvals.push_back((negf * nvals_[b]) % p)
                    self.occ[c].push_back(rid)
                    b += 1
                else:
                    f = (self.rvals[rid][a] + negf * nvals_[b]) % p
                    if f != 0:
                        mcols.push_back(self.rcols[rid][a])
                        mvals.push_back(f)
                    a += 1
                    b += 1
            self.rcols[rid].swap(mcols)
            self.rvals[rid].swap(mvals)
        for i in range(<Py_ssize_t>ncols_.size()):
            if ncols_[i] != pc:
                self.occ[ncols_[i]].push_back(newid)
        self.rcols.push_back(ncols_)
        self.rvals.push_back(nvals_)
        self.piv_of_col[pc] = newid
        self.col_of_piv.push_back(pc)
        return True

    def add_row(self, cols, vals):
        """Insert a row; returns True iff it was independent of the current span."""
        self._load(cols, vals)
        return self._insert_loaded()

    def independent_mask_csr(self, indptr, cols, vals):
        """Insert rows in CSR layout (values already in [0, p)); report independence per row."""
        cdef const int64_t[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
        cdef const int64_t[:] cc = np.ascontiguousarray(cols, dtype=np.int64)
        cdef const int64_t[:] vv = np.ascontiguousarray(vals, dtype=np.int64)
        cdef Py_ssize_t r, i, nrows = ip.shape[0] - 1
        cdef int64_t c
        out = np.zeros(max(nrows, 0), dtype=bool)
        for r in range(nrows):
            for i in range(ip[r], ip[r + 1]):
                c = cc[i]
                if c < 0 or c >= self.ncols:
                    self._clear()
                    raise IndexError(f"column {c} out of range {self.ncols}")
                self._scatter(<int32_t>c, vv[i] % self.p)
            out[r] = self._insert_loaded()
        return [bool(x) for x in out]

    def add_rows_csr(self, indptr, cols, vals):
        """Insert rows in CSR layout; returns how many were independent."""
        return sum(self.independent_mask_csr(indptr, cols, vals))

    def pivot_row(self, int32_t col):
        cdef int32_t k = self.piv_of_col[col]
        if k < 0:
            raise KeyError(col)
        return {self.rcols[k][i]: self.rvals[k][i] for i in range(self.rcols[k].size())}


cdef int64_t _lookup(vector[int32_t]& cols, vector[int64_t]& vals, int32_t c):
    cdef Py_ssize_t lo = 0, hi = cols.size(), mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cols[mid] < c:
            lo = mid + 1
        else:
            hi = mid
    if lo < <Py_ssize_t>cols.size() and cols[lo] == c:
        return vals[lo]
    return 0


cdef extern from "<algorithm>" namespace "std" nogil:
    void std_sort "std::sort"[Iter](Iter first, Iter last)


cdef void _sort_i32(vector[int32_t]& v):
    std_sort(v.begin(), v.end())
