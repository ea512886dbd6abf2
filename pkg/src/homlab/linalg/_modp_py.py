"""Pure-Python sparse reduced echelon form over F_p.

Fallback for the compiled ``_modp`` extension; the two expose the same
``ModpEchelon`` API and must produce identical results.

Pivot rows are kept fully reduced: a pivot row is 1 at its own pivot
column and 0 at every other pivot column.  Reducing an incoming row then
needs a single pass over the pivot columns it touches.
"""


class ModpEchelon:
    backend = "python"

    def __init__(self, ncols: int, p: int):
        if p >= 2**31 or p < 3:
            raise ValueError(f"prime {p} outside supported range [3, 2^31)")
        self.ncols = ncols
        self.p = p
        self._piv = {}      # pivot column -> pivot row (dict col -> val)
        self._occ = {}      # non-pivot column -> pivot columns whose row may contain it (append-only)
        self._order = []    # pivot columns in creation order

    @property
    def rank(self) -> int:
        return len(self._order)

    def pivot_columns(self) -> list:
        return list(self._order)

    def copy(self) -> "ModpEchelon":
        out = ModpEchelon.__new__(ModpEchelon)
        out.ncols, out.p = self.ncols, self.p
        out._piv = {c: dict(r) for c, r in self._piv.items()}
        out._occ = {c: list(s) for c, s in self._occ.items()}
        out._order = list(self._order)
        return out

    def _scatter(self, cols, vals) -> dict:
        p = self.p
        acc = {}
        for c, v in zip(cols, vals):
            c = int(c)
            if not 0 <= c < self.ncols:
                raise IndexError(f"column {c} out of range {self.ncols}")
            acc[c] = (acc.get(c, 0) + int(v)) % p
        return acc

    def _reduce_acc(self, acc: dict) -> dict:
        p = self.p
        piv = self._piv
        for c in [c for c in acc if c in piv]:
            f = acc.get(c, 0)
            if not f:
                continue
            for k, val in piv[c].items():
                nv = (acc.get(k, 0) - f * val) % p
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
        return {c: v for c, v in acc.items() if v}

    def reduce(self, cols, vals) -> dict:
        """Residual of the row after reduction; empty iff the row is in the span."""
        return self._reduce_acc(self._scatter(cols, vals))

    def is_member(self, cols, vals) -> bool:
        return not self.reduce(cols, vals)

    def add_row(self, cols, vals) -> bool:
        """Insert a row; returns True iff it was independent of the current span."""
        res = self.reduce(cols, vals)
        if not res:
            return False
        p = self.p
        occ = self._occ
        pc = min(res, key=lambda c: (len(occ.get(c, ())), c))
        inv = pow(res[pc], p - 2, p)
        row = {c: (v * inv) % p for c, v in res.items()}
        for rc in occ.pop(pc, []):
            prow = self._piv[rc]
            f = prow.get(pc)
            if not f:
                continue
            for c, v in row.items():
                nv = (prow.get(c, 0) - f * v) % p
                if nv:
                    if c not in prow:
                        occ.setdefault(c, []).append(rc)
                    prow[c] = nv
                else:
                    prow.pop(c, None)
        for c in row:
            if c != pc:
                occ.setdefault(c, []).append(pc)
        self._piv[pc] = row
        self._order.append(pc)
        return True

    def add_rows_csr(self, indptr, cols, vals) -> int:
        """Insert rows given in CSR layout; returns how many were independent."""
        n = 0
        for i in range(len(indptr) - 1):
            a, b = int(indptr[i]), int(indptr[i + 1])
            if self.add_row(cols[a:b], vals[a:b]):
                n += 1
        return n

    def independent_mask_csr(self, indptr, cols, vals) -> list:
        """Like add_rows_csr but report which rows were independent."""
        out = []
        for i in range(len(indptr) - 1):
            a, b = int(indptr[i]), int(indptr[i + 1])
            out.append(self.add_row(cols[a:b], vals[a:b]))
        return out

    def pivot_row(self, col: int) -> dict:
        return dict(self._piv[col])
