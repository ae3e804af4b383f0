"""Exact linear algebra over Z/p^m (and F_p as the m=1 case).

The central object is a row accumulator keeping a triangular, saturated
generating set of the row space of a (possibly huge) integer matrix modulo
p^m.  From it we read off exact solution counts of homogeneous systems: for
M with n columns, #ker(M) = (p^m)^n / #rowspace(M), because the dot-product
pairing on (Z/p^m)^n is perfect.

numpy int64 arrays are used as exact integer containers; all arithmetic is
plain integer arithmetic reduced mod p^m.
"""

from __future__ import annotations

import numpy as np


def _val(x: int, p: int, m: int) -> int:
    if x == 0:
        return m
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class RowSpace:
    """Triangular saturated basis of a row space over Z/p^m."""

    def __init__(self, p: int, m: int, ncols: int):
        self.p = p
        self.m = m
        self.q = p ** m
        self.ncols = ncols
        self.pivot_row: dict[int, np.ndarray] = {}   # col -> normalized row
        self.pivot_val: dict[int, int] = {}          # col -> valuation of pivot

    # -- single-row insertion (exact) -----------------------------------
    def _insert(self, row: np.ndarray) -> None:
        p, m, q = self.p, self.m, self.q
        queue = [row % q]
        while queue:
            r = queue.pop()
            while True:
                nz = np.nonzero(r)[0]
                if len(nz) == 0:
                    break
                c = int(nz[0])
                v = _val(int(r[c]), p, m)
                if c not in self.pivot_row:
                    unit = int(r[c]) // (p ** v)
                    r = (r * pow(unit, -1, q)) % q
                    self.pivot_row[c] = r
                    self.pivot_val[c] = v
                    if v > 0:
                        queue.append((r * (p ** (m - v))) % q)
                    break
                vb = self.pivot_val[c]
                if vb <= v:
                    factor = int(r[c]) // (p ** vb)
                    r = (r - factor * self.pivot_row[c]) % q
                else:
                    old = self.pivot_row[c]
                    unit = int(r[c]) // (p ** v)
                    r = (r * pow(unit, -1, q)) % q
                    self.pivot_row[c] = r
                    self.pivot_val[c] = v
                    if v > 0:
                        queue.append((r * (p ** (m - v))) % q)
                    queue.append(old)
                    break

    def _reduce_block(self, rows: np.ndarray) -> np.ndarray:
        """One vectorized reduction sweep of many rows against the basis."""
        q, p = self.q, self.p
        rows = rows % q
        for c in sorted(self.pivot_row):
            v = self.pivot_val[c]
            pv = p ** v
            col = rows[:, c]
            if v == 0:
                mask = col != 0
                factor = col
            else:
                mask = (col % pv == 0) & (col != 0)
                factor = col // pv
            if mask.any():
                rows[mask] = (rows[mask] - np.outer(factor[mask], self.pivot_row[c])) % q
        return rows

    def add_rows(self, rows: np.ndarray) -> None:
        if rows.size == 0:
            return
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.ncols) % self.q
        for _ in range(64):
            rows = self._reduce_block(rows)
            rows = np.unique(rows, axis=0)
            rows = rows[np.any(rows != 0, axis=1)]
            if rows.shape[0] == 0:
                return
            self._insert(rows[0].copy())
            rows = rows[1:]
            if rows.shape[0] == 0:
                return
        # slow path: remaining rows one by one
        for r in rows:
            self._insert(r.copy())

    # -- exact counts ----------------------------------------------------
    def span_log_size(self) -> int:
        """log_p of the number of elements in the row space."""
        return sum(self.m - v for v in self.pivot_val.values())

    def kernel_log_size(self) -> int:
        """log_p #{x : r.x = 0 for all rows r} over Z/p^m."""
        return self.m * self.ncols - self.span_log_size()

    # -- F_p extras (m = 1) ----------------------------------------------
    def rank(self) -> int:
        if self.m != 1:
            raise ValueError("rank is an F_p notion; use span_log_size")
        return len(self.pivot_row)

    def rref_rows(self) -> list[np.ndarray]:
        """Fully reduced rows (entries above pivots cleared); m = 1 only."""
        if self.m != 1:
            raise ValueError("rref_rows requires m == 1")
        p = self.p
        cols = sorted(self.pivot_row)
        rows = {c: self.pivot_row[c].copy() for c in cols}
        for c in reversed(cols):
            for c2 in cols:
                if c2 == c:
                    continue
                f = int(rows[c2][c]) % p
                if f:
                    rows[c2] = (rows[c2] - f * rows[c]) % p
        return [rows[c] for c in cols]

    def nullspace_basis(self) -> list[np.ndarray]:
        """Basis of the solution space of (rows) x = 0 over F_p; m = 1 only."""
        if self.m != 1:
            raise ValueError("nullspace_basis requires m == 1")
        p = self.p
        reduced = self.rref_rows()
        pivots = sorted(self.pivot_row)
        free = [c for c in range(self.ncols) if c not in self.pivot_row]
        basis = []
        for fcol in free:
            vec = np.zeros(self.ncols, dtype=np.int64)
            vec[fcol] = 1
            for c, r in zip(pivots, reduced):
                vec[c] = (-int(r[fcol])) % p
            basis.append(vec)
        return basis


def fp_rank(rows: np.ndarray, p: int, ncols: int) -> int:
    rs = RowSpace(p, 1, ncols)
    rs.add_rows(rows)
    return rs.rank()


def fp_nullspace(rows: np.ndarray, p: int, ncols: int) -> list[np.ndarray]:
    rs = RowSpace(p, 1, ncols)
    rs.add_rows(rows)
    return rs.nullspace_basis()
