"""Sparse matrices over the rational-function field and exact solving."""

from __future__ import annotations

from typing import Iterable

from .field import FieldElem, VermalabError, _flipped
from .ring import MultiPoly, PolyRing, poly_lcm


class SparseMatrix:
    """Immutable-by-convention sparse matrix; no explicit zeros stored."""

    __slots__ = ("rows", "cols", "entries", "ring")

    def __init__(self, rows: int, cols: int, ring: PolyRing, entries=None):
        self.rows = rows
        self.cols = cols
        self.ring = ring
        self.entries: dict[tuple[int, int], FieldElem] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise VermalabError(f"entry ({r},{c}) out of range {rows}x{cols}")
                if not v.is_zero():
                    self.entries[(r, c)] = v

    def get(self, r: int, c: int) -> FieldElem:
        v = self.entries.get((r, c))
        return v if v is not None else FieldElem.zero(self.ring)

    def is_zero(self) -> bool:
        return not self.entries

    def sorted_entries(self) -> list[tuple[int, int, FieldElem]]:
        return [(r, c, self.entries[(r, c)]) for r, c in sorted(self.entries)]

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SparseMatrix(self.rows, self.cols, self.ring, out)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(FieldElem.from_rational(self.ring, -1))

    def scale(self, c: FieldElem) -> "SparseMatrix":
        if c.is_zero():
            return SparseMatrix(self.rows, self.cols, self.ring)
        return SparseMatrix(
            self.rows, self.cols, self.ring, {k: v * c for k, v in self.entries.items()}
        )

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise VermalabError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, FieldElem]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], FieldElem] = {}
        for (r, k), a in self.entries.items():
            hits = by_row.get(k)
            if not hits:
                continue
            for c, b in hits:
                key = (r, c)
                prod = a * b
                s = out.get(key)
                s = prod if s is None else s + prod
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return SparseMatrix(self.rows, other.cols, self.ring, out)

    def apply(self, vec: list[FieldElem]) -> list[FieldElem]:
        if len(vec) != self.cols:
            raise VermalabError("vector length mismatch")
        out = [FieldElem.zero(self.ring) for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            if not vec[c].is_zero():
                out[r] = out[r] + v * vec[c]
        return out

    def _check_shape(self, other: "SparseMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise VermalabError(
                f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and (self - other).is_zero()
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


class LinearSolveResult:
    """Tagged outcome of solve_linear.

    status is one of ``unique``, ``inconsistent``, ``underdetermined``.
    ``solution`` is a particular solution when one exists; ``kernel`` is a
    basis of the nullspace (each vector normalized so its first nonzero
    coordinate is 1) when the system is underdetermined.
    """

    __slots__ = ("status", "solution", "kernel")

    def __init__(self, status, solution=None, kernel=None):
        self.status = status
        self.solution = solution
        self.kernel = kernel


def solve_linear(a: SparseMatrix, rhs: list[FieldElem]) -> LinearSolveResult:
    """Exact Gaussian elimination over the function field.

    Rows are cleared of denominators before the forward pass, which keeps
    entry growth in check; every division is exact field arithmetic, so a
    ``unique`` result satisfies A sol = rhs identically.
    """
    if len(rhs) != a.rows:
        raise VermalabError("rhs length mismatch")
    ring = a.ring
    m = [[a.get(r, c) for c in range(a.cols)] + [rhs[r]] for r in range(a.rows)]
    for row in m:
        den = MultiPoly.const(ring, 1)
        for v in row:
            if not v.is_zero():
                den = poly_lcm(den, v.den)
        if not (den.is_const() and den.const_value() == 1):
            scale = FieldElem(den, MultiPoly.const(ring, 1))
            for i, v in enumerate(row):
                row[i] = v * scale
    ncols = a.cols
    pivots: list[int] = []
    prow = 0
    for pc in range(ncols):
        pr = None
        for r in range(prow, len(m)):
            if not m[r][pc].is_zero():
                pr = r
                break
        if pr is None:
            continue
        if pr != prow:
            m[prow], m[pr] = m[pr], m[prow]
        inv = _flipped(m[prow][pc])
        for r in range(prow + 1, len(m)):
            f = m[r][pc]
            if f.is_zero():
                continue
            factor = f * inv
            for c in range(pc, ncols + 1):
                if not m[prow][c].is_zero():
                    m[r][c] = m[r][c] - factor * m[prow][c]
        pivots.append(pc)
        prow += 1
    for r in range(prow, len(m)):
        if not m[r][ncols].is_zero():
            return LinearSolveResult("inconsistent")
    free = [c for c in range(ncols) if c not in pivots]
    # particular solution with free coordinates set to zero
    sol = [FieldElem.zero(ring) for _ in range(ncols)]
    for i in range(len(pivots) - 1, -1, -1):
        pc = pivots[i]
        s = m[i][ncols]
        for c in range(pc + 1, ncols):
            if not m[i][c].is_zero() and not sol[c].is_zero():
                s = s - m[i][c] * sol[c]
        sol[pc] = s / m[i][pc]
    if not free:
        return LinearSolveResult("unique", solution=sol)
    kernel = []
    for fc in free:
        vec = [FieldElem.zero(ring) for _ in range(ncols)]
        vec[fc] = FieldElem.one(ring)
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            s = FieldElem.zero(ring)
            for c in range(pc + 1, ncols):
                if not m[i][c].is_zero() and not vec[c].is_zero():
                    s = s - m[i][c] * vec[c]
            vec[pc] = s / m[i][pc]
        lead = next(v for v in vec if not v.is_zero())
        inv = _flipped(lead)
        kernel.append([v * inv for v in vec])
    return LinearSolveResult("underdetermined", solution=sol, kernel=kernel)


def vstack(blocks: Iterable[SparseMatrix]) -> SparseMatrix:
    blocks = list(blocks)
    if not blocks:
        raise VermalabError("vstack of nothing")
    cols = blocks[0].cols
    ring = blocks[0].ring
    entries = {}
    off = 0
    for b in blocks:
        if b.cols != cols:
            raise VermalabError("vstack column mismatch")
        for (r, c), v in b.entries.items():
            entries[(off + r, c)] = v
        off += b.rows
    return SparseMatrix(off, cols, ring, entries)
