"""The local module V = (+)_d V_d in its fixed-point basis.

Diagonal operators act by the scalar x_i/h + d_{i-1} - d_i + i - 1 on
V_d.  The raising operator for row i moves one entry of pattern row i up
by 1 with coefficient

    -h^-1 prod_{k<=i, k!=j} (x_j - x_k + (d_ik - d_ij) h)^-1
          prod_{k<=i-1}     (x_j - x_k + (d_{i-1,k} - d_ij) h)

and the lowering operator moves it down by 1 with coefficient

    h^-1 prod_{k<=i, k!=j} (x_k - x_j + (d_ij - d_ik) h)^-1
         prod_{k<=i+1}     (x_k - x_j + (d_ij - d_{i+1,k}) h)

(all values taken in the source pattern, empty products equal 1, row n
reads as zero).  Every other matrix coefficient vanishes; transitions
whose target violates the pattern constraints carry no entry.

General off-diagonal operators are seeded from these by the commutator
ladder E[a][b] = [E[a][b+1-step], ...]; see ``eij_block``.
"""

from __future__ import annotations

from fractions import Fraction

from .field import FieldElem, VermalabError
from .linalg import SparseMatrix
from .patterns import (
    DegreeVector,
    Pattern,
    degree_valid,
    degree_vectors_upto,
    enumerate_patterns,
    shift_degree,
)
from .ring import MultiPoly, PolyRing, classical_ring


class WindowError(VermalabError):
    """Raised when a block outside the materialized window is accessed."""


class WeightSpace:
    __slots__ = ("n", "degree", "basis")

    def __init__(self, n: int, degree: DegreeVector, basis: tuple[Pattern, ...]):
        self.n = n
        self.degree = degree
        self.basis = basis

    @property
    def dim(self) -> int:
        return len(self.basis)


def root_shift(n: int, a: int, b: int) -> tuple[int, ...]:
    """Degree shift of E[a][b]: lowering for a < b, raising for a > b."""
    shift = [0] * (n - 1)
    if a < b:
        for i in range(a, b):
            shift[i - 1] -= 1
    elif a > b:
        for i in range(b, a):
            shift[i - 1] += 1
    return tuple(shift)


class VermaContext:
    """Caches bases and operator blocks for one rank and coefficient ring."""

    _instances: dict[tuple[int, PolyRing], "VermaContext"] = {}

    def __init__(self, n: int, ring: PolyRing | None = None):
        self.n = n
        self.ring = ring or classical_ring(n)
        self._basis: dict[DegreeVector, tuple[Pattern, ...]] = {}
        self._index: dict[DegreeVector, dict[Pattern, int]] = {}
        self._blocks: dict[tuple, SparseMatrix] = {}
        self._linform_polys: dict[tuple[int, int, int], "MultiPoly"] = {}
        self.hpoly = MultiPoly.var(self.ring, "h")
        self.h = FieldElem.var(self.ring, "h")
        self.hinv = FieldElem.from_factors(self.ring, 1, [], [self.hpoly])
        self.x = {j: FieldElem.var(self.ring, f"x{j}") for j in range(1, n + 1)}
        self.one = FieldElem.one(self.ring)
        self.zero = FieldElem.zero(self.ring)

    @classmethod
    def get(cls, n: int, ring: PolyRing | None = None) -> "VermaContext":
        ring = ring or classical_ring(n)
        key = (n, ring)
        inst = cls._instances.get(key)
        if inst is None:
            inst = cls(n, ring)
            cls._instances[key] = inst
        return inst

    # -- bases ---------------------------------------------------------

    def basis(self, d: DegreeVector) -> tuple[Pattern, ...]:
        d = tuple(d)
        got = self._basis.get(d)
        if got is None:
            got = tuple(enumerate_patterns(self.n, d)) if degree_valid(d) else ()
            self._basis[d] = got
        return got

    def dim(self, d: DegreeVector) -> int:
        return len(self.basis(d))

    def index(self, d: DegreeVector) -> dict[Pattern, int]:
        d = tuple(d)
        got = self._index.get(d)
        if got is None:
            got = {p: i for i, p in enumerate(self.basis(d))}
            self._index[d] = got
        return got

    def weight_space(self, d: DegreeVector) -> WeightSpace:
        return WeightSpace(self.n, tuple(d), self.basis(d))

    # -- coefficient building blocks -------------------------------------

    def linform_poly(self, j: int, k: int, c: int) -> "MultiPoly":
        """x_j - x_k + c h as a raw polynomial, cached (j = k gives c h)."""
        key = (j, k, c)
        got = self._linform_polys.get(key)
        if got is None:
            if j == k:
                got = self.hpoly.scale(c)
            else:
                got = MultiPoly.var(self.ring, f"x{j}") - MultiPoly.var(self.ring, f"x{k}") + self.hpoly.scale(c)
            self._linform_polys[key] = got
        return got

    def linform(self, j: int, k: int, c: int) -> FieldElem:
        """x_j - x_k + c h as a field element."""
        return FieldElem.from_poly(self.linform_poly(j, k, c))

    def cartan_scalar(self, i: int, d: DegreeVector) -> FieldElem:
        dprev = d[i - 2] if i >= 2 else 0
        dcur = d[i - 1] if i <= self.n - 1 else 0
        num = MultiPoly.var(self.ring, f"x{i}") + self.hpoly.scale(dprev - dcur + i - 1)
        return FieldElem.from_factors(self.ring, 1, [num], [self.hpoly])

    def e_coefficient(self, p: Pattern, i: int, j: int) -> FieldElem:
        """Coefficient of the row-i raise at column j, from source p."""
        dij = p.entry(i, j)
        den = [self.hpoly]
        num = []
        for k in range(1, i + 1):
            if k != j:
                den.append(self.linform_poly(j, k, p.entry(i, k) - dij))
        for k in range(1, i):
            num.append(self.linform_poly(j, k, p.entry(i - 1, k) - dij))
        return FieldElem.from_factors(self.ring, -1, num, den)

    def f_coefficient(self, p: Pattern, i: int, j: int) -> FieldElem:
        """Coefficient of the row-i lower at column j, from source p."""
        dij = p.entry(i, j)
        den = [self.hpoly]
        num = []
        for k in range(1, i + 1):
            if k != j:
                den.append(self.linform_poly(k, j, dij - p.entry(i, k)))
        for k in range(1, i + 2):
            num.append(self.linform_poly(k, j, dij - p.entry(i + 1, k)))
        return FieldElem.from_factors(self.ring, 1, num, den)

    # -- primitive blocks ---------------------------------------------------

    def e_block(self, i: int, d: DegreeVector) -> SparseMatrix:
        d = tuple(d)
        key = ("e", i, d)
        got = self._blocks.get(key)
        if got is not None:
            return got
        target_d = shift_degree(d, root_shift(self.n, i + 1, i))
        src = self.basis(d)
        tgt_index = self.index(target_d)
        entries = {}
        for col, p in enumerate(src):
            for j in range(1, i + 1):
                q = p.bump(i, j, +1)
                if q is None:
                    continue
                row = tgt_index.get(q)
                if row is None:
                    continue
                coeff = self.e_coefficient(p, i, j)
                if not coeff.is_zero():
                    entries[(row, col)] = coeff
        got = SparseMatrix(self.dim(target_d), len(src), self.ring, entries)
        self._blocks[key] = got
        return got

    def f_block(self, i: int, d: DegreeVector) -> SparseMatrix:
        d = tuple(d)
        key = ("f", i, d)
        got = self._blocks.get(key)
        if got is not None:
            return got
        target_d = shift_degree(d, root_shift(self.n, i, i + 1))
        src = self.basis(d)
        tgt_index = self.index(target_d)
        entries = {}
        for col, p in enumerate(src):
            for j in range(1, i + 1):
                q = p.bump(i, j, -1)
                if q is None:
                    continue
                row = tgt_index.get(q)
                if row is None:
                    continue
                coeff = self.f_coefficient(p, i, j)
                if not coeff.is_zero():
                    entries[(row, col)] = coeff
        got = SparseMatrix(self.dim(target_d), len(src), self.ring, entries)
        self._blocks[key] = got
        return got

    def diagonal_block(self, d: DegreeVector, scalar: FieldElem) -> SparseMatrix:
        dim = self.dim(d)
        if scalar.is_zero():
            return SparseMatrix(dim, dim, self.ring)
        return SparseMatrix(dim, dim, self.ring, {(i, i): scalar for i in range(dim)})

    # -- derived blocks ----------------------------------------------------

    def eij_block(self, a: int, b: int, d: DegreeVector) -> SparseMatrix:
        """Block of E[a][b] on V_d, built by the commutator ladder."""
        d = tuple(d)
        if a == b:
            return self.diagonal_block(d, self.cartan_scalar(a, d))
        key = ("E", a, b, d)
        got = self._blocks.get(key)
        if got is not None:
            return got
        if a < b:
            if b == a + 1:
                got = self.f_block(a, d)
            else:
                got = self._commutator_block((a, b - 1), (b - 1, b), d)
        else:
            if a == b + 1:
                got = self.e_block(b, d)
            else:
                got = self._commutator_block((a, a - 1), (a - 1, b), d)
        self._blocks[key] = got
        return got

    def _commutator_block(self, ab: tuple[int, int], cd: tuple[int, int], d: DegreeVector) -> SparseMatrix:
        n = self.n
        s_ab = root_shift(n, *ab)
        s_cd = root_shift(n, *cd)
        first = self.eij_block(*ab, shift_degree(d, s_cd)) @ self.eij_block(*cd, d)
        second = self.eij_block(*cd, shift_degree(d, s_ab)) @ self.eij_block(*ab, d)
        return first - second


class GradedOperator:
    """A degree-indexed family of blocks V_d -> V_{d+shift}.

    ``blocks`` holds the materialized window; reading outside it raises
    WindowError unless the operator carries a builder (internal lazy
    operators do, spec-surface snapshots do not).  Blocks toward invalid
    degrees exist with zero rows, so compositions through an empty space
    are well defined.
    """

    __slots__ = ("space", "shift", "blocks", "builder", "label")

    def __init__(self, space, shift, blocks=None, builder=None, label=""):
        self.space = space
        self.shift = tuple(shift)
        self.blocks: dict[DegreeVector, SparseMatrix] = dict(blocks or {})
        self.builder = builder
        self.label = label

    def block(self, d: DegreeVector) -> SparseMatrix:
        d = tuple(d)
        got = self.blocks.get(d)
        if got is None:
            if self.builder is None:
                raise WindowError(
                    f"block at degree {d} is outside the materialized window"
                    + (f" of {self.label}" if self.label else "")
                )
            got = self.builder(d)
            self.blocks[d] = got
        return got

    def window(self) -> frozenset[DegreeVector]:
        return frozenset(self.blocks)

    def materialize(self, degrees) -> "GradedOperator":
        for d in degrees:
            self.block(d)
        return self

    def snapshot(self, degrees) -> "GradedOperator":
        """A strict copy materialized exactly on ``degrees``."""
        blocks = {tuple(d): self.block(d) for d in degrees}
        return GradedOperator(self.space, self.shift, blocks, None, self.label)

    # -- operator algebra -----------------------------------------------

    def compose(self, other: "GradedOperator") -> "GradedOperator":
        """self after other."""
        if self.space is not other.space:
            raise VermalabError("operators live on different spaces")
        shift = tuple(a + b for a, b in zip(self.shift, other.shift))

        def build(d):
            mid = shift_degree(d, other.shift)
            return self.block(mid) @ other.block(d)

        return GradedOperator(
            self.space, shift, None, build, f"({self.label}*{other.label})"
        )

    def add(self, other: "GradedOperator") -> "GradedOperator":
        if self.shift != other.shift:
            raise VermalabError("adding operators of different shifts")

        def build(d):
            return self.block(d) + other.block(d)

        return GradedOperator(
            self.space, self.shift, None, build, f"({self.label}+{other.label})"
        )

    def sub(self, other: "GradedOperator") -> "GradedOperator":
        if self.shift != other.shift:
            raise VermalabError("subtracting operators of different shifts")

        def build(d):
            return self.block(d) - other.block(d)

        return GradedOperator(
            self.space, self.shift, None, build, f"({self.label}-{other.label})"
        )

    def scale(self, c: FieldElem) -> "GradedOperator":
        def build(d):
            return self.block(d).scale(c)

        return GradedOperator(self.space, self.shift, None, build, self.label)

    def commutator(self, other: "GradedOperator") -> "GradedOperator":
        return self.compose(other).sub(other.compose(self))

    def is_zero_on(self, degrees) -> bool:
        return all(self.block(d).is_zero() for d in degrees)

    def to_json_dict(self) -> dict:
        blocks = []
        for d in sorted(self.blocks):
            m = self.blocks[d]
            blocks.append(
                {
                    "degree": list(d),
                    "rows": m.rows,
                    "cols": m.cols,
                    "entries": [[r, c, v.text()] for r, c, v in m.sorted_entries()],
                }
            )
        return {"shift": list(self.shift), "blocks": blocks}


# -- spec-surface factories ---------------------------------------------------


def op_cartan(n: int, i: int, window, ring: PolyRing | None = None) -> GradedOperator:
    """Diagonal operator with scalar x_i/h + d_{i-1} - d_i + i - 1 on V_d."""
    if not 1 <= i <= n:
        raise VermalabError(f"cartan index {i} out of range")
    ctx = VermaContext.get(n, ring)
    op = lazy_cartan(ctx, i)
    return op.snapshot(window)


def op_e(n: int, i: int, window, ring: PolyRing | None = None) -> GradedOperator:
    if not 1 <= i <= n - 1:
        raise VermalabError(f"raise index {i} out of range")
    ctx = VermaContext.get(n, ring)
    return lazy_eij(ctx, i + 1, i).snapshot(window)


def op_f(n: int, i: int, window, ring: PolyRing | None = None) -> GradedOperator:
    if not 1 <= i <= n - 1:
        raise VermalabError(f"lower index {i} out of range")
    ctx = VermaContext.get(n, ring)
    return lazy_eij(ctx, i, i + 1).snapshot(window)


def op_eij(n: int, i: int, j: int, window, ring: PolyRing | None = None) -> GradedOperator:
    if not (1 <= i <= n and 1 <= j <= n):
        raise VermalabError("matrix unit indices out of range")
    ctx = VermaContext.get(n, ring)
    return lazy_eij(ctx, i, j).snapshot(window)


def fixed_point_to_eigenbasis_scale(n: int, d: DegreeVector, ring: PolyRing | None = None) -> FieldElem:
    """The documented conversion scalar (-h)^(-|d|) between fixed-point
    classes and the normalized eigenbasis vectors of degree d.

    It is exposed as a constant and never applied implicitly anywhere in
    the package: no silent basis change happens behind the matrices.
    """
    ctx = VermaContext.get(n, ring)
    size = sum(d)
    scale = ctx.one
    for _ in range(size):
        scale = scale * (-ctx.hinv)
    return scale


def lazy_cartan(ctx: VermaContext, i: int) -> GradedOperator:
    def build(d):
        return ctx.diagonal_block(d, ctx.cartan_scalar(i, d))

    return GradedOperator(ctx, (0,) * (ctx.n - 1), None, build, f"E{i}{i}")


def lazy_eij(ctx: VermaContext, a: int, b: int) -> GradedOperator:
    def build(d):
        return ctx.eij_block(a, b, d)

    return GradedOperator(ctx, root_shift(ctx.n, a, b), None, build, f"E{a}{b}")


def lazy_scalar(ctx: VermaContext, value: FieldElem) -> GradedOperator:
    def build(d):
        return ctx.diagonal_block(d, value)

    return GradedOperator(ctx, (0,) * (ctx.n - 1), None, build, "scalar")


def operator_sum(ops: list[GradedOperator]) -> GradedOperator:
    acc = ops[0]
    for op in ops[1:]:
        acc = acc.add(op)
    return acc


# -- relation verification -----------------------------------------------------


def gl_relation_defect(
    ctx: VermaContext, ab: tuple[int, int], cd: tuple[int, int], d: DegreeVector
) -> SparseMatrix:
    """[E_ab, E_cd] - delta_bc E_ad + delta_da E_cb on V_d (zero iff the
    relation holds there)."""
    a, b = ab
    c, dd = cd
    n = ctx.n
    s_ab = root_shift(n, a, b)
    s_cd = root_shift(n, c, dd)
    first = ctx.eij_block(a, b, shift_degree(d, s_cd)) @ ctx.eij_block(c, dd, d)
    second = ctx.eij_block(c, dd, shift_degree(d, s_ab)) @ ctx.eij_block(a, b, d)
    out = first - second
    if b == c:
        out = out - ctx.eij_block(a, dd, d)
    if dd == a:
        out = out + ctx.eij_block(c, b, d)
    return out


def check_gl_relations(n: int, dmax: int, ring: PolyRing | None = None):
    """Exact check of [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb for all
    ordered index pairs, on every block of total degree <= dmax.

    Returns a list of (label, anchor, ok, witness_text) tuples.
    """
    ctx = VermaContext.get(n, ring)
    degrees = degree_vectors_upto(n, dmax)
    units = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    results = []
    for ab in units:
        for cd in units:
            if cd < ab:
                continue
            ok = True
            witness = None
            for d in degrees:
                defect = gl_relation_defect(ctx, ab, cd, d)
                if not defect.is_zero():
                    ok = False
                    r, c, v = defect.sorted_entries()[0]
                    witness = f"degree {list(d)} entry ({r},{c}): {v.text()}"
                    break
            label = f"[E{ab[0]}{ab[1]},E{cd[0]}{cd[1]}]"
            anchor = "gl(n) structure constants on every weight block"
            results.append((label, anchor, ok, witness))
    return results
