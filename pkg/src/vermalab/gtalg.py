"""Diagonal operator calculus on the fixed-point basis.

Quadratic Casimirs are assembled from matrix-unit products and must come
out diagonal; their closed-form eigenvalues, the determinant-bundle
weights and the tautological Chern weights are pure functions of the
pattern.  Everything here is checked, not assumed: assembly vs closed
form, diagonality, h-divisibility and joint-spectrum separation are all
exact computations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .field import FieldElem, VermalabError
from .patterns import DegreeVector, Pattern, gt_pattern
from .ring import PolyRing
from .verma import (
    GradedOperator,
    VermaContext,
    lazy_cartan,
    lazy_eij,
    lazy_scalar,
    operator_sum,
)


class DiagonalOperator:
    """Eigenvalue table of an operator diagonal on one weight space."""

    __slots__ = ("label", "degree", "eigenvalues")

    def __init__(self, label: str, degree: DegreeVector, eigenvalues: dict[Pattern, FieldElem]):
        self.label = label
        self.degree = tuple(degree)
        self.eigenvalues = eigenvalues

    def value(self, p: Pattern) -> FieldElem:
        return self.eigenvalues[p]


class JointSpectrum:
    __slots__ = ("degree", "labels", "table")

    def __init__(self, degree: DegreeVector, labels: list[str], table: dict[Pattern, tuple[FieldElem, ...]]):
        self.degree = tuple(degree)
        self.labels = list(labels)
        self.table = table

    def separated_pairs(self) -> list[tuple[Pattern, Pattern, bool]]:
        pats = sorted(self.table, key=lambda p: p.flat)
        out = []
        for a, b in itertools.combinations(pats, 2):
            distinct = any(
                not (x - y).is_zero() for x, y in zip(self.table[a], self.table[b])
            )
            out.append((a, b, distinct))
        return out

    def is_separated(self) -> bool:
        return all(ok for _, _, ok in self.separated_pairs())


# -- assembled operators ----------------------------------------------------


def lazy_casimir(ctx: VermaContext, k: int) -> GradedOperator:
    """Sum of E_ij E_ji over ordered pairs (i, j) in [k]^2, lex order."""
    terms = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            terms.append(lazy_eij(ctx, i, j).compose(lazy_eij(ctx, j, i)))
    op = operator_sum(terms)
    op.label = f"Cas{k}"
    return op


def lazy_tilde_casimir(ctx: VermaContext, k: int) -> GradedOperator:
    """Cas_k + (2-k) sum E_jj - sum (x_j/h)(x_j/h - 1) + k(k-1)(k-2)/3."""
    op = lazy_casimir(ctx, k)
    cartans = operator_sum([lazy_cartan(ctx, j) for j in range(1, k + 1)])
    op = op.add(cartans.scale(FieldElem.from_rational(ctx.ring, 2 - k)))
    shift_val = FieldElem.zero(ctx.ring)
    for j in range(1, k + 1):
        u = ctx.hinv * ctx.x[j]
        shift_val = shift_val + u * (u - 1)
    const = FieldElem.from_rational(ctx.ring, Fraction(k * (k - 1) * (k - 2), 3))
    op = op.add(lazy_scalar(ctx, const - shift_val))
    op.label = f"tildeCas{k}"
    return op


def op_casimir(n: int, k: int, window, ring: PolyRing | None = None) -> GradedOperator:
    if not 1 <= k <= n:
        raise VermalabError(f"casimir index {k} out of range")
    ctx = VermaContext.get(n, ring)
    return lazy_casimir(ctx, k).snapshot(window)


def op_tilde_casimir(n: int, k: int, window, ring: PolyRing | None = None) -> GradedOperator:
    if not 1 <= k <= n:
        raise VermalabError(f"casimir index {k} out of range")
    ctx = VermaContext.get(n, ring)
    return lazy_tilde_casimir(ctx, k).snapshot(window)


# -- closed-form eigenvalues ----------------------------------------------


def eig_casimir(p: Pattern, k: int, ring: PolyRing | None = None) -> FieldElem:
    """sum_j lam_kj (lam_kj + k - 2j + 1) over the pattern's row k."""
    gt = gt_pattern(p, ring)
    total = None
    for j in range(1, k + 1):
        lam = gt.value(k, j)
        term = lam * (lam + (k - 2 * j + 1))
        total = term if total is None else total + term
    return total


def eig_tilde_casimir(p: Pattern, k: int, ring: PolyRing | None = None) -> FieldElem:
    """sum_j 2 (1 - d_kj) x_j / h + d_kj (d_kj - 1)."""
    ctx = VermaContext.get(p.n, ring)
    total = ctx.zero
    for j in range(1, k + 1):
        dkj = p.entry(k, j)
        total = total + ctx.hinv * ctx.x[j] * (2 * (1 - dkj)) + dkj * (dkj - 1)
    return total


def eig_det_bundle(p: Pattern, k: int, ring: PolyRing | None = None) -> FieldElem:
    """sum_j (1 - d_kj) x_j + d_kj (d_kj - 1) h / 2."""
    if not 1 <= k <= p.n - 1:
        raise VermalabError(f"determinant bundle index {k} out of range")
    ctx = VermaContext.get(p.n, ring)
    total = ctx.zero
    for j in range(1, k + 1):
        dkj = p.entry(k, j)
        total = total + ctx.x[j] * (1 - dkj) + ctx.h * Fraction(dkj * (dkj - 1), 2)
    return total


def _esym(values: list[FieldElem], j: int, ring) -> FieldElem:
    total = FieldElem.zero(ring)
    for combo in itertools.combinations(values, j):
        prod = FieldElem.one(ring)
        for v in combo:
            prod = prod * v
        total = total + prod
    return total


def chern_weights(p: Pattern, i: int, ring: PolyRing | None = None, at_zero: bool = True) -> list[FieldElem]:
    """Equivariant weights of the rank-i tautological fiber over the point
    0 (deviations included) or infinity (bare -x weights)."""
    ctx = VermaContext.get(p.n, ring)
    out = []
    for j in range(1, i + 1):
        w = -ctx.x[j]
        if at_zero:
            w = w + ctx.h * p.entry(i, j)
        out.append(w)
    return out


def eig_chern(p: Pattern, i: int, j: int, part: str, ring: PolyRing | None = None) -> FieldElem:
    """Diagonal or Kunneth component of the j-th Chern class of the rank-i
    tautological bundle: (e0 + einf)/2 resp. (einf - e0) / (2h)."""
    if not 1 <= j <= i <= p.n - 1:
        raise VermalabError("chern indices out of range")
    ctx = VermaContext.get(p.n, ring)
    e_inf = _esym(chern_weights(p, i, ring, at_zero=False), j, ctx.ring)
    e_zero = _esym(chern_weights(p, i, ring, at_zero=True), j, ctx.ring)
    if part == "diag":
        return (e_inf + e_zero) / 2
    if part == "kunneth":
        return ctx.hinv * (e_inf - e_zero) / 2
    raise VermalabError(f"unknown chern part: {part}")


def chern_h_divisible(p: Pattern, i: int, j: int, ring: PolyRing | None = None) -> bool:
    """einf - e0 must vanish at h = 0, i.e. be divisible by h."""
    ctx = VermaContext.get(p.n, ring)
    e_inf = _esym(chern_weights(p, i, ring, at_zero=False), j, ctx.ring)
    e_zero = _esym(chern_weights(p, i, ring, at_zero=True), j, ctx.ring)
    diff = e_inf - e_zero
    return diff.substitute({"h": 0}).is_zero()


# -- verification helpers -----------------------------------------------------


def casimir_diagonality_defects(n: int, k: int, d: DegreeVector, ring: PolyRing | None = None, corrected: bool = False):
    """Compare the assembled (corrected) Casimir block on V_d with the
    closed-form diagonal; returns (offdiag_ok, eigen_ok, witness)."""
    ctx = VermaContext.get(n, ring)
    op = lazy_tilde_casimir(ctx, k) if corrected else lazy_casimir(ctx, k)
    block = op.block(tuple(d))
    basis = ctx.basis(tuple(d))
    eig = eig_tilde_casimir if corrected else eig_casimir
    offdiag_ok = True
    eigen_ok = True
    witness = None
    for (r, c), v in sorted(block.entries.items()):
        if r != c and not v.is_zero():
            offdiag_ok = False
            witness = f"offdiag ({r},{c}) = {v.text()}"
            break
    for idx, p in enumerate(basis):
        got = block.get(idx, idx)
        want = eig(p, k, ring)
        if not (got - want).is_zero():
            eigen_ok = False
            witness = witness or f"pattern {p.text()}: {got.text()} != {want.text()}"
            break
    return offdiag_ok, eigen_ok, witness


def joint_spectrum(n: int, d: DegreeVector, generators: str, ring: PolyRing | None = None) -> JointSpectrum:
    """Eigenvalue tuples per pattern for one of the named generator sets.

    ``tildeCas``: corrected Casimirs, k = 2..n-1.
    ``detBundles``: determinant classes with k >= 2, d_k != 0 != d_{k-1}.
    ``chern``: all Kunneth and diagonal Chern components.
    """
    ctx = VermaContext.get(n, ring)
    basis = ctx.basis(tuple(d))
    labels: list[str] = []
    funcs = []
    if generators == "tildeCas":
        for k in range(2, n):
            labels.append(f"tildeCas{k}")
            funcs.append(lambda p, k=k: eig_tilde_casimir(p, k, ring))
    elif generators == "detBundles":
        for k in range(2, n):
            if d[k - 1] != 0 and d[k - 2] != 0:
                labels.append(f"c1(D{k})")
                funcs.append(lambda p, k=k: eig_det_bundle(p, k, ring))
    elif generators == "detBundlesAll":
        for k in range(1, n):
            labels.append(f"c1(D{k})")
            funcs.append(lambda p, k=k: eig_det_bundle(p, k, ring))
    elif generators == "chern":
        for i in range(1, n):
            for j in range(1, i + 1):
                for part in ("diag", "kunneth"):
                    labels.append(f"c{j}(W{i})[{part}]")
                    funcs.append(lambda p, i=i, j=j, part=part: eig_chern(p, i, j, part, ring))
    else:
        raise VermalabError(f"unknown generator set: {generators}")
    table = {p: tuple(f(p) for f in funcs) for p in basis}
    return JointSpectrum(tuple(d), labels, table)


def check_spectrum_separation(n: int, d: DegreeVector, generators: str, ring: PolyRing | None = None):
    """(vacuous, separated, witness_pair) for the named generator set."""
    spec = joint_spectrum(n, d, generators, ring)
    if len(spec.table) <= 1 or not spec.labels:
        return True, True, None
    for a, b, ok in spec.separated_pairs():
        if not ok:
            return False, False, (a, b)
    return False, True, None
