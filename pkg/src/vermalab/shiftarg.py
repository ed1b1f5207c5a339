"""Deformed commuting family, its flatness data, and numerical transport.

Over the field extended by q2..q(n-1), the corrected Casimirs deform to

    QC_k = tildeCas_k + sum_{i < k < j} c_ikj E_ij E_ji,

    c_ikj = (sum_{l=i+1}^{k} q_l...q_{j-1}) / (1 + sum_{l=i+1}^{j-1} q_l...q_{j-1})

with empty products equal to 1.  At q = 0 every correction vanishes, so
QC_k degenerates to the corrected Casimir exactly.  Commutativity of the
family and both flatness components of the connection

    d + kappa sum_k QC_k dlog q_k

are computed exactly; parallel transport along loops in the q-torus is
the one numerical piece of the package.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .field import FieldElem, VermalabError
from .gtalg import lazy_tilde_casimir
from .patterns import DegreeVector
from .ring import PolyRing, quantum_ring
from .verma import GradedOperator, VermaContext, lazy_eij, operator_sum


class RegularityError(VermalabError):
    def __init__(self, i: int, j: int):
        super().__init__(f"weight vector is not regular: pairing with root ({i},{j}) vanishes")
        self.root = (i, j)


def quantum_context(n: int) -> VermaContext:
    return VermaContext.get(n, quantum_ring(n))


class QCoefficient:
    """Deformation coefficient c_ikj attached to the root pair (i, j)
    straddling k; the value lives in the q-subfield."""

    __slots__ = ("i", "k", "j", "value")

    def __init__(self, n: int, i: int, k: int, j: int, ring: PolyRing | None = None):
        self.i = i
        self.k = k
        self.j = j
        self.value = q_coefficient(n, i, k, j, ring)

    def __repr__(self):
        return f"QCoefficient(i={self.i}, k={self.k}, j={self.j}, {self.value.text()})"


def q_coefficient(n: int, i: int, k: int, j: int, ring: PolyRing | None = None) -> FieldElem:
    """The deformation coefficient c_ikj for i < k < j <= n."""
    if not (1 <= i < k < j <= n):
        raise VermalabError(f"need i < k < j <= n, got ({i},{k},{j})")
    ring = ring or quantum_ring(n)
    from .ring import MultiPoly

    def qprod(l: int) -> MultiPoly:
        # q_l q_{l+1} ... q_{j-1}; empty product is 1; q_n reads as 1
        acc = MultiPoly.const(ring, 1)
        for m in range(l, j):
            if 2 <= m <= n - 1:
                acc = acc * MultiPoly.var(ring, f"q{m}")
        return acc

    num = MultiPoly.zero(ring)
    for l in range(i + 1, k + 1):
        num = num + qprod(l)
    den = MultiPoly.const(ring, 1)
    for l in range(i + 1, j):
        den = den + qprod(l)
    # den = 1 + sum of squarefree q-monomials is irreducible: it is linear
    # in q_{i+1} with coprime coefficient and remainder (both contain 1 or
    # a monomial free of q_{i+1}); keep it as a reduction hint
    return FieldElem(num, den, _canonical=True, dfac=(den,))


def lazy_qc(ctx: VermaContext, k: int) -> GradedOperator:
    """QC_k as a lazy operator over the q-extended field."""
    n = ctx.n
    if n < 3:
        raise VermalabError("no quantum parameters (Picard rank n-2 = 0)")
    if not 2 <= k <= n - 1:
        raise VermalabError(f"QC index must satisfy 2 <= k <= n-1, got {k}")
    terms = [lazy_tilde_casimir(ctx, k)]
    for i in range(1, k):
        for j in range(k + 1, n + 1):
            coeff = q_coefficient(n, i, k, j, ctx.ring)
            terms.append(
                lazy_eij(ctx, i, j).compose(lazy_eij(ctx, j, i)).scale(coeff)
            )
    op = operator_sum(terms)
    op.label = f"QC{k}"
    return op


def op_qc(n: int, k: int, window) -> GradedOperator:
    return lazy_qc(quantum_context(n), k).snapshot(window)


def quadratic_space_element(
    n: int,
    mu: list[FieldElem | int | Fraction],
    h: list[FieldElem | int | Fraction],
    window=None,
    ring: PolyRing | None = None,
) -> GradedOperator:
    """sum over positive roots (i < j) of (h_i - h_j)/(mu_i - mu_j) E_ij E_ji.

    mu must be regular: the pairing with every positive root is nonzero.
    The family with fixed mu commutes and is invariant under scaling mu.
    """
    ring = ring or quantum_ring(n)
    ctx = VermaContext.get(n, ring)

    def coerce(v):
        return v if isinstance(v, FieldElem) else FieldElem.from_rational(ring, v)

    mu = [coerce(v) for v in mu]
    h = [coerce(v) for v in h]
    if len(mu) != n or len(h) != n:
        raise VermalabError("weight vectors must have length n")
    terms = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            dmu = mu[i - 1] - mu[j - 1]
            if dmu.is_zero():
                raise RegularityError(i, j)
            ratio = (h[i - 1] - h[j - 1]) / dmu
            if ratio.is_zero():
                continue
            terms.append(lazy_eij(ctx, i, j).compose(lazy_eij(ctx, j, i)).scale(ratio))
    if not terms:
        op = GradedOperator(ctx, (0,) * (n - 1), None, lambda d: ctx.diagonal_block(d, ctx.zero))
    else:
        op = operator_sum(terms)
    op.label = "Qmu"
    if window is not None:
        return op.snapshot(window)
    return op


def paper_mu_weights(n: int, ring: PolyRing | None = None) -> list[FieldElem]:
    """mu(q) with coordinates mu_m = sum_{i=m}^{n-1} q_{i+1}...q_{n-1}
    (the q_n = 1 normalization folded in)."""
    ring = ring or quantum_ring(n)
    out = []
    for m in range(1, n + 1):
        acc = FieldElem.zero(ring)
        for i in range(m, n):
            prod = FieldElem.one(ring)
            for l in range(i + 1, n):
                prod = prod * FieldElem.var(ring, f"q{l}")
            acc = acc + prod
        out.append(acc)
    return out


def paper_h_weights(n: int, k: int, ring: PolyRing | None = None) -> list[FieldElem]:
    """h_k truncates mu at the k-th fundamental coweight: coordinates
    mu_m - mu_k for m <= k and 0 beyond."""
    ring = ring or quantum_ring(n)
    mu = paper_mu_weights(n, ring)
    out = []
    for m in range(1, n + 1):
        if m <= k:
            out.append(mu[m - 1] - mu[k - 1])
        else:
            out.append(FieldElem.zero(ring))
    return out


def qc_vs_quadratic_space(n: int, k: int, d: DegreeVector):
    """Difference block (QC_k - Q_mu(h_k)) on V_d; a nonzero result is the
    normalization finding tracked by the open-question probe."""
    ctx = quantum_context(n)
    mu = paper_mu_weights(n)
    h = paper_h_weights(n, k)
    qc = lazy_qc(ctx, k)
    qmu = quadratic_space_element(n, mu, h)
    return qc.sub(qmu).block(tuple(d))


def qc_commutator_block(n: int, k: int, l: int, d: DegreeVector):
    ctx = quantum_context(n)
    return lazy_qc(ctx, k).commutator(lazy_qc(ctx, l)).block(tuple(d))


def qc_at_q_zero_matches(n: int, k: int, d: DegreeVector) -> bool:
    """Exact q -> 0 degeneration of QC_k to the corrected Casimir."""
    ctx = quantum_context(n)
    qzero = {f"q{l}": 0 for l in range(2, n)}
    qc_block = lazy_qc(ctx, k).block(tuple(d))
    target = lazy_tilde_casimir(ctx, k).block(tuple(d))
    diff = qc_block - target
    for _, _, v in diff.sorted_entries():
        if not v.substitute(qzero).is_zero():
            return False
    return True


def check_qc_commutativity(n: int, d: DegreeVector):
    """[QC_k, QC_l] on V_d for every pair, computed exactly.

    Returns (label, is_zero, witness) per pair; the list is empty for
    n = 3, where a single element leaves nothing to commute.
    """
    if n < 3:
        raise VermalabError("no quantum parameters (Picard rank n-2 = 0)")
    out = []
    for k in range(2, n):
        for l in range(k + 1, n):
            blk = qc_commutator_block(n, k, l, d)
            if blk.is_zero():
                out.append((k, l, True, None))
            else:
                r, c, v = blk.sorted_entries()[0]
                out.append((k, l, False, f"entry ({r},{c}): {v.text()}"))
    return out


def check_flatness(n: int, d: DegreeVector):
    """Both curvature components per pair: the commutator C1 and the
    derivative-symmetry part C2 = q_k d_qk QC_l - q_l d_ql QC_k."""
    if n < 3:
        raise VermalabError("no quantum parameters (Picard rank n-2 = 0)")
    out = []
    for k in range(2, n):
        for l in range(k + 1, n):
            c1 = qc_commutator_block(n, k, l, d)
            c2 = flatness_c2_block(n, k, l, d)
            for name, blk in (("C1", c1), ("C2", c2)):
                if blk.is_zero():
                    out.append((f"{name}[QC{k},QC{l}]", True, None))
                else:
                    r, c, v = blk.sorted_entries()[0]
                    out.append((f"{name}[QC{k},QC{l}]", False, f"entry ({r},{c}): {v.text()}"))
    return out


def flatness_c2_block(n: int, k: int, l: int, d: DegreeVector):
    """q_k d/dq_k QC_l - q_l d/dq_l QC_k on V_d, entrywise exact."""
    ctx = quantum_context(n)
    bk = lazy_qc(ctx, k).block(tuple(d))
    bl = lazy_qc(ctx, l).block(tuple(d))
    qk = FieldElem.var(ctx.ring, f"q{k}")
    ql = FieldElem.var(ctx.ring, f"q{l}")
    dim = ctx.dim(tuple(d))
    entries = {}
    for (r, c) in set(bk.entries) | set(bl.entries):
        term = bl.get(r, c).derivative(f"q{k}") * qk - bk.get(r, c).derivative(f"q{l}") * ql
        if not term.is_zero():
            entries[(r, c)] = term
    from .linalg import SparseMatrix

    return SparseMatrix(dim, dim, ctx.ring, entries)


# -- numerical parallel transport ------------------------------------------------


class ConnectionSpec:
    """Numerical restriction of the deformed connection to one weight space.

    x and h are specialized to rationals; kappa is the connection scale.
    Operators are kept as exact entries and evaluated at complex q points.
    """

    def __init__(self, n: int, d: DegreeVector, kappa: Fraction, specialization: dict[str, Fraction]):
        if n < 3:
            raise VermalabError("no quantum parameters (Picard rank n-2 = 0)")
        self.n = n
        self.d = tuple(d)
        self.kappa = Fraction(kappa)
        self.specialization = {k: Fraction(v) for k, v in specialization.items()}
        ctx = quantum_context(n)
        self.dim = ctx.dim(self.d)
        self.qnames = [f"q{k}" for k in range(2, n)]
        self.blocks = {}
        for k in range(2, n):
            block = lazy_qc(ctx, k).block(self.d)
            entries = {}
            for (r, c), v in block.entries.items():
                entries[(r, c)] = v.substitute(self.specialization)
            self.blocks[k] = entries

    def matrix_at(self, q: dict[str, complex], k: int) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for (r, c), v in self.blocks[k].items():
            out[r, c] = v.evaluate_complex(q)
        return out


class Segment:
    """Log-linear path piece; the angular increment per coordinate is the
    wrapped principal difference, so full loops need at least 3 pieces."""

    def __init__(self, start: list[complex], end: list[complex]):
        self.start = [complex(z) for z in start]
        self.end = [complex(z) for z in end]
        if any(z == 0 for z in self.start) or any(z == 0 for z in self.end):
            raise VermalabError("path endpoints must avoid q = 0")
        self.log_start = [cmath.log(z) for z in self.start]
        deltas = []
        for a, b in zip(self.start, self.end):
            dmod = math.log(abs(b)) - math.log(abs(a))
            darg = cmath.phase(b) - cmath.phase(a)
            while darg > math.pi:
                darg -= 2 * math.pi
            while darg <= -math.pi:
                darg += 2 * math.pi
            deltas.append(complex(dmod, darg))
        self.deltas = deltas

    def point(self, t: float) -> list[complex]:
        return [cmath.exp(l0 + t * dl) for l0, dl in zip(self.log_start, self.deltas)]


def _rhs(spec: ConnectionSpec, seg: Segment, t: float, y: np.ndarray) -> np.ndarray:
    qs = seg.point(t)
    qmap = dict(zip(spec.qnames, qs))
    kappa = float(spec.kappa)
    total = np.zeros_like(y)
    for idx, k in enumerate(range(2, spec.n)):
        m = spec.matrix_at(qmap, k)
        total = total - kappa * seg.deltas[idx] * (m @ y)
    return total


_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)


def _transport_segment(spec: ConnectionSpec, seg: Segment, y: np.ndarray, tol: float, max_steps: int) -> np.ndarray:
    t = 0.0
    hstep = 0.05
    steps = 0
    while t < 1.0:
        if steps > max_steps:
            raise VermalabError("step budget exhausted before tolerance was met")
        hstep = min(hstep, 1.0 - t)
        ks = []
        for i in range(7):
            yi = y.copy()
            for j, a in enumerate(_DP_A[i]):
                if a:
                    yi = yi + hstep * a * ks[j]
            ks.append(_rhs(spec, seg, t + _DP_C[i] * hstep, yi))
        y5 = y.copy()
        y4 = y.copy()
        for i in range(7):
            if _DP_B5[i]:
                y5 = y5 + hstep * _DP_B5[i] * ks[i]
            if _DP_B4[i]:
                y4 = y4 + hstep * _DP_B4[i] * ks[i]
        err = float(np.max(np.abs(y5 - y4)))
        scale = max(1.0, float(np.max(np.abs(y5))))
        if err <= tol * scale:
            t += hstep
            y = y5
            steps += 1
            if err > 0:
                hstep = min(0.5, hstep * min(5.0, 0.9 * (tol * scale / err) ** 0.2))
            else:
                hstep = min(0.5, hstep * 5.0)
        else:
            hstep = max(1e-8, hstep * max(0.1, 0.9 * (tol * scale / err) ** 0.2))
            steps += 1
    return y


def monodromy_transport(
    spec: ConnectionSpec,
    path: list[Segment],
    local_tol: float = 1e-10,
    max_steps: int = 200_000,
) -> tuple[np.ndarray, float]:
    """Parallel transport of the identity along the path.

    Returns (matrix, error_estimate); the estimate is the max-norm gap to
    a control run at local tolerance /100, a step-refinement bound.
    """
    runs = []
    for tol in (local_tol, local_tol / 100.0):
        y = np.eye(spec.dim, dtype=complex)
        for seg in path:
            y = _transport_segment(spec, seg, y, tol, max_steps)
        runs.append(y)
    est = float(np.max(np.abs(runs[0] - runs[1])))
    return runs[1], est


def circle_loop(center_abs: list[complex], which: int, radius: float, pieces: int = 6, start_point=None) -> list[Segment]:
    """A positively oriented circle of the chosen coordinate around 0,
    other coordinates held fixed; optionally joined to a base point."""
    pts = []
    for s in range(pieces + 1):
        angle = 2 * math.pi * s / pieces
        q = list(center_abs)
        q[which] = radius * cmath.exp(1j * angle)
        pts.append(q)
    segs = [Segment(pts[s], pts[s + 1]) for s in range(pieces)]
    if start_point is not None:
        lead = Segment(start_point, pts[0])
        tail = Segment(pts[-1], start_point)
        return [lead] + segs + [tail]
    return segs
