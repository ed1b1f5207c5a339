"""Degree-by-degree Whittaker components and the cohomology-ring table.

The Whittaker vector has component 1 in degree zero and satisfies, for
every i with d_i >= 1, the exact condition

    (lowering_i) v_d = h^-1 v_{d - e_i}.

Each component is the unique solution of the stacked linear system over
the function field; uniqueness is certified by the solver (zero kernel)
and every solution is re-verified by substitution.
"""

from __future__ import annotations

from fractions import Fraction

from .field import FieldElem, VermalabError
from .gtalg import eig_det_bundle, joint_spectrum
from .linalg import solve_linear, vstack
from .patterns import DegreeVector, Pattern, degree_valid
from .ring import PolyRing
from .verma import VermaContext


class SolveError(VermalabError):
    """The stacked system came out inconsistent or underdetermined; the
    diagnosis is preserved because it would falsify uniqueness."""

    def __init__(self, degree, status):
        super().__init__(f"stacked system at degree {list(degree)} is {status}")
        self.degree = tuple(degree)
        self.status = status


class WhittakerComponent:
    __slots__ = ("degree", "coefficients")

    def __init__(self, degree: DegreeVector, coefficients: dict[Pattern, FieldElem]):
        self.degree = tuple(degree)
        self.coefficients = coefficients

    def vector(self, ctx: VermaContext) -> list[FieldElem]:
        return [self.coefficients[p] for p in ctx.basis(self.degree)]

    def to_json_dict(self) -> dict:
        items = sorted(self.coefficients.items(), key=lambda kv: kv[0].flat)
        return {
            "degree": list(self.degree),
            "coefficients": [
                {"pattern": p.to_json(), "value": v.text()} for p, v in items
            ],
        }


class WhittakerSolver:
    """Memoized recursion over degrees; single writer per memo key."""

    def __init__(self, n: int, ring: PolyRing | None = None):
        self.ctx = VermaContext.get(n, ring)
        self._memo: dict[DegreeVector, WhittakerComponent] = {}

    def component(self, d: DegreeVector) -> WhittakerComponent:
        d = tuple(int(x) for x in d)
        if not degree_valid(d):
            raise VermalabError(f"invalid degree {d}")
        got = self._memo.get(d)
        if got is not None:
            return got
        ctx = self.ctx
        if sum(d) == 0:
            basis = ctx.basis(d)
            comp = WhittakerComponent(d, {basis[0]: ctx.one})
        else:
            blocks = []
            rhs: list[FieldElem] = []
            for i in range(1, ctx.n):
                if d[i - 1] < 1:
                    continue
                lower = tuple(c - (1 if j == i - 1 else 0) for j, c in enumerate(d))
                prev = self.component(lower)
                blocks.append(ctx.f_block(i, d))
                rhs.extend(v * ctx.hinv for v in prev.vector(ctx))
            stacked = vstack(blocks)
            res = solve_linear(stacked, rhs)
            if res.status != "unique":
                raise SolveError(d, res.status)
            residual = stacked.apply(res.solution)
            for got_v, want_v in zip(residual, rhs):
                if not (got_v - want_v).is_zero():
                    raise VermalabError(f"solution verification failed at degree {d}")
            basis = ctx.basis(d)
            comp = WhittakerComponent(d, dict(zip(basis, res.solution)))
        self._memo[d] = comp
        return comp


_solvers: dict[tuple[int, PolyRing | None], WhittakerSolver] = {}


def whittaker_component(n: int, d: DegreeVector, ring: PolyRing | None = None) -> WhittakerComponent:
    key = (n, ring)
    solver = _solvers.get(key)
    if solver is None:
        solver = WhittakerSolver(n, ring)
        _solvers[key] = solver
    return solver.component(d)


def check_cyclicity(n: int, d: DegreeVector, ring: PolyRing | None = None):
    """(all_nonzero, separated, details) certifying that the diagonal
    subalgebra applied to the Whittaker component spans the weight space.

    Nonvanishing of every fixed-point coefficient plus pairwise-distinct
    joint eigenvalue tuples let Lagrange interpolation reach every basis
    projector, which is the spanning statement.
    """
    comp = whittaker_component(n, d, ring)
    zero_pats = [p for p, v in comp.coefficients.items() if v.is_zero()]
    spectrum = joint_spectrum(n, d, "tildeCas", ring)
    dim = len(spectrum.table)
    separated = dim <= 1 or spectrum.is_separated()
    details = {
        "dimension": dim,
        "zero_coefficients": [p.text() for p in sorted(zero_pats, key=lambda p: p.flat)],
        "separated": separated,
    }
    return (not zero_pats), separated, details


class SpectrumCollapseError(VermalabError):
    def __init__(self, a: Pattern, b: Pattern):
        super().__init__(
            f"specialization collapses the joint spectrum on {a.text()} and {b.text()};"
            " pick a different point"
        )


def ring_structure(n: int, d: DegreeVector, specialization: dict[str, Fraction] | None = None,
                   ring: PolyRing | None = None) -> dict:
    """Multiplication table of the degree-d cohomology ring realized as
    diagonal operators generated by the determinant classes acting on the
    Whittaker component.

    Without a specialization only the symbolic eigenvalue tables are
    emitted.  With one, the generators are evaluated exactly, a monomial
    basis is selected by rank growth, and each pairwise product is
    expanded over that basis with exact rational coefficients.
    """
    ctx = VermaContext.get(n, ring)
    d = tuple(d)
    basis = ctx.basis(d)
    dim = len(basis)
    gens = [k for k in range(2, n) if d[k - 1] != 0 and d[k - 2] != 0]
    labels = [f"c1(D{k})" for k in gens]
    eig_tables = {
        label: {p: eig_det_bundle(p, k, ring) for p in basis}
        for label, k in zip(labels, gens)
    }
    out: dict = {
        "degree": list(d),
        "dimension": dim,
        "generators": labels,
        "eigenvalues": {
            label: [
                {"pattern": p.to_json(), "value": eig_tables[label][p].text()}
                for p in basis
            ]
            for label in labels
        },
    }
    comp = whittaker_component(n, d, ring)
    out["whittaker_nonzero"] = all(not v.is_zero() for v in comp.coefficients.values())
    if specialization is None:
        return out
    # exact rational eigenvalue tuples per basis point
    values: dict[str, list[Fraction]] = {}
    for label in labels:
        values[label] = [eig_tables[label][p].evaluate(specialization) for p in basis]
    tuples = list(zip(*[values[label] for label in labels])) if labels else [()] * dim
    for a in range(dim):
        for b in range(a + 1, dim):
            if tuples[a] == tuples[b]:
                raise SpectrumCollapseError(basis[a], basis[b])
    # greedy monomial basis: exponent vectors over the generators, graded-lex
    def monomial_values(expv):
        vals = []
        for idx in range(dim):
            acc = Fraction(1)
            for g, e in zip(labels, expv):
                acc *= values[g][idx] ** e
            vals.append(acc)
        return vals

    chosen: list[tuple[int, ...]] = []
    chosen_vals: list[list[Fraction]] = []
    rank = 0
    bound = 0
    while rank < dim:
        bound += 1
        candidates = _graded_exponents(len(labels), bound)
        for expv in candidates:
            if expv in chosen:
                continue
            vals = monomial_values(expv)
            if _rank_of(chosen_vals + [vals]) > rank:
                chosen.append(expv)
                chosen_vals.append(vals)
                rank += 1
                if rank == dim:
                    break
        if bound > dim + 1:
            raise VermalabError("monomial basis search failed to reach full rank")
    products = {}
    for ia, la in enumerate(labels):
        for ib, lb in enumerate(labels[ia:], start=ia):
            target = [values[la][idx] * values[lb][idx] for idx in range(dim)]
            coeffs = _solve_rational(chosen_vals, target)
            products[f"{la}*{labels[ib]}"] = {
                _exp_label(labels, expv): str(c)
                for expv, c in zip(chosen, coeffs)
                if c != 0
            }
    out["specialization"] = {k: str(v) for k, v in sorted(specialization.items())}
    out["basis"] = [_exp_label(labels, expv) for expv in chosen]
    out["products"] = products
    return out


def _graded_exponents(nvars: int, bound: int) -> list[tuple[int, ...]]:
    if nvars == 0:
        return [()]
    out = []
    for total in range(bound + 1):
        out.extend(_sum_tuples(nvars, total))
    return out


def _sum_tuples(nvars: int, total: int) -> list[tuple[int, ...]]:
    if nvars == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _sum_tuples(nvars - 1, total - first):
            out.append((first,) + rest)
    return out


def _exp_label(labels: list[str], expv: tuple[int, ...]) -> str:
    parts = [
        f"{lab}^{e}" if e > 1 else lab for lab, e in zip(labels, expv) if e
    ]
    return "*".join(parts) if parts else "1"


def _rank_of(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    pc = 0
    for pc in range(ncols):
        pr = None
        for r in range(rank, len(m)):
            if m[r][pc] != 0:
                pr = r
                break
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][pc]
        for r in range(len(m)):
            if r != rank and m[r][pc] != 0:
                f = m[r][pc] / piv
                for c in range(pc, ncols):
                    m[r][c] -= f * m[rank][c]
        rank += 1
    return rank


def _solve_rational(rows: list[list[Fraction]], target: list[Fraction]) -> list[Fraction]:
    """Solve sum_i c_i rows[i] = target exactly (rows independent)."""
    k = len(rows)
    npts = len(target)
    m = [[rows[i][p] for i in range(k)] + [target[p]] for p in range(npts)]
    piv_rows = []
    rank = 0
    for pc in range(k):
        pr = next((r for r in range(rank, npts) if m[r][pc] != 0), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][pc]
        for r in range(npts):
            if r != rank and m[r][pc] != 0:
                f = m[r][pc] / piv
                for c in range(pc, k + 1):
                    m[r][c] -= f * m[rank][c]
        piv_rows.append(pc)
        rank += 1
    for r in range(rank, npts):
        if m[r][k] != 0:
            raise VermalabError("product does not lie in the chosen span")
    sol = [Fraction(0)] * k
    for i, pc in enumerate(piv_rows):
        sol[pc] = m[i][k] / m[i][pc]
    return sol
