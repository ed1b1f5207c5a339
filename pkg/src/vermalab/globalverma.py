"""The global module: two commuting copies of the rank-n action.

Fixed points are triples (sigma, p0, pinf).  Family (1) acts through the
p0 pattern with sigma-substituted local coefficients; family (2) acts
through pinf with the local coefficient barred (h -> -h) first and then
sigma-substituted.  The diagonal operators are the sums of the two
families.  The symmetric group acts by sigma'(f [sigma, p0, pinf]) =
f^{sigma'} [sigma' sigma, p0, pinf], and the invariants are preserved by
all the operators; everything here is verified exactly on windows.
"""

from __future__ import annotations

import itertools

from .field import FieldElem, VermalabError
from .gtalg import _esym
from .linalg import SparseMatrix
from .patterns import (
    DegreeVector,
    GlobalFixedPoint,
    degree_valid,
    degree_vectors_upto,
    enumerate_global_fixed_points,
    shift_degree,
)
from .verma import GradedOperator, VermaContext, root_shift
from .whittaker import whittaker_component


class GlobalContext:
    _instances: dict[int, "GlobalContext"] = {}

    def __init__(self, n: int):
        self.n = n
        self.local = VermaContext.get(n)
        self.ring = self.local.ring
        self._basis: dict[DegreeVector, tuple[GlobalFixedPoint, ...]] = {}
        self._index: dict[DegreeVector, dict[GlobalFixedPoint, int]] = {}

    @classmethod
    def get(cls, n: int) -> "GlobalContext":
        inst = cls._instances.get(n)
        if inst is None:
            inst = cls(n)
            cls._instances[n] = inst
        return inst

    def basis(self, d: DegreeVector) -> tuple[GlobalFixedPoint, ...]:
        d = tuple(d)
        got = self._basis.get(d)
        if got is None:
            got = tuple(enumerate_global_fixed_points(self.n, d)) if degree_valid(d) else ()
            self._basis[d] = got
        return got

    def dim(self, d: DegreeVector) -> int:
        return len(self.basis(d))

    def index(self, d: DegreeVector) -> dict[GlobalFixedPoint, int]:
        d = tuple(d)
        got = self._index.get(d)
        if got is None:
            got = {fp: i for i, fp in enumerate(self.basis(d))}
            self._index[d] = got
        return got


def _twist(coeff: FieldElem, sigma: tuple[int, ...], family: int) -> FieldElem:
    if family == 2:
        coeff = coeff.bar()
    return coeff.permute_x(sigma)


def global_ef_block(gctx: GlobalContext, which: str, family: int, i: int, d: DegreeVector) -> SparseMatrix:
    """Block of the raising (e) or lowering (f) operator of one family."""
    n = gctx.n
    d = tuple(d)
    sign = +1 if which == "e" else -1
    target = shift_degree(d, root_shift(n, i + 1, i) if which == "e" else root_shift(n, i, i + 1))
    src = gctx.basis(d)
    tgt_index = gctx.index(target)
    local = gctx.local
    entries: dict[tuple[int, int], FieldElem] = {}
    for col, fp in enumerate(src):
        pat = fp.p0 if family == 1 else fp.pinf
        ldeg = pat.degree()
        lblock = local.e_block(i, ldeg) if which == "e" else local.f_block(i, ldeg)
        lcol = local.index(ldeg)[pat]
        ltarget = shift_degree(ldeg, root_shift(n, i + 1, i) if which == "e" else root_shift(n, i, i + 1))
        lbasis = local.basis(ltarget)
        for (r, c), v in lblock.entries.items():
            if c != lcol:
                continue
            q = lbasis[r]
            tfp = (
                GlobalFixedPoint(fp.sigma, q, fp.pinf)
                if family == 1
                else GlobalFixedPoint(fp.sigma, fp.p0, q)
            )
            row = tgt_index.get(tfp)
            if row is None:
                continue
            entries[(row, col)] = _twist(v, fp.sigma, family)
    return SparseMatrix(gctx.dim(target), len(src), gctx.ring, entries)


def global_cartan_block(gctx: GlobalContext, family: int, i: int, d: DegreeVector) -> SparseMatrix:
    d = tuple(d)
    src = gctx.basis(d)
    local = gctx.local
    entries = {}
    for col, fp in enumerate(src):
        pat = fp.p0 if family == 1 else fp.pinf
        scalar = local.cartan_scalar(i, pat.degree())
        entries[(col, col)] = _twist(scalar, fp.sigma, family)
    return SparseMatrix(len(src), len(src), gctx.ring, entries)


def lazy_global(gctx: GlobalContext, which: str, family: int, i: int) -> GradedOperator:
    """which in e, f, h; family in 1, 2; label like e1(2)."""
    n = gctx.n
    if which == "e":
        shift = root_shift(n, i + 1, i)
        build = lambda d: global_ef_block(gctx, "e", family, i, d)
    elif which == "f":
        shift = root_shift(n, i, i + 1)
        build = lambda d: global_ef_block(gctx, "f", family, i, d)
    elif which == "h":
        shift = (0,) * (n - 1)
        build = lambda d: global_cartan_block(gctx, family, i, d)
    else:
        raise VermalabError(f"unknown operator kind {which}")
    return GradedOperator(gctx, shift, None, build, f"{which}{i}({family})")


def op_global(n: int, i: int, which: str, window) -> GradedOperator:
    """Spec surface: which in {e1, e2, f1, f2, eD, fD}; eD and fD are the
    sums of the two families."""
    gctx = GlobalContext.get(n)
    if which in ("e1", "e2", "f1", "f2"):
        return lazy_global(gctx, which[0], int(which[1]), i).snapshot(window)
    if which in ("eD", "fD"):
        kind = which[0]
        op = lazy_global(gctx, kind, 1, i).add(lazy_global(gctx, kind, 2, i))
        op.label = f"{kind}{i}(Delta)"
        return op.snapshot(window)
    raise VermalabError(f"unknown global operator {which}")


def check_double_relations(n: int, dmax: int):
    """Chevalley-Serre relations inside each family, plus exact cross
    commutation between the families, on all blocks |d| <= dmax.

    Returns (label, anchor, ok, witness) tuples.
    """
    gctx = GlobalContext.get(n)
    degrees = degree_vectors_upto(n, dmax)
    ops = {}
    for fam in (1, 2):
        for i in range(1, n):
            ops[("e", fam, i)] = lazy_global(gctx, "e", fam, i)
            ops[("f", fam, i)] = lazy_global(gctx, "f", fam, i)
        for i in range(1, n + 1):
            ops[("h", fam, i)] = lazy_global(gctx, "h", fam, i)
    results = []

    def check(label, anchor, op):
        ok = True
        witness = None
        for d in degrees:
            blk = op.block(d)
            if not blk.is_zero():
                ok = False
                r, c, v = blk.sorted_entries()[0]
                witness = f"degree {list(d)} entry ({r},{c}): {v.text()}"
                break
        results.append((label, anchor, ok, witness))

    for fam in (1, 2):
        t = f"({fam})"
        for i in range(1, n):
            for j in range(1, n):
                com = ops[("e", fam, i)].commutator(ops[("f", fam, j)])
                if i == j:
                    rhs = ops[("h", fam, i + 1)].sub(ops[("h", fam, i)])
                    check(f"[e{i}{t},f{j}{t}]=h{i}{t}", "family bracket of raise and lower", com.sub(rhs))
                else:
                    check(f"[e{i}{t},f{j}{t}]=0", "family bracket of raise and lower", com)
        for i in range(1, n + 1):
            for j in range(1, n):
                com = ops[("h", fam, i)].commutator(ops[("e", fam, j)])
                coeff = (1 if i == j + 1 else 0) - (1 if i == j else 0)
                rhs = ops[("e", fam, j)].scale(FieldElem.from_rational(gctx.ring, coeff))
                check(f"[E{i}{i}{t},e{j}{t}]", "diagonal action on raising", com.sub(rhs))
                com = ops[("h", fam, i)].commutator(ops[("f", fam, j)])
                rhs = ops[("f", fam, j)].scale(FieldElem.from_rational(gctx.ring, -coeff))
                check(f"[E{i}{i}{t},f{j}{t}]", "diagonal action on lowering", com.sub(rhs))
        for i in range(1, n):
            for j in range(1, n):
                if i == j:
                    continue
                if abs(i - j) >= 2:
                    check(f"[e{i}{t},e{j}{t}]=0", "distant raises commute", ops[("e", fam, i)].commutator(ops[("e", fam, j)]))
                    check(f"[f{i}{t},f{j}{t}]=0", "distant lowers commute", ops[("f", fam, i)].commutator(ops[("f", fam, j)]))
                else:
                    inner = ops[("e", fam, i)].commutator(ops[("e", fam, j)])
                    check(f"serre e{i}{t},e{j}{t}", "adjacent Serre relation", ops[("e", fam, i)].commutator(inner))
                    inner = ops[("f", fam, i)].commutator(ops[("f", fam, j)])
                    check(f"serre f{i}{t},f{j}{t}", "adjacent Serre relation", ops[("f", fam, i)].commutator(inner))
    for k1, op1 in ops.items():
        if k1[1] != 1:
            continue
        for k2, op2 in ops.items():
            if k2[1] != 2:
                continue
            check(
                f"[{k1[0]}{k1[2]}(1),{k2[0]}{k2[2]}(2)]=0",
                "the two families commute",
                op1.commutator(op2),
            )
    return results


def check_delta_sums(n: int, dmax: int):
    """fDelta and eDelta agree with the family sums, block by block."""
    gctx = GlobalContext.get(n)
    degrees = degree_vectors_upto(n, dmax)
    results = []
    for kind in ("e", "f"):
        for i in range(1, n):
            summed = lazy_global(gctx, kind, 1, i).add(lazy_global(gctx, kind, 2, i))
            direct = op_global(n, i, f"{kind}D", degrees)
            ok = all((summed.block(d) - direct.block(d)).is_zero() for d in degrees)
            results.append((f"{kind}{i}(Delta)=sum", "diagonal operator is the family sum", ok, None))
    return results


# -- symmetric group action ---------------------------------------------------


def sn_action(sigma_prime: tuple[int, ...], degree: DegreeVector, vec: dict[GlobalFixedPoint, FieldElem], n: int | None = None) -> dict[GlobalFixedPoint, FieldElem]:
    """sigma'(f [sigma, p0, pinf]) = f^{sigma'} [sigma' sigma, p0, pinf]."""
    out: dict[GlobalFixedPoint, FieldElem] = {}
    for fp, coeff in vec.items():
        composed = tuple(sigma_prime[s - 1] for s in fp.sigma)
        tfp = GlobalFixedPoint(composed, fp.p0, fp.pinf)
        add = coeff.permute_x(sigma_prime)
        cur = out.get(tfp)
        out[tfp] = add if cur is None else cur + add
    return {fp: v for fp, v in out.items() if not v.is_zero()}


def compose_perm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a b)(i) = a(b(i))."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def symmetrize(n: int, d: DegreeVector):
    """Basis of the invariant subspace: one orbit sum per (p0, pinf)."""
    gctx = GlobalContext.get(n)
    basis = gctx.basis(tuple(d))
    pairs = sorted({(fp.p0, fp.pinf) for fp in basis}, key=lambda t: (t[0].flat, t[1].flat))
    sigmas = list(itertools.permutations(range(1, n + 1)))
    one = FieldElem.one(gctx.ring)
    out = []
    for p0, pinf in pairs:
        vec = {GlobalFixedPoint(s, p0, pinf): one for s in sigmas}
        out.append(vec)
    return out


def vec_is_invariant(n: int, degree: DegreeVector, vec: dict[GlobalFixedPoint, FieldElem]) -> bool:
    for t in range(1, n):
        tau = list(range(1, n + 1))
        tau[t - 1], tau[t] = tau[t], tau[t - 1]
        moved = sn_action(tuple(tau), degree, vec)
        keys = set(moved) | set(vec)
        for k in keys:
            a = moved.get(k)
            b = vec.get(k)
            if a is None or b is None:
                if (a or b) and not (a or b).is_zero():
                    return False
            elif not (a - b).is_zero():
                return False
    return True


def apply_to_vec(gctx: GlobalContext, op: GradedOperator, degree: DegreeVector, vec: dict[GlobalFixedPoint, FieldElem]):
    basis = gctx.basis(tuple(degree))
    col = [vec.get(fp, FieldElem.zero(gctx.ring)) for fp in basis]
    out_deg = shift_degree(tuple(degree), op.shift)
    out_basis = gctx.basis(out_deg)
    out_col = op.block(tuple(degree)).apply(col)
    return out_deg, {fp: v for fp, v in zip(out_basis, out_col) if not v.is_zero()}


def check_invariants_preserved(n: int, d: DegreeVector):
    """All e/f operators of both families (and the sums) map the invariant
    basis vectors to invariant vectors; exact check."""
    gctx = GlobalContext.get(n)
    results = []
    invs = symmetrize(n, d)
    ops = []
    for fam in (1, 2):
        for i in range(1, n):
            ops.append(lazy_global(gctx, "e", fam, i))
            ops.append(lazy_global(gctx, "f", fam, i))
    for i in range(1, n):
        ops.append(lazy_global(gctx, "e", 1, i).add(lazy_global(gctx, "e", 2, i)))
        ops.append(lazy_global(gctx, "f", 1, i).add(lazy_global(gctx, "f", 2, i)))
    ok = True
    witness = None
    for vec in invs:
        if not vec_is_invariant(n, d, vec):
            ok = False
            witness = "orbit sum itself is not invariant"
            break
        for op in ops:
            out_deg, out = apply_to_vec(gctx, op, d, vec)
            if out and not vec_is_invariant(n, out_deg, out):
                ok = False
                witness = f"image under {op.label} not invariant"
                break
        if not ok:
            break
    results.append(("invariant subspace preserved", "operators keep the symmetric part", ok, witness))
    return results


# -- global Whittaker ---------------------------------------------------------


def global_whittaker_vector(n: int, d: DegreeVector) -> dict[GlobalFixedPoint, FieldElem]:
    """Component assembled from the two local Whittaker solutions: the
    coefficient at (sigma, p0, pinf) is (v[p0] bar(v[pinf]))^sigma."""
    gctx = GlobalContext.get(n)
    out = {}
    for fp in gctx.basis(tuple(d)):
        a = whittaker_component(n, fp.p0.degree()).coefficients[fp.p0]
        b = whittaker_component(n, fp.pinf.degree()).coefficients[fp.pinf]
        out[fp] = (a * b.bar()).permute_x(fp.sigma)
    return out


def check_global_whittaker(n: int, d: DegreeVector):
    """f_i(1) b_d = h^-1 b_{d-i} and f_i(2) b_d = -h^-1 b_{d-i}, exactly."""
    gctx = GlobalContext.get(n)
    d = tuple(d)
    b_d = global_whittaker_vector(n, d)
    results = []
    hinv = gctx.local.hinv
    for i in range(1, n):
        lower = tuple(c - (1 if j == i - 1 else 0) for j, c in enumerate(d))
        if not degree_valid(lower):
            continue
        want = {fp: v * hinv for fp, v in global_whittaker_vector(n, lower).items()}
        for fam, sign in ((1, 1), (2, -1)):
            op = lazy_global(gctx, "f", fam, i)
            _, got = apply_to_vec(gctx, op, d, b_d)
            ok = True
            witness = None
            keys = set(got) | set(want)
            for k in keys:
                gv = got.get(k, gctx.local.zero)
                wv = want.get(k, gctx.local.zero) * sign
                if not (gv - wv).is_zero():
                    ok = False
                    witness = f"{k.text()}: {gv.text()} vs {wv.text()}"
                    break
            results.append(
                (
                    f"f{i}({fam}) b_{list(d)} = {'+' if sign > 0 else '-'}h^-1 b",
                    "product of local Whittaker data solves the global conditions",
                    ok,
                    witness,
                )
            )
    return results


# -- global Chern eigenvalues --------------------------------------------------


def global_chern_weights(fp: GlobalFixedPoint, i: int, which: str) -> list[FieldElem]:
    ctx = VermaContext.get(fp.n)
    pat = fp.p0 if which == "zero" else fp.pinf
    out = []
    for j in range(1, i + 1):
        out.append(-ctx.x[j] + ctx.h * pat.entry(i, j))
    return out


def eig_global_chern(fp: GlobalFixedPoint, i: int, j: int, part: str) -> FieldElem:
    """Lemma-style closed form: both deviation sets enter with plus signs
    and the whole thing is sigma-substituted."""
    if not 1 <= j <= i <= fp.n - 1:
        raise VermalabError("chern indices out of range")
    ctx = VermaContext.get(fp.n)
    e0 = _esym(global_chern_weights(fp, i, "zero"), j, ctx.ring)
    einf = _esym(global_chern_weights(fp, i, "inf"), j, ctx.ring)
    if part == "diag":
        val = (e0 + einf) / 2
    elif part == "kunneth":
        val = ctx.hinv * (einf - e0) / 2
    else:
        raise VermalabError(f"unknown chern part {part}")
    return val.permute_x(fp.sigma)


def c1_closed_form(fp: GlobalFixedPoint, i: int) -> FieldElem:
    """The stated first-Chern eigenvalue -(x_1+...+x_i)^sigma + d_i h."""
    ctx = VermaContext.get(fp.n)
    if i == 0:
        return ctx.zero
    total = ctx.zero
    for j in range(1, i + 1):
        total = total - ctx.x[j]
    total = total.permute_x(fp.sigma)
    d = fp.degree()
    return total + ctx.h * d[i - 1]


def cartan_from_chern(fp: GlobalFixedPoint, i: int) -> tuple[FieldElem, FieldElem]:
    """(computed, expected) for the x_i action written through first Chern
    eigenvalues: c1(W_{i-1}) - c1(W_i) - (d_i - d_{i-1}) h against the
    naive x_{sigma(i)}.  A mismatch is reported, never patched."""
    ctx = VermaContext.get(fp.n)
    if not 1 <= i <= fp.n - 1:
        raise VermalabError("cartan_from_chern index out of range")
    d = fp.degree()
    di = d[i - 1]
    dprev = d[i - 2] if i >= 2 else 0
    computed = c1_closed_form(fp, i - 1) - c1_closed_form(fp, i) - ctx.h * (di - dprev)
    expected = ctx.x[fp.sigma[i - 1]]
    return computed, expected


def global_joint_chern_spectrum(n: int, d: DegreeVector):
    """Tuples of all global Chern eigenvalues per fixed point; used for the
    double separation check."""
    gctx = GlobalContext.get(n)
    basis = gctx.basis(tuple(d))
    labels = []
    funcs = []
    for i in range(1, n):
        for j in range(1, i + 1):
            for part in ("diag", "kunneth"):
                labels.append(f"c{j}(W{i})[{part}]")
                funcs.append(lambda fp, i=i, j=j, part=part: eig_global_chern(fp, i, j, part))
    table = {fp: tuple(f(fp) for f in funcs) for fp in basis}
    return labels, table


def check_global_separation(n: int, d: DegreeVector):
    """(vacuous, separated, witness) for the global Chern spectrum."""
    _, table = global_joint_chern_spectrum(n, d)
    fps = sorted(table, key=GlobalFixedPoint.sort_key)
    if len(fps) <= 1:
        return True, True, None
    for a, b in itertools.combinations(fps, 2):
        if all((x - y).is_zero() for x, y in zip(table[a], table[b])):
            return False, False, (a, b)
    return False, True, None
