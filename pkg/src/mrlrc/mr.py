"""Maximally recoverable LRC assembly, exhaustive verification and the
erasure codec.

The parity-check matrix has the block shape: a shared delta x r local
parity A on the diagonal (one copy per group) and a bottom band of
h x r Moore blocks D_i whose first rows span the subspaces of a
certified direct sum system.  Verification re-proves maximal
recoverability by enumerating every erasure pattern (delta positions
per group plus h more anywhere) and rank-checking the selected columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from time import perf_counter

from . import config
from .errors import BudgetError, ParameterError
from .gf import FieldTower
from .linalg import (
    FieldMatrix,
    is_mds_parity_check,
    kernel,
    vec_mat,
    _rank_rows,
)
from .sdss import SubspaceSystem


@dataclass(frozen=True)
class MrCodeSpec:
    """Parameters (N = n*r, r, h, delta) over F_ell with ell = q^m."""

    n: int
    r: int
    h: int
    delta: int
    tower: FieldTower

    def __post_init__(self):
        if self.n < 1 or self.h < 1:
            raise ParameterError("need n >= 1 and h >= 1")
        if not 1 <= self.delta <= self.r - 1:
            raise ParameterError("need 1 <= delta <= r-1")
        if self.k < 1:
            raise ParameterError(
                f"dimension N - n*delta - h = {self.k} must be positive"
            )

    @property
    def N(self) -> int:
        return self.n * self.r

    @property
    def k(self) -> int:
        return self.N - self.n * self.delta - self.h

    @property
    def ell(self) -> int:
        return self.tower.q**self.tower.m


class MrParityCheck:
    """Assembled (n*delta + h) x N parity check over the top field."""

    def __init__(self, spec: MrCodeSpec, A: FieldMatrix, D: list[FieldMatrix],
                 check: bool = True):
        t = spec.tower
        if A.rows != spec.delta or A.cols != spec.r:
            raise ParameterError("local parity block has the wrong shape")
        if len(D) != spec.n or any(
            Di.rows != spec.h or Di.cols != spec.r for Di in D
        ):
            raise ParameterError("Moore band has the wrong shape")
        if check:
            for i, Di in enumerate(D):
                if not _is_moore(t, Di):
                    raise ParameterError(f"block {i} is not a Moore matrix")
        self.spec = spec
        self.A = A
        self.D = list(D)
        self.H = _assemble(spec, A, D)

    def __repr__(self):
        s = self.spec
        return f"MrParityCheck(N={s.N}, r={s.r}, h={s.h}, delta={s.delta}, ell={s.tower.q}^{s.tower.m})"


def _is_moore(t: FieldTower, M: FieldMatrix) -> bool:
    for i in range(1, M.rows):
        for j in range(M.cols):
            if M.at(i, j) != t.frobenius(M.at(i - 1, j), 1):
                return False
    return True


def _assemble(spec: MrCodeSpec, A: FieldMatrix, D: list[FieldMatrix]) -> FieldMatrix:
    t = spec.tower
    n, r, h, delta = spec.n, spec.r, spec.h, spec.delta
    N = spec.N
    rows = [[0] * N for _ in range(n * delta + h)]
    for i in range(n):
        for s in range(delta):
            target = rows[i * delta + s]
            for j in range(r):
                target[i * r + j] = A.at(s, j)  # F_q codes embed as constants
    for i, Di in enumerate(D):
        for s in range(h):
            target = rows[n * delta + s]
            for j in range(r):
                target[i * r + j] = Di.at(s, j)
    return FieldMatrix.from_rows(t, "top", rows)


# -- Moore matrices ----------------------------------------------------


def moore_matrix(t: FieldTower, alphas, h: int) -> FieldMatrix:
    """h x len(alphas) matrix whose row i is the q^i powers of the alphas."""
    if h < 1:
        raise ParameterError("need h >= 1")
    alphas = list(alphas)
    rows = [list(alphas)]
    for _ in range(1, h):
        rows.append([t.frobenius(x, 1) for x in rows[-1]])
    return FieldMatrix.from_rows(t, "top", rows)


def _elim_det(F, rows) -> int:
    """Determinant by Gaussian elimination (no normalization)."""
    work = [list(r) for r in rows]
    k = len(work)
    det = 1
    for c in range(k):
        piv = None
        for i in range(c, k):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            det = F.neg(det)
        prow = work[c]
        det = F.mul(det, prow[c])
        inv = F.inv(prow[c])
        for i in range(c + 1, k):
            g = work[i][c]
            if g:
                f = F.mul(g, inv)
                row = work[i]
                for tcol in range(c, k):
                    if prow[tcol]:
                        row[tcol] = F.sub(row[tcol], F.mul(f, prow[tcol]))
    return det


def moore_det(t: FieldTower, alphas) -> int:
    """Determinant of the square Moore matrix on alphas.

    Computed twice: as the product of c_1 a_1 + ... + c_i-1 a_i-1 + a_i
    over all direction vectors with last nonzero entry 1, and by
    Gaussian elimination on the assembled matrix; the two must agree.
    """
    alphas = list(alphas)
    h = len(alphas)
    F = t.field("top")
    q = t.q
    prod = 1
    for i in range(h):
        for cs in product(range(q), repeat=i):
            acc = alphas[i]
            for c, a in zip(cs, alphas):
                if c:
                    acc = F.add(acc, F.mul(c, a))
            prod = F.mul(prod, acc)
    elim = _elim_det(F, moore_matrix(t, alphas, h).to_rows())
    if prod != elim:
        raise AssertionError(
            "Moore determinant formula disagrees with elimination"
        )
    return prod


# -- construction ------------------------------------------------------


def local_parity_check(t: FieldTower, r: int, delta: int) -> FieldMatrix:
    """delta x r parity check of an [r, r-delta, delta+1] MDS code over F_q.

    Uses the Vandermonde construction for r <= q+1; for longer blocks
    only delta = 1 (single parity) and delta = r-1 (repetition dual)
    exist over a fixed F_q, and those are built directly.
    """
    from .codes import rs_parity_check

    q = t.q
    if not 1 <= delta <= r - 1:
        raise ParameterError("need 1 <= delta <= r-1")
    if r <= q + 1:
        return rs_parity_check(t, "mid", r, delta)
    if delta == 1:
        return FieldMatrix.from_rows(t, "mid", [[1] * r])
    if delta == r - 1:
        F = t.field("mid")
        rows = []
        for i in range(r - 1):
            row = [0] * r
            row[i] = 1
            row[r - 1] = F.neg(1)
            rows.append(row)
        return FieldMatrix.from_rows(t, "mid", rows)
    raise ParameterError(
        f"local group length {r} over F_{q} needs r <= q+1 unless delta is 1 or r-1"
    )


def build_direct(spec: MrCodeSpec, S: SubspaceSystem) -> MrParityCheck:
    """Moore-band construction directly on a certified system whose
    subspace dimension equals the locality r."""
    t = spec.tower
    if not S.certified:
        raise ParameterError("refusing to build on an uncertified system")
    if (S.n, S.r, S.h) != (spec.n, spec.r, spec.h):
        raise ParameterError("system parameters do not match the code spec")
    if S.tower != t:
        raise ParameterError("system must live in the code's tower")
    A = local_parity_check(t, spec.r, spec.delta)
    D = []
    for group in S.basis:
        alphas = [t.vec_to_top(v) for v in group]
        D.append(moore_matrix(t, alphas, spec.h))
    return MrParityCheck(spec, A, D)


def build_concatenated(spec: MrCodeSpec, S: SubspaceSystem,
                       inner: FieldMatrix) -> MrParityCheck:
    """Moore-band construction through an inner [r, r-s, d >= h+delta+1]
    code: the Moore blocks run over combinations of the subspace basis
    given by the inner parity columns, so any h+delta of them stay
    F_q-independent."""
    t = spec.tower
    if not S.certified:
        raise ParameterError("refusing to build on an uncertified system")
    if S.tower != t:
        raise ParameterError("system must live in the code's tower")
    if (S.n, S.h) != (spec.n, spec.h):
        raise ParameterError("system parameters do not match the code spec")
    s = S.r
    if inner.rows != s:
        raise ParameterError("inner parity rows must match the subspace dimension")
    if inner.cols != spec.r:
        raise ParameterError("inner parity columns must match the locality")
    Fq_inner = inner.field()
    if Fq_inner.size != t.q or Fq_inner.char != t.p:
        raise ParameterError("inner code must be defined over F_q")
    need = spec.h + spec.delta
    if need > s:
        raise ParameterError(
            f"inner code cannot have {need} independent columns with only {s} rows"
        )
    total = comb(spec.r, need)
    if total > config.subset_budget():
        raise BudgetError(f"{total} column subsets exceed the budget")
    inner_cols = [inner.column(j) for j in range(inner.cols)]
    for sel in combinations(range(spec.r), need):
        if _rank_rows(Fq_inner, [inner_cols[j] for j in sel]) != need:
            raise ParameterError(
                "inner code distance below h+delta+1: "
                f"columns {sel} are dependent"
            )
    Ftop = t.field("top")
    A = local_parity_check(t, spec.r, spec.delta)
    D = []
    for group in S.basis:
        alphas = [t.vec_to_top(v) for v in group]
        betas = []
        for j in range(spec.r):
            acc = 0
            for w in range(s):
                c = inner.at(w, j)
                if c:
                    acc = Ftop.add(acc, Ftop.mul(c, alphas[w]))
            betas.append(acc)
        D.append(moore_matrix(t, betas, spec.h))
    return MrParityCheck(spec, A, D)


# -- erasure patterns ---------------------------------------------------


@dataclass(frozen=True)
class ErasurePattern:
    """delta absolute positions per group plus h extra positions."""

    per_group: tuple[tuple[int, ...], ...]
    extra: tuple[int, ...]

    def columns(self) -> tuple[int, ...]:
        return tuple(sorted([c for g in self.per_group for c in g] + list(self.extra)))


def pattern_count(spec: MrCodeSpec) -> int:
    return comb(spec.r, spec.delta) ** spec.n * comb(
        spec.N - spec.n * spec.delta, spec.h
    )


def enumerate_patterns(spec: MrCodeSpec):
    """All maximal erasure patterns in lexicographic order: per-group
    delta-subsets vary combinadically (last group fastest), then the
    h extras over the remaining positions."""
    n, r, delta, h = spec.n, spec.r, spec.delta, spec.h
    group_choices = [
        [tuple(i * r + j for j in sel) for sel in combinations(range(r), delta)]
        for i in range(n)
    ]
    for pg in product(*group_choices):
        taken = set()
        for g in pg:
            taken.update(g)
        rest = [c for c in range(spec.N) if c not in taken]
        for extra in combinations(rest, h):
            yield ErasurePattern(per_group=pg, extra=extra)


def _unrank_combination(m: int, k: int, idx: int) -> tuple[int, ...]:
    """idx-th k-subset of range(m) in lexicographic order."""
    out = []
    x = 0
    for slot in range(k, 0, -1):
        while True:
            c = comb(m - x - 1, slot - 1)
            if idx < c:
                out.append(x)
                x += 1
                break
            idx -= c
            x += 1
    return tuple(out)


def pattern_at(spec: MrCodeSpec, index: int) -> ErasurePattern:
    """Pattern at a given position of the enumerate_patterns stream."""
    n, r, delta, h = spec.n, spec.r, spec.delta, spec.h
    per_group_combos = comb(r, delta)
    extras_total = comb(spec.N - n * delta, h)
    if not 0 <= index < per_group_combos**n * extras_total:
        raise ParameterError("pattern index out of range")
    index, extra_idx = divmod(index, extras_total)
    ranks = []
    for _ in range(n):
        index, rk = divmod(index, per_group_combos)
        ranks.append(rk)
    ranks.reverse()  # first group varies slowest
    pg = []
    taken = set()
    for i, rk in enumerate(ranks):
        sel = tuple(i * r + j for j in _unrank_combination(r, delta, rk))
        pg.append(sel)
        taken.update(sel)
    rest = [c for c in range(spec.N) if c not in taken]
    extra = tuple(rest[j] for j in _unrank_combination(len(rest), h, extra_idx))
    return ErasurePattern(per_group=tuple(pg), extra=extra)


# -- verification -------------------------------------------------------


@dataclass
class VerifyReport:
    ok: bool
    patterns_checked: int
    first_failure: ErasurePattern | None
    sampled: int | None  # None means exhaustive
    elapsed: float
    reason: str = ""


def _full_rank_square_char2(mat, exp, log, n1) -> bool:
    k = len(mat)
    for c in range(k):
        piv = -1
        for i in range(c, k):
            if mat[i][c]:
                piv = i
                break
        if piv < 0:
            return False
        prow = mat[piv]
        if piv != c:
            mat[piv] = mat[c]
            mat[c] = prow
        pl = log[prow[c]]
        for i in range(c + 1, k):
            row = mat[i]
            f = row[c]
            if f:
                shift = log[f] - pl + n1
                for t in range(c + 1, k):
                    v = prow[t]
                    if v:
                        row[t] ^= exp[(log[v] + shift) % n1]
    return True


def _full_rank_square_generic(F, mat) -> bool:
    sub, mul, inv = F.sub, F.mul, F.inv
    k = len(mat)
    for c in range(k):
        piv = -1
        for i in range(c, k):
            if mat[i][c]:
                piv = i
                break
        if piv < 0:
            return False
        prow = mat[piv]
        if piv != c:
            mat[piv] = mat[c]
            mat[c] = prow
        pinv = inv(prow[c])
        for i in range(c + 1, k):
            row = mat[i]
            g = row[c]
            if g:
                f = mul(g, pinv)
                for t in range(c + 1, k):
                    v = prow[t]
                    if v:
                        row[t] = sub(row[t], mul(f, v))
    return True


def verify_mr(P: MrParityCheck, budget: int | None = None,
              sample: int | None = None) -> VerifyReport:
    """Check the two parity-check conditions by enumeration.

    (a) the local block A passes the exhaustive MDS subset test;
    (b) for every erasure pattern the selected n*delta+h columns of H
        are independent.  Exhaustive unless `sample` is given, in which
        case an evenly strided subset of at least that many patterns is
        checked and the report is labelled accordingly.
    """
    t0 = perf_counter()
    spec = P.spec
    if not is_mds_parity_check(P.A, spec.delta):
        return VerifyReport(False, 0, None, None, perf_counter() - t0,
                            reason="local parity block is not MDS")
    total = pattern_count(spec)
    if sample is None and total > config.subset_budget(budget):
        raise BudgetError(
            f"{total} erasure patterns exceed the budget; pass a sample size"
        )
    F = spec.tower.field("top")
    k = spec.n * spec.delta + spec.h
    H = P.H
    cols = [tuple(H.at(i, j) for i in range(H.rows)) for j in range(H.cols)]
    tables = F.tables() if F.char == 2 else None
    checked = 0

    def pattern_ok(idxs) -> bool:
        mat = [list(cols[c]) for c in idxs]
        if tables is not None:
            exp, log = tables
            return _full_rank_square_char2(mat, exp, log, F.size - 1)
        return _full_rank_square_generic(F, mat)

    if sample is None:
        for pat in enumerate_patterns(spec):
            checked += 1
            if not pattern_ok(pat.columns()):
                return VerifyReport(False, checked, pat, None,
                                    perf_counter() - t0,
                                    reason="dependent erasure pattern")
        return VerifyReport(True, checked, None, None, perf_counter() - t0)
    if sample < 1:
        raise ParameterError("sample size must be positive")
    step = max(1, total // sample)
    for index in range(0, total, step):
        pat = pattern_at(spec, index)
        checked += 1
        if not pattern_ok(pat.columns()):
            return VerifyReport(False, checked, pat, checked,
                                perf_counter() - t0,
                                reason="dependent erasure pattern")
    return VerifyReport(True, checked, None, checked, perf_counter() - t0)


# -- codec --------------------------------------------------------------


def generator_from_parity(P: MrParityCheck) -> FieldMatrix:
    """k x N generator: a kernel basis of H, over the top field."""
    G = kernel(P.H)
    if G.rows != P.spec.k:
        raise ParameterError(
            f"parity check is rank deficient: kernel dimension {G.rows}, expected {P.spec.k}"
        )
    return G


def encode(G: FieldMatrix, msg) -> list[int]:
    """Codeword msg . G."""
    return vec_mat(msg, G)


@dataclass
class DecodeResult:
    ok: bool
    codeword: list[int] | None
    certificate: list[int] | None  # kernel vector over the erased columns
    reason: str = ""


def erase_decode(P: MrParityCheck, received, erased) -> DecodeResult:
    """Fill in the erased coordinates from the parity equations.

    Values at erased positions in `received` are ignored.  When the
    erased columns of H are independent the unique fill-in is returned;
    when they are dependent the failure carries a kernel vector of those
    columns as a certificate.
    """
    spec = P.spec
    received = list(received)
    if len(received) != spec.N:
        raise ParameterError("received word length mismatch")
    erased = sorted(set(erased))
    for e in erased:
        if not 0 <= e < spec.N:
            raise ParameterError(f"erased index {e} out of range")
    if not erased:
        return DecodeResult(True, received, None)
    F = spec.tower.field("top")
    H = P.H
    sub_rows = [[H.at(i, j) for j in erased] for i in range(H.rows)]
    M = FieldMatrix.from_rows(spec.tower, "top", sub_rows)
    ker = kernel(M)
    if ker.rows:
        return DecodeResult(False, None, ker.row(0),
                            reason="erased columns are dependent")
    erased_set = set(erased)
    syndrome = []
    for i in range(H.rows):
        acc = 0
        for j, v in enumerate(received):
            if v and j not in erased_set:
                acc = F.add(acc, F.mul(H.at(i, j), v))
        syndrome.append(F.neg(acc))
    from .linalg import solve

    x = solve(M, syndrome)
    if x is None:
        return DecodeResult(False, None, None,
                            reason="known coordinates are inconsistent")
    out = list(received)
    for pos, val in zip(erased, x):
        out[pos] = val
    return DecodeResult(True, out, None)
