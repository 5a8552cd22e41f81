"""Subspace direct sum systems: n subspaces of F_q^m, each of dimension
r, any h of which intersect only trivially so their sum has dimension
h*r.  Provides exhaustive verification, three deterministic
constructions (greedy counting, MDS-based, subfield-based), the
equivalence with block codes, and the lower/upper bounds on the least
ambient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from . import config
from .codes import BlockCode, LinearCode, block_min_distance
from .errors import BudgetError, ParameterError
from .gf import FieldTower, make_tower
from .linalg import FieldMatrix, rref, _rank_rows


class SubspaceSystem:
    """n groups of r basis vectors in F_q^m (coordinates over F_q).

    `certified` records that every h-subset of subspaces has been checked
    to sum directly; `certified_sample` is None for an exhaustive check
    and the number of subsets tried otherwise.  MR constructors reject
    uncertified systems.
    """

    def __init__(self, tower: FieldTower, n: int, r: int, h: int, basis,
                 certified: bool = False, certified_sample: int | None = None):
        if n < 1 or r < 1 or h < 1:
            raise ParameterError("need n, r, h >= 1")
        if h > n:
            raise ParameterError("h cannot exceed the number of subspaces")
        basis = [[tuple(v) for v in group] for group in basis]
        if len(basis) != n or any(len(g) != r for g in basis):
            raise ParameterError("basis must hold n groups of r vectors")
        m = tower.m
        q = tower.q
        for group in basis:
            for v in group:
                if len(v) != m or any(not 0 <= c < q for c in v):
                    raise ParameterError("basis vector does not live in F_q^m")
        self.tower = tower
        self.n = n
        self.r = r
        self.h = h
        self.basis = basis
        self.certified = certified
        self.certified_sample = certified_sample

    @property
    def m(self) -> int:
        return self.tower.m

    def parity_matrix(self) -> FieldMatrix:
        """m x (n*r) matrix whose column groups are the subspace bases."""
        cols = [v for group in self.basis for v in group]
        rows = [[cols[j][i] for j in range(len(cols))] for i in range(self.m)]
        return FieldMatrix.from_rows(self.tower, "mid", rows)

    def __repr__(self):
        flag = "certified" if self.certified else "uncertified"
        return f"SubspaceSystem(q={self.tower.q}, n={self.n}, m={self.m}, r={self.r}, h={self.h}, {flag})"


def verify_direct_sum(S: SubspaceSystem, budget: int | None = None) -> bool:
    """True iff every group has rank r and every h-subset of groups
    stacks to rank h*r.  Exhausts all C(n, h) subsets."""
    total = comb(S.n, S.h)
    if total > config.subset_budget(budget):
        raise BudgetError(f"{total} subsets exceed the enumeration budget")
    F = S.tower.field("mid")
    for group in S.basis:
        if _rank_rows(F, group) != S.r:
            return False
    for sel in combinations(range(S.n), S.h):
        stacked = [v for i in sel for v in S.basis[i]]
        if _rank_rows(F, stacked) != S.h * S.r:
            return False
    return True


def _certify(S: SubspaceSystem, budget: int | None = None) -> SubspaceSystem:
    total = comb(S.n, S.h)
    cap = config.subset_budget(budget)
    if total <= cap:
        if not verify_direct_sum(S, budget):
            raise AssertionError("construction produced a non-direct system")
        S.certified = True
        S.certified_sample = None
        return S
    # sampled certification: every k-th subset, deterministically
    step = max(1, total // cap)
    F = S.tower.field("mid")
    checked = 0
    for idx, sel in enumerate(combinations(range(S.n), S.h)):
        if idx % step:
            continue
        stacked = [v for i in sel for v in S.basis[i]]
        if _rank_rows(F, stacked) != S.h * S.r:
            raise AssertionError("construction produced a non-direct system")
        checked += 1
    S.certified = True
    S.certified_sample = checked
    return S


# -- bounds ------------------------------------------------------------


def _floor_log(q: int, s: int) -> int:
    e = 0
    v = q
    while v <= s:
        e += 1
        v *= q
    return e


def _ceil_log(q: int, s: int) -> int:
    e = 0
    v = 1
    while v < s:
        e += 1
        v *= q
    return e


def gv_dimension(q: int, n: int, r: int, h: int) -> int:
    """Smallest ambient dimension the greedy counting argument certifies:
    r + floor(log_q sum_{i<h} C(n-1,i) (q^r-1)^i), in exact integers."""
    total = sum(comb(n - 1, i) * (q**r - 1) ** i for i in range(h))
    return r + _floor_log(q, total)


@dataclass(frozen=True)
class BoundsReport:
    gv_m: int
    hamming_lower: int
    singleton_lower: int


def bounds(q: int, n: int, r: int, h: int) -> BoundsReport:
    """Greedy upper bound and the packing/Singleton lower bounds on the
    least ambient dimension admitting a system with these parameters."""
    if h < 1 or n < 1 or r < 1:
        raise ParameterError("need n, r, h >= 1")
    gv_m = gv_dimension(q, n, r, h)
    if h >= 2:
        total = sum(comb(n, i) * (q**r - 1) ** i for i in range(h // 2 + 1))
        hamming = _ceil_log(q, total)
    else:
        hamming = h * r
    return BoundsReport(gv_m=gv_m, hamming_lower=hamming, singleton_lower=h * r)


# -- constructions -----------------------------------------------------


def _vec_of_code(code: int, q: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        code, d = divmod(code, q)
        out.append(d)
    return tuple(out)


def _reduce_against(F, echelon, vec):
    """Reduce vec against rows of an echelon basis; None if it reduces
    to zero (i.e. lies in the span), else the reduced remainder."""
    sub, mul = F.sub, F.mul
    v = list(vec)
    for pivot_col, row in echelon:
        c = v[pivot_col]
        if c:
            for t in range(pivot_col, len(v)):
                if row[t]:
                    v[t] = sub(v[t], mul(c, row[t]))
    for t, c in enumerate(v):
        if c:
            return t, v
    return None


def _echelon_insert(F, echelon, reduced):
    pivot_col, v = reduced
    inv = F.inv(v[pivot_col])
    if inv != 1:
        v = [F.mul(inv, c) for c in v]
    echelon.append((pivot_col, v))
    echelon.sort(key=lambda e: e[0])


def gv_greedy(t: FieldTower, n: int, r: int, h: int) -> SubspaceSystem:
    """Greedy construction backed by the counting argument.

    Seeds the first h groups with unit vectors, then fills every later
    slot with the first vector (ascending code order) outside the span
    of every (h-1)-subset of earlier groups joined with the partial
    group being built.  Refuses ambient dimensions below gv_dimension,
    where the guarantee of finding such a vector is void.
    """
    q, m = t.q, t.m
    if not 1 <= h <= n:
        raise ParameterError("need 1 <= h <= n")
    need = gv_dimension(q, n, r, h)
    if m < need:
        raise ParameterError(
            f"ambient dimension {m} is below the greedy guarantee {need}"
        )
    F = t.field("mid")
    basis = []
    for i in range(h):
        group = []
        for j in range(r):
            v = [0] * m
            v[i * r + j] = 1
            group.append(tuple(v))
        basis.append(group)
    for i in range(h, n):
        group: list[tuple[int, ...]] = []
        for _ in range(r):
            spans = []
            for subset in combinations(range(i), h - 1):
                rows = [v for g in subset for v in basis[g]] + group
                echelon = []
                for row in rows:
                    red = _reduce_against(F, echelon, row)
                    if red is not None:
                        _echelon_insert(F, echelon, red)
                spans.append(echelon)
            for code in range(q**m):
                v = _vec_of_code(code, q, m)
                if all(_reduce_against(F, sp, v) is not None for sp in spans):
                    group.append(v)
                    break
            else:
                raise AssertionError("greedy scan exhausted; counting bound violated")
        basis.append(group)
    return _certify(SubspaceSystem(t, n, r, h, basis))


def mds_construct(t: FieldTower, n: int, r: int, h: int) -> SubspaceSystem:
    """System with the optimal ambient dimension m = h*r, from the
    parity check of a q^r-ary [n, n-h, h+1] MDS code: group i is the
    F_q-expansion of the scalar multiples of the i-th parity column."""
    from .codes import rs_parity_check

    q = t.q
    if not 1 <= h < n:
        raise ParameterError("need 1 <= h < n")
    if n > q**r + 1:
        raise ParameterError(f"n={n} exceeds q^r+1={q ** r + 1}")
    if t.m != h * r:
        raise ParameterError(f"ambient tower must have extension degree h*r={h * r}")
    helper = make_tower(t.p, t.a, r)
    H = rs_parity_check(helper, "top", n, h)
    Ftop = helper.field("top")
    lam = helper.fq_basis()
    basis = []
    for i in range(n):
        col = [H.at(s, i) for s in range(h)]
        group = []
        for l in lam:
            vec: list[int] = []
            for entry in col:
                vec.extend(helper.top_to_vec(Ftop.mul(l, entry)))
            group.append(tuple(vec))
        basis.append(group)
    return _certify(SubspaceSystem(t, n, r, h, basis))


def _subfield_inside(t: FieldTower, u: int):
    """F_q-basis of the subfield F_{q^u} inside the top field of t,
    as the fixed space of the u-th Frobenius power."""
    m = t.m
    F = t.field("mid")
    ybasis = t.fq_basis()
    rows = []
    for j in range(m):
        img = t.field("top").sub(t.frobenius(ybasis[j], u), ybasis[j])
        rows.append(t.top_to_vec(img))
    # kernel of z -> z^(q^u) - z, written on the polynomial basis
    M = FieldMatrix.from_rows(t, "mid", [[rows[j][i] for j in range(m)] for i in range(m)])
    from .linalg import kernel

    K = kernel(M)
    if K.rows != u:
        raise AssertionError("fixed field has unexpected dimension")
    return [t.vec_to_top(K.row(i)) for i in range(K.rows)]


def _ell_basis(t: FieldTower, ell_basis_fq: list[int], r: int) -> list[int]:
    """Greedy F_{q^u}-basis of the top field, in ascending code order."""
    F = t.field("top")
    Fq = t.field("mid")
    echelon: list = []
    chosen: list[int] = []
    for code in range(1, F.size):
        red = _reduce_against(Fq, echelon, t.top_to_vec(code))
        if red is None:
            continue
        chosen.append(code)
        for g in ell_basis_fq:
            red2 = _reduce_against(Fq, echelon, t.top_to_vec(F.mul(g, code)))
            if red2 is not None:
                _echelon_insert(Fq, echelon, red2)
        if len(chosen) == r:
            return chosen
    raise AssertionError("top field too small for the requested basis")


def subfield_construct(t: FieldTower, u: int, r: int, h: int) -> SubspaceSystem:
    """System with n = 1 + q^(u*r) groups by cutting the MDS block
    construction over F_{q^u} down to F_q coordinates.

    Only the base field of t (p, a) is used; the returned system lives
    in a tower whose extension degree is the achieved parity rank,
    which is at most h*u*r.
    """
    from .codes import rs_parity_check

    if u < 1 or r < 1:
        raise ParameterError("need u, r >= 1")
    q = t.q
    n = 1 + q ** (u * r)
    if not 1 <= h < n:
        raise ParameterError("need 1 <= h < n")
    big = make_tower(t.p, t.a, u * r)
    H = rs_parity_check(big, "top", n, h)
    Ftop = big.field("top")
    if u == 1:
        bvecs = big.fq_basis()
    else:
        ell_fq = _subfield_inside(big, u)
        bvecs = _ell_basis(big, ell_fq, r)
    ur = u * r
    rows = []
    for s in range(h):
        expanded = []
        for j in range(n):
            hij = H.at(s, j)
            for b in bvecs:
                expanded.append(big.top_to_vec(Ftop.mul(hij, b)))
        for coord in range(ur):
            rows.append([vec[coord] for vec in expanded])
    Hq = FieldMatrix.from_rows(big, "mid", rows)
    R, rk, _ = rref(Hq)
    Hq = FieldMatrix.from_rows(big, "mid", R.to_rows()[:rk])
    block = BlockCode(LinearCode.from_parity(Hq), r)
    return from_block_code(block, h)


def restrict(S: SubspaceSystem, n_new: int) -> SubspaceSystem:
    """The system on the first n_new groups; direct sums are inherited,
    but the result is re-certified from scratch anyway."""
    if not S.h <= n_new <= S.n:
        raise ParameterError("need h <= n_new <= n")
    sub = SubspaceSystem(S.tower, n_new, S.r, S.h, S.basis[:n_new])
    return _certify(sub)


# -- block-code equivalence --------------------------------------------


def to_block_code(S: SubspaceSystem) -> BlockCode:
    """Block code whose parity check stacks the subspace bases as column
    groups; dimension >= n*r - m and block distance >= h+1."""
    if not S.certified:
        raise ParameterError("refusing to convert an uncertified system")
    return BlockCode(LinearCode.from_parity(S.parity_matrix()), S.r)


def from_block_code(B: BlockCode, h: int, budget: int | None = None) -> SubspaceSystem:
    """System spanned by the column groups of a dual generator matrix.

    The distance precondition d_B >= h+1 is checked by exhaustive
    enumeration when the codebook fits the budget and otherwise left to
    the direct-sum certification that follows.
    """
    if h < 1:
        raise ParameterError("need h >= 1")
    n, r = B.n_blocks, B.block_size
    F = B.code.field()
    k = B.dim
    if F.size**k <= config.codebook_budget(budget) and k > 0:
        if block_min_distance(B, budget) < h + 1:
            raise ParameterError("block distance below h+1")
    H = B.code.parity_matrix()
    R, rk, _ = rref(H)
    m = rk
    if m == 0:
        raise ParameterError("code is the full space; no system exists")
    dual_rows = R.to_rows()[:rk]
    t = B.code.tower
    ambient = make_tower(t.p, t.a, m)
    basis = []
    for i in range(n):
        group = [tuple(dual_rows[w][i * r + j] for w in range(m)) for j in range(r)]
        basis.append(group)
    S = SubspaceSystem(ambient, n, r, h, basis)
    return _certify(S, budget)
