"""Component linear codes: MDS parity checks, binary BCH, subfield
subcodes, and block codes over F_q^{nr} under the block Hamming metric.

Distance claims are never trusted: every constructor re-checks its
designed distance by exhaustive codeword enumeration whenever the
codebook fits the configured budget.
"""

from __future__ import annotations

from itertools import combinations

from . import config
from .errors import BudgetError, ParameterError
from .gf import Field, FieldTower, make_tower
from .linalg import FieldMatrix, kernel, rank, rref, _rank_rows


class LinearCode:
    """A linear code presented by a generator and/or parity-check matrix."""

    def __init__(self, tower: FieldTower, level: str, length: int,
                 generator: FieldMatrix | None = None,
                 parity: FieldMatrix | None = None):
        if generator is None and parity is None:
            raise ParameterError("need a generator or a parity-check matrix")
        for M, name in ((generator, "generator"), (parity, "parity")):
            if M is None:
                continue
            if M.cols != length or M.level != level or M.tower != tower:
                raise ParameterError(f"{name} matrix does not match the code frame")
            if rank(M) != M.rows:
                raise ParameterError(f"{name} rows are dependent")
        self.tower = tower
        self.level = level
        self.length = length
        self._generator = generator
        self._parity = parity
        self._min_distance = None
        if generator is not None and parity is not None:
            self._check_duality()

    @classmethod
    def from_parity(cls, parity: FieldMatrix) -> "LinearCode":
        return cls(parity.tower, parity.level, parity.cols, parity=parity)

    @classmethod
    def from_generator(cls, generator: FieldMatrix) -> "LinearCode":
        return cls(generator.tower, generator.level, generator.cols, generator=generator)

    def _check_duality(self):
        F = self.field()
        G, H = self._generator, self._parity
        for i in range(G.rows):
            grow = G.row(i)
            for j in range(H.rows):
                hrow = H.row(j)
                acc = 0
                for a, b in zip(grow, hrow):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                if acc:
                    raise ParameterError("generator and parity matrices disagree")

    def field(self) -> Field:
        return self.tower.field(self.level)

    @property
    def dim(self) -> int:
        if self._generator is not None:
            return self._generator.rows
        return self.length - self._parity.rows

    def generator_matrix(self) -> FieldMatrix:
        if self._generator is None:
            self._generator = kernel(self._parity)
        return self._generator

    def parity_matrix(self) -> FieldMatrix:
        if self._parity is None:
            self._parity = kernel(self._generator)
        return self._parity

    def min_distance(self, budget: int | None = None) -> int:
        """Exact minimum Hamming distance by exhaustive enumeration."""
        if self._min_distance is None:
            if self.dim == 0:
                self._min_distance = self.length + 1
            else:
                _check_codebook(self.field().size, self.dim, budget)
                self._min_distance = _min_weight(
                    self.field(), self.generator_matrix().to_rows(), 1
                )
        return self._min_distance

    def __repr__(self):
        return f"LinearCode(n={self.length}, k={self.dim}, level={self.level})"


class BlockCode:
    """A linear code over F_q^{n*r} measured in the block Hamming metric."""

    def __init__(self, code: LinearCode, block_size: int):
        if block_size < 1 or code.length % block_size:
            raise ParameterError("length must be a multiple of the block size")
        self.code = code
        self.block_size = block_size
        self.n_blocks = code.length // block_size

    @property
    def dim(self) -> int:
        return self.code.dim

    def __repr__(self):
        return f"BlockCode(n={self.n_blocks}, r={self.block_size}, k={self.dim})"


def _check_codebook(q: int, k: int, budget: int | None):
    cap = config.codebook_budget(budget)
    if q**k > cap:
        raise BudgetError(f"codebook {q}^{k} exceeds the budget {cap}")


def _min_weight(F: Field, gen_rows: list[list[int]], block: int) -> int:
    """Minimum block weight over the nonzero span of gen_rows.

    Walks all q^k messages in reflected Gray order so that each step
    changes one message digit by one, keeping the running codeword
    update O(n).  Zero codewords from dependent rows are skipped.
    """
    k = len(gen_rows)
    n = len(gen_rows[0])
    q = F.size
    nb = n // block
    if F.char == 2:
        bits = (q - 1).bit_length()

        def pack(row):
            acc = 0
            for t, sym in enumerate(row):
                acc |= sym << (t * bits)
            return acc

        deltas = []
        for row in gen_rows:
            per_digit = []
            for d in range(q - 1):
                step = F.sub(d + 1, d)
                per_digit.append(pack([F.mul(step, e) for e in row]))
            deltas.append(per_digit)
        bw = block * bits
        masks = [((1 << bw) - 1) << (i * bw) for i in range(nb)]
        cw = 0
        best = nb + 1
        a = [0] * k
        f = list(range(k + 1))
        o = [1] * k
        qm1 = q - 1
        while True:
            j = f[0]
            f[0] = 0
            if j == k:
                break
            if o[j] == 1:
                d = a[j]
                a[j] = d + 1
            else:
                a[j] -= 1
                d = a[j]
            cw ^= deltas[j][d]
            aj = a[j]
            if aj == 0 or aj == qm1:
                o[j] = -o[j]
                f[j] = f[j + 1]
                f[j + 1] = j + 1
            w = 0
            for msk in masks:
                if cw & msk:
                    w += 1
                    if w >= best:
                        break
            if 0 < w < best:
                best = w
                if best == 1:
                    break
        return best

    add = F.add
    ups = []
    downs = []
    for row in gen_rows:
        up_digit = []
        dn_digit = []
        for d in range(q - 1):
            step = F.sub(d + 1, d)
            up = [F.mul(step, e) for e in row]
            up_digit.append(up)
            dn_digit.append([F.neg(e) for e in up])
        ups.append(up_digit)
        downs.append(dn_digit)
    bounds = [(i * block, (i + 1) * block) for i in range(nb)]
    cw = [0] * n
    best = nb + 1
    a = [0] * k
    f = list(range(k + 1))
    o = [1] * k
    qm1 = q - 1
    while True:
        j = f[0]
        f[0] = 0
        if j == k:
            break
        if o[j] == 1:
            d = a[j]
            a[j] = d + 1
            row = ups[j][d]
        else:
            a[j] -= 1
            row = downs[j][a[j]]
        for t, dv in enumerate(row):
            if dv:
                cw[t] = add(cw[t], dv)
        aj = a[j]
        if aj == 0 or aj == qm1:
            o[j] = -o[j]
            f[j] = f[j + 1]
            f[j + 1] = j + 1
        w = 0
        for lo, hi in bounds:
            t = lo
            while t < hi:
                if cw[t]:
                    w += 1
                    break
                t += 1
            if w >= best:
                break
        if 0 < w < best:
            best = w
            if best == 1:
                break
    return best


def rs_parity_check(t: FieldTower, level: str, r: int, delta: int) -> FieldMatrix:
    """delta x r parity check of an [r, r-delta, delta+1] MDS code.

    Vandermonde rows over the first r field elements in enumeration
    order; for r = field size + 1 the construction is extended by the
    extra column (0, ..., 0, 1)^T.
    """
    F = t.field(level)
    s = F.size
    if not 1 <= delta <= r - 1:
        raise ParameterError("need 1 <= delta <= r-1")
    if r > s + 1:
        raise ParameterError(
            f"length {r} exceeds {s}+1; no MDS code of this shape is guaranteed"
        )
    nodes = list(range(min(r, s)))
    rows = [[F.pow(x, j) for x in nodes] for j in range(delta)]
    if r == s + 1:
        for j in range(delta):
            rows[j].append(1 if j == delta - 1 else 0)
    A = FieldMatrix.from_rows(t, level, rows)
    from .linalg import is_mds_parity_check

    if not is_mds_parity_check(A, delta):
        raise AssertionError("MDS parity check failed its own subset test")
    return A


def bch_parity_check(t_exp: int, delta: int) -> FieldMatrix:
    """Binary parity check of the narrow-sense BCH code of length 2^t_exp - 1
    with designed distance 2*delta + 1.

    Rows are the F_2 coordinate expansions of the power rows beta^(i*j)
    for the odd exponents i = 1, 3, ..., 2*delta-1, with beta a primitive
    element (the residue of the defining polynomial's variable when that
    happens to be primitive, else the first primitive element in code
    order).  Redundant rows are removed by row reduction.
    """
    n = 2**t_exp - 1
    if delta < 1:
        raise ParameterError("delta must be >= 1")
    if delta * t_exp >= n:
        raise ParameterError("designed distance too large for this length")
    t = make_tower(2, 1, t_exp)
    F = t.field("top")
    beta = 2
    if not F.is_generator(beta):
        beta = next(c for c in F.elements() if F.is_generator(c))
    rows = []
    for i in range(1, 2 * delta, 2):
        root = F.pow(beta, i)
        power_row = [F.pow(root, j) for j in range(n)]
        vecs = [t.top_to_vec(e) for e in power_row]
        for coord in range(t_exp):
            rows.append([v[coord] for v in vecs])
    f2 = make_tower(2)
    R, rk, _ = rref(FieldMatrix.from_rows(f2, "prime", rows))
    H = FieldMatrix.from_rows(f2, "prime", R.to_rows()[:rk])
    k = n - rk
    if 2**k <= config.codebook_budget():
        code = LinearCode.from_parity(H)
        if code.min_distance() < 2 * delta + 1:
            raise AssertionError("BCH code misses its designed distance")
    return H


def subfield_subcode(H: FieldMatrix) -> FieldMatrix:
    """Parity check over F_q of the F_q-rational codewords of the code
    with parity check H over F_{q^u}.

    Each top-level parity row expands into u rows of coordinates over
    F_q; the stack is row-reduced and zero rows dropped.
    """
    if H.level != "top":
        raise ParameterError("parent parity check must live at the top level")
    t = H.tower
    u = t.m
    rows = []
    for i in range(H.rows):
        vecs = [t.top_to_vec(e) for e in H.row(i)]
        for coord in range(u):
            rows.append([v[coord] for v in vecs])
    if not rows:
        return FieldMatrix(t, "mid", 0, H.cols, [])
    R, rk, _ = rref(FieldMatrix.from_rows(t, "mid", rows))
    return FieldMatrix.from_rows(t, "mid", R.to_rows()[:rk]) if rk else FieldMatrix(
        t, "mid", 0, H.cols, []
    )


def pi_expand(C: LinearCode) -> BlockCode:
    """Expand a code over F_{q^r} into a block code over F_q.

    Every codeword symbol becomes its r coordinates over F_q, so the
    dimension multiplies by r and block distance equals the parent
    Hamming distance.
    """
    if C.level != "top":
        raise ParameterError("parent code must live at the top level")
    t = C.tower
    r = t.m
    F = C.field()
    lam = t.fq_basis()
    G = C.generator_matrix()
    rows = []
    for gi in G.to_rows():
        for l in lam:
            row = []
            for sym in gi:
                row.extend(t.top_to_vec(F.mul(l, sym)))
            rows.append(row)
    if not rows:
        empty = FieldMatrix(t, "mid", 0, C.length * r, [])
        return BlockCode(LinearCode.from_generator(empty), r)
    Gb = FieldMatrix.from_rows(t, "mid", rows)
    if rank(Gb) != G.rows * r:
        raise AssertionError("block expansion lost dimension")
    return BlockCode(LinearCode.from_generator(Gb), r)


def block_weight(v, r: int) -> int:
    """Number of nonzero length-r blocks of v."""
    v = list(v)
    if r < 1 or len(v) % r:
        raise ParameterError("vector length must be a multiple of r")
    return sum(1 for i in range(0, len(v), r) if any(v[i : i + r]))


def block_min_distance(B: BlockCode, budget: int | None = None) -> int:
    """Minimum block weight over nonzero codewords, by exhaustive
    message enumeration; n+1 for the zero-dimensional code."""
    k = B.dim
    if k == 0:
        return B.n_blocks + 1
    F = B.code.field()
    _check_codebook(F.size, k, budget)
    return _min_weight(F, B.code.generator_matrix().to_rows(), B.block_size)


def block_distance_at_least(B: BlockCode, t: int, budget: int | None = None) -> bool:
    """Exact test d_B(B) >= t+1 via parity-column ranks.

    Equivalent to the enumeration route: a nonzero codeword supported on
    some t blocks exists iff those t*r parity columns are dependent.
    Exhausts all C(n, t) block subsets.
    """
    if t < 0:
        raise ParameterError("t must be >= 0")
    if t == 0:
        return True
    n, r = B.n_blocks, B.block_size
    total = 1
    for i in range(t):
        total = total * (n - i) // (i + 1)
    if total > config.subset_budget(budget):
        raise BudgetError(f"{total} block subsets exceed the budget")
    H = B.code.parity_matrix()
    cols = [H.column(j) for j in range(H.cols)]
    F = B.code.field()
    for sel in combinations(range(n), t):
        chosen = [cols[b * r + j] for b in sel for j in range(r)]
        if _rank_rows(F, chosen) != t * r:
            return False
    return True
