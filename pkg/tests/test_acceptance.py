"""End-to-end acceptance suite.

One test per criterion; each prints a single PASS/FAIL line (visible
with ``pytest -s``).  The parameter grid is every
(q, r, delta, h, n) in {2,3,4} x {2,3} x {1..r-1} x {1,2} x {2..6}
whose construction preconditions hold.
"""

from __future__ import annotations

import random
from time import perf_counter

import pytest

from mrlrc import config
from mrlrc.cli import main as cli_main
from mrlrc.codes import (
    bch_parity_check,
    block_distance_at_least,
    block_min_distance,
    LinearCode,
)
from mrlrc.errors import BudgetError
from mrlrc.gf import make_tower
from mrlrc.linalg import FieldMatrix, _rank_rows
from mrlrc.mr import (
    MrCodeSpec,
    build_concatenated,
    build_direct,
    encode,
    erase_decode,
    generator_from_parity,
    moore_det,
    pattern_at,
    pattern_count,
    verify_mr,
)
from mrlrc.sdss import (
    bounds,
    from_block_code,
    gv_dimension,
    gv_greedy,
    mds_construct,
    restrict,
    to_block_code,
)

Q_SHAPES = ((2, 1), (3, 1), (2, 2))


def grid_points():
    for p, a in Q_SHAPES:
        q = p**a
        for r in (2, 3):
            for delta in range(1, r):
                for h in (1, 2):
                    for n in range(2, 7):
                        if h >= n:
                            continue  # the MDS system needs h < n
                        if n > q**r + 1:
                            continue
                        if n * r - n * delta - h < 1:
                            continue
                        if r > q + 1 and delta not in (1, r - 1):
                            continue
                        yield p, a, q, r, delta, h, n


_SDSS_CACHE: dict = {}
_CODE_CACHE: dict = {}


def grid_sdss(p, a, r, h, n):
    key = (p, a, r, h, n)
    if key not in _SDSS_CACHE:
        t = make_tower(p, a, h * r)
        _SDSS_CACHE[key] = mds_construct(t, n, r, h)
    return _SDSS_CACHE[key]


def grid_code(p, a, r, delta, h, n):
    key = (p, a, r, delta, h, n)
    if key not in _CODE_CACHE:
        S = grid_sdss(p, a, r, h, n)
        spec = MrCodeSpec(n=n, r=r, h=h, delta=delta, tower=S.tower)
        P = build_direct(spec, S)
        _CODE_CACHE[key] = (spec, P, generator_from_parity(P))
    return _CODE_CACHE[key]


def report(num: int, detail: str):
    print(f"\ncriterion {num}: PASS ({detail})")


def fail_line(num: int):
    print(f"\ncriterion {num}: FAIL")


def test_criterion_1_direct_construction_exhaustive():
    try:
        t0 = perf_counter()
        points = 0
        patterns = 0
        for p, a, q, r, delta, h, n in grid_points():
            spec, P, _ = grid_code(p, a, r, delta, h, n)
            rep = verify_mr(P)
            assert rep.ok, f"verification failed at {(q, r, delta, h, n)}"
            assert rep.sampled is None
            assert rep.patterns_checked == pattern_count(spec)
            points += 1
            patterns += rep.patterns_checked
        elapsed = perf_counter() - t0
        assert points > 0
        assert elapsed < 60.0, f"grid verification took {elapsed:.1f}s"
    except BaseException:
        fail_line(1)
        raise
    report(1, f"{points} grid points, {patterns} patterns, {elapsed:.1f}s")


def test_criterion_2_field_size_identities(tmp_path, capsys):
    try:
        for p, a, q, r, delta, h, n in grid_points():
            S = grid_sdss(p, a, r, h, n)
            assert S.m == h * r  # exact, tolerance 0
            spec, P, _ = grid_code(p, a, r, delta, h, n)
            assert spec.ell == q ** (h * r)
        # the n = q^r + 1 showcase over F_64
        code = cli_main([
            "construct", "--p", "2", "--a", "1", "--r", "3", "--h", "2",
            "--delta", "1", "--n", "9", "--method", "direct", "--sdss", "mds",
            "--out", str(tmp_path / "n9.mr"),
        ])
        out = capsys.readouterr().out
        assert code == 0
        summary = out.splitlines()[0]
        assert "ell=2^6" in summary
        assert 2**6 == 64
    except BaseException:
        fail_line(2)
        raise
    report(2, "m = h*r and ell = q^(h*r) on the whole grid; ell=2^6 at n=9")


def test_criterion_3_concatenated_bch_instance():
    try:
        t0 = perf_counter()
        inner = bch_parity_check(4, 2)  # [15, 7, 5]
        assert (15 - inner.rows, LinearCode.from_parity(inner).min_distance()) == (7, 5)
        s = inner.rows
        assert s == 8
        t16 = make_tower(2, 1, 16)
        inner16 = FieldMatrix(t16, "mid", inner.rows, inner.cols, inner.data)
        S3 = mds_construct(t16, 3, s, 2)
        checked = {}
        for n in (2, 3):
            S = S3 if n == 3 else restrict(S3, 2)
            spec = MrCodeSpec(n=n, r=15, h=2, delta=1, tower=t16)
            assert spec.N == 15 * n
            assert spec.ell == 2**16 == (15 + 1) ** (2 * 2)
            P = build_concatenated(spec, S, inner16)
            if n == 2:
                rep = verify_mr(P)
                assert rep.ok and rep.sampled is None
                assert rep.patterns_checked == pattern_count(spec)
            else:
                rep = verify_mr(P, sample=10**5)
                assert rep.ok and rep.sampled is not None
                assert rep.patterns_checked >= 10**5
            checked[n] = rep.patterns_checked
        elapsed = perf_counter() - t0
        assert elapsed < 300.0, f"took {elapsed:.1f}s"
    except BaseException:
        fail_line(3)
        raise
    report(3, f"ell=2^16; n=2 exhaustive {checked[2]}, n=3 sampled {checked[3]}, {elapsed:.1f}s")


def test_criterion_4_bounds_consistency_and_greedy_completion():
    try:
        seen = set()
        greedy_runs = 0
        for p, a, q, r, delta, h, n in grid_points():
            S = grid_sdss(p, a, r, h, n)
            rep = bounds(q, n, r, h)
            assert S.m >= rep.hamming_lower
            assert S.m >= h * r == rep.singleton_lower
            key = (p, a, r, h, n)
            if key in seen:
                continue
            seen.add(key)
            m = gv_dimension(q, n, r, h)
            G = gv_greedy(make_tower(p, a, m), n, r, h)
            assert G.certified and G.m == m == rep.gv_m
            greedy_runs += 1
    except BaseException:
        fail_line(4)
        raise
    report(4, f"bounds hold on the grid; greedy completed {greedy_runs}/{greedy_runs} runs")


def test_criterion_5_moore_determinant_oracle():
    try:
        t16 = make_tower(2, 1, 4)
        Fq = t16.field("mid")
        pairs = 0
        for x in range(1, 16):
            for y in range(1, 16):
                det = moore_det(t16, [x, y])  # raises on formula/elimination mismatch
                indep = _rank_rows(Fq, [t16.top_to_vec(x), t16.top_to_vec(y)]) == 2
                assert (det != 0) == indep
                pairs += 1
        assert pairs == 225
        t64 = make_tower(2, 1, 6)
        Fq64 = t64.field("mid")
        rng = random.Random(2024)
        triples = 0
        for _ in range(10**4):
            alphas = [rng.randrange(64) for _ in range(3)]
            det = moore_det(t64, alphas)
            vecs = [t64.top_to_vec(v) for v in alphas]
            indep = _rank_rows(Fq64, vecs) == 3
            assert (det != 0) == indep
            triples += 1
    except BaseException:
        fail_line(5)
        raise
    report(5, f"{pairs} pairs over F_16 and {triples} triples over F_64, zero mismatches")


def test_criterion_6_block_code_round_trip():
    try:
        seen = set()
        enumerated = 0
        rank_routed = 0
        for p, a, q, r, delta, h, n in grid_points():
            key = (p, a, r, h, n)
            if key in seen:
                continue
            seen.add(key)
            S = grid_sdss(p, a, r, h, n)
            B = to_block_code(S)
            if q**B.dim <= config.CODEBOOK_BUDGET:
                assert block_min_distance(B) >= h + 1
                enumerated += 1
            else:
                # the enumeration route is out of scope by its own
                # precondition; the exact rank route must agree
                with pytest.raises(BudgetError):
                    block_min_distance(B)
                assert block_distance_at_least(B, h)
                rank_routed += 1
            S2 = from_block_code(B, h)
            assert S2.certified
            assert (S2.n, S2.r, S2.h) == (S.n, S.r, S.h)
            assert S2.m <= S.m
    except BaseException:
        fail_line(6)
        raise
    report(6, f"{enumerated} systems via enumeration, {rank_routed} via the exact rank route")


def test_criterion_7_decode_round_trip():
    try:
        rng = random.Random(777)
        total_runs = 0
        for p, a, q, r, delta, h, n in grid_points():
            spec, P, G = grid_code(p, a, r, delta, h, n)
            npat = pattern_count(spec)
            ell = spec.ell
            for j in range(1000):
                msg = [rng.randrange(ell) for _ in range(spec.k)]
                cw = encode(G, msg)
                pat = pattern_at(spec, j % npat)
                cols = pat.columns()
                rx = list(cw)
                for c in cols:
                    rx[c] = 0
                res = erase_decode(P, rx, cols)
                assert res.ok and res.codeword == cw, (
                    f"decode failed at {(q, r, delta, h, n)} pattern {j % npat}"
                )
                total_runs += 1
    except BaseException:
        fail_line(7)
        raise
    report(7, f"{total_runs} encode/erase/decode round trips, zero failures")


def test_criterion_8_construct_determinism(tmp_path, capsys):
    try:
        cases = [
            ["construct", "--p", "2", "--r", "3", "--h", "2", "--delta", "1",
             "--n", "5", "--method", "direct", "--sdss", "mds"],
            ["construct", "--p", "3", "--r", "2", "--h", "2", "--delta", "1",
             "--n", "4", "--method", "direct", "--sdss", "gv"],
            ["construct", "--p", "2", "--r", "2", "--h", "2", "--delta", "1",
             "--n", "5", "--method", "direct", "--sdss", "subfield", "--u", "1"],
            ["construct", "--p", "2", "--r", "15", "--h", "2", "--delta", "1",
             "--n", "2", "--method", "concat", "--inner", "bch:15:2"],
        ]
        for idx, argv in enumerate(cases):
            outs = []
            for run in (0, 1):
                path = tmp_path / f"case{idx}_run{run}.mr"
                assert cli_main(argv + ["--out", str(path)]) == 0
                outs.append((path.read_bytes(),
                             (tmp_path / f"case{idx}_run{run}.mr.sdss").read_bytes()))
            assert outs[0] == outs[1]
        capsys.readouterr()
    except BaseException:
        fail_line(8)
        raise
    report(8, f"{len(cases)} construct commands byte-identical across runs")
