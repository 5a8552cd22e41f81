"""Command-line front end.

Subcommands: construct, verify, bounds, encode, decode, sdss.
Exit codes are a stable contract: 0 success, 1 domain-level negative
result (verification FAIL, UNDECODABLE), 2 usage or file format error,
3 enumeration budget exceeded.  Every construction is deterministic, so
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fileio, mr, sdss
from .codes import bch_parity_check, rs_parity_check
from .errors import BudgetError, FormatError, MrlrcError, ParameterError
from .gf import make_tower, tower_line

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _add_tower_args(p):
    p.add_argument("--p", type=int, required=True, help="field characteristic (prime)")
    p.add_argument("--a", type=int, default=1, help="degree of F_q over F_p (q = p^a)")


def _add_common(p):
    p.add_argument("--budget", type=int, default=None,
                   help="override the enumeration budgets")
    p.add_argument("--seedless", action="store_true",
                   help="accepted for compatibility; constructions are always deterministic")
    p.add_argument("-v", "--verbose", action="store_true")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mrlrc",
        description="Construct, verify and run maximally recoverable local reconstruction codes.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build an MR code (and its subspace system)")
    _add_tower_args(c)
    c.add_argument("--n", type=int, required=True, help="number of local groups")
    c.add_argument("--r", type=int, required=True, help="local group size")
    c.add_argument("--h", type=int, required=True, help="global parities")
    c.add_argument("--delta", type=int, required=True, help="local parities per group")
    c.add_argument("--method", choices=("direct", "concat"), default="direct")
    c.add_argument("--sdss", choices=("gv", "mds", "subfield"), default="mds")
    c.add_argument("--u", type=int, default=1, help="subfield construction degree")
    c.add_argument("--m", type=int, default=None,
                   help="ambient dimension override (default: the method's value)")
    c.add_argument("--inner", default=None,
                   help="inner code for concat: bch:<r>:<delta> or rs:<r>:<s>")
    c.add_argument("--out", required=True, help="MR parity file path")
    c.add_argument("--sdss-out", default=None,
                   help="subspace system file path (default: <out>.sdss)")
    _add_common(c)

    s = sub.add_parser("sdss", help="build a subspace direct sum system alone")
    _add_tower_args(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--sdss", choices=("gv", "mds", "subfield"), default="mds")
    s.add_argument("--u", type=int, default=1)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--out", required=True)
    _add_common(s)

    v = sub.add_parser("verify", help="re-verify a stored artifact by enumeration")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--sample", type=int, default=None,
                   help="check an evenly strided sample instead of everything")
    _add_common(v)

    b = sub.add_parser("bounds", help="ambient-dimension bounds for given parameters")
    _add_tower_args(b)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--h", type=int, required=True)
    b.add_argument("--achieved", default=None,
                   help="subspace system file to compare against the bounds")
    _add_common(b)

    e = sub.add_parser("encode", help="encode a message file")
    e.add_argument("--in", dest="infile", required=True, help="MR parity file")
    e.add_argument("message", help="message file, one element code per line")
    e.add_argument("--out", required=True)
    _add_common(e)

    d = sub.add_parser("decode", help="fill erased positions of a received word")
    d.add_argument("--in", dest="infile", required=True, help="MR parity file")
    d.add_argument("received", help="received file, one element code per line")
    d.add_argument("--erasures", default="",
                   help="comma-separated erased positions (values at them are ignored)")
    d.add_argument("--out", required=True)
    _add_common(d)
    return ap


def _make_sdss(args, s_dim: int, h: int, n: int):
    """Build the requested system at subspace dimension s_dim."""
    q_args = (args.p, args.a)
    if args.sdss == "mds":
        m = args.m if args.m is not None else h * s_dim
        t = make_tower(*q_args, m)
        if n > h:
            return sdss.mds_construct(t, n, s_dim, h)
        # the MDS construction needs more groups than h; build one spare
        # group and drop it so n = h still works
        return sdss.restrict(sdss.mds_construct(t, h + 1, s_dim, h), n)
    if args.sdss == "gv":
        m = args.m if args.m is not None else sdss.gv_dimension(
            args.p**args.a, n, s_dim, h
        )
        t = make_tower(*q_args, m)
        return sdss.gv_greedy(t, n, s_dim, h)
    S = sdss.subfield_construct(make_tower(*q_args), args.u, s_dim, h)
    if S.n < n:
        raise ParameterError(
            f"subfield construction yields n={S.n} groups, fewer than requested {n}"
        )
    if S.n > n:
        S = sdss.restrict(S, n)
    return S


def _parse_inner(spec: str, tower):
    """Inner code spec: bch:<r>:<delta> or rs:<r>:<s>; returns (s, parity)."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ParameterError("inner code must be bch:<r>:<delta> or rs:<r>:<s>")
    kind, r_txt, x_txt = parts
    try:
        r = int(r_txt)
        x = int(x_txt)
    except ValueError as exc:
        raise ParameterError("inner code parameters must be integers") from exc
    if kind == "bch":
        if tower.p != 2 or tower.a != 1:
            raise ParameterError("bch inner codes require q = 2")
        t_exp = (r + 1).bit_length() - 1
        if 2**t_exp - 1 != r:
            raise ParameterError("bch inner length must be 2^t - 1")
        H = bch_parity_check(t_exp, x)
        return H.rows, H
    if kind == "rs":
        H = rs_parity_check(make_tower(tower.p, tower.a), "mid", r, x)
        return x, H
    raise ParameterError(f"unknown inner code kind {kind!r}")


def _summary(spec: mr.MrCodeSpec, args, certified: bool) -> str:
    return (
        f"N={spec.N} r={spec.r} h={spec.h} delta={spec.delta} "
        f"ell={spec.tower.q}^{spec.tower.m} method={args.method} "
        f"certified={1 if certified else 0}"
    )


def cmd_construct(args) -> int:
    n, r, h, delta = args.n, args.r, args.h, args.delta
    if args.method == "direct":
        S = _make_sdss(args, r, h, n)
        spec = mr.MrCodeSpec(n=n, r=r, h=h, delta=delta, tower=S.tower)
        P = mr.build_direct(spec, S)
    else:
        if not args.inner:
            raise ParameterError("concat construction needs --inner")
        t_q = make_tower(args.p, args.a)
        s_dim, inner = _parse_inner(args.inner, t_q)
        if inner.cols != r:
            raise ParameterError(
                f"inner code length {inner.cols} does not match --r {r}"
            )
        S = _make_sdss(args, s_dim, h, n)
        # re-frame the inner parity in the ambient tower's mid level
        inner = type(inner)(S.tower, "mid", inner.rows, inner.cols, inner.data)
        spec = mr.MrCodeSpec(n=n, r=r, h=h, delta=delta, tower=S.tower)
        P = mr.build_concatenated(spec, S, inner)
    sdss_path = args.sdss_out or (args.out + ".sdss")
    Path(sdss_path).write_text(fileio.format_sdss(S))
    Path(args.out).write_text(fileio.format_mr(P))
    print(_summary(spec, args, S.certified))
    print(f"# tower {tower_line(spec.tower)}")
    if args.verbose:
        print(f"# wrote {args.out} and {sdss_path}")
    return EXIT_OK


def cmd_sdss(args) -> int:
    S = _make_sdss(args, args.r, args.h, args.n)
    Path(args.out).write_text(fileio.format_sdss(S))
    print(
        f"n={S.n} r={S.r} h={S.h} m={S.m} q={S.tower.q} "
        f"certified={1 if S.certified else 0}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    text = Path(args.infile).read_text()
    kind = fileio.sniff_kind(text)
    if kind == "mr":
        P = fileio.parse_mr(text)
        report = mr.verify_mr(P, budget=args.budget, sample=args.sample)
        line = "ok" if report.ok else "FAIL"
        line += f" patterns_checked={report.patterns_checked}"
        if report.sampled is not None:
            line += f" sampled={report.sampled}"
        line += f" elapsed={report.elapsed:.3f}s"
        print(line)
        if not report.ok:
            print(f"reason: {report.reason}")
            if report.first_failure is not None:
                pat = report.first_failure
                print(f"counterexample: per_group={pat.per_group} extra={pat.extra}")
            return EXIT_NEGATIVE
        return EXIT_OK
    if kind == "sdss":
        S = fileio.parse_sdss(text)
        from time import perf_counter

        t0 = perf_counter()
        ok = sdss.verify_direct_sum(S, budget=args.budget)
        from math import comb

        checked = comb(S.n, S.h)
        print(f"{'ok' if ok else 'FAIL'} patterns_checked={checked} "
              f"elapsed={perf_counter() - t0:.3f}s")
        return EXIT_OK if ok else EXIT_NEGATIVE
    raise FormatError(f"cannot verify a file of kind {kind!r}")


def cmd_bounds(args) -> int:
    q = args.p**args.a
    rep = sdss.bounds(q, args.n, args.r, args.h)
    line = (
        f"gv_m={rep.gv_m} hamming_lower={rep.hamming_lower} "
        f"singleton_lower={rep.singleton_lower}"
    )
    if args.achieved:
        S = fileio.parse_sdss(Path(args.achieved).read_text())
        line += f" achieved_m={S.m}"
    print(line)
    return EXIT_OK


def cmd_encode(args) -> int:
    P = fileio.parse_mr(Path(args.infile).read_text())
    msg = fileio.parse_vector(Path(args.message).read_text())
    G = mr.generator_from_parity(P)
    if len(msg) != G.rows:
        raise ParameterError(f"message must have k={G.rows} symbols, got {len(msg)}")
    cw = mr.encode(G, msg)
    Path(args.out).write_text(fileio.format_vector(cw))
    print(f"encoded N={len(cw)} k={G.rows}")
    return EXIT_OK


def cmd_decode(args) -> int:
    P = fileio.parse_mr(Path(args.infile).read_text())
    rx = fileio.parse_vector(Path(args.received).read_text())
    erased = [int(tok) for tok in args.erasures.split(",") if tok.strip()]
    result = mr.erase_decode(P, rx, erased)
    if not result.ok:
        print("UNDECODABLE")
        print(f"reason: {result.reason}")
        if result.certificate is not None:
            print("certificate: " + " ".join(map(str, result.certificate)))
        return EXIT_NEGATIVE
    Path(args.out).write_text(fileio.format_vector(result.codeword))
    print(f"decoded erasures={len(erased)}")
    return EXIT_OK


_HANDLERS = {
    "construct": cmd_construct,
    "sdss": cmd_sdss,
    "verify": cmd_verify,
    "bounds": cmd_bounds,
    "encode": cmd_encode,
    "decode": cmd_decode,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.cmd](args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParameterError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroDivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MrlrcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
