"""Command-line front end: build bundles, run queries, RLZ parsing,
overlap graphs and a self-check against the brute-force answers."""

import argparse
import os
import struct
import sys
from concurrent.futures import ThreadPoolExecutor

SEED_ENV = "GRAMEM_SEED"


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {SEED_ENV} must be an integer, got {raw!r}")


def _read_records(path, binary):
    """Patterns or reads: one per line, or u32-length-prefixed records."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not binary:
        lines = data.split(b"\n")
        if lines and lines[-1] == b"":
            lines.pop()
        return lines
    out = []
    pos = 0
    while pos < len(data):
        if pos + 4 > len(data):
            raise ValueError("truncated record length")
        (ln,) = struct.unpack_from("<I", data, pos)
        pos += 4
        if pos + ln > len(data):
            raise ValueError("truncated record")
        out.append(data[pos:pos + ln])
        pos += ln
    return out


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_build(args):
    from .bundle import save_bundle
    from .grammar import check, load_grammar
    from .index import GrammarIndex, build_index
    with open(args.text, "rb") as fh:
        text = fh.read()
    if args.grammar_in:
        with open(args.grammar_in, "rb") as fh:
            grammar, _ = load_grammar(fh.read())
        check(grammar, text if text else None)
        index = GrammarIndex(grammar, None, args.seed)
    else:
        if not text:
            raise ValueError("input text is empty")
        index = build_index(text, seed=args.seed, retries=args.retries)
    save_bundle(index, args.out, {"retries": args.retries, "imported": bool(args.grammar_in)})
    levels = index.levels.height if index.levels is not None else 0
    print(f"n\t{index.n}")
    print(f"grammar_size\t{index.grammar.size}")
    print(f"points\t{index.point_count}")
    print(f"levels\t{levels}")
    return 0


def _query_lines(index, pid, P, args):
    from .mem import (find_kmems, find_krare, find_mems, find_mums,
                      matching_statistics)
    if args.mode == "locate":
        return [f"{pid}\t{o.position}\t{'primary' if o.primary else 'secondary'}"
                for o in index.locate(P)]
    if not P:
        return []
    algo = args.algo
    if algo == "lcg" and index.levels is None:
        raise ValueError("--algo lcg needs a bundle built from text")
    if args.mode == "mem":
        recs = find_mems(index, P, algo)
    elif args.mode == "kmem":
        recs = find_kmems(index, P, args.k, algo)
    elif args.mode == "mum":
        recs = find_mums(index, P, algo)
    elif args.mode == "krare":
        recs = find_krare(index, P, args.k, algo)
    else:
        lengths, starts = matching_statistics(find_mems(index, P, algo), len(P))
        return [f"{pid}\t{q}\t{ln}\t{st}" for q, (ln, st) in enumerate(zip(lengths, starts), 1)]
    return [f"{pid}\t{r.i}\t{r.j}\t{r.p - (r.j - r.i)}" for r in recs]


def cmd_query(args):
    from .bundle import load_bundle
    if args.mode in ("kmem", "krare") and args.k is None:
        raise _Usage(f"--k is required for --mode {args.mode}")
    if args.k is not None and args.k < 1:
        raise _Usage("--k must be at least 1")
    index = load_bundle(args.bundle)
    patterns = _read_records(args.patterns, args.binary)
    blocks = _map(lambda item: _query_lines(index, item[0], item[1], args),
                  list(enumerate(patterns, 1)), args.threads)
    out = sys.stdout
    for lines in blocks:
        for line in lines:
            out.write(line + "\n")
    return 0


def cmd_rlz(args):
    from .apps import (dump_rlz, load_rlz, reference_hash, rlz_compress,
                       rlz_decompress)
    from .bundle import load_bundle
    index = load_bundle(args.bundle)
    reference = index.grammar.expand()
    ref_hash = reference_hash(reference)
    with open(args.input, "rb") as fh:
        data = fh.read()
    if args.decompress:
        text = bytes(rlz_decompress(reference, load_rlz(data, ref_hash)))
        with open(args.out, "wb") as fh:
            fh.write(text)
        print(f"n\t{len(text)}")
        return 0
    phrases = rlz_compress(index, data)
    blob = dump_rlz(phrases, ref_hash)
    with open(args.out, "wb") as fh:
        fh.write(blob)
    ratio = 16 * len(phrases) / len(data) if data else 0.0
    print(f"z\t{len(phrases)}")
    print(f"ratio\t{ratio:.4f}")
    return 0


def cmd_overlaps(args):
    from .apps import all_pairs_suffix_prefix
    reads = _read_records(args.reads, args.binary)
    edges = all_pairs_suffix_prefix(reads, args.lmin, args.all, seed=args.seed)
    for e in edges:
        sys.stdout.write(f"{e.source}\t{e.target}\t{e.length}\n")
    return 0


def cmd_verify(args):
    """Compare every query against the brute-force answers on random data."""
    import random

    from . import oracle
    from .apps import all_pairs_suffix_prefix, rlz_compress, rlz_decompress
    from .bundle import dumps_bundle, loads_bundle
    from .index import build_index
    from .mem import (find_kmems, find_krare, find_mems_lcg,
                      find_mems_quadratic, matching_statistics, mems_from_ms)

    rng = random.Random(args.seed)
    failures = 0

    def report(name, ok):
        nonlocal failures
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}\t{name}")

    def spans(recs):
        return [(r[0], r[1]) for r in recs]

    ok_mem = ok_k = ok_ms = ok_bundle = True
    for trial in range(args.cases):
        sigma = rng.choice([2, 4, 16])
        text = bytes(97 + rng.randrange(sigma) for _ in range(rng.randint(1, 300)))
        index = build_index(text, seed=trial)
        if trial % 5 == 0:
            index = loads_bundle(dumps_bundle(index))
        P = bytes(97 + rng.randrange(sigma) for _ in range(rng.randint(1, 40)))
        want = spans(oracle.naive_mems(text, P))
        ok_mem &= spans(find_mems_quadratic(index, P)) == want == spans(find_mems_lcg(index, P))
        k = rng.choice([2, 3, 5])
        ok_k &= spans(find_kmems(index, P, k)) == spans(oracle.naive_kmems(text, P, k))
        ok_k &= spans(find_krare(index, P, k)) == spans(oracle.naive_krare(text, P, k))
        recs = find_mems_lcg(index, P)
        lengths, starts = matching_statistics(recs, len(P))
        ok_ms &= lengths == oracle.naive_ms(text, P) and spans(mems_from_ms(lengths, starts)) == spans(recs)
        ok_bundle &= [o.position for o in index.locate(P[:3])] == oracle.naive_locate(text, P[:3])
    report("mems", ok_mem)
    report("kmems/krare", ok_k)
    report("matching statistics", ok_ms)
    report("locate", ok_bundle)
    ok_rlz = True
    for _ in range(max(1, args.cases // 4)):
        ref = bytes(97 + rng.randrange(4) for _ in range(rng.randint(4, 200))) + b"abcd"
        t = bytes(97 + rng.randrange(4) for _ in range(rng.randint(1, 200)))
        phrases = rlz_compress(build_index(ref), t)
        ok_rlz &= len(phrases) == len(oracle.greedy_rlz(ref, t)) and bytes(rlz_decompress(ref, phrases)) == t
    report("rlz", ok_rlz)
    base = bytes(97 + rng.randrange(2) for _ in range(200))
    reads = [base[a:a + rng.randint(3, 30)] for a in (rng.randrange(180) for _ in range(15))]
    report("overlaps", [tuple(e) for e in all_pairs_suffix_prefix(reads, 2, check_state=True)]
           == oracle.brute_overlaps(reads, 2))
    return 1 if failures else 0


class _Usage(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(prog="gramem", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p = sub.add_parser("build", help="index a text file into a bundle")
    p.add_argument("text")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--retries", type=int, default=3)
    p.add_argument("--grammar-in", help="index this serialized grammar instead of building one")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="run queries from a patterns file")
    p.add_argument("bundle")
    p.add_argument("patterns")
    p.add_argument("--mode", choices=["mem", "kmem", "mum", "krare", "ms", "locate"], default="mem")
    p.add_argument("--k", type=int)
    p.add_argument("--algo", choices=["quadratic", "lcg"])
    p.add_argument("--binary", action="store_true", help="u32-length-prefixed pattern records")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("rlz", help="parse a text against an indexed reference")
    p.add_argument("bundle")
    p.add_argument("input")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--decompress", action="store_true")
    p.set_defaults(func=cmd_rlz)

    p = sub.add_parser("overlaps", help="suffix-prefix overlap graph of reads")
    p.add_argument("reads")
    p.add_argument("--lmin", type=int, required=True)
    p.add_argument("--all", action="store_true", help="every overlap, not only the longest")
    p.add_argument("--binary", action="store_true")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("verify", help="check all queries against brute force")
    p.add_argument("--cases", type=int, default=60)
    p.add_argument("--seed", type=int, default=seed)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
