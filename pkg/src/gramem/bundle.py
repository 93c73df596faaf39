"""Index bundles on disk.

Layout (little-endian): magic ``GMBX``, u16 version, u16 reserved, u64
payload length, 32-byte SHA-256 of the payload, then the payload:

* u32 length + UTF-8 JSON metadata
* the grammar record (see ``dump_grammar``)
* integer arrays, each u64 count + int64 values: point columns (node,
  split, end position, left symbol, terminal leaf, row), rows (symbol,
  offset), adjacent LCPs of X and Y, character counts (keys, values)
* when the grammar is locally consistent: creation levels, per-level
  permutations, and the run and block dictionaries
"""

import hashlib
import json
import struct

import numpy as np

from .grammar import dump_grammar, load_grammar
from .index import GrammarIndex
from .lcg import LcgLevels

BUNDLE_MAGIC = b"GMBX"
BUNDLE_VERSION = 1
_HEAD = struct.Struct("<4sHHQ32s")


class BundleError(ValueError):
    pass


def _ints(values):
    arr = np.asarray(list(values), dtype="<i8")
    return struct.pack("<Q", len(arr)) + arr.tobytes()


class _Reader:
    def __init__(self, data, pos=0):
        self.data = data
        self.pos = pos

    def ints(self):
        (count,) = struct.unpack_from("<Q", self.data, self.pos)
        self.pos += 8
        end = self.pos + 8 * count
        if end > len(self.data):
            raise BundleError("truncated array")
        out = np.frombuffer(self.data[self.pos:end], dtype="<i8").tolist()
        self.pos = end
        return out


def grammar_digest(grammar):
    return hashlib.sha256(dump_grammar(grammar)).hexdigest()


def dumps_bundle(index, options=None):
    g = index.grammar
    lv = index.levels
    meta = {
        "n": index.n,
        "sigma": g.sigma,
        "seed": index.seed,
        "rule_points": index.rule_points,
        "grammar_sha256": grammar_digest(g),
        "locally_consistent": lv is not None,
        "options": options or {},
    }
    if lv is not None:
        meta["height"] = lv.height
        meta["lcg_seed"] = lv.seed
    blob = json.dumps(meta, sort_keys=True).encode()
    parts = [struct.pack("<I", len(blob)), blob, dump_grammar(g)]
    grid = index.grid
    for arr in (index.pt_node, index.pt_split, index.pt_p, index.pt_xsym, index.pt_term,
                grid.row_of_col, index.y_sym, index.y_off, index.x_adj, index.y_adj):
        parts.append(_ints(arr))
    keys = sorted(index.char_count)
    parts.append(_ints(keys))
    parts.append(_ints(index.char_count[c] for c in keys))
    if lv is not None:
        parts.append(_ints(lv.created))
        levels = sorted(lv.perms)
        parts.append(_ints(levels))
        for k in levels:
            perm = lv.perms[k]
            syms = sorted(perm)
            parts.append(_ints(syms))
            parts.append(_ints(perm[s] for s in syms))
        runs = sorted(lv.run_dict.items())
        parts.append(_ints(s for (s, _), _ in runs))
        parts.append(_ints(t for (_, t), _ in runs))
        parts.append(_ints(nt for _, nt in runs))
        blocks = sorted(lv.block_dict.items())
        parts.append(_ints(len(b) for b, _ in blocks))
        parts.append(_ints(s for b, _ in blocks for s in b))
        parts.append(_ints(nt for _, nt in blocks))
    payload = b"".join(parts)
    digest = hashlib.sha256(payload).digest()
    return _HEAD.pack(BUNDLE_MAGIC, BUNDLE_VERSION, 0, len(payload), digest) + payload


def loads_bundle(data):
    if len(data) < _HEAD.size:
        raise BundleError("truncated bundle header")
    magic, version, _, length, digest = _HEAD.unpack_from(data, 0)
    if magic != BUNDLE_MAGIC:
        raise BundleError("not an index bundle")
    if version != BUNDLE_VERSION:
        raise BundleError(f"bundle version {version} is not supported (expected {BUNDLE_VERSION})")
    payload = data[_HEAD.size:]
    if len(payload) != length:
        raise BundleError("bundle length mismatch")
    if hashlib.sha256(payload).digest() != digest:
        raise BundleError("bundle checksum mismatch")
    (mlen,) = struct.unpack_from("<I", payload, 0)
    meta = json.loads(payload[4:4 + mlen])
    grammar, pos = load_grammar(payload, 4 + mlen)
    if grammar.n != meta["n"] or grammar_digest(grammar) != meta["grammar_sha256"]:
        raise BundleError("grammar does not match bundle metadata")
    rd = _Reader(payload, pos)
    columns = [rd.ints() for _ in range(6)]
    rows = [rd.ints() for _ in range(2)]
    x_adj, y_adj = rd.ints(), rd.ints()
    char_count = dict(zip(rd.ints(), rd.ints()))
    levels = None
    if meta["locally_consistent"]:
        created = rd.ints()
        perms = {}
        for k in rd.ints():
            perms[k] = dict(zip(rd.ints(), rd.ints()))
        rs, rt, rn = rd.ints(), rd.ints(), rd.ints()
        run_dict = {(s, t): nt for s, t, nt in zip(rs, rt, rn)}
        lens, flat, bn = rd.ints(), rd.ints(), rd.ints()
        block_dict = {}
        at = 0
        for ln, nt in zip(lens, bn):
            block_dict[tuple(flat[at:at + ln])] = nt
            at += ln
        levels = LcgLevels(grammar, None, perms, run_dict, block_dict, created,
                           meta["lcg_seed"], meta["height"])
    if rd.pos != len(payload):
        raise BundleError("trailing bytes in bundle")
    index = GrammarIndex.from_parts(grammar, levels, meta["seed"], columns, rows,
                                    x_adj, y_adj, char_count, meta["rule_points"])
    index.metadata = meta
    return index


def save_bundle(index, path, options=None):
    with open(path, "wb") as fh:
        fh.write(dumps_bundle(index, options))


def load_bundle(path):
    with open(path, "rb") as fh:
        return loads_bundle(fh.read())
