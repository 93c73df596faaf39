# Relative Lempel-Ziv against an indexed reference, then an overlap graph
# of reads cut from one sequence.
import random

from gramem.apps import all_pairs_suffix_prefix, rlz_compress, rlz_decompress
from gramem.index import build_index

rng = random.Random(3)
reference = bytes(rng.choice(b"acgt") for _ in range(3000))

# A target that shares most of its content with the reference.
target = bytearray(reference[200:2600])
for q in rng.sample(range(len(target)), 12):
    target[q] = rng.choice(b"acgt")
target = bytes(target)

phrases = rlz_compress(build_index(reference), target)
print(f"{len(phrases)} phrases for {len(target)} symbols")
print("first phrases:", phrases[:4])
assert bytes(rlz_decompress(reference, phrases)) == target

# Reads tiled along the reference with random gaps.
reads = []
pos = 0
while pos < 1000:
    ln = rng.randint(60, 90)
    reads.append(reference[pos:pos + ln])
    pos += rng.randint(20, 50)

edges = all_pairs_suffix_prefix(reads, lmin=15)
print(f"{len(reads)} reads, {len(edges)} overlaps of length >= 15")
for e in edges[:6]:
    print(f"  read {e.source} -> read {e.target}: {e.length}")
