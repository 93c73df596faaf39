# Compare the quadratic and the locally consistent MEM scans on a
# repetitive text, and show what the instrumentation reports.
import random
import time

from gramem.index import build_index
from gramem.mem import find_mems_lcg, find_mems_quadratic, matching_statistics
from gramem.oracle import naive_mems

rng = random.Random(1)
base = bytes(rng.choice(b"acgt") for _ in range(500))
text = bytearray(base * 40)
for q in range(len(text)):
    if rng.random() < 0.01:
        text[q] = rng.choice(b"acgt")
text = bytes(text)

t0 = time.perf_counter()
index = build_index(text)
print(f"n={index.n} grammar size={index.grammar.size} built in {time.perf_counter() - t0:.2f}s")

# A read taken from one copy, with a couple of edits.
read = bytearray(text[3000:3400])
read[100] = ord("n")
read[250] = ord("n")
read = bytes(read)

for name, finder in [("quadratic", find_mems_quadratic), ("lcg", find_mems_lcg)]:
    t0 = time.perf_counter()
    mems = finder(index, read)
    print(f"{name:9s}: {len(mems)} MEMs in {time.perf_counter() - t0:.3f}s")

stats = {}
mems = find_mems_lcg(index, read, stats=stats)
print("largest active set:", stats["max_R"], "largest cut set:", stats["max_M"])
print("agrees with brute force:", [(r.i, r.j) for r in mems] == [(r.i, r.j) for r in naive_mems(text, read)])

for rec in mems:
    print(f"  read[{rec.i}..{rec.j}] ends at text position {rec.p}")

lengths, _ = matching_statistics(mems, len(read))
print("matching statistics around the first edit:", lengths[95:106])
