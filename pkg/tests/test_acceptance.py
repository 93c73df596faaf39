"""Acceptance criteria 1-11. Each test records one PASS/FAIL line that is
printed in the terminal summary."""

import itertools
import math
import random
import time

import pytest

from conftest import (assert_extracts, criterion, mutated_copies, pattern_for,
                      random_text, spans)
from gramem.apps import all_pairs_suffix_prefix, rlz_compress, rlz_decompress
from gramem.bundle import dumps_bundle, load_bundle, loads_bundle, save_bundle
from gramem.fixtures import ENSALADA
from gramem.grammar import validate
from gramem.index import build_index
from gramem.lcg import alpha, build_lcg
from gramem.mem import (find_kmems, find_krare, find_mems, find_mems_lcg,
                        find_mems_quadratic, find_mums, matching_statistics,
                        mems_from_ms)
from gramem.oracle import (brute_overlaps, greedy_rlz, naive_kmems,
                           naive_krare, naive_mems, naive_ms, naive_mums,
                           stree_mems)
from gramem.suffix import lcp_array, suffix_array

CONFIGS = ["sigma2", "sigma4", "sigma16", "repetitive"]
TEXTS_PER_CONFIG = 50
PATTERNS_PER_TEXT = 20
K_VALUES = (1, 2, 3, 5, 10)


def _corpus_text(rng, config):
    if config == "repetitive":
        return mutated_copies(rng, rng.randint(1, 40), 50, 0.01), 4
    sigma = int(config[5:])
    return random_text(rng, sigma, rng.randint(1, 2000)), sigma


@pytest.fixture(scope="module")
def corpora(tmp_path_factory):
    """Per configuration: (text, index, loaded index, patterns) tuples.

    The loaded index went through save_bundle and load_bundle on disk.
    """
    rng = random.Random(2024)
    folder = tmp_path_factory.mktemp("bundles")
    out = {}
    for config in CONFIGS:
        items = []
        for t in range(TEXTS_PER_CONFIG):
            text, sigma = _corpus_text(rng, config)
            index = build_index(text, seed=t)
            path = folder / f"{config}-{t}.gmb"
            save_bundle(index, path)
            patterns = [pattern_for(rng, text, sigma, rng.randint(1, 200)) for _ in range(PATTERNS_PER_TEXT)]
            items.append((text, index, load_bundle(path), patterns))
        out[config] = items
    return out


def check_mems(index, text, P):
    quad = find_mems_quadratic(index, P)
    lcg = find_mems_lcg(index, P)
    naive = naive_mems(text, P)
    stree = stree_mems(text, P)
    assert spans(quad) == spans(lcg) == spans(naive) == spans(stree), P
    assert_extracts(index, P, quad)
    assert_extracts(index, P, lcg)
    for recs in (naive, stree):
        for r in recs:
            ln = r.j - r.i + 1
            assert text[r.p - ln:r.p] == P[r.i - 1:r.j]


def check_rare(index, text, P):
    mems = find_mems(index, P)
    assert spans(find_kmems(index, P, 1)) == spans(mems)
    mums = find_mums(index, P)
    assert spans(mums) == spans(naive_mums(text, P))
    assert spans(find_krare(index, P, 1)) == spans(mums)
    for k in K_VALUES:
        want = spans(naive_kmems(text, P, k))
        for algo in ("quadratic", "lcg"):
            got = find_kmems(index, P, k, algo)
            assert spans(got) == want, (P, k, algo)
            assert_extracts(index, P, got)
        assert spans(find_krare(index, P, k)) == spans(naive_krare(text, P, k)), (P, k)


def check_ms(index, text, P):
    lengths, starts = matching_statistics(find_mems(index, P), len(P))
    assert lengths == naive_ms(text, P)
    for q, (ln, st) in enumerate(zip(lengths, starts), 1):
        assert text[st - 1:st - 1 + ln] == P[q - 1:q - 1 + ln]


def check_fixture_locate(index):
    occ = index.locate(b"a_")
    assert [o.position for o in occ] == [2, 11, 14]
    assert {o.position for o in occ if o.primary} == {2, 11}
    assert {o.position for o in occ if not o.primary} == {14}


def test_criterion_01_mem_oracle_equivalence(corpora):
    with criterion(1, "MEM oracle equivalence") as notes:
        start = time.perf_counter()
        cases = {}
        for config in CONFIGS:
            cases[config] = 0
            for text, index, _, patterns in corpora[config]:
                for P in patterns:
                    check_mems(index, text, P)
                    cases[config] += 1
        assert min(cases.values()) >= 1000
        notes["cases"] = sum(cases.values())
        notes["seconds"] = round(time.perf_counter() - start, 1)


def _exhaustive_strings(max_len):
    for n in range(1, max_len + 1):
        for t in itertools.product(b"ab", repeat=n):
            yield bytes(t)


def test_criterion_02_exhaustive_small(tmp_path):
    # indexes go through the bundle round trip, which also serves criterion 11
    with criterion(2, "exhaustive binary check n<=12, m<=6") as notes:
        patterns = list(_exhaustive_strings(6))
        texts = 0
        for text in _exhaustive_strings(12):
            index = loads_bundle(dumps_bundle(build_index(text, seed=texts)))
            for P in patterns:
                quad = find_mems_quadratic(index, P)
                lcg = find_mems_lcg(index, P)
                assert spans(quad) == spans(lcg) == spans(naive_mems(text, P)) == spans(stree_mems(text, P)), (text, P)
                assert_extracts(index, P, quad)
                assert_extracts(index, P, lcg)
            texts += 1
        notes["pairs"] = texts * len(patterns)


def test_criterion_03_rare_variants(corpora):
    with criterion(3, "k-MEM / MUM / k-rare equivalence, k in {1,2,3,5,10}") as notes:
        cases = 0
        for config in CONFIGS:
            for text, index, _, patterns in corpora[config]:
                for P in patterns[:3]:
                    check_rare(index, text, P)
                    cases += 1
        notes["cases"] = cases


def test_criterion_04_fixture_locate(ensalada_index):
    with criterion(4, "locate('a_') on the fixture text"):
        check_fixture_locate(ensalada_index)


def _random_ms(rng):
    """A valid matching-statistics array: ms[q+1] >= ms[q] - 1, ms[q] <= m - q + 1."""
    m = rng.randint(1, 200)
    out = []
    prev = 0
    for q in range(1, m + 1):
        lo = max(0, prev - 1)
        hi = m - q + 1
        prev = rng.randint(lo, min(hi, lo + rng.choice([0, 1, 3, 10])))
        out.append(prev)
    return out


def test_criterion_05_matching_statistics(corpora):
    with criterion(5, "matching statistics") as notes:
        rng = random.Random(5)
        for _ in range(1000):
            lengths = _random_ms(rng)
            mems = mems_from_ms(lengths)
            assert matching_statistics(mems, len(lengths))[0] == lengths
            assert spans(mems_from_ms(matching_statistics(mems, len(lengths))[0])) == spans(mems)
        cases = 0
        for config in CONFIGS:
            for text, index, _, patterns in corpora[config]:
                for P in patterns[:5]:
                    check_ms(index, text, P)
                    cases += 1
        notes["inverse_cases"] = 1000
        notes["ms_cases"] = cases


def local_consistency_violations(text, levels):
    """Compare block ends of every pair of equal substrings.

    Only pairs that are maximal on both sides are visited; every other pair of
    equal substrings lies inside one of them with a smaller restricted range.
    """
    n = len(text)
    raw = suffix_array(list(text))
    lcp = list(lcp_array(list(text), raw)[0])
    sa = list(raw)
    height = len(levels.seqs) - 1
    marks = []
    for k in range(1, height + 1):
        bits = bytearray(n + 2)
        for e in levels.block_ends(k):
            bits[e] = 1
        marks.append(bits)
    shortest = 3 * alpha(1) + 2
    violations = pairs = 0
    for t in range(1, n):
        a = sa[t]
        h = n
        s = t
        while s > 0:
            h = min(h, lcp[s])
            if h < shortest:
                break
            b = sa[s - 1]
            x, y = sorted((a, b))
            if x == 0 or text[x - 1] != text[y - 1]:
                pairs += 1
                for k in range(1, height + 1):
                    w = alpha(k)
                    if h < 3 * w + 2:
                        break
                    lo, hi = 2 * w, h - w - 1
                    bits = marks[k - 1]
                    if bits[x + 1 + lo:x + 1 + hi] != bits[y + 1 + lo:y + 1 + hi]:
                        violations += 1
            s -= 1
    return violations, pairs


def test_criterion_06_local_consistency():
    with criterion(6, "local consistency of block ends") as notes:
        rng = random.Random(6)
        total = pairs = 0
        for trial in range(60):
            if trial % 3 == 0:
                text = mutated_copies(rng, rng.randint(10, 40), 50, 0.01)[:2000]
            elif trial % 3 == 1:
                text = random_text(rng, 2, 2000)
            else:
                half = random_text(rng, 4, 500)
                text = (half * 4)[:2000]
            _, levels = build_lcg(text, seed=trial)
            v, p = local_consistency_violations(text, levels)
            total += v
            pairs += p
        assert total == 0
        notes["pairs"] = pairs
        notes["violations"] = total


def test_criterion_07_logarithmic_active_set():
    with criterion(7, "max|R| and max|M| over 1+log2 m") as notes:
        rng = random.Random(7)
        text = mutated_copies(rng, 1000, 50, 0.01)
        index = build_index(text)
        ratios = []
        for e in range(5, 15):
            m = 1 << e
            worst = 0
            for _ in range(3 if e < 12 else 2):
                a = rng.randrange(len(text) - m)
                P = bytes(c if rng.random() > 0.01 else 97 + rng.randrange(4) for c in text[a:a + m])
                stats = {}
                find_mems_lcg(index, P, stats=stats)
                worst = max(worst, stats["max_R"], stats["max_M"])
            ratios.append(worst / (1 + math.log2(m)))
        constant = max(ratios)
        early, late = ratios[:5], ratios[5:]
        # no growth: the last four doublings stay under the earlier peak
        assert max(late) <= 1.25 * max(early), ratios
        slope = sum((x - 2) * r for x, r in enumerate(late)) / sum((x - 2) ** 2 for x in range(5))
        assert slope <= 0.05 * constant, ratios
        notes["constant"] = round(constant, 2)
        notes["ratios"] = "/".join(f"{r:.1f}" for r in ratios)


def test_criterion_08_compression():
    with criterion(8, "grammar size on repetitive and random text") as notes:
        rng = random.Random(8)
        rep = mutated_copies(rng, 2000, 50, 0.01)
        g, _ = build_lcg(rep)
        assert validate(g, rep)
        assert g.size <= len(rep) / 5
        notes["repetitive"] = f"{g.size}/{len(rep)}"
        for sigma in (4, 256):
            noise = bytes(rng.randrange(256) for _ in range(100_000)) if sigma == 256 else random_text(rng, sigma, 100_000)
            g, _ = build_lcg(noise)
            assert validate(g, noise)
            assert g.size <= 2 * len(noise)
            notes[f"random{sigma}"] = f"{g.size}/{len(noise)}"


def test_criterion_09_rlz():
    with criterion(9, "RLZ phrase count and round trip") as notes:
        rng = random.Random(9)
        for trial in range(1000):
            sigma = rng.choice([2, 4, 16])
            alphabet = bytes(range(97, 97 + sigma))
            R = random_text(rng, sigma, rng.randint(1, 300)) + alphabet
            if rng.random() < 0.5:
                a = rng.randrange(len(R))
                T = R[a:a + rng.randint(1, 300)] + random_text(rng, sigma, rng.randint(0, 50))
            else:
                T = random_text(rng, sigma, rng.randint(1, 300))
            phrases = rlz_compress(build_index(R, seed=trial), T)
            assert len(phrases) == len(greedy_rlz(R, T))
            assert bytes(rlz_decompress(R, phrases)) == T
        notes["pairs"] = 1000


def _read_set(rng, count, max_len):
    sigma = rng.choice([2, 4])
    genome = random_text(rng, sigma, 2000)
    reads = []
    for _ in range(count):
        a = rng.randrange(len(genome))
        reads.append(genome[a:a + rng.randint(1, max_len)])
    return reads


def test_criterion_10_overlaps():
    with criterion(10, "overlaps vs brute force, state hash at every step") as notes:
        rng = random.Random(10)
        sets = [_read_set(rng, 200, 200), _read_set(rng, 200, 60)]
        sets += [_read_set(rng, rng.randint(2, 100), rng.randint(1, 200)) for _ in range(10)]
        for s, reads in enumerate(sets):
            lmin = rng.randint(1, 20)
            check = s >= len(sets) - 10
            for all_matches in (False, True):
                got = all_pairs_suffix_prefix(reads, lmin, all_matches, check_state=check, seed=s)
                assert [tuple(e) for e in got] == brute_overlaps(reads, lmin, all_matches)
        notes["read_sets"] = len(sets)
        notes["state_checked_sets"] = 10


def test_criterion_11_bundle_round_trip(corpora, tmp_path, ensalada_index):
    with criterion(11, "criteria 1-5 on loaded bundles") as notes:
        cases = 0
        for config in CONFIGS:
            for text, _, loaded, patterns in corpora[config]:
                for q, P in enumerate(patterns):
                    check_mems(loaded, text, P)
                    if q < 3:
                        check_rare(loaded, text, P)
                    if q < 5:
                        check_ms(loaded, text, P)
                    cases += 1
        path = tmp_path / "fixture.gmb"
        save_bundle(ensalada_index, path)
        check_fixture_locate(load_bundle(path))
        notes["cases"] = cases
        notes["exhaustive"] = "criterion 2 runs on loaded bundles"
