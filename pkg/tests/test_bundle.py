import random
import struct

import pytest

from conftest import random_text, spans
from gramem.bundle import (BUNDLE_VERSION, BundleError, dumps_bundle,
                           load_bundle, loads_bundle, save_bundle)
from gramem.fixtures import ENSALADA, ensalada_grammar
from gramem.index import GrammarIndex, build_index
from gramem.mem import find_kmems, find_mems_lcg, find_mems_quadratic
from gramem.oracle import naive_kmems, naive_locate, naive_mems


def test_round_trip_on_disk(tmp_path, ensalada_index):
    path = tmp_path / "ens.gmb"
    save_bundle(ensalada_index, path)
    loaded = load_bundle(path)
    assert loaded.grammar == ensalada_index.grammar
    assert loaded.point_count == ensalada_index.point_count
    occ = loaded.locate(b"a_")
    assert [(o.position, o.primary) for o in occ] == [(2, True), (11, True), (14, False)]
    assert spans(find_mems_lcg(loaded, b"lasal")) == [(1, 2), (3, 5)]


def test_imported_grammar_round_trip():
    index = GrammarIndex(ensalada_grammar())
    loaded = loads_bundle(dumps_bundle(index))
    assert loaded.levels is None
    assert [o.position for o in loaded.locate(b"sal")] == naive_locate(ENSALADA, b"sal")
    assert spans(find_mems_quadratic(loaded, b"lasal")) == [(1, 2), (3, 5)]


def test_round_trip_random_texts():
    rng = random.Random(1)
    for seed in range(15):
        text = random_text(rng, rng.choice([2, 4, 16]), rng.randint(1, 800))
        loaded = loads_bundle(dumps_bundle(build_index(text, seed=seed)))
        for _ in range(5):
            a = rng.randrange(len(text))
            P = text[a:a + 30] + random_text(rng, 4, 10)
            assert spans(find_mems_lcg(loaded, P)) == spans(naive_mems(text, P))
            assert spans(find_kmems(loaded, P, 2)) == spans(naive_kmems(text, P, 2))


def test_checksum_refusal(ensalada_index):
    data = bytearray(dumps_bundle(ensalada_index))
    data[-1] ^= 1
    with pytest.raises(BundleError, match="checksum"):
        loads_bundle(bytes(data))


def test_version_refusal(ensalada_index):
    data = bytearray(dumps_bundle(ensalada_index))
    struct.pack_into("<H", data, 4, BUNDLE_VERSION + 1)
    with pytest.raises(BundleError, match="version"):
        loads_bundle(bytes(data))


@pytest.mark.parametrize("mangle", [lambda d: b"XXXX" + d[4:], lambda d: d[:10], lambda d: d[:-5]])
def test_malformed_refusal(ensalada_index, mangle):
    with pytest.raises(BundleError):
        loads_bundle(mangle(dumps_bundle(ensalada_index)))
