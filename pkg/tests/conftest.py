import random
from contextlib import contextmanager

import pytest

from gramem.fixtures import ENSALADA
from gramem.index import build_index


def spans(records):
    return [(r[0], r[1]) for r in records]


def random_text(rng, sigma, n):
    return bytes(97 + rng.randrange(sigma) for _ in range(n))


def mutated_copies(rng, base_len, copies, rate, sigma=4):
    """A base string repeated ``copies`` times with point mutations."""
    base = random_text(rng, sigma, base_len)
    out = bytearray(base * copies)
    for q in range(len(out)):
        if rng.random() < rate:
            out[q] = 97 + rng.randrange(sigma)
    return bytes(out)


def pattern_for(rng, text, sigma, m):
    """Half mutated substrings of the text, half fresh random strings."""
    if rng.random() < 0.5:
        a = rng.randrange(len(text))
        raw = text[a:a + m]
        return bytes(c if rng.random() > 0.03 else 97 + rng.randrange(sigma) for c in raw)
    return random_text(rng, sigma, m)


def assert_extracts(index, P, records):
    """Every record's text position really holds P[i..j]."""
    P = list(P)
    for r in records:
        ln = r.j - r.i + 1
        assert index.grammar.access(r.p - ln + 1, r.p) == P[r.i - 1:r.j], r


@pytest.fixture(scope="session")
def ensalada_index():
    return build_index(ENSALADA)


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES = []


@contextmanager
def criterion(number, title):
    """Record one PASS/FAIL line for an acceptance criterion.

    The body may add details to the yielded dict; they are appended to the
    line. Lines are printed at the end of the run.
    """
    notes = {}
    try:
        yield notes
    except BaseException:
        ACCEPTANCE_LINES.append(f"criterion {number:>2} FAIL  {title}")
        raise
    extra = "  " + ", ".join(f"{k}={v}" for k, v in notes.items()) if notes else ""
    ACCEPTANCE_LINES.append(f"criterion {number:>2} PASS  {title}{extra}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
