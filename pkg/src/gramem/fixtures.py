"""Small hand-built grammars used by tests and demos."""

from .grammar import SIGMA, Grammar, Run, Seq

ENSALADA = b"la_sal_sala_la_ensalada"


def ensalada_grammar():
    """Grammar for ``la_sal_sala_la_ensalada`` with rules
    A -> l a _, B -> s a l, C -> B a, D -> C _ A, S -> A B _ D e n C d a.
    Nonterminals A..D, S get ids 0..4."""
    A, B, C, D, S = (SIGMA + i for i in range(5))
    t = ord
    rules = [
        Seq((t("l"), t("a"), t("_"))),
        Seq((t("s"), t("a"), t("l"))),
        Seq((B, t("a"))),
        Seq((C, t("_"), A)),
        Seq((A, B, t("_"), D, t("e"), t("n"), C, t("d"), t("a"))),
    ]
    return Grammar(rules, S)


def single_run_grammar(char=b"a"[0], count=8):
    return Grammar([Run(char, count)], SIGMA)
