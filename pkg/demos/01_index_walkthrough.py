# Walk through the grammar index on a small text: grammar, grid points,
# primary and secondary occurrences.
from gramem.fixtures import ENSALADA, ensalada_grammar
from gramem.index import GrammarIndex

grammar = ensalada_grammar()
print("text:", ENSALADA.decode())
print("rules:", len(grammar.rules), "grammar size:", grammar.size)

# Each split of a rule's right-hand side becomes one grid point.
index = GrammarIndex(grammar)
print("grid points:", index.point_count)

# A pattern occurrence that crosses a split is primary; the others are
# copies found by walking up the pruned grammar tree.
for occ in index.locate(b"a_"):
    kind = "primary" if occ.primary else "secondary"
    print(f"  'a_' at {occ.position:2d} ({kind})")

# Random access goes through the grammar without expanding the text.
print("T[16..18] =", bytes(grammar.access(16, 18)).decode())
