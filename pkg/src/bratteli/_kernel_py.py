"""Reference corpus sweep: the literal library ops, one diagram at a
time. Slow but definitionally correct; the compiled kernel must agree
with this bit for bit."""

from .corpus import MAX_DEPTH, corpus_diagrams, diagram_record


def sweep(max_depth=MAX_DEPTH):
    return [diagram_record(d) for d in corpus_diagrams(max_depth)]
