"""Exhaustive corpus of small valid diagrams, with a packed record of
every cheap check per diagram.

The corpus covers depths 1 to 4, level widths 1 to 3, matrix entries 0
to 2 and multiplicities up to 4, with no zero columns and no childless
internal vertices. Columns of each new matrix are drawn as a
nondecreasing sequence from the ordered option list, so reordering
columns never produces a duplicate diagram. Emission is depth-first
preorder: every diagram appears immediately before its extensions, and
truncating the sweep at a smaller max depth yields a subsequence of the
full run.

Record layout, one nonnegative int per diagram:

  bit 0       multitree verdict
  bit 1       discreteness at partition depth 1
  bit 2       zero-one verdict for composite transitions
  bit 3       symmetric quotient witnesses exist at every vertex
  bit 4       vertex ideal count equals order ideal count
  bit 5       ideal <-> support translation round-trips
  bit 6       final level group order matches the multiplicity formula
  bit 7       extension round-trips back to the diagram
  bits 8-11   min_clean_level, 0 encoding None
  bits 12-15  clean_from, 0 encoding None
  bits 16-31  vertex ideal count
  bits 32-47  order ideal count
  bits 56-58  depth
  bits 59-61  final level width
"""

from itertools import combinations_with_replacement, product
from math import factorial

from .criteria import multitree_report
from .diagram import BratteliDiagram, extend, extract
from .dimrange import (enumerate_order_ideals, order_ideal_map,
                       order_ideal_union, zero_one_report)
from .ideals import enumerate_ideals, rf_witness
from .realize import GroupElement, LevelGroup

MAX_WIDTH = 3
MAX_DEPTH = 4
MAX_ENTRY = 2
MAX_DIM = 4

# diagrams per depth, frozen after the first full enumeration
FROZEN_COUNTS = {1: 9, 2: 2862, 3: 58350, 4: 495626}


def column_options(prev_dims):
    """Usable matrix columns over the given parent multiplicities.

    Product order over the entry ranges; a column must hit at least one
    parent and keep the induced multiplicity at most MAX_DIM. Returns
    (column, multiplicity, nonzero-row bitmask) triples.
    """
    opts = []
    for c in product(range(MAX_ENTRY + 1), repeat=len(prev_dims)):
        if not any(c):
            continue
        d = sum(e * pd for e, pd in zip(c, prev_dims))
        if d > MAX_DIM:
            continue
        rows = 0
        for u, e in enumerate(c):
            if e:
                rows |= 1 << u
        opts.append((c, d, rows))
    return opts


def corpus_matrices(max_depth=MAX_DEPTH):
    """Yield (dims, mats): per-level multiplicity tuples including the
    root, and transition matrices as tuples of row tuples."""
    assert 1 <= max_depth <= MAX_DEPTH
    cache = {}

    def options(prev_dims):
        if prev_dims not in cache:
            cache[prev_dims] = column_options(prev_dims)
        return cache[prev_dims]

    def walk(dims, mats):
        if mats:
            yield dims, mats
        if len(mats) == max_depth:
            return
        prev = dims[-1]
        opts = options(prev)
        full = (1 << len(prev)) - 1
        need_rows = len(mats) >= 1
        for w in range(1, MAX_WIDTH + 1):
            for combo in combinations_with_replacement(range(len(opts)), w):
                if need_rows:
                    hit = 0
                    for i in combo:
                        hit |= opts[i][2]
                    if hit != full:
                        continue
                mat = tuple(tuple(opts[i][0][u] for i in combo)
                            for u in range(len(prev)))
                d = tuple(opts[i][1] for i in combo)
                yield from walk(dims + (d,), mats + (mat,))

    yield from walk(((1,),), ())


def corpus_diagrams(max_depth=MAX_DEPTH):
    for dims, mats in corpus_matrices(max_depth):
        levels = [[(f"{n}.{i}", d) for i, d in enumerate(lv)]
                  for n, lv in enumerate(dims)]
        yield BratteliDiagram(levels, [[list(r) for r in m] for m in mats])


def corpus_counts(max_depth=MAX_DEPTH):
    counts = {}
    for dims, _ in corpus_matrices(max_depth):
        depth = len(dims) - 1
        counts[depth] = counts.get(depth, 0) + 1
    return counts


# ------------------------------------------------------------------- records

def _encode_level(x):
    return 0 if x is None else x


def _ud_depth1(ext):
    """Discreteness with depth-1 cells reduces to: no final fiber meets
    the same level-1 atom twice. Singleton cells then accept, while a
    repeat blocks every partition, so this equals the brute search."""
    depth = ext.depth
    for fib in ext.fibers[depth]:
        seen = set()
        for i in fib:
            a = ext.ancestor(depth, i, 1)
            if a in seen:
                return False
            seen.add(a)
    return True


def _rf_ok(ext):
    """One representative transposition per vertex of multiplicity >= 2.

    The witness outcome depends only on the first moved vertex, and a
    moved witness fiber always maps to a nontrivial image, so this
    covers every nontrivial element at every level.
    """
    diagram = ext.base
    for n in range(1, diagram.depth + 1):
        for v, d in enumerate(diagram.dims(n)):
            if d < 2:
                continue
            fib = ext.fibers[n][v]
            perm = list(range(ext.size(n)))
            perm[fib[0]], perm[fib[1]] = perm[fib[1]], perm[fib[0]]
            g = GroupElement(ext, n, tuple(perm))
            w = rf_witness(ext, g)
            if not w["applicable"] or not w["nontrivial"]:
                return False
    return True


def diagram_record(diagram):
    """Pack every check for one diagram into an int (layout above)."""
    depth = diagram.depth
    ext = extend(diagram)
    mt = multitree_report(diagram)
    zo = zero_one_report(diagram)
    ideals = enumerate_ideals(diagram)
    oideals = enumerate_order_ideals(diagram)

    rec = 0
    if mt["verdict"] == "MULTITREE":
        rec |= 1 << 0
    if _ud_depth1(ext):
        rec |= 1 << 1
    if zo["verdict"]:
        rec |= 1 << 2
    if _rf_ok(ext):
        rec |= 1 << 3
    if len(ideals) == len(oideals):
        rec |= 1 << 4
    oset = set(oideals)
    ok = True
    for S in ideals:
        sup = order_ideal_map(diagram, S)
        if sup not in oset or tuple(order_ideal_union(diagram, sup)) != S:
            ok = False
            break
    if ok:
        rec |= 1 << 5
    want = 1
    for d in diagram.dims(depth):
        want *= factorial(d)
    if LevelGroup(ext, depth).order == want:
        rec |= 1 << 6
    if extract(ext) == diagram:
        rec |= 1 << 7
    rec |= _encode_level(mt["min_clean_level"]) << 8
    rec |= _encode_level(zo["clean_from"]) << 12
    rec |= len(ideals) << 16
    rec |= len(oideals) << 32
    rec |= depth << 56
    rec |= diagram.width(depth) << 59
    return rec


def unpack_record(rec):
    """Readable dict view of a packed record."""
    return {
        "multitree": bool(rec & 1),
        "ud_depth1": bool(rec >> 1 & 1),
        "zero_one": bool(rec >> 2 & 1),
        "rf_ok": bool(rec >> 3 & 1),
        "ideal_counts_agree": bool(rec >> 4 & 1),
        "ideal_round_trip": bool(rec >> 5 & 1),
        "order_formula": bool(rec >> 6 & 1),
        "extension_round_trip": bool(rec >> 7 & 1),
        "min_clean_level": (rec >> 8 & 0xF) or None,
        "clean_from": (rec >> 12 & 0xF) or None,
        "ideal_count": rec >> 16 & 0xFFFF,
        "order_ideal_count": rec >> 32 & 0xFFFF,
        "depth": rec >> 56 & 0x7,
        "final_width": rec >> 59 & 0x7,
    }
