"""Scaled ordered-group data attached to a truncated diagram.

Level n contributes Z^{V_n} with the coordinatewise positive cone and
the multiplicity vector as scale; the connecting morphisms are the
diagram matrices themselves. Nothing here materializes a limit object:
every question is asked about the finite stages, and the order-ideal
bookkeeping mirrors the vertex-ideal bookkeeping on the diagram side
(route B to its route A).
"""

from .diagram import _rows_to_sparse, _sparse_mul
from .ideals import is_ideal as _is_vertex_ideal


class ScaledLevel:
    """Rank, coordinatewise cone and scale of one level."""

    def __init__(self, rank, scale):
        self.rank = rank
        self.scale = tuple(scale)

    def __eq__(self, other):
        return (isinstance(other, ScaledLevel) and self.rank == other.rank
                and self.scale == other.scale)

    def __repr__(self):
        return f"<ScaledLevel rank={self.rank} scale={self.scale}>"


def scaled_level(diagram, n):
    assert 0 <= n <= diagram.depth
    return ScaledLevel(diagram.width(n), diagram.dims(n))


def transition_matrix(diagram, n):
    """The morphism from level n to level n+1, for 1 <= n < depth.

    This is the diagram matrix itself, same object, not a copy: the
    dimension range adds no data of its own at this stage.
    """
    if not 1 <= n < diagram.depth:
        raise ValueError(f"need 1 <= n < depth, got {n}")
    return diagram.matrices[n]


def zero_one_report(diagram, depth=None):
    """Do all composite transitions (sources >= level 1) stay 0/1?

    Scans cumulative products per source level. verdict is True when
    every composite entry is <= 1; first_bad_level is the least source
    level with an offending composite; clean_from is the least level all
    of whose onward composites are clean, or None when only the vacuous
    final level would qualify.
    """
    if depth is None:
        depth = diagram.depth
    if not 1 <= depth <= diagram.depth:
        raise ValueError(f"depth {depth} out of range")
    bad_sources = []
    for m in range(1, depth):
        sp = _rows_to_sparse(diagram.matrices[m])
        hit = False
        for l in range(m + 1, depth + 1):
            if l > m + 1:
                sp = _sparse_mul(sp, _rows_to_sparse(diagram.matrices[l - 1]))
            if any(e >= 2 for row in sp for e in row.values()):
                hit = True
                break
        if hit:
            bad_sources.append(m)
    if not bad_sources:
        clean_from = 1
    else:
        clean_from = max(bad_sources) + 1
        if clean_from == depth:
            clean_from = None
    return {
        "verdict": not bad_sources,
        "first_bad_level": bad_sources[0] if bad_sources else None,
        "clean_from": clean_from,
        "caveat": (f"verdict applies to the depth-{depth} truncation only; "
                   f"deeper levels could change it"),
    }


# -------------------------------------------------------------- order ideals

def _support_children(diagram, n):
    return [[v for v, e in enumerate(diagram.matrices[n][u]) if e]
            for u in range(diagram.width(n))]


def is_order_ideal(diagram, supports, depth=None):
    """Check per-level supports T_1..T_depth of a directed order ideal.

    Conditions: generators of T_n map into the span of T_{n+1} (all
    children supported), and T_n is saturated (a coordinate whose image
    lands entirely in the span of T_{n+1} already belongs to T_n; the
    final level is exempt). Returns (ok, problem or None).
    """
    depth = diagram.depth if depth is None else depth
    ts = [set(t) for t in supports]
    if len(ts) != depth:
        return False, {"clause": "shape",
                       "detail": f"{len(ts)} supports for depth {depth}"}
    for n in range(1, depth):
        kids = _support_children(diagram, n)
        for u in range(diagram.width(n)):
            covered = all(v in ts[n] for v in kids[u])
            if u in ts[n - 1] and not covered:
                return False, {"clause": "downward", "level": n,
                               "v": diagram.ids(n)[u]}
            if covered and u not in ts[n - 1]:
                return False, {"clause": "saturation", "level": n,
                               "v": diagram.ids(n)[u]}
    return True, None


def enumerate_order_ideals(diagram, depth=None, guard=12):
    """Forward depth-first search over per-level supports (route B).

    Grows candidate support sequences level by level, filtering each new
    level against the previous one; structurally different from the flat
    subset filter used for vertex ideals, which is the point.
    """
    depth = diagram.depth if depth is None else depth
    widths = [diagram.width(n) for n in range(1, depth + 1)]
    if any(w > guard for w in widths):
        raise ValueError("level too wide for order-ideal enumeration")
    out = []

    def compatible(n, prev, cur):
        kids = _support_children(diagram, n)
        for u in range(diagram.width(n)):
            covered = all(v in cur for v in kids[u])
            if (u in prev) != covered:
                return False
        return True

    def grow(n, acc):
        if n == depth:
            out.append(tuple(tuple(sorted(t)) for t in acc))
            return
        w = widths[n]
        for mask in range(1 << w):
            cur = {v for v in range(w) if mask >> v & 1}
            if compatible(n, acc[-1], cur):
                grow(n + 1, acc + [cur])

    w1 = widths[0]
    for mask in range(1 << w1):
        t1 = {v for v in range(w1) if mask >> v & 1}
        if depth == 1:
            out.append((tuple(sorted(t1)),))
        else:
            grow(1, [t1])
    return out


def order_ideal_map(diagram, S, depth=None):
    """Per-level supports of a vertex ideal; raises on non-ideals."""
    depth = diagram.depth if depth is None else depth
    ok, problem = _is_vertex_ideal(diagram, S, depth)
    if not ok:
        raise ValueError(f"not an ideal: {problem}")
    supports = [set() for _ in range(depth)]
    for item in S:
        n, j = diagram.find_vertex(item) if not isinstance(item, tuple) \
            else item
        supports[n - 1].add(j)
    return tuple(tuple(sorted(t)) for t in supports)


def order_ideal_union(diagram, supports, depth=None):
    """Inverse of order_ideal_map: flatten supports back to vertex ids."""
    depth = diagram.depth if depth is None else depth
    out = []
    for n, t in enumerate(supports, start=1):
        for j in t:
            out.append(diagram.ids(n)[j])
    return sorted(out)
