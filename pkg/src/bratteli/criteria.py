"""Discreteness criteria, evaluated exactly on finite truncations.

Every verdict here is about the truncated diagram it was given and says
so in a `caveat` field; deeper levels could change it. Builders of the
generative example families may attach an `analytic` note to a diagram
(claims that hold at all depths by construction); reports pass the
relevant flag through when present.
"""

from .diagram import _rows_to_sparse, _sparse_mul


def _caveat(depth):
    return (f"verdict applies to the depth-{depth} truncation only; "
            f"deeper levels could change it")


def _analytic(diagram, key):
    flags = diagram.notes.get("analytic")
    if isinstance(flags, dict):
        return flags.get(key)
    return None


def _resolve_depth(diagram, depth):
    if depth is None:
        return diagram.depth
    if not 1 <= depth <= diagram.depth:
        raise ValueError(f"depth {depth} out of range")
    return depth


# ----------------------------------------------------------------- multitree

def multitree_report(diagram, depth=None):
    """Look for multiple directed paths between vertex pairs.

    Scans all level pairs 1 <= m < l <= depth. The root is excluded on
    purpose: several edges from the root only say that a vertex has
    multiplicity, not that paths double up inside the diagram. Returns
    one witness per violating level pair, plus min_clean_level: the
    least N with no violation starting at a level >= N. That value is 1
    exactly for the MULTITREE verdict and None when only the vacuous
    N = depth would remain.
    """
    depth = _resolve_depth(diagram, depth)
    violations = []
    bad_sources = set()
    for m in range(1, depth):
        sp = _rows_to_sparse(diagram.matrices[m])
        for l in range(m + 1, depth + 1):
            if l > m + 1:
                sp = _sparse_mul(sp, _rows_to_sparse(diagram.matrices[l - 1]))
            witness = None
            for u, row in enumerate(sp):
                for v in sorted(row):
                    if row[v] >= 2:
                        witness = {"m": m, "l": l,
                                   "u": diagram.ids(m)[u],
                                   "v": diagram.ids(l)[v],
                                   "count": row[v]}
                        break
                if witness:
                    break
            if witness:
                violations.append(witness)
                bad_sources.add(m)
    if not bad_sources:
        verdict, min_clean = "MULTITREE", 1
    else:
        verdict = "VIOLATION"
        min_clean = max(bad_sources) + 1
        if min_clean == depth:
            min_clean = None    # only the vacuous tail would be clean
    report = {
        "verdict": verdict,
        "violations": violations,
        "min_clean_level": min_clean,
        "caveat": _caveat(depth),
    }
    if _analytic(diagram, "multitree") is not None:
        report["analytic"] = _analytic(diagram, "multitree")
    return report


# ------------------------------------------------------------ set partitions

def set_partitions(items):
    """All set partitions, by restricted growth string in lexicographic
    order: the one-cell partition comes first, singletons last."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def cells():
        out = [[] for _ in range(max(rgs) + 1)]
        for x, c in zip(items, rgs):
            out[c].append(x)
        return out

    while True:
        yield cells()
        i = n - 1
        while i > 0 and rgs[i] == max(rgs[:i]) + 1:
            rgs[i] = 0
            i -= 1
        if i == 0:
            return
        rgs[i] += 1


def bell_number(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


# -------------------------------------------------------------- brute search

def ud_bruteforce(ext, depth=None, partition_depth=1, guard=8):
    """Search the partitions of the level-k cylinders for a discreteness
    witness.

    A partition is accepted when every orbit of the final level group
    (the fibers at `depth`) meets the descendant set of each cell at
    most once. Ancestors are read off the extension tree directly, not
    from matrix products, so this is an independent route from the path
    count machinery. Returns the first accepting partition in canonical
    order, or the violating orbit found for each rejected partition.
    """
    if depth is None:
        depth = ext.depth
    if not 1 <= depth <= ext.depth:
        raise ValueError(f"depth {depth} out of range")
    k = partition_depth
    if not 1 <= k <= depth:
        raise ValueError(f"partition depth {k} out of range")
    size = ext.size(k)
    if size > guard:
        raise ValueError(
            f"{size} cylinders at level {k} would mean Bell({size}) = "
            f"{bell_number(size)} partitions, over the configured guard")

    anc = [ext.ancestor(depth, i, k) for i in range(ext.size(depth))]
    fibers = [f for f in ext.fibers[depth] if f]
    names_k = ext.ids[k]
    names_d = ext.ids[depth]

    rejected = []
    for cells in set_partitions(range(size)):
        cell_of = {}
        for c, cell in enumerate(cells):
            for x in cell:
                cell_of[x] = c
        bad = None
        for fib in fibers:
            counts = {}
            for i in fib:
                c = cell_of[anc[i]]
                counts[c] = counts.get(c, 0) + 1
                if counts[c] >= 2:
                    bad = fib
                    break
            if bad:
                break
        if bad is None:
            return {
                "verdict": True,
                "partition": [[names_k[x] for x in cell] for cell in cells],
                "caveat": _caveat(depth),
            }
        rejected.append({
            "partition": [[names_k[x] for x in cell] for cell in cells],
            "orbit": [names_d[i] for i in bad],
        })
    return {"verdict": False, "rejected": rejected, "caveat": _caveat(depth)}


# ------------------------------------------------------------- finite origin

def _adjacency(diagram, depth):
    """children[l][u] = level-(l+1) targets of vertex u at level l."""
    return [[sorted(v for v, e in enumerate(row) if e) for row in m]
            for m in diagram.matrices[:depth]]


def finite_origin_report(diagram, depth=None):
    """Check whether multiplicities are constant along paths from some
    level on.

    A violating pair is a vertex v (level >= 1) with a reachable
    descendant u of different multiplicity. If violations reach the last
    possible source level, no non-vacuous stable tail exists within the
    truncation and the verdict is VIOLATION with a witness at that
    maximal level. Otherwise STABLE_FROM(N) with the least evidenced N.
    """
    depth = _resolve_depth(diagram, depth)
    children = _adjacency(diagram, depth)
    violation_levels = []
    witness = None
    for m in range(1, depth):
        found = None
        for j in range(diagram.width(m)):
            reach = {j}
            dj = diagram.dims(m)[j]
            for l in range(m + 1, depth + 1):
                reach = {v for u in reach for v in children[l - 1][u]}
                bad = sorted(v for v in reach if diagram.dims(l)[v] != dj)
                if bad and found is None:
                    found = {"v": [m, diagram.ids(m)[j]],
                             "u": [l, diagram.ids(l)[bad[0]]],
                             "d_v": dj, "d_u": diagram.dims(l)[bad[0]]}
            if found:
                break
        if found:
            violation_levels.append(m)
            witness = found
    if not violation_levels:
        verdict, stable_from = "STABLE_FROM", 1
    elif max(violation_levels) == depth - 1:
        verdict, stable_from = "VIOLATION", None
    else:
        verdict, stable_from = "STABLE_FROM", max(violation_levels) + 1
    report = {
        "verdict": verdict,
        "stable_from": stable_from,
        "witness": witness,
        "violation_levels": violation_levels,
        "caveat": _caveat(depth),
    }
    if _analytic(diagram, "finite_origin") is not None:
        report["analytic"] = _analytic(diagram, "finite_origin")
    return report


# ---------------------------------------------------------------- simplicity

def simplicity_report(diagram, depth=None):
    """Depth-bounded simplicity proxy: every vertex at levels 1..depth-1
    must reach every final-level vertex.

    If some u cannot reach some w, the ancestor chain of w is a maximal
    chain u never connects to, and the pair is returned as the witness.
    Final-level vertices cannot be tested against anything within the
    truncation, which the caveat covers.
    """
    depth = _resolve_depth(diagram, depth)
    children = _adjacency(diagram, depth)
    for m in range(1, depth):
        for j in range(diagram.width(m)):
            reach = {j}
            for l in range(m + 1, depth + 1):
                reach = {v for u in reach for v in children[l - 1][u]}
            missing = [w for w in range(diagram.width(depth))
                       if w not in reach]
            if missing:
                w = missing[0]
                gamma = [diagram.ids(depth)[w]]
                cur = w
                for l in range(depth, 1, -1):
                    mat = diagram.matrices[l - 1]
                    cur = min(p for p in range(diagram.width(l - 1))
                              if mat[p][cur])
                    gamma.append(diagram.ids(l - 1)[cur])
                return {
                    "verdict": "FAILS",
                    "witness": {"u": [m, diagram.ids(m)[j]],
                                "w": [depth, diagram.ids(depth)[w]],
                                "gamma": list(reversed(gamma))},
                    "caveat": _caveat(depth),
                }
    return {"verdict": "SIMPLE_UP_TO_DEPTH", "witness": None,
            "caveat": _caveat(depth)}
