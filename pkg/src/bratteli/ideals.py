"""Ideals of a truncated diagram and the finite quotients they witness.

A subset S of the vertices at levels >= 1 is an ideal when it is closed
downward (children of members are members) and saturated (a vertex all
of whose children lie in S lies in S; final-level vertices are exempt,
which is what makes the truncation boundary open). Ideals are exactly
the complements of the subgraphs spanned by maximal chains and the
paths into them, which is how a nontrivial group element gets a finite
symmetric-group quotient: see rf_witness.
"""

from .diagram import validate


def _positions(diagram, depth):
    """Vertices at levels 1..depth in (level, index) order."""
    return [(n, j) for n in range(1, depth + 1)
            for j in range(diagram.width(n))]


def _normalize_subset(diagram, S, depth):
    out = set()
    for item in S:
        if isinstance(item, tuple):
            n, j = item
        else:
            n, j = diagram.find_vertex(item)
        if not 1 <= n <= depth:
            raise ValueError(f"vertex at level {n} outside levels 1..{depth}")
        out.add((n, j))
    return out


def _ids(diagram, pairs):
    return sorted(diagram.ids(n)[j] for (n, j) in pairs)


def is_ideal(diagram, S, depth=None):
    """Test both ideal clauses; return (ok, first violated clause or None)."""
    depth = diagram.depth if depth is None else depth
    S = _normalize_subset(diagram, S, depth)
    for n in range(1, depth + 1):
        for j in range(diagram.width(n)):
            vid = diagram.ids(n)[j]
            if n < depth:
                row = diagram.matrices[n][j]
                kids = [v for v, e in enumerate(row) if e]
                inside = [(n + 1, v) in S for v in kids]
                if (n, j) in S and not all(inside):
                    w = kids[inside.index(False)]
                    return False, {"clause": "downward", "v": vid,
                                   "w": diagram.ids(n + 1)[w]}
                if all(inside) and (n, j) not in S:
                    return False, {"clause": "saturation", "v": vid}
    return True, None


def ideal_closure(diagram, seed, depth=None):
    """Least ideal containing the seed vertices (fixpoint of both clauses)."""
    depth = diagram.depth if depth is None else depth
    S = _normalize_subset(diagram, seed, depth)
    changed = True
    while changed:
        changed = False
        for n in range(1, depth + 1):
            for j in range(diagram.width(n)):
                if n < depth:
                    row = diagram.matrices[n][j]
                    kids = [(n + 1, v) for v, e in enumerate(row) if e]
                    if (n, j) in S:
                        for kid in kids:
                            if kid not in S:
                                S.add(kid)
                                changed = True
                    elif all(kid in S for kid in kids):
                        S.add((n, j))
                        changed = True
    return _ids(diagram, S)


def _ideal_masks(diagram, depth):
    """All ideals as bitmasks over the flattened vertex list.

    The filter applies the two defining clauses to every subset, with no
    structural shortcut. Masks come back ascending.
    """
    pos = _positions(diagram, depth)
    where = {p: b for b, p in enumerate(pos)}
    nv = len(pos)
    child_mask = []
    internal = []
    for (n, j) in pos:
        internal.append(n < depth)
        cm = 0
        if n < depth:
            row = diagram.matrices[n][j]
            for v, e in enumerate(row):
                if e:
                    cm |= 1 << where[(n + 1, v)]
        child_mask.append(cm)
    masks = []
    for mask in range(1 << nv):
        ok = True
        for b in range(nv):
            cm = child_mask[b]
            if mask >> b & 1:
                if cm & mask != cm:
                    ok = False
                    break
            elif internal[b] and cm & mask == cm:
                ok = False
                break
        if ok:
            masks.append(mask)
    return pos, masks


def enumerate_ideals(diagram, depth=None, guard=16):
    """Every ideal, by brute subset filter (route A)."""
    depth = diagram.depth if depth is None else depth
    nv = sum(diagram.width(n) for n in range(1, depth + 1))
    if nv > guard:
        raise ValueError(f"{nv} vertices is over the enumeration guard")
    pos, masks = _ideal_masks(diagram, depth)
    out = []
    for mask in masks:
        members = [pos[b] for b in range(nv) if mask >> b & 1]
        out.append(tuple(_ids(diagram, members)))
    return out


def quotient_diagram(diagram, S, depth=None):
    """Diagram on the complement of an ideal.

    Kept vertices keep their multiplicities: an ideal never absorbs a
    parent edge of a kept vertex, so the sum rule survives. Returns None
    when some level empties out (the quotient is trivial).
    """
    depth = diagram.depth if depth is None else depth
    ok, problem = is_ideal(diagram, S, depth)
    if not ok:
        raise ValueError(f"not an ideal: {problem}")
    S = _normalize_subset(diagram, S, depth)
    keep = [[j for j in range(diagram.width(n)) if (n, j) not in S]
            for n in range(depth + 1)]
    keep[0] = [0]
    if any(not k for k in keep):
        return None
    levels = [[diagram.levels[n][j] for j in keep[n]] for n in range(depth + 1)]
    mats = [[[diagram.matrices[n][u][v] for v in keep[n + 1]]
             for u in keep[n]] for n in range(depth)]
    from .diagram import BratteliDiagram
    out = BratteliDiagram(levels, mats)
    assert not validate(out)
    return out


# ------------------------------------------------------------ chain subgraph

def greedy_chain(diagram, level, vid, depth=None):
    """Maximal chain from a vertex: always descend to the least-index child."""
    depth = diagram.depth if depth is None else depth
    j = diagram.vertex_index(level, vid)
    gamma = [vid]
    for l in range(level, depth):
        row = diagram.matrices[l][j]
        kids = [v for v, e in enumerate(row) if e]
        if not kids:
            raise ValueError(
                f"no maximal chain: {diagram.ids(l)[j]} at level {l} "
                f"has no children")
        j = kids[0]
        gamma.append(diagram.ids(l + 1)[j])
    return gamma


def chain_subgraph(diagram, gamma, depth=None):
    """The subgraph spanned by a maximal chain and every path into it.

    gamma lists consecutive vertex ids ending at the final level. The
    member set C collects every vertex lying on a directed path that
    ends on the chain; its complement is an ideal, and the largest
    multiplicity on C bounds the symmetric quotient a nontrivial element
    supported over the chain maps onto.
    """
    depth = diagram.depth if depth is None else depth
    start = depth - len(gamma) + 1
    if start < 1:
        raise ValueError("chain longer than the available levels")
    idx = []
    for off, vid in enumerate(gamma):
        idx.append(diagram.vertex_index(start + off, vid))
    for off in range(len(gamma) - 1):
        l = start + off
        if not diagram.matrices[l][idx[off]][idx[off + 1]]:
            raise ValueError(
                f"gamma is not a chain: no edge {gamma[off]} -> "
                f"{gamma[off + 1]}")
    members = [set() for _ in range(depth + 1)]
    for off, j in enumerate(idx):
        members[start + off].add(j)
    for l in range(depth - 1, 0, -1):
        mat = diagram.matrices[l]
        for u in range(diagram.width(l)):
            if u in members[l]:
                continue
            if any(mat[u][w] for w in members[l + 1]):
                members[l].add(u)
    flat = {(l, j) for l in range(1, depth + 1) for j in members[l]}
    comp = {(l, j) for l in range(1, depth + 1)
            for j in range(diagram.width(l))} - flat
    k = max(diagram.dims(l)[j] for (l, j) in flat)
    return {
        "gamma": list(gamma),
        "start_level": start,
        "members": _ids(diagram, flat),
        "ideal": _ids(diagram, comp),
        "k": k,
        "_member_sets": members,
    }


def _chain_multipath(diagram, members, depth):
    """First pair of chain-subgraph vertices joined by >= 2 paths, or None.

    Paths between members never leave the member set, so the counts can
    stay restricted to it.
    """
    for la in range(1, depth):
        vec = {u: {u: 1} for u in members[la]}
        for l in range(la, depth):
            mat = diagram.matrices[l]
            for u, counts in vec.items():
                nxt = {}
                for p, c in counts.items():
                    for w in members[l + 1]:
                        e = mat[p][w]
                        if e:
                            nxt[w] = nxt.get(w, 0) + c * e
                vec[u] = nxt
                for w, c in sorted(nxt.items()):
                    if c >= 2:
                        return {"u": diagram.ids(la)[u],
                                "w": diagram.ids(l + 1)[w],
                                "m": la, "l": l + 1, "count": c}
    return None


def rf_witness(ext, g, gamma=None):
    """Finite symmetric-group quotient separating a nontrivial element.

    Picks the first vertex whose fiber g moves, runs a maximal chain
    from it (greedy unless the caller supplies gamma), and maps g to its
    action on that fiber inside Sym(k), where k is the largest
    multiplicity on the chain subgraph. The complement of the subgraph
    is the ideal killed by the quotient. When the subgraph carries
    multiple paths between two of its vertices the construction does
    not bound the quotient and the result says so instead.
    """
    if g.is_identity():
        raise ValueError("element is trivial")
    diagram = ext.base
    n = g.level
    v = None
    for j in range(diagram.width(n)):
        if any(g.perm[i] != i for i in ext.fibers[n][j]):
            v = j
            break
    assert v is not None
    cache = getattr(ext, "_rf_cache", None)
    if cache is None:
        cache = ext._rf_cache = {}
    key = (n, v, tuple(gamma) if gamma else None)
    if key not in cache:
        if gamma is None:
            gamma = greedy_chain(diagram, n, diagram.ids(n)[v])
        elif gamma[0] != diagram.ids(n)[v]:
            raise ValueError(
                f"gamma starts at {gamma[0]}, but the first moved vertex "
                f"is {diagram.ids(n)[v]}")
        sub = chain_subgraph(diagram, gamma)
        multi = _chain_multipath(diagram, sub["_member_sets"], diagram.depth)
        cache[key] = (sub, multi)
    sub, multi = cache[key]
    if multi:
        return {"applicable": False, "reason": "multiple paths on the chain "
                "subgraph", "witness_pair": multi, "gamma": sub["gamma"]}
    fiber = ext.fibers[n][v]
    pos = {i: p for p, i in enumerate(fiber)}
    image = tuple(pos[g.perm[i]] for i in fiber) + tuple(
        range(len(fiber), sub["k"]))
    return {
        "applicable": True,
        "k": sub["k"],
        "image": image,
        "nontrivial": any(p != i for i, p in enumerate(image)),
        "gamma": sub["gamma"],
        "ideal": sub["ideal"],
    }
