"""Finite-depth Bratteli diagrams.

A diagram is a list of levels joined by nonnegative integer matrices.
Level 0 is a single root vertex of multiplicity 1. matrices[n] connects
level n to level n+1: rows are indexed by level-n vertices, columns by
level-(n+1) vertices, and each entry is an edge multiplicity. Every
vertex carries a multiplicity d(v) (the number of atoms above it in the
extension) obeying the sum rule

    d(v) = sum over parents u of  M[u, v] * d(u).

All values here are exact integers; depth is always finite. Matrices can
get wide for the builtin families (width grows like 2^n), so the path
counting helpers work on sparse row dictionaries internally while the
public representation stays dense lists.
"""

from itertools import permutations


class BratteliDiagram:
    def __init__(self, levels, matrices, notes=None):
        # levels: list of lists of (id, d) pairs; levels[0] is the root level.
        # matrices[n] maps level n to level n+1 (row = source vertex).
        self.levels = [[(str(i), int(d)) for (i, d) in lev] for lev in levels]
        self.matrices = [[list(map(int, row)) for row in m] for m in matrices]
        self.notes = dict(notes) if notes else {}

    @property
    def depth(self):
        return len(self.matrices)

    def width(self, n):
        return len(self.levels[n])

    def ids(self, n):
        return [i for (i, _) in self.levels[n]]

    def dims(self, n):
        return [d for (_, d) in self.levels[n]]

    def vertex_index(self, n, vid):
        for j, (i, _) in enumerate(self.levels[n]):
            if i == vid:
                return j
        raise KeyError(f"no vertex {vid!r} at level {n}")

    def find_vertex(self, vid):
        """Locate a globally unique vertex id, returning (level, index)."""
        hits = [(n, j) for n in range(len(self.levels))
                for j, (i, _) in enumerate(self.levels[n]) if i == vid]
        if not hits:
            raise KeyError(f"no vertex {vid!r}")
        if len(hits) > 1:
            raise KeyError(f"vertex id {vid!r} is not unique across levels")
        return hits[0]

    def truncate(self, depth):
        assert 0 <= depth <= self.depth
        return BratteliDiagram(self.levels[:depth + 1], self.matrices[:depth],
                               self.notes)

    def __eq__(self, other):
        return (isinstance(other, BratteliDiagram)
                and self.levels == other.levels
                and self.matrices == other.matrices)

    def __repr__(self):
        ws = "x".join(str(self.width(n)) for n in range(self.depth + 1))
        return f"<BratteliDiagram depth={self.depth} widths={ws}>"


def validate(diagram):
    """Check every diagram invariant; return a list of problem records.

    Each record is a dict with 'level', 'vertex' (an id or None) and
    'problem'. An empty list means the diagram is valid. This never
    raises on bad data, it reports.
    """
    problems = []

    def bad(level, vertex, text):
        problems.append({"level": level, "vertex": vertex, "problem": text})

    levels, mats = diagram.levels, diagram.matrices
    if not levels:
        bad(None, None, "no levels")
        return problems
    if len(mats) != len(levels) - 1:
        bad(None, None,
            f"{len(mats)} matrices for {len(levels)} levels")
        return problems
    if len(levels[0]) != 1:
        bad(0, None, f"root level has {len(levels[0])} vertices, wants 1")
    elif levels[0][0][1] != 1:
        bad(0, levels[0][0][0], f"root multiplicity {levels[0][0][1]}, wants 1")

    for n, lev in enumerate(levels):
        if not lev:
            bad(n, None, "empty level")
        seen = set()
        for vid, d in lev:
            if vid in seen:
                bad(n, vid, "duplicate vertex id within level")
            seen.add(vid)
            if d < 1:
                bad(n, vid, f"multiplicity {d} < 1")

    shape_ok = True
    for n, m in enumerate(mats):
        rows, cols = len(levels[n]), len(levels[n + 1])
        if len(m) != rows or any(len(r) != cols for r in m):
            bad(n + 1, None, f"matrix {n + 1} is not {rows}x{cols}")
            shape_ok = False
            continue
        for u in range(rows):
            for v in range(cols):
                if m[u][v] < 0:
                    bad(n + 1, levels[n + 1][v][0],
                        f"negative entry at [{u}][{v}]")
                    shape_ok = False
    if not shape_ok or any(not lev for lev in levels):
        return problems

    for n, m in enumerate(mats):
        for v, (vid, d) in enumerate(levels[n + 1]):
            col = [m[u][v] for u in range(len(levels[n]))]
            if not any(col):
                bad(n + 1, vid, "no incoming edge")
            got = sum(m[u][v] * levels[n][u][1] for u in range(len(levels[n])))
            if got != d:
                bad(n + 1, vid, f"d(v)={d} but incoming edges give {got}")
    return problems


def _require_valid(diagram):
    probs = validate(diagram)
    if probs:
        p = probs[0]
        raise ValueError(
            f"invalid diagram: level {p['level']} vertex {p['vertex']}: "
            f"{p['problem']}")


# ---------------------------------------------------------------- matrices

def _rows_to_sparse(m):
    return [{v: e for v, e in enumerate(row) if e} for row in m]


def _sparse_mul(a_rows, b_rows):
    out = []
    for arow in a_rows:
        acc = {}
        for j, e in arow.items():
            for v, f in b_rows[j].items():
                acc[v] = acc.get(v, 0) + e * f
        out.append(acc)
    return out


def mat_mul(a, b):
    """Dense integer matrix product (small inputs only)."""
    assert all(len(r) == len(b) for r in a)
    cols = len(b[0]) if b else 0
    sp = _sparse_mul(_rows_to_sparse(a), _rows_to_sparse(b))
    return [[row.get(v, 0) for v in range(cols)] for row in sp]


def telescope(diagram, chosen_levels):
    """Contract the diagram onto a subsequence of its levels.

    chosen_levels must be strictly increasing and start with 0. The new
    matrix between consecutive chosen levels is the product of the old
    matrices in between.
    """
    chosen = list(chosen_levels)
    if not chosen or chosen[0] != 0:
        raise ValueError("chosen levels must start with 0")
    if any(b <= a for a, b in zip(chosen, chosen[1:])):
        raise ValueError("chosen levels must be strictly increasing")
    if chosen[-1] > diagram.depth:
        raise ValueError(f"level {chosen[-1]} out of range")
    new_levels = [diagram.levels[i] for i in chosen]
    new_mats = []
    for a, b in zip(chosen, chosen[1:]):
        sp = _rows_to_sparse(diagram.matrices[a])
        for i in range(a + 1, b):
            sp = _sparse_mul(sp, _rows_to_sparse(diagram.matrices[i]))
        w = diagram.width(b)
        new_mats.append([[row.get(v, 0) for v in range(w)] for row in sp])
    return BratteliDiagram(new_levels, new_mats, diagram.notes)


def path_count_matrix(diagram, m, l):
    """Entry [u][v] counts directed paths from u at level m to v at level l."""
    if not (0 <= m < l <= diagram.depth):
        raise ValueError(f"need 0 <= m < l <= depth, got ({m}, {l})")
    sp = _rows_to_sparse(diagram.matrices[m])
    for i in range(m + 1, l):
        sp = _sparse_mul(sp, _rows_to_sparse(diagram.matrices[i]))
    w = diagram.width(l)
    return [[row.get(v, 0) for v in range(w)] for row in sp]


# --------------------------------------------------------------- extension

class ExtendedDiagram:
    """The tree of atoms above a diagram.

    Level n holds one extended vertex per atom; each knows its parent at
    level n-1 and its projection to a diagram vertex. The fiber over a
    diagram vertex v has exactly d(v) members. Extended vertices are
    ordered canonically: by parent, then by target diagram vertex, then
    by copy number, which makes everything downstream deterministic.
    """

    def __init__(self, base, parents, proj):
        self.base = base
        self.parents = parents      # parents[n][i], parents[0][0] == -1
        self.proj = proj            # proj[n][i] = diagram vertex index
        self.fibers = []
        self.ids = []
        for n, pr in enumerate(proj):
            fib = [[] for _ in range(base.width(n))]
            for i, v in enumerate(pr):
                fib[v].append(i)
            self.fibers.append(fib)
            names = [None] * len(pr)
            for v, members in enumerate(fib):
                vid = base.ids(n)[v]
                for k, i in enumerate(members):
                    names[i] = f"{vid}#{k}"
            self.ids.append(names)
        # children of parent p at level n+1 occupy a contiguous index range
        self.child_offsets = []
        for n in range(1, len(proj)):
            counts = [0] * len(proj[n - 1])
            for p in self.parents[n]:
                counts[p] += 1
            offs = [0]
            for c in counts:
                offs.append(offs[-1] + c)
            self.child_offsets.append(offs)

    @property
    def depth(self):
        return len(self.proj) - 1

    def size(self, n):
        return len(self.proj[n])

    def children(self, n, i):
        offs = self.child_offsets[n]
        return range(offs[i], offs[i + 1])

    def ancestor(self, n, i, m):
        """Ancestor at level m <= n of extended vertex i at level n."""
        assert 0 <= m <= n
        while n > m:
            i = self.parents[n][i]
            n -= 1
        return i

    def index_of(self, n, ext_id):
        try:
            return self.ids[n].index(ext_id)
        except ValueError:
            raise KeyError(f"no extended vertex {ext_id!r} at level {n}")


def extend(diagram):
    """Build the canonical extension of a valid diagram."""
    _require_valid(diagram)
    parents = [[-1]]
    proj = [[0]]
    for n in range(1, diagram.depth + 1):
        m = diagram.matrices[n - 1]
        plist, vlist = [], []
        for p, pv in enumerate(proj[n - 1]):
            for v in range(diagram.width(n)):
                for _ in range(m[pv][v]):
                    plist.append(p)
                    vlist.append(v)
        parents.append(plist)
        proj.append(vlist)
    ext = ExtendedDiagram(diagram, parents, proj)
    for n in range(diagram.depth + 1):
        for v, fib in enumerate(ext.fibers[n]):
            assert len(fib) == diagram.dims(n)[v]
    return ext


def extract(ext):
    """Re-derive the diagram from an extension (round-trip inverse of extend)."""
    base = ext.base
    levels = []
    for n in range(ext.depth + 1):
        levels.append([(base.ids(n)[v], len(fib))
                       for v, fib in enumerate(ext.fibers[n])])
    mats = []
    for n in range(1, ext.depth + 1):
        wprev, w = len(levels[n - 1]), len(levels[n])
        mat = [[None] * w for _ in range(wprev)]
        for p in range(ext.size(n - 1)):
            counts = [0] * w
            for c in ext.children(n - 1, p):
                counts[ext.proj[n][c]] += 1
            u = ext.proj[n - 1][p]
            for v in range(w):
                if mat[u][v] is None:
                    mat[u][v] = counts[v]
                elif mat[u][v] != counts[v]:
                    raise ValueError(
                        f"inconsistent extension: fiber of vertex {u} at "
                        f"level {n - 1} has unequal child counts")
        mats.append([[e or 0 for e in row] for row in mat])
    return BratteliDiagram(levels, mats, base.notes)


def cylinders(ext, n):
    """Root paths of the level-n extended vertices, as tuples of ids.

    Each path indexes one basic clopen set of the path space.
    """
    assert 0 <= n <= ext.depth
    out = []
    for i in range(ext.size(n)):
        path = []
        l, j = n, i
        while l >= 0:
            path.append(ext.ids[l][j])
            j = ext.parents[l][j]
            l -= 1
        out.append(tuple(reversed(path)))
    return out


# ------------------------------------------------------------- ray gluing

def glue_rays(diagram, ray_a, ray_b):
    """Identify two multiplicity-1 rays of a diagram.

    ray_a and ray_b are lists of vertex ids, one per level 1..depth, each
    forming a chain of d=1 vertices whose only parent is the previous ray
    vertex (or the root). The rays are replaced, at each level n, by two
    new d=1 vertices: an exit vertex collecting the non-ray children of
    both ray vertices (multiplicities added) and a tube vertex carrying
    the glued ray onward (children: next exit and next tube, once each).
    The exit/tube split at the last level needs the level below it, so
    the output has depth one less than the input.
    """
    _require_valid(diagram)
    D = diagram.depth
    if D < 2:
        raise ValueError("need depth >= 2 to glue rays")
    if len(ray_a) != D or len(ray_b) != D:
        raise ValueError("each ray must name one vertex per level 1..depth")
    a_idx = [diagram.vertex_index(n + 1, ray_a[n]) for n in range(D)]
    b_idx = [diagram.vertex_index(n + 1, ray_b[n]) for n in range(D)]
    for n in range(D):
        if a_idx[n] == b_idx[n]:
            raise ValueError(f"rays meet at level {n + 1}")
        for name, idx in (("a", a_idx[n]), ("b", b_idx[n])):
            if diagram.dims(n + 1)[idx] != 1:
                raise ValueError(f"ray {name} vertex at level {n + 1} has d != 1")
    for n in range(D - 1):
        m = diagram.matrices[n + 1]
        for idx, nxt in ((a_idx, a_idx), (b_idx, b_idx)):
            col = [m[u][nxt[n + 1]] for u in range(diagram.width(n + 1))]
            if col[idx[n]] != 1 or sum(col) != 1:
                raise ValueError(
                    f"level {n + 2} ray vertex must hang off the previous "
                    f"ray vertex by a single edge")

    keep = []          # per level 1..D-1: kept original indices in order
    for n in range(1, D):
        drop = {a_idx[n - 1], b_idx[n - 1]}
        keep.append([j for j in range(diagram.width(n)) if j not in drop])

    new_levels = [diagram.levels[0]]
    for n in range(1, D):
        aid, bid = ray_a[n - 1], ray_b[n - 1]
        lev = [diagram.levels[n][j] for j in keep[n - 1]]
        lev.append((f"{aid}+{bid}", 1))   # exit
        lev.append((f"{aid}~{bid}", 1))   # tube
        new_levels.append(lev)

    new_mats = []
    m0 = diagram.matrices[0][0]
    row0 = [m0[j] for j in keep[0]] + [1, 1]
    new_mats.append([row0])
    for n in range(1, D - 1):
        m = diagram.matrices[n]
        old_src, old_dst = keep[n - 1], keep[n]
        w = len(old_dst) + 2
        rows = []
        for u in old_src:
            rows.append([m[u][v] for v in old_dst] + [0, 0])
        exit_row = [m[a_idx[n - 1]][v] + m[b_idx[n - 1]][v] for v in old_dst]
        rows.append(exit_row + [0, 0])
        rows.append([0] * len(old_dst) + [1, 1])
        assert all(len(r) == w for r in rows)
        new_mats.append(rows)
    out = BratteliDiagram(new_levels, new_mats)
    assert not validate(out)
    return out


# ---------------------------------------------------------- canonical form

def _is_parallel_tree(diagram):
    """True when every non-root vertex receives edges from a single parent."""
    for m in diagram.matrices:
        for v in range(len(m[0])):
            if sum(1 for row in m if row[v]) != 1:
                return False
    return True


def _tree_code(diagram):
    memo = {}

    def code(n, j):
        key = (n, j)
        if key not in memo:
            if n == diagram.depth:
                kids = ()
            else:
                row = diagram.matrices[n][j]
                kids = tuple(sorted((row[v], code(n + 1, v))
                                    for v in range(len(row)) if row[v]))
            memo[key] = (diagram.dims(n)[j], kids)
        return memo[key]

    return code(0, 0)


def canonical_form(diagram, perm_guard=5040):
    """A form equal for two diagrams iff they are levelwise isomorphic.

    Parallel-edge trees (the interesting builtin families after gluing)
    get an exact subtree-code form. Other diagrams get a minimized matrix
    encoding over color-class-respecting vertex relabelings, which raises
    once the per-level search exceeds perm_guard.
    """
    _require_valid(diagram)
    if _is_parallel_tree(diagram):
        return ("tree", _tree_code(diagram))

    # color refinement: seed with (level width profile agnostic) d, refine by
    # sorted edge profiles on both sides until stable
    colors = [[(diagram.dims(n)[j],) for j in range(diagram.width(n))]
              for n in range(diagram.depth + 1)]
    for _ in range(diagram.depth + 2):
        fresh = []
        for n in range(diagram.depth + 1):
            lev = []
            for j in range(diagram.width(n)):
                down = ()
                if n < diagram.depth:
                    row = diagram.matrices[n][j]
                    down = tuple(sorted((row[v], colors[n + 1][v])
                                        for v in range(len(row)) if row[v]))
                up = ()
                if n > 0:
                    m = diagram.matrices[n - 1]
                    up = tuple(sorted((m[u][j], colors[n - 1][u])
                                      for u in range(len(m)) if m[u][j]))
                lev.append((colors[n][j], down, up))
            fresh.append(lev)
        if fresh == colors:
            break
        colors = fresh

    def class_perms(n):
        groups = {}
        for j in range(diagram.width(n)):
            groups.setdefault(colors[n][j], []).append(j)
        total = 1
        for g in groups.values():
            for i in range(2, len(g) + 1):
                total *= i
        if total > perm_guard:
            raise ValueError("diagram too symmetric for canonical_form")
        parts = [list(permutations(groups[k]))
                 for k in sorted(groups, key=repr)]
        out = []

        def rec(i, acc):
            if i == len(parts):
                order = [j for block in acc for j in block]
                out.append(order)
                return
            for p in parts[i]:
                rec(i + 1, acc + [p])

        rec(0, [])
        return out

    # level by level lexicographic minimization over class-respecting orders
    candidates = [([0],)]   # orderings chosen so far, level 0 fixed
    keys = [((diagram.dims(0)[0],),)]
    for n in range(1, diagram.depth + 1):
        m = diagram.matrices[n - 1]
        best_key, best = None, []
        for cand, kprefix in zip(candidates, keys):
            prev = cand[-1]
            for order in class_perms(n):
                dvec = tuple(diagram.dims(n)[j] for j in order)
                rows = tuple(tuple(m[u][v] for v in order) for u in prev)
                step = (dvec, rows)
                key = kprefix + (step,)
                if best_key is None or key < best_key:
                    best_key, best = key, [(cand + (order,), key)]
                elif key == best_key:
                    best.append((cand + (order,), key))
        candidates = [c for c, _ in best]
        keys = [k for _, k in best]
    return ("graph", keys[0])


def is_isomorphic(a, b):
    return canonical_form(a) == canonical_form(b)


# ------------------------------------------------------------ serialization

def diagram_to_json(diagram):
    return {
        "levels": [[{"id": i, "d": d} for (i, d) in lev]
                   for lev in diagram.levels],
        "matrices": [[list(row) for row in m] for m in diagram.matrices],
    }


def diagram_from_json(obj):
    if not isinstance(obj, dict) or "levels" not in obj or "matrices" not in obj:
        raise ValueError("diagram JSON needs 'levels' and 'matrices'")
    try:
        levels = [[(v["id"], v["d"]) for v in lev] for lev in obj["levels"]]
        matrices = [[[int(e) for e in row] for row in m]
                    for m in obj["matrices"]]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed diagram JSON: {exc}")
    return BratteliDiagram(levels, matrices)


def to_dot(diagram):
    """DOT export: one rank per level, parallel edges drawn separately."""
    lines = ["digraph bratteli {", "  rankdir=TB;", "  node [shape=box];"]
    for n, lev in enumerate(diagram.levels):
        row = "  { rank=same; "
        row += " ".join(f'"{n}/{i}" [label="{i}:{d}"];' for (i, d) in lev)
        row += " }"
        lines.append(row)
    for n, m in enumerate(diagram.matrices):
        for u, (uid, _) in enumerate(diagram.levels[n]):
            for v, (vid, _) in enumerate(diagram.levels[n + 1]):
                for _ in range(m[u][v]):
                    lines.append(f'  "{n}/{uid}" -> "{n + 1}/{vid}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
