"""Realizing a diagram as a tower of finite permutation groups.

The level-n group of an extended diagram is the direct sum of the
symmetric groups on the fibers over the level-n vertices. Group elements
are stored as one-line permutations (index arrays) of the extended
vertices of their level; they always preserve fibers setwise. Elements
embed into deeper level groups by letting them act on ancestors: a deep
vertex moves to the vertex with the same relative child address under
the image of its ancestor. These embeddings are what makes the tower a
directed system.
"""

from math import factorial


class UnionFind:
    def __init__(self):
        self.parent = {}
        self.size = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(v) for v in out.values()]


class LevelGroup:
    """Direct sum of symmetric groups on the level-n fibers."""

    def __init__(self, ext, level):
        self.ext = ext
        self.level = level
        self.blocks = [list(fib) for fib in ext.fibers[level] if fib]

    @property
    def order(self):
        n = 1
        for b in self.blocks:
            n *= factorial(len(b))
        return n

    def census(self):
        out = {}
        for b in self.blocks:
            out[len(b)] = out.get(len(b), 0) + 1
        return out

    def identity(self):
        return GroupElement(self.ext, self.level,
                            tuple(range(self.ext.size(self.level))))

    def elements(self):
        """Iterate the whole group, identity first (odometer over blocks)."""
        from itertools import permutations
        size = self.ext.size(self.level)
        per_block = [list(permutations(b)) for b in self.blocks]
        idx = [0] * len(per_block)
        while True:
            perm = list(range(size))
            for b, block in enumerate(self.blocks):
                for src, dst in zip(block, per_block[b][idx[b]]):
                    perm[src] = dst
            yield GroupElement(self.ext, self.level, tuple(perm))
            pos = 0
            while pos < len(idx) and idx[pos] + 1 == len(per_block[pos]):
                idx[pos] = 0
                pos += 1
            if pos == len(idx):
                return
            idx[pos] += 1

    def __repr__(self):
        return f"<LevelGroup level={self.level} order={self.order}>"


class GroupElement:
    def __init__(self, ext, level, perm):
        self.ext = ext
        self.level = level
        self.perm = tuple(perm)
        size = ext.size(level)
        if sorted(self.perm) != list(range(size)):
            raise ValueError("not a permutation of the level")
        pr = ext.proj[level]
        for i, j in enumerate(self.perm):
            if pr[i] != pr[j]:
                raise ValueError(
                    f"permutation does not preserve fibers: "
                    f"{ext.ids[level][i]} -> {ext.ids[level][j]}")

    def __call__(self, i):
        return self.perm[i]

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.perm))

    def compose(self, other):
        """self after other: (self.compose(other))(x) = self(other(x))."""
        assert other.ext is self.ext and other.level == self.level
        return GroupElement(self.ext, self.level,
                            tuple(self.perm[j] for j in other.perm))

    def inverse(self):
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return GroupElement(self.ext, self.level, tuple(inv))

    def __eq__(self, other):
        return (isinstance(other, GroupElement) and self.level == other.level
                and self.perm == other.perm)

    def __hash__(self):
        return hash((self.level, self.perm))

    def __repr__(self):
        return f"<GroupElement level={self.level} {cycle_notation(self)}>"


def level_group(ext, n):
    assert 0 <= n <= ext.depth
    return LevelGroup(ext, n)


def embed_element(g, ext, m):
    """Embed g into the level-m group, m >= g.level."""
    if ext is not g.ext:
        raise ValueError("element belongs to a different extension")
    if not (g.level <= m <= ext.depth):
        raise ValueError(f"target level {m} out of range")
    perm = g.perm
    for n in range(g.level, m):
        offs = ext.child_offsets[n]
        nxt = [0] * ext.size(n + 1)
        for i in range(ext.size(n + 1)):
            p = ext.parents[n + 1][i]
            rank = i - offs[p]
            nxt[i] = offs[perm[p]] + rank
        perm = nxt
    return GroupElement(ext, m, tuple(perm))


def orbits(ext, n, generator_set=None):
    """Orbits on the level-n extended vertices.

    With no generators this is the action of the full level group, so
    the orbits are exactly the fibers. With generators (elements at
    levels <= n) it is the orbit partition of the generated subgroup.
    Output is sorted within and across orbits.
    """
    if generator_set is None:
        return sorted([sorted(f) for f in ext.fibers[n] if f])
    uf = UnionFind()
    for i in range(ext.size(n)):
        uf.add(i)
    for g in generator_set:
        h = embed_element(g, ext, n)
        for i, j in enumerate(h.perm):
            uf.union(i, j)
    return sorted(uf.groups())


def saturate_cylinder(ext, cyl, n):
    """Level-n trace of the smallest invariant clopen set containing cyl.

    cyl is a (level, index) pair. The full level-n group moves the
    descendants of cyl across whole fibers, so the result is the union
    of every fiber met by a descendant. Returned as a sorted index list.
    """
    k, i = cyl
    assert 0 <= k <= n <= ext.depth
    frontier = [i]
    for l in range(k, n):
        frontier = [c for p in frontier for c in ext.children(l, p)]
    hit = {ext.proj[n][x] for x in frontier}
    out = []
    for v in hit:
        out.extend(ext.fibers[n][v])
    return sorted(out)


def refine_vertex_set(ext, n, members):
    """Children at level n+1 of a set of level-n extended vertices."""
    assert 0 <= n < ext.depth
    return sorted(c for i in members for c in ext.children(n, i))


# ------------------------------------------------------------ cycle strings

def cycle_notation(g):
    """One-line cycle notation over extended-vertex ids; identity is ()."""
    names = g.ext.ids[g.level]
    seen = [False] * len(g.perm)
    parts = []
    for i in range(len(g.perm)):
        if seen[i] or g.perm[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(names[j])
            j = g.perm[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) if parts else "()"


def element_from_cycles(ext, n, text):
    """Parse cycle notation like '(a#0 a#1)(b#0 b#2 b#1)'."""
    text = text.strip()
    perm = list(range(ext.size(n)))
    if text in ("", "()"):
        return GroupElement(ext, n, tuple(perm))
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad cycle notation: {text!r}")
    for chunk in text[1:-1].split(")("):
        names = chunk.split()
        if len(names) < 2:
            raise ValueError(f"cycle {chunk!r} too short")
        idx = [ext.index_of(n, name) for name in names]
        for a, b in zip(idx, idx[1:] + idx[:1]):
            perm[a] = b
    return GroupElement(ext, n, tuple(perm))
