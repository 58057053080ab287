"""Prefix-swap homeomorphisms of {0,1}^N and their finite-depth shadows.

A RuleHomeo is an involution given by finitely many rules. A FINITE
rule u<>v swaps the disjoint cylinders uX and vX by prefix replacement.
A STARRED rule 1*:a<>b stands for the whole family 1^m a <> 1^m b over
m >= 0, which accumulates at the point 1^inf. Truncating at depth k
turns a RuleHomeo into a permutation table of the depth-k words; rules
too deep for k are absorbed into residual cylinders when both sides
share the depth-k prefix and are an error otherwise (the truncation
must not split a swapped cylinder).

On top of the tables: piecewise full closures at fixed depth, invariant
partitions, stabilizers, a discreteness check for finite groups, and
builders for the worked example families, both as rule generators and
as ready-made diagrams.
"""

import re
from itertools import product
from math import factorial

from .diagram import BratteliDiagram, validate
from .realize import UnionFind
from .criteria import set_partitions


def all_words(k):
    if k == 0:
        return [""]
    return ["".join(p) for p in product("01", repeat=k)]


def _check_word(w, what="word"):
    if not w or any(c not in "01" for c in w):
        raise ValueError(f"bad {what}: {w!r}")
    return w


def parse_point(spec):
    """Point specs are an optional binary head plus a constant tail,
    like '1^inf' or '01^inf'."""
    m = re.fullmatch(r"([01]*)([01])\^inf", spec)
    if not m:
        raise ValueError(f"bad point spec: {spec!r}")
    return m.group(1), m.group(2)


def point_prefix(spec, k):
    head, rep = parse_point(spec)
    return (head + rep * k)[:k]


# ------------------------------------------------------------------ RuleHomeo

class RuleHomeo:
    def __init__(self, rules, name=None):
        self.name = name
        self.rules = []
        for kind, x, y in rules:
            if kind not in ("finite", "starred"):
                raise ValueError(f"unknown rule kind {kind!r}")
            _check_word(x), _check_word(y)
            if len(x) != len(y) or x == y:
                raise ValueError(f"rule needs distinct equal-length words, "
                                 f"got {x!r} <> {y!r}")
            self.rules.append((kind, x, y))
        if not self.rules:
            raise ValueError("a rule homeomorphism needs at least one rule")
        self._check_disjoint()
        self._tables = {}

    def starred(self):
        return any(kind == "starred" for kind, _, _ in self.rules)

    def _sample_cylinders(self):
        """Enough family members that any overlap shows up among them."""
        maxlen = max(len(x) for _, x, _ in self.rules)
        bound = 2 * maxlen + 2
        out = []
        for r, (kind, x, y) in enumerate(self.rules):
            if kind == "finite":
                out.append((r, x))
                out.append((r, y))
            else:
                for m in range(bound):
                    out.append((r, "1" * m + x))
                    out.append((r, "1" * m + y))
        return out

    def _check_disjoint(self):
        cyls = self._sample_cylinders()
        for i in range(len(cyls)):
            for j in range(i + 1, len(cyls)):
                a, b = cyls[i][1], cyls[j][1]
                if a.startswith(b) or b.startswith(a):
                    raise ValueError(
                        f"rules overlap: cylinders {a!r} and {b!r}")

    def swap_pairs(self, k):
        """Swapped prefix pairs visible at depth k, plus residual cylinders.

        Raises when a rule would split a depth-k cylinder.
        """
        pairs, residual = [], set()
        for kind, x, y in self.rules:
            if kind == "finite":
                if len(x) <= k:
                    pairs.append((x, y))
                elif x[:k] == y[:k]:
                    residual.add(x[:k])
                else:
                    raise ValueError(
                        f"rule {x}<>{y} splits depth-{k} cylinders")
            else:
                m = 0
                while m + len(x) <= k:
                    pairs.append(("1" * m + x, "1" * m + y))
                    m += 1
                while m < k:
                    px = ("1" * m + x)[:k]
                    py = ("1" * m + y)[:k]
                    if px != py:
                        raise ValueError(
                            f"family 1^{m}:{x}<>{y} splits depth-{k} "
                            f"cylinders")
                    residual.add(px)
                    m += 1
                residual.add("1" * k)
        return pairs, sorted(residual)

    def table(self, k):
        """Permutation of the depth-k words induced by the visible rules."""
        if k not in self._tables:
            pairs, residual = self.swap_pairs(k)
            t = {w: w for w in all_words(k)}
            for x, y in pairs:
                for s in all_words(k - len(x)):
                    t[x + s], t[y + s] = y + s, x + s
            self._tables[k] = (t, residual)
        return self._tables[k]

    def apply_word(self, w):
        """Image of the cylinder wX as a depth-|w| cylinder. Residual
        words map to themselves, which is correct setwise: every
        absorbed rule moves points within the residual cylinder."""
        table, _ = self.table(len(w))
        return table[w]

    def __repr__(self):
        return f"<RuleHomeo {self.name or format_homeo(self)}>"


def normalize_table(h, k):
    """(table, residual) of a RuleHomeo at depth k."""
    table, residual = h.table(k)
    return dict(table), list(residual)


def parse_homeo(text, name=None):
    """One homeomorphism from comma-separated rules like
    '00<>01' or '1*:00<>01,10<>11'."""
    rules = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        kind = "finite"
        if chunk.startswith("1*:"):
            kind = "starred"
            chunk = chunk[3:]
        if "<>" not in chunk:
            raise ValueError(f"rule {chunk!r} wants the form u<>v")
        x, y = chunk.split("<>", 1)
        rules.append((kind, x.strip(), y.strip()))
    return RuleHomeo(rules, name=name)


def parse_generators(text):
    """Semicolon-separated homeomorphisms."""
    return [parse_homeo(part) for part in text.split(";") if part.strip()]


def format_homeo(h):
    bits = []
    for kind, x, y in h.rules:
        prefix = "1*:" if kind == "starred" else ""
        bits.append(f"{prefix}{x}<>{y}")
    return ",".join(bits)


def fixed_set(h):
    """Describe Fix(h). Clopen exactly when no STARRED rule is present:
    a starred family fixes 1^inf but moves points arbitrarily close to
    it. For two-letter starred families the fixed set can degenerate to
    the single point 1^inf, which is reported when detectable."""
    k = max(len(x) for _, x, _ in h.rules)
    if h.starred():
        k += 1
    table, residual = h.table(k)
    fixed = [w for w in all_words(k) if table[w] == w and w not in residual]
    out = {
        "clopen": not h.starred(),
        "depth": k,
        "fixed_cylinders": fixed,
        "moved_cylinders": sorted(w for w in all_words(k) if table[w] != w),
        "residual": list(residual),
        "isolated_point": "1^inf" if h.starred() else None,
    }
    if h.starred():
        two_letter = all(len(x) == 2 for kind, x, _ in h.rules
                         if kind == "starred")
        out["is_singleton"] = (not fixed and two_letter) or None
    else:
        out["is_singleton"] = False
    return out


# ---------------------------------------------------------------- PrefixGroup

class PrefixGroup:
    """A group of permutations of the depth-k words.

    Either generated (closure computed on demand, guarded) or known to
    be the full direct sum of symmetric groups on given blocks, in which
    case order and membership never enumerate elements.
    """

    def __init__(self, depth, generator_tables, full_blocks=None):
        self.depth = depth
        self.words = all_words(depth)
        self._index = {w: i for i, w in enumerate(self.words)}
        self.gens = []
        for t in generator_tables:
            perm = tuple(self._index[t[w]] for w in self.words)
            if sorted(perm) != list(range(len(self.words))):
                raise ValueError("generator table is not a permutation")
            self.gens.append(perm)
        self.full_blocks = None
        if full_blocks is not None:
            self.full_blocks = sorted(tuple(sorted(b)) for b in full_blocks)
        self._elements = None

    def is_trivial(self):
        n = len(self.words)
        return all(g == tuple(range(n)) for g in self.gens) and (
            not self.full_blocks)

    def orbits(self):
        uf = UnionFind()
        for w in self.words:
            uf.add(w)
        if self.full_blocks:
            for b in self.full_blocks:
                for x, y in zip(b, b[1:]):
                    uf.union(x, y)
        for g in self.gens:
            for i, j in enumerate(g):
                uf.union(self.words[i], self.words[j])
        return sorted(tuple(o) for o in uf.groups())

    def census(self):
        out = {}
        for o in self.orbits():
            out[len(o)] = out.get(len(o), 0) + 1
        return out

    def order(self, guard=200000):
        if self.full_blocks is not None:
            n = 1
            for b in self.full_blocks:
                n *= factorial(len(b))
            return n
        return len(self.closure(guard))

    def closure(self, guard=200000):
        if self._elements is None:
            n = len(self.words)
            ident = tuple(range(n))
            seen = {ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for t in frontier:
                    for g in self.gens:
                        u = tuple(g[i] for i in t)
                        if u not in seen:
                            seen.add(u)
                            nxt.append(u)
                            if len(seen) > guard:
                                raise ValueError(
                                    "group too large at the configured bound")
                frontier = nxt
            self._elements = sorted(seen)
        return self._elements

    def contains(self, table, guard=200000):
        perm = tuple(self._index[table[w]] for w in self.words)
        if self.full_blocks is not None:
            block_of = {}
            for b in self.full_blocks:
                for w in b:
                    block_of[w] = b
            for i, j in enumerate(perm):
                if i == j:
                    continue
                wi, wj = self.words[i], self.words[j]
                if block_of.get(wi) is None or block_of.get(wi) != \
                        block_of.get(wj):
                    return False
            return True
        return perm in set(self.closure(guard))

    def element_tables(self, guard=200000):
        return [{self.words[i]: self.words[j] for i, j in enumerate(t)}
                for t in self.closure(guard)]

    def to_depth(self, k):
        """Lift to a deeper word space by suffix extension (generated
        flavor: fullness is not preserved by lifting)."""
        assert k >= self.depth
        tables = []
        for g in self.gens:
            t = {}
            for i, j in enumerate(g):
                for s in all_words(k - self.depth):
                    t[self.words[i] + s] = self.words[j] + s
            tables.append(t)
        return PrefixGroup(k, tables)

    def __repr__(self):
        kind = "full" if self.full_blocks is not None else "generated"
        return f"<PrefixGroup depth={self.depth} {kind}>"


def trivial_group(depth=0):
    return PrefixGroup(depth, [])


def _spanning_transpositions(depth, blocks):
    tables = []
    for b in blocks:
        for x, y in zip(b, b[1:]):
            t = {w: w for w in all_words(depth)}
            t[x], t[y] = y, x
            tables.append(t)
    return tables


def pw_full_closure(generators, k):
    """Piecewise full closure at depth k: the group generated by all
    single-cylinder transpositions w <-> g(w) over the generators. That
    is the full direct sum of symmetric groups on the orbit blocks, so
    the result is represented by its blocks, never by its elements."""
    uf = UnionFind()
    for w in all_words(k):
        uf.add(w)
    for h in generators:
        table, _ = h.table(k)
        for w, v in table.items():
            if v != w:
                uf.union(w, v)
    blocks = [tuple(g) for g in uf.groups() if len(g) >= 2]
    return PrefixGroup(k, _spanning_transpositions(k, blocks),
                       full_blocks=blocks)


def stabilizer_subgroup(generators, k, point):
    """Stabilizer of a point inside the piecewise full closure: split
    the block holding the point's depth-k prefix."""
    G = pw_full_closure(generators, k)
    w = point_prefix(point, k)
    blocks = []
    for b in G.full_blocks:
        if w in b:
            rest = tuple(x for x in b if x != w)
            if len(rest) >= 2:
                blocks.append(rest)
        else:
            blocks.append(b)
    return PrefixGroup(k, _spanning_transpositions(k, blocks),
                       full_blocks=blocks)


# ------------------------------------------------------- invariant partition

def _element_parts(words, perm):
    """The sets A_{p,i} of one permutation: words on p-cycles, split by
    cycle position from the lex-least member."""
    index = {w: i for i, w in enumerate(words)}
    seen = set()
    out = {}
    for w in words:
        if w in seen:
            continue
        cyc = [w]
        j = perm[index[w]]
        while words[j] != w:
            cyc.append(words[j])
            j = perm[index[words[j]]]
        seen.update(cyc)
        p = len(cyc)
        start = cyc.index(min(cyc))
        for i in range(p):
            out.setdefault((p, i), set()).add(cyc[(start + i) % p])
    return list(out.values())


def invariant_partition(F, guard=200000):
    """Finest partition whose parts have equal setwise and pointwise
    stabilizers in F (atoms of the algebra generated by all translates
    of the cycle-structure sets of all elements).

    Full block groups get the structural answer: moved words become
    singletons and the globally fixed words one part. Generated groups
    are enumerated. The defining property is verified before returning.
    """
    words = F.words
    if F.full_blocks is not None:
        moved = sorted(w for b in F.full_blocks for w in b)
        fixed = sorted(set(words) - set(moved))
        parts = [(w,) for w in moved]
        if fixed:
            parts.append(tuple(fixed))
        return sorted(parts)

    elements = F.closure(guard)
    index = {w: i for i, w in enumerate(words)}
    sets = []
    for t in elements:
        for part in _element_parts(words, t):
            for h in elements:
                sets.append(frozenset(words[h[index[w]]] for w in part))
    sets = sorted(set(sets), key=sorted)
    profile = {}
    for w in words:
        key = tuple(w in s for s in sets)
        profile.setdefault(key, []).append(w)
    parts = sorted(tuple(sorted(v)) for v in profile.values())

    for part in parts:
        pset = set(part)
        for t in elements:
            image = {words[t[index[w]]] for w in part}
            if image == pset and any(words[t[index[w]]] != w for w in part):
                raise AssertionError(
                    "setwise stabilizer exceeds pointwise stabilizer "
                    f"on part {part}")
    return parts


# ------------------------------------------------------------- finite UD test

def ud_check_finite(generators, guard=20000):
    """Discreteness of the group generated by finitely many RuleHomeos.

    Elements are tracked symbolically as (depth-K table, parity vector
    over the starred families); that is faithful as long as no finite
    table moves the truncation residue of a starred family, which is
    checked. An element with an odd parity acts on a neighborhood basis
    of 1^inf without fixing any of it, so its fixed set is not clopen
    and the group is not uniformly discrete. All-even groups consist of
    table elements with clopen fixed sets, and the invariant partition
    of the table group is returned as the discreteness witness.
    """
    if not generators:
        raise ValueError("no generators")
    maxlen = max(len(x) for h in generators for _, x, _ in h.rules)
    K = maxlen + 2
    families = []
    for h in generators:
        for kind, x, y in h.rules:
            if kind == "starred" and (x, y) not in families:
                families.append((x, y))
    residue = set()
    for x, y in families:
        m = K - len(x) + 1
        while m < K:
            residue.add(("1" * m + x)[:K])
            m += 1
        residue.add("1" * K)

    sym_gens = []
    for h in generators:
        table, _ = h.table(K)
        for r in residue:
            if table[r] != r:
                raise ValueError(
                    f"generator moves the residue cylinder {r!r}; "
                    f"unsupported rule interaction")
        parity = tuple(
            1 if any(kind == "starred" and (x, y) == fam
                     for kind, x, y in h.rules) else 0
            for fam in families)
        sym_gens.append((table, parity))

    words = all_words(K)
    index = {w: i for i, w in enumerate(words)}
    ident = (tuple(range(len(words))), (0,) * len(families))
    gens = [(tuple(index[t[w]] for w in words), p) for t, p in sym_gens]
    seen = {ident}
    frontier = [ident]
    odd = None
    while frontier:
        nxt = []
        for t, p in frontier:
            for gt, gp in gens:
                u = (tuple(gt[i] for i in t),
                     tuple(a ^ b for a, b in zip(p, gp)))
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
                    if len(seen) > guard:
                        raise ValueError(
                            "group too large at the configured bound")
                    if odd is None and any(u[1]):
                        odd = u
        frontier = nxt

    if odd is not None:
        moved = sum(1 for i, j in enumerate(odd[0]) if i != j)
        return {
            "verdict": False,
            "depth": K,
            "order": len(seen),
            "witness_element": {
                "parities": list(odd[1]),
                "families": [f"1*:{x}<>{y}" for x, y in families],
                "moved_words": moved,
            },
        }
    tables = [{words[i]: words[j] for i, j in enumerate(t)}
              for t, _ in sorted(seen)]
    partition = invariant_partition(PrefixGroup(K, tables))
    return {
        "verdict": True,
        "depth": K,
        "order": len(seen),
        "witness_partition": [list(p) for p in partition],
    }


def ud_partition_search(generators, cell_depth, orbit_depth):
    """Try every partition of the depth-cell_depth cylinders against the
    orbits of the generated group on depth-orbit_depth words. Accepted
    means every orbit meets the cylinder set of each cell at most once.
    Returns the first accepting partition, if any."""
    assert 1 <= cell_depth <= orbit_depth
    uf = UnionFind()
    deep = all_words(orbit_depth)
    for w in deep:
        uf.add(w)
    for h in generators:
        table, _ = h.table(orbit_depth)
        for w, v in table.items():
            if v != w:
                uf.union(w, v)
    orbs = uf.groups()
    checked = 0
    for cells in set_partitions(all_words(cell_depth)):
        checked += 1
        cell_of = {}
        for c, cell in enumerate(cells):
            for w in cell:
                cell_of[w] = c
        ok = True
        for o in orbs:
            counts = {}
            for w in o:
                c = cell_of[w[:cell_depth]]
                counts[c] = counts.get(c, 0) + 1
                if counts[c] >= 2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return {"accepted": [list(c) for c in cells], "checked": checked}
    return {"accepted": None, "checked": checked}


# -------------------------------------------------------------- theta bridge

def theta_word(w):
    """theta(1^m 0 delta rest) = delta 1^m 0 rest, as a word map."""
    m = 0
    while m < len(w) and w[m] == "1":
        m += 1
    if m >= len(w) - 1:
        raise ValueError(f"{w!r} is a residual word for theta")
    return w[m + 1] + "1" * m + "0" + w[m + 2:]


def theta_check(depth):
    """Verify theta h_m = h'_m theta on all non-residual depth words,
    for every m with m + 3 <= depth."""
    if depth < 3:
        raise ValueError("need depth >= 3")
    excluded = {"1" * depth, "1" * (depth - 1) + "0"}
    domain = [w for w in all_words(depth) if w not in excluded]
    mismatches = []
    ms = list(range(depth - 2))
    for m in ms:
        h, _ = rule_g(m).table(depth)
        hp, _ = rule_h_prime(m).table(depth)
        for w in domain:
            if theta_word(h[w]) != hp[theta_word(w)]:
                mismatches.append({"m": m, "word": w})
    return {
        "ok": not mismatches,
        "depth": depth,
        "m_checked": ms,
        "words_checked": len(domain),
        "excluded": sorted(excluded),
        "mismatches": mismatches,
    }


# ------------------------------------------------------------ chain builders

def index_words(n):
    """All length-n binary words except 1^n."""
    return [w for w in all_words(n) if w != "1" * n]


def rule_sigma():
    return RuleHomeo([("finite", "0", "1")], name="sigma")


def rule_g(n):
    return RuleHomeo([("finite", "1" * n + "00", "1" * n + "01")],
                     name=f"g_{n}")


def rule_g_inf():
    return RuleHomeo([("starred", "00", "01")], name="g_inf")


def rule_h_prime(m):
    return RuleHomeo([("finite", "0" + "1" * m + "0", "1" + "1" * m + "0")],
                     name=f"h'_{m}")


def rule_alpha(i):
    _check_word(i)
    return RuleHomeo([("finite", "0" + i, "1" + i)], name=f"alpha_{i}")


def rule_beta(i):
    _check_word(i)
    m = 0
    while i[m] == "1":
        m += 1
    j = i[m + 1:]
    return RuleHomeo([("finite", "1" * m + "00" + j, "1" * m + "01" + j)],
                     name=f"beta_{i}")


def sec5_G_stage(n):
    return [rule_alpha(i) for i in index_words(n)]


def sec5_H_stage(n):
    return [rule_beta(i) for i in index_words(n)]


def sec5_G_chain(stages):
    return [trivial_group()] + [
        pw_full_closure(sec5_G_stage(n), n + 1) for n in range(1, stages + 1)]


def sec5_H_chain(stages):
    return [trivial_group()] + [
        pw_full_closure(sec5_H_stage(n), n + 1) for n in range(1, stages + 1)]


def fc2_chain(stages):
    out = [trivial_group()]
    for n in range(1, stages + 1):
        table, _ = rule_sigma().table(n)
        out.append(PrefixGroup(n, [table]))
    return out


def chain_to_diagram(chain, algebra="minimal", guard=200000):
    """Turn an increasing chain of PrefixGroups into stage data and a
    diagram.

    Stage n builds an algebra: the invariant partition of H_n refined by
    the H_n-orbits of the previous stage's atoms ('minimal'), or simply
    all depth-k_n cylinders ('dyadic'). The stage group is the piecewise
    full closure over that algebra, i.e. the full block group on the
    H_n-orbits of the atoms; diagram vertices are those orbits with the
    orbit size as multiplicity, and edge counts come from containment of
    child atoms in a parent atom (checked to agree across each orbit).
    """
    if algebra not in ("minimal", "dyadic"):
        raise ValueError(f"unknown algebra mode {algebra!r}")
    if not chain or not chain[0].is_trivial():
        raise ValueError("chain must start at the trivial group")
    prev_depth = chain[0].depth
    prev_atoms = [tuple(all_words(prev_depth))]
    prev_orbit_of = {0: 0}
    prev_orbits = [[0]]
    levels = [[("r", 1)]]
    mats = []
    stages = []
    prev_group = chain[0]
    for H in chain[1:]:
        k = H.depth
        if k < prev_depth:
            raise ValueError("chain depths must be nondecreasing")
        lifted_gens = prev_group.to_depth(k) if prev_group.gens else None
        if lifted_gens is not None:
            for t in lifted_gens.gens:
                table = {lifted_gens.words[i]: lifted_gens.words[j]
                         for i, j in enumerate(t)}
                if not H.contains(table, guard):
                    raise ValueError(
                        "chain is not increasing: a lifted generator of "
                        f"the depth-{prev_depth} stage is missing at "
                        f"depth {k}")

        lifted_atoms = [tuple(sorted(w + s for w in a
                                     for s in all_words(k - prev_depth)))
                        for a in prev_atoms]
        if algebra == "dyadic":
            atoms = [(w,) for w in all_words(k)]
        else:
            sets = [frozenset(p) for p in invariant_partition(H, guard)]
            tables = [{H.words[i]: H.words[j] for i, j in enumerate(t)}
                      for t in H.gens]
            for a in lifted_atoms:
                orbit = {frozenset(a)}
                frontier = [frozenset(a)]
                while frontier:
                    nxt = []
                    for s in frontier:
                        for t in tables:
                            img = frozenset(t[w] for w in s)
                            if img not in orbit:
                                orbit.add(img)
                                nxt.append(img)
                    frontier = nxt
                sets.extend(orbit)
            sets = sorted(set(sets), key=sorted)
            profile = {}
            for w in all_words(k):
                key = tuple(w in s for s in sets)
                profile.setdefault(key, []).append(w)
            atoms = sorted(tuple(sorted(v)) for v in profile.values())

        atom_index = {a: i for i, a in enumerate(atoms)}
        uf = UnionFind()
        for i in range(len(atoms)):
            uf.add(i)
        gen_tables = [{H.words[i]: H.words[j] for i, j in enumerate(t)}
                      for t in H.gens]
        for t in gen_tables:
            for i, a in enumerate(atoms):
                img = tuple(sorted(t[w] for w in a))
                if img not in atom_index:
                    raise AssertionError("stage algebra is not invariant")
                uf.union(i, atom_index[img])
        orbit_sets = sorted(uf.groups())
        orbit_ids = [min(min(atoms[i]) for i in o) for o in orbit_sets]
        order = sorted(range(len(orbit_sets)), key=lambda x: orbit_ids[x])
        orbit_sets = [orbit_sets[x] for x in order]
        orbit_ids = [orbit_ids[x] for x in order]
        orbit_of = {}
        for v, o in enumerate(orbit_sets):
            for i in o:
                orbit_of[i] = v

        levels.append([(orbit_ids[v], len(o))
                       for v, o in enumerate(orbit_sets)])
        mat = []
        for po in prev_orbits:
            rows = []
            for pi in po:
                parent = set(lifted_atoms[pi])
                counts = [0] * len(orbit_sets)
                for i, a in enumerate(atoms):
                    if set(a) <= parent:
                        counts[orbit_of[i]] += 1
                rows.append(counts)
            for r in rows[1:]:
                if r != rows[0]:
                    raise AssertionError(
                        "containment counts differ inside an orbit")
            mat.append(rows[0])
        mats.append(mat)

        g_order = 1
        for o in orbit_sets:
            g_order *= factorial(len(o))
        stages.append({
            "depth": k,
            "atoms": len(atoms),
            "census": {len(o): sum(1 for x in orbit_sets if len(x) == len(o))
                       for o in orbit_sets},
            "order": g_order,
            "blocks": [[min(atoms[i]) for i in o] for o in orbit_sets],
        })
        prev_depth, prev_atoms = k, atoms
        prev_orbits, prev_group = orbit_sets, H

    diagram = BratteliDiagram(levels, mats)
    problems = validate(diagram)
    assert not problems, problems
    return stages, diagram


# ------------------------------------------------------------ diagram makers

def _level_sorted(pairs):
    return sorted(pairs, key=lambda iv: iv[0])


def sec5_G_diagram(depth):
    """Orbit diagram of the first stabilizer tower, levels indexed so
    that level n sees the depth-(n+1) cylinders. Vertex ids are the
    lex-least atom of each orbit: '0u' for the pair {0u, 1u}, and the
    two all-1-tail singletons."""
    levels = [[("r", 1)]]
    mats = []
    for n in range(1, depth + 1):
        lev = [("0" + u, 2) for u in index_words(n)]
        lev.append(("0" + "1" * n, 1))
        lev.append(("1" * (n + 1), 1))
        levels.append(_level_sorted(lev))
    for n in range(1, depth + 1):
        if n == 1:
            mats.append([[d for (_, d) in levels[1]]])
            continue
        prev, cur = levels[n - 1], levels[n]
        idx = {i: v for v, (i, _) in enumerate(cur)}
        mat = [[0] * len(cur) for _ in prev]
        for u_pos, (uid, _) in enumerate(prev):
            if uid == "1" * n:
                kids = ["0" + "1" * (n - 1) + "0", "1" * (n + 1)]
            elif uid == "0" + "1" * (n - 1):
                kids = ["0" + "1" * (n - 1) + "0", "0" + "1" * n]
            else:
                kids = [uid + "0", uid + "1"]
            for kid in kids:
                mat[u_pos][idx[kid]] += 1
        mats.append(mat)
    notes = {"family": "sec5-G",
             "analytic": {"multitree": True, "uniformly_discrete": True,
                          "finite_origin": False}}
    return BratteliDiagram(levels, mats, notes)


def sec5_H_diagram(depth):
    """Orbit diagram of the second tower (the theta-image of the glued
    first tower): pair ids 1^m 00 j, exit ids 1^n 0, tube ids 1^(n+1)."""

    def pair_id(i):
        m = 0
        while i[m] == "1":
            m += 1
        return "1" * m + "00" + i[m + 1:]

    levels = [[("r", 1)]]
    mats = []
    for n in range(1, depth + 1):
        lev = [(pair_id(i), 2) for i in index_words(n)]
        lev.append(("1" * n + "0", 1))
        lev.append(("1" * (n + 1), 1))
        levels.append(_level_sorted(lev))
    for n in range(1, depth + 1):
        if n == 1:
            mats.append([[d for (_, d) in levels[1]]])
            continue
        prev, cur = levels[n - 1], levels[n]
        idx = {i: v for v, (i, _) in enumerate(cur)}
        mat = [[0] * len(cur) for _ in prev]
        for u_pos, (uid, _) in enumerate(prev):
            if uid == "1" * n:
                mat[u_pos][idx["1" * n + "0"]] += 1
                mat[u_pos][idx["1" * (n + 1)]] += 1
            elif uid == "1" * (n - 1) + "0":
                mat[u_pos][idx[pair_id("1" * (n - 1) + "0")]] += 2
            else:
                m = 0
                while uid[m] == "1":
                    m += 1
                i = "1" * m + "0" + uid[m + 2:]
                for kid in (pair_id(i + "0"), pair_id(i + "1")):
                    mat[u_pos][idx[kid]] += 1
        mats.append(mat)
    notes = {"family": "sec5-H",
             "analytic": {"multitree": False, "uniformly_discrete": False}}
    return BratteliDiagram(levels, mats, notes)


def sec5_G_raw_diagram(depth):
    """Unteliscoped variant: level n sees the depth-n cylinders, so the
    two level-1 vertices are the 0 and 1 atoms themselves."""
    levels = [[("r", 1)]]
    mats = []
    for n in range(1, depth + 1):
        lev = [("0" + u, 2) for u in index_words(n - 1)]
        lev.append(("0" + "1" * (n - 1), 1))
        lev.append(("1" * n, 1))
        levels.append(_level_sorted(lev))
    for n in range(1, depth + 1):
        if n == 1:
            mats.append([[d for (_, d) in levels[1]]])
            continue
        prev, cur = levels[n - 1], levels[n]
        idx = {i: v for v, (i, _) in enumerate(cur)}
        mat = [[0] * len(cur) for _ in prev]
        for u_pos, (uid, _) in enumerate(prev):
            if uid == "1" * (n - 1):
                kids = ["0" + "1" * (n - 2) + "0", "1" * n]
            elif uid == "0" + "1" * (n - 2):
                kids = ["0" + "1" * (n - 2) + "0", "0" + "1" * (n - 1)]
            else:
                kids = [uid + "0", uid + "1"]
            for kid in kids:
                mat[u_pos][idx[kid]] += 1
        mats.append(mat)
    notes = {"family": "sec5-G-raw",
             "analytic": {"multitree": True, "uniformly_discrete": True,
                          "finite_origin": False}}
    return BratteliDiagram(levels, mats, notes)


def sec5_H_raw_diagram(depth):
    def pair_id(i):
        m = 0
        while i[m] == "1":
            m += 1
        return "1" * m + "00" + i[m + 1:]

    levels = [[("r", 1)]]
    mats = []
    for n in range(1, depth + 1):
        lev = [(pair_id(i), 2) for i in index_words(n - 1)]
        lev.append(("1" * (n - 1) + "0", 1))
        lev.append(("1" * n, 1))
        levels.append(_level_sorted(lev))
    for n in range(1, depth + 1):
        if n == 1:
            mats.append([[d for (_, d) in levels[1]]])
            continue
        prev, cur = levels[n - 1], levels[n]
        idx = {i: v for v, (i, _) in enumerate(cur)}
        mat = [[0] * len(cur) for _ in prev]
        for u_pos, (uid, _) in enumerate(prev):
            if uid == "1" * (n - 1):
                mat[u_pos][idx["1" * (n - 1) + "0"]] += 1
                mat[u_pos][idx["1" * n]] += 1
            elif uid == "1" * (n - 2) + "0":
                mat[u_pos][idx[pair_id("1" * (n - 2) + "0")]] += 2
            else:
                m = 0
                while uid[m] == "1":
                    m += 1
                i = "1" * m + "0" + uid[m + 2:]
                for kid in (pair_id(i + "0"), pair_id(i + "1")):
                    mat[u_pos][idx[kid]] += 1
        mats.append(mat)
    notes = {"family": "sec5-H-raw",
             "analytic": {"multitree": False, "uniformly_discrete": False}}
    return BratteliDiagram(levels, mats, notes)


def fc2_diagram(depth):
    """Orbit diagram of the full closure of the first-letter swap: a
    binary tree of pairs, constant multiplicity 2."""
    levels = [[("r", 1)]]
    mats = []
    for n in range(1, depth + 1):
        levels.append([("0" + u, 2) for u in all_words(n - 1)])
    mats.append([[2]])
    for n in range(2, depth + 1):
        prev, cur = levels[n - 1], levels[n]
        idx = {i: v for v, (i, _) in enumerate(cur)}
        mat = [[0] * len(cur) for _ in prev]
        for u_pos, (uid, _) in enumerate(prev):
            mat[u_pos][idx[uid + "0"]] += 1
            mat[u_pos][idx[uid + "1"]] += 1
        mats.append(mat)
    notes = {"family": "sec5-FC2",
             "analytic": {"multitree": True, "uniformly_discrete": True,
                          "finite_origin": True}}
    return BratteliDiagram(levels, mats, notes)


# --------------------------------------------------------------- example 4.4

def ex44_words(count):
    """The marker words: shortlex through the words starting with 0,
    skipping the 01^a 0^b shapes and anything an earlier word prefixes."""
    out = []
    length = 1
    while len(out) < count:
        for w in all_words(length):
            if not w.startswith("0"):
                continue
            if re.fullmatch(r"01*0*", w):
                continue
            if any(w.startswith(c) for c in out):
                continue
            out.append(w)
            if len(out) == count:
                break
        length += 1
    return out


def ex44_gens(count):
    """Pair the n-th marker word with 1^n 0, zero-padded to a common
    length (the markers are leaves of different depths, so the pairing
    cannot preserve length; padding fixes a cylinder inside each side)."""
    gens = []
    for n, c in enumerate(ex44_words(count), start=1):
        t = "1" * n + "0"
        L = max(len(c), len(t))
        u = c + "0" * (L - len(c))
        v = t + "0" * (L - len(t))
        gens.append(RuleHomeo([("finite", u, v)], name=f"pair_{n}"))
    return gens


# -------------------------------------------------------------------- catalog

def example_catalog(name):
    """Builders for the worked examples, keyed by their catalog ids."""
    m = re.fullmatch(r"ex4\.4-gens\((\d+)\)", name)
    if m:
        return {"kind": "rules", "rules": ex44_gens(int(m.group(1)))}
    catalog = {
        "ex2.7-G1": lambda: {"kind": "rules", "rules": [rule_g_inf()]},
        "ex2.7-G2": lambda: {
            "kind": "rule_family",
            "stage": lambda n: [rule_g(i) for i in range(n + 1)],
        },
        "sec5-G": lambda: {
            "kind": "tower",
            "diagram": sec5_G_diagram,
            "raw_diagram": sec5_G_raw_diagram,
            "chain": sec5_G_chain,
            "stage": sec5_G_stage,
        },
        "sec5-H": lambda: {
            "kind": "tower",
            "diagram": sec5_H_diagram,
            "raw_diagram": sec5_H_raw_diagram,
            "chain": sec5_H_chain,
            "stage": sec5_H_stage,
        },
        "sec5-FC2": lambda: {
            "kind": "tower",
            "rules": [rule_sigma()],
            "diagram": fc2_diagram,
            "chain": fc2_chain,
        },
        "sec5-G-raw": lambda: {"kind": "tower",
                               "diagram": sec5_G_raw_diagram},
        "sec5-H-raw": lambda: {"kind": "tower",
                               "diagram": sec5_H_raw_diagram},
    }
    if name not in catalog:
        raise ValueError(f"unknown example {name!r}")
    return catalog[name]()


def example_names():
    return ["ex2.7-G1", "ex2.7-G2", "ex4.4-gens(N)", "sec5-FC2", "sec5-G",
            "sec5-G-raw", "sec5-H", "sec5-H-raw"]
