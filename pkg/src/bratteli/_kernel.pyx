# cython: boundscheck=False, wraparound=False, nonecheck=False
# cython: language_level=3
"""Fused corpus sweep.

Enumerates the same diagrams as corpus.corpus_matrices in the same
order and packs the same records as corpus.diagram_record, entirely on
C arrays. The pure modules stay the reference implementation; this one
exists so the whole corpus can be swept in seconds.
"""

cdef long long FACT[5]
FACT[0] = 1
FACT[1] = 1
FACT[2] = 2
FACT[3] = 6
FACT[4] = 24


cdef class _Sweep:
    cdef int max_depth
    cdef list out
    cdef int depth
    cdef int widths[5]
    cdef int dims[5][3]
    cdef int mats[4][3][3]          # mats[l] maps level l to l+1
    # per-recursion-depth column options (safe across the DFS)
    cdef int cols[5][27][3]
    cdef int cd[5][27]
    cdef int crows[5][27]
    # extension scratch
    cdef int ext_size[5]
    cdef int ext_parent[5][12]
    cdef int ext_proj[5][12]
    # ideal scratch: bitsets over flat vertex masks (up to 2^12)
    cdef unsigned long long seta[64]
    cdef unsigned long long setb[64]
    cdef int off_b[6]

    def __init__(self, int max_depth):
        self.max_depth = max_depth
        self.out = []
        self.widths[0] = 1
        self.dims[0][0] = 1

    cdef void walk(self, int depth):
        cdef int p, nopt, e0, e1, e2, b1, b2, d, rows
        cdef int i0, i1, i2, full, u, j, w
        cdef int combo[3]
        if depth > 0:
            self.depth = depth
            self.out.append(self.record())
        if depth == self.max_depth:
            return
        p = self.widths[depth]
        nopt = 0
        b1 = 3 if p >= 2 else 1
        b2 = 3 if p >= 3 else 1
        for e0 in range(3):
            for e1 in range(b1):
                for e2 in range(b2):
                    d = e0 * self.dims[depth][0]
                    if p >= 2:
                        d += e1 * self.dims[depth][1]
                    if p >= 3:
                        d += e2 * self.dims[depth][2]
                    if d == 0 or d > 4:
                        continue
                    self.cols[depth][nopt][0] = e0
                    self.cols[depth][nopt][1] = e1
                    self.cols[depth][nopt][2] = e2
                    rows = 0
                    if e0:
                        rows |= 1
                    if p >= 2 and e1:
                        rows |= 2
                    if p >= 3 and e2:
                        rows |= 4
                    self.cd[depth][nopt] = d
                    self.crows[depth][nopt] = rows
                    nopt += 1
        full = (1 << p) - 1
        for w in range(1, 4):
            combo[0] = 0
            combo[1] = 0
            combo[2] = 0
            for i0 in range(nopt):
                combo[0] = i0
                if w == 1:
                    if depth == 0 or self.crows[depth][i0] == full:
                        self.place(depth, 1, combo)
                    continue
                for i1 in range(i0, nopt):
                    combo[1] = i1
                    if w == 2:
                        if depth == 0 or (self.crows[depth][i0] |
                                          self.crows[depth][i1]) == full:
                            self.place(depth, 2, combo)
                        continue
                    for i2 in range(i1, nopt):
                        combo[2] = i2
                        if depth == 0 or (self.crows[depth][i0] |
                                          self.crows[depth][i1] |
                                          self.crows[depth][i2]) == full:
                            self.place(depth, 3, combo)

    cdef void place(self, int depth, int w, int* combo):
        cdef int u, j
        self.widths[depth + 1] = w
        for j in range(w):
            self.dims[depth + 1][j] = self.cd[depth][combo[j]]
        for u in range(self.widths[depth]):
            for j in range(w):
                self.mats[depth][u][j] = self.cols[depth][combo[j]][u]
        self.walk(depth + 1)

    cdef long long record(self):
        cdef int depth = self.depth
        cdef long long rec = 0
        cdef int n, u, v, j, p, i, l, m, s, a, ll, b, cm, mask, nv
        cdef int wp, wc, wn, s2
        cdef int counts[3]
        cdef int P[3][3]
        cdef int Q[3][3]

        # extension in canonical order: parent, then target, then copy
        self.ext_size[0] = 1
        self.ext_parent[0][0] = -1
        self.ext_proj[0][0] = 0
        for n in range(1, depth + 1):
            s = 0
            for p in range(self.ext_size[n - 1]):
                u = self.ext_proj[n - 1][p]
                for v in range(self.widths[n]):
                    for i in range(self.mats[n - 1][u][v]):
                        self.ext_parent[n][s] = p
                        self.ext_proj[n][s] = v
                        s += 1
            self.ext_size[n] = s

        # bit 7: fibers have the declared sizes and per-parent child
        # counts reproduce the matrices
        cdef bint ok7 = True
        for n in range(1, depth + 1):
            for v in range(self.widths[n]):
                counts[v] = 0
            for i in range(self.ext_size[n]):
                counts[self.ext_proj[n][i]] += 1
            for v in range(self.widths[n]):
                if counts[v] != self.dims[n][v]:
                    ok7 = False
            for p in range(self.ext_size[n - 1]):
                for v in range(self.widths[n]):
                    counts[v] = 0
                for i in range(self.ext_size[n]):
                    if self.ext_parent[n][i] == p:
                        counts[self.ext_proj[n][i]] += 1
                u = self.ext_proj[n - 1][p]
                for v in range(self.widths[n]):
                    if counts[v] != self.mats[n - 1][u][v]:
                        ok7 = False
        if ok7:
            rec |= 1 << 7

        # bit 6: block order equals the multiplicity formula
        cdef long long order_blocks = 1
        cdef long long order_dims = 1
        cdef bint ok6 = True
        for v in range(self.widths[depth]):
            counts[v] = 0
        for i in range(self.ext_size[depth]):
            counts[self.ext_proj[depth][i]] += 1
        for v in range(self.widths[depth]):
            if counts[v] > 4:
                ok6 = False
            else:
                order_blocks *= FACT[counts[v]]
            order_dims *= FACT[self.dims[depth][v]]
        if ok6 and order_blocks == order_dims:
            rec |= 1 << 6

        # bits 0 and 2 with the clean-level encodes: composite products
        # per source level, stopping at the first bad one
        cdef int bad_max = 0
        cdef bint bad
        for m in range(1, depth):
            bad = False
            wp = self.widths[m]
            wc = self.widths[m + 1]
            for u in range(wp):
                for v in range(wc):
                    P[u][v] = self.mats[m][u][v]
                    if P[u][v] >= 2:
                        bad = True
            l = m + 1
            while not bad and l < depth:
                wn = self.widths[l + 1]
                for u in range(wp):
                    for v in range(wn):
                        s2 = 0
                        for j in range(wc):
                            s2 += P[u][j] * self.mats[l][j][v]
                        Q[u][v] = s2
                        if s2 >= 2:
                            bad = True
                for u in range(wp):
                    for v in range(wn):
                        P[u][v] = Q[u][v]
                wc = wn
                l += 1
            if bad and m > bad_max:
                bad_max = m
        cdef int enc
        if bad_max == 0:
            rec |= 1
            rec |= 4
            enc = 1
        else:
            enc = bad_max + 1
            if enc == depth:
                enc = 0
        rec |= (<long long>enc) << 8
        rec |= (<long long>enc) << 12

        # bit 1: no final fiber meets a level-1 atom twice
        cdef bint ok1 = True
        cdef int seen_mask
        for v in range(self.widths[depth]):
            seen_mask = 0
            for i in range(self.ext_size[depth]):
                if self.ext_proj[depth][i] != v:
                    continue
                a = i
                ll = depth
                while ll > 1:
                    a = self.ext_parent[ll][a]
                    ll -= 1
                if seen_mask >> a & 1:
                    ok1 = False
                seen_mask |= 1 << a
        if ok1:
            rec |= 2

        # bit 3: greedy-chain quotients applicable at every vertex of
        # multiplicity >= 2 (single paths on the chain subgraph)
        cdef bint ok3 = True
        cdef int cv[5]
        cdef int mem[5]
        cdef int cnt[3]
        cdef int nxt[3]
        cdef int la, vv, kk, found
        for n in range(1, depth + 1):
            if not ok3:
                break
            for v in range(self.widths[n]):
                if self.dims[n][v] < 2 or not ok3:
                    continue
                cv[n] = v
                for l in range(n, depth):
                    found = 0
                    for vv in range(self.widths[l + 1]):
                        if self.mats[l][cv[l]][vv] > 0:
                            found = vv
                            break
                    cv[l + 1] = found
                for l in range(1, depth + 1):
                    mem[l] = 0
                for l in range(n, depth + 1):
                    mem[l] |= 1 << cv[l]
                for l in range(depth - 1, 0, -1):
                    for u in range(self.widths[l]):
                        if mem[l] >> u & 1:
                            continue
                        for vv in range(self.widths[l + 1]):
                            if (mem[l + 1] >> vv & 1) and \
                                    self.mats[l][u][vv] > 0:
                                mem[l] |= 1 << u
                                break
                for la in range(1, depth):
                    if not ok3:
                        break
                    for u in range(self.widths[la]):
                        if not (mem[la] >> u & 1) or not ok3:
                            continue
                        for vv in range(self.widths[la + 1]):
                            if mem[la + 1] >> vv & 1:
                                cnt[vv] = self.mats[la][u][vv]
                            else:
                                cnt[vv] = 0
                            if cnt[vv] >= 2:
                                ok3 = False
                        l = la + 1
                        while ok3 and l < depth:
                            for vv in range(self.widths[l + 1]):
                                nxt[vv] = 0
                            for kk in range(self.widths[l]):
                                if cnt[kk] and (mem[l] >> kk & 1):
                                    for vv in range(self.widths[l + 1]):
                                        if mem[l + 1] >> vv & 1:
                                            nxt[vv] += (cnt[kk] *
                                                        self.mats[l][kk][vv])
                            for vv in range(self.widths[l + 1]):
                                cnt[vv] = nxt[vv]
                                if cnt[vv] >= 2:
                                    ok3 = False
                            l += 1
        if ok3:
            rec |= 8

        # ideals, route A: flat subset filter over all vertices
        cdef int childm[12]
        cdef bint internal[12]
        self.off_b[1] = 0
        for n in range(1, depth + 1):
            self.off_b[n + 1] = self.off_b[n] + self.widths[n]
        nv = self.off_b[depth + 1]
        for n in range(1, depth + 1):
            for j in range(self.widths[n]):
                b = self.off_b[n] + j
                internal[b] = n < depth
                cm = 0
                if n < depth:
                    for v in range(self.widths[n + 1]):
                        if self.mats[n][j][v]:
                            cm |= 1 << (self.off_b[n + 1] + v)
                childm[b] = cm
        cdef int nwords = ((1 << nv) + 63) >> 6
        for i in range(nwords):
            self.seta[i] = 0
            self.setb[i] = 0
        cdef long long count_a = 0
        cdef long long count_b = 0
        cdef bint okm
        for mask in range(1 << nv):
            okm = True
            for b in range(nv):
                cm = childm[b]
                if mask >> b & 1:
                    if cm & mask != cm:
                        okm = False
                        break
                elif internal[b] and cm & mask == cm:
                    okm = False
                    break
            if okm:
                count_a += 1
                self.seta[mask >> 6] |= (
                    (<unsigned long long>1) << (mask & 63))

        # order ideals, route B: forward search over per-level supports
        cdef int t1
        if depth == 1:
            for t1 in range(1 << self.widths[1]):
                count_b += 1
                self.setb[t1 >> 6] |= (<unsigned long long>1) << (t1 & 63)
        else:
            for t1 in range(1 << self.widths[1]):
                count_b += self.grow_b(2, t1, <long long>t1, depth)

        if count_a == count_b:
            rec |= 16
        cdef bint ok5 = True
        for i in range(nwords):
            if self.seta[i] & ~self.setb[i]:
                ok5 = False
                break
        if ok5:
            rec |= 32

        rec |= count_a << 16
        rec |= count_b << 32
        rec |= (<long long>depth) << 56
        rec |= (<long long>self.widths[depth]) << 59
        return rec

    cdef long long grow_b(self, int lvl, int prev_mask, long long flat,
                          int depth):
        cdef long long total = 0
        cdef long long nf
        cdef int wcur = self.widths[lvl]
        cdef int wprev = self.widths[lvl - 1]
        cdef int cur, u, v
        cdef bint okc, covered
        for cur in range(1 << wcur):
            okc = True
            for u in range(wprev):
                covered = True
                for v in range(wcur):
                    if self.mats[lvl - 1][u][v] and not (cur >> v & 1):
                        covered = False
                        break
                if ((prev_mask >> u) & 1) != covered:
                    okc = False
                    break
            if not okc:
                continue
            nf = flat | (<long long>cur) << self.off_b[lvl]
            if lvl == depth:
                total += 1
                self.setb[nf >> 6] |= (<unsigned long long>1) << (nf & 63)
            else:
                total += self.grow_b(lvl + 1, cur, nf, depth)
        return total


def sweep(int max_depth=4):
    """Packed records for every corpus diagram up to max_depth."""
    if not 1 <= max_depth <= 4:
        raise ValueError("max_depth must be between 1 and 4")
    s = _Sweep(max_depth)
    s.walk(0)
    return s.out
