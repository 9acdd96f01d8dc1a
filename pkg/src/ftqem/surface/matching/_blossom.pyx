# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Maximum-weight matching, compiled lane.

Same primal-dual blossom algorithm and tie-breaking as ``blossom_py.py``;
integer arithmetic throughout (weights doubled internally so duals stay
integral).  Vertex-indexed state lives in C arrays; the nested blossom
structure, which is touched far less often, stays in Python lists.
"""

from libc.stdlib cimport free, malloc

cimport cython


cdef class _Matcher:
    cdef int nvertex, nedge
    cdef long *ei
    cdef long *ej
    cdef long *ew
    cdef long *endpoint      # 2E
    cdef long *nb_start      # V+1 (CSR offsets)
    cdef long *nb_flat       # 2E remote endpoints
    cdef long *mate          # V
    cdef long *label         # 2V
    cdef long *labelend      # 2V
    cdef long *inblossom     # V
    cdef long *blossomparent # 2V
    cdef long *blossombase   # 2V
    cdef long *bestedge      # 2V
    cdef long *dualvar       # 2V
    cdef unsigned char *allowedge  # E
    cdef long *queue
    cdef int queue_len, queue_cap
    cdef list blossomchilds, blossomendps, blossombestedges
    cdef list unusedblossoms

    def __cinit__(self, *args):
        self.ei = self.ej = self.ew = NULL
        self.endpoint = self.nb_start = self.nb_flat = NULL
        self.mate = self.label = self.labelend = self.inblossom = NULL
        self.blossomparent = self.blossombase = self.bestedge = self.dualvar = NULL
        self.queue = NULL
        self.allowedge = NULL
        if args:
            nvertex, edges = args
            self._init_from_edges(nvertex, edges)

    cdef void _alloc(self, int nvertex, int nedge):
        cdef int V = nvertex, E = nedge
        self.nvertex = V
        self.nedge = E
        self.ei = <long *> malloc(E * sizeof(long))
        self.ej = <long *> malloc(E * sizeof(long))
        self.ew = <long *> malloc(E * sizeof(long))
        self.endpoint = <long *> malloc(2 * E * sizeof(long))
        self.nb_start = <long *> malloc((V + 1) * sizeof(long))
        self.nb_flat = <long *> malloc(2 * E * sizeof(long))
        self.mate = <long *> malloc(V * sizeof(long))
        self.label = <long *> malloc(2 * V * sizeof(long))
        self.labelend = <long *> malloc(2 * V * sizeof(long))
        self.inblossom = <long *> malloc(V * sizeof(long))
        self.blossomparent = <long *> malloc(2 * V * sizeof(long))
        self.blossombase = <long *> malloc(2 * V * sizeof(long))
        self.bestedge = <long *> malloc(2 * V * sizeof(long))
        self.dualvar = <long *> malloc(2 * V * sizeof(long))
        self.allowedge = <unsigned char *> malloc(E if E else 1)
        self.queue_cap = 8 * V + 16
        self.queue = <long *> malloc(self.queue_cap * sizeof(long))
        self.queue_len = 0

    cdef void _init_from_edges(self, int nvertex, edges) except *:
        cdef int k, i, j
        cdef long w
        self._alloc(nvertex, len(edges))
        for k in range(self.nedge):
            i = edges[k][0]
            j = edges[k][1]
            w = edges[k][2]
            self._set_edge(k, i, j, w)
        self._finish_init()

    cdef void _init_from_arrays(self, int nvertex, long[::1] eu, long[::1] ev, long[::1] ew) except *:
        cdef int k
        self._alloc(nvertex, eu.shape[0])
        for k in range(self.nedge):
            self._set_edge(k, eu[k], ev[k], ew[k])
        self._finish_init()

    cdef inline void _set_edge(self, int k, long i, long j, long w) except *:
        if i == j or i < 0 or j < 0 or i >= self.nvertex or j >= self.nvertex:
            raise ValueError("bad edge")
        if w < 0:
            raise ValueError("negative edge weight")
        self.ei[k] = i
        self.ej[k] = j
        self.ew[k] = w
        self.endpoint[2 * k] = i
        self.endpoint[2 * k + 1] = j

    cdef void _finish_init(self) except *:
        cdef int V = self.nvertex, E = self.nedge
        cdef int k, i
        cdef long maxweight = 0
        for k in range(E):
            if self.ew[k] > maxweight:
                maxweight = self.ew[k]
        # CSR adjacency of remote endpoints
        cdef long *deg = <long *> malloc(V * sizeof(long))
        for i in range(V):
            deg[i] = 0
        for k in range(E):
            deg[self.ei[k]] += 1
            deg[self.ej[k]] += 1
        self.nb_start[0] = 0
        for i in range(V):
            self.nb_start[i + 1] = self.nb_start[i] + deg[i]
            deg[i] = self.nb_start[i]
        for k in range(E):
            self.nb_flat[deg[self.ei[k]]] = 2 * k + 1
            deg[self.ei[k]] += 1
            self.nb_flat[deg[self.ej[k]]] = 2 * k
            deg[self.ej[k]] += 1
        free(deg)

        for i in range(V):
            self.mate[i] = -1
            self.inblossom[i] = i
        for i in range(2 * V):
            self.label[i] = 0
            self.labelend[i] = -1
            self.blossomparent[i] = -1
            self.blossombase[i] = i if i < V else -1
            self.bestedge[i] = -1
            self.dualvar[i] = maxweight if i < V else 0
        self.blossomchilds = [None] * (2 * V)
        self.blossomendps = [None] * (2 * V)
        self.blossombestedges = [None] * (2 * V)
        self.unusedblossoms = list(range(V, 2 * V))

    def __dealloc__(self):
        free(self.ei); free(self.ej); free(self.ew)
        free(self.endpoint); free(self.nb_start); free(self.nb_flat)
        free(self.mate); free(self.label); free(self.labelend)
        free(self.inblossom); free(self.blossomparent); free(self.blossombase)
        free(self.bestedge); free(self.dualvar); free(self.allowedge)
        free(self.queue)

    cdef inline long slack(self, long k):
        return self.dualvar[self.ei[k]] + self.dualvar[self.ej[k]] - 2 * self.ew[k]

    cdef inline void queue_push(self, long v):
        cdef long *new_q
        cdef int i
        if self.queue_len == self.queue_cap:
            self.queue_cap *= 2
            new_q = <long *> malloc(self.queue_cap * sizeof(long))
            for i in range(self.queue_len):
                new_q[i] = self.queue[i]
            free(self.queue)
            self.queue = new_q
        self.queue[self.queue_len] = v
        self.queue_len += 1

    @cython.wraparound(True)
    cdef list blossom_leaves(self, long b):
        # DFS in child order (stack holds children reversed so pops preserve
        # the order the pure-Python generator yields; tie-breaking depends on it)
        cdef list out = []
        cdef list stack = [b]
        cdef long t
        while stack:
            t = stack.pop()
            if t < self.nvertex:
                out.append(t)
            else:
                stack.extend(self.blossomchilds[t][::-1])
        return out

    cdef void assign_label(self, long w, long t, long p):
        cdef long b = self.inblossom[w]
        cdef long base, leaf
        self.label[w] = t
        self.label[b] = t
        self.labelend[w] = p
        self.labelend[b] = p
        self.bestedge[w] = -1
        self.bestedge[b] = -1
        if t == 1:
            for leaf in self.blossom_leaves(b):
                self.queue_push(leaf)
        else:
            base = self.blossombase[b]
            self.assign_label(self.endpoint[self.mate[base]], 1, self.mate[base] ^ 1)

    cdef long scan_blossom(self, long v, long w):
        cdef list path = []
        cdef long base = -1
        cdef long b
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            self.label[b] = 1
        return base

    cdef void add_blossom(self, long base, long k):
        cdef long v = self.ei[k]
        cdef long w = self.ej[k]
        cdef long bb = self.inblossom[base]
        cdef long bv = self.inblossom[v]
        cdef long bw = self.inblossom[w]
        cdef long b = self.unusedblossoms.pop()
        cdef long leaf, kk, i, j, bj
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        cdef list path = []
        cdef list endps = []
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = self.inblossom[w]
        self.blossomchilds[b] = path
        self.blossomendps[b] = endps
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dualvar[b] = 0
        for leaf in self.blossom_leaves(b):
            if self.label[self.inblossom[leaf]] == 2:
                self.queue_push(leaf)
            self.inblossom[leaf] = b
        cdef long *bestedgeto = <long *> malloc(2 * self.nvertex * sizeof(long))
        for i in range(2 * self.nvertex):
            bestedgeto[i] = -1
        cdef list nblists, nblist
        for bv in path:
            if self.blossombestedges[bv] is None:
                nblists = []
                for leaf in self.blossom_leaves(bv):
                    nblist = []
                    for i in range(self.nb_start[leaf], self.nb_start[leaf + 1]):
                        nblist.append(self.nb_flat[i] // 2)
                    nblists.append(nblist)
            else:
                nblists = [self.blossombestedges[bv]]
            for nblist in nblists:
                for kk in nblist:
                    i = self.ei[kk]
                    j = self.ej[kk]
                    if self.inblossom[j] == b:
                        i, j = j, i
                    bj = self.inblossom[j]
                    if (
                        bj != b
                        and self.label[bj] == 1
                        and (bestedgeto[bj] == -1 or self.slack(kk) < self.slack(bestedgeto[bj]))
                    ):
                        bestedgeto[bj] = kk
            self.blossombestedges[bv] = None
            self.bestedge[bv] = -1
        cdef list best = []
        for i in range(2 * self.nvertex):
            if bestedgeto[i] != -1:
                best.append(bestedgeto[i])
        free(bestedgeto)
        self.blossombestedges[b] = best
        self.bestedge[b] = -1
        for kk in best:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    @cython.wraparound(True)
    @cython.boundscheck(True)
    cdef void expand_blossom(self, long b, bint endstage):
        cdef long s, v, entrychild, j, jstep, endptrick, p, bv
        cdef list childs = self.blossomchilds[b]
        for s in childs:
            self.blossomparent[s] = -1
            if s < self.nvertex:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for v in self.blossom_leaves(s):
                    self.inblossom[v] = s
        if (not endstage) and self.label[b] == 2:
            entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[self.blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allowedge[self.blossomendps[b][j - endptrick] // 2] = 1
                j += jstep
                p = self.blossomendps[b][j - endptrick] ^ endptrick
                self.allowedge[p // 2] = 1
                j += jstep
            bv = childs[j]
            self.label[self.endpoint[p ^ 1]] = 2
            self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = p
            self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                v = -1
                for v in self.blossom_leaves(bv):
                    if self.label[v] != 0:
                        break
                if v >= 0 and self.label[v] != 0:
                    self.label[v] = 0
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(v, 2, self.labelend[v])
                j += jstep
        self.label[b] = -1
        self.labelend[b] = -1
        self.blossomchilds[b] = None
        self.blossomendps[b] = None
        self.blossombase[b] = -1
        self.blossombestedges[b] = None
        self.bestedge[b] = -1
        self.unusedblossoms.append(b)

    @cython.wraparound(True)
    @cython.boundscheck(True)
    cdef void augment_blossom(self, long b, long v):
        cdef long t = v
        cdef long i, j, jstep, endptrick, p
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.nvertex:
            self.augment_blossom(t, v)
        cdef list childs = self.blossomchilds[b]
        cdef list endps = self.blossomendps[b]
        i = childs.index(t)
        j = i
        if i & 1:
            j -= len(childs)
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= self.nvertex:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[j]
            if t >= self.nvertex:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.blossomchilds[b] = childs[i:] + childs[:i]
        self.blossomendps[b] = endps[i:] + endps[:i]
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]]

    cdef void augment_matching(self, long k):
        cdef long v, w, s, p, bs, t, bt, j
        cdef int leg
        v = self.ei[k]
        w = self.ej[k]
        for leg in range(2):
            if leg == 0:
                s = v
                p = 2 * k + 1
            else:
                s = w
                p = 2 * k
            while True:
                bs = self.inblossom[s]
                if bs >= self.nvertex:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.nvertex:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    def solve(self):
        cdef int V = self.nvertex, E = self.nedge
        cdef long t, v, i, j, b, k, p, w, base
        cdef long kslack, delta, deltatype, deltaedge, deltablossom, d, lbl
        cdef bint augmented
        for t in range(V):
            for i in range(2 * V):
                self.label[i] = 0
                self.bestedge[i] = -1
            for i in range(V, 2 * V):
                self.blossombestedges[i] = None
            for i in range(E):
                self.allowedge[i] = 0
            self.queue_len = 0
            for v in range(V):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.queue_len > 0 and not augmented:
                    self.queue_len -= 1
                    v = self.queue[self.queue_len]
                    for i in range(self.nb_start[v], self.nb_start[v + 1]):
                        p = self.nb_flat[i]
                        k = p // 2
                        w = self.endpoint[p]
                        if self.inblossom[v] == self.inblossom[w]:
                            continue
                        kslack = 0
                        if not self.allowedge[k]:
                            kslack = self.slack(k)
                            if kslack <= 0:
                                self.allowedge[k] = 1
                        if self.allowedge[k]:
                            if self.label[self.inblossom[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif self.label[self.inblossom[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif self.label[w] == 0:
                                self.label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif self.label[self.inblossom[w]] == 1:
                            b = self.inblossom[v]
                            if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                                self.bestedge[b] = k
                        elif self.label[w] == 0:
                            if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                                self.bestedge[w] = k
                if augmented:
                    break
                deltatype = 1
                deltaedge = -1
                deltablossom = -1
                delta = self.dualvar[0]
                for v in range(1, V):
                    if self.dualvar[v] < delta:
                        delta = self.dualvar[v]
                if delta < 0:
                    delta = 0
                for v in range(V):
                    if self.label[self.inblossom[v]] == 0 and self.bestedge[v] != -1:
                        d = self.slack(self.bestedge[v])
                        if d < delta:
                            delta = d
                            deltatype = 2
                            deltaedge = self.bestedge[v]
                for b in range(2 * V):
                    if self.blossomparent[b] == -1 and self.label[b] == 1 and self.bestedge[b] != -1:
                        d = self.slack(self.bestedge[b]) // 2
                        if d < delta:
                            delta = d
                            deltatype = 3
                            deltaedge = self.bestedge[b]
                for b in range(V, 2 * V):
                    if (
                        self.blossombase[b] >= 0
                        and self.blossomparent[b] == -1
                        and self.label[b] == 2
                        and self.dualvar[b] < delta
                    ):
                        delta = self.dualvar[b]
                        deltatype = 4
                        deltablossom = b
                for v in range(V):
                    lbl = self.label[self.inblossom[v]]
                    if lbl == 1:
                        self.dualvar[v] -= delta
                    elif lbl == 2:
                        self.dualvar[v] += delta
                for b in range(V, 2 * V):
                    if self.blossombase[b] >= 0 and self.blossomparent[b] == -1:
                        if self.label[b] == 1:
                            self.dualvar[b] += delta
                        elif self.label[b] == 2:
                            self.dualvar[b] -= delta
                if deltatype == 1:
                    break
                elif deltatype == 2:
                    self.allowedge[deltaedge] = 1
                    i = self.ei[deltaedge]
                    if self.label[self.inblossom[i]] == 0:
                        i = self.ej[deltaedge]
                    self.queue_push(i)
                elif deltatype == 3:
                    self.allowedge[deltaedge] = 1
                    self.queue_push(self.ei[deltaedge])
                else:
                    self.expand_blossom(deltablossom, False)
            if not augmented:
                break
            for b in range(V, 2 * V):
                if (
                    self.blossomparent[b] == -1
                    and self.blossombase[b] >= 0
                    and self.label[b] == 1
                    and self.dualvar[b] == 0
                ):
                    self.expand_blossom(b, True)
        result = [-1] * V
        for v in range(V):
            if self.mate[v] >= 0:
                result[v] = self.endpoint[self.mate[v]]
        return result


def max_weight_matching(num_vertices, edges):
    """Drop-in replacement for the pure-Python lane (see blossom_py)."""
    if num_vertices == 0 or len(edges) == 0:
        return [-1] * num_vertices
    return _Matcher(num_vertices, edges).solve()


def max_weight_matching_arrays(long num_vertices, long[::1] eu, long[::1] ev, long[::1] ew):
    """Array-based entry point: avoids building per-edge tuples (hot path)."""
    cdef int E = eu.shape[0]
    if num_vertices == 0 or E == 0:
        return [-1] * num_vertices
    cdef _Matcher m = _Matcher.__new__(_Matcher)
    m._init_from_arrays(num_vertices, eu, ev, ew)
    return m.solve()
