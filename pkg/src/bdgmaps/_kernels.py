"""Compiled inner loops shared by the tree, label, map and snake modules.

Trees are child-count arrays in preorder. Everything here is iterative
(explicit stacks), so arbitrarily deep trees are fine.
"""

import numpy as np
from numba import njit

# ---------------------------------------------------------------- trees


@njit(cache=True, nogil=True)
def tree_structure(children):
    """Parent, depth and subtree size of every vertex of a preorder tree."""
    n = children.shape[0]
    parent = np.full(n, -1, np.int64)
    depth = np.zeros(n, np.int64)
    size = np.ones(n, np.int64)
    stack = np.empty(n, np.int64)
    left = np.empty(n, np.int64)
    top = 0
    stack[0] = 0
    left[0] = children[0]
    for i in range(1, n):
        while left[top] == 0:
            top -= 1
        p = stack[top]
        left[top] -= 1
        parent[i] = p
        depth[i] = depth[p] + 1
        top += 1
        stack[top] = i
        left[top] = children[i]
    for i in range(n - 1, 0, -1):
        size[parent[i]] += size[i]
    return parent, depth, size


@njit(cache=True)
def lukasiewicz_ok(children):
    """Index of the first violation of the preorder child-count code, or -1."""
    s = 1
    n = children.shape[0]
    for i in range(n):
        if s <= 0 or children[i] < 0:
            return i
        s += children[i] - 1
    if s != 0:
        return n
    return -1


@njit(cache=True)
def contour_vertices(children):
    """Search-depth sequence u_0..u_{2z} as preorder indices."""
    n = children.shape[0]
    out = np.empty(2 * n - 1, np.int64)
    stack = np.empty(n, np.int64)
    next_child = np.empty(n, np.int64)  # preorder index of the next unvisited child
    left = np.empty(n, np.int64)
    top = 0
    stack[0] = 0
    left[0] = children[0]
    next_child[0] = 1
    out[0] = 0
    t = 1
    parent, depth, size = tree_structure(children)
    while top >= 0:
        v = stack[top]
        if left[top] > 0:
            c = next_child[top]
            left[top] -= 1
            next_child[top] = c + size[c]
            top += 1
            stack[top] = c
            left[top] = children[c]
            next_child[top] = c + 1
            out[t] = c
            t += 1
        else:
            top -= 1
            if top >= 0:
                out[t] = stack[top]
                t += 1
    return out


@njit(cache=True)
def children_from_contour(C):
    """Inverse of the contour map; assumes C already validated."""
    m = C.shape[0]
    nv = (m - 1) // 2 + 1
    children = np.zeros(nv, np.int64)
    stack = np.empty(nv, np.int64)
    top = 0
    stack[0] = 0
    nxt = 1
    for i in range(1, m):
        if C[i] > C[i - 1]:
            children[stack[top]] += 1
            top += 1
            stack[top] = nxt
            nxt += 1
        else:
            top -= 1
    return children


# ---------------------------------------------------------------- labels


@njit(cache=True, nogil=True)
def sample_A(gen, k, out):
    """Uniform point of A_k written into out[:k] (stars and bars, Floyd)."""
    m = 2 * k + 1
    chosen = np.zeros(m + 1, np.bool_)
    for j in range(m - k + 1, m + 1):
        t = gen.integers(1, j + 1)
        if chosen[t]:
            chosen[j] = True
        else:
            chosen[t] = True
    prev = 0
    s = 0
    i = 0
    for b in range(1, m + 1):
        if chosen[b]:
            s += b - prev - 2  # X_i = gap - 1, gap = b - prev - 1
            out[i] = s
            i += 1
            prev = b


@njit(cache=True, nogil=True)
def attach_labels(gen, children, depth, x, positive_only, reversed_nu):
    """Labels under R_{nu,x} in preorder.

    With ``positive_only`` the pass aborts (returning ``ok=False``) at the
    first non-root type-0 label <= 0; the attempt is rejected either way.
    """
    n = children.shape[0]
    labels = np.empty(n, np.int64)
    labels[0] = x
    buf = np.empty(max(1, children.max()), np.int64)
    disp = np.empty(n, np.int64)  # displacement assigned to each vertex
    disp[0] = 0
    parent, _, size = tree_structure(children)
    for v in range(n):
        if v > 0:
            labels[v] = labels[parent[v]] + disp[v]
            if positive_only and depth[v] % 2 == 0 and labels[v] <= 0:
                return labels, False
        k = children[v]
        c = v + 1
        if depth[v] % 2 == 1 and k > 0:
            sample_A(gen, k, buf)
            for j in range(k):
                d = buf[k - 1 - j] if reversed_nu else buf[j]
                disp[c] = d
                c += size[c]
        else:
            for j in range(k):
                disp[c] = 0
                c += size[c]
    return labels, True


# ---------------------------------------------------------------- GW trees


@njit(cache=True, nogil=True)
def alias_draw(gen, prob, alias):
    i = gen.integers(0, prob.shape[0])
    if gen.random() < prob[i]:
        return i
    return alias[i]


@njit(cache=True)
def sample_gw(gen, p, prob, alias, cap, max_type1):
    """Two-type GW tree in preorder; mu0 geometric (inversion), mu1 by alias.

    Returns (children, status): status 0 ok, 1 vertex cap hit, 2 more than
    ``max_type1`` type-1 vertices (only checked when max_type1 >= 0).
    """
    size = min(cap, 256)
    children = np.empty(size, np.int64)
    par = np.empty(size + 1, np.int64)  # parity of each open slot
    left = np.empty(size + 1, np.int64)
    logp = np.log(p)
    top = 0
    left[0] = 1
    par[0] = 0
    n = 0
    n1 = 0
    while top >= 0:
        if left[top] == 0:
            top -= 1
            continue
        left[top] -= 1
        if n == cap:
            return children[:n], 1
        if n == size:
            # grow geometrically; the stack never exceeds the vertex count
            size = min(cap, 2 * size)
            c2 = np.empty(size, np.int64)
            c2[:n] = children[:n]
            children = c2
            p2 = np.empty(size + 1, np.int64)
            p2[: top + 1] = par[: top + 1]
            par = p2
            l2 = np.empty(size + 1, np.int64)
            l2[: top + 1] = left[: top + 1]
            left = l2
        parity = par[top]
        if parity == 0:
            if p > 0.0:
                k = int(np.floor(np.log1p(-gen.random()) / logp))
            else:
                k = 0
        else:
            n1 += 1
            if max_type1 >= 0 and n1 > max_type1:
                return children[:n], 2
            k = alias_draw(gen, prob, alias)
        children[n] = k
        n += 1
        top += 1
        left[top] = k
        par[top] = 1 - parity
    return children[:n], 0


@njit(cache=True, nogil=True)
def weak_composition(gen, total, parts):
    """Uniform weak composition of ``total`` into ``parts`` parts."""
    m = total + parts - 1
    k = parts - 1
    chosen = np.zeros(m, np.bool_)
    # Floyd: uniform k-subset of {0..m-1}
    for j in range(m - k, m):
        t = gen.integers(0, j + 1)
        if chosen[t]:
            chosen[j] = True
        else:
            chosen[t] = True
    out = np.zeros(parts, np.int64)
    i = 0
    for b in range(m):
        if chosen[b]:
            i += 1
        else:
            out[i] += 1
    return out


@njit(cache=True, nogil=True)
def exact_size_tree(gen, n, prob, alias, logw, mmin):
    """Exact sample of P_mu(. | #T^1 = n) for geometric mu0.

    ``logw[m - mmin]`` is the log acceptance weight of m type-0 vertices
    (normalised so its max is 0). Returns preorder child counts.
    """
    while True:
        K = np.empty(n, np.int64)
        tot = 0
        for j in range(n):
            K[j] = alias_draw(gen, prob, alias)
            tot += K[j]
        m = tot + 1
        idx = m - mmin
        if idx < 0 or idx >= logw.shape[0]:
            continue
        if np.log(gen.random()) < logw[idx]:
            break
    G = weak_composition(gen, n, m)
    off = np.empty(m + 1, np.int64)
    off[0] = 0
    for i in range(m):
        off[i + 1] = off[i] + G[i]
    xi = np.zeros(m, np.int64)
    for i in range(m):
        for j in range(off[i], off[i + 1]):
            xi[i] += K[j]
    # cycle lemma: start right after the first minimum of the Lukasiewicz walk
    s = 0
    best = 1
    arg = 0
    for i in range(m):
        s += xi[i] - 1
        if s < best:
            best = s
            arg = i
    start = (arg + 1) % m
    # expand packages into the full two-type preorder
    nv = m + n
    children = np.empty(nv, np.int64)
    stk_left = np.empty(nv + 1, np.int64)
    stk_type = np.empty(nv + 1, np.int64)
    stk_next = np.empty(nv + 1, np.int64)
    out = 0
    pk = start
    children[out] = G[pk]
    out += 1
    top = 0
    stk_type[0] = 0
    stk_left[0] = G[pk]
    stk_next[0] = off[pk]
    used = 1
    while top >= 0:
        if stk_left[top] == 0:
            top -= 1
            continue
        stk_left[top] -= 1
        if stk_type[top] == 0:
            kk = K[stk_next[top]]
            stk_next[top] += 1
            children[out] = kk
            out += 1
            top += 1
            stk_type[top] = 1
            stk_left[top] = kk
        else:
            pk = (start + used) % m
            used += 1
            children[out] = G[pk]
            out += 1
            top += 1
            stk_type[top] = 0
            stk_left[top] = G[pk]
            stk_next[top] = off[pk]
    return children


@njit(cache=True, nogil=True)
def positive_mobile(gen, n, prob, alias, logw, mmin, x, max_attempts):
    """Joint rejection for P-bar^n: redraw tree and labels until min label > 0."""
    for attempt in range(1, max_attempts + 1):
        children = exact_size_tree(gen, n, prob, alias, logw, mmin)
        _, depth, _ = tree_structure(children)
        labels, ok = attach_labels(gen, children, depth, x, True, False)
        if ok:
            return children, labels, attempt
    return np.zeros(1, np.int64), np.zeros(1, np.int64), -1


@njit(cache=True, nogil=True)
def gw_type1_counts(gen, p, prob, alias, trials, nmax):
    """Histogram of #T^1 over ``trials`` unconditioned trees, for #T^1 <= nmax.

    Only population counts are tracked; a draw stops once it exceeds nmax.
    """
    hist = np.zeros(nmax + 1, np.int64)
    logp = np.log(p)
    for _ in range(trials):
        open0 = 1
        open1 = 0
        n1 = 0
        while open0 > 0 or open1 > 0:
            if open0 > 0:
                open0 -= 1
                if p > 0.0:
                    open1 += int(np.floor(np.log1p(-gen.random()) / logp))
            else:
                open1 -= 1
                n1 += 1
                if n1 > nmax:
                    break
                open0 += alias_draw(gen, prob, alias)
        if n1 <= nmax:
            hist[n1] += 1
    return hist


@njit(cache=True, nogil=True)
def size_conditioned_stats(gen, n, prob, alias, logw, mmin, x, trials):
    """Under P^n: number of positive label draws and type-0 leaf moments."""
    npos = 0
    leaf_sum = 0.0
    leaf_sq = 0.0
    for _ in range(trials):
        children = exact_size_tree(gen, n, prob, alias, logw, mmin)
        _, depth, _ = tree_structure(children)
        leaves = 0
        for v in range(children.shape[0]):
            if children[v] == 0 and depth[v] % 2 == 0:
                leaves += 1
        leaf_sum += leaves
        leaf_sq += leaves * leaves
        _, ok = attach_labels(gen, children, depth, x, True, False)
        if ok:
            npos += 1
    return npos, leaf_sum, leaf_sq


@njit(cache=True, nogil=True)
def subtree_min_strict(children, depth, labels):
    """For each vertex, min label over type-0 strict descendants (huge if none)."""
    n = children.shape[0]
    parent, _, _ = tree_structure(children)
    big = np.iinfo(np.int64).max
    out = np.full(n, big, np.int64)
    for v in range(n - 1, 0, -1):
        p = parent[v]
        m = out[v]
        if depth[v] % 2 == 0 and labels[v] < m:
            m = labels[v]
        if m < out[p]:
            out[p] = m
    return out


# ---------------------------------------------------------------- maps


@njit(cache=True, nogil=True)
def bdg_successors(lab):
    """Successor corner of each corner (-1 for the extra vertex)."""
    z = lab.shape[0]
    succ = np.full(z, -2, np.int64)
    maxl = lab.max() + 2
    # pending[l] holds corners with label l still waiting for label l - 1
    head = np.full(maxl + 1, -1, np.int64)
    nxt = np.full(z, -1, np.int64)
    for t in range(2 * z):
        j = t % z
        L = lab[j]
        c = head[L + 1]
        while c != -1:
            succ[c] = j
            c = nxt[c]
        head[L + 1] = -1
        if t < z:
            if L == 1:
                succ[j] = -1
            else:
                nxt[j] = head[L]
                head[L] = j
    return succ


@njit(cache=True, nogil=True)
def bfs(adj_ptr, adj, src):
    nv = adj_ptr.shape[0] - 1
    dist = np.full(nv, -1, np.int64)
    q = np.empty(nv, np.int64)
    dist[src] = 0
    q[0] = src
    h = 0
    t = 1
    while h < t:
        v = q[h]
        h += 1
        for e in range(adj_ptr[v], adj_ptr[v + 1]):
            w = adj[e]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q[t] = w
                t += 1
    return dist


@njit(cache=True, nogil=True)
def cut_components(adj_ptr, adj, root):
    """Iterative lowpoint DFS.

    Returns (is_cut, sizes_ptr, sizes): for each vertex v, sizes of the
    connected components of G - v, stored in sizes[sizes_ptr[v]:sizes_ptr[v+1]]
    (only filled for cut vertices).
    """
    nv = adj_ptr.shape[0] - 1
    disc = np.full(nv, -1, np.int64)
    low = np.zeros(nv, np.int64)
    sub = np.ones(nv, np.int64)
    par = np.full(nv, -1, np.int64)
    it = np.zeros(nv, np.int64)
    stack = np.empty(nv, np.int64)
    # split[v] = total size of DFS-children subtrees that hang off v alone
    split = np.zeros(nv, np.int64)
    nsplit = np.zeros(nv, np.int64)
    comp_size = np.zeros(2 * nv + 2, np.int64)
    comp_owner = np.zeros(2 * nv + 2, np.int64)
    nc = 0
    time = 0
    top = 0
    stack[0] = root
    disc[root] = 0
    low[root] = 0
    it[root] = adj_ptr[root]
    time = 1
    while top >= 0:
        v = stack[top]
        if it[v] < adj_ptr[v + 1]:
            w = adj[it[v]]
            it[v] += 1
            if disc[w] < 0:
                par[w] = v
                disc[w] = time
                low[w] = time
                time += 1
                it[w] = adj_ptr[w]
                top += 1
                stack[top] = w
            elif disc[w] < low[v]:
                # the parent edge included: harmless for vertex cuts
                low[v] = disc[w]
        else:
            top -= 1
            p = par[v]
            if p >= 0:
                sub[p] += sub[v]
                if low[v] < low[p]:
                    low[p] = low[v]
                if low[v] >= disc[p]:
                    comp_size[nc] = sub[v]
                    comp_owner[nc] = p
                    nc += 1
                    split[p] += sub[v]
                    nsplit[p] += 1
    is_cut = np.zeros(nv, np.bool_)
    counts = np.zeros(nv, np.int64)
    for v in range(nv):
        if v == root:
            is_cut[v] = nsplit[v] >= 2
            counts[v] = nsplit[v] if is_cut[v] else 0
        else:
            is_cut[v] = nsplit[v] >= 1
            counts[v] = nsplit[v] + 1 if is_cut[v] else 0
    ptr = np.zeros(nv + 1, np.int64)
    for v in range(nv):
        ptr[v + 1] = ptr[v] + counts[v]
    sizes = np.zeros(ptr[nv], np.int64)
    fill = ptr[:nv].copy()
    for c in range(nc):
        v = comp_owner[c]
        if is_cut[v]:
            sizes[fill[v]] = comp_size[c]
            fill[v] += 1
    for v in range(nv):
        if is_cut[v] and v != root:
            sizes[fill[v]] = nv - 1 - split[v]
            fill[v] += 1
    return is_cut, ptr, sizes


# ---------------------------------------------------------------- snake


@njit(cache=True, nogil=True)
def snake_path(gen, N):
    """Uniform Dyck path with 2N steps and Gaussian edge labels.

    Returns integer heights C and labels V at contour times 0..2N.
    """
    L = 2 * N + 1
    steps = np.empty(L, np.int64)
    for i in range(L):
        steps[i] = 1 if i < N else -1
    for i in range(L - 1, 0, -1):
        j = gen.integers(0, i + 1)
        tmp = steps[i]
        steps[i] = steps[j]
        steps[j] = tmp
    s = 0
    best = 1
    arg = 0
    for i in range(L):
        s += steps[i]
        if s < best:
            best = s
            arg = i
    C = np.zeros(2 * N + 1, np.int64)
    V = np.zeros(2 * N + 1)
    lab = np.zeros(N + 1)  # label stack indexed by height
    h = 0
    for t in range(2 * N):
        st = steps[(arg + 1 + t) % L]
        if st > 0:
            lab[h + 1] = lab[h] + gen.standard_normal()
            h += 1
        else:
            h -= 1
        C[t + 1] = h
        V[t + 1] = lab[h]
    return C, V


@njit(cache=True, nogil=True)
def snake_functionals(gen, N, paths, tidx):
    """Per path: (sup V, inf V, trapezoid mean of V - inf V, V[tidx], C[tidx]) in raw units."""
    out = np.empty((paths, 5))
    for p in range(paths):
        C, V = snake_path(gen, N)
        lo = V.min()
        hi = V.max()
        s = 0.0
        for i in range(2 * N):
            s += 0.5 * (V[i] + V[i + 1])
        out[p, 0] = hi
        out[p, 1] = lo
        out[p, 2] = s / (2 * N) - lo
        out[p, 3] = V[tidx]
        out[p, 4] = C[tidx]
    return out
