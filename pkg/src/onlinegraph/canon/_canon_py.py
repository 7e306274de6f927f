"""Pure-Python canonical labeling of small vertex-coloured graphs.

Colour refinement followed by an individualisation search over the
refinement tree.  The canonical labeling is the leaf whose relabelled
adjacency rows are lexicographically largest.  Two prunings keep the tree
small on symmetric inputs, and both only drop subtrees whose leaf sets are
images of already explored ones, so the result is the same as the full tree:

* twins: two vertices of the target cell with equal neighbourhoods (modulo
  each other) are swapped by an automorphism fixing everything else;
* automorphisms found at equal leaves, used when they fix the current
  individualised prefix pointwise.

The compiled kernel in ``_canon_ext.pyx`` implements the same tree and
returns the same certificate.
"""

MAX_AUTOMORPHISMS = 64


def _refine(adj, cells):
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        out = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups = {}
            for v in cell:
                a = adj[v]
                sig = tuple((a & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
                continue
            changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def canonical_form(adj, colors):
    """Return ``(order, cert)`` for the coloured graph ``(adj, colors)``.

    ``order[i]`` is the input vertex placed at canonical position ``i`` and
    ``cert`` the adjacency rows in canonical positions.  Colour classes keep
    ascending colour order, so ``colors[order[i]]`` is sorted.
    """
    n = len(adj)
    if n == 0:
        return (), ()
    by_color = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    cells = _refine(adj, [by_color[c] for c in sorted(by_color)])

    best_cert = None
    best_order = None
    autos = []

    def leaf(cells):
        nonlocal best_cert, best_order
        order = [c[0] for c in cells]
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        rows = []
        for v in order:
            a = adj[v]
            r = 0
            while a:
                low = a & -a
                r |= 1 << pos[low.bit_length() - 1]
                a ^= low
            rows.append(r)
        cert = tuple(rows)
        if best_cert is None or cert > best_cert:
            best_cert, best_order = cert, order
        elif cert == best_cert and len(autos) < MAX_AUTOMORPHISMS:
            gamma = [0] * n
            for i in range(n):
                gamma[best_order[i]] = order[i]
            autos.append(gamma)

    def same_orbit(u, v, prefix):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in autos:
            if all(g[p] == p for p in prefix):
                for x in range(n):
                    a, b = find(x), find(g[x])
                    if a != b:
                        parent[a] = b
        return find(u) == find(v)

    def search(cells, prefix):
        if len(cells) == n:
            leaf(cells)
            return
        ti = -1
        size = n + 1
        for i, c in enumerate(cells):
            if 1 < len(c) < size:
                ti, size = i, len(c)
        cell = cells[ti]
        tried = []
        for v in cell:
            bv = 1 << v
            skip = False
            for u in tried:
                bu = 1 << u
                if adj[u] & ~bv == adj[v] & ~bu:
                    skip = True
                    break
            if not skip and autos:
                for u in tried:
                    if same_orbit(u, v, prefix):
                        skip = True
                        break
            if skip:
                continue
            rest = [w for w in cell if w != v]
            search(_refine(adj, cells[:ti] + [[v], rest] + cells[ti + 1:]), prefix + [v])
            tried.append(v)

    search(cells, [])
    return tuple(best_order), best_cert
