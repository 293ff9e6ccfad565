"""Pure-Python kernels for the dual complex construction.

Reference implementation and fallback for :mod:`cubefold._kernels`.  Vertex
ultrafilters are encoded as orientation masks: bit ``j`` set means the odd
halfspace ``2*j + 1`` of hyperplane ``j`` is chosen.
"""

BACKEND = "python"


def enumerate_ultrafilters(n, force_mask, force_bits, cap):
    """All ultrafilters, in lexicographic order of chosen halfspace ids.

    ``force_mask[h]`` / ``force_bits[h]`` give the hyperplanes decided by
    choosing halfspace ``h`` (itself plus everything above it) and the
    orientation bits they take.  Choosing an undecided hyperplane either way
    never conflicts with an upward-closed consistent partial choice, so the
    search has no dead ends.  Returns ``None`` once more than ``cap``
    ultrafilters have been found.
    """
    full = (1 << n) - 1
    out = []
    stack = [(0, 0)]
    while stack:
        decided, value = stack.pop()
        if decided == full:
            out.append(value)
            if len(out) > cap:
                return None
            continue
        free = ~decided & full
        j = (free & -free).bit_length() - 1
        h = 2 * j
        stack.append((decided | force_mask[h + 1], value | force_bits[h + 1]))
        stack.append((decided | force_mask[h], value | force_bits[h]))
    return out


def build_edges(vertices, n):
    """Edges ``(i, k, j)`` with ``i < k`` differing only on hyperplane ``j``,
    plus the mask of flippable hyperplanes at each vertex."""
    where = {v: i for i, v in enumerate(vertices)}
    edges = []
    flippable = [0] * len(vertices)
    for i, v in enumerate(vertices):
        for j in range(n):
            k = where.get(v ^ (1 << j))
            if k is not None:
                flippable[i] |= 1 << j
                if i < k:
                    edges.append((i, k, j))
    edges.sort()
    return edges, flippable


def median_failures(vertices, triples):
    """Indices of triples whose coordinatewise majority is not a vertex."""
    present = set(vertices)
    bad = []
    for t, (a, b, c) in enumerate(triples):
        u, v, w = vertices[a], vertices[b], vertices[c]
        if (u & v) | (u & w) | (v & w) not in present:
            bad.append(t)
    return bad


def distance_changes(source, target):
    """Compare Hamming distances over all index pairs ``i < j``.

    Returns ``(increases, decreases)``: how many pairs are strictly farther
    apart in ``target`` than in ``source``, and how many strictly closer.
    """
    up = down = 0
    m = len(source)
    for i in range(m):
        a, b = source[i], target[i]
        for j in range(i + 1, m):
            d0 = (a ^ source[j]).bit_count()
            d1 = (b ^ target[j]).bit_count()
            if d1 > d0:
                up += 1
            elif d1 < d0:
                down += 1
    return up, down
