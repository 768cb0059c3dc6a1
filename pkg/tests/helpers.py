"""Independent brute-force oracles used to cross-check the package.

These deliberately avoid the package's enumeration internals: plain
itertools sweeps over edge states and breadth-first-search connectivity,
so an agreement is a genuine two-route check.
"""

import itertools
from collections import deque


def open_adjacency(region, bits):
    adj = {i: [] for i in range(region.n_vertices)}
    for e, (i, j) in enumerate(region.edges):
        if bits[e]:
            adj[i].append(j)
            adj[j].append(i)
    return adj


def bfs_component(adj, start):
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def count_components(region, bits):
    adj = open_adjacency(region, bits)
    seen = set()
    k = 0
    for v in range(region.n_vertices):
        if v not in seen:
            k += 1
            seen |= bfs_component(adj, v)
    return k


def bits_connected(region, bits, x, y):
    i = region.vertex_index[tuple(x)]
    j = region.vertex_index[tuple(y)]
    if i == j:
        return True
    return j in bfs_component(open_adjacency(region, bits), i)


def bits_connected_to_any(region, bits, x, targets):
    i = region.vertex_index[tuple(x)]
    t_idx = {region.vertex_index[tuple(t)] for t in targets}
    if i in t_idx:
        return True
    return bool(bfs_component(open_adjacency(region, bits), i) & t_idx)


def rc_event_probability(region, p, q, predicate_bits, edge_p=None):
    """Sum the weights q^k prod p_e^{b}(1-p_e)^{1-b} over all edge states."""
    n_edges = region.n_edges
    pe = list(edge_p) if edge_p is not None else [p] * n_edges
    num = 0.0
    den = 0.0
    for bits in itertools.product((0, 1), repeat=n_edges):
        w = q ** count_components(region, bits)
        for e, b in enumerate(bits):
            w *= pe[e] if b else 1.0 - pe[e]
        den += w
        if predicate_bits(bits):
            num += w
    return num / den


def bernoulli_event_probability(region, p, predicate_bits, edge_p=None):
    """Independent percolation: no cluster weighting at all."""
    n_edges = region.n_edges
    pe = list(edge_p) if edge_p is not None else [p] * n_edges
    num = 0.0
    for bits in itertools.product((0, 1), repeat=n_edges):
        w = 1.0
        for e, b in enumerate(bits):
            w *= pe[e] if b else 1.0 - pe[e]
        if predicate_bits(bits):
            num += w
    return num
