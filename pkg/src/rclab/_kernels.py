"""Compiled hot loops: configuration scans and Monte Carlo sweeps."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


@njit(cache=True, nogil=True)
def scan_connectivity(n_vertices, eu, ev, q_src, q_off, q_flat, start, stop):
    """Sweep configurations [start, stop) in single-flip order.

    Returns integer histograms over (open count, cluster count): one for all
    configurations visited and one per connectivity query (source connected to
    any listed target). Integer counts make chunked scans order-independent.
    """
    n_edges = eu.shape[0]
    n_q = q_src.shape[0]
    total = np.zeros((n_edges + 1, n_vertices + 1), np.int64)
    per_q = np.zeros((n_q, n_edges + 1, n_vertices + 1), np.int64)
    is_open = np.zeros(n_edges, np.bool_)
    parent = np.empty(n_vertices, np.int64)
    g = start ^ (start >> 1)
    n_open = 0
    for j in range(n_edges):
        if (g >> j) & 1:
            is_open[j] = True
            n_open += 1
    for idx in range(start, stop):
        if idx > start:
            m = idx
            e = 0
            while m & 1 == 0:
                m >>= 1
                e += 1
            if is_open[e]:
                is_open[e] = False
                n_open -= 1
            else:
                is_open[e] = True
                n_open += 1
        for v in range(n_vertices):
            parent[v] = v
        for j in range(n_edges):
            if is_open[j]:
                a = _find(parent, eu[j])
                b = _find(parent, ev[j])
                if a != b:
                    parent[b] = a
        k = 0
        for v in range(n_vertices):
            if parent[v] == v:
                k += 1
        total[n_open, k] += 1
        for qi in range(n_q):
            rs = _find(parent, q_src[qi])
            for t in range(q_off[qi], q_off[qi + 1]):
                if _find(parent, q_flat[t]) == rs:
                    per_q[qi, n_open, k] += 1
                    break
    return total, per_q


@njit(cache=True, nogil=True)
def heat_bath_sweep(n_vertices, eu, ev, q, p_edge, bonds, urand, roots_out):
    """One heat-bath sweep over edges in index order, updating bonds in place.

    Each edge is resampled from its conditional law given the rest: open with
    probability p_e when its endpoints are connected off the edge, otherwise
    p_e / (p_e + q(1-p_e)). Fills roots_out with component roots of the final
    configuration.
    """
    n_edges = eu.shape[0]
    parent = np.empty(n_vertices, np.int64)
    for j in range(n_edges):
        for v in range(n_vertices):
            parent[v] = v
        for l in range(n_edges):
            if l != j and bonds[l]:
                a = _find(parent, eu[l])
                b = _find(parent, ev[l])
                if a != b:
                    parent[b] = a
        pe = p_edge[j]
        if _find(parent, eu[j]) == _find(parent, ev[j]):
            pr = pe
        else:
            pr = pe / (pe + q * (1.0 - pe))
        bonds[j] = urand[j] < pr
    for v in range(n_vertices):
        parent[v] = v
    for l in range(n_edges):
        if bonds[l]:
            a = _find(parent, eu[l])
            b = _find(parent, ev[l])
            if a != b:
                parent[b] = a
    for v in range(n_vertices):
        roots_out[v] = _find(parent, v)


@njit(cache=True, nogil=True)
def swendsen_wang_sweep(n_vertices, eu, ev, p_edge, spins, urand, colors, bonds_out, roots_out):
    """One bond/spin resampling step, updating spins in place.

    Bonds open with probability p_e between equal spins only; every component
    of the bond configuration is then recolored with the color drawn for its
    root, so cluster colors are uniform and independent.
    """
    n_edges = eu.shape[0]
    parent = np.empty(n_vertices, np.int64)
    for v in range(n_vertices):
        parent[v] = v
    for j in range(n_edges):
        if spins[eu[j]] == spins[ev[j]] and urand[j] < p_edge[j]:
            bonds_out[j] = True
            a = _find(parent, eu[j])
            b = _find(parent, ev[j])
            if a != b:
                parent[b] = a
        else:
            bonds_out[j] = False
    for v in range(n_vertices):
        r = _find(parent, v)
        roots_out[v] = r
        spins[v] = colors[r]
