"""Shared graph constructors and small brute-force utilities for the tests."""

from __future__ import annotations

import itertools
import random

from cwcert.graph import LabeledGraph, graph_from_edges


def path_graph(n, **kw):
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)], **kw)


def cycle_graph(n, **kw):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)], **kw)


def complete_graph(n, **kw):
    return graph_from_edges(n, list(itertools.combinations(range(n), 2)), **kw)


def star_graph(leaves, **kw):
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)], **kw)


def two_disjoint_edges():
    return graph_from_edges(4, [(0, 1), (2, 3)])


def random_gnp(rng, n, p, require_connected=False):
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = graph_from_edges(n, edges)
        if not require_connected:
            return g
        from cwcert.graph import is_connected
        if is_connected(g):
            return g


def random_ids(rng, n):
    bound = max(n * n, 1)
    return tuple(rng.sample(range(1, bound + 1), n)) if n > 1 else (1,)


def edge_set(g):
    return set(g.edges)


def isomorphic_small(g1, g2):
    """Brute-force isomorphism test, fine for n <= 8."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    e2 = set(g2.edges)
    for perm in itertools.permutations(range(g1.n)):
        if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in e2 for u, v in g1.edges):
            return True
    return False
