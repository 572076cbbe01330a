"""Labeled graphs and the brute-force oracles the certification schemes are tested against.

Vertices have two identities: a dense index in ``0..n-1`` used for array
storage, and a sparse protocol identifier (``ids``) used in every message a
verifier ever sees.  Graphs are immutable after construction.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import config


class SizeExceededError(ValueError):
    """An oracle was asked to enumerate beyond its guard."""


def _pack_edges(n, edges):
    out = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range")
        out.add((min(u, v), max(u, v)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph with ids, labels and optional weights/selection."""

    n: int
    ids: tuple
    labels: tuple
    edges: tuple  # sorted tuples (u, v) with u < v, dense indices
    weights: tuple | None = None
    sel: tuple | None = None
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "edges", _pack_edges(self.n, self.edges))
        if len(self.ids) != self.n or len(self.labels) != self.n:
            raise ValueError("ids/labels length mismatch")
        if len(set(self.ids)) != self.n:
            raise ValueError("ids must be pairwise distinct")
        bound = self.n ** config.ID_EXPONENT
        for i in self.ids:
            if not (1 <= i <= bound):
                raise ValueError(f"id {i} outside [1, {bound}]")
        for l in self.labels:
            if not (0 <= l < config.LAMBDA):
                raise ValueError(f"label {l} outside [0, {config.LAMBDA})")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))
            if len(self.weights) != self.n:
                raise ValueError("weights length mismatch")
            for w in self.weights:
                if abs(w) > config.MAXW:
                    raise ValueError(f"weight {w} outside [-{config.MAXW}, {config.MAXW}]")
        if self.sel is not None:
            object.__setattr__(self, "sel", tuple(self.sel))
            if len(self.sel) != self.n or any(s not in (0, 1) for s in self.sel):
                raise ValueError("sel must be a 0/1 vector of length n")
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(a) for a in adj))

    # -- convenience ------------------------------------------------------

    @property
    def m(self):
        return len(self.edges)

    def degree(self, v):
        return len(self.adj[v])

    def has_edge(self, u, v):
        return v in self.adj[u]

    def index_of_id(self, vid):
        try:
            return self.ids.index(vid)
        except ValueError:
            raise KeyError(f"no vertex with id {vid}") from None

    def adjacency_matrix(self):
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        return a

    def with_ids(self, new_ids):
        """Same graph with re-assigned identifiers."""
        return LabeledGraph(self.n, tuple(new_ids), self.labels, self.edges,
                            self.weights, self.sel)

    def with_decoration(self, weights=None, sel=None):
        return LabeledGraph(self.n, self.ids, self.labels, self.edges,
                            tuple(weights) if weights is not None else self.weights,
                            tuple(sel) if sel is not None else self.sel)

    def permuted(self, perm):
        """Reorder dense storage: new vertex ``i`` is old vertex ``perm[i]``.

        Ids travel with their vertices, so the described labeled graph is
        unchanged; only the file/storage order moves.
        """
        inv = [0] * self.n
        for new, old in enumerate(perm):
            inv[old] = new
        edges = [(inv[u], inv[v]) for u, v in self.edges]
        pick = lambda seq: tuple(seq[old] for old in perm)
        return LabeledGraph(self.n, pick(self.ids), pick(self.labels), edges,
                            pick(self.weights) if self.weights else None,
                            pick(self.sel) if self.sel else None)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self):
        d = {
            "n": self.n,
            "ids": list(self.ids),
            "labels": list(self.labels),
            "edges": [list(e) for e in self.edges],
        }
        if self.weights is not None:
            d["weights"] = list(self.weights)
        if self.sel is not None:
            d["sel"] = list(self.sel)
        return d

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_dict(d):
        return LabeledGraph(d["n"], tuple(d["ids"]), tuple(d["labels"]),
                            [tuple(e) for e in d["edges"]],
                            tuple(d["weights"]) if "weights" in d else None,
                            tuple(d["sel"]) if "sel" in d else None)

    @staticmethod
    def from_json(text):
        return LabeledGraph.from_json_dict(json.loads(text))


def graph_from_edges(n, edges, ids=None, labels=None, weights=None, sel=None):
    """Build a graph with default ids ``1..n`` and zero labels."""
    return LabeledGraph(n, tuple(ids) if ids else tuple(range(1, n + 1)),
                        tuple(labels) if labels else (0,) * n,
                        edges, weights, sel)


def is_connected(g):
    """True iff ``g`` is connected (breadth-first reachability)."""
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for w in g.adj[v]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen) == g.n


def connected_components(g):
    """Components as sorted tuples of dense indices, sorted by minimum id."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        nxt.append(w)
            frontier = nxt
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: min(g.ids[v] for v in c))
    return comps


def co_components(g, subset=None):
    """Connected components of the complement, restricted to ``subset``.

    Linear-ish sweep that never materializes the complement: the complement
    neighbors of ``v`` are the unvisited vertices not adjacent to ``v``.
    """
    verts = sorted(subset) if subset is not None else list(range(g.n))
    unvisited = set(verts)
    comps = []
    while unvisited:
        s = min(unvisited)
        unvisited.discard(s)
        comp = [s]
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                reach = unvisited - g.adj[v]
                if reach:
                    unvisited -= reach
                    comp.extend(reach)
                    nxt.extend(reach)
            frontier = nxt
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: min(g.ids[v] for v in c))
    return comps


# -- induced-P4 oracle ----------------------------------------------------

def _build_p4_table():
    """64-entry table: does a 6-bit edge pattern on 4 vertices induce a path?"""
    pairs = list(itertools.combinations(range(4), 2))
    table = np.zeros(64, dtype=bool)
    for pat in range(64):
        es = [pairs[b] for b in range(6) if pat >> b & 1]
        if len(es) != 3:
            continue
        deg = [0, 0, 0, 0]
        for u, v in es:
            deg[u] += 1
            deg[v] += 1
        table[pat] = sorted(deg) == [1, 1, 2, 2]
    return table


_P4_TABLE = _build_p4_table()


@lru_cache(maxsize=None)
def _four_subsets(n):
    combos = np.array(list(itertools.combinations(range(n), 4)), dtype=np.int64)
    return combos


def oracle_has_induced_p4(g):
    """Exhaustive check over all 4-vertex subsets for an induced path."""
    if g.n < 4:
        return False
    a = g.adjacency_matrix()
    c = _four_subsets(g.n)
    pat = np.zeros(len(c), dtype=np.int8)
    bit = 0
    for i, j in itertools.combinations(range(4), 2):
        pat |= (a[c[:, i], c[:, j]] << bit).astype(np.int8)
        bit += 1
    return bool(_P4_TABLE[pat].any())


def oracle_non_3_colorable(g):
    """Exhaustive search over all assignments V -> {1,2,3}; true iff none is proper."""
    if g.n > 16:
        raise SizeExceededError(f"n={g.n} exceeds the 3-coloring enumeration guard (16)")
    colors = [0] * g.n
    adj = g.adj

    def place(v):
        if v == g.n:
            return True
        for ccl in (1, 2, 3):
            if all(colors[w] != ccl for w in adj[v] if w < v):
                colors[v] = ccl
                if place(v + 1):
                    return True
        colors[v] = 0
        return False

    return not place(0)


def oracle_max_weight_is(g):
    """Maximum total weight over all independent sets (the empty set counts)."""
    if g.n > 20:
        raise SizeExceededError(f"n={g.n} exceeds the independent-set enumeration guard (20)")
    weights = g.weights if g.weights is not None else (1,) * g.n
    nbr = [0] * g.n
    for u, v in g.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    best = 0
    total = 1 << g.n
    indep = bytearray(total)
    wsum = [0] * total
    indep[0] = 1
    for mask in range(1, total):
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        if indep[rest] and not (nbr[v] & rest):
            indep[mask] = 1
            wsum[mask] = wsum[rest] + weights[v]
            if wsum[mask] > best:
                best = wsum[mask]
    return best
