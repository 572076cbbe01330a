"""Bounded-width decomposition trees: construction, realization and balancing.

Two tree flavors live here.  Plain trees are binary: leaves create colored
vertices, internal ``Join`` nodes union their children, wire every left
vertex colored ``i`` to every right vertex colored ``j`` for ``(i, j) in S``,
then recolor everything through ``R``.  A disjoint union is a join with an
empty ``S``.  The extended flavor additionally allows union nodes of
arbitrary arity, requires every non-root union node to hang off a join, and
requires every join subtree to realize a connected subgraph.

Cographs get special treatment: ``build_cotree`` recognizes them and
``balance_cotree`` turns the cotree into an equivalent binary tree of
logarithmic depth using at most two colors (within the width-4 budget the
certification layer assumes).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .graph import LabeledGraph, connected_components, co_components


class WidthViolationError(ValueError):
    """A color outside [1, k] appeared during realization."""


class DisconnectedInputError(ValueError):
    """An operation that requires a connected realization got a disconnected one."""


# -- operation descriptors ---------------------------------------------------

class OpDesc(NamedTuple):
    """What a tree node does; this is the unit certificates quote verbatim."""

    kind: str                # "new" | "join" | "par"
    color: int | None        # creation color for "new"
    S: frozenset             # ordered color pairs for "join"
    R: tuple | None          # total recolor map on [1, k], R[i-1] = image of i

    def is_join(self):
        return self.kind == "join"

    def is_par(self):
        return self.kind == "par"

    def is_new(self):
        return self.kind == "new"


def new_op(color):
    return OpDesc("new", color, frozenset(), None)


def join_op_desc(S, R):
    return OpDesc("join", None, frozenset((int(a), int(b)) for a, b in S), tuple(R))


def par_op_desc():
    return OpDesc("par", None, frozenset(), None)


def identity_recolor(k):
    return tuple(range(1, k + 1))


# -- tree nodes ---------------------------------------------------------------

@dataclass(frozen=True)
class NewVertex:
    color: int
    vertex: int          # dense vertex reference, unique per leaf
    label: int = 0

    @property
    def children(self):
        return ()

    def op(self, k):
        return new_op(self.color)


@dataclass(frozen=True)
class Join:
    S: frozenset
    R: tuple
    children: tuple      # exactly 2

    def op(self, k):
        return join_op_desc(self.S, self.R)


@dataclass(frozen=True)
class Parallel:
    children: tuple      # >= 2 in extended trees

    def op(self, k):
        return par_op_desc()


def make_join(S, R, left, right):
    return Join(frozenset((int(a), int(b)) for a, b in S), tuple(R), (left, right))


@dataclass(frozen=True)
class NlcTree:
    """Binary decomposition tree with declared width bound ``k``."""

    k: int
    root: object


@dataclass(frozen=True)
class NlcPlusTree:
    """Extended decomposition tree (arbitrary-arity union nodes)."""

    k: int
    root: object


@dataclass(frozen=True)
class ColoredGraph:
    graph: LabeledGraph
    colors: tuple        # per dense vertex, in [1, k]


def iter_nodes(node):
    yield node
    for c in node.children:
        yield from iter_nodes(c)


def leaves(node):
    return [x for x in iter_nodes(node) if isinstance(x, NewVertex)]


# -- realization --------------------------------------------------------------

def _check_color(c, k):
    if not (1 <= c <= k):
        raise WidthViolationError(f"color {c} outside [1, {k}]")


def _realize_node(node, k, edges):
    """Return {vertex ref: color} for the subgraph of ``node``, appending edges."""
    if isinstance(node, NewVertex):
        _check_color(node.color, k)
        return {node.vertex: node.color}
    if isinstance(node, Parallel):
        out = {}
        for c in node.children:
            part = _realize_node(c, k, edges)
            if out.keys() & part.keys():
                raise ValueError("duplicate vertex reference across union children")
            out.update(part)
        return out
    # join: union, wire S, then recolor through R
    left = _realize_node(node.children[0], k, edges)
    right = _realize_node(node.children[1], k, edges)
    if left.keys() & right.keys():
        raise ValueError("duplicate vertex reference across join children")
    for i, j in node.S:
        _check_color(i, k)
        _check_color(j, k)
    by_color_l = {}
    for v, c in left.items():
        by_color_l.setdefault(c, []).append(v)
    by_color_r = {}
    for v, c in right.items():
        by_color_r.setdefault(c, []).append(v)
    for i, j in node.S:
        for u in by_color_l.get(i, ()):
            for v in by_color_r.get(j, ()):
                edges.append((u, v))
    out = {}
    out.update(left)
    out.update(right)
    if node.R is not None:
        if len(node.R) != k:
            raise WidthViolationError(f"recolor map has arity {len(node.R)}, expected {k}")
        for img in node.R:
            _check_color(img, k)
        for v, c in out.items():
            out[v] = node.R[c - 1]
    return out


def realize(t, ids=None, labels=None, weights=None, sel=None):
    """Evaluate a decomposition tree bottom-up into a colored graph.

    Leaf vertex references must be exactly ``0..n-1``.  Unless overridden,
    the realized graph gets ids ``ref+1`` and the labels carried by leaves.
    """
    edges = []
    colors_by_ref = _realize_node(t.root, t.k, edges)
    n = len(colors_by_ref)
    refs = sorted(colors_by_ref)
    if refs != list(range(n)):
        raise ValueError("leaf vertex references must be exactly 0..n-1")
    if labels is None:
        labels = [0] * n
        for leaf in leaves(t.root):
            labels[leaf.vertex] = leaf.label
    g = LabeledGraph(n, tuple(ids) if ids else tuple(range(1, n + 1)),
                     tuple(labels), edges, weights, sel)
    return ColoredGraph(g, tuple(colors_by_ref[v] for v in range(n)))


def width(t):
    """Largest color the tree actually uses."""
    w = 0
    for node in iter_nodes(t.root):
        if isinstance(node, NewVertex):
            w = max(w, node.color)
        elif isinstance(node, Join):
            for i, j in node.S:
                w = max(w, i, j)
            if node.R is not None:
                for src, img in enumerate(node.R, start=1):
                    if img != src:
                        w = max(w, img)
    return w


def depth(t):
    def d(node):
        if not node.children:
            return 0
        return 1 + max(d(c) for c in node.children)

    return d(t.root)


# -- extended-tree validation and conversion ---------------------------------

def validate_nlc_plus(t):
    """Check the five structural conditions; returns (ok, first_violated).

    1: leaves carry colors in [1, k].     2: internal nodes are join/union.
    3: join nodes have exactly 2 children. 4: union arity >= 2 and non-root
    union nodes have join parents.         5: every join subtree realizes a
    connected subgraph.
    """
    seen_refs = set()
    for node in iter_nodes(t.root):
        if isinstance(node, NewVertex):
            if not (1 <= node.color <= t.k):
                return False, 1
            if node.vertex in seen_refs:
                return False, 1
            seen_refs.add(node.vertex)
        elif isinstance(node, Join):
            if len(node.children) != 2:
                return False, 3
            if any(not (1 <= i <= t.k and 1 <= j <= t.k) for i, j in node.S):
                return False, 3
            if node.R is None or len(node.R) != t.k or any(not (1 <= r <= t.k) for r in node.R):
                return False, 3
        elif isinstance(node, Parallel):
            if len(node.children) < 2:
                return False, 4
        else:
            return False, 2

    def walk(node, parent):
        if isinstance(node, Parallel) and parent is not None and not isinstance(parent, Join):
            return 4
        for c in node.children:
            bad = walk(c, node)
            if bad:
                return bad
        return None

    bad = walk(t.root, None)
    if bad:
        return False, bad

    # connectivity of every join subgraph, via realization
    refs_of = {}

    def gather(node):
        if isinstance(node, NewVertex):
            refs_of[id(node)] = frozenset([node.vertex])
        else:
            acc = frozenset()
            for c in node.children:
                gather(c)
                acc |= refs_of[id(c)]
            refs_of[id(node)] = acc

    gather(t.root)
    try:
        colored = realize(NlcPlusTree(t.k, t.root))
    except (ValueError, WidthViolationError):
        return False, 2
    for node in iter_nodes(t.root):
        if isinstance(node, Join):
            if not _subset_connected(colored.graph, refs_of[id(node)]):
                return False, 5
    return True, None


def _subset_connected(g, refs):
    refs = set(refs)
    if not refs:
        return False
    start = next(iter(refs))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in g.adj[v]:
                if w in refs and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen) == len(refs)


def _trim(node, keep, k):
    """Restrict a binary tree to the leaf set ``keep``; None when empty.

    A join losing one side collapses onto the surviving side with its
    recoloring pushed down, so realized colors are preserved.
    """
    if isinstance(node, NewVertex):
        return node if node.vertex in keep else None
    left = _trim(node.children[0], keep, k)
    right = _trim(node.children[1], keep, k)
    if left is None and right is None:
        return None
    if left is not None and right is not None:
        return Join(node.S, node.R, (left, right))
    survivor = left if left is not None else right
    return _push_recolor(survivor, node.R, k)


def _push_recolor(node, R, k):
    if R is None or all(R[i] == i + 1 for i in range(k)):
        return node
    if isinstance(node, NewVertex):
        return NewVertex(R[node.color - 1], node.vertex, node.label)
    if isinstance(node, Join):
        composed = tuple(R[c - 1] for c in node.R)
        return Join(node.S, composed, node.children)
    raise AssertionError("union nodes do not appear in binary trees")


def to_nlc_plus(t):
    """Convert a binary tree with connected realization into the extended form.

    Width and final colors are preserved; depth at most doubles.
    """
    colored = realize(t)
    full_adj = colored.graph.adj

    def refs_components(refs):
        refs = set(refs)
        comps = []
        while refs:
            s = min(refs)
            comp = {s}
            refs.discard(s)
            frontier = [s]
            while frontier:
                nxt = []
                for v in frontier:
                    for w in full_adj[v]:
                        if w in refs:
                            refs.discard(w)
                            comp.add(w)
                            nxt.append(w)
                frontier = nxt
            comps.append(frozenset(comp))
        comps.sort(key=min)
        return comps

    def refs_of(node):
        if isinstance(node, NewVertex):
            return frozenset([node.vertex])
        out = frozenset()
        for c in node.children:
            out |= refs_of(c)
        return out

    def convert(node):
        # invariant: the realization of ``node`` is connected
        if isinstance(node, NewVertex):
            return node
        kids = []
        for child in node.children:
            refs = refs_of(child)
            comps = refs_components(refs)
            if len(comps) == 1:
                kids.append(convert(child))
            else:
                parts = []
                for comp in comps:
                    trimmed = _trim(child, comp, t.k)
                    parts.append(convert(trimmed))
                kids.append(Parallel(tuple(parts)))
        return Join(node.S, node.R, tuple(kids))

    root = t.root
    comps = refs_components(refs_of(root))
    if len(comps) != 1:
        raise DisconnectedInputError("tree realizes a disconnected graph")
    if isinstance(root, Parallel):
        raise DisconnectedInputError("union root cannot realize a connected graph")
    return NlcPlusTree(t.k, convert(root))


# -- cotrees ------------------------------------------------------------------

@dataclass(frozen=True)
class Cotree:
    op: str | None       # "par" | "join" | None for a leaf
    vertex: int | None
    children: tuple = ()

    def is_leaf(self):
        return self.op is None


def cotree_leaves(ct):
    if ct.is_leaf():
        return [ct.vertex]
    out = []
    for c in ct.children:
        out.extend(cotree_leaves(c))
    return out


def build_cotree(g):
    """Canonical cotree of ``g``, or None when ``g`` has an induced 4-path.

    Children are ordered by the minimum id they contain so the output is
    deterministic under storage reordering.
    """

    def rec(subset, parent_op):
        if len(subset) == 1:
            return Cotree(None, subset[0])
        comps = _components_within(g, subset)
        if len(comps) > 1:
            if parent_op == "par":
                return None
            kids = [rec(c, "par") for c in comps]
            if any(k is None for k in kids):
                return None
            return Cotree("par", None, tuple(kids))
        cocomps = co_components(g, subset)
        if len(cocomps) > 1:
            if parent_op == "join":
                return None
            kids = [rec(c, "join") for c in cocomps]
            if any(k is None for k in kids):
                return None
            return Cotree("join", None, tuple(kids))
        return None

    return rec(tuple(range(g.n)), None)


def _components_within(g, subset):
    inside = set(subset)
    comps = []
    while inside:
        s = min(inside)
        inside.discard(s)
        comp = [s]
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.adj[v]:
                    if w in inside:
                        inside.discard(w)
                        comp.append(w)
                        nxt.append(w)
            frontier = nxt
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: min(g.ids[v] for v in c))
    return comps


def realize_cotree(ct, g_ids=None):
    """Edge set described by a cotree (over dense vertex refs)."""
    edges = []

    def rec(node):
        if node.is_leaf():
            return [node.vertex]
        parts = [rec(c) for c in node.children]
        if node.op == "join":
            for i in range(len(parts)):
                for j in range(i + 1, len(parts)):
                    for u in parts[i]:
                        for v in parts[j]:
                            edges.append((u, v))
        out = []
        for p in parts:
            out.extend(p)
        return out

    verts = rec(ct)
    return sorted(verts), sorted((min(u, v), max(u, v)) for u, v in edges)


# -- log-depth balancing ------------------------------------------------------
#
# A cograph can be built with one color; the balancer splits the (binarized)
# cotree at centroid positions and represents "a cotree with one subtree cut
# out" as a 2-colored graph: color 2 marks the vertices that must later be
# joined to everything that fills the cut.  Plugging and splicing such
# contexts are single join nodes, so every split costs O(1) extra depth.

_PLUG_S = frozenset([(2, 1)])
_SPLICE_S = frozenset([(2, 1), (2, 2)])
_BAL_K = 4


@dataclass
class _BinNode:
    op: str | None
    vertex: int | None
    left: object = None
    right: object = None
    nleaves: int = 1
    tin: int = 0
    tout: int = 0

    def contains(self, other):
        return self.tin <= other.tin and other.tout <= self.tout


def _binarize(ct):
    if ct.is_leaf():
        return _BinNode(None, ct.vertex)
    kids = [_binarize(c) for c in ct.children]
    node = kids[0]
    for nxt in kids[1:]:
        parent = _BinNode(ct.op, None, node, nxt)
        parent.nleaves = node.nleaves + nxt.nleaves
        node = parent
    return node


def _index_intervals(root):
    clock = 0
    stack = [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            node.tout = clock
            continue
        clock += 1
        node.tin = clock
        stack.append((node, True))
        if node.op is not None:
            stack.append((node.right, False))
            stack.append((node.left, False))
    return root


def _heavier(node):
    return node.left if node.left.nleaves >= node.right.nleaves else node.right


def _centroid(node):
    """Descendant whose leaf count lies within [N/3, 2N/3] of ``node``'s."""
    n = node.nleaves
    cur = node
    while True:
        ch = _heavier(cur)
        if 3 * ch.nleaves <= 2 * n:
            return ch
        cur = ch


def _bal_graph(node, color):
    """Balanced join/new tree realizing ``node``'s cograph, all vertices ``color``."""
    if node.op is None:
        return NewVertex(color, node.vertex)
    m = _centroid(node)
    ctx = _bal_ctx(node, m)
    inner = _bal_graph(m, 1)
    recolor = tuple(color if c <= 2 else c for c in range(1, _BAL_K + 1))
    return Join(_PLUG_S, recolor, (ctx, inner))


def _splice(a, b):
    return Join(_SPLICE_S, identity_recolor(_BAL_K), (a, b))


def _side_context(node, child_toward_hole):
    other = node.right if child_toward_hole is node.left else node.left
    return _bal_graph(other, 2 if node.op == "join" else 1)


def _path_child(node, target):
    """Child of ``node`` on the path toward descendant ``target``."""
    return node.left if node.left.contains(target) else node.right


def _bal_ctx(node, hole):
    """Balanced 2-colored tree for ``node``'s cograph minus the ``hole`` subtree."""
    child = _path_child(node, hole)
    if child is hole:
        return _side_context(node, child)
    total = node.nleaves - hole.nleaves
    # lowest m on the node->hole path whose context part keeps <= total/2 leaves
    m = node
    while True:
        step = _path_child(m, hole)
        if step is hole or 2 * (node.nleaves - step.nleaves) > total:
            break
        m = step
    m_child = _path_child(m, hole)
    pieces = []
    if m is not node:
        pieces.append(_bal_ctx(node, m))
    pieces.append(_side_context(m, m_child))
    if m_child is not hole:
        pieces.append(_bal_ctx(m_child, hole))
    out = pieces[0]
    for p in pieces[1:]:
        out = _splice(out, p)
    return out


def balance_cotree(ct):
    """Binary width<=4 tree of logarithmic depth realizing the cotree's cograph."""
    root = _index_intervals(_binarize(ct))
    return NlcTree(_BAL_K, _bal_graph(root, 1))


# -- linear decompositions for arbitrary small graphs -------------------------

def linear_nlc_tree(g):
    """A width-frugal left-comb tree for an arbitrary graph.

    Vertices are added one at a time.  Between steps, already-placed vertices
    share a color exactly when their neighborhoods among the not-yet-placed
    vertices coincide, so all members of a color class agree on adjacency to
    the next vertex and the class count stays at the width of the layout.
    """
    order = _greedy_layout(g)
    pos = {v: i for i, v in enumerate(order)}

    def future(v, t):
        return frozenset(w for w in g.adj[v] if pos[w] > t)

    def regroup(t, extra=()):
        alive = order[: t + 1]
        groups = {}
        for w in alive:
            groups.setdefault(future(w, t), []).append(w)
        keyed = sorted(groups, key=lambda f: tuple(sorted(f)))
        return {f: i + 1 for i, f in enumerate(keyed)}, groups

    v0 = order[0]
    classes, _ = regroup(0)
    color_of = {v0: classes[future(v0, 0)]}
    steps = []  # (vertex, fresh_color, S, raw recolor dict)
    k_needed = 1
    for t in range(1, g.n):
        v = order[t]
        fresh = len(classes) + 1
        k_needed = max(k_needed, fresh)
        # classes are keyed by future sets that still include v, so a class
        # is adjacent to v exactly when v sits in its key
        S = frozenset((c, fresh) for f, c in classes.items() if v in f)
        new_classes, groups = regroup(t)
        k_needed = max(k_needed, len(new_classes))
        recolor = {}
        for f, members in groups.items():
            tgt = new_classes[f]
            for w in members:
                src = fresh if w == v else color_of[w]
                recolor[src] = tgt
                color_of[w] = tgt
        steps.append((v, fresh, S, recolor))
        classes = new_classes

    k = k_needed
    node = NewVertex(1, order[0], g.labels[order[0]])
    for v, fresh, S, recolor in steps:
        R = tuple(recolor.get(c, c) for c in range(1, k + 1))
        leaf = NewVertex(fresh, v, g.labels[v])
        node = Join(S, R, (node, leaf))
    return NlcTree(k, node)


def _greedy_layout(g):
    """Vertex order chosen to keep the class count of the layout low."""
    remaining = set(range(g.n))
    placed = []
    order = []
    while remaining:
        best, best_key = None, None
        for v in sorted(remaining):
            rest = remaining - {v}
            sigs = {frozenset(g.adj[w] & rest) for w in placed}
            sigs.add(frozenset(g.adj[v] & rest))
            key = (len(sigs), -len(g.adj[v] & set(placed)), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        order.append(best)
        placed.append(best)
        remaining.discard(best)
    return order


# -- JSON ---------------------------------------------------------------------

def _node_to_json(node):
    if isinstance(node, NewVertex):
        return {"op": "new", "color": node.color, "vertex": node.vertex, "label": node.label}
    if isinstance(node, Join):
        return {"op": "join", "S": sorted([list(p) for p in node.S]), "R": list(node.R),
                "children": [_node_to_json(c) for c in node.children]}
    return {"op": "par", "children": [_node_to_json(c) for c in node.children]}


def tree_to_json_dict(t):
    return {"k": t.k, "root": _node_to_json(t.root)}


def tree_to_json(t):
    return json.dumps(tree_to_json_dict(t), sort_keys=True, separators=(",", ":"))


def _node_from_json(d, k):
    op = d["op"]
    if op == "new":
        return NewVertex(d["color"], d["vertex"], d.get("label", 0))
    kids = tuple(_node_from_json(c, k) for c in d["children"])
    if op == "join":
        return Join(frozenset(tuple(p) for p in d["S"]), tuple(d["R"]), kids)
    if op == "par":
        return Parallel(kids)
    raise ValueError(f"unknown tree op {op!r}")


def tree_from_json_dict(d, extended=None):
    k = d["k"]
    root = _node_from_json(d["root"], k)
    has_union = any(isinstance(x, Parallel) for x in iter_nodes(root))
    if extended is None:
        extended = has_union and any(
            isinstance(x, Parallel) and len(x.children) != 2 for x in iter_nodes(root))
    cls = NlcPlusTree if extended else NlcTree
    if not extended and has_union:
        # binary trees store unions as S=empty joins
        def norm(nd):
            if isinstance(nd, NewVertex):
                return nd
            kids = tuple(norm(c) for c in nd.children)
            if isinstance(nd, Parallel):
                if len(kids) != 2:
                    raise ValueError("binary tree has a union node of arity != 2")
                return Join(frozenset(), identity_recolor(k), kids)
            return Join(nd.S, nd.R, kids)

        root = norm(root)
    return cls(k, root)


def tree_from_json(text, extended=None):
    return tree_from_json_dict(json.loads(text), extended)
