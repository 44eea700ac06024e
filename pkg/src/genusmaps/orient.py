"""Prescribed-outdegree orientations and minimal (Bernardi) orientations.

An outdegree function assigns each vertex the number of edges that must
leave it.  Feasibility is decided constructively by augmenting paths on the
edge-vertex incidence; the exponential subset criterion is provided only as
a cross-check for small instances.  For a feasible root-accessible function
the minimal orientation and its spanning tree are computed jointly by the
four-case traversal with directed-cycle reversals; the defining property
(the tree maps to the orientation under the contour rule) is re-verified
independently on every call.

Marked maps (edges with fixed directions) are handled by deletion: the
marked edges are removed, the outdegrees reduced accordingly, the minimal
orientation of the reduced map computed, and the marked edges reinstated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional

from .cmap import CombMap, MapError


class OrientationError(ValueError):
    """Infeasible or inaccessible outdegree prescription."""


@dataclass(frozen=True)
class Orientation:
    """Per-edge direction: the set of outgoing darts, one per edge."""

    out_darts: frozenset

    def is_outgoing(self, dart: int) -> bool:
        return dart in self.out_darts

    def reversed_on(self, darts) -> "Orientation":
        out = set(self.out_darts)
        for d in darts:
            out.discard(d)
        return Orientation(frozenset(out))


@dataclass(frozen=True)
class MinimalResult:
    orientation: Orientation
    tree: frozenset            # internal edges as (min_dart, max_dart) pairs
    dart_order: tuple          # clockwise contour of the tree from the root corner


class _View:
    """A map fragment keeping original dart ids (used after edge deletion).

    ``vertices`` lists every vertex of the ambient map, including vertices
    that lost all their darts; they still count for feasibility and
    accessibility.
    """

    __slots__ = ("darts", "sigma", "alpha", "root", "vertex_of", "vertices")

    def __init__(self, darts, sigma: dict, alpha: dict, root, vertex_of: dict, vertices):
        self.darts = tuple(sorted(darts))
        self.sigma = sigma
        self.alpha = alpha
        self.root = root
        self.vertex_of = vertex_of
        self.vertices = list(vertices)

    def edge_of(self, d):
        a = self.alpha[d]
        return (d, a) if d < a else (a, d)

    def edges(self):
        return [(d, self.alpha[d]) for d in self.darts if d < self.alpha[d]]


def _full_view(m: CombMap) -> _View:
    darts = range(1, m.n_darts + 1)
    sigma = {d: m.sigma[d] for d in darts}
    alpha = {d: m.alpha[d] for d in darts}
    vof = {d: m.vertex_of(d) for d in darts}
    return _View(darts, sigma, alpha, m.root, vof, range(m.num_vertices))


def _deleted_view(m: CombMap, dead_edges) -> _View:
    """Remove edges (given as dart-pair reps); corners merge along sigma.

    The root dart becomes the first surviving dart from the root onward in
    clockwise order (the corner preceding the old root dart expands over the
    deleted darts).  All surviving darts keep their ids.
    """
    dead_darts = set()
    for a, b in dead_edges:
        dead_darts.add(a)
        dead_darts.add(b)
    darts = [d for d in range(1, m.n_darts + 1) if d not in dead_darts]
    sigma = {}
    for d in darts:
        nxt = m.sigma[d]
        while nxt in dead_darts:
            nxt = m.sigma[nxt]
        sigma[d] = nxt
    alpha = {d: m.alpha[d] for d in darts}
    vof = {d: m.vertex_of(d) for d in darts}
    root = m.root
    if root in dead_darts:
        root = None
        cand = m.sigma[m.root]
        while cand != m.root:
            if cand not in dead_darts:
                root = cand
                break
            cand = m.sigma[cand]
    if darts and root is None:
        raise OrientationError("root vertex has no unmarked edge left")
    return _View(darts, sigma, alpha, root if darts else None, vof,
                 range(m.num_vertices))


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------

def _find_orientation_view(view: _View, alpha_out: Mapping, fixed_out=()) -> Optional[set]:
    """Outgoing-dart set realizing the outdegrees, or None if infeasible.

    Kuhn-style augmentation on the edge/vertex incidence: each edge fills
    one outdegree slot at one of its endpoints; ``fixed_out`` pins the
    choice for some edges.  Vertices visited along one augmentation chain
    are banned from being revisited, which is sound because slots of a
    vertex are interchangeable.  Deterministic tie-breaking by dart id.
    """
    cap = {v: alpha_out.get(v, 0) for v in view.vertices}
    if any(c < 0 for c in cap.values()):
        return None
    edges = view.edges()
    if sum(cap.values()) != len(edges):
        return None
    assign = {}  # edge rep -> out dart
    fixed = set()
    for d in fixed_out:
        e = view.edge_of(d)
        assign[e] = d
        fixed.add(e)
        cap[view.vertex_of[d]] -= 1
        if cap[view.vertex_of[d]] < 0:
            return None
    used = {v: 0 for v in view.vertices}

    def augment(e, banned_vertices):
        for d in e:
            v = view.vertex_of[d]
            if v not in banned_vertices and used[v] < cap[v]:
                assign[e] = d
                used[v] += 1
                return True
        for d in e:
            v = view.vertex_of[d]
            if v in banned_vertices:
                continue
            banned = banned_vertices | {v}
            for other, od in sorted(assign.items()):
                if other in fixed or view.vertex_of[od] != v:
                    continue
                del assign[other]
                used[v] -= 1
                if augment(other, banned):
                    assign[e] = d
                    used[v] += 1
                    return True
                assign[other] = od
                used[v] += 1
        return False

    for e in edges:
        if e in fixed:
            continue
        if not augment(e, frozenset()):
            return None
    return set(assign.values())


def find_alpha_orientation(m: CombMap, alpha_out: Mapping, respect_marks: bool = False):
    """An orientation with the prescribed outdegrees, or None.

    With ``respect_marks`` the directions fixed by the map's marked edges
    are honored.
    """
    view = _full_view(m)
    fixed = [o for (o, _i, _mu) in m.marks] if respect_marks else []
    out = _find_orientation_view(view, alpha_out, fixed)
    return Orientation(frozenset(out)) if out is not None else None


def feasible_accessible_subset_criterion(m: CombMap, alpha_out: Mapping, target: int) -> bool:
    """Exponential cross-check: alpha(V) = E and alpha(S) > |E_S| for every
    S not containing the target."""
    from itertools import combinations

    verts = list(range(m.num_vertices))
    if sum(alpha_out.get(v, 0) for v in verts) != m.num_edges:
        return False
    others = [v for v in verts if v != target]
    for size in range(1, len(others) + 1):
        for subset in combinations(others, size):
            s = set(subset)
            e_in = sum(1 for (a, b) in m.edges()
                       if m.vertex_of(a) in s and m.vertex_of(b) in s)
            if sum(alpha_out.get(v, 0) for v in s) <= e_in:
                return False
    return True


# ---------------------------------------------------------------------------
# Accessibility
# ---------------------------------------------------------------------------

def _accessible_view(view: _View, out_darts, target, blocked_edges=frozenset()) -> bool:
    reach = {target}
    changed = True
    arcs = []
    for (a, b) in view.edges():
        if view.edge_of(a) in blocked_edges:
            continue
        od = a if a in out_darts else b
        arcs.append((view.vertex_of[od], view.vertex_of[view.alpha[od]]))
    while changed:
        changed = False
        for u, v in arcs:
            if v in reach and u not in reach:
                reach.add(u)
                changed = True
    return all(v in reach for v in view.vertices)


def is_accessible(m: CombMap, o: Orientation, target_vertex: int,
                  avoid_marks: bool = False) -> bool:
    """Every vertex has an oriented path to the target, optionally avoiding
    marked edges."""
    view = _full_view(m)
    blocked = frozenset(m.edge_of(o_) for (o_, _i, _mu) in m.marks) if avoid_marks else frozenset()
    return _accessible_view(view, o.out_darts, target_vertex, blocked)


# ---------------------------------------------------------------------------
# Bernardi traversal
# ---------------------------------------------------------------------------

def _find_directed_cycle(view: _View, out, visited, h, rng) -> Optional[list]:
    """A directed cycle of unvisited edges through the edge of the ingoing
    dart h, returned as the list of its outgoing darts, or None.

    An edge is unvisited when neither of its darts has been traversed.  The
    search is depth-first from the head of the edge back to its tail; the
    neighbor order is by dart id unless an rng is supplied (the result of
    the whole traversal must not depend on this choice).
    """
    e = view.edge_of(h)
    head = view.vertex_of[h]          # the edge of h points into h's vertex
    tail = view.vertex_of[view.alpha[h]]
    if head == tail:
        return [view.alpha[h]]        # a loop is itself a directed cycle
    # adjacency over unvisited edges, excluding e
    outgoing_at = {}
    for (a, b) in view.edges():
        if (a, b) == e or a in visited or b in visited:
            continue
        od = a if a in out else b
        outgoing_at.setdefault(view.vertex_of[od], []).append(od)
    for lst in outgoing_at.values():
        lst.sort()
        if rng is not None:
            rng.shuffle(lst)
    path = []
    seen = {head}

    def dfs(v):
        if v == tail:
            return True
        for od in outgoing_at.get(v, ()):
            w = view.vertex_of[view.alpha[od]]
            if w in seen:
                continue
            seen.add(w)
            path.append(od)
            if dfs(w):
                return True
            path.pop()
        return False

    if dfs(head):
        return path + [view.alpha[h]]
    return None


def _traverse_view(view: _View, out: set, rng=None):
    visited = set()
    internal = set()
    order = []
    h = view.root
    for _ in range(len(view.darts)):
        order.append(h)
        opp = view.alpha[h]
        outgoing = h in out
        if outgoing and opp not in visited:
            nh = view.sigma[h]
        elif outgoing:
            nh = view.sigma[opp]
        elif opp in visited:
            nh = view.sigma[h]
        else:
            cyc = _find_directed_cycle(view, out, visited, h, rng)
            if cyc is not None:
                for d in cyc:
                    out.discard(d)
                    out.add(view.alpha[d])
                nh = view.sigma[h]
            else:
                internal.add(view.edge_of(h))
                nh = view.sigma[opp]
        visited.add(h)
        h = nh
    if len(visited) != len(view.darts):
        raise OrientationError("traversal failed to visit every half-edge")
    return out, internal, order


def _phi_view(view: _View, tree) -> tuple:
    """The orientation determined by a spanning tree: internal edges point
    toward the root, each external edge leaves from the dart met first on
    the clockwise contour.  Returns (out_dart_set, contour_order)."""
    # parents via BFS on tree edges from the root vertex
    adj = {}
    for (a, b) in tree:
        adj.setdefault(view.vertex_of[a], []).append((view.vertex_of[b], a))
        adj.setdefault(view.vertex_of[b], []).append((view.vertex_of[a], b))
    root_v = view.vertex_of[view.root]
    parent_dart = {root_v: None}
    queue = [root_v]
    while queue:
        v = queue.pop(0)
        for (w, dart_at_v) in adj.get(v, ()):
            if w not in parent_dart:
                # the tree edge is outgoing at w (toward v, toward the root)
                parent_dart[w] = view.alpha[dart_at_v]
                queue.append(w)
    if len(parent_dart) != len(view.vertices):
        raise OrientationError("edge set is not spanning")
    out = {d for d in parent_dart.values() if d is not None}
    contour = []
    seen_first = set()
    h = view.root
    for _ in range(len(view.darts)):
        contour.append(h)
        e = view.edge_of(h)
        if e in tree:
            h = view.sigma[view.alpha[h]]
        else:
            if e not in seen_first:
                seen_first.add(e)
                out.add(h)
            h = view.sigma[h]
    return out, tuple(contour)


def spanning_trees(m: CombMap):
    """All spanning trees of the map, as frozensets of edge reps."""
    from itertools import combinations

    edges = m.edges()
    need = m.num_vertices - 1
    out = []
    for subset in combinations(edges, need):
        parent = list(range(m.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for (a, b) in subset:
            ra, rb = find(m.vertex_of(a)), find(m.vertex_of(b))
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            out.append(frozenset(subset))
    return out


def phi_of_tree(m: CombMap, tree) -> Orientation:
    out, _ = _phi_view(_full_view(m), frozenset(tree))
    return Orientation(frozenset(out))


def outdegrees(m: CombMap, o: Orientation) -> dict:
    out = {v: 0 for v in range(m.num_vertices)}
    for d in o.out_darts:
        out[m.vertex_of(d)] += 1
    return out


def bernardi_minimal(m: CombMap, alpha_out: Mapping, rng: Optional[random.Random] = None,
                     start: Optional[Orientation] = None) -> MinimalResult:
    """The minimal orientation for a feasible root-accessible outdegree
    function, with its spanning tree and contour order.

    The output is independent of the starting orientation and of the order
    in which directed cycles are found; the defining property (contour rule
    applied to the tree reproduces the orientation) is re-checked before
    returning.
    """
    view = _full_view(m)
    return _bernardi_view(view, alpha_out, rng, start.out_darts if start else None)


def _bernardi_view(view: _View, alpha_out, rng=None, start=None) -> MinimalResult:
    if start is None:
        start = _find_orientation_view(view, alpha_out)
        if start is None:
            raise OrientationError("outdegree function is infeasible")
    if view.root is not None and not _accessible_view(view, start, view.vertex_of[view.root]):
        raise OrientationError("outdegree function is not root-accessible")
    if not view.darts:
        return MinimalResult(Orientation(frozenset()), frozenset(), ())
    out, internal, order = _traverse_view(view, set(start), rng)
    phi_out, contour = _phi_view(view, frozenset(internal))
    if phi_out != out or contour != tuple(order):
        raise AssertionError("minimal orientation postcondition failed")
    deg = {v: 0 for v in view.vertices}
    for d in out:
        deg[view.vertex_of[d]] += 1
    if any(deg[v] != alpha_out.get(v, 0) for v in view.vertices):
        raise AssertionError("minimal orientation has wrong outdegrees")
    return MinimalResult(Orientation(frozenset(out)), frozenset(internal), tuple(order))


def canonical_marked_orientation(m: CombMap, alpha_out: Mapping,
                                 rng: Optional[random.Random] = None) -> MinimalResult:
    """Canonical orientation of a marked map: delete the marked edges,
    reduce the outdegrees by the marked out-darts, take the minimal
    orientation of the reduced map, and reinstate the marked edges.

    With no marks this is exactly the minimal orientation.  The returned
    tree spans the map inside the unmarked submap; the dart order is the
    contour of that tree in the reduced map.
    """
    if not m.marks:
        return bernardi_minimal(m, alpha_out, rng)
    marked_out = [o for (o, _i, _mu) in m.marks]
    dead = [m.edge_of(o) for o in marked_out]
    reduced = dict(alpha_out)
    for o in marked_out:
        v = m.vertex_of(o)
        reduced[v] = reduced.get(v, 0) - 1
    view = _deleted_view(m, dead)
    res = _bernardi_view(view, reduced, rng)
    full = set(res.orientation.out_darts) | set(marked_out)
    return MinimalResult(Orientation(frozenset(full)), res.tree, res.dart_order)


# ---------------------------------------------------------------------------
# Family outdegree prescriptions
# ---------------------------------------------------------------------------

def eulerian_outdegrees(m: CombMap) -> dict:
    """Half the degree at every vertex (the Eulerian prescription)."""
    if not m.is_eulerian():
        raise MapError("map is not Eulerian")
    return {v: m.degree(v) // 2 for v in range(m.num_vertices)}


def bipartite_outdegrees(m: CombMap, m_deg: int) -> dict:
    """Degree-md black vertices get d, white vertices get (m-1)d.

    For m-regular bipartite maps this is the 1-orientation prescription:
    black outdegree 1, white outdegree m-1.
    """
    if m.colors is None:
        raise MapError("map has no bipartition colors")
    out = {}
    for v in range(m.num_vertices):
        deg = m.degree(v)
        if deg % m_deg != 0:
            raise MapError(f"vertex degree {deg} not a multiple of {m_deg}")
        d = deg // m_deg
        out[v] = d if m.colors[v] == "b" else (m_deg - 1) * d
    return out


def all_alpha_orientations(m: CombMap, alpha_out: Mapping):
    """Brute-force: all orientations realizing the outdegrees (small maps)."""
    from itertools import product

    edges = m.edges()
    out = []
    for choice in product((0, 1), repeat=len(edges)):
        darts = frozenset(e[c] for e, c in zip(edges, choice))
        deg = {v: 0 for v in range(m.num_vertices)}
        for d in darts:
            deg[m.vertex_of(d)] += 1
        if all(deg[v] == alpha_out.get(v, 0) for v in deg):
            out.append(Orientation(darts))
    return out
