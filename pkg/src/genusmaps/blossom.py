"""Blossoming trees and the tree <-> map bijections.

A blossoming tree is a plane tree with a distinguished root leaf and two
kinds of leaves (opening/closing) in equal number.  Walking clockwise around
the tree from the root leaf (left-to-right reading of the children) gives the
leaf path; a closing leaf has i-height h when its down-step descends from h
on the walk started at height i.

Closing the tree against a forward matching of its leaves produces a rooted
map carrying its minimal orientation, with the node subtree as the canonical
spanning tree; opening a map runs the minimal-orientation machinery and cuts
the external edges.  Matching indices iota in [0..h-1] encode forward
matchings; extending closing leaves into branches of crossing-vertices turns
any closure into a planar one and counts crossings; extending the root leaf
into a branch turns i-balanced trees into marked matchings with
multiplicities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .cmap import CombMap, MapError, cycles_of, rooted_isomorphic
from .orient import (
    MinimalResult,
    Orientation,
    OrientationError,
    bipartite_outdegrees,
    canonical_marked_orientation,
    eulerian_outdegrees,
)


class TreeError(ValueError):
    """Invalid tree / matching data, or a map outside the family."""


@dataclass(frozen=True)
class OpenLeaf:
    pass


@dataclass(frozen=True)
class CloseLeaf:
    iota: Optional[int] = None


@dataclass(frozen=True)
class TNode:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise TreeError("a node needs at least one child")


Child = Union[TNode, OpenLeaf, CloseLeaf]


@dataclass(frozen=True)
class BlossomTree:
    """Root leaf (always opening, implicit) atop either a closing leaf
    (the nodeless tree) or the root node."""

    root: Union[TNode, CloseLeaf]

    def is_nodeless(self) -> bool:
        return isinstance(self.root, CloseLeaf)


@dataclass(frozen=True)
class MatchedPair:
    open_id: int
    close_id: int
    marked: bool = False
    mult: int = 1


@dataclass(frozen=True)
class ForwardMatching:
    """Perfect matching of opening-leaf ids with closing-leaf ids.

    Leaf ids are walk positions: the root leaf is 0, the other leaves are
    numbered in clockwise order from 1.  Unmarked pairs must be forward
    (opening before closing); marked pairs are exempt and carry a
    multiplicity.
    """

    pairs: tuple[MatchedPair, ...]

    def partner(self) -> dict:
        out = {}
        for p in self.pairs:
            out[p.open_id] = p
            out[p.close_id] = p
        return out

    def marked_count(self) -> int:
        return sum(1 for p in self.pairs if p.marked)


# ---------------------------------------------------------------------------
# Walks and leaf paths
# ---------------------------------------------------------------------------

def walk_leaves(t: BlossomTree) -> list:
    """Non-root leaves in clockwise order, as (leaf_id, leaf) with ids from 1."""
    out = []

    def go(sub):
        if isinstance(sub, TNode):
            for ch in sub.children:
                go(ch)
        else:
            out.append(sub)

    go(t.root)
    return [(i + 1, leaf) for i, leaf in enumerate(out)]


def leaf_counts(t: BlossomTree) -> tuple[int, int]:
    """(#opening, #closing) including the root leaf."""
    opens, closes = 1, 0
    for _i, leaf in walk_leaves(t):
        if isinstance(leaf, OpenLeaf):
            opens += 1
        else:
            closes += 1
    return opens, closes


@dataclass(frozen=True)
class LeafPath:
    start_height: int
    steps: tuple[int, ...]
    closing_iheights: tuple[tuple[int, int], ...]   # (leaf_id, i-height)
    balanced: bool


def leaf_path(t: BlossomTree, i: int = 1) -> LeafPath:
    """The up/down leaf walk started at height i, with closing i-heights.

    The tree is i-balanced when the path never leaves the nonnegative
    integers, i.e. every closing leaf has i-height >= 1.
    """
    if i < 1:
        raise TreeError("need i >= 1")
    h = i
    steps = []
    iheights = []
    balanced = True
    for leaf_id, leaf in walk_leaves(t):
        if isinstance(leaf, OpenLeaf):
            steps.append(1)
            h += 1
        else:
            iheights.append((leaf_id, h))
            if h < 1:
                balanced = False
            steps.append(-1)
            h -= 1
    return LeafPath(i, tuple(steps), tuple(iheights), balanced)


def node_degrees(t: BlossomTree) -> list[int]:
    out = []

    def go(sub):
        if isinstance(sub, TNode):
            out.append(len(sub.children) + 1)
            for ch in sub.children:
                go(ch)

    go(t.root)
    return out


def half_degree_sum(t: BlossomTree) -> int:
    return sum(d // 2 for d in node_degrees(t))


def tree_family(t: BlossomTree) -> str:
    """'eulerian' or 'bipartite'; raises if neither structure holds."""
    if t.is_nodeless():
        return "eulerian"
    if _check_eulerian(t):
        return "eulerian"
    m = _bipartite_degree(t)
    if m is not None:
        return "bipartite"
    raise TreeError("tree is neither an even-degree nor an m-bipartite tree")


def _check_eulerian(t: BlossomTree) -> bool:
    ok = True

    def go(sub):
        nonlocal ok
        if not isinstance(sub, TNode):
            return
        deg = len(sub.children) + 1
        opens = sum(1 for c in sub.children if isinstance(c, OpenLeaf))
        if deg % 2 != 0 or opens != deg // 2 - 1:
            ok = False
        for c in sub.children:
            go(c)

    go(t.root)
    return ok


def _bipartite_degree(t: BlossomTree) -> Optional[int]:
    """The common node degree m if the tree is m-bipartite, else None.

    White nodes sit at even depth (the root node is white) and carry m-2
    opening leaves plus exactly one node child; black nodes carry closing
    leaves or white-node children.
    """
    if t.is_nodeless():
        return None
    m = len(t.root.children) + 1
    ok = True

    def go(sub, white):
        nonlocal ok
        if not isinstance(sub, TNode):
            return
        if len(sub.children) + 1 != m:
            ok = False
            return
        if white:
            nodes = [c for c in sub.children if isinstance(c, TNode)]
            opens = [c for c in sub.children if isinstance(c, OpenLeaf)]
            if len(nodes) != 1 or len(opens) != m - 2:
                ok = False
        else:
            if any(isinstance(c, OpenLeaf) for c in sub.children):
                ok = False
        for c in sub.children:
            go(c, not white)

    go(t.root, True)
    return m if ok and m >= 2 else None


def root_node_child_is_rightmost_node(t: BlossomTree) -> bool:
    """For bipartite trees: the unique node child of the root node is the
    rightmost child (automatic for balanced trees, a real filter otherwise)."""
    if t.is_nodeless():
        return True
    return isinstance(t.root.children[-1], TNode)


# ---------------------------------------------------------------------------
# Matching index <-> forward matching
# ---------------------------------------------------------------------------

def indices_to_matching(t: BlossomTree) -> ForwardMatching:
    """Forward matching encoded by the matching indices.

    Processing closing leaves in clockwise order, a closing leaf of height h
    and index iota matches the (h-iota)-th of the h not-yet-matched opening
    leaves that precede it (so iota = 0 matches the nearest one).
    """
    available = [0]  # opening leaf ids in order of appearance, root first
    pairs = []
    for leaf_id, leaf in walk_leaves(t):
        if isinstance(leaf, OpenLeaf):
            available.append(leaf_id)
        else:
            h = len(available)
            if h == 0:
                raise TreeError("tree is not balanced: closing leaf at height 0")
            if leaf.iota is None:
                raise TreeError(f"closing leaf {leaf_id} has no matching index")
            if not 0 <= leaf.iota <= h - 1:
                raise TreeError(f"matching index {leaf.iota} outside [0..{h - 1}]")
            o = available.pop(h - 1 - leaf.iota)
            pairs.append(MatchedPair(o, leaf_id))
    if available:
        raise TreeError("unmatched opening leaves remain")
    return ForwardMatching(tuple(sorted(pairs, key=lambda p: p.open_id)))


def matching_to_indices(t: BlossomTree, f: ForwardMatching) -> BlossomTree:
    """Inverse of indices_to_matching: write the indices onto the tree."""
    if any(p.marked for p in f.pairs):
        raise TreeError("matching indices are only defined for unmarked matchings")
    partner = {}
    for p in f.pairs:
        partner[p.close_id] = p.open_id
    available = [0]
    iota_of = {}
    for leaf_id, leaf in walk_leaves(t):
        if isinstance(leaf, OpenLeaf):
            available.append(leaf_id)
        else:
            h = len(available)
            o = partner.get(leaf_id)
            if o is None or o not in available:
                raise TreeError(f"closing leaf {leaf_id} has no forward partner")
            pos = available.index(o) + 1
            iota_of[leaf_id] = h - pos
            available.remove(o)
    return _with_iotas(t, iota_of)


def _with_iotas(t: BlossomTree, iota_of: dict) -> BlossomTree:
    counter = [0]

    def go(sub):
        if isinstance(sub, TNode):
            return TNode(tuple(go(c) for c in sub.children))
        counter[0] += 1
        if isinstance(sub, CloseLeaf):
            return CloseLeaf(iota_of.get(counter[0], sub.iota))
        return sub

    return BlossomTree(go(t.root))


def strip_iotas(t: BlossomTree) -> BlossomTree:
    def go(sub):
        if isinstance(sub, TNode):
            return TNode(tuple(go(c) for c in sub.children))
        return CloseLeaf(None) if isinstance(sub, CloseLeaf) else sub

    return BlossomTree(go(t.root))


# ---------------------------------------------------------------------------
# Closure: tree + matching -> rooted map
# ---------------------------------------------------------------------------

def _assemble(t: BlossomTree, f: ForwardMatching):
    """Raw map data from a tree and a matching, keeping node identities.

    Returns (map, dart_of_leaf, node_of_vertex_id) where the map is not yet
    canonically relabeled; vertex ids are node ids in depth-first order.
    """
    nodes = []           # TNode objects in DFS (walk) order
    children_info = {}   # node id -> list of (kind, payload) for slots 1..deg-1

    def collect(sub):
        nid = len(nodes)
        nodes.append(sub)
        slots = []
        for ch in sub.children:
            if isinstance(ch, TNode):
                slots.append(("node", collect(ch)))
            elif isinstance(ch, OpenLeaf):
                slots.append(("open", None))
            else:
                slots.append(("close", None))
        children_info[nid] = slots
        return nid

    collect(t.root)

    offsets = []
    total = 0
    for nid, node in enumerate(nodes):
        offsets.append(total)
        total += len(node.children) + 1

    def dart(nid, slot):
        return offsets[nid] + slot + 1

    n = total
    sigma = [0] * (n + 1)
    alpha = [0] * (n + 1)
    for nid, node in enumerate(nodes):
        deg = len(node.children) + 1
        for s in range(deg):
            sigma[dart(nid, s)] = dart(nid, (s + 1) % deg)

    # internal edges and leaf darts, in walk order
    leaf_dart = {}
    next_leaf = [1]

    def wire(nid):
        for j, (kind, payload) in enumerate(children_info[nid]):
            d = dart(nid, j + 1)
            if kind == "node":
                alpha[d] = dart(payload, 0)
                alpha[dart(payload, 0)] = d
                wire(payload)
            else:
                leaf_dart[next_leaf[0]] = d
                next_leaf[0] += 1

    wire(0)
    leaf_dart[0] = dart(0, 0)  # the root leaf half-edge
    for p in f.pairs:
        a, b = leaf_dart[p.open_id], leaf_dart[p.close_id]
        alpha[a] = b
        alpha[b] = a
    if any(alpha[d] == 0 for d in range(1, n + 1)):
        raise TreeError("matching does not cover every leaf")
    colors = None
    if tree_family(t) == "bipartite":
        depth = [0] * len(nodes)

        def depths(nid):
            for kind, payload in children_info[nid]:
                if kind == "node":
                    depth[payload] = depth[nid] + 1
                    depths(payload)

        depths(0)
        colors = tuple("w" if depth[nid] % 2 == 0 else "b" for nid in range(len(nodes)))
    marks = [(leaf_dart[p.open_id], leaf_dart[p.close_id], p.mult)
             for p in f.pairs if p.marked]
    m = CombMap(n, sigma, alpha, dart(0, 0), colors=colors, marks=marks)
    # construction orientation: tree edges toward the root, external edges out
    # of the opening leaf
    out = set()
    for nid in range(1, len(nodes)):
        out.add(dart(nid, 0))
    for p in f.pairs:
        out.add(leaf_dart[p.open_id])
    internal = frozenset(m.edge_of(dart(nid, 0)) for nid in range(1, len(nodes)))
    return m, Orientation(frozenset(out)), internal, leaf_dart


def _family_outdegrees(m: CombMap, family: str):
    if family == "eulerian":
        return eulerian_outdegrees(m)
    return bipartite_outdegrees(m, m.degree(0))


def close(t: BlossomTree, f: ForwardMatching, verify: bool = True) -> CombMap:
    """Merge matched leaves into edges, orienting tree edges toward the root.

    The result is a rooted map of the tree's family, returned in canonical
    labeling.  With ``verify`` the construction re-derives the canonical
    orientation of the output and checks that it coincides with the built
    one and that the node subtree is the canonical spanning tree.
    """
    if t.is_nodeless():
        if f.pairs not in ((), (MatchedPair(0, 1),)):
            raise TreeError("nodeless tree admits only the root pairing")
        return CombMap.empty()
    _validate_matching(t, f)
    family = tree_family(t)
    m, orientation, internal, _ = _assemble(t, f)
    if verify:
        res = canonical_marked_orientation(m, _family_outdegrees(m, family))
        if res.orientation != orientation or res.tree != internal:
            raise AssertionError("closure does not carry the canonical orientation")
    return m.canonical()


def _validate_matching(t: BlossomTree, f: ForwardMatching):
    kinds = {0: "open"}
    for leaf_id, leaf in walk_leaves(t):
        kinds[leaf_id] = "open" if isinstance(leaf, OpenLeaf) else "close"
    seen = set()
    for p in f.pairs:
        if kinds.get(p.open_id) != "open" or kinds.get(p.close_id) != "close":
            raise TreeError(f"pair ({p.open_id},{p.close_id}) does not join an opening to a closing leaf")
        if p.open_id in seen or p.close_id in seen:
            raise TreeError("leaf matched twice")
        seen.update((p.open_id, p.close_id))
        if not p.marked and p.open_id > p.close_id:
            raise TreeError(f"unmarked pair ({p.open_id},{p.close_id}) is not forward")
        if p.mult < 1:
            raise TreeError("pair multiplicity must be >= 1")
        if not p.marked and p.mult != 1:
            raise TreeError("only marked pairs carry multiplicities")
    if len(seen) != len(kinds):
        raise TreeError("matching is not perfect")


# ---------------------------------------------------------------------------
# Opening: rooted map -> tree + matching
# ---------------------------------------------------------------------------

def open_map(m: CombMap, family: Optional[str] = None):
    """Cut the external edges of the canonical orientation's spanning tree.

    Returns (tree, matching); inverse of close().  Raises TreeError when the
    map is not in the family or (for marked maps) not admissible.
    """
    if m.is_empty():
        raise TreeError("the empty map opens to the nodeless tree; not supported here")
    if family is None:
        family = "bipartite" if m.colors is not None else "eulerian"
    if family == "bipartite":
        m_deg = m.degree(0)
        if not m.is_bipartite_regular(m_deg):
            raise TreeError("map is not m-regular bipartite with a white root")
    elif not m.is_eulerian():
        raise TreeError("map is not Eulerian")
    try:
        res = canonical_marked_orientation(m, _family_outdegrees(m, family))
    except OrientationError as exc:
        raise TreeError(f"marked map is not admissible: {exc}") from exc
    if not res.orientation.is_outgoing(m.root):
        raise TreeError("marked map is not admissible: root half-edge not outgoing")
    if family == "bipartite":
        root_v = m.root_vertex()
        ingoing = [d for d in m.vertices[root_v] if not res.orientation.is_outgoing(d)]
        prev = m.root
        for _ in range(m.degree(root_v) - 1):
            prev = m.sigma[prev]
        if ingoing != [prev]:
            raise TreeError("marked map is not admissible: ingoing root edge misplaced")
        if any(m.edge_of(prev) == m.edge_of(o) for (o, _i, _mu) in m.marks):
            raise TreeError("marked map is not admissible: ingoing root edge marked")
    if m.edge_of(m.root) in res.tree:
        raise TreeError("root edge unexpectedly internal")

    leaf_id_of_dart = {}
    counter = [0]

    def grow(vertex, parent_dart):
        children = []
        d = m.sigma[parent_dart]
        while d != parent_dart:
            if m.edge_of(d) in res.tree:
                children.append(grow(m.vertex_of(m.alpha[d]), m.alpha[d]))
            else:
                counter[0] += 1
                leaf_id_of_dart[d] = counter[0]
                if res.orientation.is_outgoing(d):
                    children.append(OpenLeaf())
                else:
                    children.append(CloseLeaf(None))
            d = m.sigma[d]
        return TNode(tuple(children))

    root_node = grow(m.root_vertex(), m.root)
    leaf_id_of_dart[m.root] = 0
    mark_of = {m.edge_of(o): (o, mu) for (o, _i, mu) in m.marks}
    pairs = []
    for (a, b) in m.edges():
        if (a, b) in res.tree:
            continue
        out_d = a if res.orientation.is_outgoing(a) else b
        in_d = m.alpha[out_d]
        mark = mark_of.get((a, b))
        pairs.append(MatchedPair(leaf_id_of_dart[out_d], leaf_id_of_dart[in_d],
                                 marked=mark is not None,
                                 mult=mark[1] if mark else 1))
    tree = BlossomTree(root_node)
    matching = ForwardMatching(tuple(sorted(pairs, key=lambda p: p.open_id)))
    _validate_matching(tree, matching)
    return tree, matching


# ---------------------------------------------------------------------------
# Planar closure with crossing-vertices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarResult:
    planar_map: CombMap
    crossings: int
    reduced_map: CombMap


def _extend_leaf(leaf: CloseLeaf) -> Child:
    """Branch of length iota+1: each crossing node carries a closing leaf on
    the side walked first and an opening leaf on the side walked last."""
    if leaf.iota is None:
        raise TreeError("leaf extension needs matching indices")
    sub: Child = CloseLeaf(0)
    for _ in range(leaf.iota):
        sub = TNode((CloseLeaf(0), sub, OpenLeaf()))
    return sub


def planar_close(t: BlossomTree) -> PlanarResult:
    """Close the leaf-extended tree: a planar map with one crossing-vertex
    per unit of matching index, which contracts to the direct closure."""
    if t.is_nodeless():
        raise TreeError("nodeless tree has no planar closure")
    if tree_family(t) != "eulerian":
        raise TreeError("planar closure implemented for even-degree trees")
    crossing_paths = []

    def extend(sub, path):
        if isinstance(sub, TNode):
            return TNode(tuple(extend(c, path + (j,)) for j, c in enumerate(sub.children)))
        if isinstance(sub, OpenLeaf):
            return sub
        branch = _extend_leaf(sub)
        # record the node paths of the iota crossing nodes along the branch
        p = path
        b = branch
        while isinstance(b, TNode):
            crossing_paths.append(p)
            p = p + (1,)
            b = b.children[1]
        return branch

    extended = BlossomTree(extend(t.root, ()))
    crossings = sum(leaf.iota for _i, leaf in walk_leaves(t) if isinstance(leaf, CloseLeaf))
    f_ext = indices_to_matching(extended)
    raw, orientation, internal, _ = _assemble(extended, f_ext)
    res = canonical_marked_orientation(raw, eulerian_outdegrees(raw))
    if res.orientation != orientation or res.tree != internal:
        raise AssertionError("planar closure does not carry the canonical orientation")
    if raw.genus != 0:
        raise AssertionError("leaf-extended closure is not planar")
    # vertex ids are node ids in DFS order; locate the crossing vertices
    node_paths = []

    def paths(sub, path):
        if isinstance(sub, TNode):
            node_paths.append(path)
            for j, c in enumerate(sub.children):
                paths(c, path + (j,))

    paths(extended.root, ())
    crossing_vertices = {node_paths.index(p) for p in crossing_paths}
    reduced = _dissolve_crossings(raw, crossing_vertices)
    direct = close(t, indices_to_matching(t))
    if not rooted_isomorphic(reduced, direct):
        raise AssertionError("crossing reduction does not match the direct closure")
    return PlanarResult(raw.canonical(), crossings, direct)


def _dissolve_crossings(m: CombMap, crossing_vertices) -> CombMap:
    """Replace each degree-4 crossing vertex by the two strands through it."""
    alpha = list(m.alpha)
    dead = set()
    for v in crossing_vertices:
        cyc = m.vertices[v]
        if len(cyc) != 4:
            raise AssertionError("crossing vertex of degree != 4")
        for d1, d2 in ((cyc[0], cyc[2]), (cyc[1], cyc[3])):
            x, y = alpha[d1], alpha[d2]
            if x in (d1, d2) or y in (d1, d2):
                raise AssertionError("degenerate strand at a crossing vertex")
            alpha[x], alpha[y] = y, x
        dead.update(cyc)
    keep = [d for d in range(1, m.n_darts + 1) if d not in dead]
    relabel = {d: i + 1 for i, d in enumerate(keep)}
    n = len(keep)
    sigma2 = [0] * (n + 1)
    alpha2 = [0] * (n + 1)
    for d in keep:
        nxt = m.sigma[d]
        while nxt in dead:
            nxt = m.sigma[nxt]
        sigma2[relabel[d]] = relabel[nxt]
        alpha2[relabel[d]] = relabel[alpha[d]]
    return CombMap(n, sigma2, alpha2, relabel[m.root])


# ---------------------------------------------------------------------------
# i-enrichment <-> marked matchings with multiplicities
# ---------------------------------------------------------------------------

def i_enrich_to_marked(t: BlossomTree, i: int) -> ForwardMatching:
    """Marked matching (with multiplicities summing to < i) encoded by an
    i-balanced tree with all matching indices set.

    The root leaf is virtually extended into a branch with i-1 artificial
    opening/closing pairs; matching the real closing leaves by their indices
    and pairing off the artificial leaves that got consumed produces marked
    pairs whose multiplicities record the gaps between consumed positions.
    The underlying tree is unchanged: only the matching is returned.
    """
    if i < 1:
        raise TreeError("need i >= 1")
    if t.is_nodeless():
        raise TreeError("the nodeless tree encodes the constant term, not a marked map")
    path = leaf_path(t, i)
    if not path.balanced:
        raise TreeError(f"tree is not {i}-balanced")
    # available openings in appearance order: root leaf, i-1 artificial
    # openings (positions 1..i-1 top-down), then real openings as walked
    available: list = [("real", 0)] + [("art", p) for p in range(1, i)]
    art_partner = {}
    real_pairs = []
    iheight = dict(path.closing_iheights)
    for leaf_id, leaf in walk_leaves(t):
        if isinstance(leaf, OpenLeaf):
            available.append(("real", leaf_id))
        else:
            h = len(available)
            if h != iheight[leaf_id]:
                raise AssertionError("height bookkeeping out of sync")
            if leaf.iota is None or not 0 <= leaf.iota <= h - 1:
                raise TreeError(f"closing leaf {leaf_id} needs an index in [0..{h - 1}]")
            kind, payload = available.pop(h - 1 - leaf.iota)
            if kind == "art":
                art_partner[payload] = leaf_id
            else:
                real_pairs.append(MatchedPair(payload, leaf_id))
    positions = sorted(art_partner)            # 0 < i_1 < ... < i_r < i
    r = len(positions)
    unmatched_real = [payload for kind, payload in available if kind == "real"]
    if len(unmatched_real) != r:
        raise AssertionError("artificial/real unmatched counts disagree")
    marked = []
    for idx, p in enumerate(positions):
        nxt = positions[idx + 1] if idx + 1 < r else i
        o_j = unmatched_real[r - 1 - idx]      # first unmatched opening is o_r
        marked.append(MatchedPair(o_j, art_partner[p], marked=True, mult=nxt - p))
    total = sum(p.mult for p in marked)
    if marked and total >= i:
        raise AssertionError("marked multiplicities must sum to less than i")
    pairs = tuple(sorted(real_pairs + marked, key=lambda p: p.open_id))
    return ForwardMatching(pairs)


def marked_to_i_enriched(t: BlossomTree, f: ForwardMatching, i: int) -> BlossomTree:
    """Inverse of i_enrich_to_marked: reconstruct the matching indices."""
    if t.is_nodeless():
        raise TreeError("the nodeless tree encodes the constant term, not a marked map")
    marked = [p for p in f.pairs if p.marked]
    total = sum(p.mult for p in marked)
    if total >= i:
        raise TreeError(f"multiplicities sum to {total}, need < i = {i}")
    # openings of marked pairs in order of appearance are o_r, ..., o_1
    marked.sort(key=lambda p: p.open_id)
    r = len(marked)
    suffix = 0
    positions = [0] * r
    for j in range(1, r + 1):                 # j as in o_j: last appearing is o_1
        suffix += marked[r - j].mult
        positions[r - j] = i - suffix         # i_j = i - sum_{l>=j} mult_l
    if r and positions[0] < 1:
        raise TreeError("multiplicities exceed the branch length")
    art_close_partner = {positions[idx]: marked[idx].open_id for idx in range(r)}
    art_open_partner = {positions[idx]: marked[idx].close_id for idx in range(r)}
    partner = {}
    for p in f.pairs:
        if not p.marked:
            partner[p.close_id] = ("real", p.open_id)
    for pos, close_id in art_open_partner.items():
        partner[close_id] = ("art", pos)
    available: list = [("real", 0)] + [("art", p) for p in range(1, i)]
    iota_of = {}
    for leaf_id, leaf in walk_leaves(t):
        if isinstance(leaf, OpenLeaf):
            available.append(("real", leaf_id))
        else:
            h = len(available)
            if leaf_id not in partner:
                raise TreeError(f"closing leaf {leaf_id} unmatched")
            key = partner[leaf_id]
            if key not in available:
                raise TreeError(f"partner of closing leaf {leaf_id} not available forward")
            pos = available.index(key) + 1
            iota_of[leaf_id] = h - pos
            available.remove(key)
    # the real openings left over must be exactly the marked ones
    leftovers = sorted(payload for kind, payload in available if kind == "real")
    if leftovers != sorted(p.open_id for p in marked):
        raise TreeError("marked openings inconsistent with the walk")
    enriched = _with_iotas(t, iota_of)
    if not leaf_path(enriched, i).balanced:
        raise TreeError(f"reconstructed tree is not {i}-balanced")
    return enriched


# ---------------------------------------------------------------------------
# Exhaustive tree generation (desk-scale counting oracles)
# ---------------------------------------------------------------------------

def eulerian_tree_structures(max_half_degree_sum: int, include_nodeless: bool = True):
    """All Eulerian trees (without indices) with half-degree sum <= the bound."""

    def subtrees(budget):
        yield CloseLeaf(None), 0
        for sub, used in rooted(budget):
            yield sub, used

    def rooted(budget):
        for k in range(1, budget + 1):
            deg = 2 * k
            for open_slots in itertools.combinations(range(deg - 1), k - 1):
                down = [j for j in range(deg - 1) if j not in open_slots]
                for filled, used in fill(down, budget - k):
                    children: list = [OpenLeaf()] * (deg - 1)
                    for j, sub in zip(down, filled):
                        children[j] = sub
                    yield TNode(tuple(children)), k + used

    def fill(slots, budget):
        if not slots:
            yield [], 0
            return
        for sub, used in subtrees(budget):
            for rest, used2 in fill(slots[1:], budget - used):
                yield [sub] + rest, used + used2

    if include_nodeless:
        yield BlossomTree(CloseLeaf(None))
    for sub, _used in rooted(max_half_degree_sum):
        yield BlossomTree(sub)


def bipartite_tree_structures(m: int, max_black: int, include_nodeless: bool = True):
    """All m-bipartite trees (without indices) with at most max_black black nodes.

    White nodes carry one black-node child (in any of the m-1 positions) and
    m-2 opening leaves; black nodes carry m-1 children, each a closing leaf
    or a white-node subtree.  The budget counts black nodes.
    """

    def black_rooted(budget):
        if budget < 1:
            return
        for filled, used in fill(m - 1, budget - 1):
            yield TNode(tuple(filled)), used + 1

    def fill(count, budget):
        if count == 0:
            yield [], 0
            return
        for sub, used in black_child_options(budget):
            for rest, used2 in fill(count - 1, budget - used):
                yield [sub] + rest, used + used2

    def black_child_options(budget):
        yield CloseLeaf(None), 0
        for sub, used in white_rooted(budget):
            yield sub, used

    def white_rooted(budget):
        for pos in range(m - 1):
            for black, used in black_rooted(budget):
                children: list = [OpenLeaf()] * (m - 1)
                children[pos] = black
                yield TNode(tuple(children)), used

    if include_nodeless:
        yield BlossomTree(CloseLeaf(None))
    for sub, _used in white_rooted(max_black):
        yield BlossomTree(sub)


def enriched_variants(t: BlossomTree, i: int):
    """All index assignments making t an i-enriched tree (empty if unbalanced)."""
    path = leaf_path(t, i)
    if not path.balanced:
        return
    ids = [leaf_id for leaf_id, h in path.closing_iheights]
    ranges = [range(h) for _leaf_id, h in path.closing_iheights]
    for combo in itertools.product(*ranges):
        yield _with_iotas(t, dict(zip(ids, combo)))


def degree_profile_of_tree(t: BlossomTree) -> tuple[int, ...]:
    return tuple(sorted(node_degrees(t), reverse=True))


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def tree_to_text(t: BlossomTree) -> str:
    def go(sub):
        if isinstance(sub, TNode):
            return "(" + "".join(go(c) for c in sub.children) + ")"
        if isinstance(sub, OpenLeaf):
            return "o"
        return "c" if sub.iota is None else f"c[{sub.iota}]"

    return go(t.root)


def tree_from_text(text: str) -> BlossomTree:
    pos = [0]

    def parse():
        if pos[0] >= len(text):
            raise TreeError("unexpected end of tree text")
        ch = text[pos[0]]
        if ch == "o":
            pos[0] += 1
            return OpenLeaf()
        if ch == "c":
            pos[0] += 1
            if pos[0] < len(text) and text[pos[0]] == "[":
                end = text.index("]", pos[0])
                iota = int(text[pos[0] + 1:end])
                pos[0] = end + 1
                return CloseLeaf(iota)
            return CloseLeaf(None)
        if ch == "(":
            pos[0] += 1
            children = []
            while pos[0] < len(text) and text[pos[0]] != ")":
                children.append(parse())
            if pos[0] >= len(text):
                raise TreeError("unbalanced parentheses in tree text")
            pos[0] += 1
            return TNode(tuple(children))
        raise TreeError(f"unexpected character {ch!r} in tree text")

    root = parse()
    if pos[0] != len(text):
        raise TreeError("trailing characters in tree text")
    return BlossomTree(root)


def matching_to_text(f: ForwardMatching) -> str:
    parts = []
    for p in sorted(f.pairs, key=lambda q: q.open_id):
        s = f"{p.open_id}:{p.close_id}"
        if p.marked:
            s += f"*x{p.mult}"
        parts.append(s)
    return " ".join(parts)


def matching_from_text(text: str) -> ForwardMatching:
    pairs = []
    for token in text.split():
        marked = "*" in token
        if marked:
            body, mult_s = token.split("*x")
            mult = int(mult_s)
        else:
            body, mult = token, 1
        o, c = body.split(":")
        pairs.append(MatchedPair(int(o), int(c), marked=marked, mult=mult))
    return ForwardMatching(tuple(pairs))
