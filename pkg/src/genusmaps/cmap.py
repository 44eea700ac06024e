"""Rooted combinatorial maps as permutation pairs on darts.

A map is a pair (sigma, alpha) of permutations on the dart set {1..n}:
sigma is the clockwise next-dart rotation around each vertex, alpha the
fixed-point-free involution pairing the two darts of each edge, and the
root is a distinguished dart (equivalently, the corner preceding it).
Vertices are the cycles of sigma, faces the cycles of sigma○alpha, and the
genus follows from V - E + F = 2 - 2h.

Maps are immutable after construction.  Optional per-vertex colors support
the bipartite families and optional directed edge marks with multiplicities
support the marked-map families.  The one-vertex zero-edge map is allowed as
an explicit sentinel (the constant term of the counting series).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class MapError(ValueError):
    """Invalid map data (bad permutations, disconnected, bad marks...)."""


Mark = tuple[int, int, int]  # (outgoing dart, ingoing dart, multiplicity)


def cycles_of(perm: Sequence[int], n: int) -> list[tuple[int, ...]]:
    """Cycles of a permutation on 1..n given as perm[d] (index 0 unused),
    each cycle rotated to start at its smallest dart, sorted by that dart."""
    seen = [False] * (n + 1)
    out = []
    for d in range(1, n + 1):
        if seen[d]:
            continue
        cyc = []
        x = d
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


class CombMap:
    __slots__ = ("n_darts", "sigma", "alpha", "root", "colors", "marks",
                 "_vertices", "_vertex_of", "_faces")

    def __init__(self, n_darts: int, sigma: Sequence[int], alpha: Sequence[int],
                 root: int, colors: Optional[Sequence[str]] = None,
                 marks: Iterable[Mark] = (), check: bool = True):
        sigma = tuple(sigma)
        alpha = tuple(alpha)
        marks = frozenset(tuple(m) for m in marks)
        if n_darts == 0:
            # the empty-map sentinel: one vertex, no edges
            object.__setattr__(self, "n_darts", 0)
            object.__setattr__(self, "sigma", (0,))
            object.__setattr__(self, "alpha", (0,))
            object.__setattr__(self, "root", 0)
            object.__setattr__(self, "colors", tuple(colors) if colors else None)
            object.__setattr__(self, "marks", frozenset())
            object.__setattr__(self, "_vertices", ((),))
            object.__setattr__(self, "_vertex_of", (0,))
            object.__setattr__(self, "_faces", ((),))
            return
        if check:
            self._validate(n_darts, sigma, alpha, root, colors, marks)
        object.__setattr__(self, "n_darts", n_darts)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "marks", marks)
        verts = tuple(cycles_of(sigma, n_darts))
        vof = [0] * (n_darts + 1)
        for vi, cyc in enumerate(verts):
            for d in cyc:
                vof[d] = vi
        object.__setattr__(self, "_vertices", verts)
        object.__setattr__(self, "_vertex_of", tuple(vof))
        phi = [0] * (n_darts + 1)
        for d in range(1, n_darts + 1):
            phi[d] = sigma[alpha[d]]
        object.__setattr__(self, "_faces", tuple(cycles_of(phi, n_darts)))
        if colors is not None:
            colors = tuple(colors)
            if len(colors) != len(verts):
                raise MapError(f"need {len(verts)} vertex colors, got {len(colors)}")
            if any(c not in ("w", "b") for c in colors):
                raise MapError("colors must be 'w' or 'b'")
        object.__setattr__(self, "colors", colors)
        if check:
            g = self.genus
            if g < 0:
                raise MapError("negative genus: Euler relation violated")

    @staticmethod
    def _validate(n, sigma, alpha, root, colors, marks):
        if n % 2 != 0 or n < 2:
            raise MapError("n_darts must be even and positive")
        for name, perm in (("sigma", sigma), ("alpha", alpha)):
            if len(perm) != n + 1 or sorted(perm[1:]) != list(range(1, n + 1)):
                raise MapError(f"{name} is not a permutation of 1..{n}")
        for d in range(1, n + 1):
            if alpha[d] == d:
                raise MapError(f"alpha has a fixed point at dart {d}")
            if alpha[alpha[d]] != d:
                raise MapError("alpha is not an involution")
        if not 1 <= root <= n:
            raise MapError(f"root dart {root} out of range")
        # connectivity: orbit of the group generated by sigma and alpha
        seen = {1}
        stack = [1]
        while stack:
            d = stack.pop()
            for e in (sigma[d], alpha[d]):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        if len(seen) != n:
            raise MapError("map is not connected")
        marked_edges = set()
        for out_d, in_d, mult in marks:
            if not 1 <= out_d <= n or alpha[out_d] != in_d:
                raise MapError(f"mark ({out_d},{in_d}) is not an edge")
            if mult < 1:
                raise MapError("mark multiplicity must be >= 1")
            e = (min(out_d, in_d), max(out_d, in_d))
            if e in marked_edges:
                raise MapError(f"edge {e} marked twice")
            marked_edges.add(e)

    def __setattr__(self, *a):
        raise AttributeError("CombMap is immutable")

    # -- basic counts ---------------------------------------------------

    @staticmethod
    def empty() -> "CombMap":
        return CombMap(0, (0,), (0,), 0)

    def is_empty(self) -> bool:
        return self.n_darts == 0

    @property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        return self._vertices

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        return self._faces

    def vertex_of(self, dart: int) -> int:
        return self._vertex_of[dart]

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return self.n_darts // 2

    @property
    def num_faces(self) -> int:
        return len(self._faces)

    @property
    def genus(self) -> int:
        two_h = 2 - (self.num_vertices - self.num_edges + self.num_faces)
        if two_h % 2 != 0:
            raise MapError("odd Euler defect")
        return two_h // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (d, alpha(d)) pairs with d < alpha(d)."""
        return [(d, self.alpha[d]) for d in range(1, self.n_darts + 1) if d < self.alpha[d]]

    def edge_of(self, dart: int) -> tuple[int, int]:
        a = self.alpha[dart]
        return (dart, a) if dart < a else (a, dart)

    def degree(self, vertex: int) -> int:
        return len(self._vertices[vertex])

    def degree_profile(self) -> tuple[int, ...]:
        """Vertex degrees as a descending-sorted tuple (a multiset)."""
        return tuple(sorted((len(c) for c in self._vertices), reverse=True))

    def is_eulerian(self) -> bool:
        return all(len(c) % 2 == 0 for c in self._vertices)

    def is_bipartite_regular(self, m: int) -> bool:
        """All degrees m, proper 2-coloring present, root vertex white."""
        if self.is_empty():
            return False
        if self.colors is None:
            return False
        if any(len(c) != m for c in self._vertices):
            return False
        for d in range(1, self.n_darts + 1):
            if self.colors[self.vertex_of(d)] == self.colors[self.vertex_of(self.alpha[d])]:
                return False
        return self.colors[self.vertex_of(self.root)] == "w"

    def root_vertex(self) -> int:
        return self.vertex_of(self.root)

    # -- canonical form ---------------------------------------------------

    def relabeling_from_root(self) -> list[int]:
        """Breadth-first new label for each dart, exploring sigma then alpha.

        The root dart gets label 1; rooted maps are rigid, so this labeling
        is a complete isomorphism invariant.
        """
        new = [0] * (self.n_darts + 1)
        new[self.root] = 1
        nxt = 2
        queue = [self.root]
        qi = 0
        while qi < len(queue):
            d = queue[qi]
            qi += 1
            for e in (self.sigma[d], self.alpha[d]):
                if new[e] == 0:
                    new[e] = nxt
                    nxt += 1
                    queue.append(e)
        return new

    def relabel(self, new: Sequence[int], root: Optional[int] = None) -> "CombMap":
        """Apply a dart relabeling d -> new[d] (a bijection on 1..n)."""
        n = self.n_darts
        sigma = [0] * (n + 1)
        alpha = [0] * (n + 1)
        for d in range(1, n + 1):
            sigma[new[d]] = new[self.sigma[d]]
            alpha[new[d]] = new[self.alpha[d]]
        marks = {(new[o], new[i], mu) for o, i, mu in self.marks}
        colors = None
        if self.colors is not None:
            # vertex order changes with the relabeling; colors follow darts
            old_of_new = [0] * (n + 1)
            for d in range(1, n + 1):
                old_of_new[new[d]] = d
            tmp = CombMap(n, sigma, alpha, new[self.root if root is None else root],
                          colors=None, marks=marks, check=False)
            colors = tuple(self.colors[self.vertex_of(old_of_new[cyc[0]])]
                           for cyc in tmp.vertices)
        return CombMap(n, sigma, alpha, new[self.root if root is None else root],
                       colors=colors, marks=marks)

    def canonical(self) -> "CombMap":
        if self.is_empty():
            return self
        return self.relabel(self.relabeling_from_root())

    def key(self):
        return (self.n_darts, self.sigma, self.alpha, self.root, self.colors,
                tuple(sorted(self.marks)))

    def __eq__(self, other):
        return isinstance(other, CombMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CombMap({to_text(self)!r})"


def rooted_isomorphic(a: CombMap, b: CombMap) -> bool:
    """Dart relabeling carrying (sigma, alpha, root, colors, marks) of a to b."""
    if a.is_empty() or b.is_empty():
        return a.is_empty() and b.is_empty()
    return a.canonical().key() == b.canonical().key()


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------
# One map per line:
#   n_darts; sigma as cycles; alpha as pairs; root[; colors=wb...][; marks=(o,i,m)...]
# emitted canonically (cycles from their minimal dart, sorted; marks sorted)
# and parsed back bit-exactly.

def _cycles_text(cycles) -> str:
    return "".join("(" + " ".join(str(d) for d in c) + ")" for c in cycles)


def to_text(m: CombMap) -> str:
    if m.is_empty():
        return "0; ; ; 0"
    parts = [
        str(m.n_darts),
        _cycles_text(m.vertices),
        _cycles_text(m.edges()),
        str(m.root),
    ]
    if m.colors is not None:
        parts.append("colors=" + "".join(m.colors))
    if m.marks:
        parts.append("marks=" + "".join(f"({o},{i},{mu})" for o, i, mu in sorted(m.marks)))
    return "; ".join(parts)


def _parse_cycles(text: str) -> list[list[int]]:
    text = text.strip()
    if not text:
        return []
    if not (text.startswith("(") and text.endswith(")")):
        raise MapError(f"bad cycle list {text!r}")
    out = []
    for chunk in text[1:-1].split(")("):
        out.append([int(tok) for tok in chunk.split()])
    return out


def from_text(line: str) -> CombMap:
    fields = [f.strip() for f in line.strip().split(";")]
    if len(fields) < 4:
        raise MapError(f"need at least 4 fields, got {len(fields)}")
    n = int(fields[0])
    if n == 0:
        return CombMap.empty()
    sigma = [0] * (n + 1)
    for cyc in _parse_cycles(fields[1]):
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            sigma[a] = b
    alpha = [0] * (n + 1)
    for pair in _parse_cycles(fields[2]):
        if len(pair) != 2:
            raise MapError(f"alpha entry {pair} is not a pair")
        alpha[pair[0]], alpha[pair[1]] = pair[1], pair[0]
    root = int(fields[3])
    colors = None
    marks = []
    for extra in fields[4:]:
        if extra.startswith("colors="):
            colors = tuple(extra[len("colors="):])
        elif extra.startswith("marks="):
            body = extra[len("marks="):]
            for chunk in body.replace(")(", ")|(").split("|"):
                o, i, mu = (int(x) for x in chunk.strip("()").split(","))
                marks.append((o, i, mu))
        elif extra:
            raise MapError(f"unknown field {extra!r}")
    return CombMap(n, sigma, alpha, root, colors=colors, marks=marks)
