"""The Diestel-Leader graph DL(n,n) as the Cayley graph of the lamplighter group.

Vertices are (configuration, cursor) pairs; edges are right multiplication
by the 2n generators "move up, optionally writing at the cursor" and
"move down, optionally writing below the cursor".  Distance comes in two
independent flavors: a closed form via tree confluence heights, and a
breadth-first-search oracle over `neighbors`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_groups import LampConfig, lamp_neg
from .errors import DomainError


@dataclass(frozen=True)
class DLVertex:
    """Vertex of DL(n,n): a lamp configuration plus the lamplighter position."""

    config: LampConfig
    cursor: int

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def height(self) -> int:
        return self.cursor


def identity_vertex(n: int) -> DLVertex:
    return DLVertex(LampConfig.zero(n), 0)


@dataclass(frozen=True)
class TreeCoord:
    """Projection of a vertex to one tree factor of the horocyclic product.

    The left tree sees the configuration germ below the cursor at height k;
    the right tree sees the germ at indices >= k, at height -k.
    """

    side: str  # "left" | "right"
    germ: LampConfig
    height: int

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise DomainError(f"side must be 'left' or 'right', got {self.side!r}")


def tree_coords(v: DLVertex) -> tuple[TreeCoord, TreeCoord]:
    k = v.cursor
    left = LampConfig(v.n, tuple((i, x) for i, x in v.config.entries if i < k))
    right = LampConfig(v.n, tuple((i, x) for i, x in v.config.entries if i >= k))
    return (TreeCoord("left", left, k), TreeCoord("right", right, -k))


# ---------------------------------------------------------------------------
# group structure (left multiplication is a graph isometry)
# ---------------------------------------------------------------------------

def _shift_entries(cfg: LampConfig, offset: int) -> LampConfig:
    return LampConfig(cfg.n, tuple((i + offset, x) for i, x in cfg.entries))


def dl_mul(g: DLVertex, h: DLVertex) -> DLVertex:
    """Group law ((x), k) * ((y), l) = ((x_i + y_{i-k}), k + l)."""
    if g.n != h.n:
        raise DomainError(f"modulus mismatch: {g.n} != {h.n}")
    return DLVertex(g.config + _shift_entries(h.config, g.cursor), g.cursor + h.cursor)


def dl_inv(g: DLVertex) -> DLVertex:
    return DLVertex(_shift_entries(lamp_neg(g.config), -g.cursor), -g.cursor)


# ---------------------------------------------------------------------------
# adjacency and balls
# ---------------------------------------------------------------------------

def neighbors(v: DLVertex) -> set[DLVertex]:
    """The 2n vertices reachable by one generator.

    Up-moves write s at the cursor index and step to k+1; down-moves write s
    at index k-1 and step to k-1 (s ranges over Z_n, s = 0 writes nothing).
    """
    n = v.n
    k = v.cursor
    out: set[DLVertex] = set()
    for s in range(n):
        up = v.config if s == 0 else v.config + LampConfig(n, ((k, s),))
        down = v.config if s == 0 else v.config + LampConfig(n, ((k - 1, s),))
        out.add(DLVertex(up, k + 1))
        out.add(DLVertex(down, k - 1))
    return out


def ball(center: DLVertex, radius: int) -> set[DLVertex]:
    """All vertices at graph distance <= radius from center, by BFS."""
    if radius < 0:
        raise DomainError("radius must be >= 0")
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def bfs_distance(u: DLVertex, v: DLVertex, radius_cap: int) -> int | None:
    """Exact graph distance if <= radius_cap, else None; pure BFS over neighbors."""
    if radius_cap < 0:
        raise DomainError("radius_cap must be >= 0")
    if u.n != v.n:
        raise DomainError(f"modulus mismatch: {u.n} != {v.n}")
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    for dist in range(1, radius_cap + 1):
        nxt = []
        for w in frontier:
            for x in neighbors(w):
                if x == v:
                    return dist
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return None


def distances_from(source: DLVertex, radius_cap: int) -> dict[DLVertex, int]:
    """BFS distance table for every vertex within radius_cap of source."""
    table = {source: 0}
    frontier = [source]
    for dist in range(1, radius_cap + 1):
        nxt = []
        for w in frontier:
            for x in neighbors(w):
                if x not in table:
                    table[x] = dist
                    nxt.append(x)
        frontier = nxt
    return table


# ---------------------------------------------------------------------------
# closed-form distance
# ---------------------------------------------------------------------------

def dl_distance(u: DLVertex, v: DLVertex) -> int:
    """Graph distance via the tree-distance formula of the horocyclic product.

    Left-tree confluence c = min(k_u, k_v, first disagreement index); right-tree
    confluence c' = max(k_u, k_v, last disagreement index + 1); the result is
    d_left + d_right - |k_u - k_v|.  Correctness is pinned to the BFS oracle
    by the acceptance suite rather than rederived here.
    """
    if u.n != v.n:
        raise DomainError(f"modulus mismatch: {u.n} != {v.n}")
    ku, kv = u.cursor, v.cursor
    ap, aq = u.config.entries, v.config.entries
    lo = hi = None
    i = j = 0
    while i < len(ap) or j < len(aq):
        if j >= len(aq) or (i < len(ap) and ap[i][0] < aq[j][0]):
            idx = ap[i][0]
            i += 1
        elif i >= len(ap) or aq[j][0] < ap[i][0]:
            idx = aq[j][0]
            j += 1
        else:
            idx = ap[i][0] if ap[i][1] != aq[j][1] else None
            i += 1
            j += 1
        if idx is not None:
            if lo is None:
                lo = idx
            hi = idx
    c = min(ku, kv) if lo is None else min(ku, kv, lo)
    cp = max(ku, kv) if hi is None else max(ku, kv, hi + 1)
    d_left = (ku - c) + (kv - c)
    d_right = (cp - ku) + (cp - kv)
    return d_left + d_right - abs(ku - kv)


def coset_of(v: DLVertex) -> LampConfig:
    """The vertical geodesic through v, identified by its configuration."""
    return v.config


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

_PALETTE = (
    "lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon",
    "paleturquoise", "wheat", "lightgray", "thistle", "darkseagreen", "lightcyan",
)


def _node_id(v: DLVertex) -> str:
    from .formats import format_vertex
    return format_vertex(v)


def export_dot(
    vertices: set[DLVertex] | list[DLVertex],
    edges: set[tuple[DLVertex, DLVertex]] | list[tuple[DLVertex, DLVertex]],
    annotations: dict[DLVertex, str] | None = None,
    coset_colors: bool = False,
    name: str = "dl",
) -> str:
    """Render a vertex/edge set as a deterministic undirected DOT graph.

    Node ids are "<config>|<k>"; with coset_colors, vertices on the same
    vertical geodesic share a fill color.
    """
    vset = set(vertices)
    for a, b in edges:
        if a not in vset or b not in vset:
            raise DomainError(f"edge endpoint {_node_id(a if a not in vset else b)} not in vertex set")
    order = sorted(vset, key=lambda v: (v.cursor, v.config.entries))
    color_for: dict[tuple, str] = {}
    if coset_colors:
        for cfg in sorted({v.config.entries for v in order}):
            color_for[cfg] = _PALETTE[len(color_for) % len(_PALETTE)]
    lines = [f"graph {name} {{"]
    for v in order:
        nid = _node_id(v)
        attrs = [f'label="{nid}"']
        if coset_colors:
            attrs.append(f'fillcolor="{color_for[v.config.entries]}"')
            attrs.append('style="filled"')
        if annotations and v in annotations:
            attrs.append(f'xlabel="{annotations[v]}"')
        lines.append(f'  "{nid}" [{", ".join(attrs)}];')
    canon = sorted(
        {tuple(sorted((_node_id(a), _node_id(b)))) for a, b in edges}
    )
    for a, b in canon:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def ball_edges(vertices: set[DLVertex]) -> set[tuple[DLVertex, DLVertex]]:
    """Edges of the subgraph induced by a vertex set (each undirected edge once)."""
    out: set[tuple[DLVertex, DLVertex]] = set()
    for v in vertices:
        for w in neighbors(v):
            if w in vertices:
                key = (v, w) if (v.cursor, v.config.entries) <= (w.cursor, w.config.entries) else (w, v)
                out.add(key)
    return out
