"""Self-maps of the lamplighter base group and their induced vertex maps.

The map algebra covers index shifts, translations, index inversion, block
permutations of a fixed window, and compositions.  On top of it sit exact
biLipschitz-constant measurement on both boundaries, parallelogram
preservation testing, delta-distortion scans, induced height-preserving
vertex maps of DL(n,n) with additive-distortion measurement, and the
backtracking search for pattern-preserving ball isometries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .base_groups import LampConfig, lamp_delta, lamp_dl, lamp_du
from .dl_graph import DLVertex, ball, coset_of, dl_distance, distances_from, identity_vertex, neighbors
from .errors import DomainError, InternalError

Window = tuple[int, int]


# ---------------------------------------------------------------------------
# the map algebra
# ---------------------------------------------------------------------------

class BaseMap:
    """A self-map of ⊕ Z_n; concrete variants below."""

    def modulus(self) -> int | None:
        return None

    def __call__(self, x: LampConfig) -> LampConfig:
        return apply(self, x)


@dataclass(frozen=True)
class Shift(BaseMap):
    """(x_i) -> (x_{i+j}): the entry at index i moves to index i - j."""

    j: int


@dataclass(frozen=True)
class Translate(BaseMap):
    """x -> x + c."""

    c: LampConfig

    def modulus(self) -> int | None:
        return self.c.n


@dataclass(frozen=True)
class Inversion(BaseMap):
    """(x_i) -> (x_{-i})."""


@dataclass(frozen=True)
class BlockPerm(BaseMap):
    """Rewrite the window [0, m) through a string table; identity elsewhere.

    ``table`` lists (source, image) window strings with index 0 as the
    leftmost character; unlisted strings map to themselves.  The table is
    expected to be a bijection but that is only enforced by the operations
    that need it (`is_bijection_on_window` exists to check it).
    """

    m: int
    table: tuple[tuple[str, str], ...]
    n: int = 2

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("block length m must be >= 1")
        if not 2 <= self.n <= 10:
            raise DomainError("block-permutation strings need a single-digit alphabet (2 <= n <= 10)")
        for src, dst in self.table:
            for s in (src, dst):
                if len(s) != self.m or any(not ch.isdigit() or int(ch) >= self.n for ch in s):
                    raise DomainError(f"{s!r} is not a length-{self.m} string over digits < {self.n}")
        srcs = [src for src, _ in self.table]
        if len(set(srcs)) != len(srcs):
            raise DomainError("block-permutation table lists a source twice")

    @classmethod
    def from_pairs(cls, m: int, pairs, n: int = 2) -> "BlockPerm":
        canon = tuple(sorted((src, dst) for src, dst in pairs if src != dst))
        return cls(m, canon, n)

    def modulus(self) -> int | None:
        return self.n

    @cached_property
    def _lookup(self) -> dict[str, str]:
        return dict(self.table)

    def image_string(self, s: str) -> str:
        return self._lookup.get(s, s)

    def is_table_bijection(self) -> bool:
        dsts = [dst for _, dst in self.table]
        if len(set(dsts)) != len(dsts):
            return False
        moved = {src for src, _ in self.table}
        return all(dst in moved for dst in dsts)


@dataclass(frozen=True)
class Compose(BaseMap):
    """Composition; maps apply right to left, like functions."""

    maps: tuple[BaseMap, ...]

    def __post_init__(self):
        mods = {m.modulus() for m in self.maps} - {None}
        if len(mods) > 1:
            raise DomainError(f"composition mixes moduli {sorted(mods)}")

    def modulus(self) -> int | None:
        for m in self.maps:
            if m.modulus() is not None:
                return m.modulus()
        return None


def apply(m: BaseMap, x: LampConfig) -> LampConfig:
    """Evaluate a map on a configuration."""
    mod = m.modulus()
    if mod is not None and mod != x.n:
        raise DomainError(f"map modulus {mod} does not match configuration modulus {x.n}")
    if isinstance(m, Shift):
        return LampConfig(x.n, tuple(sorted((i - m.j, v) for i, v in x.entries)))
    if isinstance(m, Translate):
        return x + m.c
    if isinstance(m, Inversion):
        return LampConfig(x.n, tuple(sorted((-i, v) for i, v in x.entries)))
    if isinstance(m, BlockPerm):
        s = "".join(str(x.value_at(i)) for i in range(m.m))
        t = m.image_string(s)
        if t == s:
            return x
        entries = [e for e in x.entries if not 0 <= e[0] < m.m]
        entries.extend((i, int(ch)) for i, ch in enumerate(t) if ch != "0")
        return LampConfig(x.n, tuple(sorted(entries)))
    if isinstance(m, Compose):
        for part in reversed(m.maps):
            x = apply(part, x)
        return x
    raise DomainError(f"unknown map variant {type(m).__name__}")


def map_is_bijective(m: BaseMap) -> bool:
    """Structural bijectivity: shifts, translations and inversion always are;
    block permutations iff their table is; compositions iff all parts are."""
    if isinstance(m, BlockPerm):
        return m.is_table_bijection()
    if isinstance(m, Compose):
        return all(map_is_bijective(p) for p in m.maps)
    return isinstance(m, (Shift, Translate, Inversion))


# ---------------------------------------------------------------------------
# window enumeration helpers
# ---------------------------------------------------------------------------

_MAX_WINDOW_STATES = 1 << 16


def window_configs(n: int, window: Window) -> list[LampConfig]:
    """All configs supported in [lo, hi), in lexicographic window-string order
    (index lo is the leftmost character)."""
    lo, hi = window
    width = hi - lo
    if width < 0:
        raise DomainError("empty window")
    if n ** width > _MAX_WINDOW_STATES:
        raise DomainError(f"window of width {width} over Z_{n} is too large to enumerate")
    out = []
    for digits in itertools.product(range(n), repeat=width):
        out.append(LampConfig(n, tuple((lo + i, v) for i, v in enumerate(digits) if v)))
    return out


def is_bijection_on_window(m: BaseMap, window: Window) -> bool:
    """Exhaustively check injectivity on configs supported in the window.

    Raises DomainError if the map moves some window config out of the
    window (it is then not window-confined and the check is meaningless).
    """
    n = m.modulus() or 2
    lo, hi = window
    configs = window_configs(n, window)
    images = set()
    for x in configs:
        y = apply(m, x)
        if any(not lo <= i < hi for i in y.support()):
            raise DomainError(f"map is not confined to the window [{lo}, {hi})")
        images.add(y)
    return len(images) == len(configs)


# ---------------------------------------------------------------------------
# biLipschitz constants of block permutations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BilipReport:
    """Extremal boundary-metric distortions over an exhaustive pair scan.

    K_lower bounds the lower-boundary (d_l) distortion, K_upper the
    upper-boundary (d_u) one; `exhaustive` is set when the padding
    guarantees the scan realizes the true constants (padding >= m).
    """

    K_lower: Fraction
    K_upper: Fraction
    exhaustive: bool
    window: Window

    def __post_init__(self):
        if self.K_lower < 1 or self.K_upper < 1:
            raise DomainError("biLipschitz constants are >= 1 by definition")

    @property
    def K(self) -> Fraction:
        return max(self.K_lower, self.K_upper)


_bit_tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}
_pair_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}

_PAIR_CACHE_MAX_WIDTH = 12


def _fd_ld_tables(width: int) -> tuple[np.ndarray, np.ndarray]:
    if width not in _bit_tables:
        size = 1 << width
        fd = np.zeros(size, dtype=np.int16)
        ld = np.zeros(size, dtype=np.int16)
        for d in range(1, size):
            fd[d] = (d & -d).bit_length() - 1
            ld[d] = d.bit_length() - 1
        _bit_tables[width] = (fd, ld)
    return _bit_tables[width]


def _pair_arrays(width: int):
    # distinct unordered pairs plus the source-side disagreement indices,
    # shared by every map of the same window shape
    if width not in _pair_cache:
        fd, ld = _fd_ld_tables(width)
        size = 1 << width
        sx, sy = np.triu_indices(size, k=1)
        sx = sx.astype(np.uint32)
        sy = sy.astype(np.uint32)
        d = sx ^ sy
        _pair_cache[width] = (sx, sy, fd[d], ld[d])
    return _pair_cache[width]


def _mod2_deviations(img: np.ndarray, width: int) -> tuple[int, int]:
    """Max |first-disagreement| and |last-disagreement| index deviations over
    all distinct config pairs of a width-bit window, given the image table."""
    fd, ld = _fd_ld_tables(width)
    if width <= _PAIR_CACHE_MAX_WIDTH:
        sx, sy, fd_src, ld_src = _pair_arrays(width)
        di = img[sx] ^ img[sy]
        if not di.all():
            raise DomainError("map is not injective on the window; biLipschitz constants undefined")
        max_fd = int(np.abs(fd_src - fd[di]).max(initial=0))
        max_ld = int(np.abs(ld[di] - ld_src).max(initial=0))
        return max_fd, max_ld
    size = 1 << width
    x = np.arange(size, dtype=np.uint32)
    max_fd = 0
    max_ld = 0
    block = max(1, (1 << 22) // size)
    for start in range(0, size, block):
        rows = slice(start, min(start + block, size))
        d = x[rows, None] ^ x[None, :]
        di = img[rows, None] ^ img[None, :]
        nz = d != 0
        if not np.all((di != 0) == nz):
            raise DomainError("map is not injective on the window; biLipschitz constants undefined")
        fd_dev = np.abs(fd[d] - fd[di])
        ld_dev = np.abs(ld[di] - ld[d])
        fd_dev[~nz] = 0
        ld_dev[~nz] = 0
        max_fd = max(max_fd, int(fd_dev.max(initial=0)))
        max_ld = max(max_ld, int(ld_dev.max(initial=0)))
    return max_fd, max_ld


def _blockperm_image_table(bp: BlockPerm, padding: int) -> np.ndarray:
    """Image of every window config as a packed bitmask (n = 2 only).

    Bit b of a mask is the lamp at index b - padding; the block window
    occupies bits [padding, padding + m).
    """
    width = bp.m + 2 * padding
    wmask = (1 << bp.m) - 1
    perm = np.arange(1 << bp.m, dtype=np.uint32)
    for src, dst in bp.table:
        # strings read index 0 first; bit i of the packed value is index i
        perm[int(src[::-1], 2)] = int(dst[::-1], 2)
    x = np.arange(1 << width, dtype=np.uint32)
    w = (x >> padding) & wmask
    return x ^ ((w ^ perm[w]) << np.uint32(padding))


def _bilip_pair_scan(bp: BlockPerm, padding: int) -> tuple[Fraction, Fraction]:
    # reference path: plain pair loop over LampConfig objects, any modulus
    window = (-padding, bp.m + padding)
    configs = window_configs(bp.n, window)
    images = {x: apply(bp, x) for x in configs}
    k_lower = k_upper = Fraction(1)
    for p, q in itertools.combinations(configs, 2):
        ip, iq = images[p], images[q]
        if ip == iq:
            raise DomainError("map is not injective on the window; biLipschitz constants undefined")
        rl = lamp_dl(ip, iq) / lamp_dl(p, q)
        ru = lamp_du(ip, iq) / lamp_du(p, q)
        k_lower = max(k_lower, rl, 1 / rl)
        k_upper = max(k_upper, ru, 1 / ru)
    return k_lower, k_upper


def bilip_constants(bp: BlockPerm, padding: int) -> BilipReport:
    """Exhaustive boundary-distortion maxima of a block permutation.

    Scans every distinct pair of configs supported in
    [-padding, m + padding); with padding >= m the extrema equal the global
    biLipschitz constants (disagreements outside the block are fixed by the
    map), which the report flags as exhaustive.
    """
    if padding < 0:
        raise DomainError("padding must be >= 0")
    if not bp.is_table_bijection():
        raise DomainError("block-permutation table is not a bijection")
    window = (-padding, bp.m + padding)
    if bp.n == 2:
        width = bp.m + 2 * padding
        if width > 24:
            raise DomainError("window too wide for the exhaustive pair scan")
        img = _blockperm_image_table(bp, padding)
        dev_fd, dev_ld = _mod2_deviations(img, width)
        k_lower = Fraction(2) ** dev_fd
        k_upper = Fraction(2) ** dev_ld
    else:
        k_lower, k_upper = _bilip_pair_scan(bp, padding)
    return BilipReport(K_lower=k_lower, K_upper=k_upper,
                       exhaustive=padding >= bp.m, window=window)


# ---------------------------------------------------------------------------
# parallelogram preservation and generalized-affine factorization
# ---------------------------------------------------------------------------

def parallelogram_preserving(m: BaseMap, window: Window):
    """True, or the first (a, v, w) in lexicographic order with
    psi(a+v+w) + psi(a) != psi(a+v) + psi(a+w)."""
    n = m.modulus() or 2
    configs = window_configs(n, window)
    images = {x: apply(m, x) for x in configs}
    for a in configs:
        for v in configs:
            av = a + v
            for w in configs:
                lhs = images[av + w] + images[a]
                rhs = images[av] + images[a + w]
                if lhs != rhs:
                    return (a, v, w)
    return True


def _shift_matches(images: dict[LampConfig, LampConfig], j: int) -> bool:
    zero_img = images[next(x for x in images if x.is_zero())]
    shift = Shift(j)
    return all(img == apply(shift, x) + zero_img for x, img in images.items())


def is_generalized_affine(m: BaseMap, window: Window, up_to_inversion: bool = False) -> bool:
    """Whether the map factors as a shift composed with a translation on the window.

    The strict reading excludes index inversion (an additive automorphism
    that is not a shift); pass up_to_inversion=True to accept maps whose
    pre- or post-composition with inversion factors strictly.
    """
    n = m.modulus() or 2
    lo, hi = window
    width = hi - lo
    if parallelogram_preserving(m, window) is not True:
        return False
    configs = window_configs(n, window)

    def strict(f: BaseMap) -> bool:
        images = {x: apply(f, x) for x in configs}
        return any(_shift_matches(images, j) for j in range(-width, width + 1))

    if strict(m):
        return True
    if up_to_inversion:
        inv = Inversion()
        return strict(Compose((m, inv))) or strict(Compose((inv, m)))
    return False


@dataclass(frozen=True)
class DeltaDistortionReport:
    """Extremal delta ratios over a window pair scan, with the biLipschitz
    bound they are required to respect."""

    max_ratio: Fraction
    max_pair: tuple[LampConfig, LampConfig]
    min_ratio: Fraction
    min_pair: tuple[LampConfig, LampConfig]
    K: Fraction
    window: Window


def delta_distortion(bp: BlockPerm, window: Window) -> DeltaDistortionReport:
    """Scan delta(psi p, psi q)/delta(p, q) over all distinct window pairs.

    The ratios must lie in [1/K^2, K^2] for K = max(K_lower, K_upper) from
    the exhaustive biLipschitz report; a violation is a library bug, not a
    data condition, and raises InternalError.
    """
    rep = bilip_constants(bp, padding=bp.m)
    k = rep.K
    configs = window_configs(bp.n, window)
    images = {x: apply(bp, x) for x in configs}
    best: tuple[Fraction, tuple] | None = None
    worst: tuple[Fraction, tuple] | None = None
    for p, q in itertools.combinations(configs, 2):
        dpq = lamp_delta(p, q)[0]
        dimg = lamp_delta(images[p], images[q])[0]
        if dimg == 0:
            raise DomainError("map is not injective on the window")
        ratio = Fraction(dimg, dpq)
        if best is None or ratio > best[0]:
            best = (ratio, (p, q))
        if worst is None or ratio < worst[0]:
            worst = (ratio, (p, q))
    if best is None:
        raise DomainError("window holds fewer than two configurations")
    if best[0] > k * k or worst[0] < 1 / (k * k):
        raise InternalError(
            f"delta distortion {worst[0]}..{best[0]} escapes [1/K^2, K^2] with K={k}; library bug")
    return DeltaDistortionReport(max_ratio=best[0], max_pair=best[1],
                                 min_ratio=worst[0], min_pair=worst[1],
                                 K=k, window=window)


# ---------------------------------------------------------------------------
# induced vertex maps on DL(n,n)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexMap:
    """Height-preserving vertex map (config, k) -> (base(config), k).

    Maps cosets to cosets exactly: coset_of(self(v)) == base(coset_of(v)).
    """

    base: BaseMap

    def __call__(self, v: DLVertex) -> DLVertex:
        return DLVertex(apply(self.base, v.config), v.cursor)


def induced_vertex_map(m: BaseMap) -> VertexMap:
    if not map_is_bijective(m):
        raise DomainError("only bijections of the base group induce vertex maps")
    return VertexMap(m)


def _mask_encoder(configs: set[LampConfig]):
    indices = [i for cfg in configs for i in cfg.support()]
    off = -min(indices, default=0)

    def enc(cfg: LampConfig) -> int:
        mask = 0
        for i, _ in cfg.entries:
            mask |= 1 << (i + off)
        return mask

    return enc, off


def _mask_distance(mu: int, ku: int, mv: int, kv: int, off: int) -> int:
    d = mu ^ mv
    if d:
        lo = (d & -d).bit_length() - 1 - off
        hi = d.bit_length() - 1 - off
        c = min(ku, kv, lo)
        cp = max(ku, kv, hi + 1)
    else:
        c = min(ku, kv)
        cp = max(ku, kv)
    return (ku - c) + (kv - c) + (cp - ku) + (cp - kv) - abs(ku - kv)


def qi_distortion(vm: VertexMap, radius: int, n: int | None = None) -> int:
    """Max additive distance distortion |d(vm u, vm v) - d(u, v)| over all
    pairs in the radius ball around the identity vertex."""
    if radius < 0:
        raise DomainError("radius must be >= 0")
    n = n or vm.base.modulus() or 2
    verts = sorted(ball(identity_vertex(n), radius),
                   key=lambda v: (v.cursor, v.config.entries))
    imgs = [vm(v) for v in verts]
    if n == 2:
        all_cfgs = {v.config for v in verts} | {v.config for v in imgs}
        enc, off = _mask_encoder(all_cfgs)
        src = [(enc(v.config), v.cursor) for v in verts]
        dst = [(enc(v.config), v.cursor) for v in imgs]
        worst = 0
        for a in range(len(verts)):
            mu, ku = src[a]
            nu, lu = dst[a]
            for b in range(a + 1, len(verts)):
                mv, kv = src[b]
                nv, lv = dst[b]
                dev = abs(_mask_distance(nu, lu, nv, lv, off)
                          - _mask_distance(mu, ku, mv, kv, off))
                if dev > worst:
                    worst = dev
        return worst
    worst = 0
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            dev = abs(dl_distance(imgs[a], imgs[b]) - dl_distance(verts[a], verts[b]))
            worst = max(worst, dev)
    return worst


# ---------------------------------------------------------------------------
# finite-ball isometry search
# ---------------------------------------------------------------------------

def isometry_search(
    radius: int,
    height_preserving: bool = True,
    orientation_preserving: bool = True,
    fix_identity_coset: bool = True,
    pattern_preserving: bool = True,
    n: int = 2,
    max_results: int | None = None,
) -> list[dict[DLVertex, DLVertex]]:
    """Enumerate adjacency-preserving self-bijections of the radius ball.

    Backtracking over the ball's induced subgraph; the constraints mirror
    the reduction used for the rigidity statement: heights fixed, edge
    directions preserved, identity-coset vertices fixed pointwise, and
    coset fibers mapped to coset fibers.  Each surviving bijection is
    returned restricted to the radius-1 smaller ball (deduplicated), so
    boundary artifacts do not inflate the count.  With every constraint on,
    the expected result is exactly the identity map.
    """
    if radius < 2:
        raise DomainError("radius must be >= 2")
    center = identity_vertex(n)
    dist = distances_from(center, radius)
    verts = sorted(dist, key=lambda v: (dist[v], v.cursor, v.config.entries))
    index = {v: i for i, v in enumerate(verts)}
    nverts = len(verts)
    adj_sets = [sorted(index[w] for w in neighbors(v) if w in index) for v in verts]
    adj_mask = [sum(1 << w for w in ws) for ws in adj_sets]
    height = [v.cursor for v in verts]
    dcenter = [dist[v] for v in verts]
    updeg = [sum(1 for w in ws if height[w] == height[i] + 1) for i, ws in enumerate(adj_sets)]
    downdeg = [len(ws) - u for ws, u in zip(adj_sets, updeg)]

    cfg_ids: dict[tuple, int] = {}
    cls = []
    for v in verts:
        cls.append(cfg_ids.setdefault(v.config.entries, len(cfg_ids)))
    fiber_size = [0] * len(cfg_ids)
    for c in cls:
        fiber_size[c] += 1

    def signature(i: int):
        sig = [len(adj_sets[i])]
        if fix_identity_coset:
            sig.append(dcenter[i])
        if height_preserving:
            sig += [height[i], updeg[i], downdeg[i]]
        return tuple(sig)

    sigs = [signature(i) for i in range(nverts)]
    pools: dict[tuple, list[int]] = {}
    for i in range(nverts):
        pools.setdefault(sigs[i], []).append(i)

    inner_set = [i for i in range(nverts) if dcenter[i] <= radius - 1]
    geodesic = [i for i, v in enumerate(verts) if not v.config.entries] if fix_identity_coset else []
    # assignment order: pre-fixed geodesic first, then BFS over the inner ball
    # so every new vertex touches an already-assigned one; boundary-sphere
    # vertices come last and are only completed once per inner assignment
    order: list[int] = [i for i in geodesic if dcenter[i] <= radius - 1]
    placed = set(order)
    if not order:
        order.append(0)
        placed.add(0)
    queue = list(order)
    qi = 0
    while qi < len(queue):
        src = queue[qi]
        qi += 1
        for w in adj_sets[src]:
            if w not in placed and dcenter[w] <= radius - 1:
                placed.add(w)
                order.append(w)
                queue.append(w)
    for i in inner_set:  # disconnected inner leftovers (kept for safety)
        if i not in placed:
            placed.add(i)
            order.append(i)
    n_inner = len(order)
    boundary_order = [i for i in range(nverts) if i not in placed]
    order.extend(boundary_order)

    img: list[int | None] = [None] * nverts
    used = [False] * nverts
    nbr_img_req = [0] * nverts
    assigned_img_mask = 0
    cls_img: list[int | None] = [None] * len(cfg_ids)
    cls_img_refs = [0] * len(cfg_ids)
    cls_img_used = [False] * len(cfg_ids)
    results: dict[tuple, dict[DLVertex, DLVertex]] = {}

    def candidates(i: int):
        # identity-coset vertices may only map to themselves, but still have
        # to pass every consistency check like any other assignment
        if fix_identity_coset and not verts[i].config.entries:
            pool = (i,)
        else:
            pool = pools[sigs[i]]
        req = nbr_img_req[i]
        out = []
        for w in pool:
            if used[w]:
                continue
            if adj_mask[w] & assigned_img_mask != req:
                continue
            if height_preserving and height[w] != height[i]:
                continue
            if orientation_preserving and not height_preserving:
                ok = True
                for u in adj_sets[i]:
                    if img[u] is not None and height[img[u]] - height[w] != height[u] - height[i]:
                        ok = False
                        break
                if not ok:
                    continue
            if pattern_preserving:
                c, ci = cls[i], cls[w]
                if cls_img[c] is not None:
                    if cls_img[c] != ci:
                        continue
                elif cls_img_used[ci] or fiber_size[c] != fiber_size[ci]:
                    continue
            out.append(w)
        return out

    def assign(i: int, w: int):
        nonlocal assigned_img_mask
        img[i] = w
        used[w] = True
        assigned_img_mask |= 1 << w
        for u in adj_sets[i]:
            nbr_img_req[u] |= 1 << w
        if pattern_preserving:
            c = cls[i]
            if cls_img[c] is None:
                cls_img[c] = cls[w]
                cls_img_used[cls[w]] = True
            cls_img_refs[c] += 1

    def unassign(i: int, w: int):
        nonlocal assigned_img_mask
        img[i] = None
        used[w] = False
        assigned_img_mask &= ~(1 << w)
        for u in adj_sets[i]:
            nbr_img_req[u] &= ~(1 << w)
        if pattern_preserving:
            c = cls[i]
            cls_img_refs[c] -= 1
            if cls_img_refs[c] == 0:
                cls_img_used[cls_img[c]] = False
                cls_img[c] = None

    def complete_boundary(pos: int) -> bool:
        # one witness completion over the boundary sphere is enough: the
        # returned restriction does not depend on it
        if pos == nverts:
            return True
        i = order[pos]
        for w in candidates(i):
            assign(i, w)
            ok = complete_boundary(pos + 1)
            unassign(i, w)
            if ok:
                return True
        return False

    def dfs(pos: int) -> bool:
        if max_results is not None and len(results) >= max_results:
            return True
        if pos == n_inner:
            if complete_boundary(pos):
                key = tuple(img[i] for i in inner_set)
                if key not in results:
                    results[key] = {verts[i]: verts[img[i]] for i in inner_set}
            return max_results is not None and len(results) >= max_results
        i = order[pos]
        for w in candidates(i):
            assign(i, w)
            stop = dfs(pos + 1)
            unassign(i, w)
            if stop:
                return True
        return False

    dfs(0)
    return [results[k] for k in sorted(results)]


def is_identity_ball_map(m: dict[DLVertex, DLVertex]) -> bool:
    return all(v == w for v, w in m.items())
