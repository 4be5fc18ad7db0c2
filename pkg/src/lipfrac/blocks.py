"""Level-k cylinder enumeration, block decompositions, measure polynomials,
interior classification, count statistics, finite-state type discovery.

A level-k block is a maximal cluster of level-k cylinders at pairwise
distance < r^k |E| (strict edges), with clusters separated by >= r^k |E|
(closed).  Membership in the level-k cylinder family is the integer
condition lambda(parent) < k <= lambda(word).
"""

import os
from fractions import Fraction

from .errors import (
    DecompositionFailed,
    ExplosionGuard,
    NotClosed,
    PredicateUnresolved,
    VerificationFailed,
)
from . import geometry as geo
from .geometry import SetNode
from .ifs_model import identity_matrix

DEFAULT_CYLINDER_CAP = 100000


def cylinder_cap():
    env = os.environ.get("LIPFRAC_MAX_CYLINDERS")
    return int(env) if env else DEFAULT_CYLINDER_CAP


class Cylinder:
    __slots__ = ("word", "sim", "exponent")

    def __init__(self, word, sim, exponent):
        self.word = word
        self.sim = sim
        self.exponent = exponent

    def __repr__(self):
        return f"Cyl{self.word}"


class Block:
    """A level-k block: member cylinders, measure polynomial, flags."""

    __slots__ = ("level", "members", "poly", "box", "interior", "inside")

    def __init__(self, level, members, poly, box):
        self.level = level
        self.members = members
        self.poly = poly
        self.box = box
        self.interior = None
        self.inside = None

    def words(self):
        return [c.word for c in self.members]

    def measure(self, spec):
        """mu(B) = p^k P_B(p), exactly in Q(beta)."""
        return spec.p() ** self.level * spec.from_p_polynomial(self.poly)

    def __repr__(self):
        return f"Block(level={self.level}, poly={self.poly}, n={len(self.members)})"


class GeometryContext:
    """Shared exact geometry for one IFS: hulls, witnesses, cylinders."""

    def __init__(self, ifs):
        if ifs.kind != "geometric":
            raise ValueError("geometric IFS required")
        if not ifs.commensurable:
            raise ValueError("commensurable ratios required")
        self.ifs = ifs
        self.dim = ifs.ambient_dim
        if self.dim == 1:
            a, b = geo.exact_hull_1d(ifs)
            self.root_box = ((a,), (b,))
            self.diam_sq = ((b - a) ** 2, (b - a) ** 2)
        else:
            self.root_box = geo.outer_box(ifs)
            self.diam_sq = None  # computed lazily
        self.fixed_points = [s.fixed_point() for s in ifs.maps]
        self._root_witnesses = list(dict.fromkeys(self.fixed_points))
        self._lambda = dict(enumerate(ifs.exponents))

    # -- cylinders ---------------------------------------------------------

    def root_cylinder(self):
        return Cylinder((), None, 0)

    def cylinder_from_word(self, word):
        sim = None
        lam = 0
        for i in word:
            lam += self.ifs.exponents[i]
            sim = self.ifs.maps[i] if sim is None else sim.compose(self.ifs.maps[i])
        return Cylinder(tuple(word), sim, lam)

    def cylinder_box(self, cyl):
        if cyl.sim is None:
            return self.root_box
        return geo.map_box(cyl.sim, self.root_box)

    def cylinder_witnesses(self, cyl):
        if cyl.sim is None:
            return self._root_witnesses
        return [cyl.sim(p) for p in self._root_witnesses]

    def children(self, cyl):
        out = []
        for i, s in enumerate(self.ifs.maps):
            sim = s if cyl.sim is None else cyl.sim.compose(s)
            out.append(Cylinder(cyl.word + (i,), sim, cyl.exponent + self.ifs.exponents[i]))
        return out

    def node(self, cyl, depth=0):
        def refine():
            return [self.node(c, depth + 1) for c in self.children(cyl)]

        return SetNode(self.cylinder_box(cyl), self.cylinder_witnesses(cyl), refine,
                       depth)

    def nodes_for_block(self, members):
        return [self.node(c) for c in members]

    # -- thresholds --------------------------------------------------------

    def diameter_sq_enclosure(self, width=None):
        if self.dim == 1:
            return self.diam_sq
        if self.diam_sq is None or (
            width is not None and self.diam_sq[1] - self.diam_sq[0] > width
        ):
            root = self.node(self.root_cylinder())
            w = width if width is not None else geo.box_diag_sq(self.root_box) / 10**6
            self.diam_sq = geo.diameter_enclosure_sq([root], w)
        return self.diam_sq

    def theta_sq(self, k):
        """Exact enclosure of (r^k |E|)^2."""
        dlo, dhi = self.diameter_sq_enclosure()
        scale = Fraction(self.ifs.ratio_root) ** (2 * k)
        return scale * dlo, scale * dhi

    def point_in_region(self, pt, region):
        return region.contains_point(pt)


def enumerate_cylinders(ctx, k, cap=None):
    """All words with lambda(parent) < k <= lambda(word)."""
    cap = cap or cylinder_cap()
    ifs = ctx.ifs
    out = []
    stack = [((), None, 0)]
    while stack:
        word, sim, lam = stack.pop()
        if lam >= k:
            out.append(Cylinder(word, sim, lam))
            if len(out) > cap:
                raise ExplosionGuard(f"more than {cap} cylinders at level {k}")
            continue
        for i, s in enumerate(ifs.maps):
            nsim = s if sim is None else sim.compose(s)
            stack.append((word + (i,), nsim, lam + ifs.exponents[i]))
    out.sort(key=lambda c: c.word)
    return out


def _candidate_pairs(ctx, cyls, theta_hi_sq):
    """Pairs whose boxes come within theta of each other (superset of edges)."""
    n = len(cyls)
    boxes = [ctx.cylinder_box(c) for c in cyls]
    if ctx.dim == 1:
        order = sorted(range(n), key=lambda i: boxes[i][0][0])
        for a in range(n):
            i = order[a]
            for b in range(a + 1, n):
                j = order[b]
                gap = boxes[j][0][0] - boxes[i][1][0]
                if gap > 0 and gap * gap >= theta_hi_sq:
                    break
                yield (i, j) if i < j else (j, i)
    else:
        for i in range(n):
            for j in range(i + 1, n):
                if geo.box_gap_sq(boxes[i], boxes[j]) < theta_hi_sq:
                    yield (i, j)


def block_decomposition(ctx, k, check_connectivity=True):
    """Connected components of the strict-(< r^k |E|) proximity graph on the
    level-k cylinders, verified against both block conditions."""
    cyls = enumerate_cylinders(ctx, k)
    t_lo, t_hi = ctx.theta_sq(k)
    n = len(cyls)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    nodes = {}

    def node_of(i):
        if i not in nodes:
            nodes[i] = ctx.node(cyls[i])
        return nodes[i]

    for i, j in _candidate_pairs(ctx, cyls, t_hi):
        if find(i) == find(j):
            continue
        verdict = geo.compare_distance([node_of(i)], [node_of(j)], t_lo, t_hi)
        if verdict == "less":
            union(i, j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    lam_top = max(ctx.ifs.exponents)
    blocks = []
    for idx in sorted(groups.values(), key=lambda g: cyls[g[0]].word):
        members = tuple(cyls[i] for i in sorted(idx, key=lambda i: cyls[i].word))
        poly = [0] * lam_top
        for c in members:
            off = c.exponent - k
            if not 0 <= off <= lam_top - 1:
                raise VerificationFailed("member exponent outside [k, k + max exp - 1]")
            poly[off] += 1
        boxes = [ctx.cylinder_box(c) for c in members]
        box = (
            tuple(min(b[0][i] for b in boxes) for i in range(ctx.dim)),
            tuple(max(b[1][i] for b in boxes) for i in range(ctx.dim)),
        )
        blocks.append(Block(k, members, tuple(poly), box))
    if check_connectivity:
        for b in blocks:
            _verify_half_neighborhood_connected(ctx, b, t_lo, t_hi)
    return blocks


def _verify_half_neighborhood_connected(ctx, block, t_lo, t_hi):
    """The (r^k |E| / 2)-neighborhood of the block must be connected: split
    members into pieces of certified diameter < r^k |E| and chain them by
    certified distance < r^k |E| (one refinement level beyond ties)."""
    pieces = []
    stack = list(block.members)
    guard = 0
    while stack:
        guard += 1
        if guard > 20000:
            raise DecompositionFailed("connectivity refinement exploded")
        c = stack.pop()
        box = ctx.cylinder_box(c)
        if geo.box_diag_sq(box) < t_lo:
            pieces.append(c)
        else:
            stack.extend(ctx.children(c))
    n = len(pieces)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    nodes = [ctx.node(c) for c in pieces]
    boxes = [ctx.cylinder_box(c) for c in pieces]
    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            if geo.box_gap_sq(boxes[i], boxes[j]) >= t_hi:
                continue
            verdict = geo.compare_distance([nodes[i]], [nodes[j]], t_lo, t_hi)
            if verdict == "less":
                ri, rj = find(i), find(j)
                parent[ri] = rj
    roots = {find(i) for i in range(n)}
    if len(roots) > 1:
        raise DecompositionFailed(
            f"half-neighborhood of a level-{block.level} block is disconnected"
        )


def classify_interior(ctx, blocks, region, check_region=True):
    """Set interior/inside flags per the eroded-region predicate.

    interior: dist(B, O^c) >= r^k |E| (closed); inside: B strictly inside O.
    Exact in 1D; box/witness refinement with a cap elsewhere.
    """
    if check_region:
        geo.verify_osc_region(ctx.ifs, region)
    for b in blocks:
        t_lo, t_hi = ctx.theta_sq(b.level)
        b.interior = _block_interior(ctx, b, region, t_lo, t_hi)
        b.inside = _block_inside(ctx, b, region)
    return blocks


def _sqrt_hi(x):
    from .algebra.quadforms import sqrt_bounds

    return sqrt_bounds(x)[1]


def _block_interior(ctx, block, region, t_lo, t_hi, depth_cap=6):
    theta_hi = _sqrt_hi(t_hi)
    if region.contains_box(block.box[0], block.box[1], margin=theta_hi):
        return True
    if ctx.dim == 1:
        # exact: hull endpoints are realized set points
        return False
    cyls = list(block.members)
    for _ in range(depth_cap):
        for c in cyls:
            for w in ctx.cylinder_witnesses(c):
                if not region.contains_point(w):
                    return False
                if _point_region_margin_sq(w, region) < t_lo:
                    return False
        if all(
            region.contains_box(*ctx.cylinder_box(c), margin=theta_hi)
            for c in cyls
        ):
            return True
        cyls = [ch for c in cyls for ch in ctx.children(c)]
    raise PredicateUnresolved(f"interior tie for a level-{block.level} block")


def _point_region_margin_sq(pt, region):
    best = None
    for lo, hi in region.boxes:
        if all(lo[i] < pt[i] < hi[i] for i in range(len(pt))):
            m = min(min(pt[i] - lo[i], hi[i] - pt[i]) for i in range(len(pt)))
            mm = m * m
            if best is None or mm > best:
                best = mm
    return best if best is not None else Fraction(0)


def _block_inside(ctx, block, region):
    if region.contains_box(block.box[0], block.box[1], margin=0):
        return True
    if ctx.dim == 1:
        return False
    for c in block.members:
        for w in ctx.cylinder_witnesses(c):
            if not region.contains_point(w):
                return False
    # undecided: treat as not-inside (sound for seed purposes)
    return False


class CountsTable:
    """Per level: cylinder counts by offset, boundary/interior counts,
    measured diameter-ratio bounds."""

    def __init__(self):
        self.xi = {}
        self.zeta = {}
        self.zeta_by_poly = {}
        self.varpi_sq = {}

    def record(self, level, xi, zeta, zeta_p, varpi_sq):
        self.xi[level] = tuple(xi)
        self.zeta[level] = zeta
        self.zeta_by_poly[level] = dict(zeta_p)
        self.varpi_sq[level] = varpi_sq

    def max_varpi_sq(self):
        vals = [v for v in self.varpi_sq.values() if v is not None]
        return max(vals) if vals else None


def block_counts(ctx, region, k_max, perron=None):
    """Counts for levels 1..k_max, with the matrix recursion verified
    exactly against enumeration at every level."""
    from .algebra.perron import perron_matrix

    pd = perron if perron is not None else perron_matrix(ctx.ifs.spec)
    n = pd.size
    table = CountsTable()
    prev_xi = None
    for k in range(1, k_max + 1):
        cyls = enumerate_cylinders(ctx, k)
        xi = [0] * n
        for c in cyls:
            xi[c.exponent - k] += 1
        if prev_xi is not None:
            expect = pd.power_vector(prev_xi, 1)
            if list(expect) != xi:
                raise VerificationFailed(
                    f"cylinder recursion failed at level {k}: {expect} vs {xi}"
                )
        prev_xi = xi
        blocks = classify_interior(ctx, block_decomposition(ctx, k), region,
                                   check_region=(k == 1))
        zeta = sum(1 for b in blocks if b.interior is False)
        zeta_p = {}
        for b in blocks:
            if b.interior:
                zeta_p[b.poly] = zeta_p.get(b.poly, 0) + 1
        varpi_sq = _measure_varpi_sq(ctx, blocks, k)
        table.record(k, xi, zeta, zeta_p, varpi_sq)
    return table


def _measure_varpi_sq(ctx, blocks, k):
    """max over blocks of max(|B|^2/theta^2, theta^2/|B|^2), certified."""
    t_lo, t_hi = ctx.theta_sq(k)
    worst = Fraction(1)
    for b in blocks:
        if ctx.dim == 1:
            d = (b.box[1][0] - b.box[0][0]) ** 2
            dlo = dhi = d
        else:
            dhi = geo.box_diag_sq(b.box)
            pts = [w for c in b.members for w in ctx.cylinder_witnesses(c)]
            dlo = max(
                geo.point_dist_sq(p, q) for p in pts for q in pts
            )
        if dlo == 0:
            dlo = dhi  # single-point witness fallback; keep the upper side
        worst = max(worst, dhi / t_lo)
        if dlo > 0:
            worst = max(worst, t_hi / dlo)
    return worst


# -- type discovery ----------------------------------------------------------


def _normalize_block(ctx, block):
    """Canonical type key: translate the lex-least member's image of the
    canonical corner to the origin, rescale by r^(-k); orientation kept."""
    r = Fraction(ctx.ifs.ratio_root)
    scale = r ** (-block.level)
    anchor = block.members[0]
    base = ctx.root_box[0]
    c = anchor.sim(base) if anchor.sim is not None else base
    entries = []
    for m in block.members:
        off = m.exponent - block.level
        if m.sim is None:
            orth = identity_matrix(ctx.dim)
            trans = tuple((base[i] - c[i]) * scale for i in range(ctx.dim))
        else:
            orth = m.sim.orthogonal
            trans = tuple(
                (m.sim.translation[i] - c[i]) * scale for i in range(ctx.dim)
            )
        entries.append((off, orth, trans))
    entries.sort()
    return tuple(entries)


class TypeGraph:
    """Vertices are canonical block types; edges are one-level refinements."""

    def __init__(self, ctx, region):
        self.ctx = ctx
        self.region = region
        self.types = {}  # key -> index
        self.poly = []  # index -> measure polynomial
        self.children = []  # index -> tuple of child type indices (with mult)
        self.witness_block = []  # index -> a realized Block
        self.inside_realized = []
        self.interior_realized = []
        # outside-witness bookkeeping for never-inside certification:
        # every realization of the type must carry an exact point outside the
        # region whose lineage stays within the recorded child types
        self.outside_witness_ok = []
        self.outside_witness_children = []
        self.closed = False
        self.levels_computed = 0

    def type_count(self):
        return len(self.poly)

    def index_of(self, key):
        return self.types.get(key)

    def reachable_from(self, seeds):
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            i = stack.pop()
            if self.children[i] is None:
                continue
            for j in self.children[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    def edges(self):
        """(src, dst, exponent) triples of the one-level refinement graph."""
        out = []
        for i, ch in enumerate(self.children):
            if ch is None:
                continue
            for j in ch:
                out.append((i, j, 1))
        return out


def discover_types(ctx, region, k_max=10, require_closed=False):
    """Expand levels until one full refinement round adds no new type."""
    graph = TypeGraph(ctx, region)
    level_blocks = classify_interior(ctx, block_decomposition(ctx, 0), region)
    _register_types(ctx, graph, level_blocks)
    prev_new = True
    k = 0
    while k < k_max:
        k += 1
        new_blocks = classify_interior(
            ctx, block_decomposition(ctx, k), region, check_region=False
        )
        fresh = _register_types(ctx, graph, new_blocks)
        _register_children(ctx, graph, level_blocks, new_blocks)
        level_blocks = new_blocks
        graph.levels_computed = k
        if not fresh and all(c is not None for c in graph.children):
            graph.closed = True
            break
    if require_closed and not graph.closed:
        raise NotClosed(k_max, graph)
    return graph


def _register_types(ctx, graph, blocks):
    fresh = False
    for b in blocks:
        key = _normalize_block(ctx, b)
        idx = graph.types.get(key)
        if idx is None:
            idx = len(graph.poly)
            graph.types[key] = idx
            graph.poly.append(b.poly)
            graph.children.append(None)
            graph.witness_block.append(b)
            graph.inside_realized.append(bool(b.inside))
            graph.interior_realized.append(bool(b.interior))
            graph.outside_witness_ok.append(True)
            graph.outside_witness_children.append(set())
            fresh = True
        else:
            if graph.poly[idx] != b.poly:
                raise VerificationFailed("same type with different polynomial")
            if b.inside:
                graph.inside_realized[idx] = True
            if b.interior:
                graph.interior_realized[idx] = True
    return fresh


def _outside_witness(ctx, region, block):
    """(member word, map index) of an exact attractor point in B outside the
    open region, or None."""
    for c in block.members:
        for mi, fp in enumerate(ctx.fixed_points):
            w = c.sim(fp) if c.sim is not None else fp
            if not region.contains_point(w):
                return c.word, mi
    return None


def _register_children(ctx, graph, parents, children):
    parent_of_word = {}
    for pi, b in enumerate(parents):
        for c in b.members:
            parent_of_word[c.word] = pi
    assign = {}
    owner_of_child = {}
    for ci, b in enumerate(children):
        owners = set()
        for c in b.members:
            for plen in range(len(c.word), -1, -1):
                w = c.word[:plen]
                if w in parent_of_word:
                    owners.add(parent_of_word[w])
                    break
        if len(owners) != 1:
            raise VerificationFailed("child block crosses parent blocks")
        owner = owners.pop()
        owner_of_child[ci] = owner
        assign.setdefault(owner, []).append(ci)
    for pi, kids in assign.items():
        pkey = _normalize_block(ctx, parents[pi])
        pidx = graph.types[pkey]
        child_idx = tuple(
            sorted(graph.types[_normalize_block(ctx, children[ci])] for ci in kids)
        )
        if graph.children[pidx] is None:
            graph.children[pidx] = child_idx
        elif graph.children[pidx] != child_idx:
            raise VerificationFailed(
                "type refines differently across realizations"
            )
        # outside-witness flow: a parent not strictly inside the region must
        # carry an exact outside point into a specific child block
        parent_block = parents[pi]
        if not parent_block.inside:
            wit = _outside_witness(ctx, graph.region, parent_block)
            if wit is None:
                graph.outside_witness_ok[pidx] = False
            else:
                word, mi = wit
                lam = sum(ctx.ifs.exponents[i] for i in word)
                ww = word
                while lam < parent_block.level + 1:
                    ww = ww + (mi,)
                    lam += ctx.ifs.exponents[mi]
                target = None
                for ci in kids:
                    if any(
                        ww[: len(m.word)] == m.word or m.word[: len(ww)] == ww
                        for m in children[ci].members
                    ):
                        target = ci
                        break
                if target is None:
                    graph.outside_witness_ok[pidx] = False
                else:
                    ckey = _normalize_block(ctx, children[target])
                    graph.outside_witness_children[pidx].add(graph.types[ckey])
