"""Certified geometric primitives: attractor extents, set distances.

Everything is exact rational interval/box arithmetic.  In one dimension the
attractor hull is computed exactly (its endpoints are fixed points of the
extreme selection pattern), so cylinder boxes are exact hulls with realized
endpoints and distance comparisons are exact decisions.  In dimension >= 2
boxes are outer enclosures and comparisons refine until certified, surfacing
an unresolved tie honestly.
"""

import heapq
from fractions import Fraction

from .errors import PredicateUnresolved, RegionNotInvariant


# -- boxes ------------------------------------------------------------------


def box_of_points(points):
    lo = tuple(min(p[i] for p in points) for i in range(len(points[0])))
    hi = tuple(max(p[i] for p in points) for i in range(len(points[0])))
    return lo, hi


def map_box(sim, box):
    """Exact axis-aligned bounding box of the image of a box."""
    lo, hi = box
    d = sim.dim
    out_lo, out_hi = [], []
    for i in range(d):
        acc_lo = acc_hi = sim.translation[i]
        for j in range(d):
            c = sim.ratio * sim.orthogonal[i][j]
            if c >= 0:
                acc_lo += c * lo[j]
                acc_hi += c * hi[j]
            else:
                acc_lo += c * hi[j]
                acc_hi += c * lo[j]
        out_lo.append(acc_lo)
        out_hi.append(acc_hi)
    return tuple(out_lo), tuple(out_hi)


def box_gap_sq(b1, b2):
    """Exact squared distance between two closed boxes."""
    total = Fraction(0)
    for i in range(len(b1[0])):
        g = max(b1[0][i] - b2[1][i], b2[0][i] - b1[1][i], Fraction(0))
        total += g * g
    return total


def box_farthest_sq(b1, b2):
    """Upper bound for the squared distance between points of two boxes."""
    total = Fraction(0)
    for i in range(len(b1[0])):
        g = max(abs(b1[1][i] - b2[0][i]), abs(b2[1][i] - b1[0][i]))
        total += g * g
    return total


def box_diag_sq(box):
    return sum((h - l) ** 2 for l, h in zip(box[0], box[1]))


def point_dist_sq(p, q):
    return sum((a - b) ** 2 for a, b in zip(p, q))


def boxes_intersect_open(b1, b2):
    return all(
        max(b1[0][i], b2[0][i]) < min(b1[1][i], b2[1][i]) for i in range(len(b1[0]))
    )


# -- attractor extent -------------------------------------------------------


def crude_invariant_box(ifs):
    rmax = max(s.ratio for s in ifs.maps)
    tmax = max(
        (abs(v) for s in ifs.maps for v in s.translation), default=Fraction(0)
    )
    radius = tmax / (1 - rmax) + 1
    d = ifs.ambient_dim
    return (tuple(-radius for _ in range(d)), tuple(radius for _ in range(d)))


def outer_box(ifs, iterations=80):
    """A box B with union of S_i(B) inside B, shrunk by iteration."""
    box = crude_invariant_box(ifs)
    for _ in range(iterations):
        images = [map_box(s, box) for s in ifs.maps]
        box = (
            tuple(min(im[0][i] for im in images) for i in range(ifs.ambient_dim)),
            tuple(max(im[1][i] for im in images) for i in range(ifs.ambient_dim)),
        )
    # verify invariance so the result is a certified enclosure
    images = [map_box(s, box) for s in ifs.maps]
    lo = tuple(min(im[0][i] for im in images) for i in range(ifs.ambient_dim))
    hi = tuple(max(im[1][i] for im in images) for i in range(ifs.ambient_dim))
    if any(l < b for l, b in zip(lo, box[0])) or any(
        h > b for h, b in zip(hi, box[1])
    ):
        raise ArithmeticError("outer box failed to stabilize")
    return box


def exact_hull_1d(ifs, max_rounds=400):
    """Exact hull [a, b] of a 1D attractor.

    a and b satisfy a linear fixed-point equation once the arg-min/arg-max
    selection stabilizes; the candidate is solved exactly and verified.
    """
    box = outer_box(ifs)
    a, b = box[0][0], box[1][0]

    def images(a, b):
        out = []
        for s in ifs.maps:
            sgn = s.orthogonal[0][0]
            lo = s.ratio * sgn * (a if sgn > 0 else b) + s.translation[0]
            hi = s.ratio * sgn * (b if sgn > 0 else a) + s.translation[0]
            out.append((lo, hi))
        return out

    for _ in range(max_rounds):
        ims = images(a, b)
        na = min(im[0] for im in ims)
        nb = max(im[1] for im in ims)
        imin = min(range(len(ims)), key=lambda i: ims[i][0])
        imax = max(range(len(ims)), key=lambda i: ims[i][1])
        # solve the 2x2 linear system for the selected pattern:
        #   a = r_min * a + t_min   (or  a = -r_min * b + t_min  when flipped)
        #   b = r_max * b + t_max   (or  b = -r_max * a + t_max)
        smin, smax = ifs.maps[imin], ifs.maps[imax]
        rows, rhs = [], []
        sgn = smin.orthogonal[0][0]
        if sgn > 0:
            rows.append([smin.ratio - 1, Fraction(0)])
        else:
            rows.append([Fraction(-1), -smin.ratio])
        rhs.append(-smin.translation[0])
        sgn = smax.orthogonal[0][0]
        if sgn > 0:
            rows.append([Fraction(0), smax.ratio - 1])
        else:
            rows.append([-smax.ratio, Fraction(-1)])
        rhs.append(-smax.translation[0])
        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if det != 0:
            ca = (rhs[0] * rows[1][1] - rhs[1] * rows[0][1]) / det
            cb = (rows[0][0] * rhs[1] - rows[1][0] * rhs[0]) / det
            ims2 = images(ca, cb)
            if (
                ca <= cb
                and min(im[0] for im in ims2) == ca
                and max(im[1] for im in ims2) == cb
            ):
                return ca, cb
        a, b = na, nb
    raise ArithmeticError("1D hull selection did not stabilize")


# -- set-distance certification ---------------------------------------------


class SetNode:
    """A union member in a distance query: box + realized witness points +
    a refinement callback yielding child nodes."""

    __slots__ = ("box", "witnesses", "refine", "depth")

    def __init__(self, box, witnesses, refine, depth=0):
        self.box = box
        self.witnesses = witnesses
        self.refine = refine
        self.depth = depth


def compare_distance(nodes_a, nodes_b, theta_sq_lo, theta_sq_hi, depth_cap=40,
                     work_cap=200000):
    """Certified comparison of dist(A, B) against theta.

    Returns "less" (dist < theta), "geq" (dist >= theta), or raises
    PredicateUnresolved at the refinement cap.  theta is given by an exact
    rational enclosure of its square.
    """
    best_upper = None
    for na in nodes_a:
        for nb in nodes_b:
            u = min(
                point_dist_sq(p, q) for p in na.witnesses for q in nb.witnesses
            )
            if best_upper is None or u < best_upper:
                best_upper = u
    if best_upper is not None and best_upper < theta_sq_lo:
        return "less"
    heap = []
    count = 0
    for na in nodes_a:
        for nb in nodes_b:
            g = box_gap_sq(na.box, nb.box)
            if g < theta_sq_hi:
                heapq.heappush(heap, (g, count, na, nb))
                count += 1
    work = 0
    while heap:
        work += 1
        if work > work_cap:
            raise PredicateUnresolved("distance comparison exceeded work cap")
        g, _, na, nb = heapq.heappop(heap)
        if g >= theta_sq_hi:
            continue
        if na.depth >= depth_cap and nb.depth >= depth_cap:
            raise PredicateUnresolved("distance tie beyond refinement cap")
        # split the node with the larger box
        if (na.depth <= nb.depth and na.refine is not None) or nb.refine is None:
            children, other, swap = na.refine(), nb, False
        else:
            children, other, swap = nb.refine(), na, True
        for child in children:
            u = min(
                point_dist_sq(p, q)
                for p in child.witnesses
                for q in other.witnesses
            )
            if u < theta_sq_lo:
                return "less"
            g2 = box_gap_sq(child.box, other.box)
            if g2 < theta_sq_hi:
                pair = (other, child) if swap else (child, other)
                heapq.heappush(heap, (g2, count, pair[0], pair[1]))
                count += 1
    return "geq"


def distance_enclosure(nodes_a, nodes_b, width, depth_cap=40, work_cap=200000):
    """Rational (lo, hi) enclosing dist(A, B)^(2): refined to width or cap."""
    pairs = [(na, nb) for na in nodes_a for nb in nodes_b]
    upper = min(
        min(point_dist_sq(p, q) for p in na.witnesses for q in nb.witnesses)
        for na, nb in pairs
    )
    heap = [(box_gap_sq(na.box, nb.box), i, na, nb) for i, (na, nb) in enumerate(pairs)]
    heapq.heapify(heap)
    count = len(heap)
    work = 0
    while heap:
        work += 1
        if work > work_cap:
            break
        heap = [item for item in heap if item[0] < upper]
        heapq.heapify(heap)
        if not heap:
            break
        lower = heap[0][0]
        if upper - lower <= width:
            return lower, upper
        g, _, na, nb = heapq.heappop(heap)
        if na.depth >= depth_cap and nb.depth >= depth_cap:
            return lower, upper
        if na.depth <= nb.depth and na.refine is not None:
            children, other, swap = na.refine(), nb, False
        else:
            children, other, swap = nb.refine(), na, True
        for child in children:
            u = min(
                point_dist_sq(p, q)
                for p in child.witnesses
                for q in other.witnesses
            )
            upper = min(upper, u)
            g2 = box_gap_sq(child.box, other.box)
            if g2 < upper:
                heapq.heappush(heap, (g2, count, child, other))
                count += 1
    lower = min((item[0] for item in heap), default=upper)
    return lower, upper


def diameter_enclosure_sq(nodes, width, depth_cap=24, work_cap=200000):
    """Rational (lo, hi) enclosing diam(set)^2 by pairwise branch and bound."""
    pairs = []
    lower = Fraction(0)
    for i, na in enumerate(nodes):
        for nb in nodes[i:]:
            u = max(
                point_dist_sq(p, q) for p in na.witnesses for q in nb.witnesses
            )
            lower = max(lower, u)
            pairs.append((-box_farthest_sq(na.box, nb.box), na, nb))
    heapq.heapify(pairs)
    work = 0
    while pairs:
        work += 1
        neg_upper, na, nb = pairs[0]
        upper = -neg_upper
        if upper - lower <= width:
            return lower, upper
        if work > work_cap or (na.depth >= depth_cap and nb.depth >= depth_cap):
            return lower, upper
        heapq.heappop(pairs)
        if upper <= lower:
            return lower, max(lower, upper)
        if na.depth <= nb.depth and na.refine is not None:
            children, other = na.refine(), nb
        else:
            children, other = nb.refine(), na
        for child in children:
            u = max(
                point_dist_sq(p, q)
                for p in child.witnesses
                for q in other.witnesses
            )
            lower = max(lower, u)
            f = box_farthest_sq(child.box, other.box)
            if f > lower:
                heapq.heappush(pairs, (-f, child, other))
    return lower, lower


# -- OSC region verification -------------------------------------------------


def _is_signed_permutation(matrix):
    for row in matrix:
        nz = [v for v in row if v != 0]
        if len(nz) != 1 or abs(nz[0]) != 1:
            return False
    return True


def _polygon_vertices(sim, box):
    lo, hi = box
    if sim.dim != 2:
        raise RegionNotInvariant("general rotations supported in dimension 2 only")
    corners = [
        (lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])
    ]
    return [sim(c) for c in corners]


def _polygons_disjoint(p1, p2):
    """Separating-axis test for convex polygons (closed separation definition:
    touching boundaries count as disjoint open sets)."""
    for poly_a, poly_b in ((p1, p2), (p2, p1)):
        n = len(poly_a)
        for i in range(n):
            ax, ay = poly_a[i]
            bx, by = poly_a[(i + 1) % n]
            nx, ny = by - ay, ax - bx
            amax = max(nx * x + ny * y for x, y in poly_a)
            bmin = min(nx * x + ny * y for x, y in poly_b)
            if bmin >= amax:
                return True
    return False


def verify_osc_region(ifs, region):
    """Check that the region witnesses the OSC: images nest in and are
    pairwise disjoint.  Raises RegionNotInvariant on failure."""
    if region.dim != ifs.ambient_dim:
        raise RegionNotInvariant("region dimension mismatch")
    all_signed = all(_is_signed_permutation(s.orthogonal) for s in ifs.maps)
    if all_signed:
        images = []
        for s in ifs.maps:
            ims = []
            for b in region.boxes:
                ims.append(map_box(s, b))
            images.append(ims)
        for s, ims in zip(ifs.maps, images):
            for blo, bhi in ims:
                if not any(
                    all(blo[i] >= lo[i] and bhi[i] <= hi[i] for i in range(region.dim))
                    for lo, hi in region.boxes
                ):
                    raise RegionNotInvariant("an image escapes the region")
        for i in range(len(ifs.maps)):
            for j in range(i + 1, len(ifs.maps)):
                for b1 in images[i]:
                    for b2 in images[j]:
                        if boxes_intersect_open(b1, b2):
                            raise RegionNotInvariant(
                                f"images of maps {i} and {j} overlap"
                            )
        return True
    if ifs.ambient_dim != 2 or not region.is_single_box():
        raise RegionNotInvariant(
            "rotational OSC check needs a single box in dimension 2"
        )
    box = region.boxes[0]
    polys = [_polygon_vertices(s, box) for s in ifs.maps]
    lo, hi = box
    for poly in polys:
        for x, y in poly:
            if not (lo[0] <= x <= hi[0] and lo[1] <= y <= hi[1]):
                raise RegionNotInvariant("an image escapes the region")
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if not _polygons_disjoint(polys[i], polys[j]):
                raise RegionNotInvariant(f"images of maps {i} and {j} overlap")
    return True
