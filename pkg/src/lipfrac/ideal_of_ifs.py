"""The Lipschitz-invariant ideal of an IFS.

Block route: the ideal of Z[p] generated by measure polynomials of blocks
strictly inside an SOSC region.  Exactness is certified on the closed type
graph: every type must either be reachable from an inside-realized seed
(its generator is justified), have its polynomial already inside the
computed ideal (so a later entry changes nothing), or carry a persistent
outside-witness proving it never lands inside the region.

Graph route: solve the dust-like graph-directed equations exactly in Q(beta)
and generate from the vertex measures reachable inside the region.
"""

from fractions import Fraction

from .errors import NotMember, SingularSystem, VerificationFailed
from .algebra.ideals import IdealLattice, ideal_hnf
from .algebra.numberspec import member_of_Zp
from .blocks import GeometryContext, discover_types

EXACT = "Exact"
LOWER_BOUND = "LowerBound"
NOT_APPLICABLE = "NotApplicable"


def ideal_from_blocks(ifs, region, k_max=8, ctx=None, graph=None):
    """(IdealLattice, status) from the block route.

    status is EXACT when the type graph closed and the certification covers
    every type; LOWER_BOUND otherwise (the lattice is then a certified
    sub-ideal of the true invariant).
    """
    ctx = ctx or GeometryContext(ifs)
    graph = graph or discover_types(ctx, region, k_max=k_max)
    spec = ifs.spec
    seeds = {i for i in range(graph.type_count()) if graph.inside_realized[i]}
    justified = graph.reachable_from(seeds)
    if not justified:
        return None, LOWER_BOUND
    gens = [spec.from_p_polynomial(graph.poly[i]) for i in sorted(justified)]
    lattice = ideal_hnf(gens, spec)
    if not graph.closed:
        return lattice, LOWER_BOUND
    whole = IdealLattice.whole_ring(spec)
    if lattice == whole:
        return lattice, EXACT
    leftovers = [
        i
        for i in range(graph.type_count())
        if i not in justified
        and not lattice.member(spec.from_p_polynomial(graph.poly[i]))
    ]
    if not leftovers:
        return lattice, EXACT
    never_inside = _certify_never_inside(graph, justified)
    if all(i in never_inside for i in leftovers):
        return lattice, EXACT
    return lattice, LOWER_BOUND


def _certify_never_inside(graph, justified):
    """Greatest set of types certified to never realize strictly inside the
    region: every realization carries an exact outside point whose lineage
    stays within the set; all their other children count as entry candidates
    and get excluded together with their descendants."""
    n = graph.type_count()
    capable = set(justified)
    while True:
        candidates = {
            i
            for i in range(n)
            if i not in capable
            and graph.outside_witness_ok[i]
            and graph.children[i] is not None
        }
        # drop candidates whose witness lineage escapes the candidate set
        changed = True
        while changed:
            changed = False
            for i in list(candidates):
                if not graph.outside_witness_children[i] <= candidates:
                    candidates.discard(i)
                    changed = True
        # entry candidates: non-witness children of certified-not-inside types
        entry = set()
        for i in candidates:
            for j in graph.children[i]:
                if j not in candidates:
                    entry.add(j)
        grown = graph.reachable_from(capable | entry)
        if grown == capable:
            return candidates
        capable = grown


class GraphDirected:
    """Explicit dust-like graph-directed data: vertex 0 is the root set."""

    def __init__(self, spec, n_vertices, edges):
        self.spec = spec
        self.n = int(n_vertices)
        self.edges = [(int(a), int(b), int(l)) for a, b, l in edges]
        for a, b, l in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n and l >= 1):
                raise ValueError("bad edge")

    @classmethod
    def from_type_graph(cls, graph):
        spec = graph.ctx.ifs.spec
        return cls(spec, graph.type_count(), graph.edges())

    def serialize(self):
        return {
            "vertices": self.n,
            "edges": [
                {"source": a, "target": b, "exponent": l} for a, b, l in self.edges
            ],
        }


def measure_vector(gd):
    """Exact solution of v_i = sum over edges i->j of p^l v_j, v_0 = 1.

    The solution space must be one-dimensional (dust-like, strongly
    connected usage); every entry is verified to lie in Z[p] and be positive.
    """
    spec = gd.spec
    p = spec.p()
    n = gd.n
    # rows of (Id - M) with M_ij = sum of p^l over edges i -> j
    m = [[spec.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        m[i][i] = spec.one()
    for a, b, l in gd.edges:
        m[a][b] = m[a][b] - p**l
    # kernel by exact Gaussian elimination
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(n):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [v - f * w for v, w in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv_cols]
    if len(free) != 1:
        raise SingularSystem(f"solution space has dimension {len(free)}")
    fc = free[0]
    v = [spec.zero()] * n
    v[fc] = spec.one()
    for i, c in enumerate(piv_cols):
        v[c] = -m[i][fc]
    if v[0].is_zero():
        raise SingularSystem("root coordinate vanishes")
    scale = v[0].inverse()
    v = [x * scale for x in v]
    for x in v:
        if not member_of_Zp(x):
            raise NotMember("a vertex measure falls outside Z[p]")
        if x.sign() <= 0:
            raise VerificationFailed("vertex measure is not positive")
    return v


def ideal_from_graph(gd, v_o, vector=None):
    """Ideal generated by the vertex measures reachable inside the region."""
    v = vector if vector is not None else measure_vector(gd)
    gens = [v[i] for i in sorted(set(v_o))]
    return ideal_hnf(gens, gd.spec)


def type_graph_v_o(graph):
    """Vertices of the discovered type graph reachable strictly inside the
    region (seeds plus their descendants)."""
    seeds = {i for i in range(graph.type_count()) if graph.inside_realized[i]}
    return sorted(graph.reachable_from(seeds))


def cosc_orthogonal_fast_path(ifs, convex_region):
    """Whole ring for orthogonal-homogeneous systems under the convex OSC;
    NOT_APPLICABLE when the syntactic test fails (no claim made)."""
    from .geometry import verify_osc_region
    from .errors import RegionNotInvariant

    if not convex_region.is_single_box():
        return None, NOT_APPLICABLE
    first = ifs.maps[0].orthogonal
    if any(s.orthogonal != first for s in ifs.maps[1:]):
        return None, NOT_APPLICABLE
    try:
        verify_osc_region(ifs, convex_region)
    except RegionNotInvariant:
        return None, NOT_APPLICABLE
    return IdealLattice.whole_ring(ifs.spec), EXACT
