"""The Bruhat-Tits tree of PGL_2 over the series field, and branch oracles.

Vertices are balls B_z^[r]: a center z mod t^r and an integer level r.
The maximal order attached to B_z^[r] is g M_2(O) g^-1 for
g = [[z, t^r], [1, 0]], and the branch of an integral matrix q is the
set of vertices whose order contains q.  ``member`` evaluates that
containment exactly; everything else in this module is bookkeeping on a
finite window of the tree plus certified measurements on oracle sets.

Windows are balls around the base vertex B_0^[0].  Balls are
geodesically convex, so graph distances measured inside a window agree
with tree distances, and a breadth-first search toward the complement
of a member set under-approximates nothing once it stays clear of the
window boundary.  That is the whole certification story: a measured
quantity is trusted only where the boundary provably cannot interfere.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

from .mat2 import Mat2
from .series import (Series, UndeterminedAtPrecision, s_add, s_from_terms,
                     s_mul, s_render, s_val, val_ge)

INFINITE_DEPTH = 10 ** 9


def reduce_center(z: Series, r: int) -> Series:
    """z mod t^r as an exact series; needs z known at least mod t^r."""
    if z.prec is not None and z.prec < r:
        raise UndeterminedAtPrecision(
            f"center known mod t^{z.prec} but needed mod t^{r}")
    return s_from_terms(z.field, {e: c for e, c in z.terms() if e < r})


@dataclass(frozen=True)
class Vertex:
    """The ball B_z^[r].  The stored center is always reduced mod t^r."""

    r: int
    center: Series

    def __post_init__(self):
        object.__setattr__(self, "center", reduce_center(self.center, self.r))

    def render(self) -> str:
        return f"B[{s_render(self.center)}]^{self.r}"

    def __repr__(self):
        return f"Vertex({self.render()})"


def tree_distance(v: Vertex, w: Vertex) -> int:
    """Path distance: (r1 - m) + (r2 - m) with m = min(r1, r2, val(z1+z2))."""
    m = min(v.r, w.r, s_val(s_add(v.center, w.center)))
    return (v.r - m) + (w.r - m)


def vertex_neighbors(v: Vertex) -> list[Vertex]:
    """The 2^tau + 1 adjacent balls: one up a level, 2^tau down."""
    fld = v.center.field
    out = [Vertex(v.r - 1, v.center)]
    for c in fld.elements():
        out.append(Vertex(v.r + 1, s_add(v.center, s_from_terms(fld, {v.r: c}))))
    return out


@dataclass
class Window:
    """All vertices within ``radius`` of the base vertex, with adjacency."""

    fld: object
    radius: int
    root: Vertex
    vertices: list[Vertex]
    dist_root: dict[Vertex, int]
    adj: dict[Vertex, list[Vertex]] = dc_field(repr=False, default_factory=dict)

    def __contains__(self, v: Vertex) -> bool:
        return v in self.dist_root

    def boundary_distance(self, v: Vertex) -> int:
        return self.radius - self.dist_root[v]


def enumerate_window(fld, radius: int) -> Window:
    root = Vertex(0, s_from_terms(fld, {}))
    dist = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in vertex_neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    win = Window(fld, radius, root, order, dist)
    win.adj = {v: [w for w in vertex_neighbors(v) if w in dist] for v in order}
    return win


# -- the membership oracle ------------------------------------------

def member(q: Mat2, v: Vertex) -> bool:
    """Whether q lies in the maximal order of v.  Exact for exact input.

    Conjugating by g = [[z, t^r], [1, 0]] sends q = [[A,B],[C,D]] to
    [[Cz+D, C t^r], [t^-r (Cz^2+(A+D)z+B), A+Cz]], so membership is four
    valuation bounds, the interesting one being the characteristic
    quadratic of q evaluated at the center.
    """
    z, r = v.center, v.r
    cz = s_mul(q.c, z)
    if not val_ge(s_add(cz, q.d), 0):
        return False
    if not val_ge(q.c, -r):
        return False
    if not val_ge(s_add(q.a, cz), 0):
        return False
    quad = s_add(s_add(s_mul(s_mul(q.c, z), z),
                       s_mul(s_add(q.a, q.d), z)), q.b)
    return val_ge(quad, r)


def oracle_branch(q: Mat2, window: Window) -> set[Vertex]:
    return {v for v in window.vertices if member(q, v)}


# -- certified measurement ------------------------------------------

def local_depths(members: set[Vertex], window: Window) -> dict[Vertex, int]:
    """Distance from each member to the nearest in-window non-member.

    Values are measured in the window graph, hence over-estimates near
    the boundary; a value is exact once it is <= the vertex's distance
    to the boundary (the certification rule used throughout).
    """
    outside = [v for v in window.vertices if v not in members]
    depth = {v: 0 for v in outside}
    queue = deque(outside)
    while queue:
        v = queue.popleft()
        for w in window.adj[v]:
            if w not in depth:
                depth[w] = depth[v] + 1
                queue.append(w)
    return {v: depth.get(v, INFINITE_DEPTH) for v in members}


@dataclass
class MeasuredBranch:
    """Certified summary of one oracle set: its deep core and depth."""

    members: set[Vertex]
    core: set[Vertex]
    depth: int | None
    certified: bool
    note: str = ""


def measure_branch(members: set[Vertex], window: Window,
                   margin: int = 2) -> MeasuredBranch:
    """Extract the stem (deepest certified vertices) of a thick shape.

    The maximal certified local depth D must be attained at a vertex
    at least D + margin away from the window boundary; that excludes
    the spurious "shells" of uniformly deep vertices that a boundary
    cut manufactures.  The core is then exactly the true stem clipped
    to the ball of radius (radius - D), and depth = D - 1 is exact.
    """
    if not members:
        return MeasuredBranch(members, set(), None, False, "empty set")
    ld = local_depths(members, window)
    certified = {v: d for v, d in ld.items()
                 if d <= window.boundary_distance(v)}
    if not certified:
        return MeasuredBranch(members, set(), None, False,
                              "no certified vertex")
    dstar = max(certified.values())
    guard = any(d == dstar and window.boundary_distance(v) >= dstar + margin
                for v, d in certified.items())
    core = {v for v, d in certified.items() if d == dstar}
    return MeasuredBranch(members, core, dstar - 1, guard,
                          "" if guard else "depth maximum too close to boundary")


def set_distance(a: set[Vertex], b: set[Vertex], window: Window):
    """Min distance between two disjoint vertex sets, with its realizers."""
    depth = {v: 0 for v in a}
    parent = {}
    queue = deque(a)
    while queue:
        v = queue.popleft()
        if v in b:
            u = v
            while u not in a:
                u = parent[u]
            return depth[v], u, v
        for w in window.adj[v]:
            if w not in depth:
                depth[w] = depth[v] + 1
                parent[w] = v
                queue.append(w)
    return None, None, None


def set_diameter(members: set[Vertex], window: Window):
    """Diameter of a connected set via double sweep, with its realizers."""

    def far(src):
        depth = {src: 0}
        queue = deque([src])
        best = (0, src)
        while queue:
            v = queue.popleft()
            if v in members and depth[v] > best[0]:
                best = (depth[v], v)
            for w in window.adj[v]:
                if w not in depth:
                    depth[w] = depth[v] + 1
                    queue.append(w)
        return best
    v0 = next(iter(members))
    _, a = far(v0)
    d, b = far(a)
    return d, a, b


def is_path_set(members: set[Vertex], window: Window) -> bool:
    """A nonempty connected set is a path iff its diameter is size - 1."""
    d, _, _ = set_diameter(members, window)
    return d == len(members) - 1


def complete_in_window(members: set[Vertex], window: Window,
                       margin: int = 2) -> bool:
    """Certificate that a convex member set does not continue past the cut.

    If the true set had a vertex outside, convexity would force members
    at every boundary distance down to 0, so staying ``margin`` clear of
    the cut proves the window saw everything.
    """
    return bool(members) and all(window.boundary_distance(v) >= margin
                                 for v in members)


@dataclass
class MeasuredShape:
    """What the window measurement actually saw of a stem intersection.

    kind is one of: disjoint, path, ray, maxpath, blob, contained.
    Unset fields do not apply to the kind.  ``certified`` means every
    number reported was pinned down inside the window per the margin
    rules; an uncertified shape is a request for a larger window, not
    evidence of anything.
    """

    kind: str
    certified: bool
    distance: int | None = None
    length: int | None = None
    diameter: int | None = None
    depth: int | None = None
    stem_is_edge: bool | None = None
    containment: str | None = None
    note: str = ""


def _measure_paths_meet(stem1, stem2, window, margin, base_certified, dref):
    """Compare two measured stems.  ``dref`` is the largest core depth
    among the non-foliage sides; cores are exact only out to boundary
    distance dref, so that is where "reaches the window cut" begins."""
    inter = stem1 & stem2
    if not inter:
        d, u, v = set_distance(stem1, stem2, window)
        if d is None:
            return MeasuredShape("disjoint", False,
                                 note="no connecting path in window")
        ok = (base_certified
              and window.boundary_distance(u) >= dref + margin
              and window.boundary_distance(v) >= dref + margin)
        return MeasuredShape("disjoint", ok, distance=d)
    if not is_path_set(inter, window):
        return MeasuredShape("path", False, length=len(inter) - 1,
                             note="stem intersection is not a path")
    if len(inter) == 1:
        ends = list(inter)
    else:
        ends = [v for v in inter
                if sum(1 for w in window.adj[v] if w in inter) <= 1]
    cut_ends = [v for v in ends
                if window.boundary_distance(v) < dref + margin]
    if len(cut_ends) >= 2:
        return MeasuredShape("maxpath", base_certified, length=len(inter) - 1)
    if len(cut_ends) == 1:
        return MeasuredShape("ray", base_certified, length=len(inter) - 1)
    return MeasuredShape("path", base_certified, length=len(inter) - 1)


def _measure_foliage_meet(s1, s2, window, margin):
    if s1 <= s2 or s2 <= s1:
        side = "1in2" if s1 <= s2 else "2in1"
        return MeasuredShape("contained", bool(s1 and s2), containment=side)
    inter = s1 & s2
    if not inter:
        d, u, v = set_distance(s1, s2, window)
        if d is None:
            return MeasuredShape("disjoint", False,
                                 note="no connecting path in window")
        ok = (window.boundary_distance(u) >= margin
              and window.boundary_distance(v) >= margin)
        return MeasuredShape("disjoint", ok, distance=d)
    diam, _, _ = set_diameter(inter, window)
    complete = complete_in_window(inter, window, margin)
    ld = local_depths(inter, window)
    certified = {v: d for v, d in ld.items()
                 if d <= window.boundary_distance(v)}
    if not certified:
        return MeasuredShape("blob", False, diameter=diam,
                             note="no certified vertex in the meet")
    dstar = max(certified.values())
    guard = any(d == dstar and window.boundary_distance(v) >= dstar + margin
                for v, d in certified.items())
    stem = {v for v, d in certified.items() if d == dstar}
    return MeasuredShape("blob", complete and guard, diameter=diam,
                         depth=dstar - 1, stem_is_edge=len(stem) == 2)


def measure_intersection(pair, window: Window, margin: int = 2,
                         sets=None) -> MeasuredShape:
    """Measure the relative position of the two stems of a generating pair.

    Foliage branches (reducible inseparable factors) are their own
    stems; every other class has a deep core extracted by
    measure_branch.  The result mirrors the vocabulary of the position
    predictor so the two can be compared verbatim.  ``sets`` substitutes
    precomputed member sets for the oracle ones; the self-test uses that
    to dry-run the measurement on predicted sets and decide whether the
    window is big enough before looking at the real thing.
    """
    from .defects import REDUCIBLE_INSEP
    if sets is None:
        s1 = oracle_branch(pair.q1, window)
        s2 = oracle_branch(pair.q2, window)
    else:
        s1, s2 = sets
    fol1 = pair.m1.kind == REDUCIBLE_INSEP
    fol2 = pair.m2.kind == REDUCIBLE_INSEP
    if fol1 and fol2:
        return _measure_foliage_meet(s1, s2, window, margin)
    certified = True
    dref = 0
    stems = []
    for s, fol in ((s1, fol1), (s2, fol2)):
        if fol:
            stems.append(s)
            continue
        mb = measure_branch(s, window, margin)
        stems.append(mb.core)
        certified = certified and mb.certified
        if mb.depth is not None:
            dref = max(dref, mb.depth + 1)
    if not stems[0] or not stems[1]:
        return MeasuredShape("disjoint", False, note="missing stem")
    return _measure_paths_meet(stems[0], stems[1], window, margin,
                               certified, dref)


# -- export ---------------------------------------------------------

def dot_export(window: Window, groups: dict[str, set[Vertex]] | None = None,
               title: str = "window") -> str:
    """GraphViz rendering of a window; groups map fill colors to sets."""
    groups = groups or {}
    idx = {v: i for i, v in enumerate(window.vertices)}
    lines = [f'graph "{title}" {{', "  node [shape=circle, fontsize=8];"]
    for v, i in idx.items():
        color = next((c for c, s in groups.items() if v in s), None)
        style = f', style=filled, fillcolor="{color}"' if color else ""
        lines.append(f'  n{i} [label="{v.render()}"{style}];')
    seen = set()
    for v in window.vertices:
        for w in window.adj[v]:
            key = (min(idx[v], idx[w]), max(idx[v], idx[w]))
            if key not in seen:
                seen.add(key)
                lines.append(f"  n{key[0]} -- n{key[1]};")
    lines.append("}")
    return "\n".join(lines)
