"""Decorated resolution dual graphs from proximity data.

A modification of (C^2, 0) by point blow-ups is encoded by its proximity
structure: vertex k (1-based, in creation order) is proximate to the earlier
vertices whose exceptional components pass through the k-th blown-up point;
one vertex for a free point, two for a satellite point.  Everything else is
derived: the proximity matrix P (unit lower triangular with -1 entries), the
intersection matrix N = -P^T P, the multiplicity matrix Minv = (P^T P)^{-1}
whose (d, v) entry is the value of the valuation at vertex v on a curvette
at E_d, the dual tree, ages, and Euler characteristics of the punctured
components.

Rows of P^{-1} are the multiplicity sequences of curvettes, so
Minv = P^{-1} (P^{-1})^T is computed exactly in integer arithmetic.

Branches of a curve are attached as arrows; an arrow of weight w stands for
w coincident copies of one branch.  Divisorial valuations of interest are
marked vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    AgeViolation,
    InvalidPairs,
    InvalidProximity,
    NonUnimodular,
    NotMinimal,
    OrderViolation,
    StructureViolation,
    TargetNotInGraph,
)

__all__ = [
    "Arrow",
    "BlowUpGraph",
    "build_graph",
    "from_char_pairs",
    "SymmetrySpec",
    "OrbitTables",
    "validate_action",
    "trivial_symmetry",
    "canonical_key",
    "is_isomorphic",
    "contract_to_minimal",
    "ShapeReport",
    "classify_shape",
    "euclid_run",
    "mult_sequence_from_exponents",
    "proximities_from_mults",
    "exponents_from_generators",
]


@dataclass(frozen=True)
class Arrow:
    """A branch (or w coincident branches) crossing E_attach transversally."""

    id: str
    attach: int
    weight: int = 1


class BlowUpGraph:
    """Immutable blow-up sequence with arrows and marked vertices."""

    def __init__(self, proximities: Sequence[Iterable[int]], arrows: Sequence[Arrow] = (), marks: Sequence[int] = ()):
        prox = [frozenset(p) for p in proximities]
        n = len(prox)
        if n == 0:
            raise InvalidProximity("a modification needs at least one blow-up")
        if prox[0]:
            raise InvalidProximity("vertex 1 is the first blow-up and has no proximities")
        self.n = n
        self.prox = tuple(prox)

        # Incremental validity: track which component pairs currently meet.
        meeting: set[frozenset[int]] = set()
        for k in range(2, n + 1):
            p = prox[k - 1]
            if any(i < 1 or i >= k for i in p):
                raise InvalidProximity(f"vertex {k} proximate to a non-earlier vertex")
            if len(p) == 1:
                (i,) = p
                meeting.add(frozenset((i, k)))
            elif len(p) == 2:
                i, j = sorted(p)
                if frozenset((i, j)) not in meeting:
                    raise InvalidProximity(
                        f"vertex {k}: satellite point but E_{i} and E_{j} do not meet at that stage"
                    )
                meeting.discard(frozenset((i, j)))
                meeting.add(frozenset((i, k)))
                meeting.add(frozenset((j, k)))
            else:
                raise InvalidProximity(f"vertex {k} must be proximate to 1 or 2 vertices, got {len(p)}")

        self.arrows = tuple(arrows)
        seen_ids = set()
        for a in self.arrows:
            if not (1 <= a.attach <= n):
                raise TargetNotInGraph(f"arrow {a.id!r} attaches at missing vertex {a.attach}")
            if a.weight < 1:
                raise InvalidProximity(f"arrow {a.id!r} has weight {a.weight} < 1")
            if a.id in seen_ids:
                raise InvalidProximity(f"duplicate arrow id {a.id!r}")
            seen_ids.add(a.id)
        self.marks = tuple(sorted(set(marks)))
        for m in self.marks:
            if not (1 <= m <= n):
                raise TargetNotInGraph(f"mark at missing vertex {m}")

        # P^{-1}: row k is the multiplicity vector of a curvette at E_k.
        pinv = [[0] * n for _ in range(n)]
        for k in range(n):
            row = pinv[k]
            row[k] = 1
            for i in range(k - 1, -1, -1):
                # mu_i = sum of mu_j over j proximate to i within the closure
                row[i] = sum(row[j] for j in range(i + 1, k + 1) if (i + 1) in prox[j])
        self._pinv = pinv

        minv = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = 0
                ri, rj = pinv[i], pinv[j]
                for k in range(min(i, j) + 1):
                    v += ri[k] * rj[k]
                minv[i][j] = v
                minv[j][i] = v
        self.Minv = tuple(tuple(row) for row in minv)
        for i in range(n):
            for j in range(n):
                if minv[i][j] < 1:
                    raise NonUnimodular("multiplicity matrix has a non-positive entry")

        # Intersection matrix N = -P^T P and the dual edge set.
        ptp = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                s = (1 if i == j else 0)
                s -= (1 if (i + 1) in prox[j] else 0)
                s -= (1 if (j + 1) in prox[i] else 0)
                s += sum(1 for k in range(n) if (i + 1) in prox[k] and (j + 1) in prox[k])
                ptp[i][j] = s
        edges = set()
        for i in range(n):
            for j in range(i + 1, n):
                v = -ptp[i][j]
                if v == 1:
                    edges.add((i + 1, j + 1))
                elif v != 0:
                    raise NonUnimodular("off-diagonal intersection number not in {0, 1}")
        if len(edges) != n - 1:
            raise NonUnimodular("dual graph is not a tree")
        expected = {tuple(sorted(e)) for e in meeting}
        if expected != edges:
            raise NonUnimodular("incremental intersection tracking disagrees with N")
        self.N = tuple(tuple(-x for x in ptp[i]) for i in range(n))
        self.edges = frozenset(edges)
        adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        for i, j in edges:
            adj[i].add(j)
            adj[j].add(i)
        self.adjacency = {v: tuple(sorted(ws)) for v, ws in adj.items()}

        closures: list[frozenset[int]] = [frozenset()] * (n + 1)
        for k in range(1, n + 1):
            cl = {k}
            for i in self.prox[k - 1]:
                cl |= closures[i]
            closures[k] = frozenset(cl)
        self._closures = tuple(closures)
        self.ages = tuple(len(closures[k]) for k in range(1, n + 1))

        arrows_at: dict[int, list[Arrow]] = {v: [] for v in range(1, n + 1)}
        for a in self.arrows:
            arrows_at[a.attach].append(a)
        self.arrows_at = {v: tuple(l) for v, l in arrows_at.items()}
        # Each arrow is one underlying curve regardless of weight: coincident
        # copies puncture E_v at a single point.
        self.chi = tuple(
            2 - len(self.adjacency[v]) - len(self.arrows_at[v]) for v in range(1, n + 1)
        )

    # -- queries -------------------------------------------------------------

    def age(self, v: int) -> int:
        return self.ages[v - 1]

    def closure(self, v: int) -> frozenset[int]:
        return self._closures[v]

    def curvette_mults(self, v: int) -> tuple[int, ...]:
        """Multiplicities of a curvette at E_v at the points it passes."""
        return tuple(self._pinv[v - 1][: v])

    def euler(self, v: int) -> int:
        return self.chi[v - 1]

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise TargetNotInGraph(f"no arrow {arrow_id!r}")

    def tree_path(self, u: int, v: int) -> tuple[int, ...]:
        """Vertices of the unique dual-tree path from u to v."""
        parent = {u: 0}
        frontier = [u]
        while frontier and v not in parent:
            nxt = []
            for w in frontier:
                for x in self.adjacency[w]:
                    if x not in parent:
                        parent[x] = w
                        nxt.append(x)
            frontier = nxt
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        return tuple(reversed(path))

    def replace(self, arrows=None, marks=None) -> "BlowUpGraph":
        return BlowUpGraph(
            self.prox,
            self.arrows if arrows is None else arrows,
            self.marks if marks is None else marks,
        )

    def __repr__(self) -> str:
        return f"BlowUpGraph(n={self.n}, arrows={len(self.arrows)}, marks={list(self.marks)})"


def build_graph(proximities, arrows=(), marks=()) -> BlowUpGraph:
    """Validated graph with all derived data; see BlowUpGraph."""
    return BlowUpGraph(proximities, tuple(arrows), tuple(marks))


# -- characteristic pairs ----------------------------------------------------


def euclid_run(a: int, b: int) -> list[int]:
    """Multiplicities contributed by the subtractive Euclid chain of (a, b)."""
    if a < b:
        a, b = b, a
    out = []
    while b > 0:
        out.append(b)
        a = a - b
        if a < b:
            a, b = b, a
    return out


def mult_sequence_from_exponents(lams: Sequence[int]) -> list[int]:
    """Multiplicity sequence of the branch with characteristic exponents lams.

    lams[0] is the multiplicity; gcds e_k = gcd(lams[0..k]) must strictly
    decrease to the final value.
    """
    if not lams:
        return [1]
    seq: list[int] = []
    e = lams[0]
    prev = None
    for k, lam in enumerate(lams):
        if k == 0:
            continue
        a = lam - (prev if prev is not None else 0) if k > 1 else lam
        seq.extend(euclid_run(a, e))
        e = gcd(e, lam)
        prev = lam
    if not seq:
        seq = [lams[0]]
    return seq


def proximities_from_mults(mults: Sequence[int]) -> list[frozenset[int]]:
    """Proximity sets from a multiplicity sequence via the proximity equality.

    For i < n the points proximate to p_i form a consecutive run whose
    multiplicities sum exactly to m_i.
    """
    n = len(mults)
    prox = [set() for _ in range(n)]
    for i in range(n - 1):
        total = 0
        j = i + 1
        while total < mults[i]:
            if j >= n:
                raise InvalidPairs(f"multiplicity sequence {list(mults)} does not close at position {i + 1}")
            prox[j].add(i + 1)
            total += mults[j]
            j += 1
        if total != mults[i]:
            raise InvalidPairs(f"multiplicity sequence {list(mults)} overshoots at position {i + 1}")
    return [frozenset(p) for p in prox]


def exponents_from_generators(generators: Sequence[int]) -> list[int]:
    """Characteristic exponents from semigroup generators via the Zariski
    recursion gen_{k+1} = N_k gen_k + lam_{k+1} - lam_k, lam_1 = gen_1."""
    gens = list(generators)
    if gens[0] < 1:
        raise InvalidPairs(f"multiplicity must be positive, got {gens[0]}")
    lams = [gens[0]]
    if len(gens) >= 2:
        if gens[1] <= gens[0]:
            raise InvalidPairs(f"generators {gens} are not increasing")
        lams.append(gens[1])
    e_prev = gens[0]
    for k in range(2, len(gens)):
        e_here = gcd(e_prev, gens[k - 1])
        n_prev = e_prev // e_here
        lam = gens[k] - n_prev * gens[k - 1] + lams[-1]
        if lam <= lams[-1]:
            raise InvalidPairs(f"generators {gens} violate the semigroup growth condition")
        lams.append(lam)
        e_prev = e_here
    return lams


def from_char_pairs(pairs: Sequence[tuple[int, int]]) -> BlowUpGraph:
    """Minimal embedded resolution of the branch with the given Puiseux pairs.

    One arrow at the last vertex.  (1, 1) or the empty list is the smooth
    branch.
    """
    pairs = [tuple(p) for p in pairs]
    if pairs == [(1, 1)]:
        pairs = []
    for p, q in pairs:
        if p < 2 or q <= p or gcd(p, q) != 1:
            raise InvalidPairs(f"invalid characteristic pair ({p}, {q})")
    for (pa, qa), (pb, qb) in zip(pairs, pairs[1:]):
        if qb <= qa * pb:
            raise InvalidPairs(f"pair ({pb}, {qb}) does not deepen ({pa}, {qa})")
    if not pairs:
        mults = [1]
    else:
        ps = [p for p, _ in pairs]
        total = 1
        for p in ps:
            total *= p
        lams = [total]
        for k, (_, q) in enumerate(pairs):
            rest = 1
            for pp in ps[k + 1:]:
                rest *= pp
            lams.append(q * rest)
        mults = mult_sequence_from_exponents(lams)
    prox = proximities_from_mults(mults)
    n = len(mults)
    return BlowUpGraph(prox, arrows=(Arrow("a", n, 1),))


# -- symmetry ---------------------------------------------------------------


@dataclass(frozen=True)
class SymmetrySpec:
    """Abstract finite symmetry: a declared order and decorated-graph
    automorphisms acting on vertices and arrows simultaneously.

    Only the order and the orbit partition enter any formula, so the action
    need not be faithful; the generated group order must divide ``order``.
    """

    order: int
    generators: tuple[tuple[Mapping[int, int], Mapping[str, str]], ...] = ()

    def __post_init__(self):
        if self.order < 1:
            raise OrderViolation(f"group order must be >= 1, got {self.order}")


def trivial_symmetry(order: int = 1) -> SymmetrySpec:
    return SymmetrySpec(order, ())


@dataclass(frozen=True)
class OrbitTables:
    vertex_orbits: tuple[tuple[int, ...], ...]
    arrow_orbits: tuple[tuple[str, ...], ...]
    vertex_orbit_of: Mapping[int, int]
    arrow_orbit_of: Mapping[str, int]
    isotropy: tuple[int, ...]  # per vertex orbit: order / |orbit|
    group_order: int  # order of the generated permutation group

    def vertex_orbit(self, v: int) -> tuple[int, ...]:
        return self.vertex_orbits[self.vertex_orbit_of[v]]

    def arrow_orbit(self, a: str) -> tuple[str, ...]:
        return self.arrow_orbits[self.arrow_orbit_of[a]]


def _complete_perm(perm: Mapping, domain: Iterable) -> dict:
    out = dict(perm)
    for x in domain:
        out.setdefault(x, x)
    vals = sorted(str(v) for v in out.values())
    keys = sorted(str(k) for k in out)
    if vals != keys:
        raise StructureViolation(f"mapping {perm} is not a permutation")
    return out


def validate_action(g: BlowUpGraph, sym: SymmetrySpec) -> OrbitTables:
    """Check every SymmetrySpec invariant and return the orbit tables."""
    verts = range(1, g.n + 1)
    arrow_ids = [a.id for a in g.arrows]
    vperms = []
    aperms = []
    for vp_raw, ap_raw in sym.generators:
        vp = _complete_perm(vp_raw, verts)
        ap = _complete_perm(ap_raw, arrow_ids)
        for v in verts:
            if vp[v] not in range(1, g.n + 1):
                raise StructureViolation(f"vertex {v} maps outside the graph")
            if g.age(vp[v]) != g.age(v):
                raise AgeViolation(f"generator does not preserve the age of vertex {v}")
            if {vp[i] for i in g.prox[v - 1]} != set(g.prox[vp[v] - 1]):
                raise StructureViolation(f"generator does not preserve proximity at vertex {v}")
        if {vp[m] for m in g.marks} != set(g.marks):
            raise StructureViolation("generator does not preserve the mark set")
        by_id = {a.id: a for a in g.arrows}
        for a in g.arrows:
            img = by_id.get(ap[a.id])
            if img is None:
                raise StructureViolation(f"arrow {a.id!r} maps outside the arrow set")
            if img.attach != vp[a.attach] or img.weight != a.weight:
                raise StructureViolation(f"generator does not preserve arrow {a.id!r}")
        vperms.append(vp)
        aperms.append(ap)

    # Orbits under the generated group: closure under generators suffices.
    def orbits(items, perms):
        index = {}
        out = []
        for x in items:
            if x in index:
                continue
            orb = {x}
            frontier = [x]
            while frontier:
                y = frontier.pop()
                for p in perms:
                    z = p[y]
                    if z not in orb:
                        orb.add(z)
                        frontier.append(z)
            for y in orb:
                index[y] = len(out)
            out.append(tuple(sorted(orb)))
        return out, index

    vorbits, vindex = orbits(list(verts), vperms)
    aorbits, aindex = orbits(arrow_ids, aperms)

    # Order of the generated permutation group (tiny here): BFS closure.
    ident = (tuple(range(1, g.n + 1)), tuple(arrow_ids))
    gens = [
        (tuple(vp[v] for v in verts), tuple(ap[a] for a in arrow_ids))
        for vp, ap in zip(vperms, aperms)
    ]
    group = {ident}
    frontier = [ident]
    cap = 16 * sym.order + 16
    while frontier:
        cur = frontier.pop()
        for gv, ga in gens:
            nv = tuple(gv[v - 1] for v in cur[0])
            na_index = {a: i for i, a in enumerate(arrow_ids)}
            na = tuple(ga[na_index[a]] for a in cur[1])
            nxt = (nv, na)
            if nxt not in group:
                group.add(nxt)
                frontier.append(nxt)
                if len(group) > cap:
                    raise OrderViolation("generated group exceeds any divisor of the declared order")
    if sym.order % len(group) != 0:
        raise OrderViolation(
            f"generated group has order {len(group)}, which does not divide h0={sym.order}"
        )
    for orb in vorbits:
        if sym.order % len(orb) != 0:
            raise OrderViolation(f"vertex orbit {orb} size does not divide h0={sym.order}")
    for orb in aorbits:
        if sym.order % len(orb) != 0:
            raise OrderViolation(f"arrow orbit {orb} size does not divide h0={sym.order}")

    # Orbit members must look identical through the multiplicity matrix.
    for vp in vperms:
        for d in verts:
            for v in verts:
                if g.Minv[d - 1][v - 1] != g.Minv[vp[d] - 1][vp[v] - 1]:
                    raise StructureViolation("multiplicity matrix is not orbit-equivariant")

    isotropy = tuple(sym.order // len(orb) for orb in vorbits)
    return OrbitTables(
        vertex_orbits=tuple(vorbits),
        arrow_orbits=tuple(aorbits),
        vertex_orbit_of=vindex,
        arrow_orbit_of=aindex,
        isotropy=isotropy,
        group_order=len(group),
    )


# -- canonical form ----------------------------------------------------------


def _canon_label(g: BlowUpGraph, v: int, parent: int) -> str:
    kids = sorted(
        _canon_label(g, w, v) for w in g.adjacency[v] if w != parent
    )
    weights = sorted(a.weight for a in g.arrows_at[v])
    mark = 1 if v in g.marks else 0
    return f"({g.age(v)},{mark},{weights},[" + ",".join(kids) + "])"


def canonical_key(g: BlowUpGraph) -> bytes:
    """Canonical form of the decorated dual tree, rooted at the age-1 vertex.

    Equal keys iff the graphs are isomorphic as trees with ages, arrow weight
    multisets and mark flags (arrow ids are not part of the type).
    """
    root = 1  # the first blow-up is the unique age-1 vertex
    return _canon_label(g, root, 0).encode()


def is_isomorphic(g1: BlowUpGraph, g2: BlowUpGraph) -> bool:
    return canonical_key(g1) == canonical_key(g2)


# -- minimality --------------------------------------------------------------


def contract_to_minimal(g: BlowUpGraph) -> BlowUpGraph:
    """Blow down superfluous exceptional components.

    A final vertex (no later point is proximate to it) can be contracted when
    it is unmarked and the blown-down configuration stays a resolution of the
    marked objects: the point it collapses to must not acquire two branches,
    or a branch sitting on an intersection of components.  Counting contact
    points on E_v (proximity targets plus one per distinct attached arrow)
    the condition is: at most 2 contacts.  A single arrow on a contracted
    free vertex slides to the vertex below.  Iterates to a fixpoint.
    """
    prox = [set(p) for p in g.prox]
    arrows = list(g.arrows)
    marks = set(g.marks)
    alive = list(range(1, len(prox) + 1))

    def referenced(v):
        return any(v in prox[k - 1] for k in alive if k != v)

    changed = True
    while changed:
        changed = False
        for v in sorted(alive, reverse=True):  # max age first
            if v == 1 or v in marks or referenced(v):
                continue
            here = [a for a in arrows if a.attach == v]
            contacts = len(prox[v - 1]) + len(here)
            if contacts > 2:
                continue
            if here and len(prox[v - 1]) == 2:
                continue  # branch would land on an intersection point
            if len(here) > 1:
                continue  # two branches would share a point
            if here:
                (parent,) = prox[v - 1]
                arrows = [a for a in arrows if a.attach != v] + [
                    Arrow(here[0].id, parent, here[0].weight)
                ]
            alive.remove(v)
            changed = True
            break

    alive.sort()
    renumber = {old: new + 1 for new, old in enumerate(alive)}
    new_prox = [frozenset(renumber[i] for i in prox[old - 1]) for old in alive]
    new_arrows = tuple(
        Arrow(a.id, renumber[a.attach], a.weight) for a in sorted(arrows, key=lambda a: a.id)
    )
    new_marks = tuple(sorted(renumber[m] for m in marks))
    return BlowUpGraph(new_prox, new_arrows, new_marks)


# -- shape classification ----------------------------------------------------


@dataclass(frozen=True)
class ShapeReport:
    """Landmarks of a single valuation's minimal graph under the action."""

    target: object  # mark vertex or arrow id
    attach: int
    geodesic: tuple[int, ...]  # vertices from the initial vertex to attach
    dead_ends: tuple[int, ...]  # sigma_0 .. sigma_g
    ruptures: tuple[int, ...]  # tau_1 .. tau_g
    generators: tuple[int, ...]  # m at the dead ends (semigroup generators)
    quotients: tuple[int, ...]  # N_q = m(tau_q) / m(sigma_q)
    terminal_m: int  # m at the attach vertex
    splitting: tuple[tuple[int, int], ...]  # (vertex on geodesic, h0/h_j) with increasing ratio
    orbit_size: int  # copies of the target under the action
    quotient_vertices: tuple[int, ...]  # the fixed section of the quotient graph


def classify_shape(g: BlowUpGraph, sym: SymmetrySpec, target) -> ShapeReport:
    """Dead ends, ruptures, quotients and the splitting ladder of one target.

    ``target`` is a marked vertex (int) or an arrow id (str).  Works on the
    target's own minimal resolution, the subgraph of its ancestor closure;
    raises NotMinimal if the ambient graph carries superfluous vertices for
    that subobject.
    """
    if isinstance(target, str):
        arrow = g.arrow(target)
        attach = arrow.attach
    else:
        if target not in g.marks:
            raise TargetNotInGraph(f"vertex {target} is not marked")
        arrow = None
        attach = target

    cl = sorted(g.closure(attach))
    renumber = {old: new + 1 for new, old in enumerate(cl)}
    solo_prox = [frozenset(renumber[i] for i in g.prox[old - 1]) for old in cl]
    if arrow is None:
        solo = BlowUpGraph(solo_prox, marks=(renumber[attach],))
    else:
        solo = BlowUpGraph(solo_prox, arrows=(Arrow("t", renumber[attach], arrow.weight),))
    if contract_to_minimal(solo).n != solo.n:
        raise NotMinimal("ancestor closure of the target is not its minimal resolution")

    tables = validate_action(g, sym)
    col = [solo.Minv[d - 1][solo.n - 1] for d in range(1, solo.n + 1)]
    geod_solo = solo.tree_path(1, solo.n)
    geodesic = tuple(cl[v - 1] for v in geod_solo)
    if solo.n > 1 and len(solo.adjacency[1]) != 1:
        raise NotMinimal("the initial vertex is not an end of the single-target graph")

    # A rupture carries a side chain: interior geodesic vertices of valence
    # >= 3, and the terminal vertex when anything hangs off it.
    side_ends = [v for v in range(2, solo.n + 1) if len(solo.adjacency[v]) == 1 and v != solo.n]
    ruptures_solo = []
    for v in geod_solo[1:]:
        sides = len(solo.adjacency[v]) - (2 if v != geod_solo[-1] else 1)
        if sides > 1:
            raise NotMinimal("a geodesic vertex carries more than one side chain")
        if sides == 1:
            ruptures_solo.append(v)
    ruptures_solo.sort(key=lambda v: col[v - 1])
    dead_solo = [1] + sorted(side_ends, key=lambda v: col[v - 1])
    if len(dead_solo) != len(ruptures_solo) + 1:
        raise NotMinimal("dead ends and ruptures do not pair up")
    generators = tuple(col[v - 1] for v in dead_solo)
    quotients = []
    for q, tau in enumerate(ruptures_solo, start=1):
        m_tau, m_sig = col[tau - 1], generators[q]
        if m_tau % m_sig:
            raise NotMinimal("rupture multiplicity is not a multiple of its dead end")
        quotients.append(m_tau // m_sig)
    prod = 1
    for nq in quotients:
        prod *= nq
    if generators[0] != prod:
        raise NotMinimal("m(sigma_0) differs from the product of the quotients")

    # Splitting points: the last vertex before the orbit size grows; copies
    # of the segment below a splitting point are identified at it.
    iso_of = {}
    for idx, orb in enumerate(tables.vertex_orbits):
        for v in orb:
            iso_of[v] = tables.isotropy[idx]
    splitting = []
    ratio = 1
    for pos, v in enumerate(geodesic):
        r = sym.order // iso_of[v]
        if r != ratio:
            if r % ratio:
                raise OrderViolation("isotropy orders along the geodesic do not nest")
            splitting.append((geodesic[pos - 1] if pos else geodesic[0], r))
            ratio = r
    if arrow is None:
        orbit_size = sym.order // iso_of[geodesic[-1]]
    else:
        orbit_size = len(tables.arrow_orbit(target))

    return ShapeReport(
        target=target,
        attach=attach,
        geodesic=geodesic,
        dead_ends=tuple(cl[v - 1] for v in dead_solo),
        ruptures=tuple(cl[v - 1] for v in ruptures_solo),
        generators=generators,
        quotients=tuple(quotients),
        terminal_m=col[solo.n - 1],
        splitting=tuple(splitting),
        orbit_size=orbit_size,
        quotient_vertices=tuple(cl),
    )
