"""Forward engine: orbit multiplicity vectors and the factored zeta series.

For a collection of valuation targets (marked vertices for divisorial
valuations, arrows for curve valuations) carrying a symmetry of order h0,
the series is

    zeta(t_1, ..., t_r) = prod_sigma (1 - t^{M_sigma})^{-chi(E_sigma^o)}

over all vertices sigma of the full graph, where the i-th entry of M_sigma
sums the value at a curvette of E_sigma over the h0 translates of target i:
with o_i the number of distinct objects in orbit i,

    M_{sigma, i} = (h0 / o_i) * sum over the orbit of Minv[sigma][attach].

Vertices of one orbit produce equal exponent vectors and merge; chi = 0
vertices vanish.  With the trivial group this is the A'Campo-type product.

A weight-w arrow stands for w coincident branches; the group slots of
an orbit must cover its o*w components evenly, so o*w must divide h0.
Weights never enter M or chi beyond that bookkeeping: the exponent sum runs
over group translates and chi counts distinct underlying curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import NoTargets, OrderViolation, TargetNotInGraph, VariableCountMismatch
from .resolution import BlowUpGraph, OrbitTables, SymmetrySpec, validate_action
from .series import FactoredSeries, substitute

__all__ = [
    "ValuationTargets",
    "targets_from",
    "multiplicity_vectors",
    "zeta_factored",
    "collapse_to_one_variable",
    "check_projection_curve",
    "check_full_projection",
]


@dataclass(frozen=True)
class ValuationTargets:
    """Ordered orbit representatives defining the variables of zeta.

    mode is "divisorial" (representatives are marked vertices) or "curve"
    (representatives are arrow ids).  orbit i contributes variable t_i;
    orbit_sizes[i] counts distinct objects, weights[i] the coincidence
    multiplicity of each (1 for divisorial marks).
    """

    mode: str
    representatives: tuple
    orbits: tuple[tuple, ...]
    orbit_sizes: tuple[int, ...]
    weights: tuple[int, ...]
    isotropy: tuple[int, ...]  # k_i = h0 / o_i, the stabilizer of one object
    order: int

    @property
    def var_count(self) -> int:
        return len(self.representatives)


def targets_from(g: BlowUpGraph, sym: SymmetrySpec, mode: Optional[str] = None,
                 tables: Optional[OrbitTables] = None) -> ValuationTargets:
    """Group marks or arrows into orbits, deterministically ordered.

    Orbits are sorted by (minimal attach age, minimal multiplicity column) so
    the variable order is stable across runs.
    """
    if tables is None:
        tables = validate_action(g, sym)
    if mode is None:
        if g.marks and not g.arrows:
            mode = "divisorial"
        elif g.arrows and not g.marks:
            mode = "curve"
        elif g.marks and g.arrows:
            raise NoTargets("both marks and arrows present: pass the mode explicitly")
        else:
            raise NoTargets("the graph has neither marks nor arrows")

    def attach_of(obj):
        return obj if isinstance(obj, int) else g.arrow(obj).attach

    if mode == "divisorial":
        if not g.marks:
            raise NoTargets("divisorial mode needs marked vertices")
        orbit_ids = sorted({tables.vertex_orbit_of[m] for m in g.marks})
        orbits = [tables.vertex_orbits[i] for i in orbit_ids]
        for orb in orbits:
            if not set(orb) <= set(g.marks):
                raise TargetNotInGraph(f"orbit {orb} is only partially marked")
        weights = [1] * len(orbits)
    elif mode == "curve":
        if not g.arrows:
            raise NoTargets("curve mode needs arrows")
        orbit_ids = sorted({tables.arrow_orbit_of[a.id] for a in g.arrows})
        orbits = [tables.arrow_orbits[i] for i in orbit_ids]
        weights = [g.arrow(orb[0]).weight for orb in orbits]
        for orb, w in zip(orbits, weights):
            if sym.order % (len(orb) * w) != 0:
                raise OrderViolation(
                    f"orbit {orb}: {len(orb)} branches of weight {w} cannot carry "
                    f"{sym.order} group slots evenly"
                )
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def sort_key(orb):
        attaches = sorted(attach_of(x) for x in orb)
        ages = min(g.age(v) for v in attaches)
        cols = min(tuple(g.Minv[d - 1][v - 1] for d in range(1, g.n + 1)) for v in attaches)
        return (ages, cols, attaches)

    order = sorted(range(len(orbits)), key=lambda i: sort_key(orbits[i]))
    orbits = [orbits[i] for i in order]
    weights = [weights[i] for i in order]
    reps = [orb[0] for orb in orbits]
    sizes = [len(orb) for orb in orbits]
    return ValuationTargets(
        mode=mode,
        representatives=tuple(reps),
        orbits=tuple(tuple(o) for o in orbits),
        orbit_sizes=tuple(sizes),
        weights=tuple(weights),
        isotropy=tuple(sym.order // s for s in sizes),
        order=sym.order,
    )


def multiplicity_vectors(g: BlowUpGraph, sym: SymmetrySpec, targets: ValuationTargets) -> dict[int, tuple[int, ...]]:
    """The table vertex -> M-vector.  Constant on vertex orbits and pairwise
    distinct across the quotient graph."""
    tables = validate_action(g, sym)
    attach_lists = []
    for orb in targets.orbits:
        if targets.mode == "divisorial":
            attach_lists.append([v for v in orb])
        else:
            attach_lists.append([g.arrow(a).attach for a in orb])
    h0 = sym.order
    table: dict[int, tuple[int, ...]] = {}
    for d in range(1, g.n + 1):
        row = []
        for orb_attaches, o in zip(attach_lists, targets.orbit_sizes):
            s = sum(g.Minv[d - 1][v - 1] for v in orb_attaches)
            row.append((h0 // o) * s)
        table[d] = tuple(row)
    # Orbit constancy holds for any valid action.
    for orb in tables.vertex_orbits:
        vals = {table[v] for v in orb}
        if len(vals) != 1:
            raise OrderViolation(f"M-vector not constant on vertex orbit {orb}")
    if targets.mode == "curve":
        for d, row in table.items():
            if any(x < 1 for x in row):
                raise OrderViolation("curve-mode multiplicities must be positive")
    return table


def assert_quotient_distinct(g: BlowUpGraph, sym: SymmetrySpec, targets: ValuationTargets) -> None:
    """On the minimal resolution of the collection, M-vectors of distinct
    vertex orbits never coincide.  (On a larger model they may, and the
    factored product merges them.)"""
    tables = validate_action(g, sym)
    table = multiplicity_vectors(g, sym, targets)
    reps = [orb[0] for orb in tables.vertex_orbits]
    if len({table[v] for v in reps}) != len(reps):
        raise OrderViolation("two quotient vertices share one M-vector")


def zeta_factored(g: BlowUpGraph, sym: SymmetrySpec, targets: ValuationTargets) -> FactoredSeries:
    """The factored zeta series of the collection.

    chi is relative to the collection: E_sigma loses its intersection points
    with other components and with the strict transforms of the targeted
    branches only.  Arrows outside the collection do not puncture.
    """
    table = multiplicity_vectors(g, sym, targets)
    punctures: dict[int, int] = {d: 0 for d in range(1, g.n + 1)}
    if targets.mode == "curve":
        for orb in targets.orbits:
            for aid in orb:
                punctures[g.arrow(aid).attach] += 1
    entries = []
    for d in range(1, g.n + 1):
        chi = 2 - len(g.adjacency[d]) - punctures[d]
        if chi:
            entries.append((table[d], -chi))
    return FactoredSeries(targets.var_count, entries)


def collapse_to_one_variable(F: FactoredSeries) -> FactoredSeries:
    """All variables identified: for one curve orbit collection this is the
    monodromy zeta function of the symmetrized germ."""
    return substitute(F, [0] * F.var_count)


def check_projection_curve(g: BlowUpGraph, sym: SymmetrySpec, targets: ValuationTargets, i0: int) -> bool:
    """Verify the curve projection identity at index i0 (0-based).

    Setting t_{i0} = 1 in zeta must equal the zeta of the remaining orbits
    times the specialized binomial (1 - t^{M_{alpha_{i0}}})^{h0/k_{i0}},
    computed by an independent forward run on the reduced collection.
    """
    if targets.mode != "curve":
        raise ValueError("projection identity is specific to curve valuations")
    r = targets.var_count
    if r < 2:
        raise VariableCountMismatch("projection needs at least two orbits")
    full = zeta_factored(g, sym, targets)
    table = multiplicity_vectors(g, sym, targets)
    alpha = g.arrow(targets.representatives[i0]).attach
    m_alpha = table[alpha]

    keep = [None if i == i0 else (i if i < i0 else i - 1) for i in range(r)]
    lhs = substitute(full, keep)

    rest = ValuationTargets(
        mode="curve",
        representatives=tuple(x for i, x in enumerate(targets.representatives) if i != i0),
        orbits=tuple(x for i, x in enumerate(targets.orbits) if i != i0),
        orbit_sizes=tuple(x for i, x in enumerate(targets.orbit_sizes) if i != i0),
        weights=tuple(x for i, x in enumerate(targets.weights) if i != i0),
        isotropy=tuple(x for i, x in enumerate(targets.isotropy) if i != i0),
        order=targets.order,
    )
    rest_zeta = zeta_factored(g, sym, rest)
    dropped = tuple(x for i, x in enumerate(m_alpha) if i != i0)
    rhs = rest_zeta.merge(FactoredSeries(r - 1, [(dropped, targets.orbit_sizes[i0])]))
    return lhs == rhs


def check_full_projection(g: BlowUpGraph, sym: SymmetrySpec, targets: ValuationTargets, i0: int) -> bool:
    """Verify the full collapse: zeta with t_i = 1 for all i != i0 equals the
    solo zeta of orbit i0 times prod_{i != i0} (1 - t^{M_{alpha_i, i0}})^{h0/k_i}."""
    if targets.mode != "curve":
        raise ValueError("projection identity is specific to curve valuations")
    r = targets.var_count
    full = zeta_factored(g, sym, targets)
    table = multiplicity_vectors(g, sym, targets)
    keep = [0 if i == i0 else None for i in range(r)]
    lhs = substitute(full, keep)

    solo = ValuationTargets(
        mode="curve",
        representatives=(targets.representatives[i0],),
        orbits=(targets.orbits[i0],),
        orbit_sizes=(targets.orbit_sizes[i0],),
        weights=(targets.weights[i0],),
        isotropy=(targets.isotropy[i0],),
        order=targets.order,
    )
    rhs = zeta_factored(g, sym, solo)
    for i in range(r):
        if i == i0:
            continue
        alpha_i = g.arrow(targets.representatives[i]).attach
        rhs = rhs.merge(FactoredSeries(1, [((table[alpha_i][i0],), targets.orbit_sizes[i])]))
    return lhs == rhs
