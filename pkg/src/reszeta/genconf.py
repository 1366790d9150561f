"""Random admissible configurations for the round-trip suites.

Two independent sources: raw random proximity sequences with trivial
symmetry (exercising arbitrary tree shapes), and randomly sampled branch
profiles with splitting ladders expanded to symmetric graphs (exercising
nontrivial group actions).  Invalid samples are rejected and redrawn, so
every returned configuration passes full validation.
"""

from __future__ import annotations

import random
from math import gcd
from typing import Optional

from .reconstruct import BranchProfile, _assemble, _branch_chain, _contact_values
from .resolution import (
    Arrow,
    BlowUpGraph,
    SymmetrySpec,
    contract_to_minimal,
    proximities_from_mults,
    trivial_symmetry,
    validate_action,
)
from .zeta import targets_from

__all__ = ["random_configuration", "theorem1_hypothesis_holds"]


def _random_raw_graph(rng: random.Random, mode: str, max_vertices: int, r_max: int):
    """Raw proximity sequence with trivial symmetry."""
    n = rng.randint(2, max_vertices)
    prox: list[frozenset[int]] = [frozenset()]
    meeting: set[tuple[int, int]] = set()
    for k in range(2, n + 1):
        pairs = sorted(meeting)
        if pairs and rng.random() < 0.45:
            i, j = rng.choice(pairs)
            meeting.discard((i, j))
            prox.append(frozenset((i, j)))
            meeting.add((min(i, k), max(i, k)))
            meeting.add((min(j, k), max(j, k)))
        else:
            i = rng.randint(1, k - 1)
            prox.append(frozenset((i,)))
            meeting.add((min(i, k), max(i, k)))
    r = rng.randint(1, r_max)
    if mode == "divisorial":
        marks = rng.sample(range(1, n + 1), min(r, n))
        return BlowUpGraph(prox, marks=tuple(marks)), trivial_symmetry(1)
    attach = rng.sample(range(1, n + 1), min(r, n))
    arrows = tuple(Arrow(f"a{i}", v, 1) for i, v in enumerate(attach))
    return BlowUpGraph(prox, arrows=arrows), trivial_symmetry(1)


def _random_generators(rng: random.Random) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Semigroup generators and quotients from random characteristic pairs."""
    g = rng.choice([0, 0, 0, 1, 1, 2])
    ps, qs = [], []
    for k in range(g):
        p = rng.choice([2, 2, 3])
        lo = (qs[-1] * p + 1) if qs else (p + 1)
        q = lo + rng.randint(0, 4)
        while gcd(p, q) != 1:
            q += 1
        ps.append(p)
        qs.append(q)
    if g == 0:
        return (1,), ()
    gens = [1]
    total = 1
    for p in ps:
        total *= p
    lams = [total]
    for k, q in enumerate(qs):
        rest = 1
        for p in ps[k + 1:]:
            rest *= p
        lams.append(q * rest)
    gens = [lams[0], lams[1]]
    e = gcd(lams[0], lams[1])
    for k in range(2, g + 1):
        n_prev = (gcd(*gens[:-1]) if len(gens) > 2 else gens[0]) // gcd(*gens)
        gens.append(n_prev * gens[-1] + lams[k] - lams[k - 1])
    quots = []
    e = gens[0]
    for v in gens[1:]:
        e_next = gcd(e, v)
        quots.append(e // e_next)
        e = e_next
    return tuple(gens), tuple(quots)


def _random_profile(rng: random.Random, mode: str, h0: int) -> Optional[BranchProfile]:
    gens, quots = _random_generators(rng)
    g = len(quots)
    if mode == "divisorial":
        if g and rng.random() < 0.5:
            terminal, at_rupture = quots[-1] * gens[-1], True
        else:
            base = quots[-1] * gens[-1] if g else 1
            terminal, at_rupture = base + rng.randint(0 if g == 0 else 1, 3), False
            if g == 0 and terminal < 1:
                terminal = 1
    else:
        if g:
            terminal, at_rupture = quots[-1] * gens[-1], True
        else:
            terminal, at_rupture = rng.randint(1, 4), False

    bp = BranchProfile(mode, gens, quots, (), terminal, at_rupture, 1,
                       1 if mode == "divisorial" else h0)
    chain = _branch_chain(bp)
    prox = proximities_from_mults(chain)
    vals = _contact_values(chain)

    # splitting positions must be followed by a free point
    free_after = [
        l for l in range(1, len(chain))
        if prox[l] == frozenset((l,))
    ]
    ratios = sorted({d for d in range(2, h0 + 1) if h0 % d == 0})
    ladder: list[tuple[int, int]] = []
    cur = 1
    positions = sorted(rng.sample(free_after, min(len(free_after), rng.randint(0, 2))))
    for pos in positions:
        bigger = [x for x in ratios if x > cur and x % cur == 0]
        if not bigger:
            break
        cur = rng.choice(bigger)
        ladder.append((vals[pos - 1], cur))
    orbit = cur
    if mode == "curve":
        d_extra = [d for d in (1, 2, 3) if (orbit * d) and h0 % (orbit * d) == 0]
        orbit *= rng.choice(d_extra)
    weight = 1 if mode == "divisorial" else h0 // orbit
    bp = BranchProfile(mode, gens, quots, tuple(ladder), terminal, at_rupture,
                       orbit, weight)
    try:
        bp.validate(h0)
    except Exception:
        return None
    return bp


def _orbit_sizes_ambiguous(g: BlowUpGraph, sym: SymmetrySpec, targets) -> bool:
    """Distinct orbits sharing an attach vertex of the minimal model can
    trade branches invisibly unless both are single-branch orbits: the
    series only sees the total puncture count there."""
    cg = contract_to_minimal(g)
    located = []
    for orb, size in zip(targets.orbits, targets.orbit_sizes):
        located.append(({cg.arrow(a).attach for a in orb}, size))
    for i in range(len(located)):
        for j in range(i + 1, len(located)):
            if located[i][0] & located[j][0] and (located[i][1] > 1 or located[j][1] > 1):
                return True
    return False


def theorem1_hypothesis_holds(g: BlowUpGraph, sym: SymmetrySpec) -> bool:
    """Initial vertex with two group-swapped edges is the excluded case."""
    nbrs = g.adjacency[1]
    if len(nbrs) != 2:
        return True
    tables = validate_action(g, sym)
    return tables.vertex_orbit_of[nbrs[0]] != tables.vertex_orbit_of[nbrs[1]]


def random_configuration(rng: random.Random, mode: str, max_vertices: int = 12,
                         r_max: int = 3, orders=(1, 2, 3, 4, 6),
                         enforce_hypothesis: bool = False):
    """A validated random (graph, symmetry) with targets of the given mode."""
    while True:
        h0 = rng.choice(orders)
        try:
            if h0 == 1 and rng.random() < 0.6:
                graph, sym = _random_raw_graph(rng, mode, max_vertices, r_max)
            else:
                r = rng.randint(1, r_max)
                branches = []
                for _ in range(r):
                    bp = _random_profile(rng, mode, h0)
                    if bp is None:
                        raise ValueError("resample")
                    branches.append(bp)
                seps = {}
                for i in range(r):
                    for j in range(i + 1, r):
                        ci = len(_branch_chain(branches[i]))
                        cj = len(_branch_chain(branches[j]))
                        seps[(i, j)] = rng.randint(1, min(ci, cj) + rng.randint(0, 2))
                graph, sym, _ = _assemble(branches, seps, h0, mode)
            if graph.n > max_vertices:
                continue
            validate_action(graph, sym)
            targets = targets_from(graph, sym, mode)
            if mode == "curve" and _orbit_sizes_ambiguous(graph, sym, targets):
                # distinct orbits sharing one attach vertex leave the split
                # of the orbit sizes invisible in the series; the weight
                # decoration of such inputs is not reconstructible
                continue
            if enforce_hypothesis:
                minimal = contract_to_minimal(graph)
                if graph.n == minimal.n and not theorem1_hypothesis_holds(graph, sym):
                    continue
                if graph.n != minimal.n:
                    # hypothesis is about the minimal model; rebuild targets
                    if not theorem1_hypothesis_holds(graph, sym):
                        continue
            return graph, sym, targets
        except Exception:
            continue
