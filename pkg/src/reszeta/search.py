"""Collision search: non-isomorphic configurations with one zeta series.

Enumerates mirror doubles (two isomorphic halves glued at the origin with
the swap action), computes the series of each, groups by exact series
equality, and reports the groups containing at least two non-isomorphic
minimal models.  The per-candidate pipeline is pure, so the enumeration
parallelizes over a process pool; the report is assembled in a fixed order
afterwards, making the output independent of the job count.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import BoundsExceeded
from .resolution import (
    Arrow,
    BlowUpGraph,
    SymmetrySpec,
    canonical_key,
    contract_to_minimal,
)
from .series import format_factored
from .zeta import targets_from, zeta_factored

__all__ = ["SearchBounds", "CollisionGroup", "CollisionReport", "collision_search"]

HARD_CAP = 10


@dataclass(frozen=True)
class SearchBounds:
    mode: str = "divisorial"
    max_vertices: int = 7
    order: int = 2
    weights: tuple[int, ...] = ()
    max_marks: int = 1  # every counterexample family has one orbit
    jobs: int = 1
    cap: int = HARD_CAP


@dataclass(frozen=True)
class CollisionGroup:
    series_text: str
    members: tuple[tuple[str, str], ...]  # (canonical key hex, description)


@dataclass(frozen=True)
class CollisionReport:
    groups: tuple[CollisionGroup, ...]
    candidates: int

    def render(self) -> str:
        lines = [f"candidates {self.candidates}", f"collision groups {len(self.groups)}"]
        for g in self.groups:
            lines.append("group:")
            for ln in g.series_text.strip().splitlines():
                lines.append(f"  series {ln}")
            for key, desc in g.members:
                lines.append(f"  member {key[:16]} {desc}")
        return "\n".join(lines) + "\n"


def _enumerate_arms(max_arm: int):
    """All proximity shapes of one arm hanging off the origin.

    Arm vertices are numbered 1..k locally, 0 denotes the origin; each new
    vertex is a free point on an existing component or a satellite point on
    a currently meeting pair.
    """
    arms: list[tuple[frozenset[int], ...]] = []

    def grow(prox: list[frozenset[int]], meeting: set[frozenset[int]]):
        k = len(prox)
        arms.append(tuple(prox))
        if k == max_arm:
            return
        nxt = k + 1
        for i in range(0, k + 1):
            grow(prox + [frozenset((i,))],
                 {m for m in meeting} | {frozenset((i, nxt))})
        for pair in sorted(meeting, key=sorted):
            i, j = sorted(pair)
            new_meet = (meeting - {pair}) | {frozenset((i, nxt)), frozenset((j, nxt))}
            grow(prox + [frozenset((i, j))], new_meet)

    grow([frozenset((0,))], {frozenset((0, 1))})
    return arms


def _mirror_double(arm: tuple[frozenset[int], ...]):
    """Graph skeleton: origin plus two copies of the arm, with the swap."""
    k = len(arm)
    prox: list[frozenset[int]] = [frozenset()]
    for local in arm:  # first copy: local i -> 1 + i (0 -> 1)
        prox.append(frozenset(1 + i if i else 1 for i in local))
    for local in arm:  # second copy: local i -> 1 + k + i
        prox.append(frozenset(1 + k + i if i else 1 for i in local))
    vmap = {}
    for i in range(1, k + 1):
        vmap[1 + i] = 1 + k + i
        vmap[1 + k + i] = 1 + i
    return prox, vmap, k


def _candidate_result(spec):
    mode, arm, decorations, h0 = spec
    prox, vmap, k = _mirror_double(arm)
    if mode == "divisorial":
        marks = []
        for local in decorations:
            marks += [1 + local, 1 + k + local]
        graph = BlowUpGraph(prox, marks=tuple(marks))
        sym = SymmetrySpec(h0, ((vmap, {}),))
    else:
        arrows = []
        amap = {}
        for idx, (local, weight) in enumerate(decorations):
            a, b = f"a{idx}", f"b{idx}"
            arrows.append(Arrow(a, 1 + local, weight))
            arrows.append(Arrow(b, 1 + k + local, weight))
            amap[a], amap[b] = b, a
        graph = BlowUpGraph(prox, arrows=tuple(arrows))
        sym = SymmetrySpec(h0, ((vmap, amap),))
    try:
        targets = targets_from(graph, sym)
        series = zeta_factored(graph, sym, targets)
        minimal = contract_to_minimal(graph)
    except Exception:
        return None
    if series.is_one():
        return None  # the trivial series carries no information
    desc = (f"n={graph.n} h0={h0} arm={'.'.join(str(sorted(p)) for p in arm)} "
            f"dec={decorations}")
    digest = hashlib.sha256(canonical_key(minimal)).hexdigest()
    return (format_factored(series), digest, desc)


def _candidates(bounds: SearchBounds):
    max_arm = (bounds.max_vertices - 1) // 2
    if max_arm < 1:
        return
    for arm in _enumerate_arms(max_arm):
        k = len(arm)
        if bounds.mode == "divisorial":
            singles = [(v,) for v in range(1, k + 1)]
            pairs = [
                (v, w) for v in range(1, k + 1) for w in range(v + 1, k + 1)
            ] if bounds.max_marks >= 2 else []
            for marks in singles + pairs:
                yield ("divisorial", arm, marks, bounds.order)
        else:
            for v in range(1, k + 1):
                for w in bounds.weights or (1,):
                    yield ("curve", arm, ((v, w),), 2 * w)


def collision_search(bounds: SearchBounds) -> CollisionReport:
    if bounds.max_vertices > bounds.cap:
        raise BoundsExceeded(
            f"max_vertices {bounds.max_vertices} exceeds the cap {bounds.cap}"
        )
    specs = list(_candidates(bounds))
    if bounds.jobs > 1:
        with ProcessPoolExecutor(max_workers=bounds.jobs) as pool:
            results = list(pool.map(_candidate_result, specs, chunksize=64))
    else:
        results = [_candidate_result(s) for s in specs]

    by_series: dict[str, dict[str, tuple[str, int]]] = {}
    for res, spec in zip(results, specs):
        if res is None:
            continue
        series_text, canon, desc = res
        by_series.setdefault(series_text, {}).setdefault(canon, (desc, spec))
    groups = []
    for series_text in sorted(by_series):
        members = by_series[series_text]
        if len(members) < 2:
            continue
        # re-verify: exact series equality and pairwise distinct keys
        for canon, (_desc, spec) in members.items():
            redo = _candidate_result(spec)
            if redo is None or redo[0] != series_text or redo[1] != canon:
                raise AssertionError("collision group failed re-verification")
        groups.append(
            CollisionGroup(
                series_text=series_text,
                members=tuple(sorted((c, d) for c, (d, _s) in members.items())),
            )
        )
    return CollisionReport(groups=tuple(groups), candidates=len(specs))
