"""Inverse engine: minimal resolution graphs from factored zeta series.

The single-orbit core parses the one-variable factorization in increasing
exponent order.  Landmarks appear as: the initial-vertex binomial (the sign
of the minimal exponent distinguishes three cases), dead-end binomials with
exponent minus the orbit size of their segment, rupture binomials as the
first positive value in each gap between consecutive dead ends (quotients
N_q are exact value ratios), and splitting-point binomials extending the
isotropy ladder.  Coinciding vertices add their contributions: a rupture
that is also a splitting point shows the post-split orbit size, and the
initial vertex disappears exactly when two group-swapped edges meet it --
the excluded configurations.  Where the series genuinely underdetermines a
step the parser branches; every completed candidate is rebuilt and checked
by exact forward recomputation, so wrong branches die and surviving
non-isomorphic graphs constitute a real ambiguity.

Multi-orbit divisorial series reduce to one variable per orbit by plain
substitution.  Curve series peel one branch orbit at a time: a maximal
visible exponent belongs to an attach vertex, its binomial is divided out
and the variable set to 1, and the recursion handles the rest; the peeled
exponent vector itself supplies the correction binomials that turn the full
one-variable collapse into the solo series of the peeled orbit.  Pairwise
separations are resolved by exact two-variable forward verification,
deepest contact first.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping, Optional, Sequence

from .errors import (
    AmbiguousReconstruction,
    InconsistentSeries,
    NotInferable,
    SelfCheckFailed,
    UnrealizableProfile,
    UnresolvedCase,
    VariableCountMismatch,
)
from .resolution import (
    Arrow,
    BlowUpGraph,
    SymmetrySpec,
    canonical_key,
    exponents_from_generators,
    mult_sequence_from_exponents,
    proximities_from_mults,
)
from .series import FactoredSeries, substitute
from .zeta import ValuationTargets, targets_from, zeta_factored

__all__ = [
    "BranchProfile",
    "TopologicalProfile",
    "reconstruct_single_divisorial",
    "reconstruct_divisorial",
    "reconstruct_curves",
    "infer_group_order",
    "build_minimal_graph",
]


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


@dataclass(frozen=True)
class BranchProfile:
    """Quotient model of one valuation orbit.

    generators: m at the dead ends sigma_0..sigma_g (semigroup generators);
    quotients: N_1..N_g; ladder: splitting points as (m at rho_j, h0/h_j)
    with strictly increasing ratios dividing h0; terminal_m: m at the
    valuation vertex (divisorial) or at the branch attach vertex (curve);
    orbit: number of distinct marks / distinct branches; weight: the
    coincidence multiplicity of each branch, h0/orbit in the physical gauge
    used throughout.
    """

    mode: str
    generators: tuple[int, ...]
    quotients: tuple[int, ...]
    ladder: tuple[tuple[int, int], ...]
    terminal_m: int
    terminal_at_rupture: bool
    orbit: int
    weight: int = 1

    @property
    def g(self) -> int:
        return len(self.quotients)

    def validate(self, h0: int) -> None:
        if len(self.generators) != self.g + 1:
            raise UnrealizableProfile("generator and quotient counts disagree")
        if any(n < 2 for n in self.quotients):
            raise UnrealizableProfile("every quotient must be at least 2")
        if self.generators[0] != _prod(self.quotients):
            raise UnrealizableProfile("m(sigma_0) is not the product of the quotients")
        if list(self.generators) != sorted(set(self.generators)):
            raise UnrealizableProfile("generators must be strictly increasing")
        e = self.generators[0]
        for q, gen in enumerate(self.generators[1:], start=1):
            e_next = gcd(e, gen)
            if e // e_next != self.quotients[q - 1]:
                raise UnrealizableProfile("gcd chain of the generators contradicts the quotients")
            e = e_next
        if self.terminal_m < 1:
            raise UnrealizableProfile("terminal multiplicity must be positive")
        last = 1
        for _m, ratio in self.ladder:
            if ratio <= last or ratio % last or h0 % ratio:
                raise UnrealizableProfile("ladder ratios must strictly grow and divide h0")
            last = ratio
        if h0 % self.orbit or self.orbit % last:
            raise UnrealizableProfile("orbit must be a multiple of the last ratio dividing h0")
        if self.mode == "divisorial":
            if self.orbit != last:
                raise UnrealizableProfile("mark orbit must equal the final ladder ratio")
            if self.weight != 1:
                raise UnrealizableProfile("divisorial targets carry no weight")
        else:
            coprime = self.generators[0] == 1 if self.g == 0 else gcd(*self.generators) == 1
            if not coprime:
                raise UnrealizableProfile("branch semigroup generators must be coprime")
            if self.weight * self.orbit != h0:
                raise UnrealizableProfile("curve profiles use the physical gauge w = h0/orbit")


@dataclass(frozen=True)
class TopologicalProfile:
    """Per-orbit branch profiles plus pairwise contact data.

    separations[(i, j)] is the number of shared infinitely near points of
    the two quotient chains, separation_values the multiplicity of the last
    shared point as seen from each side.
    """

    mode: str
    order: int
    branches: tuple[BranchProfile, ...]
    separations: Mapping[tuple[int, int], int]
    separation_values: Mapping[tuple[int, int], tuple[int, int]]


# --------------------------------------------------------------------------
# quotient chains and assembly


def _branch_chain(bp: BranchProfile) -> list[int]:
    """Multiplicity sequence of the orbit's quotient model."""
    gens = list(bp.generators)
    if bp.g == 0:
        return [1] * bp.terminal_m
    if bp.terminal_at_rupture:
        lams = exponents_from_generators(gens)
    else:
        lams = exponents_from_generators(gens + [bp.terminal_m])
    return mult_sequence_from_exponents(lams)


def _contact_values(mults: Sequence[int]) -> list[int]:
    """m at each chain point (value of the orbit's valuation on a curvette
    there); strictly increasing along the chain."""
    n = len(mults)
    prox = proximities_from_mults(mults)
    vals = []
    for k in range(1, n + 1):
        mu = [0] * k
        mu[k - 1] = 1
        for i in range(k - 2, -1, -1):
            mu[i] = sum(mu[j] for j in range(i + 1, k) if (i + 1) in prox[j])
        vals.append(sum(a * b for a, b in zip(mu, mults)))
    return vals


def _assemble(branches: Sequence[BranchProfile], seps: Mapping[tuple[int, int], int],
              h0: int, mode: str):
    """Glue quotient chains at shared prefixes and expand the ladders.

    Returns (graph, symmetry, target representative per branch).  The
    emitted symmetry is one cyclic translation of copy indices; only the
    order h0 and the orbit sizes matter downstream, so a non-faithful
    realization is acceptable.
    """
    r = len(branches)
    chains = [_branch_chain(bp) for bp in branches]
    depth = {i: len(chains[i]) for i in range(r)}
    for (i, j), k in seps.items():
        if k < 1:
            raise UnrealizableProfile("chains always share the origin")
        if mode == "divisorial" and k > min(len(chains[i]), len(chains[j])):
            raise UnrealizableProfile("divisorial contact cannot pass a marked chain end")
        depth[i] = max(depth[i], k)
        depth[j] = max(depth[j], k)
    ext = [list(chains[i]) + [1] * (depth[i] - len(chains[i])) for i in range(r)]

    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for i in range(r):
        for l in range(1, len(ext[i]) + 1):
            parent.setdefault((i, l), (i, l))
    for i in range(r):
        for j in range(i + 1, r):
            k = seps.get((i, j), 1)
            for l in range(1, k + 1):
                union((i, l), (j, l))

    classes: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i in range(r):
        for l in range(1, len(ext[i]) + 1):
            classes.setdefault(find((i, l)), []).append((i, l))
    for members in classes.values():
        if len({l for _, l in members}) != 1:
            raise UnrealizableProfile("inconsistent separations: positions disagree")

    order_keys = sorted(classes, key=lambda root: (root[1], root[0]))
    index_of = {root: idx for idx, root in enumerate(order_keys)}
    proxs = [proximities_from_mults(m) for m in ext]

    def class_of(i, l):
        return index_of[find((i, l))]

    qprox: list[frozenset[int]] = []
    for root in order_keys:
        votes = {
            frozenset(class_of(i, t) for t in proxs[i][l - 1])
            for (i, l) in classes[root]
        }
        if len(votes) != 1:
            raise UnrealizableProfile("inconsistent separations: proximities disagree")
        qprox.append(votes.pop())

    # Copy count of every quotient vertex from the ladders; branches must
    # agree on shared vertices.
    ratio = [0] * len(order_keys)
    for i, bp in enumerate(branches):
        vals = _contact_values(ext[i])
        jumps = {}
        for m_rho, rho_ratio in bp.ladder:
            if m_rho not in vals:
                raise UnrealizableProfile(f"no chain point carries splitting value {m_rho}")
            jumps[vals.index(m_rho) + 1] = rho_ratio
        cur = 1
        for l in range(1, len(ext[i]) + 1):
            idx = class_of(i, l)
            if ratio[idx] == 0:
                ratio[idx] = cur
            elif ratio[idx] != cur:
                raise UnrealizableProfile("branches disagree on a shared splitting ladder")
            if l in jumps:
                cur = jumps[l]
            if l == len(chains[i]):
                # beyond its own support the orbit's copies travel separately
                cur = bp.orbit

    for idx, ps in enumerate(qprox):
        for p in ps:
            if ratio[idx] % ratio[p]:
                raise UnrealizableProfile("copy counts do not nest along the tree")
        # two copies of a satellite point would have to share one
        # intersection point unless some target is copied along with it
        if len(ps) == 2 and ratio[idx] > max(ratio[p] for p in ps):
            raise UnrealizableProfile("a splitting point must be followed by a free point")

    copy_index: dict[tuple[int, int], int] = {}
    full_prox: list[frozenset[int]] = []
    vid = 0
    for idx in range(len(order_keys)):
        for t in range(ratio[idx]):
            vid += 1
            copy_index[(idx, t)] = vid
            full_prox.append(frozenset(copy_index[(p, t % ratio[p])] for p in qprox[idx]))

    arrows: list[Arrow] = []
    marks: list[int] = []
    vperm: dict[int, int] = {}
    aperm: dict[str, str] = {}
    for idx in range(len(order_keys)):
        n_c = ratio[idx]
        for t in range(n_c):
            vperm[copy_index[(idx, t)]] = copy_index[(idx, (t + 1) % n_c)]
    reps: list = []
    for i, bp in enumerate(branches):
        term = class_of(i, len(ext[i]))
        n_t = ratio[term]
        if mode == "divisorial":
            if bp.orbit != n_t:
                raise UnrealizableProfile("mark orbit does not match the terminal copies")
            marks.extend(copy_index[(term, t)] for t in range(n_t))
            reps.append(copy_index[(term, 0)])
        else:
            if bp.orbit % n_t:
                raise UnrealizableProfile("branch orbit does not cover the terminal copies")
            for m in range(bp.orbit):
                aid = f"b{i}_{m}"
                arrows.append(Arrow(aid, copy_index[(term, m % n_t)], bp.weight))
                aperm[aid] = f"b{i}_{(m + 1) % bp.orbit}"
            reps.append(f"b{i}_0")

    graph = BlowUpGraph(full_prox, tuple(arrows), tuple(marks))
    vmoves = {k: v for k, v in vperm.items() if k != v}
    amoves = {k: v for k, v in aperm.items() if k != v}
    sym = SymmetrySpec(h0, ((vmoves, amoves),) if (vmoves or amoves) else ())
    return graph, sym, reps


def _targets_in_order(graph, sym, reps, mode) -> ValuationTargets:
    auto = targets_from(graph, sym, mode)
    order = []
    for rep in reps:
        for idx, orb in enumerate(auto.orbits):
            if rep in orb:
                order.append(idx)
                break
        else:
            raise UnrealizableProfile(f"representative {rep!r} missing from the orbits")
    if len(set(order)) != len(reps) or len(reps) != len(auto.orbits):
        raise UnrealizableProfile("orbit count does not match the profile")
    return ValuationTargets(
        mode=auto.mode,
        representatives=tuple(auto.representatives[i] for i in order),
        orbits=tuple(auto.orbits[i] for i in order),
        orbit_sizes=tuple(auto.orbit_sizes[i] for i in order),
        weights=tuple(auto.weights[i] for i in order),
        isotropy=tuple(auto.isotropy[i] for i in order),
        order=auto.order,
    )


def _forward(branches, seps, h0, mode) -> Optional[FactoredSeries]:
    """Forward zeta of an assembled candidate; None if unrealizable."""
    try:
        graph, sym, reps = _assemble(branches, seps, h0, mode)
        targets = _targets_in_order(graph, sym, reps, mode)
        return zeta_factored(graph, sym, targets)
    except Exception:
        return None


def build_minimal_graph(profile: TopologicalProfile):
    """Blow-up graph and symmetry realizing a topological profile."""
    for bp in profile.branches:
        bp.validate(profile.order)
    graph, sym, _ = _assemble(
        list(profile.branches), dict(profile.separations), profile.order, profile.mode
    )
    return graph, sym


# --------------------------------------------------------------------------
# the single-orbit walk


class _WalkDead(Exception):
    pass


def _div(a: int, b: int) -> int:
    if b <= 0 or a % b or a <= 0:
        raise _WalkDead(f"{a} is not a positive multiple of {b}")
    return a // b


def _walk(fac: Mapping[int, int], h0: int, mode: str, sigma0_case: str,
          m_sigma0: Optional[int], scaled: bool = False):
    """Parse the landmark stream under one initial-vertex case.

    m_sigma0 pins the initial multiplicity when the initial binomial is
    hidden (from the multivariate fallback); with neither, admissible values
    are enumerated.  Returns unverified profile candidates.

    With ``scaled`` the walk runs the group-order inference variant: h0 is
    the final ladder ratio, multiplicities come out h_ell-scaled, product
    and coprimality constraints are deferred, and raw parses are returned.
    """
    items = sorted(fac.items())
    if not items:
        raise _WalkDead("empty series")
    start = 0
    M0 = None
    if sigma0_case == "neg":
        M0, s0 = items[0]
        if s0 != -1:
            raise _WalkDead("minimal exponent is not -1")
        ratio0, start = 1, 1
    elif sigma0_case == "pos":
        M0, s0 = items[0]
        if s0 < 1:
            raise _WalkDead("minimal exponent is not positive")
        ratio0, start = s0 + 2, 1
    else:  # hidden
        ratio0 = 2
    if h0 % ratio0:
        raise _WalkDead("initial ladder ratio does not divide h0")

    rest = items[start:]
    negs = [(m, -s) for m, s in rest if s < 0]
    poss = [(m, s) for m, s in rest if s > 0]
    alpha = None
    if mode == "curve":
        if not poss:
            raise _WalkDead("curve series lacks the branch binomial")
        alpha = poss[-1]
        poss = poss[:-1]
        if negs and alpha[0] < negs[-1][0]:
            raise _WalkDead("branch binomial is not the largest exponent")

    sigma_vals = [m for m, _ in negs]
    sigma_exps = [s for _, s in negs]
    gaps: list[list[tuple[int, int]]] = [[] for _ in range(len(sigma_vals) + 1)]
    for m, s in poss:
        gaps[sum(1 for v in sigma_vals if v < m)].append((m, s))

    p = len(sigma_vals)
    if mode == "curve":
        options = [("curve", p)]
    else:
        options = [("nu_rupture", p)]
        if p >= 1:
            options.append(("nu_last", p - 1))

    out = []
    for kind, g_count in options:
        try:
            events, quotients = _classify(kind, sigma_vals, gaps, alpha)
        except _WalkDead:
            continue
        missing_nq = kind == "nu_rupture" and g_count >= 1
        if m_sigma0 is not None:
            m0s: list[int] = [m_sigma0]
        elif M0 is not None:
            try:
                m0s = [_div(M0, h0)]
            except _WalkDead:
                continue
        elif scaled:
            # the scale h_ell is folded into the enumeration
            bound = max([v for v, _ in negs] + [m for m, _ in poss] + ([alpha[0]] if alpha else []))
            m0s = list(range(1, bound + 1))
        elif not missing_nq:
            m0s = [_prod(n for _, n in quotients)]
        else:
            bound = max(sigma_vals)
            known = _prod(n for _, n in quotients)
            m0s = [known * n for n in range(2, bound + 2)]
        for m0 in m0s:
            try:
                out.append(
                    _solve(kind, g_count, events, quotients, sigma_exps, alpha,
                           h0, mode, ratio0, M0, m0, scaled)
                )
            except _WalkDead:
                continue
    return out


def _classify(kind: str, sigma_vals, gaps, alpha):
    """Tag the positive binomials as ruptures or splitting points."""
    p = len(sigma_vals)
    n_tau = {"curve": max(p - 1, 0), "nu_last": p - 1, "nu_rupture": max(p - 1, 0)}[kind]
    events: list[tuple[int, str, object]] = []
    quotients: list[tuple[int, int]] = []  # (q, N_q)
    for q in range(1, p + 1):
        gap = list(gaps[q])
        if q <= n_tau:
            if not gap:
                raise _WalkDead(f"gap {q} lacks its rupture binomial")
            m_tau, s_tau = gap.pop(0)
            n_q = _div(m_tau, sigma_vals[q - 1])
            if n_q < 2:
                raise _WalkDead("rupture quotient below 2")
            quotients.append((q, n_q))
            events.append((m_tau, "tau", (q, n_q, s_tau)))
        for m_rho, s_rho in gap:
            events.append((m_rho, "rho", s_rho))
    for m_rho, s_rho in gaps[0]:
        events.append((m_rho, "rho", s_rho))
    if kind == "nu_last" and gaps[p]:
        raise _WalkDead("positive exponents beyond the valuation vertex")
    if kind == "curve" and p >= 1:
        n_g = _div(alpha[0], sigma_vals[-1])
        if n_g < 2:
            raise _WalkDead("final quotient below 2")
        quotients.append((p, n_g))
        events.append((alpha[0], "tau", (p, n_g, None)))
    for q, m_sig in enumerate(sigma_vals, start=1):
        events.append((m_sig, "sigma", q))
    events.sort(key=lambda e: (e[0], {"tau": 0, "sigma": 1, "rho": 2}[e[1]]))
    return events, quotients


def _solve(kind, g_count, events, quotients, sigma_exps, alpha, h0, mode,
           ratio0, M0, m0, scaled: bool = False):
    """Run the multiplicity equations along the value-ordered landmarks."""
    if m0 < 1:
        raise _WalkDead("initial multiplicity must be positive")
    if M0 is not None and M0 != h0 * m0:
        raise _WalkDead("initial binomial disagrees with h0 times the multiplicity")
    ratio = ratio0
    h_cur = h0 // ratio
    cross = (h0 - h_cur) * m0 if ratio > 1 else 0
    np_prod = 1
    ladder: list[tuple[int, int]] = [(m0, ratio)] if ratio > 1 else []
    sigma_m: list[int] = []
    tau_m: dict[int, int] = {}
    pending: Optional[tuple[int, int]] = None

    for value, tag, payload in events:
        if tag == "sigma":
            sigma_m.append(_div(value - cross * np_prod, h_cur))
            pending = (payload, sigma_exps[payload - 1])
        elif tag == "tau":
            q, n_q, s_tau = payload
            if pending is None or pending[0] != q:
                raise _WalkDead("rupture without its dead end")
            if pending[1] != ratio:
                raise _WalkDead("dead-end exponent disagrees with its segment orbit")
            pending = None
            np_prod *= n_q
            m = _div(value - cross * np_prod, h_cur)
            if m != n_q * sigma_m[q - 1]:
                raise _WalkDead("rupture multiplicity mismatch")
            tau_m[q] = m
            if s_tau is not None and s_tau != ratio:
                new_ratio = s_tau
                if new_ratio <= ratio or new_ratio % ratio or h0 % new_ratio:
                    raise _WalkDead("merged rupture exponent is not a ladder step")
                h_new = h0 // new_ratio
                cross = value - h_new * m
                np_prod = 1
                ratio, h_cur = new_ratio, h_new
                ladder.append((m, new_ratio))
        else:  # rho
            new_ratio = ratio + payload
            if new_ratio % ratio or h0 % new_ratio:
                raise _WalkDead("splitting exponent does not extend the ladder")
            m = _div(value - cross * np_prod, h_cur)
            h_new = h0 // new_ratio
            cross = value - h_new * m
            np_prod = 1
            ratio, h_cur = new_ratio, h_new
            ladder.append((m, new_ratio))

    quots = [n for _, n in quotients]
    if scaled:
        if pending is not None and pending[1] != ratio:
            raise _WalkDead("last landmark exponent disagrees with its orbit size")
        if kind == "nu_last":
            gens_s = [m0] + sigma_m[:-1]
            terminal_s = sigma_m[-1] if sigma_m else m0
        else:
            gens_s = [m0] + sigma_m
            terminal_s = None
        return (kind, gens_s, terminal_s, ladder, quots)
    if kind == "nu_last":
        if pending is not None and pending[1] != ratio:
            raise _WalkDead("valuation exponent disagrees with its orbit size")
        gens = [m0] + sigma_m[:-1]
        terminal = sigma_m[-1] if sigma_m else m0
        at_rupture = False
        orbit = ratio
        # the decision rule: a coprime sigma-prefix means the last landmark
        # is the valuation vertex itself
        prefix_gcd = gens[0] if len(gens) == 1 else gcd(*gens)
        if prefix_gcd != 1:
            raise _WalkDead("a complete generator prefix must be coprime")
    elif kind == "nu_rupture":
        if pending is not None and pending[1] != ratio:
            raise _WalkDead("dead-end exponent disagrees with its segment orbit")
        gens = [m0] + sigma_m
        if g_count >= 1:
            n_g = _div(m0, _prod(quots))
            if n_g < 2:
                raise _WalkDead("final quotient below 2")
            quots.append(n_g)
            terminal = n_g * sigma_m[-1]
            at_rupture = True
            prefix_gcd = gens[0] if len(gens) == 2 else gcd(*gens[:-1])
            if prefix_gcd == 1:
                raise _WalkDead("a hidden final rupture needs a non-coprime prefix")
        else:
            if sigma_m or m0 != 1:
                raise _WalkDead("a valuation at the origin has no deeper structure")
            terminal, at_rupture = 1, False
        orbit = ratio
    else:  # curve
        if pending is not None:
            raise _WalkDead("unfinished dead end in a curve parse")
        gens = [m0] + sigma_m
        if g_count >= 1:
            orbit = alpha[1]
            if orbit % ratio:
                raise _WalkDead("branch orbit does not cover the attach copies")
            terminal = tau_m[g_count]
            at_rupture = True
        else:
            _div(alpha[1], ratio)  # arrows per copy, minus one
            orbit = alpha[1] + ratio
            terminal = _div(alpha[0] - cross * np_prod, h_cur)
            at_rupture = False
    if m0 != _prod(quots):
        raise _WalkDead("multiplicity is not the product of the quotients")
    weight = 1 if mode == "divisorial" else _div(h0, orbit)
    bp = BranchProfile(
        mode=mode,
        generators=tuple(gens),
        quotients=tuple(quots),
        ladder=tuple(ladder),
        terminal_m=terminal,
        terminal_at_rupture=at_rupture,
        orbit=orbit,
        weight=weight,
    )
    try:
        bp.validate(h0)
    except UnrealizableProfile as exc:
        raise _WalkDead(str(exc))
    return bp


def _special_candidates(fac: Mapping[int, int], h0: int, mode: str) -> list[BranchProfile]:
    """Configurations whose whole structure sits at the origin."""
    items = sorted(fac.items())
    out: list[BranchProfile] = []
    if mode == "curve":
        if not items and h0 % 2 == 0:
            out.append(BranchProfile("curve", (1,), (), (), 1, False, 2, h0 // 2))
        if len(items) == 1:
            key, s = items[0]
            if key == h0 and s == -1:
                out.append(BranchProfile("curve", (1,), (), (), 1, False, 1, h0))
            if key == h0 and s >= 1 and h0 % (s + 2) == 0:
                out.append(BranchProfile("curve", (1,), (), (), 1, False, s + 2, h0 // (s + 2)))
    else:
        if items == [(h0, -2)]:
            out.append(BranchProfile("divisorial", (1,), (), (), 1, False, 1, 1))
    return out


def _single_candidates(fac: Mapping[int, int], h0: int, mode: str,
                       fallback_m0: Optional[int]) -> list[BranchProfile]:
    """All forward-verified single-orbit profiles realizing the series."""
    raw: list[BranchProfile] = []
    items = sorted(fac.items())
    if items:
        s_min = items[0][1]
        cases: list[tuple[str, Optional[int]]] = []
        if fallback_m0 is not None:
            # the multivariate minimal exponent pins the initial vertex, so
            # exactly one case applies
            v = h0 * fallback_m0
            s_v = fac.get(v)
            if s_v == -1 and items[0][0] == v:
                cases = [("neg", None)]
            elif s_v is not None and s_v > 0 and items[0][0] == v:
                cases = [("pos", None)]
            elif s_v is None:
                cases = [("hidden", fallback_m0)]
        if not cases:
            if s_min == -1:
                cases.append(("neg", None))
            else:
                if s_min > 0:
                    cases.append(("pos", None))
                cases.append(("hidden", None))
        for case, m0 in cases:
            try:
                raw.extend(_walk(fac, h0, mode, case, m0))
            except _WalkDead:
                continue
    raw.extend(_special_candidates(fac, h0, mode))

    expected = FactoredSeries(1, {(m,): s for m, s in fac.items()})
    verified: dict[bytes, BranchProfile] = {}
    for bp in raw:
        try:
            graph, sym, reps = _assemble([bp], {}, h0, mode)
            targets = _targets_in_order(graph, sym, reps, mode)
            got = zeta_factored(graph, sym, targets)
        except Exception:
            continue
        if got == expected:
            verified.setdefault(canonical_key(graph), bp)
    return list(verified.values())


def _fallback_m0(F: Optional[FactoredSeries], i: int, h0: int) -> Optional[int]:
    """Initial multiplicity for projection i from the componentwise-minimal
    visible exponent of the full series, when one exists."""
    if F is None:
        return None
    keys = list(F.factors)
    if not keys:
        return None
    best = min(keys, key=lambda v: (sum(v), v))
    if not all(all(b <= k for b, k in zip(best, key)) for key in keys):
        return None
    if best[i] <= 0 or best[i] % h0:
        return None
    return best[i] // h0


def reconstruct_single_divisorial(zeta1: FactoredSeries, h0: int,
                                  fallback: Optional[FactoredSeries] = None,
                                  fallback_index: int = 0) -> BranchProfile:
    """Quotient profile of one divisorial orbit from its series.

    ``fallback`` is the full multivariate series; when the initial-vertex
    binomial cancels in the projection, coordinate ``fallback_index`` of the
    fallback's minimal exponent supplies the initial multiplicity.
    """
    if zeta1.var_count != 1:
        raise VariableCountMismatch("the single-orbit series lives in one variable")
    fac = {m[0]: s for m, s in zeta1.factors.items()}
    m0 = None
    if fallback is not None:
        m0 = _fallback_m0(fallback, fallback_index, h0)
    candidates = _single_candidates(fac, h0, "divisorial", m0)
    if not candidates:
        raise InconsistentSeries("no single-orbit configuration realizes the series")
    if len(candidates) > 1:
        raise AmbiguousReconstruction(
            "the series does not determine the topological type", candidates
        )
    return candidates[0]


# --------------------------------------------------------------------------
# separations


def _resolve_separations(branches: list[BranchProfile], F: FactoredSeries, h0: int,
                         mode: str, alpha_keys: Optional[list] = None) -> tuple[dict, dict]:
    """Fix every pairwise shared-prefix length by exact verification against
    the two-variable projections, deepest contact first.

    In curve mode the projection formula leaves the attach binomial of every
    dropped orbit behind; those are divided out using the attach exponent
    vectors collected during peeling.
    """
    r = len(branches)
    seps: dict[tuple[int, int], int] = {}
    sep_vals: dict[tuple[int, int], tuple[int, int]] = {}
    for i in range(r):
        for j in range(i + 1, r):
            keep: list[Optional[int]] = [None] * r
            keep[i], keep[j] = 0, 1
            base = F
            if mode == "curve" and alpha_keys is not None:
                drops = [
                    (alpha_keys[l], -branches[l].orbit)
                    for l in range(r)
                    if l not in (i, j)
                ]
                if drops:
                    base = F.merge(FactoredSeries(r, drops))
            want = substitute(base, keep)
            ci, cj = _branch_chain(branches[i]), _branch_chain(branches[j])
            if mode == "divisorial":
                max_k = min(len(ci), len(cj))
            else:
                max_k = len(ci) + len(cj) + 4
            found = None
            for k in range(max_k, 0, -1):
                got = _forward([branches[i], branches[j]], {(0, 1): k}, h0, mode)
                if got is not None and got == want:
                    found = k
                    break
            if found is None:
                raise InconsistentSeries(
                    f"no contact order realizes the projection onto orbits {i} and {j}"
                )
            seps[(i, j)] = found
            ei = list(ci) + [1] * max(0, found - len(ci))
            ej = list(cj) + [1] * max(0, found - len(cj))
            sep_vals[(i, j)] = (_contact_values(ei)[found - 1], _contact_values(ej)[found - 1])
    return seps, sep_vals


def _self_check(profile: TopologicalProfile, F: FactoredSeries) -> None:
    got = _forward(list(profile.branches), dict(profile.separations), profile.order,
                   profile.mode)
    if got is None or got != F:
        raise SelfCheckFailed(
            "reconstructed profile does not forward-compute to the input series"
        )


# --------------------------------------------------------------------------
# public reconstructions


def reconstruct_divisorial(F: FactoredSeries, r: int, h0: int) -> TopologicalProfile:
    """Topological profile of a divisorial collection from its series."""
    if F.var_count != r:
        raise VariableCountMismatch(f"series has {F.var_count} variables, expected {r}")
    branches = []
    for i in range(r):
        if r > 1:
            keep: list[Optional[int]] = [None] * r
            keep[i] = 0
            zi = substitute(F, keep)
            branches.append(
                reconstruct_single_divisorial(zi, h0, fallback=F, fallback_index=i)
            )
        else:
            branches.append(reconstruct_single_divisorial(F, h0))
    seps, sep_vals = _resolve_separations(branches, F, h0, "divisorial")
    profile = TopologicalProfile("divisorial", h0, tuple(branches), seps, sep_vals)
    _self_check(profile, F)
    return profile


def reconstruct_curves(F: FactoredSeries, r: int, h0: int) -> TopologicalProfile:
    """Topological profile of a curve collection from its series.

    No initial-vertex hypothesis is required: the final rupture binomial of
    a branch is always visible, so the initial multiplicity comes from the
    product of the quotients.
    """
    if F.var_count != r:
        raise VariableCountMismatch(f"series has {F.var_count} variables, expected {r}")
    failures: list[str] = []
    for parsed in _curve_branches(F, r, h0):
        branches = [bp for bp, _key in parsed]
        alpha_keys = [key for _bp, key in parsed]
        try:
            seps, sep_vals = _resolve_separations(branches, F, h0, "curve", alpha_keys)
            profile = TopologicalProfile("curve", h0, tuple(branches), seps, sep_vals)
            _self_check(profile, F)
            return profile
        except (InconsistentSeries, SelfCheckFailed, UnrealizableProfile) as exc:
            failures.append(str(exc))
            continue
    raise UnresolvedCase(
        "no consistent branch decomposition realizes the curve series",
        diagnostics={"factors": F.factors, "h0": h0, "failures": failures[:12]},
    )


def _solo_curve(F1: FactoredSeries, h0: int) -> BranchProfile:
    fac = {m[0]: s for m, s in F1.factors.items()}
    candidates = _single_candidates(fac, h0, "curve", None)
    if not candidates:
        raise InconsistentSeries("no branch orbit realizes the series")
    if len(candidates) > 1:
        raise UnresolvedCase(
            "several branch orbits realize a one-variable curve series",
            diagnostics={"factors": F1.factors, "h0": h0, "candidates": candidates},
        )
    return candidates[0]


def _curve_branches(F: FactoredSeries, r: int, h0: int):
    """Yield candidate branch decompositions with attach exponent vectors.

    Backtracks over the peeling choices; the caller accepts the first
    decomposition whose separations and global self-check close.
    """
    if r == 1:
        bp = _solo_curve(F, h0)
        yield [(bp, (_solo_alpha_value(bp, h0),))]
        return
    if F.is_one():
        if r == 2:
            smooth = BranchProfile("curve", (1,), (), (), 1, False, 1, h0)
            yield [(smooth, (h0, h0)), (smooth, (h0, h0))]
        return

    for i0, orbit, key in _peel_candidates(F, r, h0):
        # Eq. (projection): divide out the attach binomial and set t_{i0} = 1.
        peeled = F.merge(FactoredSeries(r, [(key, -orbit)]))
        keep: list[Optional[int]] = [None] * r
        pos = 0
        for t in range(r):
            if t != i0:
                keep[t] = pos
                pos += 1
        try:
            rest = substitute(peeled, keep)
        except Exception:
            continue
        for others in _iter_quiet(_curve_branches(rest, r - 1, h0)):
            # Eq. (projection2): the full collapse onto t_{i0} equals the
            # solo series times binomials at the peeled key's coordinates.
            collapse: list[Optional[int]] = [None] * r
            collapse[i0] = 0
            solo = substitute(F, collapse)
            corr: list[tuple[tuple[int, ...], int]] = []
            pos = 0
            for t in range(r):
                if t == i0:
                    continue
                corr.append(((key[t],), -others[pos][0].orbit))
                pos += 1
            try:
                bp = _solo_curve(solo.merge(FactoredSeries(1, corr)), h0)
            except (InconsistentSeries, UnresolvedCase, ZeroDivisionError):
                continue
            except Exception:
                continue
            if bp.orbit != orbit:
                continue
            # Lift the attach keys of the sub-collection to full coordinates:
            # the missing entry is M at the attach of orbit j seen by orbit
            # i0, which is coordinate j of the peeled key by symmetry.
            out: list[tuple[BranchProfile, tuple[int, ...]]] = []
            originals = [t for t in range(r) if t != i0]
            for p, (obp, okey) in enumerate(others):
                full = [0] * r
                for t, val in zip(originals, okey):
                    full[t] = val
                full[i0] = key[originals[p]]
                out.append((obp, tuple(full)))
            out.insert(i0, (bp, key))
            yield out


def _iter_quiet(gen):
    """Iterate a candidate generator, treating its failures as exhaustion."""
    while True:
        try:
            yield next(gen)
        except StopIteration:
            return
        except (InconsistentSeries, UnresolvedCase, UnrealizableProfile):
            return


def _solo_alpha_value(bp: BranchProfile, h0: int) -> int:
    """One-variable exponent at the orbit's own attach vertex."""
    graph, sym, reps = _assemble([bp], {}, h0, bp.mode)
    targets = _targets_in_order(graph, sym, reps, bp.mode)
    from .zeta import multiplicity_vectors

    table = multiplicity_vectors(graph, sym, targets)
    attach = graph.arrow(reps[0]).attach if bp.mode == "curve" else reps[0]
    return table[attach][0]


def _peel_candidates(F: FactoredSeries, r: int, h0: int):
    """Candidate (index, orbit size, attach exponent vector) triples.

    A maximal visible exponent belongs to an attach vertex of at least one
    orbit; the candidate indices are the paper's B set (maximal coordinates
    within the normalized-minimality set A), and the orbit size divides h0
    and is bounded by the exponent.
    """
    keys = list(F.factors)
    maximal = [
        k for k in keys
        if not any(other != k and all(a >= b for a, b in zip(other, k)) for other in keys)
    ]
    maximal.sort(key=lambda v: (sum(v), v), reverse=True)
    divisors = [d for d in range(1, h0 + 1) if h0 % d == 0]
    for key in maximal:
        s = F.factors[key]
        if s <= 0:
            continue
        # A(sigma): indices i with key/key_i componentwise below every
        # visible exponent normalized the same way.
        a_set = []
        for i in range(r):
            ok = True
            for other in keys:
                for j in range(r):
                    if key[j] * other[i] > other[j] * key[i]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                a_set.append(i)
        if not a_set:
            a_set = list(range(r))
        top = max(key[i] for i in a_set)
        b_set = [i for i in a_set if key[i] == top]
        ordered = sorted(divisors, key=lambda d: (d != s, d != s // max(len(b_set), 1), d))
        for i0 in b_set:
            for orbit in ordered:
                yield i0, orbit, key


# --------------------------------------------------------------------------
# group-order inference


def infer_group_order(F: FactoredSeries, mode: str, r: Optional[int] = None) -> int:
    """Recover h0 from the series alone.

    Divisorial: the ladder ratios are visible as exponents, so the landmark
    walk runs with the final ratio standing in for h0; the multiplicities it
    recovers are the isotropy order h_ell times the true ones, their gcd is
    h_ell, and h0 = h_ell times the final ratio.  Curve: only decidable when
    the initial multiplicity is visible; all orders up to the smallest
    visible exponent are tried and a unique survivor satisfying that
    visibility condition is required.
    """
    if r is None:
        r = F.var_count
    if mode == "divisorial":
        orders: Optional[set[int]] = None
        for i in range(r):
            if r > 1:
                keep: list[Optional[int]] = [None] * r
                keep[i] = 0
                zi = substitute(F, keep)
            else:
                zi = F
            cands = _infer_single_divisorial(zi, F if r > 1 else None, i)
            orders = cands if orders is None else orders & cands
        survivors = []
        for h0 in sorted(orders or ()):
            try:
                profile = reconstruct_divisorial(F, r, h0)
            except Exception:
                continue
            graph, sym = build_minimal_graph(profile)
            if _hypothesis_holds(graph, sym):
                survivors.append(h0)
        if len(survivors) != 1:
            raise NotInferable(
                f"orders {survivors or sorted(orders or ())} realize the series "
                "under the initial-vertex hypothesis"
            )
        return survivors[0]
    if mode != "curve":
        raise ValueError(f"unknown mode {mode!r}")

    coords = [min(v) for v in F.factors]
    bound = min(coords) if coords else 4
    winners = []
    for h0 in range(1, bound + 1):
        try:
            profile = reconstruct_curves(F, r, h0)
        except Exception:
            continue
        winners.append((h0, profile))
    if len(winners) == 1 and _initial_vertex_visible(winners[0][1]):
        return winners[0][0]
    raise NotInferable(
        f"{len(winners)} group orders realize the series; the initial "
        "multiplicity is not determined"
    )


def _initial_vertex_visible(profile: TopologicalProfile) -> bool:
    """The tangent-cone condition of the inference theorem: the initial
    vertex of the full graph keeps a nonzero Euler characteristic."""
    graph, _sym = build_minimal_graph(profile)
    punctures = sum(1 for a in graph.arrows if a.attach == 1)
    chi = 2 - len(graph.adjacency[1]) - (punctures if profile.mode == "curve" else 0)
    return chi != 0


def _hypothesis_holds(graph: BlowUpGraph, sym: SymmetrySpec) -> bool:
    """The initial vertex has two group-swapped edges in the excluded case."""
    from .resolution import validate_action

    nbrs = graph.adjacency[1]
    if len(nbrs) != 2:
        return True
    tables = validate_action(graph, sym)
    return tables.vertex_orbit_of[nbrs[0]] != tables.vertex_orbit_of[nbrs[1]]


def _infer_single_divisorial(zeta1: FactoredSeries, fallback: Optional[FactoredSeries],
                             index: int = 0) -> set[int]:
    """Candidate orders by the scaled walk of the inference argument.

    Parsing with the final ladder ratio standing in for h0 turns every
    multiplicity equation into its h_ell-scaled version, so the recovered
    numbers are h_ell m(sigma_q); their gcd is h_ell because genuine
    generator lists are coprime, and h0 = h_ell times the final ratio.
    Every candidate is unscaled and confirmed by forward recomputation.
    """
    fac = {m[0]: s for m, s in zeta1.factors.items()}
    if not fac:
        raise NotInferable("empty series")
    candidates: set[int] = set()
    items = sorted(fac.items())
    if len(items) == 1 and items[0][1] == -2:
        # valuation at the origin: M = h0 with chi = 2; only viable when the
        # multivariate minimal exponent does not pin the initial vertex
        # elsewhere
        coord = None
        if fallback is not None:
            keys = list(fallback.factors)
            if keys:
                best = min(keys, key=lambda v: (sum(v), v))
                if all(all(b <= k for b, k in zip(best, key)) for key in keys):
                    coord = best[index]
        if coord is None or coord == items[0][0]:
            candidates.add(items[0][0])

    for case in ("neg", "pos", "hidden"):
        try:
            h0p = _final_ratio(fac, case)
        except _WalkDead:
            continue
        m0 = None
        if case == "hidden" and fallback is not None:
            keys = list(fallback.factors)
            if keys:
                best = min(keys, key=lambda v: (sum(v), v))
                if all(all(b <= k for b, k in zip(best, key)) for key in keys):
                    coord = best[index]
                    if coord > 0 and coord % h0p == 0:
                        m0 = coord // h0p
        try:
            parses = _walk(fac, h0p, "divisorial", case, m0, scaled=True)
        except _WalkDead:
            continue
        for parse in parses:
            kind, gens_s, terminal_s, ladder_s, quots_known = parse
            pool = list(gens_s) + ([terminal_s] if kind == "nu_last" else [])
            h_ell = pool[0] if len(pool) == 1 else gcd(*pool)
            if any(v % h_ell for v in gens_s) or any(m % h_ell for m, _ in ladder_s):
                continue
            gens = [v // h_ell for v in gens_s]
            h0_true = h_ell * h0p
            try:
                bp = _unscaled_profile(kind, gens, terminal_s, h_ell, quots_known,
                                       [(m // h_ell, rr) for m, rr in ladder_s], h0p, h0_true)
            except _WalkDead:
                continue
            got = _forward([bp], {}, h0_true, "divisorial")
            if got is not None and {m[0]: s for m, s in got.factors.items()} == fac:
                candidates.add(h0_true)
    if not candidates:
        raise NotInferable("no order realizes the projection")
    return candidates


def _unscaled_profile(kind, gens, terminal_s, h_ell, quots_known, ladder, h0p, h0_true) -> BranchProfile:
    """True profile from a scaled parse; the caller verifies it forward."""
    quots = list(quots_known)
    if kind == "nu_last":
        if terminal_s % h_ell:
            raise _WalkDead("terminal does not unscale")
        terminal = terminal_s // h_ell
        at_rupture = False
    else:
        if len(gens) >= 2:
            known = _prod(quots)
            if known == 0 or gens[0] % known:
                raise _WalkDead("quotient product does not divide the multiplicity")
            n_g = gens[0] // known
            if n_g < 2:
                raise _WalkDead("final quotient below 2")
            quots.append(n_g)
            terminal = n_g * gens[-1]
            at_rupture = True
        else:
            if gens[0] != 1:
                raise _WalkDead("a valuation at the origin has multiplicity 1")
            terminal, at_rupture = 1, False
    bp = BranchProfile(
        mode="divisorial",
        generators=tuple(gens),
        quotients=tuple(quots),
        ladder=tuple(ladder),
        terminal_m=terminal,
        terminal_at_rupture=at_rupture,
        orbit=h0p,
        weight=1,
    )
    try:
        bp.validate(h0_true)
    except UnrealizableProfile as exc:
        raise _WalkDead(str(exc))
    return bp


def _final_ratio(fac: Mapping[int, int], case: str) -> int:
    """Final ladder ratio read from the exponents alone."""
    items = sorted(fac.items())
    start = 0
    if case == "neg":
        if items[0][1] != -1:
            raise _WalkDead("minimal exponent is not -1")
        ratio, start = 1, 1
    elif case == "pos":
        if items[0][1] < 1:
            raise _WalkDead("minimal exponent is not positive")
        ratio, start = items[0][1] + 2, 1
    else:
        ratio = 2
    rest = items[start:]
    sigma_vals = [m for m, s in rest if s < 0]
    for m, s in rest:
        if s <= 0:
            continue
        q = sum(1 for v in sigma_vals if v < m)
        first_in_gap = not any(
            ss > 0 and mm < m and sum(1 for v in sigma_vals if v < mm) == q
            for mm, ss in rest
        )
        if q >= 1 and first_in_gap:
            if s > ratio:
                ratio = s  # rupture merged with a splitting point
        else:
            ratio += s
    return ratio
