"""Inverse algorithms: the single-orbit cascade, multi-orbit assembly,
ambiguity semantics, round trips and determinism."""

import random

import pytest

from reszeta.errors import (
    AmbiguousReconstruction,
    InconsistentSeries,
    UnrealizableProfile,
    VariableCountMismatch,
)
from reszeta.fixtures import load_fixture
from reszeta.genconf import random_configuration
from reszeta.reconstruct import (
    BranchProfile,
    build_minimal_graph,
    reconstruct_curves,
    reconstruct_divisorial,
    reconstruct_single_divisorial,
)
from reszeta.resolution import (
    Arrow,
    build_graph,
    canonical_key,
    contract_to_minimal,
    from_char_pairs,
    is_isomorphic,
    trivial_symmetry,
)
from reszeta.series import FactoredSeries
from reszeta.zeta import collapse_to_one_variable, targets_from, zeta_factored


class TestSingleDivisorial:
    def test_cusp_rupture(self):
        bp = reconstruct_single_divisorial(FactoredSeries(1, {(2,): -1, (3,): -1}), 1)
        assert bp.generators == (2, 3)
        assert bp.quotients == (2,)
        assert bp.terminal_at_rupture and bp.terminal_m == 6

    def test_four_chain(self):
        bp = reconstruct_single_divisorial(FactoredSeries(1, {(1,): -1, (4,): -1}), 1)
        assert bp.generators == (1,) and bp.terminal_m == 4
        assert not bp.terminal_at_rupture

    def test_fig1_ambiguous(self):
        with pytest.raises(AmbiguousReconstruction) as err:
            reconstruct_single_divisorial(FactoredSeries(1, {(5,): -2}), 2)
        kinds = {
            (w.generators, w.terminal_m) for w in err.value.witnesses
        }
        assert kinds == {((2, 3), 6), ((1,), 4)}

    def test_fig1_witnesses_are_the_fig1_graphs(self):
        with pytest.raises(AmbiguousReconstruction) as err:
            reconstruct_single_divisorial(FactoredSeries(1, {(5,): -2}), 2)
        left, _, _ = load_fixture("fig1_left")
        right, _, _ = load_fixture("fig1_right")
        rebuilt = set()
        for w in err.value.witnesses:
            profile = _solo_profile(w, 2)
            graph, _sym = build_minimal_graph(profile)
            rebuilt.add(canonical_key(graph))
        assert rebuilt == {canonical_key(left), canonical_key(right)}

    def test_inconsistent(self):
        with pytest.raises(InconsistentSeries):
            reconstruct_single_divisorial(FactoredSeries(1, {(4,): 7}), 1)

    def test_origin_valuation(self):
        bp = reconstruct_single_divisorial(FactoredSeries(1, {(3,): -2}), 3)
        assert bp.generators == (1,) and bp.terminal_m == 1


def _solo_profile(bp, h0):
    from reszeta.reconstruct import TopologicalProfile

    return TopologicalProfile(bp.mode, h0, (bp,), {}, {})


class TestReconstructDivisorial:
    def test_two_transversal_chains(self):
        g = build_graph([(), (1,), (2,), (3,), (1,), (5,), (6,)], marks=(4, 7))
        t = targets_from(g, trivial_symmetry(), "divisorial")
        F = zeta_factored(g, trivial_symmetry(), t)
        prof = reconstruct_divisorial(F, 2, 1)
        assert prof.separations[(0, 1)] == 1
        rebuilt, _ = build_minimal_graph(prof)
        assert is_isomorphic(rebuilt, g)

    def test_r1_reduces_to_single(self):
        prof = reconstruct_divisorial(FactoredSeries(1, {(2,): -1, (3,): -1}), 1, 1)
        assert prof.branches[0].generators == (2, 3)

    def test_tangent_curvette_marks(self):
        g = build_graph([(), (1,), (2,), (2,)], marks=(3, 4))
        t = targets_from(g, trivial_symmetry(), "divisorial")
        F = zeta_factored(g, trivial_symmetry(), t)
        assert F.factors[(2, 2)] == 1
        prof = reconstruct_divisorial(F, 2, 1)
        assert prof.separations[(0, 1)] == 2
        assert prof.separation_values[(0, 1)] == (2, 2)
        rebuilt, _ = build_minimal_graph(prof)
        assert is_isomorphic(rebuilt, g)

    def test_var_count_check(self):
        with pytest.raises(VariableCountMismatch):
            reconstruct_divisorial(FactoredSeries(1, {(2,): -1}), 2, 1)


class TestReconstructCurves:
    def test_two_cusps_one_orbit(self):
        prof = reconstruct_curves(FactoredSeries(1, {(5,): -2, (10,): 2}), 1, 2)
        bp = prof.branches[0]
        assert bp.generators == (2, 3) and bp.orbit == 2 and bp.weight == 1

    def test_trivial_pair(self):
        prof = reconstruct_curves(FactoredSeries(2, {}), 2, 1)
        assert [b.generators for b in prof.branches] == [(1,), (1,)]
        graph, _ = build_minimal_graph(prof)
        assert graph.n == 1 and len(graph.arrows) == 2

    def test_one_variable_series_not_accepted_for_larger_r(self):
        F1 = FactoredSeries(1, {(13,): 1, (17,): 3, (20,): 2})
        with pytest.raises(VariableCountMismatch):
            reconstruct_curves(F1, 4, 1)

    def test_sec5_full_roundtrip(self):
        for name in ("sec5_fprime", "sec5_fdoubleprime"):
            g, sym, t = load_fixture(name)
            F = zeta_factored(g, sym, t)
            prof = reconstruct_curves(F, t.var_count, sym.order)
            rebuilt, _ = build_minimal_graph(prof)
            assert is_isomorphic(rebuilt, contract_to_minimal(g))

    def test_fig5_weighted(self):
        F = FactoredSeries(1, {(35,): -2, (70,): 2})
        p14 = reconstruct_curves(F, 1, 14)
        assert p14.branches[0].generators == (2, 3) and p14.branches[0].weight == 7
        p10 = reconstruct_curves(F, 1, 10)
        assert p10.branches[0].generators == (2, 5) and p10.branches[0].weight == 5
        for prof, fixture in ((p14, "fig5_cprime"), (p10, "fig5_cdoubleprime")):
            rebuilt, _ = build_minimal_graph(prof)
            glob, _, _ = load_fixture(fixture)
            assert is_isomorphic(rebuilt, glob)


class TestBuildMinimalGraph:
    def test_cusp_profile(self):
        bp = BranchProfile("divisorial", (2, 3), (2,), (), 6, True, 1, 1)
        graph, _ = build_minimal_graph(_solo_profile(bp, 1))
        want = from_char_pairs([(2, 3)])
        assert is_isomorphic(graph, want.replace(arrows=(), marks=(3,)))

    def test_smooth_profile(self):
        bp = BranchProfile("curve", (1,), (), (), 1, False, 1, 1)
        graph, _ = build_minimal_graph(_solo_profile(bp, 1))
        assert graph.n == 1 and len(graph.arrows) == 1

    def test_two_cusp_profile_forward(self):
        prof = reconstruct_curves(FactoredSeries(1, {(5,): -2, (10,): 2}), 1, 2)
        graph, sym = build_minimal_graph(prof)
        t = targets_from(graph, sym, "curve")
        assert zeta_factored(graph, sym, t).factors == {(5,): -2, (10,): 2}

    def test_unrealizable(self):
        bad = BranchProfile("divisorial", (2, 4), (2,), (), 8, True, 1, 1)
        with pytest.raises(UnrealizableProfile):
            build_minimal_graph(_solo_profile(bad, 1))


class TestRoundTrips:
    @pytest.mark.parametrize("mode,enforce", [("divisorial", True), ("curve", False)])
    def test_random_roundtrips(self, mode, enforce):
        rng = random.Random(hash(mode) % 100000)
        for _ in range(60):
            g, sym, t = random_configuration(rng, mode, enforce_hypothesis=enforce)
            F = zeta_factored(g, sym, t)
            if mode == "divisorial":
                prof = reconstruct_divisorial(F, t.var_count, sym.order)
            else:
                prof = reconstruct_curves(F, t.var_count, sym.order)
            rebuilt, rsym = build_minimal_graph(prof)
            assert is_isomorphic(rebuilt, contract_to_minimal(g))
            # self-check law: the rebuilt graph forward-computes to the input
            rt = targets_from(rebuilt, rsym, mode)
            assert len(rt.orbits) == t.var_count

    def test_determinism(self):
        # cusp plus a transversal smooth branch
        g = build_graph([(), (1,), (1, 2)],
                        arrows=(Arrow("p", 3, 1), Arrow("l", 1, 1)))
        t = targets_from(g, trivial_symmetry(), "curve")
        F = zeta_factored(g, trivial_symmetry(), t)
        assert F.factors == {(1, 3): -1, (2, 6): 1} or F.factors == {(3, 1): -1, (6, 2): 1}
        runs = set()
        for _ in range(3):
            prof = reconstruct_curves(F, 2, 1)
            graph, _ = build_minimal_graph(prof)
            runs.add(canonical_key(graph))
        assert len(runs) == 1
        assert is_isomorphic(build_minimal_graph(reconstruct_curves(F, 2, 1))[0], g)

    def test_never_ambiguous_on_hypothesis_ok(self):
        rng = random.Random(55)
        for _ in range(80):
            g, sym, t = random_configuration(
                rng, "divisorial", enforce_hypothesis=True
            )
            F = zeta_factored(g, sym, t)
            reconstruct_divisorial(F, t.var_count, sym.order)  # must not raise
