"""Blow-up graphs: derived matrices, validity, symmetry actions, canonical
forms, contraction and shape classification."""

import random

import pytest

from reszeta.errors import (
    AgeViolation,
    InvalidPairs,
    InvalidProximity,
    NotMinimal,
    OrderViolation,
    StructureViolation,
)
from reszeta.resolution import (
    Arrow,
    SymmetrySpec,
    build_graph,
    canonical_key,
    classify_shape,
    contract_to_minimal,
    from_char_pairs,
    is_isomorphic,
    trivial_symmetry,
    validate_action,
)

CUSP = [(), (1,), (1, 2)]
FIG1_LEFT = [(), (1,), (2,), (3,), (1,), (5,), (6,)]
FIG1_LEFT_SWAP = SymmetrySpec(2, (({2: 5, 5: 2, 3: 6, 6: 3, 4: 7, 7: 4}, {}),))
FIG1_RIGHT = [(), (1,), (1, 2), (1,), (1, 4)]
FIG1_RIGHT_SWAP = SymmetrySpec(2, (({2: 4, 4: 2, 3: 5, 5: 3}, {}),))


def random_graph(rng, n):
    prox = [()]
    meeting = set()
    for k in range(2, n + 1):
        pairs = sorted(meeting)
        if pairs and rng.random() < 0.4:
            i, j = rng.choice(pairs)
            meeting.discard((i, j))
            prox.append((i, j))
            meeting.update({(i, k), (j, k)})
        else:
            i = rng.randint(1, k - 1)
            prox.append((i,))
            meeting.add((i, k))
    return build_graph(prox)


class TestBuildGraph:
    def test_cusp(self):
        g = build_graph(CUSP, arrows=(Arrow("a", 3, 1),))
        assert g.Minv == ((1, 1, 2), (1, 2, 3), (2, 3, 6))
        assert g.edges == {(1, 3), (2, 3)}
        assert g.chi == (1, 1, -1)

    def test_two_transversal_smooth(self):
        g = build_graph([()], arrows=(Arrow("a", 1, 1), Arrow("b", 1, 1)))
        assert g.euler(1) == 0

    def test_free_chain(self):
        g = build_graph([(), (1,), (2,), (3,)], marks=(4,))
        assert [row[3] for row in g.Minv] == [1, 2, 3, 4]
        assert g.chi == (1, 0, 0, 1)

    def test_invalid_satellite(self):
        # 1 and 2 no longer meet after 3 separates them
        with pytest.raises(InvalidProximity):
            build_graph([(), (1,), (1, 2), (1, 2)])

    def test_proximity_must_point_back(self):
        with pytest.raises(InvalidProximity):
            build_graph([(), (2,)])

    def test_ages(self):
        g = build_graph(FIG1_LEFT, marks=(4, 7))
        assert g.ages == (1, 2, 3, 4, 2, 3, 4)


class TestInvariants:
    def test_minv_positive_symmetric_and_tree(self):
        rng = random.Random(5)
        for _ in range(120):
            g = random_graph(rng, rng.randint(2, 14))
            for i in range(g.n):
                for j in range(g.n):
                    assert g.Minv[i][j] == g.Minv[j][i] > 0
            assert len(g.edges) == g.n - 1

    def test_euler_sum(self):
        rng = random.Random(6)
        for _ in range(60):
            g = random_graph(rng, rng.randint(2, 12))
            arrows = tuple(
                Arrow(f"a{i}", rng.randint(1, g.n), 1) for i in range(rng.randint(0, 3))
            )
            g = g.replace(arrows=arrows)
            assert sum(g.chi) == 2 - len(arrows)


class TestFromCharPairs:
    def test_cusp(self):
        g = from_char_pairs([(2, 3)])
        assert g.n == 3 and g.prox == (frozenset(), frozenset({1}), frozenset({1, 2}))
        assert g.arrows[0].attach == 3

    def test_smooth(self):
        g = from_char_pairs([(1, 1)])
        assert g.n == 1 and g.arrows[0].attach == 1

    def test_2_5(self):
        g = from_char_pairs([(2, 5)])
        assert g.n == 4
        assert [row[3] for row in g.Minv] == [2, 4, 5, 10]

    def test_two_pairs(self):
        g = from_char_pairs([(2, 3), (2, 7)])
        col = [row[g.n - 1] for row in g.Minv]
        assert col == [4, 6, 12, 13, 26]

    def test_invalid(self):
        with pytest.raises(InvalidPairs):
            from_char_pairs([(2, 4)])
        with pytest.raises(InvalidPairs):
            from_char_pairs([(2, 3), (2, 5)])  # 5 <= 3*2 does not deepen


class TestSymmetry:
    def test_fig1_left_orbits(self):
        g = build_graph(FIG1_LEFT, marks=(4, 7))
        t = validate_action(g, FIG1_LEFT_SWAP)
        assert t.vertex_orbits == ((1,), (2, 5), (3, 6), (4, 7))
        assert t.isotropy == (2, 1, 1, 1)

    def test_trivial_group(self):
        g = build_graph(CUSP)
        t = validate_action(g, trivial_symmetry(1))
        assert all(len(o) == 1 for o in t.vertex_orbits)

    def test_nonfaithful_order(self):
        g = build_graph(CUSP)
        t = validate_action(g, trivial_symmetry(2))
        assert t.isotropy == (2, 2, 2)

    def test_age_violation(self):
        g = build_graph([(), (1,), (2,)])
        with pytest.raises((AgeViolation, StructureViolation)):
            validate_action(g, SymmetrySpec(2, (({1: 2, 2: 1}, {}),)))

    def test_order_violation(self):
        g = build_graph(FIG1_LEFT, marks=(4, 7))
        with pytest.raises(OrderViolation):
            validate_action(g, SymmetrySpec(3, FIG1_LEFT_SWAP.generators))

    def test_mark_preservation(self):
        g = build_graph(FIG1_LEFT, marks=(4,))
        with pytest.raises(StructureViolation):
            validate_action(g, FIG1_LEFT_SWAP)

    def test_minv_equivariance(self):
        g = build_graph(FIG1_LEFT, marks=(4, 7))
        t = validate_action(g, FIG1_LEFT_SWAP)
        vmap = {2: 5, 5: 2, 3: 6, 6: 3, 4: 7, 7: 4, 1: 1}
        for d in range(1, 8):
            for v in range(1, 8):
                assert g.Minv[d - 1][v - 1] == g.Minv[vmap[d] - 1][vmap[v] - 1]


class TestCanonical:
    def test_fig1_pair_not_isomorphic(self):
        g1 = build_graph(FIG1_LEFT, marks=(4, 7))
        g2 = build_graph(FIG1_RIGHT, marks=(3, 5))
        assert not is_isomorphic(g1, g2)

    def test_arrow_ids_do_not_matter(self):
        g1 = build_graph(CUSP, arrows=(Arrow("a", 3, 2),))
        g2 = build_graph(CUSP, arrows=(Arrow("zz", 3, 2),))
        assert is_isomorphic(g1, g2)

    def test_weights_matter(self):
        g1 = build_graph(CUSP, arrows=(Arrow("a", 3, 2),))
        g2 = build_graph(CUSP, arrows=(Arrow("a", 3, 3),))
        assert not is_isomorphic(g1, g2)

    def test_relabelled_arms(self):
        g1 = build_graph(FIG1_LEFT, marks=(4, 7))
        other = [(), (1,), (2,), (1,), (4,), (5,), (3,)]
        g2 = build_graph(other, marks=(6, 7))
        assert is_isomorphic(g1, g2)

    def test_fig5_pair_not_isomorphic(self):
        g1 = build_graph(FIG1_RIGHT, arrows=(Arrow("p", 3, 7), Arrow("q", 5, 7)))
        g2 = build_graph(
            [(), (1,), (2,), (2, 3), (1,), (5,), (5, 6)],
            arrows=(Arrow("p", 4, 5), Arrow("q", 7, 5)),
        )
        assert not is_isomorphic(g1, g2)


class TestContract:
    def test_slides_single_arrow_down_free_chain(self):
        g = build_graph([(), (1,), (1, 2), (3,)], arrows=(Arrow("a", 4, 1),))
        got = contract_to_minimal(g)
        assert got.n == 3 and got.arrows[0].attach == 3

    def test_keeps_needed_vertex(self):
        g = build_graph([(), (1,), (1, 2), (3,)],
                        arrows=(Arrow("a", 4, 1), Arrow("b", 4, 1)))
        assert contract_to_minimal(g).n == 4

    def test_idempotent(self):
        rng = random.Random(11)
        for _ in range(80):
            g = random_graph(rng, rng.randint(2, 10))
            arrows = tuple(
                Arrow(f"a{i}", rng.randint(1, g.n), rng.randint(1, 2))
                for i in range(rng.randint(0, 2))
            )
            marks = tuple(rng.sample(range(1, g.n + 1), rng.randint(0, 1)))
            g = g.replace(arrows=arrows, marks=marks)
            c1 = contract_to_minimal(g)
            c2 = contract_to_minimal(c1)
            assert canonical_key(c1) == canonical_key(c2)

    def test_tangent_pair_with_superfluous_blowup(self):
        g = build_graph([(), (1,), (2,)],
                        arrows=(Arrow("a", 3, 1), Arrow("b", 2, 1)))
        got = contract_to_minimal(g)
        assert got.n == 2 and {a.attach for a in got.arrows} == {2}

    def test_unmarked_tail_removed(self):
        g = build_graph([(), (1,), (1, 2), (3,)], marks=(3,))
        assert contract_to_minimal(g).n == 3


class TestClassifyShape:
    def test_cusp_mark(self):
        g = build_graph(CUSP, marks=(3,))
        rep = classify_shape(g, trivial_symmetry(), 3)
        assert rep.generators == (2, 3)
        assert rep.quotients == (2,)
        assert rep.dead_ends == (1, 2) and rep.ruptures == (3,)
        assert rep.terminal_m == 6 and rep.splitting == ()

    def test_fig1_left(self):
        g = build_graph(FIG1_LEFT, marks=(4, 7))
        rep = classify_shape(g, FIG1_LEFT_SWAP, 4)
        assert rep.generators == (1,)
        assert rep.splitting == ((1, 2),)
        assert rep.orbit_size == 2 and rep.terminal_m == 4

    def test_two_cusp_arrows(self):
        g = build_graph(FIG1_RIGHT, arrows=(Arrow("p", 3, 1), Arrow("q", 5, 1)))
        sym = SymmetrySpec(2, (({2: 4, 4: 2, 3: 5, 5: 3}, {"p": "q", "q": "p"}),))
        rep = classify_shape(g, sym, "p")
        assert rep.generators == (2, 3)
        assert rep.splitting == ((1, 2),) and rep.orbit_size == 2

    def test_not_minimal(self):
        g = build_graph([(), (1,), (2,), (3,)], marks=(4, 3))
        # closure of vertex 3 is a plain chain: fine; but a mark whose
        # ancestor closure contains a contractible end must be refused
        g2 = build_graph([(), (1,), (1, 2), (3,)], marks=(4,))
        rep = classify_shape(g2, trivial_symmetry(), 4)
        assert rep.generators == (2, 3)  # closure is the 4-point cusp chain, minimal
        with pytest.raises(NotMinimal):
            classify_shape(
                build_graph([(), (1,), (2,)], arrows=(Arrow("a", 3, 1),)),
                trivial_symmetry(),
                "a",
            )

    def test_semigroup_recovery_small(self):
        for pairs in ([(2, 3)], [(2, 5)], [(3, 4)], [(2, 3), (2, 7)], [(3, 7)]):
            g = from_char_pairs(pairs)
            rep = classify_shape(g, trivial_symmetry(), g.arrows[0].id)
            regen = from_char_pairs(pairs)
            col = [row[regen.n - 1] for row in regen.Minv]
            dead = sorted(col[v - 1] for v in rep.dead_ends)
            assert tuple(dead) == rep.generators
