"""Group-order inference from the series alone."""

import random

import pytest

from reszeta.errors import NotInferable
from reszeta.fixtures import load_fixture
from reszeta.genconf import random_configuration
from reszeta.reconstruct import infer_group_order
from reszeta.series import FactoredSeries
from reszeta.zeta import zeta_factored


def test_cusp_rupture_order_one():
    assert infer_group_order(FactoredSeries(1, {(2,): -1, (3,): -1}), "divisorial") == 1


def test_doubled_chain_pair_order_four():
    # two orbits of two four-chains each: the scaled equations plus the
    # multivariate minimal exponent pin the order
    g, sym, t = _four_arm_config()
    F = zeta_factored(g, sym, t)
    assert infer_group_order(F, "divisorial", t.var_count) == 4


def _four_arm_config():
    from reszeta.resolution import SymmetrySpec, build_graph
    from reszeta.zeta import targets_from

    prox = [()]
    for _arm in range(4):
        base = len(prox)
        prox += [(1,), (base + 1,), (base + 2,)]
    g = build_graph(prox, marks=(4, 7, 10, 13))
    vm = {}
    for k in range(3):
        vm[2 + k], vm[5 + k] = 5 + k, 2 + k
        vm[8 + k], vm[11 + k] = 11 + k, 8 + k
    sym = SymmetrySpec(4, ((vm, {}),))
    return g, sym, targets_from(g, sym, "divisorial")


def test_fig5_curve_not_inferable():
    with pytest.raises(NotInferable):
        infer_group_order(FactoredSeries(1, {(35,): -2, (70,): 2}), "curve")


def test_fig6_divisorial_not_inferable():
    with pytest.raises(NotInferable):
        infer_group_order(
            FactoredSeries(1, {(35,): -2, (70,): 2, (105,): -2}), "divisorial"
        )


def test_curve_inferable_when_initial_vertex_visible():
    # a single cusp branch: three visible binomials, tangent cone of one line
    F = FactoredSeries(1, {(2,): -1, (3,): -1, (6,): 1})
    assert infer_group_order(F, "curve") == 1


def test_suite_recovery():
    rng = random.Random(4242)
    for _ in range(80):
        g, sym, t = random_configuration(rng, "divisorial", enforce_hypothesis=True)
        F = zeta_factored(g, sym, t)
        assert infer_group_order(F, "divisorial", t.var_count) == sym.order


def test_fixture_orders():
    for name, order in (("fig1_left", None), ("fig6_left", None)):
        g, sym, t = load_fixture(name)
        F = zeta_factored(g, sym, t)
        with pytest.raises(NotInferable):
            # both fixtures violate the initial-vertex hypothesis
            infer_group_order(F, "divisorial", t.var_count)
