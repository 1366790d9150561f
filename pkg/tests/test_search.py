"""Collision search over mirror doubles."""

import pytest

from reszeta.errors import BoundsExceeded
from reszeta.search import SearchBounds, collision_search


def test_tiny_bound_is_empty():
    report = collision_search(SearchBounds(max_vertices=1))
    assert report.groups == () and report.candidates == 0


def test_divisorial_bound7_contains_fig1_class():
    report = collision_search(SearchBounds(mode="divisorial", max_vertices=7, order=2))
    series = {g.series_text for g in report.groups}
    assert "5 : -2\n" in series
    fig1 = next(g for g in report.groups if g.series_text == "5 : -2\n")
    assert len(fig1.members) == 2
    # the five- and seven-vertex realizations
    sizes = sorted(int(desc.split()[0].split("=")[1]) for _key, desc in fig1.members)
    assert sizes == [7, 7]  # both mirror doubles are seven vertices pre-contraction
    keys = {key for key, _desc in fig1.members}
    assert len(keys) == 2


def test_groups_have_distinct_members():
    report = collision_search(SearchBounds(mode="divisorial", max_vertices=7, order=2))
    for group in report.groups:
        keys = [k for k, _d in group.members]
        assert len(keys) == len(set(keys)) >= 2


def test_curve_weighted_contains_fig5_pair():
    report = collision_search(
        SearchBounds(mode="curve", max_vertices=7, weights=(5, 7))
    )
    target = "35 : -2\n70 : 2\n"
    group = next(g for g in report.groups if g.series_text == target)
    orders = sorted(int(d.split("h0=")[1].split()[0]) for _k, d in group.members)
    assert orders == [10, 14]


def test_jobs_do_not_change_output():
    a = collision_search(SearchBounds(mode="divisorial", max_vertices=5, jobs=1))
    b = collision_search(SearchBounds(mode="divisorial", max_vertices=5, jobs=2))
    assert a.render() == b.render()


def test_bounds_cap():
    with pytest.raises(BoundsExceeded):
        collision_search(SearchBounds(max_vertices=11))
