"""Series arithmetic: products, binomial expansions, the unique
decomposition, factored-level substitution, and the text formats."""

import pytest
from hypothesis import given, settings, strategies as st

from reszeta.errors import (
    AnnihilatingSubstitution,
    NonUnitSeries,
    VariableCountMismatch,
    ZeroExponentVector,
)
from reszeta.series import (
    FactoredSeries,
    SparseSeries,
    binomial_expand,
    decompose,
    expand_factored,
    format_factored,
    format_sparse,
    parse_factored,
    parse_sparse,
    series_mul,
    stable_decompose,
    substitute,
)


def geom(M, s, cutoff, r=1):
    return binomial_expand(M, s, r, cutoff)


class TestMul:
    def test_difference_of_squares(self):
        a = SparseSeries(1, 2, {(0,): 1, (1,): 1})
        b = SparseSeries(1, 2, {(0,): 1, (1,): -1})
        assert (a * b).terms() == {(0,): 1, (2,): -1}

    def test_identity(self):
        f = SparseSeries(2, 5, {(0, 0): 1, (1, 2): 7, (3, 0): -4})
        assert series_mul(f, SparseSeries.one(2, 5)) == f

    def test_geometric_cancellation_to_one(self):
        # direct convolution oracle: (1-t^5)^{-2} against (1-t^5)^2
        inv = geom((5,), -2, 10)
        assert inv.terms() == {(0,): 1, (5,): 2, (10,): 3}
        sq = geom((5,), 2, 10)
        assert series_mul(inv, sq).is_one()

    def test_var_count_mismatch(self):
        with pytest.raises(VariableCountMismatch):
            series_mul(SparseSeries.one(1, 3), SparseSeries.one(2, 3))

    def test_truncation_to_min_cutoff(self):
        a = geom((1,), -1, 9)
        b = geom((1,), -1, 4)
        assert series_mul(a, b).cutoff == 4


class TestBinomialExpand:
    def test_geometric(self):
        assert geom((1,), -1, 3).terms() == {(0,): 1, (1,): 1, (2,): 1, (3,): 1}

    def test_fig1_series_expansion(self):
        assert geom((5,), -2, 15).terms() == {(0,): 1, (5,): 2, (10,): 3, (15,): 4}

    def test_literal_binomial(self):
        assert binomial_expand((1, 1), 1, 2, 4).terms() == {(0, 0): 1, (1, 1): -1}

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroExponentVector):
            binomial_expand((0, 0), 1, 2, 4)

    def test_inverse_pair_is_one(self):
        for s in (-3, -1, 2, 5):
            f = series_mul(geom((2, 1), s, 12, 2), geom((2, 1), -s, 12, 2))
            assert f.is_one()


class TestDecompose:
    def test_geometric(self):
        assert decompose(geom((1,), -1, 3)).factors == {(1,): -1}

    def test_fig1(self):
        f = SparseSeries(1, 15, {(0,): 1, (5,): 2, (10,): 3, (15,): 4})
        assert decompose(f).factors == {(5,): -2}

    def test_semigroup_2_3(self):
        # oracle: sum over the semigroup <2,3> up to degree 12
        membership = {0} | {2 * a + 3 * b for a in range(7) for b in range(5)}
        f = expand_factored(FactoredSeries(1, {(2,): -1, (3,): -1, (6,): 1}), 12)
        assert f.terms() == {(k,): 1 for k in sorted(membership) if k <= 12}
        assert decompose(f).factors == {(2,): -1, (3,): -1, (6,): 1}

    def test_requires_unit(self):
        with pytest.raises(NonUnitSeries):
            decompose(SparseSeries(1, 3, {(1,): 1}))

    def test_term_order_independence(self):
        # same series assembled in two different insertion orders
        terms = {(3, 0): 5, (0, 2): -1, (1, 1): 2, (0, 0): 1, (2, 2): 7}
        f1 = SparseSeries(2, 4, dict(sorted(terms.items())))
        f2 = SparseSeries(2, 4, dict(sorted(terms.items(), reverse=True)))
        assert decompose(f1) == decompose(f2)


class TestSubstitute:
    def test_coordinate_drop(self):
        F = FactoredSeries(2, {(2, 2): 1, (1, 1): -1})
        assert substitute(F, [0, None]).factors == {(2,): 1, (1,): -1}

    def test_merge_of_equal_images(self):
        F = FactoredSeries(2, {(1, 0): -1, (0, 1): -1})
        assert substitute(F, [0, 0]).factors == {(1,): -2}

    def test_two_cusp_projection_shape(self):
        F = FactoredSeries(2, {(6, 4): -1, (4, 6): -1, (10, 10): 1})
        assert substitute(F, [0, None]).factors == {(6,): -1, (4,): -1, (10,): 1}

    def test_annihilation(self):
        F = FactoredSeries(2, {(0, 3): 1})
        with pytest.raises(AnnihilatingSubstitution):
            substitute(F, [0, None])

    def test_must_keep_a_variable(self):
        F = FactoredSeries(2, {(1, 1): 1})
        with pytest.raises(VariableCountMismatch):
            substitute(F, [None, None])

    def test_commutes_with_expansion(self):
        F = FactoredSeries(3, {(1, 2, 0): -2, (0, 1, 1): 1, (2, 0, 3): -1})
        G = substitute(F, [0, 1, 1])
        D = 14
        expanded = expand_factored(F, 30)
        merged = {}
        for vec, c in expanded.terms().items():
            img = (vec[0], vec[1] + vec[2])
            if sum(img) <= D:
                merged[img] = merged.get(img, 0) + c
        merged = {v: c for v, c in merged.items() if c}
        assert expand_factored(G, D).terms() == merged


vectors = st.integers(0, 6)


@st.composite
def factored_series(draw):
    r = draw(st.integers(1, 4))
    n = draw(st.integers(1, 5))
    factors = {}
    for _ in range(n):
        vec = tuple(draw(vectors) for _ in range(r))
        if any(vec):
            factors[vec] = draw(st.sampled_from([-3, -2, -1, 1, 2, 3]))
    return FactoredSeries(r, factors)


@settings(max_examples=60, deadline=None)
@given(factored_series())
def test_roundtrip_decompose_expand(F):
    D = 18
    f = expand_factored(F, D)
    got = decompose(f)
    want = {v: s for v, s in F.factors.items() if sum(v) <= D}
    assert got.factors == want


@settings(max_examples=40, deadline=None)
@given(factored_series())
def test_roundtrip_expand_decompose(F):
    f = expand_factored(F, 14)
    assert expand_factored(decompose(f), 14) == f


def test_stable_decompose():
    F = FactoredSeries(1, {(2,): -1, (9,): 1})
    got = stable_decompose(lambda D: expand_factored(F, D), 5)
    assert got.factors == F.factors


class TestTextFormats:
    def test_sparse_roundtrip(self):
        f = SparseSeries(2, 6, {(0, 0): 1, (1, 2): -7, (3, 3): 11})
        assert parse_sparse(format_sparse(f)) == f

    def test_factored_roundtrip(self):
        F = FactoredSeries(3, {(1, 0, 2): -2, (0, 4, 0): 9})
        assert parse_factored(format_factored(F)) == F

    def test_factored_empty_needs_count(self):
        assert parse_factored("", var_count=2).is_one()
        with pytest.raises(ValueError):
            parse_factored("")

    def test_sparse_format_shape(self):
        f = SparseSeries(1, 3, {(0,): 1, (2,): 5})
        assert format_sparse(f) == "vars=1 cutoff=3\n0 : 1\n2 : 5\n"
