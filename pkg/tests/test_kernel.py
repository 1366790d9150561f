"""Backend parity: the compiled multiply must agree with the fallback bit
for bit, including delegation on huge coefficients and wide keys."""

import random

import pytest

from reszeta import _kernel_py

_kernel_c = pytest.importorskip("reszeta._kernel_c")


def _pack(vec, width):
    key = sum(vec)
    for e in vec:
        key = (key << width) | e
    return key


def _random_packed(rng, r, cutoff, n_terms, coef):
    width = max(4, (2 * cutoff + 1).bit_length())
    d = {}
    for _ in range(n_terms):
        vec = [rng.randint(0, cutoff) for _ in range(r)]
        if sum(vec) <= cutoff:
            d[_pack(vec, width)] = coef(rng)
    return d, r * width


def test_parity_small_coefficients():
    rng = random.Random(42)
    for _ in range(300):
        r, cutoff = rng.randint(1, 4), rng.randint(1, 40)
        a, shift = _random_packed(rng, r, cutoff, rng.randint(1, 50),
                                  lambda g: g.randint(-9, 9) or 3)
        b, _ = _random_packed(rng, r, cutoff, rng.randint(1, 50),
                              lambda g: g.randint(-9, 9) or -2)
        assert _kernel_c.mul_packed(a, b, shift, cutoff) == \
            _kernel_py.mul_packed(a, b, shift, cutoff)


def test_parity_huge_coefficients_delegates_exactly():
    rng = random.Random(7)
    for _ in range(60):
        r, cutoff = rng.randint(1, 3), rng.randint(1, 20)
        big = lambda g: g.randint(-10 ** 30, 10 ** 30) or 1
        a, shift = _random_packed(rng, r, cutoff, rng.randint(1, 20), big)
        b, _ = _random_packed(rng, r, cutoff, rng.randint(1, 20), big)
        assert _kernel_c.mul_packed(a, b, shift, cutoff) == \
            _kernel_py.mul_packed(a, b, shift, cutoff)


def test_parity_wide_keys_delegates():
    # (r+1) fields no longer fit 63 bits: the compiled path must hand over
    rng = random.Random(3)
    r, cutoff = 8, 200
    a, shift = _random_packed(rng, r, cutoff, 25, lambda g: g.randint(1, 5))
    b, _ = _random_packed(rng, r, cutoff, 25, lambda g: g.randint(-5, -1))
    assert shift >= 63
    assert _kernel_c.mul_packed(a, b, shift, cutoff) == \
        _kernel_py.mul_packed(a, b, shift, cutoff)


def test_empty_operands():
    assert _kernel_c.mul_packed({}, {1: 1}, 8, 4) == {}
    assert _kernel_py.mul_packed({0: 1}, {}, 8, 4) == {}


def test_cancellation():
    # (1 - t) * (1 + t + t^2 + t^3) keeps only the edge terms
    width = 4
    shift = width
    a = {_k(0, width): 1, _k(1, width): -1}
    b = {_k(i, width): 1 for i in range(4)}
    out = {_k(0, width): 1, _k(4, width): -1}
    got_c = _kernel_c.mul_packed(a, b, shift, 4)
    got_p = _kernel_py.mul_packed(a, b, shift, 4)
    assert got_c == out and got_p == out


def _k(e, width):
    return (e << width) | e
