"""Truncated multivariate integer power series and binomial-product forms.

Two representations are used throughout:

* ``SparseSeries`` -- an element of Z[[t_1,...,t_r]] known up to total degree
  ``cutoff``, stored as a sparse map from exponent vectors to nonzero integer
  coefficients.

* ``FactoredSeries`` -- a finite product prod_M (1 - t^M)^{s(M)} with integer
  exponents s(M).  Every unit series (constant term 1) has a unique such
  expansion degree by degree; ``decompose`` computes it up to the cutoff.

Exponent vectors are ordered graded-lexicographically (total degree first).
Internally a vector is packed into a single integer with the total degree in
the top field so that integer comparison realizes that order and addition of
keys is componentwise addition; the hot multiply loop lives in
:mod:`reszeta.kernel`.

All coefficient arithmetic is exact (Python integers).
"""

from __future__ import annotations

from math import comb
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import kernel
from .errors import (
    AnnihilatingSubstitution,
    NonUnitSeries,
    VariableCountMismatch,
    ZeroExponentVector,
)

__all__ = [
    "SparseSeries",
    "FactoredSeries",
    "series_mul",
    "binomial_expand",
    "expand_factored",
    "decompose",
    "substitute",
    "stable_decompose",
    "format_sparse",
    "parse_sparse",
    "format_factored",
    "parse_factored",
]


def _field_width(cutoff: int) -> int:
    # No carries when adding two keys whose entries are all <= cutoff.
    return max(4, (2 * cutoff + 1).bit_length())


def _pack(vec: Sequence[int], width: int) -> int:
    key = sum(vec)
    for e in vec:
        key = (key << width) | e
    return key


def _unpack(key: int, r: int, width: int) -> tuple[int, ...]:
    mask = (1 << width) - 1
    out = [0] * r
    for i in range(r - 1, -1, -1):
        out[i] = key & mask
        key >>= width
    return tuple(out)


class SparseSeries:
    """Integer power series in ``var_count`` variables, exact up to ``cutoff``.

    Equality compares coefficients up to the smaller of the two cutoffs.
    Instances are immutable; all operations return new objects.
    """

    __slots__ = ("var_count", "cutoff", "_width", "_shift", "_packed")

    def __init__(self, var_count: int, cutoff: int, terms: Mapping[Sequence[int], int] | None = None, _packed=None):
        if var_count < 1:
            raise VariableCountMismatch("need at least one variable")
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        self.var_count = var_count
        self.cutoff = cutoff
        self._width = _field_width(cutoff)
        self._shift = var_count * self._width
        if _packed is not None:
            self._packed = _packed
            return
        packed: dict[int, int] = {}
        for vec, c in (terms or {}).items():
            vec = tuple(vec)
            if len(vec) != var_count:
                raise VariableCountMismatch(f"exponent {vec} has wrong length")
            if any(e < 0 for e in vec):
                raise ValueError(f"negative exponent in {vec}")
            if sum(vec) > cutoff:
                continue
            if c:
                k = _pack(vec, self._width)
                v = packed.get(k, 0) + c
                if v:
                    packed[k] = v
                else:
                    packed.pop(k, None)
        self._packed = packed

    # -- constructors ------------------------------------------------------

    @classmethod
    def one(cls, var_count: int, cutoff: int) -> "SparseSeries":
        return cls(var_count, cutoff, {(0,) * var_count: 1})

    @classmethod
    def zero(cls, var_count: int, cutoff: int) -> "SparseSeries":
        return cls(var_count, cutoff, {})

    # -- access --------------------------------------------------------------

    def terms(self) -> dict[tuple[int, ...], int]:
        """Terms as an exponent-vector dict, in graded-lex order."""
        r, w = self.var_count, self._width
        return {_unpack(k, r, w): c for k, c in sorted(self._packed.items())}

    def coefficient(self, vec: Sequence[int]) -> int:
        vec = tuple(vec)
        if len(vec) != self.var_count:
            raise VariableCountMismatch(f"exponent {vec} has wrong length")
        if sum(vec) > self.cutoff:
            raise ValueError(f"{vec} exceeds cutoff {self.cutoff}")
        return self._packed.get(_pack(vec, self._width), 0)

    def is_one(self) -> bool:
        return self._packed == {0: 1}

    def __len__(self) -> int:
        return len(self._packed)

    def __bool__(self) -> bool:
        return bool(self._packed)

    # -- structure -----------------------------------------------------------

    def truncate(self, cutoff: int) -> "SparseSeries":
        """The same series known only up to ``cutoff`` (<= current)."""
        if cutoff > self.cutoff:
            raise ValueError("cannot extend knowledge by truncation")
        if cutoff == self.cutoff:
            return self
        w = _field_width(cutoff)
        out: dict[int, int] = {}
        for k, c in self._packed.items():
            if (k >> self._shift) <= cutoff:
                out[_pack(_unpack(k, self.var_count, self._width), w)] = c
        return SparseSeries(self.var_count, cutoff, _packed=out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseSeries):
            return NotImplemented
        if self.var_count != other.var_count:
            return False
        d = min(self.cutoff, other.cutoff)
        return self.truncate(d)._packed == other.truncate(d)._packed

    def __hash__(self):
        raise TypeError("SparseSeries is not hashable (cutoff-relative equality)")

    def __mul__(self, other: "SparseSeries") -> "SparseSeries":
        return series_mul(self, other)

    def __repr__(self) -> str:
        n = len(self._packed)
        return f"SparseSeries(vars={self.var_count}, cutoff={self.cutoff}, terms={n})"


def series_mul(a: SparseSeries, b: SparseSeries) -> SparseSeries:
    """Exact product truncated to the smaller cutoff."""
    if a.var_count != b.var_count:
        raise VariableCountMismatch(f"{a.var_count} != {b.var_count} variables")
    d = min(a.cutoff, b.cutoff)
    a = a.truncate(d)
    b = b.truncate(d)
    packed = kernel.mul_packed(a._packed, b._packed, a._shift, d)
    return SparseSeries(a.var_count, d, _packed=packed)


def binomial_expand(M: Sequence[int], s: int, var_count: Optional[int] = None, cutoff: int = 0) -> SparseSeries:
    """The expansion of (1 - t^M)^s up to total degree ``cutoff``.

    For s >= 0 this is the finite binomial sum; for s < 0 the coefficient of
    t^{kM} is comb(-s + k - 1, k).
    """
    M = tuple(M)
    r = var_count if var_count is not None else len(M)
    if len(M) != r:
        raise VariableCountMismatch(f"exponent {M} has wrong length")
    if all(e == 0 for e in M):
        raise ZeroExponentVector("binomial exponent must be nonzero")
    if any(e < 0 for e in M):
        raise ValueError(f"negative exponent in {M}")
    deg = sum(M)
    kmax = cutoff // deg
    terms: dict[tuple[int, ...], int] = {}
    if s >= 0:
        kmax = min(kmax, s)
        for k in range(kmax + 1):
            terms[tuple(k * e for e in M)] = (-1) ** k * comb(s, k)
    else:
        for k in range(kmax + 1):
            terms[tuple(k * e for e in M)] = comb(-s + k - 1, k)
    return SparseSeries(r, cutoff, terms)


class FactoredSeries:
    """A finite product prod_M (1 - t^M)^{s(M)} with nonzero integer s(M)."""

    __slots__ = ("var_count", "_factors")

    def __init__(self, var_count: int, factors: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]] = ()):
        if var_count < 1:
            raise VariableCountMismatch("need at least one variable")
        self.var_count = var_count
        merged: dict[tuple[int, ...], int] = {}
        items = factors.items() if isinstance(factors, Mapping) else factors
        for vec, s in items:
            vec = tuple(vec)
            if len(vec) != var_count:
                raise VariableCountMismatch(f"exponent {vec} has wrong length")
            if all(e == 0 for e in vec):
                raise ZeroExponentVector("factor exponent must be nonzero")
            if any(e < 0 for e in vec):
                raise ValueError(f"negative exponent in {vec}")
            v = merged.get(vec, 0) + s
            if v:
                merged[vec] = v
            else:
                merged.pop(vec, None)
        self._factors = merged

    @property
    def factors(self) -> dict[tuple[int, ...], int]:
        return dict(sorted(self._factors.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    def items(self):
        return self.factors.items()

    def is_one(self) -> bool:
        return not self._factors

    def __len__(self) -> int:
        return len(self._factors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactoredSeries):
            return NotImplemented
        return self.var_count == other.var_count and self._factors == other._factors

    def __hash__(self):
        return hash((self.var_count, tuple(sorted(self._factors.items()))))

    def merge(self, other: "FactoredSeries") -> "FactoredSeries":
        if self.var_count != other.var_count:
            raise VariableCountMismatch(f"{self.var_count} != {other.var_count}")
        return FactoredSeries(self.var_count, list(self._factors.items()) + list(other._factors.items()))

    def scale(self, n: int) -> "FactoredSeries":
        return FactoredSeries(self.var_count, {v: n * s for v, s in self._factors.items()})

    def max_total_degree(self) -> int:
        return max((sum(v) for v in self._factors), default=0)

    def expand(self, cutoff: int) -> SparseSeries:
        return expand_factored(self, cutoff)

    def __repr__(self) -> str:
        body = ", ".join(f"{v}:{s}" for v, s in self.factors.items())
        return f"FactoredSeries(vars={self.var_count}, {{{body}}})"


def expand_factored(F: FactoredSeries, cutoff: int) -> SparseSeries:
    """Expand the product up to total degree ``cutoff``."""
    out = SparseSeries.one(F.var_count, cutoff)
    # Low-degree binomials blow terms up fastest; folding them last keeps the
    # intermediate products small.
    for vec, s in sorted(F._factors.items(), key=lambda kv: -sum(kv[0])):
        out = series_mul(out, binomial_expand(vec, s, F.var_count, cutoff))
    return out


def decompose(f: SparseSeries) -> FactoredSeries:
    """The unique binomial-product decomposition of a unit series.

    Repeatedly kills the graded-lex minimal non-constant term c*t^M of the
    residual by multiplying with (1 - t^M)^c, recording s(M) = -c.  Exponents
    of total degree beyond the cutoff are unknowable at this precision and
    are not reported; see ``stable_decompose`` for the re-run rule.
    """
    r = f.var_count
    if f.coefficient((0,) * r) != 1:
        raise NonUnitSeries("decompose requires constant term 1")
    residual = dict(f._packed)
    width, shift, dmax = f._width, f._shift, f.cutoff
    factors: list[tuple[tuple[int, ...], int]] = []
    guard = 0
    limit = len(residual)
    while len(residual) > 1:
        k = min(key for key in residual if key != 0)
        c = residual[k]
        vec = _unpack(k, r, width)
        factors.append((vec, -c))
        correction = binomial_expand(vec, c, r, dmax)
        residual = kernel.mul_packed(residual, correction._packed, shift, dmax)
        guard += 1
        limit = max(limit, len(residual))
        if guard > limit + dmax + 1:  # each step kills the minimal term
            raise NonUnitSeries("decomposition failed to terminate")
    if residual != {0: 1}:
        raise NonUnitSeries("residual lost its constant term")
    return FactoredSeries(r, factors)


def substitute(F: FactoredSeries, assignment: Sequence[Optional[int]]) -> FactoredSeries:
    """Identify or drop variables of a factored series.

    ``assignment[i]`` is the output variable index for input variable i, or
    None to set t_i := 1.  Output indices must cover 0..k-1 for some k >= 1.
    Substitution is sound on the factored form (each binomial transforms
    independently); on a truncated expansion it would not be.
    """
    if len(assignment) != F.var_count:
        raise VariableCountMismatch("assignment length != variable count")
    used = sorted({j for j in assignment if j is not None})
    if not used:
        raise VariableCountMismatch("at least one variable must be retained")
    if used != list(range(len(used))):
        raise ValueError(f"output indices must be contiguous from 0, got {used}")
    k = len(used)
    out: list[tuple[tuple[int, ...], int]] = []
    for vec, s in F._factors.items():
        img = [0] * k
        for i, e in enumerate(vec):
            j = assignment[i]
            if j is not None:
                img[j] += e
        if not any(img):
            raise AnnihilatingSubstitution(
                f"factor (1 - t^{vec})^{s} maps to (1-1)^{s} under {assignment}"
            )
        out.append((tuple(img), s))
    return FactoredSeries(k, out)


def stable_decompose(series_at: Callable[[int], SparseSeries], cutoff: int, max_doublings: int = 8) -> FactoredSeries:
    """Decompose with the cutoff-doubling stabilization rule.

    ``series_at(D)`` must return the same underlying series truncated at D.
    Doubles the cutoff until the factor set is unchanged on the shared range;
    a finite product (as every zeta series of a finite graph is) always
    stabilizes.
    """
    current = decompose(series_at(cutoff))
    for _ in range(max_doublings):
        cutoff *= 2
        wider = decompose(series_at(cutoff))
        shared = {v: s for v, s in wider.factors.items() if sum(v) <= cutoff // 2}
        if shared == current.factors:
            return wider
        current = wider
    raise NonUnitSeries(f"factor set did not stabilize below cutoff {cutoff}")


# -- text formats (the CLI pipe formats) -------------------------------------


def format_sparse(f: SparseSeries) -> str:
    lines = [f"vars={f.var_count} cutoff={f.cutoff}"]
    for vec, c in f.terms().items():
        lines.append(" ".join(map(str, vec)) + f" : {c}")
    return "\n".join(lines) + "\n"


def parse_sparse(text: str) -> SparseSeries:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("vars="):
        raise ValueError("sparse series text must start with 'vars=R cutoff=D'")
    head = dict(part.split("=") for part in lines[0].split())
    r, cutoff = int(head["vars"]), int(head["cutoff"])
    terms: dict[tuple[int, ...], int] = {}
    for ln in lines[1:]:
        left, _, right = ln.partition(":")
        vec = tuple(int(x) for x in left.split())
        terms[vec] = terms.get(vec, 0) + int(right)
    return SparseSeries(r, cutoff, terms)


def format_factored(F: FactoredSeries) -> str:
    lines = []
    for vec, s in F.factors.items():
        lines.append(" ".join(map(str, vec)) + f" : {s}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_factored(text: str, var_count: Optional[int] = None) -> FactoredSeries:
    entries: list[tuple[tuple[int, ...], int]] = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        left, _, right = ln.partition(":")
        entries.append((tuple(int(x) for x in left.split()), int(right)))
    if var_count is None:
        if not entries:
            raise ValueError("cannot infer variable count of an empty product")
        var_count = len(entries[0][0])
    return FactoredSeries(var_count, entries)
