"""Fixed-point restrictions of Schubert classes as exact polynomials.

The restriction of the class indexed by w at the fixed point v is computed
by the subword formula: fix a reduced word (i1, .., iN) for v and let
beta(j) = s_{i1} .. s_{i_{j-1}} (alpha_{i_j}).  Then

    value(w, v) = sum over position subsets J such that the subword at J
                  is a reduced word for w, of prod_{j in J} beta(j).

Every term is a product of positive roots, so the result is manifestly a
nonnegative integer combination of monomials in the simple roots.  The
stored table uses the KK index convention; the Arabia and Billey
conventions are pure reindexings by (w, v) -> (w^{-1}, v^{-1}).
"""

from __future__ import annotations

from .errors import InternalInconsistency, RankMismatch
from .rootsys import RootPolynomial, RootSystem
from .weyl import (
    WeylElement,
    WeylRange,
    _column,
    _column_is_positive,
    _identity_matrix,
    _mat_mul,
    element_from_word,
    enumerate_upto,
    inversion_coords,
)

CONVENTIONS = ("KK", "Arabia", "Billey")


def _betas(rs: RootSystem, word: tuple[int, ...]) -> list[RootPolynomial]:
    out = []
    cur = _identity_matrix(rs.rank)
    for i in word:
        out.append(RootPolynomial.from_linear(rs.rank, _column(cur, i - 1)))
        cur = _mat_mul(cur, rs.reflections[i - 1])
    return out


def billey_restrict(
    rs: RootSystem,
    w: WeylElement,
    v: WeylElement,
    *,
    reduced_word: tuple[int, ...] | None = None,
) -> RootPolynomial:
    """Restriction value for the pair (w, v); zero unless w <= v.

    ``reduced_word`` may supply an alternative reduced word for v; the
    result does not depend on the choice (checked by the test suite, not
    assumed here).
    """
    if w.rs.rank != rs.rank or v.rs.rank != rs.rank:
        raise RankMismatch("elements do not match the root system")
    word = v.word if reduced_word is None else tuple(reduced_word)
    if reduced_word is not None:
        cand = element_from_word(rs, word)
        if cand != v or len(word) != v.length:
            raise ValueError("supplied word is not a reduced word for v")
    betas = _betas(rs, word)
    n = len(word)
    target = w.matrix
    lw = w.length
    ident = _identity_matrix(rs.rank)
    zero = RootPolynomial.zero(rs.rank)
    one = RootPolynomial.one(rs.rank)

    def walk(pos: int, partial, chosen: int, prod: RootPolynomial) -> RootPolynomial:
        if chosen == lw:
            return prod if partial == target else zero
        if chosen + (n - pos) < lw:
            return zero
        acc = walk(pos + 1, partial, chosen, prod)
        i = word[pos] - 1
        if _column_is_positive(partial, i):
            acc = acc + walk(
                pos + 1,
                _mat_mul(partial, rs.reflections[i]),
                chosen + 1,
                prod * betas[pos],
            )
        return acc

    return walk(0, ident, 0, one)


def _restrictions_at(rs: RootSystem, v: WeylElement, by_matrix: dict) -> dict:
    """All nonzero restriction values at the fixed point v, in one pass.

    Walks the tree of reduced subwords of v's canonical word and buckets
    the accumulated root products by the subword's group element.
    """
    word = v.word
    betas = _betas(rs, word)
    n = len(word)
    zero = RootPolynomial.zero(rs.rank)
    buckets: dict = {}

    def walk(pos: int, partial, prod: RootPolynomial):
        if pos == n:
            buckets[partial] = buckets.get(partial, zero) + prod
            return
        walk(pos + 1, partial, prod)
        i = word[pos] - 1
        if _column_is_positive(partial, i):
            walk(pos + 1, _mat_mul(partial, rs.reflections[i]), prod * betas[pos])

    walk(0, _identity_matrix(rs.rank), RootPolynomial.one(rs.rank))
    return {by_matrix[m]: p for m, p in buckets.items() if not p.is_zero()}


class RestrictionTable:
    """Map (w, v) -> restriction polynomial over a length-bounded range."""

    def __init__(self, rs: RootSystem, rng: WeylRange, values: dict, convention: str):
        self.rs = rs
        self.range = rng
        self.values = values
        self.convention = convention

    @property
    def bound(self) -> int:
        return self.range.bound

    def value(self, w: WeylElement, v: WeylElement) -> RootPolynomial:
        return self.values[(w, v)]

    def to_json_list(self) -> list[dict]:
        out = []
        for w in self.range.elements:
            for v in self.range.elements:
                out.append(
                    {
                        "w": list(w.word),
                        "v": list(v.word),
                        "value": self.values[(w, v)].to_json_dict(),
                        "convention": self.convention,
                    }
                )
        return out


def restriction_table(rs: RootSystem, k: int, *, rng: WeylRange | None = None) -> RestrictionTable:
    """Restriction values for every pair in the length-<=-k range.

    The four table invariants (Bruhat support, homogeneity, diagonal =
    product of inversion roots, nonnegative coefficients) are verified
    during construction; a violation raises InternalInconsistency.
    """
    if rng is None:
        rng = enumerate_upto(rs, k)
    zero = RootPolynomial.zero(rs.rank)
    values: dict = {}
    for v in rng.elements:
        column = _restrictions_at(rs, v, rng.by_matrix)
        for w in rng.elements:
            values[(w, v)] = column.get(w, zero)
    table = RestrictionTable(rs, rng, values, "KK")
    _verify_table(table)
    return table


def _verify_table(table: RestrictionTable):
    rng = table.range
    for (w, v), poly in table.values.items():
        if not poly.is_zero() and not rng.leq[(w, v)]:
            raise InternalInconsistency(
                f"support violation: value({w}, {v}) nonzero but w !<= v"
            )
        if not poly.is_homogeneous_of(w.length):
            raise InternalInconsistency(
                f"value({w}, {v}) is not homogeneous of degree {w.length}"
            )
        if poly.sign_pattern() not in ("nonneg", "zero"):
            raise InternalInconsistency(f"value({w}, {v}) has negative coefficients")
    one = RootPolynomial.one(table.rs.rank)
    for w in rng.elements:
        diag = one
        for coords in inversion_coords(w):
            diag = diag * RootPolynomial.from_linear(table.rs.rank, coords)
        if table.values[(w, w)] != diag:
            raise InternalInconsistency(
                f"diagonal value at {w} differs from its inversion product"
            )


def convert_convention(table: RestrictionTable, target: str) -> RestrictionTable:
    """Reindex a table into another convention; a round trip is the identity.

    KK <-> Arabia and KK <-> Billey both send (w, v) to (w^{-1}, v^{-1});
    Arabia and Billey therefore coincide as stored tables.
    """
    if target not in CONVENTIONS:
        raise ValueError(f"unknown convention {target!r}")
    if table.convention not in CONVENTIONS:
        raise ValueError(f"table carries unknown convention {table.convention!r}")
    flip = (table.convention == "KK") != (target == "KK")
    if not flip:
        if table.convention == target:
            return table
        return RestrictionTable(table.rs, table.range, dict(table.values), target)
    inv = table.range.inverses
    values = {
        (w, v): table.values[(inv[w], inv[v])]
        for w in table.range.elements
        for v in table.range.elements
    }
    return RestrictionTable(table.rs, table.range, values, target)
