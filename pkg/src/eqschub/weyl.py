"""Weyl group elements as exact integer matrices on the root lattice.

An element is identified by its action matrix (columns are the images of
the simple roots); words are non-unique, so the matrix is the identity of
record.  The canonical reduced word is produced by repeatedly stripping
the smallest right descent, and words act on the left, applied right to
left: ``word = (i1, .., ik)`` means ``s_{i1} s_{i2} ... s_{ik}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

from .errors import (
    NotFiniteType,
    NotGroupElement,
    RankMismatch,
    ResourceCap,
)
from .rootsys import FINITE, RootSystem, RootVector

DEFAULT_WORD_CAP = 10_000
DEFAULT_ENUM_CAP = 100_000

Matrix = tuple[tuple[int, ...], ...]


def _identity_matrix(rank: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _column(m: Matrix, j: int) -> tuple[int, ...]:
    return tuple(row[j] for row in m)


def _column_is_negative(m: Matrix, j: int) -> bool:
    neg = False
    for row in m:
        v = row[j]
        if v > 0:
            return False
        if v < 0:
            neg = True
    return neg


def _column_is_positive(m: Matrix, j: int) -> bool:
    pos = False
    for row in m:
        v = row[j]
        if v < 0:
            return False
        if v > 0:
            pos = True
    return pos


class WeylElement:
    """Group element with cached length and canonical reduced word."""

    __slots__ = ("rs", "matrix", "word", "_hash")

    def __init__(self, rs: RootSystem, matrix: Matrix, word: tuple[int, ...]):
        self.rs = rs
        self.matrix = matrix
        self.word = word
        self._hash = hash((matrix, rs.cartan.entries, rs.kind))

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return not self.word

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeylElement)
            and self.matrix == other.matrix
            and self.rs.cartan.entries == other.rs.cartan.entries
            and self.rs.kind == other.rs.kind
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"WeylElement({self.word_text()})"

    def word_text(self) -> str:
        return ",".join(str(i) for i in self.word) if self.word else "e"

    def to_json_dict(self) -> dict:
        return {"word": list(self.word)}


def identity(rs: RootSystem) -> WeylElement:
    return WeylElement(rs, _identity_matrix(rs.rank), ())


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    if not 1 <= i <= rs.rank:
        raise ValueError(f"simple reflection index {i} out of range")
    return WeylElement(rs, rs.reflections[i - 1], (i,))


def canonicalize(rs: RootSystem, matrix, *, cap: int = DEFAULT_WORD_CAP) -> WeylElement:
    """Build the element with the given action matrix.

    Strips the smallest right descent until the identity is reached; the
    letters stripped last come first in the canonical word.  Works
    uniformly for finite and Kac-Moody matrices.  Raises NotGroupElement
    if no descent exists for a non-identity matrix or the loop exceeds
    ``cap`` steps.
    """
    m = tuple(tuple(int(x) for x in row) for row in matrix)
    n = rs.rank
    if len(m) != n or any(len(row) != n for row in m):
        raise RankMismatch("matrix rank does not match root system")
    ident = _identity_matrix(n)
    letters = []
    cur = m
    steps = 0
    while cur != ident:
        steps += 1
        if steps > cap:
            raise NotGroupElement(f"descent loop exceeded {cap} steps")
        descent = next((i for i in range(n) if _column_is_negative(cur, i)), None)
        if descent is None:
            raise NotGroupElement("matrix has no descent and is not the identity")
        letters.append(descent + 1)
        cur = _mat_mul(cur, rs.reflections[descent])
    return WeylElement(rs, m, tuple(reversed(letters)))


def element_from_word(rs: RootSystem, word) -> WeylElement:
    """Product of simple reflections; the input word need not be reduced."""
    m = _identity_matrix(rs.rank)
    for i in word:
        if not 1 <= int(i) <= rs.rank:
            raise ValueError(f"letter {i} out of range for rank {rs.rank}")
        m = _mat_mul(m, rs.reflections[int(i) - 1])
    return canonicalize(rs, m)


def _check_same_system(a: WeylElement, b: WeylElement):
    if a.rs.cartan.entries != b.rs.cartan.entries or a.rs.kind != b.rs.kind:
        raise RankMismatch("elements belong to different root systems")


def multiply(w1: WeylElement, w2: WeylElement) -> WeylElement:
    _check_same_system(w1, w2)
    return canonicalize(w1.rs, _mat_mul(w1.matrix, w2.matrix))


def inverse(w: WeylElement) -> WeylElement:
    m = _identity_matrix(w.rs.rank)
    for i in reversed(w.word):
        m = _mat_mul(m, w.rs.reflections[i - 1])
    return canonicalize(w.rs, m)


def apply(w: WeylElement, v: RootVector) -> RootVector:
    if v.rank != w.rs.rank:
        raise RankMismatch("vector rank does not match element")
    coords = tuple(
        sum((Fraction(row[j]) * v.coords[j] for j in range(w.rs.rank)), Fraction(0))
        for row in w.matrix
    )
    return RootVector(coords)


def inversions(w: WeylElement) -> tuple[RootVector, ...]:
    """Positive roots sent negative by w^{-1}, in canonical-word order.

    beta_j = s_{i1} .. s_{i_{j-1}} (alpha_{i_j}); there are length(w) of
    them, all distinct, and their product is the diagonal restriction.
    """
    return tuple(
        RootVector.from_ints(c) for c in inversion_coords(w)
    )


def inversion_coords(w: WeylElement) -> list[tuple[int, ...]]:
    out = []
    cur = _identity_matrix(w.rs.rank)
    for i in w.word:
        out.append(_column(cur, i - 1))
        cur = _mat_mul(cur, w.rs.reflections[i - 1])
    return out


def right_descents(w: WeylElement) -> list[int]:
    return [i + 1 for i in range(w.rs.rank) if _column_is_negative(w.matrix, i)]


def bruhat_leq(u: WeylElement, w: WeylElement) -> bool:
    """Bruhat order test by right-to-left greedy matching on w's word."""
    _check_same_system(u, w)
    if u.length > w.length:
        return False
    if u.length == 0:
        return True
    cur = u.matrix
    remaining = u.length
    for letter in reversed(w.word):
        if _column_is_negative(cur, letter - 1):
            cur = _mat_mul(cur, u.rs.reflections[letter - 1])
            remaining -= 1
            if remaining == 0:
                return True
    return False


class WeylRange:
    """All elements of length <= bound, sorted by (length, word lex).

    ``complete`` is True when the range provably exhausts the whole group
    (no element of maximal stored length has a length-increasing
    extension).
    """

    def __init__(self, rs: RootSystem, bound: int, elements: tuple[WeylElement, ...], complete: bool):
        self.rs = rs
        self.bound = bound
        self.elements = elements
        self.complete = complete

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def by_matrix(self) -> dict:
        return {w.matrix: w for w in self.elements}

    @cached_property
    def leq(self) -> dict:
        """Bruhat comparison table over all stored pairs."""
        return {
            (u, w): bruhat_leq(u, w) for u in self.elements for w in self.elements
        }

    @cached_property
    def inverses(self) -> dict:
        return {w: inverse(w) for w in self.elements}

    def to_json_list(self) -> list[dict]:
        return [w.to_json_dict() for w in self.elements]


def enumerate_upto(rs: RootSystem, k: int, *, cap: int = DEFAULT_ENUM_CAP) -> WeylRange:
    """Breadth-first closure under length-increasing right multiplication."""
    if k < 0:
        raise ValueError("length bound must be nonnegative")
    seen = {_identity_matrix(rs.rank)}
    level = [_identity_matrix(rs.rank)]
    levels = [level]
    for _ in range(k):
        nxt = []
        for m in level:
            for i in range(rs.rank):
                if _column_is_positive(m, i):
                    child = _mat_mul(m, rs.reflections[i])
                    if child not in seen:
                        seen.add(child)
                        nxt.append(child)
                        if len(seen) > cap:
                            raise ResourceCap(
                                f"enumeration exceeded {cap} elements at length bound {k}"
                            )
        if not nxt:
            break
        level = nxt
        levels.append(level)
    exhausted = len(levels) <= k or not any(
        _column_is_positive(m, i) for m in levels[-1] for i in range(rs.rank)
    )
    elements = sorted(
        (canonicalize(rs, m) for m in seen), key=lambda w: (w.length, w.word)
    )
    return WeylRange(rs, k, tuple(elements), exhausted)


def longest_element(rs: RootSystem) -> WeylElement:
    """Unique maximal-length element of a finite-type Weyl group."""
    if rs.kind != FINITE:
        raise NotFiniteType("longest element requires a finite-type root system")
    cur = _identity_matrix(rs.rank)
    while True:
        ascent = next((i for i in range(rs.rank) if _column_is_positive(cur, i)), None)
        if ascent is None:
            break
        cur = _mat_mul(cur, rs.reflections[ascent])
    w0 = canonicalize(rs, cur)
    assert w0.length == len(rs.positive_roots)
    return w0
