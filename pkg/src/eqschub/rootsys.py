"""Root systems from (generalized) Cartan matrices and exact polynomial
arithmetic over the simple-root basis.

Conventions fixed here and relied on everywhere else:

* ``a[i][j] = <alpha_j, alpha_i^vee>``, so the simple reflection acts by
  ``s_i(alpha_j) = alpha_j - a[i][j] * alpha_i``.
* All vector coordinates are exact rationals, all polynomial coefficients
  arbitrary-precision integers.  There is no floating point in the core.
* Monomials are ordered graded-lexicographically (total degree first,
  then the exponent tuple), descending, for every serialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ClosureOverflow,
    InternalInconsistency,
    InvalidCartan,
    NotDivisible,
    RankMismatch,
    SingularCartan,
)

FINITE = "finite"
GENERAL = "general"

DEFAULT_ROOT_CAP = 10_000

#: Built-in Cartan matrices, keyed by the names accepted on the command line.
BUILTIN_TYPES = {
    "A1": (((2,),), FINITE),
    "A2": (((2, -1), (-1, 2)), FINITE),
    "A3": (((2, -1, 0), (-1, 2, -1), (0, -1, 2)), FINITE),
    "B2": (((2, -1), (-2, 2)), FINITE),
    "G2": (((2, -1), (-3, 2)), FINITE),
    "AffineA1": (((2, -2), (-2, 2)), GENERAL),
}


@dataclass(frozen=True)
class CartanMatrix:
    """Integer matrix with 2 on the diagonal and non-positive entries off it."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0:
            raise InvalidCartan("empty matrix")
        for row in self.entries:
            if len(row) != n:
                raise InvalidCartan("matrix is not square")
        for i in range(n):
            if self.entries[i][i] != 2:
                raise InvalidCartan(f"diagonal entry a[{i + 1}][{i + 1}] != 2")
            for j in range(n):
                if i == j:
                    continue
                if self.entries[i][j] > 0:
                    raise InvalidCartan(f"off-diagonal entry a[{i + 1}][{j + 1}] > 0")
                if (self.entries[i][j] == 0) != (self.entries[j][i] == 0):
                    raise InvalidCartan(
                        f"zero pattern not symmetric at ({i + 1},{j + 1})"
                    )

    @classmethod
    def from_rows(cls, rows) -> "CartanMatrix":
        try:
            entries = tuple(tuple(int(x) for x in row) for row in rows)
        except (TypeError, ValueError) as exc:
            raise InvalidCartan(f"non-integer entries: {exc}") from exc
        return cls(entries)

    @property
    def rank(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RootVector:
    """Vector in simple-root coordinates; rationals so weights are expressible."""

    coords: tuple[Fraction, ...]

    @classmethod
    def from_ints(cls, coords) -> "RootVector":
        return cls(tuple(Fraction(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "RootVector") -> "RootVector":
        if len(self.coords) != len(other.coords):
            raise RankMismatch("vector ranks differ")
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        if len(self.coords) != len(other.coords):
            raise RankMismatch("vector ranks differ")
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVector":
        return RootVector(tuple(-a for a in self.coords))

    def sign(self) -> str:
        """'positive' | 'negative' | 'zero' | 'mixed' coordinate pattern."""
        has_pos = any(c > 0 for c in self.coords)
        has_neg = any(c < 0 for c in self.coords)
        if has_pos and has_neg:
            return "mixed"
        if has_pos:
            return "positive"
        if has_neg:
            return "negative"
        return "zero"

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def to_polynomial(self) -> "RootPolynomial":
        """Degree-1 polynomial with the same integer coordinates."""
        if not self.is_integral():
            raise ValueError("vector is not in the root lattice")
        return RootPolynomial.from_linear(len(self.coords), [int(c) for c in self.coords])


@dataclass(frozen=True)
class RootSystem:
    """Cartan matrix plus derived data.

    ``reflections[i]`` is the matrix of ``s_{i+1}`` acting on simple-root
    coordinates (columns are images of the simple roots).  For finite kind
    the positive roots and fundamental weights are populated; for general
    (Kac-Moody) kind they are absent.
    """

    cartan: CartanMatrix
    kind: str
    reflections: tuple[tuple[tuple[int, ...], ...], ...]
    positive_roots: tuple[RootVector, ...] | None
    fundamental_weights: tuple[RootVector, ...] | None
    descriptor: str

    @property
    def rank(self) -> int:
        return self.cartan.rank

    def pairing(self, v: RootVector, i: int) -> Fraction:
        """<v, alpha_i^vee> for 1-based i, in the fixed convention."""
        row = self.cartan.entries[i - 1]
        return sum((a * c for a, c in zip(row, v.coords)), Fraction(0))

    def simple_root(self, i: int) -> RootVector:
        coords = [Fraction(0)] * self.rank
        coords[i - 1] = Fraction(1)
        return RootVector(tuple(coords))


def _reflection_matrix(cartan: CartanMatrix, i: int) -> tuple[tuple[int, ...], ...]:
    # Row k of s_i is e_k for k != i; row i is e_i - (row i of the Cartan matrix).
    n = cartan.rank
    rows = []
    for k in range(n):
        if k != i:
            rows.append(tuple(1 if j == k else 0 for j in range(n)))
        else:
            rows.append(tuple((1 if j == i else 0) - cartan.entries[i][j] for j in range(n)))
    return tuple(rows)


def _reflect_coords(cartan: CartanMatrix, i: int, coords: tuple) -> tuple:
    # s_i changes only coordinate i: c_i -> c_i - sum_k a[i][k] c_k.
    pair = sum(a * c for a, c in zip(cartan.entries[i], coords))
    return tuple(c - pair if k == i else c for k, c in enumerate(coords))


def _invert_matrix(entries: tuple[tuple[int, ...], ...]) -> list[list[Fraction]]:
    """Exact inverse by Gaussian elimination; raises SingularCartan."""
    n = len(entries)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if j == i else 0) for j in range(n)]
           for i, row in enumerate(entries)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularCartan("Cartan matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def build_root_system(
    cartan: CartanMatrix,
    kind: str = FINITE,
    *,
    root_cap: int = DEFAULT_ROOT_CAP,
    descriptor: str | None = None,
) -> RootSystem:
    """Construct a root system of the given kind.

    Finite kind computes the positive roots by reflection closure of the
    simple roots and the fundamental weights from the inverse Cartan
    matrix.  The closure aborts with ClosureOverflow once more than
    ``root_cap`` roots appear, which signals a matrix that is not finite
    type.  General kind keeps only the reflection matrices.
    """
    if kind not in (FINITE, GENERAL):
        raise ValueError(f"unknown kind {kind!r}")
    n = cartan.rank
    reflections = tuple(_reflection_matrix(cartan, i) for i in range(n))
    if descriptor is None:
        descriptor = _descriptor_for(cartan, kind)
    if kind == GENERAL:
        return RootSystem(cartan, kind, reflections, None, None, descriptor)

    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for v in frontier:
            for i in range(n):
                image = _reflect_coords(cartan, i, v)
                if image not in roots:
                    roots.add(image)
                    new.append(image)
        if len(roots) > root_cap:
            raise ClosureOverflow(
                f"reflection closure exceeded {root_cap} roots; not finite type"
            )
        frontier = new

    positive = sorted(
        (v for v in roots if all(c >= 0 for c in v)),
        key=lambda v: (sum(v), tuple(-c for c in v)),
    )
    if 2 * len(positive) != len(roots):  # pragma: no cover
        raise InternalInconsistency(
            f"closure produced {len(roots)} roots with uneven sign split"
        )
    inverse = _invert_matrix(cartan.entries)
    # Column j of the inverse Cartan matrix gives omega_j in simple-root coords.
    weights = tuple(
        RootVector(tuple(inverse[k][j] for k in range(n))) for j in range(n)
    )
    return RootSystem(
        cartan,
        kind,
        reflections,
        tuple(RootVector.from_ints(v) for v in positive),
        weights,
        descriptor,
    )


def _descriptor_for(cartan: CartanMatrix, kind: str) -> str:
    for name, (entries, builtin_kind) in BUILTIN_TYPES.items():
        if cartan.entries == entries and kind == builtin_kind:
            return name
    rows = ";".join(",".join(str(x) for x in row) for row in cartan.entries)
    return f"cartan[{rows}]:{kind}"


def builtin_root_system(name: str, *, root_cap: int = DEFAULT_ROOT_CAP) -> RootSystem:
    if name not in BUILTIN_TYPES:
        raise ValueError(f"unknown built-in type {name!r}")
    entries, kind = BUILTIN_TYPES[name]
    return build_root_system(CartanMatrix(entries), kind, root_cap=root_cap, descriptor=name)


# ---------------------------------------------------------------------------
# Sparse polynomials in the simple roots


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class RootPolynomial:
    """Sparse polynomial in a1..a_rank with integer coefficients.

    ``terms`` maps exponent tuples to nonzero integers; the zero
    polynomial is the empty mapping.  Instances are treated as immutable.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms=None, *, _clean: bool = False):
        self.rank = rank
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            cleaned = {}
            for exp, coeff in dict(terms).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != rank or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp}")
                coeff = int(coeff)
                if coeff:
                    cleaned[exp] = coeff
            self.terms = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "RootPolynomial":
        return cls(rank, {}, _clean=True)

    @classmethod
    def constant(cls, rank: int, value: int) -> "RootPolynomial":
        value = int(value)
        if value == 0:
            return cls.zero(rank)
        return cls(rank, {(0,) * rank: value}, _clean=True)

    @classmethod
    def one(cls, rank: int) -> "RootPolynomial":
        return cls.constant(rank, 1)

    @classmethod
    def variable(cls, rank: int, i: int) -> "RootPolynomial":
        """The simple root a_i, 1-based."""
        exp = tuple(1 if j == i - 1 else 0 for j in range(rank))
        return cls(rank, {exp: 1}, _clean=True)

    @classmethod
    def from_linear(cls, rank: int, coords) -> "RootPolynomial":
        terms = {}
        for i, c in enumerate(coords):
            c = int(c)
            if c:
                terms[tuple(1 if j == i else 0 for j in range(rank))] = c
        return cls(rank, terms, _clean=True)

    # -- ring operations ----------------------------------------------

    def _check_rank(self, other: "RootPolynomial"):
        if self.rank != other.rank:
            raise RankMismatch(f"polynomial ranks differ: {self.rank} vs {other.rank}")

    def __add__(self, other: "RootPolynomial") -> "RootPolynomial":
        self._check_rank(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            s = out.get(exp, 0) + coeff
            if s:
                out[exp] = s
            elif exp in out:
                del out[exp]
        return RootPolynomial(self.rank, out, _clean=True)

    def __neg__(self) -> "RootPolynomial":
        return RootPolynomial(
            self.rank, {e: -c for e, c in self.terms.items()}, _clean=True
        )

    def __sub__(self, other: "RootPolynomial") -> "RootPolynomial":
        self._check_rank(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            s = out.get(exp, 0) - coeff
            if s:
                out[exp] = s
            elif exp in out:
                del out[exp]
        return RootPolynomial(self.rank, out, _clean=True)

    def __mul__(self, other: "RootPolynomial") -> "RootPolynomial":
        self._check_rank(other)
        if not self.terms or not other.terms:
            return RootPolynomial.zero(self.rank)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, 0) + c1 * c2
                if s:
                    out[exp] = s
                elif exp in out:
                    del out[exp]
        return RootPolynomial(self.rank, out, _clean=True)

    def scale(self, k: int) -> "RootPolynomial":
        k = int(k)
        if k == 0:
            return RootPolynomial.zero(self.rank)
        return RootPolynomial(
            self.rank, {e: k * c for e, c in self.terms.items()}, _clean=True
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootPolynomial)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    __hash__ = None  # mutable-ish container semantics; never used as a key

    def __repr__(self) -> str:
        return f"RootPolynomial({self.rank}, {self.to_text()!r})"

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Maximum term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous_of(self, degree: int) -> bool:
        """Zero counts as homogeneous of every degree."""
        return all(sum(e) == degree for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.rank, 0)

    def sign_pattern(self) -> str:
        """'nonneg' | 'nonpos' | 'zero' | 'mixed' over the stored coefficients."""
        if not self.terms:
            return "zero"
        has_pos = any(c > 0 for c in self.terms.values())
        has_neg = any(c < 0 for c in self.terms.values())
        if has_pos and has_neg:
            return "mixed"
        return "nonneg" if has_pos else "nonpos"

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in descending graded-lex order (canonical)."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    # -- substitutions ---------------------------------------------------

    def negate_variables(self) -> "RootPolynomial":
        """Substitute a_i -> -a_i, i.e. flip coefficients of odd-degree terms."""
        return RootPolynomial(
            self.rank,
            {e: (-c if sum(e) % 2 else c) for e, c in self.terms.items()},
            _clean=True,
        )

    def apply_linear(self, matrix) -> "RootPolynomial":
        """Substitute a_i by the i-th column of an integer matrix.

        Used to transport polynomials along a Weyl group element acting on
        the simple roots.
        """
        n = self.rank
        images = [
            RootPolynomial.from_linear(n, [matrix[r][i] for r in range(n)])
            for i in range(n)
        ]
        powers: list[list[RootPolynomial]] = [[RootPolynomial.one(n)] for _ in range(n)]
        out = RootPolynomial.zero(n)
        for exp, coeff in self.terms.items():
            term = RootPolynomial.constant(n, coeff)
            for i, e in enumerate(exp):
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * images[i])
                if e:
                    term = term * powers[i][e]
            out = out + term
        return out

    def evaluate(self, values) -> Fraction:
        """Exact evaluation at a_i = values[i-1] (rationals)."""
        vals = [Fraction(v) for v in values]
        if len(vals) != self.rank:
            raise RankMismatch("evaluation point has wrong rank")
        if not self.terms:
            return Fraction(0)
        max_exp = [0] * self.rank
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e > max_exp[i]:
                    max_exp[i] = e
        num_pow = [[v.numerator**k for k in range(m + 1)] for v, m in zip(vals, max_exp)]
        den_pow = [[v.denominator**k for k in range(m + 1)] for v, m in zip(vals, max_exp)]
        denom = 1
        for i in range(self.rank):
            denom *= den_pow[i][max_exp[i]]
        acc = 0
        for exp, coeff in self.terms.items():
            t = coeff
            for i, e in enumerate(exp):
                t *= num_pow[i][e] * den_pow[i][max_exp[i] - e]
            acc += t
        return Fraction(acc, denom)

    def exact_divide_linear(self, lin: "RootPolynomial") -> "RootPolynomial":
        """Exact quotient by a nonzero homogeneous linear form.

        Multivariate division with a single divisor under descending
        graded-lex order; any leftover term means no exact quotient
        exists and NotDivisible is raised.
        """
        self._check_rank(lin)
        if lin.is_zero() or not lin.is_homogeneous_of(1):
            raise ValueError("divisor must be homogeneous of degree 1 and nonzero")
        # Leading variable of the divisor under the monomial order.
        pivot_exp, pivot_coeff = max(
            lin.terms.items(), key=lambda kv: _grlex_key(kv[0])
        )
        pivot = pivot_exp.index(1)
        rest = [(e, c) for e, c in lin.terms.items() if e != pivot_exp]
        remainder = dict(self.terms)
        quotient: dict = {}
        while remainder:
            exp = max(remainder, key=_grlex_key)
            coeff = remainder[exp]
            if exp[pivot] == 0 or coeff % pivot_coeff != 0:
                raise NotDivisible(
                    f"{self.to_text()} is not divisible by {lin.to_text()}"
                )
            q = coeff // pivot_coeff
            qexp = tuple(e - 1 if i == pivot else e for i, e in enumerate(exp))
            quotient[qexp] = quotient.get(qexp, 0) + q
            del remainder[exp]
            for rexp, rcoeff in rest:
                texp = tuple(a + b for a, b in zip(qexp, rexp))
                s = remainder.get(texp, 0) - q * rcoeff
                if s:
                    remainder[texp] = s
                elif texp in remainder:
                    del remainder[texp]
        return RootPolynomial(self.rank, {e: c for e, c in quotient.items() if c}, _clean=True)

    # -- rendering -------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form, e.g. ``3*a1^2*a2 + a2^3`` or ``0``."""
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.sorted_terms():
            mono = monomial_text(exp)
            mag = abs(coeff)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "terms": [
                {"exp": list(exp), "coeff": str(coeff)}
                for exp, coeff in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json_dict(cls, rank: int, data: dict) -> "RootPolynomial":
        terms = {}
        for item in data["terms"]:
            exp = tuple(int(e) for e in item["exp"])
            coeff = int(item["coeff"])
            if coeff:
                terms[exp] = coeff
        return cls(rank, terms)


def monomial_text(exp: tuple[int, ...]) -> str:
    factors = []
    for i, e in enumerate(exp):
        if e == 1:
            factors.append(f"a{i + 1}")
        elif e > 1:
            factors.append(f"a{i + 1}^{e}")
    return "*".join(factors) if factors else "1"


# ---------------------------------------------------------------------------
# Operation-shaped wrappers


def poly_add(p: RootPolynomial, q: RootPolynomial) -> RootPolynomial:
    return p + q


def poly_mul(p: RootPolynomial, q: RootPolynomial) -> RootPolynomial:
    return p * q


def poly_exact_divide_linear(p: RootPolynomial, lin: RootPolynomial) -> RootPolynomial:
    return p.exact_divide_linear(lin)


def poly_negate_variables(p: RootPolynomial) -> RootPolynomial:
    return p.negate_variables()


def alpha_sign(p: RootPolynomial) -> str:
    return p.sign_pattern()
