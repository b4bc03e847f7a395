"""Triangular solve, opposite basis, certificates, numeric evaluation."""

import random
from fractions import Fraction

import pytest

from eqschub import (
    DomainViolation,
    InsufficientBound,
    RootPolynomial,
    StructureTable,
    billey_evaluate,
    builtin_root_system,
    element_from_word,
    enumerate_upto,
    identity,
    inverse,
    inversions,
    longest_element,
    opposite_constants,
    positivity_certificate,
    restriction_table,
    structure_constants,
    value_sign_ok,
    verify_product_identity,
)
from eqschub.localize import RestrictionTable

A1 = builtin_root_system("A1")
A2 = builtin_root_system("A2")
B2 = builtin_root_system("B2")
AFF = builtin_root_system("AffineA1")

T_A1 = restriction_table(A1, 1)
T_A2 = restriction_table(A2, 3)
T_B2 = restriction_table(B2, 4)


def poly(rank, terms):
    return RootPolynomial(rank, terms)


# ---------------------------------------------------------------------------
# ground truth


def test_a1_diagonal_pair():
    s = element_from_word(A1, (1,))
    table = structure_constants(T_A1, s, s)
    e = identity(A1)
    assert table.values[s] == poly(1, {(1,): 1})
    assert table.values[e].is_zero()


def test_identity_pair_gives_unit_row():
    for t in (T_A1, T_A2, T_B2):
        e = identity(t.rs)
        for v in t.range:
            table = structure_constants(t, e, v)
            assert set(table.order) == {w for w in t.range if w.length <= v.length}
            for w in table.order:
                expected = RootPolynomial.one(t.rs.rank) if w == v else RootPolynomial.zero(t.rs.rank)
                assert table.values[w] == expected


def test_a2_s1_squared():
    s1 = element_from_word(A2, (1,))
    table = structure_constants(T_A2, s1, s1)
    assert table.values[s1] == poly(2, {(1, 0): 1})
    w12 = element_from_word(A2, (1, 2))
    w21 = element_from_word(A2, (2, 1))
    assert table.values[w12].is_zero()
    assert table.values[w21] == RootPolynomial.one(2)


def test_degree_one_products_match_chevalley_values():
    """Hand-computed coroot pairings for the non-simply-laced types.

    With alpha_1 the long root, <omega_1, beta_vee> = 1 for beta the
    reflection root linking s2 to s1s2, so both length-2 coefficients of
    x_{s1} x_{s2} are 1, while x_{s2}^2 picks up only the s1s2 branch.
    """
    for name in ("B2", "G2"):
        system = builtin_root_system(name)
        t = restriction_table(system, len(system.positive_roots))
        s1 = element_from_word(system, (1,))
        s2 = element_from_word(system, (2,))
        one = RootPolynomial.one(2)
        alpha2 = RootPolynomial.variable(2, 2)
        prod = structure_constants(t, s1, s2)
        assert {w.word: p for w, p in prod.nonzero_items()} == {
            (1, 2): one,
            (2, 1): one,
        }
        sq = structure_constants(t, s2, s2)
        assert {w.word: p for w, p in sq.nonzero_items()} == {
            (2,): alpha2,
            (1, 2): one,
        }


def test_insufficient_bound_for_truncated_range():
    table = restriction_table(AFF, 3)
    u = element_from_word(AFF, (1, 2))
    with pytest.raises(InsufficientBound):
        structure_constants(table, u, u)


def test_complete_range_allows_any_pair():
    # A1 has bound 1 but the range is the whole group.
    s = element_from_word(A1, (1,))
    assert structure_constants(T_A1, s, s).values[s] == poly(1, {(1,): 1})


def test_solver_requires_kk_convention():
    from eqschub import convert_convention

    billey = convert_convention(T_A2, "Billey")
    s1 = element_from_word(A2, (1,))
    with pytest.raises(ValueError):
        structure_constants(billey, s1, s1)


def test_solver_rejects_foreign_elements():
    from eqschub import RankMismatch

    with pytest.raises(RankMismatch):
        structure_constants(T_A2, element_from_word(B2, (1,)), element_from_word(B2, (1,)))


def test_solver_aborts_on_corrupted_diagonal():
    """An inexact diagonal division is an internal inconsistency."""
    from eqschub import InternalInconsistency

    s = element_from_word(A1, (1,))
    corrupted = dict(T_A1.values)
    corrupted[(s, s)] = poly(1, {(1,): 1, (0,): 1})
    bad = RestrictionTable(A1, T_A1.range, corrupted, "KK")
    with pytest.raises(InternalInconsistency):
        structure_constants(bad, s, s)


def test_solver_aborts_on_nonzero_numerator_at_skipped_element():
    from eqschub import InternalInconsistency

    s = element_from_word(A1, (1,))
    e = identity(A1)
    corrupted = dict(T_A1.values)
    corrupted[(s, e)] = RootPolynomial.one(1)
    bad = RestrictionTable(A1, T_A1.range, corrupted, "KK")
    with pytest.raises(InternalInconsistency):
        structure_constants(bad, s, s)


# ---------------------------------------------------------------------------
# invariants


@pytest.mark.parametrize(
    "table,max_total",
    [(T_A2, None), (T_B2, None)],
)
def test_symmetry_support_degree_finite(table, max_total):
    rng = table.range
    for u in rng:
        for v in rng:
            s_uv = structure_constants(table, u, v)
            s_vu = structure_constants(table, v, u)
            assert s_uv.values == s_vu.values
            total = u.length + v.length
            for w, p in s_uv.values.items():
                if not p.is_zero():
                    assert rng.leq[(u, w)] and rng.leq[(v, w)]
                    assert p.is_homogeneous_of(total - w.length)


def test_symmetry_affine_to_length_four():
    table = restriction_table(AFF, 4)
    els = [w for w in table.range if w.length <= 2]
    for u in els:
        for v in els:
            assert (
                structure_constants(table, u, v).values
                == structure_constants(table, v, u).values
            )


def test_affine_constants_stable_under_bound_increase():
    t4 = restriction_table(AFF, 4)
    t6 = restriction_table(AFF, 6)
    els = [w for w in t4.range if w.length <= 2]
    for u in els:
        for v in els:
            s4 = structure_constants(t4, u, v)
            s6 = structure_constants(t6, u, v)
            for w in s4.order:
                assert s4.values[w] == s6.values[w]


# ---------------------------------------------------------------------------
# product identity


def test_verify_holds_for_a1_pair():
    s = element_from_word(A1, (1,))
    assert verify_product_identity(T_A1, structure_constants(T_A1, s, s))


def test_verify_detects_single_coefficient_perturbation():
    s = element_from_word(A1, (1,))
    table = structure_constants(T_A1, s, s)
    values = dict(table.values)
    values[s] = values[s] + RootPolynomial.one(1)
    mutated = StructureTable(T_A1, "x", s, s, values)
    check = verify_product_identity(T_A1, mutated)
    assert not check
    assert check.failing is not None


def test_verify_random_b2_pairs():
    rng = random.Random(3)
    els = list(T_B2.range)
    for _ in range(10):
        u = rng.choice(els)
        v = rng.choice(els)
        s = structure_constants(T_B2, u, v)
        assert verify_product_identity(T_B2, s)


# ---------------------------------------------------------------------------
# opposite basis


def test_a1_opposite_value():
    s = element_from_word(A1, (1,))
    y = opposite_constants(structure_constants(T_A1, s, s), longest_element(A1))
    assert y.basis == "y"
    assert y.values[s] == poly(1, {(1,): -1})
    assert y.values[identity(A1)].is_zero()


def test_opposite_unit_row():
    e = identity(A2)
    w0 = longest_element(A2)
    for v in T_A2.range:
        y = opposite_constants(structure_constants(T_A2, e, v), w0)
        for w in y.order:
            expected = RootPolynomial.one(2) if w == v else RootPolynomial.zero(2)
            assert y.values[w] == expected


def test_opposite_requires_finite_and_x_basis():
    from eqschub import NotFiniteType

    table = restriction_table(AFF, 2)
    s1 = element_from_word(AFF, (1,))
    s = structure_constants(table, s1, s1)
    with pytest.raises(NotFiniteType):
        opposite_constants(s, identity(AFF))
    x = structure_constants(T_A1, identity(A1), identity(A1))
    y = opposite_constants(x, longest_element(A1))
    with pytest.raises(ValueError):
        opposite_constants(y, longest_element(A1))


def _solve_on_transported_table(table, w0, u, v):
    """Independent route to the opposite constants.

    Transport every restriction value along the longest element, then run
    a self-contained triangular solve against the transported diagonal
    factors.  Mirrors the production solver's recurrence but divides by
    the transported inversion roots, so agreement with opposite_constants
    exercises both the substitution and the solver.
    """
    rank = table.rs.rank
    sub = {
        key: p.apply_linear(w0.matrix) for key, p in table.values.items()
    }
    rng = table.range
    total = u.length + v.length
    values = {}
    solved = []
    for w in rng.elements:
        if w.length > total:
            break
        num = sub[(u, w)] * sub[(v, w)]
        for wp, a in solved:
            num = num - a * sub[(wp, w)]
        if rng.leq[(u, w)] and rng.leq[(v, w)]:
            q = num
            for beta in inversions(w):
                q = q.exact_divide_linear(beta.to_polynomial().apply_linear(w0.matrix))
            values[w] = q
            if not q.is_zero():
                solved.append((w, q))
        else:
            assert num.is_zero()
            values[w] = RootPolynomial.zero(rank)
    return values


def test_a2_opposite_cross_check_full_sweep():
    """Every y-value obeys the sign dichotomy and matches an independent solve."""
    w0 = longest_element(A2)
    for u in T_A2.range:
        for v in T_A2.range:
            y = opposite_constants(structure_constants(T_A2, u, v), w0)
            independent = _solve_on_transported_table(T_A2, w0, u, v)
            assert y.values == independent
            for p in y.values.values():
                assert value_sign_ok(p, "y")
                assert p.negate_variables().sign_pattern() in ("nonneg", "zero")


def test_a2_even_degree_opposite_value_is_positive_in_negated_roots():
    # Diagonal pair of a length-2 element: degree-2 value, positive plain
    # coefficients, nonnegative in the negated simple roots.
    s12 = element_from_word(A2, (1, 2))
    y = opposite_constants(structure_constants(T_A2, s12, s12), longest_element(A2))
    val = y.values[s12]
    assert val == poly(2, {(1, 1): 1, (0, 2): 1})
    assert val.sign_pattern() == "nonneg"
    assert value_sign_ok(val, "y")


def test_opposite_verify_product_identity():
    w0 = longest_element(A2)
    s1 = element_from_word(A2, (1,))
    y = opposite_constants(structure_constants(T_A2, s1, s1), w0)
    assert verify_product_identity(T_A2, y)


# ---------------------------------------------------------------------------
# certificates


def test_certificate_x_a1():
    s = element_from_word(A1, (1,))
    cert = positivity_certificate(structure_constants(T_A1, s, s))
    assert cert.verdict == "pass"
    by_word = {e.w.word: e.monomials for e in cert.entries}
    assert by_word[(1,)] == [((1,), 1)]


def test_certificate_y_a1():
    s = element_from_word(A1, (1,))
    y = opposite_constants(structure_constants(T_A1, s, s), longest_element(A1))
    cert = positivity_certificate(y)
    assert cert.verdict == "pass"
    by_word = {e.w.word: e.monomials for e in cert.entries}
    assert by_word[(1,)] == [((1,), -1)]


def test_certificate_zero_table_passes_vacuously():
    e = identity(A1)
    table = StructureTable(T_A1, "x", e, e, {e: RootPolynomial.zero(1)})
    assert positivity_certificate(table).verdict == "pass"


def test_certificate_detects_sign_violation():
    s = element_from_word(A1, (1,))
    bad = StructureTable(T_A1, "x", s, s, {s: poly(1, {(1,): -2})})
    cert = positivity_certificate(bad)
    assert cert.verdict == "fail"
    assert cert.failures == [s]


def test_certificate_json_shape():
    s = element_from_word(A1, (1,))
    cert = positivity_certificate(structure_constants(T_A1, s, s))
    data = cert.to_json_dict()
    assert data["verdict"] == "pass"
    assert data["sign_rule"] == "nonneg"
    assert {"w": [1], "terms": [{"exp": [1], "coeff": "1"}], "verdict": "pass"} in data[
        "monomials"
    ]


# ---------------------------------------------------------------------------
# numeric evaluation


def test_evaluate_a1_at_one():
    s = element_from_word(A1, (1,))
    table = structure_constants(T_A1, s, s)
    values = billey_evaluate(table, (Fraction(1),))
    assert values[s] == 1
    assert values[identity(A1)] == 0


def test_evaluate_unit_row():
    e = identity(A2)
    v = element_from_word(A2, (2, 1))
    table = structure_constants(T_A2, e, v)
    values = billey_evaluate(table, (Fraction(3, 2), Fraction(5)))
    for w in table.order:
        assert values[w] == (1 if w == v else 0)


def test_evaluate_rejects_nonpositive_points():
    s = element_from_word(A1, (1,))
    table = structure_constants(T_A1, s, s)
    with pytest.raises(DomainViolation):
        billey_evaluate(table, (Fraction(0),))
    with pytest.raises(DomainViolation):
        billey_evaluate(table, (Fraction(-1, 2),))


def test_evaluate_nonnegative_on_positive_cone():
    rng = random.Random(5)
    for u in T_B2.range:
        for v in T_B2.range:
            table = structure_constants(T_B2, u, v)
            point = (
                Fraction(rng.randint(1, 12), rng.randint(1, 4)),
                Fraction(rng.randint(1, 12), rng.randint(1, 4)),
            )
            assert all(x >= 0 for x in billey_evaluate(table, point).values())


def test_evaluate_p_convention_relabels_by_inverse():
    u = element_from_word(A2, (1, 2))
    v = element_from_word(A2, (1,))
    table = structure_constants(T_A2, u, v)
    point = (Fraction(2), Fraction(3))
    plain = billey_evaluate(table, point)
    relabeled = billey_evaluate(table, point, p_convention=True)
    assert relabeled == {inverse(w): x for w, x in plain.items()}
    twice = {inverse(w): x for w, x in relabeled.items()}
    assert twice == plain


# ---------------------------------------------------------------------------
# serialization


def test_structure_table_json():
    s = element_from_word(A1, (1,))
    data = structure_constants(T_A1, s, s).to_json_dict()
    assert data["type"] == "A1"
    assert data["basis"] == "x"
    assert data["u"] == [1] and data["v"] == [1]
    assert data["values"] == [
        {"w": [], "poly": {"terms": []}},
        {"w": [1], "poly": {"terms": [{"exp": [1], "coeff": "1"}]}},
    ]
    assert data["certificate"]["verdict"] == "pass"
