"""Shared test helpers: oracles that stay independent of the code they check."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from eqschub import element_from_word, identity, multiply, simple_reflection  # noqa: E402
from eqschub.weyl import right_descents  # noqa: E402


def all_reduced_words(w):
    """Every reduced word of w, by recursive right-descent stripping."""
    if w.length == 0:
        return [()]
    out = []
    for i in right_descents(w):
        shorter = multiply(w, simple_reflection(w.rs, i))
        for word in all_reduced_words(shorter):
            out.append(word + (i,))
    return out


def brute_subword_leq(u, w):
    """Bruhat test straight from the subword property.

    Checks every subword of w's canonical word for being a reduced word
    of u.  Exponential; only for small ranges.
    """
    word = w.word
    n = len(word)
    target = u.length
    for mask in range(1 << n):
        if bin(mask).count("1") != target:
            continue
        sub = tuple(word[j] for j in range(n) if mask >> j & 1)
        cand = element_from_word(u.rs, sub)
        if cand.length == target and cand == u:
            return True
    return False


def random_polynomial(rng, rank, max_terms=5, max_exp=3, max_coeff=9):
    """Small random integer polynomial for algebra property tests."""
    from eqschub import RootPolynomial

    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exp = tuple(rng.randint(0, max_exp) for _ in range(rank))
        coeff = rng.randint(-max_coeff, max_coeff)
        if coeff:
            terms[exp] = terms.get(exp, 0) + coeff
    return RootPolynomial(rank, terms)
