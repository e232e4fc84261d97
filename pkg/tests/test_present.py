"""Presentations, the coloring solver, and the invariants, against a
naive exhaustive oracle."""

import itertools
import random

import pytest

from semiquandles.algebra import (StructureBundle, builtin_bundle, evaluate,
                                  subclosure)
from semiquandles.present import (
    Presentation, Relation, PresentationError, MissingExtensionError,
    parse_presentation, format_presentation, colorings, count_colorings,
    enhanced_invariant, polynomial_text, builtin, BUILTIN_PRESENTATIONS,
)

T4 = builtin_bundle("t4")
CA3_OP = builtin_bundle("ca3_op")
TS3 = builtin_bundle("ts3_v13")


def naive_count(p, bundle):
    """Independent oracle: try every assignment of 1..n to the generators."""
    n = bundle.n
    total = 0
    for values in itertools.product(range(1, n + 1), repeat=len(p.generators)):
        a = dict(zip(p.generators, values))
        ok = True
        for rel in p.relations:
            if rel.kind == "v":
                got = evaluate(bundle, "v", a[rel.args[0]])
            else:
                got = evaluate(bundle, rel.kind, a[rel.args[0]], a[rel.args[1]])
            if got != a[rel.result]:
                ok = False
                break
        if ok:
            total += 1
    return total


# ---------------------------------------------------------------------------
# parsing

def test_parse_and_format_round_trip():
    for name in BUILTIN_PRESENTATIONS:
        p = builtin(name)
        assert parse_presentation(format_presentation(p)) == p


def test_parse_rejects_malformed_relations():
    for text in ("up(a)=b", "up(a,b)", "foo(a,b)=c", "gens: a\nup(a,b)=c"):
        with pytest.raises(PresentationError):
            parse_presentation(text)


def test_undeclared_generator_rejected():
    with pytest.raises(PresentationError):
        Presentation(("a",), (Relation("up", ("a", "b"), "a"),))


# ---------------------------------------------------------------------------
# reference invariant values

def test_flat_kishino_has_16_colorings_over_t4():
    assert count_colorings(builtin("flat_kishino"), T4) == 16


def test_unknot_has_4_colorings_over_t4():
    assert count_colorings(builtin("unknot"), T4) == 4


def test_glued_code_has_no_colorings_over_ca3_operator():
    assert count_colorings(builtin("triple_crazy_trefoil"), CA3_OP) == 0


def test_singular_kink_polynomial_over_ca3_operator():
    result = enhanced_invariant(builtin("singular_unknot_1"), CA3_OP)
    assert result.count == 9
    assert result.polynomial == "9z^3"


def test_glued_code_zero_count_symbolic_crosscheck():
    """The glued-code relations over a constant-action structure with
    hat operations x op y = sigma(y) force sigma(a) = a; since sigma =
    (1 3 2) is fixed-point free, the count must be 0.

    Relations: hup(a,c)=b, hdn(c,a)=d, up(d,b)=a, dn(b,d)=c.  Constant
    action: up(x,y) = dn(x,y) = sigma(y); operator singular: hup(x,y) =
    hdn(x,y) = sigma(y).  Then b = sigma(c), d = sigma(a), a = up(d,b) =
    sigma(b) = sigma^2(c), and c = dn(b,d) = sigma(d) = sigma^2(a), so
    a = sigma^4(a) = sigma(a), impossible.
    """
    sigma = {1: 3, 2: 1, 3: 2}   # the cycle (1 3 2)
    assert all(sigma[x] != x for x in sigma)
    for a in (1, 2, 3):
        for c in (1, 2, 3):
            b, d = sigma[c], sigma[a]
            if sigma[b] == a and sigma[d] == c:
                pytest.fail(f"unexpected coloring a={a} c={c}")
    assert count_colorings(builtin("triple_crazy_trefoil"), CA3_OP) == 0


def test_singular_kink_image_closures_all_have_size_3():
    for f in colorings(builtin("singular_unknot_1"), CA3_OP):
        assert len(subclosure(CA3_OP, set(f.values()))) == 3


# ---------------------------------------------------------------------------
# oracle equivalence

def test_solver_matches_naive_oracle_on_builtins():
    for name in BUILTIN_PRESENTATIONS:
        p = builtin(name)
        for bundle in (CA3_OP, TS3.with_trivial_extensions()):
            assert count_colorings(p, bundle) == naive_count(p, bundle)


def random_presentation(rng, n_gens, n_rels, kinds):
    gens = tuple(f"g{i}" for i in range(n_gens))
    rels = []
    for _ in range(n_rels):
        kind = rng.choice(kinds)
        if kind == "v":
            rels.append(Relation("v", (rng.choice(gens),), rng.choice(gens)))
        else:
            rels.append(Relation(kind, (rng.choice(gens), rng.choice(gens)),
                                 rng.choice(gens)))
    return Presentation(gens, tuple(rels))


def test_solver_matches_naive_oracle_on_random_presentations():
    rng = random.Random(20260823)
    bundles = [T4, CA3_OP, TS3, TS3.with_trivial_extensions()]
    kinds_for = {
        id(T4): ("up", "dn"),
        id(CA3_OP): ("up", "dn", "hup", "hdn"),
        id(TS3): ("up", "dn", "v"),
        id(bundles[3]): ("up", "dn", "hup", "hdn", "v"),
    }
    for _ in range(50):
        bundle = rng.choice(bundles)
        n_gens = rng.randint(1, 6)
        if bundle.n ** n_gens > 10 ** 6:
            n_gens = 4
        p = random_presentation(rng, n_gens, rng.randint(0, 8),
                                kinds_for[id(bundle)])
        assert count_colorings(p, bundle) == naive_count(p, bundle)


# ---------------------------------------------------------------------------
# polynomial formatting and error paths

def test_polynomial_text_formatting():
    assert polynomial_text([]) == "0"
    assert polynomial_text([1]) == "z"
    assert polynomial_text([3, 3, 3]) == "3z^3"
    assert polynomial_text([1, 2, 2, 4]) == "z + 2z^2 + z^4"


def test_missing_extension_errors():
    with pytest.raises(MissingExtensionError):
        count_colorings(builtin("singular_unknot_1"), T4)
    with pytest.raises(MissingExtensionError):
        count_colorings(parse_presentation("v(a)=b"), T4)


def test_enhanced_invariant_is_deterministic():
    r1 = enhanced_invariant(builtin("flat_kishino"), T4)
    r2 = enhanced_invariant(builtin("flat_kishino"), T4)
    assert r1 == r2
    assert r1.count == 16
