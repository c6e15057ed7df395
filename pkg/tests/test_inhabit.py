import pytest

from linadd.derivation import check_ok, is_cut_free, is_eta_expanded, metrics
from linadd.frontend import parse_term, print_term
from linadd.inhabit import (
    InhabitError, enumerate_inhabitants, eta_expand, eta_expansion_derivation,
    maximal_value,
)
from linadd.reduce import beta_eta_equal
from linadd.terms import alpha_equal, identity_term, term_size
from linadd.typesys import (
    Forall, Lolli, TVar, With, bool_type, tensor_type, unit_type,
)


ONE = unit_type()
B = bool_type()


def test_unit_has_one_inhabitant():
    found = enumerate_inhabitants(ONE)
    assert found.count == 1
    assert alpha_equal(found.terms()[0], identity_term())


def test_bool_has_two_inhabitants():
    found = enumerate_inhabitants(B)
    assert found.count == 2
    tt = parse_term("\\x. \\y. \\z. z x y")
    ff = parse_term("\\x. \\y. \\z. z y x")
    got = found.terms()
    assert any(beta_eta_equal(t, tt) for t in got)
    assert any(beta_eta_equal(t, ff) for t in got)


def test_bool_pair_has_four_inhabitants():
    assert enumerate_inhabitants(tensor_type(B, B)).count == 4


def test_unit_pair_has_one_inhabitant():
    assert enumerate_inhabitants(tensor_type(ONE, ONE)).count == 1


def test_members_check_and_are_cut_free():
    for a in (ONE, B, tensor_type(ONE, B)):
        for _, d in enumerate_inhabitants(a).members:
            check_ok(d)
            assert is_cut_free(d)
            assert d.conclusion.context == ()


def test_open_type_is_rejected():
    with pytest.raises(InhabitError):
        enumerate_inhabitants(TVar("a"))


def test_non_forall_lazy_type_is_rejected():
    with pytest.raises(InhabitError):
        enumerate_inhabitants(Lolli(B, B))


def test_with_of_units_inhabited_by_value_pair():
    found = enumerate_inhabitants(With(ONE, ONE))
    assert found.count == 1
    assert alpha_equal(found.terms()[0], parse_term("<\\x. x, \\x. x>"))


def test_maximal_value_of_bool_is_true():
    t, d = maximal_value(B)
    assert term_size(t) == 8
    assert print_term(t) == "\\x0. \\x1. \\x2. x2 x0 x1"
    check_ok(d)


def test_maximal_value_of_uninhabited_type_is_none():
    assert maximal_value(Forall("a", TVar("a"))) is None


def test_eta_expansion_derivation_shapes():
    d = eta_expansion_derivation("x", ONE)
    check_ok(d)
    assert d.conclusion.context == (("x", ONE),)
    assert is_eta_expanded(d)


def test_eta_expansion_refuses_with_assumptions():
    with pytest.raises(InhabitError):
        eta_expansion_derivation("x", With(ONE, ONE))


def test_eta_expand_rewrites_non_atomic_axioms():
    from linadd.derivation import d_ax, d_lolliR
    d = d_lolliR(d_ax("x", ONE), "x")   # |- \x. x : 1 -o 1 with a fat axiom
    out = eta_expand(d)
    check_ok(out)
    assert is_eta_expanded(out)
    assert beta_eta_equal(out.conclusion.subject, d.conclusion.subject)


def test_enumeration_is_deterministic():
    a = tensor_type(B, B)
    from linadd.terms import canonical_key
    first = [canonical_key(t) for t in enumerate_inhabitants(a).terms()]
    second = [canonical_key(t) for t in enumerate_inhabitants(a).terms()]
    assert first == second


def test_size_bound_on_members():
    # |M| <= |goal| for closed inhabitants, via |M| <= |ctx| + |A| <= 2|D|
    for a in (ONE, B, tensor_type(B, B)):
        for t, d in enumerate_inhabitants(a).members:
            assert term_size(t) <= 2 * metrics(d).size
