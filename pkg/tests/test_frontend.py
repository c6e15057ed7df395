import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from linadd.frontend import (
    ParseError, derivations_equal, parse_derivation, parse_term, parse_type,
    print_derivation, print_term, print_type,
)
from linadd.terms import Abs, App, Copy, Pair, Proj, Var, alpha_equal, identity_term
from linadd.typesys import Forall, Lolli, TVar, With, tensor_type, unit_type


# -- concrete syntax ----------------------------------------------------------

def test_parse_unit_macro():
    assert parse_type("1") == unit_type()
    assert parse_type("forall a. a -o a") == unit_type()


def test_lolli_right_associates():
    assert parse_type("a -o b -o c") == Lolli(TVar("a"), Lolli(TVar("b"), TVar("c")))


def test_tensor_parses_to_macro():
    assert parse_type("a * b") == tensor_type(TVar("a"), TVar("b"))


def test_with_parses():
    assert parse_type("a & b") == With(TVar("a"), TVar("b"))


def test_application_left_associates():
    assert alpha_equal(parse_term("x y z"), App(App(Var("x"), Var("y")), Var("z")))


def test_copy_syntax():
    t = parse_term("copy[\\x. x] y as a,b in <a, b>")
    assert alpha_equal(t, Copy(identity_term(), Var("y"), "a", "b",
                               Var("a"), Var("b")))


def test_projection_syntax():
    assert alpha_equal(parse_term("p1(x)"), Proj(1, Var("x")))
    assert alpha_equal(parse_term("p2(x)"), Proj(2, Var("x")))


def test_comments_are_skipped():
    assert alpha_equal(parse_term("; a comment\n\\x. x ; trailing\n"),
                       identity_term())


def test_parse_error_is_located():
    with pytest.raises(ParseError):
        parse_term("\\x.")
    with pytest.raises(ParseError):
        parse_type("a -o")
    with pytest.raises(ParseError):
        parse_term("x y)")


# -- generated round trips ----------------------------------------------------

_names = st.sampled_from(["x", "y", "z", "u", "v"])
_tnames = st.sampled_from(["a", "b", "g"])


def _terms():
    leaves = st.builds(Var, _names)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(Abs, _names, sub),
            st.builds(App, sub, sub),
            st.builds(Pair, sub, sub),
            st.builds(Proj, st.sampled_from([1, 2]), sub),
            st.builds(lambda s, l, r: Copy(identity_term(), s, l, r,
                                           Var(l), Var(r)),
                      sub, _names, _names),
        ),
        max_leaves=12)


def _types():
    leaves = st.one_of(st.builds(TVar, _tnames), st.just(unit_type()))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(Lolli, sub, sub),
            st.builds(With, sub, sub),
            st.builds(Forall, _tnames, sub),
            st.builds(tensor_type, sub, sub),
        ),
        max_leaves=10)


@settings(max_examples=200, deadline=None)
@given(_terms())
def test_term_round_trip(t):
    assert alpha_equal(t, parse_term(print_term(t)))


@settings(max_examples=200, deadline=None)
@given(_types())
def test_type_round_trip(a):
    assert parse_type(print_type(a)) == a


@settings(max_examples=100, deadline=None)
@given(_types())
def test_type_round_trip_with_macros(a):
    assert parse_type(print_type(a, use_macros=True)) == a


def test_derivation_round_trip_on_corpus(corpus):
    for e in corpus:
        d = e.derivation
        assert derivations_equal(d, parse_derivation(print_derivation(d))), e.name
