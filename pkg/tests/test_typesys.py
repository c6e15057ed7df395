from linadd.typesys import (
    Forall, Lolli, TVar, With,
    bool_type, classify_type, free_type_vars, is_closed, is_forall_lazy,
    is_lazy, is_pi1, is_unit_type, judgement_is_forall_lazy,
    match_tensor_type, polarity_occurrences, subst_type, tensor_type,
    type_size, unit_type,
)


ONE = unit_type()
B = bool_type()


def test_unit_is_forall_identity():
    assert ONE == Forall("a", Lolli(TVar("a"), TVar("a")))
    assert is_unit_type(ONE)


def test_alpha_equality_of_types():
    assert Forall("a", TVar("a")) == Forall("b", TVar("b"))
    assert Forall("a", Lolli(TVar("a"), TVar("a"))) != Forall("a", TVar("a"))
    assert hash(Forall("a", TVar("a"))) == hash(Forall("b", TVar("b")))


def test_tensor_macro_round_trip():
    t = tensor_type(ONE, B)
    assert match_tensor_type(t) == (ONE, B)
    assert match_tensor_type(ONE) is None
    assert match_tensor_type(B) is None


def test_free_type_vars():
    assert free_type_vars(Forall("a", Lolli(TVar("a"), TVar("b")))) == {"b"}


def test_subst_type_capture_avoiding():
    # (forall a. a -o b)[b := a] must not capture the bound a
    t = Forall("a", Lolli(TVar("a"), TVar("b")))
    out = subst_type(t, "b", TVar("a"))
    assert out == Forall("c", Lolli(TVar("c"), TVar("a")))


def test_closedness():
    assert is_closed(ONE) and is_closed(B)
    assert not is_closed(TVar("a"))


def test_forall_polarities():
    # in (forall a. a) -o b the quantifier occurs negatively
    neg = Lolli(Forall("a", TVar("a")), TVar("b"))
    occs = polarity_occurrences(neg, "forall")
    assert "-" in {p for _, p in occs}
    assert not is_forall_lazy(neg)
    assert is_forall_lazy(ONE) and is_forall_lazy(B)


def test_lazy_excludes_positive_with():
    assert is_lazy(ONE)
    assert not is_lazy(With(ONE, ONE))
    c = TVar("c")
    assert is_lazy(Lolli(With(c, c), c))  # negative positions allowed


def test_pi1_excludes_with_entirely():
    assert is_pi1(ONE) and is_pi1(B)
    assert not is_pi1(With(ONE, ONE))
    assert not is_pi1(Lolli(With(ONE, ONE), ONE))


def test_classify_type_names():
    got = classify_type(B)
    assert {"closed", "forall_lazy", "lazy", "pi1"} <= set(got)


def test_judgement_folds_context_into_the_goal():
    # x : B |- _ : 1 behaves like B -o 1, whose left B puts a forall negative
    assert judgement_is_forall_lazy((), ONE)
    assert not judgement_is_forall_lazy((B,), ONE)


def test_type_sizes_are_positive_and_monotone():
    assert type_size(TVar("a")) == 1
    assert type_size(ONE) < type_size(B)
