import pytest

from linadd.cutelim import eliminate
from linadd.derivation import check, check_ok, d_app, metrics
from linadd.inhabit import enumerate_inhabitants
from linadd.reduce import beta_eta_equal, normalize
from linadd.terms import alpha_equal, identity_term, term_size
from linadd.translate import (
    GadgetError, GadgetLibrary, check_soundness, compression_report,
    d_tensor_pair, identity_derivation, translate_derivation, translate_type,
)
from linadd.typesys import (
    Lolli, With, bool_type, match_tensor_type, tensor_type, type_size,
    unit_type,
)


ONE = unit_type()
B = bool_type()
I = identity_term()


def test_translate_type_maps_with_to_tensor():
    assert translate_type(With(ONE, ONE)) == tensor_type(ONE, ONE)
    assert translate_type(ONE) == ONE
    assert translate_type(B) == B
    nested = With(With(ONE, B), ONE)
    got = match_tensor_type(translate_type(nested))
    assert got is not None and match_tensor_type(got[0]) is not None


# frozen gadget sizes; the eraser stays linear in the type size
ERASER_SIZES = {"unit": 5, "bool": 29, "unit*unit": 23, "bool*bool": 71}
DUP_SIZES = {"unit": 11, "bool": 134, "unit*unit": 29, "bool*bool": 707}
TYPES = {"unit": ONE, "bool": B,
         "unit*unit": tensor_type(ONE, ONE),
         "bool*bool": tensor_type(B, B)}


def test_eraser_sizes(gadgets):
    for name, a in TYPES.items():
        e = gadgets.eraser(a)
        check_ok(e, "imll2")
        assert term_size(e.conclusion.subject) == ERASER_SIZES[name]


def test_duplicator_sizes(gadgets):
    for name, a in TYPES.items():
        d = gadgets.duplicator(a)
        check_ok(d, "imll2")
        assert term_size(d.conclusion.subject) == DUP_SIZES[name]


def test_eraser_consumes_every_inhabitant(gadgets):
    for a in TYPES.values():
        e = gadgets.eraser(a)
        for _, vd in enumerate_inhabitants(a).members:
            tv = translate_derivation(vd, gadgets)
            out = normalize(d_app(e, tv).conclusion.subject).term
            assert alpha_equal(out, I)


def test_duplicator_copies_every_inhabitant(gadgets):
    for a in TYPES.values():
        dup = gadgets.duplicator(a)
        for _, vd in enumerate_inhabitants(a).members:
            tv = translate_derivation(vd, gadgets)
            got = d_app(dup, tv).conclusion.subject
            want = d_tensor_pair(tv, tv).conclusion.subject
            assert beta_eta_equal(got, want)


def test_eraser_requires_closed_type(gadgets):
    from linadd.typesys import TVar
    with pytest.raises(GadgetError):
        gadgets.eraser(TVar("a"))


def test_duplicator_requires_tensor_tree_of_units_and_bools(gadgets):
    with pytest.raises(GadgetError):
        gadgets.duplicator(Lolli(ONE, ONE))


def test_translated_derivations_recheck_in_imll2(corpus, gadgets):
    from linadd.corpus import soundness_entries
    for e in soundness_entries(corpus):
        out = translate_derivation(e.derivation, gadgets)
        assert check(out, "imll2") == [], e.name


def test_translation_of_cut_free_bool_value_is_itself(gadgets):
    for _, vd in enumerate_inhabitants(B).members:
        tv = translate_derivation(vd, gadgets)
        assert beta_eta_equal(tv.conclusion.subject, vd.conclusion.subject)


def test_identity_derivation_is_eta_long():
    check_ok(ID_ := identity_derivation(), "imll2")
    assert alpha_equal(ID_.conclusion.subject, I)


def test_check_soundness_across_one_elimination(gadgets):
    from linadd.corpus import copy_first_enclosure
    d = copy_first_enclosure()
    out, trace = eliminate(d, keep_derivations=True)
    for before, after in zip(trace.snapshots, trace.snapshots[1:]):
        assert check_soundness(before, after, gadgets)


def test_compression_report_keys(gadgets):
    from linadd.corpus import copy_first_enclosure
    rep = compression_report(copy_first_enclosure(), gadgets)
    assert set(rep) == {"derivation_size", "subject_size",
                        "translated_size", "translated_derivation_size"}
    assert rep["translated_size"] > 0


def test_eraser_growth_is_linear(gadgets):
    ratios = [term_size(gadgets.eraser(a).conclusion.subject) / type_size(a)
              for a in TYPES.values()]
    assert max(ratios) < 3.0
