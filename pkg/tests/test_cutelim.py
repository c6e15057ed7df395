import pytest

from linadd.corpus import (
    copy_first_enclosure, copy_first_example, deadlock_enclosure,
    deadlock_example, cubic_family, elimination_entries,
)
from linadd.cutelim import CutElimError, elim_step, eliminate, verify_simulation
from linadd.derivation import (
    check_ok, d_ax, d_cut, is_cut_free, metrics,
)
from linadd.reduce import normalize
from linadd.steps import (
    BLOCKED, COPY_FIRST, CRITICAL, DEADLOCK, READY, SYMMETRIC,
    classify_cut, classify_cuts,
)
from linadd.terms import alpha_equal, is_value
from linadd.translate import identity_derivation
from linadd.typesys import unit_type


ONE = unit_type()
ID = identity_derivation()


def test_deadlock_example_classification():
    info = classify_cut(deadlock_example())
    assert info.kind == CRITICAL and info.status == DEADLOCK


def test_copy_first_example_classification():
    info = classify_cut(copy_first_example())
    assert info.kind == COPY_FIRST


def test_elim_step_refuses_deadlock():
    with pytest.raises(CutElimError):
        elim_step(deadlock_example(), ())


def test_elim_step_refuses_copy_first():
    with pytest.raises(CutElimError):
        elim_step(copy_first_example(), ())


def test_enclosed_examples_eliminate_completely():
    for build in (deadlock_enclosure, copy_first_enclosure):
        d, trace = eliminate(build())
        assert is_cut_free(d)
        check_ok(d)
        assert is_value(d.conclusion.subject)


def test_symmetric_axiom_cut():
    d = d_cut(ID, d_ax("x", ONE), "x")
    assert classify_cut(d).kind == SYMMETRIC
    out = elim_step(d, ())
    assert is_cut_free(out)
    assert alpha_equal(out.conclusion.subject, ID.conclusion.subject)


def test_ready_critical_cut_fires_to_a_value_pair():
    from linadd.derivation import d_withR1
    right = d_withR1(d_ax("x1", ONE), d_ax("x2", ONE), ID, "x")
    d = d_cut(ID, right, "x")
    info = classify_cut(d)
    assert info.kind == CRITICAL and info.status == READY
    out = elim_step(d, ())
    assert out.rule == "withR0"


def test_blocked_cut_waits_for_its_inner_cut():
    from linadd.derivation import d_withL, d_withR1
    inner = d_cut(ID, d_withR1(d_ax("x1", ONE), d_ax("x2", ONE), ID, "x"), "x")
    outer = d_cut(inner, d_withL(1, d_ax("p", ONE), "y", "p", ONE), "y")
    check_ok(outer)
    assert classify_cut(outer).kind == BLOCKED
    with pytest.raises(CutElimError):
        elim_step(outer, ())
    d, _ = eliminate(outer)       # the strategy resolves the inner cut first
    assert is_cut_free(d)


def test_eliminate_requires_forall_lazy_conclusion():
    from linadd.derivation import d_lolliR
    d = d_lolliR(d_ax("x", ONE), "x")   # 1 -o 1 has a negative quantifier
    with pytest.raises(CutElimError):
        eliminate(d)


def test_trace_potential_never_increases():
    for n, d in cubic_family(4):
        _, trace = eliminate(d)
        pots = [s.potential for s in trace.steps]
        assert all(b <= a for a, b in zip(pots, pots[1:]))


def test_snapshots_chain_and_simulate():
    _, d = None, cubic_family(3)[-1][1]
    out, trace = eliminate(d, keep_derivations=True)
    assert len(trace.snapshots) == trace.total_steps + 1
    assert trace.snapshots[-1] is out
    for before, after in zip(trace.snapshots, trace.snapshots[1:]):
        assert verify_simulation(before, after)


def test_elimination_matches_reduction_on_corpus(corpus):
    for e in elimination_entries(corpus):
        out, _ = eliminate(e.derivation)
        assert is_cut_free(out), e.name
        check_ok(out)
        nf = normalize(e.derivation.conclusion.subject).term
        assert alpha_equal(out.conclusion.subject, nf), e.name
        if not e.derivation.conclusion.context:
            assert is_value(out.conclusion.subject), e.name


def test_budget_is_enforced():
    d = cubic_family(3)[-1][1]
    with pytest.raises(CutElimError):
        eliminate(d, budget=2)


def test_classify_cuts_lists_paths():
    d = d_cut(ID, d_ax("x", ONE), "x")
    got = classify_cuts(d)
    assert [p for p, _ in got] == [()]
