"""Cut elimination for checked derivations of forall-lazy sequents.

Strategy (round based):

  round = { 1 } eliminate every commuting cut, deepest first, rescanning
            after each movement (commuting steps preserve the subject and
            keep size + 2*weight constant while the summed cut heights drop);
          { 2 } fire one symmetric cut if any exists, otherwise one ready
            critical cut (both strictly decrease size + 2*weight).

Deadlocked critical cuts and copy-first cuts are never fired; on derivations
with a forall-lazy conclusion the strategy always finds a ready cut when only
critical ones remain, so elimination completes with a cut-free derivation
whose subject is the normal form of the original subject.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .derivation import Derivation, check_ok, is_cut_free, metrics
from .typesys import judgement_is_forall_lazy
from .terms import alpha_equal
from . import steps as st
from .steps import (
    BLOCKED, COMMUTING, COPY_FIRST, CRITICAL, READY, SYMMETRIC,
    ElimStepError, classify_cut, classify_cuts, eliminate_cut_once, rebuild,
)


class CutElimError(Exception):
    pass


@dataclass
class ElimStep:
    round: int
    path: tuple
    kind: str            # commuting | symmetric | ready
    size: int            # |D| after the step
    weight: int          # withR1 count after the step
    potential: int       # size + 2*weight after the step
    height_sum: int      # summed heights of cut subderivations after the step


@dataclass
class ElimTrace:
    steps: list = field(default_factory=list)
    rounds: int = 0
    # With keep_derivations=True, snapshots[0] is the input derivation and
    # snapshots[i + 1] the derivation after steps[i].
    snapshots: list = field(default_factory=list)

    @property
    def total_steps(self) -> int:
        return len(self.steps)

    def counts(self) -> dict:
        out = {"commuting": 0, "symmetric": 0, "ready": 0}
        for s in self.steps:
            out[s.kind] += 1
        return out


def _node_at(d: Derivation, path: tuple) -> Derivation:
    for i in path:
        d = d.premises[i]
    return d


def _apply_at(d: Derivation, path: tuple, fn) -> Derivation:
    if not path:
        return fn(d)
    prems = list(d.premises)
    prems[path[0]] = _apply_at(prems[path[0]], path[1:], fn)
    return rebuild(d, tuple(prems))


def elim_step(d: Derivation, path: tuple) -> Derivation:
    """Apply the matching elimination rule at the cut at `path`.  Only
    symmetric, commuting, and ready critical cuts may be fired."""
    node = _node_at(d, path)
    if node.rule != "cut":
        raise CutElimError("no cut at %r" % (path,))
    info = classify_cut(node)
    if info.kind == COPY_FIRST:
        raise CutElimError("copy-first cut has no elimination rule")
    if info.kind == BLOCKED:
        raise CutElimError("cut at %r is blocked on an inner cut" % (path,))
    if info.kind == CRITICAL and info.status != READY:
        raise CutElimError("critical cut at %r is %s, not ready" % (path, info.status))
    try:
        return _apply_at(d, path, lambda n: eliminate_cut_once(n, allow_unready=False))
    except ElimStepError as e:
        raise CutElimError(str(e)) from e


def eliminate(d: Derivation, budget: int | None = None,
              recheck: bool = True, keep_derivations: bool = False) -> tuple:
    """Run the round strategy to a cut-free derivation.  Returns
    (derivation, ElimTrace)."""
    j = d.conclusion
    if not judgement_is_forall_lazy(j.context_types(), j.goal):
        raise CutElimError("conclusion sequent is not forall-lazy")
    if recheck:
        check_ok(d)
    if budget is None:
        n = metrics(d).size
        budget = 40 * n ** 3 + 1000

    trace = ElimTrace()
    spent = 0
    if keep_derivations:
        trace.snapshots.append(d)

    def record(path, kind):
        m = metrics(cur)
        trace.steps.append(ElimStep(
            round=trace.rounds, path=path, kind=kind,
            size=m.size, weight=m.weight,
            potential=m.size + 2 * m.weight, height_sum=m.height_sum,
        ))
        if keep_derivations:
            trace.snapshots.append(cur)

    cur = d
    while not is_cut_free(cur):
        trace.rounds += 1
        # {1} all commuting cuts, deepest first
        while True:
            cuts = [(p, i) for p, i in classify_cuts(cur) if i.kind == COMMUTING]
            if not cuts:
                break
            path, _ = max(cuts, key=lambda pi: (len(pi[0]), [-x for x in pi[0]]))
            spent += 1
            if spent > budget:
                raise CutElimError("elimination budget exhausted")
            cur = _apply_at(cur, path, st.commute_once)
            record(path, "commuting")
        # {2} one principal firing
        cuts = classify_cuts(cur)
        if not cuts:
            break
        sym = [p for p, i in cuts if i.kind == SYMMETRIC]
        if sym:
            path = sym[0]
            kind = "symmetric"
            fn = st.fire_symmetric
        else:
            ready = [p for p, i in cuts
                     if i.kind == CRITICAL and i.status == READY]
            if not ready:
                raise CutElimError(
                    "no fireable cut remains (deadlock or copy-first only)")
            path = max(ready, key=len)
            kind = "ready"
            fn = st.fire_critical
        spent += 1
        if spent > budget:
            raise CutElimError("elimination budget exhausted")
        cur = _apply_at(cur, path, fn)
        record(path, kind)

    if recheck:
        check_ok(cur)
    return cur, trace


def verify_simulation(before: Derivation, after: Derivation,
                      budget: int = 10000) -> bool:
    """True iff the subject of `before` reduces (in zero or more steps) to the
    subject of `after`.  Every elimination step performs at most one
    reduction, so a small search suffices."""
    from .reduce import find_redexes, step
    src = before.conclusion.subject
    dst = after.conclusion.subject
    frontier = [src]
    seen = 0
    for _ in range(3):  # steps per elimination are 0 or 1; allow slack
        nxt = []
        for t in frontier:
            if alpha_equal(t, dst):
                return True
            for r in find_redexes(t):
                seen += 1
                if seen > budget:
                    return False
                nxt.append(step(t, r))
        frontier = nxt
    return any(alpha_equal(t, dst) for t in frontier)
