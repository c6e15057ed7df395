"""Localized proof transformations on cut nodes.

Everything cut elimination (and subject reduction, which reuses it) needs:

* classification of a cut by the last rules of its premises — `symmetric`
  when both are principal for the cut type (including the axiom cases),
  `critical` when the right premise is the guarded-duplication rule,
  `copy_first` when a guarded duplication meets a principal left projection,
  `commuting` otherwise;
* one commuting movement (the cut is pushed past the non-principal rule);
* the principal firings, each of which performs at most one reduction step
  on the subject;
* `rebuild`, which re-assembles a node after a premise changed, recomputing
  the conclusion judgement.

A critical cut is `safe` when the left premise proves a closed sequent and
`ready` when additionally the left subderivation is cut-free; only ready
critical cuts may be fired by the public strategy, while subject reduction
fires any safe one (duplicating cuts is type-sound, it just voids the step
bound).  Deadlocked (non-safe) critical cuts and copy-first cuts have no
firing rule at all.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Var, fresh_name, free_vars, is_value, subst
from .typesys import Forall, TVar, Type, free_type_vars, fresh_type_var, subst_type
from .derivation import (
    Derivation, Judgement,
    context_free_type_vars, context_names, find_eigenvariable, is_cut_free,
    match_instantiation,
    d_ax, d_cut, d_forallL, d_forallR, d_lolliL, d_lolliR,
    d_withL, d_withR, d_withR0, d_withR1,
)

SYMMETRIC = "symmetric"
COMMUTING = "commuting"
CRITICAL = "critical"
COPY_FIRST = "copy_first"
BLOCKED = "blocked"

SAFE = "safe"
READY = "ready"
DEADLOCK = "deadlock"


class ElimStepError(Exception):
    pass


# -- parameter recovery -------------------------------------------------------

def cut_var(d: Derivation) -> str:
    rj = d.premises[1].conclusion
    (x,) = context_names(rj.context) - context_names(d.conclusion.context)
    return x


def lolliR_var(d: Derivation) -> str:
    pj = d.premises[0].conclusion
    (x,) = context_names(pj.context) - context_names(d.conclusion.context)
    return x


def lolliL_vars(d: Derivation):
    """(introduced y, consumed x) of an implication-left node."""
    j = d.conclusion
    lj, rj = (p.conclusion for p in d.premises)
    (y,) = context_names(j.context) - context_names(lj.context) - context_names(rj.context)
    (x,) = context_names(rj.context) - context_names(j.context)
    return y, x


def withL_vars(d: Derivation):
    """(introduced y, consumed x, untouched component type)."""
    j = d.conclusion
    pj = d.premises[0].conclusion
    (y,) = context_names(j.context) - context_names(pj.context)
    (x,) = context_names(pj.context) - context_names(j.context)
    ab = j.lookup(y)
    other = ab.right if d.rule == "withL1" else ab.left
    return y, x, other


def forallL_var(d: Derivation) -> str:
    j = d.conclusion
    pj = d.premises[0].conclusion
    for n, a in j.context:
        if pj.lookup(n) != a:
            return n
    # unused quantifier: instance equals the quantified type; pick the (only)
    # quantified assumption that admits the instantiation
    for n, a in j.context:
        if isinstance(a, Forall):
            return n
    raise ElimStepError("cannot recover the forallL assumption")


def principal_var(d: Derivation):
    """The context variable the last rule of d acts on, if any."""
    if d.rule == "ax":
        return d.conclusion.context[0][0]
    if d.rule == "lolliL":
        return lolliL_vars(d)[0]
    if d.rule in ("withL1", "withL2"):
        return withL_vars(d)[0]
    if d.rule == "forallL":
        return forallL_var(d)
    if d.rule == "withR1":
        return d.conclusion.context[0][0]
    return None


# -- renaming -----------------------------------------------------------------

def rename_assumption(d: Derivation, old: str, new: str) -> Derivation:
    """Rename a free assumption throughout a derivation (contexts and
    subjects)."""
    if old == new:
        return d
    j = d.conclusion
    if j.lookup(old) is None:
        return d
    ctx = tuple((new if n == old else n, a) for n, a in j.context)
    prems = tuple(rename_assumption(p, old, new) for p in d.premises)
    return Derivation(
        d.rule, Judgement(ctx, subst(j.subject, old, Var(new)), j.goal), prems
    )


def _eigen_of(d: Derivation):
    if d.rule != "forallR":
        return None
    return find_eigenvariable(d)


def subst_type_deriv(d: Derivation, x: str, b: Type) -> Derivation:
    """Substitute a type for a free type variable throughout a derivation,
    renaming inner eigenvariables that would capture."""
    if d.rule == "forallR":
        g = _eigen_of(d)
        if g is not None and (g == x or g in free_type_vars(b)):
            g2 = fresh_type_var(g)
            d = Derivation(
                d.rule, d.conclusion, (subst_type_deriv(d.premises[0], g, TVar(g2)),)
            )
    j = d.conclusion
    ctx = tuple((n, subst_type(a, x, b)) for n, a in j.context)
    prems = tuple(subst_type_deriv(p, x, b) for p in d.premises)
    return Derivation(d.rule, Judgement(ctx, j.subject, subst_type(j.goal, x, b)), prems)


def _ensure_fresh(d: Derivation, var: str, avoid) -> tuple:
    """Rename the assumption `var` of d away from `avoid` if needed."""
    if var not in avoid:
        return d, var
    new = fresh_name(var, set(avoid) | context_names(d.conclusion.context))
    return rename_assumption(d, var, new), new


# -- rebuild ------------------------------------------------------------------

def rebuild(d: Derivation, prems: tuple) -> Derivation:
    """Re-assemble d's rule over replacement premises whose contexts and types
    agree with the originals (only subjects may differ)."""
    r = d.rule
    if r == "ax":
        return d
    if r == "cut":
        return d_cut(prems[0], prems[1], cut_var(d))
    if r == "lolliR":
        return d_lolliR(prems[0], lolliR_var(d))
    if r == "lolliL":
        y, x = lolliL_vars(d)
        return d_lolliL(prems[0], prems[1], y, x)
    if r == "withR":
        return d_withR(prems[0], prems[1])
    if r == "withR0":
        return d_withR0(prems[0], prems[1])
    if r == "withR1":
        return d_withR1(prems[0], prems[1], prems[2], d.conclusion.context[0][0])
    if r in ("withL1", "withL2"):
        y, x, other = withL_vars(d)
        return d_withL(1 if r == "withL1" else 2, prems[0], y, x, other)
    if r == "forallR":
        return d_forallR(prems[0], find_eigenvariable(d), d.conclusion.goal.var)
    if r == "forallL":
        x = forallL_var(d)
        return d_forallL(prems[0], x, d.conclusion.lookup(x))
    raise ElimStepError("cannot rebuild rule %s" % r)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class CutInfo:
    kind: str            # symmetric | commuting | critical | copy_first
    status: str | None   # for critical: safe | ready | deadlock
    left_rule: str
    right_rule: str


def classify_cut(d: Derivation) -> CutInfo:
    if d.rule != "cut":
        raise ValueError("not a cut")
    l, r = d.premises
    x = cut_var(d)
    info = lambda kind, status=None: CutInfo(kind, status, l.rule, r.rule)
    if l.rule == "ax" or r.rule == "ax":
        return info(SYMMETRIC)
    if r.rule == "withR1":
        if context_names(l.conclusion.context):
            return info(CRITICAL, DEADLOCK)
        return info(CRITICAL, READY if is_cut_free(l) else SAFE)
    right_principal = principal_var(r) == x
    if right_principal:
        pairs = {
            ("lolliR", "lolliL"), ("forallR", "forallL"),
            ("withR0", "withL1"), ("withR0", "withL2"),
        }
        if (l.rule, r.rule) in pairs:
            return info(SYMMETRIC)
        if l.rule == "withR1" and r.rule in ("withL1", "withL2"):
            return info(COPY_FIRST)
        if l.rule == "cut":
            # nothing to commute: reassociating back and forth would loop, so
            # wait for the inner cut to be eliminated first
            return info(BLOCKED)
    return info(COMMUTING)


def classify_cuts(d: Derivation):
    """All cut nodes with their tree paths, pre-order."""
    out = []

    def go(d, path):
        if d.rule == "cut":
            out.append((path, classify_cut(d)))
        for i, p in enumerate(d.premises):
            go(p, path + (i,))

    go(d, ())
    return out


# -- the steps ----------------------------------------------------------------

def commute_once(d: Derivation) -> Derivation:
    """Push the cut one rule upward (subject and judgement are preserved)."""
    l, r = d.premises
    x = cut_var(d)
    if principal_var(r) != x and r.rule != "withR1":
        return _commute_right(d, l, r, x)
    return _commute_left(d, l, r, x)


def _commute_right(d, l, r, x):
    lnames = context_names(l.conclusion.context)
    if r.rule == "lolliR":
        z = lolliR_var(r)
        r1, z = _ensure_fresh(r.premises[0], z, lnames)
        return d_lolliR(d_cut(l, r1, x), z)
    if r.rule == "lolliL":
        y, w = lolliL_vars(r)
        r1, r2 = r.premises
        if r1.conclusion.lookup(x) is not None:
            return d_lolliL(d_cut(l, r1, x), r2, y, w)
        r2, w = _ensure_fresh(r2, w, lnames)
        return d_lolliL(r1, d_cut(l, r2, x), y, w)
    if r.rule in ("withL1", "withL2"):
        y, w, other = withL_vars(r)
        r1, w = _ensure_fresh(r.premises[0], w, lnames)
        return d_withL(1 if r.rule == "withL1" else 2, d_cut(l, r1, x), y, w, other)
    if r.rule == "forallL":
        z = forallL_var(r)
        return d_forallL(d_cut(l, r.premises[0], x), z, r.conclusion.lookup(z))
    if r.rule == "forallR":
        g = find_eigenvariable(r)
        r1 = r.premises[0]
        if g in context_free_type_vars(l.conclusion.context):
            g2 = fresh_type_var(g)
            r1 = subst_type_deriv(r1, g, TVar(g2))
            g = g2
        return d_forallR(d_cut(l, r1, x), g, r.conclusion.goal.var)
    if r.rule == "cut":
        w = cut_var(r)
        r1, r2 = r.premises
        if r1.conclusion.lookup(x) is not None:
            return d_cut(d_cut(l, r1, x), r2, w)
        r2, w2 = _ensure_fresh(r2, w, lnames)
        return d_cut(r1, d_cut(l, r2, x), w2)
    raise ElimStepError("cannot commute past %s on the right" % r.rule)


def _commute_left(d, l, r, x):
    rnames = context_names(r.conclusion.context)
    if l.rule == "lolliL":
        y, w = lolliL_vars(l)
        l2, w = _ensure_fresh(l.premises[1], w, rnames)
        return d_lolliL(l.premises[0], d_cut(l2, r, x), y, w)
    if l.rule in ("withL1", "withL2"):
        y, w, other = withL_vars(l)
        l1, w = _ensure_fresh(l.premises[0], w, rnames)
        return d_withL(1 if l.rule == "withL1" else 2, d_cut(l1, r, x), y, w, other)
    if l.rule == "forallL":
        z = forallL_var(l)
        return d_forallL(d_cut(l.premises[0], r, x), z, l.conclusion.lookup(z))
    raise ElimStepError("cannot commute past %s on the left" % l.rule)


def reassociate_blocked(d: Derivation) -> Derivation:
    """cut(cut(l1, l2), r) -> cut(l1, cut(l2, r)): push a blocked cut into
    its left cut so the producer of the cut formula meets its consumer.
    Used by the localized subject-reduction driver; the round strategy
    instead waits for the inner cut (the opposite reassociation would undo
    this one, so pairing them loops)."""
    l, r = d.premises
    x = cut_var(d)
    if l.rule != "cut":
        raise ElimStepError("left premise is not a cut")
    w = cut_var(l)
    l2, w = _ensure_fresh(l.premises[1], w, context_names(r.conclusion.context))
    return d_cut(l.premises[0], d_cut(l2, r, x), w)


def fire_symmetric(d: Derivation) -> Derivation:
    l, r = d.premises
    x = cut_var(d)
    if r.rule == "ax":
        return l
    if l.rule == "ax":
        y = l.conclusion.context[0][0]
        return rename_assumption(r, x, y)
    if l.rule == "lolliR" and r.rule == "lolliL":
        z = lolliR_var(l)
        r1, r2 = r.premises
        _, w = lolliL_vars(r)
        l1, z = _ensure_fresh(l.premises[0], z, context_names(r1.conclusion.context))
        return d_cut(d_cut(r1, l1, z), r2, w)
    if l.rule == "forallR" and r.rule == "forallL":
        g = find_eigenvariable(l)
        quant = l.conclusion.goal
        inst = r.premises[0].conclusion.lookup(x)
        m = match_instantiation(quant.body, quant.var, inst)
        if m is None:
            raise ElimStepError("quantifier instance does not match")
        _, b = m
        l1 = l.premises[0]
        if b is not None and g in free_type_vars(quant):
            raise ElimStepError("eigenvariable occurs in the cut type")
        if b is not None:
            l1 = subst_type_deriv(l1, g, b)
        return d_cut(l1, r.premises[0], x)
    if l.rule == "withR0" and r.rule in ("withL1", "withL2"):
        _, w, _ = withL_vars(r)
        comp = l.premises[0] if r.rule == "withL1" else l.premises[1]
        return d_cut(comp, r.premises[0], w)
    raise ElimStepError("cut (%s, %s) is not symmetric" % (l.rule, r.rule))


def fire_critical(d: Derivation) -> Derivation:
    """Fire a safe critical cut: the guarded duplication becomes an additive
    pair over two copies of the left subderivation."""
    l, r = d.premises
    if r.rule != "withR1":
        raise ElimStepError("right premise is not a guarded duplication")
    if context_names(l.conclusion.context):
        raise ElimStepError("deadlocked critical cut (open left premise)")
    if not is_value(l.conclusion.subject):
        raise ElimStepError("left subject is not a value yet")
    b1, b2, _guard = r.premises
    x1 = b1.conclusion.context[0][0]
    x2 = b2.conclusion.context[0][0]
    return d_withR0(d_cut(l, b1, x1), d_cut(l, b2, x2))


def eliminate_cut_once(d: Derivation, allow_unready: bool = True) -> Derivation:
    """One localized step at this cut: commute when non-principal, otherwise
    fire.  Raises for deadlocked critical and copy-first cuts."""
    info = classify_cut(d)
    if info.kind == COMMUTING:
        return commute_once(d)
    if info.kind == SYMMETRIC:
        return fire_symmetric(d)
    if info.kind == CRITICAL:
        if info.status == DEADLOCK:
            raise ElimStepError("deadlocked critical cut cannot be fired")
        if info.status == SAFE and not allow_unready:
            raise ElimStepError("critical cut is safe but not ready")
        return fire_critical(d)
    if info.kind == BLOCKED:
        return reassociate_blocked(d)
    raise ElimStepError("copy-first cut has no elimination rule")
