"""Inhabitant enumeration and eta-expansion.

`enumerate_inhabitants` lists every closed eta-long normal inhabitant of a
closed forall-lazy type together with its cut-free derivation.  The search is
goal-directed over the rules that can occur in a cut-free derivation of a
forall-lazy sequent — axioms at atomic types, the two implication rules, the
quantifier right rule, and the empty-context pair rule — memoized on the
sequent and terminating because every premise strictly shrinks the sequent
(so derivation depth is bounded by the sequent size).

For types that are tensor macros of two closed forall-lazy components the
member set is the cross product of the component sets; a fast path exploits
that directly and is cross-checked against the generic search in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .terms import Term, term_size
from .typesys import (
    Forall, Lolli, TVar, Type, With,
    free_type_vars, fresh_type_var, is_closed, is_forall_lazy,
    judgement_is_forall_lazy, match_tensor_type, subst_type, type_size,
)
from .derivation import (
    Derivation,
    d_ax, d_forallL, d_forallR, d_lolliL, d_lolliR, d_withR0,
)
from .frontend import print_term


class InhabitError(Exception):
    pass


@dataclass
class InhabitantSet:
    type: Type
    members: list  # of (Term, Derivation)

    @property
    def count(self) -> int:
        return len(self.members)

    def terms(self):
        return [t for t, _ in self.members]


def _splits(items):
    """All ways to divide a tuple into two complementary subtuples."""
    idx = range(len(items))
    for k in range(len(items) + 1):
        for chosen in combinations(idx, k):
            cs = set(chosen)
            yield (tuple(items[i] for i in idx if i in cs),
                   tuple(items[i] for i in idx if i not in cs))


def _sequent_key(ctx, goal):
    return (tuple(sorted((n, a._skeleton()) for n, a in ctx)), goal._skeleton())


def _search(ctx, goal, memo, counter):
    key = _sequent_key(ctx, goal)
    if key in memo:
        return memo[key]
    memo[key] = []  # cycle guard; sequents shrink, so cycles cannot recur
    counter[0] += 1
    if counter[0] > 2_000_000:
        raise InhabitError("enumeration budget exhausted")
    out = []

    if isinstance(goal, Forall):
        ctx_ftv = frozenset()
        for _, a in ctx:
            ctx_ftv |= free_type_vars(a)
        if not (is_closed(goal) and ctx_ftv):
            g = fresh_type_var("e", ctx_ftv | free_type_vars(goal))
            body = subst_type(goal.body, goal.var, TVar(g))
            for sub in _search(ctx, body, memo, counter):
                out.append(d_forallR(sub, g, goal.var))
    elif isinstance(goal, Lolli):
        x = "x%d" % len(ctx)
        taken = {n for n, _ in ctx}
        while x in taken:
            x += "'"
        for sub in _search(ctx + ((x, goal.dom),), goal.cod, memo, counter):
            out.append(d_lolliR(sub, x))
    elif isinstance(goal, With):
        if not ctx:
            for l in _search((), goal.left, memo, counter):
                for r in _search((), goal.right, memo, counter):
                    out.append(d_withR0(l, r))
    elif isinstance(goal, TVar):
        if len(ctx) == 1 and ctx[0][1] == goal:
            out.append(d_ax(ctx[0][0], goal))
        for i, (y, a) in enumerate(ctx):
            if not isinstance(a, Lolli):
                continue
            rest = ctx[:i] + ctx[i + 1:]
            taken = {n for n, _ in ctx}
            w = "w%d" % len(ctx)
            while w in taken:
                w += "'"
            for g1, g2 in _splits(rest):
                lefts = _search(g1, a.dom, memo, counter)
                if not lefts:
                    continue
                rights = _search(g2 + ((w, a.cod),), goal, memo, counter)
                for ld in lefts:
                    for rd in rights:
                        out.append(d_lolliL(ld, rd, y, w))
    else:
        raise TypeError(goal)

    memo[key] = out
    return out


def _dedupe(derivs):
    from .terms import canonical_key
    seen = {}
    for d in derivs:
        k = canonical_key(d.conclusion.subject)
        if k not in seen:
            seen[k] = d
    return list(seen.values())


def _tensor_pair_derivation(l: Derivation, r: Derivation) -> Derivation:
    """Closed derivation of |- \\z. z L R : A * B from closed component
    derivations."""
    a, b = l.conclusion.goal, r.conclusion.goal
    g = fresh_type_var("g", free_type_vars(a) | free_type_vars(b))
    inner = d_lolliL(r, d_ax("q%s" % g, TVar(g)), "p%s" % g, "q%s" % g)
    outer = d_lolliL(l, inner, "z%s" % g, "p%s" % g)
    return d_forallR(d_lolliR(outer, "z%s" % g), g, g)


def enumerate_inhabitants(a: Type, use_fast_paths: bool = True) -> InhabitantSet:
    """All closed eta-long normal inhabitants of a closed forall-lazy type."""
    if not (is_closed(a) and is_forall_lazy(a)):
        raise InhabitError("type must be closed and forall-lazy")
    if use_fast_paths:
        m = match_tensor_type(a)
        if m is not None and all(is_closed(c) and is_forall_lazy(c) for c in m):
            ls = enumerate_inhabitants(m[0], True)
            rs = enumerate_inhabitants(m[1], True)
            members = []
            for _, ld in ls.members:
                for _, rd in rs.members:
                    d = _tensor_pair_derivation(ld, rd)
                    members.append((d.conclusion.subject, d))
            return InhabitantSet(a, members)
    derivs = _dedupe(_search((), a, {}, [0]))
    return InhabitantSet(a, [(d.conclusion.subject, d) for d in derivs])


def maximal_value(a: Type):
    """The size-maximal inhabitant (term, derivation); ties broken by the
    lexicographically least printed form.  None when uninhabited."""
    s = enumerate_inhabitants(a)
    if not s.members:
        return None
    return max(s.members, key=lambda td: (term_size(td[0]), _neg_lex(print_term(td[0]))))


class _neg_lex(str):
    """Reverse lexicographic comparison wrapper for max()."""

    def __lt__(self, other):
        return str.__gt__(self, other)

    def __gt__(self, other):
        return str.__lt__(self, other)


# -- eta expansion ------------------------------------------------------------

def eta_expansion_derivation(x: str, a: Type) -> Derivation:
    """Cut-free derivation of x:A |- M:A with M the eta-long form of x."""
    if isinstance(a, TVar):
        return d_ax(x, a)
    if isinstance(a, Lolli):
        z, w = x + "l", x + "r"
        left = eta_expansion_derivation(z, a.dom)
        mid = eta_expansion_derivation(w, a.cod)
        return d_lolliR(d_lolliL(left, mid, x, w), z)
    if isinstance(a, Forall):
        g = fresh_type_var("e", free_type_vars(a))
        inst = subst_type(a.body, a.var, TVar(g))
        return d_forallR(d_forallL(eta_expansion_derivation(x, inst), x, a), g, a.var)
    if isinstance(a, With):
        raise InhabitError("cannot eta-expand an assumption of conjunction type")
    raise TypeError(a)


def eta_expand(d: Derivation) -> Derivation:
    """Replace every axiom at a non-atomic type by its eta-long derivation;
    the result proves the same sequent with an eta-expanded subject."""
    from .steps import rebuild
    from .derivation import is_cut_free
    if not is_cut_free(d):
        raise InhabitError("eta-expansion requires a cut-free derivation")

    def go(d):
        if d.rule == "ax" and not isinstance(d.conclusion.goal, TVar):
            return eta_expansion_derivation(d.conclusion.context[0][0],
                                            d.conclusion.goal)
        if not d.premises:
            return d
        return rebuild(d, tuple(go(p) for p in d.premises))

    return go(d)
