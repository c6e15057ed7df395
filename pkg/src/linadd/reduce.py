"""Reduction on terms.

Three contraction rules:

    beta   (\\x. M) N                          ->  M[N/x]
    proj   pi(<M1, M2>)                        ->  Mi
    copy   copy[V] U as x,y in <P, Q>          ->  <P[U/x], Q[U/y]>   (U a value)

applicable in any context.  The let forms reduce through their macro
expansions, so `beta` covers them; `eta` (\\x. M x -> M, x not free in M)
is kept separate and is only used on the translation side.

A redex is identified by its path (child indices from the root) and kind.
`find_redexes` lists redexes in leftmost-outermost order; `normalize` runs a
strategy (leftmost, rightmost, or seeded random) under an optional budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random

from .terms import (
    Abs, App, Copy, Pair, Proj, Term, Var,
    alpha_equal, free_vars, is_value, subst, term_size,
)

REDEX_KINDS = ("beta", "proj", "copy", "let_unit", "let_tensor", "eta")


@dataclass(frozen=True)
class Redex:
    path: tuple
    kind: str


class BudgetExceeded(Exception):
    pass


def redex_kind_at(t: Term):
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return "beta"
    if isinstance(t, Proj) and isinstance(t.body, Pair):
        return "proj"
    if isinstance(t, Copy) and is_value(t.scrutinee):
        return "copy"
    return None


def find_redexes(t: Term) -> list:
    out = []

    def go(t, path):
        k = redex_kind_at(t)
        if k is not None:
            out.append(Redex(path, k))
        for i, c in enumerate(t.children()):
            go(c, path + (i,))

    go(t, ())
    return out


def contract(t: Term) -> Term:
    """Contract the redex at the root of t."""
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return subst(t.fun.body, t.fun.var, t.arg)
    if isinstance(t, Proj) and isinstance(t.body, Pair):
        return t.body.left if t.index == 1 else t.body.right
    if isinstance(t, Copy) and is_value(t.scrutinee):
        return Pair(
            subst(t.left_branch, t.left_var, t.scrutinee),
            subst(t.right_branch, t.right_var, t.scrutinee),
        )
    raise ValueError("no redex at the root")


def _replace(t: Term, path: tuple, sub: Term) -> Term:
    if not path:
        return sub
    i, rest = path[0], path[1:]
    cs = t.children()
    new = _replace(cs[i], rest, sub)
    if isinstance(t, Abs):
        return Abs(t.var, new)
    if isinstance(t, App):
        return App(new, cs[1]) if i == 0 else App(cs[0], new)
    if isinstance(t, Pair):
        return Pair(new, cs[1]) if i == 0 else Pair(cs[0], new)
    if isinstance(t, Proj):
        return Proj(t.index, new)
    if isinstance(t, Copy):
        parts = list(cs)
        parts[i] = new
        return Copy(parts[0], parts[1], t.left_var, t.right_var, parts[2], parts[3])
    raise TypeError(t)


def step(t: Term, r: Redex) -> Term:
    target = t[r.path]
    if redex_kind_at(target) != r.kind:
        raise ValueError("no %s redex at %r" % (r.kind, r.path))
    return _replace(t, r.path, contract(target))


def is_normal(t: Term) -> bool:
    return not find_redexes(t)


@dataclass
class NormalizeResult:
    term: Term
    steps: int
    trace: list = field(default_factory=list)


def normalize(t: Term, strategy: str = "leftmost", budget: int | None = None,
              seed: int | None = None, keep_trace: bool = False) -> NormalizeResult:
    rng = random.Random(seed) if strategy == "random" else None
    steps = 0
    trace: list = []
    while True:
        rs = find_redexes(t)
        if not rs:
            return NormalizeResult(t, steps, trace)
        if budget is not None and steps >= budget:
            raise BudgetExceeded("no normal form within %d steps" % budget)
        if strategy == "leftmost":
            r = rs[0]
        elif strategy == "rightmost":
            r = rs[-1]
        elif strategy == "random":
            r = rng.choice(rs)
        else:
            raise ValueError("unknown strategy %r" % strategy)
        t = step(t, r)
        steps += 1
        if keep_trace:
            trace.append((r, t))


# -- eta ----------------------------------------------------------------------

def eta_redex_at(t: Term) -> bool:
    return (
        isinstance(t, Abs)
        and isinstance(t.body, App)
        and isinstance(t.body.arg, Var)
        and t.body.arg.name == t.var
        and t.var not in free_vars(t.body.fun)
    )


def eta_step(t: Term):
    """Contract the leftmost-outermost eta redex, or return None."""

    def go(t, path):
        if eta_redex_at(t):
            return path
        for i, c in enumerate(t.children()):
            p = go(c, path + (i,))
            if p is not None:
                return p
        return None

    p = go(t, ())
    if p is None:
        return None
    return _replace(t, p, t[p].body.fun)


def eta_normalize(t: Term) -> Term:
    while True:
        t2 = eta_step(t)
        if t2 is None:
            return t
        t = t2


def beta_eta_normal_form(t: Term, budget: int | None = None) -> Term:
    return eta_normalize(normalize(t, budget=budget).term)


def beta_eta_equal(m: Term, n: Term, budget: int | None = None) -> bool:
    return alpha_equal(beta_eta_normal_form(m, budget), beta_eta_normal_form(n, budget))


def reduction_graph_confluent(t: Term, budget: int = 10000) -> bool:
    """All strategies agree on the normal form (checked on a few strategies)."""
    ref = normalize(t, "leftmost", budget=budget).term
    for strat, seed in (("rightmost", None), ("random", 0), ("random", 1), ("random", 2)):
        if not alpha_equal(normalize(t, strat, budget=budget, seed=seed).term, ref):
            return False
    return True


# -- subject reduction --------------------------------------------------------

def push_reduction(d, r: Redex):
    """Transport one subject-reduction step through a derivation: given a
    derivation of ctx |- M : A and a redex of M, produce a derivation of
    ctx |- step(M, r) : A.

    The redex either sits inside a single premise subject (recurse) or is an
    interface redex of some cut: its pattern only exists because the cut
    substituted the left subject into the right one.  In the latter case the
    responsible cut is commuted upward until both premises are principal for
    the cut type, then fired; commuting and quantifier steps preserve the
    subject, and the principal step performs exactly the requested
    contraction.
    """
    from . import steps as st
    from .terms import canonical_key

    target = step(d.conclusion.subject, r)
    before_key = canonical_key(d.conclusion.subject)
    fuel = 4 * (_deriv_size(d) ** 2) + 100
    cur = d
    while fuel > 0:
        fuel -= 1
        cur = _advance(cur, r.path, st)
        key = canonical_key(cur.conclusion.subject)
        if key != before_key:
            if key != canonical_key(target):
                raise AssertionError("push_reduction contracted the wrong redex")
            return cur
    raise AssertionError("push_reduction did not converge")


def _deriv_size(d) -> int:
    memo = {}

    def go(d):
        r = memo.get(id(d))
        if r is None:
            r = 1 + sum(go(p) for p in d.premises)
            memo[id(d)] = r
        return r

    return go(d)


def _advance(d, path: tuple, st):
    """Move the derivation one localized elimination step toward contracting
    the subject redex at `path`."""
    loc = _locate(d, path)
    if loc == "interface":
        return st.eliminate_cut_once(d)
    i, sub_path = loc
    new_prem = _advance(d.premises[i], sub_path, st)
    prems = list(d.premises)
    prems[i] = new_prem
    return st.rebuild(d, tuple(prems))


def _var_path(t: Term, x: str):
    """Path of the (unique) free occurrence of x in t, or None."""
    if isinstance(t, Var):
        return () if t.name == x else None
    if isinstance(t, Abs) and t.var == x:
        return None
    for i, c in enumerate(t.children()):
        if isinstance(t, Copy):
            if i == 2 and t.left_var == x:
                continue
            if i == 3 and t.right_var == x:
                continue
        p = _var_path(c, x)
        if p is not None:
            return (i,) + p
    return None


def _is_prefix(p, q) -> bool:
    return len(p) <= len(q) and q[: len(p)] == p


def _locate(d, path: tuple):
    """Map a subject redex to a premise (index, premise-local path), or report
    it as an interface redex of this node's cut."""
    rule = d.rule
    j = d.conclusion
    if rule in ("forallR", "forallL"):
        return (0, path)
    if rule == "lolliR":
        assert path[:1] == (0,), "redex cannot be the abstraction itself"
        return (0, path[1:])
    if rule in ("withR", "withR0"):
        return (path[0], path[1:])
    if rule == "withR1":
        if path[:1] == (2,):
            return (0, path[1:])
        if path[:1] == (3,):
            return (1, path[1:])
        raise AssertionError("redex in a guard or scrutinee of withR1")
    if rule in ("withL1", "withL2"):
        return (0, path)
    if rule == "lolliL":
        rj = d.premises[1].conclusion
        xs = frozenset(n for n, _ in rj.context) - frozenset(n for n, _ in j.context)
        (x,) = xs
        px = _var_path(rj.subject, x)
        if _is_prefix(px + (1,), path):
            return (0, path[len(px) + 1:])
        return (1, path)
    if rule == "cut":
        rj = d.premises[1].conclusion
        xs = frozenset(n for n, _ in rj.context) - frozenset(n for n, _ in j.context)
        (x,) = xs
        px = _var_path(rj.subject, x)
        if _is_prefix(px, path):
            return (0, path[len(px):])
        kind = redex_kind_at(j.subject[path])
        if redex_kind_at(rj.subject[path]) == kind:
            return (1, path)
        return "interface"
    raise AssertionError("no redex can appear under rule %s" % rule)
