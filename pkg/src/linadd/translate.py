"""Translation of checked derivations into linear λ-terms typed without
the additive rules.

Types map homomorphically with conjunction becoming the tensor macro.  The
pair-projection rules become eraser gadgets (stepwise data consumption) and
the guarded-copy rule becomes a duplicator gadget (selection among all
possible outcomes, erasing the rest), following the Mairson–Terui linear
erasure/duplication discipline.  Every translated derivation is rebuilt as a
full derivation in the multiplicative fragment, so the output re-checks.
"""

from __future__ import annotations

from .terms import Term, fresh_name, free_vars, term_size
from .typesys import (
    Forall, Lolli, TVar, Type, With,
    bool_type, free_type_vars, fresh_type_var, is_closed, subst_type,
    tensor_type, unit_type, type_size,
)
from .derivation import (
    Derivation, check, CheckError,
    context_names,
    d_app, d_ax, d_cut, d_forallL, d_forallR, d_inst, d_lolliL, d_lolliR,
)


class GadgetError(Exception):
    """No eraser/duplicator construction for the requested type shape."""


# -- type translation ---------------------------------------------------------

def translate_type(a: Type) -> Type:
    if isinstance(a, TVar):
        return a
    if isinstance(a, Lolli):
        return Lolli(translate_type(a.dom), translate_type(a.cod))
    if isinstance(a, With):
        return tensor_type(translate_type(a.left), translate_type(a.right))
    if isinstance(a, Forall):
        return Forall(a.var, translate_type(a.body))
    raise TypeError(a)


# -- small derivation combinators --------------------------------------------

def identity_derivation() -> Derivation:
    """|- I : 1, eta-long."""
    a = fresh_type_var("a", frozenset())
    x = fresh_name("i", set())
    return d_forallR(d_lolliR(d_ax(x, TVar(a)), x), a, a)


def d_tensor_pair(l: Derivation, r: Derivation) -> Derivation:
    """Combine Γ|-M:A and Δ|-N:B into Γ,Δ |- \\z. z M N : A * B."""
    a, b = l.conclusion.goal, r.conclusion.goal
    g = fresh_type_var("g", free_type_vars(a) | free_type_vars(b))
    avoid = (context_names(l.conclusion.context)
             | context_names(r.conclusion.context)
             | free_vars(l.conclusion.subject) | free_vars(r.conclusion.subject))
    z = fresh_name("z", avoid)
    p = fresh_name("p", avoid | {z})
    q = fresh_name("q", avoid | {z, p})
    inner = d_lolliL(r, d_ax(q, TVar(g)), p, q)
    outer = d_lolliL(l, inner, z, p)
    return d_forallR(d_lolliR(outer, z), g, g)


def d_let_tensor(scrut: Derivation, body: Derivation, x1: str, x2: str) -> Derivation:
    """`let M be x1*x2 in N`, i.e. M applied to \\x1.\\x2.N at the body's type."""
    r = body.conclusion.goal
    fn = d_lolliR(d_lolliR(body, x2), x1)
    return d_app(d_inst(scrut, r), fn)


def d_let_unit(scrut: Derivation, body: Derivation) -> Derivation:
    """`let M be I in N`, i.e. the unit-typed M applied to N at its type."""
    return d_app(d_inst(scrut, body.conclusion.goal), body)


# -- erasers ------------------------------------------------------------------

# The eraser walks a closed type with only positive quantifiers: quantifiers
# are instantiated at 1, each argument position is fed a canonical closed
# inhabitant (the generator), and the head atom — always an instantiated
# variable — leaves a unit behind.  The generator for an argument type
# abstracts its own arguments, consumes each with the matching eraser, and
# chains the units onto I.  Both are linear in the type size.

def _eraser_body(s: Type, env: frozenset, d: Derivation) -> Derivation:
    while True:
        if isinstance(s, TVar):
            if s.name not in env:
                raise GadgetError("eraser reached a free type variable")
            return d
        if isinstance(s, Forall):
            m = fresh_type_var("m", env | free_type_vars(s))
            env = env | {m}
            s = subst_type(s.body, s.var, TVar(m))
            d = d_inst(d, unit_type())
        elif isinstance(s, Lolli):
            d = d_app(d, _generator(s.dom, env))
            s = s.cod
        else:
            raise GadgetError("eraser does not support conjunction types")


def _generator(s: Type, env: frozenset) -> Derivation:
    doms = []
    while isinstance(s, Lolli):
        doms.append(s.dom)
        s = s.cod
    if not (isinstance(s, TVar) and s.name in env):
        raise GadgetError("generator head is not an instantiated variable"
                          " (negative quantifier in the erased type)")
    d = identity_derivation()
    names = [fresh_name("g", set()) for _ in doms]
    for x, dom in zip(reversed(names), reversed(doms)):
        real = _realize(dom, env)
        e = d_app(_eraser(real, env), d_ax(x, real))
        d = d_app(d_inst(e, d.conclusion.goal), d)
    for x in reversed(names):
        d = d_lolliR(d, x)
    return d


def _realize(s: Type, env: frozenset) -> Type:
    for m in free_type_vars(s) & env:
        s = subst_type(s, m, unit_type())
    return s


def _eraser(a: Type, env: frozenset) -> Derivation:
    z = fresh_name("z", set())
    body = _eraser_body(a, env, d_ax(z, a))
    return d_lolliR(body, z)


# -- duplicators --------------------------------------------------------------

BOOL = bool_type()

_TRUE_FALSE = None


def _bool_values():
    """Derivations of the two eta-long boolean inhabitants; the one pairing
    its first argument first represents true."""
    global _TRUE_FALSE
    if _TRUE_FALSE is None:
        def build(swap):
            x, y = fresh_name("bx", set()), fresh_name("by", set())
            a = fresh_type_var("a", frozenset())
            l, r = d_ax(x, TVar(a)), d_ax(y, TVar(a))
            first, second = (r, l) if swap else (l, r)
            d = d_tensor_pair(first, second)
            d = d_lolliR(d_lolliR(d, y), x)
            return d_forallR(d, a, "a")
        _TRUE_FALSE = (build(False), build(True))
    return _TRUE_FALSE


def _tensor_shape(a: Type):
    """Parse a type as a tensor tree over the unit and boolean leaves;
    None if some leaf is neither."""
    from .typesys import match_tensor_type
    m = match_tensor_type(a)
    if m is not None:
        l = _tensor_shape(m[0])
        r = _tensor_shape(m[1])
        if l is None or r is None:
            return None
        return ("pair", l, r)
    if a == unit_type():
        return ("unit",)
    if a == BOOL:
        return ("bool",)
    return None


def _shape_bools(shape) -> int:
    if shape[0] == "pair":
        return _shape_bools(shape[1]) + _shape_bools(shape[2])
    return 1 if shape[0] == "bool" else 0


def _value_for(shape, assignment: list) -> Derivation:
    """Closed derivation of the inhabitant selected by the boolean
    assignment, consuming it left to right."""
    if shape[0] == "unit":
        return identity_derivation()
    if shape[0] == "bool":
        tt, ff = _bool_values()
        return tt if assignment.pop(0) else ff
    l = _value_for(shape[1], assignment)
    r = _value_for(shape[2], assignment)
    return d_tensor_pair(l, r)


def _proj1(r: Type, lib) -> Derivation:
    """|- \\z. let z be x*y in (let E_r y be I in x) : (r * r) -o r."""
    z, x, y = (fresh_name(n, set()) for n in ("z", "x", "y"))
    e = d_app(lib.eraser(r), d_ax(y, r))
    body = d_let_unit(e, d_ax(x, r))
    return d_lolliR(d_let_tensor(d_ax(z, tensor_type(r, r)), body, x, y), z)


def _flat_select(bools: list, shape, lib) -> Derivation:
    """Selection by table: a closed balanced tuple holds the outcome pair for
    every boolean assignment (true half first); each selector then takes the
    current table apart, keeps its half, and erases the other."""
    from .typesys import match_tensor_type

    def table(k, assignment):
        if k == len(bools):
            v = _value_for(shape, list(assignment))
            w = _value_for(shape, list(assignment))
            return d_tensor_pair(v, w)
        return d_tensor_pair(table(k + 1, assignment + [True]),
                             table(k + 1, assignment + [False]))

    d = table(0, [])
    for b in bools:
        s, _ = match_tensor_type(d.conclusion.goal)
        u, v = fresh_name("u", set()), fresh_name("v", set())
        sel = d_app(d_app(d_inst(d_ax(b, BOOL), s), d_ax(u, s)), d_ax(v, s))
        pick = d_app(_proj1(s, lib), sel)
        d = d_let_tensor(d, pick, u, v)
    return d


_FLAT_LIMIT = 256


class GadgetLibrary:
    """Cache of eraser and duplicator derivations keyed by the type."""

    def __init__(self):
        self._erasers: dict = {}
        self._dups: dict = {}

    def eraser(self, a: Type) -> Derivation:
        """Closed derivation of |- E : A -o 1 with E M normalizing to I for
        every closed normal inhabitant M; |E| is linear in |A|."""
        if a not in self._erasers:
            if not is_closed(a):
                raise GadgetError("eraser requires a closed type")
            self._erasers[a] = _eraser(a, frozenset())
        return self._erasers[a]

    def duplicator(self, a: Type) -> Derivation:
        """Closed derivation of |- D : A -o A * A with D M normalizing
        (beta-eta) to M * M for every closed normal inhabitant M."""
        if a not in self._dups:
            self._dups[a] = self._build_dup(a)
        return self._dups[a]

    def _build_dup(self, a: Type) -> Derivation:
        shape = _tensor_shape(a)
        if shape is None:
            raise GadgetError("no duplicator for this type shape: %s" % (a,))
        k = _shape_bools(shape)
        if 2 ** k <= _FLAT_LIMIT:
            return self._flat_dup(a, shape)
        if shape[0] == "pair":
            return self._product_dup(a, shape)
        raise GadgetError("type has too many inhabitants for a lookup table")

    def _flat_dup(self, a: Type, shape) -> Derivation:
        # one lookup table holding every outcome pair, selected by feeding
        # the boolean leaves in; unit leaves are consumed along the way.
        # Each tree node gets a variable name: the root is the lambda
        # binder, inner names are introduced by the destructuring lets, and
        # a boolean leaf's name doubles as its selector variable.
        from .typesys import match_tensor_type
        z = fresh_name("z", set())

        bools: list = []

        # collect boolean leaf names in left-to-right order first, so the
        # selection body can be built before the destructuring wrappers
        def assign(shape, v):
            if shape[0] == "bool":
                bools.append(v)
                return ("bool", v)
            if shape[0] == "unit":
                return ("unit", v)
            v1, v2 = fresh_name("v", set()), fresh_name("v", set())
            return ("pair", v, assign(shape[1], v1), assign(shape[2], v2))

        named = assign(shape, z)

        def wrap(named, a, body):
            if named[0] == "bool":
                return body
            if named[0] == "unit":
                return d_let_unit(d_ax(named[1], unit_type()), body)
            t1, t2 = match_tensor_type(a)
            _, v, ln, rn = named
            inner = wrap(rn, t2, wrap(ln, t1, body))
            return d_let_tensor(d_ax(v, a), inner, ln[1], rn[1])

        body = _flat_select(bools, shape, self)
        return d_lolliR(wrap(named, a, body), z)

    def _product_dup(self, a: Type, shape) -> Derivation:
        from .typesys import match_tensor_type
        t1, t2 = match_tensor_type(a)
        d1, d2 = self.duplicator(t1), self.duplicator(t2)
        z, x, y, x1, x2, y1, y2 = (fresh_name(n, set()) for n in
                                   ("z", "x", "y", "x", "x", "y", "y"))
        out = d_tensor_pair(
            d_tensor_pair(d_ax(x1, t1), d_ax(y1, t2)),
            d_tensor_pair(d_ax(x2, t1), d_ax(y2, t2)))
        out = d_let_tensor(d_app(d2, d_ax(y, t2)), out, y1, y2)
        out = d_let_tensor(d_app(d1, d_ax(x, t1)), out, x1, x2)
        out = d_let_tensor(d_ax(z, a), out, x, y)
        return d_lolliR(out, z)


# -- derivation translation ---------------------------------------------------

def translate_derivation(d: Derivation, lib: GadgetLibrary | None = None) -> Derivation:
    """Rebuild a checked additive derivation in the multiplicative fragment.
    The result proves Γ• |- M• : A• and re-checks; projections become
    erasers of the dropped component and guarded copies become duplicators
    applied to the shared assumption."""
    if lib is None:
        lib = GadgetLibrary()
    memo: dict = {}

    def go(d: Derivation) -> Derivation:
        if id(d) in memo:
            return memo[id(d)]
        r = _translate_node(d, go, lib)
        memo[id(d)] = r
        return r

    return go(d)


def _translate_node(d: Derivation, go, lib: GadgetLibrary) -> Derivation:
    from .steps import (cut_var, lolliR_var, lolliL_vars, withL_vars,
                        forallL_var)
    rule = d.rule
    if rule == "ax":
        (x, a), = d.conclusion.context
        return d_ax(x, translate_type(a))
    if rule == "cut":
        x = cut_var(d)
        return d_cut(go(d.premises[0]), go(d.premises[1]), x)
    if rule == "lolliR":
        return d_lolliR(go(d.premises[0]), lolliR_var(d))
    if rule == "lolliL":
        y, x = lolliL_vars(d)
        return d_lolliL(go(d.premises[0]), go(d.premises[1]), y, x)
    if rule == "withR0":
        return d_tensor_pair(go(d.premises[0]), go(d.premises[1]))
    if rule in ("withL1", "withL2"):
        i = 1 if rule == "withL1" else 2
        y, x, _ = withL_vars(d)
        ab = d.conclusion.lookup(y)
        keep = translate_type(ab.left if i == 1 else ab.right)
        drop = translate_type(ab.right if i == 1 else ab.left)
        other = fresh_name("d", free_vars(d.conclusion.subject)
                           | context_names(d.conclusion.context) | {x})
        body = go(d.premises[0])
        e = d_app(lib.eraser(drop), d_ax(other, drop))
        body = d_let_unit(e, body)
        x1, x2 = (x, other) if i == 1 else (other, x)
        return d_let_tensor(d_ax(y, translate_type(ab)), body, x1, x2)
    if rule == "withR1":
        from .steps import principal_var
        x = principal_var(d)
        (x1, _), = d.premises[0].conclusion.context
        (x2, _), = d.premises[1].conclusion.context
        a = translate_type(d.premises[0].conclusion.context[0][1])
        dup = lib.duplicator(a)
        pair = d_tensor_pair(go(d.premises[0]), go(d.premises[1]))
        return d_let_tensor(d_app(dup, d_ax(x, a)), pair, x1, x2)
    if rule == "forallR":
        from .derivation import find_eigenvariable
        g = find_eigenvariable(d)
        alpha = d.conclusion.goal.var
        return d_forallR(go(d.premises[0]), g, alpha)
    if rule == "forallL":
        x = forallL_var(d)
        return d_forallL(go(d.premises[0]), x,
                         translate_type(d.conclusion.lookup(x)))
    raise ValueError("cannot translate rule %r" % (rule,))


# -- contracts and reporting --------------------------------------------------

def check_soundness(before: Derivation, after: Derivation,
                    lib: GadgetLibrary | None = None) -> bool:
    """An elimination step from `before` to `after` must leave the two
    translations beta-eta-equal."""
    from .reduce import beta_eta_equal
    lib = lib or GadgetLibrary()
    t1 = translate_derivation(before, lib).conclusion.subject
    t2 = translate_derivation(after, lib).conclusion.subject
    return beta_eta_equal(t1, t2)


def compression_report(d: Derivation, lib: GadgetLibrary | None = None) -> dict:
    from .derivation import metrics
    out = translate_derivation(d, lib or GadgetLibrary())
    return {
        "derivation_size": metrics(d).size,
        "subject_size": term_size(d.conclusion.subject),
        "translated_size": term_size(out.conclusion.subject),
        "translated_derivation_size": metrics(out).size,
    }
