"""Concrete syntax.

Terms:   x | \\x. M | M N | <M, N> | p1(M) | p2(M)
         | copy[V] M as x,y in <P, Q>
         | I | M * N | let M be I in N | let M be x * y in N   (macros)

Types:   a | A -o B | A & B | forall a. A | 1 | A * B          (macros)

`-o` is right-associative; `&` and `*` bind tighter and associate left;
application is left-associative.  Macros are expanded while parsing and are
never represented in the AST; the printers emit the expanded form unless
``use_macros`` is set, in which case unit and tensor shapes are re-sugared.

Derivations are s-expressions

    (rule NAME (seq ((x "TYPE") ...) "TERM" "TYPE") PREMISE ...)

with terms and types embedded as double-quoted strings in the syntax above.
`;` starts a line comment in every format.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Abs, App, Copy, Pair, Proj, Term, Var,
    free_vars, identity_term, let_tensor, let_unit, match_tensor_term,
    tensor_term,
)
from .typesys import (
    Forall, Lolli, TVar, Type, With,
    is_unit_type, match_tensor_type, tensor_type, unit_type,
)
from .derivation import Derivation, Judgement

KEYWORDS = {"forall", "copy", "as", "in", "let", "be", "p1", "p2", "I"}
PUNCT = ("-o", "(", ")", "<", ">", ",", ".", "\\", "[", "]", "&", "*", '"')


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected=()):
        self.message = message
        self.span = span
        self.expected = tuple(expected)
        detail = " (expected %s)" % ", ".join(expected) if expected else ""
        super().__init__("%s at %d..%d%s" % (message, span.start, span.end, detail))


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, punct, number, string, eof
    text: str
    span: SourceSpan


def tokenize(src: str) -> list:
    toks = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == ";":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and src[j] != '"':
                j += 1
            if j >= n:
                raise ParseError("unterminated string", SourceSpan(i, n))
            toks.append(Token("string", src[i + 1:j], SourceSpan(i, j + 1)))
            i = j + 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            text = src[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            toks.append(Token(kind, text, SourceSpan(i, j)))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("number", src[i:j], SourceSpan(i, j)))
            i = j
            continue
        if src.startswith("-o", i):
            toks.append(Token("punct", "-o", SourceSpan(i, i + 2)))
            i += 2
            continue
        if c in "()<>,.\\[]&*":
            toks.append(Token("punct", c, SourceSpan(i, i + 1)))
            i += 1
            continue
        raise ParseError("unexpected character %r" % c, SourceSpan(i, i + 1))
    toks.append(Token("eof", "", SourceSpan(n, n)))
    return toks


class _Cursor:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind == "string":
            raise ParseError("unexpected %r" % (t.text or "end of input"),
                             t.span, expected=[repr(text)])
        return self.next()

    def ident(self, what="identifier") -> Token:
        t = self.peek()
        if t.kind != "ident":
            raise ParseError("unexpected %r" % (t.text or "end of input"),
                             t.span, expected=[what])
        return self.next()


# -- types --------------------------------------------------------------------

def _parse_type(c: _Cursor) -> Type:
    t = c.peek()
    if t.text == "forall":
        c.next()
        v = c.ident("type variable").text
        c.expect(".")
        return Forall(v, _parse_type(c))
    left = _parse_type_tensor(c)
    if c.peek().text == "-o":
        c.next()
        return Lolli(left, _parse_type(c))
    return left


def _parse_type_tensor(c: _Cursor) -> Type:
    out = _parse_type_atom(c)
    while c.peek().text in ("&", "*") and c.peek().kind == "punct":
        op = c.next().text
        rhs = _parse_type_atom(c)
        out = With(out, rhs) if op == "&" else tensor_type(out, rhs)
    return out


def _parse_type_atom(c: _Cursor) -> Type:
    t = c.peek()
    if t.text == "(":
        c.next()
        a = _parse_type(c)
        c.expect(")")
        return a
    if t.kind == "number" and t.text == "1":
        c.next()
        return unit_type()
    if t.text == "forall":
        return _parse_type(c)
    if t.kind == "ident":
        return TVar(c.next().text)
    raise ParseError("unexpected %r" % (t.text or "end of input"), t.span,
                     expected=["type"])


def parse_type(src: str) -> Type:
    c = _Cursor(tokenize(src))
    a = _parse_type(c)
    if c.peek().kind != "eof":
        raise ParseError("trailing input", c.peek().span)
    return a


def print_type(a: Type, use_macros: bool = False) -> str:
    def atom(t):
        s = go(t)
        if isinstance(t, (Lolli, Forall, With)) and s not in ("1",):
            return "(%s)" % s
        if use_macros and match_tensor_type(t) is not None:
            return "(%s)" % s
        return s

    def go(t):
        if use_macros:
            if is_unit_type(t):
                return "1"
            m = match_tensor_type(t)
            if m is not None:
                return "%s * %s" % (atom(m[0]), atom(m[1]))
        if isinstance(t, TVar):
            return t.name
        if isinstance(t, Lolli):
            return "%s -o %s" % (atom(t.dom), go(t.cod))
        if isinstance(t, With):
            ls = atom(t.left)
            if isinstance(t.left, With):
                ls = "(%s)" % go(t.left)
            rs = atom(t.right)
            if isinstance(t.right, With):
                rs = "(%s)" % go(t.right)
            return "%s & %s" % (ls, rs)
        if isinstance(t, Forall):
            return "forall %s. %s" % (t.var, go(t.body))
        raise TypeError(t)

    return go(a)


# -- terms --------------------------------------------------------------------

def _parse_term(c: _Cursor) -> Term:
    t = c.peek()
    if t.text == "\\":
        c.next()
        v = c.ident("variable").text
        c.expect(".")
        return Abs(v, _parse_term(c))
    if t.text == "let":
        c.next()
        m = _parse_term_tensor(c)
        c.expect("be")
        if c.peek().text == "I":
            c.next()
            c.expect("in")
            return let_unit(m, _parse_term(c))
        x = c.ident("variable").text
        c.expect("*")
        y = c.ident("variable").text
        c.expect("in")
        return let_tensor(m, x, y, _parse_term(c))
    return _parse_term_tensor(c)


def _parse_term_tensor(c: _Cursor) -> Term:
    out = _parse_term_app(c)
    while c.peek().kind == "punct" and c.peek().text == "*":
        c.next()
        out = tensor_term(out, _parse_term_app(c))
    return out


_ATOM_STARTS = {"(", "<", "\\"}


def _starts_atom(t: Token) -> bool:
    if t.kind == "ident":
        return True
    if t.kind == "keyword" and t.text in ("p1", "p2", "copy", "I", "let"):
        return True
    return t.kind == "punct" and t.text in _ATOM_STARTS


def _parse_term_app(c: _Cursor) -> Term:
    out = _parse_term_atom(c)
    while _starts_atom(c.peek()):
        out = App(out, _parse_term_atom(c))
    return out


def _parse_term_atom(c: _Cursor) -> Term:
    t = c.peek()
    if t.text == "(":
        c.next()
        m = _parse_term(c)
        c.expect(")")
        return m
    if t.text == "<":
        c.next()
        l = _parse_term(c)
        c.expect(",")
        r = _parse_term(c)
        c.expect(">")
        return Pair(l, r)
    if t.text in ("p1", "p2"):
        c.next()
        c.expect("(")
        m = _parse_term(c)
        c.expect(")")
        return Proj(1 if t.text == "p1" else 2, m)
    if t.text == "copy":
        c.next()
        c.expect("[")
        guard = _parse_term(c)
        c.expect("]")
        scrut = _parse_term_app(c)
        c.expect("as")
        x = c.ident("variable").text
        c.expect(",")
        y = c.ident("variable").text
        c.expect("in")
        c.expect("<")
        l = _parse_term(c)
        c.expect(",")
        r = _parse_term(c)
        c.expect(">")
        return Copy(guard, scrut, x, y, l, r)
    if t.text == "I":
        c.next()
        return identity_term()
    if t.text in ("\\", "let"):
        return _parse_term(c)
    if t.kind == "ident":
        return Var(c.next().text)
    raise ParseError("unexpected %r" % (t.text or "end of input"), t.span,
                     expected=["term"])


def parse_term(src: str) -> Term:
    c = _Cursor(tokenize(src))
    m = _parse_term(c)
    if c.peek().kind != "eof":
        raise ParseError("trailing input", c.peek().span)
    return m


def print_term(m: Term, use_macros: bool = False) -> str:
    def atom(t):
        s = go(t)
        if isinstance(t, (Var, Pair, Proj)):
            return s
        if s == "I":
            return s
        return "(%s)" % s

    def appside(t):
        # left side of application: applications stay bare
        if isinstance(t, App) and not (use_macros and match_tensor_term(t)):
            return go(t)
        return atom(t)

    def go(t):
        if use_macros:
            ident = identity_term()
            from .terms import alpha_equal
            if isinstance(t, Abs) and alpha_equal(t, ident):
                return "I"
            mt = match_tensor_term(t)
            if mt is not None:
                return "%s * %s" % (atom(mt[0]), atom(mt[1]))
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Abs):
            return "\\%s. %s" % (t.var, go(t.body))
        if isinstance(t, App):
            return "%s %s" % (appside(t.fun), atom(t.arg))
        if isinstance(t, Pair):
            return "<%s, %s>" % (go(t.left), go(t.right))
        if isinstance(t, Proj):
            return "p%d(%s)" % (t.index, go(t.body))
        if isinstance(t, Copy):
            return "copy[%s] %s as %s,%s in <%s, %s>" % (
                go(t.guard) if not isinstance(t.guard, App) else atom(t.guard),
                atom(t.scrutinee) if not isinstance(t.scrutinee, Var) else go(t.scrutinee),
                t.left_var, t.right_var,
                go(t.left_branch), go(t.right_branch),
            )
        raise TypeError(t)

    return go(m)


# -- derivations --------------------------------------------------------------

def _parse_sexp(c: _Cursor):
    t = c.peek()
    if t.text == "(" and t.kind == "punct":
        c.next()
        items = []
        while not (c.peek().kind == "punct" and c.peek().text == ")"):
            if c.peek().kind == "eof":
                raise ParseError("unclosed parenthesis", t.span)
            items.append(_parse_sexp(c))
        c.next()
        return items
    if t.kind == "string":
        c.next()
        return ("str", t.text)
    if t.kind in ("ident", "keyword", "number"):
        c.next()
        return ("atom", t.text)
    raise ParseError("unexpected %r" % (t.text or "end of input"), t.span,
                     expected=["s-expression"])


def _sexp_to_derivation(s) -> Derivation:
    def fail(msg):
        raise ParseError(msg, SourceSpan(0, 0))

    if not (isinstance(s, list) and len(s) >= 3 and s[0] == ("atom", "rule")):
        fail("derivation must be (rule NAME (seq ...) PREMISE...)")
    name = s[1]
    if not (isinstance(name, tuple) and name[0] == "atom"):
        fail("rule name must be an atom")
    seq = s[2]
    if not (isinstance(seq, list) and len(seq) == 4 and seq[0] == ("atom", "seq")):
        fail("judgement must be (seq ((x \"A\") ...) \"TERM\" \"TYPE\")")
    ctx_s, term_s, type_s = seq[1], seq[2], seq[3]
    if not isinstance(ctx_s, list):
        fail("context must be a list of bindings")
    ctx = []
    for b in ctx_s:
        if not (isinstance(b, list) and len(b) == 2
                and isinstance(b[0], tuple) and b[0][0] == "atom"
                and isinstance(b[1], tuple) and b[1][0] == "str"):
            fail("binding must be (name \"TYPE\")")
        ctx.append((b[0][1], parse_type(b[1][1])))
    if not (isinstance(term_s, tuple) and term_s[0] == "str"
            and isinstance(type_s, tuple) and type_s[0] == "str"):
        fail("subject and goal must be quoted strings")
    j = Judgement(tuple(ctx), parse_term(term_s[1]), parse_type(type_s[1]))
    prems = tuple(_sexp_to_derivation(p) for p in s[3:])
    return Derivation(name[1], j, prems)


def parse_derivation(src: str) -> Derivation:
    c = _Cursor(tokenize(src))
    s = _parse_sexp(c)
    if c.peek().kind != "eof":
        raise ParseError("trailing input", c.peek().span)
    return _sexp_to_derivation(s)


def print_derivation(d: Derivation) -> str:
    def go(d, indent):
        pad = "  " * indent
        j = d.conclusion
        ctx = " ".join('(%s "%s")' % (n, print_type(a)) for n, a in j.context)
        seq = '(seq (%s) "%s" "%s")' % (ctx, print_term(j.subject), print_type(j.goal))
        if not d.premises:
            return "%s(rule %s %s)" % (pad, d.rule, seq)
        prems = "\n".join(go(p, indent + 1) for p in d.premises)
        return "%s(rule %s %s\n%s)" % (pad, d.rule, seq, prems)

    return go(d, 0)


def derivations_equal(d1: Derivation, d2: Derivation) -> bool:
    from .terms import alpha_equal
    j1, j2 = d1.conclusion, d2.conclusion
    return (
        d1.rule == d2.rule
        and j1.context == j2.context
        and alpha_equal(j1.subject, j2.subject)
        and j1.goal == j2.goal
        and len(d1.premises) == len(d2.premises)
        and all(derivations_equal(p, q) for p, q in zip(d1.premises, d2.premises))
    )


def load_term(path: str) -> Term:
    with open(path) as f:
        return parse_term(f.read())


def load_derivation(path: str) -> Derivation:
    with open(path) as f:
        return parse_derivation(f.read())


def save(path: str, text: str) -> None:
    with open(path, "w") as f:
        f.write(text if text.endswith("\n") else text + "\n")
