"""The declarative input language: tokenizer, recursive-descent parser, AST.

Grammar (';'-terminated statements, '#' comments to end of line):

    script    := statement*
    statement := ring | module | matrix | command
    ring      := "ring" NAME "=" "F" "(" NUM ")" "[" NAME ("," NAME)* "]"
                 ("/" "(" poly ("," poly)* ")")? ";"
    module    := "module" NAME "=" modexpr ";"
    modexpr   := "coker" matlit "degrees" "(" NUM ("," NUM)* ")"
               | "submodule" "(" gen ("," gen)* ")"
               | "quotient" "(" poly ("," poly)* ")"
    gen       := poly | "[" poly ("," poly)* "]"
    matrix    := "matrix" NAME "=" matlit "degrees" "(" NUM ("," NUM)* ")" ";"
    matlit    := "[" row ("," row)* "]";  row := "[" poly ("," poly)* "]"
    command   := WORD arg* ";"   with arg := NAME | KEY "=" value

Polynomial expressions support +, -, *, ^, parentheses, integer coefficients
and implicit multiplication (2x, xy).  Each parsed expression keeps its source
text, so printing an AST and reparsing reproduces it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import errors

COMMAND_WORDS = {
    "resolve", "betti", "hilbert", "ext", "grade", "dual", "syzygy",
    "check", "iso", "stable", "mf", "classify", "tsd", "selfdual", "periodic",
}
CHECK_KINDS = {"selfdual", "tsd", "periodic", "dey-sd", "dey-ep", "ep-theorems"}


@dataclass(frozen=True)
class Token:
    kind: str  # name | num | punct | end
    value: object
    line: int
    col: int


def tokenize(text):
    toks = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("num", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in ";,=/()[]+-*^":
            toks.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        raise errors.ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("end", None, line, col))
    return toks


# -- polynomial expression AST -------------------------------------------------


@dataclass(frozen=True)
class PolyExpr:
    node: tuple  # nested tuples: ("num", n) ("var", name, line, col) ("add"|"sub"|"mul", a, b) ("pow", a, n) ("neg", a)
    src: str

    def evaluate(self, ring):
        return _eval_node(self.node, ring)

    def __str__(self):
        return self.src


def _eval_node(node, ring):
    kind = node[0]
    if kind == "num":
        return ring.scalar(node[1])
    if kind == "var":
        name, line, col = node[1], node[2], node[3]
        from .algebra import _split_name

        try:
            parts = _split_name(name, ring, col)
        except errors.ParseError:
            raise errors.UnknownName(f"unknown variable {name!r}", line, col) from None
        out = ring.one()
        for v in parts:
            out = out * ring.variable(v)
        return out
    if kind == "add":
        return _eval_node(node[1], ring) + _eval_node(node[2], ring)
    if kind == "sub":
        return _eval_node(node[1], ring) - _eval_node(node[2], ring)
    if kind == "mul":
        return _eval_node(node[1], ring) * _eval_node(node[2], ring)
    if kind == "pow":
        return _eval_node(node[1], ring) ** node[2]
    if kind == "neg":
        return -_eval_node(node[1], ring)
    raise AssertionError(node)


# -- statements -----------------------------------------------------------------


@dataclass(frozen=True)
class RingDecl:
    name: str
    p: int
    variables: tuple
    ideal: tuple  # PolyExpr
    line: int = 0
    col: int = 0

    def unparse(self):
        base = f"ring {self.name} = F({self.p})[{','.join(self.variables)}]"
        if self.ideal:
            base += f" / ({', '.join(g.src for g in self.ideal)})"
        return base + ";"


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    kind: str  # coker | submodule | quotient
    rows: tuple = ()  # for coker: tuple of tuple of PolyExpr
    degrees: tuple = ()
    gens: tuple = ()  # for submodule: tuple of tuple of PolyExpr (vectors)
    line: int = 0
    col: int = 0

    def unparse(self):
        if self.kind == "coker":
            mat = ", ".join("[" + ", ".join(e.src for e in row) + "]" for row in self.rows)
            return (
                f"module {self.name} = coker [{mat}] "
                f"degrees ({', '.join(str(d) for d in self.degrees)});"
            )
        if self.kind == "submodule":
            parts = []
            for g in self.gens:
                if len(g) == 1:
                    parts.append(g[0].src)
                else:
                    parts.append("[" + ", ".join(e.src for e in g) + "]")
            return f"module {self.name} = submodule ({', '.join(parts)});"
        parts = [g[0].src for g in self.gens]
        return f"module {self.name} = quotient ({', '.join(parts)});"


@dataclass(frozen=True)
class MatrixDecl:
    name: str
    rows: tuple
    degrees: tuple
    line: int = 0
    col: int = 0

    def unparse(self):
        mat = ", ".join("[" + ", ".join(e.src for e in row) + "]" for row in self.rows)
        return (
            f"matrix {self.name} = [{mat}] "
            f"degrees ({', '.join(str(d) for d in self.degrees)});"
        )


@dataclass(frozen=True)
class Command:
    verb: str  # e.g. "resolve", "check selfdual", "iso"
    names: tuple = ()
    params: tuple = ()  # tuple of (key, value) pairs, values int or PolyExpr
    line: int = 0
    col: int = 0

    def param(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def unparse(self):
        parts = [self.verb]
        parts.extend(self.names)
        for k, v in self.params:
            parts.append(f"{k}={v.src if isinstance(v, PolyExpr) else v}")
        return " ".join(parts) + ";"


@dataclass(frozen=True)
class SessionScript:
    statements: tuple

    def unparse(self):
        return "\n".join(s.unparse() for s in self.statements)


class Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, ahead=0):
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def expect_punct(self, ch):
        t = self.next()
        if t.kind != "punct" or t.value != ch:
            raise errors.ParseError(f"expected {ch!r}, got {t.value!r}", t.line, t.col)
        return t

    def expect_name(self, what="name"):
        t = self.next()
        if t.kind != "name":
            raise errors.ParseError(f"expected {what}, got {t.value!r}", t.line, t.col)
        return t

    def expect_num(self):
        t = self.next()
        if t.kind != "num":
            raise errors.ParseError(f"expected integer, got {t.value!r}", t.line, t.col)
        return t.value

    def at_punct(self, ch):
        t = self.peek()
        return t.kind == "punct" and t.value == ch

    # -- entry ------------------------------------------------------------------

    def script(self):
        out = []
        while self.peek().kind != "end":
            out.append(self.statement())
        return SessionScript(tuple(out))

    def statement(self):
        t = self.peek()
        if t.kind != "name":
            raise errors.ParseError(f"expected a statement, got {t.value!r}", t.line, t.col)
        if t.value == "ring":
            return self.ring_decl()
        if t.value == "module":
            return self.module_decl()
        if t.value == "matrix":
            return self.matrix_decl()
        if t.value in COMMAND_WORDS:
            return self.command()
        raise errors.ParseError(f"unknown statement {t.value!r}", t.line, t.col)

    def ring_decl(self):
        kw = self.next()
        name = self.expect_name("ring name").value
        self.expect_punct("=")
        f = self.expect_name("'F'")
        if f.value != "F":
            raise errors.ParseError("expected 'F(p)'", f.line, f.col)
        self.expect_punct("(")
        p = self.expect_num()
        self.expect_punct(")")
        self.expect_punct("[")
        variables = [self.expect_name("variable").value]
        while self.at_punct(","):
            self.next()
            variables.append(self.expect_name("variable").value)
        self.expect_punct("]")
        ideal = []
        if self.at_punct("/"):
            self.next()
            self.expect_punct("(")
            ideal.append(self.poly_expr())
            while self.at_punct(","):
                self.next()
                ideal.append(self.poly_expr())
            self.expect_punct(")")
        self.expect_punct(";")
        return RingDecl(name, p, tuple(variables), tuple(ideal), kw.line, kw.col)

    def module_decl(self):
        kw = self.next()
        name = self.expect_name("module name").value
        self.expect_punct("=")
        what = self.expect_name("'coker', 'submodule' or 'quotient'")
        if what.value == "coker":
            rows = self.matrix_literal()
            degs = self.degree_list()
            self.expect_punct(";")
            return ModuleDecl(name, "coker", rows=rows, degrees=degs, line=kw.line, col=kw.col)
        if what.value in ("submodule", "quotient"):
            self.expect_punct("(")
            gens = [self.gen_vector(scalar_only=what.value == "quotient")]
            while self.at_punct(","):
                self.next()
                gens.append(self.gen_vector(scalar_only=what.value == "quotient"))
            self.expect_punct(")")
            self.expect_punct(";")
            return ModuleDecl(name, what.value, gens=tuple(gens), line=kw.line, col=kw.col)
        raise errors.ParseError(
            f"expected 'coker', 'submodule' or 'quotient', got {what.value!r}",
            what.line, what.col,
        )

    def matrix_decl(self):
        kw = self.next()
        name = self.expect_name("matrix name").value
        self.expect_punct("=")
        rows = self.matrix_literal()
        degs = self.degree_list()
        self.expect_punct(";")
        return MatrixDecl(name, rows, degs, kw.line, kw.col)

    def gen_vector(self, scalar_only=False):
        if self.at_punct("[") and not scalar_only:
            self.next()
            comps = [self.poly_expr()]
            while self.at_punct(","):
                self.next()
                comps.append(self.poly_expr())
            self.expect_punct("]")
            return tuple(comps)
        return (self.poly_expr(),)

    def matrix_literal(self):
        self.expect_punct("[")
        rows = [self.matrix_row()]
        while self.at_punct(","):
            self.next()
            rows.append(self.matrix_row())
        self.expect_punct("]")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                t = self.peek()
                raise errors.ParseError("ragged matrix rows", t.line, t.col)
        return tuple(rows)

    def matrix_row(self):
        self.expect_punct("[")
        row = [self.poly_expr()]
        while self.at_punct(","):
            self.next()
            row.append(self.poly_expr())
        self.expect_punct("]")
        return tuple(row)

    def degree_list(self):
        t = self.expect_name("'degrees'")
        if t.value != "degrees":
            raise errors.ParseError("expected 'degrees'", t.line, t.col)
        self.expect_punct("(")
        sign = -1 if self.at_punct("-") and (self.next() or True) else 1
        degs = [sign * self.expect_num()]
        while self.at_punct(","):
            self.next()
            sign = -1 if self.at_punct("-") and (self.next() or True) else 1
            degs.append(sign * self.expect_num())
        self.expect_punct(")")
        return tuple(degs)

    def command(self):
        kw = self.next()
        verb = kw.value
        if verb == "check":
            kind = self.expect_name("check kind")
            word = kind.value
            while self.at_punct("-"):
                self.next()
                word += "-" + self.expect_name("check kind").value
            if word not in CHECK_KINDS:
                raise errors.ParseError(f"unknown check {word!r}", kind.line, kind.col)
            verb = f"check {word}"
        names = []
        params = []
        while not self.at_punct(";"):
            t = self.peek()
            if t.kind == "name" and self.peek(1).kind == "punct" and self.peek(1).value == "=":
                key = self.next().value
                self.next()  # '='
                if key == "f":
                    params.append((key, self.poly_expr()))
                else:
                    sign = -1 if self.at_punct("-") and (self.next() or True) else 1
                    params.append((key, sign * self.expect_num()))
            elif t.kind == "name":
                names.append(self.next().value)
            else:
                raise errors.ParseError(f"unexpected {t.value!r} in command", t.line, t.col)
        self.expect_punct(";")
        return Command(verb, tuple(names), tuple(params), kw.line, kw.col)

    # -- polynomial expressions ---------------------------------------------------

    def poly_expr(self):
        start_tok = self.peek()
        start_idx = self.i
        node = self._expr()
        src = self._render(start_idx, self.i)
        return PolyExpr(node, src)

    def _render(self, start, end):
        parts = []
        for t in self.toks[start:end]:
            if t.kind == "num":
                parts.append(str(t.value))
            elif t.kind == "name":
                parts.append(t.value)
            else:
                parts.append(str(t.value))
        out = ""
        for idx, s in enumerate(parts):
            if idx and (s[0].isalnum() or s[0] == "_") and (out[-1].isalnum() or out[-1] == "_"):
                out += " "
            out += s
        return out

    def _expr(self):
        node = self._term()
        while self.at_punct("+") or self.at_punct("-"):
            op = self.next().value
            rhs = self._term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def _term(self):
        node = self._factor()
        while True:
            t = self.peek()
            if t.kind == "punct" and t.value == "*":
                self.next()
                node = ("mul", node, self._factor())
            elif t.kind in ("num", "name") or (t.kind == "punct" and t.value == "("):
                node = ("mul", node, self._factor())
            else:
                return node

    def _factor(self):
        neg = False
        while self.at_punct("+") or self.at_punct("-"):
            if self.next().value == "-":
                neg = not neg
        node = self._atom()
        while self.at_punct("^"):
            self.next()
            e = self.expect_num()
            node = ("pow", node, e)
        return ("neg", node) if neg else node

    def _atom(self):
        t = self.next()
        if t.kind == "num":
            return ("num", t.value)
        if t.kind == "name":
            return ("var", t.value, t.line, t.col)
        if t.kind == "punct" and t.value == "(":
            node = self._expr()
            self.expect_punct(")")
            return node
        raise errors.ParseError(f"unexpected {t.value!r} in expression", t.line, t.col)


def parse_script(text):
    """Parse a session script; raises ParseError with line/column on bad input."""
    return Parser(tokenize(text)).script()
