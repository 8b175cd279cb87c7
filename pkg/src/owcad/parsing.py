"""Polynomial text parser.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := integer | ident | '(' expr ')'

Identifiers must be declared in the variable order; integer literals are
arbitrary size.  The canonical printer's output parses back to the same
polynomial (parse -> print -> parse is a fixed point).
"""

from __future__ import annotations

from .polyring import Context, MPoly, PolyError


class ParseError(PolyError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__("%s at line %d, column %d" % (message, line, column))


class _Lexer:
    __slots__ = ("text", "pos", "line", "col", "tokens")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg: str):
        raise ParseError(msg, self.line, self.col)

    def tokenize(self) -> list:
        out = []
        text = self.text
        n = len(text)
        while self.pos < n:
            c = text[self.pos]
            if c == "\n":
                self.pos += 1
                self.line += 1
                self.col = 1
                continue
            if c.isspace():
                self.pos += 1
                self.col += 1
                continue
            if c in "+-*^()":
                out.append((c, c, self.line, self.col))
                self.pos += 1
                self.col += 1
                continue
            if c.isdigit():
                start = self.pos
                while self.pos < n and text[self.pos].isdigit():
                    self.pos += 1
                lit = text[start : self.pos]
                out.append(("int", lit, self.line, self.col))
                self.col += self.pos - start
                continue
            if c.isalpha() or c == "_":
                start = self.pos
                while self.pos < n and (text[self.pos].isalnum() or text[self.pos] == "_"):
                    self.pos += 1
                out.append(("ident", text[start : self.pos], self.line, self.col))
                self.col += self.pos - start
                continue
            self.error("unexpected character %r" % c)
        out.append(("end", "", self.line, self.col))
        return out


class _Parser:
    def __init__(self, tokens: list, ctx: Context):
        self.tokens = tokens
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg: str):
        kind, val, line, col = self.peek()
        raise ParseError(msg, line, col)

    def parse(self) -> MPoly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.error("trailing input")
        return p

    def expr(self) -> MPoly:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            if self.take()[0] == "-":
                sign = -1
        acc = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MPoly:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> MPoly:
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            kind, val, line, col = self.take()
            if kind != "int":
                raise ParseError("expected integer exponent", line, col)
            return b ** int(val)
        return b

    def base(self) -> MPoly:
        kind, val, line, col = self.take()
        if kind == "int":
            return MPoly.const(self.ctx, int(val))
        if kind == "ident":
            try:
                v = self.ctx.var(val)
            except PolyError:
                raise ParseError("undeclared variable %r" % val, line, col) from None
            return MPoly.gen(self.ctx, v)
        if kind == "(":
            p = self.expr()
            kind2, _, line2, col2 = self.take()
            if kind2 != ")":
                raise ParseError("expected ')'", line2, col2)
            return p
        raise ParseError("expected integer, variable, or '('", line, col)


def parse_poly(text: str, order) -> MPoly:
    """Parse a polynomial over the declared variable order."""
    ctx = order if isinstance(order, Context) else Context(tuple(order))
    tokens = _Lexer(text).tokenize()
    return _Parser(tokens, ctx).parse()
