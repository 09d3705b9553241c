"""Assignment/arithmetic expression programs compiled to stack-based assembly.

Grammar (conventional precedence, left associative):

    program   := { IDENT '=' expr ';' }
    expr      := term { ('+' | '-') term }
    term      := factor { ('*' | '/') factor }
    factor    := INT | IDENT | '-' factor | '(' expr ')'

Code generation is post-order over a two-register working set: operands
push through the STACK, operators pop two, combine, push one; each
assignment pops once into the variable's RAM word, so SP is balanced
after every statement.
"""

import re
from dataclasses import dataclass

from .errors import ExprSyntaxError, UseBeforeAssign

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op>[-+*/=();]))")


@dataclass
class ExprProgram:
    statements: list  # ordered (identifier, ast) pairs
    source: str = ""


@dataclass
class Compiled:
    assembly: str
    symbols: dict   # identifier -> RAM word address
    data_base: int


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if not m:
            raise ExprSyntaxError(f"bad character {source[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, tokens, assigned):
        self.tokens = tokens
        self.pos = 0
        self.assigned = assigned

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None, text=None):
        tok = self.tokens[self.pos]
        if (kind and tok[0] != kind) or (text and tok[1] != text):
            raise ExprSyntaxError(
                f"expected {text or kind}, got {tok[1] or 'end of input'}",
                tok[2])
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = ("bin", op, node, self.factor())
        return node

    def factor(self):
        kind, text, at = self.peek()
        if text == "-":
            self.take()
            inner = self.factor()
            if inner[0] == "num":  # fold unary minus on literals
                return ("num", -inner[1])
            return ("neg", inner)
        if text == "(":
            self.take()
            node = self.expr()
            self.take(text=")")
            return node
        if kind == "num":
            self.take()
            return ("num", int(text))
        if kind == "ident":
            self.take()
            if text not in self.assigned:
                raise UseBeforeAssign(
                    f"identifier {text!r} used before assignment")
            return ("var", text)
        raise ExprSyntaxError(
            f"expected a value, got {text or 'end of input'}", at)


def parse_expr(source: str) -> ExprProgram:
    tokens = _tokenize(source)
    assigned = set()
    parser = _Parser(tokens, assigned)
    statements = []
    while parser.peek()[0] != "eof":
        name = parser.take("ident")[1]
        parser.take(text="=")
        ast = parser.expr()
        parser.take(text=";")
        statements.append((name, ast))
        assigned.add(name)
    if not statements:
        raise ExprSyntaxError("empty program", 0)
    return ExprProgram(statements, source)


def compile_program(program: ExprProgram, config, data_base=None) -> Compiled:
    """Emit assembly text; variables live at sequential RAM word addresses."""
    if data_base is None:
        data_base = config.ram_word_count // 2
    stride = max(1, config.register_width_bits // config.ram_word_bits)
    symbols = {}
    lines = []

    def addr(name):
        if name not in symbols:
            symbols[name] = data_base + len(symbols) * stride
        return symbols[name]

    def gen(node):
        if node[0] == "num":
            lines.append(f"LDI R0,{node[1]};")
            lines.append("PSH R0;")
        elif node[0] == "var":
            lines.append(f"LDA R0,{addr(node[1])};")
            lines.append("PSH R0;")
        elif node[0] == "neg":
            gen(node[1])
            lines.append("POP R0;")
            lines.append("NEG R0;")
            lines.append("PSH R0;")
        else:
            _, op, left, right = node
            gen(left)
            gen(right)
            lines.append("POP R1;")
            lines.append("POP R0;")
            mnem = {"+": "ADD", "-": "SUB", "*": "MUL", "/": "DIV"}[op]
            lines.append(f"{mnem} R0,R1;")
            lines.append("PSH R0;")

    for name, ast in program.statements:
        gen(ast)
        lines.append("POP R0;")
        lines.append(f"STA R0,{addr(name)};")
    lines.append("HLT;")
    return Compiled("\n".join(lines) + "\n", symbols, data_base)


def compile_source(source: str, config, data_base=None) -> Compiled:
    return compile_program(parse_expr(source), config, data_base)
