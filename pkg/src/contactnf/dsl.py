"""A small text language for polynomial differential forms.

    vars: theta, x1, x2
    theta*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' integer)?
    atom   := rational | symbol | 'd' '(' symbol ')' | '(' expr ')'

Division is allowed only by constant subexpressions.  Without a ``vars:``
header, variables are taken in order of appearance, ``theta`` first.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .exterior import KForm, sort_sign
from .jets import DEFAULT_DEGREE, Jet
from .scalar import EXACT

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text):
    toks = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m or m.end() == pos:
                col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
            col = m.start(m.lastindex) + 1
            if m.group(1):
                toks.append(Token("num", m.group(1), lineno, col))
            elif m.group(2):
                toks.append(Token("sym", m.group(2), lineno, col))
            else:
                op = "^" if m.group(3) == "**" else m.group(3)
                toks.append(Token("op", op, lineno, col))
            pos = m.end()
    lines = text.split("\n")
    toks.append(Token("end", "", len(lines), len(lines[-1]) + 1))
    return toks


# AST nodes: ("num", Fraction) ("var", name) ("d", name) ("add", a, b)
# ("sub", a, b) ("mul", a, b) ("div", a, b) ("neg", a) ("pow", a, k)
class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        self.symbols = []

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, text=None):
        t = self.toks[self.i]
        if (kind and t.kind != kind) or (text and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t.line, t.column)
        self.i += 1
        return t

    def at(self, text):
        t = self.peek()
        return t.kind == "op" and t.text == text

    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().text
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take().text
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        if self.at("-"):
            self.take()
            return ("neg", self.unary())
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.at("^"):
            self.take()
            t = self.take("num")
            if "." in t.text:
                raise ParseError("exponent must be an integer", t.line, t.column)
            node = ("pow", node, int(t.text))
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return ("num", Fraction(t.text))
        if t.kind == "sym":
            self.take()
            if t.text == "d" and self.at("("):
                self.take()
                s = self.take("sym")
                self.take("op", ")")
                self._note(s.text)
                return ("d", s.text)
            self._note(t.text)
            return ("var", t.text)
        if self.at("("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.column)

    def _note(self, name):
        if name not in self.symbols:
            self.symbols.append(name)


# evaluated values: {basis tuple (unsorted-free, sorted): {exponent: Fraction}}
def _v_add(a, b, s=1):
    out = {J: dict(p) for J, p in a.items()}
    for J, p in b.items():
        q = out.setdefault(J, {})
        for e, c in p.items():
            v = q.get(e, 0) + s * c
            if v:
                q[e] = v
            else:
                q.pop(e, None)
    return {J: p for J, p in out.items() if p}


def _v_mul(a, b):
    out = {}
    for J, p in a.items():
        for K, q in b.items():
            sign, L = sort_sign(J + K)
            if sign == 0:
                continue
            r = out.setdefault(L, {})
            for e, c in p.items():
                for f, g in q.items():
                    h = tuple(x + y for x, y in zip(e, f))
                    v = r.get(h, 0) + sign * c * g
                    if v:
                        r[h] = v
                    else:
                        r.pop(h, None)
    return {J: p for J, p in out.items() if p}


def _const_value(v):
    if not v:
        return Fraction(0)
    if set(v) != {()} or any(any(e) for e in v[()]):
        return None
    return v[()].get(tuple(0 for _ in next(iter(v[()]))), Fraction(0))


class _Evaluator:
    """Evaluates to ``(value, grade)``; grade is None for a literal zero."""

    def __init__(self, names):
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.n = len(names)
        self.zero_e = (0,) * self.n

    def const(self, c):
        return ({(): {self.zero_e: Fraction(c)}} if c else {}), (0 if c else None)

    def eval(self, node):
        kind = node[0]
        if kind == "num":
            return self.const(node[1])
        if kind == "var":
            e = [0] * self.n
            e[self.index[node[1]]] = 1
            return {(): {tuple(e): Fraction(1)}}, 0
        if kind == "d":
            return {(self.index[node[1]],): {self.zero_e: Fraction(1)}}, 1
        if kind in ("add", "sub"):
            (a, ga), (b, gb) = self.eval(node[1]), self.eval(node[2])
            if ga is not None and gb is not None and ga != gb:
                raise ParseError("expression mixes forms of different degree")
            return _v_add(a, b, 1 if kind == "add" else -1), (ga if ga is not None else gb)
        if kind == "neg":
            a, ga = self.eval(node[1])
            return _v_add({}, a, -1), ga
        if kind == "mul":
            (a, ga), (b, gb) = self.eval(node[1]), self.eval(node[2])
            g = None if ga is None and gb is None else (ga or 0) + (gb or 0)
            return _v_mul(a, b), g
        if kind == "div":
            den, gd = self.eval(node[2])
            den = _const_value(den) if gd in (0, None) else None
            if den is None:
                raise ParseError("division by a non-constant expression")
            if den == 0:
                raise ParseError("division by zero")
            num, gn = self.eval(node[1])
            return {J: {e: c / den for e, c in p.items()} for J, p in num.items()}, gn
        if kind == "pow":
            base, gb = self.eval(node[1])
            acc, g = self.const(1)
            for _ in range(node[2]):
                acc = _v_mul(acc, base)
                g = g + gb if gb is not None else None
            return acc, g
        raise ParseError(f"unknown node {kind}")


def _split_header(text):
    names = None
    body = []
    for line in text.splitlines():
        s = line.split("#", 1)[0].strip()
        if s.lower().startswith("vars:"):
            names = [v.strip() for v in s[5:].split(",") if v.strip()]
            body.append("")
        else:
            body.append(line)
    return names, "\n".join(body)


def parse_form(text, degree=DEFAULT_DEGREE, names=None, field=EXACT, truncate=False):
    """Parse ``text`` into a :class:`KForm`.

    ``degree`` is the jet precision of the coefficients.  Terms above it
    raise :class:`ParseError` unless ``truncate`` is set.  Returns the form;
    use :func:`parse_form_with_names` to get the variable names too.
    """
    form, _ = parse_form_with_names(text, degree, names, field, truncate)
    return form


def parse_form_with_names(text, degree=DEFAULT_DEGREE, names=None, field=EXACT, truncate=False):
    header, body = _split_header(text)
    names = names or header
    p = _Parser(_tokenize(body))
    if p.peek().kind == "end":
        raise ParseError("empty expression", 1, 1)
    ast = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected {t.text!r}", t.line, t.column)
    if names is None:
        names = list(p.symbols)
        if "theta" in names:
            names.remove("theta")
            names.insert(0, "theta")
    for s in p.symbols:
        if s not in names:
            raise ParseError(f"unknown variable {s!r}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names")
    val, grade = _Evaluator(names).eval(ast)
    grade = grade or 0
    n = len(names)
    coeffs = {}
    for J, poly in val.items():
        terms = {}
        for e, c in poly.items():
            if sum(e) > degree:
                if truncate:
                    continue
                raise ParseError(f"term of degree {sum(e)} exceeds the precision {degree}")
            terms[e] = field(c)
        coeffs[J] = Jet(n, degree, terms, None, field)
    return KForm(grade, coeffs, n, degree + grade, None, field), names


def _rat(c, field):
    s = field.to_str(c)
    return s if "/" not in s and not s.startswith("-") else f"({s})"


def print_jet(J, names):
    if J.is_zero():
        return "0"
    parts = []
    for e, c in J.terms():
        mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
        cs = _rat(c, J.field)
        parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
    return " + ".join(parts)


def print_form(form, names=None, header=True):
    """Text that :func:`parse_form` reads back to an equal form."""
    names = names or [f"x{i}" for i in range(form.nvars)]
    parts = []
    for J, c in sorted(form.nonzero_items()):
        basis = "*".join(f"d({names[j]})" for j in J)
        co = print_jet(c, names)
        if not basis:
            parts.append(f"({co})")
        else:
            parts.append(f"({co})*{basis}")
    body = " + ".join(parts) if parts else "0"
    if form.grade and not parts:
        body = "0*" + "*".join(f"d({names[0]})" for _ in range(form.grade))
    return (f"vars: {', '.join(names)}\n" if header else "") + body
