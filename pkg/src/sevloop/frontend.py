"""Text front-ends: the C-like mini language and the `.cts` rule format.

Both front-ends pre-tighten strict integer comparisons (`a < b` lowers to
`a <= b-1`), so the rational-arithmetic back-end sees no strict guards
from program text. Functions, arrays and pointers are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .constraints import Atom, Conjunction, LinearTerm
from .program import (Assign, Assume, Cond, ErrorStmt, Expr, If, Program,
                      ProgramPoint, Rule, Stmt, TransitionSystem, While, pt,
                      ERROR, lower)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, punct, eof
    text: str
    line: int
    col: int


_PUNCT = ("&&", "==", "!=", "<=", ">=", "++", "--", "+=", "-=",
          "<", ">", "=", "+", "-", "*", "/", "(", ")", "{", "}", ";", ":", ",", "!", "'")

_KEYWORDS = {"if", "else", "while", "assume", "error", "int"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i) or text.startswith("#", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise ParseError("unterminated comment", line, col)
            skipped = text[i:end + 2]
            line += skipped.count("\n")
            col = (len(skipped) - skipped.rfind("\n")) if "\n" in skipped else col + len(skipped)
            i = end + 2
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "eof":
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)


# ---------------------------------------------------------------------------
# shared linear-expression parsing


def _parse_linexp(cur: _Cursor, primed_ok: bool = False) -> tuple[Expr, frozenset[str]]:
    """Parse sums of products of integers and names. Returns the expression
    plus the set of names that appeared primed (CTS format only)."""
    coeffs: dict[str, Fraction] = {}
    const = Fraction(0)
    primed: set[str] = set()

    def add(name: Optional[str], k: Fraction) -> None:
        nonlocal const
        if name is None:
            const += k
        else:
            coeffs[name] = coeffs.get(name, Fraction(0)) + k

    sign = Fraction(1)
    first = True
    while True:
        t = cur.peek()
        if not first:
            if t.text == "+":
                cur.next()
                sign = Fraction(1)
            elif t.text == "-":
                cur.next()
                sign = Fraction(-1)
            else:
                break
        else:
            if t.text == "-":
                cur.next()
                sign = Fraction(-1)
            elif t.text == "+":
                cur.next()
        first = False
        # one product: int ['*' factor] | name ["'"] ['*' factor]
        k = sign
        name: Optional[str] = None
        while True:
            t = cur.peek()
            if t.kind == "int":
                cur.next()
                k *= int(t.text)
            elif t.kind == "name":
                if t.text in _KEYWORDS:
                    raise cur.error(f"unexpected keyword {t.text!r} in expression")
                if name is not None:
                    raise cur.error("nonlinear product of variables")
                cur.next()
                name = t.text
                if cur.peek().text == "'":
                    if not primed_ok:
                        raise cur.error("primed variables are not allowed here")
                    cur.next()
                    primed.add(name)
                    name = name + "'"
                if cur.peek().text == "(":
                    raise cur.error(f"function calls are not supported: {t.text!r}")
            else:
                raise cur.error("expected integer or variable")
            if cur.accept("*"):
                continue
            break
        add(name, k)
    return Expr.make(coeffs, const), frozenset(primed)


_REL_OPS = ("==", "!=", "<=", ">=", "<", ">")


def _parse_comparison(cur: _Cursor, primed_ok: bool = False
                      ) -> tuple[Expr, str, Expr, frozenset[str]]:
    lhs, p1 = _parse_linexp(cur, primed_ok)
    t = cur.peek()
    if t.text == "=" and primed_ok:
        # single '=' is accepted as equality in rule templates
        cur.next()
        op = "=="
    elif t.text in _REL_OPS:
        cur.next()
        op = t.text
    else:
        raise cur.error("expected comparison operator")
    rhs, p2 = _parse_linexp(cur, primed_ok)
    return lhs, op, rhs, p1 | p2


def _parse_cond(cur: _Cursor) -> Cond:
    comparisons: list[tuple[Expr, str, Expr]] = []
    while True:
        if cur.accept("!"):
            t = cur.peek()
            if t.kind != "name":
                raise cur.error("expected variable after '!'")
            cur.next()
            comparisons.append((Expr.make({t.text: 1}), "==", Expr.make({}, 0)))
        else:
            lhs, _ = _parse_linexp(cur)
            t = cur.peek()
            if t.text in _REL_OPS:
                cur.next()
                rhs, _ = _parse_linexp(cur)
                comparisons.append((lhs, t.text, rhs))
            else:
                # bare expression: truthiness means nonzero
                comparisons.append((lhs, "!=", Expr.make({}, 0)))
        if not cur.accept("&&"):
            break
    return Cond(tuple(comparisons))


# ---------------------------------------------------------------------------
# mini language


def parse_mini(text: str) -> Program:
    """Parse the C-like fragment: declarations, assignments (with ++/--/+=/-=
    sugar), if(*)/if(cond)/while(cond), assume, error(), numeric labels."""
    cur = _Cursor(tokenize(text))
    decls: list[str] = []
    while cur.peek().text == "int":
        cur.next()
        while True:
            t = cur.peek()
            if t.kind != "name":
                raise cur.error("expected variable name in declaration")
            cur.next()
            decls.append(t.text)
            if not cur.accept(","):
                break
        cur.expect(";")
    body, exit_label = _parse_stmts(cur, until="eof")
    t = cur.peek()
    if t.kind != "eof":
        raise cur.error(f"unexpected trailing input {t.text!r}")
    return Program(tuple(decls), tuple(body), exit_label)


def _parse_stmts(cur: _Cursor, until: str) -> tuple[list[Stmt], Optional[int]]:
    out: list[Stmt] = []
    exit_label: Optional[int] = None
    while True:
        t = cur.peek()
        if (until == "eof" and t.kind == "eof") or (until != "eof" and t.text == until):
            break
        label: Optional[int] = None
        if t.kind == "int" and cur.peek(1).text == ":":
            cur.next()
            cur.next()
            label = int(t.text)
            t = cur.peek()
            if (until == "eof" and t.kind == "eof") or (until != "eof" and t.text == until):
                exit_label = label  # trailing label names the exit point
                break
        out.append(_parse_stmt(cur, label))
    return out, exit_label


def _parse_stmt(cur: _Cursor, label: Optional[int]) -> Stmt:
    t = cur.peek()
    if t.kind == "int" and cur.peek(1).text == ":":
        if label is not None:
            raise cur.error("statement carries two labels")
        cur.next()
        cur.next()
        return _parse_stmt(cur, int(t.text))
    if t.text == "{":
        raise cur.error("blocks are only allowed as if/while bodies")
    if t.text == "if":
        cur.next()
        cur.expect("(")
        cond: Optional[Cond]
        if cur.accept("*"):
            cond = None
        else:
            cond = _parse_cond(cur)
        cur.expect(")")
        then = _parse_body(cur)
        orelse: tuple[Stmt, ...] = ()
        if cur.peek().text == "else":
            cur.next()
            orelse = _parse_body(cur)
        elif cur.peek().kind == "int" and cur.peek(1).text == ":" and \
                cur.peek(2).text == "else":
            # labeled else branch: `3: else z=999;`
            lbl = int(cur.next().text)
            cur.next()
            cur.next()
            orelse = _parse_labeled_body(cur, lbl)
        return If(label, cond, then, orelse)
    if t.text == "while":
        cur.next()
        cur.expect("(")
        cond = _parse_cond(cur)
        cur.expect(")")
        body = _parse_body(cur)
        return While(label, cond, body)
    if t.text == "assume":
        cur.next()
        cur.expect("(")
        cond = _parse_cond(cur)
        cur.expect(")")
        cur.expect(";")
        return Assume(label, cond)
    if t.text == "error":
        cur.next()
        cur.expect("(")
        cur.expect(")")
        cur.expect(";")
        return ErrorStmt(label)
    if t.kind == "name":
        if t.text in ("for", "do", "return", "goto"):
            raise cur.error(f"unsupported statement {t.text!r}")
        cur.next()
        name = t.text
        nxt = cur.peek()
        if nxt.text == "(":
            raise cur.error(f"function calls are not supported: {name!r}")
        if nxt.text == "[":
            raise cur.error("arrays are not supported")
        if cur.accept("++"):
            cur.expect(";")
            return Assign(label, name, Expr.make({name: 1}, 1))
        if cur.accept("--"):
            cur.expect(";")
            return Assign(label, name, Expr.make({name: 1}, -1))
        if cur.accept("+="):
            e, _ = _parse_linexp(cur)
            cur.expect(";")
            return Assign(label, name, _expr_add(Expr.make({name: 1}), e))
        if cur.accept("-="):
            e, _ = _parse_linexp(cur)
            cur.expect(";")
            return Assign(label, name, _expr_add(Expr.make({name: 1}), _expr_neg(e)))
        cur.expect("=")
        e, _ = _parse_linexp(cur)
        cur.expect(";")
        return Assign(label, name, e)
    raise cur.error(f"unexpected token {t.text!r}")


def _parse_body(cur: _Cursor) -> tuple[Stmt, ...]:
    if cur.accept("{"):
        stmts, trailing = _parse_stmts(cur, until="}")
        cur.expect("}")
        if trailing is not None:
            raise cur.error("trailing label inside a block")
        return tuple(stmts)
    return (_parse_stmt(cur, None),)


def _parse_labeled_body(cur: _Cursor, label: int) -> tuple[Stmt, ...]:
    stmt = _parse_stmt(cur, label)
    return (stmt,)


def _expr_add(a: Expr, b: Expr) -> Expr:
    coeffs = dict(a.coeffs)
    for n, c in b.coeffs:
        coeffs[n] = coeffs.get(n, Fraction(0)) + c
    return Expr.make(coeffs, a.const + b.const)


def _expr_neg(a: Expr) -> Expr:
    return Expr.make({n: -c for n, c in a.coeffs}, -a.const)


# ---------------------------------------------------------------------------
# CTS format


def parse_cts(text: str) -> TransitionSystem:
    """Parse the line-oriented rule format.

    Header: `vars x y z;` then `init 0;`, optionally `frame auto;`. Each
    `trans <pt> <pt|error> { atom && atom }` names source variables plain and
    target variables primed. With `frame auto`, variables without a primed
    occurrence get an implicit frame equality (declaration order, placed
    before the explicit atoms).
    """
    cur = _Cursor(tokenize(text))
    cur.expect("vars")
    names: list[str] = []
    while not cur.accept(";"):
        t = cur.peek()
        if t.kind != "name":
            raise cur.error("expected variable name")
        cur.next()
        names.append(t.text)
    cur.expect("init")
    t = cur.peek()
    if t.kind != "int":
        raise cur.error("expected initial point number")
    cur.next()
    initial = int(t.text)
    cur.expect(";")
    frame_auto = False
    if cur.peek().text == "frame":
        cur.next()
        cur.expect("auto")
        cur.expect(";")
        frame_auto = True

    n = len(names)
    slot_of = {nm: i for i, nm in enumerate(names)}
    slot_of.update({nm + "'": n + i for i, nm in enumerate(names)})

    rules: list[Rule] = []
    while cur.peek().text == "trans":
        cur.next()
        t = cur.peek()
        if t.kind != "int":
            raise cur.error("expected source point")
        cur.next()
        src = pt(int(t.text))
        t = cur.peek()
        if t.text == "error":
            cur.next()
            dst = ERROR
        elif t.kind == "int":
            cur.next()
            dst = pt(int(t.text))
        else:
            raise cur.error("expected target point or 'error'")
        cur.expect("{")
        atoms: list[Atom] = []
        primed_used: set[str] = set()
        if not cur.accept("}"):
            while True:
                lhs, op, rhs, primed = _parse_comparison(cur, primed_ok=True)
                for nm in lhs.names() | rhs.names():
                    base = nm[:-1] if nm.endswith("'") else nm
                    if base not in slot_of:
                        raise cur.error(f"undeclared variable {base!r}")
                primed_used |= primed
                atoms.append(_cts_atom(lhs, op, rhs, slot_of))
                if not cur.accept("&&"):
                    break
            cur.expect("}")
        if frame_auto:
            framed = [Atom.cmp(LinearTerm.var(n + i), "==", LinearTerm.var(i))
                      for i, nm in enumerate(names) if nm not in primed_used]
            atoms = framed + atoms
        rules.append(Rule(src, dst, Conjunction.of(atoms), index=len(rules)))
    t = cur.peek()
    if t.kind != "eof":
        raise cur.error(f"unexpected token {t.text!r}")
    return TransitionSystem(tuple(names), tuple(rules), pt(initial))


def _cts_atom(lhs: Expr, op: str, rhs: Expr, slot_of: dict[str, int]) -> Atom:
    tl = LinearTerm.make({slot_of[nm]: c for nm, c in lhs.coeffs}, lhs.const)
    tr = LinearTerm.make({slot_of[nm]: c for nm, c in rhs.coeffs}, rhs.const)
    if op == "<":
        return Atom.cmp(tl, "<=", tr.add(LinearTerm.const_term(-1)))
    if op == ">":
        return Atom.cmp(tl, ">=", tr.add(LinearTerm.const_term(1)))
    return Atom.cmp(tl, op, tr)


def dump_cts(ts: TransitionSystem) -> str:
    """Render a transition system in the CTS format with fully explicit
    templates (no `frame auto`), preserving rule and atom order."""
    from .constraints import format_atom

    n = len(ts.vars)
    names: dict[int, str] = {}
    for i, nm in enumerate(ts.vars):
        names[i] = nm
        names[n + i] = nm + "'"
    lines = [f"vars {' '.join(ts.vars)};", f"init {ts.initial};"]
    for r in ts.rules:
        body = " && ".join(format_atom(a, names) for a in r.template.atoms)
        lines.append(f"trans {r.from_pt} {r.to_pt} {{ {body} }}".replace("{  }", "{ }"))
    return "\n".join(lines) + "\n"
