"""Text syntax for Terms.

    term := seq
    seq  := par (";" par)*
    par  := atom ("|" atom)*
    atom := "(" term ")" | id(N) | swap | fswap | cup | cap | X | ket0 | ket1
          | bra0 | bra1 | proj | black(N,N) | white(N,N,C) | bs(C,C) | phase(R)
          | create | annihilate

``|`` binds tighter than ``;`` and both associate to the left.  ``#`` starts
a comment that runs to the end of the line.  Derived atoms are expanded into
generators on parsing; the printer only ever emits the primitive spellings.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import builders as B
from .errors import ArityError, ParseError
from .linalg import format_real
from .terms import Gen, Id, Kind, Par, Seq, Term

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[();|,+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind if kind != "punct" else m.group(), m.group(), line, pos - line_start + 1))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line, line_start = line + 1, pos + k + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


_NULLARY = {
    "swap": lambda: Gen(B.SWAP),
    "fswap": lambda: Gen(B.FSWAP),
    "cup": lambda: B.CUP,
    "cap": lambda: B.CAP,
    "X": B.x_gate,
    "ket0": B.ket0,
    "ket1": B.ket1,
    "bra0": B.bra0,
    "bra1": B.bra1,
    "proj": B.projector,
    "create": B.creation,
    "annihilate": B.annihilation,
}
_WITH_ARGS = ("id", "black", "white", "bs", "phase")
_ATOM_START = frozenset(["(", *_NULLARY, *_WITH_ARGS])


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected, message: str | None = None):
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(message or f"unexpected {what}", t.line, t.col, frozenset(expected))

    def eat(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        t = self.tok
        self.i += 1
        return t

    def term(self) -> Term:
        out = self.par()
        while self.tok.kind == ";":
            t = self.tok
            self.i += 1
            rhs = self.par()
            out = self.checked(lambda: Seq(out, rhs), t)
        return out

    def par(self) -> Term:
        out = self.atom()
        while self.tok.kind == "|":
            self.i += 1
            out = Par(out, self.atom())
        return out

    def checked(self, build, at: Token):
        try:
            return build()
        except ArityError as exc:
            raise ArityError(f"line {at.line}, column {at.col}: {exc}") from None
        except ValueError as exc:
            raise ParseError(str(exc), at.line, at.col) from None

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "(":
            self.i += 1
            inner = self.term()
            self.eat(")")
            return inner
        if t.kind != "name" or t.text not in _ATOM_START:
            self.fail(_ATOM_START)
        self.i += 1
        name = t.text
        if name in _NULLARY:
            return _NULLARY[name]()
        self.eat("(")
        if name == "id":
            n = self.nat()
            self.eat(")")
            return Id(n)
        if name == "black":
            a, b = self.nat(), self.comma_nat()
            self.eat(")")
            return B.black_vertex(a, b)
        if name == "white":
            a, b = self.nat(), self.comma_nat()
            self.eat(",")
            z = self.complex_()
            self.eat(")")
            return self.checked(lambda: B.white_vertex(a, b, z), t)
        if name == "bs":
            r = self.complex_()
            self.eat(",")
            s = self.complex_()
            self.eat(")")
            return B.beam_splitter(r, s)
        theta = self.real()
        self.eat(")")
        return B.phase(theta)

    def nat(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail({"natural number"})
        self.i += 1
        return int(t.text)

    def comma_nat(self) -> int:
        self.eat(",")
        return self.nat()

    def real(self) -> float:
        sign = 1.0
        if self.tok.kind in ("+", "-"):
            sign = -1.0 if self.tok.kind == "-" else 1.0
            self.i += 1
        t = self.tok
        if t.kind != "num":
            self.fail({"number"})
        self.i += 1
        return sign * float(t.text)

    def complex_(self) -> complex:
        first = self.real()
        if self.tok.kind == "name" and self.tok.text == "i":
            self.i += 1
            return complex(0.0, first)
        if self.tok.kind in ("+", "-"):
            second = self.real()
            if not (self.tok.kind == "name" and self.tok.text == "i"):
                self.fail({"i"})
            self.i += 1
            return complex(first, second)
        return complex(first, 0.0)


def parse(text: str) -> Term:
    p = _Parser(text)
    if p.tok.kind == "eof":
        p.fail(_ATOM_START, "empty input")
    out = p.term()
    if p.tok.kind != "eof":
        p.fail({";", "|", "end of input"})
    return out


def format_complex(z: complex) -> str:
    z = complex(z)
    re_, im = z.real, z.imag
    if im == 0:
        return format_real(re_)
    if re_ == 0:
        return format_real(im) + "i"
    im_text = format_real(im)
    return format_real(re_) + ("" if im_text.startswith("-") else "+") + im_text + "i"


_GEN_TEXT = {
    Kind.SWAP: "swap",
    Kind.FSWAP: "fswap",
    Kind.DUAL: "cup",
    Kind.DUAL_DAGGER: "cap",
    Kind.BLACK2: "black(0,2)",
    Kind.BLACK3: "black(0,3)",
}


def format_term(t: Term) -> str:
    """Canonical text; ``parse(format_term(t)) == t`` for every Term."""
    if isinstance(t, Gen):
        if t.gen.kind is Kind.WHITE:
            return f"white(0,2,{format_complex(t.gen.z)})"
        return _GEN_TEXT[t.gen.kind]
    if isinstance(t, Id):
        return f"id({t.n})"
    if isinstance(t, Seq):
        right = format_term(t.second)
        if isinstance(t.second, Seq):
            right = f"({right})"
        return f"{format_term(t.first)} ; {right}"
    left = format_term(t.left)
    if isinstance(t.left, Seq):
        left = f"({left})"
    right = format_term(t.right)
    if isinstance(t.right, (Seq, Par)):
        right = f"({right})"
    return f"{left} | {right}"


print_term = format_term
