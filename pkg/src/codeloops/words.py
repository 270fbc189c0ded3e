"""Loop-word expressions over named generators.

Grammar (strict mode):

    word := term | term '*' term
    term := prim ('^' int)*
    prim := 'z' | 'g' digits | '(' word ')'
          | '[' word ',' word ']' | '[' word ',' word ',' word ']'

'*' is deliberately not associative: "g1*g2*g3" is rejected with an
"association required" error, because silent left-association would hide
exactly the distinctions this algebra is about.  assoc="left" folds
products left-to-right instead (lossy, CLI escape hatch).

Evaluating a word in a built loop lands on an element (z, v), which is
already the normal form z g1^{r1}(g2^{r2}(...)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .loops import CentralExtensionLoop, CodedLoopElement


@dataclass(frozen=True)
class Gen:
    index: int  # 1-based


@dataclass(frozen=True)
class CentralZ:
    pass


@dataclass(frozen=True)
class Prod:
    left: "WordTree"
    right: "WordTree"


@dataclass(frozen=True)
class Pow:
    base: "WordTree"
    exponent: int


@dataclass(frozen=True)
class Comm:
    left: "WordTree"
    right: "WordTree"


@dataclass(frozen=True)
class Assoc:
    first: "WordTree"
    second: "WordTree"
    third: "WordTree"


WordTree = Union[Gen, CentralZ, Prod, Pow, Comm, Assoc]


class WordSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos
        self.text = text

    def caret_diagnostic(self) -> str:
        return "%s\n%s^" % (self.text, " " * self.pos)


_PUNCT = set("*^()[],")


def _tokenize(text: str):
    """Yields (kind, value, pos); kinds: g, z, int, punct, end."""
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            out.append((ch, ch, i))
            i += 1
            continue
        if ch == "g":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise WordSyntaxError("generator needs an index", i, text)
            out.append(("g", int(text[i + 1:j]), i))
            i = j
            continue
        if ch == "z":
            out.append(("z", "z", i))
            i += 1
            continue
        if ch == "-" or ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if text[i:j] in ("-",):
                raise WordSyntaxError("bare '-' is not a token", i, text)
            out.append(("int", int(text[i:j]), i))
            i = j
            continue
        raise WordSyntaxError("unexpected character %r" % ch, i, text)
    out.append(("end", None, n))
    return out


class _Parser:
    def __init__(self, text: str, assoc: str):
        if assoc not in ("strict", "left"):
            raise ValueError("assoc must be 'strict' or 'left'")
        self.text = text
        self.assoc = assoc
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise WordSyntaxError("expected %r, found %r" % (kind, tok[0]),
                                  tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> WordTree:
        tree = self.word()
        tok = self.peek()
        if tok[0] != "end":
            raise WordSyntaxError("trailing input", tok[2], self.text)
        return tree

    def word(self) -> WordTree:
        left = self.term()
        if self.peek()[0] != "*":
            return left
        self.take("*")
        right = self.term()
        tree = Prod(left, right)
        if self.peek()[0] == "*":
            if self.assoc == "strict":
                raise WordSyntaxError(
                    "association required: parenthesize nested products",
                    self.peek()[2], self.text)
            while self.peek()[0] == "*":
                self.take("*")
                tree = Prod(tree, self.term())
        return tree

    def term(self) -> WordTree:
        tree = self.prim()
        while self.peek()[0] == "^":
            self.take("^")
            tok = self.take("int")
            tree = Pow(tree, tok[1])
        return tree

    def prim(self) -> WordTree:
        kind, val, pos = self.peek()
        if kind == "g":
            self.take()
            return Gen(val)
        if kind == "z":
            self.take()
            return CentralZ()
        if kind == "(":
            self.take()
            inner = self.word()
            self.take(")")
            return inner
        if kind == "[":
            self.take()
            parts = [self.word()]
            while self.peek()[0] == ",":
                self.take(",")
                parts.append(self.word())
            self.take("]")
            if len(parts) == 2:
                return Comm(parts[0], parts[1])
            if len(parts) == 3:
                return Assoc(parts[0], parts[1], parts[2])
            raise WordSyntaxError("brackets take 2 or 3 arguments, got %d"
                                  % len(parts), pos, self.text)
        raise WordSyntaxError("expected a generator, 'z', '(' or '['",
                              pos, self.text)


def parse_word(text: str, assoc: str = "strict") -> WordTree:
    return _Parser(text, assoc).parse()


def eval_word(tree: WordTree, L: CentralExtensionLoop) -> CodedLoopElement:
    if isinstance(tree, Gen):
        if not 1 <= tree.index <= L.k:
            raise ValueError("unbound generator g%d (loop has dimension %d)"
                             % (tree.index, L.k))
        return L.generator(tree.index - 1)
    if isinstance(tree, CentralZ):
        return L.central_generator()
    if isinstance(tree, Prod):
        return L.mul(eval_word(tree.left, L), eval_word(tree.right, L))
    if isinstance(tree, Pow):
        return L.pow(eval_word(tree.base, L), tree.exponent)
    if isinstance(tree, Comm):
        return L.commutator(eval_word(tree.left, L), eval_word(tree.right, L))
    if isinstance(tree, Assoc):
        return L.associator(eval_word(tree.first, L),
                            eval_word(tree.second, L),
                            eval_word(tree.third, L))
    raise TypeError("not a word tree: %r" % (tree,))


def render_element(L: CentralExtensionLoop, a: CodedLoopElement) -> str:
    """The normal form string z^a g1^{r1}(g2^{r2}(...)), zero slots omitted."""
    parts = []
    if a.z:
        parts.append("z" if a.z == 1 else "z^%d" % a.z)
    slots = [(i + 1, r) for i, r in enumerate(a.v) if r]
    if slots:
        body = ""
        for i, r in reversed(slots):
            g = "g%d" % i if r == 1 else "g%d^%d" % (i, r)
            body = g if not body else "%s(%s)" % (g, body)
        parts.append(body)
    return " ".join(parts) if parts else "1"


def normal_form_string(tree: WordTree, L: CentralExtensionLoop) -> str:
    return render_element(L, eval_word(tree, L))


def render_word(tree: WordTree) -> str:
    """Parseable text for a tree (products fully parenthesized)."""
    if isinstance(tree, Gen):
        return "g%d" % tree.index
    if isinstance(tree, CentralZ):
        return "z"
    if isinstance(tree, Prod):
        return "(%s*%s)" % (render_word(tree.left), render_word(tree.right))
    if isinstance(tree, Pow):
        base = render_word(tree.base)
        if isinstance(tree.base, (Prod, Pow)):
            base = "(%s)" % base
        return "%s^%d" % (base, tree.exponent)
    if isinstance(tree, Comm):
        return "[%s,%s]" % (render_word(tree.left), render_word(tree.right))
    if isinstance(tree, Assoc):
        return "[%s,%s,%s]" % (render_word(tree.first),
                               render_word(tree.second),
                               render_word(tree.third))
    raise TypeError("not a word tree: %r" % (tree,))
