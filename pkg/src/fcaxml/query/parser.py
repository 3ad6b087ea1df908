"""Parser for the XQuery subset.

Two query shapes are accepted::

    doc(bib.xml)/bib/book[1]/(publisher, author)
    for $b in doc(bib.xml)/bib/book where $b/author = "Daniel Glazman" return $b

Predicates are one-based on the surface and stored zero-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import GrammarError, UnsupportedFeature


@dataclass(frozen=True)
class Step:
    tag: str
    position: int | None = None  # zero-based; None matches every position

    def __str__(self) -> str:
        return self.tag if self.position is None else f"{self.tag}[{self.position + 1}]"


Path = tuple[Step, ...]


def path_str(path: Path) -> str:
    return "/".join(str(s) for s in path)


@dataclass(frozen=True)
class Conditional:
    path: Path
    value: str


@dataclass(frozen=True)
class ParsedQuery:
    """``return_paths`` holds relative paths; the empty path means the node itself."""

    form: str  # "path" or "flwor"
    source_doc: str
    search_path: Path
    conditional: Conditional | None = None
    return_paths: tuple[Path, ...] = ((),)
    var: str | None = None
    doc_function: str = "doc"

    def __post_init__(self):
        if not self.search_path:
            raise GrammarError("search path must not be empty")
        if self.conditional is not None and not self.conditional.value:
            raise GrammarError("comparison value must not be empty")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<string>"[^"]*")
  | (?P<var>\$[A-Za-z_][\w.\-]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][\w.\-]*)
  | (?P<unsupported>//|::|!=|<=|>=|[@*<>|+{}':])
  | (?P<punct>[/()\[\],=;])
""", re.VERBOSE)

_NAME = re.compile(r"[A-Za-z_][\w.\-]*")
_UNSUPPORTED_WORDS = {"let", "order", "by", "some", "every", "if", "then", "else",
                      "and", "or", "not", "ascending", "descending", "satisfies",
                      "count", "text", "contains", "union", "intersect", "except"}
_DOC_FUNCTIONS = {"doc", "document"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            if text[i] == '"':
                raise GrammarError("unterminated string literal", i)
            raise GrammarError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind == "unsupported":
            raise UnsupportedFeature(f"{m.group()!r} is not supported", i)
        if kind != "ws":
            tokens.append(_Tok(kind, m.group(), i))
        i = m.end()
    tokens.append(_Tok("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> _Tok:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def fail(self, expected: str):
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise GrammarError(f"expected {expected}, found {found}", tok.pos)

    def advance(self) -> _Tok:
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("punct", "name") and self.tok.text.lower() == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(repr(text))

    def keyword(self, word: str) -> bool:
        return self.tok.kind == "name" and self.tok.text.lower() == word

    def name(self) -> str:
        if self.tok.kind != "name":
            self.fail("a name")
        word = self.tok.text
        if word.lower() in _UNSUPPORTED_WORDS and self.peek().text in ("(", "$"):
            raise UnsupportedFeature(f"{word!r} is not supported", self.tok.pos)
        return self.advance().text

    def step(self) -> Step:
        tag = self.name()
        if self.tok.text == "(" and self.tok.kind == "punct":
            raise UnsupportedFeature(f"function {tag}() is not supported", self.tok.pos)
        if self.accept("["):
            if self.tok.kind != "int":
                if self.tok.kind in ("name", "var", "string"):
                    raise UnsupportedFeature("only integer predicates are supported", self.tok.pos)
                self.fail("an integer position")
            tok = self.advance()
            k = int(tok.text)
            if k < 1:
                raise GrammarError("positions are one-based", tok.pos)
            self.expect("]")
            return Step(tag, k - 1)
        return Step(tag)

    def path(self, allow_projection: bool = False):
        steps: list[Step] = []
        if self.tok.text != "/":
            self.fail("'/'")
        while self.tok.text == "/" and self.tok.kind == "punct":
            if allow_projection and self.peek().text == "(":
                break
            self.advance()
            steps.append(self.step())
        return tuple(steps)

    def doc_fn(self) -> tuple[str, str]:
        if not (self.tok.kind == "name" and self.tok.text.lower() in _DOC_FUNCTIONS):
            if self.tok.kind == "name" and self.peek().text == "(":
                raise UnsupportedFeature(f"function {self.tok.text}() is not supported", self.tok.pos)
            self.fail("doc(...) or document(...)")
        fn = self.advance().text.lower()
        self.expect("(")
        if self.tok.kind == "string":
            doc = self.advance().text[1:-1]
        else:
            doc = self.name()
        self.expect(")")
        return fn, doc

    def var(self) -> str:
        if self.tok.kind != "var":
            self.fail("a variable")
        return self.advance().text[1:]

    def bound_var(self, expected: str):
        pos = self.tok.pos
        name = self.var()
        if name != expected:
            raise GrammarError(f"unbound variable ${name}", pos)

    def finish(self):
        self.accept(";")
        if self.tok.kind != "eof":
            if self.tok.kind == "name" and self.tok.text.lower() in _UNSUPPORTED_WORDS:
                raise UnsupportedFeature(f"{self.tok.text!r} is not supported", self.tok.pos)
            self.fail("end of query")

    def query(self) -> ParsedQuery:
        if self.tok.kind == "eof":
            raise GrammarError("empty query", 0)
        if self.keyword("for"):
            return self.flwor()
        if self.tok.kind == "name" and self.tok.text.lower() in _UNSUPPORTED_WORDS:
            raise UnsupportedFeature(f"{self.tok.text!r} is not supported", self.tok.pos)
        return self.path_query()

    def path_query(self) -> ParsedQuery:
        fn, doc = self.doc_fn()
        search = self.path(allow_projection=True)
        returns: tuple[Path, ...] = ((),)
        if self.tok.text == "/" and self.peek().text == "(":
            self.advance()
            self.advance()
            names = [self.name()]
            while self.accept(","):
                names.append(self.name())
            self.expect(")")
            returns = tuple((Step(n),) for n in names)
        self.finish()
        return ParsedQuery("path", doc, search, None, returns, None, fn)

    def flwor(self) -> ParsedQuery:
        self.expect("for")
        var = self.var()
        self.expect("in")
        fn, doc = self.doc_fn()
        search = self.path()
        conditional = None
        if self.keyword("where"):
            self.advance()
            self.bound_var(var)
            rel = self.path()
            self.expect("=")
            if self.tok.kind != "string":
                self.fail("a quoted string")
            tok = self.advance()
            value = tok.text[1:-1]
            if not value.strip():
                raise GrammarError("comparison value must not be empty", tok.pos)
            conditional = Conditional(rel, value)
        if self.tok.kind == "name" and self.tok.text.lower() in _UNSUPPORTED_WORDS:
            raise UnsupportedFeature(f"{self.tok.text!r} is not supported", self.tok.pos)
        if not self.keyword("return"):
            self.fail("'return'")
        self.advance()
        self.bound_var(var)
        rel: Path = ()
        if self.tok.text == "/" and self.tok.kind == "punct":
            rel = self.path()
        self.finish()
        return ParsedQuery("flwor", doc, search, conditional, (rel,), var, fn)


def parse_query(text: str) -> ParsedQuery:
    if not text or not text.strip():
        raise GrammarError("empty query", 0)
    return _Parser(text).query()


def unparse(q: ParsedQuery) -> str:
    name = q.source_doc if _NAME.fullmatch(q.source_doc) else f'"{q.source_doc}"'
    doc = f"{q.doc_function}({name})"
    search = "/" + path_str(q.search_path)
    if q.form == "path":
        text = doc + search
        if q.return_paths != ((),):
            text += "/(" + ", ".join(path_str(p) for p in q.return_paths) + ")"
        return text
    parts = [f"for ${q.var} in {doc}{search}"]
    if q.conditional is not None:
        parts.append(f'where ${q.var}/{path_str(q.conditional.path)} = "{q.conditional.value}"')
    ret = q.return_paths[0]
    parts.append(f"return ${q.var}" + ("/" + path_str(ret) if ret else ""))
    return " ".join(parts)
