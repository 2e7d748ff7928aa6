"""Tolerant structural parser turning one Java source file into class facts.

This is not a full Java front end. It lexes the file, matches brackets, finds
the top-level class, splits the class body into members, and then walks each
method body with name-based resolution:

* an unqualified or ``this.``-qualified name is an instance-variable access if
  it names a field and is not shadowed by a parameter or local;
* an unqualified or ``this.``-qualified call resolves to a method of the same
  class when name and argument count match, otherwise it is an external call;
* calls through any other receiver are external; ``new`` expressions are
  object creations, not call sites; ``this(...)`` resolves to an own
  constructor and ``super(...)`` counts as one external call.

Nested and anonymous class bodies fold into the enclosing method: their call
sites and field accesses are attributed to it and their declarations add no
methods. Constructs the parser cannot handle are skipped with a warning in
the parse-quality report (``ClassFacts.warnings``) instead of failing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import ParseError, UnsupportedConstruct
from .facts import ClassFacts, MethodFacts, filter_methods

_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null
    """.split()
)

_MODIFIERS = frozenset(
    """
    public private protected static final abstract synchronized native
    transient volatile strictfp
    """.split()
)

_PRIMITIVES = frozenset("boolean byte char short int long float double void".split())

_OPEN = {"(": ")", "[": "]", "{": "}"}
_CLOSE = {v: k for k, v in _OPEN.items()}


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | number | string | char | op
    text: str
    line: int
    col: int
    start: int
    end: int


@dataclass(frozen=True)
class Comment:
    text: str
    start: int
    end: int
    block: bool


def lex(source: str) -> tuple[list[Token], list[Comment]]:
    """Split source into significant tokens plus a separate comment list."""
    tokens: list[Token] = []
    comments: list[Comment] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            advance(1)
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            start = i
            while i < n and source[i] != "\n":
                advance(1)
            comments.append(Comment(source[start:i], start, i, block=False))
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            start = i
            start_line, start_col = line, col
            advance(2)
            while i < n and not (source[i] == "*" and i + 1 < n and source[i + 1] == "/"):
                advance(1)
            if i >= n:
                raise ParseError("unterminated block comment", start_line, start_col)
            advance(2)
            comments.append(Comment(source[start:i], start, i, block=True))
            continue
        if ch == '"' or ch == "'":
            quote = ch
            start = i
            start_line, start_col = line, col
            advance(1)
            while i < n and source[i] != quote:
                if source[i] == "\\" and i + 1 < n:
                    advance(2)
                elif source[i] == "\n":
                    raise ParseError("unterminated literal", start_line, start_col)
                else:
                    advance(1)
            if i >= n:
                raise ParseError("unterminated literal", start_line, start_col)
            advance(1)
            tokens.append(
                Token(
                    "string" if quote == '"' else "char",
                    source[start:i],
                    start_line,
                    start_col,
                    start,
                    i,
                )
            )
            continue
        if ch.isdigit():
            start = i
            start_line, start_col = line, col
            while i < n:
                c = source[i]
                if c.isalnum() or c == "_" or c == ".":
                    if c == "." and not (i + 1 < n and (source[i + 1].isdigit() or source[i + 1] in "fFdDeE")):
                        break
                    advance(1)
                elif c in "+-" and source[i - 1] in "eEpP":
                    advance(1)
                else:
                    break
            tokens.append(Token("number", source[start:i], start_line, start_col, start, i))
            continue
        if ch.isalpha() or ch in "_$":
            start = i
            start_line, start_col = line, col
            while i < n and (source[i].isalnum() or source[i] in "_$"):
                advance(1)
            text = source[start:i]
            kind = "keyword" if text in _KEYWORDS else "ident"
            tokens.append(Token(kind, text, start_line, start_col, start, i))
            continue
        # every other character is a one-character operator/punctuation token
        tokens.append(Token("op", ch, line, col, i, i + 1))
        advance(1)
    return tokens, comments


def _match_brackets(tokens: list[Token]) -> dict[int, int]:
    """Map each (, [, { token index to its matching close index."""
    match: dict[int, int] = {}
    stack: list[int] = []
    for i, t in enumerate(tokens):
        if t.text in _OPEN:
            stack.append(i)
        elif t.text in _CLOSE:
            if not stack:
                raise ParseError(f"unmatched '{t.text}'", t.line, t.col)
            open_i = stack.pop()
            if _OPEN[tokens[open_i].text] != t.text:
                raise ParseError(
                    f"mismatched '{tokens[open_i].text}' closed by '{t.text}'", t.line, t.col
                )
            match[open_i] = i
    if stack:
        t = tokens[stack[-1]]
        raise ParseError(f"unclosed '{t.text}'", t.line, t.col)
    return match


class _MemberError(Exception):
    """Internal: a member declaration did not have the expected shape."""


@dataclass
class _RawMethod:
    name: str
    arity: int
    params: list[str]
    start_tok: int
    end_tok: int
    body: tuple[int, int] | None  # token range inside the braces, or None


@dataclass
class _Analysis:
    accessed: set[str] = field(default_factory=set)
    internal: Counter = field(default_factory=Counter)
    external: int = 0


class _ClassParser:
    def __init__(self, source: str, tokens: list[Token], match: dict[int, int]):
        self.source = source
        self.toks = tokens
        self.match = match
        self.warnings: list[str] = []

    # ---- token helpers -------------------------------------------------

    def text(self, i: int) -> str:
        return self.toks[i].text if 0 <= i < len(self.toks) else ""

    def kind(self, i: int) -> str:
        return self.toks[i].kind if 0 <= i < len(self.toks) else ""

    def _skip_generic(self, i: int) -> int:
        """From a '<' token, return the index just past its matching '>'."""
        depth = 0
        j = i
        while j < len(self.toks):
            t = self.text(j)
            if t == "<":
                depth += 1
            elif t == ">":
                depth -= 1
                if depth == 0:
                    return j + 1
            elif t in "(){};":
                break
            j += 1
        raise _MemberError("unbalanced type arguments")

    def _generic_lookahead(self, i: int) -> int | None:
        """If '<' at i opens a plausible type-argument list, index past '>'."""
        allowed_ops = {"<", ">", ",", ".", "?", "[", "]", "&"}
        depth = 0
        j = i
        while j < len(self.toks) and j - i < 80:
            t = self.toks[j]
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
                if depth == 0:
                    return j + 1
            elif t.kind == "op" and t.text not in allowed_ops:
                return None
            elif t.kind == "keyword" and t.text not in _PRIMITIVES and t.text not in ("extends", "super"):
                return None
            elif t.kind in ("string", "char", "number"):
                return None
            j += 1
        return None

    def _consume_qualified(self, i: int) -> int:
        """Index past an ident('.'ident)* chain starting at i."""
        if self.kind(i) != "ident":
            raise _MemberError("expected a name")
        i += 1
        while self.text(i) == "." and self.kind(i + 1) == "ident":
            i += 2
        return i

    def _consume_type(self, i: int) -> int:
        t = self.toks[i]
        if t.kind == "keyword" and t.text in _PRIMITIVES:
            i += 1
        elif t.kind == "ident":
            i = self._consume_qualified(i)
        else:
            raise _MemberError(f"expected a type, got '{t.text}'")
        if self.text(i) == "<":
            i = self._skip_generic(i)
        while self.text(i) == "[" and self.text(i + 1) == "]":
            i += 2
        return i

    def _arg_count(self, open_i: int) -> int:
        close = self.match[open_i]
        if close == open_i + 1:
            return 0
        count = 1
        j = open_i + 1
        angle = 0
        while j < close:
            t = self.text(j)
            if t in _OPEN:
                j = self.match[j] + 1
                continue
            if t == "<":
                angle += 1
            elif t == ">":
                angle = max(angle - 1, 0)
            elif t == "," and angle == 0:
                count += 1
            j += 1
        return count

    # ---- top-level structure -------------------------------------------

    def find_classes(self) -> list[tuple[str, str, int, int, bool]]:
        """(kind, name, class_kw_index, body_open_index, is_public) per type."""
        out = []
        i = 0
        boundary = 0
        while i < len(self.toks):
            t = self.toks[i]
            if t.kind == "keyword" and t.text in ("class", "interface", "enum"):
                if self.kind(i + 1) != "ident":
                    raise ParseError("type keyword without a name", t.line, t.col)
                name = self.text(i + 1)
                b = i + 2
                while b < len(self.toks) and self.text(b) != "{":
                    b += 1
                if b >= len(self.toks):
                    raise ParseError(f"type {name} has no body", t.line, t.col)
                is_public = any(
                    self.toks[j].text == "public" for j in range(boundary, i)
                )
                out.append((t.text, name, i, b, is_public))
                i = self.match[b] + 1
                boundary = i
            elif t.text in _OPEN:
                i = self.match[i] + 1
            else:
                i += 1
        return out

    # ---- member scanning -----------------------------------------------

    def scan_members(
        self, class_name: str, body_open: int
    ) -> tuple[list[str], list[str], list[_RawMethod]]:
        """Split a class body into instance fields, static fields, methods."""
        instance_vars: list[str] = []
        static_vars: list[str] = []
        methods: list[_RawMethod] = []
        body_close = self.match[body_open]
        i = body_open + 1
        while i < body_close:
            if self.text(i) == ";":
                i += 1
                continue
            member_start = i
            try:
                i = self._scan_one_member(
                    class_name, i, member_start, instance_vars, static_vars, methods
                )
            except _MemberError as err:
                tok = self.toks[min(member_start, len(self.toks) - 1)]
                self.warnings.append(
                    f"skipped unparseable member near line {tok.line}: {err}"
                )
                i = self._skip_to_member_boundary(member_start, body_close)
        return instance_vars, static_vars, methods

    def _skip_to_member_boundary(self, i: int, body_close: int) -> int:
        while i < body_close:
            t = self.text(i)
            if t in _OPEN:
                if t == "{":
                    return self.match[i] + 1
                i = self.match[i] + 1
                continue
            if t == ";":
                return i + 1
            i += 1
        return body_close

    def _scan_one_member(
        self,
        class_name: str,
        i: int,
        member_start: int,
        instance_vars: list[str],
        static_vars: list[str],
        methods: list[_RawMethod],
    ) -> int:
        mods: set[str] = set()
        while True:
            t = self.toks[i]
            if t.text == "@":
                i = self._consume_qualified(i + 1)
                if self.text(i) == "(":
                    i = self.match[i] + 1
                continue
            if t.kind == "keyword" and t.text in _MODIFIERS:
                mods.add(t.text)
                i += 1
                continue
            break

        t = self.toks[i]
        if t.text == "{":  # static or instance initializer block
            self.warnings.append(f"initializer block at line {t.line} skipped")
            return self.match[i] + 1
        if t.kind == "keyword" and t.text in ("class", "interface", "enum"):
            name = self.text(i + 1) if self.kind(i + 1) == "ident" else "<anonymous>"
            b = i
            while self.text(b) != "{":
                b += 1
            self.warnings.append(f"nested type {name} at line {t.line} skipped")
            return self.match[b] + 1
        if t.text == "<":  # generic method type parameters
            i = self._skip_generic(i)

        if self.kind(i) == "ident" and self.text(i + 1) == "(":
            name = self.text(i)
            if name != class_name:
                self.warnings.append(
                    f"member '{name}' at line {self.toks[i].line} looks like a"
                    " constructor of another class; treated as a method"
                )
            return self._scan_method(name, i + 1, member_start, methods)

        i = self._consume_type(i)
        if self.kind(i) != "ident":
            raise _MemberError(f"expected a member name, got '{self.text(i)}'")
        name = self.text(i)
        i += 1
        if self.text(i) == "(":
            return self._scan_method(name, i, member_start, methods)
        return self._scan_field(name, i, mods, instance_vars, static_vars)

    def _scan_method(
        self, name: str, params_open: int, member_start: int, methods: list[_RawMethod]
    ) -> int:
        params, arity = self._parse_params(params_open)
        i = self.match[params_open] + 1
        while self.text(i) == "[" and self.text(i + 1) == "]":
            i += 2
        if self.text(i) == "throws":
            i += 1
            i = self._consume_qualified(i)
            while self.text(i) == ",":
                i = self._consume_qualified(i + 1)
        if self.text(i) == ";":  # abstract or native: no body
            methods.append(_RawMethod(name, arity, params, member_start, i, None))
            return i + 1
        if self.text(i) != "{":
            raise _MemberError(f"expected a method body, got '{self.text(i)}'")
        close = self.match[i]
        methods.append(_RawMethod(name, arity, params, member_start, close, (i + 1, close)))
        return close + 1

    def _parse_params(self, open_i: int) -> tuple[list[str], int]:
        close = self.match[open_i]
        names: list[str] = []
        if close == open_i + 1:
            return names, 0
        # split on top-level commas, tracking angle depth for generic types
        segments: list[tuple[int, int]] = []
        seg_start = open_i + 1
        angle = 0
        j = open_i + 1
        while j < close:
            t = self.text(j)
            if t in _OPEN:
                j = self.match[j] + 1
                continue
            if t == "<":
                angle += 1
            elif t == ">":
                angle = max(angle - 1, 0)
            elif t == "," and angle == 0:
                segments.append((seg_start, j))
                seg_start = j + 1
            j += 1
        segments.append((seg_start, close))
        for s, e in segments:
            name = None
            k = e - 1
            while k >= s:
                if self.text(k) == "]" or self.text(k) == "[":
                    k -= 1
                    continue
                if self.kind(k) == "ident":
                    name = self.text(k)
                break
            if name is None:
                raise _MemberError("parameter without a name")
            names.append(name)
        return names, len(segments)

    def _scan_field(
        self,
        first_name: str,
        i: int,
        mods: set[str],
        instance_vars: list[str],
        static_vars: list[str],
    ) -> int:
        target = static_vars if "static" in mods else instance_vars
        target.append(first_name)
        while True:
            while self.text(i) == "[" and self.text(i + 1) == "]":
                i += 2
            if self.text(i) == "=":
                i += 1
                angle = 0
                while i < len(self.toks):
                    t = self.text(i)
                    if t in _OPEN:
                        i = self.match[i] + 1
                        continue
                    if t == "<":
                        angle += 1
                    elif t == ">":
                        angle = max(angle - 1, 0)
                    elif t == ";" or (t == "," and angle == 0):
                        break
                    i += 1
            if self.text(i) == ",":
                i += 1
                if self.kind(i) != "ident":
                    raise _MemberError("expected another field name after ','")
                target.append(self.text(i))
                i += 1
                continue
            if self.text(i) == ";":
                return i + 1
            raise _MemberError(f"unexpected '{self.text(i)}' in field declaration")


class _BodyAnalyzer:
    """Walk a method body counting field accesses and call sites."""

    def __init__(
        self,
        parser: _ClassParser,
        class_name: str,
        instance_vars: set[str],
        resolver: dict[tuple[str, int], int],
    ):
        self.p = parser
        self.class_name = class_name
        self.instance_vars = instance_vars
        self.resolver = resolver

    def analyze(self, method: _RawMethod) -> _Analysis:
        out = _Analysis()
        if method.body is not None:
            scopes = [set(method.params)]
            self._scan_code(method.body[0], method.body[1], scopes, out)
        return out

    # -- helpers ---------------------------------------------------------

    def _resolve_call(self, name: str, argc: int, out: _Analysis) -> None:
        target = self.resolver.get((name, argc))
        if target is None:
            out.external += 1
        else:
            out.internal[target] += 1

    def _field_use(self, name: str, scopes: list[set[str]], out: _Analysis) -> None:
        if name in self.instance_vars and not any(name in s for s in scopes):
            out.accessed.add(name)

    def _scan_code(self, start: int, end: int, scopes: list[set[str]], out: _Analysis) -> None:
        p = self.p
        i = start
        prev = None  # previous significant token text at this nesting level
        in_decl = False
        while i < end:
            t = p.toks[i]
            text = t.text
            if text == "{":
                scopes.append(set())
                self._scan_code(i + 1, p.match[i], scopes, out)
                scopes.pop()
                i = p.match[i] + 1
                prev = "}"
                in_decl = False
                continue
            if text in ("(", "["):
                self._scan_code(i + 1, p.match[i], scopes, out)
                i = p.match[i] + 1
                prev = ")" if text == "(" else "]"
                continue
            if text == ";":
                in_decl = False
                prev = ";"
                i += 1
                continue
            if text == "," and in_decl and p.kind(i + 1) == "ident":
                scopes[-1].add(p.text(i + 1))
                prev = p.text(i + 1)
                i += 2
                continue
            if t.kind == "keyword":
                i, prev, declared = self._keyword(i, end, scopes, out, prev)
                if declared:
                    in_decl = True
                continue
            if text == ".":
                # navigation suffix: .name or .name(...)
                if p.kind(i + 1) == "ident":
                    if p.text(i + 2) == "(":
                        out.external += 1
                    prev = p.text(i + 1)
                    i += 2
                    continue
                prev = text
                i += 1
                continue
            if t.kind == "ident":
                i, prev, declared = self._ident(i, scopes, out, prev)
                if declared:
                    in_decl = True
                continue
            prev = text
            i += 1

    def _keyword(
        self, i: int, end: int, scopes: list[set[str]], out: _Analysis, prev: str | None
    ) -> tuple[int, str | None, bool]:
        p = self.p
        text = p.text(i)
        if text == "new":
            return self._new_expr(i, scopes, out), None, False
        if text == "this":
            return self._this_expr(i, scopes, out), None, False
        if text == "super":
            nxt = p.text(i + 1)
            if nxt == "(":
                out.external += 1
                return i + 1, "super", False
            if nxt == "." and p.kind(i + 2) == "ident":
                if p.text(i + 3) == "(":
                    out.external += 1
                return i + 3, p.text(i + 2), False
            return i + 1, "super", False
        if text in ("break", "continue"):
            if p.kind(i + 1) == "ident":
                return i + 2, p.text(i + 1), False
            return i + 1, text, False
        if text == "instanceof":
            j = self._consume_name_like(i + 1)
            return j, "instanceof-type", False
        if text == "class":  # local class declaration
            j = i
            while j < end and p.text(j) != "{":
                j += 1
            if j < end:
                name = p.text(i + 1) if p.kind(i + 1) == "ident" else "<anonymous>"
                self.p.warnings.append(
                    f"local class {name} at line {p.toks[i].line} folded into enclosing method"
                )
                self._scan_members(j + 1, p.match[j], out)
                return p.match[j] + 1, "}", False
            return i + 1, text, False
        if text in _PRIMITIVES:
            # primitive-led local declaration: int x, int[] y
            j = i + 1
            while p.text(j) == "[" and p.text(j + 1) == "]":
                j += 2
            if p.kind(j) == "ident":
                scopes[-1].add(p.text(j))
                return j + 1, p.text(j), True
            return i + 1, text, False
        if text == "final":
            return i + 1, prev, False  # transparent for declaration detection
        return i + 1, text, False

    def _consume_name_like(self, i: int) -> int:
        p = self.p
        if p.kind(i) == "ident":
            i += 1
            while p.text(i) == "." and p.kind(i + 1) == "ident":
                i += 2
        elif p.kind(i) == "keyword" and p.text(i) in _PRIMITIVES:
            i += 1
        while p.text(i) == "[" and p.text(i + 1) == "]":
            i += 2
        return i

    def _new_expr(self, i: int, scopes: list[set[str]], out: _Analysis) -> int:
        p = self.p
        j = self._consume_name_like(i + 1)
        if p.text(j) == "<":
            lk = p._generic_lookahead(j)
            if lk is not None:
                j = lk
        if p.text(j) == "(":
            close = p.match[j]
            self._scan_code(j + 1, close, scopes, out)
            k = close + 1
            if p.text(k) == "{":  # anonymous class body
                self._scan_members(k + 1, p.match[k], out)
                return p.match[k] + 1
            return k
        if p.text(j) == "[":
            while p.text(j) == "[":
                self._scan_code(j + 1, p.match[j], scopes, out)
                j = p.match[j] + 1
            if p.text(j) == "{":  # array initializer
                scopes.append(set())
                self._scan_code(j + 1, p.match[j], scopes, out)
                scopes.pop()
                j = p.match[j] + 1
            return j
        return j

    def _this_expr(self, i: int, scopes: list[set[str]], out: _Analysis) -> int:
        p = self.p
        nxt = p.text(i + 1)
        if nxt == "(":  # this(...) constructor call
            self._resolve_call(self.class_name, p._arg_count(i + 1), out)
            return i + 1
        if nxt == "." and p.kind(i + 2) == "ident":
            name = p.text(i + 2)
            if p.text(i + 3) == "(":
                self._resolve_call(name, p._arg_count(i + 3), out)
                return i + 3
            if name in self.instance_vars:
                out.accessed.add(name)  # this.x bypasses any shadowing
            return i + 3
        return i + 1

    def _ident(
        self, i: int, scopes: list[set[str]], out: _Analysis, prev: str | None
    ) -> tuple[int, str | None, bool]:
        p = self.p
        name = p.text(i)
        nxt = p.text(i + 1)
        if nxt == "(":
            self._resolve_call(name, p._arg_count(i + 1), out)
            return i + 1, name, False
        if nxt == ".":
            self._field_use(name, scopes, out)
            j = i
            while p.text(j + 1) == "." and p.kind(j + 2) == "ident":
                j += 2
            after = p.text(j + 1)
            if after == "(":
                out.external += 1
                return j + 1, p.text(j), False
            if p.kind(j + 1) == "ident":  # qualified type in a declaration
                scopes[-1].add(p.text(j + 1))
                return j + 2, p.text(j + 1), True
            if after == "<":
                lk = p._generic_lookahead(j + 1)
                if lk is not None and p.kind(lk) == "ident":
                    scopes[-1].add(p.text(lk))
                    return lk + 1, p.text(lk), True
            return j + 1, p.text(j), False
        if nxt == "<":
            lk = p._generic_lookahead(i + 1)
            if lk is not None and p.kind(lk) == "ident":
                scopes[-1].add(p.text(lk))
                return lk + 1, p.text(lk), True
            self._field_use(name, scopes, out)
            return i + 1, name, False
        if nxt == "[" and p.text(i + 2) == "]":
            j = i + 1
            while p.text(j) == "[" and p.text(j + 1) == "]":
                j += 2
            if p.kind(j) == "ident":
                scopes[-1].add(p.text(j))
                return j + 1, p.text(j), True
            self._field_use(name, scopes, out)
            return i + 1, name, False
        if p.kind(i + 1) == "ident":
            # ident ident: a simple-type local declaration
            scopes[-1].add(p.text(i + 1))
            return i + 2, p.text(i + 1), True
        if nxt == ":" and prev in (None, ";", "{", "}"):
            return i + 1, name, False  # statement label, not a field use
        self._field_use(name, scopes, out)
        return i + 1, name, False

    def _scan_members(self, start: int, end: int, out: _Analysis) -> None:
        """Member declarations of an anonymous/local class, folded into ``out``."""
        p = self.p
        i = start
        while i < end:
            text = p.text(i)
            if text == ";":
                i += 1
                continue
            try:
                i = self._scan_inner_member(i, end, out)
            except _MemberError as err:
                tok = p.toks[min(i, len(p.toks) - 1)]
                p.warnings.append(f"skipped inner member near line {tok.line}: {err}")
                i = p._skip_to_member_boundary(i, end)

    def _scan_inner_member(self, i: int, end: int, out: _Analysis) -> int:
        p = self.p
        while True:
            t = p.toks[i]
            if t.text == "@":
                i = p._consume_qualified(i + 1)
                if p.text(i) == "(":
                    i = p.match[i] + 1
                continue
            if t.kind == "keyword" and t.text in _MODIFIERS:
                i += 1
                continue
            break
        t = p.toks[i]
        if t.text == "{":  # initializer block: statements fold in
            scopes: list[set[str]] = [set()]
            self._scan_code(i + 1, p.match[i], scopes, out)
            return p.match[i] + 1
        if t.kind == "keyword" and t.text in ("class", "interface", "enum"):
            j = i
            while j < end and p.text(j) != "{":
                j += 1
            if j >= end:
                raise _MemberError("nested type without a body")
            self._scan_members(j + 1, p.match[j], out)
            return p.match[j] + 1
        if t.text == "<":
            i = p._skip_generic(i)
        if p.kind(i) == "ident" and p.text(i + 1) == "(":
            return self._scan_inner_method(i + 1, out)
        i = p._consume_type(i)
        if p.kind(i) != "ident":
            raise _MemberError(f"expected inner member name, got '{p.text(i)}'")
        i += 1
        if p.text(i) == "(":
            return self._scan_inner_method(i, out)
        # inner field: analyze initializer expressions, declare nothing
        scopes = [set()]
        while i < end:
            text = p.text(i)
            if text in _OPEN:
                self._scan_code(i + 1, p.match[i], scopes, out)
                i = p.match[i] + 1
                continue
            if text == ";":
                return i + 1
            if p.kind(i) == "ident" and p.text(i + 1) not in (",", ";", "=", "["):
                self._scan_code(i, i + 1, scopes, out)
            i += 1
        return end

    def _scan_inner_method(self, params_open: int, out: _Analysis) -> int:
        p = self.p
        params, _ = p._parse_params(params_open)
        i = p.match[params_open] + 1
        while p.text(i) == "[" and p.text(i + 1) == "]":
            i += 2
        if p.text(i) == "throws":
            i = p._consume_qualified(i + 1)
            while p.text(i) == ",":
                i = p._consume_qualified(i + 1)
        if p.text(i) == ";":
            return i + 1
        if p.text(i) != "{":
            raise _MemberError(f"expected inner method body, got '{p.text(i)}'")
        scopes = [set(params)]
        self._scan_code(i + 1, p.match[i], scopes, out)
        return p.match[i] + 1


def _is_accessor(m: MethodFacts) -> bool:
    name = m.name
    if m.arity == 0 and len(name) > 3 and name.startswith("get") and not name[3].islower():
        return True
    if m.arity == 0 and len(name) > 2 and name.startswith("is") and not name[2].islower():
        return True
    if m.arity == 1 and len(name) > 3 and name.startswith("set") and not name[3].islower():
        return True
    return False


def parse_class(
    source: str, source_id: str = "<memory>", exclude_accessors: bool = False
) -> ClassFacts:
    """Extract facts for the top-level class of one Java compilation unit.

    Raises :class:`ParseError` for lexical/bracket problems and
    :class:`UnsupportedConstruct` when the file declares no top-level class.
    With ``exclude_accessors`` simple getters/setters are dropped and their
    ids reindexed; calls to them become external.
    """
    tokens, comments = lex(source)
    match = _match_brackets(tokens)
    parser = _ClassParser(source, tokens, match)

    types = parser.find_classes()
    classes = [t for t in types if t[0] == "class"]
    if not classes:
        raise UnsupportedConstruct(
            "no top-level class found"
            + (f" (file declares {types[0][0]} {types[0][1]})" if types else "")
        )
    if len(types) > 1:
        parser.warnings.append(
            f"file declares {len(types)} top-level types; analyzing one class"
        )
    chosen = next((c for c in classes if c[4]), classes[0])
    _, class_name, _, body_open, _ = chosen

    instance_vars, static_vars, raw_methods = parser.scan_members(class_name, body_open)
    if static_vars:
        parser.warnings.append(
            f"{len(static_vars)} static field(s) excluded from instance variables"
        )

    resolver: dict[tuple[str, int], int] = {}
    for mid, rm in enumerate(raw_methods):
        resolver.setdefault((rm.name, rm.arity), mid)

    ivar_set = set(instance_vars)
    analyzer = _BodyAnalyzer(parser, class_name, ivar_set, resolver)
    methods = []
    for mid, rm in enumerate(raw_methods):
        result = analyzer.analyze(rm)
        blob = _method_blob(source, tokens, comments, rm)
        methods.append(
            MethodFacts(
                id=mid,
                name=rm.name,
                arity=rm.arity,
                accessed_vars=frozenset(result.accessed),
                internal_calls=dict(sorted(result.internal.items())),
                external_call_count=result.external,
                text_blob=blob,
            )
        )

    facts = ClassFacts(
        class_name=class_name,
        source_id=source_id,
        instance_vars=frozenset(ivar_set),
        methods=tuple(methods),
        warnings=tuple(parser.warnings),
    )
    if exclude_accessors:
        facts = filter_methods(facts, lambda m: not _is_accessor(m))
    facts.validate()
    return facts


def parse_file(path: str, exclude_accessors: bool = False) -> ClassFacts:
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        return parse_class(fh.read(), source_id=path, exclude_accessors=exclude_accessors)


def _method_blob(
    source: str, tokens: list[Token], comments: list[Comment], rm: _RawMethod
) -> str:
    start = tokens[rm.start_tok].start
    end = tokens[rm.end_tok].end
    doc = ""
    for c in comments:
        if c.block and c.text.startswith("/**") and c.end <= start:
            if source[c.end : start].strip() == "":
                doc = c.text + "\n"
        if c.start > start:
            break
    return doc + source[start:end]
