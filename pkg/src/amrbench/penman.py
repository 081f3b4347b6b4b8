"""Penman notation: tokenizer, parser, validator, and serializer.

AMR graphs are written in Penman notation, e.g.::

    (w / want-01
        :arg0 (b / boy)
        :arg1 (g / go-01
            :arg0 b))

``parse`` returns either an :class:`AmrGraph` or a :class:`StructuralReport`
listing every defect found (it does not stop at the first one).  ``validate``
always returns a report.  ``serialize`` renders a graph back to text such that
re-parsing yields the same triple set.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Union


class TokenKind(enum.Enum):
    LPAREN = "lparen"
    RPAREN = "rparen"
    SLASH = "slash"
    RELATION = "relation"
    SYMBOL = "symbol"
    STRING = "string"
    ERROR = "error"


@dataclass(frozen=True)
class Token:
    """A lexeme with its character offset into the input text.

    For STRING tokens ``text`` holds the content without the surrounding
    quotes; ``lexeme()`` restores them.
    """

    kind: TokenKind
    text: str
    offset: int

    def lexeme(self) -> str:
        if self.kind is TokenKind.STRING:
            return '"' + self.text + '"'
        return self.text


class StructuralErrorKind(enum.Enum):
    UNBALANCED_PARENS = "UnbalancedParens"
    DUPLICATE_VARIABLE = "DuplicateVariable"
    UNDEFINED_VARIABLE = "UndefinedVariable"
    EMPTY_CONCEPT = "EmptyConcept"
    MALFORMED_RELATION = "MalformedRelation"
    MISSING_ROOT = "MissingRoot"
    TRAILING_GARBAGE = "TrailingGarbage"
    UNPARSEABLE = "Unparseable"


@dataclass(frozen=True)
class StructuralError:
    kind: StructuralErrorKind
    offset: int
    message: str


@dataclass(frozen=True)
class StructuralReport:
    """Outcome of structural validation: empty ``errors`` means valid."""

    errors: tuple[StructuralError, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.errors

    def kinds(self) -> list[StructuralErrorKind]:
        return [e.kind for e in self.errors]


@dataclass(frozen=True)
class Ref:
    """Edge target that names another variable in the graph."""

    name: str


@dataclass(frozen=True)
class Const:
    """Edge target that is a constant: quoted string (quotes kept in the
    lexeme), number, '-', '+', or a keyword such as ``imperative``."""

    lexeme: str


EdgeTarget = Union[Ref, Const]
Edge = tuple[str, str, EdgeTarget]

# Bare symbols in target position that are constants rather than variable
# references.  Anything else unquoted must name a defined variable.
KEYWORD_CONSTANTS = frozenset({"imperative", "expressive", "interrogative"})

_NUMBER_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)\Z")
_LABEL_RE = re.compile(r":[a-z0-9][a-z0-9-]*\Z")
_STRUCTURAL_CHARS = set('()/:"')


class GraphError(ValueError):
    """Raised when an AmrGraph violates its construction invariants."""


@dataclass(frozen=True)
class AmrGraph:
    """A rooted AMR graph.

    ``instances`` maps each variable to its concept in definition order;
    ``edges`` keeps relation and attribute edges in the order they appeared
    (or were added).  Relation labels are stored lowercased with their
    leading ':'.  Constants keep their verbatim lexeme, quotes included.
    """

    root: str
    instances: dict[str, str]
    edges: tuple[Edge, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        problems = []
        if not self.root:
            problems.append("empty root")
        elif self.root not in self.instances:
            problems.append(f"root '{self.root}' has no instance")
        for var, concept in self.instances.items():
            if not var or any(c.isspace() or c in _STRUCTURAL_CHARS for c in var):
                problems.append(f"bad variable name {var!r}")
            if not concept:
                problems.append(f"variable '{var}' has an empty concept")
        for src, label, tgt in self.edges:
            if src not in self.instances:
                problems.append(f"edge source '{src}' is not a defined variable")
            if not label.startswith(":") or label != label.lower():
                problems.append(f"bad relation label {label!r}")
            if isinstance(tgt, Ref) and tgt.name not in self.instances:
                problems.append(f"edge target '{tgt.name}' is not a defined variable")
            if isinstance(tgt, Const) and not tgt.lexeme:
                problems.append("empty constant")
        if not problems and self.instances:
            unreachable = self._unreachable()
            if unreachable:
                problems.append(
                    "not reachable from root: " + ", ".join(sorted(unreachable))
                )
        if problems:
            raise GraphError("; ".join(problems))

    def _unreachable(self) -> set[str]:
        # Connectivity may run against edge direction; '-of' inversion makes
        # the two directions interchangeable for reachability purposes.
        neighbours: dict[str, set[str]] = {v: set() for v in self.instances}
        for src, _, tgt in self.edges:
            if isinstance(tgt, Ref) and src in neighbours and tgt.name in neighbours:
                neighbours[src].add(tgt.name)
                neighbours[tgt.name].add(src)
        seen = {self.root} if self.root in neighbours else set()
        stack = list(seen)
        while stack:
            for nxt in neighbours[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return set(self.instances) - seen

    def out_edges(self, var: str) -> list[tuple[str, EdgeTarget]]:
        return [(label, tgt) for src, label, tgt in self.edges if src == var]


ParseResult = Union[AmrGraph, StructuralReport]


def tokenize(text: str, base: int = 0) -> list[Token]:
    """Split Penman text into tokens.  Total: any input yields a token list.

    Unterminated quoted strings produce a single ERROR token.  Offsets are
    relative to ``text`` plus ``base``.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            tokens.append(Token(TokenKind.LPAREN, "(", base + i))
            i += 1
        elif c == ")":
            tokens.append(Token(TokenKind.RPAREN, ")", base + i))
            i += 1
        elif c == "/":
            tokens.append(Token(TokenKind.SLASH, "/", base + i))
            i += 1
        elif c == '"':
            end = text.find('"', i + 1)
            if end == -1:
                tokens.append(Token(TokenKind.ERROR, text[i:], base + i))
                break
            tokens.append(Token(TokenKind.STRING, text[i + 1 : end], base + i))
            i = end + 1
        elif c == ":":
            j = i + 1
            while j < n and not text[j].isspace() and text[j] not in _STRUCTURAL_CHARS:
                j += 1
            tokens.append(Token(TokenKind.RELATION, text[i:j], base + i))
            i = j
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _STRUCTURAL_CHARS:
                j += 1
            tokens.append(Token(TokenKind.SYMBOL, text[i:j], base + i))
            i = j
    return tokens


def split_header(text: str) -> tuple[dict[str, str], int]:
    """Consume leading blank and '#' comment lines, collecting '# ::' metadata.

    Returns the metadata dict and the offset where the graph text begins.
    """
    meta: dict[str, str] = {}
    pos = 0
    n = len(text)
    while pos < n:
        eol = text.find("\n", pos)
        line_end = n if eol == -1 else eol
        stripped = text[pos:line_end].strip()
        if stripped and not stripped.startswith("#"):
            break
        if stripped.startswith("# ::"):
            _parse_meta_line(stripped, meta)
        pos = line_end + 1 if eol != -1 else n
    return meta, pos


def _parse_meta_line(line: str, meta: dict[str, str]) -> None:
    # '# ::id x ::save-date Thu, 2013 ::preferred' style; a line may carry
    # several ::key groups, flags carry an empty value.
    content = line[1:].strip()
    for chunk in content.split(" ::"):
        chunk = chunk.lstrip(":").strip()
        if not chunk:
            continue
        key, _, value = chunk.partition(" ")
        meta[key] = value.strip()


def _is_constant_symbol(text: str) -> bool:
    if text in ("-", "+") or text in KEYWORD_CONSTANTS:
        return True
    return bool(_NUMBER_RE.match(text))


class _Parser:
    """Recursive-descent parser that records every defect it can attribute.

    One error per independent defect; after an Unparseable error the cascade
    is suppressed and no further errors are recorded.
    """

    def __init__(self, tokens: list[Token], end_offset: int):
        self.toks = tokens
        self.i = 0
        self.end = end_offset
        self.errors: list[StructuralError] = []
        self.halted = False
        self.instances: dict[str, str] = {}
        self.edges: list[list] = []  # [src, label, target-or-None]
        self.pending: list[tuple[int, str, int]] = []  # (edge slot, symbol, offset)
        self.unclosed = 0

    def error(self, kind: StructuralErrorKind, offset: int, message: str) -> None:
        if self.halted:
            return
        self.errors.append(StructuralError(kind, offset, message))
        if kind is StructuralErrorKind.UNPARSEABLE:
            self.halted = True

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse_root(self) -> str | None:
        first = self.peek()
        if first is None:
            self.error(StructuralErrorKind.UNPARSEABLE, 0, "no graph found")
            return None
        if first.kind is TokenKind.ERROR:
            self.error(
                StructuralErrorKind.UNPARSEABLE, first.offset, "unterminated quoted string"
            )
            return None
        if first.kind is not TokenKind.LPAREN:
            self.error(
                StructuralErrorKind.MISSING_ROOT,
                first.offset,
                "expected '(' to open the root node",
            )
            return None
        root = self.parse_node()
        if self.unclosed:
            self.error(
                StructuralErrorKind.UNBALANCED_PARENS,
                self.end,
                f"{self.unclosed} unclosed '('",
            )
        rest = self.toks[self.i :]
        if rest and not self.halted:
            if all(t.kind is TokenKind.RPAREN for t in rest):
                self.error(
                    StructuralErrorKind.UNBALANCED_PARENS,
                    rest[0].offset,
                    f"{len(rest)} unmatched ')'",
                )
            else:
                self.error(
                    StructuralErrorKind.TRAILING_GARBAGE,
                    rest[0].offset,
                    "content after the root node closes",
                )
        return root

    def parse_node(self) -> str | None:
        """Parse '(var / concept :rel target ...)'; opening paren is current."""
        self.advance()
        tok = self.peek()
        if tok is None or tok.kind is not TokenKind.SYMBOL:
            offset = self.end if tok is None else tok.offset
            self.error(
                StructuralErrorKind.UNPARSEABLE, offset, "expected a variable name after '('"
            )
            return None
        var_tok = self.advance()
        var = var_tok.text
        duplicate = var in self.instances
        if duplicate:
            # First definition wins; the redefinition site is the error.
            self.error(
                StructuralErrorKind.DUPLICATE_VARIABLE,
                var_tok.offset,
                f"variable '{var}' defined more than once",
            )
        concept = ""
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.SLASH:
            slash = self.advance()
            tok = self.peek()
            if tok is not None and tok.kind is TokenKind.SYMBOL:
                concept = self.advance().text
            else:
                self.error(
                    StructuralErrorKind.EMPTY_CONCEPT,
                    slash.offset,
                    f"missing concept after '/' for variable '{var}'",
                )
        else:
            self.error(
                StructuralErrorKind.EMPTY_CONCEPT,
                var_tok.offset,
                f"variable '{var}' has no '/ concept'",
            )
        if not duplicate:
            self.instances[var] = concept
        self.parse_relations(var)
        return var

    def parse_relations(self, var: str) -> None:
        while not self.halted:
            tok = self.peek()
            if tok is None:
                self.unclosed += 1
                return
            if tok.kind is TokenKind.RPAREN:
                self.advance()
                return
            if tok.kind is TokenKind.RELATION:
                self.parse_edge(var)
            elif tok.kind is TokenKind.ERROR:
                self.error(
                    StructuralErrorKind.UNPARSEABLE, tok.offset, "unterminated quoted string"
                )
                return
            elif tok.kind is TokenKind.LPAREN:
                self.error(
                    StructuralErrorKind.MALFORMED_RELATION,
                    tok.offset,
                    "expected a relation label before '('",
                )
                self.parse_node()  # keep parens balanced; edge is lost
            else:
                self.error(
                    StructuralErrorKind.MALFORMED_RELATION,
                    tok.offset,
                    f"expected a relation label before {tok.lexeme()!r}",
                )
                self.advance()

    def parse_edge(self, var: str) -> None:
        rel_tok = self.advance()
        label = rel_tok.text.lower()
        ok = bool(_LABEL_RE.match(label))
        if not ok:
            self.error(
                StructuralErrorKind.MALFORMED_RELATION,
                rel_tok.offset,
                f"malformed relation label {rel_tok.text!r}",
            )
        tok = self.peek()
        if tok is None or tok.kind in (TokenKind.RPAREN, TokenKind.RELATION):
            self.error(
                StructuralErrorKind.MALFORMED_RELATION,
                rel_tok.offset,
                f"relation {rel_tok.text!r} has no target",
            )
            return
        if tok.kind is TokenKind.LPAREN:
            # Append before descending so edge order follows the text; the
            # target is patched in once the child node is parsed.  A None
            # child only happens after a halting error, which prevents the
            # edge list from ever becoming a graph.
            slot = -1
            if ok:
                self.edges.append([var, label, None])
                slot = len(self.edges) - 1
            child = self.parse_node()
            if slot >= 0 and child is not None:
                self.edges[slot][2] = Ref(child)
        elif tok.kind is TokenKind.SYMBOL:
            sym = self.advance()
            if ok:
                # Variable reference or constant: decided once all
                # definitions are known.
                self.edges.append([var, label, None])
                self.pending.append((len(self.edges) - 1, sym.text, sym.offset))
        elif tok.kind is TokenKind.STRING:
            lit = self.advance()
            if ok:
                self.edges.append([var, label, Const(lit.lexeme())])
        elif tok.kind is TokenKind.ERROR:
            self.error(
                StructuralErrorKind.UNPARSEABLE, tok.offset, "unterminated quoted string"
            )
        else:  # stray slash
            self.error(
                StructuralErrorKind.MALFORMED_RELATION, tok.offset, "unexpected '/'"
            )
            self.advance()

    def resolve_pending(self) -> None:
        for slot, sym, offset in self.pending:
            if sym in self.instances:
                self.edges[slot][2] = Ref(sym)
            elif _is_constant_symbol(sym):
                self.edges[slot][2] = Const(sym)
            else:
                self.error(
                    StructuralErrorKind.UNDEFINED_VARIABLE,
                    offset,
                    f"'{sym}' is neither a defined variable nor a constant",
                )


def parse(text: str) -> ParseResult:
    """Parse Penman text (with optional '# ::key value' header lines).

    Returns an AmrGraph when the text is structurally sound, otherwise a
    StructuralReport listing all detected errors ordered by offset.
    """
    meta, start = split_header(text)
    tokens = tokenize(text[start:], base=start)
    if not tokens:
        return StructuralReport(
            (StructuralError(StructuralErrorKind.UNPARSEABLE, start, "no graph found"),)
        )
    parser = _Parser(tokens, end_offset=len(text))
    root = parser.parse_root()
    parser.resolve_pending()
    if parser.errors:
        ordered = sorted(parser.errors, key=lambda e: e.offset)
        return StructuralReport(tuple(ordered))
    assert root is not None
    edges = tuple((src, label, tgt) for src, label, tgt in parser.edges)
    return AmrGraph(root=root, instances=parser.instances, edges=edges, metadata=meta)


def validate(text: str) -> StructuralReport:
    """Structural check: report with no errors iff ``parse`` would succeed."""
    result = parse(text)
    if isinstance(result, AmrGraph):
        return StructuralReport(())
    return result


def serialize(graph: AmrGraph) -> str:
    """Render a graph in Penman notation, 4-space indent per nesting level.

    The first mention of each variable carries its '/ concept'; later
    mentions are bare.  Requires every variable to be reachable from the
    root along stated edge directions, which holds for all parsed graphs;
    an edge cannot be written under a node that is only reachable against
    its direction without rewriting its label.
    """
    out: dict[str, list[tuple[str, EdgeTarget]]] = {v: [] for v in graph.instances}
    for src, label, tgt in graph.edges:
        out[src].append((label, tgt))

    reachable = {graph.root}
    stack = [graph.root]
    while stack:
        for _, tgt in out[stack.pop()]:
            if isinstance(tgt, Ref) and tgt.name not in reachable:
                reachable.add(tgt.name)
                stack.append(tgt.name)
    missing = set(graph.instances) - reachable
    if missing:
        raise GraphError(
            "cannot serialize: not reachable from root along stated edges: "
            + ", ".join(sorted(missing))
        )

    defined: set[str] = set()

    def emit(var: str, level: int) -> str:
        defined.add(var)
        parts = [f"({var} / {graph.instances[var]}"]
        pad = "    " * (level + 1)
        for label, tgt in out[var]:
            if isinstance(tgt, Ref) and tgt.name not in defined:
                parts.append(f"\n{pad}{label} {emit(tgt.name, level + 1)}")
            elif isinstance(tgt, Ref):
                parts.append(f"\n{pad}{label} {tgt.name}")
            else:
                parts.append(f"\n{pad}{label} {tgt.lexeme}")
        parts.append(")")
        return "".join(parts)

    return emit(graph.root, 0)
