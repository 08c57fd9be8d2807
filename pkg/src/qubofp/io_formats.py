"""Text formats for instances and the JSON solve report.

Grammars (tokens separated by runs of spaces/tabs, LF or CRLF line ends)::

    qubo <n> <nnz>        then nnz lines  <i> <j> <q>          ('#' comments)
    p edge <n> <m>        then m lines    e <u> <v>            ('c' comments)
    ilp <m> <n>           then m lines of n+1 ints (row, b_i), one line of n ints (c)
    knapsack <n> <K>      then n ints (any line layout)
    rqubo <n> <nnz>       then nnz lines  <i> <j> <num> <den>

Every rejection raises ``ParseError`` carrying a 1-based line and column.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterator

from .core import QuboError, QuboInstance
from .reductions import Graph, IlpInstance, IlpQuboMapping, KnapsackInstance, RationalQubo
from .solvers import SolveReport


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(QuboError, ValueError):
    def __init__(self, line: int, column: int, message: str) -> None:
        self.diagnostic = ParseDiagnostic(line, column, message)
        super().__init__(str(self.diagnostic))

    @property
    def line(self) -> int:
        return self.diagnostic.line

    @property
    def column(self) -> int:
        return self.diagnostic.column


_INTEGER = re.compile(r"[+-]?[0-9]+")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int

    def fail(self, message: str) -> ParseError:
        return ParseError(self.line, self.column, message)

    def integer(self, what: str = "integer") -> int:
        if not _INTEGER.fullmatch(self.text):
            raise self.fail(f"expected {what}, got {self.text!r}")
        return int(self.text)


def _lines(text: str, comment: str) -> Iterator[tuple[int, list[Token]]]:
    """Yield (line number, tokens) for every non-blank, non-comment line."""
    for number, raw in enumerate(text.split("\n"), start=1):
        if raw.endswith("\r"):
            raw = raw[:-1]
        tokens = []
        col = 0
        while col < len(raw):
            if raw[col] in " \t":
                col += 1
                continue
            start = col
            while col < len(raw) and raw[col] not in " \t":
                col += 1
            tokens.append(Token(raw[start:col], number, start + 1))
        if not tokens:
            continue
        head = tokens[0].text
        if (comment == "c" and head == "c") or (comment != "c" and head.startswith(comment)):
            continue
        yield number, tokens


class _Reader:
    def __init__(self, text: str, comment: str) -> None:
        self._it = _lines(text, comment)
        self._last_line = max(1, text.count("\n") + (0 if text.endswith("\n") else 1))

    def next_line(self, what: str) -> list[Token]:
        try:
            return next(self._it)[1]
        except StopIteration:
            raise ParseError(self._last_line, 1, f"unexpected end of input, expected {what}") from None

    def expect_end(self) -> None:
        for _, tokens in self._it:
            raise tokens[0].fail("unexpected trailing content")


def _arity(tokens: list[Token], count: int, what: str) -> None:
    if len(tokens) != count:
        tok = tokens[min(len(tokens), count)] if len(tokens) > count else tokens[-1]
        raise tok.fail(f"{what} needs {count} fields, got {len(tokens)}")


def _header(reader: _Reader, keyword: str) -> tuple[Token, Token]:
    """``<keyword> <a> <b>`` header; returns the two numeric tokens."""
    tokens = reader.next_line("header")
    if tokens[0].text != keyword:
        raise tokens[0].fail(f"expected header starting with {keyword!r}")
    _arity(tokens, 3, "header")
    return tokens[1], tokens[2]


def _positive(tok: Token, what: str) -> int:
    v = tok.integer()
    if v < 1:
        raise tok.fail(f"{what} must be at least 1, got {v}")
    return v


def _count(tok: Token) -> int:
    v = tok.integer()
    if v < 0:
        raise tok.fail(f"count must be non-negative, got {v}")
    return v


def _index(tok: Token, n: int) -> int:
    v = tok.integer("index")
    if not 1 <= v <= n:
        raise tok.fail(f"index {v} out of range 1..{n}")
    return v


def parse_qubo(text: str) -> QuboInstance:
    r = _Reader(text, "#")
    n_tok, nnz_tok = _header(r, "qubo")
    n, nnz = _positive(n_tok, "n"), _count(nnz_tok)
    entries: dict[tuple[int, int], int] = {}
    for _ in range(nnz):
        tokens = r.next_line("entry line")
        _arity(tokens, 3, "entry")
        i, j = _index(tokens[0], n), _index(tokens[1], n)
        if i > j:
            raise tokens[0].fail(f"entry ({i},{j}) is below the diagonal")
        if (i, j) in entries:
            raise tokens[0].fail(f"duplicate entry ({i},{j})")
        entries[(i, j)] = tokens[2].integer("coefficient")
    r.expect_end()
    return QuboInstance(n, entries)


def write_qubo(instance: QuboInstance) -> str:
    lines = [f"qubo {instance.n} {len(instance.entries)}"]
    lines += [f"{i} {j} {q}" for (i, j), q in instance.entries.items()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    r = _Reader(text, "c")
    tokens = r.next_line("'p edge' header")
    if tokens[0].text != "p":
        if tokens[0].text == "e" and len(tokens) == 3 and tokens[1].text == tokens[2].text:
            raise tokens[1].fail(f"self-loop at vertex {tokens[1].text}")
        raise tokens[0].fail("expected 'p edge <n> <m>' before edges")
    if len(tokens) < 2 or tokens[1].text != "edge":
        raise (tokens[1] if len(tokens) > 1 else tokens[0]).fail("expected problem type 'edge'")
    _arity(tokens, 4, "header")
    n, m = _positive(tokens[2], "vertex count"), _count(tokens[3])
    edges: set[tuple[int, int]] = set()
    for _ in range(m):
        tokens = r.next_line("edge line")
        if tokens[0].text != "e":
            raise tokens[0].fail("expected edge line 'e <u> <v>'")
        _arity(tokens, 3, "edge")
        u, v = _index(tokens[1], n), _index(tokens[2], n)
        if u == v:
            raise tokens[1].fail(f"self-loop at vertex {u}")
        e = (min(u, v), max(u, v))
        if e in edges:
            raise tokens[1].fail(f"duplicate edge ({u},{v})")
        edges.add(e)
    r.expect_end()
    return Graph(n, frozenset(edges))


def write_graph(graph: Graph) -> str:
    lines = [f"p edge {graph.n_vertices} {len(graph.edges)}"]
    lines += [f"e {u} {v}" for u, v in sorted(graph.edges)]
    return "\n".join(lines) + "\n"


def parse_ilp(text: str) -> IlpInstance:
    r = _Reader(text, "#")
    m_tok, n_tok = _header(r, "ilp")
    m, n = _positive(m_tok, "m"), _positive(n_tok, "n")
    rows, b = [], []
    for _ in range(m):
        tokens = r.next_line("constraint row")
        _arity(tokens, n + 1, "constraint row")
        values = [t.integer() for t in tokens]
        if values[-1] < 0:
            raise tokens[-1].fail("b_i must be non-negative")
        rows.append(tuple(values[:-1]))
        b.append(values[-1])
    tokens = r.next_line("objective row")
    _arity(tokens, n, "objective row")
    c = [t.integer() for t in tokens]
    r.expect_end()
    return IlpInstance(tuple(rows), tuple(b), tuple(c))


def write_ilp(ilp: IlpInstance) -> str:
    lines = [f"ilp {ilp.m} {ilp.n}"]
    lines += [" ".join(map(str, (*row, bi))) for row, bi in zip(ilp.a, ilp.b)]
    lines.append(" ".join(map(str, ilp.c)))
    return "\n".join(lines) + "\n"


def parse_knapsack(text: str) -> KnapsackInstance:
    r = _Reader(text, "#")
    n_tok, cap_tok = _header(r, "knapsack")
    n, cap = _positive(n_tok, "item count"), _positive(cap_tok, "capacity")
    items: list[int] = []
    while len(items) < n:
        for tok in r.next_line("item weights"):
            if len(items) == n:
                raise tok.fail(f"more than {n} items")
            v = tok.integer("item weight")
            if v < 1:
                raise tok.fail("item weights must be positive")
            items.append(v)
    r.expect_end()
    return KnapsackInstance(tuple(items), cap)


def write_knapsack(kp: KnapsackInstance) -> str:
    return f"knapsack {len(kp.items)} {kp.cap}\n" + " ".join(map(str, kp.items)) + "\n"


def parse_rqubo(text: str) -> RationalQubo:
    r = _Reader(text, "#")
    n_tok, nnz_tok = _header(r, "rqubo")
    n, nnz = _positive(n_tok, "n"), _count(nnz_tok)
    entries: dict[tuple[int, int], tuple[int, int]] = {}
    for _ in range(nnz):
        tokens = r.next_line("entry line")
        _arity(tokens, 4, "entry")
        i, j = _index(tokens[0], n), _index(tokens[1], n)
        if i > j:
            raise tokens[0].fail(f"entry ({i},{j}) is below the diagonal")
        if (i, j) in entries:
            raise tokens[0].fail(f"duplicate entry ({i},{j})")
        den = tokens[3].integer("denominator")
        if den <= 0:
            raise tokens[3].fail("denominator must be positive")
        entries[(i, j)] = (tokens[2].integer("numerator"), den)
    r.expect_end()
    return RationalQubo(n, entries)


def write_rqubo(rq: RationalQubo) -> str:
    lines = [f"rqubo {rq.n} {len(rq.entries)}"]
    lines += [f"{i} {j} {num} {den}" for (i, j), (num, den) in rq.entries.items()]
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> tuple[int, ...]:
    """0/1 tokens in order, across any number of lines; '#' starts a comment line."""
    bits = []
    for _, tokens in _lines(text, "#"):
        for tok in tokens:
            if tok.text not in ("0", "1"):
                raise tok.fail(f"expected 0 or 1, got {tok.text!r}")
            bits.append(int(tok.text))
    if not bits:
        raise ParseError(1, 1, "empty assignment")
    return tuple(bits)


PARSERS = {
    "qubo": parse_qubo,
    "graph": parse_graph,
    "ilp": parse_ilp,
    "knapsack": parse_knapsack,
    "rqubo": parse_rqubo,
}


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def write_report(report: SolveReport, extra: dict | None = None) -> str:
    """Compact JSON, fixed key order; big integers are decimal strings.

    ``search_hi`` is emitted only when the search did not end at 0 (the
    restricted UQUBO search).  ``extra`` keys are appended in the given order.
    """
    doc: dict = {"n": report.n, "min_value": str(report.min_value)}
    if report.argmin is not None:
        doc["argmin"] = list(report.argmin)
    doc["oracle_queries"] = report.queries
    doc["search_lo"] = str(report.search_interval[0])
    doc["offset_applied"] = str(report.offset_applied)
    if report.search_interval[1] != 0:
        doc["search_hi"] = str(report.search_interval[1])
    for key, value in (extra or {}).items():
        doc[key] = str(value) if isinstance(value, int) and not isinstance(value, bool) else value
    return _dumps(doc)


def parse_report(text: str) -> SolveReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from None
    try:
        argmin = doc.get("argmin")
        return SolveReport(
            n=int(doc["n"]),
            min_value=int(doc["min_value"]),
            queries=int(doc["oracle_queries"]),
            search_interval=(int(doc["search_lo"]), int(doc.get("search_hi", "0"))),
            argmin=None if argmin is None else tuple(int(b) for b in argmin),
            offset_applied=int(doc["offset_applied"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(1, 1, f"malformed report: {exc}") from None


def write_ilp_mapping(mapping: IlpQuboMapping) -> str:
    return _dumps(
        {
            "reduction": "ilp",
            "n_qubo": mapping.qubo.n,
            "x_vars": list(mapping.x_vars),
            "slack_layout": [list(row) for row in mapping.slack_layout],
            "h": str(mapping.h),
            "k": mapping.k,
            "constant": str(mapping.constant),
            "negate_output": mapping.negate_output,
        }
    )
