"""Boolean functions stored as explicit truth tables.

A function of n inputs is a vector of 2^n output bits.  Row index i encodes
the input assignment whose *first-listed* variable is the most significant
bit of i, so for variables (a, b, c) row 6 = 0b110 means a=1, b=1, c=0.

Functions can be built from a small expression language or loaded from a
two-line text format (variable names, then the output bit string).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

MAX_ARITY = 20

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<const>[01])"
    r"|(?P<op>[+|&*.!~()])"
)

# 8 output bits per byte of a packed table, LSB first.
_BYTE_BITS = [tuple((byte >> i) & 1 for i in range(8)) for byte in range(256)]


class ExpressionError(ValueError):
    """Malformed boolean expression; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class TableFormatError(ValueError):
    """Malformed truth-table file."""


@dataclass(frozen=True)
class TruthTable:
    """Explicit truth table: variable names plus all 2^n output bits."""

    variables: tuple[str, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "outputs", tuple(int(b) for b in self.outputs))
        n = len(self.variables)
        if not 1 <= n <= MAX_ARITY:
            raise ValueError(f"need between 1 and {MAX_ARITY} variables, got {n}")
        seen = set()
        for name in self.variables:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate variable name {name!r}")
            seen.add(name)
        if len(self.outputs) != 1 << n:
            raise ValueError(
                f"expected {1 << n} output bits for {n} variables, got {len(self.outputs)}"
            )
        if any(b not in (0, 1) for b in self.outputs):
            raise ValueError("output bits must be 0 or 1")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def index_of(self, bits: Sequence[int]) -> int:
        """Row index of an input assignment (first variable = MSB)."""
        if len(bits) != self.arity:
            raise ValueError(f"expected {self.arity} input bits, got {len(bits)}")
        index = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError("input bits must be 0 or 1")
            index = (index << 1) | b
        return index

    def evaluate(self, bits: Sequence[int]) -> int:
        return self.outputs[self.index_of(bits)]

    def symbol_counts(self) -> tuple[int, int]:
        """(number of 0 rows, number of 1 rows)."""
        ones = sum(self.outputs)
        return len(self.outputs) - ones, ones


# --- expression parsing ----------------------------------------------------
#
#   expr   := term  (("+" | "|") term)*
#   term   := factor (("&" | "*" | ".") factor)*
#   factor := ("!" | "~") factor | atom
#   atom   := name | "0" | "1" | "(" expr ")"

_OR_OPS = frozenset("+|")
_AND_OPS = frozenset("&*.")
_NOT_OPS = frozenset("!~")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        # first occurrence position of each variable, in appearance order
        self.seen: dict[str, int] = {}

    def _peek_op(self) -> str | None:
        if self.pos < len(self.tokens) and self.tokens[self.pos][0] == "op":
            return self.tokens[self.pos][1]
        return None

    def parse(self):
        node = self._expr()
        if self.pos < len(self.tokens):
            kind, value, at = self.tokens[self.pos]
            raise ExpressionError(f"unexpected {value!r}", at)
        return node

    def _expr(self):
        node = self._term()
        while self._peek_op() in _OR_OPS:
            self.pos += 1
            node = ("or", node, self._term())
        return node

    def _term(self):
        node = self._factor()
        while self._peek_op() in _AND_OPS:
            self.pos += 1
            node = ("and", node, self._factor())
        return node

    def _factor(self):
        if self._peek_op() in _NOT_OPS:
            self.pos += 1
            return ("not", self._factor())
        return self._atom()

    def _atom(self):
        if self.pos >= len(self.tokens):
            raise ExpressionError("unexpected end of expression", len(self.text))
        kind, value, at = self.tokens[self.pos]
        self.pos += 1
        if kind == "name":
            self.seen.setdefault(value, at)
            return ("var", value)
        if kind == "const":
            return ("const", int(value))
        if value == "(":
            node = self._expr()
            if self._peek_op() != ")":
                raise ExpressionError("expected ')'", self._here())
            self.pos += 1
            return node
        raise ExpressionError(f"unexpected {value!r}", at)

    def _here(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][2]
        return len(self.text)


def _variable_mask(position: int, n: int) -> int:
    """Bitmask over all 2^n rows where variable `position` (0 = MSB) is 1."""
    half = 1 << (n - 1 - position)
    mask = ((1 << half) - 1) << half
    period = half << 1
    size = 1 << n
    while period < size:
        mask |= mask << period
        period <<= 1
    return mask


def _eval_mask(node, masks: dict[str, int], full: int) -> int:
    op = node[0]
    if op == "var":
        return masks[node[1]]
    if op == "const":
        return full if node[1] else 0
    if op == "not":
        return _eval_mask(node[1], masks, full) ^ full
    left = _eval_mask(node[1], masks, full)
    right = _eval_mask(node[2], masks, full)
    return left & right if op == "and" else left | right


def _mask_to_bits(mask: int, size: int) -> tuple[int, ...]:
    raw = mask.to_bytes((size + 7) // 8, "little")
    bits: list[int] = []
    for byte in raw:
        bits.extend(_BYTE_BITS[byte])
    return tuple(bits[:size])


def parse_expression(text: str, variables: Sequence[str] | None = None) -> TruthTable:
    """Build the truth table of a boolean expression.

    With no explicit `variables`, the order of first appearance in the text
    defines the variable order (and hence the row indexing).
    """
    parser = _Parser(text)
    ast = parser.parse()
    if variables is None:
        order = tuple(parser.seen)
        if not order:
            raise ExpressionError("expression uses no variables and none were declared", 0)
    else:
        order = tuple(variables)
        for name, at in parser.seen.items():
            if name not in order:
                raise ExpressionError(f"unknown variable {name!r}", at)
    n = len(order)
    if not 1 <= n <= MAX_ARITY:
        raise ExpressionError(f"need between 1 and {MAX_ARITY} variables, got {n}", 0)
    size = 1 << n
    full = (1 << size) - 1
    masks = {name: _variable_mask(j, n) for j, name in enumerate(order)}
    result = _eval_mask(ast, masks, full)
    return TruthTable(order, _mask_to_bits(result, size))


# --- table file format ------------------------------------------------------
#
# Optional leading '#' comment lines, then a line of whitespace-separated
# variable names, then a line of 2^n characters from {0, 1}.


def parse_table_file(data: bytes) -> TruthTable:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TableFormatError(f"table file is not valid UTF-8: {exc}") from exc
    lines = [line.rstrip("\r") for line in text.split("\n")]
    body = [line for line in lines if not line.startswith("#")]
    while body and not body[-1].strip():
        body.pop()
    if len(body) < 2:
        raise TableFormatError("expected a variable-name line and an output line")
    if len(body) > 2:
        raise TableFormatError(f"unexpected extra line: {body[2]!r}")
    names = body[0].split()
    if not names:
        raise TableFormatError("variable-name line is empty")
    if len(names) > MAX_ARITY:
        raise TableFormatError(f"too many variables: {len(names)} > {MAX_ARITY}")
    row = body[1].strip()
    expected = 1 << len(names)
    if len(row) != expected:
        raise TableFormatError(
            f"expected {expected} output bits for {len(names)} variables, got {len(row)}"
        )
    bad = set(row) - {"0", "1"}
    if bad:
        raise TableFormatError(f"output line may only contain 0 and 1, got {min(bad)!r}")
    try:
        return TruthTable(tuple(names), tuple(int(c) for c in row))
    except ValueError as exc:
        raise TableFormatError(str(exc)) from exc


def serialize_table(table: TruthTable) -> str:
    """Two-line text form; `parse_table_file` of the result round-trips."""
    return " ".join(table.variables) + "\n" + "".join(map(str, table.outputs)) + "\n"
