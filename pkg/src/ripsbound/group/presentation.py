"""Group presentations: parsing, symmetric closure and small-cancellation checks.

Words are tuples of generator indices.  Index order *is* the shortlex order,
so comparing two equal-length tuples compares the words lexicographically.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

Word = tuple[int, ...]

ORACLE_KINDS = ("free", "dehn-small-cancellation", "table-import")


class PresentationError(ValueError):
    """Malformed presentation text or a presentation violating a load-time check."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class GroupPresentation:
    """A finitely presented group over a symmetric, ordered generating set.

    ``symbols[i]`` is the printable name of generator ``i`` and ``inverse[i]``
    the index of its formal inverse.  ``relators`` are cyclically reduced.
    """

    symbols: tuple[str, ...]
    inverse: tuple[int, ...]
    relators: tuple[Word, ...] = ()
    oracle_hint: str = "free"
    table_path: str | None = None
    name: str = ""
    _index: dict[str, int] = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.oracle_hint not in ORACLE_KINDS:
            raise PresentationError(f"unknown oracle {self.oracle_hint!r}")
        if len(self.symbols) != len(self.inverse):
            raise PresentationError("symbol and inverse tables differ in length")
        for i, j in enumerate(self.inverse):
            if self.inverse[j] != i or i == j:
                raise PresentationError(f"generator {self.symbols[i]!r} lacks a proper formal inverse")
        for r in self.relators:
            if not r:
                raise PresentationError("empty relator")
            if free_reduce(r, self.inverse) != r or self.inverse[r[0]] == r[-1] and len(r) > 1:
                raise PresentationError(f"relator {self.format(r)} is not freely and cyclically reduced")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    @property
    def rank(self) -> int:
        """Number of generators, counting formal inverses."""
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        return self._index[symbol]

    def invert(self, word: Sequence[int]) -> Word:
        inv = self.inverse
        return tuple(inv[x] for x in reversed(word))

    def format(self, word: Sequence[int]) -> str:
        if not word:
            return "e"
        return " ".join(self.symbols[x] for x in word)

    def compact(self, word: Sequence[int]) -> str:
        """Concatenate symbols; only unambiguous when names are single letters."""
        return "".join(self.symbols[x] for x in word) or "e"

    def word(self, text: str) -> Word:
        """Parse a word in the presentation-file syntax (not reduced)."""
        return tuple(_parse_word(text, self._index, self.inverse, line=None))

    def symmetrized_relators(self) -> list[Word]:
        """All cyclic conjugates of the relators and of their inverses, deduplicated."""
        out: list[Word] = []
        seen: set[Word] = set()
        for r in self.relators:
            for w in (r, self.invert(r)):
                for k in range(len(w)):
                    c = w[k:] + w[:k]
                    if c not in seen:
                        seen.add(c)
                        out.append(c)
        return out

    def piece_lengths(self) -> list[tuple[Word, int]]:
        """For each symmetrized relator, the length of its longest prefix that is a piece.

        A piece is a common prefix of two distinct symmetrized relators; after
        sorting, the longest one for a given relator is shared with a neighbour.
        """
        sym = sorted(self.symmetrized_relators())

        def lcp(a: Word, b: Word) -> int:
            k = 0
            while k < min(len(a), len(b)) and a[k] == b[k]:
                k += 1
            return k

        out = []
        for i, r in enumerate(sym):
            k = 0
            if i > 0:
                k = lcp(sym[i - 1], r)
            if i + 1 < len(sym):
                k = max(k, lcp(r, sym[i + 1]))
            out.append((r, k))
        return out

    def small_cancellation_violation(self, ratio: float = 1 / 6) -> tuple[Word, Word] | None:
        """Return ``(piece, relator)`` breaking C'(ratio), or ``None`` if the condition holds."""
        for r, k in self.piece_lengths():
            if k >= ratio * len(r):
                return r[:k], r
        return None


def free_reduce(word: Iterable[int], inverse: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == inverse[x]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int], inverse: Sequence[int]) -> Word:
    w = free_reduce(word, inverse)
    i, j = 0, len(w)
    while j - i > 1 and w[i] == inverse[w[j - 1]]:
        i += 1
        j -= 1
    return w[i:j]


_TOKEN_SUFFIX = re.compile(r"\^(-?\d+)|⁻¹")


def _parse_word(text: str, index: dict[str, int], inverse: Sequence[int], line: int | None,
                offset: int = 0) -> list[int]:
    """Tokenise a juxtaposition of generator names, powers and commutators."""
    names = sorted(index, key=len, reverse=True)
    out: list[int] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch == "*":
            pos += 1
            continue
        if ch == "[":
            close = _matching_bracket(text, pos, line, offset)
            inner = text[pos + 1:close]
            parts = _split_top_level(inner, ",")
            if len(parts) != 2:
                raise PresentationError("commutator needs exactly two entries", line, offset + pos + 1)
            x = _parse_word(parts[0], index, inverse, line, offset + pos + 1)
            y = _parse_word(parts[1], index, inverse, line, offset + pos + 2 + len(parts[0]))
            xi = [inverse[t] for t in reversed(x)]
            yi = [inverse[t] for t in reversed(y)]
            out.extend(x + y + xi + yi)
            pos = close + 1
            continue
        for name in names:
            if text.startswith(name, pos):
                g = index[name]
                pos += len(name)
                m = _TOKEN_SUFFIX.match(text, pos)
                power = 1
                if m:
                    power = -1 if m.group(0) == "⁻¹" else int(m.group(1))
                    pos = m.end()
                if power < 0:
                    g, power = inverse[g], -power
                out.extend([g] * power)
                break
        else:
            raise PresentationError(f"unexpected character {ch!r}", line, offset + pos + 1)
    return out


def _matching_bracket(text: str, start: int, line: int | None, offset: int) -> int:
    depth = 0
    for k in range(start, len(text)):
        if text[k] == "[":
            depth += 1
        elif text[k] == "]":
            depth -= 1
            if depth == 0:
                return k
    raise PresentationError("unbalanced '['", line, offset + start + 1)


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _closure(names: list[str], line: int) -> tuple[list[str], list[int]]:
    """Order generators with formal inverses.

    Listed order is significant; an inverse that is not listed explicitly is
    placed right after its generator.
    """
    def inverse_name(s: str) -> str:
        return s[:-3] if s.endswith("^-1") else s + "^-1"

    listed = set(names)
    if len(listed) != len(names):
        raise PresentationError("duplicate generator", line)
    for s in names:
        if s.endswith("^-1") and s[:-3] not in listed:
            raise PresentationError(f"inverse {s!r} listed without its generator", line)
    symbols: list[str] = []
    for s in names:
        symbols.append(s)
        t = inverse_name(s)
        if t not in listed:
            symbols.append(t)
    pos = {s: i for i, s in enumerate(symbols)}
    return symbols, [pos[inverse_name(s)] for s in symbols]


def parse_presentation(text: str, name: str = "", check: bool = True) -> GroupPresentation:
    """Parse presentation-file text.

    Lines (or ``;``-separated clauses) are ``gens: ...``, ``rel: <word>``,
    ``rels: <word>, <word>`` (or ``(none)``) and ``oracle: free|dehn|table <path>``.
    Blank lines and ``#`` comments are ignored.
    """
    gens: list[str] | None = None
    gens_line = 0
    raw_rels: list[tuple[str, int, int]] = []
    oracle: str | None = None
    table_path: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for clause in line.split(";"):
            start = col
            col += len(clause) + 1
            if not clause.strip():
                continue
            if ":" not in clause:
                raise PresentationError("expected 'key: value'", lineno, start + 1)
            key, value = clause.split(":", 1)
            key = key.strip().lower()
            vstart = start + len(clause) - len(value) + 1
            if key == "gens":
                gens = value.split()
                gens_line = lineno
                if not gens:
                    raise PresentationError("no generators", lineno, vstart)
                for g in gens:
                    base = g[:-3] if g.endswith("^-1") else g
                    if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", base):
                        raise PresentationError(f"bad generator name {g!r}", lineno, vstart)
            elif key in ("rel", "rels"):
                v = value.strip()
                if v.lower() in ("(none)", "none", ""):
                    continue
                parts = [value] if key == "rel" else _split_top_level(value, ",")
                off = vstart
                for p in parts:
                    raw_rels.append((p, lineno, off))
                    off += len(p) + 1
            elif key == "oracle":
                toks = value.split()
                if not toks or toks[0] not in ("free", "dehn", "table"):
                    raise PresentationError("oracle must be free, dehn or table <path>", lineno, vstart)
                oracle = {"free": "free", "dehn": "dehn-small-cancellation", "table": "table-import"}[toks[0]]
                if toks[0] == "table":
                    if len(toks) != 2:
                        raise PresentationError("table oracle needs a path", lineno, vstart)
                    table_path = toks[1]
            else:
                raise PresentationError(f"unknown key {key!r}", lineno, start + 1)
    if gens is None:
        raise PresentationError("missing 'gens:' line")
    symbols, inverse = _closure(gens, gens_line)
    index = {s: i for i, s in enumerate(symbols)}
    relators: list[Word] = []
    for text_r, lineno, off in raw_rels:
        w = _parse_word(text_r, index, inverse, lineno, off - 1)
        r = tuple(w)
        if not r:
            raise PresentationError("empty relator", lineno, off)
        if free_reduce(r, inverse) != r or (len(r) > 1 and inverse[r[0]] == r[-1]):
            raise PresentationError(f"relator {text_r.strip()!r} is not freely and cyclically reduced",
                                    lineno, off)
        relators.append(r)
    if oracle is None:
        oracle = "dehn-small-cancellation" if relators else "free"
    if oracle == "free" and relators:
        raise PresentationError("free oracle requested for a presentation with relators")
    pres = GroupPresentation(tuple(symbols), tuple(inverse), tuple(relators), oracle, table_path, name)
    if check and oracle == "dehn-small-cancellation":
        bad = pres.small_cancellation_violation()
        if bad is not None:
            piece, rel = bad
            raise PresentationError(
                f"C'(1/6) fails: piece {pres.format(piece)!r} of length {len(piece)} "
                f"in relator {pres.format(rel)!r} of length {len(rel)}")
    return pres


def load_presentation(path: str | Path, check: bool = True) -> GroupPresentation:
    p = Path(path)
    pres = parse_presentation(p.read_text(encoding="utf-8"), name=p.stem, check=check)
    if pres.table_path and not Path(pres.table_path).is_absolute():
        object.__setattr__(pres, "table_path", str(p.parent / pres.table_path))
    return pres
