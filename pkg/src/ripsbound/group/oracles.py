"""Word-problem oracles.

Every oracle answers two questions about a word over the generators: is it the
identity, and what is its shortlex-least representative.  Three back ends
exist: free reduction, Dehn's algorithm for C'(1/6) presentations, and an
imported multiplication table.
"""
from __future__ import annotations

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Sequence

from .presentation import GroupPresentation, Word, free_reduce


class OracleBudgetExceeded(RuntimeError):
    """The oracle could not certify an answer within its work budget."""


class WordOracle(ABC):
    kind: str = ""

    def __init__(self, presentation: GroupPresentation):
        self.presentation = presentation
        self.inverse = presentation.inverse

    @abstractmethod
    def normalize(self, word: Sequence[int]) -> Word:
        """Shortlex-least word representing the same element."""

    def is_identity(self, word: Sequence[int]) -> bool:
        return not self.normalize(word)

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_identity(tuple(u) + self.presentation.invert(v))


class FreeOracle(WordOracle):
    kind = "free"

    def normalize(self, word: Sequence[int]) -> Word:
        return free_reduce(word, self.inverse)


class DehnOracle(WordOracle):
    """Dehn's algorithm with a shortlex search over half-relator swaps.

    Greedy replacement of any subword longer than half a symmetrized relator
    by the shorter complement decides the word problem under C'(1/6).  That
    alone leaves a geodesic but not necessarily shortlex-least word, so the
    normal form is the least word in the closure of the reduced word under
    length-preserving swaps of exact relator halves.  A swap that opens up a
    further reduction restarts the search from the shorter word.
    """

    kind = "dehn-small-cancellation"

    def __init__(self, presentation: GroupPresentation, closure_budget: int = 20000):
        super().__init__(presentation)
        self.closure_budget = closure_budget
        self._shorten: dict[int, dict[Word, Word]] = {}
        self._swap: dict[int, dict[Word, list[Word]]] = {}
        for r in presentation.symmetrized_relators():
            n = len(r)
            for k in range(n // 2 + 1, n + 1):
                u = r[:k]
                v = presentation.invert(r[k:])
                best = self._shorten.setdefault(k, {}).get(u)
                if best is None or (len(v), v) < (len(best), best):
                    self._shorten[k][u] = v
            if n % 2 == 0:
                h = n // 2
                u, v = r[:h], presentation.invert(r[h:])
                alts = self._swap.setdefault(h, {}).setdefault(u, [])
                if v not in alts:
                    alts.append(v)
        self._shorten_lengths = sorted(self._shorten, reverse=True)
        self._swap_lengths = sorted(self._swap)
        self._memo: dict[Word, Word] = {}

    def reduce(self, word: Sequence[int]) -> Word:
        """Free reduction plus greedy Dehn shortening until no long relator piece remains."""
        w = list(free_reduce(word, self.inverse))
        inv = self.inverse
        changed = True
        while changed:
            changed = False
            for k in self._shorten_lengths:
                table = self._shorten[k]
                for i in range(len(w) - k + 1):
                    rep = table.get(tuple(w[i:i + k]))
                    if rep is not None:
                        w[i:i + k] = rep
                        # local free reduction around the splice
                        w = list(free_reduce(w, inv))
                        changed = True
                        break
                if changed:
                    break
        return tuple(w)

    def is_identity(self, word: Sequence[int]) -> bool:
        return not self.reduce(word)

    def _swaps(self, w: Word):
        for h in self._swap_lengths:
            table = self._swap[h]
            for i in range(len(w) - h + 1):
                alts = table.get(w[i:i + h])
                if alts:
                    for v in alts:
                        yield w[:i] + v + w[i + h:]

    def normalize(self, word: Sequence[int]) -> Word:
        key = tuple(word)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._normalize(key)
            if len(self._memo) > 200_000:
                self._memo.clear()
            self._memo[key] = hit
        return hit

    def _normalize(self, word: Word) -> Word:
        w = self.reduce(word)
        if not self._swap_lengths:
            return w
        while True:
            best = w
            seen = {w}
            stack = [w]
            shorter = None
            while stack and shorter is None:
                u = stack.pop()
                for v in self._swaps(u):
                    if v in seen:
                        continue
                    r = self.reduce(v)
                    if len(r) < len(w):
                        shorter = r
                        break
                    seen.add(v)
                    if len(seen) > self.closure_budget:
                        raise OracleBudgetExceeded(
                            f"half-swap closure exceeded {self.closure_budget} words")
                    if v < best:
                        best = v
                    stack.append(v)
            if shorter is None:
                return best
            w = shorter


class TableOracle(WordOracle):
    """Normal forms looked up by walking an imported right-multiplication table.

    The table file is JSON: ``{"generators": [...], "words": [[...], ...],
    "table": [[...], ...]}`` where ``words[i]`` is the normal form (symbol
    list) of element ``i``, element 0 is the identity, and ``table[i][s]`` is
    the index of ``i * s`` or ``null`` when missing.
    """

    kind = "table-import"

    def __init__(self, presentation: GroupPresentation, path: str | Path | None = None):
        super().__init__(presentation)
        path = path or presentation.table_path
        if path is None:
            raise ValueError("table oracle needs a table path")
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if list(data["generators"]) != list(presentation.symbols):
            raise ValueError("table generators do not match the presentation order")
        self.words: list[Word] = [tuple(presentation.index(s) for s in w) for w in data["words"]]
        self.table: list[list[int | None]] = data["table"]
        if self.words[0]:
            raise ValueError("element 0 of the table must be the identity")

    def element(self, word: Sequence[int]) -> int:
        g = 0
        for x in word:
            nxt = self.table[g][x]
            if nxt is None:
                raise OracleBudgetExceeded(
                    f"table has no entry for element {g} times {self.presentation.symbols[x]}")
            g = nxt
        return g

    def normalize(self, word: Sequence[int]) -> Word:
        return self.words[self.element(word)]


def make_oracle(presentation: GroupPresentation, **kwargs) -> WordOracle:
    if presentation.oracle_hint == "free":
        return FreeOracle(presentation)
    if presentation.oracle_hint == "dehn-small-cancellation":
        return DehnOracle(presentation, **kwargs)
    return TableOracle(presentation, **kwargs)
