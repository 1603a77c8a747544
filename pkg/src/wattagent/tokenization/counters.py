"""Token counters.

Three kinds are supported: a character heuristic (``ceil(len / divisor)``),
whitespace-separated words, and byte-level BPE loaded from a vocabulary
JSON file plus a merges file in the GPT-2 layout.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from ..errors import ConfigurationError, ValidationError

HEURISTIC = "heuristic-chars"
WHITESPACE = "whitespace-words"
BPE = "bpe"
KINDS = (HEURISTIC, WHITESPACE, BPE)

# GPT-2 style pretokenizer, with \p{L} / \p{N} approximated by stdlib classes
PRETOKEN_RE = re.compile(
    r"""'s|'t|'re|'ve|'m|'ll|'d| ?[^\W\d_]+| ?\d+| ?[^\s\w]+|\s+(?!\S)|\s+"""
)


@dataclass(frozen=True)
class HeuristicCharCounter:
    divisor: float = 4.0
    id: str = ""
    kind: str = field(default=HEURISTIC, init=False)

    def __post_init__(self):
        if not (math.isfinite(self.divisor) and self.divisor > 0):
            raise ValidationError(f"divisor must be positive, got {self.divisor!r}")
        if not self.id:
            object.__setattr__(self, "id", f"{HEURISTIC}/{self.divisor:g}")

    # markup overhead bound per element when a page is split into element slices
    markup_epsilon = 1

    def count(self, text: str) -> int:
        return math.ceil(len(text) / self.divisor)


@dataclass(frozen=True)
class WhitespaceWordCounter:
    id: str = WHITESPACE
    kind: str = field(default=WHITESPACE, init=False)

    # each element slice introduces two cut points, each splits at most one word
    markup_epsilon = 2

    def count(self, text: str) -> int:
        return len(text.split())


@lru_cache(maxsize=None)
def bytes_to_unicode() -> dict[int, str]:
    """The reversible byte -> printable character table used by GPT-2 BPE files."""
    printable = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("¡"), ord("¬") + 1))
        + list(range(ord("®"), ord("ÿ") + 1))
    )
    chars = printable[:]
    n = 0
    for b in range(256):
        if b not in printable:
            printable.append(b)
            chars.append(256 + n)
            n += 1
    return dict(zip(printable, map(chr, chars)))


class BPECounter:
    """Byte-level BPE counter.

    ``vocab`` maps token strings to ids and ``merges`` is the ranked list of
    symbol pairs.  Symbols that survive merging but are missing from the
    vocabulary still count as one token each.
    """

    kind = BPE
    markup_epsilon = 2

    def __init__(self, vocab: dict[str, int], merges: list[tuple[str, str]], id: str = BPE):
        self.vocab = dict(vocab)
        self.merges = list(merges)
        self.ranks = {pair: rank for rank, pair in enumerate(self.merges)}
        self.id = id
        self._byte_map = bytes_to_unicode()
        self._cache: dict[str, int] = {}

    @classmethod
    def from_files(cls, vocab_path, merges_path, id: str | None = None) -> BPECounter:
        vocab_path, merges_path = Path(vocab_path), Path(merges_path)
        try:
            vocab = json.loads(vocab_path.read_text(encoding="utf-8"))
            merge_lines = merges_path.read_text(encoding="utf-8").splitlines()
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot load BPE assets: {exc}") from exc
        if not isinstance(vocab, dict):
            raise ConfigurationError(f"{vocab_path}: vocabulary must be a JSON object")
        merges = []
        for lineno, line in enumerate(merge_lines, 1):
            if not line.strip() or line.startswith("#version"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigurationError(
                    f"{merges_path}:{lineno}: expected two space-separated symbols"
                )
            merges.append((parts[0], parts[1]))
        return cls(vocab, merges, id=id or f"{BPE}:{vocab_path.stem}")

    def encode_pretoken(self, pretoken: str) -> list[str]:
        symbols = [self._byte_map[b] for b in pretoken.encode("utf-8")]
        while len(symbols) > 1:
            best = None
            for i in range(len(symbols) - 1):
                rank = self.ranks.get((symbols[i], symbols[i + 1]))
                if rank is not None and (best is None or rank < best[0]):
                    best = (rank, i)
            if best is None:
                break
            pair = (symbols[best[1]], symbols[best[1] + 1])
            merged = []
            i = 0
            while i < len(symbols):
                if i < len(symbols) - 1 and (symbols[i], symbols[i + 1]) == pair:
                    merged.append(pair[0] + pair[1])
                    i += 2
                else:
                    merged.append(symbols[i])
                    i += 1
            symbols = merged
        return symbols

    def tokenize(self, text: str) -> list[str]:
        out = []
        for pretoken in PRETOKEN_RE.findall(text):
            out.extend(self.encode_pretoken(pretoken))
        return out

    def count(self, text: str) -> int:
        total = 0
        for pretoken in PRETOKEN_RE.findall(text):
            n = self._cache.get(pretoken)
            if n is None:
                n = len(self.encode_pretoken(pretoken))
                self._cache[pretoken] = n
            total += n
        return total

    def __repr__(self):
        return f"BPECounter(id={self.id!r}, vocab={len(self.vocab)}, merges={len(self.merges)})"


TokenCounter = HeuristicCharCounter | WhitespaceWordCounter | BPECounter

DEFAULT_COUNTER = HeuristicCharCounter(4.0)


def count_tokens(text: str, counter: TokenCounter = DEFAULT_COUNTER) -> int:
    if not isinstance(text, str):
        raise ValidationError(f"expected text, got {type(text).__name__}")
    if not text:
        return 0
    return counter.count(text)


def make_counter(kind: str = HEURISTIC, *, divisor: float = 4.0, vocab=None,
                 merges=None, id: str | None = None) -> TokenCounter:
    """Build a counter by kind name, as used by the command line."""
    if kind == HEURISTIC:
        return HeuristicCharCounter(divisor, id=id or "")
    if kind == WHITESPACE:
        return WhitespaceWordCounter(id=id or WHITESPACE)
    if kind == BPE:
        if vocab is None or merges is None:
            raise ConfigurationError("bpe counter needs both a vocabulary and a merges file")
        return BPECounter.from_files(vocab, merges, id=id)
    raise ValidationError(f"unknown counter kind {kind!r}; expected one of {KINDS}")
