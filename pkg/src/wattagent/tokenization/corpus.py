"""Corpus loading and average-tokens-per-page statistics."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import ValidationError
from .counters import DEFAULT_COUNTER, TokenCounter, count_tokens
from .dom import strip_script_style

HTML_SUFFIXES = (".html", ".htm")


@dataclass(frozen=True)
class CorpusStats:
    counter_id: str
    page_count: int
    total_tokens: int
    mean_tokens_per_page: float

    def __post_init__(self):
        if not isinstance(self.page_count, int) or self.page_count < 1:
            raise ValidationError(f"page_count must be a positive integer, got {self.page_count!r}")
        if not isinstance(self.total_tokens, int) or self.total_tokens < 0:
            raise ValidationError(f"total_tokens must be a nonnegative integer, got {self.total_tokens!r}")
        if self.mean_tokens_per_page != self.total_tokens / self.page_count:
            raise ValidationError("mean_tokens_per_page must equal total_tokens / page_count")

    @classmethod
    def from_totals(cls, counter_id: str, page_count: int, total_tokens: int) -> CorpusStats:
        return cls(counter_id, page_count, total_tokens, total_tokens / page_count)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> CorpusStats:
        expected = {"counter_id", "page_count", "total_tokens", "mean_tokens_per_page"}
        unknown = set(data) - expected
        if unknown:
            raise ValidationError(f"unknown corpus-stats field(s): {sorted(unknown)}")
        missing = expected - set(data) - {"mean_tokens_per_page"}
        if missing:
            raise ValidationError(f"missing corpus-stats field(s): {sorted(missing)}")
        stats = cls.from_totals(str(data["counter_id"]), data["page_count"], data["total_tokens"])
        if "mean_tokens_per_page" in data and data["mean_tokens_per_page"] != stats.mean_tokens_per_page:
            raise ValidationError("mean_tokens_per_page does not match total_tokens / page_count")
        return stats

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def load(cls, path) -> CorpusStats:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _page_tokens(page, counter, include_scripts):
    if not include_scripts:
        page = strip_script_style(page)
    return count_tokens(page, counter)


def corpus_stats(pages, counter: TokenCounter = DEFAULT_COUNTER, *,
                 include_scripts: bool = True, workers: int = 1) -> CorpusStats:
    """Average token count per page.

    ``include_scripts=False`` drops ``<script>``/``<style>`` elements before
    counting.  With ``workers > 1`` pages are counted on a thread pool; the
    integer total does not depend on scheduling.
    """
    pages = list(pages)
    if not pages:
        raise ValidationError("corpus is empty")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda p: _page_tokens(p, counter, include_scripts), pages))
    else:
        counts = [_page_tokens(p, counter, include_scripts) for p in pages]
    return CorpusStats.from_totals(counter.id, len(counts), sum(counts))


def corpus_paths(source) -> list[Path]:
    """Resolve a corpus directory (``*.html``/``*.htm``) or a manifest file of paths."""
    source = Path(source)
    if source.is_dir():
        paths = sorted(p for p in source.iterdir()
                       if p.is_file() and p.suffix.lower() in HTML_SUFFIXES)
    else:
        base = source.parent
        paths = []
        for line in source.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                p = Path(line)
                paths.append(p if p.is_absolute() else base / p)
    if not paths:
        raise ValidationError(f"no HTML pages found in {source}")
    return paths


def read_pages(paths):
    for path in paths:
        yield Path(path).read_text(encoding="utf-8", errors="replace")


def load_corpus(source) -> list[str]:
    return list(read_pages(corpus_paths(source)))
