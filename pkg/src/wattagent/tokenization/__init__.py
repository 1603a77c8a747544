"""Token counting, corpus statistics and DOM-expansion analysis."""

from .corpus import CorpusStats, corpus_paths, corpus_stats, load_corpus
from .counters import (
    DEFAULT_COUNTER,
    BPECounter,
    HeuristicCharCounter,
    TokenCounter,
    WhitespaceWordCounter,
    count_tokens,
    make_counter,
)
from .dom import (
    FULL_CONTEXT,
    NO_CONTEXT,
    POLICIES,
    ContextPolicy,
    DomElement,
    ExpansionEstimate,
    cleaned_element_repr,
    dom_elements,
    dom_expansion_factor,
    page_expansion_counts,
    strip_script_style,
)

__all__ = [
    "BPECounter", "ContextPolicy", "CorpusStats", "DEFAULT_COUNTER", "DomElement",
    "ExpansionEstimate", "FULL_CONTEXT", "HeuristicCharCounter", "NO_CONTEXT", "POLICIES",
    "TokenCounter", "WhitespaceWordCounter", "cleaned_element_repr", "corpus_paths",
    "corpus_stats", "count_tokens", "dom_elements", "dom_expansion_factor", "load_corpus",
    "make_counter", "page_expansion_counts", "strip_script_style",
]
