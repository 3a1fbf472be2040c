"""Deterministic token counting.

The counter is intentionally model-free: it segments text into maximal
Unicode word runs (``\\w+``) and, optionally, counts every remaining
non-space character as one punctuation token. The same text and config
yield the same count on every platform, which the budgeting and energy
code relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_WORD_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)
_WORD_ONLY_RE = re.compile(r"\w+", re.UNICODE)


@dataclass(frozen=True)
class TokenizerConfig:
    mode: str = "unicode-words"  # "unicode-words" or "whitespace"
    count_punctuation: bool = True

    def __post_init__(self):
        if self.mode not in ("unicode-words", "whitespace"):
            raise ValueError(f"unknown tokenizer mode: {self.mode!r}")


DEFAULT_TOKENIZER = TokenizerConfig()


def tokenize(text: str, cfg: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """Split ``text`` into tokens under ``cfg``."""
    if not text:
        return []
    if cfg.mode == "whitespace":
        return text.split()
    if cfg.count_punctuation:
        return _WORD_RE.findall(text)
    return _WORD_ONLY_RE.findall(text)


def count_tokens(text: str, cfg: TokenizerConfig = DEFAULT_TOKENIZER) -> int:
    """Number of tokens in ``text``. Empty text counts zero."""
    return len(tokenize(text, cfg))
