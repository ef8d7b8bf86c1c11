"""Deterministic text perturbations.

Three surface-level transforms (random capitalization, character pruning,
leet-style numerization), three meaning-altering transforms (negation
toggling, sentence shuffling, word shuffling), plus filler-text insertion
and positional token removal.  Every operation is a pure function of its
inputs and an explicit seed; nothing reads global RNG state, so documents
can be processed in any order or in parallel without changing results.

Token counts always come from the configured tokenizer, never from
character counts, and all token-count rounding is half-away-from-zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InputError
from .rng import Rng, round_half_away
from .tokenization import Tokenizer

PERTURBATION_KINDS = (
    "random_caps",
    "char_prune",
    "numerize",
    "negation",
    "sentence_shuffle",
    "word_shuffle",
    "needle_insert",
    "token_remove",
)

SUPERFICIAL_KINDS = ("random_caps", "char_prune", "numerize")
SEMANTIC_KINDS = ("negation", "sentence_shuffle", "word_shuffle")

_NUMERIZE_TABLE = str.maketrans({"e": "3", "i": "1", "a": "4", "o": "0"})

# Ordered longest-match-first so "is not" toggles to "is" instead of
# rematching as "is"; produced text is never rescanned.
_NEGATION_PAIRS = [
    ("is not", "is"),
    ("are not", "are"),
    ("was not", "was"),
    ("were not", "were"),
    ("cannot", "can"),
    ("will not", "will"),
    ("does not", "does"),
    ("do not", "do"),
    ("has not", "has"),
    ("have not", "have"),
    ("is", "is not"),
    ("are", "are not"),
    ("was", "was not"),
    ("were", "were not"),
    ("can", "cannot"),
    ("will", "will not"),
    ("does", "does not"),
    ("do", "do not"),
    ("has", "has not"),
    ("have", "have not"),
]
_NEGATION_RE = re.compile(
    r"\b(?:" + "|".join(re.escape(pattern) for pattern, _ in _NEGATION_PAIRS) + r")\b"
)
_NEGATION_MAP = dict(_NEGATION_PAIRS)


@dataclass(frozen=True)
class PerturbationSpec:
    """Fully determines one transformation of one text."""

    kind: str
    position: float = 0.0
    proportion: float = 0.15
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in PERTURBATION_KINDS:
            raise InputError(f"unknown perturbation kind {self.kind!r}")
        if not 0.0 <= self.position <= 1.0:
            raise InputError("position must be in [0, 1]")
        if self.kind == "token_remove" and not 0.0 < self.proportion <= 1.0:
            raise InputError("removal proportion must be in (0, 1]")
        if self.kind == "needle_insert" and self.proportion <= 0.0:
            raise InputError("insertion proportion must be > 0")

    @property
    def label(self) -> str:
        if self.kind in ("needle_insert", "token_remove"):
            return f"{self.kind}@p{self.proportion:g}@pos{self.position:g}"
        return self.kind


def random_capitalization(text: str, fraction: float = 0.25, seed: int = 0) -> str:
    """Uppercase an exact fraction of the alphabetic characters.

    Positions are chosen without replacement by the seeded generator and
    are only ever uppercased, never case-switched.
    """
    if not 0.0 <= fraction <= 1.0:
        raise InputError("fraction must be in [0, 1]")
    alpha_positions = [i for i, ch in enumerate(text) if ch.isalpha()]
    count = round_half_away(fraction * len(alpha_positions))
    if count == 0:
        return text
    chosen = Rng(seed).sample_indices(len(alpha_positions), count)
    chars = list(text)
    for index in chosen:
        pos = alpha_positions[index]
        upper = chars[pos].upper()
        if len(upper) == 1:
            chars[pos] = upper
    return "".join(chars)


def char_prune(text: str, n: int = 10) -> str:
    """Remove the character at every n-th 1-based index of the original.

    When that character is whitespace the next non-space character is
    removed instead, keeping word boundaries intact.
    """
    if n < 2:
        raise InputError("char_prune step must be >= 2")
    remove: set[int] = set()
    for mark in range(n, len(text) + 1, n):
        idx = mark - 1
        if text[idx].isspace():
            j = idx + 1
            while j < len(text) and (text[j].isspace() or j in remove):
                j += 1
            if j < len(text):
                remove.add(j)
        else:
            remove.add(idx)
    return "".join(ch for i, ch in enumerate(text) if i not in remove)


def numerize(text: str) -> str:
    """Substitute lowercase e/i/a/o with 3/1/4/0."""
    return text.translate(_NUMERIZE_TABLE)


def toggle_negation(text: str) -> str:
    """Toggle common affirmative/negative verb forms in one pass.

    Matching is word-bounded, case-sensitive, and longest-pattern-first;
    each replacement is emitted once and never rematched.
    """
    return _NEGATION_RE.sub(lambda m: _NEGATION_MAP[m.group(0)], text)


def split_sentences(text: str) -> list[str]:
    """Split on '.', '!' or '?' followed by whitespace or end of text;
    terminators stay with their sentence."""
    sentences: list[str] = []
    buf: list[str] = []
    last = len(text) - 1
    for i, ch in enumerate(text):
        buf.append(ch)
        if ch in ".!?" and (i == last or text[i + 1].isspace()):
            sentence = "".join(buf).strip()
            if sentence:
                sentences.append(sentence)
            buf = []
    tail = "".join(buf).strip()
    if tail:
        sentences.append(tail)
    return sentences


def shuffle_sentences(text: str, seed: int = 0) -> str:
    """Seeded permutation of the sentences, rejoined with single spaces."""
    sentences = split_sentences(text)
    if len(sentences) < 2:
        return text
    Rng(seed).shuffle(sentences)
    return " ".join(sentences)


def shuffle_words(text: str, seed: int = 0) -> str:
    """Seeded permutation of whitespace-delimited words."""
    words = text.split()
    if len(words) < 2:
        return text
    Rng(seed).shuffle(words)
    return " ".join(words)


def insert_needle(
    text: str,
    proportion: float,
    position: float,
    tokenizer: Tokenizer,
    needle_source: str,
) -> str:
    """Insert filler text sized as a proportion of the document's tokens.

    The needle is the first ``round(proportion * |tokens|)`` tokens of the
    filler source (cycled if the source is shorter), decoded and spliced
    in at character index ``floor(position * len(text))`` with a single
    space on each interior seam.
    """
    if not text:
        raise InputError("cannot insert into empty text")
    if proportion <= 0:
        raise InputError("insertion proportion must be > 0")
    if not 0.0 <= position <= 1.0:
        raise InputError("position must be in [0, 1]")
    doc_tokens = tokenizer.encode(text).tokens
    count = round_half_away(proportion * len(doc_tokens))
    if count == 0:
        return text
    source_tokens = tokenizer.encode(needle_source).tokens
    if not source_tokens:
        raise InputError("needle source has no tokens")
    chunks = []
    remaining = count
    while remaining > 0:  # cycle a too-short source, one space per seam
        take = min(remaining, len(source_tokens))
        chunks.append(tokenizer.decode(source_tokens[:take]))
        remaining -= take
    needle = " ".join(chunks)
    index = math.floor(position * len(text))
    left, right = text[:index], text[index:]
    out = needle
    if left:
        out = left + " " + out
    if right:
        out = out + " " + right
    return out


def remove_tokens(
    text: str,
    proportion: float,
    position: float,
    tokenizer: Tokenizer,
) -> str:
    """Remove one contiguous token span.

    With T = encode(text), k = round(proportion * |T|) tokens are dropped
    starting at floor(position * (1 - proportion) * |T|); the start index
    shifts with the proportion so position 1.0 trims the tail exactly.
    """
    if not text:
        raise InputError("cannot remove from empty text")
    if not 0.0 < proportion <= 1.0:
        raise InputError("removal proportion must be in (0, 1]")
    if not 0.0 <= position <= 1.0:
        raise InputError("position must be in [0, 1]")
    tokens = tokenizer.encode(text).tokens
    total = len(tokens)
    count = min(round_half_away(proportion * total), total)
    if count == 0:
        return text
    start = math.floor(position * (1.0 - proportion) * total)
    start = max(0, min(start, total - count))
    return tokenizer.decode(tokens[:start] + tokens[start + count :])


def apply_spec(
    text: str,
    spec: PerturbationSpec,
    tokenizer: Tokenizer,
    needle_source: str,
) -> str:
    """Apply one perturbation described by ``spec``."""
    if spec.kind == "random_caps":
        return random_capitalization(text, seed=spec.seed)
    if spec.kind == "char_prune":
        return char_prune(text)
    if spec.kind == "numerize":
        return numerize(text)
    if spec.kind == "negation":
        return toggle_negation(text)
    if spec.kind == "sentence_shuffle":
        return shuffle_sentences(text, seed=spec.seed)
    if spec.kind == "word_shuffle":
        return shuffle_words(text, seed=spec.seed)
    if spec.kind == "needle_insert":
        return insert_needle(text, spec.proportion, spec.position, tokenizer, needle_source)
    if spec.kind == "token_remove":
        return remove_tokens(text, spec.proportion, spec.position, tokenizer)
    raise InputError(f"unknown perturbation kind {spec.kind!r}")


def corpus_perturbations(seed: int = 0) -> list[PerturbationSpec]:
    """The 18 perturbation types used for corpus augmentation: the six
    text transforms plus insertion and removal over 3 positions x 2 sizes."""
    specs = [PerturbationSpec(kind=kind, seed=seed) for kind in SUPERFICIAL_KINDS + SEMANTIC_KINDS]
    for kind in ("needle_insert", "token_remove"):
        for position in (0.0, 0.5, 1.0):
            for proportion in (0.15, 0.5):
                specs.append(
                    PerturbationSpec(
                        kind=kind, position=position, proportion=proportion, seed=seed
                    )
                )
    return specs


def load_needle_text(path: str | Path | None = None) -> str:
    """Filler text used for insertion; the bundled file keeps runs offline."""
    if path is not None:
        return Path(path).read_text("utf-8")
    return (
        resources.files("simbench").joinpath("fixtures/needle.txt").read_text("utf-8")
    )
