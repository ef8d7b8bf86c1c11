"""Token-level view of text.

Two interchangeable tokenizers sit behind one interface:

* :class:`BpeTokenizer` — byte-level byte-pair encoding driven by a
  vocabulary file (``base64(token_bytes) <rank>`` per line, all 256
  single bytes included).  Use this when a specific BPE vocabulary must
  be reproduced.
* :class:`SimpleTokenizer` — a self-contained fallback needing no data
  file.  Text is split into pieces of the form "optional leading
  whitespace + word or single punctuation mark" (plus a trailing
  whitespace piece), mirroring the whitespace-prefixed tokens BPE
  vocabularies produce.  A piece's id encodes its bytes directly, so
  decoding needs no lookup table.

Both tokenizers satisfy ``decode(encode(t)) == t`` for any valid UTF-8
input and are immutable after construction, hence safe to share across
worker threads.
"""

from __future__ import annotations

import base64
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError

# Whitespace attaches to the following word/punctuation piece; a bare
# whitespace run can only survive at end-of-text.
_PIECE_RE = re.compile(r"\s*(?:\w+|[^\w\s])|\s+\Z")


@dataclass(frozen=True)
class TokenSequence:
    """Ordered token ids plus the character length of the source text."""

    tokens: tuple[int, ...]
    source_length: int

    def __len__(self) -> int:
        return len(self.tokens)


class Tokenizer:
    """Interface shared by both tokenizer implementations."""

    name: str = "base"

    def encode(self, text: str) -> TokenSequence:
        raise NotImplementedError

    def decode(self, tokens: TokenSequence | Sequence[int]) -> str:
        raise NotImplementedError

    def token_set(self, text: str) -> set[int]:
        """Distinct token ids of ``text``."""
        return set(self.encode(text).tokens)


def split_pieces(text: str) -> list[str]:
    """Split ``text`` into pieces whose concatenation reproduces it."""
    return _PIECE_RE.findall(text)


class SimpleTokenizer(Tokenizer):
    """Fallback tokenizer: one token per piece, ids are the piece bytes.

    A piece's id is the big-endian integer of ``b"\\x01" + piece_bytes``;
    the sentinel byte keeps ids nonzero and decoding unambiguous.
    """

    name = "simple"

    def __init__(self) -> None:
        self._encode_ids = lru_cache(maxsize=65536)(self._encode_ids_impl)

    @staticmethod
    def _encode_ids_impl(text: str) -> tuple[int, ...]:
        return tuple(
            int.from_bytes(b"\x01" + piece.encode("utf-8"), "big")
            for piece in split_pieces(text)
        )

    def encode(self, text: str) -> TokenSequence:
        if not isinstance(text, str):
            raise InputError("encode() expects a str")
        return TokenSequence(self._encode_ids(text), len(text))

    def decode(self, tokens: TokenSequence | Sequence[int]) -> str:
        ids = tokens.tokens if isinstance(tokens, TokenSequence) else tokens
        pieces = []
        for token_id in ids:
            if not isinstance(token_id, int) or token_id <= 0:
                raise InputError(f"invalid token id {token_id!r}")
            raw = token_id.to_bytes((token_id.bit_length() + 7) // 8, "big")
            if raw[:1] != b"\x01":
                raise InputError(f"unknown token id {token_id}")
            try:
                pieces.append(raw[1:].decode("utf-8"))
            except UnicodeDecodeError as exc:
                raise InputError(f"token id {token_id} is not valid UTF-8") from exc
        return "".join(pieces)


class BpeTokenizer(Tokenizer):
    """Byte-level BPE over a rank table loaded from a vocabulary file."""

    name = "bpe"

    def __init__(self, ranks: dict[bytes, int], vocab_id: str = "bpe"):
        missing = [b for b in range(256) if bytes([b]) not in ranks]
        if missing:
            raise InputError(
                f"vocabulary is missing {len(missing)} single-byte tokens "
                f"(first: {missing[0]:#04x})"
            )
        if len(set(ranks.values())) != len(ranks):
            raise InputError("vocabulary contains duplicate ranks")
        self._ranks = dict(ranks)
        self._vocab = {rank: token for token, rank in ranks.items()}
        self.name = vocab_id
        self._encode_ids = lru_cache(maxsize=65536)(self._encode_ids_impl)

    @classmethod
    def from_file(cls, path: str | Path) -> "BpeTokenizer":
        ranks: dict[bytes, int] = {}
        path = Path(path)
        for lineno, line in enumerate(path.read_text("utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                token_b64, rank_text = line.split()
                ranks[base64.b64decode(token_b64)] = int(rank_text)
            except (ValueError, TypeError) as exc:
                raise InputError(f"{path}:{lineno}: bad vocabulary line") from exc
        return cls(ranks, vocab_id=f"bpe:{path.name}")

    def _merge_piece(self, piece_bytes: bytes) -> list[int]:
        parts = [piece_bytes[i : i + 1] for i in range(len(piece_bytes))]
        while len(parts) > 1:
            best_rank = None
            best_idx = -1
            for i in range(len(parts) - 1):
                rank = self._ranks.get(parts[i] + parts[i + 1])
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
                    best_idx = i
            if best_rank is None:
                break
            parts[best_idx : best_idx + 2] = [parts[best_idx] + parts[best_idx + 1]]
        return [self._ranks[part] for part in parts]

    def _encode_ids_impl(self, text: str) -> tuple[int, ...]:
        ids: list[int] = []
        for piece in split_pieces(text):
            ids.extend(self._merge_piece(piece.encode("utf-8")))
        return tuple(ids)

    def encode(self, text: str) -> TokenSequence:
        if not isinstance(text, str):
            raise InputError("encode() expects a str")
        return TokenSequence(self._encode_ids(text), len(text))

    def decode(self, tokens: TokenSequence | Sequence[int]) -> str:
        ids = tokens.tokens if isinstance(tokens, TokenSequence) else tokens
        chunks = []
        for token_id in ids:
            token = self._vocab.get(token_id)
            if token is None:
                raise InputError(f"unknown token id {token_id}")
            chunks.append(token)
        try:
            return b"".join(chunks).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError("token sequence does not decode to UTF-8") from exc


def load_tokenizer(vocab_path: str | Path | None = None) -> Tokenizer:
    """Return the configured tokenizer: BPE if a vocabulary is given."""
    if vocab_path:
        return BpeTokenizer.from_file(vocab_path)
    return SimpleTokenizer()


def train_bpe_vocab(texts: Iterable[str], merges: int) -> dict[bytes, int]:
    """Train a small BPE rank table (used to build bundled vocabularies).

    Ranks 0-255 are the single bytes; each merge appends the currently
    most frequent adjacent pair, ties broken by lexicographic byte order
    so training is deterministic.
    """
    ranks: dict[bytes, int] = {bytes([b]): b for b in range(256)}
    corpus: list[list[bytes]] = []
    for text in texts:
        for piece in split_pieces(text):
            raw = piece.encode("utf-8")
            corpus.append([raw[i : i + 1] for i in range(len(raw))])
    for merge_index in range(merges):
        counts: dict[bytes, int] = {}
        for parts in corpus:
            for left, right in zip(parts, parts[1:]):
                joined = left + right
                if joined not in ranks:
                    counts[joined] = counts.get(joined, 0) + 1
        if not counts:
            break
        best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        ranks[best] = 256 + merge_index
        for parts in corpus:
            i = 0
            while i < len(parts) - 1:
                if parts[i] + parts[i + 1] == best:
                    parts[i : i + 2] = [best]
                else:
                    i += 1
    return ranks


def dump_bpe_vocab(ranks: dict[bytes, int]) -> str:
    """Serialize a rank table in the vocabulary-file format."""
    lines = [
        f"{base64.b64encode(token).decode('ascii')} {rank}"
        for token, rank in sorted(ranks.items(), key=lambda kv: kv[1])
    ]
    return "\n".join(lines) + "\n"
