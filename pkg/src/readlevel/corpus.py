"""Data model for leveled corpora and parallel simplification corpora.

Two line-oriented UTF-8 file formats are supported:

Labeled corpus (one fragment per line)::

    doc_id <TAB> frag_id <TAB> token(|level)? token(|level)? ... [<TAB> fragment_level]

Each token may carry an optional ``|level`` suffix; an optional fourth
column holds the fragment-level label. A trailing ``|`` followed by digits
is reserved for the level suffix and may not appear at the end of a bare
token surface.

Parallel corpus (one record per line)::

    doc_id <TAB> frag_id <TAB> original_tokens <TAB> level4_tokens <TAB> level3_tokens

Tokens are space-separated and unlabeled. Input is assumed pre-tokenized;
no tokenization of raw prose happens here.

Level values 1 and 2 are merged into level 3 once, at parse time, so all
downstream code only ever sees levels 3, 4, and 5.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import IO, Iterator, Optional, Union


class FormatError(ValueError):
    """A malformed record in one of the line-oriented file formats.

    Carries the 1-based line number when the error is tied to a line.
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReadabilityLevel(IntEnum):
    """Ordinal word/fragment difficulty label, ordered 3 < 4 < 5."""

    L3 = 3
    L4 = 4
    L5 = 5

    @classmethod
    def from_raw(cls, value: int) -> "ReadabilityLevel":
        """Map a raw annotation value in 1..5 to a level, merging 1-2 into 3."""
        if value in (1, 2):
            return cls.L3
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"readability level must be in 1..5, got {value!r}") from None

    def __str__(self) -> str:  # stable across Python versions
        return str(self.value)


LEVELS: tuple[ReadabilityLevel, ...] = (
    ReadabilityLevel.L3,
    ReadabilityLevel.L4,
    ReadabilityLevel.L5,
)

SPLITS = ("train", "dev", "test", "unsplit")

# Optional orthographic normalization (off by default): folds Alef variants
# to bare Alef, Alef Maqsura to Ya, and Ta Marbuta to Ha.
ORTHO_NORMALIZATION = str.maketrans({
    "أ": "ا",  # أ -> ا
    "إ": "ا",  # إ -> ا
    "آ": "ا",  # آ -> ا
    "ٱ": "ا",  # ٱ -> ا
    "ى": "ي",  # ى -> ي
    "ة": "ه",  # ة -> ه
})

_RESERVED_SUFFIX = re.compile(r"\|\d+$")
_TOKEN_WITH_LEVEL = re.compile(r"^(.*)\|(\d+)$")


@dataclass(frozen=True)
class Token:
    """A single whitespace-free word with an optional gold level."""

    surface: str
    gold_level: Optional[ReadabilityLevel] = None

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if any(ch.isspace() for ch in self.surface):
            raise ValueError(f"token surface may not contain whitespace: {self.surface!r}")
        if _RESERVED_SUFFIX.search(self.surface):
            raise ValueError(
                f"token surface may not end in '|'+digits (reserved for the level"
                f" suffix): {self.surface!r}"
            )


@dataclass(frozen=True)
class Fragment:
    """A non-empty token sequence with an optional gold fragment level."""

    doc_id: str
    frag_id: str
    tokens: tuple[Token, ...]
    gold_level: Optional[ReadabilityLevel] = None

    def __post_init__(self) -> None:
        _check_id("doc_id", self.doc_id)
        _check_id("frag_id", self.frag_id)
        if not self.tokens:
            raise ValueError(f"fragment {self.key} has no tokens")
        token_levels = [t.gold_level for t in self.tokens]
        if self.gold_level is not None and all(l is not None for l in token_levels):
            expected = max(token_levels)  # type: ignore[type-var]
            if self.gold_level != expected:
                raise ValueError(
                    f"fragment {self.key} gold level {self.gold_level} != max"
                    f" token level {expected}"
                )

    @property
    def key(self) -> tuple[str, str]:
        return (self.doc_id, self.frag_id)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    def effective_level(self) -> ReadabilityLevel:
        """The stored fragment level, or the max token level when unset."""
        if self.gold_level is not None:
            return self.gold_level
        levels = [t.gold_level for t in self.tokens]
        if any(l is None for l in levels):
            raise ValueError(f"fragment {self.key} has unlabeled tokens and no fragment level")
        return max(levels)  # type: ignore[type-var, arg-type]


@dataclass(frozen=True)
class ParallelFragment:
    """An original fragment with its level-4 and level-3 simplifications."""

    original: Fragment
    level4: Fragment
    level3: Fragment

    def __post_init__(self) -> None:
        for name, frag in (("level4", self.level4), ("level3", self.level3)):
            if frag.key != self.original.key:
                raise ValueError(
                    f"{name} fragment id {frag.key} does not match original"
                    f" {self.original.key}"
                )

    @property
    def key(self) -> tuple[str, str]:
        return self.original.key


@dataclass(frozen=True)
class Corpus:
    """A homogeneous sequence of fragments with unique (doc_id, frag_id) keys."""

    split: str
    fragments: tuple[Union[Fragment, ParallelFragment], ...]

    def __post_init__(self) -> None:
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")
        kinds = {type(f) for f in self.fragments}
        if len(kinds) > 1:
            raise ValueError("corpus mixes labeled and parallel fragments")
        seen: set[tuple[str, str]] = set()
        for frag in self.fragments:
            if frag.key in seen:
                raise ValueError(f"duplicate fragment key {frag.key}")
            seen.add(frag.key)

    @property
    def kind(self) -> str:
        if self.fragments and isinstance(self.fragments[0], ParallelFragment):
            return "parallel"
        return "labeled"

    def __len__(self) -> int:
        return len(self.fragments)

    def __iter__(self) -> Iterator[Union[Fragment, ParallelFragment]]:
        return iter(self.fragments)


@dataclass(frozen=True)
class LevelDistribution:
    """Per-level token and fragment counts with exact fractions."""

    token_counts: dict[ReadabilityLevel, int]
    fragment_counts: dict[ReadabilityLevel, int]

    @property
    def token_total(self) -> int:
        return sum(self.token_counts.values())

    @property
    def fragment_total(self) -> int:
        return sum(self.fragment_counts.values())

    @property
    def token_fractions(self) -> dict[ReadabilityLevel, Fraction]:
        total = self.token_total
        return {l: Fraction(n, total) for l, n in self.token_counts.items()}

    @property
    def fragment_fractions(self) -> dict[ReadabilityLevel, Fraction]:
        total = self.fragment_total
        return {l: Fraction(n, total) for l, n in self.fragment_counts.items()}


def _check_id(name: str, value: str) -> None:
    if not value:
        raise ValueError(f"{name} must be non-empty")
    if "\t" in value or "\n" in value or "\r" in value:
        raise ValueError(f"{name} may not contain tabs or newlines: {value!r}")


def _parse_level_field(text: str, line: int) -> ReadabilityLevel:
    try:
        raw = int(text)
    except ValueError:
        raise FormatError(f"level is not an integer: {text!r}", line) from None
    try:
        return ReadabilityLevel.from_raw(raw)
    except ValueError as exc:
        raise FormatError(str(exc), line) from None


def _parse_token(cell: str, line: int, normalize: bool) -> Token:
    match = _TOKEN_WITH_LEVEL.match(cell)
    if match:
        surface, level = match.group(1), _parse_level_field(match.group(2), line)
    else:
        surface, level = cell, None
    if normalize:
        surface = surface.translate(ORTHO_NORMALIZATION)
    try:
        return Token(surface, level)
    except ValueError as exc:
        raise FormatError(str(exc), line) from None


def _parse_token_column(cell: str, line: int, normalize: bool) -> tuple[Token, ...]:
    surfaces = cell.split(" ")
    if cell == "" or any(s == "" for s in surfaces):
        raise FormatError("empty token list or stray space in token column", line)
    return tuple(_parse_token(s, line, normalize) for s in surfaces)


def _iter_decoded_lines(source: IO[bytes]) -> Iterator[tuple[int, str]]:
    data = source.read()
    for lineno, raw in enumerate(data.split(b"\n"), start=1):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"invalid UTF-8: {exc}", lineno) from None
        if text == "":
            continue
        yield lineno, text


def parse_corpus(
    source: IO[bytes],
    kind: str = "labeled",
    split: str = "unsplit",
    normalize: bool = False,
) -> Corpus:
    """Parse a labeled or parallel corpus file into a Corpus.

    Levels 1 and 2 are clamped to 3 here, once; ``normalize=True``
    additionally applies ORTHO_NORMALIZATION to every surface. Raises
    FormatError with a line number on any malformed record.
    """
    if kind not in ("labeled", "parallel"):
        raise ValueError(f"kind must be 'labeled' or 'parallel', got {kind!r}")
    fragments: list[Union[Fragment, ParallelFragment]] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in _iter_decoded_lines(source):
        cols = line.split("\t")
        if kind == "labeled":
            if len(cols) not in (3, 4):
                raise FormatError(
                    f"expected 3 or 4 tab-separated columns, got {len(cols)}", lineno
                )
            doc_id, frag_id = cols[0], cols[1]
            tokens = _parse_token_column(cols[2], lineno, normalize)
            frag_level = _parse_level_field(cols[3], lineno) if len(cols) == 4 else None
            try:
                frag: Union[Fragment, ParallelFragment] = Fragment(
                    doc_id, frag_id, tokens, frag_level
                )
            except ValueError as exc:
                raise FormatError(str(exc), lineno) from None
        else:
            if len(cols) != 5:
                raise FormatError(
                    f"expected 5 tab-separated columns, got {len(cols)}", lineno
                )
            doc_id, frag_id = cols[0], cols[1]
            try:
                versions = [
                    Fragment(doc_id, frag_id, _parse_token_column(col, lineno, normalize))
                    for col in cols[2:5]
                ]
                frag = ParallelFragment(*versions)
            except ValueError as exc:
                raise FormatError(str(exc), lineno) from None
        if frag.key in seen:
            raise FormatError(f"duplicate fragment key {frag.key}", lineno)
        seen.add(frag.key)
        fragments.append(frag)
    return Corpus(split, tuple(fragments))


def _format_token(token: Token) -> str:
    if token.gold_level is None:
        return token.surface
    return f"{token.surface}|{token.gold_level.value}"


def _format_labeled(frag: Fragment) -> str:
    cols = [frag.doc_id, frag.frag_id, " ".join(_format_token(t) for t in frag.tokens)]
    if frag.gold_level is not None:
        cols.append(str(frag.gold_level.value))
    return "\t".join(cols)


def _format_parallel(frag: ParallelFragment) -> str:
    cols = [frag.key[0], frag.key[1]]
    for version in (frag.original, frag.level4, frag.level3):
        cols.append(" ".join(t.surface for t in version.tokens))
    return "\t".join(cols)


def write_corpus(corpus: Corpus, sink: IO[bytes]) -> None:
    """Write a corpus in its line format, preserving fragment order.

    Round-trips: parsing the output reproduces the corpus exactly.
    """
    lines = []
    for frag in corpus.fragments:
        if isinstance(frag, ParallelFragment):
            lines.append(_format_parallel(frag))
        else:
            lines.append(_format_labeled(frag))
    sink.write(("\n".join(lines) + "\n" if lines else "").encode("utf-8"))


def corpus_stats(corpus: Corpus) -> LevelDistribution:
    """Count tokens and fragments per level.

    Every token must carry a gold level; fragment levels fall back to the
    max token level when the fragment column was absent.
    """
    if corpus.kind != "labeled":
        raise ValueError("corpus_stats requires a labeled corpus")
    if not corpus.fragments:
        raise ValueError("corpus is empty")
    token_counts = {level: 0 for level in LEVELS}
    fragment_counts = {level: 0 for level in LEVELS}
    for frag in corpus.fragments:
        assert isinstance(frag, Fragment)
        for token in frag.tokens:
            if token.gold_level is None:
                raise ValueError(
                    f"token {token.surface!r} in fragment {frag.key} has no gold level"
                )
            token_counts[token.gold_level] += 1
        fragment_counts[frag.effective_level()] += 1
    return LevelDistribution(token_counts, fragment_counts)
