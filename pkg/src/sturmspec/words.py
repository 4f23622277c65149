"""Exact combinatorics over finite alphabets: words, substitutions, factors.

Symbols are small integers (< alphabet size), stored as ``bytes`` so that
substring search and slicing run at C speed; a display alphabet is applied
only at the text boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivergenceError,
    InvalidInputError,
    InvalidWordError,
    NotAFixedPointError,
    WindowError,
)

DEFAULT_LETTERS = "abcdefghijklmnopqrstuvwxyz"

# Classic primitive substitutions, in "a:ab,b:a" mapping syntax.
SUBSTITUTION_TABLE = {
    "fibonacci": "a:ab,b:a",
    "period-doubling": "a:ab,b:aa",
    "binary-non-pisot": "a:ab,b:aaa",
    "thue-morse": "a:ab,b:ba",
    "rudin-shapiro": "a:ab,b:ac,c:db,d:dc",
}


@dataclass(frozen=True)
class Word:
    """Finite sequence of alphabet indices.

    Concatenation is associative with ``Word(b"", k)`` as identity; every
    symbol must be < ``alphabet_size``.
    """

    symbols: bytes
    alphabet_size: int

    def __post_init__(self):
        if self.alphabet_size < 1 or self.alphabet_size > 255:
            raise InvalidWordError(f"alphabet size {self.alphabet_size} out of range")
        if self.symbols and max(self.symbols) >= self.alphabet_size:
            raise InvalidWordError(
                f"symbol {max(self.symbols)} outside alphabet of size {self.alphabet_size}"
            )

    @classmethod
    def from_symbols(cls, symbols, alphabet_size):
        return cls(bytes(symbols), alphabet_size)

    @classmethod
    def from_text(cls, text, letters="01"):
        """Parse a display string, e.g. ``'10110'`` or ``'abaab'``."""
        try:
            syms = bytes(letters.index(ch) for ch in text)
        except ValueError:
            raise InvalidWordError(f"character outside letters {letters!r}: {text!r}")
        return cls(syms, len(letters))

    def to_text(self, letters=None):
        if letters is None:
            letters = "01" if self.alphabet_size <= 2 else DEFAULT_LETTERS
        if len(letters) < self.alphabet_size:
            raise InvalidInputError("display alphabet smaller than word alphabet")
        return "".join(letters[s] for s in self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.symbols[i], self.alphabet_size)
        return self.symbols[i]

    def __add__(self, other):
        if other.alphabet_size != self.alphabet_size:
            raise InvalidWordError("concatenation across different alphabets")
        return Word(self.symbols + other.symbols, self.alphabet_size)

    def __mul__(self, k):
        """Word power: k-fold repetition, empty word for k = 0."""
        if k < 0:
            raise InvalidInputError("negative word exponent")
        return Word(self.symbols * k, self.alphabet_size)

    def is_prefix_of(self, other):
        return other.symbols.startswith(self.symbols)

    def occurrences(self, target):
        """Start positions of all (overlapping) occurrences of ``target``."""
        if len(target) == 0:
            raise InvalidInputError("empty target word")
        positions = []
        start = self.symbols.find(target.symbols)
        while start != -1:
            positions.append(start)
            start = self.symbols.find(target.symbols, start + 1)
        return positions


@dataclass(frozen=True)
class Substitution:
    """Map from alphabet symbols to non-empty words, extended to words
    homomorphically."""

    images: tuple[Word, ...]

    def __post_init__(self):
        size = len(self.images)
        for i, img in enumerate(self.images):
            if len(img) == 0:
                raise InvalidInputError(f"image of symbol {i} is empty")
            if img.alphabet_size != size:
                raise InvalidInputError("image alphabet does not match substitution")

    @property
    def alphabet_size(self):
        return len(self.images)

    def primitivity_power(self):
        """Smallest k with every symbol present in every S^k(a), or None.

        The search stops at the Wielandt bound (s-1)^2 + 1, past which no
        primitive exponent can first appear.
        """
        s = self.alphabet_size
        full = frozenset(range(s))
        reach = [frozenset(self.images[a].symbols) for a in range(s)]
        for k in range(1, (s - 1) ** 2 + 2):
            if all(r == full for r in reach):
                return k
            reach = [
                frozenset(sym for b in r for sym in self.images[b].symbols)
                for r in reach
            ]
        return None

    @property
    def is_primitive(self):
        return self.primitivity_power() is not None


def parse_substitution(text):
    """Parse ``"a:ab,b:a"`` into a Substitution plus its display letters.

    Letters are taken in order of appearance of the mapping keys.
    """
    entries = [item.strip() for item in text.split(",") if item.strip()]
    letters = ""
    raw = []
    for entry in entries:
        if ":" not in entry:
            raise InvalidInputError(f"bad substitution entry {entry!r}")
        key, image = entry.split(":", 1)
        key = key.strip()
        if len(key) != 1:
            raise InvalidInputError(f"substitution key must be one letter: {key!r}")
        if key in letters:
            raise InvalidInputError(f"duplicate substitution key {key!r}")
        letters += key
        raw.append(image.strip())
    images = tuple(Word.from_text(img, letters) for img in raw)
    return Substitution(images), letters


def format_substitution(subst, letters):
    return ",".join(
        f"{letters[i]}:{img.to_text(letters)}" for i, img in enumerate(subst.images)
    )


def substitute(subst, word, power=1):
    """Apply S ``power`` times to ``word``; S(uv) = S(u)S(v)."""
    if power < 1:
        raise InvalidInputError("power must be >= 1")
    if word.alphabet_size != subst.alphabet_size:
        raise InvalidWordError("word alphabet does not match substitution")
    images = [img.symbols for img in subst.images]
    syms = word.symbols
    for _ in range(power):
        syms = b"".join(images[s] for s in syms)
    return Word(syms, subst.alphabet_size)


def fixed_point_prefix(subst, seed, min_length, max_stalled_rounds=64):
    """Prefix (length >= min_length) of the one-sided fixed point from ``seed``.

    Requires S(seed) to start with seed; iterates S until the prefix is long
    enough.  If the length stalls for ``max_stalled_rounds`` consecutive
    rounds the substitution cannot grow and we fail loudly instead of
    looping forever.
    """
    if min_length < 1:
        raise InvalidInputError("min_length must be >= 1")
    if not 0 <= seed < subst.alphabet_size:
        raise InvalidWordError(f"seed symbol {seed} outside alphabet")
    if subst.images[seed][0] != seed:
        raise NotAFixedPointError(
            f"image of seed symbol {seed} does not start with the seed"
        )
    word = Word(bytes([seed]), subst.alphabet_size)
    stalled = 0
    while len(word) < min_length:
        grown = substitute(subst, word)
        if len(grown) == len(word):
            stalled += 1
            if stalled >= max_stalled_rounds:
                raise DivergenceError(
                    f"substitution images never grow from seed {seed}"
                )
        else:
            stalled = 0
        word = grown
    return word


def factor_set(word, length):
    """All distinct length-``length`` contiguous subwords."""
    if length < 1:
        raise InvalidInputError("factor length must be >= 1")
    if length > len(word):
        raise WindowError(f"factor length {length} exceeds word length {len(word)}")
    syms = word.symbols
    distinct = {syms[i : i + length] for i in range(len(syms) - length + 1)}
    return {Word(s, word.alphabet_size) for s in distinct}


@dataclass(frozen=True)
class FrequencyEstimate:
    """Overlapping occurrence count of ``target`` in a fixed prefix.

    ``density`` is the exact rational count / (prefix_length - |target| + 1);
    rounding is the caller's business.
    """

    target: Word
    prefix_length: int
    occurrence_count: int
    density: Fraction


def frequency(word, target):
    """Count overlapping occurrences of ``target`` in ``word``."""
    if len(target) == 0:
        raise InvalidInputError("empty target word")
    if len(target) > len(word):
        raise WindowError("target longer than the word")
    count = len(word.occurrences(target))
    windows = len(word) - len(target) + 1
    return FrequencyEstimate(
        target=target,
        prefix_length=len(word),
        occurrence_count=count,
        density=Fraction(count, windows),
    )


def detect_square_prefix(word, n):
    """True iff w(k) = w(k+n) for 1 <= k <= n (1-indexed): the first 2n
    symbols form a square of period n."""
    if n < 1:
        raise InvalidInputError("period must be >= 1")
    if len(word) < 2 * n:
        raise WindowError(f"word of length {len(word)} shorter than 2n = {2 * n}")
    return word.symbols[:n] == word.symbols[n : 2 * n]


def detect_palindromes(word, length):
    """Start positions of all length-``length`` palindromic factors."""
    if length < 1:
        raise InvalidInputError("palindrome length must be >= 1")
    if length > len(word):
        raise WindowError("palindrome length exceeds word length")
    syms = word.symbols
    return [
        i
        for i in range(len(syms) - length + 1)
        if syms[i : i + length] == syms[i : i + length][::-1]
    ]
