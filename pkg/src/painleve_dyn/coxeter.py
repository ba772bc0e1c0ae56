"""Loop words, the map onto the Coxeter group G(2), and dynamical degrees."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyWord, NotAS, ParseError

# V-block matrices of sigma_1^*, sigma_2^*, sigma_3^* in the basis L1, L2, L3
S_MATRICES = {
    1: np.array([[0, 1, 1], [0, 1, 0], [0, 0, 1]]),
    2: np.array([[1, 0, 0], [1, 0, 1], [0, 0, 1]]),
    3: np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]]),
}


@dataclass(frozen=True)
class LoopWord:
    """Word in gamma_1^{+-1}, gamma_2^{+-1}, gamma_3^{+-1}; letters are (index, exponent)."""

    letters: tuple = ()

    def __init__(self, letters=()):
        out = []
        for i, e in letters:
            if i not in (1, 2, 3) or e not in (1, -1):
                raise ValueError(f"bad loop letter {(i, e)}")
            out.append((int(i), int(e)))
        object.__setattr__(self, "letters", tuple(out))

    @classmethod
    def parse(cls, text: str) -> "LoopWord":
        """Parse "1 -2 1 -3": sign is the exponent, magnitude the index."""
        letters = []
        for tok in text.replace(",", " ").split():
            try:
                v = int(tok)
            except ValueError as exc:
                raise ParseError(f"bad loop token {tok!r}") from exc
            if abs(v) not in (1, 2, 3):
                raise ParseError(f"loop index out of range in {tok!r}")
            letters.append((abs(v), 1 if v > 0 else -1))
        return cls(letters)

    def inverse(self) -> "LoopWord":
        return LoopWord((i, -e) for i, e in reversed(self.letters))

    def __mul__(self, other: "LoopWord") -> "LoopWord":
        return LoopWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(str(i * e) for i, e in self.letters)


@dataclass(frozen=True)
class SigmaWord:
    """Word in the involutions sigma_1, sigma_2, sigma_3 (first letter applied first)."""

    letters: tuple = ()

    def __init__(self, letters=()):
        out = tuple(int(i) for i in letters)
        if any(i not in (1, 2, 3) for i in out):
            raise ValueError(f"bad sigma letters {out}")
        object.__setattr__(self, "letters", out)

    @classmethod
    def parse(cls, text: str) -> "SigmaWord":
        letters = []
        for tok in text.replace(",", " ").split():
            t = tok.lower().lstrip("s")
            if t not in ("1", "2", "3"):
                raise ParseError(f"bad sigma token {tok!r}")
            letters.append(int(t))
        return cls(letters)

    def is_reduced(self) -> bool:
        return all(a != b for a, b in zip(self.letters, self.letters[1:]))

    def reversed(self) -> "SigmaWord":
        return SigmaWord(reversed(self.letters))

    def power(self, n: int) -> "SigmaWord":
        return SigmaWord(self.letters * n)

    def __mul__(self, other: "SigmaWord") -> "SigmaWord":
        return SigmaWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return " ".join(f"s{i}" for i in self.letters)


EIGHT_LOOP = LoopWord([(1, 1), (2, -1)])
POCHHAMMER = LoopWord([(1, 1), (2, -1), (1, -1), (2, 1)])


def reduce_loop(w: LoopWord) -> LoopWord:
    stack: list = []
    for i, e in w.letters:
        if stack and stack[-1] == (i, -e):
            stack.pop()
        else:
            stack.append((i, e))
    return LoopWord(stack)


def reduce_sigma(letters) -> SigmaWord:
    """Cancel equal adjacent involutions until none remain."""
    stack: list = []
    for i in letters:
        if stack and stack[-1] == i:
            stack.pop()
        else:
            stack.append(i)
    return SigmaWord(stack)


def phi(w: LoopWord) -> SigmaWord:
    """gamma_i -> sigma_i sigma_{i+1}, indices mod 3."""
    letters = []
    for i, e in reduce_loop(w).letters:
        j = i % 3 + 1
        letters.extend((i, j) if e == 1 else (j, i))
    return reduce_sigma(letters)


def is_AS(s: SigmaWord) -> bool:
    if len(s) == 0:
        raise EmptyWord("empty word")
    return s.letters[0] != s.letters[-1]


def conjugate_to_AS(s: SigmaWord) -> SigmaWord:
    """Cyclically reduce: strip matching end letters (conjugation) until AS.

    When the endpoints agree, the word is conjugated by its first letter,
    which drops both ends; repeating gives the unique cyclically reduced
    representative.
    """
    letters = list(reduce_sigma(s.letters).letters)
    if not letters:
        raise EmptyWord("word reduces to the identity")
    while len(letters) > 1 and letters[0] == letters[-1]:
        letters = letters[1:-1]
    if not letters:
        raise EmptyWord("word is conjugate to the identity")
    return SigmaWord(letters)


def is_elementary(s: SigmaWord) -> bool:
    return len(set(s.letters)) <= 2


@dataclass(frozen=True)
class DynamicalDegree:
    alpha: int
    sign: int
    lam: float
    entropy: float

    def lucas(self, n: int) -> int:
        """lambda^n + sign^n lambda^-n as an exact integer."""
        return lucas_trace(self.alpha, self.sign, n)


def lucas_trace(alpha: int, sign: int, n: int) -> int:
    """t_n with t_0 = 2, t_1 = alpha, t_{n+1} = alpha t_n - sign t_{n-1}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = 2, alpha
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, alpha * cur - sign * prev
    return cur


def v_block(s: SigmaWord) -> np.ndarray:
    """Product s_{i_m} ... s_{i_1}: pullbacks compose in reverse order."""
    M = np.eye(3, dtype=np.int64)
    for i in s.letters:
        M = S_MATRICES[i] @ M
    return M


def dynamical_degree(s: SigmaWord) -> DynamicalDegree:
    if not is_AS(s):
        raise NotAS(f"word {s} has equal first and last letters")
    alpha = int(np.trace(v_block(s)))
    sign = (-1) ** len(s)
    disc = alpha * alpha - 4 * sign
    lam = (alpha + math.sqrt(disc)) / 2 if disc >= 0 else 1.0
    lam = max(lam, 1.0)
    return DynamicalDegree(alpha, sign, lam, math.log(lam))


def entropy(s: SigmaWord) -> float:
    return dynamical_degree(s).entropy
