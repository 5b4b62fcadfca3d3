"""The three generating matrices of the Rauzy gasket and their branch words.

A word ``(i1, ..., in)`` over ``{1, 2, 3}`` indexes the branch map
``f_in o ... o f_i1`` whose projectivized matrix is ``M_in ... M_i1``.
Words are enumerated lexicographically; the lexicographic index of a word is
its base-3 value with digits ``i_k - 1`` (most significant first).
"""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .geometry import jacobian, largest_singular_value

M1 = ((1, 1, 1), (0, 1, 0), (0, 0, 1))
M2 = ((1, 0, 0), (1, 1, 1), (0, 0, 1))
M3 = ((1, 0, 0), (0, 1, 0), (1, 1, 1))
GENERATORS = (M1, M2, M3)

GENERATOR_ARRAY = np.array(GENERATORS, dtype=np.int64)


def matmul3(A, B) -> tuple:
    """Exact 3x3 product with Python integers."""
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3))
                 for i in range(3))


def det3(A) -> int:
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def validate_word(word: Sequence[int], allow_constant: bool = False) -> tuple:
    w = tuple(int(i) for i in word)
    if len(w) < 1 or any(i not in (1, 2, 3) for i in w):
        raise ValueError(f"invalid word {word!r}: symbols must be in {{1, 2, 3}}")
    if not allow_constant:
        if len(w) < 2:
            raise ValueError(f"invalid word {word!r}: length must be at least 2")
        if len(set(w)) == 1:
            raise ValueError(f"constant word {word!r} is excluded")
    return w


def word_product(word: Sequence[int], allow_constant: bool = False) -> tuple:
    """Integer matrix ``M_in ... M_i1`` of the branch map of ``word``."""
    w = validate_word(word, allow_constant=allow_constant)
    P = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for i in w:
        P = matmul3(GENERATORS[i - 1], P)
    return P


def word_count(n: int) -> int:
    return 3 ** n - 3


def constant_indices(n: int) -> tuple:
    """Lexicographic indices of ``11...1``, ``22...2`` and ``33...3``."""
    return (0, (3 ** n - 1) // 2, 3 ** n - 1)


def word_from_index(index: int, n: int) -> tuple:
    digits = []
    for _ in range(n):
        index, d = divmod(index, 3)
        digits.append(d + 1)
    return tuple(reversed(digits))


def word_to_index(word: Sequence[int]) -> int:
    index = 0
    for i in word:
        index = 3 * index + (i - 1)
    return index


def enumerate_words(n: int) -> Iterator[tuple]:
    """Every non-constant word of length ``n``, in lexicographic order."""
    if n < 2:
        raise ValueError("word length must be at least 2")
    for w in itertools.product((1, 2, 3), repeat=n):
        if w[0] == w[-1] and len(set(w)) == 1:
            continue
        yield w


def word_string(word: Sequence[int]) -> str:
    return "".join(str(i) for i in word)


def all_products(n: int) -> np.ndarray:
    """``(3**n, 3, 3)`` int64 array of ``M_in ... M_i1`` in lexicographic order.

    Appending a symbol multiplies on the left, and the new lexicographic index
    is ``3 * old + (symbol - 1)``.
    """
    if n > 38:
        raise OverflowError("branch products for n > 38 exceed the int64 range")
    P = np.eye(3, dtype=np.int64)[None]
    for _ in range(n):
        P = np.einsum("jab,wbc->wjac", GENERATOR_ARRAY, P).reshape(-1, 3, 3)
    return P


def products_with_prefix(prefix: Sequence[int], n: int) -> np.ndarray:
    """Products for all ``3**(n - len(prefix))`` words starting with ``prefix``."""
    head = np.array(word_product(prefix, allow_constant=True), dtype=np.int64)
    tails = all_products(n - len(prefix))
    return tails @ head


def cyclic_relabel(word: Sequence[int]) -> tuple:
    """Apply the symbol permutation 1 -> 2 -> 3 -> 1."""
    return tuple(i % 3 + 1 for i in word)


def contraction_check(word2: Sequence[int], samples) -> bool:
    """Sampled evidence that ``f_k o f_j`` contracts: operator norm < 1 at every sample."""
    if len(word2) != 2 or word2[0] == word2[1]:
        raise ValueError("contraction_check expects a two-letter word with distinct symbols")
    P = word_product(word2)
    return all(largest_singular_value(jacobian(P, y)) < 1 for y in samples)
