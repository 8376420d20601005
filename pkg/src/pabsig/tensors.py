"""Dense arithmetic in the truncated tensor algebra T^m(R^d).

An element of T^m(R^d) is a formal series over words in the alphabet
{1, ..., d} of length at most m.  Coefficients are stored in a single flat
vector ordered by word length and then lexicographically within each length,
with the empty word at index 0.  Level k therefore occupies the contiguous
block starting at 1 + d + ... + d^(k-1), and the flattened outer product of
a level-p block with a level-q block lands exactly on the level-(p+q) block
in concatenation order.  Everything in this module relies on that layout.

All operations are pure: inputs are never mutated and results are freshly
allocated.  Coefficients are 64-bit floats throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Tuple

import numpy as np

__all__ = [
    "ShapeMismatchError",
    "TruncTensor",
    "tensor_dim",
    "unit",
    "linear_combine",
    "mul_trunc",
    "inner",
    "project",
    "embed",
    "exp_trunc",
    "log_trunc",
    "left_adjoint",
    "right_adjoint",
    "word_index",
    "index_to_word",
    "all_words",
]


class ShapeMismatchError(ValueError):
    """Operands disagree in alphabet size or truncation degree."""


@lru_cache(maxsize=None)
def _offsets(d: int, m: int) -> Tuple[int, ...]:
    """Start index of each level block, plus the total length at the end."""
    offs = [0]
    for k in range(m + 1):
        offs.append(offs[-1] + d**k)
    return tuple(offs)


def tensor_dim(d: int, m: int) -> int:
    """Number of coefficients of an element of T^m(R^d), i.e. sum of d^k."""
    if d < 1:
        raise ValueError(f"alphabet size must be >= 1, got {d}")
    if m < 0:
        raise ValueError(f"degree must be >= 0, got {m}")
    return _offsets(d, m)[-1]


@dataclass(frozen=True, eq=False)
class TruncTensor:
    """Element of T^m(R^d) as a flat word-indexed coefficient vector.

    Treat instances as immutable values; share them freely.
    """

    dim: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        n = tensor_dim(self.dim, self.degree)
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.shape != (n,):
            raise ValueError(
                f"expected {n} coefficients for d={self.dim}, m={self.degree}, "
                f"got shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("non-finite coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def level(self, k: int) -> np.ndarray:
        """View of the level-k coefficient block (length d^k)."""
        offs = _offsets(self.dim, self.degree)
        if not 0 <= k <= self.degree:
            raise ValueError(f"level {k} outside 0..{self.degree}")
        return self.coeffs[offs[k]:offs[k + 1]]

    def coeff(self, word: Sequence[int]) -> float:
        """Coefficient of a single word, given as a sequence of letters."""
        if len(word) > self.degree:
            raise ValueError(f"word longer than degree {self.degree}")
        return float(self.coeffs[word_index(word, self.dim)])

    def __repr__(self):
        return (
            f"TruncTensor(dim={self.dim}, degree={self.degree}, "
            f"coeffs={np.array2string(self.coeffs, threshold=8)})"
        )


def _check_pair(a: TruncTensor, b: TruncTensor) -> None:
    if a.dim != b.dim or a.degree != b.degree:
        raise ShapeMismatchError(
            f"operands disagree: (d={a.dim}, m={a.degree}) vs "
            f"(d={b.dim}, m={b.degree})"
        )


def unit(d: int, m: int) -> TruncTensor:
    """The multiplicative identity 1 = (1, 0, 0, ...)."""
    c = np.zeros(tensor_dim(d, m))
    c[0] = 1.0
    return TruncTensor(d, m, c)


def linear_combine(alpha: float, a: TruncTensor, beta: float, b: TruncTensor) -> TruncTensor:
    """Coefficient-wise alpha*a + beta*b."""
    _check_pair(a, b)
    return TruncTensor(a.dim, a.degree, alpha * a.coeffs + beta * b.coeffs)


def _mul(d: int, m: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated product on raw coefficient vectors.

    The coefficient of a word w is the sum of a[u]*b[v] over all splits
    w = uv; level blocks are combined by flattened outer products, which
    match concatenation order under the layout of this module.
    """
    offs = _offsets(d, m)
    c = np.zeros(offs[-1])
    for k in range(m + 1):
        ak = a[offs[k]:offs[k + 1]]
        for i in range(m + 1 - k):
            bi = b[offs[i]:offs[i + 1]]
            c[offs[k + i]:offs[k + i + 1]] += np.multiply.outer(ak, bi).ravel()
    return c


def mul_trunc(a: TruncTensor, b: TruncTensor) -> TruncTensor:
    """Truncated tensor product; terms beyond level m are dropped."""
    _check_pair(a, b)
    return TruncTensor(a.dim, a.degree, _mul(a.dim, a.degree, a.coeffs, b.coeffs))


def inner(a: TruncTensor, b: TruncTensor) -> float:
    """Inner product: Euclidean dot of the coefficient vectors."""
    _check_pair(a, b)
    return float(a.coeffs @ b.coeffs)


def project(a: TruncTensor, k: int) -> TruncTensor:
    """Truncate to degree k, keeping levels 0..k."""
    if not 0 <= k <= a.degree:
        raise ValueError(f"projection degree {k} outside 0..{a.degree}")
    n = tensor_dim(a.dim, k)
    return TruncTensor(a.dim, k, a.coeffs[:n].copy())


def embed(a: TruncTensor, m: int) -> TruncTensor:
    """Zero-pad to a higher degree m; levels above a.degree are zero."""
    if m < a.degree:
        raise ValueError(f"cannot embed degree {a.degree} into lower degree {m}")
    c = np.zeros(tensor_dim(a.dim, m))
    c[:len(a.coeffs)] = a.coeffs
    return TruncTensor(a.dim, m, c)


def _exp(d: int, m: int, a: np.ndarray) -> np.ndarray:
    """Truncated exponential of a scalar-free vector, by Horner nesting:
    exp(a) = 1 + a/1 (1 + a/2 (1 + ... (1 + a/m)))."""
    one = np.zeros(_offsets(d, m)[-1])
    one[0] = 1.0
    e = one.copy()
    for k in range(m, 0, -1):
        e = one + _mul(d, m, a, e) / k
    return e


def exp_trunc(a: TruncTensor) -> TruncTensor:
    """Truncated exponential sum of a^(x)k / k!; requires zero scalar slot."""
    if a.coeffs[0] != 0.0:
        raise ValueError(f"exp_trunc needs scalar slot 0, got {a.coeffs[0]}")
    return TruncTensor(a.dim, a.degree, _exp(a.dim, a.degree, a.coeffs))


def _log(d: int, m: int, g: np.ndarray) -> np.ndarray:
    """Truncated logarithm of a vector with unit scalar slot, by Horner
    nesting of log(1+x) = x (1 - x (1/2 - x (1/3 - ...)))."""
    n = _offsets(d, m)[-1]
    if m == 0:
        return np.zeros(n)
    x = g.copy()
    x[0] = 0.0
    one = np.zeros(n)
    one[0] = 1.0
    t = ((-1.0) ** (m - 1) / m) * one
    for k in range(m - 1, 0, -1):
        t = ((-1.0) ** (k - 1) / k) * one + _mul(d, m, x, t)
    return _mul(d, m, x, t)


def log_trunc(a: TruncTensor) -> TruncTensor:
    """Truncated logarithm; requires unit scalar slot, returns scalar-free."""
    if a.coeffs[0] != 1.0:
        raise ValueError(f"log_trunc needs scalar slot 1, got {a.coeffs[0]}")
    return TruncTensor(a.dim, a.degree, _log(a.dim, a.degree, a.coeffs))


def _ladj(d: int, ma: int, a: np.ndarray, mc: int, c: np.ndarray) -> np.ndarray:
    """Raw adjoint of left multiplication: out[v] = sum_u a[u] * c[uv]."""
    offs_a = _offsets(d, ma)
    offs_c = _offsets(d, mc)
    out = np.zeros(offs_c[-1])
    for lu in range(min(ma, mc) + 1):
        au = a[offs_a[lu]:offs_a[lu + 1]]
        for lv in range(mc + 1 - lu):
            blk = c[offs_c[lu + lv]:offs_c[lu + lv + 1]].reshape(d**lu, d**lv)
            out[offs_c[lv]:offs_c[lv + 1]] += au @ blk
    return out


def left_adjoint(a: TruncTensor, c: TruncTensor) -> TruncTensor:
    """Prefix removal dual to left multiplication.

    The result satisfies <c, a (x) b> == <left_adjoint(a, c), b> for every b
    within the truncation of c; its coefficient of e_v is sum_u a[u]*c[uv].
    """
    if a.dim != c.dim:
        raise ShapeMismatchError(f"alphabet mismatch: {a.dim} vs {c.dim}")
    return TruncTensor(c.dim, c.degree, _ladj(c.dim, a.degree, a.coeffs, c.degree, c.coeffs))


def _radj(d: int, mb: int, b: np.ndarray, mc: int, c: np.ndarray) -> np.ndarray:
    """Raw adjoint of right multiplication: out[u] = sum_v b[v] * c[uv]."""
    offs_b = _offsets(d, mb)
    offs_c = _offsets(d, mc)
    out = np.zeros(offs_c[-1])
    for lv in range(min(mb, mc) + 1):
        bv = b[offs_b[lv]:offs_b[lv + 1]]
        for lu in range(mc + 1 - lv):
            blk = c[offs_c[lu + lv]:offs_c[lu + lv + 1]].reshape(d**lu, d**lv)
            out[offs_c[lu]:offs_c[lu + 1]] += blk @ bv
    return out


def right_adjoint(b: TruncTensor, c: TruncTensor) -> TruncTensor:
    """Suffix removal dual to right multiplication.

    The result satisfies <c, a (x) b> == <right_adjoint(b, c), a> within the
    truncation of c; its coefficient of e_u is sum_v b[v]*c[uv].
    """
    if b.dim != c.dim:
        raise ShapeMismatchError(f"alphabet mismatch: {b.dim} vs {c.dim}")
    return TruncTensor(c.dim, c.degree, _radj(c.dim, b.degree, b.coeffs, c.degree, c.coeffs))


def word_index(word: Iterable[int], d: int) -> int:
    """Flat index of a word: block offset of its length plus its base-d rank."""
    letters = tuple(word)
    idx = 0
    for letter in letters:
        if not 1 <= letter <= d:
            raise ValueError(f"letter {letter} outside 1..{d}")
        idx = idx * d + (letter - 1)
    return _offsets(d, len(letters))[len(letters)] + idx


def index_to_word(index: int, d: int) -> Tuple[int, ...]:
    """Inverse of word_index; recovers the letter sequence."""
    if index < 0:
        raise ValueError(f"negative index {index}")
    if d < 1:
        raise ValueError(f"alphabet size must be >= 1, got {d}")
    start, block, length = 0, 1, 0
    while index >= start + block:
        start += block
        block *= d
        length += 1
    local = index - start
    letters = []
    for _ in range(length):
        letters.append(local % d + 1)
        local //= d
    return tuple(reversed(letters))


def all_words(d: int, m: int) -> Tuple[Tuple[int, ...], ...]:
    """Every word of length <= m in flat index order."""
    return tuple(index_to_word(i, d) for i in range(tensor_dim(d, m)))


@lru_cache(maxsize=None)
def _concat_tables(d: int, m: int):
    """Index tables for vectorized products and adjoints on T^m(R^d).

    Returns (cat, ok, rows, cols, srcs) where cat[u, v] is the flat index of
    the concatenated word uv, ok marks pairs with |u|+|v| <= m, and the three
    flat arrays satisfy: a right-multiplication matrix M_b (so that
    M_b @ a == a (x) b) is assembled by M[rows, cols] = b[srcs].
    Likewise x[cat] * ok is the suffix-lookup matrix S_x with
    S_x[u, v] = x[uv], which drives both adjoints:
    right_adjoint(b, x) == S_x @ b and left_adjoint(a, x) == S_x.T @ a.
    """
    offs = _offsets(d, m)
    n = offs[-1]
    cat = np.zeros((n, n), dtype=np.intp)
    ok = np.zeros((n, n), dtype=bool)
    for lu in range(m + 1):
        for u in range(d**lu):
            gu = offs[lu] + u
            for lv in range(m + 1 - lu):
                stride = d**lv
                base = offs[lu + lv] + u * stride
                gv0 = offs[lv]
                for v in range(stride):
                    cat[gu, gv0 + v] = base + v
                    ok[gu, gv0 + v] = True
    cols, srcs = np.nonzero(ok)
    rows = cat[cols, srcs]
    for arr in (cat, ok, rows, cols, srcs):
        arr.setflags(write=False)
    return cat, ok, rows, cols, srcs
