"""Exact rational scalars and dense frame tensors.

Every scalar is a :class:`fractions.Fraction`.  A :class:`Tensor` of valence
``(r, s)`` over an ``n``-dimensional frame stores ``n**(r+s)`` components in a
read-only numpy object array, covariant axes first, contravariant axes last.
Internally indices are 0-based; anything written to disk uses 1-based frame
labels.

Operator convention: a ``(1, 1)`` tensor ``A`` stores ``A[i, j]`` as the
``e_j`` component of ``A(e_i)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_to_fraction = np.frompyfunc(Fraction, 1, 1)


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction.  Decimals are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match:
            num, den = match.groups()
            if den is not None and int(den) == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den) if den else 1)
    raise ValueError(f"not a rational: {value!r} (expected 'p' or 'p/q')")


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    """Comma separated rationals, e.g. ``"0,1/2,1"``."""
    text = text.strip()
    if not text:
        return []
    return [parse_rational(part) for part in text.split(",")]


class Tensor:
    """Immutable dense tensor with exact components."""

    __slots__ = ("_data", "valence")

    def __init__(self, data, valence: tuple[int, int]):
        r, s = valence
        if r < 0 or s < 0:
            raise ValueError(f"bad valence {valence}")
        arr = np.array(data, dtype=object)
        if arr.ndim != r + s:
            raise ValueError(f"valence {valence} needs {r + s} axes, got {arr.ndim}")
        if arr.ndim:
            n = arr.shape[0]
            if n < 1 or any(d != n for d in arr.shape):
                raise ValueError(f"all axes must have the frame size, got {arr.shape}")
            arr = _to_fraction(arr).astype(object)
        else:
            arr = np.array(Fraction(arr.item()), dtype=object)
        arr.setflags(write=False)
        self._data = arr
        self.valence = (r, s)

    # construction helpers
    @classmethod
    def zeros(cls, dim: int, valence: tuple[int, int]) -> "Tensor":
        shape = (dim,) * sum(valence)
        return cls(np.full(shape, Fraction(0), dtype=object), valence)

    @classmethod
    def identity(cls, dim: int) -> "Tensor":
        return cls(_eye(dim), (1, 1))

    @classmethod
    def basis_vector(cls, dim: int, index: int) -> "Tensor":
        """Frame vector ``e_{index+1}`` (0-based ``index``)."""
        comps = [Fraction(0)] * dim
        comps[index] = Fraction(1)
        return cls(comps, (0, 1))

    @classmethod
    def vector(cls, comps: Sequence) -> "Tensor":
        return cls([parse_rational(c) for c in comps], (0, 1))

    @classmethod
    def covector(cls, comps: Sequence) -> "Tensor":
        return cls([parse_rational(c) for c in comps], (1, 0))

    @classmethod
    def from_function(cls, dim: int, valence: tuple[int, int], fn: Callable) -> "Tensor":
        shape = (dim,) * sum(valence)
        arr = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            arr[idx] = fn(*idx)
        return cls(arr, valence)

    # accessors
    @property
    def components(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0] if self._data.ndim else 0

    @property
    def rank(self) -> int:
        return sum(self.valence)

    def __getitem__(self, idx):
        return self._data[idx]

    def entries(self) -> Iterable[Fraction]:
        return self._data.flat

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._data.flat)

    def max_abs(self) -> Fraction:
        """Largest absolute component; the residual norm used in reports."""
        return max((abs(x) for x in self._data.flat), default=Fraction(0))

    def to_lists(self):
        return self._data.tolist()

    # algebra
    def _check_same(self, other: "Tensor") -> None:
        if not isinstance(other, Tensor):
            raise TypeError(f"expected Tensor, got {type(other).__name__}")
        if other.valence != self.valence or other.dim != self.dim:
            raise ValueError(
                f"shape mismatch: {self.valence}/dim {self.dim} vs {other.valence}/dim {other.dim}"
            )

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self._data + other._data, self.valence)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self._data - other._data, self.valence)

    def __neg__(self) -> "Tensor":
        return Tensor(-self._data, self.valence)

    def __mul__(self, scalar) -> "Tensor":
        if isinstance(scalar, Tensor):
            return NotImplemented
        return Tensor(self._data * Fraction(scalar), self.valence)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Tensor":
        return Tensor(self._data / Fraction(scalar), self.valence)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.valence == other.valence
            and self._data.shape == other._data.shape
            and all(a == b for a, b in zip(self._data.flat, other._data.flat))
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = np.vectorize(format_rational, otypes=[object])(self._data).tolist()
        return f"Tensor(valence={self.valence}, {body})"


def _eye(n: int) -> np.ndarray:
    arr = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        arr[i, i] = Fraction(1)
    return arr


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    ra, sa = a.valence
    rb, sb = b.valence
    outer = np.multiply.outer(a.components, b.components)
    # reorder (a_cov, a_con, b_cov, b_con) -> (a_cov, b_cov, a_con, b_con)
    order = (
        list(range(ra))
        + list(range(ra + sa, ra + sa + rb))
        + list(range(ra, ra + sa))
        + list(range(ra + sa + rb, ra + sa + rb + sb))
    )
    return Tensor(np.transpose(outer, order), (ra + rb, sa + sb))


def contract(t: Tensor, cov_slot: int, contra_slot: int) -> Tensor:
    """Sum a covariant slot against a contravariant slot (slots are 0-based
    positions within their own group)."""
    r, s = t.valence
    if not (0 <= cov_slot < r and 0 <= contra_slot < s):
        raise IndexError(f"slots ({cov_slot}, {contra_slot}) out of range for valence {t.valence}")
    traced = np.trace(t.components, axis1=cov_slot, axis2=r + contra_slot)
    if r + s == 2:
        return Tensor(np.array(traced, dtype=object), (0, 0))
    return Tensor(traced, (r - 1, s - 1))


def trace(op: Tensor) -> Fraction:
    return contract(op, 0, 0).components.item()


def _check_bilinear(t: Tensor) -> None:
    if t.valence != (2, 0):
        raise ValueError(f"expected a (2,0) tensor, got valence {t.valence}")


def symmetrize(t: Tensor) -> Tensor:
    _check_bilinear(t)
    return Tensor((t.components + t.components.T) / 2, (2, 0))


def antisymmetrize(t: Tensor) -> Tensor:
    _check_bilinear(t)
    return Tensor((t.components - t.components.T) / 2, (2, 0))


def apply(op: Tensor, v: Tensor) -> Tensor:
    """``op(v)`` for a (1,1) operator and a vector."""
    return Tensor(v.components @ op.components, (0, 1))


def compose(a: Tensor, b: Tensor) -> Tensor:
    """The operator ``a ∘ b``."""
    return Tensor(b.components @ a.components, (1, 1))


def pair(form: Tensor, v: Tensor) -> Fraction:
    """``form(v)`` for a covector and a vector."""
    return np.dot(form.components, v.components)


def rational_inverse(mat: np.ndarray) -> np.ndarray:
    """Exact inverse of a square Fraction matrix by Gauss-Jordan."""
    n = mat.shape[0]
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat.tolist())]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return np.array([row[n:] for row in aug], dtype=object)
