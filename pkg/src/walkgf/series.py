"""Exact truncated power series and matrices over them.

Coefficients are arbitrary-precision rationals. Internally an integral
coefficient is kept as a Python ``int`` (cheap big-integer arithmetic); any
other value is a reduced :class:`fractions.Fraction`. Both compare and hash
equal to the corresponding ``Fraction``, and the public ``coeffs`` accessor
always hands out ``Fraction`` objects.

All operations demand identical truncation orders; nothing is silently
re-truncated.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import NotInvertibleInRing, OrderMismatchError

__all__ = [
    "TruncatedSeries",
    "SeriesMatrix",
    "KatzVectors",
    "series_add",
    "series_mul",
    "series_inverse",
    "series_dominates",
    "evaluate_numeric",
    "matrix_mul",
    "matrix_inverse",
    "format_rational",
    "parse_rational",
]


def _coerce(v):
    if isinstance(v, bool):
        raise TypeError("booleans are not series coefficients")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, Rational):
        return _coerce(Fraction(v.numerator, v.denominator))
    if isinstance(v, str):
        return _coerce(Fraction(v))
    if isinstance(v, np.integer):
        return int(v)
    raise TypeError(f"coefficient must be an exact rational, got {type(v).__name__}")


def _canon(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


_canon_array = np.frompyfunc(_canon, 1, 1)


def format_rational(v) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when q = 1."""
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; also accepts decimal literals."""
    return Fraction(text.strip())


def _check_order(a, b):
    if a.order != b.order:
        raise OrderMismatchError(f"truncation orders differ: {a.order} vs {b.order}")


class TruncatedSeries:
    """A formal power series in ``x`` kept modulo ``x**(order+1)``.

    >>> s = TruncatedSeries([1, -1, 0, 0])
    >>> s.inverse()
    TruncatedSeries([1, 1, 1, 1])
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        c = [_coerce(v) for v in coeffs]
        if order is None:
            if not c:
                raise ValueError("cannot infer order from an empty coefficient list")
        else:
            if order < 0:
                raise ValueError("order must be non-negative")
            if len(c) > order + 1:
                raise ValueError(f"{len(c)} coefficients exceed order {order}")
            c.extend([0] * (order + 1 - len(c)))
        self._c = tuple(c)

    @classmethod
    def _raw(cls, c: tuple) -> "TruncatedSeries":
        s = cls.__new__(cls)
        s._c = c
        return s

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls._raw((0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(order, 0)

    @classmethod
    def monomial(cls, order: int, power: int, coeff=1) -> "TruncatedSeries":
        """``coeff * x**power`` (zero if power exceeds the order)."""
        c = [0] * (order + 1)
        if power <= order:
            c[power] = _coerce(coeff)
        return cls._raw(tuple(c))

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(v) for v in self._c)

    def __getitem__(self, t: int) -> Fraction:
        return Fraction(self._c[t])

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return "TruncatedSeries([" + ", ".join(format_rational(v) for v in self._c) + "])"

    def is_zero(self) -> bool:
        return not any(self._c)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        _check_order(self, other)
        return TruncatedSeries._raw(tuple(_canon(a + b) for a, b in zip(self._c, other._c)))

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        _check_order(self, other)
        return TruncatedSeries._raw(tuple(_canon(a - b) for a, b in zip(self._c, other._c)))

    def __neg__(self):
        return TruncatedSeries._raw(tuple(-a for a in self._c))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            _check_order(self, other)
            return TruncatedSeries._raw(_convolve(self._c, other._c))
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            k = _coerce(other)
            return TruncatedSeries._raw(tuple(_canon(a * k) for a in self._c))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        return NotImplemented

    def shift(self, k: int = 1) -> "TruncatedSeries":
        """Multiply by ``x**k``, dropping terms past the order."""
        c = (0,) * k + self._c
        return TruncatedSeries._raw(c[: len(self._c)])

    def inverse(self) -> "TruncatedSeries":
        a = self._c
        if a[0] == 0:
            raise NotInvertibleInRing("series with zero constant term has no inverse")
        inv0 = _canon(1 / Fraction(a[0]))
        b = [inv0]
        for t in range(1, len(a)):
            acc = 0
            for k in range(1, t + 1):
                if a[k]:
                    acc += a[k] * b[t - k]
            b.append(_canon(-acc * inv0))
        return TruncatedSeries._raw(tuple(b))

    def dominates(self, other: "TruncatedSeries") -> bool:
        """Coefficient-wise ``self >= other`` up to the truncation order."""
        _check_order(self, other)
        return all(a >= b for a, b in zip(self._c, other._c))

    def evaluate(self, x0: float) -> float:
        if x0 < 0:
            raise ValueError("evaluation point must be non-negative")
        acc = 0.0
        for v in reversed(self._c):
            acc = acc * x0 + float(v)
        return acc

    def to_json(self) -> list:
        return [format_rational(v) for v in self._c]


def _convolve(a: tuple, b: tuple) -> tuple:
    n = len(a)
    out = []
    for t in range(n):
        acc = 0
        for k in range(t + 1):
            ak = a[k]
            if ak:
                bk = b[t - k]
                if bk:
                    acc += ak * bk
        out.append(_canon(acc))
    return tuple(out)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    return a.inverse()


def series_dominates(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    return a.dominates(b)


def evaluate_numeric(a: TruncatedSeries, x0: float) -> float:
    """Horner evaluation of the truncated polynomial at ``x0`` in double precision."""
    return a.evaluate(x0)


# --------------------------------------------------------------------------
# matrices


def _rational_inverse(mat: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a square object array of exact rationals."""
    n = mat.shape[0]
    if n and all(mat[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n)):
        return np.array(mat, dtype=object)
    aug = [[Fraction(mat[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise NotInvertibleInRing("constant-term matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        row = [v / p for v in aug[col]]
        aug[col] = row
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], row)]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = _canon(aug[i][n + j])
    return out


class SeriesMatrix:
    """Dense matrix whose entries are :class:`TruncatedSeries` of a common order.

    Stored coefficient-major: ``stack[t]`` is the matrix of ``x**t``
    coefficients. Square matrices are the norm; rectangular ones arise as
    blocks and support everything except inversion.
    """

    __slots__ = ("_s",)

    def __init__(self, entries: Sequence[Sequence], order: int | None = None):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        series = [[e if isinstance(e, TruncatedSeries) else TruncatedSeries(e, order)
                   for e in r] for r in rows]
        orders = {e.order for r in series for e in r}
        if len(orders) != 1:
            raise OrderMismatchError(f"entries have differing orders {sorted(orders)}")
        (T,) = orders
        if order is not None and T != order:
            raise OrderMismatchError(f"entries have order {T}, expected {order}")
        stack = np.empty((T + 1, len(rows), ncols), dtype=object)
        for i, r in enumerate(series):
            for j, e in enumerate(r):
                stack[:, i, j] = e._c
        self._s = stack

    @classmethod
    def _wrap(cls, stack: np.ndarray) -> "SeriesMatrix":
        m = cls.__new__(cls)
        m._s = stack
        return m

    @classmethod
    def identity(cls, n: int, order: int) -> "SeriesMatrix":
        s = np.zeros((order + 1, n, n), dtype=object)
        for i in range(n):
            s[0, i, i] = 1
        return cls._wrap(s)

    @classmethod
    def zeros(cls, rows: int, order: int, cols: int | None = None) -> "SeriesMatrix":
        return cls._wrap(np.zeros((order + 1, rows, rows if cols is None else cols), dtype=object))

    @classmethod
    def from_coefficients(cls, coeff_matrices: Sequence, order: int) -> "SeriesMatrix":
        """Build ``sum_t coeff_matrices[t] * x**t``; missing powers are zero."""
        mats = [np.asarray(m, dtype=object) for m in coeff_matrices]
        s = np.zeros((order + 1,) + mats[0].shape, dtype=object)
        for t, m in enumerate(mats[: order + 1]):
            s[t] = _canon_array(np.vectorize(_coerce, otypes=[object])(m))
        return cls._wrap(s)

    @property
    def order(self) -> int:
        return self._s.shape[0] - 1

    @property
    def shape(self) -> tuple:
        return self._s.shape[1:]

    @property
    def n(self) -> int:
        r, c = self.shape
        if r != c:
            raise ValueError("matrix is not square")
        return r

    def __getitem__(self, ij) -> TruncatedSeries:
        i, j = ij
        return TruncatedSeries._raw(tuple(self._s[:, i, j]))

    @property
    def entries(self) -> tuple:
        r, c = self.shape
        return tuple(tuple(self[i, j] for j in range(c)) for i in range(r))

    def coefficient(self, t: int) -> np.ndarray:
        """Copy of the matrix of ``x**t`` coefficients (object dtype)."""
        return np.array(self._s[t], dtype=object)

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self._s.shape == other._s.shape and bool(np.all(self._s == other._s))

    __hash__ = None

    def __repr__(self):
        return f"SeriesMatrix(shape={self.shape}, order={self.order})"

    def _compatible(self, other):
        if self.order != other.order:
            raise OrderMismatchError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        self._compatible(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return SeriesMatrix._wrap(_canon_array(self._s + other._s))

    def __sub__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        self._compatible(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return SeriesMatrix._wrap(_canon_array(self._s - other._s))

    def __neg__(self):
        return SeriesMatrix._wrap(-self._s)

    def scale(self, k) -> "SeriesMatrix":
        """Multiply every entry by the exact scalar ``k``."""
        k = _coerce(k)
        return SeriesMatrix._wrap(_canon_array(self._s * k))

    def shift(self, k: int = 1) -> "SeriesMatrix":
        """Multiply by ``x**k``."""
        s = np.zeros_like(self._s)
        if k <= self.order:
            s[k:] = self._s[: self.order + 1 - k]
        return SeriesMatrix._wrap(s)

    def __matmul__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        self._compatible(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        A, B = self._s, other._s
        T = self.order
        out = np.zeros((T + 1, A.shape[1], B.shape[2]), dtype=object)
        nzA = [bool(np.any(A[k] != 0)) for k in range(T + 1)]
        nzB = [bool(np.any(B[k] != 0)) for k in range(T + 1)]
        for t in range(T + 1):
            acc = out[t]
            for k in range(t + 1):
                if nzA[k] and nzB[t - k]:
                    acc = acc + A[k] @ B[t - k]
            out[t] = acc
        return SeriesMatrix._wrap(_canon_array(out))

    def inverse(self) -> "SeriesMatrix":
        """Exact inverse in the ring of series matrices.

        Solves ``A @ B = I`` order by order: ``B_0 = A_0^{-1}`` and
        ``B_t = -B_0 sum_{k=1..t} A_k B_{t-k}``.
        """
        n = self.n
        A = self._s
        T = self.order
        B0 = _rational_inverse(A[0])
        out = np.zeros((T + 1, n, n), dtype=object)
        out[0] = B0
        nzA = [bool(np.any(A[k] != 0)) for k in range(T + 1)]
        for t in range(1, T + 1):
            acc = np.zeros((n, n), dtype=object)
            for k in range(1, t + 1):
                if nzA[k]:
                    acc = acc + A[k] @ out[t - k]
            out[t] = _canon_array(-(B0 @ acc))
        return SeriesMatrix._wrap(out)

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix._wrap(np.ascontiguousarray(self._s.transpose(0, 2, 1)))

    @property
    def T(self) -> "SeriesMatrix":
        return self.transpose()

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> "SeriesMatrix":
        """Sub-matrix on the given row and column index lists (in that order)."""
        rows, cols = list(rows), list(cols)
        return SeriesMatrix._wrap(self._s[:, rows][:, :, cols])

    def with_block(self, rows: Sequence[int], cols: Sequence[int], value: "SeriesMatrix") -> "SeriesMatrix":
        """Copy of ``self`` with the ``rows x cols`` block replaced by ``value``."""
        self._compatible(value)
        s = self._s.copy()
        s[np.ix_(range(self.order + 1), list(rows), list(cols))] = value._s
        return SeriesMatrix._wrap(s)

    def row_sums(self) -> list:
        sums = _canon_array(self._s.sum(axis=2))
        return [TruncatedSeries._raw(tuple(sums[:, i])) for i in range(sums.shape[1])]

    def col_sums(self) -> list:
        sums = _canon_array(self._s.sum(axis=1))
        return [TruncatedSeries._raw(tuple(sums[:, j])) for j in range(sums.shape[1])]

    def total(self) -> TruncatedSeries:
        return TruncatedSeries._raw(tuple(_canon(v) for v in self._s.sum(axis=(1, 2))))

    def is_zero(self) -> bool:
        return not bool(np.any(self._s != 0))

    def evaluate(self, x0: float) -> np.ndarray:
        """Float matrix of all entries evaluated at ``x0``."""
        acc = np.zeros(self.shape)
        for t in range(self.order, -1, -1):
            acc = acc * x0 + self._s[t].astype(float)
        return acc

    def to_json(self) -> list:
        r, c = self.shape
        return [[[format_rational(v) for v in self._s[:, i, j]] for j in range(c)] for i in range(r)]


def matrix_mul(A: SeriesMatrix, B: SeriesMatrix) -> SeriesMatrix:
    return A @ B


def matrix_inverse(A: SeriesMatrix) -> SeriesMatrix:
    return A.inverse()


class KatzVectors:
    """Outgoing (row-sum) and incoming (column-sum) walk generating functions."""

    __slots__ = ("outgoing", "incoming")

    def __init__(self, outgoing: Sequence[TruncatedSeries], incoming: Sequence[TruncatedSeries]):
        if len(outgoing) != len(incoming):
            raise ValueError("outgoing and incoming vectors differ in length")
        self.outgoing = tuple(outgoing)
        self.incoming = tuple(incoming)

    @classmethod
    def of(cls, M: SeriesMatrix) -> "KatzVectors":
        return cls(M.row_sums(), M.col_sums())

    def __eq__(self, other):
        if not isinstance(other, KatzVectors):
            return NotImplemented
        return self.outgoing == other.outgoing and self.incoming == other.incoming

    def __repr__(self):
        return f"KatzVectors(n={len(self.outgoing)})"
