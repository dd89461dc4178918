"""Exact arithmetic over Q and quadratic fields Q(sqrt d)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence, Union

from .errors import BadDiscriminantError, MixedFieldError

Scalar = Union["QuadScalar", int, Fraction]


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class QuadScalar:
    """The number ``a + b*sqrt(d)``; ``d is None`` means the field Q.

    Instances are immutable. Plain ints and Fractions are accepted as
    operands and lifted into the field of the other operand.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: Optional[int] = None):
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if d is None and b:
            raise MixedFieldError("irrational part given for the rational field")
        self.a = a
        self.b = b
        self.d = d

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> Optional[QuadScalar]:
        if isinstance(other, QuadScalar):
            if other.d == self.d:
                return other
            # a rational-context scalar lifts into any field
            if other.d is None:
                return QuadScalar(other.a, 0, self.d)
            if self.d is None and not self.b:
                return None
            raise MixedFieldError(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
        if isinstance(other, (int, Fraction)):
            return QuadScalar(other, 0, self.d)
        return None

    def _pair(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, QuadScalar):
                # self is a rational-context value and other lives in Q(sqrt d)
                return QuadScalar(self.a, 0, other.d), other
            return None, None
        return self, o

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        x, y = self._pair(other)
        if x is None:
            return NotImplemented
        return QuadScalar(x.a + y.a, x.b + y.b, x.d)

    __radd__ = __add__

    def __sub__(self, other):
        x, y = self._pair(other)
        if x is None:
            return NotImplemented
        return QuadScalar(x.a - y.a, x.b - y.b, x.d)

    def __rsub__(self, other):
        x, y = self._pair(other)
        if x is None:
            return NotImplemented
        return QuadScalar(y.a - x.a, y.b - x.b, x.d)

    def __mul__(self, other):
        x, y = self._pair(other)
        if x is None:
            return NotImplemented
        if not x.b and not y.b:
            return QuadScalar(x.a * y.a, 0, x.d)
        return QuadScalar(x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a, x.d)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        if self.d is None:
            return self.a * self.a
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> QuadScalar:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in a quadratic field")
        return QuadScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        x, y = self._pair(other)
        if x is None:
            return NotImplemented
        return x * y.inverse()

    def __rtruediv__(self, other):
        x, y = self._pair(other)
        if x is None:
            return NotImplemented
        return y * x.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadScalar(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> QuadScalar:
        return QuadScalar(self.a, -self.b, self.d)

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_rational(self) -> bool:
        return not self.b

    def __bool__(self):
        return not self.is_zero()

    # -- comparison, hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            if other.d != self.d and (self.b or other.b):
                return False
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sort_key(self):
        return (self.a, self.b)

    def __repr__(self):
        if self.d is None:
            return f"QuadScalar({_fmt_rational(self.a)})"
        return f"QuadScalar({_fmt_rational(self.a)}, {_fmt_rational(self.b)}, d={self.d})"

    def __str__(self):
        if not self.b:
            return _fmt_rational(self.a)
        return f"{_fmt_rational(self.a)} + {_fmt_rational(self.b)} s({self.d})"


@dataclass(frozen=True)
class FieldContext:
    """The field Q(sqrt d); ``d=None`` is Q itself."""

    d: Optional[int] = None

    def __post_init__(self):
        if self.d is not None and (self.d in (0, 1) or not is_squarefree(self.d)):
            raise BadDiscriminantError(f"d = {self.d} is not a squarefree integer other than 0, 1")

    def __call__(self, a=0, b=0) -> QuadScalar:
        return QuadScalar(a, b, self.d)

    @property
    def sqrt(self) -> QuadScalar:
        if self.d is None:
            raise MixedFieldError("the rational field has no distinguished square root")
        return QuadScalar(0, 1, self.d)

    @property
    def zero(self) -> QuadScalar:
        return QuadScalar(0, 0, self.d)

    @property
    def one(self) -> QuadScalar:
        return QuadScalar(1, 0, self.d)

    def lift(self, x: Scalar) -> QuadScalar:
        if isinstance(x, QuadScalar):
            if x.d == self.d:
                return x
            if x.b:
                raise MixedFieldError(f"cannot move {x!r} into Q(sqrt {self.d})")
            return QuadScalar(x.a, 0, self.d)
        if isinstance(x, Rational):
            return QuadScalar(Fraction(x), 0, self.d)
        raise TypeError(f"not a field element: {x!r}")

    def __str__(self):
        return "Q" if self.d is None else f"Q(sqrt({self.d}))"


RATIONAL = FieldContext(None)


def rank(rows: Sequence[Sequence[QuadScalar]], ncols: int) -> int:
    """Rank of a matrix over a field by exact Gaussian elimination."""
    m = [list(r) for r in rows]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        prow = [x * inv for x in m[r]]
        m[r] = prow
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                row = m[i]
                m[i] = [row[j] - f * prow[j] if j >= c else row[j] for j in range(ncols)]
        r += 1
        if r == len(m):
            break
    return r
