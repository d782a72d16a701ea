"""Scalar arithmetic: exact rationals and Gaussian rationals Q(i).

Coefficients throughout the package are either ``fractions.Fraction`` or
``GaussianRational``.  A Gaussian rational with zero imaginary part is
normalised back to a plain ``Fraction`` by :func:`norm_scalar`, so element
coefficient dictionaries stay canonical.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """A number a + b*i with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return scalar_str(self)


I = GaussianRational(0, 1)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return NotImplemented


def norm_scalar(s):
    """Collapse a real Gaussian rational to a Fraction; pass other scalars through."""
    if isinstance(s, GaussianRational) and s.im == 0:
        return s.re
    if isinstance(s, int):
        return Fraction(s)
    return s


def is_zero(s) -> bool:
    if isinstance(s, GaussianRational):
        return s.re == 0 and s.im == 0
    return s == 0


def scalar_str(s) -> str:
    """Canonical text form: "3", "-1/2", "i", "(1/2+3i)", "(1-i)"."""
    s = norm_scalar(s)
    if isinstance(s, GaussianRational):
        if s.re == 0:
            return _imag_str(s.im)
        sign = "+" if s.im > 0 else "-"
        return f"({s.re}{sign}{_imag_str(abs(s.im)).lstrip('+')})"
    return str(s)


def _imag_str(b: Fraction) -> str:
    if b == 1:
        return "i"
    if b == -1:
        return "-i"
    return f"{b}i"
