"""Exact Gaussian rationals.

Real values are represented by plain :class:`fractions.Fraction` (or ``int``);
values with a nonzero imaginary part by :class:`GaussianRational`.  Every
arithmetic result is normalized back to ``Fraction`` when its imaginary part
vanishes, the same way ``complex`` and ``float`` coexist.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Optional, Union

from .errors import FieldError

Scalar = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- construction -----------------------------------------------------
    @staticmethod
    def make(re, im):
        """Build a scalar, returning a ``Fraction`` when ``im`` is zero."""
        if im == 0:
            return Fraction(re)
        return GaussianRational(re, im)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational.make(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational.make(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational.make(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, Rational):
            return GaussianRational.make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def reciprocal(self):
        n = self.norm()
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.reciprocal()
        if isinstance(other, Rational):
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return other * self.reciprocal()
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def as_scalar(x) -> Scalar:
    """Coerce ``int``/``Fraction``/``GaussianRational``/``complex`` to a scalar."""
    if isinstance(x, GaussianRational):
        return GaussianRational.make(x.re, x.im)
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, complex):
        # only exact small values are meaningful here
        return GaussianRational.make(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


def real_part(x: Scalar) -> Fraction:
    return x.re if isinstance(x, GaussianRational) else Fraction(x)


def imag_part(x: Scalar) -> Fraction:
    return x.im if isinstance(x, GaussianRational) else Fraction(0)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Canonical text: ``3``, ``-1/2``, ``i``, ``2*i``, ``(1/2-3*i)``."""
    re, im = real_part(x), imag_part(x)
    if im == 0:
        return format_fraction(re)
    if im == 1:
        im_text = "i"
    elif im == -1:
        im_text = "-i"
    else:
        im_text = f"{format_fraction(im)}*i"
    if re == 0:
        return im_text
    sign = "" if im_text.startswith("-") else "+"
    return f"({format_fraction(re)}{sign}{im_text})"


def scalar_to_json(x: Scalar) -> dict:
    return {"re": format_fraction(real_part(x)), "im": format_fraction(imag_part(x))}


def scalar_from_json(d: dict) -> Scalar:
    return GaussianRational.make(Fraction(d["re"]), Fraction(d["im"]))


# -- exact roots -------------------------------------------------------------

def _rational_root(q: Fraction, n: int) -> Optional[Fraction]:
    """Nonnegative real n-th root of a nonnegative rational, if rational."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = _int_root(num, n), _int_root(den, n)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _int_root(m: int, n: int) -> Optional[int]:
    if m < 0:
        return None
    if n == 2:
        r = isqrt(m)
    else:
        r = round(m ** (1.0 / n)) if m < 2**1000 else _int_root_newton(m, n)
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == m:
                return cand
        r = _int_root_newton(m, n)
    return r if r**n == m else None


def _int_root_newton(m: int, n: int) -> int:
    if m < 2:
        return m
    x = 1 << ((m.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def sqrt_exact(c: Scalar) -> Optional[Scalar]:
    """A square root of ``c`` in Q(i), or ``None`` if there is none."""
    re, im = real_part(c), imag_part(c)
    if im == 0:
        r = _rational_root(abs(re), 2)
        if r is None:
            return None
        return r if re >= 0 else GaussianRational.make(0, r)
    modulus = _rational_root(re * re + im * im, 2)
    if modulus is None:
        return None
    x = _rational_root((re + modulus) / 2, 2)
    y = _rational_root((modulus - re) / 2, 2)
    if x is None or y is None:
        return None
    if im < 0:
        y = -y
    return GaussianRational.make(x, y)


def root_exact(c: Scalar, n: int) -> Optional[Scalar]:
    """Some n-th root of ``c`` in Q(i), or ``None``."""
    if n < 1:
        raise ValueError("root degree must be positive")
    c = as_scalar(c)
    if c == 0:
        return Fraction(0)
    if n == 1:
        return c
    if n % 2 == 0:
        s = sqrt_exact(c)
        if s is not None:
            r = root_exact(s, n // 2)
            if r is not None:
                return r
        # the other square root can also lead somewhere
        if s is not None:
            r = root_exact(-s, n // 2)
            if r is not None:
                return r
        return _root_by_factoring(c, n)
    re, im = real_part(c), imag_part(c)
    if im == 0:
        r = _rational_root(abs(re), n)
        if r is not None:
            return r if re > 0 else -r
    return _root_by_factoring(c, n)


def _root_by_factoring(c: Scalar, n: int) -> Optional[Scalar]:
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly(t**n - to_sympy(c), t, domain=sympy.QQ_I)
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            return from_sympy(-b / a)
    return None


def require_root(c: Scalar, n: int) -> Scalar:
    r = root_exact(c, n)
    if r is None:
        raise FieldError(f"{format_scalar(c)} has no {n}-th root in Q(i)")
    return r


# -- sympy bridge (used for univariate factoring only) -----------------------

def to_sympy(x: Scalar):
    import sympy

    re, im = real_part(x), imag_part(x)
    return sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(
        im.numerator, im.denominator
    )


def from_sympy(v) -> Scalar:
    import sympy

    v = sympy.expand(sympy.sympify(v))
    re, im = v.as_real_imag()
    if not (re.is_Rational and im.is_Rational):
        raise FieldError(f"{v} is not a Gaussian rational")
    return GaussianRational.make(
        Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))
    )
