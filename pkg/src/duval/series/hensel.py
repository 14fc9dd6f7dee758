"""Newton (Hensel) iteration for reciprocals and n-th roots of units."""

from __future__ import annotations

from typing import Optional, Union

from ..errors import FieldError, PreconditionError
from ..scalar import Scalar, as_scalar, format_scalar, require_root
from .core import INFINITY, TruncSeries, min_precision


def _working_precision(u: TruncSeries, precision: Optional[int]) -> int:
    p = min_precision(u.precision, precision)
    if p is None:
        raise PreconditionError("an exact polynomial needs an explicit precision here")
    return p


def reciprocal(u: TruncSeries, precision: Optional[int] = None) -> TruncSeries:
    """``1/u`` for a unit ``u`` (nonzero constant term)."""
    p = _working_precision(u, precision)
    u = u.with_precision(p)
    c = u.constant_term()
    if c == 0:
        raise PreconditionError("not a unit: constant term is zero")
    a = TruncSeries.const(1 / c, u.vars, p)
    two = TruncSeries.const(2, u.vars, p)
    for _ in range(p.bit_length() + 2):
        nxt = a * (two - u * a)
        if nxt == a:
            break
        a = nxt
    return a


def nth_root_of_unit(u: TruncSeries, n: int, a0: Union[Scalar, TruncSeries], k: int = 1,
                     precision: Optional[int] = None) -> TruncSeries:
    """``a`` with ``a**n == u`` modulo degree ``> N`` and ``a == a0`` mod ``m**k``.

    ``a0`` is a scalar or a series; it must satisfy ``a0**n == u`` modulo
    ``m**k`` and its constant term must be an exact n-th root of ``u(0)``.
    """
    if not isinstance(n, int) or n < 1:
        raise PreconditionError("root degree must be a positive integer")
    if k < 1:
        raise PreconditionError("congruence order k must be at least 1")
    p = _working_precision(u, precision)
    u = u.with_precision(p)
    u0 = u.constant_term()
    if u0 == 0:
        raise PreconditionError("not a unit: constant term is zero")
    if isinstance(a0, TruncSeries):
        if a0.vars != u.vars:
            raise PreconditionError("a0 and u must share variables")
        # only a0 mod m^k matters, so its own precision does not cap the result
        start = TruncSeries(u.vars, a0.terms, None).truncate(p)
    else:
        start = TruncSeries.const(as_scalar(a0), u.vars, p)
    c0 = start.constant_term()
    if c0 ** n != u0:
        raise FieldError(f"{format_scalar(c0)}^{n} != {format_scalar(u0)}")
    if (start ** n - u).order() < min(k, p + 1):
        raise PreconditionError(f"a0^{n} is not congruent to u modulo m^{k}")
    a = start
    for _ in range(p.bit_length() + 3):
        defect = a ** n - u
        if defect.is_zero():
            break
        a = a - defect * reciprocal((a ** (n - 1)).scale(n), p)
    if not (a ** n - u).is_zero():
        raise AssertionError("Newton iteration failed to converge")
    if (a - start).order() < min(k, p + 1):
        raise AssertionError("root drifted from its initial approximation")
    return a


def nth_root(u: TruncSeries, n: int, precision: Optional[int] = None) -> TruncSeries:
    """Some n-th root of a unit, starting from an exact root of ``u(0)``."""
    return nth_root_of_unit(u, n, require_root(u.constant_term(), n), 1, precision)
