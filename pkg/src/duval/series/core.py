"""Truncated multivariate power series with exact Gaussian-rational coefficients.

A :class:`TruncSeries` is a finite map from exponent tuples to nonzero
scalars, together with the ordered variable names and a total-degree
precision ``N``: every stored term has degree ``<= N`` and the value is only
meaningful modulo terms of degree ``> N``.  ``precision=None`` marks an exact
polynomial, which never gets truncated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from ..errors import PreconditionError
from ..scalar import GaussianRational, Scalar, as_scalar

Exp = Tuple[int, ...]

#: Sentinel returned by :meth:`TruncSeries.order` for the zero series.
INFINITY = float("inf")


def min_precision(*precs: Optional[int]) -> Optional[int]:
    known = [p for p in precs if p is not None]
    return min(known) if known else None


def grlex_key(e: Exp):
    """Graded lexicographic key: lower total degree first, then x > y > z."""
    return (sum(e), tuple(-a for a in e))


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational)) and not isinstance(x, bool)


class TruncSeries:
    __slots__ = ("vars", "precision", "terms", "_by_degree")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exp, Scalar] = (),
                 precision: Optional[int] = None, *, _trusted: bool = False):
        self.vars = tuple(vars)
        self.precision = precision
        if _trusted:
            self.terms = terms
        else:
            n = len(self.vars)
            clean: Dict[Exp, Scalar] = {}
            for e, c in dict(terms).items():
                e = tuple(int(a) for a in e)
                if len(e) != n or any(a < 0 for a in e):
                    raise ValueError(f"bad exponent {e} for variables {self.vars}")
                if precision is not None and sum(e) > precision:
                    continue
                c = as_scalar(c)
                if c != 0:
                    clean[e] = clean.get(e, 0) + c
                    if clean[e] == 0:
                        del clean[e]
            self.terms = clean
        self._by_degree = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, vars, precision=None):
        return cls(vars, {}, precision, _trusted=True)

    @classmethod
    def const(cls, c, vars, precision=None):
        c = as_scalar(c)
        terms = {(0,) * len(vars): c} if c != 0 else {}
        return cls(vars, terms, precision, _trusted=True)

    @classmethod
    def var(cls, name, vars, precision=None):
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise ValueError(f"{name!r} is not one of {vars}")
        if precision is not None and precision < 1:
            return cls.zero(vars, precision)
        return cls(vars, {e: Fraction(1)}, precision, _trusted=True)

    @classmethod
    def monomial(cls, exp, vars, coeff=1, precision=None):
        return cls(vars, {tuple(exp): coeff}, precision)

    # -- basic queries ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, exp) -> Scalar:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def order(self):
        """Lowest total degree of a nonzero term; ``INFINITY`` for zero."""
        if not self.terms:
            return INFINITY
        return min(sum(e) for e in self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def homogeneous_part(self, d: int) -> "TruncSeries":
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, n: Optional[int]) -> "TruncSeries":
        """Drop terms of degree ``> n`` and lower the precision to ``n``."""
        p = min_precision(self.precision, n)
        if p is None:
            return self
        terms = {e: c for e, c in self.terms.items() if sum(e) <= p}
        return TruncSeries(self.vars, terms, p, _trusted=True)

    def with_precision(self, n: Optional[int]) -> "TruncSeries":
        """Reinterpret with precision ``n`` (exact polynomials may gain any)."""
        if n is None:
            return TruncSeries(self.vars, self.terms, None, _trusted=True)
        return self.truncate(n) if self.precision is not None else TruncSeries(
            self.vars, {e: c for e, c in self.terms.items() if sum(e) <= n}, n, _trusted=True)

    def _new(self, terms, precision="same"):
        if precision == "same":
            precision = self.precision
        return TruncSeries(self.vars, terms, precision, _trusted=True)

    def _check_vars(self, other):
        if self.vars != other.vars:
            raise PreconditionError(f"variable mismatch: {self.vars} vs {other.vars}")

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if _is_scalar(other):
            other = TruncSeries.const(other, self.vars, self.precision)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check_vars(other)
        p = min_precision(self.precision, other.precision)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v == 0:
                    del terms[e]
                else:
                    terms[e] = v
        if p is not None and (p != self.precision or p != other.precision):
            terms = {e: c for e, c in terms.items() if sum(e) <= p}
        return TruncSeries(self.vars, terms, p, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if _is_scalar(other):
            return self + (-as_scalar(other))
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        c = as_scalar(c)
        if c == 0:
            return self._new({})
        return self._new({e: v * c for e, v in self.terms.items()})

    def _degree_buckets(self):
        if self._by_degree is None:
            buckets: Dict[int, list] = {}
            for e, c in self.terms.items():
                buckets.setdefault(sum(e), []).append((e, c))
            self._by_degree = sorted(buckets.items())
        return self._by_degree

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check_vars(other)
        p = min_precision(self.precision, other.precision)
        a, b = self, other
        if len(a.terms) > len(b.terms):
            a, b = b, a
        if not a.terms or not b.terms:
            return TruncSeries(self.vars, {}, p, _trusted=True)
        bb = b._degree_buckets()
        out: Dict[Exp, Scalar] = {}
        nv = self.nvars
        for ea, ca in a.terms.items():
            da = sum(ea)
            limit = None if p is None else p - da
            for db, items in bb:
                if limit is not None and db > limit:
                    break
                for eb, cb in items:
                    if nv == 2:
                        e = (ea[0] + eb[0], ea[1] + eb[1])
                    elif nv == 3:
                        e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                    else:
                        e = tuple(x + y for x, y in zip(ea, eb))
                    v = out.get(e)
                    out[e] = ca * cb if v is None else v + ca * cb
        return TruncSeries(self.vars, {e: c for e, c in out.items() if c != 0}, p,
                           _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = TruncSeries.const(1, self.vars, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        if _is_scalar(c):
            return self.scale(1 / as_scalar(c))
        if isinstance(c, TruncSeries):
            from .hensel import reciprocal

            return self * reciprocal(c)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.vars == other.vars and self.terms == other.terms
        if _is_scalar(other):
            return self.terms == ({} if other == 0 else {(0,) * self.nvars: as_scalar(other)})
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def agrees(self, other: "TruncSeries", n: int) -> bool:
        """True iff the two series coincide modulo terms of degree ``> n``."""
        return self.truncate(n).terms == other.truncate(n).terms

    # -- calculus and substitution ----------------------------------------
    def derivative(self, var) -> "TruncSeries":
        k = self.vars.index(var) if isinstance(var, str) else int(var)
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                terms[tuple(f)] = c * e[k]
        p = None if self.precision is None else self.precision - 1
        return TruncSeries(self.vars, terms, p, _trusted=True)

    def gradient(self):
        return [self.derivative(k) for k in range(self.nvars)]

    def rename(self, vars: Sequence[str]) -> "TruncSeries":
        if len(vars) != self.nvars:
            raise ValueError("rename needs one name per variable")
        return TruncSeries(tuple(vars), self.terms, self.precision, _trusted=True)

    def embed(self, vars: Sequence[str]) -> "TruncSeries":
        """View this series inside a larger (or reordered) variable list."""
        vars = tuple(vars)
        idx = [vars.index(v) for v in self.vars]
        terms = {}
        for e, c in self.terms.items():
            f = [0] * len(vars)
            for a, i in zip(e, idx):
                f[i] = a
            terms[tuple(f)] = c
        return TruncSeries(vars, terms, self.precision, _trusted=True)

    def restrict(self, vars: Sequence[str]) -> "TruncSeries":
        """Drop the variables not in ``vars``; they must not occur."""
        vars = tuple(vars)
        idx = [self.vars.index(v) for v in vars]
        dropped = [i for i in range(self.nvars) if i not in idx]
        terms = {}
        for e, c in self.terms.items():
            if any(e[i] for i in dropped):
                raise PreconditionError(f"series depends on variables outside {vars}")
            terms[tuple(e[i] for i in idx)] = c
        return TruncSeries(vars, terms, self.precision, _trusted=True)

    def set_zero(self, var) -> "TruncSeries":
        k = self.vars.index(var) if isinstance(var, str) else int(var)
        return self._new({e: c for e, c in self.terms.items() if e[k] == 0})

    def variables_used(self):
        return {self.vars[k] for e in self.terms for k in range(self.nvars) if e[k]}

    def split_by(self, var) -> Dict[int, "TruncSeries"]:
        """Coefficients ``f_j`` with ``f = sum var**j * f_j``; ``f_j`` free of ``var``."""
        k = self.vars.index(var) if isinstance(var, str) else int(var)
        parts: Dict[int, Dict[Exp, Scalar]] = {}
        for e, c in self.terms.items():
            f = list(e)
            j = f[k]
            f[k] = 0
            parts.setdefault(j, {})[tuple(f)] = c
        return {j: TruncSeries(self.vars, t, self.precision, _trusted=True)
                for j, t in parts.items()}

    def divide_by_monomial(self, exp) -> "TruncSeries":
        """Exact division by a monomial; raises if some term is not divisible."""
        exp = tuple(exp)
        terms = {}
        for e, c in self.terms.items():
            f = tuple(a - b for a, b in zip(e, exp))
            if any(a < 0 for a in f):
                raise ArithmeticError("inexact monomial division")
            terms[f] = c
        p = None if self.precision is None else self.precision - sum(exp)
        return TruncSeries(self.vars, terms, p, _trusted=True)

    def __call__(self, *values):
        """Evaluate an exact polynomial at scalar values."""
        values = [as_scalar(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, a in zip(values, e):
                if a:
                    t = t * v**a
            total = total + t
        return total

    # -- display ----------------------------------------------------------
    def __str__(self):
        from ..expr import format_series

        return format_series(self)

    def __repr__(self):
        return f"TruncSeries({self.vars}, '{self}', precision={self.precision})"


def compose(f: TruncSeries, images: Sequence[TruncSeries]) -> TruncSeries:
    """Substitute ``images[k]`` for the k-th variable of ``f``.

    All images share one variable list, which becomes the variable list of the
    result.  When ``f`` is a truncated series every image must have zero
    constant term; exact polynomials may be substituted into freely.
    """
    if len(images) != f.nvars:
        raise PreconditionError("need one image per variable")
    if not images:
        return f
    target = images[0].vars
    for g in images:
        if g.vars != target:
            raise PreconditionError("images must share their variables")
    if f.precision is not None:
        for g in images:
            if g.constant_term() != 0:
                raise PreconditionError(
                    "substitution with nonzero constant term into a truncated series")
    p = min_precision(f.precision, *(g.precision for g in images))
    return _horner(f.terms, 0, images, target, p)


def _horner(terms: Mapping[Exp, Scalar], k: int, images, target, p) -> TruncSeries:
    if k == len(images):
        c = terms.get((), 0) if terms else 0
        return TruncSeries.const(c, target, p)
    by_power: Dict[int, Dict[Exp, Scalar]] = {}
    for e, c in terms.items():
        by_power.setdefault(e[0], {})[e[1:]] = c
    if not by_power:
        return TruncSeries.zero(target, p)
    x = images[k]
    if x.precision != p:
        x = x.truncate(p) if p is not None else x
    top = max(by_power)
    result = None
    for j in range(top, -1, -1):
        if result is not None:
            result = result * x
        part = by_power.get(j)
        if part is not None:
            inner = _horner(part, k + 1, images, target, p)
            result = inner if result is None else result + inner
    return result


class CoordChange:
    """Substitution ``vars[k] -> images[k]`` with invertible linear part.

    Composing a series in ``vars`` with the change (see :meth:`apply`) gives a
    series in the images' variables.
    """

    def __init__(self, vars: Sequence[str], images: Sequence[TruncSeries], check=True):
        self.vars = tuple(vars)
        self.images = tuple(images)
        if len(self.vars) != len(self.images):
            raise PreconditionError("need one image per variable")
        if check:
            for g in self.images:
                if g.constant_term() != 0:
                    raise PreconditionError("coordinate change must fix the origin")
            from .linalg import determinant

            if determinant(self.linear_matrix()) == 0:
                raise PreconditionError("linear part of coordinate change is singular")

    @property
    def target_vars(self):
        return self.images[0].vars if self.images else ()

    @property
    def precision(self):
        return min_precision(*(g.precision for g in self.images))

    @classmethod
    def identity(cls, vars, precision=None, target=None):
        target = tuple(target or vars)
        return cls(vars, [TruncSeries.var(v, target, precision) for v in target], check=False)

    @classmethod
    def linear(cls, vars, matrix, target=None, precision=None):
        """``vars[k] -> sum_j matrix[k][j] * target[j]``."""
        target = tuple(target or vars)
        images = []
        for row in matrix:
            terms = {}
            for j, c in enumerate(row):
                e = tuple(1 if i == j else 0 for i in range(len(target)))
                terms[e] = c
            images.append(TruncSeries(target, terms, precision))
        return cls(vars, images)

    def linear_matrix(self):
        n = len(self.target_vars)
        rows = []
        for g in self.images:
            rows.append([g.coeff(tuple(1 if i == j else 0 for i in range(n))) for j in range(n)])
        return rows

    def apply(self, f: TruncSeries) -> TruncSeries:
        if f.vars != self.vars:
            f = f.embed(self.vars) if set(f.vars) <= set(self.vars) else f
        if f.vars != self.vars:
            raise PreconditionError(f"series in {f.vars} cannot use change on {self.vars}")
        return compose(f, self.images)

    def then(self, other: "CoordChange") -> "CoordChange":
        """The change ``self`` followed by ``other`` (substitute ``other`` into images)."""
        return CoordChange(self.vars, [other.apply(g) for g in self.images], check=False)

    def truncate(self, n):
        return CoordChange(self.vars, [g.truncate(n) for g in self.images], check=False)

    def inverse(self, precision: Optional[int] = None) -> "CoordChange":
        """Formal inverse, computed by fixed-point iteration modulo degree ``> N``."""
        from .linalg import invert_matrix

        n_prec = min_precision(self.precision, precision)
        if n_prec is None:
            raise PreconditionError("inverse of an exact change needs a precision")
        src, tgt = self.vars, self.target_vars
        L = self.linear_matrix()
        Linv = invert_matrix(L)
        # images g_k(v) = sum_j L[k][j] v_j + H_k(v); solve u = L d + H(d) for d(u)
        higher = []
        for g in self.images:
            higher.append(g._new({e: c for e, c in g.terms.items() if sum(e) >= 2}))
        u = [TruncSeries.var(v, src, n_prec) for v in src]
        d = [sum((u[k].scale(Linv[j][k]) for k in range(len(src))),
                 TruncSeries.zero(src, n_prec)) for j in range(len(tgt))]
        if all(h.is_zero() for h in higher):
            return CoordChange(tgt, d, check=False)
        # each round fixes one more degree, so round q only needs precision q
        for q in range(2, n_prec + 1):
            dq = [TruncSeries(src, x.terms, q, _trusted=True) for x in d]
            hd = [compose(h.truncate(q), dq) for h in higher]
            rhs = [u[k].truncate(q) - hd[k] for k in range(len(src))]
            d = [sum((rhs[k].scale(Linv[j][k]) for k in range(len(src))),
                     TruncSeries.zero(src, q)) for j in range(len(tgt))]
        return CoordChange(tgt, d, check=False)

    def __eq__(self, other):
        return (isinstance(other, CoordChange) and self.vars == other.vars
                and self.images == other.images)

    def __repr__(self):
        body = ", ".join(f"{v} -> {g}" for v, g in zip(self.vars, self.images))
        return f"CoordChange({body})"


def poly(vars, terms: Iterable[Tuple[Scalar, Exp]], precision=None) -> TruncSeries:
    """Shorthand: ``poly('xyz', [(1, (2,0,0)), (-1, (0,0,5))])``."""
    acc: Dict[Exp, Scalar] = {}
    for c, e in terms:
        acc[tuple(e)] = acc.get(tuple(e), 0) + as_scalar(c)
    return TruncSeries(tuple(vars), acc, precision)
