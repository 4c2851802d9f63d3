"""Exact Laurent polynomials for the bracket specializations.

A :class:`LaurentPoly` lives in ``Z[x^{1/6}, x^{-1/6}][K_1, K_2, ...]`` where
``x`` is a principal variable (``A`` for the Jones and arrow evaluations,
``q`` for the sl3 evaluation).  Principal exponents are stored as integers
counting sixths, so ``q^{1/6}`` has stored exponent ``1`` and ``A^{-2}`` has
stored exponent ``-12``.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

# monomial: (exponent in sixths, ((m, power), ...) sorted by m)
Monomial = tuple[int, tuple[tuple[int, int], ...]]


class ExponentDomainError(ValueError):
    """A substitution produced an exponent outside (1/6)Z."""


class LaurentPoly:
    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[Monomial, int] | None = None, var: str | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[mono] = clean.get(mono, 0) + int(c)
        self._terms = {m: c for m, c in clean.items() if c}
        if var is None and any(m[0] for m in self._terms):
            raise ValueError("a polynomial with nonzero exponents needs a variable name")
        self.var = var if self.has_principal() else None

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(0, ()): c})

    @classmethod
    def monomial(cls, var: str, sixths: int, coeff: int = 1, k: Mapping[int, int] | None = None) -> "LaurentPoly":
        kk = tuple(sorted((m, p) for m, p in (k or {}).items() if p))
        return cls({(sixths, kk): coeff}, var)

    @classmethod
    def power(cls, var: str, exponent: Union[int, Fraction, str], coeff: int = 1) -> "LaurentPoly":
        """``coeff * var^exponent`` with a rational exponent in (1/6)Z."""
        e = Fraction(exponent) * 6
        if e.denominator != 1:
            raise ExponentDomainError(f"exponent {exponent} is not a multiple of 1/6")
        return cls.monomial(var, int(e), coeff)

    @classmethod
    def K(cls, m: int) -> "LaurentPoly":
        if m < 1:
            raise ValueError("K variables are indexed from 1")
        return cls({(0, ((m, 1),)): 1})

    # basic protocol -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def has_principal(self) -> bool:
        return any(m[0] for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def uses_k(self) -> bool:
        return any(m[1] for m in self._terms)

    def k_indices(self) -> set[int]:
        return {i for m in self._terms for i, _ in m[1]}

    def _join_var(self, other: "LaurentPoly") -> str | None:
        if self.var and other.var and self.var != other.var:
            raise ValueError(f"cannot combine polynomials in {self.var} and {other.var}")
        return self.var or other.var

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self._terms != other._terms:
            return False
        return not (self.var and other.var and self.var != other.var)

    def __hash__(self):
        return hash((self.var, frozenset(self._terms.items())))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        var = self._join_var(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return LaurentPoly(out, var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({m: c * other for m, c in self._terms.items()}, self.var)
        var = self._join_var(other)
        out: dict[Monomial, int] = {}
        for (e1, k1), c1 in self._terms.items():
            for (e2, k2), c2 in other._terms.items():
                mono = (e1 + e2, _kmul(k1, k2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return LaurentPoly(out, var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            ((e, k), c), = self._terms.items()
            if k or abs(c) != 1:
                raise ValueError("only units can be inverted")
            return LaurentPoly({(e * n, ()): c ** -n}, self.var)
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"LaurentPoly({self!s})"

    # serialization --------------------------------------------------------
    def _sorted(self, descending: bool) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda t: (t[0][0], t[0][1]), reverse=descending)

    def __str__(self):
        """Human form, e.g. ``q + 1 + q^{-1}`` (descending exponents)."""
        if not self._terms:
            return "0"
        parts = []
        for (e, k), c in self._sorted(descending=True):
            factors = _kfactors(k)
            if e:
                factors.append(_pow_text(self.var, e, short=True))
            body = "*".join(factors)
            if not body:
                txt = str(abs(c))
            elif abs(c) == 1:
                txt = body
            else:
                txt = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", txt))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {t}" for s, t in parts[1:])

    def canonical(self) -> str:
        """Canonical form, e.g. ``-1*A^{-4} + 1*K1*A^{2}`` (ascending)."""
        if not self._terms:
            return "0"
        parts = []
        for (e, k), c in self._sorted(descending=False):
            factors = [str(c)] + _kfactors(k)
            if e:
                factors.append(_pow_text(self.var, e, short=False))
            parts.append("*".join(factors))
        return " + ".join(parts)

    # evaluation -----------------------------------------------------------
    def substitute(
        self,
        var: str | None = None,
        power: Union[int, Fraction, str] = 1,
        sign: int = 1,
        k: Mapping[int, "LaurentPoly"] | None = None,
    ) -> "LaurentPoly":
        """Substitute ``x -> sign * var^power`` and ``K_m -> k[m]``.

        ``var`` defaults to the current principal variable.  Each resulting
        exponent must lie in (1/6)Z; a negative sign needs integral source
        exponents.
        """
        power = Fraction(power)
        newvar = var or self.var
        out = LaurentPoly({}, newvar)
        for (e, kk), c in self._terms.items():
            new_e = Fraction(e, 6) * power * 6
            if new_e.denominator != 1:
                raise ExponentDomainError(f"exponent {Fraction(e, 6)}*{power} leaves (1/6)Z")
            coeff = c
            if sign == -1 and e:
                if e % 6:
                    raise ExponentDomainError("cannot take a fractional power of a negated variable")
                coeff *= (-1) ** (e // 6)
            term = LaurentPoly({(int(new_e), ()): coeff}, newvar if new_e else None)
            for m, p in kk:
                if k is not None and m in k:
                    term = term * (k[m] ** p)
                else:
                    term = term * LaurentPoly({(0, ((m, p),)): 1})
            out = out + term
        return out

    def evaluate(self, x: complex, k: Mapping[int, complex] | None = None) -> complex:
        """Floating evaluation on the principal branch of ``x^{1/6}``."""
        logx = cmath.log(x) if self.has_principal() else 0
        total = 0j
        for (e, kk), c in self._terms.items():
            val = c * cmath.exp(logx * e / 6)
            for m, p in kk:
                val *= (k or {}).get(m, 1) ** p
            total += val
        return total


def _kmul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for m, p in b:
        d[m] = d.get(m, 0) + p
    return tuple(sorted(d.items()))


def _kfactors(k) -> list[str]:
    return [f"K{m}" if p == 1 else f"K{m}^{p}" for m, p in k]


def _pow_text(var: str, sixths: int, short: bool) -> str:
    e = Fraction(sixths, 6)
    if short and e == 1:
        return var
    txt = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
    return f"{var}^{{{txt}}}"


_FACTOR = re.compile(r"^(?:K(\d+)(?:\^(\d+))?|([A-Za-z])(?:\^\{?(-?\d+(?:/\d+)?)\}?)?|(\d+))$")


def parse_poly(text: str) -> LaurentPoly:
    """Parse either the human or the canonical serialization."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return LaurentPoly()
    s = re.sub(r"\s+", " ", s)
    tokens = re.split(r" (?=[+-] )", s)
    result = LaurentPoly()
    for i, tok in enumerate(tokens):
        tok = tok.strip()
        sign = 1
        if tok.startswith("+ "):
            tok = tok[2:]
        elif tok.startswith("- "):
            sign, tok = -1, tok[2:]
        if tok.startswith("-"):
            sign, tok = -sign, tok[1:]
        term = LaurentPoly.const(sign)
        for factor in tok.split("*"):
            m = _FACTOR.match(factor.strip())
            if not m:
                raise ValueError(f"bad polynomial factor {factor!r} in {text!r}")
            kidx, kpow, var, vexp, num = m.groups()
            if kidx:
                term = term * (LaurentPoly.K(int(kidx)) ** int(kpow or 1))
            elif var:
                term = term * LaurentPoly.power(var, vexp or 1)
            else:
                term = term * int(num)
        result = result + term
    return result


def sum_polys(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    out: dict[Monomial, int] = {}
    var = None
    for p in polys:
        if p.var:
            if var and var != p.var:
                raise ValueError(f"cannot combine polynomials in {var} and {p.var}")
            var = p.var
        for m, c in p._terms.items():
            out[m] = out.get(m, 0) + c
    return LaurentPoly(out, var)


def A(exponent: Union[int, Fraction, str] = 1, coeff: int = 1) -> LaurentPoly:
    return LaurentPoly.power("A", exponent, coeff)


def q(exponent: Union[int, Fraction, str] = 1, coeff: int = 1) -> LaurentPoly:
    return LaurentPoly.power("q", exponent, coeff)


#: ``-A^2 - A^{-2}``, the value of an extra circle.
LOOP_A = A(2, -1) + A(-2, -1)
#: ``q + 1 + q^{-1}``, the sl3 loop value.
LOOP_Q = q(1) + 1 + q(-1)
#: ``q^{1/2} + q^{-1/2}``, the sl3 bigon value.
BIGON_Q = q("1/2") + q("-1/2")
