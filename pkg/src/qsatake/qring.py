"""Exact scalars in Q(q^(1/2)).

Elements are stored as a pair of integer polynomials in s = q^(1/2).  Almost all
values live in Q(q); the half-integer powers are needed only by the
orthosymplectic R-matrix for osp(2n+1|2m), whose off-diagonal factors are
q^(rho_i - rho_j) with half-integer exponent differences.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

Poly = tuple  # ascending integer coefficients in s, no trailing zeros; () is zero


class QRingError(ArithmeticError):
    pass


class DivisionByZero(QRingError):
    pass


class PoleError(QRingError):
    pass


class ParseError(ValueError):
    pass


# polynomial helpers on ascending tuples


def _trim(c: list) -> Poly:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _neg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(a) == 1 and a[0] == 1:
        return b
    if len(b) == 1 and b[0] == 1:
        return a
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _ord(a: Poly) -> int:
    for i, x in enumerate(a):
        if x:
            return i
    raise QRingError("order of zero polynomial")


def _content(a: Poly) -> int:
    return reduce(math.gcd, a, 0)


def _is_monomial(a: Poly) -> bool:
    return sum(1 for x in a if x) == 1


def _primpart(a: Poly) -> Poly:
    c = _content(a)
    if a[-1] < 0:
        c = -c
    return tuple(x // c for x in a)


def _prem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder of a by b."""
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[shift + i] -= lr * y
        r = list(_trim(r))
    return tuple(r)


def _gcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient (primitive PRS)."""
    a, b = _primpart(a), _primpart(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_primpart(r) if r else ())
    return _primpart(a)


def _divexact(a: Poly, b: Poly) -> Poly:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    out = [0] * (len(a) - db)
    while a and len(a) - 1 >= db:
        lr = a[-1]
        if lr % lb:
            raise QRingError("inexact polynomial division")
        c = lr // lb
        shift = len(a) - 1 - db
        out[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = list(_trim(a))
    if a:
        raise QRingError("inexact polynomial division")
    return _trim(out)


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return (), (1,)
    k = min(_ord(num), _ord(den))
    if k:
        num, den = num[k:], den[k:]
    if not (_is_monomial(num) or _is_monomial(den)):
        g = _gcd(num, den)
        if len(g) > 1:
            num, den = _divexact(num, g), _divexact(den, g)
    c = math.gcd(_content(num), _content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    return num, den


class ScalarQ:
    """Immutable element of Q(q^(1/2)) in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Iterable[int] = (), den: Iterable[int] = (1,)):
        n, d = _normalize(_trim(list(num)), _trim(list(den)))
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "ScalarQ":
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ScalarQ is immutable")

    def __reduce__(self):
        return (ScalarQ._raw, (self.num, self.den))

    # constructors

    @classmethod
    def from_int(cls, n: int) -> "ScalarQ":
        return cls._raw((n,) if n else (), (1,))

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> "ScalarQ":
        x = Fraction(x)
        return cls((x.numerator,), (x.denominator,))

    @classmethod
    def coerce(cls, x: "ScalarLike") -> "ScalarQ":
        if isinstance(x, ScalarQ):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ScalarQ")

    # predicates

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_integral_q(self) -> bool:
        """True when only integer powers of q occur."""
        return all(c == 0 for c in self.num[1::2]) and all(c == 0 for c in self.den[1::2])

    # arithmetic

    def __add__(self, other):
        try:
            o = ScalarQ.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return ScalarQ(_add(self.num, o.num), self.den)
        return ScalarQ(
            _add(_mul(self.num, o.den), _mul(o.num, self.den)), _mul(self.den, o.den)
        )

    __radd__ = __add__

    def __neg__(self):
        return ScalarQ._raw(_neg(self.num), self.den)

    def __sub__(self, other):
        try:
            o = ScalarQ.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = ScalarQ.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not o.num:
            return ZERO
        if o.den == (1,) and o.num == (1,):
            return self
        if self.den == (1,) and self.num == (1,):
            return o
        return ScalarQ(_mul(self.num, o.num), _mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "ScalarQ":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return ScalarQ(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = ScalarQ.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            raise DivisionByZero("division by zero")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return ScalarQ.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = ScalarQ.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    # evaluation

    def eval(self, q0: Fraction | int) -> Fraction:
        return eval_rational(self, q0)

    # text / json

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"ScalarQ({to_text(self)!r})"

    def to_json(self) -> dict:
        return to_json(self)


ScalarLike = Union[ScalarQ, int, Fraction]

ZERO = ScalarQ._raw((), (1,))
ONE = ScalarQ._raw((1,), (1,))


def q_half_pow(k: int) -> ScalarQ:
    """q^(k/2)."""
    if k >= 0:
        return ScalarQ._raw((0,) * k + (1,), (1,))
    return ScalarQ._raw((1,), (0,) * (-k) + (1,))


def qpow(e: int | Fraction) -> ScalarQ:
    """q^e for integer or half-integer e."""
    e2 = Fraction(e) * 2
    if e2.denominator != 1:
        raise QRingError(f"exponent {e} is not a half-integer")
    return q_half_pow(int(e2))


Q = qpow(1)
QBAR = qpow(-1)
OMEGA = Q - QBAR


def q_int(n: int) -> ScalarQ:
    """Quantum integer (q^n - q^-n)/(q - q^-1)."""
    return (qpow(n) - qpow(-n)) / OMEGA


# evaluation


def _horner(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def eval_rational(a: ScalarQ, q0: Fraction | int) -> Fraction:
    """Exact value of a at q = q0."""
    q0 = Fraction(q0)
    if a.is_integral_q():
        num, den, x = a.num[::2], a.den[::2], q0
    else:
        x = _rational_sqrt(q0)
        if x is None:
            raise QRingError(f"value has half-integer q-powers; q0={q0} is not a rational square")
        num, den = a.num, a.den
    d = _horner(den, x)
    if d == 0:
        raise PoleError(f"pole at q = {q0}")
    return _horner(num, x) / d


# canonical text form


def _fmt_exp(e2: int) -> str:
    if e2 % 2 == 0:
        e = e2 // 2
        return "" if e == 1 else f"^{e}"
    return f"^({e2}/2)"


def _poly_text(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for e2 in range(len(p) - 1, -1, -1):
        c = p[e2]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e2 == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + "q" + _fmt_exp(e2)
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def to_text(a: ScalarQ) -> str:
    return f"({_poly_text(a.num)})/({_poly_text(a.den)})"


def to_json(a: ScalarQ) -> dict:
    """{"unit", "num", "den", "shift"}: value = x^shift * num(x)/den(x), x = unit."""
    num, den = a.num, a.den
    half = not a.is_integral_q()
    if not half:
        num, den = num[::2], den[::2]
    if not num:
        return {"unit": "q", "num": [], "den": [1], "shift": 0}
    kn, kd = _ord(num), _ord(den)
    return {
        "unit": "q^(1/2)" if half else "q",
        "num": list(num[kn:]),
        "den": list(den[kd:]),
        "shift": kn - kd,
    }


def from_json(d: dict) -> ScalarQ:
    step = 1 if d.get("unit", "q") == "q^(1/2)" else 2

    def spread(c):
        out = []
        for x in c:
            out.extend([x] + [0] * (step - 1))
        return _trim(out)

    num, den = spread(d["num"]), spread(d["den"])
    shift = int(d.get("shift", 0)) * step
    if shift >= 0:
        num = (0,) * shift + num
    else:
        den = (0,) * (-shift) + den
    return ScalarQ(num, den)


# parser for the text form and for hand-written parameter values

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at offset {pos} in {text!r}")
        out.append(m.group(1) or m.group(2) or ("^" if m.group(3) == "**" else m.group(3)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, tok=None):
        t = self.peek()
        if t is None or (tok is not None and t != tok):
            raise ParseError(f"expected {tok or 'token'} in {self.text!r}")
        self.i += 1
        return t

    def expr(self) -> ScalarQ:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        acc = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> ScalarQ:
        acc = self.power()
        while True:
            t = self.peek()
            if t in ("*", "/"):
                self.take()
                f = self.signed_power()
                acc = acc * f if t == "*" else acc / f
            elif t in ("q", "("):
                acc = acc * self.power()
            else:
                return acc

    def signed_power(self) -> ScalarQ:
        if self.peek() == "-":
            self.take()
            return -self.signed_power()
        return self.power()

    def power(self) -> ScalarQ:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.exponent()
            if base == Q:
                return qpow(e)
            if e.denominator != 1:
                raise ParseError(f"fractional power of non-q base in {self.text!r}")
            return base ** int(e)
        return base

    def exponent(self) -> Fraction:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        if self.peek() == "(":
            self.take()
            val = self.exponent()
            if self.peek() == "/":
                self.take()
                val = val / self.exponent()
            self.take(")")
            return sign * val
        t = self.take()
        if not t.isdigit():
            raise ParseError(f"bad exponent in {self.text!r}")
        return Fraction(sign * int(t))

    def atom(self) -> ScalarQ:
        t = self.take()
        if t == "q":
            return Q
        if t.isdigit():
            return ScalarQ.from_int(int(t))
        if t == "(":
            v = self.expr()
            self.take(")")
            return v
        raise ParseError(f"unexpected {t!r} in {self.text!r}")


def parse(text: str) -> ScalarQ:
    """Parse the canonical text form or a hand-written expression in q."""
    p = _Parser(text)
    if not p.toks:
        raise ParseError("empty scalar text")
    val = p.expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r} in {text!r}")
    return val
