"""Exact sparse Laurent polynomials and rational functions.

Exponents live on the half-integer lattice and are stored doubled, so a
stored exponent ``e`` means the variable power ``e/2``.  Coefficients are
arbitrary-precision integers.  Example storage for ``3*X1^(3/2)*B2^-1 + 1``
over the variables ``("X1", "B2")``::

    {(3, -2): 3, (0, 0): 1}

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

from .errors import DomainError, NotSubtractionFree, PoleError, VariableMismatch


class HalfInt:
    """An element of (1/2)Z stored as its doubled value, so arithmetic is exact."""

    __slots__ = ("twice",)

    def __init__(self, twice):
        if not isinstance(twice, int):
            raise DomainError("HalfInt stores twice the value as an int, got %r" % (twice,))
        object.__setattr__(self, "twice", twice)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def of(cls, value):
        """Coerce an int, Fraction with denominator 1 or 2, or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Fraction):
            if value.denominator in (1, 2):
                return cls(int(value * 2))
            raise DomainError("%s is not a half integer" % value)
        raise DomainError("cannot interpret %r as a half integer" % (value,))

    @property
    def is_integer(self):
        return self.twice % 2 == 0

    def as_fraction(self):
        return Fraction(self.twice, 2)

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __mul__(self, other):
        if isinstance(other, int):
            return HalfInt(self.twice * other)
        raise DomainError("HalfInt only multiplies by int")

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __le__(self, other):
        return self.twice <= HalfInt.of(other).twice

    def __hash__(self):
        return hash(self.as_fraction())

    def __repr__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return "%d/2" % self.twice


def _frac_sqrt(value):
    """Exact square root of a nonnegative Fraction, or None."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


class LaurentExpr:
    """Sparse Laurent polynomial with half-integer exponents.

    ``vars`` is the ordered variable tuple; ``terms`` maps doubled-exponent
    tuples to nonzero integer coefficients.  Structural equality; canonical
    term order is lexicographically descending on exponent vectors.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        object.__setattr__(self, "vars", tuple(vars))
        clean = {}
        width = len(self.vars)
        for exps, coeff in terms.items():
            if len(exps) != width:
                raise VariableMismatch(
                    "exponent vector of length %d for %d variables" % (len(exps), width)
                )
            if not isinstance(coeff, int):
                raise DomainError("coefficients must be int, got %r" % (coeff,))
            if coeff:
                clean[tuple(exps)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentExpr is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, vars, coeff):
        vars = tuple(vars)
        if coeff == 0:
            return cls(vars, {})
        return cls(vars, {(0,) * len(vars): coeff})

    @classmethod
    def var(cls, vars, name, power=1):
        vars = tuple(vars)
        twice = HalfInt.of(power).twice
        exps = [0] * len(vars)
        try:
            exps[vars.index(name)] = twice
        except ValueError:
            raise VariableMismatch("unknown variable %r in %r" % (name, vars))
        return cls(vars, {tuple(exps): 1})

    @classmethod
    def monomial(cls, vars, exps, coeff=1):
        """Monomial from a map name -> exponent (int/Fraction/HalfInt)."""
        vars = tuple(vars)
        vec = [0] * len(vars)
        for name, power in exps.items():
            vec[vars.index(name)] = HalfInt.of(power).twice
        return cls(vars, {tuple(vec): coeff})

    # -- basic structure ----------------------------------------------

    @property
    def num_vars(self):
        return len(self.vars)

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * len(self.vars): 1}

    def is_monomial(self):
        return len(self.terms) == 1

    def is_subtraction_free(self):
        return bool(self.terms) and all(c > 0 for c in self.terms.values())

    def sorted_terms(self):
        """Terms in canonical order: lexicographically descending exponents."""
        return [(e, self.terms[e]) for e in sorted(self.terms, reverse=True)]

    def leading_coefficient(self):
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    def coefficient_sum(self):
        return sum(self.terms.values())

    def exponents(self, name):
        """All exponents of one variable, as HalfInt."""
        i = self.vars.index(name)
        return sorted({HalfInt(e[i]) for e in self.terms}, key=lambda h: h.twice)

    def term_items(self):
        """Canonically ordered (exponent-vector-of-HalfInt, coefficient) pairs."""
        return [(tuple(HalfInt(v) for v in e), c) for e, c in self.sorted_terms()]

    def __eq__(self, other):
        if not isinstance(other, LaurentExpr):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def _check_vars(self, other):
        if self.vars != other.vars:
            raise VariableMismatch("variable tuples differ: %r vs %r" % (self.vars, other.vars))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentExpr.const(self.vars, other)
        self._check_vars(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            total = terms.get(exps, 0) + coeff
            if total:
                terms[exps] = total
            else:
                terms.pop(exps, None)
        return LaurentExpr(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentExpr(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentExpr.const(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentExpr.const(self.vars, other)
        self._check_vars(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                total = terms.get(key, 0) + c1 * c2
                if total:
                    terms[key] = total
                else:
                    del terms[key]
        return LaurentExpr(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, power):
        if not isinstance(power, int):
            raise DomainError("polynomial powers must be int")
        if power < 0:
            if not self.is_monomial():
                raise DomainError("negative power of a non-monomial")
            ((exps, coeff),) = self.terms.items()
            if coeff not in (1, -1):
                raise DomainError("cannot invert coefficient %d exactly" % coeff)
            inv = LaurentExpr(self.vars, {tuple(-e for e in exps): coeff})
            return inv ** (-power)
        result = LaurentExpr.const(self.vars, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base if power > 1 else base
            power >>= 1
        return result

    def shift(self, doubled_exps):
        """Multiply by the monomial with the given doubled exponent vector."""
        return LaurentExpr(
            self.vars,
            {tuple(a + b for a, b in zip(e, doubled_exps)): c for e, c in self.terms.items()},
        )

    def divide_exact(self, other):
        """Quotient self / other if the division is exact, else None.

        Greedy leading-term division in lex order.  Exponents of a valid
        quotient are confined per coordinate by the Minkowski-sum bounds
        min(self) - min(other) and max(self) - max(other); stepping outside
        that box proves inexactness and stops the loop.
        """
        self._check_vars(other)
        if other.is_zero():
            raise PoleError("division by the zero polynomial")
        if self.is_zero():
            return self
        if other.is_monomial():
            ((exps, coeff),) = other.terms.items()
            terms = {}
            for e, c in self.terms.items():
                if c % coeff:
                    return None
                terms[tuple(a - b for a, b in zip(e, exps))] = c // coeff
            return LaurentExpr(self.vars, terms)
        width = len(self.vars)
        lo = tuple(
            min(e[i] for e in self.terms) - min(e[i] for e in other.terms)
            for i in range(width)
        )
        hi = tuple(
            max(e[i] for e in self.terms) - max(e[i] for e in other.terms)
            for i in range(width)
        )
        lead_exps = max(other.terms)
        lead_coeff = other.terms[lead_exps]
        remainder = dict(self.terms)
        quotient = {}
        while remainder:
            r_lead = max(remainder)
            r_coeff = remainder[r_lead]
            if r_coeff % lead_coeff:
                return None
            t_exps = tuple(a - b for a, b in zip(r_lead, lead_exps))
            if any(t < l or t > h for t, l, h in zip(t_exps, lo, hi)):
                return None
            t_coeff = r_coeff // lead_coeff
            quotient[t_exps] = t_coeff
            for e, c in other.terms.items():
                key = tuple(a + b for a, b in zip(e, t_exps))
                total = remainder.get(key, 0) - c * t_coeff
                if total:
                    remainder[key] = total
                else:
                    remainder.pop(key, None)
        return LaurentExpr(self.vars, quotient)

    def rename(self, new_vars, mapping=None):
        """Re-express over ``new_vars``; ``mapping`` sends old names to new."""
        new_vars = tuple(new_vars)
        positions = []
        for name in self.vars:
            target = mapping.get(name, name) if mapping else name
            positions.append(new_vars.index(target))
        terms = {}
        for exps, coeff in self.terms.items():
            vec = [0] * len(new_vars)
            for pos, e in zip(positions, exps):
                vec[pos] += e
            key = tuple(vec)
            total = terms.get(key, 0) + coeff
            if total:
                terms[key] = total
            else:
                del terms[key]
        return LaurentExpr(new_vars, terms)

    # -- evaluation ----------------------------------------------------

    def eval_exact(self, point):
        """Evaluate at a map name -> Fraction; half exponents need exact square roots."""
        values = []
        for name in self.vars:
            if name not in point:
                raise DomainError("no value supplied for %s" % name)
            values.append(Fraction(point[name]))
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            factor = Fraction(coeff)
            for value, twice in zip(values, exps):
                if twice == 0:
                    continue
                if twice % 2 == 0:
                    factor *= value ** (twice // 2)
                else:
                    root = _frac_sqrt(value)
                    if root is None:
                        raise DomainError(
                            "half exponent needs a perfect square, got %s" % value
                        )
                    factor *= root ** twice
            total += factor
        return total

    def trop_value(self, point):
        """max over terms of <exponent, point>, exactly."""
        if not self.terms:
            raise DomainError("tropical value of the zero polynomial")
        values = [Fraction(point[name]) for name in self.vars]
        best = None
        for exps in self.terms:
            val = sum((Fraction(e, 2) * v for e, v in zip(exps, values)), Fraction(0))
            if best is None or val > best:
                best = val
        return best

    # -- text form -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            factors = []
            for name, twice in zip(self.vars, exps):
                if twice == 0:
                    continue
                if twice == 2:
                    factors.append(name)
                elif twice % 2 == 0:
                    factors.append("%s^%d" % (name, twice // 2))
                else:
                    factors.append("%s^(%d/2)" % (name, twice))
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = str(magnitude) + "*" + "*".join(factors)
            parts.append((coeff < 0, body))
        out = []
        for i, (neg, body) in enumerate(parts):
            if i == 0:
                out.append("-" + body if neg else body)
            else:
                out.append(" - " + body if neg else " + " + body)
        return "".join(out)

    def __repr__(self):
        return "LaurentExpr(%s)" % self


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise DomainError("cannot parse %r at position %d" % (text, pos))
        pos = match.end()
        if match.lastgroup == "num":
            out.append(("num", int(match.group("num"))))
        elif match.lastgroup == "name":
            out.append(("name", match.group("name")))
        else:
            out.append(("op", match.group("op")))
    return out


class _Parser:
    """Recursive-descent parser for the canonical polynomial text format."""

    def __init__(self, tokens, vars):
        self.tokens = tokens
        self.pos = 0
        self.vars = tuple(vars)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value = self.take()
        if kind != "op" or value != op:
            raise DomainError("expected %r, got %r" % (op, value))

    def parse_sum(self):
        total = self.parse_term()
        while True:
            kind, value = self.peek()
            if kind == "op" and value in "+-":
                self.pos += 1
                term = self.parse_term()
                total = total + term if value == "+" else total - term
            else:
                return total

    def parse_term(self):
        sign = 1
        while True:
            kind, value = self.peek()
            if kind == "op" and value == "-":
                sign, _ = -sign, self.take()
            elif kind == "op" and value == "+":
                self.take()
            else:
                break
        result = self.parse_factor()
        while True:
            kind, value = self.peek()
            if kind == "op" and value == "*":
                self.take()
                result = result * self.parse_factor()
            else:
                break
        return result * sign

    def parse_factor(self):
        kind, value = self.take()
        if kind == "num":
            return LaurentExpr.const(self.vars, value)
        if kind == "name":
            power = self.parse_power()
            return LaurentExpr(
                self.vars,
                {self._unit(value, power.twice): 1},
            )
        if kind == "op" and value == "(":
            inner = self.parse_sum()
            self.expect_op(")")
            return inner
        raise DomainError("unexpected token %r" % (value,))

    def parse_power(self):
        kind, value = self.peek()
        if kind != "op" or value != "^":
            return HalfInt(2)
        self.take()
        sign = 1
        kind, value = self.take()
        if kind == "op" and value == "-":
            sign = -1
            kind, value = self.take()
        if kind == "num":
            return HalfInt(2 * sign * value)
        if kind == "op" and value == "(":
            inner_sign = 1
            kind, value = self.take()
            if kind == "op" and value == "-":
                inner_sign = -1
                kind, value = self.take()
            if kind != "num":
                raise DomainError("malformed exponent")
            numerator = value
            kind, value = self.take()
            if kind == "op" and value == "/":
                kind, value = self.take()
                if kind != "num" or value != 2:
                    raise DomainError("only halves allowed in exponents")
                twice = numerator
            else:
                raise DomainError("malformed exponent")
            self.expect_op(")")
            return HalfInt(sign * inner_sign * twice)
        raise DomainError("malformed exponent")

    def _unit(self, name, twice):
        vec = [0] * len(self.vars)
        try:
            vec[self.vars.index(name)] = twice
        except ValueError:
            raise VariableMismatch("unknown variable %r" % name)
        return tuple(vec)


def parse_laurent(text, vars):
    """Parse the canonical text format over the given variables."""
    parser = _Parser(_tokenize(text), vars)
    result = parser.parse_sum()
    if parser.pos != len(parser.tokens):
        raise DomainError("trailing tokens in %r" % text)
    return result


class RationalExpr:
    """Quotient of two LaurentExpr over the same variables.

    Normal form: the common monomial factor of numerator and denominator is
    cancelled and the denominator's leading coefficient is positive.  Only
    monomial content is cancelled; equality is decided by cross
    multiplication so full gcd reduction is unnecessary.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = LaurentExpr.const(num.vars, 1)
        num._check_vars(den)
        if den.is_zero():
            raise PoleError("zero denominator")
        if num.is_zero():
            den = LaurentExpr.const(num.vars, 1)
        else:
            shift = tuple(
                -min(min(e[i] for e in num.terms), min(e[i] for e in den.terms))
                for i in range(len(num.vars))
            )
            num = num.shift(shift)
            den = den.shift(shift)
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalExpr is immutable")

    @classmethod
    def const(cls, vars, value):
        value = Fraction(value)
        return cls(
            LaurentExpr.const(vars, value.numerator),
            LaurentExpr.const(vars, value.denominator),
        )

    @classmethod
    def var(cls, vars, name, power=1):
        return cls(LaurentExpr.var(vars, name, power))

    @classmethod
    def from_laurent(cls, num):
        return cls(num)

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def is_subtraction_free(self):
        return self.num.is_subtraction_free() and self.den.is_subtraction_free()

    def is_laurent_monomial(self):
        return self.num.is_monomial() and self.den.is_monomial()

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalExpr.const(self.vars, other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        if self.vars != other.vars:
            return False
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalExpr is unhashable (equality is by value)")

    def __add__(self, other):
        other = self._coerce(other)
        return RationalExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise PoleError("division by the zero expression")
        return RationalExpr(self.num * other.den, self.den * other.num)

    def __pow__(self, power):
        if not isinstance(power, int):
            raise DomainError("rational powers must be int")
        if power < 0:
            return (RationalExpr(self.den, self.num)) ** (-power)
        return RationalExpr(self.num ** power, self.den ** power)

    def _coerce(self, other):
        if isinstance(other, RationalExpr):
            self.num._check_vars(other.num)
            return other
        if isinstance(other, int):
            return RationalExpr.const(self.vars, other)
        if isinstance(other, Fraction):
            return RationalExpr.const(self.vars, other)
        if isinstance(other, LaurentExpr):
            return RationalExpr(other)
        raise DomainError("cannot combine RationalExpr with %r" % (other,))

    def eval_exact(self, point):
        den = self.den.eval_exact(point)
        if den == 0:
            raise PoleError("pole at the given point")
        return self.num.eval_exact(point) / den

    def trop_eval(self, point):
        """Exact piecewise-linear value of the tropicalized expression."""
        if not self.is_subtraction_free():
            raise NotSubtractionFree("tropicalization needs a subtraction-free expression")
        return self.num.trop_value(point) - self.den.trop_value(point)

    def substitute(self, images):
        """Compose with per-variable images (RationalExpr over a common tuple).

        Half-integer exponents are only composable when the image is a
        Laurent monomial with unit coefficient and integer exponents.
        """
        if not self.vars:
            target = ()
        else:
            missing = [v for v in self.vars if v not in images]
            if missing:
                raise DomainError("no image for variables %r" % (missing,))
            target = None
            for image in images.values():
                if target is None:
                    target = image.vars
                elif image.vars != target:
                    raise VariableMismatch("images live over different variable tuples")
        num = _substitute_poly(self.num, images, target)
        den = _substitute_poly(self.den, images, target)
        if den.num.is_zero():
            raise PoleError("denominator vanished identically after substitution")
        return num / den

    def reduced(self):
        """Cancel the denominator when it divides the numerator exactly."""
        if self.den.is_monomial():
            return self
        quotient = self.num.divide_exact(self.den)
        if quotient is None:
            return self
        return RationalExpr(quotient)

    def as_laurent(self):
        """The underlying Laurent polynomial, if the denominator is a monomial."""
        target = self.reduced()
        if not target.den.is_monomial():
            raise DomainError("denominator %s is not a monomial" % target.den)
        ((exps, coeff),) = target.den.terms.items()
        if coeff != 1:
            result = target.num.divide_exact(target.den)
            if result is None:
                raise DomainError("denominator coefficient %d does not divide" % coeff)
            return result
        return target.num.shift(tuple(-e for e in exps))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return "(%s) / (%s)" % (self.num, self.den)

    def __repr__(self):
        return "RationalExpr(%s)" % self


def _substitute_poly(poly, images, target):
    if target is None:
        target = poly.vars
    one = RationalExpr(LaurentExpr.const(target, 1))
    total = RationalExpr(LaurentExpr.const(target, 0))
    for exps, coeff in poly.terms.items():
        factor = one * coeff
        for name, twice in zip(poly.vars, exps):
            if twice == 0:
                continue
            image = images[name]
            if twice % 2 == 0:
                factor = factor * image ** (twice // 2)
            else:
                factor = factor * _monomial_half_power(image, twice)
        total = total + factor
    return total


def _monomial_half_power(image, twice):
    """image ** (twice/2) for odd ``twice``; image must be a unit monomial."""
    if not image.is_laurent_monomial():
        raise DomainError("half-integer exponent applied to a non-monomial image")
    mono = image.num.shift(tuple(-e for e in next(iter(image.den.terms))))
    ((exps, coeff),) = mono.terms.items()
    den_coeff = next(iter(image.den.terms.values()))
    if coeff != den_coeff:
        raise DomainError("half-integer exponent needs a unit-coefficient monomial image")
    if any(e % 2 for e in exps):
        raise DomainError("half-integer exponent of a half-integer monomial")
    new = tuple(e // 2 * twice for e in exps)
    return RationalExpr(LaurentExpr(image.vars, {new: 1}))


def parse_rational(text, vars):
    """Parse ``num`` or ``(num) / (den)`` in the canonical format."""
    if ") / (" in text:
        left, right = text.split(") / (", 1)
        if not left.startswith("(") or not right.endswith(")"):
            raise DomainError("malformed rational expression %r" % text)
        return RationalExpr(
            parse_laurent(left[1:], vars), parse_laurent(right[:-1], vars)
        )
    return RationalExpr(parse_laurent(text, vars))


# -- spec-facing operation wrappers --------------------------------------


def poly_arith(a, b, op):
    """add / mul / pow_int on LaurentExpr."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "pow_int":
        if not isinstance(b, int):
            raise DomainError("pow_int exponent must be int")
        return a ** b
    raise DomainError("unknown op %r" % op)


def ratexpr_combine(a, b, op):
    """add / mul / div on RationalExpr."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise DomainError("unknown op %r" % op)


def substitute_monomial(f, images):
    return f.substitute(images)


def eval_rational(f, point):
    return f.eval_exact(point)


def trop_eval(f, point):
    return f.trop_eval(point)


def trop_limit_enclosure(f, point, scale):
    """Proven enclosure of log f(e^{C u})/C around the tropical value.

    Returns ``(trop, slack_count)`` such that, with N = slack_count,
    trop <= log f(e^{C u})/C <= trop + log(N)/C holds exactly.  The proof
    only compares rationals: every numerator term satisfies
    <exponent, u> <= M with equality attained, so the numerator lies in
    [e^{CM}, N_num e^{CM}]; same for the denominator.
    """
    if not f.is_subtraction_free():
        raise NotSubtractionFree("enclosure needs a subtraction-free expression")
    if scale <= 0:
        raise DomainError("scale must be positive")
    trop = f.trop_eval(point)
    for poly in (f.num, f.den):
        best = poly.trop_value(point)
        values = [Fraction(point[name]) for name in poly.vars]
        attained = False
        for exps in poly.terms:
            val = sum((Fraction(e, 2) * v for e, v in zip(exps, values)), Fraction(0))
            if val > best:
                raise DomainError("internal: max not maximal")
            if val == best:
                attained = True
        if not attained:
            raise DomainError("internal: max not attained")
    slack = max(f.num.coefficient_sum(), f.den.coefficient_sum())
    return trop, slack
