from __future__ import annotations

"""Exact Laurent polynomials and rational functions over the rationals.

A Laurent polynomial is a dict from exponent tuples to Fraction coefficients,
zero coefficients never stored. Variables are named per polynomial; the
torus rings used by the models are ("tau1", ..., "taun", "u") where
theta_i = tau_i^2 and u = q^{-1/2}.

A weight gamma in doubled coordinates evaluates to prod tau_i^{gamma_i}, so
half-integral weights are honest monomials and no square roots appear.

Rational functions keep numerator and denominator separately; equality is
decided by cross-multiplication. `cancel()` hands the pair to sympy when a
reduced form is wanted for display.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .lattice import Weight
from .validators import DimensionError, DivergentSeriesError, PoleError, RelcharError, format_rational

__all__ = [
    "Exponent",
    "LaurentMono",
    "LaurentPoly",
    "RatFun",
    "SatakePoint",
    "torus_names",
    "eval_weight",
    "eval_coords",
    "weight_monomial",
    "geometric_closed_form",
    "geometric_partial_sum",
    "zeta_factor",
    "l_eta_factor",
]

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


def torus_names(dim: int) -> Tuple[str, ...]:
    """Variable names of the torus ring for a model with `dim` coordinates."""
    return tuple(f"tau{i + 1}" for i in range(dim)) + ("u",)


@dataclass(frozen=True)
class LaurentMono:
    coeff: Fraction
    exps: Exponent

    @property
    def is_one(self) -> bool:
        return self.coeff == 1 and not any(self.exps)


class LaurentPoly:
    """Sparse Laurent polynomial with exact rational coefficients."""

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Optional[Mapping[Exponent, Scalar]] = None):
        self.names: Tuple[str, ...] = tuple(names)
        clean: Dict[Exponent, Fraction] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(self.names):
                raise DimensionError(f"exponent {exps} does not match variables {self.names}")
            if c:
                clean[tuple(exps)] = Fraction(c)
        self.terms: Dict[Exponent, Fraction] = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, names: Sequence[str]) -> "LaurentPoly":
        return cls(names)

    @classmethod
    def const(cls, names: Sequence[str], value: Scalar) -> "LaurentPoly":
        return cls(names, {(0,) * len(names): Fraction(value)})

    @classmethod
    def monomial(cls, names: Sequence[str], exps: Sequence[int], coeff: Scalar = 1) -> "LaurentPoly":
        return cls(names, {tuple(exps): Fraction(coeff)})

    @classmethod
    def var(cls, names: Sequence[str], name: str, power: int = 1) -> "LaurentPoly":
        names = tuple(names)
        if name not in names:
            raise DimensionError(f"no variable '{name}' in {names}")
        exps = [0] * len(names)
        exps[names.index(name)] = power
        return cls(names, {tuple(exps): Fraction(1)})

    def _raw(self, terms: Dict[Exponent, Fraction]) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out.names = self.names
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def _coerce(self, other: object) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.names != self.names:
                raise DimensionError(f"variable mismatch: {self.names} vs {other.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(self.names, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: object) -> "LaurentPoly":
        o = self._coerce(other)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return self._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: object) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return self._raw({k: v * c for k, v in self.terms.items()})
        o = self._coerce(other)
        out: Dict[Exponent, Fraction] = {}
        for ka, va in self.terms.items():
            for kb, vb in o.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, Fraction(0)) + va * vb
        return self._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers are defined for monomials only")
            (k, v), = self.terms.items()
            return self._raw({tuple(n * e for e in k): v ** n})
        out = LaurentPoly.const(self.names, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.names, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.names), Fraction(0))

    def monomials(self) -> Iterator[LaurentMono]:
        for k in sorted(self.terms, reverse=True):
            yield LaurentMono(self.terms[k], k)

    def leading(self) -> LaurentMono:
        if not self.terms:
            raise ZeroDivisionError("zero polynomial has no leading term")
        k = max(self.terms)
        return LaurentMono(self.terms[k], k)

    def min_exps(self) -> Exponent:
        return tuple(min(k[i] for k in self.terms) for i in range(len(self.names))) if self.terms else (0,) * len(self.names)

    def max_exps(self) -> Exponent:
        return tuple(max(k[i] for k in self.terms) for i in range(len(self.names))) if self.terms else (0,) * len(self.names)

    def depends_on(self, indices: Iterable[int]) -> bool:
        idx = list(indices)
        return any(k[i] for k in self.terms for i in idx)

    def __len__(self) -> int:
        return len(self.terms)

    # -- transformations --------------------------------------------------

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponents."""
        return self._raw({tuple(a + b for a, b in zip(k, exps)): v for k, v in self.terms.items()})

    def map_exponents(self, fn: Callable[[Exponent], Exponent]) -> "LaurentPoly":
        out: Dict[Exponent, Fraction] = {}
        for k, v in self.terms.items():
            nk = fn(k)
            out[nk] = out.get(nk, Fraction(0)) + v
        return self._raw(out)

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        if len(values) != len(self.names):
            raise DimensionError(f"expected {len(self.names)} values, got {len(values)}")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for k, c in self.terms.items():
            term = c
            for v, e in zip(vals, k):
                if e:
                    if v == 0 and e < 0:
                        raise PoleError(f"negative power of a zero value in {self.names}")
                    term *= v ** e
            total += term
        return total

    def specialize(self, name: str, value: Scalar) -> "LaurentPoly":
        """Substitute a nonzero rational for one variable (its exponent becomes 0)."""
        i = self.names.index(name)
        v = Fraction(value)
        out: Dict[Exponent, Fraction] = {}
        for k, c in self.terms.items():
            if k[i] < 0 and v == 0:
                raise PoleError(f"cannot set {name}=0 in a term with negative power")
            nk = k[:i] + (0,) + k[i + 1:]
            out[nk] = out.get(nk, Fraction(0)) + c * v ** k[i]
        return self._raw(out)

    def specialize_square(self, name: str, square: Scalar) -> "LaurentPoly":
        """Substitute name^2 -> square; every exponent of `name` must be even."""
        i = self.names.index(name)
        s = Fraction(square)
        out: Dict[Exponent, Fraction] = {}
        for k, c in self.terms.items():
            if k[i] % 2:
                raise RelcharError(f"odd power of {name} cannot be specialized through its square")
            nk = k[:i] + (0,) + k[i + 1:]
            out[nk] = out.get(nk, Fraction(0)) + c * s ** (k[i] // 2)
        return self._raw(out)

    def truncate(self, indices: Sequence[int], order: int) -> "LaurentPoly":
        """Keep terms whose total degree in the given variables is <= order."""
        return self._raw({k: v for k, v in self.terms.items() if sum(k[i] for i in indices) <= order})

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient of an exact division, by lexicographic long division.

        In a Laurent ring every monomial divides every other, so a division
        that is not exact shows up as a quotient term outside the exponent
        box spanned by the two operands; that raises instead of looping.
        """
        b = self._coerce(other)
        if b.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self._raw({})
        lo = tuple(x - y for x, y in zip(self.min_exps(), b.min_exps()))
        hi = tuple(x - y for x, y in zip(self.max_exps(), b.max_exps()))
        lead_k, lead_c = max(b.terms), b.terms[max(b.terms)]
        rem = dict(self.terms)
        quot: Dict[Exponent, Fraction] = {}
        while rem:
            rk = max(rem)
            qk = tuple(x - y for x, y in zip(rk, lead_k))
            if any(q < l or q > h for q, l, h in zip(qk, lo, hi)):
                raise RelcharError("polynomial division is not exact")
            qc = rem[rk] / lead_c
            quot[qk] = quot.get(qk, Fraction(0)) + qc
            for k, v in b.terms.items():
                nk = tuple(x + y for x, y in zip(k, qk))
                nv = rem.get(nk, Fraction(0)) - qc * v
                if nv:
                    rem[nk] = nv
                else:
                    rem.pop(nk, None)
        return self._raw(quot)

    # -- sympy bridge -----------------------------------------------------

    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(n) for n in self.names)

    def to_sympy(self) -> sympy.Expr:
        syms = self.symbols()
        expr = sympy.Integer(0)
        for k, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, e in zip(syms, k):
                if e:
                    term *= s ** e
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr: sympy.Expr, names: Sequence[str]) -> "LaurentPoly":
        """Convert a sympy polynomial (nonnegative powers) back."""
        syms = [sympy.Symbol(n) for n in names]
        poly = sympy.Poly(sympy.expand(expr), *syms)
        terms: Dict[Exponent, Fraction] = {}
        for monom, coeff in poly.terms():
            c = sympy.Rational(coeff)
            terms[tuple(int(e) for e in monom)] = Fraction(int(c.p), int(c.q))
        return cls(names, terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: List[str] = []
        for mono in self.monomials():
            factors = [
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.names, mono.exps) if e
            ]
            c = mono.coeff
            if not factors:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{format_rational(c)}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


class RatFun:
    """Quotient of two Laurent polynomials in the same variables."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Optional[LaurentPoly] = None):
        if den is None:
            den = LaurentPoly.const(num.names, 1)
        if num.names != den.names:
            raise DimensionError(f"variable mismatch: {num.names} vs {den.names}")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        # Normalize: denominator has nonnegative exponents with minimum 0
        # in every variable and leading coefficient 1.
        shift = tuple(-e for e in den.min_exps())
        lead = den.leading().coeff
        inv = 1 / lead
        self.num = num.shift(shift) * inv
        self.den = den.shift(shift) * inv

    @property
    def names(self) -> Tuple[str, ...]:
        return self.num.names

    @classmethod
    def const(cls, names: Sequence[str], value: Scalar) -> "RatFun":
        return cls(LaurentPoly.const(names, value))

    @classmethod
    def of(cls, value: Union["RatFun", LaurentPoly, Scalar], names: Sequence[str]) -> "RatFun":
        if isinstance(value, RatFun):
            return value
        if isinstance(value, LaurentPoly):
            return cls(value)
        return cls.const(names, value)

    def _coerce(self, other: object) -> "RatFun":
        if isinstance(other, RatFun):
            if other.names != self.names:
                raise DimensionError(f"variable mismatch: {self.names} vs {other.names}")
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return RatFun.of(other, self.names)
        raise TypeError(f"cannot combine RatFun with {type(other).__name__}")

    def __add__(self, other: object) -> "RatFun":
        o = self._coerce(other)
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other: object) -> "RatFun":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "RatFun":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "RatFun":
        o = self._coerce(other)
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RatFun":
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> "RatFun":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            return RatFun.const(self.names, 1) / (self ** -n)
        return RatFun(self.num ** n, self.den ** n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly, RatFun)):
            o = self._coerce(other)
            return self.num * o.den == o.num * self.den
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise PoleError(f"denominator vanishes at {[format_rational(Fraction(v)) for v in values]}")
        return self.num.evaluate(values) / d

    def specialize(self, name: str, value: Scalar) -> "RatFun":
        den = self.den.specialize(name, value)
        if den.is_zero():
            raise PoleError(f"denominator vanishes at {name}={value}")
        return RatFun(self.num.specialize(name, value), den)

    def specialize_square(self, name: str, square: Scalar) -> "RatFun":
        den = self.den.specialize_square(name, square)
        if den.is_zero():
            raise PoleError(f"denominator vanishes at {name}^2={square}")
        return RatFun(self.num.specialize_square(name, square), den)

    def series(self, indices: Sequence[int], order: int) -> LaurentPoly:
        """Power series in the given variables up to total degree `order`.

        The other variables must not occur, and the denominator needs a
        nonzero constant term.
        """
        others = [i for i in range(len(self.names)) if i not in indices]
        if self.num.depends_on(others) or self.den.depends_on(others):
            raise RelcharError("series expansion needs all other variables specialized")
        if any(e < 0 for k in list(self.num.terms) + list(self.den.terms) for e in k):
            raise RelcharError("series expansion needs nonnegative exponents")
        c0 = self.den.constant_term()
        if c0 == 0:
            raise PoleError("denominator has no constant term")
        tail = (self.den - c0) * (-1 / c0)
        inv = LaurentPoly.const(self.names, 1 / c0)
        power = LaurentPoly.const(self.names, 1 / c0)
        for _ in range(order):
            power = (power * tail).truncate(indices, order)
            if power.is_zero():
                break
            inv = inv + power
        return (self.num * inv).truncate(indices, order)

    def cancel(self) -> "RatFun":
        """Reduced form through sympy (gcd of numerator and denominator removed)."""
        expr = sympy.cancel(self.num.to_sympy() / self.den.to_sympy())
        n, d = sympy.fraction(sympy.together(expr))
        syms = self.num.symbols()
        # Clear any remaining negative powers by a common monomial.
        shift = {s: 0 for s in syms}
        for part in (n, d):
            for term in sympy.Add.make_args(sympy.expand(part)):
                for s, e in term.as_powers_dict().items():
                    if s in shift and e.is_Integer and int(e) < shift[s]:
                        shift[s] = int(e)
        mono = sympy.Integer(1)
        for s, e in shift.items():
            mono *= s ** (-e)
        return RatFun(
            LaurentPoly.from_sympy(sympy.expand(n * mono), self.names),
            LaurentPoly.from_sympy(sympy.expand(d * mono), self.names),
        )

    def to_sympy(self) -> sympy.Expr:
        return self.num.to_sympy() / self.den.to_sympy()

    def __repr__(self) -> str:
        return f"RatFun(({self.num}) / ({self.den}))"

    def __str__(self) -> str:
        if self.den == LaurentPoly.const(self.names, 1):
            return str(self.num)
        return f"({self.num}) / ({self.den})"


# -- points and weights ----------------------------------------------------


Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SatakePoint:
    """Exact values of the torus half-coordinates tau_i and of u = q^{-1/2}.

    `twist` is an optional linear map applied to a weight before it is
    evaluated, so w.theta is represented by the matrix of w^{-1} and
    theta^{-1} by minus the identity. Weyl matrices in some coordinate
    systems have quarter entries, so the twisted point is generally not
    expressible through new tau values.
    """

    tau: Tuple[Fraction, ...]
    u: Fraction
    twist: Optional[Matrix] = None

    def __post_init__(self) -> None:
        if any(t == 0 for t in self.tau):
            raise PoleError("tau coordinates must be nonzero")
        if self.u == 0:
            raise PoleError("u must be nonzero")

    @property
    def q(self) -> Fraction:
        return 1 / (self.u * self.u)

    @property
    def dim(self) -> int:
        return len(self.tau)

    def values(self) -> Tuple[Fraction, ...]:
        if self.twist is not None:
            raise RelcharError("a twisted point has no plain coordinate values")
        return self.tau + (self.u,)

    def twisted(self, matrix: Matrix) -> "SatakePoint":
        """Point whose weights are first mapped by `matrix`, then by the current twist."""
        if self.twist is None:
            combined = matrix
        else:
            n = len(matrix)
            combined = tuple(
                tuple(sum((self.twist[a][k] * matrix[k][b] for k in range(n)), Fraction(0)) for b in range(n))
                for a in range(n)
            )
        return SatakePoint(self.tau, self.u, combined)

    def inverse(self) -> "SatakePoint":
        """theta^{-1}: every weight evaluated at its negative."""
        n = len(self.tau)
        minus = tuple(tuple(Fraction(-1 if a == b else 0) for b in range(n)) for a in range(n))
        return self.twisted(minus)

    def to_dict(self) -> Dict[str, str]:
        out = {f"tau{i + 1}": format_rational(t) for i, t in enumerate(self.tau)}
        out["u"] = format_rational(self.u)
        if self.twist is not None:
            out["twisted"] = "yes"
        return out


def eval_coords(coords: Sequence[int], point: SatakePoint) -> Fraction:
    if len(coords) != len(point.tau):
        raise DimensionError(f"weight of dimension {len(coords)} at a point of dimension {len(point.tau)}")
    if point.twist is not None:
        mapped = []
        for row in point.twist:
            v = sum((c * x for c, x in zip(row, coords) if x), Fraction(0))
            if v.denominator != 1:
                raise RelcharError(f"twisted weight {tuple(coords)} leaves the doubled lattice")
            mapped.append(int(v))
        coords = mapped
    value = Fraction(1)
    for t, e in zip(point.tau, coords):
        if e:
            value *= t ** e
    return value


def eval_weight(gamma: Weight, point: SatakePoint) -> Fraction:
    """e^gamma(theta) = prod tau_i^{gamma_i} with gamma in doubled coordinates."""
    return eval_coords(gamma.coords, point)


def weight_monomial(gamma: Weight, names: Sequence[str], u_exp: int = 0, coeff: Scalar = 1) -> LaurentPoly:
    """The monomial coeff * u^{u_exp} * e^gamma in a torus ring."""
    return LaurentPoly.monomial(names, tuple(gamma.coords) + (u_exp,), coeff)


# -- closed forms ----------------------------------------------------------


def geometric_closed_form(ratio: LaurentMono, names: Sequence[str]) -> RatFun:
    """sum_{k>=0} x^k = 1/(1 - x) for a monomial ratio x."""
    if ratio.is_one:
        raise DivergentSeriesError("geometric series with ratio 1")
    x = LaurentPoly.monomial(names, ratio.exps, ratio.coeff)
    return RatFun(LaurentPoly.const(names, 1), 1 - x)


def geometric_partial_sum(ratio: LaurentMono, names: Sequence[str], n: int) -> LaurentPoly:
    x = LaurentPoly.monomial(names, ratio.exps, ratio.coeff)
    out = LaurentPoly.zero(names)
    power = LaurentPoly.const(names, 1)
    for _ in range(n):
        out = out + power
        power = power * x
    return out


def zeta_factor(names: Sequence[str], d: int) -> RatFun:
    """zeta(d) = 1/(1 - q^{-d}) = 1/(1 - u^{2d})."""
    return geometric_closed_form(LaurentMono(Fraction(1), _u_exps(names, 2 * d)), names)


def l_eta_factor(names: Sequence[str], d: int) -> RatFun:
    """L(d, eta) = 1/(1 + q^{-d}) for the unramified quadratic character."""
    return geometric_closed_form(LaurentMono(Fraction(-1), _u_exps(names, 2 * d)), names)


def _u_exps(names: Sequence[str], k: int) -> Exponent:
    exps = [0] * len(names)
    exps[list(names).index("u")] = k
    return tuple(exps)
