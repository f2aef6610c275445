import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Final, Self

import numpy as np
from numpy.polynomial import polynomial as poly

from qvista.util.const import ROOT_MERGE_TOLERANCE
from .errors import CommonRoots, DegreeTooLow, JuliaError, MapSyntaxError, RootFindFailure

_TOKEN: Final = re.compile(r'\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>[ij])?'
                           r'|(?P<name>[A-Za-z_]+)|(?P<op>\*\*|[-+*/^()]))')

# numerator and denominator, lowest degree first
type Fraction = tuple[np.ndarray, np.ndarray]

ONE: Final = np.array([1.0 + 0j])


def _trim(coefficients: np.ndarray) -> np.ndarray:
    return poly.polytrim(np.asarray(coefficients, dtype=complex), 0)


class _Parser:
    """Recursive descent over + - * / ^ with implicit multiplication, building polynomial fractions."""

    def __init__(self, text: str):
        self.__text = text
        self.__tokens = self.__tokenize(text)
        self.__position = 0

    def __tokenize(self, text: str) -> list[tuple[str, str, int]]:
        tokens, offset = [], 0
        stripped = text.rstrip()
        while offset < len(stripped):
            match = _TOKEN.match(stripped, offset)
            if match is None:
                raise MapSyntaxError(text, offset, 'unexpected character')
            if match.group('number') is not None:
                kind = 'imag' if match.group('imag') else 'number'
                tokens.append((kind, match.group('number'), match.start('number')))
            elif match.group('name') is not None:
                tokens.append(('name', match.group('name'), match.start('name')))
            else:
                tokens.append(('op', '^' if match.group('op') == '**' else match.group('op'), match.start('op')))
            offset = match.end()
        return tokens

    def __peek(self) -> tuple[str, str, int] | None:
        return self.__tokens[self.__position] if self.__position < len(self.__tokens) else None

    def __take(self) -> tuple[str, str, int]:
        token = self.__peek()
        if token is None:
            raise MapSyntaxError(self.__text, len(self.__text), 'unexpected end of input')
        self.__position += 1
        return token

    def __expect(self, op: str):
        kind, value, position = self.__take()
        if kind != 'op' or value != op:
            raise MapSyntaxError(self.__text, position, f'expected {op!r}')

    def parse(self) -> Fraction:
        result = self.__expression()
        if self.__peek() is not None:
            raise MapSyntaxError(self.__text, self.__peek()[2], 'unexpected token')
        return result

    def __expression(self) -> Fraction:
        result = self.__term()
        while (token := self.__peek()) is not None and token[0] == 'op' and token[1] in '+-':
            self.__take()
            other = self.__term()
            result = _add(result, other if token[1] == '+' else _negate(other))
        return result

    def __term(self) -> Fraction:
        result = self.__unary()
        while (token := self.__peek()) is not None:
            kind, value, position = token
            if kind == 'op' and value in '*/':
                self.__take()
                other = self.__unary()
                result = _multiply(result, other) if value == '*' else _divide(result, other, self.__text, position)
            elif kind in ('number', 'imag', 'name') or (kind == 'op' and value == '('):
                result = _multiply(result, self.__power())
            else:
                break
        return result

    def __unary(self) -> Fraction:
        token = self.__peek()
        if token is not None and token[0] == 'op' and token[1] in '+-':
            self.__take()
            operand = self.__unary()
            return operand if token[1] == '+' else _negate(operand)
        return self.__power()

    def __power(self) -> Fraction:
        base = self.__atom()
        token = self.__peek()
        if token is None or token[0] != 'op' or token[1] != '^':
            return base
        self.__take()
        sign = 1
        if (following := self.__peek()) is not None and following[:2] == ('op', '-'):
            self.__take()
            sign = -1
        kind, value, position = self.__take()
        if kind != 'number' or not value.isdigit():
            raise MapSyntaxError(self.__text, position, 'exponent must be an integer')
        return _power(base, sign * int(value), self.__text, position)

    def __atom(self) -> Fraction:
        kind, value, position = self.__take()
        if kind == 'number':
            return np.array([complex(float(value), 0.0)]), ONE
        if kind == 'imag':
            return np.array([complex(0.0, float(value))]), ONE
        if kind == 'name':
            if value == 'z':
                return np.array([0j, 1 + 0j]), ONE
            if value in ('i', 'j'):
                return np.array([1j]), ONE
            raise MapSyntaxError(self.__text, position, f'unknown name {value!r}')
        if value == '(':
            inner = self.__expression()
            self.__expect(')')
            return inner
        raise MapSyntaxError(self.__text, position, f'unexpected {value!r}')


def _negate(a: Fraction) -> Fraction:
    return -a[0], a[1]


def _add(a: Fraction, b: Fraction) -> Fraction:
    if a[1].shape == b[1].shape and np.allclose(a[1], b[1]):
        return poly.polyadd(a[0], b[0]), a[1]
    return poly.polyadd(poly.polymul(a[0], b[1]), poly.polymul(b[0], a[1])), poly.polymul(a[1], b[1])


def _multiply(a: Fraction, b: Fraction) -> Fraction:
    return poly.polymul(a[0], b[0]), poly.polymul(a[1], b[1])


def _divide(a: Fraction, b: Fraction, text: str, position: int) -> Fraction:
    if not np.any(_trim(b[0])):
        raise MapSyntaxError(text, position, 'division by zero')
    return poly.polymul(a[0], b[1]), poly.polymul(a[1], b[0])


def _power(base: Fraction, exponent: int, text: str, position: int) -> Fraction:
    if exponent < 0:
        base = _divide((ONE, ONE), base, text, position)
        exponent = -exponent
    result = (ONE, ONE)
    for _ in range(exponent):
        result = _multiply(result, base)
    return result


def parse_map(text: str) -> Fraction:
    if not text.strip():
        raise MapSyntaxError(text, 0, 'empty map')
    return _Parser(text).parse()


@dataclass(frozen=True, eq=False)
class RationalMap:
    """g = numerator / denominator on the Riemann sphere; coefficients lowest degree first."""
    numerator: np.ndarray
    denominator: np.ndarray
    text: str = ''
    tolerance: float = field(default=ROOT_MERGE_TOLERANCE, repr=False)

    def __post_init__(self):
        numerator, denominator = _trim(self.numerator), _trim(self.denominator)
        if not np.any(denominator):
            raise JuliaError('denominator vanishes identically')
        scale = denominator[-1]
        object.__setattr__(self, 'numerator', numerator / scale)
        object.__setattr__(self, 'denominator', denominator / scale)
        degree = max(len(numerator), len(denominator)) - 1
        if degree < 2:
            raise DegreeTooLow(degree)
        size = max(np.abs(self.numerator).max(), 1.0)
        for root in self.__finite_roots(self.denominator):
            if abs(poly.polyval(root, self.numerator)) <= 1e3 * self.tolerance * size:
                raise CommonRoots(complex(root))

    @classmethod
    def parse(cls, text: str) -> Self:
        numerator, denominator = parse_map(text)
        return cls(numerator, denominator, text.strip())

    def __str__(self) -> str:
        return self.text or f'RationalMap(deg {self.degree})'

    @property
    def degree(self) -> int:
        return max(len(self.numerator), len(self.denominator)) - 1

    def __padded(self, coefficients: np.ndarray) -> np.ndarray:
        return np.concatenate([coefficients, np.zeros(self.degree + 1 - len(coefficients), dtype=complex)])

    @cached_property
    def _reversed(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients of u^d num(1/u) and u^d den(1/u)."""
        return self.__padded(self.numerator)[::-1], self.__padded(self.denominator)[::-1]

    def projective(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Homogeneous image (p, q) with g(z) = p / q, evaluated in the chart where |z| <= 1 or |1/z| < 1."""
        z = np.asarray(z, dtype=complex)
        near = np.isfinite(z) & (np.abs(z) <= 1)
        with np.errstate(divide='ignore', invalid='ignore'):
            u = np.where(np.isfinite(z), 1 / np.where(near, 1, z), 0)
        top, bottom = self._reversed
        p = np.where(near, poly.polyval(np.where(near, z, 0), self.numerator), poly.polyval(u, top))
        q = np.where(near, poly.polyval(np.where(near, z, 0), self.denominator), poly.polyval(u, bottom))
        return p, q

    def __call__(self, z: np.ndarray | complex) -> np.ndarray:
        p, q = self.projective(z)
        with np.errstate(divide='ignore', invalid='ignore'):
            values = p / q
        return np.where(np.abs(q) <= 1e-300 * np.maximum(np.abs(p), 1), complex(np.inf, 0), values)

    def derivative(self, z: np.ndarray | complex) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        top = poly.polyval(z, self.numerator)
        bottom = poly.polyval(z, self.denominator)
        slope = (poly.polyval(z, poly.polyder(self.numerator)) * bottom
                 - top * poly.polyval(z, poly.polyder(self.denominator)))
        with np.errstate(divide='ignore', invalid='ignore'):
            return slope / bottom ** 2

    def __finite_roots(self, coefficients: np.ndarray) -> np.ndarray:
        coefficients = _trim(coefficients)
        if len(coefficients) <= 1:
            return np.empty(0, dtype=complex)
        roots = poly.polyroots(coefficients)
        if not np.all(np.isfinite(roots)):
            raise RootFindFailure(f'root solver returned non-finite values for {coefficients}')
        return roots

    def preimages(self, w: complex) -> np.ndarray:
        """All d solutions of g(z) = w counted with multiplicity; roots at infinity appear as inf."""
        if np.isfinite(w):
            roots = self.__finite_roots(poly.polysub(self.numerator, w * self.denominator))
        else:
            roots = self.__finite_roots(self.denominator)
        missing = self.degree - len(roots)
        return np.concatenate([roots, np.full(missing, complex(np.inf, 0))])

    def fixed_points(self) -> np.ndarray:
        return self.__finite_roots(poly.polysub(self.numerator, poly.polymul([0, 1], self.denominator)))

    def critical_points(self) -> np.ndarray:
        wronskian = poly.polysub(poly.polymul(poly.polyder(self.numerator), self.denominator),
                                 poly.polymul(self.numerator, poly.polyder(self.denominator)))
        roots = self.__finite_roots(wronskian)
        if len(roots) < 2 * self.degree - 2:
            roots = np.concatenate([roots, [complex(np.inf, 0)]])
        return roots

    def critical_values(self, iterates: int = 1) -> np.ndarray:
        """Critical values of g^iterates: forward images g^k(c) for 1 <= k <= iterates."""
        current = self.critical_points()
        values = []
        for _ in range(iterates):
            current = self(current)
            values.append(current)
        return merge_roots(np.concatenate(values), self.tolerance)


def merge_roots(values: np.ndarray, tolerance: float) -> np.ndarray:
    """Distinct values up to tolerance, in first-seen order; infinite values merge together."""
    kept: list[complex] = []
    for value in np.asarray(values, dtype=complex):
        if not np.isfinite(value):
            if not any(not np.isfinite(it) for it in kept):
                kept.append(complex(np.inf, 0))
            continue
        if not any(np.isfinite(it) and abs(it - value) <= tolerance * max(1.0, abs(value)) for it in kept):
            kept.append(complex(value))
    return np.asarray(kept, dtype=complex)
