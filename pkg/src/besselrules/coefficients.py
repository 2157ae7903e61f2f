"""Exact coefficient polynomials for the theta-derivative expansion.

The k-th derivative of exp(i y sin(theta)) equals a trigonometric
polynomial times the function itself; projecting that polynomial onto
e^{i n theta} yields coefficients that, after dividing out i^k, are real
polynomials in y with dyadic-rational coefficients.  This module computes
them two independent ways: the two-term lattice recursion

    D[k+1, n] = n D[k, n] + (y/2) (D[k, n+1] + D[k, n-1]),  D[0, n] = delta(n)

and a closed form built from higher-derivative chain-rule partitions.
All arithmetic is exact (big integers over powers of two); nothing here
ever rounds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping

__all__ = [
    "DyadicRational",
    "DyadicPoly",
    "CoeffTable",
    "build_coeff_table",
    "enumerate_derivative_partitions",
    "coeff_faa_di_bruno",
    "eval_coeff",
]

MAX_RECURSION_K = 64
MAX_FAA_DI_BRUNO_K = 30


class DyadicRational:
    """Exact value num / 2**exp2 with arbitrary-precision integer num.

    Canonical form: num is odd, zero, or exp2 is already 0; exp2 == 0
    whenever num == 0.  Closed under +, -, *; never rounds.
    """

    __slots__ = ("num", "exp2")

    def __init__(self, num: int, exp2: int = 0):
        if exp2 < 0:
            raise ValueError(f"exp2 must be >= 0, got {exp2}")
        while num != 0 and exp2 > 0 and num % 2 == 0:
            num //= 2
            exp2 -= 1
        if num == 0:
            exp2 = 0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp2", exp2)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        e = max(self.exp2, other.exp2)
        return DyadicRational(
            (self.num << (e - self.exp2)) + (other.num << (e - other.exp2)), e
        )

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        return self + (-other)

    def __mul__(self, other: "DyadicRational") -> "DyadicRational":
        return DyadicRational(self.num * other.num, self.exp2 + other.exp2)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.num, self.exp2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return self.num == other.num and self.exp2 == other.exp2

    def __hash__(self) -> int:
        return hash((self.num, self.exp2))

    def __bool__(self) -> bool:
        return self.num != 0

    def scale_int(self, c: int) -> "DyadicRational":
        return DyadicRational(self.num * c, self.exp2)

    def halved(self) -> "DyadicRational":
        return DyadicRational(self.num, self.exp2 + 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp2)

    def __float__(self) -> float:
        # float(Fraction) is correctly rounded even for huge numerators.
        return float(self.as_fraction())

    def __repr__(self) -> str:
        if self.exp2 == 0:
            return f"DyadicRational({self.num})"
        return f"DyadicRational({self.num}, {self.exp2})"


_DR_ZERO = DyadicRational(0)
_DR_ONE = DyadicRational(1)


class DyadicPoly:
    """Sparse polynomial in y with DyadicRational coefficients.

    The coefficient map never stores zeros; equality is exact.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, DyadicRational] | None = None):
        cleaned: dict[int, DyadicRational] = {}
        if coeffs:
            for power, c in coeffs.items():
                if power < 0:
                    raise ValueError(f"power must be >= 0, got {power}")
                if c:
                    cleaned[power] = c
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicPoly is immutable")

    @classmethod
    def zero(cls) -> "DyadicPoly":
        return cls()

    @classmethod
    def one(cls) -> "DyadicPoly":
        return cls({0: _DR_ONE})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def min_power(self) -> int:
        return min(self.coeffs) if self.coeffs else -1

    def __add__(self, other: "DyadicPoly") -> "DyadicPoly":
        out = dict(self.coeffs)
        for power, c in other.coeffs.items():
            out[power] = out[power] + c if power in out else c
        return DyadicPoly(out)

    def __neg__(self) -> "DyadicPoly":
        return DyadicPoly({p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other: "DyadicPoly") -> "DyadicPoly":
        return self + (-other)

    def scale_int(self, c: int) -> "DyadicPoly":
        if c == 0:
            return DyadicPoly()
        return DyadicPoly({p: v.scale_int(c) for p, v in self.coeffs.items()})

    def scale(self, c: DyadicRational) -> "DyadicPoly":
        if not c:
            return DyadicPoly()
        return DyadicPoly({p: v * c for p, v in self.coeffs.items()})

    def mul_half_y(self) -> "DyadicPoly":
        """Multiply by y/2 (exact: shift powers up, halve coefficients)."""
        return DyadicPoly({p + 1: c.halved() for p, c in self.coeffs.items()})

    def add_term(self, power: int, c: DyadicRational) -> "DyadicPoly":
        return self + DyadicPoly({power: c})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def evaluate(self, y: float) -> float:
        """Horner evaluation at a float point (one rounding per operation)."""
        if not self.coeffs:
            return 0.0
        acc = 0.0
        prev_power: int | None = None
        for power in sorted(self.coeffs, reverse=True):
            if prev_power is not None:
                acc *= y ** (prev_power - power)
            acc += float(self.coeffs[power])
            prev_power = power
        return acc * y**prev_power if prev_power else acc

    def evaluate_exact(self, y: Fraction) -> Fraction:
        total = Fraction(0)
        for power, c in self.coeffs.items():
            total += c.as_fraction() * y**power
        return total

    def __repr__(self) -> str:
        if not self.coeffs:
            return "DyadicPoly(0)"
        parts = []
        for power in sorted(self.coeffs):
            c = self.coeffs[power]
            parts.append(f"({c.num}/2^{c.exp2})*y^{power}")
        return "DyadicPoly(" + " + ".join(parts) + ")"

    def to_json_obj(self) -> list[dict]:
        return [
            {"power": p, "num": str(self.coeffs[p].num), "exp2": self.coeffs[p].exp2}
            for p in sorted(self.coeffs)
        ]

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> "DyadicPoly":
        return cls(
            {int(t["power"]): DyadicRational(int(t["num"]), int(t["exp2"])) for t in obj}
        )


@dataclass(frozen=True)
class CoeffTable:
    """Immutable map (k, n) -> polynomial for all |n| <= k <= k_max.

    Entries with |n| > k are identically zero and not stored; neither are
    entries that happen to vanish (k + n odd forces the n = 0 column to
    zero for odd k, for instance).
    """

    k_max: int
    entries: Mapping[tuple[int, int], DyadicPoly]

    def entry(self, k: int, n: int) -> DyadicPoly:
        if not (0 <= k <= self.k_max):
            raise ValueError(f"k must lie in [0, {self.k_max}], got {k}")
        return self.entries.get((k, n), DyadicPoly.zero())

    def to_json_obj(self) -> dict:
        items = []
        for (k, n) in sorted(self.entries):
            items.append({"k": k, "n": n, "poly": self.entries[(k, n)].to_json_obj()})
        return {"k_max": self.k_max, "entries": items}

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_obj(), indent=indent, sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CoeffTable":
        entries = {
            (int(e["k"]), int(e["n"])): DyadicPoly.from_json_obj(e["poly"])
            for e in obj["entries"]
        }
        return cls(k_max=int(obj["k_max"]), entries=entries)

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        return cls.from_json_obj(json.loads(text))


@lru_cache(maxsize=None)
def build_coeff_table(k_max: int) -> CoeffTable:
    """Exact table of all coefficient polynomials with k <= k_max."""
    if not (0 <= k_max <= MAX_RECURSION_K):
        raise ValueError(f"k_max must lie in [0, {MAX_RECURSION_K}], got {k_max}")
    entries: dict[tuple[int, int], DyadicPoly] = {(0, 0): DyadicPoly.one()}
    for k in range(k_max):
        for n in range(-(k + 1), k + 2):
            acc = DyadicPoly.zero()
            prev = entries.get((k, n))
            if prev is not None and n != 0:
                acc = acc + prev.scale_int(n)
            up = entries.get((k, n + 1))
            if up is not None:
                acc = acc + up.mul_half_y()
            down = entries.get((k, n - 1))
            if down is not None:
                acc = acc + down.mul_half_y()
            if not acc.is_zero():
                entries[(k + 1, n)] = acc
    return CoeffTable(k_max=k_max, entries=entries)


def enumerate_derivative_partitions(k: int) -> list[tuple[int, ...]]:
    """All tuples (m_1..m_k) of non-negative ints with sum(j*m_j) == k.

    Ordered descending-lexicographically in (m_1, m_2, ...); the count is
    the integer-partition number p(k).
    """
    if not (1 <= k <= MAX_RECURSION_K):
        raise ValueError(f"k must lie in [1, {MAX_RECURSION_K}], got {k}")

    def rec(j: int, remaining: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if j == k:
            if remaining % k == 0:
                yield tuple(prefix + [remaining // k])
            return
        for m in range(remaining // j, -1, -1):
            yield from rec(j + 1, remaining - j * m, prefix + [m])

    return list(rec(1, k, []))


def coeff_faa_di_bruno(k: int, n: int) -> DyadicPoly:
    """Closed-form coefficient polynomial via derivative partitions.

    Sums, over every tuple with sum(j*m_j) == k, a multinomial weight, a
    trigonometric expansion count, and the (y/2)^m monomial.  The i-power
    bookkeeping must collapse to a real sign once i^k is divided out; a
    leftover imaginary unit would be a bug and raises immediately.
    """
    if not (1 <= k <= MAX_FAA_DI_BRUNO_K):
        raise ValueError(f"k must lie in [1, {MAX_FAA_DI_BRUNO_K}], got {k}")
    if abs(n) > k:
        raise ValueError(f"|n| must be <= k, got n={n}, k={k}")
    k_fact = math.factorial(k)
    poly = DyadicPoly.zero()
    for ms in enumerate_derivative_partitions(k):
        m = sum(ms)
        if abs(n) > m or (m - n) % 2 != 0:
            continue
        # a counts even derivative orders (sin factors), b = m - a the odd
        # ones (cos factors); phi tracks the minus signs of sin/cos cycling.
        a = sum(ms[j - 1] for j in range(2, k + 1, 2))
        b = m - a
        phi = 0
        for j in range(0, k, 4):
            if j + 2 <= k:
                phi += ms[j + 1]
            if j + 3 <= k:
                phi += ms[j + 2]
        denom = 1
        for j, mj in enumerate(ms, start=1):
            if mj:
                denom *= math.factorial(mj) * math.factorial(j) ** mj
        count = k_fact // denom
        half = (m - n) // 2
        inner = 0
        for r in range(a + 1):
            second = half - r
            if 0 <= second <= b:
                inner += (-1) ** r * math.comb(a, r) * math.comb(b, second)
        if inner == 0:
            continue
        phase_mod4 = (b - k) % 4
        if phase_mod4 == 0:
            phase = 1
        elif phase_mod4 == 2:
            phase = -1
        else:
            raise RuntimeError(
                f"imaginary residue in coefficient phase at k={k}, n={n}, ms={ms}"
            )
        total = phase * (-1) ** phi * count * inner
        poly = poly.add_term(m, DyadicRational(total, m))
    return poly


def eval_coeff(table: CoeffTable, k: int, n: int, y: float) -> float:
    """Float value of the (k, n) polynomial at y, by Horner evaluation."""
    return table.entry(k, n).evaluate(y)
