"""Truncated power series over exact coefficient rings.

Coefficients may be Python ints (exact integers), PadicTruncated residues
(known mod ell^N), or CyclotomicElement values.  All arithmetic is exact
through the degree cap; multiplication truncates.  The determinant here is
division-free (Berkowitz) because series rings have non-unit constant terms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cyclotomic import CyclotomicElement, euler_phi
from .errors import PrecisionError, UnsupportedError, ValidationError


def ord_int(n: int, ell: int) -> int | None:
    """ell-adic valuation of an integer; None for 0 (infinite)."""
    if n == 0:
        return None
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


class PadicTruncated:
    """An ell-adic integer known modulo ell^N."""

    __slots__ = ("ell", "precision", "value")

    def __init__(self, ell: int, precision: int, value: int):
        if precision < 1:
            raise ValidationError("precision exponent must be >= 1")
        self.ell = ell
        self.precision = precision
        self.value = value % (ell ** precision)

    def _coerce(self, other):
        if isinstance(other, PadicTruncated):
            if other.ell != self.ell:
                raise ValidationError("mixed primes in p-adic arithmetic")
            n = min(self.precision, other.precision)
            return PadicTruncated(self.ell, n, self.value), \
                PadicTruncated(self.ell, n, other.value)
        if isinstance(other, int):
            return self, PadicTruncated(self.ell, self.precision, other)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return PadicTruncated(a.ell, a.precision, a.value + b.value)

    __radd__ = __add__

    def __neg__(self):
        return PadicTruncated(self.ell, self.precision, -self.value)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return PadicTruncated(a.ell, a.precision, a.value - b.value)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return PadicTruncated(a.ell, a.precision, a.value * b.value)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicTruncated(self.ell, self.precision, other)
        if not isinstance(other, PadicTruncated):
            return NotImplemented
        n = min(self.precision, other.precision)
        return self.ell == other.ell and \
            self.value % self.ell ** n == other.value % self.ell ** n

    def __hash__(self):
        # equality compares residues at the weaker precision, so only the
        # mod-ell class is stable enough to hash on
        return hash((self.ell, self.value % self.ell))

    def __repr__(self):
        return f"{self.value} (mod {self.ell}^{self.precision})"

    def ord(self) -> int | None:
        """Valuation, or None meaning 'at least the precision exponent'."""
        if self.value == 0:
            return None
        return ord_int(self.value, self.ell)

    def is_unit(self) -> bool:
        return self.value % self.ell != 0

    def inverse(self) -> "PadicTruncated":
        if not self.is_unit():
            raise ValidationError("inverse of a non-unit p-adic residue")
        mod = self.ell ** self.precision
        return PadicTruncated(self.ell, self.precision, pow(self.value, -1, mod))


class TruncatedPowerSeries:
    """Polynomial truncation a_0 + a_1 T + ... + a_cap T^cap of a power series."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValidationError("series needs at least the constant term")
        self.coeffs = coeffs

    @property
    def cap(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def constant(value, cap: int) -> "TruncatedPowerSeries":
        zero = value * 0
        return TruncatedPowerSeries([value] + [zero] * cap)

    @staticmethod
    def one(cap: int) -> "TruncatedPowerSeries":
        return TruncatedPowerSeries([1] + [0] * cap)

    @staticmethod
    def zero(cap: int) -> "TruncatedPowerSeries":
        return TruncatedPowerSeries([0] * (cap + 1))

    def _binary(self, other, op):
        if isinstance(other, TruncatedPowerSeries):
            n = min(self.cap, other.cap)
            return TruncatedPowerSeries(
                [op(a, b) for a, b in zip(self.coeffs[:n + 1], other.coeffs[:n + 1])])
        if isinstance(other, (int, PadicTruncated, CyclotomicElement)):
            c = list(self.coeffs)
            c[0] = op(c[0], other)
            return TruncatedPowerSeries(c)
        return None

    def __add__(self, other):
        out = self._binary(other, lambda a, b: a + b)
        return NotImplemented if out is None else out

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPowerSeries([-a for a in self.coeffs])

    def __sub__(self, other):
        out = self._binary(other, lambda a, b: a - b)
        return NotImplemented if out is None else out

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, PadicTruncated, CyclotomicElement)):
            return TruncatedPowerSeries([a * other for a in self.coeffs])
        if not isinstance(other, TruncatedPowerSeries):
            return NotImplemented
        n = min(self.cap, other.cap)
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if isinstance(a, int) and a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return TruncatedPowerSeries(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedPowerSeries):
            return NotImplemented
        n = min(self.cap, other.cap)
        return all(self.coeffs[k] == other.coeffs[k] for k in range(n + 1))

    def __hash__(self):
        return hash(self.coeffs)

    def agrees_with(self, other: "TruncatedPowerSeries", through: int) -> bool:
        if through > min(self.cap, other.cap):
            raise PrecisionError("comparison degree exceeds a series cap")
        return all(self.coeffs[k] == other.coeffs[k] for k in range(through + 1))

    def is_zero(self) -> bool:
        return all(_coeff_is_zero(c) for c in self.coeffs)

    def truncate(self, cap: int) -> "TruncatedPowerSeries":
        if cap > self.cap:
            raise PrecisionError("cannot extend a truncated series")
        return TruncatedPowerSeries(self.coeffs[:cap + 1])

    def inverse(self) -> "TruncatedPowerSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        a0 = self.coeffs[0]
        if isinstance(a0, int):
            if a0 not in (1, -1):
                raise ValidationError("constant term is not a unit integer")
            b0 = a0
        elif isinstance(a0, PadicTruncated):
            b0 = a0.inverse()
        else:
            raise UnsupportedError("inverse implemented for integer and p-adic coefficients")
        out = [b0] + [0] * self.cap
        for k in range(1, self.cap + 1):
            acc = 0
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out[k] = -(b0 * acc) if isinstance(a0, int) else -(acc * b0)
        return TruncatedPowerSeries(out)

    def map_coefficients(self, func) -> "TruncatedPowerSeries":
        return TruncatedPowerSeries([func(c) for c in self.coeffs])

    def render(self, var: str = "T") -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if _coeff_is_zero(c):
                continue
            if k == 0:
                parts.append(f"{c}")
            elif k == 1:
                parts.append(f"{c}*{var}")
            else:
                parts.append(f"{c}*{var}^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({var}^{self.cap + 1})"

    def to_json(self) -> dict:
        """Coefficient array plus ring metadata, JSON-serializable."""
        c0 = next((c for c in self.coeffs if not isinstance(c, int)), None)
        if c0 is None:
            ring = {"kind": "integer"}
            coeffs = list(self.coeffs)
        elif isinstance(c0, PadicTruncated):
            ring = {"kind": "padic", "ell": c0.ell, "precision": c0.precision}
            coeffs = [c.value if isinstance(c, PadicTruncated) else c
                      for c in self.coeffs]
        else:
            ring = {"kind": "cyclotomic", "conductor": c0.m}
            coeffs = [list(c.coords) if isinstance(c, CyclotomicElement) else c
                      for c in self.coeffs]
        return {"ring": ring, "cap": self.cap, "coefficients": coeffs}

    def __repr__(self):
        return self.render()


def _coeff_is_zero(c) -> bool:
    if isinstance(c, int):
        return c == 0
    if isinstance(c, PadicTruncated):
        return c.value == 0
    if isinstance(c, CyclotomicElement):
        return not bool(c)
    return c == 0


# ---------------------------------------------------------------------------
# The binomial series (1 + T)^a


def binomial_coefficients(a: int, cap: int) -> list:
    """Exact integer coefficients of (1+T)^a through degree cap, any integer a."""
    out = [1]
    c = 1
    for k in range(1, cap + 1):
        c = c * (a - k + 1) // k
        out.append(c)
    return out


def _ord_factorial(n: int, ell: int) -> int:
    v = 0
    p = ell
    while p <= n:
        v += n // p
        p *= ell
    return v


def binomial_series(a, cap: int) -> TruncatedPowerSeries:
    """The series (1+T)^a.

    For integer a the coefficients are exact integers (negative a gives the
    alternating binomials).  For a known only mod ell^P, dividing the
    numerator product by k! costs up to ord_ell(cap!) digits, so ord_ell(cap!)
    guard digits of the input are consumed: coefficients come back at
    precision P - ord_ell(cap!), each one provably correct there.
    """
    if isinstance(a, int):
        return TruncatedPowerSeries(binomial_coefficients(a, cap))
    if not isinstance(a, PadicTruncated):
        raise UnsupportedError(f"unsupported exponent type {type(a).__name__}")
    ell, P = a.ell, a.precision
    guard = _ord_factorial(cap, ell)
    n_out = P - guard
    if n_out < 1:
        raise PrecisionError(
            f"voltage precision {P} leaves no digits after the ord({cap}!) = "
            f"{guard} guard; raise the precision or lower the cap")
    big = ell ** P
    out_mod = ell ** n_out
    coeffs = [PadicTruncated(ell, n_out, 1)]
    num = 1
    fact = 1
    for k in range(1, cap + 1):
        num = num * (a.value - (k - 1)) % big
        fact *= k
        v = ord_int(fact, ell) or 0
        unit = fact // ell ** v
        reduced = (num % (ell ** (v + n_out))) // ell ** v
        coeffs.append(PadicTruncated(ell, n_out,
                                     reduced * pow(unit, -1, out_mod)))
    return TruncatedPowerSeries(coeffs)


# ---------------------------------------------------------------------------
# mu / lambda of a series


def _coeff_ord(c, ell):
    if isinstance(c, int):
        return ord_int(c, ell), False
    if isinstance(c, PadicTruncated):
        return c.ord(), True
    if isinstance(c, CyclotomicElement):
        return c.ord_ell(ell), False
    raise UnsupportedError(f"no valuation for coefficient type {type(c).__name__}")


def mu_lambda(series: TruncatedPowerSeries, ell: int) -> tuple:
    """(mu, lambda) of a series: minimal coefficient valuation and first index attaining it.

    Raises PrecisionError when the truncation cannot certify the answer: the
    series vanishes identically through the cap, every mod-ell^N coefficient
    is indistinguishable from zero, or the minimum first occurs at the cap.
    """
    mu = None
    lam = None
    bounded_ring = False
    for k, c in enumerate(series.coeffs):
        v, bounded = _coeff_ord(c, ell)
        bounded_ring = bounded_ring or bounded
        if v is None:
            continue
        if mu is None or v < mu:
            mu, lam = v, k
    if mu is None:
        if bounded_ring:
            raise PrecisionError(
                f"all coefficients vanish mod the working precision through T^{series.cap}")
        raise PrecisionError(f"series is identically zero through T^{series.cap}")
    if lam == series.cap:
        raise PrecisionError(
            "minimal valuation first attained at the cap; increase the cap")
    return mu, lam


# ---------------------------------------------------------------------------
# Division-free determinant (Berkowitz)


def ring_determinant(matrix: Sequence[Sequence]) -> object:
    """Determinant over any commutative ring, without division.

    Berkowitz' method: the characteristic polynomial vector of the leading
    r x r block is obtained from the (r-1) x (r-1) one by a Toeplitz product
    whose entries are -R M^k C for the border row R, column C and block M.
    """
    n = len(matrix)
    if n == 0:
        return 1
    for row in matrix:
        if len(row) != n:
            raise ValidationError("determinant of a non-square matrix")
    if n == 1:
        return matrix[0][0]
    # p holds charpoly coefficients of the leading block, highest power first
    p = [1, -matrix[0][0]]
    for r in range(2, n + 1):
        a = matrix[r - 1][r - 1]
        R = matrix[r - 1][:r - 1]
        C = [matrix[i][r - 1] for i in range(r - 1)]
        s = [1, -a]
        w = list(C)
        dot = 0
        for i in range(r - 1):
            dot = dot + R[i] * w[i]
        s.append(-dot)
        for _ in range(r - 2):
            w2 = []
            for i in range(r - 1):
                acc = 0
                for j in range(r - 1):
                    acc = acc + matrix[i][j] * w[j]
                w2.append(acc)
            w = w2
            dot = 0
            for i in range(r - 1):
                dot = dot + R[i] * w[i]
            s.append(-dot)
        q = []
        for i in range(r + 1):
            acc = 0
            for k in range(max(0, i - len(s) + 1), min(i, r - 1) + 1):
                acc = acc + s[i - k] * p[k]
            q.append(acc)
        p = q
    det = p[n]
    return -det if n % 2 else det


def cofactor_determinant(matrix: Sequence[Sequence]) -> object:
    """Independent oracle: Laplace expansion along the first row (small n only)."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        entry = matrix[0][j]
        minor = [[matrix[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = entry * cofactor_determinant(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# Evaluation at t_psi = psi(1) - 1


def evaluate_at_tpsi(series: TruncatedPowerSeries, conductor: int, power: int,
                     min_precision: Fraction | None = None) -> tuple:
    """Sum the series at t = zeta^power - 1 in Z[zeta_conductor].

    Returns (value, tail_bound) where tail_bound is a certified lower bound
    on ord_ell of the discarded tail (None when t = 0 and the value is exact).
    The conductor must be a prime power ell^n with n >= 1.
    """
    from .cyclotomic import _prime_power_exponent, t_psi as make_t

    if conductor < 2:
        raise UnsupportedError("conductor must be at least 2")
    ell = next(p for p in range(2, conductor + 1) if conductor % p == 0)
    if _prime_power_exponent(conductor, ell) is None:
        raise UnsupportedError(f"conductor {conductor} is not a prime power")

    power %= conductor
    if power == 0:
        c0 = series.coeffs[0]
        value = CyclotomicElement.from_int(conductor, c0) if isinstance(c0, int) else c0
        return value, None
    # exact order of zeta^power divides conductor; ord(t) = 1/phi(order)
    from math import gcd
    order = conductor // gcd(power, conductor)
    t_ord = Fraction(1, euler_phi(order))
    tail_bound = (series.cap + 1) * t_ord
    if min_precision is not None and tail_bound < min_precision:
        raise PrecisionError(
            f"cap {series.cap} certifies tail order {tail_bound} < required {min_precision}")
    t = make_t(conductor, power)
    value = CyclotomicElement.from_int(conductor, 0)
    for c in reversed(series.coeffs):
        value = value * t + c
    return value, tail_bound
