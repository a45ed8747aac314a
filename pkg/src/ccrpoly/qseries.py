"""Exact truncated power series in a fractional power of q.

A series is a dense window of exact rational coefficients: ``coeffs[k]`` is
the coefficient of x**(lead+k) where x = q**(1/step).  Exponents below the
window are exact zeros; exponents at or past ``end = lead + len(coeffs)`` are
unknown and reading one raises PrecisionError.  Negative leads are allowed
(the j-function needs them).  Instances are treated as immutable; every
operation returns a fresh series whose window is the largest one justified by
its operands, so precision bookkeeping never has to be done by callers.

Multiplication clears denominators once per operand and convolves integer
numerators, which keeps the large expansions used by the polynomial builder
fast without leaving exact arithmetic.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import PrecisionError

_ZERO = Fraction(0)


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {value!r}")


class PowerSeries:
    """Truncated series sum(coeffs[k] * x**(lead+k)) + O(x**end)."""

    __slots__ = ("step", "lead", "coeffs")

    def __init__(self, coeffs, lead=0, step=1):
        if step < 1:
            raise ValueError("step must be a positive integer")
        self.step = step
        self.lead = lead
        self.coeffs = [_as_fraction(c) for c in coeffs]

    @property
    def end(self):
        return self.lead + len(self.coeffs)

    @property
    def precision(self):
        return len(self.coeffs)

    @classmethod
    def constant(cls, value, precision, step=1):
        coeffs = [_as_fraction(value)] + [_ZERO] * (precision - 1)
        return cls(coeffs, lead=0, step=step)

    def coefficient(self, n):
        """Exact coefficient of x**n; zero below the window, error past it."""
        if n >= self.end:
            raise PrecisionError(f"coefficient of x^{n} unknown (end={self.end})")
        if n < self.lead:
            return _ZERO
        return self.coeffs[n - self.lead]

    def effective_lead(self):
        """Exponent of the first nonzero known coefficient, or None."""
        for k, c in enumerate(self.coeffs):
            if c:
                return self.lead + k
        return None

    def is_zero(self, through=None):
        """True when all known coefficients vanish.

        With ``through`` set, additionally require the window to reach that
        exponent, so the answer is meaningful at the requested precision.
        """
        if through is not None:
            if self.end < through:
                raise PrecisionError(
                    f"window ends at x^{self.end}, below requested x^{through}")
            return all(not c for c in self.coeffs[:through - self.lead])
        return all(not c for c in self.coeffs)

    def reinterpret(self, step):
        """Same coefficients read against a new fractional power of q."""
        return PowerSeries(self.coeffs, lead=self.lead, step=step)

    def truncate(self, end):
        """Forget coefficients at or past exponent ``end``."""
        if end <= self.lead:
            raise PrecisionError("truncation would leave an empty window")
        return PowerSeries(self.coeffs[:end - self.lead], lead=self.lead,
                           step=self.step)

    # -- arithmetic -------------------------------------------------------

    def _aligned(self, other):
        if self.step == other.step:
            return self, other
        s = lcm(self.step, other.step)
        return self._rescale(s // self.step, s), other._rescale(s // other.step, s)

    def _rescale(self, m, step):
        if m == 1:
            return self
        coeffs = [_ZERO] * (m * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            coeffs[m * k] = c
        # known mod x^end in the old variable means mod x^(m*end) in the new
        out = PowerSeries.__new__(PowerSeries)
        out.step, out.lead, out.coeffs = step, m * self.lead, coeffs
        return out

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._add_scalar(_as_fraction(other))
        if not isinstance(other, PowerSeries):
            return NotImplemented
        a, b = self._aligned(other)
        lead = min(a.lead, b.lead)
        end = min(a.end, b.end)
        if end <= lead:
            raise PrecisionError("empty window in series addition")
        coeffs = [a.coefficient(n) + b.coefficient(n) for n in range(lead, end)]
        return PowerSeries(coeffs, lead=lead, step=a.step)

    def _add_scalar(self, c):
        if self.end <= 0:
            raise PrecisionError("constant term lies outside the window")
        lead = min(self.lead, 0)
        coeffs = [self.coefficient(n) for n in range(lead, self.end)]
        coeffs[0 - lead] += c
        return PowerSeries(coeffs, lead=lead, step=self.step)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], lead=self.lead,
                           step=self.step)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PowerSeries)
                       else -_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return PowerSeries([c * v for v in self.coeffs], lead=self.lead,
                               step=self.step)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        a, b = self._aligned(other)
        lead = a.lead + b.lead
        end = min(a.end + b.lead, b.end + a.lead)
        if end <= lead:
            raise PrecisionError("empty window in series multiplication")
        na, da = _integerize(a.coeffs)
        nb, db = _integerize(b.coeffs)
        size = end - lead
        out = [0] * size
        la, lb = a.lead, b.lead
        len_b = len(nb)
        for i, va in enumerate(na):
            if not va:
                continue
            base = la + i + lb - lead
            j0 = max(0, -base)
            j1 = min(len_b, size - base)
            if j0 >= j1:
                continue
            for j in range(j0, j1):
                out[base + j] += va * nb[j]
        den = da * db
        return PowerSeries([Fraction(v, den) for v in out], lead=lead,
                           step=a.step)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse, window matched to the known coefficients."""
        first = self.effective_lead()
        if first is None:
            raise ZeroDivisionError("inverse of a zero series")
        u = self.coeffs[first - self.lead:]
        n = len(u)
        c0 = u[0]
        inv0 = 1 / c0
        d = [inv0]
        for k in range(1, n):
            acc = _ZERO
            for i in range(1, k + 1):
                if u[i]:
                    acc += u[i] * d[k - i]
            d.append(-acc * inv0)
        return PowerSeries(d, lead=-first, step=self.step)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division of series by zero scalar")
            return self * (1 / c)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return PowerSeries.constant(1, len(self.coeffs), step=self.step)
        result = None
        base = self
        while True:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if not k:
                return result
            base = base * base

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (self.step == other.step and self.lead == other.lead
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.step, self.lead, tuple(self.coeffs)))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        if len(self.coeffs) > 6:
            shown += ", ..."
        return (f"PowerSeries(step={self.step}, x^{self.lead}..x^{self.end}:"
                f" [{shown}])")

    # -- q-operators ------------------------------------------------------

    def qdiff(self):
        """Apply q*d/dq: the coefficient of x**n picks up a factor n/step."""
        s = self.step
        coeffs = [c * Fraction(self.lead + k, s)
                  for k, c in enumerate(self.coeffs)]
        return PowerSeries(coeffs, lead=self.lead, step=self.step)

    def substitute_q_power(self, m):
        """Replace q by q**m, i.e. multiply every exponent by m."""
        if m < 1:
            raise ValueError("substitution power must be positive")
        return self._rescale(m, self.step)

    def extract_progression(self, ell):
        """Keep exponents divisible by ell, rescale x**(ell*m) to q**m,
        and multiply by ell.

        This is the trace over the ell-th roots of unity: summing the series
        at x*zeta^j over all j kills every exponent not divisible by ell and
        multiplies the surviving ones by ell.  Requires step == ell so the
        result is an integral q-series.
        """
        if self.step != ell:
            raise ValueError("extraction requires a series in x = q^(1/ell)")
        qlead = -((-self.lead) // ell)
        qend = -((-self.end) // ell)
        coeffs = []
        for n in range(qlead, qend):
            xe = n * ell
            coeffs.append(ell * self.coefficient(xe) if xe < self.end else _ZERO)
        return PowerSeries(coeffs, lead=qlead, step=1)


def _integerize(coeffs):
    """Common-denominator view: list of int numerators and one denominator."""
    den = 1
    for c in coeffs:
        d = c.denominator
        if d != 1:
            den = den // gcd(den, d) * d
    return [c.numerator * (den // c.denominator) for c in coeffs], den


# -- named expansions -----------------------------------------------------

def _divisor_power_sums(r, n):
    """sums[m] = sum of d**r over divisors d of m, for 0 <= m < n."""
    sums = [0] * n
    for d in range(1, n):
        dp = d ** r
        for m in range(d, n, d):
            sums[m] += dp
    return sums


def eisenstein_series(weight, precision):
    """Level-one Eisenstein series E2, E4 or E6, normalized to lead 1."""
    try:
        mult, r = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}[weight]
    except KeyError:
        raise ValueError("weight must be 2, 4 or 6") from None
    sums = _divisor_power_sums(r, precision)
    coeffs = [Fraction(mult * s) for s in sums]
    coeffs[0] = Fraction(1)
    return PowerSeries(coeffs)


def delta_series(precision):
    """Discriminant form (E4^3 - E6^2)/1728 = q - 24q^2 + 252q^3 - ..."""
    e4 = eisenstein_series(4, precision)
    e6 = eisenstein_series(6, precision)
    return (e4 ** 3 - e6 ** 2) / 1728


def j_series(precision):
    """j = E4^3/Delta = q^-1 + 744 + ...; window reaches x^(precision-3)."""
    e4 = eisenstein_series(4, precision)
    return e4 ** 3 / delta_series(precision)


def fn_series(n, precision):
    """E2(q) - n*E2(q^n), the weight-two form attached to the n-isogeny."""
    e2 = eisenstein_series(2, precision)
    return (e2 - n * e2.substitute_q_power(n)).truncate(precision)


def sigma1_series(ell, precision):
    """Sum of the abscissas of the kernel of the q -> q^ell isogeny.

    Equals (ell/2)*(ell*E2(q^ell) - E2(q)) = -(ell/2)*F_ell.
    """
    return fn_series(ell, precision) * Fraction(-ell, 2)


def eta_squared_product(ell, precision):
    """f = q^((ell+1)/12) * prod((1-q^n)^2 (1-q^(ell*n))^2) for ell = 11 mod 12.

    Expanded factor by factor so only integer q-exponents ever appear; the
    congruence on ell makes the leading exponent integral.
    """
    if ell % 12 != 11:
        raise ValueError("eta-square product needs ell = 11 (mod 12)")
    shift = (ell + 1) // 12
    prod = [1] + [0] * (precision - 1)
    for n in range(1, precision):
        for m in (n, ell * n):
            if m >= precision:
                break
            # multiply in place by (1 - q^m)^2 = 1 - 2q^m + q^(2m)
            for i in range(precision - 1, m - 1, -1):
                v = prod[i] - 2 * prod[i - m]
                if i >= 2 * m:
                    v += prod[i - 2 * m]
                prod[i] = v
    return PowerSeries([Fraction(v) for v in prod], lead=shift)


_FORM_NAMES = ("E2", "E4", "E6", "Delta", "j", "F", "sigma1", "f")


def expand(name, precision, ell=None):
    """Named expansion dispatcher used by the command line."""
    if name in ("E2", "E4", "E6"):
        return eisenstein_series(int(name[1]), precision)
    if name == "Delta":
        return delta_series(precision)
    if name == "j":
        return j_series(precision)
    if name in ("F", "sigma1", "f"):
        if ell is None:
            raise ValueError(f"expansion {name!r} needs ell")
        if name == "F":
            return fn_series(ell, precision)
        if name == "sigma1":
            return sigma1_series(ell, precision)
        return eta_squared_product(ell, precision)
    raise ValueError(f"unknown expansion {name!r}; choose from {_FORM_NAMES}")
