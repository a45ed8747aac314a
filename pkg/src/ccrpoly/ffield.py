"""Prime-field scalars, dense univariate polynomials, and curve-side
specialization.

Everything downstream of the polynomial builders happens here: reducing
a trivariate polynomial at a curve (A, B) to a univariate in X, finding
its roots in F_p, evaluating the partial-derivative bundle at a chosen
root, and the division polynomials f_n.

Field elements are canonical ints in [0, p).  The PrimeField object
owns the modulus and counts modular multiplications and inversions,
including those performed inside polynomial arithmetic; the complexity
checks read these counters.  Polynomials are dense coefficient lists,
lowest degree first, trailing zeros stripped.
"""

import random
from dataclasses import dataclass

from .errors import SingularCurve
from .symbolic import MultiPoly

# a field element is a reduced residue; the alias is documentation only
FieldElement = int

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set.

    Deterministic below 3.3e24; for larger n the bases act as strong
    probabilistic witnesses.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """Arithmetic mod a prime p > 3, with operation counting."""

    __slots__ = ("p", "mul_count", "inv_count")

    def __init__(self, p: int):
        if p <= 3:
            raise ValueError("p must exceed 3")
        if not is_probable_prime(p):
            raise ValueError("p not prime")
        self.p = p
        self.mul_count = 0
        self.inv_count = 0

    def reset_counts(self):
        self.mul_count = 0
        self.inv_count = 0

    def mul(self, a: int, b: int) -> int:
        self.mul_count += 1
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero mod p")
        self.inv_count += 1
        return pow(a, self.p - 2, self.p)

    def powers(self, x: int, n: int) -> list:
        """[1, x, ..., x^n] with counted multiplications."""
        out = [1]
        for _ in range(n):
            out.append(self.mul(out[-1], x))
        return out

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class UniPoly:
    """Dense univariate polynomial over a prime field.

    Coefficients run lowest degree first; the zero polynomial is the
    empty list.  Arithmetic accepts int scalars on either side.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs):
        p = field.p
        c = [x % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = c

    @classmethod
    def x(cls, field: PrimeField) -> "UniPoly":
        return cls(field, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, int):
            return UniPoly(self.field, [other])
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.field.p == other.field.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, tuple(self.coeffs)))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(fld, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, c in enumerate(a):
            if c == 0:
                continue
            for j, d in enumerate(b):
                out[i + j] += c * d
            fld.mul_count += len(b)
        return UniPoly(fld, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld = self.field
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p = fld.p
        b = other.coeffs
        db = len(b) - 1
        r = list(self.coeffs)
        if len(r) <= db:
            return UniPoly(fld, []), UniPoly(fld, r)
        inv_lead = 1 if b[-1] == 1 else fld.inv(b[-1])
        q = [0] * (len(r) - db)
        for k in range(len(r) - db - 1, -1, -1):
            c = r[k + db] % p
            if inv_lead != 1 and c:
                c = fld.mul(c, inv_lead)
            if c == 0:
                continue
            q[k] = c
            for i in range(db):
                r[k + i] = (r[k + i] - c * b[i]) % p
            r[k + db] = 0
            fld.mul_count += db
        return UniPoly(fld, q), UniPoly(fld, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero() or self.coeffs[-1] == 1:
            return self
        inv_lead = self.field.inv(self.coeffs[-1])
        return self * inv_lead

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, modulus: "UniPoly") -> "UniPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result = UniPoly(self.field, [1])
        if e == 0:
            return result % modulus
        base = self % modulus
        for bit in bin(e)[2:]:
            result = result * result % modulus
            if bit == "1":
                result = result * base % modulus
        return result

    def derivative(self) -> "UniPoly":
        fld = self.field
        out = [i * c for i, c in enumerate(self.coeffs)][1:]
        fld.mul_count += max(0, len(self.coeffs) - 1)
        return UniPoly(fld, out)

    def evaluate(self, x: int) -> int:
        fld = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % fld.p
        fld.mul_count += max(0, len(self.coeffs) - 1)
        return acc

    def __repr__(self):
        return f"UniPoly(p={self.field.p}, coeffs={self.coeffs})"


def poly_arith(a: UniPoly, b: UniPoly, op: str, exponent: int = None):
    """Named dispatch over the polynomial ring operations."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    if op == "gcd":
        return a.gcd(b)
    if op == "powmod":
        if exponent is None:
            raise ValueError("powmod needs an exponent")
        return a.powmod(exponent, b)
    raise ValueError(f"unknown op {op!r}")


def roots(f: UniPoly, seed) -> list:
    """All distinct roots of f in F_p, sorted ascending.

    gcd(X^p - X, f) isolates the product of distinct linear factors,
    then seeded equal-degree splitting peels off individual roots.  The
    result does not depend on the seed; only the internal path does.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    fld = f.field
    p = fld.p
    x = UniPoly.x(fld)
    if f.degree == 0:
        return []
    lin = (x.powmod(p, f) - x).gcd(f)
    rng = random.Random(seed)
    one = UniPoly(fld, [1])
    found = []
    stack = [lin]
    while stack:
        h = stack.pop()
        d = h.degree
        if d <= 0:
            continue
        if d == 1:
            # h is monic X + c, root is -c
            found.append((p - h.coeffs[0]) % p)
            continue
        while True:
            shift = UniPoly(fld, [rng.randrange(p), 1])
            g = (shift.powmod((p - 1) // 2, h) - one).gcd(h)
            if 0 < g.degree < d:
                stack.append(g)
                stack.append(h // g)
                break
    return sorted(found)


class CurveParams:
    """A nonsingular short Weierstrass curve Y^2 = X^3 + AX + B."""

    __slots__ = ("field", "A", "B", "e4", "e6")

    def __init__(self, field: PrimeField, A: int, B: int):
        p = field.p
        A %= p
        B %= p
        if (4 * A * A * A + 27 * B * B) % p == 0:
            raise SingularCurve(f"4A^3 + 27B^2 = 0 mod {p}")
        self.field = field
        self.A = A
        self.B = B
        # normalized Eisenstein values: E4 = -A/3, E6 = -B/2
        self.e4 = -A * field.inv(3) % p
        self.e6 = -B * field.inv(2) % p

    def j_invariant(self) -> int:
        p = self.field.p
        c4 = pow(self.e4, 3, p)
        c6 = pow(self.e6, 2, p)
        return 1728 * c4 * self.field.inv(c4 - c6) % p

    def __repr__(self):
        return f"CurveParams(p={self.field.p}, A={self.A}, B={self.B})"


@dataclass(frozen=True)
class DerivativeBundle:
    """Value and partials of a trivariate polynomial at (root, E4, E6).

    du_s is the partial in the X slot (the sigma or f direction), du_4
    and du_6 the E4 and E6 partials, du_s4/du_s6/du_46 the mixed
    seconds.  u is the value itself and must be zero.
    """

    u: FieldElement
    du_s: FieldElement
    du_4: FieldElement
    du_6: FieldElement
    du_s4: FieldElement
    du_s6: FieldElement
    du_46: FieldElement


def _coeff_mod(fld: PrimeField, c, inv_cache: dict) -> int:
    """Reduce an int or Fraction coefficient into F_p."""
    if isinstance(c, int):
        return c % fld.p
    den = c.denominator
    if den not in inv_cache:
        inv_cache[den] = fld.inv(den % fld.p)
    return c.numerator * inv_cache[den] % fld.p


def _eval_terms(fld: PrimeField, terms: dict, xs, ys, zs, inv_cache) -> int:
    acc = 0
    p = fld.p
    for (i, a, b), c in terms.items():
        cc = _coeff_mod(fld, c, inv_cache)
        acc += cc * xs[i] % p * ys[a] % p * zs[b]
        fld.mul_count += 3
    return acc % p


def specialize(P, curve: CurveParams) -> UniPoly:
    """Reduce a trivariate polynomial at a curve to a univariate in X.

    Either stored basis works: the AB basis substitutes (A, B), the
    E4E6 basis substitutes (-A/3, -B/2).
    """
    fld = curve.field
    if fld.p == P.ell:
        raise ValueError("p equals the level ell")
    if P.basis == "AB":
        y0, z0 = curve.A, curve.B
    else:
        y0, z0 = curve.e4, curve.e6
    deg = max(i for (i, _, _) in P.terms)
    ys = fld.powers(y0, max(a for (_, a, _) in P.terms))
    zs = fld.powers(z0, max(b for (_, _, b) in P.terms))
    inv_cache = {}
    out = [0] * (deg + 1)
    p = fld.p
    for (i, a, b), c in P.terms.items():
        cc = _coeff_mod(fld, c, inv_cache)
        out[i] = (out[i] + cc * ys[a] % p * zs[b]) % p
        fld.mul_count += 2
    return UniPoly(fld, out)


def derivative_bundle(P, curve: CurveParams, root: int) -> DerivativeBundle:
    """First and mixed-second partials of P at (root, -A/3, -B/2).

    Raises ValueError when the given point is not actually a root;
    that always signals a caller logic error, not bad input data.
    """
    fld = curve.field
    if fld.p == P.ell:
        raise ValueError("p equals the level ell")
    base = P if P.basis == "E4E6" else P.to_basis("E4E6")
    xs = fld.powers(root % fld.p, max(i for (i, _, _) in base.terms))
    ys = fld.powers(curve.e4, max(a for (_, a, _) in base.terms))
    zs = fld.powers(curve.e6, max(b for (_, _, b) in base.terms))
    inv_cache = {}

    def ev(poly) -> int:
        return _eval_terms(fld, poly.terms, xs, ys, zs, inv_cache)

    u = ev(base)
    if u != 0:
        raise ValueError(f"{root} is not a root of the specialized polynomial")
    px = base.partial(0)
    p4 = base.partial(1)
    return DerivativeBundle(
        u=u,
        du_s=ev(px),
        du_4=ev(p4),
        du_6=ev(base.partial(2)),
        du_s4=ev(px.partial(1)),
        du_s6=ev(px.partial(2)),
        du_46=ev(p4.partial(2)),
    )


_DPOLY_VARS = ("X", "A", "B")


def division_poly(n: int, curve: CurveParams = None):
    """The n-division polynomial f_n with the curve relation folded in.

    f_n = psi_n for odd n and psi_n/(2Y) for even n, so f_n is a
    polynomial in X alone; the leading coefficient is n for odd n and
    n/2 for even n.  With a curve the result is a UniPoly, without one
    an exact polynomial in (X, A, B).
    """
    if n < -1:
        raise ValueError("n must be at least -1")
    if n > 30:
        raise ValueError("n beyond supported range")
    if curve is None:
        x = MultiPoly.gen(_DPOLY_VARS, "X")
        a = MultiPoly.gen(_DPOLY_VARS, "A")
        b = MultiPoly.gen(_DPOLY_VARS, "B")
    else:
        fld = curve.field
        x = UniPoly.x(fld)
        a = UniPoly(fld, [curve.A])
        b = UniPoly(fld, [curve.B])
    cubic = x * x * x + a * x + b
    # 16 Y^4 reduced on the curve
    ff = 16 * cubic * cubic
    f = {
        -1: -(x ** 0),
        0: 0 * x,
        1: x ** 0,
        2: x ** 0,
        3: 3 * x ** 4 + 6 * a * x ** 2 + 12 * b * x - a * a,
        4: (2 * x ** 6 + 10 * a * x ** 4 + 40 * b * x ** 3
            - 10 * a * a * x ** 2 - 8 * a * b * x - 16 * b * b
            - 2 * a ** 3),
    }

    def fill(k: int):
        if k in f:
            return f[k]
        m, odd = divmod(k, 2)
        if odd:
            first = fill(m + 2) * fill(m) ** 3
            second = fill(m - 1) * fill(m + 1) ** 3
            f[k] = ff * first - second if m % 2 == 0 else first - ff * second
        else:
            f[k] = fill(m) * (fill(m + 2) * fill(m - 1) ** 2
                              - fill(m - 2) * fill(m + 1) ** 2)
        return f[k]

    return fill(n)
