"""Recovery of the isogenous curve from roots of the modular polynomials.

Two charts.  The sigma chart takes a root sigma of the specialized U
polynomial and produces E4(q^ell), E6(q^ell) from the first and second
partials at that root; scaling by -3*ell^4 and -2*ell^6 turns these
into the isogenous curve coefficients (A*, B*).  The f chart covers the
eta-variant polynomial for ell = 11 mod 12, where sigma and E4(q^ell)
come from partials at a root f, and B* is cut out by a two-polynomial
gcd.

All formulas live in formulas.py, shared verbatim with the symbolic
verifier; this module only evaluates them on field elements and guards
every division with a typed error.
"""

from dataclasses import dataclass
from typing import Optional

from . import formulas
from .errors import (DegenerateDerivative, DegeneratePoint, GcdDegreeTwo)
from .ffield import (CurveParams, UniPoly, derivative_bundle, is_probable_prime,
                     roots, specialize)


@dataclass(frozen=True)
class ValidationFlags:
    """Cross-checks of one isogeny result; None means the check was not
    run because the corresponding polynomial was not supplied."""

    v_root: Optional[bool]
    w_root: Optional[bool]
    phi_match: Optional[bool]


@dataclass(frozen=True)
class IsogenyStepResult:
    """One Elkies root worked out to the isogenous curve."""

    ell: int
    sigma: int
    e4t: int
    e6t: int
    a_star: int
    b_star: int
    sigma0: int
    sigma2: int
    sigma3: int
    validated: ValidationFlags


@dataclass(frozen=True)
class AtkinStepResult:
    """One root of the eta-variant polynomial worked out as far as the
    two-polynomial gcd allows; error is set when B* is out of reach."""

    ell: int
    f: int
    sigma: int
    e4t: int
    a_star: int
    b_star: Optional[int]
    error: Optional[str] = None


def _check_level(field, ell: int):
    if ell < 5 or not is_probable_prime(ell):
        raise ValueError("ell must be an odd prime at least 5")
    if field.p == ell:
        raise ValueError("p equals the level ell")


def e4_tilde(field, ell: int, sigma: int, bundle, e4: int, e6: int) -> int:
    """E4(q^ell) from the first partials at a sigma root."""
    _check_level(field, ell)
    p = field.p
    ds = bundle.du_s % p
    if ds == 0:
        raise DegenerateDerivative("ds = 0 at sigma root")
    num, den = formulas.e4_tilde_parts(ell, sigma, e4, e6,
                                       ds, bundle.du_4, bundle.du_6)
    return num % p * field.inv(den % p) % p


def e6_tilde(field, ell: int, sigma: int, bundle, e4: int, e6: int) -> int:
    """E6(q^ell) from the full second-order bundle at a sigma root.

    The diagonal second partials are never taken directly; they are
    eliminated through the weighted-homogeneity relations, which divide
    by sigma, 2*E4 and 3*E6.
    """
    _check_level(field, ell)
    p = field.p
    ds = bundle.du_s % p
    if ds == 0:
        raise DegenerateDerivative("ds = 0 at sigma root")
    if sigma % p == 0:
        raise DegeneratePoint("sigma = 0")
    if e4 % p == 0 or e6 % p == 0:
        raise DegeneratePoint("E4 or E6 = 0 (j in {0, 1728})")
    d4, d6 = bundle.du_4, bundle.du_6
    ds4, ds6, d46 = bundle.du_s4, bundle.du_s6, bundle.du_46
    n1, m1 = formulas.diagonal_dss(ell, sigma, e4, e6, ds, ds4, ds6)
    dss = n1 % p * field.inv(m1 % p) % p
    n2, m2 = formulas.diagonal_d44(ell, sigma, e6, d4, ds4, d46, e4)
    d44 = n2 % p * field.inv(m2 % p) % p
    n3, m3 = formulas.diagonal_d66(ell, sigma, e4, d6, ds6, d46, e6)
    d66 = n3 % p * field.inv(m3 % p) % p
    num = formulas.e6_tilde_numerator(ell, sigma, e4, e6, ds, d4, d6,
                                      ds4, ds6, d46, dss, d44, d66)
    den = formulas.e6_tilde_denominator(ell, ds)
    return -num % p * field.inv(den % p) % p


def elkies_power_sums(field, a: int, b: int, a_star: int, b_star: int,
                      sigma: int, ell: int):
    """(sigma0, sigma2, sigma3) of the kernel abscissas.

    sigma0 = (ell-1)/2; the others invert
    A - A* = 5(6 sigma2 + 2 A sigma0) and
    B - B* = 7(10 sigma3 + 6 A sigma1 + 4 B sigma0).
    """
    p = field.p
    if p in (5, 7):
        raise ValueError("p in {5, 7} breaks the power-sum denominators")
    s0 = (ell - 1) // 2 % p
    s2 = ((a - a_star) * field.inv(5) - 2 * a * s0) % p * field.inv(6) % p
    s3 = ((b - b_star) * field.inv(7) - 6 * a * sigma - 4 * b * s0) % p \
        * field.inv(10) % p
    return s0, s2, s3


def _phi_match(phi, field, j: int, j_star: int) -> bool:
    p = field.p
    xs = field.powers(j, phi.degree_x())
    ys = field.powers(j_star, max(k for _, k in phi.terms))
    acc = 0
    for (i, k), c in phi.terms.items():
        acc += c % p * xs[i] % p * ys[k]
    return acc % p == 0


def elkies_step(curve: CurveParams, ell: int, u, v=None, w=None, phi=None,
                seed=0, diagnostics=None) -> list:
    """Work every root of the specialized U polynomial into an
    IsogenyStepResult.

    An empty list signals an Atkin prime.  Roots where a needed
    derivative or point value vanishes are skipped; a (root, message)
    pair goes to the diagnostics list when one is supplied.  v, w, phi
    are optional cross-check polynomials; their flags stay None when
    absent.
    """
    field = curve.field
    _check_level(field, ell)
    p = field.p

    def note(root, exc):
        if diagnostics is not None:
            diagnostics.append((root, str(exc)))

    out = []
    e4, e6 = curve.e4, curve.e6
    v_spec = specialize(v, curve) if v is not None else None
    w_spec = specialize(w, curve) if w is not None else None
    for sigma in roots(specialize(u, curve), seed):
        bundle = derivative_bundle(u, curve, sigma)
        try:
            e4t = e4_tilde(field, ell, sigma, bundle, e4, e6)
            e6t = e6_tilde(field, ell, sigma, bundle, e4, e6)
        except (DegenerateDerivative, DegeneratePoint) as exc:
            note(sigma, exc)
            continue
        a_star = -3 * pow(ell, 4, p) * e4t % p
        b_star = -2 * pow(ell, 6, p) * e6t % p
        v_ok = v_spec.evaluate(a_star) == 0 if v_spec is not None else None
        w_ok = w_spec.evaluate(b_star) == 0 if w_spec is not None else None
        phi_ok = None
        if phi is not None:
            delta_num = (pow(e4t, 3, p) - e6t * e6t) % p
            if delta_num == 0:
                phi_ok = False
                note(sigma, "isogenous curve has zero discriminant")
            else:
                j_star = 1728 * pow(e4t, 3, p) * field.inv(delta_num) % p
                phi_ok = _phi_match(phi, field, curve.j_invariant(), j_star)
        s0, s2, s3 = elkies_power_sums(field, curve.A, curve.B,
                                       a_star, b_star, sigma, ell)
        out.append(IsogenyStepResult(
            ell=ell, sigma=sigma, e4t=e4t, e6t=e6t,
            a_star=a_star, b_star=b_star,
            sigma0=s0, sigma2=s2, sigma3=s3,
            validated=ValidationFlags(v_ok, w_ok, phi_ok)))
    return out


def atkin_sigma(field, ell: int, f_root: int, bundle, e4: int, e6: int) -> int:
    """sigma from the first partials at a root f of the eta variant."""
    _check_level(field, ell)
    p = field.p
    f = f_root % p
    if f == 0:
        raise DegeneratePoint("f = 0")
    df = bundle.du_s % p
    if df == 0:
        raise DegenerateDerivative("df = 0 at f root")
    num, den = formulas.atkin_sigma_parts(ell, e4, e6,
                                          bundle.du_4, bundle.du_6, f, df)
    return num % p * field.inv(den % p) % p


def atkin_e4_tilde(field, ell: int, f_root: int, bundle,
                   e4: int, e6: int) -> int:
    """E4(q^ell) from the full second-order bundle at a root f."""
    _check_level(field, ell)
    p = field.p
    f = f_root % p
    if f == 0:
        raise DegeneratePoint("f = 0")
    df = bundle.du_s % p
    if df == 0:
        raise DegenerateDerivative("df = 0 at f root")
    if e4 % p == 0 or e6 % p == 0:
        raise DegeneratePoint("E4 or E6 = 0 (j in {0, 1728})")
    m = formulas.atkin_m_block(ell, e4, e6, bundle.du_4, bundle.du_6,
                               bundle.du_46, f, df,
                               bundle.du_s4, bundle.du_s6)
    den = formulas.atkin_e4_tilde_denominator(ell, e4, e6, f, df)
    return -m % p * field.inv(den % p) % p


def atkin_b_star(ell: int, f_root: int, a_star: int, curve: CurveParams,
                 ua) -> int:
    """B* as the degree-1 gcd root of the two constraints on B*.

    P1 encodes B*^2 + 6912*Delta_tilde + 4A*^3/27 = 0 with
    Delta_tilde = f^12/Delta scaled to the root chart, and P2 is the
    eta-variant polynomial at X = -ell*f with the A slot filled by A*.
    A degree-2 gcd means B* lives in a quadratic extension; that case
    is reported, never guessed around.
    """
    field = curve.field
    _check_level(field, ell)
    p = field.p
    f = f_root % p
    if f == 0:
        raise DegeneratePoint("f = 0")
    e4, e6 = curve.e4, curve.e6
    delta = (pow(e4, 3, p) - e6 * e6) % p * field.inv(1728) % p
    c0 = (6912 * pow(f, 12, p) * field.inv(delta)
          + 4 * pow(a_star, 3, p) * field.inv(27)) % p
    p1 = UniPoly(field, [c0, 0, 1])
    p2 = _ua_b_slot_poly(field, ua, (-ell * f) % p, a_star)
    g = p1.gcd(p2)
    if g.degree == 2:
        raise GcdDegreeTwo("B* is not rational from this root")
    if g.degree != 1:
        raise ValueError("constraint polynomials share no root; "
                         "A* is inconsistent with the f root")
    return (p - g.coeffs[0]) % p


def _ua_b_slot_poly(field, ua, x_val: int, a_val: int) -> UniPoly:
    """The eta-variant polynomial as a univariate in its B slot."""
    p = field.p
    ab = ua.to_basis("AB")
    xs = field.powers(x_val, max(i for (i, _, _) in ab.terms))
    ys = field.powers(a_val, max(a for (_, a, _) in ab.terms))
    inv_cache = {}
    out = [0] * (max(b for (_, _, b) in ab.terms) + 1)
    for (i, a, b), c in ab.terms.items():
        if isinstance(c, int):
            cc = c % p
        else:
            den = c.denominator
            if den not in inv_cache:
                inv_cache[den] = field.inv(den % p)
            cc = c.numerator * inv_cache[den] % p
        out[b] = (out[b] + cc * xs[i] % p * ys[a]) % p
    return UniPoly(field, out)


def atkin_step(curve: CurveParams, ell: int, ua, seed=0,
               diagnostics=None) -> list:
    """Work every root of the specialized eta variant through sigma,
    E4(q^ell), A* and the B* gcd."""
    field = curve.field
    _check_level(field, ell)
    if ell % 12 != 11:
        raise ValueError("the eta variant needs ell = 11 mod 12")
    p = field.p
    out = []
    e4, e6 = curve.e4, curve.e6
    for f in roots(specialize(ua, curve), seed):
        bundle = derivative_bundle(ua, curve, f)
        try:
            sigma = atkin_sigma(field, ell, f, bundle, e4, e6)
            e4t = atkin_e4_tilde(field, ell, f, bundle, e4, e6)
        except (DegenerateDerivative, DegeneratePoint) as exc:
            if diagnostics is not None:
                diagnostics.append((f, str(exc)))
            continue
        a_star = -3 * pow(ell, 4, p) * e4t % p
        try:
            b_star = atkin_b_star(ell, f, a_star, curve, ua)
            err = None
        except GcdDegreeTwo as exc:
            b_star, err = None, str(exc)
        out.append(AtkinStepResult(ell=ell, f=f, sigma=sigma, e4t=e4t,
                                   a_star=a_star, b_star=b_star, error=err))
    return out
