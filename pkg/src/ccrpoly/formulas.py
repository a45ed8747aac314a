"""Shared transcription of the isogenous-curve coefficient formulas.

Written once against a generic commutative ring: arguments only need +, -, *
and small integer powers.  The finite-field engine evaluates these on field
elements and the symbolic verifier evaluates the identical expressions on
polynomials, so the two consumers cannot drift apart.

Naming: ds, d4, d6 are the first partials of the modular polynomial in its
three slots (root, E4, E6); ds4, ds6, d46 the mixed second partials; dss,
d44, d66 the diagonal second partials; df, df4, df6 the analogues for the
eta-variant polynomial whose first slot carries f instead of sigma.
"""


def e4_tilde_parts(ell, sigma, e4, e6, ds, d4, d6):
    """Numerator and denominator of E4(q^ell) in the sigma-root chart."""
    num = -(4 * ell * (3 * e4 ** 2 * d6 + 2 * e6 * d4)
            - ds * (ell ** 2 * e4 + 4 * sigma ** 2))
    den = ell ** 4 * ds
    return num, den


def c2_block(ell, sigma, e4, e6, ds, d4, d6, ds4, ds6, d46, dss, d44, d66):
    """Degree-two-in-ell block of the E6(q^ell) numerator."""
    return (18 * (d6 ** 2 * dss - 2 * d6 * ds * ds6 + d66 * ds ** 2) * e4 ** 4
            + (24 * e6 * d4 * (d6 * dss - ds * ds6)
               + 24 * e6 * ds * (d46 * ds - d6 * ds4)
               + 10 * d4 * ds ** 2) * e4 ** 2
            + 3 * ds ** 2 * (7 * e6 * d6 - sigma * ds) * e4
            + 8 * e6 ** 2 * (d4 ** 2 * dss - 2 * d4 * ds * ds4 + d44 * ds ** 2))


def e6_tilde_numerator(ell, sigma, e4, e6, ds, d4, d6, ds4, ds6, d46,
                       dss, d44, d66):
    """N with E6(q^ell) = -N / (ell^6 ds^3)."""
    c2 = c2_block(ell, sigma, e4, e6, ds, d4, d6, ds4, ds6, d46, dss, d44, d66)
    # ell^0 coefficient is -8 ds^3 sigma^3: the coefficient 8 is forced both
    # by the symbolic re-derivation and by the l=5 numeric point (B*=997).
    return (-e6 * ds ** 3 * ell ** 3
            + c2 * ell ** 2
            + 12 * ds ** 2 * sigma * (3 * e4 ** 2 * d6 + 2 * e6 * d4) * ell
            - 8 * ds ** 3 * sigma ** 3)


def e6_tilde_denominator(ell, ds):
    return ell ** 6 * ds ** 3


def diagonal_dss(ell, principal, e4, e6, ds, ds4, ds6):
    """Numerator/denominator of the eliminated diagonal second partial in the
    first slot; ``principal`` is sigma (or f), ds/ds4/ds6 its partials."""
    return ell * ds - 2 * e4 * ds4 - 3 * e6 * ds6, principal


def diagonal_d44(ell, principal, e6, d4, ds4, d46, e4):
    return (ell - 1) * d4 - principal * ds4 - 3 * e6 * d46, 2 * e4


def diagonal_d66(ell, principal, e4, d6, ds6, d46, e6):
    return (ell - 2) * d6 - principal * ds6 - 2 * e4 * d46, 3 * e6


def atkin_sigma_parts(ell, e4, e6, d4, d6, f, df):
    """sigma = ell*(3 d6 E4^2 + 2 d4 E6) / (f df) in the f-root chart."""
    num = ell * (3 * d6 * e4 ** 2 + 2 * d4 * e6)
    den = f * df
    return num, den


def atkin_m_block(ell, e4, e6, d4, d6, d46, f, df, df4, df6):
    """M with E4(q^ell) = -M / (ell^2 f^2 E4 E6 df^3) in the f-root chart."""
    return (24 * (3 * e6 * d6 ** 2 * df4 + d46 * df ** 2 * f) * e4 ** 6
            + 12 * (9 * e6 ** 2 * d6 ** 2 * df6
                    - 3 * e6 * d6 ** 2 * df * ell
                    + 6 * e6 * d6 * df * df6 * f
                    - d6 * df ** 2 * ell * f
                    + df ** 2 * df6 * f ** 2
                    - 6 * e6 * d6 ** 2 * df
                    + 2 * d6 * df ** 2 * f) * e4 ** 5
            + 96 * e4 ** 4 * e6 ** 2 * d4 * d6 * df4
            + 4 * e6 * (36 * e6 ** 2 * d4 * d6 * df6
                        - 12 * e6 * d4 * d6 * df * ell
                        + 12 * e6 * d4 * df * df6 * f
                        - 12 * e6 * d46 * df ** 2 * f
                        + 12 * e6 * d6 * df * df4 * f
                        - 24 * e6 * d4 * d6 * df
                        - 5 * d4 * df ** 2 * f) * e4 ** 3
            + e6 * (32 * e6 ** 2 * d4 ** 2 * df4
                    - 42 * e6 * d6 * df ** 2 * f
                    + df ** 3 * f ** 2) * e4 ** 2
            + 16 * e6 ** 3 * d4 * (3 * e6 * d4 * df6
                                   - d4 * df * ell
                                   + 2 * df * df4 * f
                                   - 2 * d4 * df) * e4
            + 24 * e6 ** 4 * d46 * f * df ** 2
            - 8 * e6 ** 3 * d4 * ell * f * df ** 2
            + 8 * e6 ** 3 * df4 * f ** 2 * df ** 2
            + 8 * e6 ** 3 * d4 * f * df ** 2)


def atkin_e4_tilde_denominator(ell, e4, e6, f, df):
    return ell ** 2 * f ** 2 * e4 * e6 * df ** 3
