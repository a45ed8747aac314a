"""Finite-field layer: scalars, polynomials, roots, specialization,
derivative bundles, division polynomials."""

import random

import pytest

from ccrpoly.errors import SingularCurve
from ccrpoly.ffield import (
    CurveParams,
    DerivativeBundle,
    PrimeField,
    UniPoly,
    derivative_bundle,
    division_poly,
    is_probable_prime,
    poly_arith,
    roots,
    specialize,
)
from ccrpoly.symbolic import MultiPoly

P = 1009


@pytest.fixture(scope="module")
def fld():
    return PrimeField(P)


@pytest.fixture(scope="module")
def curve13(fld):
    return CurveParams(fld, 1, 3)


class TestPrimeField:
    def test_primality_gate(self):
        with pytest.raises(ValueError, match="not prime"):
            PrimeField(9)
        with pytest.raises(ValueError, match="exceed 3"):
            PrimeField(3)
        with pytest.raises(ValueError, match="exceed 3"):
            PrimeField(2)
        PrimeField(5)
        PrimeField(2**255 - 19)

    def test_probable_prime(self):
        assert is_probable_prime(2) and is_probable_prime(97)
        assert not is_probable_prime(1) and not is_probable_prime(91)
        # Carmichael number
        assert not is_probable_prime(561)

    def test_counters(self):
        fld = PrimeField(101)
        assert fld.mul_count == 0
        fld.mul(7, 8)
        fld.mul(3, 4)
        assert fld.mul_count == 2
        inv = fld.inv(7)
        assert inv * 7 % 101 == 1
        assert fld.inv_count == 1
        fld.reset_counts()
        assert fld.mul_count == 0 and fld.inv_count == 0

    def test_zero_inverse(self, fld):
        with pytest.raises(ZeroDivisionError):
            fld.inv(0)


class TestUniPoly:
    def test_normalization(self, fld):
        assert UniPoly(fld, [1, 2, 0, 0]).coeffs == [1, 2]
        assert UniPoly(fld, [0, 0]).is_zero()
        assert UniPoly(fld, [-1]).coeffs == [P - 1]
        assert UniPoly(fld, []).degree == -1

    def test_ring_ops(self, fld):
        x = UniPoly.x(fld)
        f = x * x - 1
        g = x - 1
        assert (f + g).coeffs == [P - 2, 1, 1]
        assert (f * g).coeffs == [1, P - 1, P - 1, 1]
        assert (2 * g).coeffs == [P - 2, 2]
        assert (x ** 3).coeffs == [0, 0, 0, 1]

    def test_divmod(self, fld):
        x = UniPoly.x(fld)
        q, r = divmod(x ** 3, x)
        assert q == x * x and r.is_zero()
        q, r = divmod(x ** 2 + 1, 2 * x - 1)
        # back-substitute
        assert q * (2 * x - 1) + r == x ** 2 + 1
        with pytest.raises(ZeroDivisionError):
            divmod(x, UniPoly(fld, []))

    def test_gcd_monic(self, fld):
        x = UniPoly.x(fld)
        g = (x * x - 1).gcd(x - 1)
        assert g == x - 1
        # gcd normalizes the leading coefficient even off monic inputs
        g = (3 * (x - 5) * (x - 7)).gcd(5 * (x - 5))
        assert g == x - 5

    def test_powmod_small_field(self):
        f5 = PrimeField(5)
        x = UniPoly.x(f5)
        mod = x * x + 1
        # X^5 = X*(X^2)^2 = X*(-1)^2 = X mod (X^2+1)
        assert x.powmod(5, mod) == x

    def test_evaluate_and_derivative(self, fld):
        x = UniPoly.x(fld)
        f = x ** 3 + 2 * x + 5
        assert f.evaluate(10) == 1025 % P
        assert f.derivative() == 3 * x * x + 2

    def test_dispatcher(self, fld):
        x = UniPoly.x(fld)
        assert poly_arith(x, x, "add") == 2 * x
        assert poly_arith(x, x, "mul") == x * x
        q, r = poly_arith(x ** 3, x, "divmod")
        assert q == x * x and r.is_zero()
        assert poly_arith(x * x - 1, x - 1, "gcd") == x - 1
        assert poly_arith(x, x * x + 1, "powmod", exponent=P) is not None
        with pytest.raises(ValueError):
            poly_arith(x, x, "compose")
        with pytest.raises(ValueError):
            poly_arith(x, x, "powmod")


class TestRoots:
    def test_u5_worked_curve(self, fld, curve13, u5):
        assert roots(specialize(u5, curve13), seed=7) == [584, 664]

    def test_ua11_worked_curve(self, fld, curve13, ua11):
        assert roots(specialize(ua11, curve13), seed=7) == [65, 333]

    def test_square_root_of_minus_one(self, fld):
        f = UniPoly(fld, [1, 0, 1])
        r = roots(f, seed=0)
        assert len(r) == 2 and r[0] + r[1] == P
        assert r[0] * r[0] % P == P - 1

    def test_seed_independence(self, fld, curve13, u5):
        f = specialize(u5, curve13)
        baseline = roots(f, seed=0)
        for seed in (1, 2, 999, "text-seed"):
            assert roots(f, seed=seed) == baseline

    def test_repeated_factors_and_zero_root(self, fld):
        x = UniPoly.x(fld)
        f = x * (x - 3) * (x - 3) * (x - 5)
        assert roots(f, seed=4) == [0, 3, 5]

    def test_count_matches_linear_part(self, fld):
        rng = random.Random(11)
        x = UniPoly.x(fld)
        for _ in range(10):
            f = UniPoly(fld, [rng.randrange(P) for _ in range(8)] + [1])
            rs = roots(f, seed=2)
            lin = (x.powmod(P, f) - x).gcd(f)
            assert len(rs) == lin.degree
            for r in rs:
                assert f.evaluate(r) == 0

    def test_degenerate_inputs(self, fld):
        with pytest.raises(ValueError):
            roots(UniPoly(fld, []), seed=0)
        assert roots(UniPoly(fld, [4]), seed=0) == []


class TestCurveParams:
    def test_nonsingular_gate(self, fld):
        with pytest.raises(SingularCurve):
            CurveParams(fld, 0, 0)
        # 4*(-3)^3 + 27*2^2 = -108 + 108
        with pytest.raises(SingularCurve):
            CurveParams(fld, -3, 2)

    def test_normalized_eisenstein_values(self, fld, curve13):
        assert curve13.e4 == -1 * pow(3, P - 2, P) % P == 336
        assert curve13.e6 == -3 * pow(2, P - 2, P) % P == 503

    def test_j_invariant(self, fld, curve13):
        # j = 1728*4A^3/(4A^3+27B^2) must agree with the E4/E6 form
        a, b = 1, 3
        want = 1728 * 4 * a**3 * pow(4 * a**3 + 27 * b * b, P - 2, P) % P
        assert curve13.j_invariant() == want == 269


class TestSpecialize:
    def test_u5_frozen_polynomial(self, fld, curve13, u5):
        want = UniPoly(fld, [-720, -384, -80, 480, 20, 0, 1])
        assert specialize(u5, curve13) == want

    def test_basis_independence(self, fld, curve13, u5, ua11):
        for poly in (u5, ua11):
            assert specialize(poly, curve13) == specialize(poly.to_basis("AB"), curve13)

    def test_leading_monomial_is_pure_x(self, u5):
        # every non-leading monomial carries E4 or E6, so A=B=0 would
        # collapse U5 to X^6
        for (i, a, b) in u5.terms:
            if i == 6:
                assert (a, b) == (0, 0)
            else:
                assert a + b > 0

    def test_p_equal_ell_rejected(self, u5):
        f5 = PrimeField(5)
        c = CurveParams(f5, 1, 3)
        with pytest.raises(ValueError, match="level"):
            specialize(u5, c)


class TestDerivativeBundle:
    def test_worked_example_firsts(self, curve13, u5):
        bundle = derivative_bundle(u5, curve13, 584)
        assert bundle.u == 0
        assert (bundle.du_s, bundle.du_4, bundle.du_6) == (905, 779, 140)

    def test_worked_example_seconds(self, curve13, u5):
        bundle = derivative_bundle(u5, curve13, 584)
        assert (bundle.du_s4, bundle.du_s6, bundle.du_46) == (44, 942, 493)

    def test_ab_storage_agrees(self, curve13, u5):
        assert derivative_bundle(u5.to_basis("AB"), curve13, 584) == \
            derivative_bundle(u5, curve13, 584)

    def test_atkin_root_bundle_value(self, curve13, ua11):
        assert derivative_bundle(ua11, curve13, 65).u == 0

    def test_non_root_rejected(self, curve13, u5):
        with pytest.raises(ValueError, match="not a root"):
            derivative_bundle(u5, curve13, 585)

    def test_second_root(self, curve13, u5):
        bundle = derivative_bundle(u5, curve13, 664)
        assert bundle.u == 0 and bundle.du_s != 0


class TestDivisionPoly:
    def test_first_values_symbolic(self):
        v = ("X", "A", "B")
        one = MultiPoly.const(v, 1)
        assert division_poly(-1) == -one
        assert division_poly(0).is_zero
        assert division_poly(1) == one
        assert division_poly(2) == one

    def test_f3(self):
        v = ("X", "A", "B")
        x = MultiPoly.gen(v, "X")
        a = MultiPoly.gen(v, "A")
        b = MultiPoly.gen(v, "B")
        assert division_poly(3) == 3 * x**4 + 6 * a * x**2 + 12 * b * x - a * a

    def test_f4(self):
        # psi_4 = 4Y*(X^6+5AX^4+20BX^3-5A^2X^2-4ABX-8B^2-A^3), so
        # f_4 = psi_4/(2Y) carries leading coefficient 4/2 = 2; the
        # monic variant would break the (n odd -> lead n) pattern that
        # test_doubling_composition pins for f_5
        v = ("X", "A", "B")
        x = MultiPoly.gen(v, "X")
        a = MultiPoly.gen(v, "A")
        b = MultiPoly.gen(v, "B")
        monic = (x**6 + 5 * a * x**4 + 20 * b * x**3 - 5 * a * a * x**2
                 - 4 * a * b * x - 8 * b * b - a**3)
        assert division_poly(4) == 2 * monic

    def test_leading_coefficients(self, fld, curve13):
        for n in range(3, 21):
            lead = division_poly(n, curve13).leading()
            assert lead == (n if n % 2 else n // 2) % P

    def test_degree_formula(self, fld, curve13):
        for n in range(3, 21):
            want = (n * n - 1) // 2 if n % 2 else (n * n - 4) // 2
            assert division_poly(n, curve13).degree == want
        assert division_poly(30, curve13).degree == (900 - 4) // 2

    def test_weighted_homogeneity(self):
        # X weight 1, A weight 2, B weight 3
        for n in range(3, 13):
            f = division_poly(n)
            deg = f.degree_in("X")
            for (i, a, b) in f.terms:
                assert i + 2 * a + 3 * b == deg

    def test_symbolic_field_agreement(self, fld, curve13):
        for n in (5, 8, 11):
            sym = division_poly(n)
            out = [0] * (sym.degree_in("X") + 1)
            for (i, a, b), c in sym.terms.items():
                out[i] = (out[i] + int(c) * pow(3, b, P)) % P
            assert UniPoly(fld, out) == division_poly(n, curve13)

    def test_doubling_composition(self, fld, curve13):
        # x([4]P) computed by composing the doubling map twice must
        # equal x - f3*f5/(4*(x^3+Ax+B)*f4^2); this pins the even-index
        # normalization and the recurrence output f5 at once
        a, b = curve13.A, curve13.B
        f3 = division_poly(3, curve13)
        f4 = division_poly(4, curve13)
        f5 = division_poly(5, curve13)
        assert f5.leading() == 5

        def dbl(x):
            num = (x**4 - 2 * a * x * x - 8 * b * x + a * a) % P
            den = 4 * (x**3 + a * x + b) % P
            return None if den == 0 else num * pow(den, P - 2, P) % P

        checked = 0
        rng = random.Random(99)
        while checked < 10:
            x = rng.randrange(P)
            d1 = dbl(x)
            d2 = dbl(d1) if d1 is not None else None
            if d2 is None:
                continue
            den = 4 * (x**3 + a * x + b) * pow(f4.evaluate(x), 2, P) % P
            if den == 0:
                continue
            rhs = (x - f3.evaluate(x) * f5.evaluate(x) * pow(den, P - 2, P)) % P
            assert d2 == rhs
            checked += 1

    def test_range_gate(self, curve13):
        with pytest.raises(ValueError):
            division_poly(-2)
        with pytest.raises(ValueError):
            division_poly(31)
        with pytest.raises(ValueError):
            division_poly(31, curve13)


class TestRootCountProperty:
    @pytest.mark.parametrize("ell", [5, 7])
    def test_specialized_u_root_counts(self, fld, ell, u5, u7):
        poly = {5: u5, 7: u7}[ell]
        rng = random.Random(17)
        seen = 0
        while seen < 50:
            a, b = rng.randrange(P), rng.randrange(P)
            if (4 * a**3 + 27 * b * b) % P == 0:
                continue
            seen += 1
            c = CurveParams(fld, a, b)
            n = len(roots(specialize(poly, c), seed=5))
            assert n in (0, 1, 2, ell + 1)

    def test_atkin_curve_has_no_roots(self, fld, u5):
        # frozen Atkin instance reused by the command-line tests
        c = CurveParams(fld, 1, 2)
        assert roots(specialize(u5, c), seed=3) == []
