"""Batch command-line front end.

Commands: build (write one polynomial store file), elkies (sigma-chart
isogeny step), atkin (f-chart step for ell = 11 mod 12),
verify-symbolic (replay the formula derivations), series (dump a named
q-expansion), selftest (fast end-to-end sanity run).

Exit codes are a stable contract: 0 success, 1 no result (Atkin
prime), 2 usage error, 3 verification or builder failure, 4 degenerate
computation.  Reports are line-oriented key=value text.
"""

import argparse
import os
import sys

from .builder import PHI_ELLS, build, build_classical_phi
from .errors import (BuildError, CCRError, SingularCurve, VerificationError)
from .ffield import CurveParams, PrimeField, is_probable_prime
from .isogeny import atkin_step, elkies_step
from .qseries import _FORM_NAMES, expand
from .symbolic import (derive_atkin_e4t, derive_atkin_sigma, derive_e4t,
                       derive_e6t)
from .trivariate import poly_from_text, poly_to_text

CACHE_ENV = "CCR_CACHE_DIR"
KINDS = ("U", "V", "W", "Ua", "Phi")
BASES = ("E4E6", "AB", "Delta")


def _cache_dir() -> str:
    return os.environ.get(CACHE_ENV, ".ccr-cache")


def _store_path(directory: str, kind: str, ell: int, basis: str) -> str:
    return os.path.join(directory, f"{kind}_{ell}_{basis}.txt")


def _build_poly(kind: str, ell: int):
    if kind == "Phi":
        return build_classical_phi(ell)
    return build(kind, ell)


def load_or_build(kind: str, ell: int, directory: str, basis: str = "E4E6",
                  rebuild: bool = False):
    """Fetch a polynomial from the store directory, building and caching
    it on a miss.  With rebuild, regenerate and require byte equality
    with any existing file."""
    if kind == "Phi":
        basis = "j"
    path = _store_path(directory, kind, ell, basis)
    if os.path.exists(path) and not rebuild:
        with open(path) as fh:
            return poly_from_text(fh.read())
    poly = _build_poly(kind, ell)
    text = poly_to_text(poly, None if kind == "Phi" else basis)
    if os.path.exists(path) and rebuild:
        with open(path) as fh:
            if fh.read() != text:
                raise BuildError(f"rebuild of {kind}_{ell} does not match "
                                 f"the cached file {path}")
    os.makedirs(directory, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)
    return poly_from_text(text)


def _parse_curve(args):
    """PrimeField + CurveParams from --p/--a/--b, or (None, message)."""
    if args.p <= 3 or not is_probable_prime(args.p):
        return None, "p not prime or too small"
    field = PrimeField(args.p)
    try:
        return CurveParams(field, args.a, args.b), None
    except SingularCurve as exc:
        return None, f"singular curve: {exc}"


def cmd_build(args) -> int:
    if args.kind not in KINDS:
        print(f"usage error: unknown kind {args.kind}")
        return 2
    if args.basis == "Delta" and args.kind != "Ua":
        print("usage error: Delta display only applies to kind Ua")
        return 2
    try:
        poly = _build_poly(args.kind, args.ell)
    except ValueError as exc:
        print(f"usage error: {exc}")
        return 2
    except BuildError as exc:
        print(f"builder failure: {exc}")
        return 3
    basis = None if args.kind == "Phi" else args.basis
    text = poly_to_text(poly, basis)
    out = args.out or f"{args.kind}_{args.ell}_{basis or 'j'}.txt"
    with open(out, "w") as fh:
        fh.write(text)
    print(f"wrote {out}")
    return 0


def cmd_elkies(args) -> int:
    curve, err = _parse_curve(args)
    if curve is None:
        print(f"usage error: {err}")
        return 2
    ell = args.ell
    if ell < 5 or not is_probable_prime(ell) or curve.field.p == ell:
        print(f"usage error: ell={ell} is not an odd prime level "
              f"distinct from p")
        return 2
    directory = args.poly_dir or _cache_dir()
    try:
        u = load_or_build("U", ell, directory, rebuild=args.rebuild)
        v = load_or_build("V", ell, directory, rebuild=args.rebuild)
        w = load_or_build("W", ell, directory, rebuild=args.rebuild)
        phi = (load_or_build("Phi", ell, directory, rebuild=args.rebuild)
               if ell in PHI_ELLS else None)
    except BuildError as exc:
        print(f"builder failure: {exc}")
        return 3
    print(f"p={curve.field.p} A={curve.A} B={curve.B} ell={ell} "
          f"j={curve.j_invariant()}")
    diagnostics = []
    results = elkies_step(curve, ell, u, v=v, w=w, phi=phi,
                          seed=args.seed, diagnostics=diagnostics)
    for root, message in diagnostics:
        print(f"diagnostic: root={root} skipped: {message}")
    for r in results:
        flags = r.validated
        print(f"sigma={r.sigma} Astar={r.a_star} Bstar={r.b_star} "
              f"E4t={r.e4t} E6t={r.e6t} "
              f"sigma0={r.sigma0} sigma2={r.sigma2} sigma3={r.sigma3} "
              f"v_root={flags.v_root} w_root={flags.w_root} "
              f"phi_match={flags.phi_match}")
    if not results and not diagnostics:
        print("Atkin prime: no roots")
        return 1
    if not results:
        print("degenerate: all roots skipped")
        return 4
    good = [r for r in results
            if all(f in (True, None) for f in (r.validated.v_root,
                                               r.validated.w_root,
                                               r.validated.phi_match))]
    if not good:
        print("verification failure: no validated result")
        return 3
    return 0


def cmd_atkin(args) -> int:
    if args.ell % 12 != 11:
        print(f"usage error: ell={args.ell} is not 11 mod 12")
        return 2
    curve, err = _parse_curve(args)
    if curve is None:
        print(f"usage error: {err}")
        return 2
    if curve.field.p == args.ell:
        print("usage error: p equals ell")
        return 2
    directory = args.poly_dir or _cache_dir()
    try:
        ua = load_or_build("Ua", args.ell, directory, rebuild=args.rebuild)
    except BuildError as exc:
        print(f"builder failure: {exc}")
        return 3
    print(f"p={curve.field.p} A={curve.A} B={curve.B} ell={args.ell} "
          f"j={curve.j_invariant()}")
    diagnostics = []
    results = atkin_step(curve, args.ell, ua, seed=args.seed,
                         diagnostics=diagnostics)
    for root, message in diagnostics:
        print(f"diagnostic: root={root} skipped: {message}")
    for r in results:
        if r.b_star is None:
            print(f"f={r.f} sigma={r.sigma} E4t={r.e4t} Bstar=unavailable "
                  f"Astar={r.a_star} gcd_degree=2 error={r.error}")
        else:
            print(f"f={r.f} sigma={r.sigma} E4t={r.e4t} Bstar={r.b_star} "
                  f"Astar={r.a_star} gcd_degree=1")
    if not results and not diagnostics:
        print("Atkin-variant polynomial has no roots")
        return 1
    if not any(r.b_star is not None for r in results):
        print("degenerate: no root yielded a rational Bstar")
        return 4
    return 0


_DERIVATIONS = (("e4t", derive_e4t), ("e6t", derive_e6t),
                ("a-sigma", derive_atkin_sigma), ("a-e4t", derive_atkin_e4t))


def cmd_verify_symbolic(args) -> int:
    for name, fn in _DERIVATIONS:
        if args.case not in ("all", name):
            continue
        try:
            report = fn()
        except VerificationError as exc:
            print(f"FAIL {name}: {exc}")
            return 3
        print(report.text())
    return 0


def cmd_series(args) -> int:
    try:
        series = expand(args.name, args.prec, ell=args.ell)
    except ValueError as exc:
        print(f"usage error: {exc}")
        return 2
    for n in range(series.lead, series.end):
        c = series.coefficient(n)
        if c.denominator == 1:
            print(f"{n} {c.numerator}")
        else:
            print(f"{n} {c.numerator}/{c.denominator}")
    return 0


def cmd_selftest(args) -> int:
    failures = []

    def check(label, cond):
        print(f"{'PASS' if cond else 'FAIL'} {label}")
        if not cond:
            failures.append(label)

    u5 = build("U", 5)
    ab = u5.to_basis("AB")
    check("U5 printed form", ab.terms.get((4, 1, 0)) == 20
          and ab.terms.get((0, 0, 2)) == -80)
    field = PrimeField(1009)
    curve = CurveParams(field, 1, 3)
    res = elkies_step(curve, 5, u5, v=build("V", 5), w=build("W", 5),
                      phi=build_classical_phi(5), seed=0)
    ok = any(r.sigma == 584 and r.a_star == 441 and r.b_star == 997
             and r.validated.v_root and r.validated.w_root
             and r.validated.phi_match for r in res)
    check("elkies worked example", ok)
    ares = atkin_step(curve, 11, build("Ua", 11), seed=0)
    ok = any(r.f == 65 and r.sigma == 75 and r.e4t == 532 and r.b_star == 460
             for r in ares)
    check("atkin worked example", ok)
    check("sigma1 constant term",
          expand("sigma1", 2, ell=5).coefficient(0) == 10)
    if failures:
        print(f"selftest: FAIL ({len(failures)})")
        return 3
    print("selftest: PASS")
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ccrpoly",
        description="Modular polynomials for elliptic-curve isogenies")
    sub = top.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build one polynomial store file")
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--kind", required=True)
    b.add_argument("--basis", choices=BASES, default="E4E6")
    b.add_argument("--out", default=None)
    b.set_defaults(fn=cmd_build)

    def curve_flags(p):
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--a", type=int, required=True)
        p.add_argument("--b", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--poly-dir", default=None)
        p.add_argument("--rebuild", action="store_true")

    e = sub.add_parser("elkies", help="run the sigma-chart isogeny step")
    curve_flags(e)
    e.set_defaults(fn=cmd_elkies)

    a = sub.add_parser("atkin", help="run the f-chart step (ell = 11 mod 12)")
    curve_flags(a)
    a.set_defaults(fn=cmd_atkin)

    v = sub.add_parser("verify-symbolic", help="replay formula derivations")
    v.add_argument("--case", default="all",
                   choices=("all",) + tuple(n for n, _ in _DERIVATIONS))
    v.set_defaults(fn=cmd_verify_symbolic)

    s = sub.add_parser("series", help="dump a named q-expansion")
    s.add_argument("--name", required=True, choices=_FORM_NAMES)
    s.add_argument("--prec", type=int, default=10)
    s.add_argument("--ell", type=int, default=None)
    s.set_defaults(fn=cmd_series)

    t = sub.add_parser("selftest", help="fast end-to-end sanity run")
    t.set_defaults(fn=cmd_selftest)
    return top


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.fn(args)
    except CCRError as exc:
        print(f"error: {exc}")
        return 4
    except ValueError as exc:
        print(f"usage error: {exc}")
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
