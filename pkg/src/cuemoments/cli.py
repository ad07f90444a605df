"""Command-line front end.

Subcommands expose the exact, Monte Carlo, quadrature, Painlevé and
Hankel-identity engines.  Every run prints a JSON document to stdout
(machine-readable; exact rationals serialized as "p/q" decimal strings,
never floats) and a one-line human summary to stderr, and embeds a run
manifest (command, parameters, seeds, version, wall time, output digest)
so any run can be reproduced bit-for-bit.

Exit codes: 0 success; 2 invalid or unsupported input; 3 Monte Carlo
diagnostics failure (flagged chain); 4 a verified identity failed.
"""

import argparse
import hashlib
import json
import os
import re
import sys
import time
from fractions import Fraction

from . import __version__
from .cauchy import (
    MomentSpec,
    finite_joint_moment,
    hp_expectation,
    keating_snaith_constant,
    limiting_moment,
    oracle_second_moment_V,
)
from .exact import rat_to_str

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MC_DIAGNOSTICS = 3
EXIT_IDENTITY_FAILED = 4


class CliError(Exception):
    """Invalid or unsupported input; maps to exit code 2."""

    def __init__(self, message, code=EXIT_INVALID):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _parse_int_list(text):
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise CliError("expected a comma-separated list of integers: %r" % text)


def _parse_exponent_list(text):
    """Exponents: numbers, with '_' marking a symbolic weight-absorbed slot."""
    out = []
    for p in text.split(","):
        if p == "":
            continue
        if p == "_":
            out.append(None)
            continue
        try:
            out.append(Fraction(p))
        except ValueError:
            raise CliError("bad exponent %r (use integers, rationals or '_')" % p)
    return out


def _parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError("expected a rational number, got %r" % text)


_FACTOR_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def _parse_poly(text, arity):
    """Parse expressions like "x1^2 + 2*x1*x2 - 1/2*x2^4" into a SymPoly."""
    from .sympoly import SymPoly

    cleaned = text.replace(" ", "").replace("-", "+-")
    poly = SymPoly(arity)
    for term in cleaned.split("+"):
        if not term:
            continue
        coeff = Fraction(1)
        if term.startswith("-"):
            coeff = -coeff
            term = term[1:]
        expo = [0] * arity
        for factor in term.split("*"):
            m = _FACTOR_RE.match(factor)
            if m:
                idx = int(m.group(1))
                if not 1 <= idx <= arity:
                    raise CliError("variable x%d out of range for %d variables"
                                   % (idx, arity))
                expo[idx - 1] += int(m.group(2) or 1)
            else:
                try:
                    coeff *= Fraction(factor)
                except (ValueError, ZeroDivisionError):
                    raise CliError("cannot parse monomial factor %r" % factor)
        poly = poly + SymPoly(arity, {tuple(expo): coeff})
    return poly


def _default_seed():
    env = os.environ.get("CUEMOMENTS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError("CUEMOMENTS_SEED must be an integer, got %r" % env)


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _ratfun_json(rf):
    return {"num": rf.num.to_json(), "den": rf.den.to_json(), "repr": repr(rf)}


def _series_json(ps, through=None):
    n = len(ps.coeffs) if through is None else min(through + 1, len(ps.coeffs))
    return [rat_to_str(c) for c in ps.coeffs[:n]]


def _canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(command, params, result, seeds, started, fmt):
    digest = hashlib.sha256(_canonical_dumps(result).encode()).hexdigest()
    manifest = {
        "command": command,
        "params": params,
        "seeds": seeds,
        "version": __version__,
        "wall_time_s": round(time.monotonic() - started, 6),
        "output_digest": digest,
    }
    doc = {"command": command, "result": result, "manifest": manifest}
    if fmt == "csv":
        rows = [("key", "value")]
        for key, value in sorted(result.items()):
            rows.append((key, _canonical_dumps(value)
                         if isinstance(value, (dict, list)) else str(value)))
        sys.stdout.write("\n".join("%s,%s" % r for r in rows) + "\n")
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return doc


def _summary(text):
    sys.stderr.write(text + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_leading_coeff(args, started):
    orders = _parse_int_list(args.orders)
    exponents = _parse_exponent_list(args.exponents)
    if any(e is None for e in exponents):
        raise CliError("'_' exponents are only meaningful for finite-moment")
    if len(orders) != len(exponents):
        raise CliError("orders and exponents must have equal length")
    if any(e.denominator != 1 for e in exponents):
        raise CliError("exact engine needs integer exponents; use mc-estimate")
    exponents = [int(e) for e in exponents]
    if args.variant == "Z":
        try:
            rf = limiting_moment(orders, exponents)
        except ValueError as exc:
            raise CliError(str(exc))
    else:
        # V-variant leading coefficients are wired through the closed-form
        # second-moment product: single order n with exponent 2 only.
        if len(orders) != 1 or exponents != [2]:
            raise CliError("variant V supports a single order with exponent 2")
        rf = oracle_second_moment_V(orders[0])
    result = {
        "variant": args.variant,
        "orders": orders,
        "exponents": exponents,
        "rational": _ratfun_json(rf),
    }
    if args.eval_s is not None:
        s0 = _parse_rational(args.eval_s)
        try:
            value = rf.eval(s0)
        except ZeroDivisionError:
            raise CliError("pole at s = %s" % s0)
        result["eval_s"] = rat_to_str(s0)
        result["value"] = rat_to_str(value)
        result["value_float"] = float(value)
        if args.with_constant:
            # Multiply by G(s+1)^2/G(2s+1) and the 2^{-2 sum h_j n_j}
            # prefactor of the full leading-order coefficient.
            S = sum(n * e for n, e in zip(orders, exponents))
            const = keating_snaith_constant(s0) * 2.0 ** (-float(S))
            result["constant"] = const
            result["value_with_constant"] = const * float(value)
    elif args.with_constant:
        raise CliError("--with-constant requires --eval-s")
    _summary("leading-coeff %s orders=%s exponents=%s -> %s"
             % (args.variant, orders, exponents, result["rational"]["repr"]))
    return result, EXIT_OK


def cmd_finite_moment(args, started):
    orders = _parse_int_list(args.orders)
    exponents = _parse_exponent_list(args.exponents)
    if len(orders) != len(exponents):
        raise CliError("orders and exponents must have equal length")
    # '_' marks an exponent absorbed symbolically into the weight parameter s
    # (it sits on the 0-th derivative), so the pair is dropped from the
    # polynomial integrand.
    pairs = [(n, e) for n, e in zip(orders, exponents) if e is not None]
    if any(n == 0 for n, e in pairs):
        raise CliError("exponents on order 0 must be '_' (absorbed into s)")
    if any(e.denominator != 1 or e <= 0 or int(e) % 2 for _, e in pairs):
        raise CliError("exact engine needs positive even integer exponents; "
                       "use mc-estimate for others")
    if not pairs:
        raise CliError("at least one non-'_' exponent is required")
    spec = MomentSpec(orders=[n for n, _ in pairs],
                      exponents=[int(e) for _, e in pairs],
                      variant=args.variant, size=args.N)
    try:
        rf = finite_joint_moment(spec)
    except ValueError as exc:
        raise CliError(str(exc))
    result = {
        "N": args.N,
        "variant": args.variant,
        "orders": spec.orders,
        "exponents": spec.exponents,
        "rational": _ratfun_json(rf),
    }
    if args.eval_s is not None:
        s0 = _parse_rational(args.eval_s)
        result["eval_s"] = rat_to_str(s0)
        result["value"] = rat_to_str(rf.eval(s0))
        result["value_float"] = float(rf.eval(s0))
    _summary("finite-moment N=%d %s -> %s"
             % (args.N, args.variant, result["rational"]["repr"]))
    return result, EXIT_OK


def cmd_mc_estimate(args, started):
    from .mc import ChainConfig, _integrand_values, estimate_joint_moment, sample_hp

    orders = _parse_int_list(args.orders)
    exponents = _parse_exponent_list(args.exponents)
    if any(e is None for e in exponents):
        raise CliError("'_' exponents are only meaningful for finite-moment")
    if len(orders) != len(exponents):
        raise CliError("orders and exponents must have equal length")
    try:
        spec = MomentSpec(orders=orders, exponents=[float(e) for e in exponents],
                          variant=args.variant, size=args.N)
        config = ChainConfig(N=args.N, s=args.s, chains=args.chains,
                             burn_in=args.burn_in, samples=args.samples,
                             thin=args.thin, proposal_scale=args.proposal_scale,
                             seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc))
    batch = sample_hp(config)
    seeds = {"seed": config.seed, "chains": config.chains}
    if batch.flagged:
        result = {
            "flagged": True,
            "acceptance_rate": batch.acceptance_rate,
            "message": "chain diagnostics failed (acceptance rate out of range)",
        }
        _summary("mc-estimate FLAGGED: acceptance rate %.3f"
                 % batch.acceptance_rate)
        return result, EXIT_MC_DIAGNOSTICS, seeds
    est, stderr = estimate_joint_moment(batch, spec)
    vals = _integrand_values(batch.draws, spec, args.N)
    result = {
        "N": args.N,
        "s": args.s,
        "variant": args.variant,
        "orders": orders,
        "exponents": [float(e) for e in exponents],
        "estimate": est,
        "stderr": stderr,
        "ess": batch.ess(vals),
        "acceptance_rate": batch.acceptance_rate,
        "flagged": False,
        "draws": int(len(batch.draws)),
    }
    _summary("mc-estimate N=%d s=%d -> %.6g +/- %.2g (ess %.0f)"
             % (args.N, args.s, est, stderr, result["ess"]))
    return result, EXIT_OK, seeds


def cmd_quadrature(args, started):
    from .mc import quadrature_expectation

    P = _parse_poly(args.poly, args.N)
    try:
        value = quadrature_expectation(args.N, args.s, P,
                                       nodes_per_dim=args.nodes)
    except ValueError as exc:
        raise CliError(str(exc))
    result = {"N": args.N, "s": args.s, "poly": args.poly,
              "nodes_per_dim": args.nodes, "value": value}
    try:
        exact = hp_expectation(P, args.N).eval(Fraction(args.s))
        result["exact"] = rat_to_str(exact)
        result["abs_error"] = abs(value - float(exact))
    except (ValueError, ZeroDivisionError):
        pass
    _summary("quadrature N=%d s=%d <%s> -> %.12g"
             % (args.N, args.s, args.poly, value))
    return result, EXIT_OK


def cmd_painleve(args, started):
    from .painleve import (painleve5_residual, sigma_p3_residual, tau_finiteN,
                           tau_limit)

    if args.s < 1:
        raise CliError("s must be a positive integer")
    if args.mode == "p5-finite":
        if args.N is None or args.N < 1:
            raise CliError("p5-finite requires --N >= 1")
        tau = tau_finiteN(args.N, args.s)
        res = painleve5_residual(tau)
        zero = res.is_zero()
        result = {
            "mode": args.mode,
            "N": args.N,
            "s": args.s,
            "residual_zero": zero,
            "tau": _ratfun_json(tau.ratfun),
        }
        _summary("painleve p5-finite N=%d s=%d residual_zero=%s"
                 % (args.N, args.s, zero))
        return result, (EXIT_OK if zero else EXIT_IDENTITY_FAILED)
    order = args.series_order
    tau = tau_limit(args.s, K=order + 4)
    res = sigma_p3_residual(tau)
    coeffs = _series_json(res, through=order)
    zero = all(c == "0/1" for c in coeffs)
    result = {
        "mode": args.mode,
        "s": args.s,
        "series_order": order,
        "residual_coefficients": coeffs,
        "residual_zero_through_order": zero,
        "tau_series": _series_json(tau.series, through=order),
        "tau_leading_coefficient": rat_to_str(tau.series[2]),
    }
    _summary("painleve p3-limit s=%d zero through order %d: %s"
             % (args.s, order, zero))
    return result, (EXIT_OK if zero else EXIT_IDENTITY_FAILED)


def cmd_hankel_verify(args, started):
    from .exact import Poly
    from .hankel import (alternating_sum_residual, cor_relation_residuals,
                         initial_condition_residuals, theta_derivative_residual,
                         theta_three_term_residual, verify_vector_recursion)

    t0 = _parse_rational(args.t)
    checks = []

    def record(name, residual_zero, residual_repr):
        checks.append({"name": name, "passed": bool(residual_zero),
                       "residual": residual_repr})

    for m in range(0, 6):
        r = theta_derivative_residual(m, args.N, args.s)
        record("theta-derivative m=%d" % m, r.is_zero(), repr(r))
    for gamma in range(0, 6):
        r = theta_three_term_residual(gamma, args.N, args.s)
        record("theta-three-term gamma=%d" % gamma, r == Poly(), repr(r))
    for l in range(1, args.l + 1):
        r = alternating_sum_residual(args.N, args.s, l)
        record("alternating-sum l=%d" % l, r.is_zero(), repr(r))
    for name, r in zip(("initial-condition-1", "initial-condition-2"),
                       initial_condition_residuals(args.N, args.s)):
        record(name, r.is_zero_through_ord(), "0" if r.is_zero_through_ord()
               else str(float(r.max_abs_at(t0))))
    r = verify_vector_recursion(args.l, args.k, args.N, args.s, t0=t0,
                                perturb=args.perturb)
    record("vector-recursion l=%d k=%d%s"
           % (args.l, args.k, " (perturbed)" if args.perturb else ""),
           r == 0, rat_to_str(r))
    for name, r in zip(("char-fn-relation-1", "char-fn-relation-2"),
                       cor_relation_residuals(args.N, args.s)):
        record(name, r.is_zero(), repr(r))

    failed = [c["name"] for c in checks if not c["passed"]]
    result = {"N": args.N, "s": args.s, "l": args.l, "k": args.k,
              "t": rat_to_str(t0), "perturbed": args.perturb,
              "checks": checks, "all_passed": not failed, "failed": failed}
    _summary("hankel-verify N=%d s=%d: %d/%d checks passed%s"
             % (args.N, args.s, len(checks) - len(failed), len(checks),
                "" if not failed else " (failed: %s)" % ", ".join(failed)))
    return result, (EXIT_OK if not failed else EXIT_IDENTITY_FAILED)


# ---------------------------------------------------------------------------
# argument parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="cuemoments",
        description="Joint moments of characteristic-polynomial derivatives: "
                    "exact rational values, Hankel/Painlevé verification, "
                    "Monte Carlo and quadrature cross-checks.")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format (default json)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("leading-coeff",
                       help="limiting joint moment as an exact rational "
                            "function of s")
    p.add_argument("--orders", required=True,
                   help="comma-separated derivative orders n1,n2,...")
    p.add_argument("--exponents", required=True,
                   help="comma-separated even exponents 2h1,2h2,...")
    p.add_argument("--variant", choices=("V", "Z"), required=True,
                   help="Z: rescaled real-on-circle polynomial; V: bare "
                        "polynomial (single order, exponent 2, via the "
                        "closed-form product)")
    p.add_argument("--eval-s", help="evaluate the rational function at s")
    p.add_argument("--with-constant", action="store_true",
                   help="also multiply the evaluation by G(s+1)^2/G(2s+1) "
                        "and the 2^{-sum 2h_j n_j} prefactor")
    p.set_defaults(func=cmd_leading_coeff)

    p = sub.add_parser("finite-moment",
                       help="finite-size joint moment ratio, exact in s")
    p.add_argument("--N", type=int, required=True, help="matrix size")
    p.add_argument("--orders", required=True)
    p.add_argument("--exponents", required=True,
                   help="even integers; '_' marks an exponent absorbed into "
                        "the weight parameter s (0-th derivative slot)")
    p.add_argument("--variant", choices=("V", "Z"), required=True)
    p.add_argument("--eval-s")
    p.set_defaults(func=cmd_finite_moment)

    p = sub.add_parser("mc-estimate",
                       help="Monte Carlo estimate of a joint moment ratio "
                            "(any positive real exponents)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--orders", required=True)
    p.add_argument("--exponents", required=True)
    p.add_argument("--variant", choices=("V", "Z"), default="Z")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: CUEMOMENTS_SEED env var or 0)")
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--proposal-scale", type=float, default=1.0)
    p.set_defaults(func=cmd_mc_estimate)

    p = sub.add_parser("quadrature",
                       help="tensor Gauss-Legendre expectation of a "
                            "polynomial under the heavy-tailed ensemble")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--poly", required=True,
                   help="polynomial in x1..xN, e.g. \"x1^2\" or "
                        "\"x1^2*x2 + 1/2*x1\"")
    p.add_argument("--nodes", type=int, default=64,
                   help="quadrature nodes per dimension")
    p.set_defaults(func=cmd_quadrature)

    p = sub.add_parser("painleve",
                       help="verify the nonlinear ODE satisfied by the "
                            "log-derivative tau function")
    p.add_argument("--mode", choices=("p5-finite", "p3-limit"), required=True)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--series-order", type=int, default=12)
    p.set_defaults(func=cmd_painleve)

    p = sub.add_parser("hankel-verify",
                       help="run the exact Hankel-determinant identity suite")
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--t", default="1", help="evaluation point (rational)")
    p.add_argument("--perturb", action="store_true",
                   help="negative control: perturb a recursion matrix entry")
    p.set_defaults(func=cmd_hankel_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        if args.command == "mc-estimate" and args.seed is None:
            args.seed = _default_seed()
        out = args.func(args, started)
    except CliError as exc:
        json.dump({"error": str(exc), "exit_code": exc.code}, sys.stdout)
        sys.stdout.write("\n")
        _summary("error: %s" % exc)
        return exc.code
    if len(out) == 3:
        result, code, seeds = out
    else:
        result, code = out
        seeds = None
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "format") and v is not None}
    _emit(args.command, params, result, seeds, started, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
