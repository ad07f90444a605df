"""Exact expectations over the heavy-tailed (Cauchy-type) eigenvalue
measure with density proportional to prod (1+x_i^2)^{-(s+m)} * Delta^2 on
R^m, as rational functions of the parameter s.

Provides the finite-sum limiting-moment formula, finite-size joint moments,
and several independent closed-form oracles used for cross-validation.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import Poly, RationalFunction
from .sympoly import SymPoly
from .symfunc import elementary, vandermonde_squared, xi_poly, v_variant_integrand

MAX_EXACT_ARITY = 7

S = Poly.x()


@dataclass(frozen=True)
class MomentSpec:
    """Joint-moment query: derivative orders (strictly decreasing), exponents
    2h_j, variant "V" or "Z", and matrix size N (integer) or "limit"."""
    orders: tuple
    exponents: tuple
    variant: str
    size: object

    def __post_init__(self):
        if len(self.orders) != len(self.exponents):
            raise ValueError("orders and exponents must have equal length")
        if self.variant not in ("V", "Z"):
            raise ValueError("variant must be 'V' or 'Z'")
        if list(self.orders) != sorted(self.orders, reverse=True) or \
                len(set(self.orders)) != len(self.orders):
            raise ValueError("orders must be strictly decreasing")


def _lin_factor(j, m):
    """The linear factor d_j = 2s + (2m - 1 - 2j) appearing in weight moments."""
    return Poly((2 * m - 1 - 2 * j, 2))


def weight_moment(r, m):
    """Normalized one-dimensional weight moment
    int x^r (1+x^2)^{-(s+m)} dx / int (1+x^2)^{-(s+m)} dx
    as a rational function of s. Zero for odd r;
    mu_{2p} = prod_{j=1}^{p} (2j-1)/(2s+2m-1-2j).
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r % 2:
        return RationalFunction(Poly())
    p = r // 2
    num = 1
    den = Poly.const(1)
    for j in range(1, p + 1):
        num *= 2 * j - 1
        den = den * _lin_factor(j, m)
    return RationalFunction(Poly.const(num), den)


def _double_factorial(k):
    # (2p-1)!! for k = 2p
    out = 1
    for j in range(1, k, 2):
        out *= j
    return out


def _unnorm_factored(Q, m):
    """<Q> with each monomial factored into one-dimensional weight moments.

    Returns (numerator Poly in s, tuple of exponents E_j for the linear
    factors d_j = 2s+2m-1-2j, j = 1..len(E)), representing
    <Q> = numerator / prod_j d_j^{E_j} up to the common normalization that
    cancels in all ratios taken by callers.
    """
    agg = {}
    for expo, coeff in Q.terms.items():
        if any(x % 2 for x in expo):
            continue
        key = tuple(sorted((x // 2 for x in expo), reverse=True))
        agg[key] = agg.get(key, Fraction(0)) + coeff
    agg = {k: v for k, v in agg.items() if v != 0}
    if not agg:
        return Poly(), ()
    pmax = max(k[0] for k in agg)
    E = [0] * pmax
    eps_of = {}
    for key in agg:
        eps = tuple(sum(1 for p in key if p >= j) for j in range(1, pmax + 1))
        eps_of[key] = eps
        for j in range(pmax):
            E[j] = max(E[j], eps[j])
    num = Poly()
    for key, coeff in agg.items():
        df = 1
        for p in key:
            df *= _double_factorial(2 * p)
        term = Poly.const(coeff * df)
        eps = eps_of[key]
        for j in range(pmax):
            for _ in range(E[j] - eps[j]):
                term = term * _lin_factor(j + 1, m)
        num = num + term
    return num, tuple(E)


def hp_expectation(P, m):
    """E_m^{(s)}[P] = <P * Delta^2> / <Delta^2> as an exact RationalFunction."""
    if m > MAX_EXACT_ARITY:
        raise ValueError("arity %d exceeds exact-engine cap %d" % (m, MAX_EXACT_ARITY))
    if P.arity != m:
        raise ValueError("polynomial arity does not match m")
    delta2 = vandermonde_squared(m)
    n1, f1 = _unnorm_factored(P * delta2, m)
    n2, f2 = _unnorm_factored(delta2, m)
    if n2.is_zero():
        raise ZeroDivisionError("degenerate normalization")
    num, den = n1, n2
    k = max(len(f1), len(f2))
    f1 = list(f1) + [0] * (k - len(f1))
    f2 = list(f2) + [0] * (k - len(f2))
    for j in range(k):
        net = f1[j] - f2[j]
        fac = _lin_factor(j + 1, m)
        for _ in range(abs(net)):
            if net > 0:
                den = den * fac
            else:
                num = num * fac
    return RationalFunction(num, den)


@functools.lru_cache(maxsize=None)
def _elem_product_expectation(orders, exponents, m):
    P = SymPoly.const(m, 1)
    for n, two_h in zip(orders, exponents):
        P = P * elementary(n, m) ** two_h
    return hp_expectation(P, m)


def limiting_moment(orders, exponents):
    """E[prod Y_{n_j}^{2h_j}] for the limiting elementary-symmetric variables,
    via the finite alternating sum over arities n_1..L with L = sum 2h_j n_j.
    """
    orders = tuple(orders)
    exponents = tuple(exponents)
    if any(e <= 0 or e % 2 for e in exponents):
        raise ValueError("exponents must be positive even integers")
    if not orders or orders[0] < 1:
        raise ValueError("leading order must be >= 1")
    L = sum(n * e for n, e in zip(orders, exponents))
    if L > MAX_EXACT_ARITY:
        raise ValueError("L = %d exceeds arity bound %d" % (L, MAX_EXACT_ARITY))
    pref = Fraction(1, math.factorial(L))
    for n, e in zip(orders, exponents):
        pref *= Fraction(math.factorial(n)) ** e
    total = RationalFunction(Poly())
    n1 = orders[0]
    for m in range(n1, L + 1):
        sign = (-1) ** (m + L)
        term = _elem_product_expectation(orders, exponents, m)
        total = total + (sign * math.comb(L, m)) * RationalFunction.const(1) * term
    return RationalFunction.const(pref) * total


def finite_joint_moment(spec):
    """Finite-size joint moment ratio of Prop-type expansion:
    2^{-sum 2h_j n_j} * E_N^{(s)}[ product of |.|^{2h_j} integrands ],
    exact in s. Z-variant uses Xi polynomials directly; V-variant uses the
    real-expanded integrand.
    """
    N = spec.size
    if N == "limit":
        raise ValueError("use limiting_moment for the limit case")
    if N > MAX_EXACT_ARITY:
        raise ValueError("N exceeds exact-engine arity cap")
    if any(e % 2 for e in spec.exponents):
        raise ValueError("odd exponent unsupported in exact engine; use Monte Carlo")
    L = sum(n * e for n, e in zip(spec.orders, spec.exponents))
    if spec.variant == "Z":
        P = SymPoly.const(N, 1)
        for n, two_h in zip(spec.orders, spec.exponents):
            P = P * xi_poly(n, N).poly ** two_h
    else:
        P = v_variant_integrand(spec.orders, spec.exponents, N)
    return RationalFunction.const(Fraction(1, 2 ** L)) * hp_expectation(P, N)


def _poly_prod(factors):
    out = Poly.const(1)
    for f in factors:
        out = out * f
    return out


def oracle_second_moment_Y(n):
    """Closed-form second moment of Y_n: a double binomial sum with Gamma
    ratios expanded as finite products of linear factors in s."""
    if n < 1:
        raise ValueError("n >= 1 required")
    # prefactor 2^{2n} (2s-1) / prod_{l=1}^n (2s-2+l)^2
    pref_num = Poly.const(2 ** (2 * n)) * Poly((-1, 2))
    pref_den = _poly_prod([Poly((l - 2, 2)) for l in range(1, n + 1)] * 2)
    total = RationalFunction(Poly())
    for i in range(n + 1):
        for j in range(n + 1):
            c = Fraction(math.comb(n, i) * math.comb(n, j), (-2) ** (2 * n - i - j))
            num = Poly.const(c)
            # Gamma(s+i)/Gamma(s) * Gamma(s+j)/Gamma(s)
            for l in range(i):
                num = num * Poly((l, 1))
            for l in range(j):
                num = num * Poly((l, 1))
            # Gamma(2s-1+n+1)/Gamma(2s-1+i+1)-style tails as products
            for l in range(i + 1, n + 1):
                num = num * Poly((l - 2, 2))
            for l in range(j + 1, n + 1):
                num = num * Poly((l - 2, 2))
            den = Poly((i + j - 1, 2))  # 2s-1+i+j
            total = total + RationalFunction(num, den)
    return RationalFunction(pref_num, pref_den) * total


def oracle_second_moment_V(n):
    """Closed-form second moment for the V-variant:
    2^{2n} (2s-1)/(2s-1+2n) * prod_{l=1}^n ((l+s-1)/(l+2s-2))^2."""
    if n < 0:
        raise ValueError("n >= 0 required")
    if n == 0:
        return RationalFunction.const(1)
    num = Poly.const(2 ** (2 * n)) * Poly((-1, 2))
    den = Poly((2 * n - 1, 2))
    for l in range(1, n + 1):
        num = num * Poly((l - 1, 1)) * Poly((l - 1, 1))
        den = den * Poly((l - 2, 2)) * Poly((l - 2, 2))
    return RationalFunction(num, den)


def oracle_finiteN_F20(N):
    """Closed-form finite-size value of the second-derivative joint moment
    ratio (quartic in N over linear factors of s), including the 1/16."""
    if N < 1:
        raise ValueError("N >= 1 required")
    a = Poly((3, 2))   # 2s+3
    b = Poly((-1, 2))  # 2s-1
    c = Poly((1, 2))   # 2s+1
    term1 = RationalFunction(Poly.const(N ** 4), a * b)
    term2 = RationalFunction(Poly.const(4 * N ** 3) * Poly((0, 1)), a * b)
    cubic = Poly((-1, 0, 1, 2))  # 2s^3 + s^2 - 1
    term3 = RationalFunction(Poly.const(4 * N ** 2) * cubic, a * b * c)
    term4 = RationalFunction(Poly.const(-8 * N) * Poly((0, 1)), a * b * c)
    return RationalFunction.const(Fraction(1, 16)) * (term1 + term2 + term3 + term4)


def cauchy_det_leading_coeff(n, m, s):
    """Leading coefficient built from a Cauchy determinant:
    n! m! / ((s-1+n)! (s-1+m)!) * prod_{j=2}^s (s-j)!^{-2} * det[1/(p_i+q_j+1)]
    with p_1 = s-1+n, q_1 = s-1+m, p_i = q_i = s-i for i >= 2; the determinant
    is evaluated by the exact product formula."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    p = [s - 1 + n] + [s - i for i in range(2, s + 1)]
    q = [s - 1 + m] + [s - i for i in range(2, s + 1)]
    det = Fraction(1)
    for i in range(s):
        for j in range(i + 1, s):
            det *= Fraction((p[j] - p[i]) * (q[j] - q[i]))
    for i in range(s):
        for j in range(s):
            det /= (p[i] + q[j] + 1)
    pref = Fraction(math.factorial(n) * math.factorial(m),
                    math.factorial(s - 1 + n) * math.factorial(s - 1 + m))
    for j in range(2, s + 1):
        pref /= Fraction(math.factorial(s - j)) ** 2
    return pref * det


def cauchy_det_bruteforce(n, m, s):
    """Direct determinant evaluation of det[1/(p_i+q_j+1)] (test oracle)."""
    import itertools
    p = [s - 1 + n] + [s - i for i in range(2, s + 1)]
    q = [s - 1 + m] + [s - i for i in range(2, s + 1)]
    total = Fraction(0)
    for perm in itertools.permutations(range(s)):
        sign = 1
        seen = list(perm)
        # count inversions for the permutation sign
        inv = sum(1 for i in range(s) for j in range(i + 1, s) if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        term = Fraction(sign)
        for i in range(s):
            term /= (p[i] + q[perm[i]] + 1)
        total += term
    return total


def keating_snaith_constant(s):
    """G(s+1)^2 / G(2s+1): exact Fraction for integer s via the recurrence
    G(z+1) = Gamma(z) G(z); float via the product formula otherwise."""
    if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
        s = int(s)
        if s <= 0:
            raise ValueError("s > 0 required")
        from .painleve import barnes_G_int
        return Fraction(barnes_G_int(s + 1)) ** 2 / Fraction(barnes_G_int(2 * s + 1))
    from .painleve import barnes_G
    sf = float(s)
    if sf <= 0:
        raise ValueError("s > 0 required")
    return barnes_G(sf + 1.0) ** 2 / barnes_G(2.0 * sf + 1.0)
