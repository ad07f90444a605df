"""Special functions at controlled precision (modified Bessel I, Barnes G),
the explicit limiting characteristic function phi_s as an exact power series,
tau functions at finite size (exact rational in t) and in the limit (series),
residual evaluators for the finite-size Painleve V and sigma-Painleve III'
equations, and fractional moments via the cosine-integral identity.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import (Poly, PowerSeries, RationalFunction, DEFAULT_SERIES_ORDER,
                    series_logderiv)

EULER_GAMMA = 0.5772156649015328606


def bessel_I(nu, z, digits=12):
    """Modified Bessel function I_nu(z) by its power series, summed until the
    truncation term is below the requested relative precision."""
    if nu < 0:
        raise ValueError("nu >= 0 required")
    if digits > 15:
        raise ValueError("precision unachievable in double precision: %d digits" % digits)
    if z == 0.0:
        return 1.0 if nu == 0 else 0.0
    tol = 10.0 ** (-digits - 2)
    half = z / 2.0
    term = half ** nu / math.factorial(nu)
    terms = [term]
    m = 0
    while True:
        m += 1
        term = term * half * half / (m * (m + nu))
        terms.append(term)
        if abs(term) <= tol * abs(math.fsum(terms)):
            break
        if m > 10000:
            raise ValueError("precision unachievable: series did not settle")
    return math.fsum(terms)


def barnes_G_int(n):
    """Exact Barnes G at positive integer argument: G(1)=1, G(k+1)=(k-1)!G(k)."""
    if n < 1:
        raise ValueError("positive integer required")
    g = 1
    for k in range(1, n):
        g *= math.factorial(k - 1)
    return g


def barnes_G(z):
    """Barnes G-function for z > 0: exact recurrence at integers, otherwise the
    Weierstrass-type product for G(1+w) with an Euler-Maclaurin tail estimate."""
    if z <= 0:
        raise ValueError("z > 0 required")
    if abs(z - round(z)) < 1e-13:
        return float(barnes_G_int(int(round(z))))
    # reduce to G(1+w) with w in (0,1) via G(z+1) = Gamma(z) G(z)
    w = z - 1.0
    gamma_factor = 1.0
    while w > 1.0:
        w -= 1.0
        gamma_factor *= math.gamma(w + 1.0)
    J = 200000
    log_g = (w / 2.0) * math.log(2.0 * math.pi) - (w + w * w * (1.0 + EULER_GAMMA)) / 2.0
    acc = 0.0
    for j in range(1, J + 1):
        acc += j * math.log1p(w / j) - w + w * w / (2.0 * j)
    log_g += acc
    # tail: sum_{j>J} sum_{m>=3} (-1)^{m+1} w^m / (m j^{m-1})
    for m in range(3, 11):
        k = m - 1
        zeta_tail = J ** (1 - k) / (k - 1) + J ** (-k) / 2.0
        log_g += (-1) ** (m + 1) * w ** m / m * zeta_tail
    return gamma_factor * math.exp(log_g)


def _g_series(nu, order):
    """g_nu(t) = sum_m (2t)^m / (m! (m+nu)!), truncated rational series."""
    cs = []
    for m in range(order + 1):
        cs.append(Fraction(2 ** m, math.factorial(m) * math.factorial(m + nu)))
    return PowerSeries(cs, order)


def _det_series(mat):
    """Determinant of a small matrix of PowerSeries by permutation expansion."""
    import itertools
    n = len(mat)
    total = None
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = mat[0][perm[0]]
        for i in range(1, n):
            term = term * mat[i][perm[i]]
        if inv % 2:
            term = -term
        total = term if total is None else total + term
    return total


def phi_series(s, K=DEFAULT_SERIES_ORDER):
    """Characteristic function phi_s(t) of the limiting linear statistic, as an
    exact rational power series in t (t >= 0).

    Assembled as prefactor * e^{-t} * det[g_{j+k+1}(t)]_{0<=j,k<=s-1}: each
    Bessel entry I_{j+k+1}(2 sqrt(2t)) equals (2t)^{(j+k+1)/2} g_{j+k+1}(t), and
    every permutation term of the s x s determinant carries the same total power
    (2t)^{s^2/2}, so the half-integer powers cancel structurally against the
    normalization and only integer powers remain.
    """
    if s < 1:
        raise ValueError("s >= 1 required")
    mat = [[_g_series(j + k + 1, K) for k in range(s)] for j in range(s)]
    det = _det_series(mat)
    pref = Fraction((-1) ** (s * (s - 1) // 2) * barnes_G_int(2 * s + 1),
                    barnes_G_int(s + 1) ** 2)
    exp_neg_t = PowerSeries([Fraction((-1) ** m, math.factorial(m))
                             for m in range(K + 1)], K)
    phi = pref * det * exp_neg_t
    assert phi[0] == 1, "normalization failed: phi(0) != 1"
    return phi


@dataclass
class TauFunction:
    """t * d/dt log of a characteristic function: either an exact rational
    function of t (finite size N) or a truncated power series (limit case)."""
    kind: str              # "exact" or "series"
    s: int
    N: object              # integer or "limit"
    ratfun: object = None  # RationalFunction of t when kind == "exact"
    series: object = None  # PowerSeries when kind == "series"


def tau_limit(s, K=DEFAULT_SERIES_ORDER):
    """tau^{(s)}(t) = t d/dt log phi_s(t/2), as a series."""
    phi = phi_series(s, K)
    tau = series_logderiv(phi.scale_arg(Fraction(1, 2)))
    assert tau[0] == 0 and tau[1] == 0
    return TauFunction(kind="series", s=s, N="limit", series=tau)


def _mul_t(f):
    return PowerSeries([Fraction(0)] + list(f.coeffs), f.order + 1)


def sigma_p3_residual(tau):
    """(t tau'')^2 + 4t(tau')^3 - (4s^2+4tau)(tau')^2 - t tau' + tau.

    Vanishes identically for the limiting tau function.
    """
    s = tau.s
    if tau.kind == "series":
        f = tau.series
        d1 = f.derivative()
        d2 = d1.derivative()
        td2 = _mul_t(d2)
        res = (td2 * td2 + _mul_t(d1 * d1 * d1) * 4
               - (4 * s * s + 4 * f) * d1 * d1 - _mul_t(d1) + f)
        return res
    f = tau.ratfun
    d1 = f.derivative()
    d2 = d1.derivative()
    t = RationalFunction(Poly((0, 1)))
    return (t * d2) * (t * d2) + 4 * t * d1 * d1 * d1 \
        - (RationalFunction.const(4 * s * s) + 4 * f) * d1 * d1 - t * d1 + f


def tau_finiteN(N, s):
    """Finite-size tau function, exact rational in t.

    With P the polynomial part of the size-N Hankel determinant of the theta
    family, tau_N(t) = -t/2 + t P1'(t)/P1(t) where P1(t) = P(t/(2N)).
    """
    from .hankel import hankel_det
    H = hankel_det(N, s, ())
    P = H.value.poly
    P1 = P.scale_arg(Fraction(1, 2 * N))
    t_poly = Poly((0, 1))
    num = t_poly * P1.derivative() - Fraction(1, 2) * t_poly * P1
    return TauFunction(kind="exact", s=s, N=N, ratfun=RationalFunction(num, P1))


def painleve5_residual(tau, N=None, s=None):
    """(t tau'')^2 + 4t(tau')^3 - (4s^2+4tau+t^2/N^2)(tau')^2
    - t(1+2s/N-2tau/N^2) tau' + (1+2s/N-tau/N^2) tau, exact.

    Identically zero for tau_finiteN(N, s).
    """
    if N is None:
        N = tau.N
    if s is None:
        s = tau.s
    f = tau.ratfun
    d1 = f.derivative()
    d2 = d1.derivative()
    t = RationalFunction(Poly((0, 1)))
    n2 = Fraction(1, N * N)
    sn = Fraction(2 * s, N)
    res = (t * d2) * (t * d2) + 4 * t * d1 * d1 * d1
    res = res - (RationalFunction.const(4 * s * s) + 4 * f + n2 * t * t) * d1 * d1
    res = res - t * (RationalFunction.const(1 + sn) - 2 * n2 * f) * d1
    res = res + (RationalFunction.const(1 + sn) - n2 * f) * f
    return res


def phi_eval(s, t, K=80):
    """Float evaluation of phi_s at t >= 0 via the g-series determinant."""
    if t < 0:
        raise ValueError("t >= 0 required")
    n = s

    def g(nu):
        terms = []
        term = 1.0 / math.factorial(nu)
        m = 0
        while True:
            terms.append(term)
            m += 1
            term = term * 2.0 * t / (m * (m + nu))
            if m > 8 and abs(term) < 1e-18 * max(1.0, abs(math.fsum(terms))):
                break
            if m > 500:
                break
        return math.fsum(terms)

    mat = [[g(j + k + 1) for k in range(n)] for j in range(n)]
    import itertools
    det = 0.0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1.0) ** inv
        for i in range(n):
            term *= mat[i][perm[i]]
        det += term
    pref = (-1) ** (s * (s - 1) // 2) * barnes_G_int(2 * s + 1) / barnes_G_int(s + 1) ** 2
    return pref * math.exp(-t) * det


def _adaptive_simpson(f, a, b, tol, depth=40):
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        if depth <= 0 or abs(left + right - whole) < 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (rec(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = simpson(fa, fm, fb, a, b)
    return rec(a, b, fa, fm, fb, whole, tol, depth)


def _osc_cos_tail(p, T):
    """int_T^inf cos(t) t^{-p-1} dt by four-fold integration by parts."""
    g0 = T ** (-p - 1)
    g1 = -(p + 1) * T ** (-p - 2)
    g2 = (p + 1) * (p + 2) * T ** (-p - 3)
    g3 = -(p + 1) * (p + 2) * (p + 3) * T ** (-p - 4)
    return (-math.sin(T) * g0 - math.cos(T) * g1
            + math.sin(T) * g2 + math.cos(T) * g3)


def _cos_normalizer(p, y=1.0):
    """int_0^inf (1 - cos(y t)) / t^{p+1} dt, numerically.

    [0,1]: exact alternating series; [1,T]: adaptive Simpson; tail: analytic
    power part plus the integration-by-parts estimate of the cosine part.
    """
    head = 0.0
    for k in range(1, 40):
        head += (-1.0) ** (k + 1) * y ** (2 * k) / (math.factorial(2 * k) * (2 * k - p))
    T = 200.0

    def f(t):
        return (1.0 - math.cos(y * t)) / t ** (p + 1)

    mid = _adaptive_simpson(f, 1.0, T, 1e-12)
    tail = T ** (-p) / p - y ** p * _osc_cos_tail(p, y * T)
    return head + mid + tail


def fractional_moment_q1(p, s, tol=1e-9):
    """E[|q_1(s)|^p] for 0 < p < 2 via
    C_p * int_0^inf (1 - phi_s(t)) / t^{p+1} dt, with C_p fixed numerically by
    the identity |y|^p = C_p int (1 - cos(t y)) / t^{p+1} dt at y = 1."""
    if not (0.0 < p < 2.0):
        raise ValueError("p in (0,2) required")
    C_p = 1.0 / _cos_normalizer(p)
    # [0,1] via exact series coefficients of phi
    phi = phi_series(s, 40)
    head = 0.0
    for k in range(2, 41):
        head += -float(phi[k]) / (k - p)
    T = 60.0

    def f(t):
        return (1.0 - phi_eval(s, t)) / t ** (p + 1)

    mid = _adaptive_simpson(f, 1.0, T, tol)
    tail = T ** (-p) / p  # phi is exponentially negligible beyond T
    return C_p * (head + mid + tail)
