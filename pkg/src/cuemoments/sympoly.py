"""Sparse multivariate polynomials over exact rationals, keyed by dense
exponent tuples of a fixed arity.

Used as integrands over eigenvalue space; arity is capped at 8 by design.
"""

from fractions import Fraction

MAX_ARITY = 8


class SymPoly:
    """Multivariate polynomial: dict mapping exponent tuple -> Fraction.

    All keys share the same length (the arity); zero coefficients are never
    stored. Instances are treated as immutable.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms=None):
        if arity > MAX_ARITY:
            raise ValueError("arity %d exceeds supported maximum %d" % (arity, MAX_ARITY))
        self.arity = arity
        clean = {}
        if terms:
            for expo, coeff in terms.items():
                if len(expo) != arity:
                    raise ValueError("exponent tuple %r does not have arity %d" % (expo, arity))
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(expo)] = c
        self.terms = clean

    @staticmethod
    def const(arity, c):
        return SymPoly(arity, {(0,) * arity: Fraction(c)})

    @staticmethod
    def variable(arity, i):
        expo = [0] * arity
        expo[i] = 1
        return SymPoly(arity, {tuple(expo): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __neg__(self):
        return SymPoly(self.arity, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, SymPoly):
            other = SymPoly.const(self.arity, other)
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, Fraction(0)) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return SymPoly(self.arity, out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, SymPoly):
            other = SymPoly.const(self.arity, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SymPoly):
            c = Fraction(other)
            if c == 0:
                return SymPoly(self.arity)
            return SymPoly(self.arity, {e: v * c for e, v in self.terms.items()})
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(key, Fraction(0)) + c1 * c2
                if v == 0:
                    out.pop(key, None)
                else:
                    out[key] = v
        return SymPoly(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = SymPoly.const(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def eval(self, point):
        if len(point) != self.arity:
            raise ValueError("point arity mismatch")
        total = Fraction(0) if not any(isinstance(p, float) for p in point) else 0.0
        for e, c in self.terms.items():
            term = c if not isinstance(total, float) else float(c)
            for x, k in zip(point, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def permute(self, perm):
        """Apply a coordinate permutation: x_i -> x_{perm[i]}."""
        out = {}
        for e, c in self.terms.items():
            key = [0] * self.arity
            for i, k in enumerate(e):
                key[perm[i]] = k
            out[tuple(key)] = out.get(tuple(key), Fraction(0)) + c
        return SymPoly(self.arity, out)

    def negate_vars(self):
        """x -> -x on all coordinates."""
        out = {}
        for e, c in self.terms.items():
            sign = -1 if sum(e) % 2 else 1
            out[e] = sign * c
        return SymPoly(self.arity, out)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __repr__(self):
        if not self.terms:
            return "SymPoly(0)"
        parts = []
        for e in sorted(self.terms):
            parts.append("%s*x^%s" % (self.terms[e], list(e)))
        return "SymPoly(" + " + ".join(parts) + ")"
