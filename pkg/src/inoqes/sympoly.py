"""Exact algebra of symmetric polynomials in the monomial-symmetric basis.

Polynomials live in z_1..z_N.  Internally everything expands to plain
dense-exponent monomials (dict: exponent tuple -> coefficient) and is
re-collected into S_N orbit sums; N is desk scale (<= 4) so orbits are tiny.

Coefficients come from a pluggable ring: exact rationals, exact rationals
extended by symbols e1, e2 (with e3 = -e1-e2 eliminated eagerly), or complex
floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import LengthExceededError, NonCancellationError

# ---------------------------------------------------------------------------
# Partitions


def normalize_partition(parts):
    """Canonical partition: non-increasing tuple without trailing zeros."""
    p = tuple(sorted((int(t) for t in parts), reverse=True))
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def pad(partition, n_vars):
    return tuple(partition) + (0,) * (n_vars - len(partition))


def partitions_in_box(max_part, n_vars):
    """All partitions with parts <= max_part, length <= n_vars,
    in reverse-lexicographic order of the padded exponent vectors."""
    out = []

    def rec(prefix, bound):
        if len(prefix) == n_vars:
            out.append(normalize_partition(prefix))
            return
        for t in range(0, bound + 1):
            rec(prefix + [t], t)

    def rec_top(bound):
        for t in range(0, bound + 1):
            rec([t], t)

    rec_top(max_part)
    out = sorted(set(out), key=lambda lam: tuple(reversed(pad(lam, n_vars))))
    return out


def msym_expand(lam, n_vars):
    """Distinct S_N-orbit of the padded exponent vector of lam."""
    lam = normalize_partition(lam)
    if len(lam) > n_vars:
        raise LengthExceededError(f"partition {lam} longer than n_vars={n_vars}")
    return sorted(set(itertools.permutations(pad(lam, n_vars))))


def orbit_size(lam, n_vars):
    lam = pad(normalize_partition(lam), n_vars)
    denom = 1
    for _, grp in itertools.groupby(sorted(lam)):
        denom *= math.factorial(len(list(grp)))
    return math.factorial(n_vars) // denom


# ---------------------------------------------------------------------------
# Coefficient rings


class SymE:
    """Polynomial in e1, e2 over Q; e3 is always eliminated as -e1-e2."""

    __slots__ = ("c",)

    def __init__(self, c=None):
        self.c = {k: v for k, v in (c or {}).items() if v != 0}

    @staticmethod
    def const(v):
        v = Fraction(v)
        return SymE({(0, 0): v} if v else {})

    @staticmethod
    def gen(i):
        """e_i for i in {1,2,3}."""
        if i == 1:
            return SymE({(1, 0): Fraction(1)})
        if i == 2:
            return SymE({(0, 1): Fraction(1)})
        if i == 3:
            return SymE({(1, 0): Fraction(-1), (0, 1): Fraction(-1)})
        raise ValueError("e index must be 1..3")

    def _coerced(self, other):
        if isinstance(other, SymE):
            return other
        if isinstance(other, (int, Fraction)):
            return SymE.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerced(other)
        if o is NotImplemented:
            return NotImplemented
        c = dict(self.c)
        for k, v in o.c.items():
            nv = c.get(k, Fraction(0)) + v
            if nv:
                c[k] = nv
            else:
                c.pop(k, None)
        return SymE(c)

    __radd__ = __add__

    def __neg__(self):
        return SymE({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        o = self._coerced(other)
        return NotImplemented if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerced(other)
        if o is NotImplemented:
            return NotImplemented
        c = {}
        for (i1, j1), v1 in self.c.items():
            for (i2, j2), v2 in o.c.items():
                k = (i1 + i2, j1 + j2)
                nv = c.get(k, Fraction(0)) + v1 * v2
                if nv:
                    c[k] = nv
                else:
                    c.pop(k, None)
        return SymE(c)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("SymE power must be a non-negative integer")
        r = SymE.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        o = self._coerced(other)
        return NotImplemented if o is NotImplemented else self.c == o.c

    def is_zero(self):
        return not self.c

    def subs(self, e1, e2):
        """Evaluate at concrete e1, e2 (Fraction or complex)."""
        tot = 0
        for (i, j), v in self.c.items():
            tot = tot + v * e1**i * e2**j
        return tot

    def mass(self):
        return float(sum(abs(v) for v in self.c.values()))

    def __repr__(self):
        if not self.c:
            return "SymE(0)"
        bits = [f"{v}*e1^{i}*e2^{j}" for (i, j), v in sorted(self.c.items())]
        return "SymE(" + " + ".join(bits) + ")"


@dataclass(frozen=True)
class RationalRing:
    name: str = "rational"

    zero = Fraction(0)
    one = Fraction(1)
    e = None
    exact = True

    def coerce(self, x):
        return Fraction(x)

    def is_zero(self, x):
        return x == 0

    def mass(self, x):
        return abs(float(x))


class SymbolicERing:
    """Exact ring Q[e1,e2] with e3 = -e1 - e2."""

    name = "symbolic-e"
    exact = True

    def __init__(self):
        self.zero = SymE.const(0)
        self.one = SymE.const(1)
        self.e = (SymE.gen(1), SymE.gen(2), SymE.gen(3))

    def coerce(self, x):
        if isinstance(x, SymE):
            return x
        return SymE.const(x)

    def is_zero(self, x):
        return x.is_zero() if isinstance(x, SymE) else x == 0

    def mass(self, x):
        return x.mass() if isinstance(x, SymE) else abs(float(x))


class ComplexRing:
    """Floating ring with concrete half-period values."""

    name = "complex"
    exact = False

    def __init__(self, e1, e2, e3):
        self.zero = 0j
        self.one = 1 + 0j
        self.e = (complex(e1), complex(e2), complex(e3))

    def coerce(self, x):
        return complex(x)

    def is_zero(self, x):
        return x == 0

    def mass(self, x):
        return abs(x)


RING_Q = RationalRing()


# ---------------------------------------------------------------------------
# SymPoly and plain-monomial helpers


class SymPoly:
    """Symmetric polynomial stored as {partition: coefficient of m_lambda}."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars, terms=None):
        self.n_vars = n_vars
        self.terms = dict(terms or {})

    @classmethod
    def monomial(cls, lam, n_vars, coeff=1):
        lam = normalize_partition(lam)
        if len(lam) > n_vars:
            raise LengthExceededError(f"partition {lam} longer than n_vars={n_vars}")
        return cls(n_vars, {lam: coeff})

    def expand(self):
        """Plain dense dict: exponent tuple -> coefficient."""
        plain = {}
        for lam, c in self.terms.items():
            for v in msym_expand(lam, self.n_vars):
                plain[v] = plain.get(v, 0) + c
        return plain

    @classmethod
    def collect(cls, plain, n_vars, ring):
        """Re-collect a plain dict into orbit sums, validating symmetry."""
        exact = getattr(ring, "exact", True)
        scale = max((ring.mass(c) for c in plain.values()), default=0.0) + 1e-300

        def same(x, y):
            d = x - y
            return ring.is_zero(d) if exact else ring.mass(d) <= 1e-9 * scale

        seen = {}
        for v, c in plain.items():
            if ring.is_zero(c):
                continue
            lam = normalize_partition(v)
            if lam in seen:
                if not same(seen[lam], c):
                    raise NonCancellationError(
                        f"orbit of {lam} has mismatched coefficients; input not symmetric"
                    )
            else:
                seen[lam] = c
        # every orbit member must actually be present
        for lam, c in seen.items():
            for v in msym_expand(lam, n_vars):
                if not same(plain.get(v, ring.zero), c):
                    raise NonCancellationError(
                        f"orbit of {lam} incomplete; input not symmetric"
                    )
        return cls(n_vars, seen)

    def eval(self, z):
        """Evaluate at a point z (len n_vars)."""
        tot = 0
        for v, c in self.expand().items():
            term = c
            for zi, ei in zip(z, v):
                term = term * zi**ei
            tot = tot + term
        return tot

    def map_coeff(self, fn):
        return SymPoly(self.n_vars, {k: fn(v) for k, v in self.terms.items()})

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return SymPoly(self.n_vars, t)

    def scale(self, c):
        return SymPoly(self.n_vars, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SymPoly) or self.n_vars != other.n_vars:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            a = self.terms.get(k, 0)
            b = other.terms.get(k, 0)
            if isinstance(a, SymE) or isinstance(b, SymE):
                if not isinstance(a, SymE):
                    a = SymE.const(a)
                if not isinstance(b, SymE):
                    b = SymE.const(b)
                if a != b:
                    return False
            elif a != b:
                return False
        return True

    def __repr__(self):
        return f"SymPoly(n={self.n_vars}, {self.terms!r})"


def plain_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


def plain_scale(a, c):
    return {k: c * v for k, v in a.items()}


def plain_mul(a, b, ring):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            nv = out.get(k, ring.zero) + va * vb
            out[k] = nv
    return out


def apply_gauged_term(c_coeffs, order, f: SymPoly, ring):
    """sum_j c(z_j) (d/dz_j)^order applied to symmetric f; c of degree <= 3.

    c_coeffs lists ring coefficients [c_0, ..., c_deg].  The result is
    re-collected into the monomial-symmetric basis.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    plain = f.expand()
    n = f.n_vars
    out = {}
    for exps, coeff in plain.items():
        for j in range(n):
            m = exps[j]
            if m < order:
                continue
            fall = m if order == 1 else m * (m - 1)
            base = list(exps)
            base[j] = m - order
            for t, ct in enumerate(c_coeffs):
                if ring.is_zero(ct):
                    continue
                key = tuple(base[:j] + [base[j] + t] + base[j + 1:])
                out[key] = out.get(key, ring.zero) + coeff * fall * ct
    return SymPoly.collect(out, n, ring)


def _partial(plain, j):
    out = {}
    for exps, coeff in plain.items():
        m = exps[j]
        if m == 0:
            continue
        key = exps[:j] + (m - 1,) + exps[j + 1:]
        out[key] = out.get(key, 0) + coeff * m
    return out


def _mul_single_var_poly(plain, coeffs, j, ring):
    """Multiply by c(z_j)."""
    out = {}
    for exps, coeff in plain.items():
        for t, ct in enumerate(coeffs):
            if ring.is_zero(ct):
                continue
            key = exps[:j] + (exps[j] + t,) + exps[j + 1:]
            out[key] = out.get(key, ring.zero) + coeff * ct
    return out


_HALF = Fraction(1, 2)


def _divide_antisymmetric(num, j, k, ring):
    """Exact division of an antisymmetric-in-(j,k) plain dict by (z_j - z_k)."""
    exact = getattr(ring, "exact", True)
    todo = {key: v for key, v in num.items() if not ring.is_zero(v)}
    scale = max((ring.mass(v) for v in todo.values()), default=0.0) + 1e-300
    out = {}
    while todo:
        key, c = todo.popitem()
        a, b = key[j], key[k]
        if a == b:
            ok = ring.is_zero(c) if exact else ring.mass(c) <= 1e-9 * scale
            if not ok:
                raise NonCancellationError("diagonal term survives antisymmetric division")
            continue
        swapped = list(key)
        swapped[j], swapped[k] = b, a
        cpart = todo.pop(tuple(swapped), ring.zero)
        viol = c + cpart
        ok = ring.is_zero(viol) if exact else ring.mass(viol) <= 1e-9 * scale
        if not ok:
            raise NonCancellationError("pair coefficients not antisymmetric")
        # orient so the first exponent is the larger one
        if a > b:
            chat = c if exact else (c - cpart) * _HALF
            base = list(key)
        else:
            a, b = b, a
            chat = cpart if exact else (cpart - c) * _HALF
            base = swapped
        if ring.is_zero(chat):
            continue
        # (z_j^a z_k^b - z_j^b z_k^a)/(z_j-z_k) = sum_t z_j^{b+t} z_k^{a-1-t}
        for t in range(a - b):
            base[j] = b + t
            base[k] = a - 1 - t
            kk = tuple(base)
            out[kk] = out.get(kk, ring.zero) + chat
    return out


def apply_cross_term(p_coeffs, f: SymPoly, ring):
    """sum_j sum_{k != j} P(z_j)/(z_j - z_k) * df/dz_j for symmetric f.

    All (z_j - z_k) denominators cancel after pairwise combination; the
    division is exact polynomial division of the antisymmetrized numerator.
    """
    n = f.n_vars
    plain = f.expand()
    partials = [_partial(plain, j) for j in range(n)]
    out = {}
    for j in range(n):
        for k in range(j + 1, n):
            a = _mul_single_var_poly(partials[j], p_coeffs, j, ring)
            b = _mul_single_var_poly(partials[k], p_coeffs, k, ring)
            num = plain_add(a, plain_scale(b, -1))
            out = plain_add(out, _divide_antisymmetric(num, j, k, ring))
    return SymPoly.collect(out, n, ring)


def multiply_symmetric(g: SymPoly, f: SymPoly, ring):
    """Product of two symmetric polynomials, recollected."""
    return SymPoly.collect(plain_mul(g.expand(), f.expand(), ring), f.n_vars, ring)
