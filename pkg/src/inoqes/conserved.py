"""Commuting conserved operators and their matrices on the invariant spaces.

The operators are assembled symbolically: coefficients are exact-rational
polynomials in the generators wp(arg), wp'(arg) with arg a signed sum of
coordinates plus an optional half period, closed under d/dx_j through
wp'' = 6 wp^2 - g2/2.  Construction follows the set-partition sums over
W(B_k)-symmetrized wp-chains; products and squares are genuine operator
compositions (Leibniz rule on the coefficient polynomials).

Matrices on V_d^sym are obtained by collocation: the operator is applied to
gauged basis functions Phi * m_lambda (exact derivatives via a truncated
multivariate Taylor engine, order 2 per variable) and fitted in the span of
the gauged basis by complex least squares; the fit residual certifies
numerical closure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import elliptic as el
from . import inozemtsev as ino
from . import sympoly as sp
from .errors import (
    IllConditionedError,
    PoleProximityError,
    UnsupportedNError,
)

# ---------------------------------------------------------------------------
# signed permutations

MAX_N = 3


@dataclass(frozen=True)
class SignedPermutation:
    """x_i -> eps_i * x_{sigma(i)} (0-based)."""

    sigma: tuple
    signs: tuple

    @property
    def epsilon(self):
        e = 1
        for s in self.signs:
            e *= s
        return e

    def compose(self, other):
        """self after other: (self*other)(x) = self(other(x))."""
        n = len(self.sigma)
        sigma = tuple(other.sigma[self.sigma[i]] for i in range(n))
        signs = tuple(self.signs[i] * other.signs[self.sigma[i]] for i in range(n))
        return SignedPermutation(sigma, signs)


def w_bn_elements(k):
    """All |W(B_k)| = 2^k k! signed permutations of k letters."""
    out = []
    for sigma in itertools.permutations(range(k)):
        for signs in itertools.product((1, -1), repeat=k):
            out.append(SignedPermutation(sigma, signs))
    return out


def set_partitions(items):
    """All partitions of a list into unordered nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def set_partitions_exact(items, k):
    for part in set_partitions(items):
        if len(part) == k:
            yield part


# ---------------------------------------------------------------------------
# generator polynomials

WP, WPP, G2 = "wp", "wpp", "g2"


def _normalize_arg(coeffs, shift):
    """Canonical (coeffs, shift, sign_for_odd): leading nonzero coeff +1."""
    for c in coeffs:
        if c > 0:
            return tuple(coeffs), shift, 1
        if c < 0:
            return tuple(-c for c in coeffs), shift, -1
    raise ValueError("argument must involve at least one coordinate")


def gen_wp(coeffs, shift=0):
    coeffs, shift, _ = _normalize_arg(coeffs, shift)
    return (WP, coeffs, shift)


def gen_wpp(coeffs, shift=0):
    """Returns (generator, sign); wp' is odd, wp(arg+omega) handled mod lattice."""
    coeffs, shift, sign = _normalize_arg(coeffs, shift)
    return (WPP, coeffs, shift), sign


G2GEN = (G2, (), 0)

# Poly: dict[monomial -> Fraction]; monomial: tuple of (generator, power), sorted.


def poly_const(c):
    c = Fraction(c)
    return {(): c} if c else {}


def poly_gen(gen, c=1):
    return {((gen, 1),): Fraction(c)}


def padd(a, b):
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, Fraction(0)) + v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def pscale(a, c):
    c = Fraction(c)
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _mono_mul(m1, m2):
    d = dict(m1)
    for g, p in m2:
        d[g] = d.get(g, 0) + p
    return tuple(sorted(d.items()))


def pmul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = _mono_mul(k1, k2)
            nv = out.get(k, Fraction(0)) + v1 * v2
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def _gen_derivative(gen, j):
    """d(gen)/dx_j as a Poly."""
    kind, coeffs, shift = gen
    if kind == G2 or j >= len(coeffs) or coeffs[j] == 0:
        return {}
    cj = coeffs[j]
    if kind == WP:
        gp, sign = gen_wpp(coeffs, shift)
        return poly_gen(gp, cj * sign)
    # wp'' = 6 wp^2 - g2/2
    base = (WP, coeffs, shift)
    six = {((base, 2),): Fraction(6 * cj)}
    g2term = poly_gen(G2GEN, Fraction(-cj, 2))
    return padd(six, g2term)


def pdiff(a, j):
    out = {}
    for mono, c in a.items():
        for idx, (g, p) in enumerate(mono):
            dg = _gen_derivative(g, j)
            if not dg:
                continue
            rest = dict(mono)
            if p == 1:
                del rest[g]
            else:
                rest[g] = p - 1
            rest_mono = tuple(sorted(rest.items()))
            for dm, dc in dg.items():
                k = _mono_mul(rest_mono, dm)
                nv = out.get(k, Fraction(0)) + c * p * dc
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
    return out


def _transform_gen(gen, w: SignedPermutation, n):
    """Substitute x_i -> eps_i x_{sigma(i)}; returns (gen', sign)."""
    kind, coeffs, shift = gen
    if kind == G2:
        return gen, 1
    new = [0] * n
    for i, c in enumerate(coeffs):
        if c:
            new[w.sigma[i]] += c * w.signs[i]
    coeffs2, shift2, sign = _normalize_arg(new, shift)
    if kind == WP:
        return (WP, coeffs2, shift2), 1
    return (WPP, coeffs2, shift2), sign


def p_transform(a, w, n):
    out = {}
    for mono, c in a.items():
        sign = 1
        items = []
        for g, p in mono:
            g2, s = _transform_gen(g, w, n)
            items.append((g2, p))
            if s == -1 and p % 2 == 1:
                sign = -sign
        d = {}
        for g, p in items:
            d[g] = d.get(g, 0) + p
        k = tuple(sorted(d.items()))
        nv = out.get(k, Fraction(0)) + c * sign
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


# ---------------------------------------------------------------------------
# operators: dict[derivative multi-index -> Poly]


def oadd(a, b):
    out = {k: dict(v) for k, v in a.items()}
    for k, pb in b.items():
        out[k] = padd(out.get(k, {}), pb)
        if not out[k]:
            del out[k]
    return out


def oscale(a, c):
    return {k: pscale(p, c) for k, p in a.items() if pscale(p, c)}


def omul_poly(poly, op):
    out = {}
    for alpha, p in op.items():
        q = pmul(poly, p)
        if q:
            out[alpha] = q
    return out


def _poly_multidiff(p, delta):
    for j, dj in enumerate(delta):
        for _ in range(dj):
            p = pdiff(p, j)
            if not p:
                return {}
    return p


def ocompose(a, b, n):
    """Operator product a o b via the Leibniz rule."""
    out = {}
    for alpha, pa in a.items():
        ranges = [range(d + 1) for d in alpha]
        for beta, qb in b.items():
            for gamma in itertools.product(*ranges):
                binom = 1
                for ai, gi in zip(alpha, gamma):
                    binom *= math.comb(ai, gi)
                dq = _poly_multidiff(qb, tuple(a_ - g_ for a_, g_ in zip(alpha, gamma)))
                if not dq:
                    continue
                coeff_poly = pscale(pmul(pa, dq), binom)
                if not coeff_poly:
                    continue
                key = tuple(g_ + b_ for g_, b_ in zip(gamma, beta))
                out[key] = padd(out.get(key, {}), coeff_poly)
                if not out[key]:
                    del out[key]
    return out


def o_transform(op, w: SignedPermutation, n):
    out = {}
    for alpha, p in op.items():
        sign = 1
        beta = [0] * n
        for i, ai in enumerate(alpha):
            beta[w.sigma[i]] += ai
            if ai % 2 == 1 and w.signs[i] == -1:
                sign = -sign
        q = pscale(p_transform(p, w, n), sign)
        if not q:
            continue
        key = tuple(beta)
        out[key] = padd(out.get(key, {}), q)
        if not out[key]:
            del out[key]
    return out


def operator_term_count(op):
    return sum(len(p) for p in op.values())


# ---------------------------------------------------------------------------
# Oshima's building blocks

def _chain_poly(idx, w, n, shift_index=None):
    """w-transform of wp(x_{i0}+omega)?  wp(x_{i0}-x_{i1}) ... for subset idx."""
    k = len(idx)
    factors = []
    if shift_index is not None:
        coeffs = [0] * n
        coeffs[idx[w.sigma[0]]] = w.signs[0]
        factors.append(gen_wp(coeffs, shift_index))
    for t in range(k - 1):
        coeffs = [0] * n
        coeffs[idx[w.sigma[t]]] += w.signs[t]
        coeffs[idx[w.sigma[t + 1]]] -= w.signs[t + 1]
        factors.append(gen_wp(coeffs, 0))
    poly = poly_const(1)
    for g in factors:
        poly = pmul(poly, poly_gen(g))
    return poly


def s_subset(idx, n, shift_index=None):
    """S_I (shift_index None) or S_I^{<i>} as a Poly in n variables."""
    idx = tuple(idx)
    out = {}
    for w in w_bn_elements(len(idx)):
        out = padd(out, _chain_poly(idx, w, n, shift_index))
    return out


def t_o_subset(idx, n, shift_index=None):
    """T^o_I = sum over set partitions with (-1)^{mu-1}(mu-1)! S-products."""
    out = {}
    for part in set_partitions(list(idx)):
        mu = len(part)
        coeff = Fraction((-1) ** (mu - 1) * math.factorial(mu - 1))
        poly = poly_const(coeff)
        for block in part:
            poly = pmul(poly, s_subset(tuple(block), n, shift_index))
        out = padd(out, poly)
    return out


def t_subset(idx, n, coupling: ino.CouplingSet):
    """T_I = -(-l(l+1))^{|I|-1} sum_i (l_i(l_i+1)/2) T^{o,<i>}_I."""
    k = len(idx)
    ll = coupling.l * (coupling.l + 1)
    pref = -((-ll) ** (k - 1))
    out = {}
    for i, li in enumerate(coupling.li):
        w = li * (li + 1) / 2
        if w == 0:
            continue
        out = padd(out, pscale(t_o_subset(idx, n, shift_index=i), pref * w))
    return out


def q_subset(idx, n, coupling):
    """q_I = sum over all set partitions of products of T-blocks; q_empty = 1."""
    out = {}
    for part in set_partitions(list(idx)):
        poly = poly_const(1)
        for block in part:
            poly = pmul(poly, t_subset(tuple(block), n, coupling))
            if not poly:
                break
        out = padd(out, poly)
    return out


def delta_subset(idx, n, coupling):
    """The epsilon-alternating operator Delta_I (first-order in each variable)."""
    idx = tuple(idx)
    k = len(idx)
    ll = coupling.l * (coupling.l + 1)
    out = {}
    for j in range(0, k // 2 + 1):
        pref = (ll**j) / (Fraction(2**k) * math.factorial(j) * math.factorial(k - 2 * j))
        if pref == 0:
            continue
        for w in w_bn_elements(k):
            poly = poly_const(pref * w.epsilon)
            ok = True
            for t in range(j):
                coeffs = [0] * n
                coeffs[idx[w.sigma[2 * t]]] += w.signs[2 * t]
                coeffs[idx[w.sigma[2 * t + 1]]] -= w.signs[2 * t + 1]
                poly = pmul(poly, poly_gen(gen_wp(coeffs, 0)))
            alpha = [0] * n
            sign = 1
            for t in range(2 * j, k):
                alpha[idx[w.sigma[t]]] += 1
                sign *= w.signs[t]
            poly = pscale(poly, sign)
            if not poly:
                continue
            key = tuple(alpha)
            out[key] = padd(out.get(key, {}), poly)
            if not out[key]:
                del out[key]
    if k == 0:
        out = {(0,) * n: poly_const(1)}
    return out


def build_conserved_operator(coupling: ino.CouplingSet, k):
    """P_k (k = 1..N) for N <= 3, as an operator term dictionary."""
    n = coupling.n
    if n > MAX_N:
        raise UnsupportedNError(f"conserved operators supported for N <= {MAX_N}")
    if not 1 <= k <= n:
        raise ValueError("order k must satisfy 1 <= k <= N")
    ktilde = n - k
    total = {}
    identity = SignedPermutation(tuple(range(n)), (1,) * n)
    perms = [SignedPermutation(s, (1,) * n) for s in itertools.permutations(range(n))]
    ll = coupling.l * (coupling.l + 1)
    for i in range(ktilde, n + 1):
        for j in range(i, n + 1):
            pref = Fraction(
                1,
                math.factorial(i) * math.factorial(j - i) * math.factorial(n - j),
            )
            inner = {}
            for part in set_partitions_exact(list(range(i)), ktilde):
                coeff = ((-ll) ** (i - ktilde)) * Fraction(1, 2**ktilde)
                poly = poly_const(coeff)
                for block in part:
                    poly = pmul(poly, t_o_subset(tuple(block), n))
                if not poly:
                    continue
                poly = pmul(poly, q_subset(tuple(range(i, j)), n, coupling))
                if not poly:
                    continue
                delta = delta_subset(tuple(range(j, n)), n, coupling)
                delta2 = ocompose(delta, delta, n)
                inner = oadd(inner, omul_poly(poly, delta2))
            if not inner:
                continue
            summed = {}
            for w in perms:
                summed = oadd(summed, o_transform(inner, w, n))
            total = oadd(total, oscale(summed, pref))
    _ = identity
    return total


# ---------------------------------------------------------------------------
# numerical evaluation

class GeneratorEvaluator:
    """Caches wp / wp' values at a fixed point x."""

    def __init__(self, x, params: el.EllipticParams):
        self.x = [complex(t) for t in x]
        self.params = params
        self.cache = {}

    def arg_value(self, coeffs, shift):
        val = sum(c * xi for c, xi in zip(coeffs, self.x))
        if shift:
            val = val + self.params.half_periods[shift]
        return val

    def gen_value(self, gen):
        if gen in self.cache:
            return self.cache[gen]
        kind, coeffs, shift = gen
        if kind == G2:
            v = self.params.g2
        else:
            arg = self.arg_value(coeffs, shift)
            if kind == WP:
                v = el.weierstrass_p(arg, self.params)
            else:
                v = el.weierstrass_p_prime(arg, self.params)
        self.cache[gen] = v
        return v

    def poly_value(self, poly):
        tot = 0j
        for mono, c in poly.items():
            term = complex(c)
            for g, p in mono:
                term *= self.gen_value(g) ** p
            tot += term
        return tot


# truncated Taylor arithmetic, order 2 per variable

class TruncatedTaylor:
    __slots__ = ("n", "c")

    def __init__(self, n, c=None):
        self.n = n
        self.c = c if c is not None else np.zeros((3,) * n, dtype=complex)

    @classmethod
    def const(cls, n, v):
        t = cls(n)
        t.c[(0,) * n] = v
        return t

    def copy(self):
        return TruncatedTaylor(self.n, self.c.copy())

    def __add__(self, other):
        if isinstance(other, TruncatedTaylor):
            return TruncatedTaylor(self.n, self.c + other.c)
        out = self.copy()
        out.c[(0,) * self.n] += other
        return out

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TruncatedTaylor):
            return TruncatedTaylor(self.n, self.c - other.c)
        out = self.copy()
        out.c[(0,) * self.n] -= other
        return out

    def __rsub__(self, other):
        return (-1) * (self - other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedTaylor):
            return TruncatedTaylor(self.n, self.c * other)
        out = np.zeros_like(self.c)
        it = np.ndindex(self.c.shape)
        for idx in it:
            v = self.c[idx]
            if v == 0:
                continue
            sl = tuple(slice(0, 3 - i) for i in idx)
            dst = tuple(slice(i, 3) for i in idx)
            out[dst] += v * other.c[sl]
        return TruncatedTaylor(self.n, out)

    __rmul__ = __mul__

    def pow_int(self, m):
        r = TruncatedTaylor.const(self.n, 1.0)
        b = self
        while m:
            if m & 1:
                r = r * b
            b = b * b
            m >>= 1
        return r

    def pow_frac(self, b):
        """Principal-branch power with arbitrary (float/complex) exponent."""
        t0 = self.c[(0,) * self.n]
        if t0 == 0:
            raise ZeroDivisionError("fractional power of Taylor series with zero base")
        u = self * (1.0 / t0)
        u.c[(0,) * self.n] -= 1.0
        out = TruncatedTaylor.const(self.n, 1.0)
        uk = TruncatedTaylor.const(self.n, 1.0)
        coef = 1.0
        for kk in range(1, 2 * self.n + 1):
            uk = uk * u
            if not np.any(uk.c):
                break
            coef *= (b - (kk - 1)) / kk
            out = out + uk * coef
        return out * (t0**b)

    def deriv(self, alpha):
        f = 1.0
        for a in alpha:
            f *= math.factorial(a)
        return self.c[tuple(alpha)] * f

    @property
    def value(self):
        return self.c[(0,) * self.n]


@dataclass(frozen=True)
class GaugedBasisFunction:
    """x -> Phi(wp(x_1)..wp(x_N)) * m_lambda(wp(x_1)..wp(x_N))."""

    gauge: ino.GaugeChoice
    label: tuple


def wp_taylor_seeds(x, params):
    """Per-coordinate Taylor of z_j = wp(x_j) to second order."""
    n = len(x)
    seeds = []
    for j, xj in enumerate(x):
        w = el.weierstrass_p(xj, params)
        w1 = el.weierstrass_p_prime(xj, params)
        w2 = 6 * w * w - params.g2 / 2
        t = TruncatedTaylor(n)
        idx0 = [0] * n
        t.c[tuple(idx0)] = w
        idx0[j] = 1
        t.c[tuple(idx0)] = w1
        idx0[j] = 2
        t.c[tuple(idx0)] = w2 / 2
        seeds.append(t)
    return seeds


def phi_taylor(gauge: ino.GaugeChoice, z_seeds, params):
    """Taylor expansion of the gauge factor Phi at the seed point."""
    n = len(z_seeds)
    out = TruncatedTaylor.const(n, 1.0)
    a = float(gauge.a)
    for j in range(n):
        for k in range(j + 1, n):
            out = out * (z_seeds[j] - z_seeds[k]).pow_frac(a)
    for j in range(n):
        for i in range(3):
            bi = gauge.b[i + 1]
            if bi == 0:
                continue
            out = out * (z_seeds[j] - params.e[i]).pow_frac(float(bi))
    return out


def msym_taylor(lam, z_seeds):
    n = len(z_seeds)
    out = TruncatedTaylor(n)
    for exps in sp.msym_expand(lam, n):
        term = TruncatedTaylor.const(n, 1.0)
        for zj, e in zip(z_seeds, exps):
            if e:
                term = term * zj.pow_int(e)
        out = out + term
    return out


def gauged_basis_taylor(f: GaugedBasisFunction, x, params, phi_cache=None):
    z = wp_taylor_seeds(x, params)
    phi = phi_taylor(f.gauge, z, params) if phi_cache is None else phi_cache
    return phi * msym_taylor(f.label, z)


def apply_operator(op, f: GaugedBasisFunction, x, params, taylor=None):
    """(P f)(x) with exact closed-form derivatives of f (no finite differences)."""
    _assert_generic(x, params)
    ev = GeneratorEvaluator(x, params)
    if taylor is None:
        taylor = gauged_basis_taylor(f, x, params)
    tot = 0j
    for alpha, poly in op.items():
        tot += ev.poly_value(poly) * taylor.deriv(alpha)
    return tot


def evaluate_operator_poly(op, x, params):
    """Coefficient values {alpha: c_alpha(x)} of an operator at a point."""
    ev = GeneratorEvaluator(x, params)
    return {alpha: ev.poly_value(poly) for alpha, poly in op.items()}


def _lattice_distance(v, tau):
    v0, _, _ = el.lattice_reduce(v, tau)
    return min(abs(v0 - (m + n * tau)) for m in (-1, 0, 1) for n in (-1, 0, 1))


def _assert_generic(x, params, margin=None):
    margin = margin if margin is not None else math.sqrt(params.tol)
    tau = params.tau
    n = len(x)
    for j in range(n):
        if _lattice_distance(2 * x[j], tau) < margin:  # half-period lattice
            raise PoleProximityError("x_j too close to a half-period point")
        for k in range(j + 1, n):
            if _lattice_distance(x[j] - x[k], tau) < margin:
                raise PoleProximityError("x_j - x_k too close to the lattice")
            if _lattice_distance(x[j] + x[k], tau) < margin:
                raise PoleProximityError("x_j + x_k too close to the lattice")


def collocation_points(n, m, params, seed=0, margin=0.05, imag_offset=0.05):
    """Pseudo-random points in the cell, pole loci avoided by the margin."""
    rng = np.random.default_rng(seed)
    pts = []
    attempts = 0
    while len(pts) < m:
        attempts += 1
        if attempts > 2000 * m:
            raise IllConditionedError("could not sample enough generic points")
        x = [complex(rng.uniform(margin, 1 - margin), imag_offset) for _ in range(n)]
        try:
            _assert_generic(x, params, margin)
        except PoleProximityError:
            continue
        pts.append(x)
    return pts


def conserved_matrix(coupling: ino.CouplingSet, k, gauge: ino.GaugeChoice,
                     params: el.EllipticParams, points=None, seed=0,
                     cond_threshold=1e10, operator=None):
    """Least-squares fit of P_k restricted to the gauged space W_d^sym.

    Returns an OperatorMatrix whose closure_residual is the worst relative
    fit residual over basis columns; < 1e-8 certifies numerical closure."""
    n = coupling.n
    d = gauge.d
    basis = sp.partitions_in_box(d, n)
    dim = len(basis)
    if points is None:
        points = collocation_points(n, 2 * dim + 8, params, seed=seed)
    if len(points) < 2 * dim:
        raise ValueError("need at least 2*dim collocation points")
    op = build_conserved_operator(coupling, k) if operator is None else operator
    design = np.zeros((len(points), dim), dtype=complex)
    rhs = np.zeros((len(points), dim), dtype=complex)
    for s, x in enumerate(points):
        z = wp_taylor_seeds(x, params)
        phi = phi_taylor(gauge, z, params)
        phi_val = phi.value
        ev = GeneratorEvaluator(x, params)
        coeffs = {alpha: ev.poly_value(poly) for alpha, poly in op.items()}
        for col, lam in enumerate(basis):
            tay = phi * msym_taylor(lam, z)
            design[s, col] = tay.value / phi_val
            tot = 0j
            for alpha, cval in coeffs.items():
                tot += cval * tay.deriv(alpha)
            rhs[s, col] = tot / phi_val
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[0] / max(sv[-1], 1e-300) > cond_threshold:
        raise IllConditionedError(
            f"collocation matrix condition {sv[0]/sv[-1]:.2e} above threshold; re-sample"
        )
    coeff, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    fit = design @ coeff
    residual = 0.0
    for col in range(dim):
        num = np.linalg.norm(fit[:, col] - rhs[:, col])
        den = max(np.linalg.norm(rhs[:, col]), 1e-300)
        residual = max(residual, float(num / den))
    return ino.OperatorMatrix(basis, coeff, residual, "complex")


def fit_affine(target: np.ndarray, source: np.ndarray):
    """Least squares target ~ A*source + B*I; returns (A, B, relative residual)."""
    t = np.asarray(target, complex).ravel()
    s = np.asarray(source, complex).ravel()
    i = np.eye(int(math.isqrt(len(s)))).ravel()
    m = np.stack([s, i], axis=1)
    sol, *_ = np.linalg.lstsq(m, t, rcond=None)
    res = np.linalg.norm(m @ sol - t) / max(np.linalg.norm(t), 1e-300)
    return complex(sol[0]), complex(sol[1]), float(res)


def commutator_relnorm(a: np.ndarray, b: np.ndarray):
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    num = np.linalg.norm(a @ b - b @ a, "fro")
    den = max(np.linalg.norm(a, "fro") * np.linalg.norm(b, "fro"), 1e-300)
    return float(num / den)
