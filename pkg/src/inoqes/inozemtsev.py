"""Gauge choices and the gauged Hamiltonian restricted to V_d^sym.

The gauged operator acting on symmetric polynomials in z_j reads

    Hhat = -sum_j P(z_j) d^2/dz_j^2
           - sum_j [ sum_{k!=j} 2a P(z_j)/(z_j-z_k)
                     + sum_{i=1..3} (2b_i + 1/2) P(z_j)/(z_j-e_i) ] d/dz_j
           + c_z * sum_j z_j + c_0,

with P(z) = 4(z-e_1)(z-e_2)(z-e_3).  For an admissible gauge
(d = -((N-1)a + b_0 + ... + b_3) a non-negative integer) it preserves the
span of monomial-symmetric functions with top part <= d; the restriction is
assembled exactly over the chosen coefficient ring.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import sympoly as sp
from .errors import (
    AssumptionViolatedError,
    BranchPointProximityError,
    InadmissibleGaugeError,
    NoConvergenceError,
)
from .sympoly import RING_Q, SymE, SymPoly


@dataclass(frozen=True)
class CouplingSet:
    """Physical couplings (l, l0..l3) for N particles."""

    n: int
    l: Fraction
    l0: Fraction
    l1: Fraction
    l2: Fraction
    l3: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("particle number must be >= 1")
        for name in ("l", "l0", "l1", "l2", "l3"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def li(self):
        return (self.l0, self.l1, self.l2, self.l3)


@dataclass(frozen=True)
class GaugeChoice:
    """Exponent set (a, b0..b3) with degree d; d is None when inadmissible."""

    n: int
    a: Fraction
    b: tuple[Fraction, Fraction, Fraction, Fraction]
    d: int | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        dd = -((self.n - 1) * self.a + sum(self.b))
        if dd.denominator == 1 and dd >= 0:
            object.__setattr__(self, "d", int(dd))
        else:
            object.__setattr__(self, "d", None)

    @property
    def admissible(self):
        return self.d is not None

    @property
    def degree_fraction(self):
        return -((self.n - 1) * self.a + sum(self.b))


def enumerate_gauge_choices(c: CouplingSet):
    """All sign choices (2^5 for N >= 2, the 2^4 b-choices for N = 1)
    whose degree d is a non-negative integer."""
    a_opts = [-c.l, c.l + 1] if c.n >= 2 else [c.l + 1]
    b_opts = [(-li / 2, (li + 1) / 2) for li in c.li]
    out = []
    for a in a_opts:
        for bs in itertools.product(*b_opts):
            g = GaugeChoice(c.n, a, bs)
            if g.admissible:
                out.append(g)
    return out


def gauge_factor_phi(gauge: GaugeChoice, z, e, tol=1e-12):
    """Phi(z) = prod_{j<k}(z_j - z_k)^a * prod_j prod_{i=1..3}(z_j - e_i)^{b_i}.

    Principal branches per factor; raises near the branch loci."""
    z = [complex(t) for t in z]
    guard = math.sqrt(tol)
    val = 1 + 0j
    for j in range(len(z)):
        for k in range(j + 1, len(z)):
            base = z[j] - z[k]
            if abs(base) < guard:
                raise BranchPointProximityError("z_j - z_k too close to zero")
            val *= base ** complex(gauge.a)
    for j, zj in enumerate(z):
        for i in range(3):
            base = zj - complex(e[i])
            bi = gauge.b[i + 1]
            if bi == 0:
                continue
            if abs(base) < guard:
                raise BranchPointProximityError(f"z_j - e_{i+1} too close to zero")
            val *= base ** complex(bi)
    return val


def hamiltonian_coefficients(gauge: GaugeChoice, ring):
    """(P coeffs, Q coeffs, c_z, c_0) as ring elements.

    Q(z) = sum_i (2 b_i + 1/2) P(z)/(z - e_i) expanded as a quadratic."""
    e1, e2, e3 = ring.e
    four = ring.coerce(4)
    p_coeffs = [
        -four * (e1 * e2 * e3),
        four * (e1 * e2 + e1 * e3 + e2 * e3),
        -four * (e1 + e2 + e3),
        four,
    ]
    others = {1: (e2, e3), 2: (e1, e3), 3: (e1, e2)}
    q_coeffs = [ring.zero, ring.zero, ring.zero]
    for i in (1, 2, 3):
        w = Fraction(2) * gauge.b[i] + Fraction(1, 2)
        ea, eb = others[i]
        q_coeffs[0] = q_coeffs[0] + w * (four * (ea * eb))
        q_coeffs[1] = q_coeffs[1] + w * (-four * (ea + eb))
        q_coeffs[2] = q_coeffs[2] + w * four
    n, a, b = gauge.n, gauge.a, gauge.b
    c_z_frac = -4 * ((n - 1) * a - b[0] + b[1] + b[2] + b[3] + Fraction(1, 2)) * (
        (n - 1) * a + sum(b)
    )
    c_z = ring.coerce(c_z_frac)
    c0 = (
        4 * n * ((b[1] + b[2]) ** 2) * e3
        + 4 * n * ((b[1] + b[3]) ** 2) * e2
        + 4 * n * ((b[2] + b[3]) ** 2) * e1
    )
    c0 = c0 - 4 * n * (n - 1) * a * (e1 * b[1] + e2 * b[2] + e3 * b[3])
    return p_coeffs, q_coeffs, c_z, c0


def apply_hamiltonian(gauge: GaugeChoice, f: SymPoly, ring):
    """Hhat f over the given ring (no restriction to a basis)."""
    p_coeffs, q_coeffs, c_z, c0 = hamiltonian_coefficients(gauge, ring)
    out = sp.apply_gauged_term(p_coeffs, 2, f, ring).scale(ring.coerce(-1))
    out = out + sp.apply_gauged_term(q_coeffs, 1, f, ring).scale(ring.coerce(-1))
    if gauge.n >= 2 and gauge.a != 0:
        cross = sp.apply_cross_term(p_coeffs, f, ring)
        out = out + cross.scale(ring.coerce(-2) * ring.coerce(gauge.a))
    if not ring.is_zero(c_z):
        zsum = SymPoly.monomial((1,), gauge.n, ring.one)
        out = out + sp.multiply_symmetric(zsum, f, ring).scale(c_z)
    out = out + f.scale(c0)
    return SymPoly.collect(out.expand(), f.n_vars, ring)


@dataclass
class OperatorMatrix:
    """Operator restricted to an ordered finite basis of partitions."""

    basis: list
    entries: object  # ndarray (complex ring) or list of lists (exact rings)
    closure_residual: float
    ring_name: str

    @property
    def dim(self):
        return len(self.basis)

    def to_numpy(self, e1=None, e2=None):
        if self.ring_name == "complex":
            return np.asarray(self.entries, dtype=complex)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(self.dim):
            for j in range(self.dim):
                v = self.entries[i][j]
                if isinstance(v, SymE):
                    if e1 is None or e2 is None:
                        raise ValueError("symbolic entries need e1, e2 values")
                    out[i, j] = complex(v.subs(e1, e2))
                else:
                    out[i, j] = complex(v)
        return out


def hamiltonian_matrix(gauge: GaugeChoice, ring):
    """Matrix of Hhat on V_d^sym in the monomial-symmetric basis.

    Exact rings certify closure (residual exactly 0); the coefficients of
    images outside the basis are reported as closure_residual, not dropped
    silently."""
    if not gauge.admissible:
        raise InadmissibleGaugeError(f"d = {gauge.degree_fraction} not in Z>=0")
    n, d = gauge.n, gauge.d
    basis = sp.partitions_in_box(d, n)
    index = {lam: i for i, lam in enumerate(basis)}
    complex_ring = ring.name == "complex"
    if complex_ring:
        entries = np.zeros((len(basis), len(basis)), dtype=complex)
    else:
        entries = [[ring.zero for _ in basis] for _ in basis]
    residual = 0.0
    for j, lam in enumerate(basis):
        image = apply_hamiltonian(gauge, SymPoly.monomial(lam, n, ring.one), ring)
        col_out = 0.0
        for mu, c in image.terms.items():
            if mu in index:
                if complex_ring:
                    entries[index[mu], j] = complex(c)
                else:
                    entries[index[mu]][j] = c
            else:
                col_out += ring.mass(c)
        residual = max(residual, col_out)
    return OperatorMatrix(basis, entries, residual, ring.name)


def hact_leading_coefficient(gauge: GaugeChoice, L):
    """Coefficient of m_{lambda^+} in Hhat m_lambda for top part L."""
    d = gauge.d if gauge.d is not None else gauge.degree_fraction
    return Fraction(-4) * (L - d - 2 * gauge.b[0] + Fraction(1, 2)) * (L - d)


@dataclass
class SpectrumResult:
    values: np.ndarray
    clusters: list
    backward_error: float


def spectrum(matrix: OperatorMatrix, cluster_rtol=1e-8):
    """Eigenvalues (with algebraic multiplicity) of a complex-entry matrix,
    sorted by real then imaginary part; near-degenerate values clustered."""
    a = matrix.to_numpy() if isinstance(matrix, OperatorMatrix) else np.asarray(matrix, complex)
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    scale = max(np.max(np.abs(vals)) if len(vals) else 0.0, 1.0)
    clusters = []
    for v in vals:
        if clusters and abs(v - clusters[-1][0]) <= cluster_rtol * scale:
            center, mult = clusters[-1]
            clusters[-1] = ((center * mult + v) / (mult + 1), mult + 1)
        else:
            clusters.append((v, 1))
    backward = np.finfo(float).eps * np.linalg.norm(a, "fro") * max(len(vals), 1)
    return SpectrumResult(vals, clusters, float(backward))


def l2_membership(gauge: GaugeChoice, coupling: CouplingSet):
    """Square-integrability of W_d^sym on 0 < x_1 < ... < x_N < 1.

    True iff a = l+1, b0 = (l0+1)/2, b1 = (l1+1)/2 and d in Z>=0; the reason
    string names the first failed clause."""
    if coupling.l < 0 or coupling.l0 < 0 or coupling.l1 < 0:
        raise AssumptionViolatedError("l, l0, l1 must be non-negative")
    if gauge.a != coupling.l + 1:
        return False, "a"
    if gauge.b[0] != (coupling.l0 + 1) / 2:
        return False, "b0"
    if gauge.b[1] != (coupling.l1 + 1) / 2:
        return False, "b1"
    if not gauge.admissible:
        return False, "d"
    return True, "ok"


def n1_dimension_closed_form(l0, l1, l2, l3):
    """Piecewise closed form for the N=1 total dimension (integer couplings)."""
    ls = [int(l0), int(l1), int(l2), int(l3)]
    lt = sum(ls)
    k0 = max(ls)
    k3 = min(ls)
    if lt % 2 == 0:
        return 2 * k0 + 1 if k0 + k3 >= lt // 2 else lt - 2 * k3 + 1
    return 2 * k0 + 1 if k0 >= (lt + 1) // 2 else lt + 2


def n2_dimension_closed_form(l, l0, l1, l2, l3):
    """(2l+1)^2 + sum l_i(l_i+1) for N=2, integer couplings."""
    return (2 * int(l) + 1) ** 2 + sum(int(li) * (int(li) + 1) for li in (l0, l1, l2, l3))


@dataclass
class DimensionReport:
    coupling: CouplingSet
    choices: list
    total_dim: int
    closed_form: int | None
    agrees: bool | None


def dimension_report(coupling: CouplingSet):
    """Enumerated total dimension of the direct sum of W_d^sym spaces,
    compared against the closed forms where the paper states one."""
    for li in (coupling.l,) + coupling.li:
        if li.denominator != 1 or li < 0:
            raise ValueError("dimension census needs couplings in Z>=0")
    choices = enumerate_gauge_choices(coupling)
    total = sum(math.comb(coupling.n + g.d, coupling.n) for g in choices)
    closed = None
    if coupling.n == 1:
        closed = n1_dimension_closed_form(*coupling.li)
    elif coupling.n == 2:
        closed = n2_dimension_closed_form(coupling.l, *coupling.li)
    agrees = None if closed is None else (closed == total)
    return DimensionReport(coupling, choices, total, closed, agrees)
