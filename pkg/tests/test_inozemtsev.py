import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from inoqes import elliptic as el
from inoqes import inozemtsev as ino
from inoqes import sympoly as sp
from inoqes.errors import (
    AssumptionViolatedError,
    BranchPointProximityError,
    InadmissibleGaugeError,
)
from inoqes.sympoly import RING_Q, ComplexRing, SymE, SymPoly, SymbolicERing


def random_admissible_gauge(rng, n, d):
    """Generic rational exponents with prescribed non-negative integer d."""
    a = F(rng.randint(-6, 6), rng.randint(1, 5))
    bs = [F(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(3)]
    b0 = -(F(d) + (n - 1) * a) - sum(bs)
    return ino.GaugeChoice(n, a, (b0, *bs))


def test_enumerate_eight_sets_for_dominant_l():
    # l >> l_i with (N-1)l + sum l_i even: exactly the eight listed a=-l sets
    c = ino.CouplingSet(2, 10, 1, 1, 1, 1)
    got = ino.enumerate_gauge_choices(c)
    assert len(got) == 8
    assert all(g.a == -10 for g in got)
    # the listed sign patterns: b-pluses in even-size subsets of {0,1,2,3}
    plus_patterns = sorted(
        tuple(g.b[i] == F(c.li[i] + 1, 2) for i in range(4)) for g in got
    )
    expect = sorted(
        pat for pat in itertools.product([False, True], repeat=4) if sum(pat) % 2 == 0
    )
    assert plus_patterns == expect


def test_enumerate_n1_brute_force():
    c = ino.CouplingSet(1, 0, 0, 0, 0, 0)
    got = ino.enumerate_gauge_choices(c)
    assert len(got) == 1
    assert got[0].b == (F(0), F(0), F(0), F(0)) and got[0].d == 0
    # brute force over the 16 sign patterns agrees
    cnt = 0
    for pat in itertools.product([0, 1], repeat=4):
        bs = tuple(F(1, 2) if t else F(0) for t in pat)
        if sum(bs) <= 0 and (-sum(bs)).denominator == 1:
            cnt += 1
    assert cnt == len(got)


def test_enumerate_irrational_couplings_empty():
    c = ino.CouplingSet(2, F(1, 3), F(1, 7), 0, 0, 0)
    assert ino.enumerate_gauge_choices(c) == []


def test_gauge_factor_phi():
    g = ino.GaugeChoice(2, 0, (0, 0, 0, 0))
    e = (1.0, -0.5, -0.5)
    assert ino.gauge_factor_phi(g, (2.0, 3.0), e) == 1
    g1 = ino.GaugeChoice(1, 1, (0, F(1, 2), 0, 0))
    assert abs(ino.gauge_factor_phi(g1, (e[0] + 1,), e) - 1) < 1e-14
    with pytest.raises(BranchPointProximityError):
        ino.gauge_factor_phi(g1, (e[0] + 1e-9,), e)


def test_d0_matrix_is_scalar_constant():
    ring = SymbolicERing()
    g = ino.GaugeChoice(2, F(1, 2), (F(-1, 8), F(-1, 8), F(-1, 8), F(-1, 8)))
    assert g.d == 0
    _, _, c_z, c0 = ino.hamiltonian_coefficients(g, ring)
    assert ring.is_zero(c_z)
    m = ino.hamiltonian_matrix(g, ring)
    assert m.dim == 1 and m.closure_residual == 0.0
    assert (m.entries[0][0] - c0).is_zero()


def test_inadmissible_gauge_raises():
    g = ino.GaugeChoice(2, F(1, 3), (0, 0, 0, 0))
    assert not g.admissible
    with pytest.raises(InadmissibleGaugeError):
        ino.hamiltonian_matrix(g, SymbolicERing())


def test_exact_closure_certification():
    # Hhat m_lambda has exactly zero coefficient on every top part d+1
    rng = random.Random(21)
    ring = SymbolicERing()
    cases = [(1, d) for d in range(5)] + [(2, d) for d in range(5)] + [(3, 0), (3, 1), (3, 2)]
    for n, d in cases:
        g = random_admissible_gauge(rng, n, d)
        m = ino.hamiltonian_matrix(g, ring)
        assert m.closure_residual == 0.0, (n, d, g)
        assert m.dim == math.comb(n + d, n)


def test_leading_coefficient_law_exact():
    rng = random.Random(22)
    ring = SymbolicERing()
    for n, d in [(1, 3), (2, 2), (2, 4), (3, 2)]:
        g = random_admissible_gauge(rng, n, d)
        for lam in sp.partitions_in_box(d, n):
            L = lam[0] if lam else 0
            img = ino.apply_hamiltonian(g, SymPoly.monomial(lam, n, ring.one), ring)
            lam_plus = sp.normalize_partition((L + 1,) + tuple(lam[1:]))
            got = img.terms.get(lam_plus, ring.zero)
            want = SymE.const(ino.hact_leading_coefficient(g, L))
            assert (got - want).is_zero(), (n, d, lam)


def test_symbolic_substitution_matches_complex_assembly():
    rng = random.Random(23)
    g = random_admissible_gauge(rng, 2, 2)
    ring_s = SymbolicERing()
    ms = ino.hamiltonian_matrix(g, ring_s)
    e1, e2 = F(7, 5), F(-1, 3)
    mc = ino.hamiltonian_matrix(g, ComplexRing(e1, e2, -e1 - e2))
    sub = ms.to_numpy(complex(e1), complex(e2))
    assert np.max(np.abs(sub - mc.to_numpy())) < 1e-9


def test_polynomiality_no_cancellation_failures():
    rng = random.Random(24)
    ring = SymbolicERing()
    p_coeffs, _, _, _ = ino.hamiltonian_coefficients(
        ino.GaugeChoice(3, F(1, 2), (F(-1), F(-1), F(-1), F(-1, 2))), ring
    )
    for _ in range(100):
        n = rng.randint(2, 3)
        terms = {}
        for _ in range(3):
            lam = sp.normalize_partition(
                [rng.randint(0, 4) for _ in range(rng.randint(0, n))]
            )
            terms[lam] = ring.coerce(F(rng.randint(-5, 5), rng.randint(1, 4)))
        f = SymPoly(n, {k: v for k, v in terms.items() if not ring.is_zero(v)})
        sp.apply_cross_term(p_coeffs, f, ring)  # must not raise


# --- spectrum ----------------------------------------------------------------


def test_spectrum_trivial_cases():
    m = ino.OperatorMatrix([()], np.array([[2.5 - 1j]]), 0.0, "complex")
    r = ino.spectrum(m)
    assert np.allclose(r.values, [2.5 - 1j])
    diag = np.diag([3.0, -1.0, 2.0]).astype(complex)
    m = ino.OperatorMatrix([(), (1,), (2,)], diag, 0.0, "complex")
    r = ino.spectrum(m)
    assert np.allclose(r.values, [-1.0, 2.0, 3.0])
    assert [mult for _, mult in r.clusters] == [1, 1, 1]


def faddeev_leverrier_charpoly(mat):
    """Exact characteristic polynomial coefficients (monic, descending)."""
    n = len(mat)
    coeffs = [F(1)]
    m_cur = [[F(0)] * n for _ in range(n)]
    ident = [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        # M_k = A*M_{k-1} + c_{k-1} I
        prod = [[sum(mat[i][t] * m_cur[t][j] for t in range(n)) for j in range(n)]
                for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[-1]
        m_cur = prod
        am = [[sum(mat[i][t] * m_cur[t][j] for t in range(n)) for j in range(n)]
              for i in range(n)]
        c_k = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c_k)
    return coeffs


def test_eigenvalues_match_exact_charpoly_oracle():
    params = el.EllipticParams.from_tau(1.3j)
    e1 = F(params.e[0].real).limit_denominator(10**12)
    e2 = F(params.e[1].real).limit_denominator(10**12)
    rng = random.Random(25)
    for n, d in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]:
        g = random_admissible_gauge(rng, n, d)
        ms = ino.hamiltonian_matrix(g, SymbolicERing())
        exact = [[ms.entries[i][j].subs(e1, e2) for j in range(ms.dim)]
                 for i in range(ms.dim)]
        coeffs = faddeev_leverrier_charpoly(exact)
        roots = list(np.roots([float(c) for c in coeffs]))
        vals = ino.spectrum(
            ino.OperatorMatrix(ms.basis, ms.to_numpy(e1, e2), 0.0, "complex")).values
        scale = max(1.0, np.max(np.abs(vals)))
        for v in vals:  # greedy matching; ordering of conjugate pairs is fp-fragile
            i = int(np.argmin([abs(v - r) for r in roots]))
            assert abs(v - roots.pop(i)) < 1e-9 * scale


def test_n1_d1_hand_expansion_oracle():
    # basis {1, z}: Hhat 1 = c0 + c_z z ; Hhat z = -q0 + (c0 - q1) z
    ring = SymbolicERing()
    g = ino.GaugeChoice(1, 2, (F(-1, 2), F(-1, 4), F(-1, 8), F(-1, 8)))
    assert g.d == 1
    _, q, c_z, c0 = ino.hamiltonian_coefficients(g, ring)
    m = ino.hamiltonian_matrix(g, ring)
    assert m.basis == [(), (1,)]
    assert (m.entries[0][0] - c0).is_zero()
    assert (m.entries[1][0] - c_z).is_zero()
    assert (m.entries[0][1] + q[0]).is_zero()
    assert (m.entries[1][1] - (c0 - q[1])).is_zero()


# --- L^2 and dimensions -------------------------------------------------------


def test_l2_membership():
    c = ino.CouplingSet(2, 1, 1, 1, 4, 4)
    good = ino.GaugeChoice(2, c.l + 1, ((c.l0 + 1) / 2, (c.l1 + 1) / 2, -c.l2 / 2, -c.l3 / 2))
    assert good.d == 0
    ok, reason = ino.l2_membership(good, c)
    assert good.admissible and ok and reason == "ok"
    bad_a = ino.GaugeChoice(2, -c.l, ((c.l0 + 1) / 2, (c.l1 + 1) / 2, -c.l2 / 2, -c.l3 / 2))
    assert bad_a.admissible
    assert ino.l2_membership(bad_a, c) == (False, "a")
    bad_d = ino.GaugeChoice(2, c.l + 1, ((c.l0 + 1) / 2, (c.l1 + 1) / 2, -c.l2 / 2, F(1, 3)))
    assert not bad_d.admissible
    assert ino.l2_membership(bad_d, c) == (False, "d")
    with pytest.raises(AssumptionViolatedError):
        ino.l2_membership(good, ino.CouplingSet(2, -1, 1, 1, 4, 4))


def test_dimension_examples():
    assert ino.dimension_report(ino.CouplingSet(2, 1, 0, 0, 0, 0)).total_dim == 9
    assert ino.dimension_report(ino.CouplingSet(1, 0, 2, 1, 1, 0)).total_dim == 5
    assert ino.dimension_report(ino.CouplingSet(1, 0, 1, 1, 1, 0)).total_dim == 5
    assert ino.n1_dimension_closed_form(2, 1, 1, 0) == 5
    assert ino.n1_dimension_closed_form(1, 1, 1, 0) == 5


def test_dimension_scan_n1():
    for ls in itertools.product(range(4), repeat=4):
        r = ino.dimension_report(ino.CouplingSet(1, 0, *ls))
        assert r.agrees, (ls, r.total_dim, r.closed_form)


def test_dimension_scan_n2():
    for l in range(4):
        for ls in itertools.product(range(4), repeat=4):
            r = ino.dimension_report(ino.CouplingSet(2, l, *ls))
            assert r.agrees, ((l, *ls), r.total_dim, r.closed_form)
