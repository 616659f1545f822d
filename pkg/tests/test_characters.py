import cmath
import math
import random

import numpy as np
import pytest

from twinsieve.characters import (
    DirichletCharacter,
    ExceptionalZeroHypothesis,
    F_bruteforce,
    F_bruteforce_all_m,
    F_factored,
    character_group,
    conductor,
    festi_bound_check,
    gauss_sum,
    gauss_sum_formula,
    gauss_sum_formula_all,
    local_sigma,
    modified_gauss_sum,
    primitive_characters,
    primitive_part,
    principal_character,
    quadratic_character,
    u_P,
)


def test_group_sizes_and_orders():
    assert len(character_group(1)) == 1
    g5 = character_group(5)
    assert len(g5) == 4
    assert sorted(chi.order() for chi in g5) == [1, 2, 4, 4]
    g8 = character_group(8)
    assert len(g8) == 4
    assert all(chi.is_real() for chi in g8)
    assert sum(chi.is_principal for chi in g8) == 1
    with pytest.raises(ValueError):
        character_group(10**6 + 1)


def test_group_sizes_match_phi():
    from twinsieve.arith import euler_phi, factorize, build_prime_table

    t = build_prime_table(300)
    for q in range(1, 80):
        assert len(character_group(q)) == euler_phi(factorize(q, t))


def test_character_values_multiplicative():
    rng = random.Random(11)
    for q in (5, 8, 9, 12, 15, 16, 24, 45):
        for chi in character_group(q):
            for _ in range(20):
                a = rng.randrange(q)
                b = rng.randrange(q)
                lhs = chi.value(a * b)
                rhs = chi.value(a) * chi.value(b)
                assert cmath.isclose(lhs, rhs, abs_tol=1e-10)
            for n in range(q):
                v = chi.value(n)
                if math.gcd(n, q) == 1:
                    assert abs(abs(v) - 1) < 1e-12
                else:
                    assert v == 0


def test_orthogonality():
    for q in list(range(1, 60)) + [96, 120, 200]:
        chars = character_group(q)
        for n in range(1, min(q + 1, 25)):
            if q > 1 and math.gcd(n, q) != 1:
                continue
            total = sum(chi.value(n) for chi in chars)
            want = len(chars) if (n % q) == 1 % q else 0
            assert abs(total - want) < 1e-9


def test_conductors_explicit():
    assert conductor(principal_character(12)) == 1
    # quadratic character mod 3 lifted to mod 9
    lifted = quadratic_character(9)
    assert conductor(lifted) == 3
    assert conductor(quadratic_character(5)) == 5
    prim = primitive_part(lifted)
    assert prim.q == 3
    for n in range(20):
        if math.gcd(n, 9) == 1:
            assert cmath.isclose(lifted.value(n), prim.value(n), abs_tol=1e-12)


def test_conductor_definitional():
    # conductor is the least f | q with chi trivial on units = 1 mod f
    for q in (8, 9, 12, 16, 24, 36, 40, 45):
        for chi in character_group(q):
            f = conductor(chi)
            assert q % f == 0

            def trivial_on(d):
                return all(
                    abs(chi.value(n) - 1) < 1e-9
                    for n in range(1, q + 1)
                    if n % d == 1 % d and math.gcd(n, q) == 1
                )

            assert trivial_on(f)
            smaller = [d for d in range(1, f) if f % d == 0 and trivial_on(d)]
            assert not smaller


def test_primitive_part_induces():
    for q in (12, 16, 36, 45, 40):
        for chi in character_group(q):
            star = primitive_part(chi)
            assert star.q == conductor(chi)
            assert conductor(star) == star.q
            for n in range(1, q + 1):
                if math.gcd(n, q) == 1:
                    assert cmath.isclose(chi.value(n), star.value(n), abs_tol=1e-10)


def test_primitive_characters_count():
    # sum over f | q of #primitive(f) = phi(q)
    for q in (12, 24, 40):
        total = 0
        for f in range(1, q + 1):
            if q % f == 0:
                total += len(primitive_characters(f))
        assert total == len(character_group(q))


def test_gauss_sum_examples():
    assert cmath.isclose(gauss_sum(principal_character(3), 1), -1, abs_tol=1e-12)
    chi5 = quadratic_character(5)
    assert abs(abs(gauss_sum(chi5, 1)) - math.sqrt(5)) < 1e-10
    assert gauss_sum(principal_character(1), 0) == 1


def test_gauss_sum_formula_examples():
    assert abs(gauss_sum_formula(principal_character(9), 1)) == 0.0
    chi7 = quadratic_character(7)
    got = gauss_sum_formula(chi7, 3)
    want = chi7.conjugate().value(3) * gauss_sum(chi7, 1)
    assert cmath.isclose(got, want, abs_tol=1e-10)
    for chi in character_group(15):
        assert cmath.isclose(
            gauss_sum_formula(chi, 2), gauss_sum(chi, 2), abs_tol=1e-8 * 15
        )


def test_gauss_sum_formula_full_sweep():
    for q in range(1, 61):
        for chi in character_group(q):
            formula = gauss_sum_formula_all(chi)
            for a in range(q):
                assert cmath.isclose(
                    formula[a], gauss_sum(chi, a), abs_tol=1e-8 * max(q, 1)
                ), (q, a)


def test_modified_gauss_sum_examples():
    chi = principal_character(3)
    assert cmath.isclose(
        modified_gauss_sum(chi, 1, 1), cmath.exp(2j * math.pi * 2 / 3), abs_tol=1e-12
    )
    assert cmath.isclose(
        modified_gauss_sum(chi, 1, 3), cmath.exp(2j * math.pi * 1 / 3), abs_tol=1e-12
    )
    with pytest.raises(ValueError):
        modified_gauss_sum(chi, 1, 2)


def test_modified_gauss_sum_splitting():
    # c(a,1) + c(a,p) = c(a) at prime modulus
    for p in (3, 5, 7, 11):
        for chi in character_group(p):
            for a in range(p):
                total = modified_gauss_sum(chi, a, 1) + modified_gauss_sum(chi, a, p)
                assert cmath.isclose(total, gauss_sum(chi, a), abs_tol=1e-10)


def test_F_examples():
    chi3 = principal_character(3)
    assert cmath.isclose(F_bruteforce(chi3, chi3, 1, 1, 3), -1, abs_tol=1e-9)
    assert cmath.isclose(F_bruteforce(chi3, chi3, 3, 3, 2), 2, abs_tol=1e-9)
    chi5 = principal_character(5)
    assert cmath.isclose(F_bruteforce(chi5, chi5, 1, 1, 3), 6, abs_tol=1e-9)


def test_F_factored_examples():
    chi15 = principal_character(15)
    got = F_factored(chi15, chi15, 1, 1, 4)
    want = local_sigma("sigma", 3, 4) * local_sigma("sigma", 5, 4)
    assert cmath.isclose(got, want, abs_tol=1e-8)
    chi9 = principal_character(9)
    assert F_factored(chi9, chi9, 1, 1, 2) == 0
    chiq = quadratic_character(3)
    assert cmath.isclose(
        F_factored(chiq, chiq, 1, 1, 1), F_bruteforce(chiq, chiq, 1, 1, 1), abs_tol=1e-8
    )


def _all_j(q):
    from twinsieve.characters import _factor_pp

    rad = 1
    for p, _ in _factor_pp(q):
        rad *= p
    return [d for d in range(1, rad + 1) if rad % d == 0]


def test_F_factored_vs_bruteforce_sweep():
    rng = random.Random(23)
    for q in (3, 5, 9, 15, 21, 35, 45, 50, 105):
        pairs = [(principal_character(q), principal_character(q))]
        quad = quadratic_character(q)
        pairs.append((quad, quad))
        pairs.append((principal_character(q), quad))
        for chi1, chi2 in pairs:
            for j1 in _all_j(q):
                for j2 in _all_j(q):
                    m = rng.randrange(q)
                    a = F_factored(chi1, chi2, j1, j2, m)
                    b = F_bruteforce(chi1, chi2, j1, j2, m)
                    assert abs(a - b) <= 1e-6 * q * q, (q, j1, j2, m)


def test_F_multiplicativity():
    rng = random.Random(29)
    for q1, q2 in [(3, 5), (5, 7), (3, 7), (4, 3), (8, 5), (9, 5)]:
        q = q1 * q2
        for chi in (principal_character(q), quadratic_character(q)):
            c1 = chi.component(q1)
            c2 = chi.component(q2)
            for _ in range(4):
                m = rng.randrange(q)
                for j1 in (1,):
                    whole = F_bruteforce(chi, chi, j1, 1, m)
                    split = F_bruteforce(c1, c1, j1, 1, m) * F_bruteforce(c2, c2, j1, 1, m)
                    assert abs(whole - split) < 1e-6 * q * q


def test_le_Fsimple_vanishing():
    # square prime power with a deficient conductor forces F = 0
    for q in (9, 25, 18, 45, 75):
        chi0 = principal_character(q)
        vals = F_bruteforce_all_m(chi0, chi0, 1, 1)
        assert np.max(np.abs(vals)) < 1e-6


def test_local_sigma_closed_forms():
    for p in (3, 5, 7, 11, 13):
        chi0 = principal_character(p)
        for m in range(p):
            want = F_bruteforce(chi0, chi0, 1, 1, m)
            got = local_sigma("sigma", p, m)
            assert abs(got - want) < 1e-9
    assert local_sigma("sigma", 7, 1) == -4.0
    assert local_sigma("sigma", 2, 4) == 1.0
    assert local_sigma("sigma", 2, 3) == -1.0


def test_local_sigma_prime_and_tilde():
    # literal summation: only b=2 survives the gcd condition mod 3, so
    # F(chi0, chi, 1, 1, 1) = -sum_a e_3(3a) = -2
    hyp = ExceptionalZeroHypothesis.build(3, 0.9)
    assert local_sigma("sigma_prime", 3, 1, hyp) == -2.0
    for r in (3, 5, 7, 11, 15):
        hyp = ExceptionalZeroHypothesis.build(r, 0.9)
        for p in hyp.odd_primes():
            chi_p = hyp.chi.component(p)
            chi0 = principal_character(p)
            for m in range(p):
                want_prime = F_bruteforce(chi0, chi_p, 1, 1, m)
                got_prime = local_sigma("sigma_prime", p, m, hyp)
                assert abs(got_prime - want_prime) < 1e-8, (p, m)
                want_tilde = F_bruteforce(chi_p, chi_p, 1, 1, m)
                got_tilde = local_sigma("sigma_tilde", p, m, hyp)
                assert abs(got_tilde - want_tilde) < 1e-8, (p, m)
    with pytest.raises(ValueError):
        local_sigma("sigma_prime", 3, 1, None)


def test_sigma_tilde_two_part_bound():
    for r, t in [(12, 2), (24, 3), (3, 0)]:
        hyp = ExceptionalZeroHypothesis.build(r, 0.9)
        assert hyp.t == t
        for m in range(16):
            v = local_sigma("sigma_tilde", 2, m, hyp)
            if t == 0:
                assert v == 1.0
            elif m % 2 == 0:
                assert abs(v) <= 2 ** (2 * t - 1) + 1e-9
            else:
                assert abs(v) < 1e-9


def test_exceptional_hypothesis_validation():
    with pytest.raises(ValueError):
        ExceptionalZeroHypothesis.build(6, 0.9)  # t = 1 not allowed
    with pytest.raises(ValueError):
        ExceptionalZeroHypothesis.build(9, 0.9)  # odd part not squarefree
    with pytest.raises(ValueError):
        ExceptionalZeroHypothesis.build(15, 1.5)
    hyp = ExceptionalZeroHypothesis.build(15, 0.99)
    assert hyp.chi.is_real()
    assert conductor(hyp.chi) == 15
    sq = hyp.chi * hyp.chi
    assert sq.is_principal


def test_u_P_examples():
    assert u_P(1, 1, 7, 1) == pytest.approx(5 / 6)
    assert u_P(3, 1, 7, 1) == pytest.approx(-1 / 6)
    for q in (7, 12, 15):
        for n in range(1, q):
            if math.gcd(n, q) == 1:
                assert u_P(n, 1, q, q) == pytest.approx(0, abs=1e-10)
    with pytest.raises(ValueError):
        u_P(1, 3, 9, 1)


def test_u_P_zero_mean():
    for q in (7, 9, 12, 20):
        total = sum(u_P(n, 1, q, 2) for n in range(1, q + 1) if math.gcd(n, q) == 1)
        assert abs(total) < 1e-9


def test_festi_bounds_small():
    for q in (3, 9, 4, 8, 5, 25):
        chars = character_group(q)
        p = 2 if q % 2 == 0 else (3 if q % 3 == 0 else 5)
        for chi1 in chars:
            for chi2 in chars:
                for j1 in (1, p):
                    for j2 in (1, p):
                        for m in range(q):
                            assert festi_bound_check(chi1, chi2, j1, j2, m), (
                                q,
                                j1,
                                j2,
                                m,
                            )
    with pytest.raises(ValueError):
        festi_bound_check(
            principal_character(6), principal_character(6), 1, 1, 0
        )
