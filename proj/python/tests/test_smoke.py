import cmath
import json
import math

import mpmath
import pytest

import sumcheck as sc


def test_arithmetic():
    assert sc.is_prime(97) and not sc.is_prime(91)
    assert sc.euler_phi(36) == 12
    assert sc.moebius(30) == -1 and sc.moebius(12) == 0
    assert sc.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert (7 * sc.mod_inverse(7, 30)) % 30 == 1


def test_kloosterman_against_python():
    for m, n, c in [(1, 1, 7), (2, 5, 13), (3, 4, 15)]:
        ref = sum(
            cmath.exp(2j * math.pi * (m * x + n * pow(x, -1, c)) / c) for x in range(1, c) if math.gcd(x, c) == 1
        )
        assert abs(sc.kloosterman(m, n, c) - ref) < 1e-12
    assert abs(sc.kl2_normalized(3, 101)) <= 2
    for q, b in [(12, 4), (30, 6), (7, 0)]:
        ref = sum(cmath.exp(2j * math.pi * b * x / q) for x in range(1, q + 1) if math.gcd(x, q) == 1)
        assert abs(sc.ramanujan_sum(q, b) - ref) < 1e-9


def test_gauss_sum_modulus():
    for chi in sc.primitive_characters(11):
        assert chi.is_primitive
        assert abs(abs(sc.gauss_sum(chi)) - math.sqrt(11)) < 1e-12


def test_factorizations_agree():
    args = dict(M1=5, M2=3, chi1=1, chi2=1, q=2, r=1, n1=1, n2=2, m=1)
    for sign in (1, -1):
        b1 = sc.c1_bruteforce(**args, sign_n2=sign)
        f1 = sc.c1_factored(**args, sign_n2=sign)
        assert abs(b1 - f1) <= 1e-8 * (1 + abs(b1))
        b2 = sc.c2_bruteforce(**args, sign_m=sign)
        f2 = sc.c2_factored(**args, sign_m=sign)
        assert abs(b2 - f2) <= 1e-8 * (1 + abs(b2))


def test_invalid_instance_raises_with_code():
    with pytest.raises(sc.SumcheckError) as e:
        sc.c1_bruteforce(M1=5, M2=5, chi1=1, chi2=1, q=1, r=1, n1=1, n2=1, m=1)
    assert e.value.code


def test_delta_symbol():
    w = sc.DfiWeight(40)
    values = w.delta([0, 1, 7, -20])
    assert abs(values[0] - 1) <= 1e-6
    assert all(abs(v) <= 1e-6 for v in values[1:])


def test_special_functions_against_mpmath():
    for n, x in [(0, 0.5), (11, 3.0), (11, 40.0)]:
        assert abs(sc.bessel_j(n, x) - float(mpmath.besselj(n, x))) < 1e-13
    nu = complex(0.5, 3.0)
    ref = complex(mpmath.besselj(mpmath.mpc(nu.real, nu.imag), 2.0))
    assert abs(sc.bessel_j_complex(nu, 2.0) - ref) < 1e-12 * max(1, abs(ref))
    z = complex(0.3, 2.0)
    assert abs(sc.gamma_complex(z) - complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))) < 1e-12


def test_tau_coefficients():
    assert sc.tau_coefficients(10) == [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_voronoi_one_residue():
    lhs, rhs = sc.gl2_voronoi(1, 3, 20)
    assert abs(lhs - rhs) <= 1e-5 * abs(lhs)


def test_run_suite_from_config(tmp_path):
    cfg = tmp_path / "grid.ini"
    cfg.write_text("[cancellation]\ntrace_primes = 5\ntrace_tuples = 2\nrange = 5:7\ntuples = 3\n")
    summary, text = sc.run_suite("cancellation", str(cfg))
    assert summary["exit_status"] == 0 and summary["failed"] == 0
    report = json.loads(text)
    assert len(report["cases"]) == summary["cases"]
    assert "cancellation" in sc.suite_names
    with pytest.raises(sc.SumcheckError):
        sc.run_suite("nope")
