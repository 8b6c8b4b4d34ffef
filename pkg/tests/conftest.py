"""Shared helpers: independent brute-force oracles and parameter grids."""

import random

import pytest

ACCEPTANCE_QS = (257, 3329, 7681, 12289, 8380417)


def direct_ntt_cc(coeffs, omega, q):
    """O(n^2) summation a_hat_j = sum_i a_i omega^(ij), natural order."""
    n = len(coeffs)
    return [sum(coeffs[i] * pow(omega, i * j, q) for i in range(n)) % q for j in range(n)]


def direct_ntt_nwc(coeffs, psi, q):
    """O(n^2) merged-psi summation a_hat_j = sum_i a_i psi^(i(2j+1))."""
    n = len(coeffs)
    return [sum(coeffs[i] * pow(psi, i * (2 * j + 1), q) for i in range(n)) % q
            for j in range(n)]


def direct_intt_cc(values, omega, q):
    n = len(values)
    ninv = pow(n, -1, q)
    return [ninv * sum(values[j] * pow(omega, -i * j, q) for j in range(n)) % q
            for i in range(n)]


def max_order(q):
    """Largest power of two dividing q - 1."""
    d = q - 1
    o = 1
    while d % 2 == 0:
        d //= 2
        o *= 2
    return o


def valid_qs(kind, n, qs=ACCEPTANCE_QS):
    need = 2 * n if kind == "NWC" else n
    return [q for q in qs if max_order(q) % need == 0]


def ref_poly_mul_linear(a, b, q):
    """Hand-rolled linear convolution kept independent of the package."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return out


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
