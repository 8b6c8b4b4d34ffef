import pytest

from conftest import ref_poly_mul_linear

from nttkit.errors import FormMismatch, LengthMismatch, ModulusMismatch, SpecMismatch
from nttkit.modarith import counting
from nttkit.polymul import (
    basecase_mul,
    leaf_gammas,
    make_transform_pair,
    ntt_multiply,
    oracle_multiply,
    pointwise_mul,
    reduce_mod_phi,
    schoolbook_cyclic,
    schoolbook_linear,
    schoolbook_nwc,
)
from nttkit.rings import (
    GENERAL,
    TRINOMIAL,
    XN_MINUS_1,
    XN_MINUS_X_MINUS_1,
    XN_PLUS_1,
    Poly,
    RingSpec,
)
from nttkit.transforms import CC, CT, FORWARD, GS, NATURAL, BIT_REVERSED, TransformSpec, ntt_forward


# ---------------------------------------------------------------------------
# schoolbook oracles


def test_linear_examples(rng):
    ring = RingSpec(XN_PLUS_1, 4, 17)
    one = Poly.from_ints([1], ring)
    b = Poly.random(ring, rng)
    assert schoolbook_linear(one, b) == b.coeffs + [0, 0, 0]
    two = RingSpec(XN_PLUS_1, 2, 17)
    assert schoolbook_linear(Poly([1, 1], two), Poly([1, 1], two)) == [1, 2, 1]
    a, c = Poly.random(ring, rng), Poly.random(ring, rng)
    assert schoolbook_linear(a, c)[-1] == a.coeffs[-1] * c.coeffs[-1] % 17


def test_linear_rejects_modulus_mismatch():
    a = Poly([1, 2], RingSpec(XN_PLUS_1, 2, 17))
    b = Poly([1, 2], RingSpec(XN_PLUS_1, 2, 97))
    with pytest.raises(ModulusMismatch):
        schoolbook_linear(a, b)


def test_wrapped_examples():
    nring = RingSpec(XN_PLUS_1, 4, 17)
    x2 = Poly.from_ints([0, 0, 1], nring)
    assert schoolbook_nwc(x2, x2).coeffs == [16, 0, 0, 0]  # x^4 = -1
    cring = RingSpec(XN_MINUS_1, 4, 17)
    x3 = Poly.from_ints([0, 0, 0, 1], cring)
    x1 = Poly.from_ints([0, 1], cring)
    assert schoolbook_cyclic(x3, x1).coeffs == [1, 0, 0, 0]  # x^4 = 1
    with pytest.raises(FormMismatch):
        schoolbook_nwc(Poly([1] * 4, cring), Poly([1] * 4, cring))


def test_wrapped_agree_with_linear_reduction(rng):
    for form, fn in ((XN_MINUS_1, schoolbook_cyclic), (XN_PLUS_1, schoolbook_nwc)):
        for n, q in ((8, 17), (16, 3329), (64, 8380417)):
            ring = RingSpec(form, n, q)
            for _ in range(100):
                a, b = Poly.random(ring, rng), Poly.random(ring, rng)
                direct = fn(a, b).coeffs
                via_linear = reduce_mod_phi(schoolbook_linear(a, b), ring).coeffs
                assert direct == via_linear


def test_numpy_and_bigint_paths_agree(rng):
    # same inputs through the vectorized and arbitrary-precision routes
    n = 16
    small = RingSpec(XN_PLUS_1, n, 12289)
    big = RingSpec(XN_PLUS_1, n, 549755809793)  # forces the bigint path
    for _ in range(20):
        coeffs_a = [rng.randrange(12289) for _ in range(n)]
        coeffs_b = [rng.randrange(12289) for _ in range(n)]
        got_np = schoolbook_linear(Poly(coeffs_a, small), Poly(coeffs_b, small))
        got_big = schoolbook_linear(Poly(coeffs_a, big), Poly(coeffs_b, big))
        assert [v % 12289 for v in got_big] == got_np
        assert got_np == ref_poly_mul_linear(coeffs_a, coeffs_b, 12289)


# ---------------------------------------------------------------------------
# reduction


def test_reduce_examples():
    ring = RingSpec(XN_MINUS_X_MINUS_1, 5, 17)
    low = [3, 1, 4, 1, 5]
    assert reduce_mod_phi(low, ring).coeffs == low  # deg < n unchanged
    xn = [0] * 5 + [1]
    assert reduce_mod_phi(xn, ring).coeffs == [1, 1, 0, 0, 0]  # x^n = x + 1
    tring = RingSpec(TRINOMIAL, 6, 7)
    xn6 = [0] * 6 + [1]
    assert reduce_mod_phi(xn6, tring).coeffs == [6, 0, 0, 1, 0, 0]  # x^6 = x^3 - 1


def test_reduce_general_matches_named(rng):
    # the long-division fallback agrees with the specialized folds
    for named in (RingSpec(XN_MINUS_1, 8, 17), RingSpec(XN_PLUS_1, 8, 17),
                  RingSpec(XN_MINUS_X_MINUS_1, 7, 17), RingSpec(TRINOMIAL, 6, 17)):
        general = RingSpec(GENERAL, named.n, named.q, tuple(named.phi_coeffs()))
        for _ in range(20):
            c = [rng.randrange(17) for _ in range(2 * named.n - 1)]
            assert reduce_mod_phi(c, named).coeffs == reduce_mod_phi(c, general).coeffs


# ---------------------------------------------------------------------------
# leaf products


def test_basecase_examples():
    assert basecase_mul([3], [5], 0, 17) == [15]
    assert basecase_mul([1, 1], [1, 1], 5, 17) == [6, 2]  # (1+x)^2, x^2 = 5
    with pytest.raises(LengthMismatch):
        basecase_mul([1, 2], [1], 5, 17)
    with pytest.raises(LengthMismatch):
        basecase_mul([1, 2, 3], [1, 2, 3], 5, 17)


def test_basecase_karatsuba_bit_identical(rng):
    for beta in (1, 2, 3):
        L = 1 << beta
        q = 3329
        for _ in range(1000 // L):
            u = [rng.randrange(q) for _ in range(L)]
            v = [rng.randrange(q) for _ in range(L)]
            g = rng.randrange(1, q)
            assert basecase_mul(u, v, g, q, False) == basecase_mul(u, v, g, q, True)


def test_basecase_karatsuba_saves_one_mult_per_pair(rng):
    q = 3329
    u = [rng.randrange(q) for _ in range(2)]
    v = [rng.randrange(q) for _ in range(2)]
    with counting() as plain:
        basecase_mul(u, v, 7, q, False)
    with counting() as kara:
        basecase_mul(u, v, 7, q, True)
    # 4 coefficient products + 1 fold vs 3 + 1
    assert plain.mults == 5 and kara.mults == 4


def test_pointwise_identity_and_theorem(rng):
    for n, q, beta in ((64, 7681, 0), (256, 3329, 1), (64, 97, 2)):
        ring = RingSpec(XN_PLUS_1, n, q)
        pair = make_transform_pair(ring, beta)
        one = pair.forward(Poly.from_ints([1], ring))
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        A = pair.forward(a)
        assert pair.pointwise(A, one).values == A.values  # multiplicative identity
        # convolution theorem: forward(oracle product) == A o B
        B = pair.forward(b)
        C = pair.forward(schoolbook_nwc(a, b))
        assert pair.pointwise(A, B).values == C.values


def test_pointwise_rejects_mixed_specs(rng):
    ring = RingSpec(XN_PLUS_1, 8, 17)
    p0 = make_transform_pair(ring, 0)
    p1 = make_transform_pair(ring, 1)
    a = p0.forward(Poly.random(ring, rng))
    b = p1.forward(Poly.random(ring, rng))
    with pytest.raises(SpecMismatch):
        pointwise_mul(a, b)
    with pytest.raises(SpecMismatch):
        pointwise_mul(b, b)  # beta > 0 without a table


# ---------------------------------------------------------------------------
# the pipeline


def test_multiply_identity(rng):
    ring = RingSpec(XN_PLUS_1, 256, 3329)
    pair = make_transform_pair(ring, 1)
    a = Poly.random(ring, rng)
    assert ntt_multiply(a, Poly.from_ints([1], ring), pair).coeffs == a.coeffs


@pytest.mark.parametrize(
    "form,n,q,beta",
    [
        (XN_PLUS_1, 256, 3329, 1),   # kyber shape
        (XN_PLUS_1, 256, 7681, 0),
        (XN_PLUS_1, 256, 8380417, 0),  # dilithium shape
        (XN_MINUS_1, 256, 257, 0),
        (XN_MINUS_1, 64, 3329, 2),
        (XN_PLUS_1, 16, 97, 3),
    ],
)
def test_multiply_matches_oracle(form, n, q, beta, rng):
    ring = RingSpec(form, n, q)
    pair = make_transform_pair(ring, beta)
    for _ in range(20):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        for kara in (False, True):
            got = ntt_multiply(a, b, pair, use_karatsuba=kara)
            assert got.coeffs == oracle_multiply(a, b).coeffs


def test_multiply_algebra(rng):
    ring = RingSpec(XN_PLUS_1, 64, 7681)
    pair = make_transform_pair(ring)
    for _ in range(10):
        a, b, c = (Poly.random(ring, rng) for _ in range(3))
        ab = ntt_multiply(a, b, pair)
        assert ab.coeffs == ntt_multiply(b, a, pair).coeffs
        lhs = ntt_multiply(a, b.add(c), pair)
        rhs = ntt_multiply(a, b, pair).add(ntt_multiply(a, c, pair))
        assert lhs.coeffs == rhs.coeffs


def test_halving_mode_pipeline(rng):
    ring = RingSpec(XN_PLUS_1, 256, 3329)
    pair = make_transform_pair(ring, 1)
    a, b = Poly.random(ring, rng), Poly.random(ring, rng)
    assert ntt_multiply(a, b, pair, halving=True).coeffs == ntt_multiply(a, b, pair).coeffs


def test_twisted_pipeline_multiplies_cyclic(rng):
    # the GS-built domain carries the same chunk images as the CT-built
    # one, so the same leaf products drive a full multiplication
    n, q, beta = 64, 7681, 1
    ring = RingSpec(XN_MINUS_1, n, q)
    from nttkit.modarith import build_twiddles, find_root

    root = find_root(n >> beta, q)
    ftw = build_twiddles(root, n >> beta, q)
    itw = build_twiddles(root, n >> beta, q, inverse=True)
    fs_gs = TransformSpec(CC, GS, FORWARD, NATURAL, BIT_REVERSED, beta)
    fs_ct = TransformSpec(CC, CT, FORWARD, NATURAL, BIT_REVERSED, beta)
    from nttkit.transforms import ntt_inverse

    for _ in range(10):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        A = ntt_forward(a, ftw, fs_gs)
        assert A.values == ntt_forward(a, ftw, fs_ct).values
        B = ntt_forward(b, ftw, fs_gs)
        C = pointwise_mul(A, B, ftw)
        got = ntt_inverse(C, itw, fs_gs.inverse_of())
        assert got.coeffs == schoolbook_cyclic(a, b).coeffs


def test_leaf_gammas_match_table(rng):
    n, q, beta = 256, 3329, 1
    ring = RingSpec(XN_PLUS_1, n, q)
    pair = make_transform_pair(ring, beta)
    from nttkit.modarith import bitrev

    psi = pair.fwd_tw.root
    m = n >> beta
    gam = leaf_gammas(pair.fwd_spec, pair.fwd_tw, n)
    assert gam == [pow(psi, 2 * bitrev(p, m) + 1, q) for p in range(m)]
