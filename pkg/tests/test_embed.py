import pytest

from nttkit import bigmod, modarith
from nttkit.embed import (
    EmbedChain,
    Good,
    LiftModulus,
    PlainNtt,
    Schonhage,
    ZeroPad,
    _block_ntt,
    _neg_rotate,
    general_phi_multiply,
    good_map,
    good_multiply,
    good_unmap,
    nussbaumer_multiply,
    schonhage_multiply,
    zero_pad_multiply,
)
from nttkit.errors import BadShape, ChainMismatch, PadTooSmall, ParameterCondition, ShapeCondition
from nttkit.polymul import (
    make_transform_pair,
    ntt_multiply,
    reduce_mod_phi,
    schoolbook_cyclic,
    schoolbook_linear,
    schoolbook_nwc,
)
from nttkit.rings import Poly, RingSpec, XN_MINUS_1, XN_MINUS_X_MINUS_1, XN_PLUS_1


# ---------------------------------------------------------------------------
# zero padding


def test_zero_pad_exact_at_2n(rng):
    # n' = 2n exactly: no wraparound, any exact backend works
    src = RingSpec(XN_MINUS_1, 12, 7681)
    for _ in range(20):
        a, b = Poly.random(src, rng), Poly.random(src, rng)
        got = zero_pad_multiply(a, b, 24, schoolbook_cyclic)
        want = reduce_mod_phi(schoolbook_linear(a, b), src)
        assert got.coeffs == want.coeffs
    # and through a real transform backend at the next power of two
    src16 = RingSpec(XN_MINUS_1, 16, 7681)
    pair = make_transform_pair(RingSpec(XN_MINUS_1, 32, 7681), 0)
    for _ in range(20):
        a, b = Poly.random(src16, rng), Poly.random(src16, rng)
        got = zero_pad_multiply(a, b, 32, lambda x, y: ntt_multiply(x, y, pair))
        want = reduce_mod_phi(schoolbook_linear(a, b), src16)
        assert got.coeffs == want.coeffs


def test_zero_pad_too_small(rng):
    src = RingSpec(XN_MINUS_1, 12, 7681)
    a = Poly.random(src, rng)
    with pytest.raises(PadTooSmall):
        zero_pad_multiply(a, a, 22, lambda x, y: x)


def test_zero_pad_zero_operand(rng):
    src = RingSpec(XN_MINUS_1, 12, 7681)
    pair = make_transform_pair(RingSpec(XN_MINUS_1, 32, 7681), 0)
    got = zero_pad_multiply(Poly.random(src, rng), Poly.zero(src), 32,
                            lambda x, y: ntt_multiply(x, y, pair))
    assert got.coeffs == [0] * 12


# ---------------------------------------------------------------------------
# Good's re-indexing


def test_good_map_example():
    lay = good_map(list(range(12)), 3, 2)
    assert lay.rows[2][1] == 5  # l=5 -> (5 mod 3, 5 mod 4)
    # inverse index formula: (4^-1 mod 3)*4*2 + (3^-1 mod 4)*3*1 = 17 = 5 (mod 12)
    assert good_unmap(lay) == list(range(12))


def test_good_bijection(rng):
    for h in (1, 3, 5, 7, 9):
        for k in range(1, 10):
            n = h << k
            coeffs = [rng.randrange(1 << 20) for _ in range(n)]
            assert good_unmap(good_map(coeffs, h, k)) == coeffs


def test_good_rejects_bad_shape():
    with pytest.raises(BadShape):
        good_map([0] * 12, 4, 2)  # even h
    with pytest.raises(BadShape):
        good_map([0] * 10, 3, 2)  # wrong length


def test_good_multiply_small(rng):
    ring = RingSpec(XN_MINUS_1, 12, 13)  # 13 = 1 (mod 4)
    for _ in range(50):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        assert good_multiply(a, b, 3, 2, 13).coeffs == schoolbook_cyclic(a, b).coeffs


def test_good_h1_degenerates_to_plain(rng):
    ring = RingSpec(XN_MINUS_1, 16, 17)
    pair = make_transform_pair(ring, 0)
    for _ in range(10):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        got = good_multiply(a, b, 1, 4, 17)
        assert got.coeffs == ntt_multiply(a, b, pair).coeffs


def test_good_congruence_checked():
    ring = RingSpec(XN_MINUS_1, 12, 13)
    a = Poly.zero(ring)
    with pytest.raises(ParameterCondition):
        good_multiply(a, a, 3, 2, 19)  # 19 != 1 (mod 4)


# ---------------------------------------------------------------------------
# block embeddings


def test_neg_rotate_behaviour():
    q = 17
    blk = [1, 2, 3, 4]
    assert _neg_rotate(blk, 0, q) == [1, 2, 3, 4]
    assert _neg_rotate(blk, 1, q) == [(17 - 4) % 17, 1, 2, 3]
    assert _neg_rotate(blk, 4, q) == [(17 - x) % 17 for x in blk]  # x^L = -1
    assert _neg_rotate(blk, 8, q) == blk  # full cycle, x^(2L) = 1
    assert _neg_rotate(_neg_rotate(blk, 3, q), 5, q) == blk
    assert _neg_rotate(_neg_rotate(blk, 3, q), 1, q) == [(17 - x) % 17 for x in blk]


def test_block_transform_multiplies_nothing(rng):
    blocks = [[rng.randrange(17) for _ in range(8)] for _ in range(8)]
    with modarith.counting() as c:
        _block_ntt(blocks, 1, 17, inverse=False)
    assert c.mults == 0
    with modarith.counting() as ci:
        _block_ntt(blocks, 1, 17, inverse=True)
    assert ci.mults == 0


@pytest.mark.parametrize("q", [17, 4591])
def test_schonhage_smallest(q, rng):
    ring = RingSpec(XN_MINUS_1, 8, q)
    for _ in range(100):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        got = schonhage_multiply(a, b, 2, 2)
        assert got.coeffs == schoolbook_cyclic(a, b).coeffs


def test_schonhage_shape_errors(rng):
    ring = RingSpec(XN_MINUS_1, 8, 17)
    a = Poly.random(ring, rng)
    with pytest.raises(BadShape):
        schonhage_multiply(a, a, 2, 4)  # 2mn = 16 != 8
    ring_even = RingSpec(XN_MINUS_1, 8, 16)
    z = Poly.zero(ring_even)
    with pytest.raises(ParameterCondition):
        schonhage_multiply(z, z, 2, 2)  # gcd(2n, q) != 1


def test_nussbaumer_examples(rng):
    ring = RingSpec(XN_PLUS_1, 8, 17)
    one = Poly.from_ints([1], ring)
    b = Poly.random(ring, rng)
    assert nussbaumer_multiply(one, b, 2, 2).coeffs == b.coeffs
    for _ in range(100):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        assert nussbaumer_multiply(a, b, 2, 2).coeffs == schoolbook_nwc(a, b).coeffs


def test_nussbaumer_shape_condition(rng):
    ring = RingSpec(XN_PLUS_1, 16, 17)
    a = Poly.random(ring, rng)
    with pytest.raises(ShapeCondition):
        nussbaumer_multiply(a, a, 4, 2)  # n < m


def test_nussbaumer_recursive_64(rng):
    ring = RingSpec(XN_PLUS_1, 64, 4591)
    for _ in range(10):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        assert nussbaumer_multiply(a, b, 4, 8).coeffs == schoolbook_nwc(a, b).coeffs


def test_schonhage_with_nussbaumer_inside(rng):
    # the published route: length 2048 cyclic, inner ring x^64 + 1
    ring = RingSpec(XN_MINUS_1, 2048, 4591)
    a, b = Poly.random(ring, rng), Poly.random(ring, rng)
    got = schonhage_multiply(a, b, 32, 32)
    assert got.coeffs == schoolbook_cyclic(a, b).coeffs


# ---------------------------------------------------------------------------
# chains


def ntruprime_ring(n=761, q=4591):
    return RingSpec(XN_MINUS_X_MINUS_1, n, q)


def ref_ntruprime(a, b):
    # independent reduction: x^n = x + 1 folded by hand
    n, q = a.ring.n, a.ring.q
    c = list(schoolbook_linear(a, b))
    for i in range(len(c) - 1, n - 1, -1):
        v = c[i]
        c[i - n + 1] = (c[i - n + 1] + v) % q
        c[i - n] = (c[i - n] + v) % q
    return c[:n]


def test_chain_schonhage_route(rng):
    ring = ntruprime_ring()
    chain = EmbedChain((ZeroPad(2048), Schonhage(32, 32)))
    a, b = Poly.random(ring, rng), Poly.random_small(ring, rng, 1)
    got = general_phi_multiply(a, b, chain)
    assert got.coeffs == ref_ntruprime(a, b)
    assert got.coeffs == reduce_mod_phi(schoolbook_linear(a, b), ring).coeffs


def test_chain_good_route(rng):
    ring = ntruprime_ring()
    chain = EmbedChain((ZeroPad(1536), LiftModulus(6984193), Good(3, 9)))
    a, b = Poly.random(ring, rng), Poly.random_small(ring, rng, 1)
    assert general_phi_multiply(a, b, chain).coeffs == ref_ntruprime(a, b)


def test_chain_routes_agree(rng):
    # two different embeddings of the same product coincide
    ring = ntruprime_ring(653, 4621)
    a, b = Poly.random(ring, rng), Poly.random_small(ring, rng, 1)
    via_schonhage = general_phi_multiply(a, b, EmbedChain((ZeroPad(2048), Schonhage(32, 32))))
    from nttkit.planner import search_prime

    N = search_prime(512, bigmod.required_bound(653, 4621, (bigmod.FULL_SMALL, 2)))
    via_good = general_phi_multiply(
        a, b, EmbedChain((ZeroPad(1536), LiftModulus(N), Good(3, 9))))
    assert via_schonhage.coeffs == via_good.coeffs


def test_chain_pad_only(rng):
    # single-step chain over a transform-friendly q equals plain padding
    ring = RingSpec(XN_MINUS_X_MINUS_1, 5, 7681)
    chain = EmbedChain((ZeroPad(16),))
    pair = make_transform_pair(RingSpec(XN_MINUS_1, 16, 7681), 0)
    for _ in range(20):
        a, b = Poly.random(ring, rng), Poly.random(ring, rng)
        got = general_phi_multiply(a, b, chain)
        want = zero_pad_multiply(a, b, 16, lambda x, y: ntt_multiply(x, y, pair))
        assert got.coeffs == want.coeffs


def test_chain_validation():
    with pytest.raises(ChainMismatch):
        EmbedChain((Schonhage(2, 2), ZeroPad(8)))  # pad not first
    with pytest.raises(ChainMismatch):
        EmbedChain((ZeroPad(8), Schonhage(2, 2), PlainNtt(0)))  # two terminals
    ring = ntruprime_ring()
    a = Poly.zero(ring)
    with pytest.raises(ChainMismatch):
        # terminal shape disagrees with the pad target
        general_phi_multiply(a, a, EmbedChain((ZeroPad(2048), Good(3, 9))))


def test_ntru_chain_and_direct_good_agree(rng):
    ring = RingSpec(XN_MINUS_1, 701, 8192)
    a, b = Poly.random(ring, rng), Poly.random_small(ring, rng, 1)
    chain = EmbedChain((ZeroPad(1536), LiftModulus(5747201), Good(3, 9)))
    got_chain = general_phi_multiply(a, b, chain)
    got_direct = zero_pad_multiply(a, b, 1536, lambda x, y: good_multiply(x, y, 3, 9, 5747201))
    assert got_chain.coeffs == got_direct.coeffs == schoolbook_cyclic(a, b).coeffs
