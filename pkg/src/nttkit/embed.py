"""Ring embeddings that manufacture transform-friendly structure.

Four routes into rings where fast transforms exist: zero-padding into a
larger wraparound-free ring, the odd-times-power-of-two re-indexing
(Good), and the two block embeddings whose root of unity is the
indeterminate itself (Schoenhage for x^N - 1, Nussbaumer for x^N + 1),
which place no root-of-unity condition on the coefficient modulus.
Chains compose these steps and finish with the source-ring reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import bigmod, modarith, polymul
from .errors import (
    BadShape,
    ChainMismatch,
    PadTooSmall,
    ParameterCondition,
    RingMismatch,
    ShapeCondition,
)
from .modarith import bitrev, mod_inv
from .rings import XN_MINUS_1, XN_PLUS_1, Poly, RingSpec

SCHOOLBOOK_FLOOR = 8  # inner rings at or below this length multiply directly


# ---------------------------------------------------------------------------
# zero padding


def zero_pad_multiply(a: Poly, b: Poly, n_prime: int, backend, form: str = XN_MINUS_1) -> Poly:
    """Multiply in x^n_prime +- 1 (no wraparound), then reduce to the source.

    ``backend(a', b')`` multiplies two Polys in the padded ring over the
    source modulus and returns the product there.
    """
    if a.ring != b.ring:
        raise RingMismatch("operands belong to different rings")
    src = a.ring
    if n_prime < 2 * src.n - 1:
        raise PadTooSmall(f"n'={n_prime} cannot hold a degree-{2 * src.n - 2} product")
    big = RingSpec(form, n_prime, src.q)
    ap = Poly(a.coeffs + [0] * (n_prime - src.n), big)
    bp = Poly(b.coeffs + [0] * (n_prime - src.n), big)
    c = backend(ap, bp)
    return polymul.reduce_mod_phi(c.coeffs, src)


# ---------------------------------------------------------------------------
# Good's re-indexing


@dataclass
class GoodLayout:
    """h x 2^k matrix view of a length h*2^k cyclic polynomial."""

    h: int
    k: int
    rows: list  # rows[i][j] = a_l with i = l mod h, j = l mod 2^k


def good_map(coeffs, h: int, k: int) -> GoodLayout:
    two_k = 1 << k
    if h % 2 == 0 or len(coeffs) != h * two_k:
        raise BadShape(f"need odd h and length h*2^k, got h={h}, len={len(coeffs)}")
    rows = [[0] * two_k for _ in range(h)]
    for l, c in enumerate(coeffs):
        rows[l % h][l % two_k] = c
    return GoodLayout(h, k, rows)


def good_unmap(layout: GoodLayout) -> list:
    """Inverse re-indexing: l = (2^-k mod h)*2^k*i + (h^-1 mod 2^k)*h*j."""
    h, two_k = layout.h, 1 << layout.k
    n = h * two_k
    u = mod_inv(two_k % h, h) * two_k % n
    v = mod_inv(h % two_k, two_k) * h % n
    out = [0] * n
    for i in range(h):
        row = layout.rows[i]
        for j in range(two_k):
            out[(u * i + v * j) % n] = row[j]
    return out


def good_multiply(a: Poly, b: Poly, h: int, k: int, inner_modulus: int, unsafe_bound=False) -> Poly:
    """Row transforms over Z_N, column cyclic products, row inverses, unmap.

    Operands live in x^(h*2^k) - 1 over their own q; they are lifted
    centered into Z_N = Z_inner_modulus (the identity when N == q),
    multiplied there, and mapped back centered.
    """
    if a.ring != b.ring:
        raise RingMismatch("operands belong to different rings")
    src = a.ring
    if src.form != XN_MINUS_1 or src.n != h * (1 << k):
        raise BadShape(f"ring must be x^(h*2^k) - 1 of degree {h * (1 << k)}")
    N = inner_modulus
    two_k = 1 << k
    if (N - 1) % two_k != 0:
        raise ParameterCondition(f"inner modulus {N} fails N = 1 (mod 2^k)")
    la, lb = bigmod.lift_centered(a, N), bigmod.lift_centered(b, N)
    if N != src.q and not unsafe_bound:  # self-lift wraps mod q by design
        bigmod._check_dynamic_bound(la, lb, N)
    row_ring = RingSpec(XN_MINUS_1, two_k, N)
    pair = polymul.make_transform_pair(row_ring, 0)
    ga = good_map(list(la.coeffs), h, k)
    gb = good_map(list(lb.coeffs), h, k)
    da = [pair.forward(Poly(r, row_ring)) for r in ga.rows]
    db = [pair.forward(Poly(r, row_ring)) for r in gb.rows]
    col_ring = RingSpec(XN_MINUS_1, h, N)
    out_vals = [[0] * two_k for _ in range(h)]
    for j in range(two_k):
        u = Poly([da[i].values[j] for i in range(h)], col_ring)
        v = Poly([db[i].values[j] for i in range(h)], col_ring)
        w = polymul.schoolbook_cyclic(u, v)
        for i in range(h):
            out_vals[i][j] = w.coeffs[i]
    from .transforms import NttDomainPoly

    rows = []
    for i in range(h):
        dom = NttDomainPoly(out_vals[i], pair.fwd_spec, row_ring, 1)
        rows.append(pair.inverse(dom).coeffs)
    coeffs = good_unmap(GoodLayout(h, k, rows))
    return Poly(bigmod.recover_centered(coeffs, N, src.q), src)


# ---------------------------------------------------------------------------
# block vectors over Z_q[x]/(x^L + 1): helpers for the two block embeddings


def _neg_rotate(block, t: int, q: int):
    """x^t * block in Z_q[x]/(x^L + 1); t may be any integer, L = len.

    Pure rotate-and-negate: entries that wrap past x^L pick up a sign,
    and t >= L flips every sign once more.  No multiplications.
    """
    L = len(block)
    t %= 2 * L
    neg = t >= L
    if neg:
        t -= L
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.subs += L - t if neg else t
    head = block[L - t :]  # wraps: negated unless neg cancels it
    tail = block[: L - t]
    if neg:
        return list(head) + [(q - x) % q for x in tail]
    return [(q - x) % q for x in head] + list(tail)


def _block_add(u, v, q):
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.adds += len(u)
    return [(x + y) % q for x, y in zip(u, v)]


def _block_sub(u, v, q):
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.subs += len(u)
    return [(x - y) % q for x, y in zip(u, v)]


def _block_scale(u, s, q):
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.mults += len(u)
    return [x * s % q for x in u]


def _nega_mul(u, v, q):
    """Negacyclic block product with the recursion floor at length 8."""
    L = len(u)
    if L <= SCHOOLBOOK_FLOOR:
        ring = RingSpec(XN_PLUS_1, L, q) if L > 1 else None
        if L == 1:
            return [u[0] * v[0] % q]
        return polymul.schoolbook_nwc(Poly(list(u), ring), Poly(list(v), ring)).coeffs
    m = 1 << ((L.bit_length() - 2) // 2)  # balanced split, n >= m
    n = L // (2 * m)
    return nussbaumer_multiply(
        Poly(list(u), RingSpec(XN_PLUS_1, L, q)),
        Poly(list(v), RingSpec(XN_PLUS_1, L, q)),
        m,
        n,
    ).coeffs


def _block_ntt(blocks, root_stride: int, q: int, inverse: bool):
    """In-place cyclic transform of a vector of x^L + 1 blocks.

    Twiddles are powers of x^root_stride, i.e. pure negacyclic rotations;
    no modular multiplications occur.  Forward runs the natural-input
    CT schedule, inverse the bit-reversed-input GS schedule (reorder-free
    pairing), with the final 1/len scaling left to the caller.
    """
    m = len(blocks)
    half = m // 2
    levels = []
    l = 1
    while l <= half:
        levels.append(l)
        l <<= 1
    if not inverse:
        levels.reverse()
    for L in levels:
        nblocks = m // (2 * L)
        pos = 0
        for i in range(nblocks):
            e = bitrev(i, nblocks) * L * root_stride
            end = pos + L
            for j in range(pos, end):
                if not inverse:
                    t = _neg_rotate(blocks[j + L], e, q)
                    u = blocks[j]
                    blocks[j] = _block_add(u, t, q)
                    blocks[j + L] = _block_sub(u, t, q)
                else:
                    u = blocks[j]
                    v = blocks[j + L]
                    blocks[j] = _block_add(u, v, q)
                    blocks[j + L] = _neg_rotate(_block_sub(u, v, q), -e, q)
            pos = end + L
    return blocks


# ---------------------------------------------------------------------------
# Schoenhage: x^(2mn) - 1 via (Z_q[x]/(x^2m + 1))[y]/(y^2n - 1)


def schonhage_multiply(a: Poly, b: Poly, m: int, n: int) -> Poly:
    """Cyclic product of length 2mn using the synthetic 4m-th root x.

    Blocks of m coefficients become y-coefficients; the 2n-point cyclic
    transform over Z_q[x]/(x^2m + 1) twiddles by rotations of x, block
    products recurse (Nussbaumer) or fall back to schoolbook at the
    floor, and y = x^m substitutes back at the end.
    """
    if a.ring != b.ring:
        raise RingMismatch("operands belong to different rings")
    src = a.ring
    q = src.q
    if src.form != XN_MINUS_1 or src.n != 2 * m * n:
        raise BadShape(f"ring must be x^(2mn) - 1 with 2mn = {2 * m * n}")
    if m < 1 or n < 1 or (2 * m) % n != 0:
        raise BadShape("need n | 2m so x^(2m/n) has order 2n")
    if gcd(2 * n, q) != 1:
        raise ParameterCondition(f"2n = {2 * n} must be invertible mod q = {q}")
    L = 2 * m
    stride = 2 * m // n  # x^stride has order 2n in x^2m + 1
    blocks_a = [a.coeffs[j * m : (j + 1) * m] + [0] * m for j in range(2 * n)]
    blocks_b = [b.coeffs[j * m : (j + 1) * m] + [0] * m for j in range(2 * n)]
    _block_ntt(blocks_a, stride, q, inverse=False)
    _block_ntt(blocks_b, stride, q, inverse=False)
    prod = [_nega_mul(u, v, q) for u, v in zip(blocks_a, blocks_b)]
    _block_ntt(prod, stride, q, inverse=True)
    s = mod_inv(2 * n, q)
    prod = [_block_scale(blk, s, q) for blk in prod]
    out = [0] * (2 * m * n)
    size = 2 * m * n
    for j, blk in enumerate(prod):  # substitute y = x^m
        base = m * j
        for i, val in enumerate(blk):
            if val:
                out[(base + i) % size] = (out[(base + i) % size] + val) % q
    return Poly(out, src)


# ---------------------------------------------------------------------------
# Nussbaumer: x^(2mn) + 1 via (Z_q[y]/(y^2n + 1))[x]/(x^m - y)


def nussbaumer_multiply(a: Poly, b: Poly, m: int, n: int) -> Poly:
    """Negacyclic product of length 2mn using the synthetic 4n-th root y."""
    if a.ring != b.ring:
        raise RingMismatch("operands belong to different rings")
    src = a.ring
    q = src.q
    if src.form != XN_PLUS_1 or src.n != 2 * m * n:
        raise BadShape(f"ring must be x^(2mn) + 1 with 2mn = {2 * m * n}")
    if n < m:
        raise ShapeCondition("need n >= m so x-products avoid wraparound")
    if m < 2:  # m = 1 would recurse on an inner ring of the same length
        raise ShapeCondition("need m >= 2 for a strictly smaller inner ring")
    if gcd(2 * n, q) != 1:
        raise ParameterCondition(f"2n = {2 * n} must be invertible mod q = {q}")
    L = 2 * n
    # part i collects coefficients congruent to i mod m, as a y-poly
    parts_a = [list(a.coeffs[i::m]) for i in range(m)] + [[0] * L for _ in range(L - m)]
    parts_b = [list(b.coeffs[i::m]) for i in range(m)] + [[0] * L for _ in range(L - m)]
    _block_ntt(parts_a, 2, q, inverse=False)  # y^2 has order 2n in y^2n + 1
    _block_ntt(parts_b, 2, q, inverse=False)
    prod = [_nega_mul(u, v, q) for u, v in zip(parts_a, parts_b)]
    _block_ntt(prod, 2, q, inverse=True)
    s = mod_inv(L, q)
    prod = [_block_scale(blk, s, q) for blk in prod]
    # fold x^m = y: true x-degree is < 2m - 1 <= L
    for t in range(m, min(2 * m - 1, L)):
        prod[t - m] = _block_add(prod[t - m], _neg_rotate(prod[t], 1, q), q)
    out = [0] * (2 * m * n)
    for i in range(m):
        for j in range(L):
            out[m * j + i] = prod[i][j]
    return Poly(out, src)


# ---------------------------------------------------------------------------
# embedding chains


@dataclass(frozen=True)
class ZeroPad:
    n_prime: int
    form: str = XN_MINUS_1


@dataclass(frozen=True)
class LiftModulus:
    modulus: int


@dataclass(frozen=True)
class Good:
    h: int
    k: int


@dataclass(frozen=True)
class Schonhage:
    m: int
    n: int


@dataclass(frozen=True)
class Nussbaumer:
    m: int
    n: int


@dataclass(frozen=True)
class PlainNtt:
    beta: int = 0


@dataclass(frozen=True)
class EmbedChain:
    """Ordered embedding steps: optional ZeroPad, optional LiftModulus,
    then one terminal multiplier (PlainNtt when omitted)."""

    steps: tuple

    def __post_init__(self):
        seen_terminal = False
        for i, s in enumerate(self.steps):
            if isinstance(s, ZeroPad) and i != 0:
                raise ChainMismatch("ZeroPad must be the first step")
            if isinstance(s, LiftModulus) and i > 1:
                raise ChainMismatch("LiftModulus must precede the terminal step")
            if isinstance(s, (Good, Schonhage, Nussbaumer, PlainNtt)):
                if seen_terminal:
                    raise ChainMismatch("chain has more than one terminal step")
                seen_terminal = True


def general_phi_multiply(a: Poly, b: Poly, chain: EmbedChain) -> Poly:
    """Run the chain in a wraparound-free big ring, then reduce mod phi, mod q."""
    if a.ring != b.ring:
        raise RingMismatch("operands belong to different rings")
    src = a.ring
    steps = list(chain.steps)
    pad = None
    lift = None
    terminal = PlainNtt()
    for s in steps:
        if isinstance(s, ZeroPad):
            pad = s
        elif isinstance(s, LiftModulus):
            lift = s
        else:
            terminal = s

    if pad is None:
        raise ChainMismatch("general-phi chains start with ZeroPad")
    in_place = pad.n_prime == src.n and pad.form == src.form
    if not in_place and pad.n_prime < 2 * src.n - 1:
        raise PadTooSmall(f"pad target {pad.n_prime} below 2n-1 = {2 * src.n - 1}")

    def sizes_match(expected):
        if pad.n_prime != expected:
            raise ChainMismatch(
                f"terminal step expects length {expected}, pad gives {pad.n_prime}"
            )

    def backend(ap: Poly, bp: Poly) -> Poly:
        if isinstance(terminal, Good):
            sizes_match(terminal.h << terminal.k)
            N = lift.modulus if lift else ap.ring.q
            return good_multiply(ap, bp, terminal.h, terminal.k, N)
        if isinstance(terminal, Schonhage):
            sizes_match(2 * terminal.m * terminal.n)
            if lift:
                return _lifted(ap, bp, lift.modulus,
                               lambda x, y: schonhage_multiply(x, y, terminal.m, terminal.n))
            return schonhage_multiply(ap, bp, terminal.m, terminal.n)
        if isinstance(terminal, Nussbaumer):
            sizes_match(2 * terminal.m * terminal.n)
            if lift:
                return _lifted(ap, bp, lift.modulus,
                               lambda x, y: nussbaumer_multiply(x, y, terminal.m, terminal.n))
            return nussbaumer_multiply(ap, bp, terminal.m, terminal.n)
        # plain pipeline, over the lifted modulus when one is given
        if lift:
            return bigmod.bigprime_multiply(
                ap, bp, lift.modulus, terminal.beta, unsafe_bound=True
            )
        pair = polymul.make_transform_pair(ap.ring, terminal.beta)
        return polymul.ntt_multiply(ap, bp, pair)

    if in_place:  # ring already has the terminal shape: no embedding
        return backend(a, b)
    return zero_pad_multiply(a, b, pad.n_prime, backend, pad.form)


def _lifted(ap: Poly, bp: Poly, N: int, mul) -> Poly:
    la, lb = bigmod.lift_centered(ap, N), bigmod.lift_centered(bp, N)
    bigmod._check_dynamic_bound(la, lb, N)
    big = RingSpec(ap.ring.form, ap.ring.n, N)
    c = mul(Poly(list(la.coeffs), big), Poly(list(lb.coeffs), big))
    return Poly(bigmod.recover_centered(c.coeffs, N, ap.ring.q), ap.ring)
