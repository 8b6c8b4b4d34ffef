"""Schoolbook convolution oracles, leaf products and the NTT pipeline.

The schoolbook functions are the verification oracles for every fast
pipeline in the package.  They deliberately share no modular helpers
with the fast path: reduction is inline ``% q`` (or vectorized int64
numpy when provably overflow-free), and the wrap-around sums follow the
convolution definitions directly instead of reusing reduce_mod_phi.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import modarith, rings, transforms
from .errors import (
    FormMismatch,
    LengthMismatch,
    ModulusMismatch,
    ParameterCondition,
    SpecMismatch,
)
from .modarith import BIT_REVERSED, NoSuchRoot, bitrev, build_twiddles, find_root
from .rings import TRINOMIAL, XN_MINUS_1, XN_MINUS_X_MINUS_1, XN_PLUS_1, Poly, RingSpec
from .transforms import CC, CT, FORWARD, NATURAL, NWC, NttDomainPoly, TransformSpec

_INT64_LIMIT = 2**62  # headroom under int64 for sums of cross products


def _np_exact(n: int, q: int) -> bool:
    # linear convolution sums n products < q^2; wrap folds add two of them
    return 2 * n * (q - 1) * (q - 1) < _INT64_LIMIT


# ---------------------------------------------------------------------------
# oracles


def schoolbook_linear(a: Poly, b: Poly) -> list:
    """Exact linear convolution: c_k = sum_{i+j=k} a_i b_j mod q."""
    if a.ring.q != b.ring.q:
        raise ModulusMismatch("operands carry different moduli")
    q = a.ring.q
    x, y = a.coeffs, b.coeffs
    n1, n2 = len(x), len(y)
    if _np_exact(min(n1, n2), q):
        c = np.convolve(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        return [int(v) for v in c % q]
    out = [0] * (n1 + n2 - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                out[i + j] += xi * yj
    return [v % q for v in out]


def _schoolbook_wrapped(a: Poly, b: Poly, form: str, sign: int) -> Poly:
    if a.ring != b.ring:
        raise FormMismatch("operands belong to different rings")
    if a.ring.form != form:
        raise FormMismatch(f"expected ring form {form!r}, got {a.ring.form!r}")
    n, q = a.ring.n, a.ring.q
    x, y = a.coeffs, b.coeffs
    if _np_exact(n, q):
        c = np.convolve(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        low = c[:n].copy()
        low[: n - 1] += sign * c[n:]
        return Poly([int(v) for v in low % q], a.ring)
    out = []
    for k in range(n):
        s = 0
        for i in range(k + 1):
            s += x[i] * y[k - i]
        t = 0
        for i in range(k + 1, n):
            t += x[i] * y[k + n - i]
        out.append((s + sign * t) % q)
    return Poly(out, a.ring)


def schoolbook_cyclic(a: Poly, b: Poly) -> Poly:
    """c_k = sum_{i<=k} a_i b_{k-i} + sum_{i>k} a_i b_{k+n-i} mod q."""
    return _schoolbook_wrapped(a, b, XN_MINUS_1, +1)


def schoolbook_nwc(a: Poly, b: Poly) -> Poly:
    """Negative wrapped convolution: the wrapped sum enters with a minus."""
    return _schoolbook_wrapped(a, b, XN_PLUS_1, -1)


def reduce_mod_phi(c, ring: RingSpec) -> Poly:
    """Polynomial remainder of a coefficient array by the ring's phi."""
    n, q = ring.n, ring.q
    work = [v % q for v in c]
    if len(work) < n:
        work += [0] * (n - len(work))
    form = ring.form
    if form == XN_MINUS_1:
        for i in range(len(work) - 1, n - 1, -1):
            work[i - n] = (work[i - n] + work[i]) % q
    elif form == XN_PLUS_1:
        for i in range(len(work) - 1, n - 1, -1):
            work[i - n] = (work[i - n] - work[i]) % q
    elif form == TRINOMIAL:
        # x^n == x^(n/2) - 1
        h = n // 2
        for i in range(len(work) - 1, n - 1, -1):
            v = work[i]
            if v:
                work[i - n + h] = (work[i - n + h] + v) % q
                work[i - n] = (work[i - n] - v) % q
    elif form == XN_MINUS_X_MINUS_1:
        # x^n == x + 1
        for i in range(len(work) - 1, n - 1, -1):
            v = work[i]
            if v:
                work[i - n + 1] = (work[i - n + 1] + v) % q
                work[i - n] = (work[i - n] + v) % q
    else:
        phi = ring.phi_coeffs()
        for i in range(len(work) - 1, n - 1, -1):
            v = work[i]
            if v:
                work[i] = 0
                for j in range(n):
                    work[i - n + j] = (work[i - n + j] - v * phi[j]) % q
    return Poly(work[:n], ring)


def oracle_multiply(a: Poly, b: Poly) -> Poly:
    """Schoolbook product in the operands' own ring (the acceptance oracle)."""
    form = a.ring.form
    if form == XN_MINUS_1:
        return schoolbook_cyclic(a, b)
    if form == XN_PLUS_1:
        return schoolbook_nwc(a, b)
    return reduce_mod_phi(schoolbook_linear(a, b), a.ring)


# ---------------------------------------------------------------------------
# leaf products


def basecase_mul(u, v, gamma: int, q: int, use_karatsuba: bool = False) -> list:
    """(u * v) mod (x^len - gamma) for leaf vectors of power-of-two length.

    One-iteration Karatsuba trades each symmetric cross-product pair
    u_i v_j + u_j v_i for one multiplication and three extra
    additions/subtractions; outputs are bit-identical either way.
    """
    L = len(u)
    if len(v) != L or L < 1 or L & (L - 1):
        raise LengthMismatch("leaf operands must share a power-of-two length")
    if L == 1:
        return [modarith.mod_mul(u[0], v[0], q)]
    t = [0] * (2 * L - 1)
    if use_karatsuba:
        d = [modarith.mod_mul(u[i], v[i], q) for i in range(L)]
        for i in range(L):
            t[2 * i] = (t[2 * i] + d[i]) % q
        for i in range(L):
            for j in range(i + 1, L):
                cross = modarith.mod_mul(
                    modarith.mod_add(u[i], u[j], q), modarith.mod_add(v[i], v[j], q), q
                )
                cross = modarith.mod_sub(modarith.mod_sub(cross, d[i], q), d[j], q)
                t[i + j] = (t[i + j] + cross) % q
    else:
        for i in range(L):
            for j in range(L):
                t[i + j] = (t[i + j] + modarith.mod_mul(u[i], v[j], q)) % q
    out = t[:L]
    for i in range(L, 2 * L - 1):
        out[i - L] = modarith.mod_add(out[i - L], modarith.mod_mul(gamma, t[i], q), q)
    return out


def leaf_gammas(spec: TransformSpec, tw, n: int) -> list:
    """Leaf-ring constants in output order: chunk p lives in x^len - gamma_p.

    Chunk p holds the remainder modulo x^len - root^e with e = 2*brv(p)+1
    (negacyclic) or brv(p) (cyclic); natural-order output drops the brv.
    Both butterfly families produce the same chunk images, so the
    indexing does not depend on the algorithm used.
    """
    m = n >> spec.beta
    rev = spec.out_order == BIT_REVERSED
    out = []
    for p in range(m):
        i = bitrev(p, m) if rev else p
        e = 2 * i + 1 if spec.conv_kind == NWC else i
        out.append(tw.power_of_base(e))
    return out


def pointwise_mul(A: NttDomainPoly, B: NttDomainPoly, tw=None, use_karatsuba=False) -> NttDomainPoly:
    """Per-leaf product of two transform-domain polys with equal spec."""
    if not A.compatible(B):
        raise SpecMismatch("pointwise product needs equal spec and ring")
    q = A.ring.q
    n = A.ring.n
    L = A.leaf_degree
    if L == 1:
        ctr = modarith.active_counter()
        if ctr is not None:
            ctr.mults += n
        vals = [x * y % q for x, y in zip(A.values, B.values)]
        return NttDomainPoly(vals, A.spec, A.ring, 1)
    if tw is None:
        raise SpecMismatch("leaf products need the forward twiddle table")
    gammas = leaf_gammas(A.spec, tw, n)
    vals = [0] * n
    for p, g in enumerate(gammas):
        s = p * L
        vals[s : s + L] = basecase_mul(
            A.values[s : s + L], B.values[s : s + L], g, q, use_karatsuba
        )
    return NttDomainPoly(vals, A.spec, A.ring, L)


# ---------------------------------------------------------------------------
# transform pairing and the multiplication pipeline


@dataclass(frozen=True)
class TransformPair:
    """Resolved forward/inverse stage for one x^n +- 1 ring and beta.

    Uses the reorder-free pairing: forward natural -> bit-reversed,
    inverse bit-reversed -> natural.  Immutable and shareable.
    """

    ring: RingSpec
    beta: int
    fwd_spec: TransformSpec
    inv_spec: TransformSpec
    fwd_tw: modarith.TwiddleTable
    inv_tw: modarith.TwiddleTable

    @cached_property
    def gammas(self) -> tuple:
        return tuple(leaf_gammas(self.fwd_spec, self.fwd_tw, self.ring.n))

    @cached_property
    def y_domain(self) -> tuple:
        """Forward image of the monomial x (the split-ring y twiddles)."""
        y = Poly.from_ints([0, 1], self.ring)
        return tuple(transforms.ntt_forward(y, self.fwd_tw, self.fwd_spec).values)

    def forward(self, a: Poly) -> NttDomainPoly:
        return transforms.ntt_forward(a, self.fwd_tw, self.fwd_spec)

    def inverse(self, ahat: NttDomainPoly, halving=False) -> Poly:
        return transforms.ntt_inverse(ahat, self.inv_tw, self.inv_spec, halving=halving)

    def pointwise(self, A, B, use_karatsuba=False) -> NttDomainPoly:
        return pointwise_mul(A, B, self.fwd_tw, use_karatsuba)


def make_transform_pair(ring: RingSpec, beta: int = 0, root: int | None = None) -> TransformPair:
    """Build tables and specs for the ring, failing fast on congruences."""
    n, q = ring.n, ring.q
    if ring.form not in (XN_MINUS_1, XN_PLUS_1):
        raise FormMismatch("transform pairs cover x^n - 1 and x^n + 1 rings")
    if not rings.is_pow2(n):
        raise ParameterCondition(f"ring degree {n} is not a power of two")
    if not 0 <= beta <= max(n.bit_length() - 2, 0):
        raise ParameterCondition(f"beta={beta} out of range for n={n}")
    kind = NWC if ring.form == XN_PLUS_1 else CC
    order = (2 * n if kind == NWC else n) >> beta
    if root is None:
        try:
            root = find_root(order, q)
        except NoSuchRoot as e:
            need = "2n" if kind == NWC else "n"
            raise ParameterCondition(
                f"q={q} fails q = 1 (mod {need}/2^beta) for n={n}, beta={beta}: {e}"
            ) from e
    fwd_tw = build_twiddles(root, order, q, BIT_REVERSED, inverse=False)
    inv_tw = build_twiddles(root, order, q, BIT_REVERSED, inverse=True)
    fwd = TransformSpec(kind, CT, FORWARD, NATURAL, BIT_REVERSED, beta)
    pair = TransformPair(ring, beta, fwd, fwd.inverse_of(), fwd_tw, inv_tw)
    # warm the stored-offline tables so later multiplies never pay for them
    _ = pair.gammas
    _ = pair.y_domain
    return pair


def ntt_multiply(a: Poly, b: Poly, pair: TransformPair, use_karatsuba=False, halving=False) -> Poly:
    """forward(a) o forward(b), leaf products, inverse; exact in the ring."""
    if a.ring != pair.ring or b.ring != pair.ring:
        from .errors import RingMismatch

        raise RingMismatch("operands do not live in the pair's ring")
    A = pair.forward(a)
    B = pair.forward(b)
    C = pair.pointwise(A, B, use_karatsuba)
    return pair.inverse(C, halving=halving)
