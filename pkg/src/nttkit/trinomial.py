"""Transform over Z_q[x]/(x^n - x^(n/2) + 1) with n = 3*2^e.

The first level splits the trinomial ring into x^(n/2) - z1 times
x^(n/2) - z2 with z1 + z2 = 1 and z1*z2 = 1 (one multiplication and one
extra addition per pair); the remaining e-1 levels are ordinary radix-2
butterflies, stopping at degree-2 leaves in x^3 - psi^j with j running
over the invertible residues mod n.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import modarith
from .errors import ParameterCondition, PlanMismatch
from .modarith import find_root, is_prime, mod_inv
from .rings import TRINOMIAL, Poly, RingSpec


@dataclass(frozen=True)
class TrinomialPlan:
    """Roots, constants and leaf order for one (n, q) configuration."""

    ring: RingSpec
    psi: int
    zeta1: int
    zeta2: int
    leaf_exponents: tuple  # exponent j of x^3 - psi^j per in-place leaf slot

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def q(self) -> int:
        return self.ring.q


@dataclass
class TrinomialDomainPoly:
    """Degree-2 leaf images, kept separate from the radix-2 domain type."""

    values: list
    plan: TrinomialPlan


def make_plan(ring: RingSpec) -> TrinomialPlan:
    n, q = ring.n, ring.q
    if ring.form != TRINOMIAL:
        raise ParameterCondition("plan needs a trinomial ring")
    if not is_prime(q):
        raise ParameterCondition(f"q={q} must be prime")
    if (q - 1) % n != 0:
        raise ParameterCondition(f"q={q} fails q = 1 (mod n) for n={n}")
    psi = find_root(n, q)
    zeta1 = pow(psi, n // 6, q)
    zeta2 = pow(zeta1, 5, q)
    if (zeta1 + zeta2) % q != 1 or zeta1 * zeta2 % q != 1:
        raise ParameterCondition("zeta constants fail z1+z2 = z1*z2 = 1")
    # leaf exponents follow the forward butterfly schedule
    exps = [n // 6, 5 * n // 6]
    seg = n // 2
    while seg > 3:
        nxt = []
        for e in exps:
            nxt.append(e // 2)
            nxt.append(e // 2 + n // 2)
        exps = nxt
        seg //= 2
    exps = tuple(e % n for e in exps)
    from math import gcd

    assert 3 * len(exps) == n and all(gcd(e, n) == 1 for e in exps)
    return TrinomialPlan(ring, psi, zeta1, zeta2, exps)


def trinomial_forward(a: Poly, plan: TrinomialPlan) -> TrinomialDomainPoly:
    if a.ring != plan.ring:
        raise PlanMismatch("polynomial ring does not match the plan")
    n, q = plan.n, plan.q
    vals = list(a.coeffs)
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.forward_transforms += 1
    half = n // 2
    z1 = plan.zeta1
    for i in range(half):  # split level: 1 mult, 2 adds, 1 sub per pair
        hi = vals[i + half]
        t = z1 * hi % q
        vals[i + half] = (vals[i] + hi - t) % q
        vals[i] = (vals[i] + t) % q
    if ctr is not None:
        ctr.mults += half
        ctr.adds += 2 * half
        ctr.subs += half
    psi = plan.psi
    exps = [n // 6, 5 * n // 6]
    seg = half
    while seg > 3:
        seg //= 2
        nxt = []
        for si, e in enumerate(exps):
            z = pow(psi, e // 2, q)
            base = si * 2 * seg
            for j in range(base, base + seg):
                t = z * vals[j + seg] % q
                u = vals[j]
                vals[j] = (u + t) % q
                vals[j + seg] = (u - t) % q
            nxt.append(e // 2)
            nxt.append(e // 2 + n // 2)
        if ctr is not None:
            work = seg * len(exps)
            ctr.mults += work
            ctr.adds += work
            ctr.subs += work
        exps = nxt
    return TrinomialDomainPoly(vals, plan)


def trinomial_inverse(ahat: TrinomialDomainPoly, plan: TrinomialPlan) -> Poly:
    if ahat.plan is not plan and ahat.plan != plan:
        raise PlanMismatch("domain values were produced under a different plan")
    n, q = plan.n, plan.q
    vals = list(ahat.values)
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.inverse_transforms += 1
    psi = plan.psi
    half = n // 2
    # rebuild the level exponent stacks top-down, then undo bottom-up
    levels = []
    exps = [n // 6, 5 * n // 6]
    seg = half
    while seg > 3:
        seg //= 2
        levels.append((seg, [e // 2 for e in exps]))
        exps = [x for e in exps for x in (e // 2, e // 2 + n // 2)]
    radix2_levels = 0
    for seg, zexps in reversed(levels):
        radix2_levels += 1
        for si, ehalf in enumerate(zexps):
            zinv = pow(psi, (n - ehalf) % n, q)
            base = si * 2 * seg
            for j in range(base, base + seg):
                u = vals[j]
                v = vals[j + seg]
                vals[j] = (u + v) % q
                vals[j + seg] = (u - v) * zinv % q
        if ctr is not None:
            work = seg * len(zexps)
            ctr.mults += work
            ctr.adds += work
            ctr.subs += work
    # undo the split level exactly: invert [[1, z1], [1, z2]]
    z1, z2 = plan.zeta1, plan.zeta2
    det_inv = mod_inv((z2 - z1) % q, q)
    for i in range(half):
        l, r = vals[i], vals[i + half]
        vals[i] = (z2 * l - z1 * r) % q * det_inv % q
        vals[i + half] = (r - l) % q * det_inv % q
    if ctr is not None:
        ctr.mults += 4 * half
        ctr.adds += half
        ctr.subs += half
    if radix2_levels:
        s = mod_inv(1 << radix2_levels, q)
        for i in range(n):
            vals[i] = vals[i] * s % q
        if ctr is not None:
            ctr.mults += n
    return Poly(vals, plan.ring)


def trinomial_pointwise(u, v, psi_j: int, q: int) -> list:
    """(u*v) mod (x^3 - psi_j) for length-3 leaves."""
    u0, u1, u2 = u
    v0, v1, v2 = v
    ctr = modarith.active_counter()
    if ctr is not None:
        ctr.mults += 11
        ctr.adds += 5
    c0 = (u0 * v0 + psi_j * (u1 * v2 + u2 * v1)) % q
    c1 = (u0 * v1 + u1 * v0 + psi_j * (u2 * v2)) % q
    c2 = (u0 * v2 + u1 * v1 + u2 * v0) % q
    return [c0, c1, c2]


def trinomial_multiply(a: Poly, b: Poly, plan: TrinomialPlan) -> Poly:
    """Forward both operands, multiply the degree-2 leaves, invert."""
    A = trinomial_forward(a, plan)
    B = trinomial_forward(b, plan)
    q = plan.q
    vals = [0] * plan.n
    for li, e in enumerate(plan.leaf_exponents):
        s = 3 * li
        vals[s : s + 3] = trinomial_pointwise(
            A.values[s : s + 3], B.values[s : s + 3], pow(plan.psi, e, q), q
        )
    return trinomial_inverse(TrinomialDomainPoly(vals, plan), plan)
