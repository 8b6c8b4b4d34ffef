"""Ring classification, strategy selection, presets and batched patterns.

classify() sorts a ring into friendliness categories; make_plan() turns
a ring plus preferences into an immutable NttPlan whose congruence and
bound preconditions were already verified; preset() loads the shipped
parameter-set registry.  matvec_multiply() is the transform-saving
matrix-vector pattern used by module-lattice workloads.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources

from . import bigmod, embed, polymul, splitting, trinomial
from .errors import NoStrategy, ParameterCondition, ShapeCondition, UnknownPreset
from .modarith import is_prime
from .rings import TRINOMIAL, XN_MINUS_1, XN_PLUS_1, Poly, RingSpec, is_pow2
from .transforms import NttDomainPoly

POW2_FULL = "pow2_full_friendly"
POW2_PARTIAL = "pow2_partial_friendly"
POW2_UNFRIENDLY = "pow2_unfriendly"
NON_POW2 = "non_pow2"
GENERAL_PHI = "general_phi"


@dataclass(frozen=True)
class RingClass:
    kind: str
    deficit: int = 0  # minimal levels to crop (partial-friendly only)
    h: int = 0  # odd part of n (non-pow2 only)
    k: int = 0  # 2-adic valuation of n (non-pow2 only)

    def describe(self) -> str:
        if self.kind == POW2_PARTIAL:
            return f"{self.kind}(deficit={self.deficit})"
        if self.kind == NON_POW2:
            return f"{self.kind}(h={self.h}, k={self.k})"
        return self.kind


def _full_order(form: str, n: int) -> int:
    return 2 * n if form == XN_PLUS_1 else n


def classify(ring: RingSpec) -> RingClass:
    """Deterministic friendliness category of a ring."""
    n, q = ring.n, ring.q
    if ring.form in (XN_MINUS_1, XN_PLUS_1):
        if is_pow2(n):
            if not is_prime(q):
                return RingClass(POW2_UNFRIENDLY)
            need = _full_order(ring.form, n)
            if (q - 1) % need == 0:
                return RingClass(POW2_FULL)
            max_beta = n.bit_length() - 2  # beta < log2 n
            for t in range(1, max_beta + 1):
                if (q - 1) % (need >> t) == 0:
                    return RingClass(POW2_PARTIAL, deficit=t)
            return RingClass(POW2_UNFRIENDLY)
        h = n
        k = 0
        while h % 2 == 0:
            h //= 2
            k += 1
        return RingClass(NON_POW2, h=h, k=k)
    return RingClass(GENERAL_PHI)


# ---------------------------------------------------------------------------
# plans


@dataclass(frozen=True)
class NttPlan:
    """A fully resolved multiplication strategy for one ring.

    Immutable after construction; every congruence and bound the chosen
    route needs was checked while building it.
    """

    strategy: str
    ring: RingSpec
    beta: int = 0
    alpha: int = 0
    pair: object = None  # TransformPair for direct pipelines
    inner: object = None  # inner TransformPair for split strategies
    N: int = 0
    basis: object = None
    chain: object = None
    trinomial_plan: object = None
    profile: tuple = (bigmod.FULL_FULL,)
    sample_b: tuple = ("uniform",)
    checks: tuple = ()  # (description, ok) pairs, for plan inspection

    def describe(self) -> str:
        bits = [self.strategy]
        if self.strategy == "incomplete":
            bits.append(f"beta={self.beta}")
        if self.strategy in ("split-pt", "split-k"):
            bits.append(f"alpha={self.alpha}")
        if self.strategy == "hntt":
            bits.append(f"alpha={self.alpha}, beta={self.beta}")
        if self.strategy in ("bigprime",):
            bits.append(f"N={self.N}, beta={self.beta}")
        if self.strategy in ("rns", "composite"):
            bits.append(f"basis={'*'.join(str(p) for p in self.basis.primes)}, beta={self.beta}")
        if self.strategy == "embed":
            bits.append(_describe_chain(self.chain))
        return " ".join(bits)


def _describe_chain(chain: embed.EmbedChain) -> str:
    out = []
    for s in chain.steps:
        if isinstance(s, embed.ZeroPad):
            out.append(f"pad({s.n_prime},{s.form})")
        elif isinstance(s, embed.LiftModulus):
            out.append(f"lift({s.modulus})")
        elif isinstance(s, embed.Good):
            out.append(f"good(h={s.h},k={s.k})")
        elif isinstance(s, embed.Schonhage):
            out.append(f"schonhage(m={s.m},n={s.n},inner=nussbaumer)")
        elif isinstance(s, embed.Nussbaumer):
            out.append(f"nussbaumer(m={s.m},n={s.n})")
        elif isinstance(s, embed.PlainNtt):
            out.append(f"ntt(beta={s.beta})")
    return " -> ".join(out)


def search_prime(congruence: int, above: int) -> int:
    """Smallest prime p = 1 (mod congruence) with p > above; deterministic."""
    c = max((above - 1) // congruence, 0)
    while True:
        c += 1
        p = c * congruence + 1
        if p > above and is_prime(p):
            return p


def _cong_check(q: int, need: int, what: str):
    ok = need >= 1 and (q - 1) % need == 0
    return (f"{what}: {q} = 1 (mod {need})", ok)


def make_plan(ring: RingSpec, prefer: str = "auto", beta: int | None = None,
              alpha: int | None = None, allow_bigmod: bool = False,
              profile: tuple | None = None, sample_b: tuple = ("uniform",),
              N: int | None = None, basis=None, chain=None) -> NttPlan:
    """Resolve a strategy for the ring, verifying every precondition now.

    ``prefer`` picks among the routes valid for the ring's class:
    full / incomplete / split-pt / split-k / hntt for friendly rings,
    bigprime / rns / composite for unfriendly ones (these require
    allow_bigmod when reached through "auto"), good / pad-pow2 /
    schonhage for embeddings, and trinomial for that ring form.
    """
    cls = classify(ring)
    n, q = ring.n, ring.q
    prof = profile if profile is not None else (bigmod.FULL_FULL,)
    checks = []

    if ring.form == TRINOMIAL and prefer in ("auto", "trinomial"):
        tp = trinomial.make_plan(ring)
        checks.append(_cong_check(q, n, "trinomial order"))
        return NttPlan("trinomial", ring, trinomial_plan=tp, profile=prof,
                       sample_b=sample_b, checks=tuple(checks))

    if cls.kind == POW2_FULL and prefer in ("auto", "full"):
        checks.append(_cong_check(q, _full_order(ring.form, n), "full transform"))
        return NttPlan("full", ring, pair=polymul.make_transform_pair(ring, 0),
                       profile=prof, sample_b=sample_b, checks=tuple(checks))

    if cls.kind in (POW2_FULL, POW2_PARTIAL):
        t = cls.deficit
        if prefer in ("auto", "incomplete"):
            b = beta if beta is not None else t
            checks.append(_cong_check(q, _full_order(ring.form, n) >> b, f"incomplete beta={b}"))
            return NttPlan("incomplete", ring, beta=b,
                           pair=polymul.make_transform_pair(ring, b),
                           profile=prof, sample_b=sample_b, checks=tuple(checks))
        if prefer in ("split-pt", "split-k"):
            a_ = alpha if alpha is not None else t
            small = RingSpec(ring.form, n >> a_, q)
            checks.append(_cong_check(q, _full_order(ring.form, n) >> a_, f"split alpha={a_}"))
            return NttPlan(prefer, ring, alpha=a_,
                           inner=polymul.make_transform_pair(small, 0),
                           profile=prof, sample_b=sample_b, checks=tuple(checks))
        if prefer == "hntt":
            a_ = alpha if alpha is not None else 0
            b = beta if beta is not None else max(t - a_, 0)
            small = RingSpec(ring.form, n >> a_, q) if a_ else ring
            checks.append(_cong_check(q, _full_order(ring.form, n) >> (a_ + b),
                                      f"hntt alpha={a_} beta={b}"))
            return NttPlan("hntt", ring, alpha=a_, beta=b,
                           inner=polymul.make_transform_pair(small, b),
                           profile=prof, sample_b=sample_b, checks=tuple(checks))
        raise NoStrategy(f"preference {prefer!r} does not apply to {cls.describe()}")

    if cls.kind == POW2_UNFRIENDLY:
        if prefer == "auto" and not allow_bigmod:
            raise NoStrategy(
                f"ring ({ring.form}, n={n}, q={q}) is {cls.describe()}; "
                "large-modulus routes need allow_bigmod"
            )
        choice = "bigprime" if prefer == "auto" else prefer
        b = beta if beta is not None else 0
        bound = bigmod.required_bound(n, q, prof)
        if choice == "bigprime":
            order = _full_order(ring.form, n) >> b
            bigN = N if N is not None else search_prime(order, bound)
            checks.append((f"N={bigN} prime", is_prime(bigN)))
            checks.append(_cong_check(bigN, order, "lifted transform"))
            checks.append((f"N={bigN} > bound {bound}", bigN > bound))
            if not all(ok for _, ok in checks):
                raise ParameterCondition(f"bigprime preconditions fail: {checks}")
            return NttPlan("bigprime", ring, beta=b, N=bigN, profile=prof,
                           sample_b=sample_b, checks=tuple(checks))
        if choice in ("rns", "composite"):
            order = _full_order(ring.form, n) >> b
            bs = bigmod.RnsBasis(tuple(basis)) if basis is not None else _search_basis(order, bound)
            for p in bs.primes:
                checks.append(_cong_check(p, order, f"basis prime {p}"))
            checks.append((f"product {bs.product} > bound {bound}", bs.product > bound))
            if not all(ok for _, ok in checks):
                raise ParameterCondition(f"{choice} preconditions fail: {checks}")
            return NttPlan(choice, ring, beta=b, basis=bs, profile=prof,
                           sample_b=sample_b, checks=tuple(checks))
        raise NoStrategy(f"preference {prefer!r} does not apply to {cls.describe()}")

    # non-power-of-two or general phi: embedding chains
    if chain is None:
        chain = _default_chain(ring, cls, prefer, prof, N)
    chain = _resolve_chain(ring, chain, prof)
    checks.extend(_chain_checks(ring, chain, prof))
    if not all(ok for _, ok in checks):
        raise ParameterCondition(f"embedding preconditions fail: {checks}")
    return NttPlan("embed", ring, chain=chain, profile=prof,
                   sample_b=sample_b, checks=tuple(checks))


def _search_basis(order: int, bound: int) -> bigmod.RnsBasis:
    primes = []
    prod = 1
    p = 1
    while prod <= bound:
        p = search_prime(order, p)
        primes.append(p)
        prod *= p
    return bigmod.RnsBasis(tuple(primes))


def _good_target(n2: int):
    """Smallest 3*2^k >= n2 (Good's shape with h=3)."""
    k = 0
    while 3 << k < n2:
        k += 1
    return 3, k


def _default_chain(ring: RingSpec, cls: RingClass, prefer: str, prof, N):
    n, q = ring.n, ring.q
    if cls.kind == NON_POW2 and cls.k > 0 and cls.h in (3, 5, 7, 9) and ring.form == XN_MINUS_1 \
            and prefer in ("auto", "good"):
        # already the Good shape: no padding step needed
        bigN = N if N is not None else (q if (q - 1) % (1 << cls.k) == 0
                                        else search_prime(1 << cls.k, bigmod.required_bound(n, q, prof)))
        return embed.EmbedChain((embed.ZeroPad(n, XN_MINUS_1), embed.LiftModulus(bigN),
                                 embed.Good(cls.h, cls.k)))
    if prefer in ("auto", "good"):
        h, k = _good_target(2 * n)
        bigN = N if N is not None else search_prime(1 << k, bigmod.required_bound(n, q, prof))
        return embed.EmbedChain((embed.ZeroPad(h << k, XN_MINUS_1), embed.LiftModulus(bigN),
                                 embed.Good(h, k)))
    if prefer == "pad-pow2":
        np_ = 1 << (2 * n - 1).bit_length()
        bigN = N if N is not None else search_prime(np_, bigmod.required_bound(n, q, prof))
        return embed.EmbedChain((embed.ZeroPad(np_, XN_MINUS_1), embed.LiftModulus(bigN),
                                 embed.PlainNtt(0)))
    if prefer == "schonhage":
        np_ = 1 << (2 * n - 1).bit_length()
        m = 1 << ((np_.bit_length() - 2) // 2)
        return embed.EmbedChain((embed.ZeroPad(np_, XN_MINUS_1),
                                 embed.Schonhage(m, np_ // (2 * m))))
    raise NoStrategy(f"preference {prefer!r} does not apply to {cls.describe()}")


def _resolve_chain(ring: RingSpec, chain, prof):
    """Fill in searched moduli (lift(None)) deterministically."""
    if not isinstance(chain, embed.EmbedChain):
        chain = embed.EmbedChain(tuple(chain))
    steps = []
    terminal_cong = None
    for s in chain.steps:
        if isinstance(s, embed.Good):
            terminal_cong = 1 << s.k
        elif isinstance(s, embed.PlainNtt):
            pad = next((p for p in chain.steps if isinstance(p, embed.ZeroPad)), None)
            if pad is not None:
                terminal_cong = pad.n_prime >> s.beta
                if pad.form == XN_PLUS_1:
                    terminal_cong *= 2
    for s in chain.steps:
        if isinstance(s, embed.LiftModulus) and s.modulus is None:
            bound = bigmod.required_bound(ring.n, ring.q, prof)
            steps.append(embed.LiftModulus(search_prime(terminal_cong or 2, bound)))
        else:
            steps.append(s)
    return embed.EmbedChain(tuple(steps))


def _chain_checks(ring: RingSpec, chain: embed.EmbedChain, prof):
    checks = []
    pad = None
    lift = None
    for s in chain.steps:
        if isinstance(s, embed.ZeroPad):
            pad = s
            checks.append((f"pad {s.n_prime} >= 2n-1 = {2 * ring.n - 1}",
                           s.n_prime >= 2 * ring.n - 1 or s.n_prime == ring.n))
        elif isinstance(s, embed.LiftModulus):
            lift = s
            if s.modulus != ring.q:  # self-lifts wrap mod q by design
                bound = bigmod.required_bound(ring.n, ring.q, prof)
                checks.append((f"lift modulus {s.modulus} > bound {bound}", s.modulus > bound))
        elif isinstance(s, embed.Good):
            mod = lift.modulus if lift else ring.q
            checks.append(_cong_check(mod, 1 << s.k, f"good rows over {mod}"))
        elif isinstance(s, embed.Schonhage):
            checks.append((f"schonhage shape 2mn = {2 * s.m * s.n}",
                           pad is not None and pad.n_prime == 2 * s.m * s.n))
            checks.append((f"2n = {2 * s.n} invertible mod {ring.q}", ring.q % 2 == 1))
        elif isinstance(s, embed.Nussbaumer):
            checks.append((f"nussbaumer shape 2mn = {2 * s.m * s.n}",
                           pad is not None and pad.n_prime == 2 * s.m * s.n))
        elif isinstance(s, embed.PlainNtt):
            mod = lift.modulus if lift else ring.q
            need = (pad.n_prime if pad else ring.n) >> s.beta
            if (pad.form if pad else ring.form) == XN_PLUS_1:
                need *= 2
            checks.append(_cong_check(mod, need, f"padded transform over {mod}"))
    return checks


# ---------------------------------------------------------------------------
# execution


def multiply(a: Poly, b: Poly, plan: NttPlan, use_karatsuba: bool = False) -> Poly:
    """Run the plan's pipeline; exact equality with the schoolbook oracle."""
    s = plan.strategy
    if s in ("full", "incomplete"):
        return polymul.ntt_multiply(a, b, plan.pair, use_karatsuba=use_karatsuba)
    if s == "split-pt":
        return splitting.ptntt_multiply(a, b, plan.alpha, plan.inner)
    if s == "split-k":
        return splitting.kntt_multiply(a, b, plan.alpha, plan.inner)
    if s == "hntt":
        return splitting.hntt_multiply(a, b, plan.alpha, plan.beta, plan.inner)
    if s == "bigprime":
        return bigmod.bigprime_multiply(a, b, plan.N, plan.beta, plan.profile)
    if s == "rns":
        return bigmod.rns_multiply(a, b, plan.basis, plan.beta, plan.profile)
    if s == "composite":
        return bigmod.composite_multiply(a, b, plan.basis, plan.beta, plan.profile)
    if s == "embed":
        return embed.general_phi_multiply(a, b, plan.chain)
    if s == "trinomial":
        return trinomial.trinomial_multiply(a, b, plan.trinomial_plan)
    raise NoStrategy(f"unknown strategy {s!r}")


# ---------------------------------------------------------------------------
# presets


def _load_registry() -> dict:
    with resources.files(__package__).joinpath("presets.json").open() as f:
        return json.load(f)


_registry_cache: dict | None = None


def preset_names() -> list:
    global _registry_cache
    if _registry_cache is None:
        _registry_cache = _load_registry()
    return sorted(_registry_cache)


def preset(name: str):
    """(RingSpec, NttPlan) for a named parameter set from the registry."""
    global _registry_cache
    if _registry_cache is None:
        _registry_cache = _load_registry()
    if name not in _registry_cache:
        raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    e = _registry_cache[name]
    ring = RingSpec(e["form"], e["n"], e["q"])
    prof = tuple(e["profile"]) if "profile" in e else (bigmod.FULL_FULL,)
    sample_b = tuple(e["sample_b"]) if "sample_b" in e else ("uniform",)
    strat = e["strategy"]
    if strat == "full":
        return ring, make_plan(ring, "full", profile=prof, sample_b=sample_b)
    if strat == "incomplete":
        return ring, make_plan(ring, "incomplete", beta=e["beta"], profile=prof, sample_b=sample_b)
    if strat == "bigprime":
        return ring, make_plan(ring, "bigprime", beta=e["beta"], N=e["N"],
                               allow_bigmod=True, profile=prof, sample_b=sample_b)
    if strat == "rns":
        return ring, make_plan(ring, "rns", beta=e["beta"], basis=e["basis"],
                               allow_bigmod=True, profile=prof, sample_b=sample_b)
    if strat == "composite":
        return ring, make_plan(ring, "composite", beta=e["beta"], basis=e["basis"],
                               allow_bigmod=True, profile=prof, sample_b=sample_b)
    if strat == "embed":
        steps = []
        for st in e["chain"]:
            tag = st[0]
            if tag == "zero_pad":
                steps.append(embed.ZeroPad(st[1], st[2]))
            elif tag == "lift":
                steps.append(embed.LiftModulus(st[1]))
            elif tag == "good":
                steps.append(embed.Good(st[1], st[2]))
            elif tag == "schonhage":
                steps.append(embed.Schonhage(st[1], st[2]))
            elif tag == "nussbaumer":
                steps.append(embed.Nussbaumer(st[1], st[2]))
            elif tag == "plain":
                steps.append(embed.PlainNtt(st[1]))
        return ring, make_plan(ring, "auto", chain=steps, profile=prof, sample_b=sample_b)
    if strat == "trinomial":
        return ring, make_plan(ring, "trinomial", profile=prof, sample_b=sample_b)
    raise UnknownPreset(f"preset {name!r} has unknown strategy {strat!r}")


def sample_operands(ring: RingSpec, plan: NttPlan, rng):
    """(a, b) drawn per the plan's operand profile."""
    a = Poly.random(ring, rng)
    if plan.sample_b[0] == "small":
        b = Poly.random_small(ring, rng, int(plan.sample_b[1]))
    else:
        b = Poly.random(ring, rng)
    return a, b


# ---------------------------------------------------------------------------
# transform-domain patterns


def _as_pair(plan_or_pair):
    pair = getattr(plan_or_pair, "pair", None)
    if pair is not None:
        return pair
    if hasattr(plan_or_pair, "forward"):
        return plan_or_pair
    raise NoStrategy("this operation needs a plan with a direct transform stage")


def matvec_multiply(Ahat, s, plan) -> list:
    """INTT(sum_j Ahat[i][j] o NTT(s_j)) per row: k forward + k inverse.

    Ahat rows hold transform-domain values (as sampled or cached);
    only the vector is transformed, and each row sum costs one inverse.
    Accepts a resolved plan or a bare transform pair.
    """
    pair = _as_pair(plan)
    k = len(s)
    if any(len(row) != k for row in Ahat):
        raise ShapeCondition("matrix row length does not match the vector")
    shat = [pair.forward(sj) for sj in s]
    out = []
    for row in Ahat:
        acc = pair.pointwise(row[0], shat[0])
        for j in range(1, k):
            acc = acc.add(pair.pointwise(row[j], shat[j]))
        out.append(pair.inverse(acc))
    return out


def sample_ntt_domain_uniform(ring: RingSpec, plan, seed) -> NttDomainPoly:
    """Seeded uniform values taken directly as transform-domain data."""
    pair = _as_pair(plan)
    rng = random.Random(seed)
    vals = [rng.randrange(ring.q) for _ in range(ring.n)]
    return NttDomainPoly(vals, pair.fwd_spec, ring, 1 << pair.beta)
