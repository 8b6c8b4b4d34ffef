"""nttkit: number-theoretic-transform polynomial multiplication toolkit.

A library plus verification/benchmark CLI covering radix-2 NTT variants
over Z_q[x]/(x^n +- 1), incomplete transforms, split-ring strategies,
large-modulus methods for NTT-unfriendly moduli, ring embeddings
(Good / Schoenhage / Nussbaumer), and a trinomial-ring transform, each
verified exactly against schoolbook convolution.
"""

__version__ = "0.1.0"

from .errors import NttError
from .modarith import OpCounter, TwiddleTable, build_twiddles, counting, find_root
from .polymul import (
    Poly,
    RingSpec,
    TransformPair,
    make_transform_pair,
    ntt_multiply,
    oracle_multiply,
    reduce_mod_phi,
    schoolbook_cyclic,
    schoolbook_linear,
    schoolbook_nwc,
)
from .transforms import NttDomainPoly, TransformSpec, ntt_forward, ntt_inverse, reorder
