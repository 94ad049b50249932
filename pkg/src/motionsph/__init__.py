"""Spherical functions of complex Cartan motion groups.

Exact root-system and Weyl-group machinery, the symbolic regularization of
the alternating-sum formula at singular spectral parameters, exponential-
polynomial growth classification, and boundedness certificates.
"""

from .rootsys import (
    Covector, RootSystem, build_root_system, eval_pi, lex_compare, lex_tuple,
)
from .weylgrp import (
    StabilizerPair, WeylElement, decompose_root, dominant_representative,
    generate_weyl_group, maximize_xi_over_V, sign_on_pi_prime, stabilizer,
    stabilizer_pair, verify_lemma2,
)
from .sympoly import (
    GaussQ, MPoly, RatExpTerm, apply_pi_prime, c_constant,
    directional_derivative, evaluate_at,
)
from .expasym import (
    ExpPoly, classify_oscillatory, dominant_growth, ep_eval,
    numeric_limsup_probe,
)
from .spherical import (
    SpectralParameter, SplitSum, bracket_nonzero, from_pairing, normalize,
    pick_probe_direction, psi_regular, psi_singular, split_sum,
)
from .boundedcheck import (
    BoundednessCertificate, classify, easy_direction_check, probe_growth,
    revalidate_certificate, verify_inequality_table,
)
from .oracle import divided_difference_limit, psi_montecarlo_su2, psi_rank1

__version__ = "0.1.0"
