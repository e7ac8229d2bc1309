"""Weight combinatorics over F_{p^f}: tuple calculus, cyclic and spliced
modules, diagram saturation, and GL_n regularity bookkeeping."""

from .params import BChar, Params, Weight, chi, is_generic, make_weight, s_conj, s_involution
from .mu import (
    LinPoly,
    eval_e,
    eval_tuple,
    g_act,
    identity_tuple,
    mu_base,
    mu_power,
    mu_recurrence_step,
    sigma_prime_sequence,
    sigma_sequence,
    sign_vector,
)
from .modules import (
    D1Basis,
    ExtEdge,
    IndecSummand,
    SplicedModule,
    build_cyclic,
    build_spliced,
    d1_basis,
    ext_exists,
    gr1_cosocle,
    jh_multiset,
    summand_of_socle,
)
from .gf import GF
from .diagram import (
    Certificate,
    ClosureState,
    LambdaSpec,
    lambda_condition_check,
    lambda_const,
    lambda_geometric,
    lambda_random,
    pi_action,
    saturate,
    transfer_rules,
    verify_certificate,
    verify_pi_pairing,
)
from .gln import (
    ChiChoice,
    GlnWeight,
    build_chi_choice,
    choose_ab,
    counting_bound,
    is_m_regular,
    make_gln_weight,
    socle_det_powers,
    verify_all_induced_m_regular,
)

__version__ = "0.1.0"
