"""Symbolic chain-complete trees, wedge topologies, and their classification."""

from .ordinals import (
    OMEGA, OMEGA1, ONE, ZERO, Cofinality, Ordinal, add, classify_ordinal, cmp,
    fin_mul, left_sub, nat, omega_power, oracle_encode,
)
from .trees import (
    Below, CARD_OMEGA, CARD_OMEGA1, Card, Child, Copy, Full, Graft, HatOf,
    Node, Seg, TildeOf, Up, Word, ancestor_at, children, height,
    is_chain_complete, leq, meet, resolve, unc_sites, validate,
)
from .topology import (
    Branch, CDiff, ClubFamily, Cone, ConeComplement, ConeSet, Explicit,
    EventuallyConstant, Indexed, OmegaFamily, Param, SeqSpec, Topology,
    UnionSpec, Verdict, Wedge, club_accumulation, cluster_or_limit, contains,
    countably_closed_witness, fu_extract, is_subbasic, maximality_witness,
    member,
)
from .constructions import (
    disjoint_closures, hat, is_r1_tree, iso_check, normalize, roundtrip_check,
    tilde,
)
from .classify import (
    V3, binary_obstruction, build_separating_family, check_point_countable,
    check_t0, classify_report, gdelta_analysis, has_omega1_chain, r_flags,
)

__version__ = "0.1.0"
