"""
Full classification of a single interval [sigma, tau].
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from .errors import CapExceededError, InternalConsistencyError
from .interval import build_interval, is_chain
from .mobius import carrier_of_interval, has_carrier_element, mobius_recursive
from .permutation import Permutation, exterior, interior
from .rank_analysis import is_lattice, is_rank_unimodal, is_strongly_sperner, rank_profile
from .topology import (
    find_disconnected_subinterval, find_shelling, is_disconnected, is_two_plus_two_free, verify_dual_cl,
)
from ..utils.config_loader import RunConfig
from ..utils.logging_config import get_logger


logger = get_logger('classification')


@dataclass
class ClassificationReport:
    """Every verdict about one interval; partial is set when a cap cut a check short."""
    sigma: str
    tau: str
    rank_sizes: List[int]
    breaking_rank: int
    is_chain: bool
    mobius: Dict
    disconnected: bool
    disconnection_witness: Optional[Dict]
    shellable: bool
    rank_unimodal: bool
    strongly_sperner: Dict
    lattice: bool
    two_plus_two_free: bool
    cl_verified: Optional[bool]
    shelling: Optional[Dict]
    exterior: Optional[str]
    interior: Optional[str]
    has_carrier: Optional[bool]
    carrier: Optional[str]
    partial: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> 'ClassificationReport':
        return cls(**data)

    def check_consistency(self) -> None:
        """Cross-verdict invariants; raises InternalConsistencyError."""
        rank = len(self.rank_sizes) - 1
        problems = []
        if self.disconnected and rank >= 3 and self.shellable:
            problems.append('disconnected interval of rank >= 3 reported shellable')
        if self.shellable and self.disconnection_witness is not None:
            problems.append('shellable interval carries a disconnection witness')
        if self.is_chain and any(size != 1 for size in self.rank_sizes):
            problems.append('chain verdict contradicts rank sizes')
        if problems:
            logger.error(f"Inconsistent report for [{self.sigma}, {self.tau}]: {problems}")
            raise InternalConsistencyError('; '.join(problems))


def classify(sigma: Permutation, tau: Permutation, config: Optional[RunConfig] = None) -> ClassificationReport:
    """
    Classify [sigma, tau].

    Capped checks (label verification, shelling, the k-family oracle) degrade instead
    of failing: the report is marked partial and the reason is noted.

    Raises:
        NotComparableError: sigma is not contained in tau
    """
    config = config or RunConfig()
    compact = config.compact
    interval = build_interval(sigma, tau)
    profile = rank_profile(interval)
    notes = []
    partial = False

    witness = find_disconnected_subinterval(interval)
    shellable = witness is None

    cl_verified = None
    try:
        cl_verified = verify_dual_cl(interval, config.max_cl_chains).verified
    except CapExceededError as e:
        partial = True
        notes.append(f"label verification skipped: {e}")
        logger.warning(f"Label verification skipped for [{sigma}, {tau}]: {e}")

    shelling = None
    try:
        found = find_shelling(interval, config.max_chains, config.max_shelling_facets)
        shelling = {'cl_order': found.cl_order_is_shelling, 'exists': found.shelling_exists}
    except CapExceededError as e:
        partial = True
        notes.append(f"shelling check skipped: {e}")
        logger.warning(f"Shelling check skipped for [{sigma}, {tau}]: {e}")

    sperner = is_strongly_sperner(interval, config.max_oracle_elements)
    if sperner.flagged:
        notes.append('strong Sperner verdict from the chain construction only')

    n = len(tau)
    carrier = carrier_of_interval(sigma, tau)
    report = ClassificationReport(
        sigma=sigma.format(compact),
        tau=tau.format(compact),
        rank_sizes=list(profile.sizes),
        breaking_rank=profile.breaking_rank,
        is_chain=is_chain(interval).is_chain,
        mobius=mobius_recursive(sigma, tau).to_dict(),
        disconnected=is_disconnected(interval),
        disconnection_witness=witness.to_dict(compact) if witness else None,
        shellable=shellable,
        rank_unimodal=is_rank_unimodal(interval),
        strongly_sperner=sperner.to_dict(),
        lattice=is_lattice(interval),
        two_plus_two_free=is_two_plus_two_free(interval).free,
        cl_verified=cl_verified,
        shelling=shelling,
        exterior=exterior(tau).format(compact) if n >= 2 else None,
        interior=interior(tau).format(compact) if n >= 3 else None,
        has_carrier=has_carrier_element(tau) if n >= 3 else None,
        carrier=carrier.format(compact) if carrier else None,
        partial=partial,
        notes=notes,
    )
    report.check_consistency()
    logger.debug(f"Classified [{report.sigma}, {report.tau}]: shellable={shellable}, "
                 f"mobius={report.mobius['value']}")
    return report


def report_lines(report: ClassificationReport) -> List[str]:
    """Human-readable `key: value` lines."""
    width = max(len(key) for key in report.to_dict())
    return [f"{key.ljust(width)}  {value}" for key, value in report.to_dict().items()]
