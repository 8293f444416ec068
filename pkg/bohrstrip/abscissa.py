""" Abscissa estimates on finite truncations.
"""
import logging
import math
from typing import List, Optional, Tuple

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from bohrstrip.errors import InvalidInputError
from bohrstrip.series import abs_sum_profile, Side

log = logging.getLogger(__name__)


class AbscissaEstimate(BaseModel):
    sigma_a_lower: Optional[float] = Field(None, description="""
Lower bound for sigma_a from a passing divergence certificate. Left unset when the certified sigma exceeds the slope
estimate of the same truncation.
""")
    sigma_a_bohr_cahen: float = Field(0.0, description="Largest log A_N(D, 0) / log N over support points N >= sqrt(N_max).")
    certificate_sigma: Optional[float] = Field(None, description="The real part at which divergence was witnessed.")
    lower_bound_consistent: bool = Field(True, description="The certified sigma does not exceed the slope estimate.")
    table: List[Tuple[int, float]] = Field(default_factory=list, description="(N, A_N(D, 0)) at the support points.")
    truncation_caveat: bool = Field(True, description="Estimates come from a finite truncation.")


def bohr_cahen_sigma_a(D, certificate=None, tolerance=1e-9):
    """Slope estimate of sigma_a from the absolute partial sums, plus the sigma of a registered growth certificate.

    The slope is the largest log A_N / log N over support points N >= sqrt(N_max), N > 1. The certified sigma is
    reported as ``sigma_a_lower`` only while it stays within ``tolerance`` of the slope; otherwise it is kept in
    ``certificate_sigma`` and ``lower_bound_consistent`` is cleared.
    """
    if D.side is not Side.dirichlet:
        raise InvalidInputError("Abscissas are estimated on the Dirichlet side")
    if not D:
        raise InvalidInputError("Abscissas of the empty series are not estimated")
    ns, sums = abs_sum_profile(D, 0.0)
    table = [(n, float(a)) for n, a in zip(ns, sums)]
    threshold = math.isqrt(ns[-1])
    slopes = [math.log(a) / math.log(n) for n, a in table if n > 1 and n >= threshold and a > 0]
    estimate = AbscissaEstimate(sigma_a_bohr_cahen=max(slopes, default=0.0), table=table)
    if certificate is not None and certificate.kind == "growth" and certificate.passed:
        sigma = certificate.inputs.get("sigma")
        if sigma is not None:
            estimate.certificate_sigma = sigma
            if sigma <= estimate.sigma_a_bohr_cahen + tolerance:
                estimate.sigma_a_lower = sigma
            else:
                estimate.lower_bound_consistent = False
                log.warning(
                    "Certified sigma %s exceeds the slope estimate %s of the truncation", sigma, estimate.sigma_a_bohr_cahen
                )
    return estimate
