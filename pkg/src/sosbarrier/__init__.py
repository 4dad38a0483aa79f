"""Barrier-certificate synthesis and sound verification for polynomial
continuous and hybrid systems, built on sum-of-squares programming over a
self-contained interior-point semidefinite solver.

The flow inequality is the relaxed form L_f(phi) - psi(phi) <= 0 with a
comparison function psi from the family alpha*t + beta*t^2 (alpha < 0), whose
scalar ODE keeps nonpositive initial values nonpositive.  Candidates found
numerically are re-checked by exact rational sum-of-squares reconstruction
and a sampling falsifier, so an accepted certificate is never trusted on
solver output alone.
"""

from .poly import (
    FLOAT,
    RATIONAL,
    Monomial,
    Polynomial,
    UnivariatePoly,
    compose,
    format_polynomial,
    lie_derivative,
    monomial_basis,
    parse_polynomial,
)
from .problemfile import (
    Problem,
    format_certificate,
    parse_certificate,
    parse_problem,
    parse_problem_text,
)
from .sdp import SDPProblem, SDPSolution, SolverSettings, inner_product, solve
from .sosprog import SOSProgram, extract
from .synth import (
    Certificate,
    SynthOptions,
    SynthReport,
    gbc_residual,
    iterative_synth,
    synth_combined,
    synth_gbc,
    synth_hybrid,
    synth_hybrid_combined,
)
from .system import (
    ContinuousSystem,
    Edge,
    HybridAutomaton,
    PsiFunction,
    SemialgebraicSet,
    psi_admissible,
    simulate,
    theta_closed_form,
    validate,
)
from .verify import (
    Condition,
    VerificationReport,
    certificate_conditions,
    check_condition,
    falsify_by_sampling,
    min_on_set_samples,
    psd_exact_rational,
    round_to_rational_sos,
    verify_certificate,
)

__version__ = "0.1.0"
