"""Product sets of dense integer sets: sieves, exact densities, bitset product
windows, a finite-window audit of the density-one product argument and the
construction of dense sets with sparse squares."""

from .analytic import (
    density_omega_threshold,
    mertens_product,
    omega_poly,
    phi_legendre,
    q_rate,
    turan_check,
)
from .audit import (
    choose_parameters,
    exception_rate_alpha,
    exception_rate_beta,
    lemma22_empirical,
    quantitative_sweep,
    theorem1_audit,
)
from .construct import (
    build_construction,
    constructive_split,
    greedy_prime_tail,
    search_parameters,
    verify_square_identity,
)
from .errors import (
    AuditFailure,
    CapacityError,
    DomainError,
    InfeasibleError,
    OutOfRangeError,
    ProdsetsError,
)
from .products import kfold_window, mult_table_count, product_window
from .sets import (
    Composites,
    CoprimeTo,
    Explicit,
    FullSet,
    OmegaThreshold,
    RoughComplement,
    WindowSet,
    coprime_sieve_check,
    density_trace,
    materialize,
    membership,
)
from .sieve import (
    build_factor_table,
    bulk_omega_y,
    bulk_smooth_part,
    extreme_primes,
    factorize,
    omega,
    smooth_rough_split,
)

__version__ = "0.1.0"
