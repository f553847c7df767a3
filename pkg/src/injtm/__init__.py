"""Injective Turing machines and a finite partial-function laboratory.

Machines are built with :class:`~injtm.builder.Builder` or parsed from text,
run by :func:`run`, reversed, chained and embedded injectively.  The
:mod:`injtm.fnlab` module checks inverse and co-inverse identities on finite
tables; :mod:`injtm.suites` holds the acceptance checks.
"""

from .builder import Builder
from .codec import (
    FIXED_ORACLE,
    NoOutput,
    Program,
    code,
    cofp_eval,
    deserialize_machine,
    inj_ev,
    is_pair,
    pair_decode,
    pair_encode,
    regcofp_eval,
    serialize_machine,
    validate_program,
)
from .errors import (
    BoundTooLarge,
    CapExceeded,
    DomainMismatch,
    InjtmError,
    InvalidProgram,
    MalformedProgram,
    NotAPair,
    NotInDomain,
    NotInImage,
    NotInjective,
    NotInverses,
    NotMutual,
    UnknownOracle,
)
from .fnlab import THETA, FiniteFn, Universe
from .inversion import (
    SearchStats,
    fmin_invert,
    fmin_invert_via_oracle,
    fmin_table,
    levin_invert,
    prog_inv_injective,
)
from .machine_core import (
    Machine,
    PolyBound,
    RunLimits,
    RunOutcome,
    extract_fn,
    format_machine,
    parse_machine,
    run,
    run_reference,
    validate_deterministic,
    validate_injective,
)
from .machine_transform import (
    bennett_clean,
    bennett_garbage,
    canonical,
    chain,
    equivalent,
    reverse,
    simulate_reverse_oracle,
)
from .reductions import (
    OracleLanguage,
    ReductionWitness,
    check_reduction,
    hartmanis_map,
    lookup,
    oracle_registry,
    universal_member,
)

__version__ = "0.1.0"
