"""Protocol pipelines, their execution, and checks against the printed tables."""
from .runner import evolve, prepare, run, synthesize_correction
from .spec import (
    BUILDERS,
    FAMILIES,
    CavityInteraction,
    HadamardAtom,
    Measure,
    Preparation,
    ProtocolSpec,
    WavePlate,
    build,
    build_cpt_entangled,
    build_ct_entangled,
    build_ct_superposition,
)
from .equations import EquationCheck, check_all, load_printed_states
from .results import run_json, sample_json
from .tables import TableVerificationReport, verify_all, verify_tables
