"""kanlim: exact derived Kan extensions over finite posets.

An exact-arithmetic engine for finitely generated modules over the
p-local integers, N-cyclic cochain complexes (N = 2p - 2), finite
posets, poset-indexed diagrams, derived colimits and Kan extensions, the
associated spectral sequence, and the crown-diagram reconstruction
pipeline that verifies compatibility of reconstruction with tensor
products at desk scale.
"""

from .scalar import InvalidScalar, PAlgebraError
from .palgebra import (
    CompositionError,
    FpModule,
    MapNotWellDefined,
    ModuleMap,
    PrimeMismatch,
    canonical_form,
    cyclic_module,
    direct_sum,
    free_module,
    identity_map,
    map_algebra,
    scalar_map,
    subquotients,
    tensor_and_tor,
    zero_map,
    zero_module,
)
from .complexes import (
    ChainMap,
    CyclicComplex,
    FlatnessViolation,
    InvalidComplex,
    cohomology,
    cohomology_table,
    derived_tensor,
    flat_replacement,
    h_map,
    is_quasi_iso,
    kunneth_oracle,
    mapping_cone,
    shift,
    tensor_cyclic,
    unit_complex,
    zero_complex,
)
from .posets import (
    ElementNotFound,
    FinPoset,
    NotAPoset,
    NotMonotone,
    PosetMap,
    butterfly_poset,
    crown_poset,
    export_dot,
    is_cofinal,
    poset_I,
    poset_V,
    slice_to,
    standard_maps,
    standard_posets,
)
from .diagrams import (
    CxDiagram,
    DiagramError,
    ModDiagram,
    diagram_tensor,
    is_reedy_cofibrant,
    pullback,
    strict_colim,
    strict_lkan,
)
from .derived import (
    derived_box,
    derived_colim,
    derived_lkan,
    diagram_cone,
    cone_map,
    edge_check,
    hocolim_cx,
    holkan_cx,
    ptilde,
    resolution,
    rtilde,
    sseq_pages,
)
from .franke import (
    LObject,
    NotInL,
    Q,
    Unsupported,
    crown_assemble,
    crown_decompose,
    equatorial_check,
    moore_complex,
    smash_pipeline,
    special_case_differential,
    two_term_complex,
    verify_bz,
)

__version__ = "0.1.0"
