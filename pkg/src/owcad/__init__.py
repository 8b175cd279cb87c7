"""Exact open weak CAD toolkit.

Sparse integer polynomial arithmetic, CAD projection operators (Brown,
order-insensitive gcd, parity split), open (weak) CAD sample computation,
global nonnegativity decisions, and copositivity testing — all in exact
rational arithmetic.
"""

from .polyring import (
    Context,
    MPoly,
    PolyError,
    QPoly,
    SqfDecomp,
    Var,
    arith,
    derivative,
    discriminant,
    evaluate,
    exact_div,
    format_poly,
    gcd,
    lc,
    level,
    normalize,
    resultant,
    sqf_decompose,
    squarefree_part,
)
from .realroot import (
    IsolatedRoot,
    IsolationList,
    Rat,
    count_real_roots,
    interval_samples,
    interval_samples_positive,
    isolate,
)
from .projection import (
    ProjectionCache,
    WellDefinednessBreach,
    brown,
    brown_set,
    gcd_projection,
    gcd_projection_branch,
    parity_parts,
    parity_parts_set,
    parity_projection,
    parity_projection_branch,
)
from .cad import (
    DegenerateFiber,
    LiftLevel,
    OwcadOutput,
    ProjectionSet,
    SamplePoint,
    hptwo_sample,
    lift_open_sample,
    open_cad,
    open_weak_cad,
    reduced_open_cad,
)
from .psd import (
    PsdVerdict,
    is_psd_base,
    psd_by_open_cad,
    psd_hptwo,
    semidefinite,
)
from .copositive import (
    BorderedMatrix,
    CopositivityVerdict,
    GenericityViolation,
    QForm,
    bordered,
    check_genericity,
    cmt,
    det_bordered,
    np_identity_check,
    quartic_lift,
    qform_from_quartic,
)
from .parsing import ParseError, parse_poly

__version__ = "1.0.0"
