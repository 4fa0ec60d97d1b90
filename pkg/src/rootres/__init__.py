"""Residuality toolkit for finite groups and amalgamated powers.

Decides closedness of subgroups of finite groups with respect to a root
class, computes canonical forms in amalgamated products of finite factors,
separates free-group words through truncated power series, and emits and
independently verifies separation certificates.
"""

from .perms import (
    CapExceeded,
    Classification,
    Homomorphism,
    Perm,
    PermGroup,
    Subgroup,
    all_subgroups,
    classify,
    conjugacy_classes,
    derived_subgroup,
    direct_product,
    generate,
    hom,
    intersect,
    normal_subgroups,
    quotient,
    transversal,
)
from .rootclass import (
    FINITE,
    SOLVABLE,
    AxiomSweepReport,
    InconsistencyError,
    ResidualCore,
    RootClassSpec,
    axiom3_witness,
    axiom_sweep,
    check_intersection_quotient,
    extension_closure_check,
    finite_p,
    k_quotient_normals,
    member,
    quotient_in_class,
    residual_core,
)
from .amalgam import (
    AmalgamScheme,
    NormalForm,
    Syllable,
    Word,
    as_word,
    build_scheme,
    copy_automorphism,
    eval_hom_family,
    invert_word,
    multiply_words,
    power_quotient,
    power_scheme,
    reduce_word,
    words_equal,
)
from .magnus import (
    FreeWord,
    TruncatedSeries,
    magnus_eval,
    separate_free_word,
    series_generator,
    series_inv_unit,
    series_mul,
    series_one,
)
from .certificates import (
    CertificateFormatError,
    SeparationCertificate,
    SeparationFailure,
)
from .residuality import (
    ClosednessReport,
    ResidualityCriterionReport,
    check_residuality_criterion,
    closedness_report_to_json,
    derive_closedness_witness,
    is_k_closed,
    make_closedness_certificate,
    separate_in_power,
    verify_certificate,
)
from . import catalog, serialize

__version__ = "0.1.0"
