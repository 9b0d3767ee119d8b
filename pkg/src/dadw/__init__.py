"""Markers, two-set covers, transition sets, and machine-checkable
dimension-one certificates for actions of infinite virtually cyclic
groups on symbolically presented Cantor-type spaces."""
from .certificates import (
    DadCertificate,
    VerifyResult,
    VerifyStatus,
    certificate_from_json,
    certificate_to_json,
    dumps_certificate,
    loads_certificate,
    verify_certificate,
)
from .corpus import ENTRIES, CorpusEntry, build_system, corpus_entry, corpus_names
from .dad import (
    CoverPair,
    EquivClassReport,
    FSetResult,
    QuotientReport,
    build_cover,
    certify_dad_one,
    compute_f_set,
    equivalence_classes,
    normalize_E,
    quotient_pullback,
)
from .errors import (
    CannotSeparate,
    CapExceeded,
    FixedPointFound,
    Inconclusive,
    InputError,
    NoMarkerFound,
    PeriodicObstruction,
    ResolutionError,
)
from .freeness import (
    FreeBallReport,
    FreenessCertificate,
    check_free_ball,
    freeness_certificate,
    verify_freeness,
)
from .groups import (
    DINF_KIND,
    FINITE_KIND,
    SEARCH_ORDER_TAG,
    Z_KIND,
    Element,
    FiniteGroup,
    GroupSpec,
    QuotientElement,
)
from .markers import (
    Marker,
    MarkerCheck,
    MarkerStatus,
    find_marker,
    marker_from_json,
    marker_from_point,
    marker_to_json,
    pullback_marker,
    verify_marker,
)
from .spaces import (
    ClopenSet,
    CoverStatus,
    Emptiness,
    FactorMap,
    OdometerLevel,
    Pattern,
    SpacePresentation,
    Trilean,
    identity_factor_map,
    letter_code_map,
    level_collapse,
    modulus_level,
    quotient_system,
)
from .substitution import OracleAnswer, SubstitutionOracle

__version__ = "0.1.0"

__all__ = [
    "CannotSeparate",
    "CapExceeded",
    "ClopenSet",
    "CorpusEntry",
    "CoverPair",
    "CoverStatus",
    "DadCertificate",
    "DINF_KIND",
    "Element",
    "Emptiness",
    "ENTRIES",
    "EquivClassReport",
    "FactorMap",
    "FiniteGroup",
    "FINITE_KIND",
    "FixedPointFound",
    "FreeBallReport",
    "FreenessCertificate",
    "FSetResult",
    "GroupSpec",
    "Inconclusive",
    "InputError",
    "Marker",
    "MarkerCheck",
    "MarkerStatus",
    "NoMarkerFound",
    "OdometerLevel",
    "OracleAnswer",
    "Pattern",
    "PeriodicObstruction",
    "QuotientElement",
    "QuotientReport",
    "ResolutionError",
    "SEARCH_ORDER_TAG",
    "SpacePresentation",
    "SubstitutionOracle",
    "Trilean",
    "VerifyResult",
    "VerifyStatus",
    "Z_KIND",
    "build_cover",
    "build_system",
    "certificate_from_json",
    "certificate_to_json",
    "certify_dad_one",
    "check_free_ball",
    "compute_f_set",
    "corpus_entry",
    "corpus_names",
    "dumps_certificate",
    "equivalence_classes",
    "find_marker",
    "freeness_certificate",
    "identity_factor_map",
    "letter_code_map",
    "level_collapse",
    "loads_certificate",
    "marker_from_json",
    "marker_from_point",
    "marker_to_json",
    "modulus_level",
    "normalize_E",
    "pullback_marker",
    "quotient_pullback",
    "quotient_system",
    "verify_certificate",
    "verify_freeness",
    "verify_marker",
]
