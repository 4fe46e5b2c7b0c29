"""Algebraic complete integrability of three-species skew Lotka-Volterra systems."""
from .balances import indicial_locus, integrality_report, kowalevski_exponents
from .classify import ClassLabel, GroupElement, is_isomorphic, normalize
from .config import ScanConfig, Tolerances, VerifyConfig
from .dynamics import BlowUp, drift_report, integrate
from .laurent import Balance, aci_test, expand
from .lv_core import LVSystem, casimir, hamiltonian, vector_field

__version__ = "0.1.0"

__all__ = [
    "Balance",
    "BlowUp",
    "ClassLabel",
    "GroupElement",
    "LVSystem",
    "ScanConfig",
    "Tolerances",
    "VerifyConfig",
    "aci_test",
    "casimir",
    "drift_report",
    "expand",
    "hamiltonian",
    "indicial_locus",
    "integrality_report",
    "integrate",
    "is_isomorphic",
    "kowalevski_exponents",
    "normalize",
    "vector_field",
]
