from .ratfunc import RationalField, RationalFunction, RationalFunctionField, rational_function_field
from .tower import (
    HyperellipticTower,
    RadicalTower,
    TowerConsistencyError,
    TowerElement,
    radical_names,
    subtower_membership,
    tower_inverse,
    tower_mul,
)
from .independence import verify_radical_independence

__all__ = [
    "HyperellipticTower",
    "RadicalTower",
    "RationalField",
    "RationalFunction",
    "RationalFunctionField",
    "TowerConsistencyError",
    "TowerElement",
    "radical_names",
    "rational_function_field",
    "subtower_membership",
    "tower_inverse",
    "tower_mul",
    "verify_radical_independence",
]
