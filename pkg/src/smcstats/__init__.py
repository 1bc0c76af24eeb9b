"""Threshold secret-sharing MPC simulator with secure standard deviation and chi-squared."""

from .engine import CostLedger, EngineConfig, GateCostTable, PartyNetwork
from .field import DEFAULT_PRIME, FieldElement, PrimeField
from .protocols import SecretFixed, SecretInt
from .stats import ChiSqInput, StdDevInput, run_program

__all__ = [
    "ChiSqInput",
    "CostLedger",
    "DEFAULT_PRIME",
    "EngineConfig",
    "FieldElement",
    "GateCostTable",
    "PartyNetwork",
    "PrimeField",
    "SecretFixed",
    "SecretInt",
    "StdDevInput",
    "run_program",
]
