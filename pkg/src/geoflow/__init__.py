"""Euler-Arnold geodesic flows on Lie algebras, the circle and the flat torus."""

from geoflow.errors import ConfigError, ContractError, IntegrationDiverged
from geoflow.models import CATALOG, MODEL_IDS, ModelSpec, initial_state

__version__ = "0.1.0"

__all__ = ["CATALOG", "MODEL_IDS", "ModelSpec", "initial_state",
           "ConfigError", "ContractError", "IntegrationDiverged"]
