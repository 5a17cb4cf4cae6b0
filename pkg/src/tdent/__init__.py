"""Dynamical entropy of quantized and lattice-discretized sawtooth maps on the torus."""

from .torus import MapParam, RegimeClass, classify_regime
from .entropy import PartitionSpec, entropy_series

__all__ = ["MapParam", "RegimeClass", "classify_regime", "PartitionSpec", "entropy_series"]
__version__ = "0.1.0"
