"""Dual-mode (scalar + vector) RISC instruction-set simulator toolkit."""

from .machine import MachineConfig, MachineState

__all__ = ["MachineConfig", "MachineState"]
__version__ = "0.1.0"
