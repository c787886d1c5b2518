"""Holonomic gates on atomic ensembles: builders, dynamics and a Rydberg Stark calculator."""
__version__ = "0.1.0"
