"""Static characterization of C functions through hierarchical control/data-flow graphs."""

__version__ = "0.1.0"
