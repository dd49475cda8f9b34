"""Column vectors, doubling and elementary automorphisms of lattice polytopes."""

__version__ = "0.1.0"
