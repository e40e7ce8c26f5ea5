"""Centre-manifold models of Burgers' equation with time-dependent diffusivity."""

__version__ = "0.1.0"
