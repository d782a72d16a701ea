"""equiweil: exact equivariant de Rham calculus and differential cohomology on finite models."""

__version__ = "0.1.0"
