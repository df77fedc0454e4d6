"""Fox calculus, Magnus expansions and Freiheitssatz tooling for free products."""

__version__ = "0.1.0"
