"""Maximum likelihood degrees of scaled toric models and their facial submodels."""

__version__ = "0.1.0"
