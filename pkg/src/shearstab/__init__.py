"""Linear stability of shear layers at large Reynolds number."""
__version__ = "0.1.0"
