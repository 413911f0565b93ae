"""mfkit: exact matrix-factorization toolkit."""
__version__ = "0.1.0"
