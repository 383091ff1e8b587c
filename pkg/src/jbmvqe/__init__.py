"""VQE and joint-Bell-measurement-accelerated VQE simulation."""

__version__ = "0.1.0"
