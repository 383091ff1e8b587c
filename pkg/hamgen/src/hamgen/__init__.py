from .generate import MoleculeSpec, generate

__all__ = ["MoleculeSpec", "generate"]
