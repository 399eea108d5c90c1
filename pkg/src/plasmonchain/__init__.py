"""plasmonchain: quasinormal modes, coupling, and chains of plasmonic nanospheres.

A research-grade toolkit for the transverse-magnetic quasinormal modes of
metallic (Drude) nanospheres, their normalization and near-field coupling,
effective non-Hermitian Hamiltonians of sphere dimers and chains, waveguide
transmission through chains, and an independent exact multi-sphere
collocation oracle used to validate the coupled-mode predictions.

Frequencies are photon energies in eV, lengths in nm, and every field
oscillates as exp(+i w t): a decaying resonance has Im w > 0 and full
linewidth 2 Im w.
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]

__version__ = "0.1.0"
