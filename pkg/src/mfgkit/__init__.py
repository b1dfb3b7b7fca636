"""Mean force Gibbs states and master-equation generators for bosonic open systems.

Natural units throughout the library: hbar = k_B = 1, all energies are
angular frequencies. SI conversion happens only in the CLI layer.
"""

from . import bath, clexact, eigenops, finitebath, megen, mfstatics, opcore

__all__ = [
    "opcore",
    "bath",
    "eigenops",
    "mfstatics",
    "clexact",
    "megen",
    "finitebath",
]

__version__ = "0.1.0"
