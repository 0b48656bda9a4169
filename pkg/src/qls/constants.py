"""Physical constants and unit conversions used across the package."""
import math

from scipy import constants as _c

HBAR = _c.hbar  # J s
H_PLANCK = _c.h
C_LIGHT = _c.c
AMU = _c.atomic_mass  # kg
MU_B = _c.physical_constants["Bohr magneton"][0]  # J/T

#: Bohr magneton over h, MHz/T (default for the hyperfine Hamiltonian).
MU_B_MHZ_PER_T = 13996.245
#: 1 cm^-1 expressed in MHz.
CM1_TO_MHZ = 29979.2458

TWO_PI = math.tau
