"""Two-channel wave-packet dynamics for the Jaynes-Cummings and Rabi models."""
from ._accel import backend_name
from .errors import *  # noqa: F401,F403
from .grid import Grid, WavePacket, inner_product, make_grid, to_momentum, to_position
from .models import Model, ModelParams, diabatic_curves, kinetic_part, potential_part, rotate_to_displaced_basis
from .states import AtomStateSpec, FieldStateSpec, build_initial, coherent_wavefunction, fock_wavefunction

__version__ = "0.1.0"
