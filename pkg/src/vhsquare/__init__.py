"""Nonpositively curved VH-subdivisions of presentation complexes."""
from .bicomplex import (Bicomplex, build_standard_2complex, check_triangle, find_repeated_corners,
                        parity_subdivide, side_decompose)
from .pairing import brute_force_pairing, greedy_pairing, pairing_exists, verify_admissible
from .presentation import Presentation, builtin, make_presentation, parse_presentation
from .squarecomplex import gauss_bonnet_disk, hyperbolicity_criterion, npc_check, small_cancellation_check
from .subdivision import subdivide_complex, subdivide_polygon

__version__ = "0.1.0"
