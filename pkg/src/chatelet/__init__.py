"""Descent data for conic-bundle surfaces y^2 - a z^2 = F(u, v)."""
from .counting import CountReport, count_nb, local_density, recover_parametrization, sum_r_a
from .forms import BinaryForm, SurfaceSpec, resultant, validate_surface
from .intarith import Factorization, factorize, kronecker, valuation
from .multiquad import MQElement, MQLinearForm, delta, pluecker_residue, split_quadratic
from .picard import alpha, beta, build_lattice, fixed_sublattice, tate_h1
from .points import PointRecord
from .quadfield import QuadFieldInfo, field_info, is_norm, r_a_count, r_a_divisor_formula
from .torsors import (
    TorsorLabel,
    assign_label,
    lambda_torsor_witness,
    m_set,
    membership_test,
    partition_check,
    sigma_set,
)

__version__ = "0.1.0"
