#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Global configuration and constants for the k-Hessian laboratory.
"""

from typing import Tuple

# Symmetric functions
CONE_TOLERANCE = 0.0
IDENTITY_RTOL = 1e-12
INEQUALITY_SLACK = 1e-10
TIE_RTOL = 1e-9  # eigenvalue clustering in divided differences and multiplicity

# Jacobi eigensolver
JACOBI_MAX_SWEEPS = 50
JACOBI_TOL = 1e-14

# Concavity campaign
DEFICIT_TOLERANCE = 1e-9
SAMPLER_MAX_ATTEMPTS = 1_000_000
SAMPLER_PROFILES: Tuple[str, ...] = ("interior", "near_boundary", "large_negative", "clustered_top")
CAMPAIGN_DIMENSIONS: Tuple[int, ...] = (3, 4, 5)
DEFAULT_CAMPAIGN_SAMPLES = 100_000
SEARCH_MIN_SAMPLES = 10_000
SEARCH_DELTA0_GRID: Tuple[float, ...] = (1 / 30, 1 / 15, 1 / 10)
SEARCH_K_FACTORS: Tuple[float, ...] = (1.0, 2.0, 10.0)  # multiples of (k+1)^2
SEARCH_LAMBDA1_GRID: Tuple[float, ...] = (10.0, 100.0, 1000.0)
A_MARGIN = 1.05  # A = A_MARGIN * (3 Fmax + 1)^(1/(n-1))
DEFAULT_FMAX = 1.0
DEFAULT_LAMBDA1_MIN = 0.0
CHUNK_SIZE = 2_000

# Property suite
DEFAULT_PROPS_SAMPLES = 10_000
PROPS_DIMENSIONS: Tuple[int, ...] = (3, 4, 5, 6, 7, 8)
SPECTRAL_SAMPLES = 1_000
FD_STEP = 1e-4
FD_SECOND_RTOL = 1e-5
FD_FIRST_RTOL = 1e-6
SPECTRAL_RTOL = 1e-10
WORST_ROWS = 5

# Solver
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
NEWTON_MAX_HALVINGS = 30
NEWTON_DAMPING = 0.5
LINEAR_RTOL = 1e-8
LINEAR_MAX_ITER = 5_000
MIN_BALL_POINTS = 9
MIN_BOX_POINTS = 3
SOLVER_DIMENSIONS: Tuple[int, ...] = (3, 4)
PSI_EXPONENT_MAX = 4.0
SNAPSHOT_MAGIC = b"HESS1"

# Experiments
DEFAULT_BETA = 4.0
BETA_SWEEP: Tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
RIGIDITY_RADII: Tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
RIGIDITY_POINTS = 17
RIGIDITY_EPSILON = 0.05
RIGIDITY_GROWTH = 2.0
HOLDER_MAX_POINTS = 1_500
FIT_RANK_RTOL = 1e-12

# Output
CSV_FLOAT_FORMAT = "%.17g"
OUT_ENV_VAR = "HESSLAB_OUT"
DEFAULT_OUT_DIR = "hesslab_out"

# Exit codes
EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2
EXIT_SAMPLER = 3
EXIT_BARRIER = 4
EXIT_LINEAR = 5
EXIT_CORRUPT = 6
EXIT_INTERRUPTED = 130

# Processing defaults
DEFAULT_THREADS = 1
DEFAULT_SEED = 0

# Global variables that can be modified by CLI
THREADS = DEFAULT_THREADS
SHOW_PROGRESS = True
OUT_DIR = DEFAULT_OUT_DIR
