"""k-Hessian laboratory: symmetric-function algebra, concavity campaigns and a Dirichlet solver."""

__version__ = "1.0.0"
__author__ = "Hesslab Team"

# Import key classes for convenient top-level access
from .manifest import ManifestManager
from .models import EigenvalueVector, SymMatrix, ConcavityInstance, ProblemSpec, SolverState
from .algebra import sigma, sigma_gradient, sigma_hessian, in_cone
from .concavity import deficit, run_campaign
from .solver import newton_solve, load_problem_config

# Common convenience imports
from .utils import utc_now_str, ensure_dir

__all__ = [
    # Core classes
    'ManifestManager',

    # Data models
    'EigenvalueVector',
    'SymMatrix',
    'ConcavityInstance',
    'ProblemSpec',
    'SolverState',

    # Algorithms
    'sigma',
    'sigma_gradient',
    'sigma_hessian',
    'in_cone',
    'deficit',
    'run_campaign',
    'newton_solve',
    'load_problem_config',

    # Utilities
    'utc_now_str',
    'ensure_dir',

    # Package metadata
    '__version__',
    '__author__'
]
