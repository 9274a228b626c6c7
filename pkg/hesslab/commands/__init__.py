"""Command implementations for the k-Hessian laboratory."""

from .verify import cmd_verify_props
from .concavity import cmd_verify_concavity
from .solve import cmd_solve
from .scan import cmd_scan_pogorelov
from .rigidity import cmd_experiment_rigidity
from .runs import cmd_list_runs

__all__ = [
    'cmd_verify_props', 'cmd_verify_concavity', 'cmd_solve', 'cmd_scan_pogorelov', 'cmd_experiment_rigidity',
    'cmd_list_runs',
]
