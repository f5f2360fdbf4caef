"""gridramsey: constructions, certificates and exact search for the grid
Ramsey problem and for hypergraph-versus-star Ramsey numbers."""

from ._version import __version__
from .exceptions import *
from .context import context, get_context, set_context, local_context
from .core import *
from .clique import SearchBudget, BudgetTracker, find_clique, max_clique
from .textio import *
from .verify import *
from .params import ParamSchedule, Tolerances
from .construct import *
from .layered import *
from .extract import *
from .bounds import *
from .search import *
from .stats import *
from .experiment import ExperimentConfig, parse_config, load_config, \
    run_experiment


def version():
    """Return the version of gridramsey as a string."""
    return __version__
