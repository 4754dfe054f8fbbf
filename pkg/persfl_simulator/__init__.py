__author__ = """PersFL Simulator Developers"""
__email__ = "persfl-simulator@users.noreply.github.com"
__version__ = "v2026.10.1001"

#######################################################################
### Simulator for personalized federated learning by data-driven
### peer selection. A target device improves its model by probing
### updates computed on randomly sampled peers and keeping the one
### that lowers its own local loss. Ships the parametric (linear)
### and model-agnostic (regression tree) variants, the baselines
### they are compared against and the experiment harness.
#######################################################################
# attaches Logger.trace / Logger.success before any module logs
from persfl_simulator.system.configure_logging import LogLevel, configure_logging
