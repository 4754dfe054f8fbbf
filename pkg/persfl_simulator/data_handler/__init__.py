from .helpers.federation_loader import load_federation
from .helpers.federation_saver import FederationSaver, save_federation
from .helpers.trace_saver import load_traces_csv, save_traces_csv, traces_to_table

__all__ = [
    "FederationSaver",
    "load_federation",
    "load_traces_csv",
    "save_federation",
    "save_traces_csv",
    "traces_to_table",
]
