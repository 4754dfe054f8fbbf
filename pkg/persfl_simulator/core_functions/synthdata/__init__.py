from .device_stream import DeviceStream
from .generate_federation import generate_federation, generate_unlabeled_test_set, generate_validation_set
from .random_streams import random_stream

__all__ = [
    "DeviceStream",
    "generate_federation",
    "generate_unlabeled_test_set",
    "generate_validation_set",
    "random_stream",
]
