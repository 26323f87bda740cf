# relations/strategies.py
"""hypothesis strategies shared by the property suites of every app."""
from django.conf import settings
from hypothesis import HealthCheck, strategies as st
from hypothesis import settings as hypothesis_settings
from hypothesis.extra.numpy import arrays
import numpy as np

from .carriers import Carrier, PortType
from .core import Relation

hypothesis_settings.register_profile(
    "relspace",
    max_examples=1000,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
hypothesis_settings.register_profile("quick", max_examples=50, derandomize=True, deadline=None)
hypothesis_settings.load_profile(getattr(settings, "RELSPACE_HYPOTHESIS_PROFILE", "relspace"))

MAX_CARRIER = 4


def carrier_of(size: int, name: str = "X") -> Carrier:
    return Carrier(name, range(size))


# carriers are keyed by size, so equal sizes give equal carriers
def carriers(min_size: int = 1, max_size: int = MAX_CARRIER):
    return st.integers(min_size, max_size).map(lambda n: carrier_of(n, f"X{n}"))


def ports(max_wires: int = 2, min_wires: int = 0, min_size: int = 1, max_size: int = MAX_CARRIER):
    return st.lists(carriers(min_size, max_size), min_size=min_wires, max_size=max_wires).map(PortType)


def relations_between(dom: PortType, cod: PortType):
    shape = dom.shape + cod.shape
    return arrays(np.bool_, shape).map(lambda data: Relation(dom, cod, data))


def relations(max_wires: int = 2):
    return st.tuples(ports(max_wires), ports(max_wires)).flatmap(lambda dc: relations_between(*dc))


def states(cod: PortType):
    return relations_between(PortType.unit(), cod)


def endo_relations(x: Carrier):
    return relations_between(PortType((x,)), PortType((x,)))
