"""Wi-Fi planning: AP location under partial frequency separation, and
frequency assignment, with exact desk-scale solvers and MILP emitters."""

from .instance import GeneratorConfig, Instance, generate, load, save
from .topology import associate, build_topology

__version__ = "0.1.0"

__all__ = ["GeneratorConfig", "Instance", "associate", "build_topology", "generate", "load", "save"]
