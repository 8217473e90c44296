"""Einstein-Randers metrics from Taub-NUT navigation data, with numerical verification."""
from .exceptions import (ConfigurationError, DegenerateFlagError, DomainError,
                         NotPositiveDefiniteError, NutFinslerError, OutsideDomainError,
                         SingularJetError)
from .finsler import RandersHandle, ScanConfig, einstein_scan, point_curvature
from .jets import Jet, JetConfig, seed
from .navigation import NavigationParams
from .riemann import Flat, MetricSpec, TaubNut

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DegenerateFlagError", "DomainError", "NotPositiveDefiniteError",
    "NutFinslerError", "OutsideDomainError", "SingularJetError", "RandersHandle", "ScanConfig",
    "einstein_scan", "point_curvature", "Jet", "JetConfig", "seed", "NavigationParams",
    "Flat", "MetricSpec", "TaubNut",
]
