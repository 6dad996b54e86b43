"""Nilpotence, multiplication-group nilpotence and supernilpotence of finite loops."""

from .loop import Loop, Subloop, parse_cayley, parse_many
from .supernil import ForkStatus, fork_search, sn_bounds

__all__ = ["Loop", "Subloop", "parse_cayley", "parse_many", "ForkStatus", "fork_search", "sn_bounds"]
__version__ = "0.1.0"
