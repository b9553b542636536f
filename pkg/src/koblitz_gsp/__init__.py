"""Symplectic densities, Koblitz-type constants and Jacobian order statistics.

Submodules: ``arith``, ``symplectic``, ``densities``, ``curves``, ``stats``,
``sieve``, ``lmfdb`` and ``cli``.
"""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("koblitz-gsp")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0+unknown"
