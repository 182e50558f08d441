"""
Numerical verification tools for conformal vector fields of (alpha, beta)-metrics
"""

from pbr import version

try:
    __version__ = version.VersionInfo(__package__).release_string()
except Exception:  # pylint: disable=broad-except
    # Running from a source tree that was never installed
    __version__ = "0.0.0"
