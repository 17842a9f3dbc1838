"""shiftlab: shift spaces, entropy and cellular automata over Z and Z^2."""
from __future__ import annotations

__version__ = "0.1.0"
