"""Torsion of Drinfeld modules via Anderson generating functions.

Exact arithmetic over F_q[θ], precision-tracked arithmetic in C_∞, truncated
Tate-algebra calculus, and verification of the Galois action on torsion.
"""

from __future__ import annotations

__version__ = "0.1.0"
