"""Reversible arithmetic circuits for elliptic-curve discrete logarithms.

Construction, exact bit-level simulation, ASAP depth scheduling, 2D layout
metrics, and analytic cost composition for the full stack: carry-lookahead
adders, modular and Montgomery arithmetic, Kaliski inversion, elliptic-curve
point addition, and the windowed discrete-log circuit built from them.
"""

__version__ = "0.1.0"
