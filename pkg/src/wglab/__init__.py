"""Desk-scale laboratory for Waring-Goldbach problems in short intervals.

The package builds the W-trick parameter bundle, the linear sieve majorant,
local solubility counts, complete exponential sums, arc decompositions and
restriction moments, and searches for explicit prime representations.
"""

__version__ = "0.1.0"
