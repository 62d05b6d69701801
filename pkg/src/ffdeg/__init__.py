"""Degree indicators for Groebner-basis cryptanalysis over prime fields.

Series-based estimates (D_reg, D_{Z^s}), exact Macaulay and syzygy ranks
(d_reg, d_ff', d_ff), a bounded Groebner engine for d_slv, and generators for
random, Rainbow/RBS and MinRank/KS systems.
"""

__version__ = "0.1.0"
