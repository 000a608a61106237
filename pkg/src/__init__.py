"""PAM Lab - Main Source Package

Numerical laboratory for the two-dimensional parabolic Anderson model with
white-noise potential: noise sampling, mollification and renormalisation,
the Picard scheme of the transformed equation, Besov-type norms and the
validation harness.
"""

__version__ = "1.0.0"
__author__ = "Development Team"
