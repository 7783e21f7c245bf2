"""
Exhaustive search for globally curvature sharp quartic graphs and the
canonical labeling used to deduplicate its results.
"""
from .canonical import *
from .extension import *
