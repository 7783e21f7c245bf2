"""Graph representation, metric primitives and named graph constructors"""
from .constructors import *
from .graph import *
