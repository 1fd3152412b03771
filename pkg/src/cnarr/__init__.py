"""Shard-covector test for congruence normality of rank-3 simplicial arrangements."""

from .exactnum import QQ, AlgebraicElement, NumberField
from .omcore import Arrangement, enumerate_topes, rank2_flats, reorient, sign_eval
from .shards import classify, is_congruence_normal, shard_covectors, shard_digraph

__version__ = "0.1.0"
