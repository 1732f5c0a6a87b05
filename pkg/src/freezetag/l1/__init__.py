"""Constructive 5r wake-up for the l1 disk."""
from .squares import is_monotone, monotone_triple
from .disk import (
    densest_square,
    SquareRegion,
    StartConfig,
    TriangleRegion,
    wake_l1_disk,
    wake_square5,
    wake_square6_return,
    wake_triangle,
)
