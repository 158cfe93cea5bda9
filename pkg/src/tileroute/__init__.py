"""Goal-oriented shortest paths on layered grid graphs with tile-based costs."""

from .model import (INF, Edge, GeneralCosts, Point3, Rect, SimpleCosts, TargetSet, TileGrid,
                    edge_cost, is_consistent, refine_grid)

__version__ = "0.1.0"

__all__ = ["INF", "Edge", "GeneralCosts", "Point3", "Rect", "SimpleCosts", "TargetSet",
           "TileGrid", "edge_cost", "is_consistent", "refine_grid"]
