# 暴力枚举 oracle
from .enumeration import (
    CatalogEntry,
    VertexCatalog,
    enumerate_vertices,
    exhaustive_shadow_path,
    solve_by_enumeration,
)

__all__ = [
    "CatalogEntry",
    "VertexCatalog",
    "enumerate_vertices",
    "solve_by_enumeration",
    "exhaustive_shadow_path",
]
