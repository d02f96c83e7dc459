"""
Builtin fullerenes, embedded rather than loaded from disk.

C24 and C26 keep the vertex numbering of the published face tables; faces are
stored in cyclic order so edges can be read off consecutive pairs. The face
tables list vertex sets, so the order below was reconstructed from shared
edges (two vertices are adjacent iff they share exactly two faces). The C24
pentagon listed as (3, 4, 21, 19, 20) is stored as its cycle (3, 4, 21, 20, 19).

C20 uses this dodecahedron numbering: outer pentagon 1..5, a middle ring
6..15 where vertex i of the outer pentagon joins 2i+4, and an inner pentagon
16..20 where 16..20 join 7, 9, 11, 13, 15.
"""
from functools import lru_cache

from magic.errors import UnknownBuiltinError
from magic.graph import FullereneGraph

C20_FACES = (
    (1, 2, 3, 4, 5),
    (1, 2, 8, 7, 6),
    (2, 3, 10, 9, 8),
    (3, 4, 12, 11, 10),
    (4, 5, 14, 13, 12),
    (5, 1, 6, 15, 14),
    (16, 17, 9, 8, 7),
    (17, 18, 11, 10, 9),
    (18, 19, 13, 12, 11),
    (19, 20, 15, 14, 13),
    (20, 16, 7, 6, 15),
    (16, 17, 18, 19, 20),
)

C24_FACES = (
    # hexagons
    (1, 2, 3, 4, 5, 6),
    (7, 8, 9, 10, 11, 12),
    # pentagons
    (3, 4, 21, 20, 19),
    (4, 5, 23, 22, 21),
    (5, 6, 13, 24, 23),
    (6, 1, 15, 14, 13),
    (1, 2, 17, 16, 15),
    (2, 3, 19, 18, 17),
    (19, 20, 10, 9, 18),
    (21, 22, 11, 10, 20),
    (23, 24, 12, 11, 22),
    (13, 14, 7, 12, 24),
    (15, 16, 8, 7, 14),
    (17, 18, 9, 8, 16),
)

C26_FACES = (
    # hexagons
    (5, 6, 7, 18, 17, 16),
    (8, 9, 10, 11, 21, 20),
    (12, 13, 14, 15, 24, 23),
    # pentagons
    (19, 20, 21, 22, 26),
    (11, 12, 23, 22, 21),
    (3, 10, 11, 12, 13),
    (1, 2, 4, 5, 6),
    (2, 3, 13, 14, 4),
    (1, 2, 3, 10, 9),
    (4, 5, 16, 15, 14),
    (1, 6, 7, 8, 9),
    (15, 16, 17, 25, 24),
    (17, 18, 19, 26, 25),
    (22, 23, 24, 25, 26),
    (7, 8, 20, 19, 18),
)

BUILTIN_FACES = {
    "C20": (20, C20_FACES),
    "C24": (24, C24_FACES),
    "C26": (26, C26_FACES),
}


@lru_cache(maxsize=None)
def builtin(name: str) -> FullereneGraph:
    """Returns a builtin fullerene by name (case-insensitive: c24 == C24)."""
    key = name.upper()
    if key not in BUILTIN_FACES:
        raise UnknownBuiltinError(
            f"unknown builtin {name!r}, expected one of {', '.join(sorted(BUILTIN_FACES))}")
    n, faces = BUILTIN_FACES[key]
    return FullereneGraph(n=n, faces=faces, graph_id=key)
