"""Bundled example fields.

==========  ==========================================================
``tet``     boundary of the tetrahedron, one orbit of each index
``tor_a``   torus with an index-0 and an index-1 orbit, no rest cells
``tor_b``   torus with four rest cells and one index-1 orbit
``cube``    boundary of the cube as a regular CW complex
``k4``      complete graph on four vertices
``klein``   Klein bottle whose index-1 orbit is twisted
==========  ==========================================================
"""

from __future__ import annotations

from importlib import resources

from ..vector_field import VectorField, parse_fixture

NAMES = ("tet", "tor_a", "tor_b", "cube", "k4", "klein")


def text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"no bundled fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(f"{name}.cvf").read_text(encoding="utf-8")


def load(name: str) -> VectorField:
    return parse_fixture(text(name))
