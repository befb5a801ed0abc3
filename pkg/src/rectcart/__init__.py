"""Rectilinear duals and rectilinear cartograms of plane triangulations.

Main entry points:

* :func:`build_octagons` builds an area-universal 8-sided rectilinear dual
  from a Schnyder realizer and a canonical order;
* :func:`prepare` and :func:`relax` move its maximal segments until every
  region has its prescribed area;
* :func:`ham_cartogram`, :func:`six_sided_cartogram` and
  :func:`outerplanar_cartogram` give exact cartograms along a Hamiltonian
  cycle;
* :func:`verify_layout` checks a layout against its graph.
"""

from .generate import double_fan, gen_random_triangulation, k4, octahedron, random_outerplanar, random_weights
from .geometry import GeometryError, Layout, Rect
from .graph import (
    InstanceError,
    PlaneTriangulation,
    WeightedInstance,
    make_instance,
    parse_instance,
    validate,
)
from .hamiltonian import (
    ConstructionError,
    ham_cartogram,
    one_legged_report,
    outerplanar_cartogram,
    six_sided_cartogram,
)
from .octo import build_octagons, is_area_universal, skeleton, subdivide
from .relax import RelaxParams, prepare, relax
from .verify import verify_layout

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "GeometryError",
    "InstanceError",
    "Layout",
    "PlaneTriangulation",
    "Rect",
    "RelaxParams",
    "WeightedInstance",
    "build_octagons",
    "double_fan",
    "gen_random_triangulation",
    "ham_cartogram",
    "is_area_universal",
    "k4",
    "one_legged_report",
    "make_instance",
    "octahedron",
    "outerplanar_cartogram",
    "parse_instance",
    "prepare",
    "random_outerplanar",
    "random_weights",
    "relax",
    "six_sided_cartogram",
    "skeleton",
    "subdivide",
    "validate",
    "verify_layout",
]
