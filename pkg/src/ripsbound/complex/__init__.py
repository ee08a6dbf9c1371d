"""Sphere complexes, their homology, and disk-diagram search."""
from .disk import DiskDiagram, SimplicialLoop, Verdict, certify_disk, edge_path_search, null_homotopy_search
from .homology import H1Summary, h1_context, homology_h1
from .models import boundary_cycle, subdivide_model
from .sphere import ComplexTooLarge, InsufficientRadius, SphereComplex, build_sphere_complex, connected_components

__all__ = [
    "DiskDiagram", "SimplicialLoop", "Verdict", "certify_disk", "edge_path_search", "null_homotopy_search",
    "H1Summary", "h1_context", "homology_h1", "boundary_cycle", "subdivide_model", "ComplexTooLarge",
    "InsufficientRadius", "SphereComplex", "build_sphere_complex", "connected_components",
]
