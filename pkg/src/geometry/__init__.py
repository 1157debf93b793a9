"""
Triangle meshes of planar model surfaces.
"""
from .mesh import TriangleMesh, boundary_integrate, euler_characteristic, integrate
from .generators import build_annulus_mesh, build_disc_mesh, build_multihole_mesh
from .mesh_io import read_mesh, write_mesh

__all__ = ['TriangleMesh', 'boundary_integrate', 'euler_characteristic', 'integrate',
           'build_annulus_mesh', 'build_disc_mesh', 'build_multihole_mesh', 'read_mesh', 'write_mesh']
