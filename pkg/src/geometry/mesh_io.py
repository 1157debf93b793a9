#!/usr/bin/env python
"""
Reader and writer for the plain-text MESH2D v1 format.

    MESH2D v1
    nv nt nb
    x y flag            (nv lines)
    i j k               (nt lines)
    loop_id v0 v1 ...   (nb lines, one per boundary loop)
"""
import logging

from errors import MeshError
from geometry.mesh import TriangleMesh

logger = logging.getLogger(__name__)

HEADER = "MESH2D v1"


def write_mesh(mesh, path):
    """
    Write a mesh to a MESH2D v1 file.

    Args:
        mesh (TriangleMesh): mesh to write
        path (str): output file name
    """
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{HEADER}\n")
        handle.write(f"{mesh.n_vertices} {mesh.n_triangles} {len(mesh.boundary_loops)}\n")
        for (x, y), flag in zip(mesh.vertices, mesh.vertex_flags):
            handle.write(f"{x!r} {y!r} {int(flag)}\n")
        for i, j, k in mesh.triangles:
            handle.write(f"{i} {j} {k}\n")
        for loop_id, loop in enumerate(mesh.boundary_loops):
            handle.write(" ".join(str(v) for v in [loop_id, *loop.tolist()]) + "\n")
    logger.info("wrote mesh to %s", path)


def _records(path):
    with open(path, "r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.strip()
            if line:
                yield number, line


def read_mesh(path):
    """
    Read a MESH2D v1 file.

    Raises:
        MeshError: on a malformed file or an invalid mesh
    """
    records = _records(path)
    try:
        number, line = next(records)
        if line != HEADER:
            raise MeshError(f"{path}:{number}: expected header '{HEADER}'")
        number, line = next(records)
        nv, nt, nb = (int(token) for token in line.split())
        vertices, flags, triangles, loops = [], [], [], {}
        for _ in range(nv):
            number, line = next(records)
            x, y, flag = line.split()
            vertices.append((float(x), float(y)))
            flags.append(int(flag))
        for _ in range(nt):
            number, line = next(records)
            i, j, k = (int(token) for token in line.split())
            triangles.append((i, j, k))
        for _ in range(nb):
            number, line = next(records)
            tokens = [int(token) for token in line.split()]
            loops[tokens[0]] = tokens[1:]
    except StopIteration:
        raise MeshError(f"{path}: file ends early") from None
    except ValueError as e:
        raise MeshError(f"{path}:{number}: malformed record ({e})") from None
    if sorted(loops) != list(range(nb)):
        raise MeshError(f"{path}: boundary loop ids must be 0..{nb - 1}")
    extra = next(records, None)
    if extra is not None:
        raise MeshError(f"{path}:{extra[0]}: unexpected trailing record")

    mesh = TriangleMesh(vertices, triangles, boundary_loops=[loops[i] for i in range(nb)])
    if list(mesh.vertex_flags) != flags:
        raise MeshError(f"{path}: vertex flags disagree with the boundary loops")
    logger.info("read mesh from %s: %d vertices", path, mesh.n_vertices)
    return mesh
