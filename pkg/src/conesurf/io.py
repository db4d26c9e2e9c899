"""File emission helpers: OBJ meshes, JSON reports, CSV tables."""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import IoError


def _open_out(path):
    path = Path(path)
    if not path.parent.exists():
        raise IoError(path, f"output directory does not exist: {path.parent}")
    return path


def write_obj(path, vertices, triangles):
    """OBJ with `v x y z` and 1-based CCW `f i j k` records."""
    path = _open_out(path)
    with open(path, "w") as fh:
        for v in np.asarray(vertices, dtype=float):
            fh.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for t in np.asarray(triangles, dtype=int):
            fh.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")


def read_obj(path):
    path = Path(path)
    if not path.exists():
        raise IoError(path, f"surface artifact not found: {path}")
    verts, tris = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                tris.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
    return np.asarray(verts, dtype=float), np.asarray(tris, dtype=int)


def write_json(path, payload):
    path = _open_out(path)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    path = Path(path)
    if not path.exists():
        raise IoError(path, f"file not found: {path}")
    with open(path) as fh:
        return json.load(fh)


def write_csv(path, header, rows):
    path = _open_out(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
