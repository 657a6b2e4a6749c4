"""JSON encodings for modules, maps, complexes, posets and reports.

Modules are {"rank": r, "torsion": [e, ...]}; maps carry entries as
[numerator, denominator] pairs in row-major order; complexes bundle the
prime with modules and differentials; posets list elements and covering
edges (tuples encode as nested lists).
"""

from __future__ import annotations

import json

from .matrix import Matrix
from .palgebra import FpModule, ModuleMap
from .complexes import ChainMap, CyclicComplex
from .posets import FinPoset
from .scalar import QQ


def module_to_json(m: FpModule) -> dict:
    return {"rank": m.free_rank, "torsion": list(m.torsion)}


def module_from_json(data, p) -> FpModule:
    return FpModule(p, data["rank"], tuple(data["torsion"]))


def map_to_json(f: ModuleMap) -> dict:
    entries = [
        [int(x.numerator), int(x.denominator)]
        for row in f.mat.rows
        for x in row
    ]
    return {
        "source": module_to_json(f.source),
        "target": module_to_json(f.target),
        "entries": entries,
    }


def map_from_json(data, p) -> ModuleMap:
    src = module_from_json(data["source"], p)
    tgt = module_from_json(data["target"], p)
    flat = [QQ(a, b) for a, b in data["entries"]]
    rows = [
        tuple(flat[i * src.ngens : (i + 1) * src.ngens]) for i in range(tgt.ngens)
    ]
    return ModuleMap(src, tgt, Matrix(rows, ncols=src.ngens))


def complex_to_json(c: CyclicComplex) -> dict:
    return {
        "p": c.p,
        "N": c.N,
        "modules": [module_to_json(m) for m in c.modules],
        "differentials": [map_to_json(d) for d in c.diffs],
    }


def complex_from_json(data) -> CyclicComplex:
    p = data["p"]
    mods = [module_from_json(m, p) for m in data["modules"]]
    diffs = [map_from_json(d, p) for d in data["differentials"]]
    return CyclicComplex(p, mods, diffs)


def _encode_elem(x):
    if isinstance(x, tuple):
        return [_encode_elem(y) for y in x]
    return x


def _decode_elem(x):
    if isinstance(x, list):
        return tuple(_decode_elem(y) for y in x)
    return x


def poset_to_json(P: FinPoset) -> dict:
    return {
        "elements": [_encode_elem(x) for x in P.elements],
        "hasse": [[_encode_elem(a), _encode_elem(b)] for (a, b) in P.hasse],
    }


def poset_from_json(data) -> FinPoset:
    elems = [_decode_elem(x) for x in data["elements"]]
    hasse = [(_decode_elem(a), _decode_elem(b)) for a, b in data["hasse"]]
    return FinPoset(elems, hasse)


def chain_map_to_json(f: ChainMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "parts": [map_to_json(g) for g in f.parts],
    }


def page_to_json(r, cells: dict) -> dict:
    return {
        "r": r,
        "cells": [
            {"s": s, "t": t, "module": module_to_json(m)}
            for (s, t), m in sorted(cells.items())
        ],
    }


def pipeline_report_to_json(rep) -> dict:
    out = {
        "p": rep.p,
        "ok": rep.ok,
        "notes": list(rep.notes),
        "checks": [
            {
                "anchor": c.anchor,
                "status": c.status,
                "witness": _jsonable(c.details),
            }
            for c in rep.checks
        ],
    }
    if "h_tensor" in rep.artifacts:
        out["h_tensor"] = [module_to_json(m) for m in rep.artifacts["h_tensor"]]
        out["h_reconstructed"] = [
            module_to_json(m) for m in rep.artifacts["h_reconstructed"]
        ]
    if "bz" in rep.artifacts:
        out["ses"] = [
            {
                "n": bz.n,
                "middle": module_to_json(bz.middle_zeta),
                "left": module_to_json(bz.left_zeta),
                "right": module_to_json(bz.right),
                "edge_kernel": module_to_json(bz.edge_kernel),
                "ok": bz.ok,
            }
            for bz in rep.artifacts["bz"]
        ]
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, FpModule):
        return module_to_json(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load(path):
    with open(path) as fh:
        return json.load(fh)
