#!/usr/bin/env python3
"""Generate data/catalog.json with GAP (via passagemath-gap).

This script is the oracle behind the catalog. It is run once, offline; the C++
library never calls it and re-checks everything it produces.

What it computes:
  * generators of the 15 almost simple groups with socle A5..A10
  * one representative per conjugacy class of core-free maximal subgroups
  * the breadth-first coset labeling used by flagtrans::coset_action
  * the 17 classes of order-32 subgroups of S9, written on the 280 points
  * a subgroup census (orders present in each group) for the first elimination step
  * a base block, in this labeling, for every published design

Usage:
    python3 -m venv /tmp/oracle && /tmp/oracle/bin/pip install passagemath-gap numpy
    TERM=xterm /tmp/oracle/bin/python oracle/generate_catalog.py --out data/catalog.json

Subgroup lattices are cached under --cache (default: oracle/.cache).
"""

import argparse
import itertools
import json
import os
import sys
from collections import Counter, OrderedDict, deque
from math import comb

os.environ.setdefault("TERM", "xterm")
os.environ.setdefault("TERMINFO", "/lib/terminfo")

from sage.all__sagemath_gap import *  # noqa: E402,F401,F403
from sage.libs.gap.libgap import libgap  # noqa: E402

import numpy as np  # noqa: E402

SCHEMA_VERSION = 1

GROUPS = OrderedDict(
    [
        ("A5", "AlternatingGroup(5)"),
        ("S5", "SymmetricGroup(5)"),
        ("A6", "AlternatingGroup(6)"),
        ("S6", "SymmetricGroup(6)"),
        ("M10", "Stabilizer(MathieuGroup(11), 11)"),
        ("PGL2_9", "PGL(2, 9)"),
        ("PGammaL2_9", "PGammaL(2, 9)"),
        ("A7", "AlternatingGroup(7)"),
        ("S7", "SymmetricGroup(7)"),
        ("A8", "AlternatingGroup(8)"),
        ("S8", "SymmetricGroup(8)"),
        ("A9", "AlternatingGroup(9)"),
        ("S9", "SymmetricGroup(9)"),
        ("A10", "AlternatingGroup(10)"),
        ("S10", "SymmetricGroup(10)"),
    ]
)

# ATLAS-style names, keyed by (index, orbit lengths on the natural points).
# A trailing prime marks the second class of a pair swapped by an outer
# automorphism.
MAX_NAMES = {
    "A5": {(10, (2, 3)): "S3", (5, (1, 4)): "A4", (6, (5,)): "D10"},
    "S5": {(10, (2, 3)): "D12", (5, (1, 4)): "S4", (6, (5,)): "5:4"},
    "A6": {(15, (2, 4)): "S4", (6, (1, 5)): "A5", (15, (6,)): "S4'",
           (10, (6,)): "3^2:4", (6, (6,)): "A5'"},
    "S6": {(15, (2, 4)): "S4x2", (6, (1, 5)): "S5", (15, (6,)): "S4x2'",
           (10, (6,)): "3^2:D8", (6, (6,)): "S5'"},
    "M10": {(10, (1, 9)): "3^2:Q8", (36, (5, 5)): "5:4", (45, (2, 8)): "SD16"},
    "PGL2_9": {(10, (1, 9)): "3^2:8", (36, (10,)): "D20", (45, (2, 8)): "D16"},
    "PGammaL2_9": {(10, (1, 9)): "3^2:[2^4]", (36, (10,)): "10:4",
                   (45, (2, 8)): "[2^5]"},
    "A7": {(35, (3, 4)): "(A4x3):2", (21, (2, 5)): "S5", (7, (1, 6)): "A6",
           (15, (7,)): ["L2(7)", "L2(7)'"]},
    "S7": {(35, (3, 4)): "S4xS3", (21, (2, 5)): "S5x2", (7, (1, 6)): "S6",
           (120, (7,)): "7:6"},
    "A8": {(56, (3, 5)): "(A5x3):2", (28, (2, 6)): "S6", (8, (1, 7)): "A7",
           (35, (8,)): "2^4:(S3xS3)", (15, (8,)): ["2^3:L3(2)", "2^3:L3(2)'"]},
    "S8": {(56, (3, 5)): "S5xS3", (28, (2, 6)): "S6x2", (8, (1, 7)): "S7",
           (105, (8,)): "2^4:S4", (35, (8,)): "(S4xS4):2", (120, (8,)): "PGL2(7)"},
    "A9": {(126, (4, 5)): "(A5xA4):2", (84, (3, 6)): "(A6x3):2", (36, (2, 7)): "S7",
           (9, (1, 8)): "A8", (280, (9,)): "3^3:S4", (840, (9,)): "3^2:2A4",
           (120, (9,)): ["L2(8):3", "L2(8):3'"]},
    "S9": {(126, (4, 5)): "S5xS4", (84, (3, 6)): "S6xS3", (36, (2, 7)): "S7x2",
           (9, (1, 8)): "S8", (280, (9,)): "3^3:(2xS4)", (840, (9,)): "3^2:2S4"},
    "A10": {(210, (4, 6)): "(A6xA4):2", (120, (3, 7)): "(A7x3):2", (45, (2, 8)): "S8",
            (10, (1, 9)): "A9", (945, (10,)): "2^4:S5", (126, (10,)): "(A5xA5):4",
            (2520, (10,)): "M10"},
    "S10": {(210, (4, 6)): "S6xS4", (120, (3, 7)): "S7xS3", (45, (2, 8)): "S8x2",
            (10, (1, 9)): "S9", (945, (10,)): "2^5:S5", (126, (10,)): "(S5xS5):2",
            (2520, (10,)): "PGammaL2(9)"},
}

# Every (group, point stabilizer) pair listed for each published design.
# The first entry is the primary realization.
D = "D"
REALIZATIONS = [
    # Full designs.
    ("D1", (5, 10, 6, 3, 3), [("A5", "A4"), ("S5", "S4")], "T1.1"),
    ("D2", (6, 20, 10, 3, 4), [("A6", "A5"), ("S6", "S5"), ("S5", "5:4")], "T1.2,T2.2"),
    ("D3", (6, 15, 10, 4, 6), [("A6", "A5"), ("S6", "S5"), ("S5", "5:4")], "T1.3,T2.3"),
    ("D4", (7, 35, 15, 3, 5), [("A7", "A6"), ("S7", "S6")], "T1.4"),
    ("D5", (7, 21, 15, 5, 10), [("A7", "A6"), ("S7", "S6")], "T1.5"),
    ("D6", (7, 35, 20, 4, 10), [("A7", "A6"), ("S7", "S6")], "T1.6"),
    ("D7", (8, 56, 21, 3, 6), [("A8", "A7"), ("S8", "S7")], "T1.7"),
    ("D8", (8, 28, 21, 6, 15), [("A8", "A7"), ("S8", "S7")], "T1.8"),
    ("D9", (8, 70, 35, 4, 15), [("A8", "A7"), ("S8", "S7")], "T1.9"),
    ("D10", (8, 56, 35, 5, 20), [("A8", "A7"), ("S8", "S7")], "T1.10"),
    ("D11", (9, 84, 28, 3, 7), [("A9", "A8"), ("S9", "S8")], "T1.11"),
    ("D12", (9, 36, 28, 7, 21), [("A9", "A8"), ("S9", "S8")], "T1.12"),
    ("D13", (9, 126, 56, 4, 21), [("A9", "A8"), ("S9", "S8")], "T1.13"),
    ("D14", (9, 84, 56, 6, 35), [("A9", "A8"), ("S9", "S8")], "T1.14"),
    ("D15", (9, 126, 70, 5, 35), [("A9", "A8"), ("S9", "S8")], "T1.15"),
    ("D16", (10, 120, 36, 3, 8), [("A10", "A9"), ("S10", "S9"), ("M10", "3^2:Q8"),
                                  ("PGL2_9", "3^2:8"), ("PGammaL2_9", "3^2:[2^4]")],
     "T1.16,T2.12"),
    ("D17", (10, 45, 36, 8, 28), [("A10", "A9"), ("S10", "S9"), ("M10", "3^2:Q8"),
                                  ("PGL2_9", "3^2:8"), ("PGammaL2_9", "3^2:[2^4]")],
     "T1.17,T2.13"),
    ("D18", (10, 210, 84, 4, 28), [("A10", "A9"), ("S10", "S9")], "T1.18"),
    ("D19", (10, 120, 84, 7, 56), [("A10", "A9"), ("S10", "S9")], "T1.19"),
    ("D20", (10, 252, 126, 5, 56), [("A10", "A9"), ("S10", "S9")], "T1.20"),
    ("D21", (10, 210, 126, 6, 70), [("A10", "A9"), ("S10", "S9")], "T1.21"),
    # The remaining designs.
    ("D22", (6, 10, 5, 3, 2), [("A5", "D10")], "T2.1"),
    ("D23", (10, 15, 6, 4, 2), [("S5", "D12"), ("A6", "3^2:4"), ("S6", "3^2:D8")], "T2.4"),
    ("D24", (10, 15, 9, 6, 5), [("A6", "3^2:4"), ("S6", "3^2:D8")], "T2.5"),
    ("D25", (10, 60, 18, 3, 4), [("A6", "3^2:4"), ("S6", "3^2:D8")], "T2.6"),
    ("D26", (10, 36, 18, 5, 8), [("A6", "3^2:4"), ("M10", "3^2:Q8")], "T2.7"),
    ("D27", (15, 15, 8, 8, 4), [("A6", ["S4", "S4'"]), ("S6", ["S4x2", "S4x2'"]),
                                ("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.8"),
    ("D28", (10, 72, 36, 5, 16), [("S6", "3^2:D8"), ("PGL2_9", "3^2:8"),
                                  ("PGammaL2_9", "3^2:[2^4]")], "T2.9"),
    ("D29", (10, 30, 12, 4, 4), [("M10", "3^2:Q8"), ("PGL2_9", "3^2:8"),
                                 ("PGammaL2_9", "3^2:[2^4]")], "T2.10"),
    ("D30", (10, 30, 18, 6, 10), [("M10", "3^2:Q8"), ("PGL2_9", "3^2:8"),
                                  ("PGammaL2_9", "3^2:[2^4]")], "T2.11"),
    ("D31", (10, 180, 72, 4, 24), [("M10", "3^2:Q8"), ("PGL2_9", "3^2:8"),
                                   ("PGammaL2_9", "3^2:[2^4]")], "T2.14"),
    ("D32", (36, 180, 40, 8, 8), [("PGammaL2_9", "10:4")], "T2.15"),
    ("D33", (15, 35, 7, 3, 1), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.16"),
    ("D34", (15, 15, 7, 7, 3), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.17"),
    ("D35", (15, 105, 28, 4, 6), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.18"),
    ("D36", (15, 35, 28, 12, 22), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.19"),
    ("D37", (15, 105, 42, 6, 15), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.20"),
    ("D38", (15, 120, 56, 7, 24), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.21"),
    ("D39", (15, 420, 84, 3, 12), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.22"),
    ("D40", (15, 420, 168, 6, 60), [("A7", "L2(7)"), ("A8", "2^3:L3(2)")], "T2.23"),
    ("D41", (15, 42, 14, 5, 4), [("A7", "L2(7)")], "T2.24"),
    ("D42", (15, 70, 28, 6, 10), [("A7", "L2(7)")], "T2.25"),
    ("D43", (15, 42, 28, 10, 18), [("A7", "L2(7)")], "T2.26"),
    ("D44", (15, 126, 42, 5, 12), [("A7", "L2(7)")], "T2.27"),
    ("D45", (15, 70, 42, 9, 24), [("A7", "L2(7)")], "T2.28"),
    ("D46", (15, 210, 56, 4, 12), [("A7", "L2(7)")], "T2.29"),
    ("D47", (15, 210, 84, 6, 30), [("A7", "L2(7)")], "T2.30"),
    ("D48", (15, 126, 84, 10, 54), [("A7", "L2(7)")], "T2.31"),
    ("D49", (15, 630, 168, 4, 36), [("A7", "L2(7)")], "T2.32"),
    ("D50", (21, 70, 30, 9, 12), [("A7", "S5"), ("S7", "S5x2")], "T2.33"),
    ("D51", (21, 252, 60, 5, 12), [("A7", "S5"), ("S7", "S5x2")], "T2.34"),
    ("D52", (35, 35, 18, 18, 9), [("A7", "(A4x3):2"), ("S7", "S4xS3"),
                                  ("A8", "2^4:(S3xS3)"), ("S8", "(S4xS4):2")], "T2.35"),
    ("D53", (15, 168, 56, 5, 16), [("A8", "2^3:L3(2)")], "T2.36"),
    ("D54", (15, 280, 112, 6, 40), [("A8", "2^3:L3(2)")], "T2.37"),
    ("D55", (15, 168, 112, 10, 72), [("A8", "2^3:L3(2)")], "T2.38"),
    ("D56", (15, 280, 168, 9, 96), [("A8", "2^3:L3(2)")], "T2.39"),
    ("D57", (15, 840, 224, 4, 48), [("A8", "2^3:L3(2)")], "T2.40"),
    ("D58", (56, 840, 180, 12, 36), [("A8", "(A5x3):2")], "T2.41"),
    ("D59", (56, 840, 180, 12, 36), [("A8", "(A5x3):2")], "T2.42"),
    ("D60", (56, 1680, 360, 12, 72), [("S8", "S5xS3")], "T2.43"),
    ("D61", (56, 1680, 360, 12, 72), [("S8", "S5xS3")], "T2.44"),
    ("D62", (36, 840, 140, 6, 20), [("A9", "S7"), ("S9", "S7x2")], "T2.45"),
    ("D63", (36, 315, 140, 16, 60), [("A9", "S7"), ("S9", "S7x2")], "T2.46"),
    ("D64", (36, 5040, 840, 6, 120), [("A9", "S7"), ("S9", "S7x2")], "T2.47"),
    ("D65", (36, 5040, 840, 6, 120), [("A9", "S7"), ("S9", "S7x2")], "T2.48"),
    ("D66", (120, 3360, 504, 18, 72), [("A9", "L2(8):3")], "T2.49"),
    ("D67", (120, 10080, 1512, 18, 216), [("A9", "L2(8):3")], "T2.50"),
    ("D68", (120, 10080, 1512, 18, 216), [("A9", "L2(8):3")], "T2.51"),
    ("D69", (280, 11340, 1296, 32, 144), [("S9", "3^3:(2xS4)")], "T2.52"),
    ("D70", (45, 1575, 420, 12, 105), [("A10", "S8"), ("S10", "S8x2")], "T2.53"),
    ("D71", (45, 37800, 10080, 12, 2520), [("A10", "S8"), ("S10", "S8x2")], "T2.54"),
    ("D72", (45, 75600, 20160, 12, 5040), [("A10", "S8"), ("S10", "S8x2")], "T2.55"),
    ("D73", (120, 33600, 5040, 18, 720), [("A10", "(A7x3):2"), ("S10", "S7xS3")], "T2.56"),
    ("D74", (120, 100800, 15120, 18, 2160), [("A10", "(A7x3):2")], "T2.57"),
    ("D75", (126, 4725, 225, 6, 9), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.58"),
    ("D76", (126, 2100, 600, 36, 168), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.59"),
    ("D77", (126, 18900, 900, 6, 36), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.60"),
    ("D78", (126, 37800, 1800, 6, 72), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.61"),
    ("D79", (126, 14175, 1800, 16, 216), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.62"),
    ("D80", (126, 75600, 3600, 6, 144), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.63"),
    ("D81", (126, 151200, 7200, 6, 288), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.64"),
    ("D82", (126, 56700, 7200, 16, 864), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.65"),
    ("D83", (126, 25200, 7200, 36, 2016), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.66"),
    ("D84", (126, 25200, 7200, 36, 2016), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.67"),
    ("D85", (126, 113400, 14400, 16, 1728), [("A10", "(A5xA5):4"), ("S10", "(S5xS5):2")], "T2.68"),
    ("D86", (120, 201600, 30240, 18, 4320), [("S10", "S7xS3")], "T2.69"),
    ("D87", (126, 604800, 28800, 6, 1152), [("S10", "(S5xS5):2")], "T2.70"),
]


def log(*a):
    print(*a, file=sys.stderr, flush=True)


def perm_images(g, degree):
    return [int(libgap.OnPoints(i, g)) for i in range(1, degree + 1)]


def perm_string(images):
    return "[" + ",".join(str(x) for x in images) + "]"


def gap_perm(images):
    return libgap.PermList(images)


class GroupData:
    def __init__(self, gid, expr):
        self.id = gid
        self.G = libgap.eval(expr)
        self.degree = int(self.G.LargestMovedPoint())
        self.gens = list(self.G.GeneratorsOfGroup())
        self.order = int(self.G.Size())
        self.maxes = OrderedDict()
        for c in self.G.ConjugacyClassesMaximalSubgroups():
            M = c.Representative()
            index = self.order // int(M.Size())
            if index == 2:
                continue  # normal, so not a faithful point stabilizer
            key = (index, tuple(sorted(len(o) for o in M.Orbits())))
            if sum(key[1]) < self.degree:
                key = (index, (1,) + key[1]) if sum(key[1]) + 1 == self.degree else key
            name = MAX_NAMES[gid][key]
            if isinstance(name, list):
                name = name[sum(1 for n in self.maxes if n.rstrip("'") == name[0].rstrip("'"))]
            assert name not in self.maxes, (gid, name)
            self.maxes[name] = M
        self._actions = {}

    def action(self, name):
        """BFS right-coset labeling; returns (generator images, reps)."""
        if name in self._actions:
            return self._actions[name]
        M = self.maxes[name]
        ident = libgap.eval("()")
        reps = [ident]
        label = {libgap.CanonicalRightCosetElement(M, ident): 0}
        images = [[] for _ in self.gens]
        q = 0
        while q < len(reps):
            g = reps[q]
            for s_idx, s in enumerate(self.gens):
                h = g * s
                key = libgap.CanonicalRightCosetElement(M, h)
                if key not in label:
                    label[key] = len(reps)
                    reps.append(h)
                images[s_idx].append(label[key] + 1)
            q += 1
        v = len(reps)
        assert v == self.order // int(M.Size())
        P = libgap.Group([gap_perm(im) for im in images])
        assert int(P.Size()) == self.order
        hom = libgap.GroupHomomorphismByImages(self.G, P, self.gens, [gap_perm(im) for im in images])
        result = (images, P, hom, v)
        self._actions[name] = result
        return result


def lattice(gd, cache_dir):
    path = os.path.join(cache_dir, "lattice_%s.json" % gd.id)
    if os.path.exists(path):
        with open(path) as f:
            return json.load(f)
    log("computing subgroup lattice of", gd.id)
    classes = []
    for c in gd.G.ConjugacyClassesSubgroups():
        H = c.Representative()
        classes.append(
            {
                "order": int(H.Size()),
                "gens": [perm_images(x, gd.degree) for x in H.SmallGeneratingSet()],
            }
        )
    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w") as f:
        json.dump({"group": gd.id, "classes": classes}, f)
    return {"group": gd.id, "classes": classes}


def subgroup_of(gd, gens):
    if not gens:
        return libgap.Group([libgap.eval("()")])
    return libgap.Group([gap_perm(g) for g in gens])


def pair_orbital_table(P, v):
    """Map each unordered pair {x,y} (0-based, x<y) to a G-orbital id."""
    table = np.full((v, v), -1, dtype=np.int64)
    orbs = libgap.Orbits(P, libgap.Combinations(list(range(1, v + 1)), 2), libgap.OnSets)
    sizes = []
    for oid, orb in enumerate(orbs):
        pts = [(int(p[0]) - 1, int(p[1]) - 1) for p in orb]
        sizes.append(len(pts))
        for x, y in pts:
            table[x, y] = oid
            table[y, x] = oid
    return table, sizes


def lambda_via_orbitals(block, b, table, sizes):
    """lambda over each orbital is b * (pairs of the block in it) / |orbital|."""
    cnt = Counter(int(table[x - 1, y - 1]) for x, y in itertools.combinations(block, 2))
    lams = set()
    for oid, size in enumerate(sizes):
        num = b * cnt.get(oid, 0)
        if num % size:
            return None
        lams.add(num // size)
    return lams.pop() if len(lams) == 1 else None


def develop(P, block):
    orb = libgap.Orbit(P, sorted(block), libgap.OnSets)
    return [[int(x) for x in B] for B in orb]


def triple_profile(blocks, v):
    """Multiset of triple coverages; an isomorphism invariant."""
    k = len(blocks[0])
    combos = np.array(list(itertools.combinations(range(k), 3)), dtype=np.int64)
    counts = np.zeros(v * v * v, dtype=np.int64)
    arr = np.array(blocks, dtype=np.int64) - 1
    chunk = max(1, 4_000_000 // len(combos))
    for s in range(0, len(arr), chunk):
        t = arr[s : s + chunk][:, combos]
        ids = (t[:, :, 0] * v + t[:, :, 1]) * v + t[:, :, 2]
        counts += np.bincount(ids.ravel(), minlength=v * v * v)
    nz = counts[counts > 0]
    prof = Counter(nz.tolist())
    prof[0] = comb(v, 3) - len(nz)
    return tuple(sorted(prof.items()))


def find_designs(gd, max_name, params, lat, want=None):
    """All G-orbits of k-sets giving a flag-transitive 2-design with these params.

    Returns a list of (base_block, stabilizer_class_index) with one entry per
    distinct block set.
    """
    v, b, r, k, lam = params
    images, P, hom, vv = gd.action(max_name)
    assert vv == v
    m = gd.order // b
    table, sizes = pair_orbital_table(P, v)
    found = []
    seen_blocks = []
    for ci, cls in enumerate(lat["classes"]):
        if cls["order"] != m:
            continue
        K = libgap.Image(hom, subgroup_of(gd, cls["gens"]))
        for orb in libgap.Orbits(K, list(range(1, v + 1))):
            if len(orb) != k:
                continue
            block = sorted(int(x) for x in orb)
            if int(libgap.Size(libgap.Stabilizer(P, block, libgap.OnSets))) != m:
                continue
            if lambda_via_orbitals(block, b, table, sizes) != lam:
                continue
            # distinct G-orbit of blocks?
            if any(libgap.RepresentativeAction(P, s, block, libgap.OnSets) != libgap.eval("fail")
                   for s in seen_blocks):
                continue
            seen_blocks.append(block)
            found.append((block, ci))
            if want is not None and len(found) >= want:
                return found
    return found


def table5(gd, lat):
    """The 17 classes of order-32 subgroups of S9 on 280 points, with signatures."""
    images, P, hom, v = gd.action("3^3:(2xS4)")
    b, k, lam = 11340, 32, 144
    table, sizes = pair_orbital_table(P, v)
    rows = []
    for ci, cls in enumerate(lat["classes"]):
        if cls["order"] != 32:
            continue
        K = libgap.Image(hom, subgroup_of(gd, cls["gens"]))
        kgens = [perm_images(x, v) for x in libgap.SmallGeneratingSet(K)]
        sig = Counter()
        k_orbits = []
        for orb in libgap.Orbits(K, list(range(1, v + 1))):
            orb = sorted(int(x) for x in orb)
            if len(orb) == k:
                so = gd.order // int(libgap.Size(libgap.Stabilizer(P, orb, libgap.OnSets)))
                ok = so == b and lambda_via_orbitals(orb, b, table, sizes) == lam
                k_orbits.append((so, ok))
                sig[(k, so)] += 1
            else:
                sig[(len(orb), None)] += 1
        rows.append({"lattice_class": ci, "gens": kgens, "signature": sig, "k_orbits": k_orbits})
    return rows


# Published S9 orbit signatures on 280 points, per class number; 32-orbits carry their set-orbit size.
S9_SIGNATURES = {
    1: {(8, None): 9, (16, None): 7, (32, 2835): 3},
    2: {(4, None): 6, (8, None): 10, (16, None): 5, (32, 5670): 3},
    3: {(8, None): 9, (16, None): 7, (32, 5670): 3},
    4: {(8, None): 5, (16, None): 5, (32, 2835): 1, (32, 5670): 4},
    5: {(4, None): 10, (8, None): 6, (16, None): 8, (32, 2835): 2},
    6: {(4, None): 2, (8, None): 10, (16, None): 4, (32, 5670): 4},
    7: {(8, None): 9, (16, None): 3, (32, 2835): 5},
    8: {(8, None): 5, (16, None): 5, (32, 5670): 5},
    9: {(4, None): 2, (8, None): 6, (16, None): 6, (32, 5670): 4},
    10: {(8, None): 1, (16, None): 7, (32, 2835): 2, (32, 5670): 1, (32, 11340): 2},
    11: {(2, None): 2, (4, None): 7, (8, None): 9, (16, None): 7, (32, 11340): 2},
    12: {(4, None): 4, (8, None): 7, (16, None): 7, (32, 5670): 1, (32, 11340): 2},
    13: {(8, None): 3, (16, None): 8, (32, 2835): 1, (32, 5670): 1, (32, 11340): 2},
    14: {(4, None): 2, (8, None): 6, (16, None): 6, (32, 5670): 2, (32, 11340): 2},
    15: {(4, None): 2, (8, None): 6, (16, None): 8, (32, 5670): 1, (32, 11340): 2},
    16: {(8, None): 3, (16, None): 8, (32, 2835): 1, (32, 5670): 1, (32, 11340): 2},
    17: {(4, None): 4, (8, None): 5, (16, None): 8, (32, 5670): 1, (32, 11340): 2},
}


def assign_table5(rows):
    """Map lattice classes to published S9 class numbers.

    Exact signature matches first; rows 13 and 16 share a signature and are told
    apart by which one yields a design.  Classes left over are matched to the
    remaining rows on orbit lengths alone, and the mismatch is logged.
    """
    assigned = {}
    leftover = []
    for row in rows:
        sig = dict(row["signature"])
        matches = [n for n, s in S9_SIGNATURES.items() if s == sig and n not in assigned]
        if len(matches) > 1:
            has_design = any(ok for _, ok in row["k_orbits"])
            matches = [n for n in matches if (n == 13) == has_design]
        if matches:
            assigned[matches[0]] = row
        else:
            leftover.append(row)

    def lengths(sig):
        c = Counter()
        for (length, _), m in sig.items():
            c[length] += m
        return c

    for row in leftover:
        sig = dict(row["signature"])
        matches = [n for n, s in S9_SIGNATURES.items() if n not in assigned and lengths(s) == lengths(sig)]
        if len(matches) != 1:
            raise SystemExit("order-32 class with signature %s matches no published S9 class" % sig)
        log("S9 class", matches[0], "printed as", S9_SIGNATURES[matches[0]], "but computed", sig)
        assigned[matches[0]] = row
    return assigned


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="data/catalog.json")
    ap.add_argument("--cache", default=os.path.join(os.path.dirname(__file__), ".cache"))
    args = ap.parse_args()

    groups = OrderedDict((gid, GroupData(gid, expr)) for gid, expr in GROUPS.items())
    lats = {gid: lattice(gd, args.cache) for gid, gd in groups.items()}

    out = OrderedDict()
    out["schema_version"] = SCHEMA_VERSION
    out["groups"] = [
        {
            "id": gd.id,
            "natural_degree": gd.degree,
            "generators": [perm_string(perm_images(g, gd.degree)) for g in gd.gens],
            "expected_order": gd.order,
        }
        for gd in groups.values()
    ]
    out["max_subgroups"] = []
    for gd in groups.values():
        for name, M in gd.maxes.items():
            out["max_subgroups"].append(
                {
                    "group_id": gd.id,
                    "subgroup_id": name,
                    "generators": [perm_string(perm_images(x, gd.degree))
                                   for x in M.SmallGeneratingSet()],
                    "expected_order": int(M.Size()),
                    "expected_index": gd.order // int(M.Size()),
                }
            )

    # Census for the first elimination step: which subgroup orders exist, and how many classes each.
    out["subgroup_census"] = []
    for gid, lat in lats.items():
        cnt = Counter(c["order"] for c in lat["classes"])
        out["subgroup_census"].append(
            {"group_id": gid, "classes_by_order": [[o, n] for o, n in sorted(cnt.items())]}
        )

    # Every conjugacy class of subgroups, by a representative in the natural representation.
    out["subgroup_classes"] = []
    for gid, lat in lats.items():
        deg = groups[gid].degree
        for i, c in enumerate(lat["classes"], 1):
            gens = c["gens"] or [list(range(1, deg + 1))]
            out["subgroup_classes"].append(
                {"group_id": gid, "class_no": i, "order": c["order"],
                 "generators": [perm_string(g) for g in gens]}
            )

    # S9 candidates of order 32 on 280 points.
    s9 = groups["S9"]
    rows = assign_table5(table5(s9, lats["S9"]))
    out["stabilizer_candidates"] = []
    for class_no in sorted(rows):
        row = rows[class_no]
        out["stabilizer_candidates"].append(
            {
                "group_id": "S9",
                "action_ref": "3^3:(2xS4)",
                "index": 11340,
                "class_no": class_no,
                "generators": [perm_string(g) for g in row["gens"]],
            }
        )
    log("S9 classes assigned:", sorted(rows))

    # Designs.
    out["designs"] = []
    search_cache = {}
    profile_cache = {}

    def candidates(gd, name, params):
        key = (gd.id, name, params)
        if key not in search_cache:
            v, b, r, k, lam = params
            if v == gd.degree and b == comb(v, k):
                # full design: any k-set is a base block
                search_cache[key] = [list(range(1, k + 1))]
            else:
                search_cache[key] = [blk for blk, _ in find_designs(gd, name, params, lats[gd.id])]
        return search_cache[key]

    def profile(gd, name, blk):
        key = (gd.id, name, tuple(blk))
        if key not in profile_cache:
            _, P, _, v = gd.action(name)
            profile_cache[key] = triple_profile(develop(P, blk), v)
        return profile_cache[key]

    shared = Counter(params for _, params, _, _ in REALIZATIONS)
    taken = {}
    for did, params, realizations, ref in REALIZATIONS:
        log("design", did, params)
        v, b, r, k, lam = params
        record = None
        primary = None
        alternates = []
        for gid, names in realizations:
            gd = groups[gid]
            names = names if isinstance(names, list) else [names]
            chosen = None
            for name in names:
                cand = candidates(gd, name, params)
                if not cand:
                    continue
                if primary is None:
                    if shared[params] == 1:
                        chosen = (name, cand[0])
                    else:
                        claimed = taken.setdefault(params, [])
                        for blk in cand:
                            if profile(gd, name, blk) not in claimed:
                                chosen = (name, blk)
                                claimed.append(profile(gd, name, blk))
                                break
                elif len(cand) == 1 and shared[params] == 1:
                    chosen = (name, cand[0])
                else:
                    want = profile(groups[primary[0]], primary[1], primary[2])
                    for blk in cand:
                        if profile(gd, name, blk) == want:
                            chosen = (name, blk)
                            break
                if chosen is not None:
                    break
            if chosen is None:
                raise SystemExit("%s: no matching design under %s %s" % (did, gid, names))
            name, blk = chosen
            if primary is None:
                primary = (gid, name, blk)
                record = OrderedDict(
                    [
                        ("design_id", did),
                        ("group_id", gid),
                        ("action_ref", name),
                        ("v", v), ("b", b), ("r", r), ("k", k), ("lambda", lam),
                        ("base_block", blk),
                        ("table_row_ref", ref),
                    ]
                )
            else:
                alternates.append(
                    OrderedDict([("group_id", gid), ("action_ref", name), ("base_block", blk)])
                )
            log("   ", gid, name, "candidates:", len(cand))
        record["alternates"] = alternates
        out["designs"].append(record)

    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with open(args.out, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")
    log("wrote", args.out)


if __name__ == "__main__":
    main()
