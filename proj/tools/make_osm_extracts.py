#!/usr/bin/env python3
"""Writes the OSM XML extracts and POI files under tests/data/osm.

Three neighbourhood shapes with mixed highway classes, one-way streets,
footways the drive profile drops, dead ends and a way with a missing node.
Output is deterministic for a given seed.
"""
import argparse
import math
import random
from pathlib import Path


class Extract:
    def __init__(self, name, rng):
        self.name = name
        self.rng = rng
        self.nodes = {}  # id -> (lat, lon)
        self.ways = []   # (id, [node ids], tags)
        self.next_node = 1000
        self.next_way = 1

    def node(self, lat, lon):
        nid = self.next_node
        self.next_node += 1
        self.nodes[nid] = (round(lat, 7), round(lon, 7))
        return nid

    def way(self, refs, highway, oneway=None, **extra):
        tags = {"highway": highway}
        if oneway:
            tags["oneway"] = oneway
        tags.update(extra)
        self.ways.append((self.next_way, list(refs), tags))
        self.next_way += 1

    def write(self, path):
        with open(path, "w") as out:
            out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
            out.write(f'<!-- {self.name}: generated by tools/make_osm_extracts.py -->\n')
            out.write('<osm version="0.6" generator="make_osm_extracts">\n')
            for nid in sorted(self.nodes):
                lat, lon = self.nodes[nid]
                out.write(f'  <node id="{nid}" lat="{lat:.7f}" lon="{lon:.7f}"/>\n')
            for wid, refs, tags in self.ways:
                out.write(f'  <way id="{wid}">\n')
                for r in refs:
                    out.write(f'    <nd ref="{r}"/>\n')
                for k, v in tags.items():
                    out.write(f'    <tag k="{k}" v="{v}"/>\n')
                out.write('  </way>\n')
            out.write('</osm>\n')


def random_oneway(rng, share):
    if rng.random() >= share:
        return None
    return "yes" if rng.random() < 0.5 else "-1"


def old_town(rng):
    """Jittered 22x22 grid, a diagonal avenue, many one-way lanes, footpaths."""
    e = Extract("old_town", rng)
    rows, cols, step = 22, 22, 0.0009
    lat0, lon0 = -22.020, -47.900
    grid = [[e.node(lat0 + r * step + rng.uniform(-0.25, 0.25) * step,
                    lon0 + c * step + rng.uniform(-0.25, 0.25) * step)
             for c in range(cols)] for r in range(rows)]
    for r in range(rows):
        for c in range(cols - 1):
            if rng.random() < 0.06:
                continue  # missing block face
            hw = "secondary" if r % 7 == 0 else "residential"
            e.way([grid[r][c], grid[r][c + 1]], hw, random_oneway(rng, 0.35))
    for c in range(cols):
        for r in range(rows - 1):
            if rng.random() < 0.06:
                continue
            hw = "tertiary" if c % 6 == 0 else "residential"
            e.way([grid[r][c], grid[r + 1][c]], hw, random_oneway(rng, 0.35))
    e.way([grid[k][k] for k in range(rows)], "primary")
    for _ in range(25):
        r, c = rng.randrange(rows - 1), rng.randrange(cols - 1)
        e.way([grid[r][c], grid[r + 1][c + 1]], "footway")
    for _ in range(12):
        r, c = rng.randrange(rows), rng.randrange(cols)
        lat, lon = e.nodes[grid[r][c]]
        tip = e.node(lat + rng.uniform(-0.4, 0.4) * step, lon + rng.uniform(-0.4, 0.4) * step)
        e.way([grid[r][c], tip], "living_street")
    e.way([grid[0][0], 999999, grid[0][1]], "residential")  # references a missing node
    return e


def riverside(rng):
    """Two districts split by a river, joined by three bridges and a one-way couplet."""
    e = Extract("riverside", rng)
    rows, cols, step = 14, 26, 0.0010
    lat0, lon0 = -21.990, -47.880
    gap = 3 * step

    def district(lat_base):
        g = [[e.node(lat_base + r * step + rng.uniform(-0.2, 0.2) * step,
                     lon0 + c * step + rng.uniform(-0.2, 0.2) * step)
              for c in range(cols)] for r in range(rows)]
        for r in range(rows):
            for c in range(cols - 1):
                if rng.random() < 0.08:
                    continue
                e.way([g[r][c], g[r][c + 1]], "residential", random_oneway(rng, 0.25))
        for c in range(cols):
            for r in range(rows - 1):
                if rng.random() < 0.08:
                    continue
                e.way([g[r][c], g[r + 1][c]], "unclassified", random_oneway(rng, 0.25))
        return g

    south = district(lat0)
    north = district(lat0 + (rows - 1) * step + gap)
    for c in (3, 12, 21):
        mid = e.node(lat0 + (rows - 1) * step + gap / 2, lon0 + c * step)
        e.way([south[rows - 1][c], mid, north[0][c]], "primary")
    mid_a = e.node(lat0 + (rows - 1) * step + gap / 2, lon0 + 7 * step)
    mid_b = e.node(lat0 + (rows - 1) * step + gap / 2, lon0 + 8 * step)
    e.way([south[rows - 1][7], mid_a, north[0][7]], "secondary", "yes")
    e.way([north[0][8], mid_b, south[rows - 1][8]], "secondary", "yes")
    e.way([south[0][c] for c in range(cols)], "trunk")
    for _ in range(10):
        r, c = rng.randrange(rows), rng.randrange(cols)
        e.way([south[r][c], north[r][c]], "cycleway")
    return e


def hillside(rng):
    """Rings and spokes around a hilltop, one-way ring segments, cul-de-sacs."""
    e = Extract("hillside", rng)
    lat0, lon0 = -22.050, -47.930
    rings, spokes = 12, 36
    center = e.node(lat0, lon0)
    ring_nodes = []
    for k in range(1, rings + 1):
        radius = 0.0008 * k
        ring = []
        for s in range(spokes):
            a = 2 * math.pi * s / spokes + rng.uniform(-0.04, 0.04)
            ring.append(e.node(lat0 + radius * math.sin(a), lon0 + radius * math.cos(a)))
        ring_nodes.append(ring)
    for k, ring in enumerate(ring_nodes):
        one_way_ring = k % 3 == 1
        for s in range(spokes):
            if rng.random() < 0.05:
                continue
            ow = "yes" if one_way_ring else random_oneway(rng, 0.15)
            hw = "tertiary" if k % 4 == 3 else "residential"
            e.way([ring[s], ring[(s + 1) % spokes]], hw, ow)
    for s in range(spokes):
        if s % 3 and rng.random() < 0.5:
            continue
        refs = [center] + [ring_nodes[k][s] for k in range(rings)]
        hw = "primary" if s % 9 == 0 else "residential"
        e.way(refs, hw, random_oneway(rng, 0.2) if hw == "residential" else None)
    for _ in range(40):
        k, s = rng.randrange(rings), rng.randrange(spokes)
        lat, lon = e.nodes[ring_nodes[k][s]]
        a = e.node(lat + rng.uniform(-0.0003, 0.0003), lon + rng.uniform(-0.0003, 0.0003))
        b = e.node(e.nodes[a][0] + rng.uniform(-0.0002, 0.0002),
                   e.nodes[a][1] + rng.uniform(-0.0002, 0.0002))
        e.way([ring_nodes[k][s], a, b], "service" if rng.random() < 0.3 else "residential")
    for _ in range(15):
        k, s = rng.randrange(rings - 1), rng.randrange(spokes)
        e.way([ring_nodes[k][s], ring_nodes[k + 1][(s + 1) % spokes]], "steps")
    return e


def write_pois(extract, path, count, rng):
    lats = [p[0] for p in extract.nodes.values()]
    lons = [p[1] for p in extract.nodes.values()]
    lo_lat, hi_lat, lo_lon, hi_lon = min(lats), max(lats), min(lons), max(lons)
    with open(path, "w") as out:
        out.write("# <lat> <lon> <label>\n")
        for k in range(count):
            lat = lo_lat + rng.uniform(0.1, 0.9) * (hi_lat - lo_lat)
            lon = lo_lon + rng.uniform(0.1, 0.9) * (hi_lon - lo_lon)
            out.write(f"{lat:.6f} {lon:.6f} site_{k}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests/data/osm")
    parser.add_argument("--seed", type=int, default=20)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for k, (build, pois) in enumerate([(old_town, 6), (riverside, 5), (hillside, 7)]):
        rng = random.Random(args.seed * 100 + k)
        extract = build(rng)
        extract.write(args.out / f"{extract.name}.osm")
        write_pois(extract, args.out / f"{extract.name}.pois", pois, rng)


if __name__ == "__main__":
    main()
