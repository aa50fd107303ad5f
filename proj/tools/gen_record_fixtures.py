#!/usr/bin/env python3
# Copyright 2026 The roadcond Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes label-record fixtures: a 782-camera set with repeated snapshots per
camera, a three-record file, and a small camera catalogue."""

import datetime as dt
import pathlib
import random
import sys

HEADER = "image_name,latitude,longitude,class,confidence,timestamp"
CLASSES = ["Dry", "Wet", "Snow", "Offline", "Poor"]
NEWEST = dt.datetime(2026, 1, 15, 12, 0, 0, tzinfo=dt.timezone.utc)


def row(camera, lat, lon, cls, conf, ts):
    compact = ts.strftime("%Y%m%dT%H%M%SZ")
    iso = ts.strftime("%Y-%m-%dT%H:%M:%SZ")
    return f"{camera}_{compact},{lat},{lon},{cls},{conf},{iso}"


def main(root):
    root = pathlib.Path(root)
    rng = random.Random(782)
    rows = []
    for i in range(1, 783):
        camera = f"cam-{i:04d}"
        lat = round(rng.uniform(40.40, 43.50), 5)
        lon = round(rng.uniform(-96.60, -90.10), 5)
        for k in range(rng.randint(1, 3)):
            ts = NEWEST - dt.timedelta(minutes=5 * k + rng.randint(0, 4))
            rows.append(row(camera, lat, lon, rng.choice(CLASSES), round(rng.uniform(0.4, 1.0), 4), ts))
    rng.shuffle(rows)
    (root / "map").mkdir(parents=True, exist_ok=True)
    (root / "map" / "labels-20260115.csv").write_text(HEADER + "\n" + "\n".join(rows) + "\n")

    three = [
        row("ia-0101", 41.5868, -93.625, "Dry", 0.97, NEWEST - dt.timedelta(minutes=2)),
        row("ia-0102", 42.0308, -93.6319, "Snow", 0.88, NEWEST - dt.timedelta(minutes=1)),
        row("ia-0103", 41.6611, -91.5302, "Wet", 0.71, NEWEST),
    ]
    (root / "records").mkdir(parents=True, exist_ok=True)
    (root / "records" / "labels-20260115.csv").write_text(HEADER + "\n" + "\n".join(three) + "\n")

    (root / "catalogue").mkdir(parents=True, exist_ok=True)
    (root / "catalogue" / "cameras.csv").write_text(
        "camera_id,snapshot_url,latitude,longitude,jurisdiction\n"
        "ia-0101,http://cams.example.org/ia-0101.jpg,41.5868,-93.625,IA\n"
        "ia-0102,http://cams.example.org/ia-0102.jpg,42.0308,-93.6319,IA\n"
        "ia-0103,https://cams.example.org:8443/snap?id=ia-0103,41.6611,-91.5302,IA\n"
        "on-2201,http://cams.example.org/on-2201.jpg,45.0,-75.0,ON\n"
        "mn-0042,http://cams.example.org/mn-0042.jpg,44.9778,-93.265,\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "fixtures")
