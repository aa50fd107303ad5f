#!/usr/bin/env python3
# Copyright 2026 The roadcond Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes scripted audit fixtures: a 1000-image pseudo-label run per model and
the verdict batch a reviewer produced for it."""

import json
import pathlib
import random
import sys

CLASSES = ["Dry", "Wet", "Snow", "Offline", "Poor"]

# predicted class -> (acceptable, refused)
AUDITS = {
    "vgg16_20k": {"Dry": (616, 31), "Offline": (65, 0), "Poor": (136, 7), "Snow": (9, 21), "Wet": (62, 53)},
    "vgg16_47k": {"Dry": (599, 17), "Offline": (79, 0), "Poor": (205, 0), "Snow": (8, 1), "Wet": (70, 21)},
    "inception_resnet_v2_47k": {"Dry": (587, 20), "Offline": (76, 0), "Poor": (247, 0), "Snow": (10, 3), "Wet": (54, 3)},
    "efficientnet_b4_47k": {"Dry": (608, 18), "Offline": (78, 1), "Poor": (217, 0), "Snow": (9, 1), "Wet": (66, 2)},
}


def verdicts_for(predicted, accepted, refused, rng):
    out = []
    for i in range(accepted):
        # A reviewer sometimes re-selects the predicted class or marks a Poor
        # prediction as poor; both still count as acceptable.
        if predicted == "Poor" and i % 5 == 0:
            out.append({"verdict": "poor"})
        elif i % 7 == 0:
            out.append({"verdict": "relabel", "label": predicted})
        else:
            out.append({"verdict": "acceptable"})
    others = [c for c in CLASSES if c != predicted]
    for i in range(refused):
        if predicted != "Poor" and i % 3 == 0:
            out.append({"verdict": "poor"})
        elif i % 3 == 1:
            out.append({"verdict": "relabel", "label": rng.choice(others)})
        else:
            out.append({"verdict": "refused"})
    return out


def main(root):
    out_dir = pathlib.Path(root) / "judgment"
    out_dir.mkdir(parents=True, exist_ok=True)
    for seed, (name, table) in enumerate(sorted(AUDITS.items())):
        rng = random.Random(seed + 1)
        items = []
        for predicted in CLASSES:
            accepted, refused = table[predicted]
            for v in verdicts_for(predicted, accepted, refused, rng):
                items.append((predicted, v))
        assert len(items) == 1000, (name, len(items))
        rng.shuffle(items)
        labels, verdicts = [], []
        for i, (predicted, v) in enumerate(items):
            ref = f"audit/{name}/{i:04d}.jpg"
            labels.append({"image_ref": ref, "label": predicted,
                           "confidence": round(0.5 + 0.5 * rng.random(), 4)})
            verdicts.append({"image_ref": ref, **v})
        run = {"backend": name, "scheme": "five_class", "labels": labels, "failed": []}
        (out_dir / f"{name}_run.json").write_text(json.dumps(run, indent=1) + "\n")
        (out_dir / f"{name}_verdicts.json").write_text(json.dumps(verdicts, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "fixtures")
