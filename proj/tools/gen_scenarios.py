#!/usr/bin/env python3
"""Regenerates the bundled scenarios and their synthetic demonstrations.

Each demonstration is a wrist track in pixels: the hand travels to an object,
pauses, travels to the destination, pauses, and so on. Pauses are labelled
"grasp <object category>" and "release <region category>".

    python3 tools/gen_scenarios.py [output_dir]
"""

import json
import math
import os
import random
import sys

INTRINSICS = {"fx": 600.0, "fy": 600.0, "cx": 320.0, "cy": 240.0, "width": 640, "height": 480}
EYE = [-0.7, 0.2, 0.4]
TARGET = [0.45, 0.2, 0.0]

HOLD = 8          # frames the hand rests at a grasp or release
SPEED = 5.0       # px per frame while moving
MIN_TRANSIT = 30  # frames
NOISE_PX = 0.3
LABEL_PAD = 2


def sub(a, b):
    return [a[i] - b[i] for i in range(3)]


def cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def unit(a):
    n = math.sqrt(sum(x * x for x in a))
    return [x / n for x in a]


def project(p):
    z = unit(sub(TARGET, EYE))
    x = unit(cross(z, [0.0, 0.0, 1.0]))
    y = cross(z, x)
    d = sub(p, EYE)
    pc = [sum(d[i] * ax[i] for i in range(3)) for ax in (x, y, z)]
    return (INTRINSICS["fx"] * pc[0] / pc[2] + INTRINSICS["cx"], INTRINSICS["fy"] * pc[1] / pc[2] + INTRINSICS["cy"])


def region_center(r):
    return [(r["min"][i] + r["max"][i]) / 2 for i in range(3)]


def demo_track(scene, steps, seed):
    """steps: list of (object id, region id). Returns csv rows and labels."""
    rng = random.Random(seed)
    objects = {o["id"]: o for o in scene["objects"]}
    regions = {r["id"]: r for r in scene["regions"]}
    rows, labels = [], []
    pos = project([0.45, -0.15, 0.2])
    frame = 0

    def emit(u, v, conf=0.95):
        nonlocal frame
        rows.append((frame, u + rng.gauss(0, NOISE_PX), v + rng.gauss(0, NOISE_PX), conf))
        frame += 1

    def travel(dst):
        nonlocal pos
        dist = math.hypot(dst[0] - pos[0], dst[1] - pos[1])
        n = max(MIN_TRANSIT, int(math.ceil(dist / SPEED)))
        for k in range(1, n + 1):
            s = k / n
            conf = 0.1 if rng.random() < 0.04 else 0.95
            emit(pos[0] + s * (dst[0] - pos[0]), pos[1] + s * (dst[1] - pos[1]), conf)
        pos = dst

    def hold(label):
        start = frame
        for _ in range(HOLD):
            emit(pos[0], pos[1])
        labels.append({"frames": [start - LABEL_PAD, start + HOLD - 1 + LABEL_PAD], "label": label})

    for obj, reg in steps:
        o = objects[obj]
        r = regions[reg]
        travel(project(o["position"]))
        hold("grasp " + o["category"])
        travel(project(region_center(r)))
        hold("release " + r["category"])
    travel(project([0.45, -0.15, 0.2]))
    return rows, labels


def wall(x0, x1, y, height=0.06, spacing=0.01):
    return {"min": [x0, y, 0.0], "max": [x1, y, height], "spacing": spacing}


def obj(id_, x, y, category, group, radius=0.03):
    return {"id": id_, "position": [x, y, radius], "radius": radius, "category": category, "group": group}


def region(id_, x0, y0, x1, y1, category, top=0.12):
    return {"id": id_, "min": [x0, y0, 0.0], "max": [x1, y1, top], "category": category}


SCENARIOS = [
    {
        "name": "meal_prep",
        "mode": "mimic",
        "language": None,
        "text_instruction": "put the fruit in the bowl and the boxes in the basket",
        "scene": {
            "objects": [
                obj("apple_1", 0.15, 0.0, "apple", "fruit"),
                obj("banana_1", 0.30, 0.0, "banana", "fruit"),
                obj("orange_1", 0.45, 0.0, "orange", "fruit"),
                obj("box_1", 0.60, 0.0, "box", "box", 0.035),
                obj("box_2", 0.75, 0.0, "box", "box", 0.035),
            ],
            "regions": [
                region("bowl_1", 0.12, 0.28, 0.32, 0.46, "bowl"),
                region("basket_1", 0.55, 0.28, 0.80, 0.46, "basket"),
            ],
            "obstacle_boxes": [wall(0.50, 0.85, 0.15)],
        },
        "steps": [("apple_1", "bowl_1"), ("banana_1", "bowl_1"), ("orange_1", "bowl_1"),
                  ("box_1", "basket_1"), ("box_2", "basket_1")],
    },
    {
        "name": "tidy_up",
        "mode": "constrained",
        "language": "put the trash in the trash bin",
        "text_instruction": "put the trash in the trash bin and the stationery in the basket",
        "scene": {
            "objects": [
                obj("paper_1", 0.15, 0.0, "paper", "trash"),
                obj("can_1", 0.30, 0.0, "can", "trash"),
                obj("pen_1", 0.45, 0.0, "pen", "stationery", 0.025),
                obj("wrapper_1", 0.60, 0.0, "wrapper", "trash"),
                obj("marker_1", 0.75, 0.0, "marker", "stationery", 0.025),
            ],
            "regions": [
                region("bin_1", 0.10, 0.30, 0.32, 0.50, "trash bin", 0.15),
                region("basket_1", 0.55, 0.30, 0.80, 0.48, "basket"),
            ],
            "obstacle_boxes": [wall(0.08, 0.48, 0.18)],
        },
        # The demonstration tidies everything into the basket; the command
        # redirects the trash.
        "steps": [("paper_1", "basket_1"), ("can_1", "basket_1"), ("pen_1", "basket_1"),
                  ("wrapper_1", "basket_1"), ("marker_1", "basket_1")],
    },
    {
        "name": "irregular_traversal",
        "mode": "mimic",
        "language": None,
        "text_instruction": "put the red cube in the right zone and the green cube in the left zone and the blue cube in the middle zone",
        "scene": {
            "objects": [
                obj("cube_red", 0.20, 0.0, "red cube", "cube", 0.025),
                obj("cube_green", 0.45, 0.0, "green cube", "cube", 0.025),
                obj("cube_blue", 0.70, 0.0, "blue cube", "cube", 0.025),
            ],
            "regions": [
                region("zone_left", 0.08, 0.25, 0.30, 0.47, "left zone", 0.1),
                region("zone_mid", 0.34, 0.25, 0.56, 0.47, "middle zone", 0.1),
                region("zone_right", 0.60, 0.25, 0.82, 0.47, "right zone", 0.1),
            ],
            "obstacle_boxes": [wall(0.05, 0.85, 0.15)],
        },
        "steps": [("cube_red", "zone_right"), ("cube_green", "zone_left"), ("cube_blue", "zone_mid"),
                  ("cube_red", "zone_mid"), ("cube_green", "zone_right"), ("cube_blue", "zone_left"),
                  ("cube_red", "zone_left"), ("cube_green", "zone_mid")],
    },
]


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "scenarios")
    os.makedirs(os.path.join(out, "demos"), exist_ok=True)
    for i, sc in enumerate(SCENARIOS):
        rows, labels = demo_track(sc["scene"], sc["steps"], seed=1000 + i)
        csv_name = os.path.join("demos", sc["name"] + ".csv")
        with open(os.path.join(out, csv_name), "w") as f:
            f.write("frame,u,v,confidence\n")
            for fr, u, v, c in rows:
                f.write(f"{fr},{u:.3f},{v:.3f},{c:.2f}\n")
        doc = {
            "name": sc["name"],
            "mode": sc["mode"],
            "language": sc["language"],
            "text_instruction": sc["text_instruction"],
            "expected_subtasks": len(sc["steps"]),
            "camera": {"intrinsics": INTRINSICS, "extrinsics": {"eye": EYE, "target": TARGET, "up": [0.0, 0.0, 1.0]}},
            "scene": sc["scene"],
            "demonstration": {"landmarks": csv_name, "labels": labels},
            "placement_jitter": 0.0,
            "config": {"optimizer": {"w_coll": 0.1, "step_size": 0.001}},
        }
        with open(os.path.join(out, sc["name"] + ".json"), "w") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
