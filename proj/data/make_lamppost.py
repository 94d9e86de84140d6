"""Writes the 16-node lamppost topologies and the dynamic scenarios."""
import json
import math
from pathlib import Path

HERE = Path(__file__).parent

# Gateway 0 at the origin; 3 is 97 m away so that its auto-rate link sits at
# 4982 Mbps and a 20 dB blockage drops it to 598 Mbps.
nodes = {
    0: (0, 0), 1: (60, -70), 2: (-40, -60), 3: (97, 0), 4: (0, 80),
    5: (170, 20), 6: (140, -60), 7: (130, 60), 8: (230, 50), 9: (240, -10),
    10: (90, -140), 11: (-60, 60), 12: (-30, 160), 13: (-60, 230), 14: (60, 150),
    15: (10, -140),
}
links = [
    (0, 3, "auto"), (3, 5, 4158), (5, 8, 2772), (5, 9, 2772), (3, 6, 4158), (3, 7, 4158),
    (0, 4, 6756), (4, 14, 6756), (4, 12, 4620), (12, 13, 2079),
    (0, 1, 6756), (1, 10, 3465), (1, 15, 3465),
    # alternates used by the reroute scenario
    (0, 11, 2772), (11, 14, 3465), (11, 12, 3465), (0, 2, 3465), (2, 15, 2772),
]
paths = {
    0: [0, 3, 6], 1: [0, 3, 5, 9], 2: [0, 3, 5, 8], 3: [0, 3, 7], 4: [0, 3],
    5: [0, 4, 12, 13], 6: [0, 4, 14], 7: [0, 4, 12], 8: [0, 1, 10], 9: [0, 1, 15],
}


def topology(demand, pairs=()):
    doc = {
        "mcs_table": "../mcs_default.json",
        "nodes": [{"id": n, "x": x, "y": y, **({"gateway": True} if n == 0 else {})}
                  for n, (x, y) in nodes.items()],
        "links": [{"src": a, "dst": b, "capacity_mbps": c, "bidirectional": True} for a, b, c in links],
        "flows": [{"id": k, "demand_mbps": demand, "path": p} for k, p in paths.items()],
    }
    if pairs:
        doc["interference_pairs"] = [list(map(list, p)) for p in pairs]
    return doc


def write(name, doc):
    with open(name, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


write(HERE / "topologies/lamppost16.json", topology(400))
# 3->7 faces 4->14 and 1->10 faces 12->13; both pairs sit in different
# node cliques, so only interference keeps them apart.
write(HERE / "topologies/lamppost16_interference.json",
      topology(400, [((3, 3, 7), (6, 4, 14)), ((8, 1, 10), (5, 12, 13))]))

write(HERE / "scenarios/demand_step.json", {
    "duration_bi": 15,
    "events": [{"bi": 0, "type": "set_demand", "flow": 6, "demand_mbps": 300}]
    + [{"bi": 3 * i, "type": "set_demand", "flow": 6, "demand_mbps": 300 * (i + 1)} for i in range(1, 5)],
})
write(HERE / "scenarios/shared_link_degradation.json", {
    "duration_bi": 15,
    "events": [{"bi": bi, "type": "set_attenuation", "src": 0, "dst": 3, "attenuation_db": db}
               for bi, db in [(2, 5), (4, 10), (6, 12), (8, 15), (10, 18), (12, 20)]],
})
write(HERE / "scenarios/reroute.json", {
    "duration_bi": 12,
    "events": [
        {"bi": 3, "type": "reroute", "flow": 6, "path": [0, 11, 14]},
        {"bi": 3, "type": "reroute", "flow": 7, "path": [0, 11, 12]},
        {"bi": 3, "type": "reroute", "flow": 9, "path": [0, 2, 15]},
        {"bi": 9, "type": "reroute", "flow": 6, "path": [0, 4, 14]},
        {"bi": 9, "type": "reroute", "flow": 7, "path": [0, 4, 12]},
        {"bi": 9, "type": "reroute", "flow": 9, "path": [0, 1, 15]},
    ],
})
write(HERE / "scenarios/static.json", {"duration_bi": 10, "events": []})
