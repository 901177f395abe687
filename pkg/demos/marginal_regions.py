"""Maps of the marginal-eigenvalue region for four representative spectra.

Writes one CSV per spectrum (columns lambda_b, lambda_a, inside) plus a
marker JSON with the extremal points, mirroring the `orbitmi region`
subcommand.  Files land in demos/out/.
"""

import json
import os

from orbitmi import MarginalRegion, rasterize

PANELS = {
    "pure": ([1.0, 0.0, 0.0, 0.0], None),
    "rank2": ([0.8, 0.2, 0.0, 0.0], None),
    "rank2_even": ([0.5, 0.5, 0.0, 0.0], None),
    "rank3_energy": ([0.6, 0.3, 0.1, 0.0], 0.6),
}

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

for name, (lam, energy) in PANELS.items():
    region = MarginalRegion(lam, energy=energy)
    raster = rasterize(region, 101)
    csv_path = os.path.join(out_dir, f"region_{name}.csv")
    with open(csv_path, "w") as fh:
        fh.write(raster.to_csv())
    with open(csv_path + ".markers.json", "w") as fh:
        json.dump(raster.markers_json_dict(), fh, indent=2)
    filled = int(raster.inside.sum())
    print(f"{name:14s} lam={lam} energy={energy}")
    print(f"  {filled}/{raster.inside.size} grid nodes inside, markers: "
          f"{raster.markers_json_dict()}")
    print(f"  wrote {csv_path}")
