"""Two qubits equilibrating through repeated partial-swap collisions.

Full decorrelation after every collision is the textbook route to a common
temperature.  Dephasing in the energy basis is a much weaker operation: it
leaves the pair classically correlated, in fact minimally correlated on
its orbit, yet the temperatures still meet.  Traces land in demos/out/.
"""

import os

from orbitmi import collision_simulate
from orbitmi.thermo import qubit_scenario

sc = qubit_scenario(t_a=0.5, t_b=2.0)
out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

for mode, steps in (("full-product", 200), ("dephase-to-minimal", 500)):
    trace = collision_simulate(sc, steps, unitary="partial-swap",
                               mode=mode, theta=0.3, rng=0)
    path = os.path.join(out_dir, f"collisions_{mode}.csv")
    with open(path, "w") as fh:
        fh.write(trace.to_csv())
    print(f"mode {mode}: {steps} collisions, wrote {path}")
    for step in (0, 1, 5, 20, 50, steps):
        rec = trace.steps[step]
        print(f"  step {rec.step:4d}: T_A={rec.t_a:7.4f} T_B={rec.t_b:7.4f} "
              f"S_A+S_B={rec.s_a + rec.s_b:7.4f} qmi={rec.qmi:8.5f}")
    last = trace.steps[-1]
    print(f"  final temperature gap: {abs(last.t_a - last.t_b):.2e}")
    print()

print("both protocols settle at the same common temperature; the dephasing")
print("route keeps a small, persistent amount of classical correlation.")
