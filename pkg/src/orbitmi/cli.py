"""Command-line front end: extremization, region maps, thermodynamic calculators.

Outputs are JSON (12 significant digits) or CSV (6 significant digits) so
external tools can plot them.  Exit codes: 0 success, 1 domain error
(invalid states, infeasible energies, and so on), 2 usage error.
The ORBIT_LOG environment variable ({quiet|info|debug}) sets log verbosity;
log messages go to stderr, results to stdout or --out.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import extremize, marginal2q, thermo
from .errors import OrbitError
from .qcore import BipartiteDims, DensityMatrix, Spectrum, spectrum_of

log = logging.getLogger("orbitmi")

USAGE_ERROR = 2
DOMAIN_ERROR = 1


def _round_floats(obj):
    """Limit floats to 12 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
        log.info("wrote %s", out_path)
    else:
        sys.stdout.write(text)


def _emit_json(data: dict, out_path: str | None) -> None:
    _emit(json.dumps(_round_floats(data), indent=2) + "\n", out_path)


def _json_as_csv(data: dict) -> str:
    lines = ["key,value"]
    for key, value in data.items():
        if isinstance(value, float):
            lines.append(f"{key},{value:.6g}")
        else:
            lines.append(f"{key},{json.dumps(value)}")
    return "\n".join(lines) + "\n"


def _parse_spectrum(text: str) -> Spectrum:
    values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    spectrum = Spectrum(values)
    if list(spectrum.values) != values:
        log.info("spectrum re-sorted into non-increasing order")
    return spectrum


def _load_state(path: str) -> DensityMatrix:
    with open(path) as fh:
        return DensityMatrix.from_json_dict(json.load(fh))


def _state_and_spectrum(args, parser) -> tuple[DensityMatrix | None, Spectrum, BipartiteDims]:
    """Resolve the shared --spectrum/--state/--dims flags."""
    if (args.spectrum is None) == (getattr(args, "state", None) is None):
        parser.error("provide exactly one of --spectrum or --state")
    if args.spectrum is not None:
        if args.dims is None:
            parser.error("--dims is required with --spectrum")
        dims = BipartiteDims.from_string(args.dims)
        spectrum = _parse_spectrum(args.spectrum)
        if len(spectrum) != dims.n:
            parser.error(
                f"spectrum has {len(spectrum)} entries but dims {args.dims} needs {dims.n}"
            )
        return None, spectrum, dims
    state = _load_state(args.state)
    return state, spectrum_of(state), state.dims


def _add_shared_flags(sub, state_flag=True):
    sub.add_argument("--spectrum", help="comma-separated eigenvalues, e.g. 0.6,0.3,0.1,0")
    if state_flag:
        sub.add_argument("--state", help="path to a density-matrix JSON file")
    sub.add_argument("--dims", help="bipartite dimensions, e.g. 2x2")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", help="output file (default stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitmi",
        description="Extremal mutual information on unitary orbits, with "
        "thermodynamic calculators.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("extremize", help="orbit extrema for a spectrum")
    _add_shared_flags(p)
    p.add_argument("--energy", type=float, help="expected energy in [0, 2] (two qubits)")

    p = subs.add_parser("region", help="rasterize the allowed marginal region (two qubits)")
    _add_shared_flags(p)
    p.add_argument("--grid", type=int, default=101, help="grid nodes per axis")
    p.add_argument("--energy", type=float, help="expected energy in [0, 2]")

    p = subs.add_parser("szilard", help="work extraction and refinery gain")
    _add_shared_flags(p)
    p.add_argument("--temp", type=float, default=1.0, help="bath temperature (k = 1)")

    p = subs.add_parser("heatflow", help="anomalous-heat bound and entanglement witness")
    _add_shared_flags(p)
    p.add_argument("--ta", type=float, required=True, help="temperature of A")
    p.add_argument("--tb", type=float, required=True, help="temperature of B")
    p.add_argument(
        "--worst-case",
        action="store_true",
        help="with --spectrum: use the orbit maximum as the initial correlation",
    )

    p = subs.add_parser("collide", help="repeated-collision equilibration trace")
    p.add_argument("--ta", type=float, default=0.5)
    p.add_argument("--tb", type=float, default=2.0)
    p.add_argument("--theta", type=float, default=0.3, help="partial-swap angle")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--mode", choices=("product", "dephase"), default="product")
    p.add_argument(
        "--unitary", choices=("partial-swap", "random-strong"), default="partial-swap"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=None)

    p = subs.add_parser("verify", help="Haar-sampling check of the closed-form extrema")
    _add_shared_flags(p)
    p.add_argument("--samples", type=int, default=10_000)

    return parser


def cmd_extremize(args, parser) -> int:
    _, spectrum, dims = _state_and_spectrum(args, parser)
    result = extremize.extremal_correlations(spectrum, dims)
    data = result.to_json_dict(energy=args.energy)
    if args.energy is not None:
        if dims.d_a != 2 or dims.d_b != 2:
            parser.error("--energy applies to 2x2 only")
        data["delta_e_bits"] = extremize.delta_i_max_energy(spectrum, args.energy)
        q = marginal2q.energy_max_point(
            marginal2q.MarginalRegion(spectrum, energy=args.energy)
        )
        data["q"] = [q.lambda_a, q.lambda_b]
    if args.format == "csv":
        _emit(_json_as_csv(_round_floats(data)), args.out)
    else:
        _emit_json(data, args.out)
    return 0


def cmd_region(args, parser) -> int:
    _, spectrum, dims = _state_and_spectrum(args, parser)
    if dims.d_a != 2 or dims.d_b != 2:
        parser.error("region is defined for 2x2 only")
    region = marginal2q.MarginalRegion(spectrum, energy=args.energy)
    raster = marginal2q.rasterize(region, args.grid)
    markers = raster.markers_json_dict()
    if args.format == "json":
        data = {
            "axis": [float(x) for x in raster.axis],
            "inside": raster.inside.astype(int).tolist(),
            "markers": markers,
        }
        _emit_json(data, args.out)
    else:
        _emit(raster.to_csv(), args.out)
        if args.out:
            marker_path = args.out + ".markers.json"
            with open(marker_path, "w") as fh:
                json.dump(_round_floats(markers), fh, indent=2)
                fh.write("\n")
            log.info("wrote %s", marker_path)
    return 0


def cmd_szilard(args, parser) -> int:
    state, spectrum, dims = _state_and_spectrum(args, parser)
    t = args.temp
    if state is not None:
        work = thermo.szilard_work(state, t)
        gain = thermo.refinery_gain(state, t)
        data = {
            "temperature": t,
            "work": work,
            "refinery_gain": gain,
            "work_after_refinery": work + gain,
        }
    else:
        # Work depends on the marginals, so a spectrum pins only the range
        # attained across the orbit.
        result = extremize.extremal_correlations(spectrum, dims)
        s_joint = thermo.bits_to_nats(
            -math.fsum(p * math.log2(p) for p in spectrum.values if p > 0)
        )
        ln_d = math.log(dims.n)
        # S_A + S_B = I + S_joint on the orbit.
        work_min = t * (ln_d - thermo.bits_to_nats(result.i_max) - s_joint)
        work_max = t * (ln_d - thermo.bits_to_nats(result.i_min) - s_joint)
        data = {
            "temperature": t,
            "work_min": work_min,
            "work_max": work_max,
            "max_refinery_gain": t * thermo.bits_to_nats(result.delta_i_max),
        }
    if args.format == "csv":
        _emit(_json_as_csv(_round_floats(data)), args.out)
    else:
        _emit_json(data, args.out)
    return 0


def cmd_heatflow(args, parser) -> int:
    sc = thermo.qubit_scenario(args.ta, args.tb)
    if args.state is not None and args.spectrum is not None:
        parser.error("provide exactly one of --spectrum or --state")
    if args.state is not None:
        initial = _load_state(args.state)
    elif args.spectrum is not None:
        if not args.worst_case:
            parser.error("--spectrum requires --worst-case (a spectrum alone does "
                         "not fix the initial correlations)")
        initial = _parse_spectrum(args.spectrum)
    else:
        parser.error("provide exactly one of --spectrum or --state")
    bound = thermo.max_anomalous_heat(initial, sc)
    data = {"t_a": args.ta, "t_b": args.tb, **bound.to_json_dict()}
    if args.format == "csv":
        _emit(_json_as_csv(_round_floats(data)), args.out)
    else:
        _emit_json(data, args.out)
    return 0


def cmd_collide(args, parser) -> int:
    sc = thermo.qubit_scenario(args.ta, args.tb)
    mode = {"product": "full-product", "dephase": "dephase-to-minimal"}[args.mode]
    trace = thermo.collision_simulate(
        sc, args.steps, unitary=args.unitary, mode=mode, theta=args.theta, rng=args.seed
    )
    if args.format == "json":
        data = {
            "t_a": args.ta,
            "t_b": args.tb,
            "theta": args.theta,
            "mode": args.mode,
            "steps": [
                {
                    "step": r.step,
                    "s_a": r.s_a,
                    "s_b": r.s_b,
                    "t_a": r.t_a,
                    "t_b": r.t_b,
                    "qmi": r.qmi,
                    "q_a": r.q_a,
                }
                for r in trace.steps
            ],
        }
        _emit_json(data, args.out)
    else:
        _emit(trace.to_csv(), args.out)
    return 0


def cmd_verify(args, parser) -> int:
    _, spectrum, dims = _state_and_spectrum(args, parser)
    result = extremize.extremal_correlations(spectrum, dims)
    samples = extremize.sample_orbit_qmi(spectrum, dims, args.samples, args.seed)
    values = np.array([q for q, _ in samples])
    lo, hi = float(values.min()), float(values.max())
    within = (lo >= result.i_min - 1e-6) and (hi <= result.i_max + 1e-6)
    data = {
        "spectrum": spectrum.to_json(),
        "dims": f"{dims.d_a}x{dims.d_b}",
        "samples": args.samples,
        "seed": args.seed,
        "i_min_bits": result.i_min,
        "i_max_bits": result.i_max,
        "sampled_min_bits": lo,
        "sampled_max_bits": hi,
        "within_bounds": within,
    }
    if args.format == "csv":
        _emit(_json_as_csv(_round_floats(data)), args.out)
    else:
        _emit_json(data, args.out)
    if not within:
        log.error("sampled mutual information escaped the closed-form bounds")
        return DOMAIN_ERROR
    return 0


_COMMANDS = {
    "extremize": cmd_extremize,
    "region": cmd_region,
    "szilard": cmd_szilard,
    "heatflow": cmd_heatflow,
    "collide": cmd_collide,
    "verify": cmd_verify,
}

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("ORBIT_LOG", "info"), logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args, parser)
    except OrbitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
