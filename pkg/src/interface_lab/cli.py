"""Command-line front end.

Subcommands: classify, solve, scan, scholte, trace, table, invert, selftest.
Results are written as JSON or CSV to --out (or stdout); complex numbers
serialize as {"re": .., "im": ..}; angles are degrees on this surface and
radians internally.  Every run with --out also writes a <out>.manifest.json
sidecar (command, config hash, version, seed, timestamp); result files
themselves contain nothing run-dependent, so identical inputs reproduce
byte-identical outputs.  INTERFACE_LAB_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, interface, inverse, media, microlocal, rays, scholte

_DOMAIN_ERRORS = (
    microlocal.GlancingRejection,
    interface.EllipticityFailure,
    scholte.NoRootFound,
    rays.NotReachable,
    inverse.FoliationError,
    ValueError,
)


def _cnum(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("INTERFACE_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _map_maybe_parallel(fn, items):
    n = thread_count()
    if n <= 1:
        return [fn(it) for it in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _write_manifest(out_path: str, args: argparse.Namespace, payload: str) -> None:
    manifest = {
        "command": " ".join(sys.argv[1:]) if sys.argv else "",
        "config_hash": hashlib.sha256(payload.encode()).hexdigest(),
        "tool_version": __version__,
        "seed": getattr(args, "seed", None),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _emit(text: str, args: argparse.Namespace) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _write_manifest(out, args, text)
    else:
        sys.stdout.write(text)


def _load_model(args) -> tuple:
    try:
        return media.load_model(args.model)
    except FileNotFoundError:
        raise SystemExit(2)


def _covector(args) -> microlocal.BoundaryCovector:
    return microlocal.BoundaryCovector(args.xi1, args.xi2, args.tau)


def cmd_classify(args) -> int:
    mat, _ = _load_model(args)
    label = microlocal.classify(_covector(args), mat, args.eps_g)
    _emit(json.dumps({
        "solid": label.solid_region,
        "fluid": label.fluid_region,
        "tau_sign": label.tau_sign,
        "case": interface.case_label(label),
    }, indent=2) + "\n", args)
    return 0


def _parse_incoming(spec: str) -> interface.AmplitudeSet:
    mapping = {"b1s": "b1_s", "b2s": "b2_s", "bp": "b_p", "bf": "b_f"}
    amps = interface.AmplitudeSet()
    if not spec:
        return amps
    for item in spec.split(","):
        key, _, raw = item.partition("=")
        key = key.strip().lower()
        if key not in mapping:
            raise ValueError(f"unknown incoming amplitude {key!r} "
                             f"(use {', '.join(mapping)})")
        setattr(amps, mapping[key], complex(raw.strip().replace("i", "j")))
    return amps


def _dump_symbols_csv(path: str, cov, mat) -> None:
    import itertools

    from . import symbols as sym
    rows = []
    for kind in sym.SOLID_KINDS:
        for name, fn in (("U", sym.potential_map_symbol),
                         ("M", sym.traction_map_symbol)):
            try:
                m = fn(kind, cov, mat)
            except Exception:
                continue
            for i, j in itertools.product(range(3), range(3)):
                rows.append([name, kind, i + 1, j + 1, m[i, j].real, m[i, j].imag])
    for flavor in sym.FLUID_FLAVORS:
        try:
            lam = sym.acoustic_dtn_symbol(flavor, cov, mat)
        except Exception:
            continue
        rows.append(["Lambda", flavor, 1, 1, lam.real, lam.imag])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["matrix", "kind", "row", "col", "re", "im"])
        w.writerows(rows)


def cmd_solve(args) -> int:
    mat, _ = _load_model(args)
    cov = _covector(args)
    incoming = _parse_incoming(args.incoming)
    case = None if args.case == "auto" else args.case.upper()
    if args.dump_symbols:
        _dump_symbols_csv(args.dump_symbols, cov, mat)
    sol = interface.solve_at(cov, mat, incoming, case=case, eps_g=args.eps_g)
    out = {
        "case": sol.case,
        "outgoing": {k: _cnum(v) for k, v in sol.outgoing.as_dict().items()},
        "directions": sol.outgoing.directions,
        "residual": sol.residual,
        "det_numeric": _cnum(sol.det_numeric),
        "det_closed_form": _cnum(sol.det_closed_form),
    }
    _emit(json.dumps(out, indent=2) + "\n", args)
    return 0


def _angle_grid(spec: str):
    lo, _, rest = spec.partition(":")
    hi, _, step = rest.partition(":")
    lo, hi, step = float(lo), float(hi), float(step or 1.0)
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(n)]


def cmd_scan(args) -> int:
    mat, _ = _load_model(args)
    angles = _angle_grid(args.angles)
    rows = interface.angle_scan(mat, args.mode, angles, tau=args.tau,
                                eps_g=args.eps_g)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["theta_deg", "case", "b1s_re", "b1s_im", "b2s_re", "b2s_im",
                "bp_re", "bp_im", "bf_re", "bf_im", "det_abs", "skipped"])
    for row in rows:
        if row.skipped:
            w.writerow([row.theta_deg, row.case or "", "", "", "", "", "", "",
                        "", "", "", row.skipped])
            continue
        a = row.amplitudes
        w.writerow([row.theta_deg, row.case,
                    a["b1_s"].real, a["b1_s"].imag, a["b2_s"].real,
                    a["b2_s"].imag, a["b_p"].real, a["b_p"].imag,
                    a["b_f"].real, a["b_f"].imag, row.det_abs, ""])
    _emit(buf.getvalue(), args)
    return 0


def cmd_scholte(args) -> int:
    mat, _ = _load_model(args)
    root = scholte.find_scholte_speed(mat)
    mode, diag = scholte.scholte_kernel_mode(mat, root=root)
    out = {
        "c_sc": root.c_sc,
        "c_sc_sq": root.c_sc_sq,
        "residual": root.residual,
        "bracket": list(root.bracket),
        "derivative_estimate": root.derivative_estimate,
        "mode": {k: _cnum(v) for k, v in mode.as_dict().items()},
        "kernel_diagnostics": diag,
    }
    _emit(json.dumps(out, indent=2) + "\n", args)
    return 0


def cmd_trace(args) -> int:
    _, model = _load_model(args)
    if model is None:
        raise ValueError("trace requires a model file with a 'radial' section")
    state = rays.takeoff_state(model, 0.0, math.radians(args.takeoff), args.mode)
    ray = rays.trace_ray(model, state, max_events=args.max_events)
    out = {
        "mode": args.mode,
        "takeoff_deg": args.takeoff,
        "total_time": ray.total_time,
        "amplitude": _cnum(ray.amplitude),
        "terminated": ray.terminated_reason,
        "events": [{
            "kind": ev.kind, "t": ev.t,
            "x": list(ev.location),
            "incident": ev.incident_mode, "emergent": ev.emergent_mode,
            "amplitude": _cnum(ev.amplitude),
        } for ev in ray.events],
        "segments": [{
            "mode": seg.mode, "stop": seg.stop,
            "samples": [[t, x, y] for t, x, y in seg.samples],
        } for seg in ray.segments],
    }
    _emit(json.dumps(out, indent=2) + "\n", args)
    return 0


def cmd_table(args) -> int:
    _, model = _load_model(args)
    if model is None:
        raise ValueError("table requires a model file with a 'radial' section")
    deltas = [math.radians(d) for d in _angle_grid(args.deltas)]
    phases = [p.strip() for p in args.phases.split(",") if p.strip()]

    def one(phase):
        return inverse.forward_table(model, deltas, [phase])

    results = _map_maybe_parallel(one, phases)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["delta_deg", "phase", "time", "takeoff_deg"])
    for records, _ in results:
        for rec in records:
            w.writerow([math.degrees(rec.rcv - rec.src), rec.phase,
                        repr(rec.time), repr(math.degrees(rec.takeoff))])
    _emit(buf.getvalue(), args)
    skipped = [s for _, sk in results for s in sk]
    if skipped:
        sys.stderr.write(f"# {len(skipped)} (delta, phase) pairs unreachable\n")
    return 0


def _read_table(path: str) -> list[inverse.TravelTimeRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            records.append(inverse.TravelTimeRecord(
                0.0, math.radians(float(row["delta_deg"])), row["phase"],
                float(row["time"]), math.radians(float(row["takeoff_deg"]))))
    return records


def cmd_invert(args) -> int:
    _, model = _load_model(args)
    if model is None:
        raise ValueError("invert requires a model file with a 'radial' section")
    records = _read_table(args.table)
    radius_est = inverse.estimate_interface_radius(model, records)
    radii, speeds = inverse.invert_fluid_speed(model, records, phase=args.phase)
    report = inverse.recovery_report(model, radii, speeds, radius_est)
    out = {
        "interface_radius_estimate": report.interface_radius_estimate,
        "rms_relative_error": report.rms_relative_error,
        "samples": [{"r": float(r), "c_f": float(c), "c_f_true": float(ct)}
                    for r, c, ct in zip(report.radii, report.recovered,
                                        report.true_profile)],
    }
    _emit(json.dumps(out, indent=2) + "\n", args)
    return 0


def _selftest_checks(seed: int):
    rng = np.random.default_rng(seed)
    mat = media.canonical_material()
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:
            checks.append((name, False, f"{type(exc).__name__}: {exc}"))

    def canonical_speeds():
        assert (mat.c_s, mat.c_p, mat.c_f) == (1.0, 2.0, 1.5)

    def determinant_agreement():
        from .sampling import sample_case
        for case in interface.CASES:
            for _ in range(100):
                m, cov = sample_case(rng, case)
                closed = interface.closed_form_determinant(case, cov, m)
                system = interface.assemble(case, cov, m)
                numeric = np.linalg.det(system.a_out)
                assert abs(numeric - closed) <= 1e-11 * abs(closed)

    def sh_total_reflection():
        cov = microlocal.BoundaryCovector(1.0, 0.0, -3.0)
        incoming = interface.AmplitudeSet(b1_s=2.0 - 1.0j, b_p=1.0)
        sol = interface.solve_at(cov, mat, incoming)
        assert sol.outgoing.b1_s == -(2.0 - 1.0j)
        assert sol.residual <= 1e-10

    def scholte_root():
        root = scholte.find_scholte_speed(mat)
        assert 0.0 < root.c_sc_sq < 1.0
        _, diag = scholte.scholte_kernel_mode(mat, root=root)
        assert diag["sigma_min"] <= 1e-9 * diag["matrix_scale"]

    def chord_time():
        model = media.canonical_radial_model()
        delta = math.radians(40.0)
        t, _ = rays.two_point_time(model, 0.0, delta, "P")
        expect = 2.0 * model.r_outer * math.sin(delta / 2.0) / mat.c_p
        assert abs(t - expect) <= 1e-10

    def conjugation_symmetry():
        cov = microlocal.BoundaryCovector(1.0, 0.0, -3.0)
        pos = microlocal.BoundaryCovector(1.0, 0.0, 3.0)
        inc = interface.AmplitudeSet(b2_s=1.0 + 2.0j, b_f=0.5j)
        a = interface.solve_at(cov, mat, inc.conjugate())
        b = interface.solve_at(pos, mat, inc)
        for k, v in b.outgoing.as_dict().items():
            assert abs(v - np.conj(a.outgoing.as_dict()[k])) <= 1e-12

    check("canonical speeds", canonical_speeds)
    check("determinant closed form vs numeric", determinant_agreement)
    check("SH total reflection", sh_total_reflection)
    check("Scholte root and kernel", scholte_root)
    check("homogeneous-ball chord time", chord_time)
    check("tau conjugation symmetry", conjugation_symmetry)
    return checks


def cmd_selftest(args) -> int:
    checks = _selftest_checks(args.seed)
    width = max(len(name) for name, _, _ in checks)
    ok = True
    for name, passed, detail in checks:
        status = "PASS" if passed else "FAIL"
        line = f"{name:<{width}}  {status}"
        if detail:
            line += f"  {detail}"
        print(line)
        ok = ok and passed
    print(f"{'selftest':<{width}}  {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interface-lab",
        description="Solid-fluid interface waves: classification, "
                    "transmission systems, Scholte waves, rays, inversion.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument("--model", required=True, help="model JSON file")

    def add_covector(p):
        p.add_argument("--xi1", type=float, required=True)
        p.add_argument("--xi2", type=float, default=0.0)
        p.add_argument("--tau", type=float, required=True)
        p.add_argument("--eps-g", type=float, default=1e-9,
                       help="relative glancing tolerance")

    p = sub.add_parser("classify", help="region label of a boundary covector")
    add_model(p)
    add_covector(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("solve", help="solve one transmission system")
    add_model(p)
    add_covector(p)
    p.add_argument("--case", default="auto",
                   choices=["auto"] + [c for c in interface.CASES],
                   help="force a case (default: classify)")
    p.add_argument("--incoming", default="",
                   help="comma list like b2s=1+0i,bf=0.5-0.1i")
    p.add_argument("--dump-symbols", metavar="CSV",
                   help="dump the symbol matrices at this covector")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("scan", help="coefficients versus incidence angle")
    add_model(p)
    p.add_argument("--mode", required=True, choices=["p", "sv", "sh", "f"])
    p.add_argument("--angles", default="0:89:0.5", help="lo:hi:step degrees")
    p.add_argument("--tau", type=float, default=-1.0)
    p.add_argument("--eps-g", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("scholte", help="Scholte speed and kernel mode")
    add_model(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scholte)

    p = sub.add_parser("trace", help="trace one ray through the radial model")
    add_model(p)
    p.add_argument("--mode", default="P", choices=["P", "S", "F"])
    p.add_argument("--takeoff", type=float, required=True, help="degrees")
    p.add_argument("--max-events", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("table", help="forward travel-time table")
    add_model(p)
    p.add_argument("--deltas", default="5:175:5", help="lo:hi:step degrees")
    p.add_argument("--phases", default="P,S,SFS")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("invert", help="recover the fluid profile from a table")
    add_model(p)
    p.add_argument("--table", required=True, help="CSV from the table command")
    p.add_argument("--phase", default="SFS")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_invert)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
