"""Command-line front end.

Ties the preparation, tomography, spectral, error-model, and
entanglement modules into deterministic subcommands that emit CSV/JSON
artifacts (and optionally matplotlib figures).  Angles are degrees on
the command line, frequencies MHz or GHz as flagged; everything is SI
internally.

Exit status: 0 success, 1 usage error, 2 input-file error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import pseq
from .entanglement import negativity, quantum_limit_temperature
from .imperfections import fit_phase_components, model_coefficients
from .prep import (
    BellState,
    ConfigError,
    ExperimentConfig,
    bell_prep_program,
    bell_start_level,
    bell_state,
    boltzmann_density,
    load_config,
    pseudo_boltzmann,
    pseudo_pure,
    thermal_polarization,
)
from .pulses import compile_program, program_duration
from .spectral import dft_magnitude, find_peaks, write_spectrum_csv
from .spincore import evolve, fictitious_z, fidelity, sig12, trace_expectation
from .tomography import (
    DetectorFamily,
    ScanSettings,
    detection_surface,
    interferogram,
    phase_cycled_detect,
    pipeline_signal,
    read_interferogram_csv,
    write_interferogram_csv,
)


class InputError(Exception):
    """Problem with an input file; reported with exit status 2."""


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_state(parser) -> None:
    parser.add_argument("--state", required=True,
                        choices=[s.value for s in BellState],
                        help="Bell state to prepare")


def _add_family(parser) -> None:
    parser.add_argument("--family", required=True,
                        choices=[f.value for f in DetectorFamily],
                        help="detector family (fixes the observed ESR transition)")


def _add_deltas(parser) -> None:
    parser.add_argument("--delta1", type=float, default=0.0,
                        help="ESR flip-angle deviation (fraction)")
    parser.add_argument("--delta2", type=float, default=0.0,
                        help="NMR flip-angle deviation (fraction)")


def _prep_and_init(state: BellState):
    """Ideal-route pipeline inputs: pseudo-pure start, no preparatory pulse."""
    return bell_prep_program(state), pseudo_pure(bell_start_level(state))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="endorsim",
        description="Simulate pulsed ENDOR Bell-state preparation and tomography.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("prepare", formatter_class=fmt,
                       help="prepare a Bell state; print density matrix, fidelity, negativity")
    _add_state(p)
    p.add_argument("--init", choices=["pseudo-pure", "pseudo-boltzmann", "boltzmann"],
                   default="pseudo-pure", help="initial ensemble")
    p.add_argument("--config", metavar="FILE", help="key=value experiment config file")
    p.set_defaults(handler=_cmd_prepare)

    p = sub.add_parser("detect", formatter_class=fmt,
                       help="single detector-signal evaluation")
    _add_state(p)
    _add_family(p)
    p.add_argument("--phi1", type=float, required=True, help="ESR detection-pulse phase (deg)")
    p.add_argument("--phi2", type=float, required=True, help="NMR detection-pulse phase (deg)")
    _add_deltas(p)
    p.add_argument("--cycle", action="store_true", help="apply phase cycling")
    p.set_defaults(handler=_cmd_detect)

    p = sub.add_parser("scan", formatter_class=fmt,
                       help="phase-increment interferogram scan to CSV")
    _add_state(p)
    _add_family(p)
    p.add_argument("--nu1", type=float, required=True, help="ESR phase frequency (MHz)")
    p.add_argument("--nu2", type=float, required=True, help="NMR phase frequency (MHz)")
    p.add_argument("--dt", type=float, default=100.0, help="sample spacing (ns)")
    p.add_argument("--n", type=int, default=200, help="sample count")
    _add_deltas(p)
    p.add_argument("--cycle", action="store_true", help="apply phase cycling")
    p.add_argument("--out", required=True, metavar="FILE.csv", help="interferogram CSV path")
    p.add_argument("--plot", metavar="FILE.png", help="also render the interferogram")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("spectrum", formatter_class=fmt,
                       help="DFT magnitude spectrum of an interferogram CSV")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE.csv",
                   help="interferogram CSV to transform")
    p.add_argument("--peaks", type=float, default=0.1,
                   help="report peaks above this fraction of the maximum")
    p.add_argument("--keep-mean", action="store_true",
                   help="keep the DC component instead of removing the mean")
    p.add_argument("--window", choices=["boxcar", "hann"], default="boxcar",
                   help="taper for off-bin frequencies")
    p.add_argument("--out", required=True, metavar="FILE.csv", help="spectrum CSV path")
    p.add_argument("--plot", metavar="FILE.png", help="also render the spectrum")
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("run-program", formatter_class=fmt,
                       help="execute a .pseq pulse-program file")
    p.add_argument("file", help="pulse-program file (.pseq)")
    p.add_argument("--phi1", type=float, default=0.0,
                   help="extra phase on every S-channel pulse (deg)")
    p.add_argument("--phi2", type=float, default=0.0,
                   help="extra phase on every I-channel pulse (deg)")
    p.set_defaults(handler=_cmd_run_program)

    p = sub.add_parser("fit", formatter_class=fmt,
                       help="fit phase-surface components against the error model")
    _add_state(p)
    _add_family(p)
    p.add_argument("--delta1", type=float, required=True, help="ESR flip-angle deviation")
    p.add_argument("--delta2", type=float, required=True, help="NMR flip-angle deviation")
    p.add_argument("--grid", type=int, default=32, help="phase-grid points per axis")
    p.add_argument("--cycle", action="store_true", help="fit the phase-cycled surface")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("quantum-limit", formatter_class=fmt,
                       help="threshold temperature for entanglement of the thermal ensemble")
    p.add_argument("--freq", type=float, required=True, help="ESR frequency (GHz)")
    p.set_defaults(handler=_cmd_quantum_limit)

    p = sub.add_parser("report", formatter_class=fmt,
                       help="reference four-panel scan report: CSVs plus figures")
    p.add_argument("--out-dir", required=True, metavar="DIR", help="output directory")
    p.add_argument("--nu1", type=float, default=2.0, help="ESR phase frequency (MHz)")
    p.add_argument("--nu2", type=float, default=1.5, help="NMR phase frequency (MHz)")
    p.add_argument("--dt", type=float, default=100.0, help="sample spacing (ns)")
    p.add_argument("--n", type=int, default=200, help="sample count")
    _add_deltas(p)
    p.add_argument("--cycle", action="store_true", help="apply phase cycling")
    p.add_argument("--peaks", type=float, default=0.1,
                   help="report peaks above this fraction of the maximum")
    p.set_defaults(handler=_cmd_report)

    return parser


def _cmd_prepare(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    state = BellState(args.state)
    if args.init == "pseudo-pure":
        program = bell_prep_program(state)
        rho0 = pseudo_pure(bell_start_level(state))
    elif args.init == "pseudo-boltzmann":
        program = bell_prep_program(state, include_pseudo_pure_step=True)
        rho0 = pseudo_boltzmann()
    else:
        program = bell_prep_program(state, include_pseudo_pure_step=True)
        rho0 = boltzmann_density(thermal_polarization(config))
    rho = evolve(rho0, compile_program(program))
    out = {
        "state": state.value,
        "init": args.init,
        "duration_ns": sig12(program_duration(program, config)),
        "fidelity": sig12(fidelity(rho, bell_state(state))),
        "negativity": sig12(negativity(rho)),
        "density_matrix": rho.to_json(),
    }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_detect(args) -> int:
    state = BellState(args.state)
    prep, rho0 = _prep_and_init(state)
    phi1 = math.radians(args.phi1)
    phi2 = math.radians(args.phi2)
    evaluate = phase_cycled_detect if args.cycle else pipeline_signal
    signal = evaluate(prep, rho0, args.family, phi1, phi2, args.delta1, args.delta2)
    print(f"{signal:.12g}")
    return 0


def _cmd_scan(args) -> int:
    state = BellState(args.state)
    prep, rho0 = _prep_and_init(state)
    settings = ScanSettings(args.nu1 * 1e6, args.nu2 * 1e6, args.dt * 1e-9, args.n,
                            args.cycle, args.delta1, args.delta2)
    ig = interferogram(prep, rho0, args.family, settings)
    write_interferogram_csv(ig, args.out)
    if args.plot:
        from .plotting import save_interferogram_plot

        save_interferogram_plot(ig, args.plot)
    return 0


def _cmd_spectrum(args) -> int:
    try:
        ig = read_interferogram_csv(args.infile)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    window = None if args.window == "boxcar" else args.window
    spec = dft_magnitude(ig, remove_mean=not args.keep_mean, window=window)
    write_spectrum_csv(spec, args.out)
    for freq, magnitude in find_peaks(spec, args.peaks):
        print(f"peak {freq / 1e6:.12g} MHz magnitude {magnitude:.12g}")
    if args.plot:
        from .plotting import save_spectrum_plot

        save_spectrum_plot(spec, args.plot)
    return 0


def _cmd_run_program(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}") from exc
    try:
        doc = pseq.parse(text)
        rho0 = pseq.initial_density(doc)
    except (pseq.ParseError, ConfigError) as exc:
        raise InputError(f"{args.file}: {exc}") from exc
    program = pseq.to_program(doc).with_phase_offsets(
        math.radians(args.phi1), math.radians(args.phi2))
    rho = evolve(rho0, compile_program(program))
    signal = None
    if doc.measure is not None:
        observable = 2.0 * fictitious_z(doc.measure.j, doc.measure.k)
        signal = sig12(trace_expectation(rho, observable))
    out = {"density_matrix": rho.to_json(), "signal": signal}
    print(json.dumps(out, indent=2))
    return 0


def _cmd_fit(args) -> int:
    state = BellState(args.state)
    prep, rho0 = _prep_and_init(state)
    surface = detection_surface(prep, rho0, args.family, args.delta1, args.delta2,
                                grid=args.grid, phase_cycle=args.cycle)
    out = {
        "state": state.value,
        "family": args.family,
        "delta1": sig12(args.delta1),
        "delta2": sig12(args.delta2),
        "grid": args.grid,
        "phase_cycle": args.cycle,
        "fitted": fit_phase_components(surface).to_json(),
        "model": model_coefficients(args.delta1, args.delta2).to_json(),
    }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_quantum_limit(args) -> int:
    result = quantum_limit_temperature(args.freq * 1e9)
    print(json.dumps(result.to_json(), indent=2))
    print(result.summary())
    return 0


def _cmd_report(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    panels = [
        ("a", BellState.PSI_MINUS, "psi", 0.0, args.nu2),
        ("b", BellState.PSI_MINUS, "psi", args.nu1, 0.0),
        ("c", BellState.PSI_MINUS, "psi", args.nu1, args.nu2),
        ("d", BellState.PHI_PLUS, "phi", args.nu1, args.nu2),
    ]
    igs, specs, labels = [], [], []
    for tag, state, family, nu1, nu2 in panels:
        prep, rho0 = _prep_and_init(state)
        settings = ScanSettings(nu1 * 1e6, nu2 * 1e6, args.dt * 1e-9, args.n,
                                args.cycle, args.delta1, args.delta2)
        ig = interferogram(prep, rho0, family, settings)
        spec = dft_magnitude(ig)
        write_interferogram_csv(ig, out_dir / f"interferogram_{tag}.csv")
        write_spectrum_csv(spec, out_dir / f"spectrum_{tag}.csv")
        label = f"({tag}) {state.value}, nu1={nu1:g} MHz, nu2={nu2:g} MHz"
        for freq, magnitude in find_peaks(spec, args.peaks):
            print(f"panel {tag}: peak {freq / 1e6:.12g} MHz magnitude {magnitude:.12g}")
        igs.append(ig)
        specs.append(spec)
        labels.append(label)
    from .plotting import save_interferogram_panels, save_spectrum_panels

    save_interferogram_panels(igs, labels, out_dir / "interferograms.png")
    save_spectrum_panels(specs, labels, out_dir / "spectra.png")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"endorsim: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, pseq.ParseError) as exc:
        print(f"endorsim: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"endorsim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
