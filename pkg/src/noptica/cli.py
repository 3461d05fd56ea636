"""Command-line front end.

    noptica <subcommand> --config run.json [flags] [--out-dir DIR]

Subcommands: refract, phase, sq, diffuse, evolve, wigner, visibility,
infer-szero. Flags override the matching config entries. Every run writes
its outputs plus ``<subcommand>.config.json`` (the resolved configuration)
into the output directory; JSON records are also printed to stdout.

Exit codes: 0 success, 1 unknown subcommand, 2 configuration or domain
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import diffuse, interferometry, lindblad, optics, snapshot, structure, wigner
from .core import Medium, Beam, beam_from_wavelength
from .errors import ConfigError, DomainError, NopticaError, NumericError, TotalReflectionError

SUBCOMMANDS = ("refract", "phase", "sq", "diffuse", "evolve", "wigner", "visibility", "infer-szero")

ANGSTROM = 1e-10

_SCHEMA = {
    "medium": {
        "number_density_per_m3",
        "number_density_per_cm3",
        "scattering_length_m",
        "hard_sphere_diameter_m",
        "thickness_m",
        "temperature_K",
    },
    "beam": {"wavelength_angstrom", "p0_kg_m_per_s"},
    "structure": {"model", "path"},
    "grid": {"n_polar", "n_azimuth"},
    "integrator": {"dt_s", "steps", "store_every", "j0", "u_real_J", "snapshots"},
    "wigner": {"p_min_kg_m_per_s", "dq_kg_m_per_s", "x_points", "snapshot", "frame"},
    "epsilon": None,
}

_DEFAULTS = {
    "structure": {"model": "hard_sphere"},
    "grid": {"n_polar": 16, "n_azimuth": 1},
    "integrator": {"steps": 1000, "store_every": 1, "u_real_J": 0.0, "snapshots": False},
    "wigner": {"p_min_kg_m_per_s": 0.0, "frame": -1},
    "epsilon": 0.0,
}


def fmt(x) -> str:
    """17 significant digits, so that reruns are byte-identical and round-trip exactly."""
    return format(float(x), ".17g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="noptica", description="Neutron optics and diffuse scattering.")
    sub = p.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", type=Path, help="JSON run configuration")
        sp.add_argument("--out-dir", type=Path, default=None, help="output directory (default: .)")
        return sp

    add("refract", "refractive indices and optical potential (JSON)")
    sp = add("phase", "phase shift with diffuse attenuation (JSON)")
    sp.add_argument("--sigma-t", type=float, help="total cross section m^2 (default: sigma_d)")
    sp = add("sq", "static structure function table (CSV)")
    sp.add_argument("--q-min", type=float, default=0.0, help="m^-1")
    sp.add_argument("--q-max", type=float, required=True, help="m^-1")
    sp.add_argument("--points", type=int, default=100)
    sp = add("diffuse", "acceptance integral A(phi) (CSV)")
    sp.add_argument("--phi-min", type=float, default=0.0, help="rad")
    sp.add_argument("--phi-max", type=float, default=math.pi, help="rad")
    sp.add_argument("--points", type=int, default=50)
    sp = add("evolve", "master-equation evolution of a beam direction (CSV, optional binary)")
    sp.add_argument("--grid", help="n_polar,n_azimuth")
    sp.add_argument("--dt", type=float, help="time step s (default: 0.05 / max out-rate)")
    sp.add_argument("--steps", type=int)
    sp.add_argument("--store-every", type=int)
    sp.add_argument("--j0", type=int, help="initial direction index (default: closest to +z)")
    sp.add_argument("--snapshots", action="store_true", default=None, help="write evolve.bin")
    sp = add("wigner", "Wigner function of a snapshot matrix (CSV)")
    sp.add_argument("--snapshot", type=Path)
    sp.add_argument("--frame", type=int)
    sp.add_argument("--dq", type=float, help="momentum spacing kg m/s")
    sp.add_argument("--p-min", type=float, help="first momentum kg m/s")
    sp.add_argument("--x-points", type=int, help="samples over one spatial period")
    sp = add("visibility", "visibility budget (JSON)")
    sp.add_argument("--phi", type=float, required=True, help="acceptance angle rad")
    sp = add("infer-szero", "S_c(0) from a measured acceptance (JSON)")
    sp.add_argument("--A", dest="A", type=float, required=True)
    sp.add_argument("--phi", type=float, required=True, help="rad")
    return p


def load_config(path) -> dict:
    """Read and schema-check a JSON config; unknown keys are rejected."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    for key, value in raw.items():
        if key not in _SCHEMA:
            raise ConfigError(f"{path}: unknown key {key!r}")
        allowed = _SCHEMA[key]
        if allowed is None:
            continue
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: {key!r} must be an object")
        unknown = sorted(set(value) - allowed)
        if unknown:
            raise ConfigError(f"{path}: unknown key(s) in {key!r}: {', '.join(unknown)}")
    return raw


def resolve(raw: dict) -> dict:
    cfg = copy.deepcopy(_DEFAULTS)
    for key, value in raw.items():
        if isinstance(value, dict):
            cfg.setdefault(key, {}).update(value)
        else:
            cfg[key] = value
    return cfg


def _need(section: dict, key: str, where: str):
    if key not in section or section[key] is None:
        raise ConfigError(f"missing {where}.{key}")
    return section[key]


def make_medium(cfg) -> Medium:
    m = cfg.get("medium")
    if not m:
        raise ConfigError("missing 'medium' section")
    if "number_density_per_m3" in m and "number_density_per_cm3" in m:
        raise ConfigError("give the number density in m^-3 or cm^-3, not both")
    if "number_density_per_cm3" in m:
        n_o = float(m["number_density_per_cm3"]) * 1e6
    else:
        n_o = float(_need(m, "number_density_per_m3", "medium"))
    try:
        return Medium(
            number_density=n_o,
            scattering_length=float(_need(m, "scattering_length_m", "medium")),
            hard_sphere_diameter=float(m.get("hard_sphere_diameter_m", 0.0)),
            thickness=float(_need(m, "thickness_m", "medium")),
            temperature=None if m.get("temperature_K") is None else float(m["temperature_K"]),
        )
    except DomainError as exc:
        raise ConfigError(f"invalid medium: {exc}") from None


def make_beam(cfg) -> Beam:
    b = cfg.get("beam")
    if not b:
        raise ConfigError("missing 'beam' section")
    if ("wavelength_angstrom" in b) == ("p0_kg_m_per_s" in b):
        raise ConfigError("beam needs exactly one of wavelength_angstrom, p0_kg_m_per_s")
    try:
        if "wavelength_angstrom" in b:
            return beam_from_wavelength(float(b["wavelength_angstrom"]) * ANGSTROM)
        return Beam(float(b["p0_kg_m_per_s"]))
    except DomainError as exc:
        raise ConfigError(f"invalid beam: {exc}") from None


def make_model(cfg, medium: Medium, base: Path):
    s = cfg.get("structure", {})
    kind = s.get("model", "hard_sphere")
    try:
        if kind == "hard_sphere":
            return structure.HardSphere.from_medium(medium)
        path = Path(_need(s, "path", "structure"))
        if not path.is_absolute():
            path = base / path
        if not path.exists():
            raise ConfigError(f"structure file not found: {path}")
        if kind == "tabulated":
            return structure.Tabulated.from_csv(path)
        if kind == "pair_correlation":
            return structure.PairCorrelation.from_csv(path, medium.number_density)
    except DomainError as exc:
        raise ConfigError(f"invalid structure model: {exc}") from None
    raise ConfigError(f"unknown structure model {kind!r}")


class _Run:
    def __init__(self, args, cfg, base):
        self.args = args
        self.cfg = cfg
        self.base = base
        out = args.out_dir if args.out_dir is not None else Path(".")
        self.out_dir = Path(out)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self._medium = self._beam = self._model = None

    @property
    def medium(self):
        if self._medium is None:
            self._medium = make_medium(self.cfg)
        return self._medium

    @property
    def beam(self):
        if self._beam is None:
            self._beam = make_beam(self.cfg)
        return self._beam

    @property
    def model(self):
        if self._model is None:
            self._model = make_model(self.cfg, self.medium, self.base)
        return self._model

    def write_csv(self, name, header, columns):
        path = self.out_dir / name
        rows = zip(*columns)
        with path.open("w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(fmt(v) for v in row) + "\n")
        return path

    def write_json(self, name, record, echo=True):
        text = json.dumps(_jsonable(record), indent=2, sort_keys=True) + "\n"
        (self.out_dir / name).write_text(text)
        if echo:
            sys.stdout.write(text)

    def echo_config(self, command):
        flags = {
            k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(self.args).items())
            if k not in ("command", "config", "out_dir")
        }
        record = {"command": command, "config": self.cfg, "flags": flags}
        self.write_json(f"{command}.config.json", record, echo=False)


def _jsonable(obj):
    # floats as 17-digit numbers keeps reruns byte-identical
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float(fmt(v)) if math.isfinite(v) else None
    return str(obj)


def _optics_record(run, sigma_t=None):
    medium, beam = run.medium, run.beam
    try:
        n_exact = optics.refractive_index_gs(medium, beam, "exact")
    except TotalReflectionError:
        n_exact = None
    U = optics.complex_optical_potential(medium, beam, run.model)
    if sigma_t is None:
        sigma_t = diffuse.diffusion_cross_section(medium, beam, run.model)
    chi = optics.phase_shift(medium, beam, sigma_t)
    return {
        "n_exact": n_exact,
        "n_first_order": optics.refractive_index_gs(medium, beam, "first_order"),
        "chi_prime": chi.chi_prime,
        "chi_double_prime": chi.chi_double_prime,
        "U_re_J": U.real,
        "U_im_J": U.imag,
    }


def cmd_refract(run):
    run.write_json("refract.json", _optics_record(run))


def cmd_phase(run):
    run.write_json("phase.json", _optics_record(run, run.args.sigma_t))


def cmd_sq(run):
    a = run.args
    if a.points < 1 or a.q_max < a.q_min or a.q_min < 0:
        raise ConfigError("need 0 <= q-min <= q-max and points >= 1")
    q = np.linspace(a.q_min, a.q_max, a.points)
    s = structure.s_static(run.model, q)
    run.write_csv("sq.csv", ["q_per_m", "S"], [q, s])


def cmd_diffuse(run):
    a = run.args
    if a.points < 1 or not (0 <= a.phi_min <= a.phi_max <= math.pi):
        raise ConfigError("need 0 <= phi-min <= phi-max <= pi and points >= 1")
    phi = np.linspace(a.phi_min, a.phi_max, a.points)
    medium, beam = run.medium, run.beam
    closed = diffuse.acceptance_closed_form(medium, beam, phi)
    quad = diffuse.acceptance_quadrature(medium, beam, run.model, phi)
    small = diffuse.acceptance_small_angle(medium, beam, phi)
    run.write_csv(
        "diffuse.csv", ["phi_rad", "A_closed", "A_quadrature", "A_small_angle"], [phi, closed, quad, small]
    )


def cmd_evolve(run):
    a, cfg = run.args, run.cfg
    grid_cfg, integ = cfg["grid"], cfg["integrator"]
    if a.grid:
        try:
            np_, na = (int(v) for v in a.grid.split(","))
        except ValueError:
            raise ConfigError(f"--grid expects 'n_polar,n_azimuth', got {a.grid!r}") from None
        grid_cfg.update(n_polar=np_, n_azimuth=na)
    for flag, key in (("dt", "dt_s"), ("steps", "steps"), ("store_every", "store_every"), ("j0", "j0"), ("snapshots", "snapshots")):
        if getattr(a, flag) is not None:
            integ[key] = getattr(a, flag)
    grid = lindblad.build_direction_grid(grid_cfg["n_polar"], grid_cfg["n_azimuth"])
    jumps = lindblad.build_jump_operators(grid, run.medium, run.beam, run.model)
    max_rate = float(jumps.out_rates.max())
    if integ.get("dt_s") is None:
        integ["dt_s"] = 0.5 * lindblad.STABILITY_LIMIT / max_rate if max_rate > 0 else 1.0
    j0 = integ.get("j0")
    if j0 is None:
        j0 = integ["j0"] = grid.nearest((0.0, 0.0, 1.0))
    if not 0 <= j0 < grid.size:
        raise ConfigError(f"j0 = {j0} outside grid of {grid.size} directions")
    traj = lindblad.evolve(
        lindblad.direction_state(grid.size, j0),
        jumps,
        u_real=float(integ["u_real_J"]),
        dt=float(integ["dt_s"]),
        steps=int(integ["steps"]),
        store_every=int(integ["store_every"]),
    )
    run.write_csv(
        "evolve.csv",
        ["t_s", "trace", "min_eig", "rho_j0j0", "ot_residual"],
        [traj.times, traj.trace, traj.min_eig, traj.population(j0), traj.ot_residual],
    )
    if integ.get("snapshots"):
        snapshot.write_frames(run.out_dir / "evolve.bin", traj.states, traj.steps)
    summary = {
        "j0": j0,
        "directions": grid.size,
        "dt_s": integ["dt_s"],
        "attenuation_rate_per_s": diffuse.attenuation_rate(run.medium, run.beam, run.model),
        "grid_out_rate_per_s": float(jumps.out_rates[j0]),
        "max_trace_drift": float(np.max(np.abs(traj.trace - 1.0))),
        "min_eigenvalue": float(traj.min_eig.min()),
    }
    if traj.times.size >= 3 and max_rate > 0:
        try:
            summary["fitted_rate_per_s"] = lindblad.coherent_survival(traj, j0)
        except NumericError:
            summary["fitted_rate_per_s"] = None
    run.write_json("evolve.json", summary)


def cmd_wigner(run):
    a, w = run.args, run.cfg["wigner"]
    for flag, key in (("snapshot", "snapshot"), ("frame", "frame"), ("dq", "dq_kg_m_per_s"), ("p_min", "p_min_kg_m_per_s"), ("x_points", "x_points")):
        if getattr(a, flag) is not None:
            w[key] = str(getattr(a, flag)) if flag == "snapshot" else getattr(a, flag)
    path = Path(_need(w, "snapshot", "wigner"))
    if not path.is_absolute() and a.snapshot is None:
        path = run.base / path
    if not path.exists():
        raise ConfigError(f"snapshot file not found: {path}")
    dq = float(_need(w, "dq_kg_m_per_s", "wigner"))
    try:
        frames = list(snapshot.read_frames(path))
        if not frames:
            raise ConfigError(f"{path}: no frames")
        step, rho = frames[int(w["frame"])]
    except (DomainError, IndexError) as exc:
        raise ConfigError(f"cannot read snapshot {path}: {exc}") from None
    state = wigner.MomentumState1D(rho, float(w["p_min_kg_m_per_s"]), dq)
    nx = int(w.get("x_points") or 2 * rho.shape[0])
    x = np.arange(nx) * (wigner.period(dq) / nx)
    field = wigner.wigner_transform(state, x)
    X, P = np.meshgrid(field.x, field.p, indexing="ij")
    run.write_csv("wigner.csv", ["x_m", "p_kg_m_per_s", "f_w_per_J_s"], [X.ravel(), P.ravel(), field.values.ravel()])


def cmd_visibility(run):
    phi = run.args.phi
    if not 0 <= phi <= math.pi:
        raise ConfigError(f"--phi must lie in [0, pi], got {phi}")
    budget = interferometry.visibility_budget(run.medium, run.beam, run.model, phi)
    run.write_json("visibility.json", budget.as_dict())


def cmd_infer_szero(run):
    a = run.args
    ratio = interferometry.small_angle_ratio(run.medium, run.beam, a.phi)
    s0 = interferometry.infer_s_zero(a.A, run.medium, run.beam, a.phi, check=False)
    run.write_json(
        "infer-szero.json",
        {
            "S_c0": s0,
            "small_angle_ratio": ratio,
            "small_angle_valid": ratio < interferometry.SMALL_ANGLE_LIMIT,
        },
    )


_COMMANDS = {
    "refract": cmd_refract,
    "phase": cmd_phase,
    "sq": cmd_sq,
    "diffuse": cmd_diffuse,
    "evolve": cmd_evolve,
    "wigner": cmd_wigner,
    "visibility": cmd_visibility,
    "infer-szero": cmd_infer_szero,
}


def dispatch(argv=None) -> int:
    """Run one subcommand and return the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    if not argv or argv[0] not in SUBCOMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            parser.print_help()
            return 0
        parser.print_usage(sys.stderr)
        print(f"noptica: unknown subcommand {argv[0] if argv else '(none)'!r}", file=sys.stderr)
        return 1
    try:
        if any(h in argv for h in ("-h", "--help")):
            try:
                parser.parse_args(argv)
            except SystemExit:
                pass
            return 0
        args = parser.parse_args(argv)
        if args.config is not None:
            raw = load_config(args.config)
            base = args.config.resolve().parent
        else:
            raw, base = {}, Path(".").resolve()
        cfg = resolve(raw)
        run = _Run(args, cfg, base)
        _COMMANDS[args.command](run)
        run.echo_config(args.command)
    except ConfigError as exc:
        print(f"noptica: config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"noptica: numeric error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"noptica: {exc}", file=sys.stderr)
        return 2
    except NopticaError as exc:
        print(f"noptica: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(dispatch())
