"""Batch front end: presets, parameter sweeps, machine-readable output.

Every command resolves its full configuration up front, validates it
(reporting ALL problems, not just the first), runs the corresponding
module pipeline, and writes one CSV or JSON file whose header carries
the resolved configuration verbatim — so a result file can always be
re-run, and identical configurations produce identical files.

Exit codes: 0 success, 2 invalid configuration, 3 unconverged results
(partial data written, flagged in an ``unconverged`` column).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .chain import (
    ChainModel,
    resonance_count,
    spectrum_rows,
    trajectory,
    trajectory_rows,
    transmission_spectrum,
)
from .coupling import DimerGeometry, dimer_sweep, kappa, subradiant_minimum
from .material import UNITS, Background, DrudeMaterial, load_presets
from .numerics import parallel_map
from .oracle_exact import OracleProblem, find_resonances
from .sphere_qnm import SphereGeometry, normalize, scan_modes

__all__ = [
    "RunConfig",
    "main",
    "parse_ells",
    "parse_sweep",
    "parse_window",
    "read_header_config",
    "run",
    "validate",
]

COMMANDS = (
    "single-sphere",
    "dimer",
    "dark-search",
    "chain-trajectory",
    "chain-transmission",
    "oracle-dimer",
)
EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCONVERGED = 3

_SCHEMAS = {
    "single-sphere": (
        "radius_nm", "ell", "re_omega_eV", "im_omega_eV", "re_omega_THz",
        "residual", "unconverged",
    ),
    "dimer": (
        "d_over_a", "re_omega_plus", "im_omega_plus", "re_omega_minus",
        "im_omega_minus", "re_kappa", "im_kappa",
    ),
    "dark-search": (
        "d_over_a", "re_omega_plus", "im_omega_plus", "re_omega_minus",
        "im_omega_minus", "re_kappa", "im_kappa", "subradiant_abs_im",
        "dark_metric",
    ),
    "chain-trajectory": ("gamma_e_eV", "index", "re_lambda_eV", "im_lambda_eV"),
    "chain-transmission": ("omega_e_eV", "T"),
    "chain-transmission-scan": (
        "gamma_e_eV", "omega_e_peak_eV", "T_peak", "n_peaks",
    ),
    "oracle-dimer": (
        "d_over_a", "re_omega", "im_omega", "sigma_min", "ell_max",
        "unconverged",
    ),
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run description; serialized into every output header."""

    command: str
    material: str | None = None  # preset name, if one was used
    eps_inf: float | None = None  # inline Drude triple (resolved from preset)
    omega_p: float | None = None
    gamma_s: float | None = None
    eps_out: float = 1.0
    radius: float | None = None
    radius_sweep: str | None = None
    ell: str = "1"
    d_over_a: str | None = None
    orientation: str = "horizontal"
    n_spheres: int | None = None
    gamma_e: float | None = None  # scalar (chain-transmission)
    gamma_e_sweep: str | None = None  # sweep (chain-trajectory)
    scan_gamma_e: str | None = None  # exploratory max-T scan
    band: str = "2.8:3.9"
    n_points: int = 2001
    ell_max: int = 4
    oracle_grid: str = "24:14"
    window: str | None = None
    convergence_check: bool = True
    out: str | None = None
    fmt: str = "csv"


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def parse_sweep(spec: str) -> np.ndarray:
    """``lo:hi:count`` (linear), ``lo:hi:countlog`` (log), or single value."""
    s = str(spec).strip()
    logspace = s.endswith("log")
    if logspace:
        s = s[:-3]
    parts = s.split(":")
    if len(parts) == 1 and not logspace:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"sweep '{spec}' is not lo:hi:count or lo:hi:countlog")
    lo, hi = float(parts[0]), float(parts[1])
    if not parts[2].strip().isdigit():
        raise ValueError(f"sweep '{spec}' count must be a positive integer")
    n = int(parts[2])
    if n < 1:
        raise ValueError(f"sweep '{spec}' count must be >= 1")
    if n == 1:
        return np.array([lo])
    if not lo < hi:
        raise ValueError(f"sweep '{spec}' needs lo < hi")
    if logspace:
        if lo <= 0:
            raise ValueError(f"log sweep '{spec}' needs lo > 0")
        return np.logspace(np.log10(lo), np.log10(hi), n)
    return np.linspace(lo, hi, n)


def parse_ells(spec: str) -> list[int]:
    """``lo..hi`` inclusive range or a single multipole order."""
    s = str(spec).strip()
    if ".." in s:
        lo_s, hi_s = s.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(s)
    if lo < 1 or hi < lo:
        raise ValueError(f"ell range '{spec}' must satisfy 1 <= lo <= hi")
    return list(range(lo, hi + 1))


def parse_window(spec: str) -> tuple[complex, complex]:
    """``reLo:reHi:imLo:imHi`` -> complex search rectangle."""
    parts = str(spec).strip().split(":")
    if len(parts) != 4:
        raise ValueError(f"window '{spec}' is not reLo:reHi:imLo:imHi")
    re_lo, re_hi, im_lo, im_hi = map(float, parts)
    if not (re_lo < re_hi and im_lo < im_hi):
        raise ValueError(f"window '{spec}' must have reLo < reHi and imLo < imHi")
    return complex(re_lo, im_lo), complex(re_hi, im_hi)


def parse_band(spec: str) -> tuple[float, float]:
    parts = str(spec).strip().split(":")
    if len(parts) != 2:
        raise ValueError(f"band '{spec}' is not lo:hi")
    lo, hi = float(parts[0]), float(parts[1])
    if not lo < hi:
        raise ValueError(f"band '{spec}' needs lo < hi")
    return lo, hi


def parse_grid(spec: str) -> tuple[int, int]:
    parts = str(spec).strip().split(":")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise ValueError(f"grid '{spec}' is not nRe:nIm")
    nr, ni = int(parts[0]), int(parts[1])
    if nr < 2 or ni < 2:
        raise ValueError(f"grid '{spec}' needs at least 2 points per axis")
    return nr, ni


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _material_diagnostics(config: RunConfig) -> list[str]:
    diags = []
    inline = [config.eps_inf, config.omega_p, config.gamma_s]
    has_inline = any(v is not None for v in inline)
    if config.material is None and not has_inline:
        diags.append(
            "material: give --material PRESET or the full inline triple "
            "--eps-inf/--omega-p/--gamma-s"
        )
        return diags
    if config.material is not None:
        if config.material not in load_presets():
            known = ", ".join(sorted(load_presets()))
            diags.append(
                f"material: unknown preset '{config.material}' (known: {known})"
            )
        return diags
    if any(v is None for v in inline):
        diags.append("material: inline triple needs all of eps-inf, omega-p, gamma-s")
        return diags
    try:
        DrudeMaterial(config.eps_inf, config.omega_p, config.gamma_s)
    except ValueError as exc:
        diags.append(f"material: {exc}")
    return diags


def _sweep_diagnostics(spec, name, minimum=None) -> list[str]:
    try:
        values = parse_sweep(spec)
    except ValueError as exc:
        return [f"{name}: {exc}"]
    if minimum is not None and values.min() < minimum:
        return [f"{name}: values must be >= {minimum}, got {values.min()}"]
    return []


def validate(config: RunConfig) -> list[str]:
    """All configuration problems at once; empty list means runnable."""
    diags: list[str] = []
    if config.command not in COMMANDS:
        diags.append(f"command: unknown '{config.command}'")
        return diags
    if config.fmt not in ("csv", "json"):
        diags.append(f"format: must be csv or json, got '{config.fmt}'")
    diags += _material_diagnostics(config)
    if config.eps_out <= 0:
        diags.append(f"eps-out: must be positive, got {config.eps_out}")

    needs_radius = config.command != "single-sphere" or config.radius_sweep is None
    if needs_radius:
        if config.radius is None:
            diags.append("radius: required")
        elif config.radius <= 0:
            diags.append(f"radius: must be positive, got {config.radius}")

    if config.command == "single-sphere":
        if config.radius_sweep is not None:
            diags += _sweep_diagnostics(config.radius_sweep, "radius-sweep", 1e-12)
        try:
            parse_ells(config.ell)
        except ValueError as exc:
            diags.append(f"ell: {exc}")
        if config.window is not None:
            try:
                parse_window(config.window)
            except ValueError as exc:
                diags.append(f"window: {exc}")

    if config.command in ("dimer", "dark-search", "oracle-dimer"):
        if config.d_over_a is None:
            diags.append("d-over-a: required")
        else:
            bad = _sweep_diagnostics(config.d_over_a, "d-over-a")
            diags += bad
            if not bad and parse_sweep(config.d_over_a).min() < 2.0:
                diags.append(
                    "d-over-a: spheres overlap below d/a = 2 "
                    f"(got {parse_sweep(config.d_over_a).min()})"
                )
        if config.orientation not in ("horizontal", "vertical"):
            diags.append(f"orientation: must be horizontal or vertical, "
                         f"got '{config.orientation}'")

    if config.command == "oracle-dimer":
        if not 2 <= config.ell_max <= 8:
            diags.append(f"ell-max: must lie in [2, 8], got {config.ell_max}")
        try:
            parse_grid(config.oracle_grid)
        except ValueError as exc:
            diags.append(f"grid: {exc}")
        if config.window is not None:
            try:
                parse_window(config.window)
            except ValueError as exc:
                diags.append(f"window: {exc}")

    if config.command in ("chain-trajectory", "chain-transmission"):
        if config.n_spheres is None or config.n_spheres < 2:
            diags.append(f"n: need an integer >= 2, got {config.n_spheres}")
        if config.d_over_a is not None:
            bad = _sweep_diagnostics(config.d_over_a, "d-over-a")
            diags += bad
            if not bad:
                values = parse_sweep(config.d_over_a)
                if len(values) != 1:
                    diags.append("d-over-a: chain commands take a single value")
                elif values[0] < 2.0:
                    diags.append(
                        f"d-over-a: spheres overlap below d/a = 2 (got {values[0]})"
                    )

    if config.command == "chain-trajectory":
        sweep = config.gamma_e_sweep or "0.01:10:60log"
        diags += _sweep_diagnostics(sweep, "gamma-e", 0.0)

    if config.command == "chain-transmission":
        if config.scan_gamma_e is not None:
            diags += _sweep_diagnostics(config.scan_gamma_e, "scan-gamma-e", 0.0)
        elif config.gamma_e is None:
            diags.append("gamma-e: required (or use --scan-gamma-e)")
        elif config.gamma_e < 0:
            diags.append(f"gamma-e: must be >= 0, got {config.gamma_e}")
        try:
            parse_band(config.band)
        except ValueError as exc:
            diags.append(f"band: {exc}")
        if config.n_points < 2:
            diags.append(f"points: need >= 2, got {config.n_points}")

    return diags


# ---------------------------------------------------------------------------
# Pipeline pieces
# ---------------------------------------------------------------------------


def _resolve_material(config: RunConfig) -> DrudeMaterial:
    if config.material is not None:
        return load_presets()[config.material]
    return DrudeMaterial(config.eps_inf, config.omega_p, config.gamma_s)


def _resolved(config: RunConfig) -> RunConfig:
    """Fill the inline triple from the preset so headers are self-contained."""
    mat = _resolve_material(config)
    return replace(
        config, eps_inf=mat.eps_inf, omega_p=mat.omega_p, gamma_s=mat.gamma_s
    )


def _fundamental_mode(config: RunConfig, material, background):
    """Normalized least-damped dipole mode of the isolated sphere."""
    window = parse_window(config.window) if config.window else None
    geometry = SphereGeometry(radius=float(config.radius))
    modes = scan_modes(1, geometry, material, background, window=window).modes
    if not modes:
        return None
    return normalize(min(modes, key=lambda md: md.omega.imag))


def _chain_inputs(config: RunConfig, material, background):
    mode = _fundamental_mode(config, material, background)
    if mode is None:
        return None, None
    doa = float(parse_sweep(config.d_over_a)[0]) if config.d_over_a else 2.0
    geom = DimerGeometry(separation=doa * float(config.radius))
    return mode, kappa(mode, geom)


def _run_single_sphere(config, material, background):
    radii = (
        parse_sweep(config.radius_sweep)
        if config.radius_sweep is not None
        else np.array([float(config.radius)])
    )
    ells = parse_ells(config.ell)
    window = parse_window(config.window) if config.window else None
    tasks = [(float(a), ell) for a in radii for ell in ells]

    def one(task):
        a, ell = task
        return scan_modes(ell, SphereGeometry(radius=a), material, background,
                          window=window)

    rows, any_bad, notes = [], False, []
    for (a, ell), scan in zip(tasks, parallel_map(one, tasks)):
        if scan.modes:
            for md in scan.modes:
                rows.append({
                    "radius_nm": a, "ell": ell,
                    "re_omega_eV": md.omega.real, "im_omega_eV": md.omega.imag,
                    "re_omega_THz": UNITS.to_thz(md.omega.real),
                    "residual": md.residual, "unconverged": 0,
                })
        elif scan.unconverged:
            best = min(scan.unconverged, key=lambda c: c.residual)
            rows.append({
                "radius_nm": a, "ell": ell,
                "re_omega_eV": best.root.real, "im_omega_eV": best.root.imag,
                "re_omega_THz": UNITS.to_thz(best.root.real),
                "residual": best.residual, "unconverged": 1,
            })
            any_bad = True
    rows.sort(key=lambda r: (r["radius_nm"], r["ell"], r["re_omega_eV"]))
    if any_bad:
        notes.append("warning: some modes did not converge (flagged rows)")
    return rows, _SCHEMAS["single-sphere"], any_bad, notes


def _run_dimer(config, material, background, dark=False):
    mode = _fundamental_mode(config, material, background)
    if mode is None:
        return [], _SCHEMAS["dark-search" if dark else "dimer"], True, [
            "error: no converged dipole mode in the search window"
        ]
    doas = parse_sweep(config.d_over_a)
    rows = dimer_sweep(mode, list(doas), orientation=config.orientation)
    notes = [f"single-sphere dipole mode: {mode.omega:.9f} eV"]
    if dark:
        gamma0 = 2.0 * mode.omega.imag
        for row in rows:
            b = 2.0 * row["im_kappa"]
            lo, hi = sorted((abs(gamma0 + b), abs(gamma0 - b)))
            row["subradiant_abs_im"] = min(
                abs(row["im_omega_plus"]), abs(row["im_omega_minus"])
            )
            row["dark_metric"] = lo / hi if hi > 0 else 0.0
        doa_min, width = subradiant_minimum(rows)
        notes.append(
            f"minimum subradiant |Im omega| = {width:.6f} eV at d/a = {doa_min:g}"
        )
    return rows, _SCHEMAS["dark-search" if dark else "dimer"], False, notes


def _run_chain_trajectory(config, material, background):
    mode, kap = _chain_inputs(config, material, background)
    if mode is None:
        return [], _SCHEMAS["chain-trajectory"], True, [
            "error: no converged dipole mode in the search window"
        ]
    model = ChainModel(int(config.n_spheres), mode.omega, kap)
    gammas = parse_sweep(config.gamma_e_sweep or "0.01:10:60log")
    result = trajectory(model, gammas)
    notes = [
        f"single-sphere dipole mode: {mode.omega:.9f} eV",
        f"nearest-neighbor coupling: {kap:.9f} eV",
    ]
    if not result.continuous.all():
        bad = ", ".join(f"{g:g}" for g in result.gamma_e[~result.continuous])
        notes.append(f"warning: ambiguous eigenvalue continuation at gamma_e = {bad}")
    return trajectory_rows(result), _SCHEMAS["chain-trajectory"], False, notes


def _run_chain_transmission(config, material, background):
    mode, kap = _chain_inputs(config, material, background)
    if mode is None:
        return [], _SCHEMAS["chain-transmission"], True, [
            "error: no converged dipole mode in the search window"
        ]
    band = parse_band(config.band)
    notes = [
        f"single-sphere dipole mode: {mode.omega:.9f} eV",
        f"nearest-neighbor coupling: {kap:.9f} eV",
    ]
    n = int(config.n_spheres)
    if config.scan_gamma_e is not None:
        rows = []
        best = (0.0, None, None)
        for g in parse_sweep(config.scan_gamma_e):
            model = ChainModel(n, mode.omega, kap, float(g))
            sp = transmission_spectrum(model, band=band, n_points=config.n_points)
            i = int(np.argmax(sp.T))
            rows.append({
                "gamma_e_eV": float(g),
                "omega_e_peak_eV": float(sp.omega_e[i]),
                "T_peak": float(sp.T[i]),
                "n_peaks": resonance_count(sp),
            })
            if sp.T[i] > best[0]:
                best = (float(sp.T[i]), float(g), float(sp.omega_e[i]))
        notes.append(
            f"max T = {best[0]:.6g} at gamma_e = {best[1]:g} eV, "
            f"omega_e = {best[2]:.6f} eV"
        )
        return rows, _SCHEMAS["chain-transmission-scan"], False, notes
    model = ChainModel(n, mode.omega, kap, float(config.gamma_e))
    sp = transmission_spectrum(model, band=band, n_points=config.n_points)
    notes.append(f"resonance count (prominence 0.05): {resonance_count(sp)}")
    return spectrum_rows(sp), _SCHEMAS["chain-transmission"], False, notes


def _run_oracle_dimer(config, material, background):
    mode_window = parse_window(config.window) if config.window else None
    geometry = SphereGeometry(radius=float(config.radius))
    modes = scan_modes(1, geometry, material, background).modes
    if not modes:
        return [], _SCHEMAS["oracle-dimer"], True, [
            "error: no converged dipole mode to center the search window on"
        ]
    w0 = min(modes, key=lambda md: md.omega.imag).omega
    if mode_window is not None:
        window = mode_window
    else:
        window = (
            complex(w0.real - 0.35, max(1e-4, 0.3 * w0.imag)),
            complex(w0.real + 0.35, 3.5 * w0.imag + 0.05),
        )
    grid = parse_grid(config.oracle_grid)
    a = float(config.radius)
    doas = parse_sweep(config.d_over_a)

    def one(doa):
        problem = OracleProblem(
            spheres=(
                SphereGeometry(radius=a, center=(0.0, 0.0, 0.0)),
                SphereGeometry(radius=a, center=(0.0, 0.0, float(doa) * a)),
            ),
            material=material,
            background=background,
            ell_max=config.ell_max,
        )
        return find_resonances(
            problem, window, grid=grid,
            check_convergence=config.convergence_check,
        )

    rows, any_bad = [], False
    for doa, found in zip(doas, parallel_map(one, list(doas))):
        for r in found:
            bad = not r.converged
            any_bad = any_bad or bad
            rows.append({
                "d_over_a": float(doa),
                "re_omega": r.omega.real, "im_omega": r.omega.imag,
                "sigma_min": r.sigma_min, "ell_max": r.ell_max,
                "unconverged": int(bad),
            })
    notes = [f"search window: {window[0]:.4f} .. {window[1]:.4f}"]
    if any_bad:
        notes.append("warning: some resonances unstable against ell_max + 1")
    return rows, _SCHEMAS["oracle-dimer"], any_bad, notes


_HANDLERS = {
    "single-sphere": _run_single_sphere,
    "dimer": lambda c, m, b: _run_dimer(c, m, b, dark=False),
    "dark-search": lambda c, m, b: _run_dimer(c, m, b, dark=True),
    "chain-trajectory": _run_chain_trajectory,
    "chain-transmission": _run_chain_transmission,
    "oracle-dimer": _run_oracle_dimer,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _config_dict(config: RunConfig) -> dict:
    return asdict(_resolved(config))


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _sanitize(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, (bool, np.bool_)) or isinstance(value, (int, np.integer)):
            out[key] = int(value)
        elif isinstance(value, (float, np.floating)):
            out[key] = float(value)
        else:
            out[key] = value
    return out


def _default_out(config: RunConfig) -> str:
    return f"{config.command.replace('-', '_')}.{config.fmt}"


def write_output(config: RunConfig, schema, rows) -> Path:
    path = Path(config.out or _default_out(config))
    cfg = _config_dict(config)
    if config.fmt == "json":
        payload = {"config": cfg, "rows": [_sanitize(r) for r in rows]}
        path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
        return path
    lines = [f"# config: {json.dumps(cfg, sort_keys=True)}"]
    lines.append(",".join(schema))
    for row in rows:
        lines.append(",".join(_cell(row[key]) for key in schema))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_header_config(path: str | Path) -> RunConfig:
    """Recover the resolved RunConfig a result file was produced with."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return RunConfig(**json.loads(text)["config"])
    for line in text.splitlines():
        if line.startswith("# config: "):
            return RunConfig(**json.loads(line[len("# config: "):]))
    raise ValueError(f"no config header found in {path}")


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def run(config: RunConfig) -> int:
    """Validate, execute, and write; returns the process exit code."""
    diags = validate(config)
    if diags:
        for diag in diags:
            print(f"error: {diag}", file=sys.stderr)
        return EXIT_INVALID
    material = _resolve_material(config)
    background = Background(float(config.eps_out))
    rows, schema, unconverged, notes = _HANDLERS[config.command](
        config, material, background
    )
    path = write_output(config, schema, rows)
    for note in notes:
        print(note)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_UNCONVERGED if unconverged else EXIT_OK


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--material", help="preset name (see data/materials.toml)")
    sp.add_argument("--eps-inf", type=float, help="inline Drude high-frequency limit")
    sp.add_argument("--omega-p", type=float, help="inline Drude plasma energy (eV)")
    sp.add_argument("--gamma-s", type=float, help="inline Drude collision rate (eV)")
    sp.add_argument("--eps-out", type=float, default=1.0,
                    help="host permittivity (default vacuum)")
    sp.add_argument("-o", "--out", help="output path (default <command>.<fmt>)")
    sp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="plasmonchain",
        description="Resonances, coupling, and transport of metal nanosphere "
                    "dimers and chains (photon energies in eV).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ss = sub.add_parser("single-sphere", help="isolated-sphere mode tables")
    _add_common(ss)
    ss.add_argument("--radius", type=float, help="sphere radius (nm)")
    ss.add_argument("--radius-sweep", help="lo:hi:count[log] radius sweep (nm)")
    ss.add_argument("--ell", default="1", help="multipole order or range lo..hi")
    ss.add_argument("--window", help="search rectangle reLo:reHi:imLo:imHi (eV)")

    for name, dark in (("dimer", False), ("dark-search", True)):
        dm = sub.add_parser(
            name,
            help="two-sphere eigenvalue pair vs separation"
            if not dark else "separation scan for minimal subradiant width",
        )
        _add_common(dm)
        dm.add_argument("--radius", type=float, required=True)
        dm.add_argument("--d-over-a", required=True,
                        help="center separation / radius: value or lo:hi:count[log]")
        dm.add_argument("--orientation", choices=("horizontal", "vertical"),
                        default="horizontal")
        dm.add_argument("--window", help="single-sphere search rectangle")

    ct = sub.add_parser("chain-trajectory",
                        help="chain eigenvalues vs continuum coupling")
    _add_common(ct)
    ct.add_argument("--radius", type=float, required=True)
    ct.add_argument("--n", type=int, default=5, dest="n_spheres")
    ct.add_argument("--gamma-e", dest="gamma_e_sweep", default="0.01:10:60log",
                    help="continuum coupling sweep lo:hi:count[log] (eV)")
    ct.add_argument("--d-over-a", help="sphere spacing (default 2 = touching)")
    ct.add_argument("--window", help="single-sphere search rectangle")

    cx = sub.add_parser("chain-transmission", help="transmission spectrum T(omega_e)")
    _add_common(cx)
    cx.add_argument("--radius", type=float, required=True)
    cx.add_argument("--n", type=int, default=5, dest="n_spheres")
    cx.add_argument("--gamma-e", type=float, dest="gamma_e",
                    help="continuum coupling (eV)")
    cx.add_argument("--scan-gamma-e", dest="scan_gamma_e",
                    help="exploratory sweep lo:hi:count[log]: reports max T")
    cx.add_argument("--band", default="2.8:3.9", help="excitation band lo:hi (eV)")
    cx.add_argument("--points", type=int, default=2001, dest="n_points")
    cx.add_argument("--d-over-a", help="sphere spacing (default 2 = touching)")
    cx.add_argument("--window", help="single-sphere search rectangle")

    od = sub.add_parser("oracle-dimer", help="exact two-sphere resonances")
    _add_common(od)
    od.add_argument("--radius", type=float, required=True)
    od.add_argument("--d-over-a", required=True)
    od.add_argument("--ell-max", type=int, default=4, dest="ell_max")
    od.add_argument("--grid", default="24:14", dest="oracle_grid",
                    help="sigma-min scan grid nRe:nIm")
    od.add_argument("--window", help="resonance search rectangle (default: "
                                     "bracket the single-sphere mode)")
    od.add_argument("--no-convergence-check", action="store_false",
                    dest="convergence_check",
                    help="skip the ell_max + 1 stability re-solve")

    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = vars(ns).copy()
    return RunConfig(**{
        f: values[f] for f in RunConfig.__dataclass_fields__ if f in values
    })


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
