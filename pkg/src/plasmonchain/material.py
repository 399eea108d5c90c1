"""Drude materials, backgrounds, units, and derived dielectric quantities.

Unit conventions (package-wide): frequencies are photon energies in eV,
lengths in nm, and fields oscillate as exp(+i w t).  In this convention an
absorbing medium has Im eps < 0 for real frequency, and a temporally
decaying resonance sits at Im w > 0.

The "modified" dielectric function sigma(w) = (1/2w) d/dw [w^2 eps(w)] is
the weight that replaces eps in the resonance normalization integrals of
dispersive media; for a Drude pole it has the closed form implemented
here, and it reduces to eps_inf when the collision rate vanishes and to
the (constant) background permittivity outside the particle.
"""

from __future__ import annotations

import importlib.resources
import warnings

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "UnitSystem",
    "UNITS",
    "DrudeMaterial",
    "Background",
    "eps_in",
    "sigma",
    "wavenumbers",
    "load_presets",
    "get_preset",
]


@dataclass(frozen=True)
class UnitSystem:
    """Conversion constants for the eV/nm unit system."""

    hbar_c_ev_nm: float = 197.3269804
    thz_per_ev: float = 241.799

    def wavenumber(self, omega: complex, eps: complex) -> complex:
        """k = (w / hbar c) sqrt(eps), principal branch, in 1/nm."""
        return omega / self.hbar_c_ev_nm * np.sqrt(complex(eps))

    def to_thz(self, omega_ev: float) -> float:
        return omega_ev * self.thz_per_ev


UNITS = UnitSystem()


@dataclass(frozen=True)
class DrudeMaterial:
    """Drude metal: eps(w) = eps_inf - w_p^2 / (w^2 - i w gamma_s).

    Parameters are photon energies in eV.  ``gamma_s`` is the electron
    collision rate; a flag warns when it exceeds 10% of the plasma
    frequency, where the single-pole model stops being a good metal.
    """

    eps_inf: float
    omega_p: float
    gamma_s: float = 0.0

    def __post_init__(self):
        if self.eps_inf < 1.0:
            raise ValueError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if self.omega_p <= 0:
            raise ValueError(f"omega_p must be positive, got {self.omega_p}")
        if self.gamma_s < 0:
            raise ValueError(f"gamma_s must be >= 0, got {self.gamma_s}")
        if self.high_damping:
            warnings.warn(
                f"gamma_s = {self.gamma_s} eV exceeds 10% of omega_p = "
                f"{self.omega_p} eV; the Drude pole is strongly overdamped",
                stacklevel=2,
            )

    @property
    def high_damping(self) -> bool:
        return self.gamma_s > 0.1 * self.omega_p

    def eps(self, omega: complex) -> complex:
        """Relative permittivity at (complex) frequency omega."""
        omega = complex(omega)
        return self.eps_inf - self.omega_p**2 / (omega * (omega - 1j * self.gamma_s))

    def sigma(self, omega: complex) -> complex:
        """Modified dielectric function (1/2w) d/dw [w^2 eps(w)].

        Closed form: eps_inf + i gamma_s w_p^2 / (2 w (w - i gamma_s)^2).
        """
        omega = complex(omega)
        if self.gamma_s == 0.0:
            return complex(self.eps_inf)
        return self.eps_inf + 1j * self.gamma_s * self.omega_p**2 / (
            2 * omega * (omega - 1j * self.gamma_s) ** 2
        )

    @property
    def quasistatic_dipole_frequency(self) -> float:
        """Small-sphere dipole resonance w_p / sqrt(eps_inf + 2) in vacuum."""
        return self.omega_p / np.sqrt(self.eps_inf + 2.0)


@dataclass(frozen=True)
class Background:
    """Non-dispersive host medium with constant permittivity eps_out."""

    eps_out: float = 1.0

    def __post_init__(self):
        if self.eps_out <= 0:
            raise ValueError(f"eps_out must be positive, got {self.eps_out}")
        if self.eps_out < 1.0:
            warnings.warn(
                f"eps_out = {self.eps_out} < 1 is unphysical for a passive host",
                stacklevel=2,
            )

    def eps(self, omega: complex) -> complex:
        return complex(self.eps_out)

    def sigma(self, omega: complex) -> complex:
        # dispersionless: (1/2w) d/dw [w^2 eps] = eps
        return complex(self.eps_out)


def eps_in(material: DrudeMaterial, omega: complex) -> complex:
    """Interior permittivity of the particle material at omega."""
    return material.eps(omega)


def sigma(medium: DrudeMaterial | Background, omega: complex) -> complex:
    """Modified dielectric function of a material or background."""
    return medium.sigma(omega)


def wavenumbers(
    material: DrudeMaterial,
    background: Background,
    omega: complex,
    units: UnitSystem = UNITS,
) -> tuple[complex, complex]:
    """(k_in, k_out) in 1/nm at complex frequency omega (eV)."""
    return (
        units.wavenumber(omega, material.eps(omega)),
        units.wavenumber(omega, background.eps(omega)),
    )


def load_presets(path: str | Path | None = None) -> dict[str, DrudeMaterial]:
    """Material presets from a TOML file (built-in table when path is None).

    Each table must provide ``eps_inf``, ``omega_p_eV`` and ``gamma_s_eV``.
    """
    if path is None:
        source = importlib.resources.files("plasmonchain.data") / "materials.toml"
        text = source.read_text()
    else:
        text = Path(path).read_text()
    raw = tomllib.loads(text)
    presets = {}
    for name, fields in raw.items():
        try:
            presets[name] = DrudeMaterial(
                eps_inf=float(fields["eps_inf"]),
                omega_p=float(fields["omega_p_eV"]),
                gamma_s=float(fields["gamma_s_eV"]),
            )
        except KeyError as exc:
            raise ValueError(f"preset {name!r} is missing field {exc}") from exc
    return presets


def get_preset(name: str, path: str | Path | None = None) -> DrudeMaterial:
    """Look up one material preset by name."""
    presets = load_presets(path)
    if name not in presets:
        known = ", ".join(sorted(presets))
        raise KeyError(f"unknown material preset {name!r} (known: {known})")
    return presets[name]
