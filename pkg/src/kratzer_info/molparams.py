"""Molecular parameters: data-file ingest, unit conversion, potential parameters.

The molecule file is whitespace-separated text with ``#`` comments.  Each
data line holds ``name mu D0 r0 [term symbol]`` with the reduced mass in
units of 1e-23 g, the dissociation energy in cm^-1 and the equilibrium
separation in Angstrom.
"""

from __future__ import annotations

import enum
import hashlib
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

__all__ = [
    "BOHR_PER_ANGSTROM",
    "HARTREE_PER_WAVENUMBER",
    "ATOMIC_MASS_CONSTANT_G",
    "ELECTRON_MASSES_PER_AMU",
    "MOLECULE_FILE_ENV",
    "MoleculeFileError",
    "SpectroscopicRecord",
    "MoleculeSpec",
    "PotentialForm",
    "PotentialParams",
    "load_molecules",
    "bundled_molecules",
    "default_molecule_file",
    "to_atomic_units",
    "from_atomic_units",
    "potential_params",
    "constants_digest",
]

# CODATA 2018
BOHR_PER_ANGSTROM = 1.889726124565062
HARTREE_PER_WAVENUMBER = 4.556335252912e-6
ATOMIC_MASS_CONSTANT_G = 1.66053906660e-24
ELECTRON_MASSES_PER_AMU = 1822.888486209

MU_UNIT_G = 1e-23

MOLECULE_FILE_ENV = "KRATZER_INFO_MOLECULES"


class MoleculeFileError(ValueError):
    """Malformed molecule data file."""


@dataclass(frozen=True)
class SpectroscopicRecord:
    name: str
    mu_grams: float  # units of 1e-23 g
    D0_wavenumber: float
    r0_angstrom: float
    term_symbol: str = ""

    def __post_init__(self):
        for field in ("mu_grams", "D0_wavenumber", "r0_angstrom"):
            if not getattr(self, field) > 0:
                raise ValueError(f"{self.name}: {field} must be positive")


@dataclass(frozen=True)
class MoleculeSpec:
    """A molecule in atomic units: mu in electron masses, D0 in Hartree, r0 in Bohr."""

    name: str
    mu: float
    D0: float
    r0: float


class PotentialForm(enum.Enum):
    KRATZER_FUES = "kratzer-fues"
    MIE = "mie"


@dataclass(frozen=True)
class PotentialParams:
    """Coefficients of v(r) = x/r + y/r**2 + z."""

    x: float
    y: float
    z: float
    form: PotentialForm | None = None


def load_molecules(path: str | os.PathLike) -> list[SpectroscopicRecord]:
    path = Path(path)
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) < 4:
                raise MoleculeFileError(
                    f"{path}:{lineno}: expected 'name mu D0 r0', got {raw.strip()!r}")
            try:
                mu, d0, r0 = (float(v) for v in fields[1:4])
            except ValueError as exc:
                raise MoleculeFileError(f"{path}:{lineno}: {exc}") from None
            if not (mu > 0 and d0 > 0 and r0 > 0):
                raise MoleculeFileError(f"{path}:{lineno}: values must be positive")
            term = " ".join(fields[4:])
            records.append(SpectroscopicRecord(fields[0], mu, d0, r0, term))
    return records


def default_molecule_file() -> Path:
    """The file named by ``$KRATZER_INFO_MOLECULES``, else the bundled table."""
    override = os.environ.get(MOLECULE_FILE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("kratzer_info") / "data" / "molecules.dat"))


def bundled_molecules() -> list[SpectroscopicRecord]:
    return load_molecules(default_molecule_file())


def to_atomic_units(rec: SpectroscopicRecord) -> MoleculeSpec:
    mu = rec.mu_grams * MU_UNIT_G / ATOMIC_MASS_CONSTANT_G * ELECTRON_MASSES_PER_AMU
    return MoleculeSpec(
        name=rec.name,
        mu=mu,
        D0=rec.D0_wavenumber * HARTREE_PER_WAVENUMBER,
        r0=rec.r0_angstrom * BOHR_PER_ANGSTROM,
    )


def from_atomic_units(spec: MoleculeSpec, term_symbol: str = "") -> SpectroscopicRecord:
    """Inverse of :func:`to_atomic_units`."""
    return SpectroscopicRecord(
        name=spec.name,
        mu_grams=spec.mu / ELECTRON_MASSES_PER_AMU * ATOMIC_MASS_CONSTANT_G / MU_UNIT_G,
        D0_wavenumber=spec.D0 / HARTREE_PER_WAVENUMBER,
        r0_angstrom=spec.r0 / BOHR_PER_ANGSTROM,
        term_symbol=term_symbol,
    )


def potential_params(spec: MoleculeSpec, form: PotentialForm = PotentialForm.MIE) -> PotentialParams:
    x = -2.0 * spec.D0 * spec.r0
    y = spec.D0 * spec.r0**2
    z = spec.D0 if form is PotentialForm.MIE else 0.0
    return PotentialParams(x, y, z, form)


def constants_digest() -> str:
    """Short hash of the conversion constants, for output provenance."""
    text = repr((BOHR_PER_ANGSTROM, HARTREE_PER_WAVENUMBER,
                 ATOMIC_MASS_CONSTANT_G, ELECTRON_MASSES_PER_AMU))
    return hashlib.sha256(text.encode()).hexdigest()[:12]
