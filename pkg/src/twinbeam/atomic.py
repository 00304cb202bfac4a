"""Microscopic double-lambda response of the four-wave-mixing medium.

Four atomic levels: two ground states split by the hyperfine frequency
and two excited states.  A single strong pump couples the lower ground
state to one excited state (detuned by the one-photon detuning) and
the upper ground state to the other (detuned further by the hyperfine
splitting).  The probe and conjugate sidebands close the two Raman
legs, so one four-wave-mixing cycle moves an atom lower ground ->
excited -> upper ground -> other excited -> lower ground while
emitting one probe and one conjugate photon.

The pump-dressed steady state of the Lindblad generator is computed
exactly; weak sidebands are then treated in linear response, which
yields a complex 2x2 generator per unit medium length for the
co-propagating pair (probe annihilation, conjugate creation).  The
slab machinery in `propagation` turns that generator into classical
gain curves and quantum noise output.

The probe gain curve shows a deep Raman absorption dip at negative
two-photon detuning; the pump light shift moves the dip by roughly
(Omega^2/4)(1/(Delta + hyperfine) - 1/Delta), so the dip position
scales with pump power.  Near the dip there is a two-photon detuning
where the output flux equals the input flux although both gains are
far from unity: the medium acts there as a correlated beam splitter.

All public frequencies are angular (rad/s); internally everything is
normalized by the excited-state decay rate.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.constants import Boltzmann, atmosphere
from scipy.linalg import expm
from scipy.optimize import brentq

from . import propagation
from .configio import ConfigError, angular_from_mhz, section_float

__all__ = [
    "AtomicParams",
    "CouplingMatrix",
    "GainCurve",
    "BeamSplitterPoint",
    "DegenerateSteadyStateError",
    "ResponseSingularError",
    "NoCrossingError",
    "steady_state",
    "liouvillian",
    "sideband_response",
    "gain_curves",
    "pair_output",
    "find_raman_dip",
    "find_beam_splitter_point",
    "vapor_density",
    "optical_depth",
    "params_from_mapping",
]

TWO_PI = 2.0 * np.pi


class DegenerateSteadyStateError(RuntimeError):
    """The Lindblad generator has no unique steady state."""


class ResponseSingularError(RuntimeError):
    """The sideband linear system is singular at this detuning."""


class NoCrossingError(RuntimeError):
    """No flux-neutral point in the scanned detuning window."""


@dataclass(frozen=True)
class AtomicParams:
    """Pump-dressed four-level medium parameters.

    one_photon_detuning is the pump detuning from the lower-ground
    transition, two_photon_detuning the additional Raman mismatch of
    the probe.  All rates and detunings are angular frequencies;
    depth is the dimensionless resonant optical depth of the medium.
    Defaults give the rubidium D1 configuration of the reference
    gain-curve calculation.
    """

    one_photon_detuning: float = TWO_PI * 800e6
    two_photon_detuning: float = 0.0
    rabi_frequency: float = TWO_PI * 420e6
    excited_decay_rate: float = TWO_PI * 5.75e6
    ground_decoherence: float = TWO_PI * 1e4
    depth: float = 500.0
    hyperfine_splitting: float = TWO_PI * 3.036e9

    def __post_init__(self):
        if self.excited_decay_rate <= 0.0:
            raise ValueError(
                f"excited-state decay rate must be positive, got {self.excited_decay_rate}"
            )
        if self.rabi_frequency < 0.0:
            raise ValueError(f"Rabi frequency must be nonnegative, got {self.rabi_frequency}")
        if self.ground_decoherence < 0.0:
            raise ValueError(
                f"ground decoherence rate must be nonnegative, got {self.ground_decoherence}"
            )
        if self.depth < 0.0:
            raise ValueError(f"optical depth must be nonnegative, got {self.depth}")
        if self.hyperfine_splitting < 0.0:
            raise ValueError(
                f"hyperfine splitting must be nonnegative, got {self.hyperfine_splitting}"
            )


@dataclass(frozen=True)
class CouplingMatrix:
    """Local sideband generator per unit normalized medium length.

    matrix acts on the fluctuation vector (da, da^dag, db, db^dag);
    the daggered rows are complex conjugates of their partners, so the
    physics lives in the closed (da, db^dag) pair returned by
    pair_block.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"coupling matrix must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pair_block(cls, block: np.ndarray) -> "CouplingMatrix":
        b = np.asarray(block, dtype=complex)
        if b.shape != (2, 2):
            raise ValueError(f"pair block must be 2x2, got {b.shape}")
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[0, 3] = b[0, 0], b[0, 1]
        m[3, 0], m[3, 3] = b[1, 0], b[1, 1]
        m[1, 1], m[1, 2] = np.conj(b[0, 0]), np.conj(b[0, 1])
        m[2, 1], m[2, 2] = np.conj(b[1, 0]), np.conj(b[1, 1])
        return cls(m)

    @property
    def pair_block(self) -> np.ndarray:
        """2x2 generator for (da, db^dag)."""
        m = self.matrix
        return np.array([[m[0, 0], m[0, 3]], [m[3, 0], m[3, 3]]])

    def conjugation_defect(self) -> float:
        """Max deviation from the daggered-row conjugation symmetry."""
        canonical = CouplingMatrix.from_pair_block(self.pair_block).matrix
        return float(np.max(np.abs(self.matrix - canonical)))


@dataclass(frozen=True)
class GainCurve:
    """Classical probe/conjugate gains over a two-photon detuning grid."""

    delta: np.ndarray
    probe_gain: np.ndarray
    conj_gain: np.ndarray

    def __post_init__(self):
        d = np.array(self.delta, dtype=float)
        pa = np.array(self.probe_gain, dtype=float)
        pb = np.array(self.conj_gain, dtype=float)
        if not (d.shape == pa.shape == pb.shape) or d.ndim != 1:
            raise ValueError("gain curve arrays must be 1-d and congruent")
        for arr in (d, pa, pb):
            arr.setflags(write=False)
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "probe_gain", pa)
        object.__setattr__(self, "conj_gain", pb)

    @property
    def sum_transmission(self) -> np.ndarray:
        return self.probe_gain + self.conj_gain


@dataclass(frozen=True)
class BeamSplitterPoint:
    """Flux-neutral operating point and the twin-beam metrics there."""

    delta: float
    probe_gain: float
    conj_gain: float
    gemellity: float
    gemellity_db: float


# basis: 0 = upper ground (probe leg), 1 = lower ground (pump leg),
#        2 = excited shared by pump and probe, 3 = excited shared by
#        pump and conjugate.  All entries in decay-rate units.
def _hamiltonian(p: AtomicParams) -> np.ndarray:
    g = p.excited_decay_rate
    delta = p.two_photon_detuning / g
    big_delta = p.one_photon_detuning / g
    hf = p.hyperfine_splitting / g
    rabi = p.rabi_frequency / g
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = -delta
    h[2, 2] = -big_delta
    h[3, 3] = -(big_delta + hf + delta)
    h[2, 1] = h[1, 2] = -rabi / 2.0
    h[3, 0] = h[0, 3] = -rabi / 2.0
    return h


def _collapse_operators(p: AtomicParams) -> list[np.ndarray]:
    ops = []
    for excited in (2, 3):
        for ground in (0, 1):
            op = np.zeros((4, 4))
            op[ground, excited] = 1.0
            ops.append(np.sqrt(0.5) * op)  # Gamma/2 branching per ground state
    exchange = np.sqrt(p.ground_decoherence / p.excited_decay_rate)
    for i, j in ((0, 1), (1, 0)):
        op = np.zeros((4, 4))
        op[i, j] = 1.0
        ops.append(exchange * op)
    return ops


def liouvillian(p: AtomicParams) -> np.ndarray:
    """16x16 Lindblad generator, column-stacked, in decay-rate units."""
    h = _hamiltonian(p)
    eye = np.eye(4)
    gen = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op in _collapse_operators(p):
        opdop = op.conj().T @ op
        gen += np.kron(op.conj(), op)
        gen -= 0.5 * (np.kron(eye, opdop) + np.kron(opdop.T, eye))
    return gen


def steady_state(p: AtomicParams) -> np.ndarray:
    """Unique trace-one stationary density matrix of the dressed atom.

    Raises DegenerateSteadyStateError when the generator's nullspace
    is not one-dimensional (for example with the pump off and no
    ground-state relaxation) instead of silently picking a vector.
    """
    gen = liouvillian(p)
    _, sing, vh = np.linalg.svd(gen)
    if sing[-2] <= 1e-10 * sing[0]:
        raise DegenerateSteadyStateError(
            "stationary space is degenerate "
            f"(second singular value {sing[-2]:.2e} of {sing[0]:.2e})"
        )
    rho = vh[-1].conj().reshape((4, 4), order="F")
    trace = np.trace(rho)
    if abs(trace) < 1e-8:
        raise DegenerateSteadyStateError("stationary vector is traceless")
    rho = rho / trace
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.linalg.norm(gen @ rho.reshape(16, order="F"))
    if residual > 1e-10 * max(1.0, sing[0]):
        raise DegenerateSteadyStateError(
            f"stationary residual {residual:.2e} exceeds tolerance"
        )
    return rho


# The sideband coherences driven by the probe and conjugate fields
# span a four-dimensional subspace that the full generator maps into
# itself: (row, column) slots (1,0), (2,0), (1,3), (2,3) in the level
# basis above.  Solving inside that subspace is exact and keeps the
# per-detuning cost at a 4x4 solve.
_SECTOR_SLOTS = ((1, 0), (2, 0), (1, 3), (2, 3))
_SECTOR_INDICES = tuple(row + 4 * col for row, col in _SECTOR_SLOTS)


def sideband_response(p: AtomicParams, analysis_offset: float = 0.0) -> CouplingMatrix:
    """Linear response of the dressed atom to weak probe/conjugate fields.

    analysis_offset is the angular sideband frequency relative to the
    nominal probe/conjugate pair; zero gives the quasi-static response
    that sets the gain curves.  The returned generator is scaled by
    the optical depth and applies per unit normalized medium length.
    """
    gamma = p.excited_decay_rate
    rho0 = steady_state(p)
    gen = liouvillian(p)
    sector = np.ix_(_SECTOR_INDICES, _SECTOR_INDICES)
    system = gen[sector] + 1j * (analysis_offset / gamma) * np.eye(4)
    if np.linalg.cond(system) > 1e12:
        raise ResponseSingularError(
            "sideband response singular at two-photon detuning "
            f"{p.two_photon_detuning:.6e} rad/s"
        )

    probe_drive = np.zeros((4, 4))
    probe_drive[2, 0] = -0.5  # lowers probe photon into the upper-ground coherence
    conj_drive = np.zeros((4, 4))
    conj_drive[1, 3] = -0.5

    scale = p.depth / 2.0
    block = np.zeros((2, 2), dtype=complex)
    for col, drive in enumerate((probe_drive, conj_drive)):
        source = -1j * (drive @ rho0 - rho0 @ drive)
        rhs = -source.reshape(16, order="F")[list(_SECTOR_INDICES)]
        solution = np.linalg.solve(system, rhs)
        block[0, col] = 1j * scale * solution[_SECTOR_SLOTS.index((2, 0))]
        block[1, col] = -1j * scale * solution[_SECTOR_SLOTS.index((1, 3))]
    return CouplingMatrix.from_pair_block(block)


def _classical_gains(p: AtomicParams) -> tuple[float, float]:
    # transfer of the mean fields over the full medium length
    e = expm(sideband_response(p).pair_block)
    return float(abs(e[0, 0]) ** 2), float(abs(e[1, 0]) ** 2)


def gain_curves(
    p: AtomicParams, delta_grid: np.ndarray, n_slabs: int = 256
) -> GainCurve:
    """Probe and conjugate gains per unit probe seed across a detuning grid.

    Each point runs the local generator through the slab propagator,
    so the same covariance that carries the quantum noise also
    delivers the classical gains.
    """
    grid = np.asarray(delta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("detuning grid must be a nonempty 1-d array")
    if not np.all(np.isfinite(grid)):
        raise ValueError("detuning grid must be finite")
    probe = np.empty_like(grid)
    conj = np.empty_like(grid)
    for i, delta in enumerate(grid):
        point = dataclasses.replace(p, two_photon_detuning=float(delta))
        response = sideband_response(point)
        result = propagation.propagate_coupling(response.pair_block, n_slabs=n_slabs)
        probe[i] = result.g_a
        conj[i] = result.g_b
    return GainCurve(grid.copy(), probe, conj)


def pair_output(
    p: AtomicParams,
    n_slabs: int = 2048,
    analysis_offset: float = 0.0,
) -> propagation.PropagationResult:
    """Full quantum output of the medium at one operating point."""
    response = sideband_response(p, analysis_offset)
    return propagation.propagate_coupling(response.pair_block, n_slabs=n_slabs)


_DEFAULT_WINDOW = (-TWO_PI * 150e6, TWO_PI * 50e6)


def find_raman_dip(
    p: AtomicParams,
    window: tuple[float, float] = _DEFAULT_WINDOW,
    n_scan: int = 251,
) -> tuple[float, float]:
    """Locate the probe-absorption dip: (detuning, probe gain) at the minimum."""
    grid = np.linspace(window[0], window[1], n_scan)
    gains = [
        _classical_gains(dataclasses.replace(p, two_photon_detuning=float(d)))[0]
        for d in grid
    ]
    i = int(np.argmin(gains))
    return float(grid[i]), float(gains[i])


def find_beam_splitter_point(
    p: AtomicParams,
    window: tuple[float, float] = _DEFAULT_WINDOW,
    n_scan: int = 251,
    n_slabs: int = 2048,
) -> BeamSplitterPoint:
    """Root-find the detuning where output flux equals the probe input.

    Scans the window, takes the flux-balance crossing adjacent to the
    Raman dip (below it when one exists there, else the nearest one
    above), polishes it with a bracketed root solve, and evaluates the
    quantum metrics at the polished point.  Raises NoCrossingError
    when the window contains no sign change of the flux balance.
    """
    if not window[0] < window[1]:
        raise ValueError(f"window must be increasing, got {window}")
    grid = np.linspace(window[0], window[1], n_scan)
    probe = np.empty(n_scan)
    balance = np.empty(n_scan)
    for i, d in enumerate(grid):
        ga, gb = _classical_gains(dataclasses.replace(p, two_photon_detuning=float(d)))
        probe[i] = ga
        balance[i] = ga + gb - 1.0
    crossings = np.nonzero(balance[:-1] * balance[1:] < 0.0)[0]
    if crossings.size == 0:
        raise NoCrossingError(
            "no flux-neutral crossing in the window "
            f"[{grid[0]:.6e}, {grid[-1]:.6e}] rad/s"
        )
    dip = int(np.argmin(probe))
    below = crossings[crossings < dip]
    bracket = int(below[-1]) if below.size else int(crossings[0])

    def flux_balance(delta: float) -> float:
        ga, gb = _classical_gains(dataclasses.replace(p, two_photon_detuning=delta))
        return ga + gb - 1.0

    delta_star = float(
        brentq(flux_balance, grid[bracket], grid[bracket + 1], xtol=TWO_PI * 1e3)
    )
    point = dataclasses.replace(p, two_photon_detuning=delta_star)
    result = pair_output(point, n_slabs=n_slabs)
    return BeamSplitterPoint(
        delta=delta_star,
        probe_gain=result.g_a,
        conj_gain=result.g_b,
        gemellity=result.gemellity,
        gemellity_db=result.gemellity_db,
    )


def vapor_density(t_celsius: float) -> float:
    """Saturated rubidium number density in atoms per cubic centimeter.

    Standard liquid-phase vapor-pressure correlation,
    log10(p/atm) = 4.312 - 4040/T.  Valid for cell temperatures
    between 20 and 200 Celsius.
    """
    if not 20.0 <= t_celsius <= 200.0:
        raise ValueError(
            f"temperature {t_celsius} C outside the correlation range [20, 200] C"
        )
    t_kelvin = t_celsius + 273.15
    pressure = atmosphere * 10.0 ** (4.312 - 4040.0 / t_kelvin)
    return pressure / (Boltzmann * t_kelvin) * 1e-6


def optical_depth(density: float, cross_section: float, length: float) -> float:
    """Dimensionless depth = density (cm^-3) x cross section (cm^2) x length (cm)."""
    return density * cross_section * length


_PARAM_KEYS = {
    "delta_MHz": ("two_photon_detuning", angular_from_mhz),
    "Delta_MHz": ("one_photon_detuning", angular_from_mhz),
    "Omega_MHz": ("rabi_frequency", angular_from_mhz),
    "Gamma_MHz": ("excited_decay_rate", angular_from_mhz),
    "gamma_g_kHz": ("ground_decoherence", lambda v: TWO_PI * v * 1e3),
    "depth": ("depth", float),
    "hyperfine_MHz": ("hyperfine_splitting", angular_from_mhz),
}


def params_from_mapping(mapping: dict, section: str = "atomic") -> AtomicParams:
    """Build AtomicParams from parsed config keys; absent keys keep defaults."""
    unknown = set(mapping) - set(_PARAM_KEYS)
    if unknown:
        raise ConfigError(
            f"unknown keys in [{section}]: {', '.join(sorted(unknown))}"
        )
    kwargs = {}
    for key, (field, convert) in _PARAM_KEYS.items():
        if key in mapping:
            kwargs[field] = convert(section_float(mapping, section, key))
    try:
        return AtomicParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid [{section}] parameters: {exc}") from exc
