"""Composite pulse synthesis for SU(2) gates.

A pulse sequence is an ordered list of hard (rectangular) pulses, each a
rotation by theta_i about an axis (cos phi_i, sin phi_i, 0) in the xy-plane,
applied left to right in time.  Every synthesizer declares a target gate and
guarantees that the ideal product of its pulses reproduces that target.

Shipped families:

- ``plain``        one pulse, no error compensation;
- ``corpse``       3 pulses, cancels the off-resonance error to first order;
- ``scrofulous``   3 pulses, cancels the pulse-length error to first order;
- ``cis_cccp``     9 pulses, a SCROFULOUS whose pulses are each replaced by a
                   CORPSE; cancels both errors simultaneously;
- ``bb1``          4 pulses (target plus an identity-valued compensation
                   block), cancels the pulse-length error;
- ``alway_jones``  8 pulses, cancels both errors but only implements pi
                   rotations;
- ``scrofulous_in_corpse``  the reverse concatenation (three SCROFULOUS
                   blocks composing a CORPSE); ships as a negative control,
                   it does NOT cancel the off-resonance error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .su2 import IDENTITY2, fidelity, rotation

__all__ = [
    "SynthesisError",
    "WindingError",
    "Pulse",
    "PulseSequence",
    "FAMILIES",
    "plain",
    "corpse",
    "scrofulous",
    "cis_cccp",
    "bb1",
    "alway_jones",
    "scrofulous_in_corpse",
    "reduce_pi_pulse_product",
    "sequence_to_dict",
    "sequence_from_dict",
]

TWO_PI = 2 * np.pi

# Location of the first positive minimum of sin(x)/x; right edge of the
# bracket used for the SCROFULOUS angle equation.
_SINC_ARGMIN = 4.4934094579090641

FAMILIES = (
    "plain",
    "corpse",
    "scrofulous",
    "cis-cccp",
    "bb1",
    "alway-jones",
    "scrofulous-in-corpse",
    "custom",
)


class SynthesisError(RuntimeError):
    """Raised when a numerical synthesis step fails to converge."""


class WindingError(ValueError):
    """Raised when winding numbers produce a negative segment angle or
    violate a family constraint."""


@dataclass(frozen=True)
class Pulse:
    """One hard pulse: rotation by ``theta`` about azimuth ``phi`` in the xy-plane."""

    theta: float
    phi: float

    def __post_init__(self):
        if not np.isfinite(self.theta) or not np.isfinite(self.phi):
            raise ValueError("pulse angles must be finite")
        if self.theta < 0:
            raise ValueError(f"pulse angle must be nonnegative, got {self.theta}")
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def vector(self) -> np.ndarray:
        """Rotation vector theta * (cos phi, sin phi, 0)."""
        return np.array([self.theta * np.cos(self.phi), self.theta * np.sin(self.phi), 0.0])

    def unitary(self) -> np.ndarray:
        return rotation(self.vector)


@dataclass(frozen=True, eq=False)
class PulseSequence:
    """An ordered pulse list with its declared target gate.

    ``pulses[0]`` is applied first, so the ideal propagator is
    R(m_k) ... R(m_1).  ``theta``/``phi``/``winding`` record the synthesis
    parameters when the sequence came from a synthesizer.
    """

    family: str
    pulses: tuple[Pulse, ...]
    target: np.ndarray
    theta: float | None = None
    phi: float | None = None
    winding: tuple[int, int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        object.__setattr__(self, "target", np.asarray(self.target, dtype=complex))

    def __len__(self) -> int:
        return len(self.pulses)

    def vectors(self) -> list[np.ndarray]:
        """Rotation vectors of all pulses, in application order."""
        return [p.vector for p in self.pulses]

    def propagator(self) -> np.ndarray:
        """Ideal (error-free) product of all pulses."""
        U = IDENTITY2.copy()
        for p in self.pulses:
            U = p.unitary() @ U
        return U


def _xy_target(theta: float, phi: float) -> np.ndarray:
    return rotation([theta * np.cos(phi), theta * np.sin(phi), 0.0])


def _check_product(seq: PulseSequence, tol: float = 1e-12) -> PulseSequence:
    f = fidelity(seq.propagator(), seq.target)
    if f < 1 - tol:
        raise SynthesisError(
            f"{seq.family} synthesis produced a product with fidelity {f!r} to its target"
        )
    return seq


def plain(theta: float, phi: float = 0.0) -> PulseSequence:
    """Single uncompensated pulse implementing the rotation (theta, phi)."""
    pulse = Pulse(theta, phi)
    return _check_product(
        PulseSequence("plain", (pulse,), _xy_target(theta, phi), theta=theta, phi=phi)
    )


def corpse_angles(theta: float, winding: tuple[int, int, int]) -> tuple[float, float, float]:
    """Segment angles of a CORPSE decomposition of a rotation by ``theta``.

    With kappa = arcsin(sin(theta/2) / 2):

        theta_1 = theta/2 - kappa + 2 pi n1
        theta_2 =        -2 kappa + 2 pi n2
        theta_3 = theta/2 - kappa + 2 pi n3

    Raises WindingError if any segment angle comes out negative.
    """
    kappa = np.arcsin(np.sin(theta / 2) / 2)
    n1, n2, n3 = winding
    angles = (
        theta / 2 - kappa + TWO_PI * n1,
        -2 * kappa + TWO_PI * n2,
        theta / 2 - kappa + TWO_PI * n3,
    )
    for i, a in enumerate(angles, start=1):
        if a < 0:
            raise WindingError(
                f"CORPSE segment angle theta_{i} = {a:.6f} is negative; "
                f"increase winding number n{i}"
            )
    return angles


def corpse(theta: float, phi: float = 0.0, winding: tuple[int, int, int] = (1, 2, 1)) -> PulseSequence:
    """CORPSE: three collinear pulses cancelling the off-resonance error.

    The middle pulse is applied along the reversed axis (phi + pi).  Any
    integer winding with all segment angles nonnegative is accepted; the
    default (1, 2, 1) is the standard long CORPSE.  Windings with
    n1 - n2 + n3 = 0 leave a residual first-order error exactly equal to the
    pulse-length error of the target rotation itself, which is what the
    concatenated sequence :func:`cis_cccp` relies on.

    For odd n1 + n2 + n3 the product equals minus the target; the gate is the
    same up to global phase.
    """
    if not 0 <= theta <= TWO_PI:
        raise ValueError(f"CORPSE rotation angle must lie in [0, 2*pi], got {theta}")
    a1, a2, a3 = corpse_angles(theta, winding)
    pulses = (Pulse(a1, phi), Pulse(a2, phi + np.pi), Pulse(a3, phi))
    return _check_product(
        PulseSequence("corpse", pulses, _xy_target(theta, phi), theta=theta, phi=phi,
                      winding=tuple(winding))
    )


def _scrofulous_params(theta: float, phi: float) -> tuple[float, float, float]:
    """Solve the SCROFULOUS constraints for (theta_1, phi_1, phi_2).

    The outer pulses share (theta_1, phi_1); the middle pulse is a pi pulse
    at phi_2 with theta_1 * cos(phi_1 - phi_2) = -pi/2.  Eliminating phi_2
    through that constraint and matching the product to the target reduces
    the angle to the transcendental equation

        sin(theta_1) / theta_1 = (2/pi) * cos(theta/2),

    solved by bracketed bisection on (0, argmin sinc), after which

        phi_1 = phi + arccos(-pi cos(theta_1) / (2 theta_1 sin(theta/2)))
        phi_2 = phi_1 - arccos(-pi / (2 theta_1)).

    The arccos branch for phi_1 picks the root with phi_1 - phi in (0, pi);
    the mirror solution (phi -> 2 phi - phi_i) is equally valid.  A damped
    Gauss-Newton pass then polishes (theta_1, phi_1) to product residual
    below 1e-12.
    """
    rhs = (2 / np.pi) * np.cos(theta / 2)
    try:
        th1 = brentq(lambda t: np.sinc(t / np.pi) - rhs, 1e-9, _SINC_ARGMIN, xtol=1e-14)
    except ValueError as exc:
        raise SynthesisError(
            f"SCROFULOUS angle equation sin(t)/t = {rhs:.6f} has no root for "
            f"theta = {theta:.6f}; the family only covers rotations up to about 3.83 rad"
        ) from exc
    sin_half = np.sin(theta / 2)
    ph1 = phi + np.arccos(np.clip(-np.pi * np.cos(th1) / (2 * th1 * sin_half), -1.0, 1.0))

    target = _xy_target(theta, phi)

    def residual(x: np.ndarray) -> np.ndarray:
        t1, p1 = x
        if t1 < np.pi / 2 or t1 > TWO_PI:
            return np.full(3, 2.0)
        p2 = p1 - np.arccos(np.clip(-np.pi / (2 * t1), -1.0, 1.0))
        U = rotation([t1 * np.cos(p1), t1 * np.sin(p1), 0.0])
        U = rotation([np.pi * np.cos(p2), np.pi * np.sin(p2), 0.0]) @ U
        U = rotation([t1 * np.cos(p1), t1 * np.sin(p1), 0.0]) @ U
        A = target.conj().T @ U
        # A = alpha I - i beta . sigma; at the solution beta = 0, alpha = +1.
        beta = np.array([-(A[0, 1].imag + A[1, 0].imag),
                         (A[1, 0] - A[0, 1]).real,
                         A[1, 1].imag - A[0, 0].imag]) / 2
        if A.trace().real < 0:
            return np.full(3, 2.0)
        return beta

    x = np.array([th1, ph1])
    r = residual(x)
    for _ in range(100):
        if np.linalg.norm(r) <= 1e-12:
            break
        jac = np.empty((3, 2))
        h = 1e-7
        for k in range(2):
            dx = np.zeros(2)
            dx[k] = h
            jac[:, k] = (residual(x + dx) - residual(x - dx)) / (2 * h)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        lam = 1.0
        while lam > 1e-6:
            x_new = x + lam * step
            r_new = residual(x_new)
            if np.linalg.norm(r_new) < np.linalg.norm(r):
                x, r = x_new, r_new
                break
            lam /= 2
        else:
            break
    if np.linalg.norm(r) > 1e-12:
        raise SynthesisError(
            f"SCROFULOUS refinement stalled at residual {np.linalg.norm(r):.3e} "
            f"for theta = {theta:.6f}, phi = {phi:.6f}"
        )
    th1, ph1 = x
    ph2 = ph1 - np.arccos(np.clip(-np.pi / (2 * th1), -1.0, 1.0))
    return float(th1), float(ph1), float(ph2)


def scrofulous(theta: float, phi: float = 0.0) -> PulseSequence:
    """SCROFULOUS: a pi pulse sandwiched between two identical pulses.

    Cancels the pulse-length error to first order.  Solvable for rotation
    angles up to about 3.83 rad; beyond that SynthesisError is raised.
    """
    if not 0 < theta < TWO_PI:
        raise ValueError(f"SCROFULOUS rotation angle must lie in (0, 2*pi), got {theta}")
    th1, ph1, ph2 = _scrofulous_params(theta, phi)
    pulses = (Pulse(th1, ph1), Pulse(np.pi, ph2), Pulse(th1, ph1))
    return _check_product(
        PulseSequence("scrofulous", pulses, _xy_target(theta, phi), theta=theta, phi=phi)
    )


def _validate_cccp_winding(winding: tuple[int, int, int]):
    n1, n2, n3 = winding
    if n1 - n2 + n3 != 0:
        raise WindingError(
            f"concatenation requires winding numbers with n1 - n2 + n3 = 0, got {winding}; "
            "otherwise the constituent residual is not a pure pulse-length error"
        )


def cis_cccp(theta: float, phi: float = 0.0, winding: tuple[int, int, int] = (1, 1, 0)) -> PulseSequence:
    """CORPSE-in-SCROFULOUS concatenation: robust against both errors.

    Each of the three SCROFULOUS pulses is replaced by a CORPSE with the
    given winding (shared by all three constituents).  The winding must
    satisfy n1 - n2 + n3 = 0 so that each CORPSE's residual first-order
    error is exactly the pulse-length error of its own target, which the
    outer SCROFULOUS structure then cancels.
    """
    _validate_cccp_winding(winding)
    th1, ph1, ph2 = _scrofulous_params(theta, phi)
    pulses: list[Pulse] = []
    for t, p in ((th1, ph1), (np.pi, ph2), (th1, ph1)):
        a1, a2, a3 = corpse_angles(t, winding)
        pulses += [Pulse(a1, p), Pulse(a2, p + np.pi), Pulse(a3, p)]
    return _check_product(
        PulseSequence("cis-cccp", tuple(pulses), _xy_target(theta, phi), theta=theta, phi=phi,
                      winding=tuple(winding)),
        tol=1e-11,
    )


def bb1(theta: float, phi: float = 0.0) -> PulseSequence:
    """BB1: target pulse followed by an identity-valued compensation block.

    The block is pi, 2*pi, pi at azimuths (phi + c, phi + 3c, phi + c) with
    c = arccos(-theta / (4*pi)); it multiplies to exactly +I at zero error
    and cancels the pulse-length error of the target pulse to first order.
    """
    if not 0 < theta <= TWO_PI:
        raise ValueError(f"BB1 rotation angle must lie in (0, 2*pi], got {theta}")
    c = np.arccos(-theta / (4 * np.pi))
    pulses = (
        Pulse(theta, phi),
        Pulse(np.pi, phi + c),
        Pulse(2 * np.pi, phi + 3 * c),
        Pulse(np.pi, phi + c),
    )
    return _check_product(
        PulseSequence("bb1", pulses, _xy_target(theta, phi), theta=theta, phi=phi)
    )


def alway_jones(phi_axis: float = 0.0) -> PulseSequence:
    """Eight-pulse pi rotation robust against both errors.

    Applies the bare pi pulse, then a 3-pulse block compensating the
    pulse-length error (the BB1 block) and a 4-pulse block compensating the
    off-resonance error.  Both blocks multiply to +I at zero error.  The
    construction only exists for rotation angle pi; the axis is free.
    """
    c = np.arccos(-0.25)
    relative = (
        (np.pi, 0.0),
        (np.pi, c),
        (2 * np.pi, 3 * c),
        (np.pi, c),
        (np.pi, np.pi - c),
        (np.pi, -c),
        (np.pi, np.pi + c),
        (np.pi, c),
    )
    pulses = tuple(Pulse(t, p + phi_axis) for t, p in relative)
    return _check_product(
        PulseSequence("alway-jones", pulses, _xy_target(np.pi, phi_axis),
                      theta=np.pi, phi=phi_axis)
    )


def scrofulous_in_corpse(theta: float, phi: float = 0.0) -> PulseSequence:
    """Reverse concatenation: three SCROFULOUS blocks composing a CORPSE.

    Negative control.  The CORPSE segment rotations, reduced mod 2*pi so
    each block target stays within the SCROFULOUS domain, are
    (theta/2 - kappa, 2 kappa, theta/2 - kappa), all about the same axis;
    their product is exactly the target rotation.  Each block cancels its
    own pulse-length error, so the whole sequence is pulse-length robust,
    but the blocks' residual off-resonance errors do not combine into
    anything the outer CORPSE structure can remove: the off-resonance
    channel stays first order.
    """
    if not 0 < theta < TWO_PI:
        raise ValueError(f"rotation angle must lie in (0, 2*pi), got {theta}")
    kappa = np.arcsin(np.sin(theta / 2) / 2)
    pulses: list[Pulse] = []
    for t in (theta / 2 - kappa, 2 * kappa, theta / 2 - kappa):
        th1, ph1, ph2 = _scrofulous_params(t, phi)
        pulses += [Pulse(th1, ph1), Pulse(np.pi, ph2), Pulse(th1, ph1)]
    return _check_product(
        PulseSequence("scrofulous-in-corpse", tuple(pulses), _xy_target(theta, phi),
                      theta=theta, phi=phi)
    )


def reduce_pi_pulse_product(phases) -> np.ndarray:
    """Collapse a product of xy-plane pi pulses to a single rotation vector.

    ``phases`` lists the pulse azimuths in application order.  An even count
    multiplies to a z rotation (0, 0, 2*Theta) with
    Theta = sum_j (phi_2j - phi_2j-1 + pi) over consecutive pairs; an odd
    count multiplies to another pi pulse in the plane, at azimuth
    phi_last - Theta(preceding pairs).  Both identities are exact, not just
    up to global phase.
    """
    phases = [float(p) for p in phases]
    if not phases:
        raise ValueError("need at least one pulse azimuth")
    pairs = (len(phases) // 2) if len(phases) % 2 == 0 else ((len(phases) - 1) // 2)
    big_theta = sum(phases[2 * j + 1] - phases[2 * j] + np.pi for j in range(pairs))
    if len(phases) % 2 == 0:
        return np.array([0.0, 0.0, 2 * big_theta])
    azimuth = phases[-1] - big_theta
    return np.array([np.pi * np.cos(azimuth), np.pi * np.sin(azimuth), 0.0])


_SYNTH = {
    "plain": lambda theta, phi, winding: plain(theta, phi),
    "corpse": lambda theta, phi, winding: corpse(theta, phi, winding or (1, 2, 1)),
    "scrofulous": lambda theta, phi, winding: scrofulous(theta, phi),
    "cis-cccp": lambda theta, phi, winding: cis_cccp(theta, phi, winding or (1, 1, 0)),
    "bb1": lambda theta, phi, winding: bb1(theta, phi),
    "alway-jones": lambda theta, phi, winding: alway_jones(phi),
    "scrofulous-in-corpse": lambda theta, phi, winding: scrofulous_in_corpse(theta, phi),
}


def synthesize(family: str, theta: float, phi: float = 0.0,
               winding: tuple[int, int, int] | None = None) -> PulseSequence:
    """Dispatch to a synthesizer by family name (as spelled in FAMILIES)."""
    try:
        maker = _SYNTH[family]
    except KeyError:
        raise ValueError(f"unknown sequence family {family!r}; expected one of {list(_SYNTH)}")
    return maker(theta, phi, winding)


def sequence_to_dict(seq: PulseSequence) -> dict:
    """Serializable form of a sequence (the JSON wire schema)."""
    doc: dict = {"family": seq.family}
    if seq.theta is not None:
        doc["target"] = {"theta": float(seq.theta), "phi": float(seq.phi or 0.0)}
    if seq.winding is not None:
        doc["winding"] = [int(n) for n in seq.winding]
    doc["pulses"] = [{"theta": p.theta, "phi": p.phi} for p in seq.pulses]
    return doc


def sequence_from_dict(doc: dict) -> PulseSequence:
    """Rebuild a sequence from its wire form; inverse of sequence_to_dict."""
    family = doc.get("family", "custom")
    if family not in FAMILIES:
        raise ValueError(f"unknown sequence family {family!r}")
    try:
        pulses = tuple(Pulse(float(p["theta"]), float(p["phi"])) for p in doc["pulses"])
        target_spec = doc["target"]
        theta = float(target_spec["theta"])
        phi = float(target_spec["phi"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed sequence document: missing {exc}") from exc
    winding = tuple(int(n) for n in doc["winding"]) if "winding" in doc else None
    return PulseSequence(family, pulses, _xy_target(theta, phi),
                         theta=theta, phi=phi, winding=winding)
