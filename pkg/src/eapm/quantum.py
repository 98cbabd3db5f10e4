"""Physical objects for prepare-and-measure scenarios and their evaluators.

A scenario fixes the input/output counts and the communication resource
(message dimension d, optional shared entanglement of local dimension D).
Strategies are tagged containers of states / measurements / channels; each
kind knows how to produce the full conditional-probability table (the
"behavior") via `behavior_of`.

Conventions used throughout:
  * tensor factors are ordered (sent system C, Bob's share B) and indexed
    kron-style, (i, j) -> i * dim_B + j;
  * shared states are pure vectors on A (x) B with A first;
  * Heisenberg-Weyl operators are X^a Z^b with X|j> = |j+1 mod k>,
    Z|j> = w^j |j>, w = exp(2 pi i / k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch

import numpy as np

from . import linalg
from .linalg import (BEHAVIOR_NEG_TOL, BEHAVIOR_SUM_TOL, EQ_TOL, HERM_TOL,
                     ISOMETRY_TOL, PSD_TOL, UNIT_TOL, dagger, kron)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class Scenario:
    """Shape of a prepare-and-measure experiment plus its resource class."""

    n_x: int
    n_y: int
    n_b: int
    d: int
    message: str = "quantum"   # "classical" | "quantum"
    ent_dim: int = 1           # local dimension D of the shared state; 1 = none
    field: str = "complex"     # "real" | "complex"

    def __post_init__(self):
        for name in ("n_x", "n_y", "n_b", "d", "ent_dim"):
            if getattr(self, name) < 1:
                raise ValueError(f"Scenario.{name} must be >= 1")
        if self.message not in ("classical", "quantum"):
            raise ValueError(f"unknown message kind {self.message!r}")
        if self.field not in ("real", "complex"):
            raise ValueError(f"unknown field {self.field!r}")
        if self.field == "real" and self.message != "quantum":
            raise ValueError("field='real' is only meaningful for quantum messages")

    def compatible(self, other: "Scenario") -> bool:
        """Same table shape (the resource part may differ)."""
        return (self.n_x, self.n_y, self.n_b) == (other.n_x, other.n_y, other.n_b)


@dataclass
class Behavior:
    """Full conditional probability table p(b|x,y) for a scenario."""

    scenario: Scenario
    table: np.ndarray  # (n_x, n_y, n_b), real

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=float)
        s = self.scenario
        if self.table.shape != (s.n_x, s.n_y, s.n_b):
            raise ValueError(f"behavior table shape {self.table.shape} does not "
                             f"match scenario {(s.n_x, s.n_y, s.n_b)}")
        if self.table.min() < -BEHAVIOR_NEG_TOL:
            raise ValueError(f"negative probability {self.table.min()}")
        err = np.abs(self.table.sum(axis=2) - 1.0).max()
        if err > BEHAVIOR_SUM_TOL:
            raise ValueError(f"probability table not normalized (err={err})")


# --------------------------------------------------------------------------
# Validation helpers for the physical constituents.
# --------------------------------------------------------------------------

def assert_density_matrix(rho: np.ndarray, tol: float = PSD_TOL) -> None:
    """Hermitian, PSD and unit trace within tolerance."""
    if not linalg.is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {w.min()}")
    if abs(w.sum() - 1.0) > tol:
        raise ValueError(f"density matrix trace {w.sum()} != 1")


def assert_povm(effects: np.ndarray) -> None:
    """Each effect PSD, effects sum to the identity."""
    d = effects.shape[-1]
    for m in effects:
        if not linalg.is_hermitian(m):
            raise ValueError("POVM effect is not Hermitian")
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise ValueError("POVM effect is not PSD")
    if np.abs(effects.sum(axis=0) - np.eye(d)).max() > BEHAVIOR_SUM_TOL:
        raise ValueError("POVM effects do not sum to the identity")


def assert_pure_state(v: np.ndarray) -> None:
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL * 10:
        raise ValueError(f"state vector norm {np.linalg.norm(v)} != 1")


# --------------------------------------------------------------------------
# Strategy kinds.
# --------------------------------------------------------------------------

@dataclass
class ClassicalDet:
    """Deterministic classical strategy: encoding x -> m, decoding (m, y) -> b."""

    scenario: Scenario
    enc: np.ndarray  # (n_x,) ints in [0, d)
    dec: np.ndarray  # (d, n_y) ints in [0, n_b)

    def validate(self):
        s = self.scenario
        self.enc = np.asarray(self.enc, dtype=int)
        self.dec = np.asarray(self.dec, dtype=int)
        if self.enc.shape != (s.n_x,):
            raise ValueError("encoding shape mismatch")
        if self.dec.shape != (s.d, s.n_y):
            raise ValueError("decoding shape mismatch")
        if self.enc.min() < 0 or self.enc.max() >= s.d:
            raise ValueError("encoding out of range")
        if self.dec.min() < 0 or self.dec.max() >= s.n_b:
            raise ValueError("decoding out of range")


@dataclass
class BareQuantum:
    """States rho_x on C^d, one POVM per y, no entanglement."""

    scenario: Scenario
    states: np.ndarray  # (n_x, d, d) density matrices
    povms: np.ndarray   # (n_y, n_b, d, d)

    def validate(self):
        s = self.scenario
        if self.states.shape != (s.n_x, s.d, s.d):
            raise ValueError("states shape mismatch")
        if self.povms.shape != (s.n_y, s.n_b, s.d, s.d):
            raise ValueError("povms shape mismatch")
        for rho in self.states:
            assert_density_matrix(rho)
        for povm in self.povms:
            assert_povm(povm)


@dataclass
class EAClassical:
    """Classical message c extracted by a POVM on Alice's share.

    Alice measures {N_{c|x}} on her half of the shared state and sends the
    outcome c; Bob measures {M_{b|y,c}} on his half.
    """

    scenario: Scenario
    shared: np.ndarray       # (D*D,) pure state on A (x) B
    alice_povms: np.ndarray  # (n_x, d, D, D)
    bob_povms: np.ndarray    # (n_y, d, n_b, D, D)

    def validate(self):
        s = self.scenario
        D = s.ent_dim
        assert_pure_state(self.shared)
        if self.shared.shape != (D * D,):
            raise ValueError("shared state dimension mismatch")
        if self.alice_povms.shape != (s.n_x, s.d, D, D):
            raise ValueError("alice_povms shape mismatch")
        if self.bob_povms.shape != (s.n_y, s.d, s.n_b, D, D):
            raise ValueError("bob_povms shape mismatch")
        for povm in self.alice_povms:
            assert_povm(povm)
        for y in range(s.n_y):
            for c in range(s.d):
                assert_povm(self.bob_povms[y, c])


@dataclass
class EAQuantumUnitary:
    """Alice applies a unitary to her D-dimensional share and sends it (d = D).

    With the maximally entangled shared state this is generalized dense
    coding.
    """

    scenario: Scenario
    shared: np.ndarray      # (D*D,)
    unitaries: np.ndarray   # (n_x, D, D)
    bob_povms: np.ndarray   # (n_y, n_b, d*D, d*D)

    def validate(self):
        s = self.scenario
        D = s.ent_dim
        if s.d != D:
            raise ValueError("unitary strategies require message dim == local dim")
        assert_pure_state(self.shared)
        for u in self.unitaries:
            if np.abs(u @ u.conj().T - np.eye(D)).max() > ISOMETRY_TOL:
                raise ValueError("non-unitary Alice operation")
        for povm in self.bob_povms:
            assert_povm(povm)


@dataclass
class EAQuantumIsometry:
    """Alice dilates an arbitrary channel: V_x : C^D -> C^d (x) C^E, E discarded."""

    scenario: Scenario
    shared: np.ndarray      # (D*D,)
    isometries: np.ndarray  # (n_x, d*E, D)
    env_dim: int
    bob_povms: np.ndarray   # (n_y, n_b, d*D, d*D)

    def validate(self):
        s = self.scenario
        D, E = s.ent_dim, self.env_dim
        assert_pure_state(self.shared)
        if self.isometries.shape != (s.n_x, s.d * E, D):
            raise ValueError("isometries shape mismatch")
        for v in self.isometries:
            if np.abs(v.conj().T @ v - np.eye(D)).max() > ISOMETRY_TOL:
                raise ValueError("V^dag V != I for an Alice isometry")
        for povm in self.bob_povms:
            assert_povm(povm)


Strategy = ClassicalDet | BareQuantum | EAClassical | EAQuantumUnitary | EAQuantumIsometry


# --------------------------------------------------------------------------
# State constructors.
# --------------------------------------------------------------------------

def maximally_entangled(D: int) -> np.ndarray:
    """|phi_+> = (1/sqrt(D)) sum_i |ii>, equal to vec(I)/sqrt(D)."""
    return linalg.vec(np.eye(D, dtype=complex)) / np.sqrt(D)


def theta_state(theta: float) -> np.ndarray:
    """cos(theta)|00> + sin(theta)|11> on two qubits."""
    if not 0.0 <= theta <= np.pi / 2 + 1e-12:
        raise ValueError("theta must lie in [0, pi/2]")
    v = np.zeros(4, dtype=complex)
    v[0], v[3] = np.cos(theta), np.sin(theta)
    return v


def bloch_to_state(r) -> np.ndarray:
    """Qubit density matrix (I + r . sigma)/2 for a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > 1.0 + UNIT_TOL:
        raise ValueError(f"Bloch vector norm {np.linalg.norm(r)} > 1")
    return 0.5 * (ID2 + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z)


def qubit_observable(m) -> np.ndarray:
    """Traceless qubit observable m . sigma for a unit vector m."""
    m = np.asarray(m, dtype=float)
    if abs(np.linalg.norm(m) - 1.0) > UNIT_TOL * 10:
        raise ValueError("observable direction must be a unit vector")
    return m[0] * PAULI_X + m[1] * PAULI_Y + m[2] * PAULI_Z


def weyl_x(k: int) -> np.ndarray:
    """Cyclic shift X|j> = |j+1 mod k>."""
    x = np.zeros((k, k), dtype=complex)
    for j in range(k):
        x[(j + 1) % k, j] = 1.0
    return x


def weyl_z(k: int) -> np.ndarray:
    """Clock matrix Z|j> = w^j |j>."""
    return np.diag(np.exp(2j * np.pi * np.arange(k) / k))


def weyl_displacements(k: int) -> np.ndarray:
    """All X^a Z^b indexed by m = a*k + b; pairwise trace-orthogonal."""
    x, z = weyl_x(k), weyl_z(k)
    xs = [np.linalg.matrix_power(x, a) for a in range(k)]
    zs = [np.linalg.matrix_power(z, b) for b in range(k)]
    return np.stack([xs[a] @ zs[b] for a in range(k) for b in range(k)])


def bell_basis(k: int) -> np.ndarray:
    """Orthonormal basis (X^a Z^b (x) I)|phi_+> of C^k (x) C^k, indexed a*k+b."""
    phi = maximally_entangled(k)
    return np.stack([kron(w, np.eye(k)) @ phi for w in weyl_displacements(k)])


# --------------------------------------------------------------------------
# Behavior evaluation (Born rule per strategy kind).
# --------------------------------------------------------------------------

@singledispatch
def behavior_of(strategy) -> Behavior:
    """Conditional probability table generated by a strategy."""
    raise TypeError(f"not a strategy: {type(strategy)!r}")


@behavior_of.register
def _(strategy: ClassicalDet) -> Behavior:
    strategy.validate()
    s = strategy.scenario
    p = np.zeros((s.n_x, s.n_y, s.n_b))
    for x in range(s.n_x):
        for y in range(s.n_y):
            p[x, y, strategy.dec[strategy.enc[x], y]] = 1.0
    return Behavior(s, p)


@behavior_of.register
def _(strategy: BareQuantum) -> Behavior:
    strategy.validate()
    p = np.real(np.einsum("xij,ybji->xyb", strategy.states, strategy.povms))
    return Behavior(strategy.scenario, p)


@behavior_of.register
def _(strategy: EAClassical) -> Behavior:
    strategy.validate()
    rho = conditional_states(strategy)
    p = np.real(np.einsum("xcjl,ycblj->xyb", rho, strategy.bob_povms,
                          optimize=True))
    return Behavior(strategy.scenario, p)


@behavior_of.register
def _(strategy: EAQuantumUnitary) -> Behavior:
    strategy.validate()
    s = strategy.scenario
    D = s.ent_dim
    amp = strategy.shared.reshape(D, D)
    sent = np.einsum("xik,kj->xij", strategy.unitaries, amp).reshape(s.n_x, -1)
    p = np.real(np.einsum("xi,ybij,xj->xyb", sent.conj(), strategy.bob_povms,
                          sent, optimize=True))
    return Behavior(s, p)


@behavior_of.register
def _(strategy: EAQuantumIsometry) -> Behavior:
    strategy.validate()
    rho = effective_states(strategy)
    p = np.real(np.einsum("xij,ybji->xyb", rho, strategy.bob_povms,
                          optimize=True))
    return Behavior(strategy.scenario, p)


def conditional_states(strategy: EAClassical) -> np.ndarray:
    """Unnormalized Bob states rho^{x,c} = tr_A[(N_{c|x} (x) I) phi phi^dag].

    Their sum over c equals Alice's-traced shared state for every x.
    """
    D = strategy.scenario.ent_dim
    amp = strategy.shared.reshape(D, D)
    return np.einsum("xcik,kj,il->xcjl", strategy.alice_povms, amp, amp.conj(),
                     optimize=True)


def effective_states(strategy) -> np.ndarray:
    """States on C^d (x) C^D that Bob effectively measures, one per x.

    For classical messages the message register is embedded diagonally.
    """
    s = strategy.scenario
    D = s.ent_dim
    if isinstance(strategy, EAQuantumUnitary):
        amp = strategy.shared.reshape(D, D)
        sent = np.einsum("xik,kj->xij", strategy.unitaries, amp).reshape(s.n_x, -1)
        return np.einsum("xi,xj->xij", sent, sent.conj())
    if isinstance(strategy, EAQuantumIsometry):
        E = strategy.env_dim
        amp = strategy.shared.reshape(D, D)
        t = (strategy.isometries @ amp).reshape(s.n_x, s.d, E, D)
        rho = np.einsum("xcej,xCeJ->xcjCJ", t, t.conj(), optimize=True)
        return rho.reshape(s.n_x, s.d * D, s.d * D)
    if isinstance(strategy, EAClassical):
        rho_c = conditional_states(strategy)
        out = np.zeros((s.n_x, s.d * D, s.d * D), dtype=complex)
        for c in range(s.d):
            out[:, c * D:(c + 1) * D, c * D:(c + 1) * D] = rho_c[:, c]
        return out
    raise TypeError(f"effective_states needs an entanglement-assisted strategy, "
                    f"got {type(strategy)!r}")


# --------------------------------------------------------------------------
# Resource conversions: dense coding and teleportation.
# --------------------------------------------------------------------------

def dense_coding_lift(cd: ClassicalDet) -> EAQuantumUnitary:
    """Simulate a d = k^2 classical strategy with a k-dim quantum message
    plus a k-dim maximally entangled pair.

    Alice applies the Heisenberg-Weyl unitary indexed by her message; Bob
    measures in the generalized Bell basis and applies the classical
    decoding to the identified index.  Behaviors agree exactly.
    """
    cd.validate()
    s = cd.scenario
    k = int(round(np.sqrt(s.d)))
    if k * k != s.d:
        raise ValueError(f"message alphabet {s.d} is not a perfect square")
    basis = bell_basis(k)
    povms = np.zeros((s.n_y, s.n_b, k * k, k * k), dtype=complex)
    for y in range(s.n_y):
        for m in range(k * k):
            b = cd.dec[m, y]
            povms[y, b] += np.outer(basis[m], basis[m].conj())
    lifted = Scenario(s.n_x, s.n_y, s.n_b, d=k, message="quantum", ent_dim=k)
    unitaries = weyl_displacements(k)[cd.enc]
    return EAQuantumUnitary(lifted, maximally_entangled(k), unitaries, povms)


def teleportation_lift(bq: BareQuantum) -> EAClassical:
    """Simulate a d-dim quantum strategy with d^2 classical messages plus a
    d-dim maximally entangled pair.

    Alice Bell-measures (message (x) her share); Bob undoes the induced
    Heisenberg-Weyl displacement before measuring.  Behaviors agree exactly.
    """
    bq.validate()
    s = bq.scenario
    d = s.d
    basis = bell_basis(d)
    corrections = weyl_displacements(d)
    # POVM on A induced by the Bell measurement on (message, A)
    alice = np.zeros((s.n_x, d * d, d, d), dtype=complex)
    for x in range(s.n_x):
        for c in range(d * d):
            phi_c = np.outer(basis[c], basis[c].conj())
            alice[x, c] = linalg.partial_trace(
                kron(bq.states[x], np.eye(d)) @ phi_c, (d, d), (0,))
    bob = np.zeros((s.n_y, d * d, s.n_b, d, d), dtype=complex)
    for y in range(s.n_y):
        for c in range(d * d):
            w = corrections[c]
            bob[y, c] = dagger(w)[None] @ bq.povms[y] @ w[None]
    lifted = Scenario(s.n_x, s.n_y, s.n_b, d=d * d, message="classical", ent_dim=d)
    return EAClassical(lifted, maximally_entangled(d), alice, bob)
