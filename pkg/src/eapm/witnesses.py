"""Linear correlation witnesses and the concrete games used in this package.

A witness is a coefficient tensor c[x][y][b] over a scenario; its value on
a behavior p is the linear functional sum_xyb c[x][y][b] p(b|x,y).  For
binary outcomes most witnesses here are written in correlator form,
c[x][y][0] = -c[x][y][1], acting on E_xy = p(0|x,y) - p(1|x,y).
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import EQ_TOL
from .quantum import Behavior, Scenario


@dataclass(frozen=True)
class Witness:
    scenario: Scenario
    coeffs: np.ndarray  # (n_x, n_y, n_b)
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        s = self.scenario
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (s.n_x, s.n_y, s.n_b):
            raise ValueError(f"coefficient tensor {c.shape} does not match "
                             f"scenario {(s.n_x, s.n_y, s.n_b)}")
        object.__setattr__(self, "coeffs", c)

    @property
    def algebraic_max(self) -> float:
        """sum_xy max_b c[x][y][b]: every term maximized independently."""
        return float(self.coeffs.max(axis=2).sum())


def evaluate(w: Witness, p: Behavior) -> float:
    """Witness value sum c[x][y][b] p(b|x,y); linear in the behavior."""
    if not w.scenario.compatible(p.scenario):
        raise ValueError("witness and behavior scenarios do not match")
    return float(np.einsum("xyb,xyb->", w.coeffs, p.table))


def correlators(p: Behavior) -> np.ndarray:
    """E[x][y] = p(0|x,y) - p(1|x,y) for binary-outcome behaviors."""
    if p.scenario.n_b != 2:
        raise ValueError("correlators need binary outcomes")
    return p.table[:, :, 0] - p.table[:, :, 1]


def correlators_csv(p: Behavior) -> str:
    """CSV rendering of the correlator table, rows = x, columns = y."""
    e = correlators(p)
    buf = io.StringIO()
    buf.write("x," + ",".join(f"E_x{y}" for y in range(e.shape[1])) + "\n")
    for x in range(e.shape[0]):
        buf.write(f"{x}," + ",".join(f"{v:.12g}" for v in e[x]) + "\n")
    return buf.getvalue()


def correlator_witness(matrix: np.ndarray, *, d: int, message: str = "quantum",
                       name: str = "", params: dict | None = None) -> Witness:
    """Binary witness sum_xy m[x][y] E_xy as a coefficient tensor."""
    m = np.asarray(matrix, dtype=float)
    n_x, n_y = m.shape
    c = np.stack([m, -m], axis=2)
    sc = Scenario(n_x, n_y, 2, d=d, message=message)
    return Witness(sc, c, name=name, params=params or {})


# --------------------------------------------------------------------------
# The five-preparation dimension witness.
# --------------------------------------------------------------------------

GALLEGO_MATRIX = np.array([
    [1, 1, 1, 1],
    [1, 1, 1, -1],
    [1, 1, -1, 0],
    [1, -1, 0, 0],
    [-1, 0, 0, 0],
], dtype=float)


def gallego_w5() -> Witness:
    """Five-input, four-setting correlator witness; algebraic maximum 14."""
    return correlator_witness(GALLEGO_MATRIX, d=2, name="gallego_w5")


# --------------------------------------------------------------------------
# Pairwise state-discrimination game (SIC witness).
# --------------------------------------------------------------------------

def pair_scenario(n_states: int, *, d: int) -> Scenario:
    """Bob's inputs are the unordered pairs {x, x'}, outcomes binary."""
    if n_states < 2:
        raise ValueError("need at least two states")
    return Scenario(n_states, n_states * (n_states - 1) // 2, 2, d=d)


def pairs(n: int) -> list[tuple[int, int]]:
    """Unordered pairs (x, x'), x < x', in lexicographic order."""
    return list(itertools.combinations(range(n), 2))


def pair_index(n: int, x: int, xp: int) -> int:
    """Index of the pair {x, x'} (x < x') in `pairs(n)` ordering."""
    if not 0 <= x < xp < n:
        raise ValueError("need 0 <= x < x' < n")
    return x * n - x * (x + 1) // 2 + (xp - x - 1)


def sic_witness(n_states: int, *, d: int) -> Witness:
    """Witness sum_{x<x'} p(0|x,{x,x'}) - p(0|x',{x,x'}).

    On pure states with optimal binary measurements its value is
    sum_{x<x'} sqrt(1 - |<psi_x|psi_x'>|^2).
    """
    sc = pair_scenario(n_states, d=d)
    c = np.zeros((sc.n_x, sc.n_y, 2))
    for y, (x, xp) in enumerate(pairs(n_states)):
        c[x, y, 0] = 1.0
        c[xp, y, 0] = -1.0
    return Witness(sc, c, name="sic_witness", params={"n_states": n_states})


def sic_witness_value(states: np.ndarray, d: int | None = None) -> float:
    """Optimal-measurement value sum_{x<x'} sqrt(1 - |<psi_x|psi_x'>|^2).

    `states` holds unit vectors as rows; when `d` is given the state count
    must equal d^2 (the tomographically complete case).
    """
    states = np.asarray(states)
    n = states.shape[0]
    if d is not None and n != d * d:
        raise ValueError(f"expected {d * d} states, got {n}")
    g = states.conj() @ states.T
    total = 0.0
    for x, xp in pairs(n):
        total += np.sqrt(max(0.0, 1.0 - abs(g[x, xp]) ** 2))
    return float(total)


def sic_witness_value_mixed(rhos: np.ndarray) -> float:
    """Mixed-state generalization: sum over pairs of the positive part of
    the spectrum of rho_x - rho_x' (the optimal binary-measurement value)."""
    rhos = np.asarray(rhos)
    total = 0.0
    for x, xp in pairs(rhos.shape[0]):
        w = np.linalg.eigvalsh(rhos[x] - rhos[xp])
        total += w[w > 0].sum()
    return float(total)


def pair_discrimination_score(states: np.ndarray) -> float:
    """Mean success probability of the promised-pair identification game.

    Bob is promised x in {x, x'} and performs the optimal binary
    discrimination of the two pure states: per pair the best average
    success probability is (1 + sqrt(1 - |<psi_x|psi_x'>|^2)) / 2.
    """
    states = np.asarray(states)
    n = states.shape[0]
    if n < 2:
        raise ValueError("need at least two states")
    g = states.conj() @ states.T
    ps = [0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - abs(g[x, xp]) ** 2)))
          for x, xp in pairs(n)]
    return float(np.mean(ps))


# --------------------------------------------------------------------------
# Ternary-outcome witness with one forbidden outcome per (x, y).
# --------------------------------------------------------------------------

def qutrit_forbidden_outcome(x: int, y: int) -> int:
    """The outcome scoring -1 for inputs x = 3*x0 + x1, y = 2*y0 + y1."""
    x0, x1 = divmod(x, 3)
    y0, y1 = divmod(y, 2)
    xx = (x0, x1)
    return (xx[y1] - y0 * ((-1) ** y1) * xx[1 - y1]) % 3


def qutrit_witness() -> Witness:
    """Nine inputs, four ternary settings; coefficients +1 except a single
    -1 per (x, y) at the forbidden outcome.  Algebraic maximum 36."""
    c = np.ones((9, 4, 3))
    for x in range(9):
        for y in range(4):
            c[x, y, qutrit_forbidden_outcome(x, y)] = -1.0
    sc = Scenario(9, 4, 3, d=3)
    return Witness(sc, c, name="qutrit_witness")


# --------------------------------------------------------------------------
# Flagged random access code.
# --------------------------------------------------------------------------

def frac_witness(beta: float, gamma: float | None = None) -> Witness:
    """2->1 RAC with a flag preparation and a flag-detection setting.

    Correlator form: (E11 + E21 - E31 - E41) + (E12 - E22 + E32 - E42)
    + beta (E13 + E23 + E33 + E43) - gamma E53.  Default gamma = 4 beta
    gives the flag-identification terms equal weight.
    """
    if gamma is None:
        gamma = 4.0 * beta
    if beta < 0 or gamma < 0:
        raise ValueError("beta and gamma must be nonnegative")
    m = np.array([
        [1, 1, beta],
        [1, -1, beta],
        [-1, 1, beta],
        [-1, -1, beta],
        [0, 0, -gamma],
    ], dtype=float)
    return correlator_witness(m, d=2, name="frac",
                              params={"beta": beta, "gamma": gamma})


def frac_qubit_value(beta: float) -> float:
    """Optimal qubit value 4 beta + 4 sqrt(2 + beta^2) (gamma = 4 beta)."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    return 4.0 * beta + 4.0 * np.sqrt(2.0 + beta * beta)


# The witness is invariant under a dihedral group of order eight acting by
# preparation permutations combined with setting swaps / outcome flips.
# Generators (cycle notation on 1-based preparations):
#   g1 = (12)(34) with outcomes flipped under y=2
#   g2 = (13)(24) with outcomes flipped under y=1
#   g3 = (23) with settings y=1 and y=2 exchanged
_FRAC_GENERATORS = {
    "g1": ((1, 0, 3, 2, 4), (0, 1, 2), (0, 1, 0)),
    "g2": ((2, 3, 0, 1, 4), (0, 1, 2), (1, 0, 0)),
    "g3": ((0, 2, 1, 3, 4), (1, 0, 2), (0, 0, 0)),
}


def _compose(a, b):
    """Group element acting as first a, then b."""
    pa, ya, fa = a
    pb, yb, fb = b
    perm = tuple(pa[pb[x]] for x in range(5))
    yperm = tuple(ya[yb[y]] for y in range(3))
    flips = tuple((fb[y] + fa[yb[y]]) % 2 for y in range(3))
    return perm, yperm, flips


def frac_symmetry_group() -> list[tuple]:
    """The eight (state-permutation, setting-permutation, outcome-flip)
    triples of the witness's dihedral symmetry."""
    e = ((0, 1, 2, 3, 4), (0, 1, 2), (0, 0, 0))
    g1, g2, g3 = (_FRAC_GENERATORS[k] for k in ("g1", "g2", "g3"))
    elems = [e, g1, g2, g3, _compose(g1, g2), _compose(g1, g3),
             _compose(g2, g3), _compose(_compose(g1, g2), g3)]
    uniq = []
    for el in elems:
        if el not in uniq:
            uniq.append(el)
    return uniq


def apply_frac_symmetry(element, p: Behavior) -> Behavior:
    """Relabel a f-RAC behavior by a symmetry-group element."""
    perm, yperm, flips = element
    t = p.table[np.array(perm)][:, np.array(yperm)]
    out = t.copy()
    for y in range(3):
        if flips[y]:
            out[:, y, :] = t[:, y, ::-1]
    return Behavior(p.scenario, out)


def dihedral_orbit_check(w: Witness, p: Behavior, tol: float = EQ_TOL) -> bool:
    """True iff the witness value is constant on the full symmetry orbit."""
    if (w.scenario.n_x, w.scenario.n_y, w.scenario.n_b) != (5, 3, 2):
        raise ValueError("dihedral_orbit_check applies to the f-RAC scenario")
    ref = evaluate(w, p)
    return all(abs(evaluate(w, apply_frac_symmetry(g, p)) - ref) <= tol
               for g in frac_symmetry_group())
