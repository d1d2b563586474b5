"""Jump operators, the c-parametrized Liouvillian, and its Fock-lattice view.

The master equation is assembled in vectorized (row-major) form

    L_v = -i(H (x) I - I (x) H^T)
          + sum_k gamma_k [2c * L_k (x) L_k* - L_k^dag L_k (x) I - I (x) (L_k^dag L_k)^T],

where c in [0, 1] scales only the quantum-jump sandwich term: c = 1 is the
trace-preserving map, c = 0 the pure non-Hermitian (no-jump) evolution.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import kron
from .models import build_hn_hamiltonian, split_real_imag

__all__ = [
    "JumpSet", "LiouvillianModel", "FockLatticeView",
    "jump_local", "jump_collective", "effective_nh_hamiltonian",
    "build_liouvillian", "build_hn_lme", "fock_lattice_view",
    "fock_lattice_to_json", "fock_lattice_to_dot",
]


@dataclass(frozen=True)
class JumpSet:
    """A list of (jump operator, rate) pairs plus the construction kind."""

    jumps: tuple
    kind: str

    def __post_init__(self):
        for _, rate in self.jumps:
            if rate < 0:
                raise ValueError(f"jump rates must be >= 0, got {rate}")

    def with_rate(self, gamma):
        """Copy of the set with every rate replaced by gamma."""
        if gamma < 0:
            raise ValueError(f"rate must be >= 0, got {gamma}")
        return JumpSet(tuple((op, gamma) for op, _ in self.jumps), self.kind)


@dataclass
class LiouvillianModel:
    """Hamiltonian + jump set + jump weight c; the matrix assembles lazily."""

    hamiltonian: np.ndarray
    jumps: JumpSet
    c: float = 1.0
    _matrix: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"c must lie in [0, 1], got {self.c}")

    @property
    def dim(self):
        return self.hamiltonian.shape[0]

    @property
    def matrix(self):
        if self._matrix is None:
            self._matrix = build_liouvillian(self)
        return self._matrix


def _number_op(n, site):
    op = np.zeros((n, n), dtype=complex)
    op[site - 1, site - 1] = 1.0
    return op


def _right_shift(n, periodic=False):
    # R|n> = |n+1>; one subdiagonal, wrapped when periodic
    r = np.zeros((n, n), dtype=complex)
    r[np.arange(1, n), np.arange(n - 1)] = 1.0
    if periodic:
        r[0, n - 1] = 1.0
    return r


def jump_local(lat, *, directional=True):
    """N-1 single-bond jumps; each maps |n> to the superposition |n> + i|n+1>.

    With directional=True (default) the operators are
    L_n = i|n+1><n| + |n><n| + |n+1><n+1|, whose dissipator carries a
    directional hopping piece: the Liouvillian gap then stays open at all
    sizes and the steady state is localized at every rate.  With
    directional=False the neighbor projector is dropped,
    L_n = i|n+1><n| + |n><n|; then sum_n L_n^dag L_n = 2*diag(1..1,0) is pure
    onsite dephasing, the effective Hamiltonian loses its asymmetric part,
    and the gap closes with system size like the collective model's.
    Rates default to 1; scale with JumpSet.with_rate.
    """
    if not lat.is_open:
        raise ValueError("local jumps are defined for open boundaries")
    n = lat.n_sites
    ops = []
    for site in range(1, n):
        op = 1.0j * np.outer(_basis(n, site + 1), _basis(n, site))
        op += _number_op(n, site)
        if directional:
            op += _number_op(n, site + 1)
        ops.append((op, 1.0))
    return JumpSet(tuple(ops), "local" if directional else "local-bare")


def _basis(n, site):
    e = np.zeros(n, dtype=complex)
    e[site - 1] = 1.0
    return e


def jump_collective(lat):
    """Collective relaxation jump, plus first-site dephasing on open chains.

    Open boundary: two jumps at equal rate, L_c = I + i*R with
    R = sum_{n=1}^{N-1} |n+1><n| (rightward shift), and L_1 = |1><1|.
    Periodic boundary: only the wrapped L_c, whose shift is cyclic (then
    [L_c, L_c^dag] = 0 and the maximally mixed state is exactly steady).
    Rates default to 1; scale with JumpSet.with_rate.
    """
    n = lat.n_sites
    shift = _right_shift(n, periodic=not lat.is_open)
    l_c = np.eye(n, dtype=complex) + 1.0j * shift
    if lat.is_open:
        return JumpSet(((l_c, 1.0), (_number_op(n, 1), 1.0)), "collective")
    return JumpSet(((l_c, 1.0),), "collective")


def effective_nh_hamiltonian(m):
    """H_eff = H - i * sum_k gamma_k L_k^dag L_k (the no-jump generator)."""
    h_eff = m.hamiltonian.astype(complex).copy()
    for op, rate in m.jumps.jumps:
        h_eff -= 1.0j * rate * (op.conj().T @ op)
    return h_eff


def build_liouvillian(m):
    """Assemble the dense N^2 x N^2 vectorized Liouvillian."""
    h = m.hamiltonian
    n = h.shape[0]
    eye = np.eye(n, dtype=complex)
    lv = -1.0j * (kron(h, eye) - kron(eye, h.T))
    for op, rate in m.jumps.jumps:
        op_dag_op = op.conj().T @ op
        lv += rate * (
            2.0 * m.c * kron(op, op.conj())
            - kron(op_dag_op, eye)
            - kron(eye, op_dag_op.T)
        )
    return lv


def build_hn_lme(lat, gamma, jumps_kind="collective"):
    """The dissipative asymmetric-hopping model: symmetric chain + jumps at rate gamma.

    The Hamiltonian is the symmetric tight-binding part H_R; all hopping
    asymmetry enters through the jump operators.  gamma in [0, 1]; the
    collective variant has its critical point at gamma = 1/2.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    h_r, _ = split_real_imag(lat)
    if jumps_kind == "collective":
        jumps = jump_collective(lat)
    elif jumps_kind == "local":
        jumps = jump_local(lat)
    elif jumps_kind == "local-bare":
        jumps = jump_local(lat, directional=False)
    else:
        raise ValueError(f"unknown jumps kind {jumps_kind!r}")
    return LiouvillianModel(h_r, jumps.with_rate(gamma), c=1.0)


# ---------------------------------------------------------------------------
# Fock-lattice view: the Liouvillian as a 2D lattice over indices (n, m)
# ---------------------------------------------------------------------------

@dataclass
class FockLatticeView:
    """L_v read as a tight-binding model on the N x N grid of |n><m| states.

    onsite[l] is the (real, nonpositive) diagonal "energy" of Liouville site
    l; edges lists every nonzero off-diagonal as (target l', source l,
    amplitude); classification labels each site corner / upper/right edge /
    lower/left edge / bulk.  params holds the extracted lattice constants.
    """

    n_sites: int
    gamma: float
    c: float
    onsite: np.ndarray
    edges: list
    classification: list
    params: dict

    def table_check(self):
        """Compare extracted lattice parameters against their closed forms."""
        g, c = self.gamma, self.c
        tol = 1e-12
        p = self.params
        return {
            "t0_row_is_minus_i(1-gamma)": abs(p["t0_row"] - (-1.0j * (1 - g))) < tol,
            "t0_col_is_plus_i(1-gamma)": abs(p["t0_col"] - (1.0j * (1 - g))) < tol,
            "t_d_is_2c_gamma": abs(p["t_d"] - 2.0 * c * g) < tol,
            "eps_bulk_is_minus_2gamma": abs(p["eps_b"] - (-2.0 * g)) < tol,
            "eps_edge_is_minus_gamma": abs(p["eps_e"] - (-g)) < tol,
            "corner_is_zero": abs(p["corner"]) < tol,
            "far_edge_is_minus_3gamma": abs(p["far_edge"] - (-3.0 * g)) < tol,
        }


def _classify(n_sites, n, m):
    if n == n_sites and m == n_sites:
        return "corner"
    if (n == n_sites) != (m == n_sites) and 2 <= (m if n == n_sites else n) <= n_sites - 1:
        return "upper/right edge"
    if (n == 1) != (m == 1) and 2 <= (m if n == 1 else n) <= n_sites - 1:
        return "lower/left edge"
    return "bulk"


def fock_lattice_view(m):
    """Extract the Fock-lattice parameters of a collective-jump model.

    Requires the open-boundary collective construction and N >= 4 so that a
    genuine bulk site exists for parameter extraction.
    """
    if m.jumps.kind != "collective":
        raise ValueError("the Fock-lattice view is defined for the collective jump set")
    n = m.dim
    if n < 4:
        raise ValueError(f"need N >= 4 to extract bulk parameters, got {n}")
    rates = [rate for _, rate in m.jumps.jumps]
    if len(rates) != 2:
        raise ValueError("expected the open-boundary collective pair (relaxation + dephasing)")
    gamma = rates[0]
    if abs(rates[0] - rates[1]) > 1e-14:
        raise ValueError("collective and dephasing rates must be equal")

    lv = m.matrix
    diag = np.diagonal(lv)
    if np.max(np.abs(diag.imag)) > 1e-12 * max(1.0, np.max(np.abs(diag))):
        raise ValueError("Fock-lattice onsite energies should be real")
    onsite = diag.real.copy()

    def idx(row, col):
        # 1-based lattice indices -> 0-based Liouville index
        return n * (row - 1) + (col - 1)

    classification = []
    for l in range(n * n):
        row, col = divmod(l, n)
        classification.append(_classify(n, row + 1, col + 1))

    off = lv.copy()
    np.fill_diagonal(off, 0.0)
    targets, sources = np.nonzero(np.abs(off) > 1e-14)
    edges = [(int(t), int(s), complex(off[t, s])) for t, s in zip(targets, sources)]

    params = {
        "t0_row": complex(lv[idx(3, 2), idx(2, 2)]),   # (2,2) -> (3,2), n-direction
        "t0_col": complex(lv[idx(2, 3), idx(2, 2)]),   # (2,2) -> (2,3), m-direction
        "t_d": complex(lv[idx(3, 3), idx(2, 2)]),       # (2,2) -> (3,3), jump diagonal
        "eps_b": float(onsite[idx(2, 2)]),
        "eps_e": float(onsite[idx(n, 2)]),
        "corner": float(onsite[idx(n, n)]),
        "far_edge": float(onsite[idx(1, 2)]),
    }
    return FockLatticeView(
        n_sites=n, gamma=gamma, c=m.c, onsite=onsite,
        edges=edges, classification=classification, params=params,
    )


def fock_lattice_to_json(view):
    """Serialize a FockLatticeView (plus its parameter checks) to a JSON string."""
    payload = {
        "n_sites": view.n_sites,
        "gamma": view.gamma,
        "c": view.c,
        "onsite": [float(x) for x in view.onsite],
        "classification": view.classification,
        "edges": [
            {"from": src, "to": dst, "re": amp.real, "im": amp.imag}
            for dst, src, amp in view.edges
        ],
        "params": {
            key: {"re": complex(val).real, "im": complex(val).imag}
            for key, val in view.params.items()
        },
        "checks": view.table_check(),
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def fock_lattice_to_dot(view):
    """Render the Fock lattice as a DOT digraph.

    Node id = Liouville index; node attributes carry the onsite value and
    class, edge attributes the amplitude as a re/im pair.
    """
    lines = ["digraph fock_lattice {"]
    for l in range(view.n_sites**2):
        lines.append(
            f'  {l} [onsite="{view.onsite[l]:.12g}", class="{view.classification[l]}"];'
        )
    for dst, src, amp in view.edges:
        lines.append(f'  {src} -> {dst} [re="{amp.real:.12g}", im="{amp.imag:.12g}"];')
    lines.append("}")
    return "\n".join(lines)
