"""Oracle and identity suite run by ``spinorsim validate``."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .algebra import ModelParams, hamiltonian_block, verify_identities
from .evolve import Propagator, diagonalize_block, evolve_oracle_angular
from .fock import BlockKey, Layout, StateVector
from .prepare import AngularLabel, CoherentSpec, allowed_l, angular_state, coherent_state, glmk
from .squeeze import MomentTable, quadrature_stats


@dataclass(frozen=True)
class Result:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


def random_spec(N, rng) -> CoherentSpec:
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    return CoherentSpec(N, tuple(z / np.linalg.norm(z)))


def random_state(N, rng) -> StateVector:
    layout = Layout.full(N)
    z = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return StateVector(layout, z / np.linalg.norm(z))


def word_expansion(spec: CoherentSpec) -> dict:
    """Coherent amplitudes by expanding (sum_j alpha_j a_j^dag)^N word by word."""
    counts = Counter()
    for word in itertools.product(range(3), repeat=spec.N):
        counts[tuple(word.count(j) for j in range(3))] += 1
    out = {}
    for occ, count in counts.items():
        amp = complex(count)
        for a, n in zip(spec.alphas, occ):
            amp *= a**n
        # a^dag^n |0> = sqrt(n!) |n>
        out[occ] = amp * math.sqrt(math.prod(math.factorial(n) for n in occ) / math.factorial(spec.N))
    return out


def run_suite(max_n: int = 10, draws: int = 20, seed: int = 0) -> list[Result]:
    rng = np.random.default_rng(seed)
    results = []
    params = ModelParams()

    worst = {}
    for N in range(1, max_n + 1):
        report = verify_identities(N)
        for name, check in report.checks.items():
            ratio = check.deviation / check.tolerance if check.tolerance else (0.0 if check.deviation == 0 else math.inf)
            worst[name] = max(worst.get(name, 0.0), ratio)
    for name, ratio in worst.items():
        results.append(Result(f"identity: {name} (dev/tol)", ratio, 1.0))

    spec_dev = eig_res = ortho = 0.0
    for N in range(1, 2 * max_n + 1):
        for m in range(-N, N + 1):
            system = diagonalize_block(hamiltonian_block(params, BlockKey(N, m)))
            expected = np.sort([params.level(N, l) for l in allowed_l(N, m)])
            scale = max(np.abs(expected).max(), 1.0)
            spec_dev = max(spec_dev, np.abs(system.eigenvalues - expected).max() / scale)
            H = hamiltonian_block(params, BlockKey(N, m)).toarray()
            v, w = system.eigenvectors, system.eigenvalues
            eig_res = max(eig_res, np.abs(H @ v - v * w).max() / scale)
            ortho = max(ortho, np.abs(v.T @ v - np.eye(len(w))).max())
    results.append(Result("spectrum law (relative)", spec_dev, 1e-9))
    results.append(Result("eigenpair residual (relative)", eig_res, 1e-10))
    results.append(Result("eigenvector orthonormality", ortho, 1e-10))

    deficit = revival = 0.0
    for _ in range(draws):
        state = coherent_state(random_spec(max_n, rng))
        prop = Propagator(state, params)
        for t in (0.1, 1.0, math.pi):
            a, b = prop.at(t), evolve_oracle_angular(state, params, t)
            deficit = max(deficit, 1 - abs(a.overlap(b)))
        revival = max(revival, 1 - abs(state.overlap(prop.at(math.pi))))
    results.append(Result("spectral vs angular evolution deficit", deficit, 1e-8))
    results.append(Result("revival at t = pi deficit", revival, 1e-9))

    ident = bound = 0.0
    for _ in range(draws):
        table = MomentTable(random_state(max_n, rng))
        q = quadrature_stats(table, rng.uniform(0, math.pi))
        ident = max(ident, q.identity_residual)
        bound = max(bound, 0.75 * abs(table.Y) + q.c_uv - (q.var_qplus + q.var_qminus_perp))
    results.append(Result("quadrature variance identity", ident, 1e-10))
    results.append(Result("U-V noise bound violation", bound, 1e-9))

    coh = 0.0
    for N in range(1, min(max_n, 7) + 1):
        spec = random_spec(N, rng)
        state = coherent_state(spec)
        for occ, amp in word_expansion(spec).items():
            pos = state.layout.locate(np.array([occ]))[0]
            coh = max(coh, abs(state.amplitudes[pos] - amp))
    results.append(Result("coherent amplitudes vs word expansion", coh, 1e-12))

    ang = orth = 0.0
    for N in range(1, max_n + 1):
        for m in range(-N, N + 1):
            ls = allowed_l(N, m)
            vecs = []
            for l in ls:
                a = angular_state(AngularLabel(N, l, m), "analytic")
                b = angular_state(AngularLabel(N, l, m), "numeric")
                ang = max(ang, 1 - abs(a.overlap(b)))
                vecs.append(np.real(a.amplitudes))
            G = np.array(vecs)
            orth = max(orth, np.abs(G @ G.T - np.eye(len(ls))).max())
    results.append(Result("closed-form vs L2 angular states deficit", ang, 1e-10))
    results.append(Result("angular coefficient orthonormality", orth, 1e-10))
    return results
