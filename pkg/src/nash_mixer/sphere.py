"""Multi-start maximization of smooth real functions on the unit sphere of C^d.

The objective receives a unit vector ``u`` and returns ``(value, g)`` where
``g`` is the Wirtinger derivative d value / d conj(u).  For a real function
the Euclidean gradient in the (Re u, Im u) coordinates is ``2 (Re g, Im g)``.
The sphere constraint is handled by optimizing over x in R^{2d} \\ {0} with
u = x / |x|, which keeps L-BFGS unconstrained.

Each restart k draws its start from ``default_rng([seed, k])`` so the result
does not depend on the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize


@dataclass
class SphereMaximum:
    value: float
    argmax: np.ndarray
    restart_values: np.ndarray
    n_agree: int

    @property
    def converged(self):
        # best value reproduced by an independent restart
        return self.n_agree >= 2


def _solve(fun, x0, maxiter):
    d = x0.size // 2

    def neg(x):
        r = np.linalg.norm(x)
        u = (x[:d] + 1j * x[d:]) / r
        v, g = fun(u)
        gu = 2 * np.concatenate([g.real, g.imag])
        xr = x / r
        gx = (gu - xr * (xr @ gu)) / r
        return -v, -gx

    res = minimize(neg, x0, jac=True, method="L-BFGS-B",
                   options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-11})
    x = res.x / np.linalg.norm(res.x)
    u = x[:d] + 1j * x[d:]
    return float(fun(u)[0]), u


def maximize_on_sphere(fun, dim, n_restarts=64, seed=0, threads=1,
                       extra_starts=(), agree_tol=1e-8, maxiter=500):
    starts = []
    for k in range(n_restarts):
        rng = np.random.default_rng([int(seed), k])
        starts.append(rng.standard_normal(2 * dim))
    for v in extra_starts:
        v = np.asarray(v, dtype=complex)
        starts.append(np.concatenate([v.real, v.imag]))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda x0: _solve(fun, x0, maxiter), starts))
    else:
        results = [_solve(fun, x0, maxiter) for x0 in starts]
    values = np.array([r[0] for r in results])
    best = int(np.argmax(values))
    scale = max(1.0, abs(values[best]))
    n_agree = int(np.sum(values >= values[best] - agree_tol * scale))
    return SphereMaximum(float(values[best]), results[best][1], values, n_agree)


def quartic_form(M, dim):
    """Objective u -> x^dag M x with x = vec(u u^dag), M Hermitian PSD."""

    def fun(u):
        x = np.outer(u, u.conj()).reshape(-1)
        y = M @ x
        Y = y.reshape(dim, dim)
        return float(np.vdot(x, y).real), (Y + Y.conj().T) @ u

    return fun
