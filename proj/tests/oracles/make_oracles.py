"""Reference values for the unit tests, computed with numpy, scipy,
statsmodels and scikit-learn. Run from the repository root:

    python3 tests/oracles/make_oracles.py > tests/oracles/oracles.json
"""

import json

import numpy as np
import scipy.linalg
from sklearn.metrics import r2_score
from statsmodels.tsa.ar_model import AutoReg
from statsmodels.tsa.arima_process import arma2ma


def mat(a):
    return [list(map(float, row)) for row in np.atleast_2d(a)]


def vec(a):
    return list(map(float, np.ravel(a)))


def stacked_page(panel, L):
    N, T = panel.shape
    M = T // L
    origin = T - M * L
    blocks = [panel[n, origin:].reshape(M, L).T for n in range(N)]
    return np.hstack(blocks), origin, M


def unstack(page, N, L, M):
    return np.vstack([page[:, n * M:(n + 1) * M].T.reshape(-1) for n in range(N)])


def hsvt(a, k):
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return (u[:, :k] * s[:k]) @ vt[:k]


def ar_path(alpha, T, sigma, rng, burn=200):
    p = len(alpha)
    x = np.zeros(T + burn)
    eta = rng.normal(0.0, sigma, T + burn)
    for t in range(T + burn):
        x[t] = eta[t] + sum(alpha[i] * x[t - 1 - i] for i in range(p) if t - 1 - i >= 0)
    return x[burn:]


def panel_with_signal(N, T, rng, noise):
    t = np.arange(1, T + 1)
    f = np.vstack([
        np.sin(2 * np.pi * t / 12 + n) + 0.5 * np.cos(2 * np.pi * t / 30 + 2 * n) for n in range(N)
    ])
    return f + noise * rng.standard_normal((N, T))


out = {}
rng = np.random.default_rng(20240601)

# --- lowrank ---------------------------------------------------------------
a = rng.standard_normal((7, 5))
s = np.linalg.svd(a, compute_uv=False)
out["lowrank_small"] = {
    "matrix": mat(a),
    "singular_values": vec(s),
    "hsvt_k": 2,
    "hsvt": mat(hsvt(a, 2)),
    "hsvt_frobenius_error": float(np.sqrt(np.sum(s[2:] ** 2))),
}

signal = rng.standard_normal((30, 3)) @ rng.standard_normal((3, 80))
noisy = signal + 0.1 * rng.standard_normal((30, 80))
s = np.linalg.svd(noisy, compute_uv=False)
beta = 30 / 80
omega = 0.56 * beta**3 - 0.95 * beta**2 + 1.82 * beta + 1.43
tau = omega * np.median(s)
energy = np.cumsum(s**2) / np.sum(s**2)
out["rank_rules"] = {
    "matrix": mat(noisy),
    "universal_coefficient": float(omega),
    "universal_k": int(np.sum(s > tau)),
    "energy_fraction": 0.9,
    "energy_k": int(np.argmax(energy >= 0.9) + 1),
    "energy_fraction_high": 0.999,
    "energy_k_high": int(np.argmax(energy >= 0.999) + 1),
}

# --- decomposition and forecasting recurrence ---------------------------------
panel = panel_with_signal(3, 61, rng, 0.3)
L, k = 6, 3
page, origin, M = stacked_page(panel, L)
f_hat = unstack(hsvt(page, k), 3, L, M)
u, s, vt = np.linalg.svd(page[:L - 1], full_matrices=False)
beta_vec = (u[:, :k] / s[:k]) @ (vt[:k] @ page[L - 1])
out["decompose"] = {
    "panel": mat(panel),
    "L": L,
    "k": k,
    "origin": origin,
    "f_hat": mat(f_hat),
    "x_hat": mat(panel[:, origin:] - f_hat),
    "beta_most_recent_first": vec(beta_vec[::-1]),
}

# --- AR fitting ------------------------------------------------------------
x = ar_path([0.5, -0.3], 300, 1.0, rng)
fits = {}
for p in (1, 2, 3):
    res = AutoReg(x, lags=p, trend="n").fit()
    fits[str(p)] = {"alpha": vec(res.params), "noise_var": float(res.sigma2)}
out["fit_ar"] = {"series": vec(x), "fits": fits}

# --- stationarity diagnostics ------------------------------------------------
diag = {}
for name, alpha in {"real": [0.5, 0.3], "complex": [0.0, -0.25], "ar1": [0.5], "ar3": [0.6, -0.2, 0.05]}.items():
    p = len(alpha)
    A = np.zeros((p, p))
    A[0] = alpha
    A[1:, :-1] += np.eye(p - 1)
    B = np.zeros((p, 1))
    B[0, 0] = 1.0
    roots = np.roots([1.0] + [-c for c in alpha])
    roots = sorted(roots, key=lambda z: (abs(z), z.real, z.imag), reverse=True)
    weights = [r ** (p - 1) / np.prod([r - q for q in roots if q is not r]) for r in roots]
    c_lambda = float(sum(abs(w) for w in weights))
    lam = float(max(abs(r) for r in roots))
    psi = scipy.linalg.solve_discrete_lyapunov(A, B @ B.T)
    gamma = scipy.linalg.solve_discrete_lyapunov(A, np.eye(p))
    diag[name] = {
        "alpha": alpha,
        "roots_re": vec(np.real(roots)),
        "roots_im": vec(np.imag(roots)),
        "lambda_star": lam,
        "c_lambda": c_lambda,
        "sigma_x_unit": c_lambda / (1 - lam),
        "psi": mat(psi),
        "gamma": mat(gamma),
        "psi_min_eigenvalue": float(np.linalg.eigvalsh(psi).min()),
        "psi_max_eigenvalue": float(np.linalg.eigvalsh(psi).max()),
        "gamma_max_eigenvalue": float(np.linalg.eigvalsh(gamma).max()),
        "ma": vec(arma2ma(np.r_[1.0, -np.asarray(alpha)], [1.0], lags=12)),
    }
out["diagnostics"] = diag

# --- metrics -----------------------------------------------------------------
pred = rng.standard_normal(40)
act = pred + 0.5 * rng.standard_normal(40)
out["r_squared"] = {"pred": vec(pred), "actual": vec(act), "value": float(r2_score(act, pred))}

# --- end-to-end pipeline -------------------------------------------------------
panel = panel_with_signal(2, 121, rng, 0.2)
for n in range(2):
    panel[n] += ar_path([0.6], 121, 0.3, rng)
L, k, p = 10, 4, 1
page, origin, M = stacked_page(panel, L)
f_hat = unstack(hsvt(page, k), 2, L, M)
x_hat = panel[:, origin:] - f_hat
u, s, vt = np.linalg.svd(page[:L - 1], full_matrices=False)
beta_vec = ((u[:, :k] / s[:k]) @ (vt[:k] @ page[L - 1]))[::-1]
alphas, steps = [], []
future = [[0.7, -0.4], [1.1, 0.25]]
for n in range(2):
    xr = x_hat[n]
    design = xr[:-1, None]
    alpha = np.linalg.lstsq(design, xr[1:], rcond=None)[0]
    alphas.append(vec(alpha))
    obs = list(panel[n, ::-1][: L - 1])
    resid = [xr[-1]]
    path = []
    for y in future[n]:
        f = float(np.dot(beta_vec, obs))
        xh = float(alpha[0] * resid[0])
        path.append({"f_hat": f, "x_hat": xh, "y_hat": f + xh})
        obs = [y] + obs[:-1]
        resid = [y - f]
    steps.append(path)
out["pipeline"] = {
    "panel": mat(panel),
    "L": L,
    "k": k,
    "p": p,
    "beta": vec(beta_vec),
    "alpha": alphas,
    "observations": future,
    "steps": steps,
}

print(json.dumps(out, indent=1))
