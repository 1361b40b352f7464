"""Hastings-McLeod Painleve II transcendent, Tracy-Widom laws, and the Lax-pair
functions of the soft-edge critical regime.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline, RectBivariateSpline
from scipy.linalg import solve_banded

from ..spectral import ConvergenceError
from .airy import airy, airy_tail_integral


@dataclass
class PainleveTable:
    """Hastings-McLeod solution tabulated on an ascending grid.

    ``I1(s) = int_s^inf q``, ``I2(s) = int_s^inf (x - s) q(x)^2 dx``.
    """

    s_grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    I1: np.ndarray
    I2: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._spl = {k: CubicSpline(self.s_grid, getattr(self, k)) for k in ("q", "q_prime", "I1", "I2")}

    def covers(self, s) -> bool:
        s = np.asarray(s)
        return bool(np.all((s >= self.s_grid[0]) & (s <= self.s_grid[-1])))

    def __call__(self, name: str, s):
        if not self.covers(s):
            raise ValueError(f"s outside table range [{self.s_grid[0]}, {self.s_grid[-1]}]")
        return self._spl[name](s)

    def to_csv(self, path: str) -> None:
        """Columns ``s, q, I1, I2, E2, E1, E4``."""
        E2 = np.exp(-self.I2)
        E1 = np.exp(-0.5 * self.I2 - 0.5 * self.I1)
        E4 = np.exp(-0.5 * self.I2) * np.cosh(0.5 * self.I1)
        data = np.column_stack([self.s_grid, self.q, self.I1, self.I2, E2, E1, E4])
        np.savetxt(path, data, delimiter=",", header="s,q,I1,I2,E2,E1,E4", comments="", fmt="%.17g")


def _numerov_residual(q, s, h2):
    f = s * q + 2.0 * q ** 3
    return q[2:] - 2.0 * q[1:-1] + q[:-2] - h2 / 12.0 * (f[2:] + 10.0 * f[1:-1] + f[:-2])


def hastings_mcleod(grid: tuple[float, float, float] = (-12.0, 8.0, 0.005),
                    tol: float = 1e-13, maxit: int = 60) -> PainleveTable:
    """Solve ``q'' = s q + 2 q^3`` with ``q ~ Ai`` at the right end as a boundary-value problem.

    Numerov discretization; boundary values ``q(s_max) = Ai(s_max)`` and
    ``q(s_min) = sqrt(-s/2) (1 + 1/(8 s^3))``; damped Newton with a banded
    solve.  ``q'`` is recovered by integrating ``q''`` from the right end,
    and ``I1``, ``I2`` by cumulative Simpson sums plus Airy tails beyond
    ``s_max``.

    Raises
    ------
    ConvergenceError
        If Newton does not reach ``tol`` in the max-norm of the update.
    """
    s_min, s_max, step = grid
    if s_max < 8 or s_min < -12 or s_min >= 0:
        raise ValueError("need s_max >= 8 and -12 <= s_min < 0")
    n = int(round((s_max - s_min) / step)) + 1
    s = np.linspace(s_min, s_max, n)
    h = s[1] - s[0]
    h2 = h * h
    ai, aip = airy(s)
    q = np.sqrt(np.maximum(-s / 2.0, 0.0) + ai ** 2)
    q[0] = np.sqrt(-s_min / 2.0) * (1.0 + 1.0 / (8.0 * s_min ** 3))
    q[-1] = ai[-1]
    res = _numerov_residual(q, s, h2)
    norm = np.abs(res).max()
    for it in range(maxit):
        fp = s + 6.0 * q ** 2
        ab = np.zeros((3, n - 2))
        ab[0, 1:] = 1.0 - h2 / 12.0 * fp[2:-1]
        ab[1, :] = -2.0 - 10.0 * h2 / 12.0 * fp[1:-1]
        ab[2, :-1] = 1.0 - h2 / 12.0 * fp[1:-2]
        dq = solve_banded((1, 1), ab, -res)
        lam = 1.0
        while True:
            trial = q.copy()
            trial[1:-1] += lam * dq
            rt = _numerov_residual(trial, s, h2)
            nt = np.abs(rt).max()
            if nt < norm or lam < 1e-4:
                break
            lam *= 0.5
        q, res, norm = trial, rt, nt
        if lam * np.abs(dq).max() < tol:
            break
    else:
        raise ConvergenceError("Newton iteration for the Hastings-McLeod BVP did not converge")
    if np.any(q <= 0):
        raise ConvergenceError("BVP converged to a solution that is not positive")
    # integrals from the right end: reverse, accumulate, reverse back
    qpp = s * q + 2.0 * q ** 3
    rev = lambda y: cumulative_simpson(y[::-1], dx=h, initial=0.0)[::-1]  # noqa: E731
    # rev(y)[i] = int_{s_i}^{s_max} y
    q_prime = aip[-1] - rev(qpp)
    I1 = rev(q) + airy_tail_integral(s_max)
    J = rev(q * q) + airy_tail_integral(s_max, squared=True)
    I2 = rev(J) + airy_tail_integral(s_max, power=1, squared=True)
    return PainleveTable(s, q, q_prime, I1, I2, {"newton_iterations": it + 1, "residual": norm})


@functools.lru_cache(maxsize=2)
def default_table() -> PainleveTable:
    """Table on ``[-12, 8]`` with step 0.005 (built once per process)."""
    return hastings_mcleod()


def tw_cdf(beta: int, s, table: PainleveTable | None = None):
    """Tracy-Widom largest-eigenvalue distribution ``E_beta(s)`` for beta in {1, 2, 4}.

    ``E2 = exp(-I2)``, ``E1 = E2^{1/2} exp(-I1/2)``, ``E4 = E2^{1/2} cosh(I1/2)``.
    """
    t = table or default_table()
    I2 = t("I2", s)
    if beta == 2:
        out = np.exp(-I2)
    elif beta == 1:
        out = np.exp(-0.5 * I2 - 0.5 * t("I1", s))
    elif beta == 4:
        out = np.exp(-0.5 * I2) * np.cosh(0.5 * t("I1", s))
    else:
        raise ValueError("beta must be 1, 2 or 4")
    return out if np.ndim(out) else float(out)


@dataclass
class LaxField:
    """Solutions ``f, g`` of the Lax-pair system on an ``(s, w)`` grid (``f[i, j]`` at ``s_i, w_j``)."""

    s_grid: np.ndarray
    w_grid: np.ndarray
    f: np.ndarray
    g: np.ndarray
    E: np.ndarray
    E2: np.ndarray

    def __post_init__(self) -> None:
        rE = np.sqrt(self.E)[:, None]
        r2 = np.sqrt(self.E2)[:, None]
        self.F2 = self.f * self.E2[:, None]
        self.F4 = 0.5 * ((self.f + self.g) / rE + (self.f - self.g) * rE) * r2
        k = min(3, self.w_grid.size - 1)
        self._spl = {2: RectBivariateSpline(self.s_grid, self.w_grid, self.F2, kx=3, ky=k),
                     4: RectBivariateSpline(self.s_grid, self.w_grid, self.F4, kx=3, ky=k)}

    def to_csv(self, path: str, beta: int = 2) -> None:
        """Long-format columns ``s, w, F``."""
        F = self.F2 if beta == 2 else self.F4
        S, W = np.meshgrid(self.s_grid, self.w_grid, indexing="ij")
        np.savetxt(path, np.column_stack([S.ravel(), W.ravel(), F.ravel()]), delimiter=",",
                   header="s,w,F", comments="", fmt="%.17g")


def lax_propagate(table: PainleveTable, w_max: float, dw: float = 1e-3, *,
                  s_range: tuple[float, float] | None = None, w_min: float = 0.0,
                  s_stride: int = 1, w_store: float = 0.01, method: str = "riccati",
                  pad: float = 4.0) -> LaxField:
    """Solve the Lax-pair system in ``w`` with ``f = g = E(s) = exp(-I1)`` at ``w = 0``.

    Classical fourth-order Runge-Kutta with step at most ``dw`` (and at most
    1e-3), independently for every ``s`` of the table (restricted to
    ``s_range`` and thinned by ``s_stride``).  The state is stored every
    ``w_store``.

    ``method="forward"`` marches the 2x2 system directly from ``w = 0``.  The
    wanted solution is the one without the mode growing like
    ``exp(w^3/3 - s w)``, so rounding and truncation errors are amplified by
    that factor; this is adequate for moderate ``w`` only.

    ``method="riccati"`` (default, ``w >= 0``) integrates ``r = g/f`` backwards
    from ``w_max + pad``, where it starts on the non-growing branch, together
    with ``Lambda(w) = int_w (d log f)``; then ``f = E exp(Lambda(0) - Lambda(w))``
    and ``g = r f``.  Both backward integrations are contracting.  The value
    ``r(0)``, which must equal 1 for the prescribed initial data, is
    returned in ``meta["r0_error"]`` as a consistency check.

    ``w_min < 0`` extends the field by forward marching towards negative ``w``.

    Raises
    ------
    ConvergenceError
        On overflow; shrink the ``s`` range or ``|w|``.
    """
    if w_max <= 0:
        raise ValueError("w_max must be positive")
    if method not in ("riccati", "forward"):
        raise ValueError("method must be 'riccati' or 'forward'")
    dw = min(dw, 1e-3)
    sel = np.ones(table.s_grid.size, dtype=bool)
    if s_range is not None:
        sel = (table.s_grid >= s_range[0] - 1e-12) & (table.s_grid <= s_range[1] + 1e-12)
    idx = np.flatnonzero(sel)[::s_stride]
    s = table.s_grid[idx]
    q = table.q[idx]
    qp = table.q_prime[idx]
    E = np.exp(-table.I1[idx])
    E2 = np.exp(-table.I2[idx])
    q2 = q * q

    def rhs(w, f, g):
        return q2 * f - (w * q + qp) * g, (-w * q + qp) * f + (w * w - s - q2) * g

    def rk4(fun, w, y, h):
        k1 = fun(w, y)
        k2 = fun(w + h / 2, [a + h / 2 * b for a, b in zip(y, k1)])
        k3 = fun(w + h / 2, [a + h / 2 * b for a, b in zip(y, k2)])
        k4 = fun(w + h, [a + h * b for a, b in zip(y, k3)])
        return [a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]

    def forward(w_end):
        nsteps = int(np.ceil(abs(w_end) / dw - 1e-9))
        h = w_end / nsteps
        every = max(1, int(round(w_store / abs(h))))
        y = [E.copy(), E.copy()]
        ws, fs, gs = [0.0], [E.copy()], [E.copy()]
        with np.errstate(over="raise", invalid="raise"):
            try:
                for k in range(1, nsteps + 1):
                    y = rk4(lambda w, v: rhs(w, v[0], v[1]), (k - 1) * h, y, h)
                    if k % every == 0 or k == nsteps:
                        ws.append(k * h)
                        fs.append(y[0].copy())
                        gs.append(y[1].copy())
            except FloatingPointError as exc:
                raise ConvergenceError("Lax-pair integration overflowed; shrink the s range or |w|") from exc
        return np.array(ws), np.array(fs).T, np.array(gs).T

    def riccati():
        h_store = w_store
        every = max(1, int(np.ceil(h_store / dw - 1e-9)))
        h = h_store / every
        n_store = int(np.ceil(w_max / h_store - 1e-9))
        w_top = n_store * h_store
        n_pad = int(np.ceil(pad / h))
        W = w_top + n_pad * h
        # non-growing branch at W: small root of (Wq+q') r^2 + (W^2-s-2q^2) r + (q'-Wq) = 0
        A = W * q + qp
        B = W * W - s - 2.0 * q2
        C = qp - W * q
        r = -2.0 * C / (B + np.sqrt(B * B - 4.0 * A * C))

        def fun(w, v):
            rr = v[0]
            dr = (qp - w * q) + (w * w - s - 2.0 * q2) * rr + (w * q + qp) * rr * rr
            return [dr, -(q2 - (w * q + qp) * rr)]  # d Lambda/dw with Lambda(w) = int_w^W phi

        y = [r, np.zeros_like(r)]
        total = n_store * every + n_pad
        rs, ls, ws = [], [], []
        with np.errstate(over="raise", invalid="raise"):
            try:
                for k in range(total, 0, -1):
                    if k <= n_store * every and k % every == 0:
                        ws.append(k * h)
                        rs.append(y[0].copy())
                        ls.append(y[1].copy())
                    y = rk4(fun, k * h, y, -h)
            except FloatingPointError as exc:
                raise ConvergenceError("Riccati integration overflowed; shrink the s range or w_max") from exc
        ws.append(0.0)
        rs.append(y[0].copy())
        ls.append(y[1].copy())
        ws = np.array(ws[::-1])
        rs = np.array(rs[::-1]).T
        ls = np.array(ls[::-1]).T
        logf = ls[:, :1] - ls
        # Below w = sqrt(s) the backward sweep expands errors by up to
        # exp(int (s - w^2) dw); there the forward sweep from r(0) = 1 contracts.
        pos = np.flatnonzero(s > 0)
        mismatch = np.abs(rs[:, 0] - 1.0)
        if pos.size:
            jsw = np.minimum(np.rint(np.sqrt(s[pos]) / h_store).astype(int), ws.size - 1)
            sp = s[pos]
            qq, qpp, q2p = q[pos], qp[pos], q2[pos]

            def fwd(w, v):
                rr = v[0]
                dr = (qpp - w * qq) + (w * w - sp - 2.0 * q2p) * rr + (w * qq + qpp) * rr * rr
                return [dr, q2p - (w * qq + qpp) * rr]  # d log f / dw

            y = [np.ones(pos.size), np.zeros(pos.size)]
            rf = np.empty((pos.size, jsw.max() + 1))
            lf = np.empty_like(rf)
            rf[:, 0], lf[:, 0] = 1.0, 0.0
            with np.errstate(over="raise", invalid="raise"):
                try:
                    for k in range(1, jsw.max() * every + 1):
                        y = rk4(fwd, (k - 1) * h, y, h)
                        if k % every == 0:
                            rf[:, k // every] = y[0]
                            lf[:, k // every] = y[1]
                except FloatingPointError as exc:
                    raise ConvergenceError("Riccati integration overflowed; shrink the s range") from exc
            for n, i in enumerate(pos):
                j = jsw[n]
                mismatch[i] = abs(rf[n, j] - rs[i, j])
                logf[i, j:] = lf[n, j] + logf[i, j:] - logf[i, j]
                logf[i, :j + 1] = lf[n, :j + 1]
                rs[i, :j + 1] = rf[n, :j + 1]
        f = E[:, None] * np.exp(logf)
        return ws, f, rs * f, float(mismatch.max())

    meta = {"method": method}
    if method == "forward":
        w_up, f_up, g_up = forward(w_max)
    else:
        w_up, f_up, g_up, meta["r0_error"] = riccati()
    if w_min < 0:
        w_dn, f_dn, g_dn = forward(w_min)
        w_up = np.concatenate([w_dn[:0:-1], w_up])
        f_up = np.concatenate([f_dn[:, :0:-1], f_up], axis=1)
        g_up = np.concatenate([g_dn[:, :0:-1], g_up], axis=1)
    fld = LaxField(s, w_up, f_up, g_up, E, E2)
    fld.meta = meta
    return fld


@functools.lru_cache(maxsize=2)
def default_field() -> LaxField:
    """Lax field on ``s in [-8, 8]`` (step 0.01) and ``w in [0, 8]`` (stored every 0.01)."""
    return lax_propagate(default_table(), 8.0, s_range=(-8.0, 8.0), s_stride=2)


def crit_cdf(beta: int, w, s, field: LaxField | None = None):
    """Critical-regime largest-eigenvalue distribution ``F_{beta, w}(s)`` for beta in {2, 4}.

    ``F_2 = f E2``; ``F_4 = ((f + g) E^{-1/2} + (f - g) E^{1/2}) E2^{1/2} / 2``.
    """
    fld = field or default_field()
    if beta not in (2, 4):
        raise ValueError("beta must be 2 or 4")
    s_a = np.asarray(s, dtype=float)
    w_a = np.asarray(w, dtype=float)
    if np.any(s_a < fld.s_grid[0] - 1e-12) or np.any(s_a > fld.s_grid[-1] + 1e-12):
        raise ValueError("s outside the Lax field")
    if np.any(w_a < fld.w_grid[0] - 1e-12) or np.any(w_a > fld.w_grid[-1] + 1e-12):
        raise ValueError("w outside the Lax field")
    s_b, w_b = np.broadcast_arrays(s_a, w_a)
    out = fld._spl[beta].ev(s_b, w_b)
    return out if out.ndim else float(out)
