"""Independent numpy evaluation of the values frozen in the C++ tests.

Run: python3 tests/oracle/oracle.py
"""
import numpy as np

c = 3e8
f0 = 10e9
lam = c / f0
d = lam / 2
M = N = 16
mu = 10e6 / 1e-6
dt = 0.1022e-6


def f_transmit(theta_deg, r, dt=dt):
    x = mu * dt * 2 * r / c + d / lam * np.sin(np.radians(theta_deg))
    return x, (x + 0.5) % 1 - 0.5


def steer(n, f):
    return np.exp(2j * np.pi * np.arange(n) * f)


def virtual(theta_deg, r, dt=dt):
    fr = d / lam * np.sin(np.radians(theta_deg))
    return np.kron(steer(N, fr), steer(M, f_transmit(theta_deg, r, dt)[1]))


def incm(jammers, dt=dt):
    R = np.eye(M * N, dtype=complex)
    for th, r, jnr in jammers:
        v = virtual(th, r, dt)
        R += 10 ** (jnr / 10) * np.outer(v, v.conj())
    return R


def sinr(w, v, R, snr_db):
    return 10 * np.log10(10 ** (snr_db / 10) * abs(w.conj() @ v) ** 2 / np.real(w.conj() @ R @ w))


def nsjm(R, v, q):
    lam_, U = np.linalg.eigh(R)
    U = U[:, ::-1]
    Un = U[:, q:]
    return Un @ (Un.conj().T @ v)


print("# steering")
fr = d / lam * np.sin(np.radians(0.5))
b = steer(N, fr)
print(f"receive 0.5deg b[15] = {b[15].real:.17g} {b[15].imag:.17g}")
for name, th, r in [("target", 0, 43e3), ("j1", 0, 64e3), ("j2", 0, 66e3), ("j3", 0, 84e3)]:
    u, w = f_transmit(th, r)
    print(f"{name}: f_T unwrapped {u:.15g} wrapped {w:.15g}")
a = steer(M, f_transmit(0, 43e3)[1])
print(f"transmit target a[15] = {a[15].real:.17g} {a[15].imag:.17g}")
v = virtual(0, 43e3)
print(f"virtual target v[255] = {v[255].real:.17g} {v[255].imag:.17g}; v[17] = {v[17].real:.17g} {v[17].imag:.17g}")
print(f"one-bin f_T step = {mu * dt * 2 * 15 / c:.15g}")

print("# default scene analytic SINR at 20 dB")
J = [(0, 64e3, 30), (0, 66e3, 30), (0, 84e3, 30)]
R = incm(J)
v0 = virtual(0, 43e3)
w_mvdr = np.linalg.solve(R, v0)
w_ns = nsjm(R, v0, 3)
print(f"mvdr {sinr(w_mvdr, v0, R, 20):.10f}")
print(f"nsjm {sinr(w_ns, v0, R, 20):.10f}")
print(f"matched no jamming {sinr(v0, v0, np.eye(256), 20):.10f}")
R0 = incm(J, dt=0)
v00 = virtual(0, 43e3, dt=0)
print(f"traditional mvdr {sinr(np.linalg.solve(R0, v00), v00, R0, 20):.10f}")
for snr in (0, 10, 30):
    print(f"  snr {snr}: mvdr {sinr(w_mvdr, v0, R, snr):.10f} nsjm {sinr(w_ns, v0, R, snr):.10f}")

print("# single point xi")
rng = np.random.default_rng(7)
w = rng.standard_normal(M) + 1j * rng.standard_normal(M)
fq, f00 = 0.3, 0.0
aq, a0 = steer(M, fq), steer(M, f00)
L = (w.conj() @ aq) / (w.conj() @ a0)
rho, phi = 10 ** (-50 / 20), np.angle(L)
psi = rho * np.exp(-1j * phi)
xi = (psi * (a0.conj() @ w) - aq.conj() @ w) / (M - psi * (a0.conj() @ aq))
print("w =", ", ".join(f"{{{x.real:.17g}, {x.imag:.17g}}}" for x in w))
print(f"xi = {xi.real:.17g} {xi.imag:.17g}")
w1 = w + xi * aq
print(f"|L| after = {abs((w1.conj() @ aq) / (w1.conj() @ a0)):.6g}")

print("# MVDR decomposition for one jammer")
sj = 10 ** 3
fj = 0.2
aj = steer(M, fj)
Rj = np.eye(M) + sj * np.outer(aj, aj.conj())
wm = np.linalg.solve(Rj, a0)
alpha = sj / (1 + sj * M)
xi_closed = -alpha * (aj.conj() @ a0)
wd = a0 + xi_closed * aj
print(f"closed-form xi = {xi_closed.real:.17g} {xi_closed.imag:.17g}")
print(f"max |mvdr/|| - decomposition/||| = {np.max(np.abs(wm / (wm.conj() @ a0) - wd / (wd.conj() @ a0))):.3g}")

print("# pattern and capon checks")
print(f"dirichlet null response at 1/M: {abs(steer(M, 0).conj() @ steer(M, 1 / M)) / M:.3g}")
