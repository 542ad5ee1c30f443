#!/usr/bin/env python3
"""Independent high-precision reference values for the C++ test suite.

Nothing here shares code with the library: the seeded generator is
re-implemented from its definition (mt19937_64 + Box-Muller), the dynamics are
evaluated in closed form from an mpmath eigendecomposition, and integrals use
adaptive quadrature at 30 digits. The printed header is checked in as
tests/frozen_values.hpp; rerun with

    python3 tests/oracles/generate_frozen.py > tests/frozen_values.hpp
"""
import math

import mpmath as mp

mp.mp.dps = 30
MASK = (1 << 64) - 1


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK
        self.index = 312

    def _twist(self):
        for i in range(312):
            x = (self.mt[i] & 0xFFFFFFFF80000000) | (self.mt[(i + 1) % 312] & 0x7FFFFFFF)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.index = 0

    def __call__(self):
        if self.index >= 312:
            self._twist()
        y = self.mt[self.index]
        self.index += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK


class Gaussian:
    def __init__(self, seed):
        self.engine = MT19937_64(seed)
        self.cached = None

    def uniform_open(self):
        while True:
            u = (self.engine() >> 11) * 2.0 ** -53
            if u > 0.0:
                return u

    def next(self):
        if self.cached is not None:
            v, self.cached = self.cached, None
            return v
        u1, u2 = self.uniform_open(), self.uniform_open()
        r = math.sqrt(-2.0 * math.log(u1))
        a = 2.0 * math.pi * u2
        self.cached = r * math.sin(a)
        return r * math.cos(a)

    def next_complex(self):
        re, im = self.next(), self.next()
        return complex(re * math.sqrt(2) / 2, im * math.sqrt(2) / 2)


def random_hermitian(dim, seed):
    g = Gaussian(seed)
    a = [[g.next_complex() for _ in range(dim)] for _ in range(dim)]
    return [[(a[i][j] + a[j][i].conjugate()) * 0.5 for j in range(dim)] for i in range(dim)]


def random_state(dim, seed):
    g = Gaussian(seed ^ 0x9E3779B97F4A7C15)
    v = [g.next_complex() for _ in range(dim)]
    n = math.sqrt(sum(abs(z) ** 2 for z in v))
    return [z / n for z in v]


class System:
    def __init__(self, h, psi0, hbar=1):
        self.d = len(psi0)
        self.H = mp.matrix([[mp.mpc(z.real, z.imag) for z in row] for row in h])
        self.psi0 = mp.matrix([mp.mpc(z.real, z.imag) for z in psi0])
        norm = mp.sqrt(sum(abs(self.psi0[i]) ** 2 for i in range(self.d)))
        self.psi0 = self.psi0 / norm
        self.hbar = mp.mpf(hbar)
        self.E, self.Q = mp.eighe(self.H)
        self.amp = [sum(mp.conj(self.Q[i, k]) * self.psi0[i] for i in range(self.d))
                    for k in range(self.d)]

    def state(self, t):
        ph = [mp.expj(-self.E[k] * t / self.hbar) * self.amp[k] for k in range(self.d)]
        return [sum(self.Q[i, k] * ph[k] for k in range(self.d)) for i in range(self.d)]

    def overlap(self, t):
        return sum(abs(self.amp[k]) ** 2 * mp.expj(-self.E[k] * t / self.hbar)
                   for k in range(self.d))

    def mean_energy(self):
        return sum(abs(a) ** 2 * e for a, e in zip(self.amp, self.E))

    def delta_h(self):
        m = self.mean_energy()
        return mp.sqrt(sum(abs(a) ** 2 * (e - m) ** 2 for a, e in zip(self.amp, self.E)))

    def total_phase(self, T, samples=8000):
        prev, acc = self.overlap(0), mp.mpf(0)
        for j in range(1, samples + 1):
            cur = self.overlap(T * j / samples)
            step = mp.arg(cur * mp.conj(prev))
            assert abs(step) < 1
            acc += step
            prev = cur
        return acc

    def orthogonal_phase(self, t0, T):
        # With u_k(t) = exp(-i E_k t / hbar) - 1 (via expm1, exact near t = 0):
        #   p = psi - c psi0 = sum_k amp_k u_k q_k - (c - 1) psi0,  c - 1 = sum_k |amp_k|^2 u_k,
        # and dp/dt follows from du_k/dt = -i E_k (u_k + 1) / hbar. Forming p as a difference
        # of O(1) vectors would lose every digit at the quadrature nodes closest to t = 0.
        def integrand(t):
            u = [mp.expm1(-1j * self.E[k] * t / self.hbar) for k in range(self.d)]
            du = [-1j * self.E[k] * (u[k] + 1) / self.hbar for k in range(self.d)]
            cm1 = sum(abs(self.amp[k]) ** 2 * u[k] for k in range(self.d))
            dc = sum(abs(self.amp[k]) ** 2 * du[k] for k in range(self.d))
            p = [sum(self.Q[i, k] * self.amp[k] * u[k] for k in range(self.d)) - cm1 * self.psi0[i]
                 for i in range(self.d)]
            dp = [sum(self.Q[i, k] * self.amp[k] * du[k] for k in range(self.d)) - dc * self.psi0[i]
                  for i in range(self.d)]
            num = sum(mp.conj(p[i]) * dp[i] for i in range(self.d))
            den = sum(abs(x) ** 2 for x in p)
            return mp.im(num) / den
        return mp.quad(integrand, mp.linspace(t0, T, 17))

    def f_bar(self, T):
        def tan_half(t):
            c = abs(self.overlap(t))
            return mp.sqrt(max(mp.mpf(0), 1 - c ** 2)) / c
        return mp.quad(tan_half, mp.linspace(0, T, 17)) / T


def precession(theta, omega=1):
    h = [[omega / 2, 0], [0, -omega / 2]]
    return System(h, [complex(math.cos(theta / 2)), complex(math.sin(theta / 2))])


def emit(name, value, comment=None):
    if comment:
        print(f"// {comment}")
    print(f"inline constexpr double {name} = {mp.nstr(value, 20, min_fixed=-1, max_fixed=-1)};")


def main():
    print("#pragma once")
    print()
    print("// Generated by tests/oracles/generate_frozen.py (mpmath, 30 digits). Do not edit.")
    print()
    print("namespace frozen {")
    print()

    h = random_hermitian(2, 0)
    emit("kRandomH2Seed0_00", h[0][0].real, "random_hermitian(2, 0) entries from the re-implemented generator")
    emit("kRandomH2Seed0_01_re", h[0][1].real)
    emit("kRandomH2Seed0_01_im", h[0][1].imag)
    emit("kRandomH2Seed0_11", h[1][1].real)
    s = random_state(4, 7)
    emit("kRandomState4Seed7_0_re", s[0].real, "random_state(4, 7) first amplitude")
    emit("kRandomState4Seed7_0_im", s[0].imag)
    print()

    for theta_deg in (30, 60):
        sys = precession(mp.pi * theta_deg / 180)
        T = 2 * mp.pi
        fb = sys.f_bar(T)
        dh = sys.delta_h()
        phi_g = -mp.pi * (1 - mp.cos(mp.pi * theta_deg / 180))
        emit(f"kPrecession{theta_deg}FBar", fb, f"precession at {theta_deg} deg, one period")
        emit(f"kPrecession{theta_deg}GeometricBound", abs(phi_g) / (dh * fb))
    sys = precession(mp.mpf("1e-3"))
    T = 2 * mp.pi
    phi = sys.total_phase(T)
    emit("kPrecessionSmallAnglePhiG", phi - (-sys.mean_energy() * T),
         "precession at theta = 1e-3, one period: Phi_G(T)")
    print()

    for dim, seed in ((4, 1), (6, 2), (8, 3)):
        sys = System(random_hermitian(dim, seed), random_state(dim, seed))
        T = mp.mpf(2)
        tag = f"RandomD{dim}S{seed}"
        phi = sys.total_phase(T)
        phi_d = -sys.mean_energy() * T
        c = sys.overlap(T)
        emit(f"k{tag}Phi", phi, f"random-d{dim}-s{seed}, T = 2")
        emit(f"k{tag}PhiD", phi_d)
        emit(f"k{tag}PhiG", phi - phi_d)
        # The orthogonal component is absent at t = 0; its phase is anchored at the
        # first grid point of the 4096-step default grid.
        emit(f"k{tag}PhiBar", sys.orthogonal_phase(T / 4096, T))
        emit(f"k{tag}S0", 2 * mp.acos(abs(c)))
        emit(f"k{tag}DeltaH", sys.delta_h())
        emit(f"k{tag}Length", 2 * sys.delta_h() * T)
        emit(f"k{tag}FBar", sys.f_bar(T))
    print()
    print("}  // namespace frozen")


if __name__ == "__main__":
    main()
