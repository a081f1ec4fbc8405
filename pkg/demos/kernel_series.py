"""Poisson kernel: closed form vs Gegenbauer coefficient series.

Shows pointwise agreement across angles, then the conditioning wall: near
theta = pi the alternating series carries envelope mass about
((1+r)/(1-r))^(n+1) times the tiny result, so double precision limits the
achievable agreement no matter how the series is summed.
"""

import math

from zonalvar import (
    poisson_kernel_coefficients,
    poisson_kernel_eval,
    sphere_dim,
    zonal_eval,
)


def rel_dev(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def main():
    n, rho = 3, 0.5
    dim = sphere_dim(n)
    f = poisson_kernel_coefficients(dim, rho)
    print(f"pointwise agreement on S^{n} at rho={rho}:")
    print(f"  {'theta/pi':>9}  {'closed form':>16}  {'series':>16}  {'rel dev':>9}")
    for k in range(0, 13, 2):
        theta = math.pi * k / 12.0
        closed = poisson_kernel_eval(dim, rho, theta)
        series = zonal_eval(f, theta)
        print(f"  {k / 12:>9.3f}  {closed:>16.12f}  {series:>16.12f}  "
              f"{rel_dev(closed, series):>9.1e}")

    print("\nconditioning at theta=pi as the scale shrinks:")
    print(f"  {'rho':>6}  {'rel dev':>9}  {'eps * cond':>10}")
    eps = 2.0**-52
    for rho in (1.0, 0.5, 0.2, 0.1, 0.05):
        dim = sphere_dim(n)
        f = poisson_kernel_coefficients(dim, rho)
        closed = poisson_kernel_eval(dim, rho, math.pi)
        series = zonal_eval(f, math.pi)
        r = math.exp(-rho)
        cond = ((1.0 + r) / (1.0 - r)) ** (n + 1)
        print(f"  {rho:>6.2f}  {rel_dev(closed, series):>9.1e}  {eps * cond:>10.1e}")
    print("the deviation tracks eps times the condition number, as it must")


if __name__ == "__main__":
    main()
