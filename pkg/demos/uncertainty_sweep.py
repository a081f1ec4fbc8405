"""Sweep the uncertainty product across scales.

For a few (n, m) the product U(rho) is tabulated on a geometric grid of
scales together with the exact-rational asymptote evaluated numerically,
showing convergence to the scale-free limit and the distance to the
universal bound n/2.
"""

from zonalvar import (
    expand_variances,
    limit_uncertainty,
    minimize_limit_over_order,
    poisson_uncertainty_via_s,
    poisson_wavelet_spec,
)

CASES = ((2, 1), (3, 1), (5, 2), (8, 3))
RHO_MIN, RHO_MAX, STEPS = 1e-3, 1.0, 7


def main():
    for n, m in CASES:
        _, limit_value = limit_uncertainty(n, m)
        _, _, product_series = expand_variances(n, m)
        print(f"n={n}, m={m}: bound n/2 = {n / 2}, "
              f"rho->0 limit = {limit_value:.10f}")
        print(f"  {'rho':>10}  {'product':>14}  {'asymptote':>14}  {'residual':>10}")
        ratio = (RHO_MAX / RHO_MIN) ** (1.0 / (STEPS - 1))
        for i in range(STEPS):
            rho = RHO_MIN * ratio**i
            res = poisson_uncertainty_via_s(poisson_wavelet_spec(n, m, rho))
            asymptote = product_series.evaluate(rho)
            print(f"  {rho:>10.4e}  {res.product:>14.10f}  "
                  f"{asymptote:>14.10f}  {res.product - asymptote:>10.2e}")
        excess = limit_value / (n / 2) - 1.0
        print(f"  limit sits {100 * excess:.2f}% above the bound\n")

    print("minimizing order per dimension (limit closest to the bound):")
    for n in (5, 9, 15, 25):
        best = minimize_limit_over_order(n)
        print(f"  n={n:>2}: m*={best.m_star:>2}, limit={best.value:.6f}, "
              f"ratio to n/2 = {best.value / (n / 2):.6f}")


if __name__ == "__main__":
    main()
