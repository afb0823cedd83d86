#include "numerics/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace depsgd::num {

namespace {

double offdiag_sq(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < a.n(); ++i)
        for (int j = i + 1; j < a.n(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return s;
}

}  // namespace

EigenDecomposition sym_eigendecompose(const Mat& input, double tol, int max_sweeps) {
    const int n = input.n();
    if (n == 0) throw std::invalid_argument("sym_eigendecompose: empty matrix");
    if (!is_symmetric(input))
        throw NotSymmetricError("sym_eigendecompose: input is not symmetric");

    Mat a = input;
    Mat v = Mat::identity(n);

    const double norm_a = frobenius_norm(a);
    const double threshold_sq = tol * tol * norm_a * norm_a;

    int sweep = 0;
    while (offdiag_sq(a) > threshold_sq && norm_a > 0.0) {
        if (++sweep > max_sweeps)
            throw NoConvergenceError("sym_eigendecompose: no convergence in " +
                                     std::to_string(max_sweeps) + " sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p), arq = a(r, q);
                        a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                        a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    Vec lam(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) lam[static_cast<std::size_t>(i)] = a(i, i);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return lam[static_cast<std::size_t>(i)] > lam[static_cast<std::size_t>(j)]; });

    EigenDecomposition out;
    out.u = Mat(n);
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.eigenvalues[static_cast<std::size_t>(k)] = lam[static_cast<std::size_t>(src)];
        for (int r = 0; r < n; ++r) out.u(r, k) = v(r, src);
    }
    return out;
}

Mat inv_sqrt_psd(const Mat& a, double floor) {
    const EigenDecomposition eig = sym_eigendecompose(a);
    const int n = a.n();
    for (int j = 0; j < n; ++j) {
        const double lam = eig.eigenvalues[static_cast<std::size_t>(j)];
        if (lam < floor)
            throw SingularCovarianceError("inv_sqrt_psd: eigenvalue " + std::to_string(lam) +
                                          " below floor " + std::to_string(floor));
    }
    Mat out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += eig.u(i, k) * eig.u(j, k) / std::sqrt(eig.eigenvalues[static_cast<std::size_t>(k)]);
            out(i, j) = s;
        }
    return out;
}

}  // namespace depsgd::num
