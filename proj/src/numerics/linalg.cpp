#include "numerics/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace depsgd::num {

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2_sq(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

double norm2(const Vec& a) { return std::sqrt(norm2_sq(a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

void add_outer(Mat& a, double alpha, const Vec& x) {
    const int n = a.n();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("add_outer: size mismatch");
    for (int i = 0; i < n; ++i) {
        const double xi = alpha * x[i];
        for (int j = 0; j < n; ++j) a(i, j) += xi * x[j];
    }
}

Vec matvec(const Mat& a, const Vec& x) {
    const int n = a.n();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("matvec: size mismatch");
    Vec y(x.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vec matvec_transposed(const Mat& a, const Vec& x) {
    const int n = a.n();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("matvec_transposed: size mismatch");
    Vec y(x.size(), 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

Mat matmul(const Mat& a, const Mat& b) {
    const int n = a.n();
    if (b.n() != n) throw std::invalid_argument("matmul: size mismatch");
    Mat c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double frobenius_norm(const Mat& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

double max_abs(const Mat& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::fabs(x));
    return m;
}

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool is_symmetric(const Mat& a, double rel_tol) {
    const int n = a.n();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
    return worst <= rel_tol * std::max(max_abs(a), 1e-300);
}

}  // namespace depsgd::num
