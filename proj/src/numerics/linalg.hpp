#pragma once

#include <cstddef>
#include <vector>

namespace depsgd::num {

using Vec = std::vector<double>;

/// Dense square matrix, row-major. Sized for the small symmetric systems
/// used by the inference code (d up to a few hundred).
class Mat {
public:
    Mat() = default;
    explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    static Mat identity(int n);

    int n() const { return n_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

private:
    int n_ = 0;
    std::vector<double> a_;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);          // Euclidean norm
double norm2_sq(const Vec& a);       // squared Euclidean norm

/// y += alpha * x
void axpy(double alpha, const Vec& x, Vec& y);

Vec sub(const Vec& a, const Vec& b);

/// A += alpha * x x^T
void add_outer(Mat& a, double alpha, const Vec& x);

Vec matvec(const Mat& a, const Vec& x);
Vec matvec_transposed(const Mat& a, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);

double frobenius_norm(const Mat& a);
double max_abs(const Mat& a);

bool all_finite(const Vec& v);

/// max|A - A^T| <= rel_tol * max|A|
bool is_symmetric(const Mat& a, double rel_tol = 1e-12);

}  // namespace depsgd::num
