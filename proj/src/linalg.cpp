#include "wicklab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wicklab {

double spectral_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    if (std::min(m.rows(), m.cols()) <= 128) {
        Eigen::JacobiSVD<Mat> svd(m);
        return svd.singularValues()(0);
    }
    // sqrt of the top eigenvalue of the Gram matrix
    Mat g = (m.cols() <= m.rows()) ? Mat(m.adjoint() * m) : Mat(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

double hermiticity_residual(const Mat& m) {
    double scale = std::max(1.0, m.norm());
    return (m - m.adjoint()).norm() / scale;
}

double min_eig_hermitian(const Mat& m) {
    if (m.rows() == 0) return 0.0;
    Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

RVec eigvals_hermitian(const Mat& m) {
    if (m.rows() == 0) return RVec();
    Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double psd_tolerance(double base_tol, double op_norm) {
    return op_norm > 1e3 ? base_tol * (op_norm / 1e3) : base_tol;
}

double Rng::uniform() {
    // 53 uniform bits, identical on every platform
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r  = std::sqrt(-2.0 * std::log(u1));
    double a  = 2.0 * M_PI * u2;
    spare_      = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

cplx Rng::cnormal() {
    double re = normal();
    double im = normal();
    return cplx(re, im) / std::sqrt(2.0);
}

Vec Rng::cnormal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cnormal();
    return v;
}

Mat Rng::cnormal_mat(int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = cnormal();
    return m;
}

RVec Rng::normal_vec(int n) {
    RVec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string to_hex(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace wicklab
