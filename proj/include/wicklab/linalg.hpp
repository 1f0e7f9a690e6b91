#ifndef WICKLAB_LINALG_HPP
#define WICKLAB_LINALG_HPP

#define EIGEN_DONT_PARALLELIZE

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace wicklab {

using cplx = std::complex<double>;
using Mat  = Eigen::MatrixXcd;
using Vec  = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Largest singular value.  Small matrices go through a Jacobi SVD,
/// larger ones through the Gram matrix.
double spectral_norm(const Mat& m);

/// Frobenius deviation from Hermiticity, relative to max(1, |m|_F).
double hermiticity_residual(const Mat& m);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eig_hermitian(const Mat& m);

/// All eigenvalues of the Hermitian part, ascending.
RVec eigvals_hermitian(const Mat& m);

/// PSD tolerances are loosened for badly scaled operators: the base
/// tolerance is multiplied by |m| / 1e3 once the norm exceeds 1e3.
double psd_tolerance(double base_tol, double op_norm);

// --- deterministic randomness -------------------------------------------
//
// The standard <random> distributions are implementation defined, so all
// probe generation goes through this fixed Box-Muller construction.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();                 // [0,1)
    double normal();                  // N(0,1)
    cplx   cnormal();                 // complex standard normal
    Vec    cnormal_vec(int n);
    Mat    cnormal_mat(int r, int c);
    RVec   normal_vec(int n);

private:
    std::mt19937_64 eng_;
    bool   have_spare_ = false;
    double spare_      = 0.0;
};

/// FNV-1a, used to derive per-certificate seeds and config digests.
std::uint64_t fnv1a(const std::string& s);

/// Shortest round-trip formatting (17 significant digits).
std::string format_double(double x);

std::string to_hex(std::uint64_t v);

} // namespace wicklab

#endif
