#ifndef WICKLAB_MODELS_HPP
#define WICKLAB_MODELS_HPP

#include "wicklab/cutoff.hpp"
#include "wicklab/quasifree.hpp"
#include "wicklab/report.hpp"

namespace wicklab::models {

using cutoff::Grid;
using quasifree::TwoPointMatrix;

struct TimeGrid {
    int points = 0;
    double dt = 0.0;
    bool periodic = true;

    double t(int i) const { return i * dt; }
    Grid as_grid() const;
    void validate() const;
};

/// Harmonic oscillator ground state sampled on a time grid; the simplest
/// concrete quasi-free model, with a smooth rank-one phase kernel.
struct OscillatorModel {
    double omega = 1.0;
    TimeGrid grid;
};

/// W_ab = dt^2 (1/2w) exp(-i w (t_a - t_b)); the Gram form 2W is PSD of
/// rank one.
TwoPointMatrix oscillator_two_point(const OscillatorModel& model);

/// Periodic chain of coupled oscillators: ground state of
/// H = 1/2 sum pi_x^2 + 1/2 phi^T K phi with dispersion
/// w_k = sqrt(m^2 + 4 sin^2(k/2)).  Test functions live on the
/// (time x space) product grid, time axis first.
struct ChainModel {
    double mass = 1.0;
    int sites = 1;
    double dx = 1.0;
    TimeGrid tgrid;

    Grid as_grid() const;
    double dispersion(int mode) const;
};

/// Mode-sum correlator W_{(t,x),(s,y)} =
///   dt dx (1/L) sum_k (1/2 w_k) exp(-i w_k (t-s)) exp(i k (x-y)).
TwoPointMatrix chain_two_point(const ChainModel& model);

/// Independent route to the same correlator: numerically diagonalise the
/// coupling matrix K and form dt dx * 1/2 K^{-1/2} exp(-i K^{1/2} (t-s)).
Mat chain_covariance_oracle(const ChainModel& model);

CertificateReport chain_oracle_certificate(const ChainModel& model);

/// f = sum_j g_j^2 with the witnesses attached.
std::pair<RVec, std::vector<RVec>>
sum_of_squares_smearing(const std::vector<RVec>& generators);

/// Periodic forward difference (order 1) or centred second difference
/// (order 2) on the time grid; the transpose is the formal adjoint.
RMat finite_difference(int order, const TimeGrid& grid);

// common bump shapes for scenarios and tests
RVec triangle_bump(int d, int center, int half_width);
RVec gaussian_bump(int d, double center, double width);

} // namespace wicklab::models

#endif
