#ifndef WICKLAB_CUTOFF_HPP
#define WICKLAB_CUTOFF_HPP

#include <optional>
#include <vector>

#include "wicklab/report.hpp"
#include "wicklab/wick.hpp"

namespace wicklab::cutoff {

using fock::TruncPtr;
using quasifree::QuotientMap;
using wick::SmearingSpec;

/// Product of periodic axes carrying the discrete frequency machinery.
/// Sites are indexed row-major; total size must match d_test.
struct Grid {
    std::vector<int> shape;
    std::vector<double> spacing;

    int size() const;
    int axes() const { return static_cast<int>(shape.size()); }
    /// Largest cutoff index with new frequencies (the Nyquist bound).
    int full_cutoff() const;
};

/// chi_k = phi_k (sum_l phi_l^2)^(-1/2): a partition of unity made of
/// squares, sum_k chi_k^2 = 1 pointwise.
struct SquaresPartition {
    std::vector<RVec> bumps;
    std::vector<RVec> chi;
};

SquaresPartition squares_partition(const std::vector<RVec>& bumps);

CertificateReport squares_partition_certificate(const SquaresPartition& p);

/// Refine class-S witnesses through a squares partition: each witness g
/// becomes the family g * chi_k * chi_l.  The sum of squares is unchanged.
SmearingSpec refine_witnesses(const SmearingSpec& spec,
                              const SquaresPartition& p);

/// Frequency-cutoff kernels at cutoff index n.  F_n sums the plane-wave
/// dyads over the symmetric frequency cube, F'_n folds each +-k pair onto
/// its canonical half with weight 2 (self-paired frequencies, including
/// zero and Nyquist, are counted once).  At n >= full_cutoff, F_n equals
/// the full smearing kernel.  Requires single-square witnesses.
std::pair<Mat, Mat> cutoff_kernels(const SmearingSpec& spec, const Grid& grid,
                                   int n);

/// Half-frequency sum of state pairings for one single-square term:
/// sum over canonical frequencies k of omega2(conj h_k, h_k) with
/// h_k = Q(f e^{+ik.}); every summand is nonnegative for a PSD state.
double half_frequency_pairing_sum(const RMat& Qop, const RVec& f,
                                  const Grid& grid, const Mat& W);

struct CutoffStep {
    int cutoff = 0;
    Mat F_n;
    Mat Fp_n;
    double c_n = 0.0;
    wick::WickOperator op;  // Wick square of F_n, without the c_n shift
    Mat M;                  // Hermitian compression of T_n = op + c_n I
};

struct CutoffFamily {
    std::vector<CutoffStep> steps;
    int cap = 0;           // compression sector cap
    int grid_full = 0;     // Nyquist cutoff of the grid
    double c_full = 0.0;
    Mat M_target;          // compression of T + c_full I
    wick::WickOperator base;
    TruncPtr trunc;
};

CutoffFamily build_cutoff_family(const SmearingSpec& spec, const QuotientMap& qm,
                                 TruncPtr trunc, const Grid& grid,
                                 const std::vector<int>& cutoffs);

/// c_n >= 0 and nondecreasing; first member PSD; every increment PSD.
CertificateReport family_monotone_certificate(const CutoffFamily& fam);

/// Final member reproduces T + c_full I blockwise.
CertificateReport family_exactness_certificate(const CutoffFamily& fam);

/// <psi, T_n psi> equals the state pairing of the folded kernel F'_n.
CertificateReport family_pairing_certificate(const CutoffFamily& fam,
                                             const QuotientMap& qm, int probes,
                                             Rng& rng);

/// (T_n + 1)^-1 - (T_{n+1} + 1)^-1 PSD across the family.
CertificateReport inverse_inequality_certificate(const CutoffFamily& fam);

/// Spectral functions of a Hermitian matrix: resolvents and projections.
class SpectralCalc {
public:
    explicit SpectralCalc(const Mat& herm);

    const RVec& eigenvalues() const { return eigs_; }

    /// (M + lambda)^-1 v; throws spectral_error near a singular shift.
    Vec resolvent(cplx lambda, const Vec& v) const;
    Mat resolvent_matrix(cplx lambda) const;

    /// Projector onto eigenvalues in the open interval (a, b); endpoints
    /// closer than 1e-6 to an eigenvalue raise spectral_error.
    Mat projector(double a, double b) const;
    int rank_in(double a, double b) const;

private:
    RVec eigs_;
    Mat vecs_;
};

/// Per-step record for the experiment CSV.
struct StepRow {
    int cutoff = 0;
    double c_n = 0.0;
    double increment_min_eig = 0.0;       // vs previous step
    std::vector<double> resolvent_residuals;   // per probe
    std::vector<double> projection_residuals;  // per probe
    int projector_rank = 0;
};

struct GraphLimitResult {
    CertificateReport report;
    std::vector<StepRow> rows;
    double interval_a = 0.0;
    double interval_b = 0.0;
};

/// Strong-resolvent-limit experiment: per probe, the residual sequence
/// |(T_n+1)^-1 v - (T_target+1)^-1 v| must be nonincreasing (1e-9 slack)
/// and end at <= 1e-10; spectral projections onto a fixed interval must
/// converge and their rank stabilise.
GraphLimitResult graph_limit_experiment(const CutoffFamily& fam, int probes,
                                        Rng& rng,
                                        std::optional<std::pair<double, double>>
                                            interval = std::nullopt);

} // namespace wicklab::cutoff

#endif
