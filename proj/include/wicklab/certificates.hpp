#ifndef WICKLAB_CERTIFICATES_HPP
#define WICKLAB_CERTIFICATES_HPP

#include <functional>

#include "wicklab/cutoff.hpp"
#include "wicklab/report.hpp"
#include "wicklab/wick.hpp"

namespace wicklab::cert {

using cutoff::Grid;
using fock::BlockOperator;
using fock::OperatorSum;
using fock::TruncPtr;
using quasifree::QuotientMap;
using wick::SmearingSpec;
using wick::WickOperator;

// --- ladder and monomial certificates -------------------------------------

/// Spectral norm of every creation block equals sqrt(n+1) |f| exactly on
/// the symmetric sectors (the witness is f tensored with itself).
CertificateReport ladder_norm_certificate(int max_d, int n_max, int draws,
                                          Rng& rng);

/// [a(f), a*(g)] = <f,g> and [a(f), a(g)] = 0 on sectors below the cutoff.
CertificateReport ccr_certificate(int d, int n_max, int draws, Rng& rng);

/// Norm of the normal-ordered monomial block against
/// sqrt(n!(n-m+l)!)/(n-m)! |F|, including the saturating configuration
/// l = m = 1, n = 1, d = 1, and an independent full-tensor-space oracle
/// assembled through a Schmidt decomposition of F.
CertificateReport monomial_bound_certificate(int draws, Rng& rng);

/// Anti-normal-ordered products stay below the factor
/// (n+l)! / sqrt(n!(n-m+l)!).
CertificateReport ordering_factor_certificate(int draws, Rng& rng);

// --- state certificates ----------------------------------------------------

/// Embedding Gram identity, field linearity, vacuum two-point recovery and
/// the four-point pairing combinatorics of the quasi-free state.
CertificateReport state_moment_certificate(const QuotientMap& qm, TruncPtr trunc,
                                           int draws, Rng& rng);

// --- growth and perturbation certificates ----------------------------------

struct KonradyConstants {
    double d = 0.0;        // relative bound constant
    double c = 0.0;        // lower bound constant
    double c_prime = 0.0;  // c + sqrt(c^2 + 2 c d)
};

/// Minimal c with |O restricted to L(n)| <= c (n+2), then the iterated
/// growth bound |O^m psi| <= c^m (n+2)^m m! |psi| on every admissible probe,
/// in both the product and the relaxed form.
CertificateReport nelson_certificate(const OperatorSum& O, TruncPtr trunc,
                                     int probes, Rng& rng);

/// |B psi| <= |(A + d N) psi| + d |psi| for random probes, plus the
/// operator inequality (A + dN)^2 >= d^2 N^2.  A must be PSD block
/// diagonal.
CertificateReport wuest_certificate(const BlockOperator& A, const OperatorSum& B,
                                    double d, TruncPtr trunc, int probes,
                                    Rng& rng);

/// Constants for the two-hypothesis certificate: d from the kernel norms,
/// c from the half-frequency sum of state pairings.
KonradyConstants konrady_constant(const SmearingSpec& spec, const QuotientMap& qm,
                                  const Grid& grid,
                                  const wick::QuadraticKernel& ker);

/// Hypothesis (i): B*B <= d^2 (N+1)^2 and probe checks of
/// |B psi| <= d|N psi| + d|psi|; hypothesis (ii): the Hermitian part of
/// N(A+B) + c(N+1) is PSD on exact sectors.  Also probes the derived
/// inequality |d N psi| <= |(A+B+dN) psi| + c' |psi|.
CertificateReport konrady_certificate(const BlockOperator& A, const OperatorSum& B,
                                      const KonradyConstants& consts,
                                      TruncPtr trunc, int probes, Rng& rng);

/// (i) N Phi(h) = Phi(h)(N-1) + sqrt2 a*(h) blockwise;
/// (ii) N X + X N + 3 omega2(conj h, h)(N+1) PSD for X the normal-ordered
/// pair product of the field at h.
CertificateReport commutator_identity_certificate(const QuotientMap& qm,
                                                  TruncPtr trunc, int draws,
                                                  Rng& rng);

/// Hermiticity of the sector blocks of a Wick operator.
CertificateReport hermiticity_certificate(const WickOperator& op);

/// <vacuum, T vacuum> = 0 and <psi, T psi> = (omega2' - omega2) paired
/// with the smearing kernel, for random unit probes.
CertificateReport wick_pairing_certificate(const WickOperator& op,
                                           const QuotientMap& qm, int probes,
                                           Rng& rng);

/// Relative-bound inequality |B psi| <= (d/2)|(N+2) psi| with the provable
/// constant d = |F_K| + |F_Kbar|, plus the sharper |B psi| <= max-norm
/// |(N+1) psi| form.
CertificateReport wick_relative_bound_certificate(const WickOperator& op,
                                                  int probes, Rng& rng);

// --- truncation and compression scans ---------------------------------------

/// Rebuild the operator at each listed cutoff; report the shifts of the
/// lowest eigenvalues on a fixed low-sector compression, relative to the
/// spectral norm, and require a decreasing trend.
CertificateReport truncation_stability(
    const std::function<OperatorSum(TruncPtr)>& builder,
    const std::function<TruncPtr(int)>& trunc_maker,
    const std::vector<int>& n_max_list, int k_eigs, double shift_tol);

/// Hermiticity, real spectrum and (for class-S, no-derivative smearing)
/// positivity of the one-particle compression.
CertificateReport t1_scan(const Mat& T1, bool class_S_no_derivative);

} // namespace wicklab::cert

#endif
