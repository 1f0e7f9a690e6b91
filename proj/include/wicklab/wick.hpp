#ifndef WICKLAB_WICK_HPP
#define WICKLAB_WICK_HPP

#include <string>
#include <vector>

#include "wicklab/quasifree.hpp"
#include "wicklab/report.hpp"

namespace wicklab::wick {

using fock::BlockOperator;
using fock::OperatorSum;
using fock::TruncPtr;
using quasifree::QuotientMap;
using quasifree::TwoPointMatrix;

/// One smearing term: a real-coefficient difference operator Q and a real
/// weight function f on the grid.  If f is a sum of squares the witnesses
/// g_i with f = sum_i g_i^2 are carried along.
struct SmearingTerm {
    RMat Qop;
    RVec f;
    std::vector<RVec> witnesses;
};

struct SmearingSpec {
    std::vector<SmearingTerm> terms;

    int d_test() const;
    bool class_S() const;  // every term carries witnesses
    void validate() const; // realness, shapes, witness sums

    /// Structured text: per-term sections with stencil offsets, sampled f
    /// values and optional witnesses.
    static SmearingSpec load(const std::string& path);

    /// Split every term into one term per witness square (f_j = g_j^2).
    SmearingSpec single_square_terms() const;
};

/// The smeared quadratic kernel and its pushforwards to quotient
/// coordinates.  F_test is the single source of truth; the pushforwards
/// follow the smearing conventions of the field operator:
///   to_K      = Q F Q^T          (two creation slots)
///   to_Kbar   = conj(Q) F conj(Q)^T  (two annihilation slots)
///   mixed     = Q F Q^H          (creation paired with annihilation)
struct QuadraticKernel {
    Mat F_test;
    Mat F_K;
    Mat F_Kbar;
    Mat F_mixed;
    double norm_FK = 0.0;      // Frobenius
    double norm_FKbar = 0.0;   // Frobenius
    double ordering_constant = 0.0;  // omega2 paired with F_test
};

QuadraticKernel kernel_from_smearing(const SmearingSpec& spec,
                                     const QuotientMap& qm);

/// Pushforwards for an arbitrary symmetric test-space kernel.
QuadraticKernel kernel_from_test_matrix(const Mat& F_test,
                                        const QuotientMap& qm);

/// Normal-ordered Wick square of the field, smeared with the kernel:
/// T = A + B+ + B- with A the mixed part and B the pure raising/lowering
/// parts, each weighted 1/2.  <vacuum, T vacuum> = 0 by construction.
struct WickOperator {
    BlockOperator A;       // degree 0
    BlockOperator Bplus;   // degree +2
    BlockOperator Bminus;  // degree -2
    QuadraticKernel kernel;

    OperatorSum T() const;
    OperatorSum B() const;
    TruncPtr trunc() const { return A.trunc(); }
};

WickOperator wick_square_operator(const QuadraticKernel& ker, TruncPtr trunc);

/// One-particle compression P_1 T P_1; only the degree-0 part contributes.
Mat compression_T1(const WickOperator& op);

/// dGamma(T1): T1 summed over tensor slots on every sector.
BlockOperator second_quantization(const Mat& T1, TruncPtr trunc);

/// Certify that the Wick square built over test functions supported in
/// `region` maps the Fock subspace generated from that region into itself.
CertificateReport support_invariance_check(const SmearingSpec& spec,
                                           const std::vector<int>& region,
                                           const QuotientMap& qm,
                                           TruncPtr trunc);

/// Row-major flattening used by normal_monomial tensors.
Vec flatten_rowmajor(const Mat& m);

} // namespace wicklab::wick

#endif
