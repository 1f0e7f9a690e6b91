#ifndef WICKLAB_FOCK_HPP
#define WICKLAB_FOCK_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wicklab/errors.hpp"
#include "wicklab/linalg.hpp"

namespace wicklab::fock {

// Conventions
//
//   * One-particle space K = C^d with the standard basis e_i and inner
//     product <f,g> = sum_i conj(f_i) g_i.
//   * Occupation states |n_1,...,n_d> are unit norm; ladder coefficients
//     carry the sqrt(n_i+1) factors, so no symmetrisation matrices are
//     needed at runtime.
//   * creation_op(f)  = sum_i f_i      a*_i   (linear in f)
//   * annihilation_op(h) = sum_i h_i   a_i    (linear in h, which lives in
//     conjugate coordinates; the adjoint of creation_op(conj(h)))
//   * An operator application that would cross the particle-number cutoff
//     throws; validity is tracked per source sector by safe_ceiling.

struct OneParticleSpace {
    int dim = 0;
    std::string label;
};

using MultiIndex = std::vector<int>;

/// Ordered basis of the symmetric n-particle sector over d modes:
/// all multi-indices (n_1,...,n_d) with sum n, in lexicographic order.
class OccupationBasis {
public:
    OccupationBasis() = default;
    OccupationBasis(int dim, int n);

    int dim() const { return dim_; }
    int particles() const { return n_; }
    int size() const { return static_cast<int>(states_.size()); }
    const MultiIndex& state(int idx) const { return states_[idx]; }
    int index_of(const MultiIndex& m) const;

private:
    int dim_ = 0;
    int n_   = 0;
    std::vector<MultiIndex> states_;
    struct VecHash {
        std::size_t operator()(const MultiIndex& v) const;
    };
    std::unordered_map<MultiIndex, int, VecHash> lookup_;
};

/// sym_basis(d, n): enumerate the occupation basis of the n-particle
/// sector.  Throws config_error on invalid arguments.
OccupationBasis sym_basis(int d, int n);

/// Binomial coefficient, exact for the sizes that fit a truncation.
std::uint64_t binomial(int n, int k);

class FockTruncation;
using TruncPtr = std::shared_ptr<const FockTruncation>;

/// Symmetric Fock space over C^d with a hard particle-number cutoff.
class FockTruncation {
public:
    static TruncPtr make(const OneParticleSpace& space, int n_max,
                         std::int64_t dim_cap = 20000);

    const OneParticleSpace& space() const { return space_; }
    int dim() const { return space_.dim; }
    int n_max() const { return n_max_; }
    int sector_dim(int n) const { return sector_dims_[n]; }
    const OccupationBasis& sector(int n) const { return sectors_[n]; }
    std::int64_t total_dim() const { return total_dim_; }

    /// Offset of sector n inside the stacked coordinates of sectors 0..cap.
    int sector_offset(int n) const { return offsets_[n]; }

private:
    FockTruncation() = default;
    OneParticleSpace space_;
    int n_max_ = 0;
    std::vector<OccupationBasis> sectors_;
    std::vector<int> sector_dims_;
    std::vector<int> offsets_;
    std::int64_t total_dim_ = 0;
};

/// Element of the truncated Fock space, stored per sector.
class FockVector {
public:
    FockVector() = default;
    explicit FockVector(TruncPtr trunc);

    const TruncPtr& trunc() const { return trunc_; }
    Vec& sector(int n) { return comps_[n]; }
    const Vec& sector(int n) const { return comps_[n]; }
    int n_max() const { return static_cast<int>(comps_.size()) - 1; }

    double norm() const;
    cplx dot(const FockVector& other) const;  // antilinear in *this
    FockVector& operator+=(const FockVector& other);
    FockVector& operator*=(cplx a);
    void normalize();

    /// Highest sector carrying a nonzero component (-1 if zero).
    int top_sector(double tol = 0.0) const;

    /// Stack sectors 0..cap into one dense coordinate vector.
    Vec stacked(int cap) const;
    static FockVector from_stacked(TruncPtr trunc, const Vec& v, int cap);

private:
    TruncPtr trunc_;
    std::vector<Vec> comps_;
};

/// Fixed-degree operator on the truncated space: a map from source sector
/// n to a dense block into sector n+degree.  Blocks exist only for
/// sectors the cutoff leaves intact; safe_ceiling is the largest exact
/// source sector.  A missing block at n <= safe_ceiling means zero.
class BlockOperator {
public:
    BlockOperator() = default;
    BlockOperator(TruncPtr trunc, int degree, int safe_ceiling);

    const TruncPtr& trunc() const { return trunc_; }
    int degree() const { return degree_; }
    int safe_ceiling() const { return ceiling_; }

    bool has_block(int n) const { return blocks_.count(n) != 0; }
    const Mat& block(int n) const;
    void set_block(int n, Mat m);
    const std::map<int, Mat>& blocks() const { return blocks_; }

    /// Apply to a vector.  Throws truncation_error if the vector has
    /// support above the safe ceiling.
    FockVector apply(const FockVector& v) const;

    /// this . rhs  (rhs acts first); degrees add, ceilings propagate.
    BlockOperator compose(const BlockOperator& rhs) const;

    BlockOperator adjoint() const;
    BlockOperator scaled(cplx a) const;
    BlockOperator plus(const BlockOperator& other) const;  // same degree

private:
    TruncPtr trunc_;
    int degree_  = 0;
    int ceiling_ = -1;
    std::map<int, Mat> blocks_;
};

/// Sum of block operators of mixed degrees, merged per degree.
class OperatorSum {
public:
    OperatorSum() = default;
    explicit OperatorSum(TruncPtr trunc) : trunc_(std::move(trunc)) {}

    const TruncPtr& trunc() const { return trunc_; }
    const std::map<int, BlockOperator>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    void add(const BlockOperator& op);
    void add(const OperatorSum& other);
    OperatorSum scaled(cplx a) const;
    OperatorSum adjoint() const;
    OperatorSum compose(const OperatorSum& rhs) const;
    OperatorSum compose(const BlockOperator& rhs) const;

    FockVector apply(const FockVector& v) const;

    /// Dense matrix of the compression to sectors 0..cap.  Every block the
    /// compression touches must be exact, else truncation_error.
    Mat compress(int cap) const;

    /// Compression of the Hermitian part 1/2 (M + M*).
    Mat herm_compress(int cap) const;

    /// Rectangular matrix of the restriction L(src_cap) -> L(dst_cap);
    /// exact blocks only.
    Mat rect(int src_cap, int dst_cap) const;

    /// Largest cap such that compress(cap) is exact.
    int max_exact_cap() const;

    static OperatorSum identity_multiple(TruncPtr trunc, cplx a);

private:
    TruncPtr trunc_;
    std::map<int, BlockOperator> parts_;
};

// --- canonical operators --------------------------------------------------

/// a*(f): degree +1, block norm sqrt(n+1) |f| on sector n.
BlockOperator creation_op(const Vec& f, TruncPtr trunc);

/// sum_i h_i a_i with h in conjugate coordinates: degree -1, the adjoint
/// of creation_op(conj(h)).  Kills the vacuum.
BlockOperator annihilation_op(const Vec& h, TruncPtr trunc);

/// Number operator, n I on sector n.
BlockOperator number_op(TruncPtr trunc);

/// Normal-ordered monomial: sum_{i,j} F[i_1..i_l, j_1..j_m]
/// a*_{i_1}..a*_{i_l} a_{j_1}..a_{j_m}.  F is a flat row-major tensor of
/// rank l+m over d modes, creation indices first.  Degree l-m,
/// safe_ceiling n_max - l.
BlockOperator normal_monomial(const Vec& F, int l, int m, TruncPtr trunc);

/// Prop-style norm bound sqrt(n! (n-m+l)!) / (n-m)! for the monomial
/// block on sector n (zero for n < m).
double monomial_norm_bound(int l, int m, int n);

/// Deterministic random vector supported on sectors 0..cap, unit norm.
FockVector random_fock_vector(TruncPtr trunc, int cap, Rng& rng);

} // namespace wicklab::fock

#endif
