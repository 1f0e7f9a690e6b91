#ifndef WICKLAB_QUASIFREE_HPP
#define WICKLAB_QUASIFREE_HPP

#include <string>

#include "wicklab/fock.hpp"

namespace wicklab::quasifree {

using fock::BlockOperator;
using fock::OneParticleSpace;
using fock::OperatorSum;
using fock::TruncPtr;

// State data on a discretised test-function space of dimension d_test.
//
// The smearing is bilinear: omega2(f, g) = f^T W g, no conjugation applied
// to either argument.  Positivity of the state is the statement that the
// sesquilinear Gram form G(f,g) = 2 omega2(conj f, g) = 2 f^H W g is PSD.

struct TwoPointMatrix {
    Mat W;
    std::string provenance;

    int dim() const { return static_cast<int>(W.rows()); }

    /// Structured text round trip: "dim N" then 2 N^2 decimals row-major.
    static TwoPointMatrix load(const std::string& path);
    void save(const std::string& path) const;
};

/// omega2(f, g) = f^T W g.
cplx omega2(const TwoPointMatrix& w, const Vec& f, const Vec& g);

/// Bilinear pairing of omega2 with a kernel G: sum_{x,y} G(x,y) W(x,y).
cplx omega2_pair(const TwoPointMatrix& w, const Mat& kernel);

/// One-particle space from the quotient by the Gram nullspace.  Q maps test
/// vectors to quotient coordinates with <Qf, Qg> = 2 omega2(conj f, g);
/// directions with Gram eigenvalue <= tol * lambda_max map to zero.
struct QuotientMap {
    int rank = 0;
    Mat Q;             // rank x d_test
    RVec kept_eigs;    // descending
    double tol_used = 0.0;
    Mat W_source;      // the two-point matrix this quotient came from
};

std::pair<OneParticleSpace, QuotientMap>
one_particle_space(const TwoPointMatrix& w, double tol = 1e-10);

/// [f] = Q f.
Vec embed(const Vec& f, const QuotientMap& qm);

/// Field operator (1/sqrt2)(abar(f) + a*(f)) with a*(f) = creation([f])
/// and abar(f) = annihilation of [conj f]; complex linear in f.
struct FieldOperator {
    BlockOperator creation_part;      // degree +1
    BlockOperator annihilation_part;  // degree -1
    Vec f_test;                       // provenance

    OperatorSum as_sum() const;
    fock::FockVector apply(const fock::FockVector& v) const;
};

FieldOperator field_op(const Vec& f, const QuotientMap& qm, TruncPtr trunc);

} // namespace wicklab::quasifree

#endif
