#ifndef WICKLAB_KERNELS_HPP
#define WICKLAB_KERNELS_HPP

#include "wicklab/fock.hpp"

// Assembly kernels for the dense sector blocks.  Each has a serial
// reference implementation and an OpenMP variant parallel over source
// basis states; a column is always filled by a single thread in a fixed
// order, so both variants produce bitwise identical blocks.
//
// The public fock/wick entry points dispatch to the parallel variants;
// the serial ones are kept as the reference for tests and the benchmark.

namespace wicklab::fock::kernels {

/// Block of the normal-ordered monomial on source sector n.
/// F: flat row-major tensor of rank l+m (creation indices first).
Mat monomial_block_serial(const Vec& F, int l, int m,
                          const OccupationBasis& src,
                          const OccupationBasis& dst);
Mat monomial_block_parallel(const Vec& F, int l, int m,
                            const OccupationBasis& src,
                            const OccupationBasis& dst);

/// Block of dGamma(T1) on a sector: T1 summed over tensor slots,
/// assembled directly from occupation arithmetic.
Mat dgamma_block_serial(const Mat& T1, const OccupationBasis& basis);
Mat dgamma_block_parallel(const Mat& T1, const OccupationBasis& basis);

} // namespace wicklab::fock::kernels

#endif
