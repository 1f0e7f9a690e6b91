#include "wicklab/kernels.hpp"

#include <cmath>

namespace wicklab::fock::kernels {

namespace {

// Fill one column: the image of source state |nu>.
void monomial_column(const Vec& F, int l, int m, int d,
                     const OccupationBasis& src, const OccupationBasis& dst,
                     int col, Mat& out) {
    const MultiIndex& nu = src.state(col);
    const int lm = l + m;

    std::vector<int> tup(lm, 0);       // (i_1..i_l, j_1..j_m)
    std::vector<int> occ(d), occ2(d);

    const std::int64_t count = [&] {
        std::int64_t c = 1;
        for (int k = 0; k < lm; ++k) c *= d;
        return c;
    }();

    for (std::int64_t flat = 0; flat < count; ++flat) {
        // decode row-major tuple
        std::int64_t rest = flat;
        for (int k = lm - 1; k >= 0; --k) {
            tup[k] = static_cast<int>(rest % d);
            rest /= d;
        }
        cplx coeff = F(flat);
        if (coeff == cplx(0.0, 0.0)) continue;

        // annihilators first (order among them is irrelevant, they commute)
        for (int i = 0; i < d; ++i) occ[i] = nu[i];
        double amp = 1.0;
        bool killed = false;
        for (int k = l; k < lm; ++k) {
            int j = tup[k];
            if (occ[j] == 0) { killed = true; break; }
            amp *= std::sqrt(static_cast<double>(occ[j]));
            --occ[j];
        }
        if (killed) continue;

        for (int i = 0; i < d; ++i) occ2[i] = occ[i];
        for (int k = 0; k < l; ++k) {
            int i = tup[k];
            amp *= std::sqrt(static_cast<double>(occ2[i] + 1));
            ++occ2[i];
        }

        out(dst.index_of(occ2), col) += coeff * amp;
    }
}

void dgamma_column(const Mat& T1, const OccupationBasis& basis, int col, Mat& out) {
    const MultiIndex& nu = basis.state(col);
    const int d = basis.dim();

    // diagonal slot sum
    cplx diag(0.0, 0.0);
    for (int p = 0; p < d; ++p)
        if (nu[p] > 0) diag += T1(p, p) * static_cast<double>(nu[p]);
    out(col, col) += diag;

    // single-mode hops q -> p
    MultiIndex mu = nu;
    for (int q = 0; q < d; ++q) {
        if (nu[q] == 0) continue;
        for (int p = 0; p < d; ++p) {
            if (p == q) continue;
            if (T1(p, q) == cplx(0.0, 0.0)) continue;
            mu[q] -= 1;
            mu[p] += 1;
            double amp = std::sqrt(static_cast<double>(nu[q]) *
                                   static_cast<double>(nu[p] + 1));
            out(basis.index_of(mu), col) += T1(p, q) * amp;
            mu[q] += 1;
            mu[p] -= 1;
        }
    }
}

} // namespace

Mat monomial_block_serial(const Vec& F, int l, int m,
                          const OccupationBasis& src, const OccupationBasis& dst) {
    Mat out = Mat::Zero(dst.size(), src.size());
    for (int col = 0; col < src.size(); ++col)
        monomial_column(F, l, m, src.dim(), src, dst, col, out);
    return out;
}

Mat monomial_block_parallel(const Vec& F, int l, int m,
                            const OccupationBasis& src, const OccupationBasis& dst) {
    Mat out = Mat::Zero(dst.size(), src.size());
    const int ncols = src.size();
#pragma omp parallel for schedule(dynamic, 8)
    for (int col = 0; col < ncols; ++col)
        monomial_column(F, l, m, src.dim(), src, dst, col, out);
    return out;
}

Mat dgamma_block_serial(const Mat& T1, const OccupationBasis& basis) {
    Mat out = Mat::Zero(basis.size(), basis.size());
    for (int col = 0; col < basis.size(); ++col)
        dgamma_column(T1, basis, col, out);
    return out;
}

Mat dgamma_block_parallel(const Mat& T1, const OccupationBasis& basis) {
    Mat out = Mat::Zero(basis.size(), basis.size());
    const int ncols = basis.size();
#pragma omp parallel for schedule(dynamic, 16)
    for (int col = 0; col < ncols; ++col)
        dgamma_column(T1, basis, col, out);
    return out;
}

} // namespace wicklab::fock::kernels
