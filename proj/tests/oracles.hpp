#ifndef WICKLAB_TESTS_ORACLES_HPP
#define WICKLAB_TESTS_ORACLES_HPP

// Independent oracles used by the tests only.  They work on the full
// (unsymmetrised) tensor-power space and reach the symmetric sectors
// through an explicit symmetriser isometry, so they share no code with the
// occupation-basis assembly they check.

#include <vector>

#include "wicklab/fock.hpp"

namespace wicklab::test_oracle {

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// coordinates of the unit-norm occupation state inside K^{tensor n};
// index tuples are base-d digits, leftmost slot most significant
inline Vec sym_embed(const fock::MultiIndex& occ, int d, int n) {
    Vec out = Vec::Zero(ipow(d, n));
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    double denom = fact;  // n!
    for (int v : occ) {
        double f = 1.0;
        for (int i = 2; i <= v; ++i) f *= i;
        denom /= f;  // n! / prod occ_i!
    }
    double coeff = 1.0 / std::sqrt(denom);

    std::vector<int> digits(n, 0);
    for (std::int64_t t = 0; t < out.size(); ++t) {
        std::int64_t rest = t;
        std::vector<int> count(d, 0);
        for (int s = n - 1; s >= 0; --s) {
            digits[s] = static_cast<int>(rest % d);
            rest /= d;
        }
        bool match = true;
        for (int s = 0; s < n; ++s) ++count[digits[s]];
        for (int i = 0; i < d; ++i)
            if (count[i] != occ[i]) {
                match = false;
                break;
            }
        if (match) out(t) = coeff;
    }
    return out;
}

// plain tensor product; the sqrt((n+l)!/n!) amplitude of the raising
// chain is applied by the caller
inline Vec raise_tensor(const Vec& u, const Vec& w) {
    Vec out(u.size() * w.size());
    for (std::int64_t i = 0; i < u.size(); ++i)
        out.segment(i * w.size(), w.size()) = u(i) * w;
    return out;
}

// a^{tensor m}(v) w: contract the first m slots of w against v with the
// slot order reversed, times sqrt(n!/(n-m)!)
inline Vec lower_tensor(const Vec& v, const Vec& w, int d, int n, int m) {
    std::int64_t rest_size = ipow(d, n - m);
    std::int64_t head_size = ipow(d, m);
    Vec out = Vec::Zero(rest_size);
    for (std::int64_t head = 0; head < head_size; ++head) {
        // head digits are slots 1..m; v is indexed (j_1..j_m) with j_m
        // acting on slot 1, so reverse the digit order
        std::int64_t rev = 0;
        std::int64_t h = head;
        for (int s = 0; s < m; ++s) {
            rev = rev * d + (h % d);
            h /= d;
        }
        cplx coeff = v(rev);
        if (coeff == cplx(0.0, 0.0)) continue;
        out += coeff * w.segment(head * rest_size, rest_size);
    }
    double amp = 1.0;
    for (int k = 0; k < m; ++k) amp *= double(n - k);
    return std::sqrt(amp) * out;
}

// full-space oracle for the normal-ordered monomial block on sector n,
// assembled through a Schmidt decomposition of the coefficient tensor
inline Mat monomial_block(const Vec& F, int l, int m, int d, int n) {
    const fock::OccupationBasis src = fock::sym_basis(d, n);
    const fock::OccupationBasis dst = fock::sym_basis(d, n - m + l);
    Mat out = Mat::Zero(dst.size(), src.size());
    if (n < m) return out;

    Eigen::JacobiSVD<Mat> svd(
        Eigen::Map<const Mat>(F.data(), ipow(d, m), ipow(d, l)).transpose(),
        Eigen::ComputeThinU | Eigen::ComputeThinV);
    // F reshaped row-major to (d^l) x (d^m): row index (i_1..i_l); Eigen
    // maps are column-major, hence the transpose of the (d^m, d^l) map

    double up_amp = 1.0;
    for (int k = 0; k < l; ++k) up_amp *= double(n - m + 1 + k);
    up_amp = std::sqrt(up_amp);

    for (int col = 0; col < src.size(); ++col) {
        Vec w = sym_embed(src.state(col), d, n);
        Vec acc = Vec::Zero(ipow(d, n - m + l));
        for (int i = 0; i < svd.singularValues().size(); ++i) {
            double s = svd.singularValues()(i);
            if (s < 1e-15) continue;
            Vec u = svd.matrixU().col(i);            // K^{tensor l}
            Vec v = svd.matrixV().col(i).conjugate();  // conj K^{tensor m} coords
            Vec lowered = lower_tensor(v, w, d, n, m);
            acc += s * up_amp * raise_tensor(u, lowered);
        }
        for (int row = 0; row < dst.size(); ++row)
            out(row, col) = sym_embed(dst.state(row), d, n - m + l).dot(acc);
    }
    return out;
}

} // namespace wicklab::test_oracle

#endif
