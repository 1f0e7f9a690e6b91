#include "wicklab/wick.hpp"

#include <cmath>

#include "wicklab/config.hpp"
#include "wicklab/kernels.hpp"

namespace wicklab::wick {

int SmearingSpec::d_test() const {
    if (terms.empty()) throw config_error("smearing spec has no terms");
    return static_cast<int>(terms.front().f.size());
}

bool SmearingSpec::class_S() const {
    for (const auto& t : terms)
        if (t.witnesses.empty()) return false;
    return !terms.empty();
}

void SmearingSpec::validate() const {
    if (terms.empty()) throw config_error("smearing spec has no terms");
    const int d = d_test();
    for (const auto& t : terms) {
        if (t.f.size() != d || t.Qop.rows() != d || t.Qop.cols() != d)
            throw config_error("smearing term dimensions are inconsistent");
        if (!t.witnesses.empty()) {
            RVec sum = RVec::Zero(d);
            for (const auto& g : t.witnesses) {
                if (g.size() != d)
                    throw config_error("witness dimension mismatch");
                sum += g.cwiseProduct(g);
            }
            if ((sum - t.f).cwiseAbs().maxCoeff() > 1e-12)
                throw config_error(
                    "witnesses do not reproduce f as a sum of squares");
        }
    }
}

SmearingSpec SmearingSpec::single_square_terms() const {
    SmearingSpec out;
    for (const auto& t : terms) {
        if (t.witnesses.empty())
            throw precondition_error(
                "sum-of-squares witnesses are required for this construction");
        for (const auto& g : t.witnesses) {
            SmearingTerm s;
            s.Qop = t.Qop;
            s.f = g.cwiseProduct(g);
            s.witnesses = {g};
            out.terms.push_back(std::move(s));
        }
    }
    return out;
}

SmearingSpec SmearingSpec::load(const std::string& path) {
    Config cfg = Config::parse_file(path);
    auto term_sections = cfg.find_all("term");
    if (term_sections.empty())
        throw config_error("smearing file has no [term] sections: " + path);

    SmearingSpec spec;
    for (const auto* sec : term_sections) {
        SmearingTerm t;
        std::vector<double> fv = parse_double_list(sec->require("f"));
        const int d = static_cast<int>(fv.size());
        t.f = Eigen::Map<RVec>(fv.data(), d);

        // stencil: comma list of offset:coefficient, periodic wrap
        t.Qop = RMat::Zero(d, d);
        std::string stencil = sec->get_or("stencil", "0:1");
        for (const auto& tok : split_list(stencil)) {
            std::size_t colon = tok.find(':');
            if (colon == std::string::npos)
                throw config_error("stencil entries must be offset:coefficient");
            int off = std::stoi(tok.substr(0, colon));
            double coeff = std::stod(tok.substr(colon + 1));
            for (int x = 0; x < d; ++x) {
                int z = ((x + off) % d + d) % d;
                t.Qop(x, z) += coeff;
            }
        }

        for (const auto& wtxt : sec->get_all("witness")) {
            std::vector<double> gv = parse_double_list(wtxt);
            if (static_cast<int>(gv.size()) != d)
                throw config_error("witness length mismatch in " + path);
            t.witnesses.push_back(Eigen::Map<RVec>(gv.data(), d));
        }
        spec.terms.push_back(std::move(t));
    }
    spec.validate();
    return spec;
}

Vec flatten_rowmajor(const Mat& m) {
    Vec out(m.rows() * m.cols());
    std::int64_t k = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(k++) = m(i, j);
    return out;
}

QuadraticKernel kernel_from_test_matrix(const Mat& F_test, const QuotientMap& qm) {
    if (F_test.rows() != qm.Q.cols() || F_test.cols() != qm.Q.cols())
        throw config_error("kernel dimension does not match quotient map");
    if ((F_test - F_test.transpose()).norm() >
        1e-12 * std::max(1.0, F_test.norm()))
        throw config_error("test-space kernel must be symmetric");

    QuadraticKernel ker;
    ker.F_test = F_test;
    ker.F_K = qm.Q * F_test * qm.Q.transpose();
    ker.F_Kbar = ker.F_K.conjugate();
    ker.F_mixed = qm.Q * F_test * qm.Q.adjoint();
    ker.norm_FK = ker.F_K.norm();
    ker.norm_FKbar = ker.F_Kbar.norm();
    ker.ordering_constant = (F_test.array() * qm.W_source.array()).sum().real();
    return ker;
}

QuadraticKernel kernel_from_smearing(const SmearingSpec& spec,
                                     const QuotientMap& qm) {
    spec.validate();
    const int d = spec.d_test();
    if (d != qm.Q.cols())
        throw config_error("smearing grid size does not match quotient map");

    Mat F = Mat::Zero(d, d);
    for (const auto& t : spec.terms)
        F += (t.Qop * t.f.asDiagonal() * t.Qop.transpose()).cast<cplx>();
    return kernel_from_test_matrix(F, qm);
}

OperatorSum WickOperator::T() const {
    OperatorSum s(A.trunc());
    s.add(A);
    s.add(Bplus);
    s.add(Bminus);
    return s;
}

OperatorSum WickOperator::B() const {
    OperatorSum s(A.trunc());
    s.add(Bplus);
    s.add(Bminus);
    return s;
}

WickOperator wick_square_operator(const QuadraticKernel& ker, TruncPtr trunc) {
    if (trunc->dim() != ker.F_K.rows())
        throw config_error("kernel rank does not match the one-particle space");
    if (trunc->n_max() < 2)
        throw truncation_error("truncation too small for a quadratic operator");

    WickOperator op;
    op.kernel = ker;
    op.A = fock::normal_monomial(flatten_rowmajor(ker.F_mixed), 1, 1, trunc);
    op.Bplus =
        fock::normal_monomial(flatten_rowmajor(ker.F_K), 2, 0, trunc).scaled(0.5);
    op.Bminus =
        fock::normal_monomial(flatten_rowmajor(ker.F_Kbar), 0, 2, trunc).scaled(0.5);
    return op;
}

Mat compression_T1(const WickOperator& op) {
    // the one-particle sector basis is lexicographic in occupation numbers,
    // which reverses the mode order; return the block in mode coordinates
    TruncPtr trunc = op.trunc();
    const int r = trunc->dim();
    const auto& basis = trunc->sector(1);
    std::vector<int> idx(r);
    for (int p = 0; p < r; ++p) {
        fock::MultiIndex e(r, 0);
        e[p] = 1;
        idx[p] = basis.index_of(e);
    }
    const Mat& block = op.A.block(1);
    Mat out(r, r);
    for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) out(p, q) = block(idx[p], idx[q]);
    return out;
}

BlockOperator second_quantization(const Mat& T1, TruncPtr trunc) {
    if (T1.rows() != trunc->dim() || T1.cols() != trunc->dim())
        throw config_error("second_quantization: matrix dimension mismatch");
    if (hermiticity_residual(T1) > 1e-10)
        throw config_error("second_quantization requires a Hermitian matrix");

    BlockOperator op(trunc, 0, trunc->n_max());
    for (int n = 0; n <= trunc->n_max(); ++n)
        op.set_block(n, fock::kernels::dgamma_block_parallel(T1, trunc->sector(n)));
    return op;
}

namespace {

// Orthonormal occupation states over a list of orthonormal modes, expressed
// in the coordinates of the ambient sector.
Mat subspace_isometry(const std::vector<fock::BlockOperator>& mode_creators,
                      TruncPtr trunc, int n) {
    const int k = static_cast<int>(mode_creators.size());
    fock::OccupationBasis sub = fock::sym_basis(std::max(k, 1), n);
    Mat iso = Mat::Zero(trunc->sector_dim(n), k == 0 ? (n == 0 ? 1 : 0) : sub.size());
    if (k == 0) {
        if (n == 0) iso(0, 0) = 1.0;
        return iso;
    }
    for (int col = 0; col < sub.size(); ++col) {
        const auto& occ = sub.state(col);
        fock::FockVector v(trunc);
        v.sector(0)(0) = 1.0;
        double norm_fix = 1.0;
        for (int i = 0; i < k; ++i) {
            for (int rep = 0; rep < occ[i]; ++rep) v = mode_creators[i].apply(v);
            for (int rep = 1; rep <= occ[i]; ++rep) norm_fix *= rep;
        }
        iso.col(col) = v.sector(n) / std::sqrt(norm_fix);
    }
    return iso;
}

} // namespace

CertificateReport support_invariance_check(const SmearingSpec& spec,
                                           const std::vector<int>& region,
                                           const QuotientMap& qm,
                                           TruncPtr trunc) {
    spec.validate();
    const int d = spec.d_test();

    std::vector<bool> inside(d, false);
    for (int x : region) {
        if (x < 0 || x >= d)
            throw config_error("region site index out of range");
        inside[x] = true;
    }

    // every smeared stencil must stay inside the region
    for (std::size_t j = 0; j < spec.terms.size(); ++j) {
        const auto& t = spec.terms[j];
        for (int x = 0; x < d; ++x) {
            double reach = 0.0;
            for (int z = 0; z < d; ++z)
                reach += std::abs(t.Qop(x, z)) * std::abs(t.f(z));
            if (reach > 0.0 && !inside[x])
                throw precondition_error(
                    "smearing term " + std::to_string(j) +
                    " reaches site " + std::to_string(x) + " outside the region");
        }
    }

    // orthonormal basis of the embedded region
    Mat cols(qm.rank, region.size());
    for (std::size_t i = 0; i < region.size(); ++i) {
        Vec e = Vec::Zero(d);
        e(region[i]) = 1.0;
        cols.col(i) = qm.Q * e;
    }
    Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    int k = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-12 * std::max(1.0, smax)) ++k;
    std::vector<fock::BlockOperator> creators;
    for (int i = 0; i < k; ++i)
        creators.push_back(fock::creation_op(svd.matrixU().col(i), trunc));

    WickOperator op = wick_square_operator(kernel_from_smearing(spec, qm), trunc);
    const int cap = trunc->n_max() - 2;
    Mat M = op.T().compress(cap);

    int total = trunc->sector_offset(cap) + trunc->sector_dim(cap);
    Mat P = Mat::Zero(total, total);
    for (int n = 0; n <= cap; ++n) {
        Mat S = subspace_isometry(creators, trunc, n);
        P.block(trunc->sector_offset(n), trunc->sector_offset(n),
                trunc->sector_dim(n), trunc->sector_dim(n)) = S * S.adjoint();
    }

    Mat leak = (Mat::Identity(total, total) - P) * M * P;

    CertificateReport rep;
    rep.name = "support_locality";
    rep.statement = "Wick square smeared inside a region preserves the Fock "
                    "subspace generated from that region";
    rep.constant("region_sites", static_cast<double>(region.size()));
    rep.constant("subspace_modes", static_cast<double>(k));
    rep.constant("sector_cap", static_cast<double>(cap));
    rep.set_outcome(spectral_norm(leak) / std::max(1.0, spectral_norm(M)), 1e-9);
    return rep;
}

} // namespace wicklab::wick
