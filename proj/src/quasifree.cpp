#include "wicklab/quasifree.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wicklab::quasifree {

TwoPointMatrix TwoPointMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open two-point matrix file: " + path);
    std::string tok;
    int dim = -1;
    // header: optional comment lines, then "dim N"
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first[0] == '#') continue;
        if (first != "dim")
            throw config_error("two-point matrix file must start with 'dim N'");
        if (!(ls >> dim) || dim < 1)
            throw config_error("invalid dimension in two-point matrix file");
        break;
    }
    if (dim < 1) throw config_error("missing 'dim' header in " + path);

    TwoPointMatrix out;
    out.W = Mat::Zero(dim, dim);
    out.provenance = "file:" + path;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double re, im;
            if (!(in >> re >> im))
                throw config_error("two-point matrix file truncated at entry (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");
            out.W(i, j) = cplx(re, im);
        }
    }
    return out;
}

void TwoPointMatrix::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write two-point matrix file: " + path);
    out << "# two-point matrix, complex entries as re im pairs, row-major\n";
    out << "dim " << dim() << "\n";
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) {
            out << format_double(W(i, j).real()) << " "
                << format_double(W(i, j).imag());
            out << (j + 1 == dim() ? "\n" : " ");
        }
    }
}

cplx omega2(const TwoPointMatrix& w, const Vec& f, const Vec& g) {
    if (f.size() != w.dim() || g.size() != w.dim())
        throw config_error("omega2: test vector dimension mismatch");
    return (f.transpose() * w.W * g)(0, 0);
}

cplx omega2_pair(const TwoPointMatrix& w, const Mat& kernel) {
    if (kernel.rows() != w.dim() || kernel.cols() != w.dim())
        throw config_error("omega2_pair: kernel dimension mismatch");
    return (kernel.array() * w.W.array()).sum();
}

std::pair<OneParticleSpace, QuotientMap>
one_particle_space(const TwoPointMatrix& w, double tol) {
    if (tol <= 0.0) throw config_error("quotient tolerance must be positive");
    const int d = w.dim();

    Mat G = 2.0 * w.W;
    double herm = hermiticity_residual(G);
    if (herm > 1e-10)
        throw model_error("two-point matrix is not of positive type: the Gram "
                          "form is non-Hermitian (residual " +
                          format_double(herm) + ")");
    G = 0.5 * (G + Mat(G.adjoint()));

    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    RVec eigs = es.eigenvalues();  // ascending
    double lam_max = eigs.maxCoeff();
    double scale = std::max(lam_max, 0.0);
    double neg_floor = -1e-12 * std::max(scale, G.norm());
    if (eigs.minCoeff() < neg_floor)
        throw model_error("two-point matrix is not of positive type: Gram "
                          "eigenvalue " + format_double(eigs.minCoeff()) +
                          " below " + format_double(neg_floor));

    double keep_above = tol * lam_max;
    std::vector<int> kept;
    for (int i = d - 1; i >= 0; --i)
        if (eigs(i) > keep_above) kept.push_back(i);

    const int r = static_cast<int>(kept.size());
    if (r == 0)
        throw model_error("degenerate state: quotient rank is zero");

    QuotientMap qm;
    qm.rank = r;
    qm.tol_used = tol;
    qm.Q = Mat::Zero(r, d);
    qm.kept_eigs = RVec::Zero(r);
    qm.W_source = w.W;
    for (int k = 0; k < r; ++k) {
        int i = kept[k];
        qm.kept_eigs(k) = eigs(i);
        qm.Q.row(k) = std::sqrt(eigs(i)) * es.eigenvectors().col(i).adjoint();
    }

    OneParticleSpace sp;
    sp.dim = r;
    sp.label = w.provenance.empty() ? "quotient" : "quotient(" + w.provenance + ")";
    return {sp, qm};
}

Vec embed(const Vec& f, const QuotientMap& qm) {
    if (f.size() != qm.Q.cols())
        throw config_error("embed: test vector dimension mismatch");
    return qm.Q * f;
}

OperatorSum FieldOperator::as_sum() const {
    OperatorSum s(creation_part.trunc());
    s.add(creation_part);
    s.add(annihilation_part);
    return s;
}

fock::FockVector FieldOperator::apply(const fock::FockVector& v) const {
    fock::FockVector out = creation_part.apply(v);
    out += annihilation_part.apply(v);
    return out;
}

FieldOperator field_op(const Vec& f, const QuotientMap& qm, TruncPtr trunc) {
    if (trunc->dim() != qm.rank)
        throw config_error("field_op: truncation one-particle dimension " +
                           std::to_string(trunc->dim()) +
                           " does not match quotient rank " +
                           std::to_string(qm.rank));
    if (f.size() != qm.Q.cols())
        throw config_error("field_op: test vector dimension mismatch");

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Vec up = qm.Q * f;                      // [f]
    Vec down = qm.Q.conjugate() * f;        // conj([conj f]) coordinates

    FieldOperator phi;
    phi.f_test = f;
    phi.creation_part = fock::creation_op(inv_sqrt2 * up, trunc);
    phi.annihilation_part = fock::annihilation_op(inv_sqrt2 * down, trunc);
    return phi;
}

} // namespace wicklab::quasifree
