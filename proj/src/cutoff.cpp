#include "wicklab/cutoff.hpp"

#include <algorithm>
#include <cmath>

namespace wicklab::cutoff {

int Grid::size() const {
    int s = 1;
    for (int a : shape) s *= a;
    return s;
}

int Grid::full_cutoff() const {
    int f = 0;
    for (int a : shape) f = std::max(f, a / 2);
    return f;
}

SquaresPartition squares_partition(const std::vector<RVec>& bumps) {
    if (bumps.empty()) throw config_error("squares_partition: no bumps given");
    const int d = static_cast<int>(bumps.front().size());
    RVec ssq = RVec::Zero(d);
    for (const auto& b : bumps) {
        if (b.size() != d) throw config_error("bump length mismatch");
        if (b.minCoeff() < 0.0)
            throw config_error("bumps must be nonnegative");
        ssq += b.cwiseProduct(b);
    }
    for (int x = 0; x < d; ++x)
        if (ssq(x) <= 0.0)
            throw precondition_error("bump coverage gap at grid point " +
                                     std::to_string(x));

    SquaresPartition p;
    p.bumps = bumps;
    RVec inv = ssq.cwiseSqrt().cwiseInverse();
    for (const auto& b : bumps) p.chi.push_back(b.cwiseProduct(inv));
    return p;
}

CertificateReport squares_partition_certificate(const SquaresPartition& p) {
    const int d = static_cast<int>(p.chi.front().size());
    RVec sum = RVec::Zero(d);
    for (const auto& c : p.chi) sum += c.cwiseProduct(c);

    double worst = (sum - RVec::Ones(d)).cwiseAbs().maxCoeff();
    // support containment: chi_k vanishes wherever the bump does
    for (std::size_t k = 0; k < p.chi.size(); ++k)
        for (int x = 0; x < d; ++x)
            if (p.bumps[k](x) == 0.0)
                worst = std::max(worst, std::abs(p.chi[k](x)));

    CertificateReport rep;
    rep.name = "squares_partition";
    rep.statement = "partition of unity built from squares: sum_k chi_k^2 = 1 "
                    "with chi_k supported where the bump is";
    rep.constant("bumps", static_cast<double>(p.chi.size()));
    rep.set_outcome(worst, 1e-12);
    return rep;
}

SmearingSpec refine_witnesses(const SmearingSpec& spec, const SquaresPartition& p) {
    SmearingSpec out;
    for (const auto& t : spec.terms) {
        if (t.witnesses.empty())
            throw precondition_error("refine_witnesses needs class-S terms");
        wick::SmearingTerm nt;
        nt.Qop = t.Qop;
        nt.f = t.f;
        for (const auto& g : t.witnesses)
            for (std::size_t k = 0; k < p.chi.size(); ++k)
                for (std::size_t l = 0; l < p.chi.size(); ++l)
                    nt.witnesses.push_back(
                        g.cwiseProduct(p.chi[k]).cwiseProduct(p.chi[l]));
        out.terms.push_back(std::move(nt));
    }
    out.validate();
    return out;
}

namespace {

// frequency lattice walker over the product grid
struct FreqIter {
    const Grid& grid;
    std::vector<int> k;
    bool done = false;

    explicit FreqIter(const Grid& g) : grid(g), k(g.shape.size(), 0) {}
    void next() {
        for (int a = static_cast<int>(k.size()) - 1; a >= 0; --a) {
            if (++k[a] < grid.shape[a]) return;
            k[a] = 0;
        }
        done = true;
    }
};

int sym_rep(int k, int s) {  // representative in (-s/2, s/2]
    return (k <= s / 2) ? k : k - s;
}

bool in_cube(const std::vector<int>& k, const Grid& g, int n) {
    for (std::size_t a = 0; a < k.size(); ++a)
        if (std::abs(sym_rep(k[a], g.shape[a])) > n) return false;
    return true;
}

bool self_paired(const std::vector<int>& k, const Grid& g) {
    for (std::size_t a = 0; a < k.size(); ++a) {
        int neg = (g.shape[a] - k[a]) % g.shape[a];
        if (neg != k[a]) return false;
    }
    return true;
}

// canonical member of the {k, -k} pair: first nonzero symmetric component
// is positive
bool canonical(const std::vector<int>& k, const Grid& g) {
    for (std::size_t a = 0; a < k.size(); ++a) {
        int r = sym_rep(k[a], g.shape[a]);
        if (r > 0) return true;
        if (r < 0) return false;
    }
    return true;  // k == -k
}

Vec plane_wave_minus(const std::vector<int>& k, const Grid& g) {
    const int d = g.size();
    Vec e(d);
    std::vector<int> x(g.shape.size(), 0);
    for (int s = 0; s < d; ++s) {
        double phase = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a)
            phase += 2.0 * M_PI * double(k[a]) * double(x[a]) / double(g.shape[a]);
        e(s) = std::exp(cplx(0.0, -phase));
        for (int a = static_cast<int>(x.size()) - 1; a >= 0; --a) {
            if (++x[a] < g.shape[a]) break;
            x[a] = 0;
        }
    }
    return e;
}

} // namespace

std::pair<Mat, Mat> cutoff_kernels(const SmearingSpec& spec, const Grid& grid,
                                   int n) {
    if (grid.size() != spec.d_test())
        throw config_error("grid size does not match the smearing spec");
    SmearingSpec sq = spec.single_square_terms();

    const int d = grid.size();
    Mat F = Mat::Zero(d, d);
    Mat Fp = Mat::Zero(d, d);
    const double w = 1.0 / double(d);

    for (const auto& t : sq.terms) {
        RVec ft = t.witnesses.front();
        for (FreqIter it(grid); !it.done; it.next()) {
            if (!in_cube(it.k, grid, n)) continue;
            if (!canonical(it.k, grid)) continue;
            Vec e = plane_wave_minus(it.k, grid);
            Vec v = t.Qop.cast<cplx>() * ft.cast<cplx>().cwiseProduct(e);
            Mat dyad = v * v.conjugate().transpose();
            if (self_paired(it.k, grid)) {
                // v is real up to roundoff; the dyad enters both kernels once
                F += w * dyad;
                Fp += w * dyad;
            } else {
                F += w * 2.0 * dyad.real().cast<cplx>();
                Fp += w * 2.0 * dyad;
            }
        }
    }
    return {F, Fp};
}

double half_frequency_pairing_sum(const RMat& Qop, const RVec& f,
                                  const Grid& grid, const Mat& W) {
    if (grid.size() != f.size() || W.rows() != f.size())
        throw config_error("half_frequency_pairing_sum: dimension mismatch");
    double sum = 0.0;
    for (FreqIter it(grid); !it.done; it.next()) {
        if (!canonical(it.k, grid)) continue;
        Vec e = plane_wave_minus(it.k, grid);
        Vec v = Qop.cast<cplx>() * f.cast<cplx>().cwiseProduct(e);
        // omega2(conj h, h) = v^T W conj(v) for h = conj(v)
        sum += (v.transpose() * W * v.conjugate())(0, 0).real();
    }
    return sum;
}

CutoffFamily build_cutoff_family(const SmearingSpec& spec, const QuotientMap& qm,
                                 TruncPtr trunc, const Grid& grid,
                                 const std::vector<int>& cutoffs) {
    if (cutoffs.empty()) throw config_error("empty cutoff schedule");
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1])
            throw config_error("cutoff schedule must be strictly increasing");

    CutoffFamily fam;
    fam.trunc = trunc;
    fam.cap = trunc->n_max() - 2;
    fam.grid_full = grid.full_cutoff();
    fam.base =
        wick::wick_square_operator(wick::kernel_from_smearing(spec, qm), trunc);

    quasifree::TwoPointMatrix w2{qm.W_source, "family"};
    for (int n : cutoffs) {
        CutoffStep step;
        step.cutoff = n;
        auto [F, Fp] = cutoff_kernels(spec, grid, n);
        step.F_n = F;
        step.Fp_n = Fp;
        step.c_n = quasifree::omega2_pair(w2, Fp).real();
        step.op = wick::wick_square_operator(
            wick::kernel_from_test_matrix(F, qm), trunc);
        step.M = step.op.T().herm_compress(fam.cap) +
                 step.c_n * Mat::Identity(trunc->sector_offset(fam.cap) +
                                              trunc->sector_dim(fam.cap),
                                          trunc->sector_offset(fam.cap) +
                                              trunc->sector_dim(fam.cap));
        fam.steps.push_back(std::move(step));
    }

    fam.c_full = fam.steps.back().c_n;
    int dim = static_cast<int>(fam.steps.back().M.rows());
    fam.M_target = fam.base.T().herm_compress(fam.cap) +
                   fam.c_full * Mat::Identity(dim, dim);
    return fam;
}

CertificateReport family_monotone_certificate(const CutoffFamily& fam) {
    CertificateReport rep;
    rep.name = "cutoff_family_monotone";
    rep.statement = "shifted cutoff operators form a nondecreasing PSD chain: "
                    "c_n >= 0 nondecreasing, T_first >= 0, T_{n+1} >= T_n";

    double worst = -1e300;  // negated PSD margins and c_n defects
    double scale = spectral_norm(fam.steps.back().M);
    worst = std::max(worst, -fam.steps.front().c_n);
    for (std::size_t i = 1; i < fam.steps.size(); ++i)
        worst = std::max(worst, fam.steps[i - 1].c_n - fam.steps[i].c_n);
    worst = std::max(worst, -min_eig_hermitian(fam.steps.front().M));
    for (std::size_t i = 1; i < fam.steps.size(); ++i)
        worst = std::max(
            worst, -min_eig_hermitian(fam.steps[i].M - fam.steps[i - 1].M));

    rep.constant("steps", static_cast<double>(fam.steps.size()));
    rep.constant("c_full", fam.c_full);
    rep.constant("sector_cap", static_cast<double>(fam.cap));
    rep.set_outcome(worst, psd_tolerance(1e-8, scale));
    return rep;
}

CertificateReport family_exactness_certificate(const CutoffFamily& fam) {
    CertificateReport rep;
    rep.name = "cutoff_family_exact_limit";
    rep.statement = "the final cutoff member reproduces the uncut operator "
                    "plus its constant shift";

    const auto& last = fam.steps.back();
    double worst = (last.M - fam.M_target).norm() /
                   std::max(1.0, fam.M_target.norm());
    // kernel-level exactness as well
    worst = std::max(worst, (last.F_n - fam.base.kernel.F_test).norm() /
                                std::max(1.0, fam.base.kernel.F_test.norm()));
    rep.constant("final_cutoff", static_cast<double>(last.cutoff));
    rep.constant("grid_full", static_cast<double>(fam.grid_full));
    rep.set_outcome(worst, 1e-9);
    return rep;
}

CertificateReport family_pairing_certificate(const CutoffFamily& fam,
                                             const QuotientMap& qm, int probes,
                                             Rng& rng) {
    CertificateReport rep;
    rep.name = "cutoff_family_state_pairing";
    rep.statement = "<psi, T_n psi> equals the psi two-point form paired with "
                    "the folded half-frequency kernel";

    const int d = static_cast<int>(qm.Q.cols());
    std::vector<quasifree::FieldOperator> site_fields;
    site_fields.reserve(d);
    for (int x = 0; x < d; ++x) {
        Vec e = Vec::Zero(d);
        e(x) = 1.0;
        site_fields.push_back(quasifree::field_op(e, qm, fam.trunc));
    }

    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        fock::FockVector psi = fock::random_fock_vector(fam.trunc, fam.cap, rng);
        std::vector<fock::FockVector> u;
        u.reserve(d);
        for (int x = 0; x < d; ++x) u.push_back(site_fields[x].apply(psi));

        Vec stacked = psi.stacked(fam.cap);
        for (const auto& step : fam.steps) {
            cplx lhs = (stacked.adjoint() * step.M * stacked)(0, 0);
            cplx rhs(0.0, 0.0);
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) {
                    if (step.Fp_n(x, y) == cplx(0.0, 0.0)) continue;
                    rhs += step.Fp_n(x, y) * u[x].dot(u[y]);
                }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    rep.probes = probes;
    rep.set_outcome(worst, 1e-8);
    return rep;
}

CertificateReport inverse_inequality_certificate(const CutoffFamily& fam) {
    CertificateReport rep;
    rep.name = "inverse_inequality";
    rep.statement = "T_{n+1} >= T_n >= 0 forces (T_n + 1)^-1 >= (T_{n+1} + 1)^-1";

    double worst = -1e300;
    std::vector<Mat> res;
    for (const auto& step : fam.steps) {
        SpectralCalc sc(step.M);
        res.push_back(sc.resolvent_matrix(1.0));
        // (T_n + 1)^-1 stays a contraction for PSD T_n
        worst = std::max(worst, spectral_norm(res.back()) - 1.0 - 1e-12);
    }
    for (std::size_t i = 1; i < res.size(); ++i)
        worst = std::max(worst, -min_eig_hermitian(res[i - 1] - res[i]));

    rep.constant("steps", static_cast<double>(fam.steps.size()));
    rep.set_outcome(worst, 1e-9);
    return rep;
}

SpectralCalc::SpectralCalc(const Mat& herm) {
    if (hermiticity_residual(herm) > 1e-8)
        throw spectral_error("matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (herm + Mat(herm.adjoint())));
    eigs_ = es.eigenvalues();
    vecs_ = es.eigenvectors();
}

Vec SpectralCalc::resolvent(cplx lambda, const Vec& v) const {
    double scale = std::max(1.0, eigs_.cwiseAbs().maxCoeff());
    double nearest = 1e300;
    double nearest_eig = 0.0;
    for (int i = 0; i < eigs_.size(); ++i) {
        double dist = std::abs(cplx(eigs_(i)) + lambda);
        if (dist < nearest) {
            nearest = dist;
            nearest_eig = eigs_(i);
        }
    }
    if (nearest < 1e-12 * scale)
        throw spectral_error("resolvent shift is singular: eigenvalue " +
                             format_double(nearest_eig) + " meets the shift");
    Vec y = vecs_.adjoint() * v;
    for (int i = 0; i < eigs_.size(); ++i) y(i) /= (cplx(eigs_(i)) + lambda);
    return vecs_ * y;
}

Mat SpectralCalc::resolvent_matrix(cplx lambda) const {
    Mat out(vecs_.rows(), vecs_.cols());
    for (int i = 0; i < eigs_.size(); ++i)
        out.col(i) = vecs_.col(i) / (cplx(eigs_(i)) + lambda);
    return out * vecs_.adjoint();
}

Mat SpectralCalc::projector(double a, double b) const {
    if (a >= b) throw spectral_error("empty projection interval");
    for (int i = 0; i < eigs_.size(); ++i)
        if (std::abs(eigs_(i) - a) < 1e-6 || std::abs(eigs_(i) - b) < 1e-6)
            throw spectral_error("projection endpoint within 1e-6 of eigenvalue " +
                                 format_double(eigs_(i)));
    Mat p = Mat::Zero(vecs_.rows(), vecs_.rows());
    for (int i = 0; i < eigs_.size(); ++i)
        if (eigs_(i) > a && eigs_(i) < b)
            p += vecs_.col(i) * vecs_.col(i).adjoint();
    return p;
}

int SpectralCalc::rank_in(double a, double b) const {
    int r = 0;
    for (int i = 0; i < eigs_.size(); ++i)
        if (eigs_(i) > a && eigs_(i) < b) ++r;
    return r;
}

GraphLimitResult graph_limit_experiment(
    const CutoffFamily& fam, int probes, Rng& rng,
    std::optional<std::pair<double, double>> interval) {
    GraphLimitResult out;
    out.report.name = "graph_limit";
    out.report.statement =
        "strong resolvent convergence of the monotone cutoff family, with "
        "spectral projections stabilising on a fixed interval";

    SpectralCalc target(fam.M_target);

    // default interval: from below the spectrum to the midpoint of the
    // widest gap between consecutive target eigenvalues
    double a, b;
    if (interval) {
        a = interval->first;
        b = interval->second;
    } else {
        const RVec& ev = target.eigenvalues();
        a = ev.minCoeff() - 1.0;
        double best_gap = -1.0;
        b = ev.maxCoeff() + 1.0;
        for (int i = 0; i + 1 < ev.size(); ++i) {
            double gap = ev(i + 1) - ev(i);
            if (gap > best_gap) {
                best_gap = gap;
                b = 0.5 * (ev(i) + ev(i + 1));
            }
        }
    }
    out.interval_a = a;
    out.interval_b = b;

    Mat p_target = target.projector(a, b);
    int rank_target = target.rank_in(a, b);

    std::vector<Vec> vs;
    for (int p = 0; p < probes; ++p)
        vs.push_back(
            fock::random_fock_vector(fam.trunc, fam.cap, rng).stacked(fam.cap));

    std::vector<Vec> target_res;
    for (const auto& v : vs) target_res.push_back(target.resolvent(1.0, v));

    double worst = 0.0;
    std::vector<std::vector<double>> res_hist(vs.size());
    const Mat* prev = nullptr;
    for (const auto& step : fam.steps) {
        SpectralCalc sc(step.M);
        StepRow row;
        row.cutoff = step.cutoff;
        row.c_n = step.c_n;
        row.increment_min_eig =
            prev ? min_eig_hermitian(step.M - *prev) : min_eig_hermitian(step.M);
        prev = &step.M;

        Mat pn = sc.projector(a, b);
        row.projector_rank = sc.rank_in(a, b);
        for (std::size_t p = 0; p < vs.size(); ++p) {
            double r = (sc.resolvent(1.0, vs[p]) - target_res[p]).norm();
            row.resolvent_residuals.push_back(r);
            res_hist[p].push_back(r);
            row.projection_residuals.push_back((pn * vs[p] - p_target * vs[p]).norm());
        }
        out.rows.push_back(std::move(row));
    }

    // nonincreasing residuals with slack; termination at <= 1e-10, scaled
    // onto the 1e-9 report tolerance
    for (const auto& hist : res_hist) {
        for (std::size_t i = 1; i < hist.size(); ++i)
            worst = std::max(worst, hist[i] - hist[i - 1]);
        worst = std::max(worst, hist.back() * 10.0);
    }
    // projection convergence: final projector matches, rank stabilises
    const auto& last = out.rows.back();
    for (double pr : last.projection_residuals) worst = std::max(worst, pr);
    if (last.projector_rank != rank_target) worst = std::max(worst, 1.0);

    out.report.probes = probes;
    out.report.constant("interval_a", a);
    out.report.constant("interval_b", b);
    out.report.constant("projector_rank", rank_target);
    out.report.set_outcome(worst, 1e-9);
    return out;
}

} // namespace wicklab::cutoff
