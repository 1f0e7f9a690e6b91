#include "wicklab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wicklab::cert {

namespace {

// worst-over-components aggregation: each component contributes its
// residual divided by its own tolerance, the report tolerance is 1
struct RatioWorst {
    double worst = -1e300;
    void add(double residual, double tol) {
        worst = std::max(worst, residual / tol);
    }
};

TruncPtr make_trunc(int d, int n_max) {
    return fock::FockTruncation::make({d, "probe"}, n_max);
}

OperatorSum to_sum(const BlockOperator& op) {
    OperatorSum s(op.trunc());
    s.add(op);
    return s;
}

OperatorSum number_sum(TruncPtr trunc) { return to_sum(fock::number_op(trunc)); }

} // namespace

CertificateReport ladder_norm_certificate(int max_d, int n_max, int draws,
                                          Rng& rng) {
    CertificateReport rep;
    rep.name = "ladder_norms";
    rep.statement = "creation blocks have spectral norm sqrt(n+1)|f| on every "
                    "symmetric sector, saturated along f tensor powers";

    std::map<int, TruncPtr> truncs;
    for (int d = 1; d <= max_d; ++d) truncs[d] = make_trunc(d, n_max);

    double worst = 0.0;
    for (int it = 0; it < draws; ++it) {
        int d = 1 + static_cast<int>(rng.uniform() * max_d);
        d = std::min(d, max_d);
        TruncPtr trunc = truncs[d];
        Vec f = rng.cnormal_vec(d);
        if (it == 0) f.setZero();  // zero vector edge
        double fn = f.norm();

        BlockOperator cr = fock::creation_op(f, trunc);
        for (int n = 0; n <= n_max - 1; ++n) {
            double expect = std::sqrt(double(n + 1)) * fn;
            worst = std::max(worst,
                             std::abs(spectral_norm(cr.block(n)) - expect));
        }

        if (fn > 0.0) {
            // witness: n-fold ladder applied to the vacuum
            int n = static_cast<int>(rng.uniform() * (n_max - 1));
            fock::FockVector w(trunc);
            w.sector(0)(0) = 1.0;
            for (int k = 0; k < n; ++k) w = cr.apply(w);
            w.normalize();
            double got = cr.apply(w).norm();
            worst = std::max(worst,
                             std::abs(got - std::sqrt(double(n + 1)) * fn));
        }

        // adjoint relation: annihilation block is the conjugate transpose
        // of the creation block at the conjugated argument
        Vec h = rng.cnormal_vec(d);
        BlockOperator an = fock::annihilation_op(h, trunc);
        BlockOperator cr2 = fock::creation_op(h.conjugate(), trunc);
        for (int n = 0; n + 1 <= n_max; ++n)
            worst = std::max(
                worst, (an.block(n + 1) - Mat(cr2.block(n).adjoint())).norm());
    }

    rep.probes = draws;
    rep.constant("max_d", max_d);
    rep.constant("n_max", n_max);
    rep.set_outcome(worst, 1e-10);
    return rep;
}

CertificateReport ccr_certificate(int d, int n_max, int draws, Rng& rng) {
    CertificateReport rep;
    rep.name = "ccr";
    rep.statement = "[a(f), a*(g)] = <f,g> and [a(f), a(g)] = 0 on sectors "
                    "untouched by the cutoff";

    TruncPtr trunc = make_trunc(d, n_max);
    const int cap = n_max - 2;
    double worst = 0.0;
    for (int it = 0; it < draws; ++it) {
        Vec f = rng.cnormal_vec(d);
        Vec g = rng.cnormal_vec(d);
        f.normalize();
        g.normalize();

        BlockOperator af = fock::annihilation_op(f.conjugate(), trunc);  // a(f)
        BlockOperator ag = fock::annihilation_op(g.conjugate(), trunc);
        BlockOperator cg = fock::creation_op(g, trunc);  // a*(g)

        OperatorSum comm(trunc);
        comm.add(af.compose(cg));
        comm.add(cg.compose(af).scaled(-1.0));
        cplx fg = f.dot(g);
        comm.add(OperatorSum::identity_multiple(trunc, -fg));
        worst = std::max(worst, spectral_norm(comm.compress(cap)));

        OperatorSum comm2(trunc);
        comm2.add(af.compose(ag));
        comm2.add(ag.compose(af).scaled(-1.0));
        worst = std::max(worst, spectral_norm(comm2.compress(cap)));
    }

    rep.probes = draws;
    rep.constant("d", d);
    rep.constant("sector_cap", cap);
    rep.set_outcome(worst, 1e-10);
    return rep;
}

CertificateReport monomial_bound_certificate(int draws, Rng& rng) {
    CertificateReport rep;
    rep.name = "monomial_norm_bound";
    rep.statement = "normal-ordered monomial blocks obey "
                    "sqrt(n!(n-m+l)!)/(n-m)! |F|, and the l=m=1, n=1 "
                    "configuration saturates it";

    double worst = -1e300;

    // saturating configuration: one mode, F = 1, one particle
    {
        TruncPtr trunc = make_trunc(1, 2);
        Vec F = Vec::Ones(1);
        BlockOperator op = fock::normal_monomial(F, 1, 1, trunc);
        double norm = spectral_norm(op.block(1));
        double bound = fock::monomial_norm_bound(1, 1, 1);
        worst = std::max(worst, std::abs(norm - bound));  // equality here
    }

    for (int it = 0; it < draws; ++it) {
        int l = static_cast<int>(rng.uniform() * 5);
        l = std::min(l, 4);
        int m = static_cast<int>(rng.uniform() * (5 - l));
        m = std::min(m, 4 - l);
        int d = 1 + static_cast<int>(rng.uniform() * 3);
        int n = m + static_cast<int>(rng.uniform() * 3);
        int n_max = std::max(n + l, 2);

        TruncPtr trunc = make_trunc(d, n_max);
        std::int64_t size = 1;
        for (int k = 0; k < l + m; ++k) size *= d;
        Vec F = rng.cnormal_vec(size);

        BlockOperator op = fock::normal_monomial(F, l, m, trunc);
        double bound = fock::monomial_norm_bound(l, m, n) * F.norm();
        double norm = op.has_block(n) ? spectral_norm(op.block(n)) : 0.0;
        worst = std::max(worst, (norm - bound) / std::max(1.0, bound));
    }

    rep.probes = draws;
    rep.set_outcome(worst, 1e-9);
    return rep;
}

CertificateReport ordering_factor_certificate(int draws, Rng& rng) {
    CertificateReport rep;
    rep.name = "ordering_factor";
    rep.statement = "anti-normal-ordered compositions stay below the factor "
                    "(n+l)!/sqrt(n!(n-m+l)!)";

    double worst = -1e300;
    int performed = 0;
    for (int it = 0; it < draws; ++it) {
        int l = static_cast<int>(rng.uniform() * 5);
        l = std::min(l, 4);
        int m = static_cast<int>(rng.uniform() * (5 - l));
        m = std::min(m, 4 - l);
        int d = 1 + static_cast<int>(rng.uniform() * 2);
        int n = std::max(m - l, 0) + static_cast<int>(rng.uniform() * 3);
        int n_max = std::max(n + l, 2);
        TruncPtr trunc = make_trunc(d, n_max);

        std::int64_t rows = 1, cols = 1;
        for (int k = 0; k < l; ++k) rows *= d;
        for (int k = 0; k < m; ++k) cols *= d;
        Vec up_tensor = rng.cnormal_vec(rows);
        Vec down_tensor = rng.cnormal_vec(cols);

        // creators act first, annihilators last
        BlockOperator up = fock::normal_monomial(up_tensor, l, 0, trunc);
        BlockOperator down = fock::normal_monomial(down_tensor, 0, m, trunc);
        BlockOperator anti = down.compose(up);

        double factor = std::exp(std::lgamma(n + l + 1.0) -
                                 0.5 * (std::lgamma(n + 1.0) +
                                        std::lgamma(n - m + l + 1.0)));
        double bound = factor * up_tensor.norm() * down_tensor.norm();
        if (!anti.has_block(n)) continue;
        double norm = spectral_norm(anti.block(n));
        worst = std::max(worst, (norm - bound) / std::max(1.0, bound));
        ++performed;

        // the rank-one saturating case: l = m = 1, single mode
        if (it == 0) {
            TruncPtr t1 = make_trunc(1, 2);
            BlockOperator sat =
                fock::normal_monomial(Vec::Ones(1), 0, 1, t1)
                    .compose(fock::normal_monomial(Vec::Ones(1), 1, 0, t1));
            // a a* on |1> = 2 |1>, meeting (n+l)!/sqrt(n!(n-m+l)!) = 2
            worst = std::max(worst, std::abs(spectral_norm(sat.block(1)) - 2.0));
        }
    }

    rep.probes = performed;
    rep.set_outcome(worst, 1e-9);
    return rep;
}

CertificateReport state_moment_certificate(const QuotientMap& qm, TruncPtr trunc,
                                           int draws, Rng& rng) {
    CertificateReport rep;
    rep.name = "state_moments";
    rep.statement = "embedding Gram identity, field linearity, vacuum "
                    "two-point recovery and quasi-free four-point pairing";

    const int d = static_cast<int>(qm.Q.cols());
    quasifree::TwoPointMatrix w2{qm.W_source, "probe"};

    double gram = 0.0, lin = 0.0, two = 0.0, four = 0.0;
    for (int it = 0; it < draws; ++it) {
        Vec f = rng.cnormal_vec(d), g = rng.cnormal_vec(d);
        f.normalize();
        g.normalize();

        Vec ef = quasifree::embed(f, qm), eg = quasifree::embed(g, qm);
        cplx lhs = ef.dot(eg);
        cplx rhs = 2.0 * quasifree::omega2(w2, f.conjugate(), g);
        gram = std::max(gram, std::abs(lhs - rhs));

        cplx alpha = rng.cnormal(), beta = rng.cnormal();
        auto pf = quasifree::field_op(f, qm, trunc);
        auto pg = quasifree::field_op(g, qm, trunc);
        auto pc = quasifree::field_op(alpha * f + beta * g, qm, trunc);
        for (int n = 0; n + 1 <= trunc->n_max(); ++n)
            lin = std::max(
                lin, (pc.creation_part.block(n) - alpha * pf.creation_part.block(n) -
                      beta * pg.creation_part.block(n))
                         .norm());
        for (int n = 1; n <= trunc->n_max(); ++n)
            lin = std::max(lin, (pc.annihilation_part.block(n) -
                                 alpha * pf.annihilation_part.block(n) -
                                 beta * pg.annihilation_part.block(n))
                                    .norm());

        // vacuum two-point
        fock::FockVector vac(trunc);
        vac.sector(0)(0) = 1.0;
        fock::FockVector v = pf.apply(pg.apply(vac));
        two = std::max(two,
                       std::abs(v.sector(0)(0) - quasifree::omega2(w2, f, g)));

        // four-point pairing
        Vec f3 = rng.cnormal_vec(d), f4 = rng.cnormal_vec(d);
        f3.normalize();
        f4.normalize();
        auto p3 = quasifree::field_op(f3, qm, trunc);
        auto p4 = quasifree::field_op(f4, qm, trunc);
        fock::FockVector v4 = pf.apply(pg.apply(p3.apply(p4.apply(vac))));
        cplx expect =
            quasifree::omega2(w2, f, g) * quasifree::omega2(w2, f3, f4) +
            quasifree::omega2(w2, f, f3) * quasifree::omega2(w2, g, f4) +
            quasifree::omega2(w2, f, f4) * quasifree::omega2(w2, g, f3);
        four = std::max(four, std::abs(v4.sector(0)(0) - expect));
    }

    RatioWorst agg;
    agg.add(gram, 1e-10);
    agg.add(lin, 1e-12);
    agg.add(two, 1e-10);
    agg.add(four, 1e-9);

    rep.probes = draws;
    rep.constant("gram_residual", gram);
    rep.constant("linearity_residual", lin);
    rep.constant("two_point_residual", two);
    rep.constant("four_point_residual", four);
    rep.set_outcome(agg.worst, 1.0);
    return rep;
}

CertificateReport nelson_certificate(const OperatorSum& O, TruncPtr trunc,
                                     int probes, Rng& rng) {
    for (const auto& [deg, part] : O.parts())
        if (std::abs(deg) > 2)
            throw config_error("growth certificate supports degree <= 2 only");

    CertificateReport rep;
    rep.name = "nelson_growth";
    rep.statement = "block growth |O on L(n)| <= c (n+2) and the iterated "
                    "bound |O^m psi| <= c^m (n+2)^m m! |psi|, product and "
                    "relaxed forms";

    const int n_max = trunc->n_max();
    const int cap = n_max - 2;

    double c_block = 0.0;
    for (int n = 0; n <= cap; ++n) {
        double norm = spectral_norm(O.rect(n, std::min(n + 2, n_max)));
        c_block = std::max(c_block, norm / double(n + 2));
    }

    // analytic-vector constant: |O^m psi| <= chat^{m+1} m!
    double chat = std::max(1.0, c_block * double(cap + 2));

    double worst = -1e300;
    for (int p = 0; p < probes; ++p) {
        int n = static_cast<int>(rng.uniform() * (cap + 1));
        fock::FockVector psi = fock::random_fock_vector(trunc, n, rng);
        fock::FockVector cur = psi;
        double prod = 1.0;
        for (int m = 1; n + 2 * m <= n_max; ++m) {
            cur = O.apply(cur);
            prod *= c_block * double(n + 2 * (m - 1) + 2);
            double fact = std::tgamma(m + 1.0);
            double relaxed =
                std::pow(c_block * double(n + 2), double(m)) * fact;
            double defform = std::pow(chat, double(m + 1)) * fact;
            double got = cur.norm();
            worst = std::max(worst, (got - prod) / std::max(1.0, prod));
            worst = std::max(worst, (got - relaxed) / std::max(1.0, relaxed));
            worst = std::max(worst, (got - defform) / std::max(1.0, defform));
        }
    }

    rep.probes = probes;
    rep.constant("c_block", c_block);
    rep.constant("c_analytic", chat);
    rep.set_outcome(worst, 1e-9);
    return rep;
}

CertificateReport wuest_certificate(const BlockOperator& A, const OperatorSum& B,
                                    double d, TruncPtr trunc, int probes,
                                    Rng& rng) {
    CertificateReport rep;
    rep.name = "wuest_bound";
    rep.statement = "|B psi| <= |(A + dN) psi| + d |psi| with "
                    "(A + dN)^2 >= d^2 N^2 and A PSD block diagonal";

    if (A.degree() != 0) throw config_error("A must have degree 0");
    const int n_max = trunc->n_max();
    const int cap = n_max - 2;

    // precondition: A PSD on its exact sectors
    double a_min = 0.0;
    double a_scale = 1.0;
    for (int n = 0; n <= A.safe_ceiling(); ++n) {
        a_min = std::min(a_min, min_eig_hermitian(A.block(n)));
        a_scale = std::max(a_scale, spectral_norm(A.block(n)));
    }
    bool precondition_ok = a_min >= -psd_tolerance(1e-10, a_scale);

    // (A + dN)^2 >= d^2 N^2, sector by sector
    double sq_min = 0.0;
    for (int n = 0; n <= A.safe_ceiling(); ++n) {
        Mat an = A.block(n) + d * double(n) *
                                  Mat::Identity(A.block(n).rows(),
                                                A.block(n).cols());
        Mat gap = an.adjoint() * an -
                  d * d * double(n) * double(n) *
                      Mat::Identity(an.rows(), an.cols());
        sq_min = std::min(sq_min, min_eig_hermitian(gap));
    }

    OperatorSum lhs = to_sum(A);
    lhs.add(fock::number_op(trunc).scaled(d));

    double probe_worst = -1e300;
    for (int p = 0; p < probes; ++p) {
        fock::FockVector psi = (p == 0)
                                   ? fock::FockVector(trunc)
                                   : fock::random_fock_vector(trunc, cap, rng);
        if (p == 0) psi.sector(0)(0) = 1.0;  // vacuum probe
        double b_norm = B.apply(psi).norm();
        double rhs = lhs.apply(psi).norm() + d * psi.norm();
        probe_worst = std::max(probe_worst, b_norm - rhs);
    }

    RatioWorst agg;
    agg.add(probe_worst, 1e-9);
    agg.add(-sq_min, psd_tolerance(1e-8, a_scale * a_scale));
    if (!precondition_ok) {
        agg.add(1.0, 1e-9);
        rep.warnings.push_back("precondition failed: A is not PSD");
    }

    rep.probes = probes;
    rep.constant("d", d);
    rep.constant("A_min_eig", a_min);
    rep.constant("square_gap_min_eig", sq_min);
    rep.constant("probe_worst", probe_worst);
    rep.set_outcome(agg.worst, 1.0);
    return rep;
}

KonradyConstants konrady_constant(const SmearingSpec& spec, const QuotientMap& qm,
                                  const Grid& grid,
                                  const wick::QuadraticKernel& ker) {
    SmearingSpec sq = spec.single_square_terms();
    if (grid.size() != sq.d_test())
        throw config_error("grid size does not match the smearing spec");

    // c = 3 (1/d) sum_j sum_{k in half} omega2(conj h, h) with
    // h = Q_j(f_j e^{+ik.}); every summand is a PSD pairing
    double c = 0.0;
    for (const auto& t : sq.terms)
        c += 3.0 / double(grid.size()) *
             cutoff::half_frequency_pairing_sum(t.Qop, t.witnesses.front(),
                                                grid, qm.W_source);

    KonradyConstants out;
    out.c = c;
    out.d = std::max(ker.norm_FK, ker.norm_FKbar);
    out.c_prime = out.c + std::sqrt(out.c * out.c + 2.0 * out.c * out.d);
    return out;
}

CertificateReport konrady_certificate(const BlockOperator& A, const OperatorSum& B,
                                      const KonradyConstants& consts,
                                      TruncPtr trunc, int probes, Rng& rng) {
    CertificateReport rep;
    rep.name = "konrady";
    rep.statement = "two-hypothesis certificate: |B psi| <= d|N psi| + d|psi| "
                    "and Re<N psi, (A+B) psi> >= -c <psi, (N+1) psi>";

    const int n_max = trunc->n_max();
    const int cap = n_max - 2;
    const double d = consts.d;
    const double c = consts.c;

    // A PSD precondition
    double a_min = 0.0, a_scale = 1.0;
    for (int n = 0; n <= A.safe_ceiling(); ++n) {
        a_min = std::min(a_min, min_eig_hermitian(A.block(n)));
        a_scale = std::max(a_scale, spectral_norm(A.block(n)));
    }

    // hypothesis (i), operator form: d^2 (N+1)^2 - B*B >= 0 on L(cap)
    Mat bmat = B.rect(cap, n_max);
    int dim = static_cast<int>(bmat.cols());
    Mat nplus = Mat::Zero(dim, dim);
    for (int n = 0; n <= cap; ++n)
        nplus.block(trunc->sector_offset(n), trunc->sector_offset(n),
                    trunc->sector_dim(n), trunc->sector_dim(n)) =
            double(n + 1) * Mat::Identity(trunc->sector_dim(n),
                                          trunc->sector_dim(n));
    Mat gap_i = d * d * nplus * nplus - Mat(bmat.adjoint() * bmat);
    double min_i = min_eig_hermitian(gap_i);
    double scale_i = std::max(1.0, d * d * double(cap + 1) * double(cap + 1));

    // hypothesis (ii): Herm(N (A+B)) + c (N+1) >= 0 on L(cap)
    OperatorSum T = to_sum(A);
    T.add(B);
    OperatorSum NT = number_sum(trunc).compose(T);
    Mat herm_nt = NT.herm_compress(cap);
    Mat m2 = herm_nt + c * nplus;
    double min_ii = min_eig_hermitian(m2);
    double scale_ii = spectral_norm(m2);

    // the sharpest admissible constant at this truncation, for the record
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> sharp(
        -0.5 * (herm_nt + Mat(herm_nt.adjoint())), nplus);
    double c_sharp = std::max(0.0, sharp.eigenvalues().maxCoeff());

    // probe checks of (i) and the derived c' inequality
    OperatorSum ABdN = T;
    ABdN.add(fock::number_op(trunc).scaled(d));
    BlockOperator N = fock::number_op(trunc);

    double probe_i = -1e300, probe_cp = -1e300;
    for (int p = 0; p < probes; ++p) {
        fock::FockVector psi = fock::random_fock_vector(trunc, cap, rng);
        double bn = B.apply(psi).norm();
        double nn = N.apply(psi).norm();
        probe_i = std::max(probe_i, bn - (d * nn + d));
        probe_cp =
            std::max(probe_cp, d * nn - (ABdN.apply(psi).norm() + consts.c_prime));
    }

    RatioWorst agg;
    agg.add(-min_i, psd_tolerance(1e-8, scale_i));
    agg.add(-min_ii, psd_tolerance(1e-8, scale_ii));
    agg.add(probe_i, 1e-9);
    agg.add(probe_cp, 1e-9);
    if (a_min < -psd_tolerance(1e-10, a_scale)) {
        agg.add(1.0, 1e-9);
        rep.warnings.push_back("precondition failed: A is not PSD");
    }

    rep.probes = probes;
    rep.constant("c", c);
    rep.constant("d", d);
    rep.constant("c_prime", consts.c_prime);
    rep.constant("c_sharp", c_sharp);
    rep.constant("hyp_i_min_eig", min_i);
    rep.constant("hyp_ii_min_eig", min_ii);
    rep.set_outcome(agg.worst, 1.0);
    if (c_sharp > c)
        rep.warnings.push_back("derived constant c below the sharp value");
    return rep;
}

CertificateReport commutator_identity_certificate(const QuotientMap& qm,
                                                  TruncPtr trunc, int draws,
                                                  Rng& rng) {
    CertificateReport rep;
    rep.name = "number_field_commutator";
    rep.statement = "N Phi(h) = Phi(h)(N-1) + sqrt2 a*(h) blockwise, and "
                    "N:Phi(conj h)Phi(h): + :Phi(conj h)Phi(h):N >= "
                    "-3 omega2(conj h, h)(N+1)";

    const int d = static_cast<int>(qm.Q.cols());
    const int n_max = trunc->n_max();
    const int cap = n_max - 2;
    quasifree::TwoPointMatrix w2{qm.W_source, "probe"};

    double worst_id = 0.0;
    double worst_psd_ratio = -1e300;
    double sharpest_coeff = 0.0;
    for (int it = 0; it < draws; ++it) {
        Vec h = rng.cnormal_vec(d);
        h.normalize();

        auto phi = quasifree::field_op(h, qm, trunc);
        OperatorSum phi_sum = phi.as_sum();
        OperatorSum nsum = number_sum(trunc);

        // (i) N Phi(h) - Phi(h)(N - 1) - sqrt2 a*([h]) = 0
        OperatorSum lhs = nsum.compose(phi_sum);
        OperatorSum nminus = nsum;
        nminus.add(OperatorSum::identity_multiple(trunc, -1.0));
        lhs.add(phi_sum.compose(nminus).scaled(-1.0));
        lhs.add(to_sum(fock::creation_op(std::sqrt(2.0) * Vec(qm.Q * h), trunc))
                    .scaled(-1.0));
        worst_id = std::max(worst_id, spectral_norm(lhs.rect(cap, n_max)));

        // (ii) lower bound for the normal-ordered pair product
        double om = quasifree::omega2(w2, h.conjugate(), h).real();
        auto phib = quasifree::field_op(h.conjugate(), qm, trunc);
        OperatorSum X = phib.as_sum().compose(phi_sum);
        X.add(OperatorSum::identity_multiple(trunc, -om));

        OperatorSum M = nsum.compose(X);
        M.add(X.compose(nsum));
        Mat mm = M.herm_compress(cap);
        int dim = static_cast<int>(mm.rows());
        Mat npl = Mat::Zero(dim, dim);
        for (int n = 0; n <= cap; ++n)
            npl.block(trunc->sector_offset(n), trunc->sector_offset(n),
                      trunc->sector_dim(n), trunc->sector_dim(n)) =
                double(n + 1) * Mat::Identity(trunc->sector_dim(n),
                                              trunc->sector_dim(n));
        Mat bound = mm + 3.0 * om * npl;
        double tol = psd_tolerance(1e-8, spectral_norm(bound));
        worst_psd_ratio =
            std::max(worst_psd_ratio, -min_eig_hermitian(bound) / tol);

        // sharpest coefficient this h actually needs in place of 3
        if (om > 1e-12) {
            Eigen::GeneralizedSelfAdjointEigenSolver<Mat> sharp(
                -0.5 * (mm + Mat(mm.adjoint())), npl);
            sharpest_coeff = std::max(
                sharpest_coeff, sharp.eigenvalues().maxCoeff() / om);
        }
    }

    RatioWorst agg;
    agg.add(worst_id, 1e-10);
    agg.worst = std::max(agg.worst, worst_psd_ratio);

    rep.probes = draws;
    rep.constant("identity_residual", worst_id);
    rep.constant("sharpest_coefficient", sharpest_coeff);
    rep.set_outcome(agg.worst, 1.0);
    return rep;
}

CertificateReport hermiticity_certificate(const WickOperator& op) {
    CertificateReport rep;
    rep.name = "wick_hermiticity";
    rep.statement = "diagonal blocks Hermitian and raising blocks adjoint to "
                    "lowering blocks on exact sectors";

    TruncPtr trunc = op.trunc();
    double worst = 0.0;
    for (int n = 0; n <= op.A.safe_ceiling(); ++n)
        worst = std::max(worst,
                         (op.A.block(n) - Mat(op.A.block(n).adjoint())).norm());
    for (int n = 0; n <= op.Bplus.safe_ceiling(); ++n) {
        if (!op.Bplus.has_block(n) || !op.Bminus.has_block(n + 2)) continue;
        worst = std::max(
            worst,
            (op.Bplus.block(n) - Mat(op.Bminus.block(n + 2).adjoint())).norm());
    }

    double scale = std::max(1.0, op.kernel.norm_FK);
    rep.set_outcome(worst / scale, 1e-10);
    return rep;
}

CertificateReport wick_pairing_certificate(const WickOperator& op,
                                           const QuotientMap& qm, int probes,
                                           Rng& rng) {
    CertificateReport rep;
    rep.name = "wick_pairing";
    rep.statement = "<vacuum, T vacuum> = 0 and <psi, T psi> equals the "
                    "two-point deformation paired with the smearing kernel";

    TruncPtr trunc = op.trunc();
    const int d = static_cast<int>(qm.Q.cols());
    const int cap = trunc->n_max() - 2;
    quasifree::TwoPointMatrix w2{qm.W_source, "probe"};

    fock::FockVector vac(trunc);
    vac.sector(0)(0) = 1.0;
    double worst = std::abs(vac.dot(op.T().apply(vac)));

    std::vector<quasifree::FieldOperator> site_fields;
    for (int x = 0; x < d; ++x) {
        Vec e = Vec::Zero(d);
        e(x) = 1.0;
        site_fields.push_back(quasifree::field_op(e, qm, trunc));
    }

    double om_F = op.kernel.ordering_constant;
    Mat tmat = op.T().herm_compress(cap);
    for (int p = 0; p < probes; ++p) {
        fock::FockVector psi = fock::random_fock_vector(trunc, cap, rng);
        std::vector<fock::FockVector> u;
        for (int x = 0; x < d; ++x) u.push_back(site_fields[x].apply(psi));
        cplx om_prime(0.0, 0.0);
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y) {
                if (op.kernel.F_test(x, y) == cplx(0.0, 0.0)) continue;
                om_prime += op.kernel.F_test(x, y) * u[x].dot(u[y]);
            }
        Vec st = psi.stacked(cap);
        cplx lhs = (st.adjoint() * tmat * st)(0, 0);
        worst = std::max(worst, std::abs(lhs - (om_prime - om_F)));
    }

    rep.probes = probes;
    rep.constant("ordering_constant", om_F);
    rep.set_outcome(worst, 1e-8);
    return rep;
}

CertificateReport wick_relative_bound_certificate(const WickOperator& op,
                                                  int probes, Rng& rng) {
    CertificateReport rep;
    rep.name = "wick_relative_bound";
    rep.statement = "|B psi| <= (d/2)|(N+2) psi| with d = |F_K| + |F_Kbar|, "
                    "and |B psi| <= max(|F_K|,|F_Kbar|) |(N+1) psi|";

    TruncPtr trunc = op.trunc();
    const int n_max = trunc->n_max();
    const int cap = n_max - 2;
    const double d_sum = op.kernel.norm_FK + op.kernel.norm_FKbar;
    const double kappa = std::max(op.kernel.norm_FK, op.kernel.norm_FKbar);

    OperatorSum B = op.B();
    Mat bmat = B.rect(cap, n_max);
    int dim = static_cast<int>(bmat.cols());
    Mat n2 = Mat::Zero(dim, dim), n1 = Mat::Zero(dim, dim);
    for (int n = 0; n <= cap; ++n) {
        auto block = [&](Mat& m, double v) {
            m.block(trunc->sector_offset(n), trunc->sector_offset(n),
                    trunc->sector_dim(n), trunc->sector_dim(n)) =
                v * Mat::Identity(trunc->sector_dim(n), trunc->sector_dim(n));
        };
        block(n2, double(n + 2));
        block(n1, double(n + 1));
    }
    Mat btb = bmat.adjoint() * bmat;
    double min_half = min_eig_hermitian(0.25 * d_sum * d_sum * n2 * n2 - btb);
    double min_kappa = min_eig_hermitian(kappa * kappa * n1 * n1 - btb);

    BlockOperator N = fock::number_op(trunc);
    double probe_worst = -1e300;
    for (int p = 0; p < probes; ++p) {
        fock::FockVector psi = fock::random_fock_vector(trunc, cap, rng);
        double bn = B.apply(psi).norm();
        fock::FockVector npsi = N.apply(psi);
        fock::FockVector n2psi = npsi;
        n2psi += psi;
        n2psi += psi;
        probe_worst = std::max(probe_worst, bn - 0.5 * d_sum * n2psi.norm());
        fock::FockVector n1psi = npsi;
        n1psi += psi;
        probe_worst = std::max(probe_worst, bn - kappa * n1psi.norm());
    }

    double scale = std::max(1.0, d_sum * d_sum * double(cap + 2) * double(cap + 2));
    RatioWorst agg;
    agg.add(-min_half, psd_tolerance(1e-8, scale));
    agg.add(-min_kappa, psd_tolerance(1e-8, scale));
    agg.add(probe_worst, 1e-9);

    rep.probes = probes;
    rep.constant("d_sum", d_sum);
    rep.constant("kappa", kappa);
    rep.set_outcome(agg.worst, 1.0);
    return rep;
}

CertificateReport truncation_stability(
    const std::function<OperatorSum(TruncPtr)>& builder,
    const std::function<TruncPtr(int)>& trunc_maker,
    const std::vector<int>& n_max_list, int k_eigs, double shift_tol) {
    if (n_max_list.size() < 2)
        throw config_error("truncation scan needs at least two cutoffs");
    for (std::size_t i = 1; i < n_max_list.size(); ++i)
        if (n_max_list[i] <= n_max_list[i - 1])
            throw config_error("cutoff list must be strictly increasing");

    CertificateReport rep;
    rep.name = "truncation_stability";
    rep.statement = "low eigenvalues settle as the particle-number cutoff "
                    "grows; shifts are relative to the spectral norm";

    std::vector<RVec> spectra;
    double scale = 1.0;
    for (int n_max : n_max_list) {
        TruncPtr trunc = trunc_maker(n_max);
        OperatorSum op = builder(trunc);
        Mat m = op.herm_compress(n_max - 2);
        spectra.push_back(eigvals_hermitian(m));
        scale = std::max(scale, spectral_norm(m));
    }

    std::vector<double> deltas;
    for (std::size_t i = 1; i < spectra.size(); ++i) {
        double delta = 0.0;
        int k = std::min<int>(k_eigs, std::min(spectra[i - 1].size(),
                                               spectra[i].size()));
        for (int j = 0; j < k; ++j)
            delta = std::max(delta, std::abs(spectra[i](j) - spectra[i - 1](j)));
        deltas.push_back(delta / scale);
    }

    double trend_violation = 0.0;
    for (std::size_t i = 1; i < deltas.size(); ++i)
        trend_violation = std::max(trend_violation, deltas[i] - deltas[i - 1]);

    RatioWorst agg;
    agg.add(deltas.back(), shift_tol);
    agg.add(trend_violation, shift_tol);

    rep.constant("k_eigs", k_eigs);
    rep.constant("last_shift_rel", deltas.back());
    rep.constant("spectral_scale", scale);
    for (std::size_t i = 0; i < deltas.size(); ++i)
        rep.notes.push_back("shift " + std::to_string(n_max_list[i]) + "->" +
                            std::to_string(n_max_list[i + 1]) + ": " +
                            format_double(deltas[i]));
    rep.set_outcome(agg.worst, 1.0);
    return rep;
}

CertificateReport t1_scan(const Mat& T1, bool class_S_no_derivative) {
    CertificateReport rep;
    rep.name = "t1_scan";
    rep.statement = "one-particle compression: Hermitian, real spectrum, PSD "
                    "for class-S smearing without derivatives";

    double herm = hermiticity_residual(T1);

    Eigen::ComplexEigenSolver<Mat> es(T1);
    double max_imag = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        max_imag = std::max(max_imag, std::abs(es.eigenvalues()(i).imag()));
    double scale = std::max(1.0, spectral_norm(T1));

    RatioWorst agg;
    agg.add(herm, 1e-12);
    agg.add(max_imag / scale, 1e-10);
    double min_eig = min_eig_hermitian(T1);
    if (class_S_no_derivative) {
        agg.add(-min_eig, psd_tolerance(1e-10, scale));
    } else {
        rep.warnings.push_back(
            "positivity not asserted for derivative smearing");
    }
    rep.notes.push_back(
        "no +/-i eigenvalues: automatic for a finite Hermitian matrix");

    rep.constant("hermiticity_residual", herm);
    rep.constant("min_eig", min_eig);
    rep.set_outcome(agg.worst, 1.0);
    return rep;
}

} // namespace wicklab::cert
