#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wicklab/certificates.hpp"
#include "wicklab/models.hpp"

using namespace wicklab;
using namespace wicklab::cert;

namespace {

struct Setup {
    quasifree::TwoPointMatrix w;
    quasifree::QuotientMap qm;
    fock::TruncPtr trunc;
    cutoff::Grid grid;
    wick::SmearingSpec spec;
    wick::QuadraticKernel kernel;
    wick::WickOperator op;
};

Setup oscillator_wick(int d_test, int n_max, int q_order = 0) {
    models::OscillatorModel osc{1.0, {d_test, 0.7, true}};
    Setup s;
    s.w = models::oscillator_two_point(osc);
    auto [space, qm] = quasifree::one_particle_space(s.w, 1e-10);
    s.qm = qm;
    s.trunc = fock::FockTruncation::make(space, n_max);
    s.grid = osc.grid.as_grid();

    wick::SmearingTerm t;
    t.Qop = RMat::Identity(d_test, d_test);
    if (q_order > 0) t.Qop = models::finite_difference(q_order, osc.grid);
    RVec g = models::triangle_bump(d_test, d_test / 2 - 1, 2);
    auto [f, wit] = models::sum_of_squares_smearing({g});
    t.f = f;
    t.witnesses = wit;
    s.spec.terms.push_back(t);

    s.kernel = wick::kernel_from_smearing(s.spec, s.qm);
    s.op = wick::wick_square_operator(s.kernel, s.trunc);
    return s;
}

} // namespace

TEST_CASE("ladder and ccr certificates pass") {
    Rng r1(1), r2(2);
    CHECK(ladder_norm_certificate(4, 5, 50, r1).pass);
    CHECK(ccr_certificate(3, 5, 50, r2).pass);
}

TEST_CASE("monomial bound and ordering factor certificates pass") {
    Rng r1(3), r2(4);
    CertificateReport mb = monomial_bound_certificate(200, r1);
    INFO(mb.worst_residual);
    CHECK(mb.pass);
    CHECK(ordering_factor_certificate(60, r2).pass);
}

TEST_CASE("state moments certificate passes on the oscillator") {
    Setup s = oscillator_wick(8, 6);
    Rng rng(5);
    CertificateReport rep = state_moment_certificate(s.qm, s.trunc, 50, rng);
    INFO(rep.worst_residual);
    CHECK(rep.pass);
}

TEST_CASE("nelson growth: number operator and hand-computed pair source") {
    // O = N on a single mode: |N restricted to L(n)| = n <= 1 (n+2)
    fock::TruncPtr t1 = fock::FockTruncation::make({1, "nelson"}, 6);
    fock::OperatorSum nsum(t1);
    nsum.add(fock::number_op(t1));
    Rng rng(7);
    CertificateReport rep = nelson_certificate(nsum, t1, 40, rng);
    CHECK(rep.pass);
    for (const auto& [k, v] : rep.constants)
        if (k == "c_block") CHECK(v <= 1.0 + 1e-12);

    // O = (a*^2 + a^2)/2 at n_max = 4: |O^2 vacuum| = sqrt(7)/2
    wick::QuadraticKernel ker;
    ker.F_test = ker.F_K = ker.F_Kbar = ker.F_mixed = Mat::Identity(1, 1);
    ker.norm_FK = ker.norm_FKbar = 1.0;
    fock::TruncPtr t4 = fock::FockTruncation::make({1, "pair"}, 4);
    wick::WickOperator op = wick::wick_square_operator(ker, t4);
    fock::OperatorSum b = op.B();
    fock::FockVector vac(t4);
    vac.sector(0)(0) = 1.0;
    fock::FockVector b2 = b.apply(b.apply(vac));
    CHECK(std::abs(b2.norm() - std::sqrt(7.0) / 2.0) < 1e-13);

    Rng rng2(8);
    CHECK(nelson_certificate(b, t4, 40, rng2).pass);

    // degree > 2 is unsupported
    fock::OperatorSum bad(t4);
    bad.add(fock::normal_monomial(Vec::Ones(1), 3, 0, t4));
    CHECK_THROWS_AS(nelson_certificate(bad, t4, 1, rng2), config_error);
}

TEST_CASE("wuest certificate: pass, trivial B, and designed failure") {
    Setup s = oscillator_wick(8, 6);
    double d = s.kernel.norm_FK + s.kernel.norm_FKbar;

    Rng rng(9);
    CertificateReport ok =
        wuest_certificate(s.op.A, s.op.B(), d, s.trunc, 100, rng);
    INFO(ok.worst_residual);
    CHECK(ok.pass);

    // B = 0 passes with any d >= 0
    fock::OperatorSum zero(s.trunc);
    Rng rng2(10);
    CHECK(wuest_certificate(s.op.A, zero, 0.0, s.trunc, 20, rng2).pass);

    // d = 0 with B != 0 must fail (vacuum probe witnesses it)
    Rng rng3(11);
    CertificateReport bad =
        wuest_certificate(s.op.A, s.op.B(), 0.0, s.trunc, 20, rng3);
    CHECK(!bad.pass);
}

TEST_CASE("konrady constants and certificate on the oscillator") {
    Setup s = oscillator_wick(8, 6);
    KonradyConstants consts = konrady_constant(s.spec, s.qm, s.grid, s.kernel);
    CHECK(consts.c >= 0.0);
    CHECK(consts.d >= 0.0);
    CHECK(consts.c_prime >= consts.c);

    Rng rng(12);
    CertificateReport rep =
        konrady_certificate(s.op.A, s.op.B(), consts, s.trunc, 100, rng);
    INFO(rep.worst_residual);
    CHECK(rep.pass);

    // zero smearing gives zero constants
    wick::SmearingSpec zspec;
    wick::SmearingTerm zt;
    zt.Qop = RMat::Identity(8, 8);
    zt.f = RVec::Zero(8);
    zt.witnesses = {RVec::Zero(8)};
    zspec.terms.push_back(zt);
    wick::QuadraticKernel zker = wick::kernel_from_smearing(zspec, s.qm);
    KonradyConstants zc = konrady_constant(zspec, s.qm, s.grid, zker);
    CHECK(zc.c == 0.0);
    CHECK(zc.d == 0.0);
    CHECK(zc.c_prime == 0.0);

    // B = 0 with A = dGamma(T1 >= 0) passes with c = 0
    KonradyConstants free{};
    fock::OperatorSum zero(s.trunc);
    Rng rng2(13);
    CHECK(konrady_certificate(s.op.A, zero, free, s.trunc, 20, rng2).pass);

    // scaling B by 100 against unscaled d breaks hypothesis (i)
    Rng rng3(14);
    CertificateReport broken = konrady_certificate(
        s.op.A, s.op.B().scaled(100.0), consts, s.trunc, 20, rng3);
    CHECK(!broken.pass);
}

TEST_CASE("konrady certificate on the derivative smearing") {
    Setup s = oscillator_wick(8, 5, 1);
    KonradyConstants consts = konrady_constant(s.spec, s.qm, s.grid, s.kernel);
    Rng rng(15);
    CertificateReport rep =
        konrady_certificate(s.op.A, s.op.B(), consts, s.trunc, 60, rng);
    INFO(rep.worst_residual);
    CHECK(rep.pass);
}

TEST_CASE("commutator identities hold for the oscillator state") {
    Setup s = oscillator_wick(8, 5);
    Rng rng(16);
    CertificateReport rep =
        commutator_identity_certificate(s.qm, s.trunc, 20, rng);
    INFO(rep.worst_residual);
    CHECK(rep.pass);
}

TEST_CASE("zero test vector trivialises both commutator statements") {
    quasifree::TwoPointMatrix w;
    w.W = 0.5 * Mat::Identity(2, 2);
    auto [space, qm] = quasifree::one_particle_space(w, 1e-10);
    auto trunc = fock::FockTruncation::make(space, 4);

    Vec h = Vec::Zero(2);
    auto phi = quasifree::field_op(h, qm, trunc).as_sum();
    fock::OperatorSum nsum(trunc);
    nsum.add(fock::number_op(trunc));

    fock::OperatorSum lhs = nsum.compose(phi);
    fock::OperatorSum nm1 = nsum;
    nm1.add(fock::OperatorSum::identity_multiple(trunc, -1.0));
    lhs.add(phi.compose(nm1).scaled(-1.0));
    CHECK(spectral_norm(lhs.rect(2, 4)) == 0.0);

    // the pair product vanishes, so the bound matrix is 3 om (N+1) = 0
    double om = quasifree::omega2(w, h.conjugate(), h).real();
    CHECK(om == 0.0);
}

TEST_CASE("single-mode commutator identity against the ladder computation") {
    // [h] = 1: N Phi - Phi(N-1) = sqrt2 a* exactly
    quasifree::TwoPointMatrix w;
    w.W = 0.5 * Mat::Identity(1, 1);
    auto [space, qm] = quasifree::one_particle_space(w, 1e-10);
    auto trunc = fock::FockTruncation::make(space, 4);

    Vec h = Vec::Ones(1);
    auto phi = quasifree::field_op(h, qm, trunc).as_sum();
    fock::OperatorSum nsum(trunc);
    nsum.add(fock::number_op(trunc));

    fock::OperatorSum lhs = nsum.compose(phi);
    fock::OperatorSum nm1 = nsum;
    nm1.add(fock::OperatorSum::identity_multiple(trunc, -1.0));
    lhs.add(phi.compose(nm1).scaled(-1.0));
    fock::OperatorSum rhs(trunc);
    rhs.add(fock::creation_op(std::sqrt(2.0) * Vec(qm.Q * h), trunc));
    lhs.add(rhs.scaled(-1.0));
    CHECK(spectral_norm(lhs.rect(2, 4)) < 1e-13);
}

TEST_CASE("wick operator certificates: hermiticity, pairing, relative bound") {
    Setup s = oscillator_wick(8, 6);
    CHECK(hermiticity_certificate(s.op).pass);
    Rng rng(17);
    CHECK(wick_pairing_certificate(s.op, s.qm, 20, rng).pass);
    Rng rng2(18);
    CertificateReport rb = wick_relative_bound_certificate(s.op, 100, rng2);
    INFO(rb.worst_residual);
    CHECK(rb.pass);
}

TEST_CASE("relative bound saturation: the halved max-norm form fails") {
    // single mode, F = 1, psi = |4>: |B psi| = sqrt(10.5)/... > (1/2)(n+2),
    // so the certificate constant must be the summed norm, not the max
    wick::QuadraticKernel ker;
    ker.F_test = ker.F_K = ker.F_Kbar = ker.F_mixed = Mat::Identity(1, 1);
    ker.norm_FK = ker.norm_FKbar = 1.0;
    fock::TruncPtr t = fock::FockTruncation::make({1, "sat"}, 6);
    wick::WickOperator op = wick::wick_square_operator(ker, t);

    fock::FockVector psi(t);
    psi.sector(4)(0) = 1.0;
    double bn = op.B().apply(psi).norm();
    CHECK(std::abs(bn - std::sqrt(10.5)) < 1e-12);
    double kappa = 1.0;
    CHECK(bn > 0.5 * kappa * 6.0);            // violates (max/2)(N+2)
    CHECK(bn <= 0.5 * (1.0 + 1.0) * 6.0);     // obeys (sum/2)(N+2)
    CHECK(bn <= kappa * 5.0);                 // obeys max (N+1)
}

TEST_CASE("truncation stability of the oscillator wick square") {
    // the wide bump suppresses the pair-creation part, so the low spectrum
    // settles quickly as the cutoff grows
    models::OscillatorModel osc{1.0, {8, 1.2, true}};
    quasifree::TwoPointMatrix w = models::oscillator_two_point(osc);
    auto [space, qm] = quasifree::one_particle_space(w, 1e-10);

    wick::SmearingTerm t;
    t.Qop = RMat::Identity(8, 8);
    RVec g = models::gaussian_bump(8, 3.5, 1.8);
    auto [f, wit] = models::sum_of_squares_smearing({g});
    t.f = f;
    t.witnesses = wit;
    wick::SmearingSpec spec;
    spec.terms.push_back(t);
    wick::QuadraticKernel ker = wick::kernel_from_smearing(spec, qm);

    auto builder = [&ker](fock::TruncPtr tr) {
        return wick::wick_square_operator(ker, tr).T();
    };
    auto maker = [&space = space](int nm) {
        return fock::FockTruncation::make(space, nm);
    };

    CertificateReport rep =
        truncation_stability(builder, maker, {5, 6, 7}, 3, 1e-3);
    INFO(rep.worst_residual);
    CHECK(rep.pass);

    // diagonal operator: eigenvalues never move
    auto diag_builder = [](fock::TruncPtr tr) {
        fock::OperatorSum s(tr);
        s.add(fock::number_op(tr));
        return s;
    };
    CertificateReport diag =
        truncation_stability(diag_builder, maker, {4, 5, 6}, 3, 1e-12);
    CHECK(diag.pass);
    CHECK(diag.worst_residual <= 0.0 + 1e-15);

    CHECK_THROWS_AS(truncation_stability(diag_builder, maker, {5}, 3, 1e-3),
                    config_error);
}

TEST_CASE("t1 scan certifies positivity only without derivatives") {
    Setup plain = oscillator_wick(8, 5);
    CertificateReport ok = t1_scan(wick::compression_T1(plain.op), true);
    CHECK(ok.pass);

    Setup deriv = oscillator_wick(8, 5, 1);
    CertificateReport d = t1_scan(wick::compression_T1(deriv.op), false);
    CHECK(d.pass);  // hermiticity and real spectrum still hold
    CHECK(!d.warnings.empty());

    Mat t1 = Mat::Identity(1, 1);
    CertificateReport one = t1_scan(t1, true);
    CHECK(one.pass);
}
