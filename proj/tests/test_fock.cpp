#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "wicklab/fock.hpp"
#include "wicklab/kernels.hpp"

using namespace wicklab;
using namespace wicklab::fock;

namespace {

TruncPtr trunc_of(int d, int n_max) {
    return FockTruncation::make({d, "test"}, n_max);
}

// brute-force multiset enumeration, independent of the generator
int count_multisets(int d, int n) {
    if (d == 1) return 1;
    int total = 0;
    for (int v = 0; v <= n; ++v) total += count_multisets(d - 1, n - v);
    return total;
}

} // namespace

TEST_CASE("sym_basis enumerates lexicographically") {
    OccupationBasis b = sym_basis(2, 2);
    REQUIRE(b.size() == 3);
    CHECK(b.state(0) == MultiIndex{0, 2});
    CHECK(b.state(1) == MultiIndex{1, 1});
    CHECK(b.state(2) == MultiIndex{2, 0});

    OccupationBasis one_mode = sym_basis(1, 3);
    REQUIRE(one_mode.size() == 1);
    CHECK(one_mode.state(0) == MultiIndex{3});
}

TEST_CASE("sym_basis size matches the multiset count") {
    CHECK(sym_basis(3, 4).size() == 15);  // C(6,4), frozen from the oracle
    for (int d = 1; d <= 5; ++d)
        for (int n = 0; n <= 5; ++n) {
            OccupationBasis b = sym_basis(d, n);
            CHECK(b.size() == count_multisets(d, n));
            CHECK(b.size() == static_cast<int>(binomial(d + n - 1, n)));
            // lookup round-trips every state
            for (int i = 0; i < b.size(); ++i)
                CHECK(b.index_of(b.state(i)) == i);
        }
}

TEST_CASE("truncation dimension bookkeeping and memory guard") {
    TruncPtr t = trunc_of(2, 3);
    CHECK(t->total_dim() == 1 + 2 + 3 + 4);
    CHECK(t->sector_offset(2) == 3);
    CHECK_THROWS_AS(FockTruncation::make({8, "big"}, 6, 100), model_error);
    CHECK_THROWS_AS(FockTruncation::make({2, "small"}, 1), config_error);
}

TEST_CASE("single-mode creation matrix elements are sqrt(n+1)") {
    TruncPtr t = trunc_of(1, 4);
    Vec f = Vec::Ones(1);
    BlockOperator cr = creation_op(f, t);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(cr.block(n)(0, 0) - std::sqrt(double(n + 1))) < 1e-14);
    CHECK(cr.safe_ceiling() == 3);
}

TEST_CASE("creation block norm saturates sqrt(n+1)|f|") {
    Rng rng(11);
    TruncPtr t = trunc_of(2, 4);
    Vec f(2);
    f << 1.0 / std::sqrt(2.0), cplx(0.0, 1.0) / std::sqrt(2.0);
    BlockOperator cr = creation_op(f, t);
    CHECK(std::abs(spectral_norm(cr.block(3)) - 2.0) < 1e-12);

    // zero vector gives the zero operator
    BlockOperator zero = creation_op(Vec::Zero(2), t);
    for (int n = 0; n < 4; ++n) CHECK(zero.block(n).norm() == 0.0);

    CHECK_THROWS_AS(creation_op(Vec::Zero(3), t), config_error);
}

TEST_CASE("annihilation kills the vacuum and adjoints the creation") {
    Rng rng(3);
    TruncPtr t = trunc_of(3, 4);
    Vec h = rng.cnormal_vec(3);
    BlockOperator an = annihilation_op(h, t);

    FockVector vac(t);
    vac.sector(0)(0) = 1.0;
    CHECK(an.apply(vac).norm() == 0.0);

    BlockOperator cr = creation_op(h.conjugate(), t);
    for (int n = 0; n < 4; ++n)
        CHECK((an.block(n + 1) - Mat(cr.block(n).adjoint())).norm() < 1e-12);

    // single mode: <n| a |n+1> = sqrt(n+1)
    TruncPtr t1 = trunc_of(1, 5);
    BlockOperator a1 = annihilation_op(Vec::Ones(1), t1);
    for (int n = 0; n < 5; ++n)
        CHECK(std::abs(a1.block(n + 1)(0, 0) - std::sqrt(double(n + 1))) < 1e-14);
}

TEST_CASE("number operator is n per sector and equals dGamma(I)") {
    TruncPtr t = trunc_of(2, 4);
    BlockOperator n_op = number_op(t);
    FockVector vac(t);
    vac.sector(0)(0) = 1.0;
    CHECK(n_op.apply(vac).norm() == 0.0);
    CHECK((n_op.block(3) - 3.0 * Mat::Identity(4, 4)).norm() == 0.0);

    Mat id = Mat::Identity(2, 2);
    for (int n = 0; n <= 4; ++n) {
        Mat dg = kernels::dgamma_block_serial(id, t->sector(n));
        CHECK((dg - n_op.block(n)).norm() < 1e-13);
    }
}

TEST_CASE("apply refuses support above the safe ceiling") {
    TruncPtr t = trunc_of(2, 3);
    Rng rng(5);
    BlockOperator cr = creation_op(rng.cnormal_vec(2), t);
    FockVector top(t);
    top.sector(3)(0) = 1.0;
    CHECK_THROWS_AS(cr.apply(top), truncation_error);
}

TEST_CASE("normal monomial identity and vacuum cases") {
    TruncPtr t = trunc_of(2, 3);
    Vec scalar = Vec::Ones(1);
    BlockOperator id = normal_monomial(scalar, 0, 0, t);
    for (int n = 0; n <= 3; ++n)
        CHECK((id.block(n) - Mat::Identity(t->sector_dim(n), t->sector_dim(n)))
                  .norm() == 0.0);

    // l=1, m=1, d=1, F=1: identity on the one-particle sector, norm 1
    TruncPtr t1 = trunc_of(1, 2);
    BlockOperator aa = normal_monomial(Vec::Ones(1), 1, 1, t1);
    CHECK(std::abs(spectral_norm(aa.block(1)) - 1.0) < 1e-14);
    CHECK(std::abs(aa.block(1)(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("pure raising pair on the vacuum has norm sqrt(2)|F|") {
    Rng rng(17);
    TruncPtr t = trunc_of(3, 2);
    Mat F = rng.cnormal_mat(3, 3);
    F = 0.5 * (F + Mat(F.transpose()));  // symmetric
    Vec flat(9);
    for (int i = 0, k = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) flat(k++) = F(i, j);
    BlockOperator b = normal_monomial(flat, 2, 0, t);
    CHECK(std::abs(spectral_norm(b.block(0)) - std::sqrt(2.0) * F.norm()) <
          1e-12);
}

TEST_CASE("monomial blocks match the full-tensor-space oracle") {
    Rng rng(23);
    int checked = 0;
    for (int it = 0; it < 80; ++it) {
        int l = static_cast<int>(rng.uniform() * 5);
        l = std::min(l, 4);
        int m = static_cast<int>(rng.uniform() * (5 - l));
        m = std::min(m, 4 - l);
        int d = 1 + static_cast<int>(rng.uniform() * 3);
        int n = m + static_cast<int>(rng.uniform() * 3);
        if (test_oracle::ipow(d, n + l) > 3000) continue;

        int n_max = std::max(n + l, 2);
        TruncPtr t = trunc_of(d, n_max);
        std::int64_t size = 1;
        for (int k = 0; k < l + m; ++k) size *= d;
        Vec F = rng.cnormal_vec(size);

        BlockOperator impl = normal_monomial(F, l, m, t);
        Mat oracle = test_oracle::monomial_block(F, l, m, d, n);
        REQUIRE(impl.has_block(n));
        CHECK((impl.block(n) - oracle).norm() <
              1e-10 * std::max(1.0, oracle.norm()));
        ++checked;
    }
    CHECK(checked >= 40);
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    Rng rng(29);
    OccupationBasis src = sym_basis(4, 4);
    OccupationBasis dst = sym_basis(4, 4);
    Vec F = rng.cnormal_vec(4 * 4);
    Mat a = kernels::monomial_block_serial(F, 1, 1, src, dst);
    Mat b = kernels::monomial_block_parallel(F, 1, 1, src, dst);
    CHECK((a - b).norm() == 0.0);

    Mat t1 = rng.cnormal_mat(4, 4);
    t1 = 0.5 * (t1 + Mat(t1.adjoint()));
    Mat c = kernels::dgamma_block_serial(t1, src);
    Mat d = kernels::dgamma_block_parallel(t1, src);
    CHECK((c - d).norm() == 0.0);
}

TEST_CASE("composition adds degrees and tracks ceilings") {
    Rng rng(31);
    TruncPtr t = trunc_of(2, 4);
    BlockOperator cr = creation_op(rng.cnormal_vec(2), t);
    BlockOperator an = annihilation_op(rng.cnormal_vec(2), t);

    BlockOperator both = cr.compose(an);
    CHECK(both.degree() == 0);
    CHECK(both.safe_ceiling() == 4);

    BlockOperator raise2 = cr.compose(cr);
    CHECK(raise2.degree() == 2);
    CHECK(raise2.safe_ceiling() == 2);

    // degree arithmetic under further composition
    CHECK(raise2.compose(an).degree() == 1);

    // ceiling bookkeeping refuses corrupted reads through apply
    FockVector v(t);
    v.sector(3)(0) = 1.0;
    CHECK_THROWS_AS(raise2.apply(v), truncation_error);
}

TEST_CASE("commutation relations on safe sectors") {
    Rng rng(37);
    TruncPtr t = trunc_of(3, 4);
    for (int it = 0; it < 20; ++it) {
        Vec f = rng.cnormal_vec(3), g = rng.cnormal_vec(3);
        BlockOperator af = annihilation_op(f.conjugate(), t);  // a(f)
        BlockOperator ag = annihilation_op(g.conjugate(), t);
        BlockOperator cg = creation_op(g, t);

        OperatorSum comm(t);
        comm.add(af.compose(cg));
        comm.add(cg.compose(af).scaled(-1.0));
        comm.add(OperatorSum::identity_multiple(t, -f.dot(g)));
        CHECK(spectral_norm(comm.compress(2)) < 1e-10);

        OperatorSum comm2(t);
        comm2.add(af.compose(ag));
        comm2.add(ag.compose(af).scaled(-1.0));
        CHECK(spectral_norm(comm2.compress(2)) < 1e-12);
    }
}

TEST_CASE("operator sums compress Hermitian parts consistently") {
    Rng rng(41);
    TruncPtr t = trunc_of(2, 4);
    BlockOperator cr = creation_op(rng.cnormal_vec(2), t);
    OperatorSum s(t);
    s.add(cr);
    s.add(cr.adjoint());
    Mat m = s.compress(3);
    CHECK(hermiticity_residual(m) < 1e-14);
    CHECK(s.max_exact_cap() == 4);

    // rect restriction matches the square compression on the overlap
    Mat r = s.rect(3, 3);
    CHECK((r - m).norm() == 0.0);
}

TEST_CASE("fock vector norms and stacking") {
    TruncPtr t = trunc_of(2, 3);
    Rng rng(43);
    FockVector v = random_fock_vector(t, 2, rng);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    CHECK(v.top_sector() <= 2);
    Vec st = v.stacked(2);
    FockVector back = FockVector::from_stacked(t, st, 2);
    back *= cplx(-1.0, 0.0);
    back += v;
    CHECK(back.norm() < 1e-15);
}
