#include "wicklab/fock.hpp"

#include <algorithm>
#include <cmath>

#include "wicklab/kernels.hpp"

namespace wicklab::fock {

namespace {

void enumerate_lex(int d, int n, MultiIndex& cur, int pos,
                   std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        cur[pos] = n;
        out.push_back(cur);
        return;
    }
    for (int v = 0; v <= n; ++v) {
        cur[pos] = v;
        enumerate_lex(d, n - v, cur, pos + 1, out);
    }
}

} // namespace

std::size_t OccupationBasis::VecHash::operator()(const MultiIndex& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

OccupationBasis::OccupationBasis(int dim, int n) : dim_(dim), n_(n) {
    MultiIndex cur(dim, 0);
    enumerate_lex(dim, n, cur, 0, states_);
    lookup_.reserve(states_.size());
    for (int i = 0; i < static_cast<int>(states_.size()); ++i)
        lookup_.emplace(states_[i], i);
}

int OccupationBasis::index_of(const MultiIndex& m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end())
        throw config_error("occupation multi-index outside basis");
    return it->second;
}

OccupationBasis sym_basis(int d, int n) {
    if (d < 1) throw config_error("sym_basis: dimension must be >= 1");
    if (n < 0) throw config_error("sym_basis: particle number must be >= 0");
    return OccupationBasis(d, n);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

TruncPtr FockTruncation::make(const OneParticleSpace& space, int n_max,
                              std::int64_t dim_cap) {
    if (space.dim < 1) throw config_error("one-particle dimension must be >= 1");
    if (n_max < 2) throw config_error("n_max must be >= 2");

    std::int64_t total = 0;
    for (int n = 0; n <= n_max; ++n) {
        total += static_cast<std::int64_t>(binomial(space.dim + n - 1, n));
        if (total > dim_cap)
            throw model_error("memory guard: total Fock dimension " +
                              std::to_string(total) + " exceeds cap " +
                              std::to_string(dim_cap));
    }

    auto t = std::shared_ptr<FockTruncation>(new FockTruncation());
    t->space_ = space;
    t->n_max_ = n_max;
    t->sectors_.reserve(n_max + 1);
    t->sector_dims_.reserve(n_max + 1);
    t->offsets_.reserve(n_max + 1);
    int off = 0;
    for (int n = 0; n <= n_max; ++n) {
        t->sectors_.emplace_back(space.dim, n);
        t->sector_dims_.push_back(t->sectors_.back().size());
        t->offsets_.push_back(off);
        off += t->sector_dims_.back();
    }
    t->total_dim_ = total;
    return t;
}

FockVector::FockVector(TruncPtr trunc) : trunc_(std::move(trunc)) {
    comps_.resize(trunc_->n_max() + 1);
    for (int n = 0; n <= trunc_->n_max(); ++n)
        comps_[n] = Vec::Zero(trunc_->sector_dim(n));
}

double FockVector::norm() const {
    double s = 0.0;
    for (const auto& c : comps_) s += c.squaredNorm();
    return std::sqrt(s);
}

cplx FockVector::dot(const FockVector& other) const {
    cplx s(0.0, 0.0);
    for (std::size_t n = 0; n < comps_.size(); ++n)
        s += comps_[n].dot(other.comps_[n]);
    return s;
}

FockVector& FockVector::operator+=(const FockVector& other) {
    for (std::size_t n = 0; n < comps_.size(); ++n) comps_[n] += other.comps_[n];
    return *this;
}

FockVector& FockVector::operator*=(cplx a) {
    for (auto& c : comps_) c *= a;
    return *this;
}

void FockVector::normalize() {
    double nrm = norm();
    if (nrm > 0.0) *this *= cplx(1.0 / nrm, 0.0);
}

int FockVector::top_sector(double tol) const {
    for (int n = static_cast<int>(comps_.size()) - 1; n >= 0; --n)
        if (comps_[n].norm() > tol) return n;
    return -1;
}

Vec FockVector::stacked(int cap) const {
    int total = trunc_->sector_offset(cap) + trunc_->sector_dim(cap);
    Vec v = Vec::Zero(total);
    for (int n = 0; n <= cap; ++n)
        v.segment(trunc_->sector_offset(n), trunc_->sector_dim(n)) = comps_[n];
    return v;
}

FockVector FockVector::from_stacked(TruncPtr trunc, const Vec& v, int cap) {
    FockVector out(trunc);
    for (int n = 0; n <= cap; ++n)
        out.sector(n) = v.segment(trunc->sector_offset(n), trunc->sector_dim(n));
    return out;
}

BlockOperator::BlockOperator(TruncPtr trunc, int degree, int safe_ceiling)
    : trunc_(std::move(trunc)), degree_(degree), ceiling_(safe_ceiling) {}

const Mat& BlockOperator::block(int n) const {
    auto it = blocks_.find(n);
    if (it == blocks_.end())
        throw truncation_error("no block stored for sector " + std::to_string(n));
    return it->second;
}

void BlockOperator::set_block(int n, Mat m) {
    if (n < 0 || n > ceiling_ || n + degree_ < 0 || n + degree_ > trunc_->n_max())
        throw truncation_error("block outside the valid sector range");
    if (m.rows() != trunc_->sector_dim(n + degree_) ||
        m.cols() != trunc_->sector_dim(n))
        throw config_error("block shape mismatch");
    blocks_[n] = std::move(m);
}

FockVector BlockOperator::apply(const FockVector& v) const {
    FockVector out(trunc_);
    for (int n = 0; n <= trunc_->n_max(); ++n) {
        double src_norm = v.sector(n).norm();
        if (src_norm == 0.0) continue;
        if (n > ceiling_)
            throw truncation_error(
                "operator application exceeds safe ceiling (sector " +
                std::to_string(n) + " > " + std::to_string(ceiling_) + ")");
        auto it = blocks_.find(n);
        if (it == blocks_.end()) continue;  // structural zero
        out.sector(n + degree_) += it->second * v.sector(n);
    }
    return out;
}

BlockOperator BlockOperator::compose(const BlockOperator& rhs) const {
    // rhs acts first
    int deg = degree_ + rhs.degree_;
    int ceil = std::min(rhs.ceiling_, ceiling_ - rhs.degree_);
    BlockOperator out(trunc_, deg, ceil);
    for (int n = std::max(0, -deg); n <= ceil; ++n) {
        if (n + deg > trunc_->n_max()) break;
        auto itr = rhs.blocks_.find(n);
        if (itr == rhs.blocks_.end()) continue;
        auto itl = blocks_.find(n + rhs.degree_);
        if (itl == blocks_.end()) continue;
        out.blocks_[n] = itl->second * itr->second;
    }
    return out;
}

BlockOperator BlockOperator::adjoint() const {
    int deg = -degree_;
    // source sector k of the adjoint reads block(k - deg) of *this
    int ceil = std::min(ceiling_ + degree_, trunc_->n_max());
    BlockOperator out(trunc_, deg, ceil);
    for (const auto& [n, b] : blocks_)
        out.blocks_[n + degree_] = b.adjoint();
    return out;
}

BlockOperator BlockOperator::scaled(cplx a) const {
    BlockOperator out = *this;
    for (auto& [n, b] : out.blocks_) b *= a;
    return out;
}

BlockOperator BlockOperator::plus(const BlockOperator& other) const {
    if (degree_ != other.degree_)
        throw config_error("cannot add block operators of different degree");
    BlockOperator out(trunc_, degree_, std::min(ceiling_, other.ceiling_));
    for (const auto& [n, b] : blocks_) {
        if (n > out.ceiling_) continue;
        out.blocks_[n] = b;
    }
    for (const auto& [n, b] : other.blocks_) {
        if (n > out.ceiling_) continue;
        auto it = out.blocks_.find(n);
        if (it == out.blocks_.end())
            out.blocks_[n] = b;
        else
            it->second += b;
    }
    return out;
}

void OperatorSum::add(const BlockOperator& op) {
    if (!trunc_) trunc_ = op.trunc();
    auto it = parts_.find(op.degree());
    if (it == parts_.end())
        parts_.emplace(op.degree(), op);
    else
        it->second = it->second.plus(op);
}

void OperatorSum::add(const OperatorSum& other) {
    for (const auto& [deg, op] : other.parts_) add(op);
}

OperatorSum OperatorSum::scaled(cplx a) const {
    OperatorSum out(trunc_);
    for (const auto& [deg, op] : parts_) out.add(op.scaled(a));
    return out;
}

OperatorSum OperatorSum::adjoint() const {
    OperatorSum out(trunc_);
    for (const auto& [deg, op] : parts_) out.add(op.adjoint());
    return out;
}

OperatorSum OperatorSum::compose(const OperatorSum& rhs) const {
    OperatorSum out(trunc_);
    for (const auto& [dl, opl] : parts_)
        for (const auto& [dr, opr] : rhs.parts_) out.add(opl.compose(opr));
    return out;
}

OperatorSum OperatorSum::compose(const BlockOperator& rhs) const {
    OperatorSum out(trunc_);
    for (const auto& [dl, opl] : parts_) out.add(opl.compose(rhs));
    return out;
}

FockVector OperatorSum::apply(const FockVector& v) const {
    FockVector out(trunc_);
    for (const auto& [deg, op] : parts_) out += op.apply(v);
    return out;
}

Mat OperatorSum::compress(int cap) const {
    if (cap < 0 || cap > trunc_->n_max())
        throw config_error("compression cap outside truncation");
    int total = trunc_->sector_offset(cap) + trunc_->sector_dim(cap);
    Mat out = Mat::Zero(total, total);
    for (const auto& [deg, op] : parts_) {
        for (int n = 0; n <= cap; ++n) {
            int t = n + deg;
            if (t < 0 || t > cap) continue;
            if (n > op.safe_ceiling())
                throw truncation_error(
                    "compression needs a block above the safe ceiling");
            if (!op.has_block(n)) continue;
            out.block(trunc_->sector_offset(t), trunc_->sector_offset(n),
                      trunc_->sector_dim(t), trunc_->sector_dim(n)) += op.block(n);
        }
    }
    return out;
}

Mat OperatorSum::herm_compress(int cap) const {
    Mat m = compress(cap);
    return 0.5 * (m + Mat(m.adjoint()));
}

Mat OperatorSum::rect(int src_cap, int dst_cap) const {
    if (src_cap < 0 || src_cap > trunc_->n_max() || dst_cap < 0 ||
        dst_cap > trunc_->n_max())
        throw config_error("rect caps outside truncation");
    int rows = trunc_->sector_offset(dst_cap) + trunc_->sector_dim(dst_cap);
    int cols = trunc_->sector_offset(src_cap) + trunc_->sector_dim(src_cap);
    Mat out = Mat::Zero(rows, cols);
    for (const auto& [deg, op] : parts_) {
        for (int n = 0; n <= src_cap; ++n) {
            int t = n + deg;
            if (t < 0 || t > dst_cap) continue;
            if (n > op.safe_ceiling())
                throw truncation_error("rect needs a block above the safe ceiling");
            if (!op.has_block(n)) continue;
            out.block(trunc_->sector_offset(t), trunc_->sector_offset(n),
                      trunc_->sector_dim(t), trunc_->sector_dim(n)) += op.block(n);
        }
    }
    return out;
}

int OperatorSum::max_exact_cap() const {
    int cap = trunc_->n_max();
    for (const auto& [deg, op] : parts_) {
        // compress(cap) touches sources n <= cap with n + deg <= cap, so the
        // highest source read is cap - max(deg, 0); it must stay <= ceiling
        int need = op.safe_ceiling() + std::max(deg, 0);
        cap = std::min(cap, std::min(need, trunc_->n_max()));
    }
    return cap;
}

OperatorSum OperatorSum::identity_multiple(TruncPtr trunc, cplx a) {
    BlockOperator id(trunc, 0, trunc->n_max());
    for (int n = 0; n <= trunc->n_max(); ++n) {
        id.set_block(n, a * Mat::Identity(trunc->sector_dim(n),
                                          trunc->sector_dim(n)));
    }
    OperatorSum out(trunc);
    out.add(id);
    return out;
}

BlockOperator creation_op(const Vec& f, TruncPtr trunc) {
    const int d = trunc->dim();
    if (f.size() != d)
        throw config_error("creation_op: vector dimension " +
                           std::to_string(f.size()) + " does not match d = " +
                           std::to_string(d));
    BlockOperator op(trunc, +1, trunc->n_max() - 1);
    for (int n = 0; n + 1 <= trunc->n_max(); ++n) {
        const auto& src = trunc->sector(n);
        const auto& dst = trunc->sector(n + 1);
        Mat b = Mat::Zero(dst.size(), src.size());
        for (int col = 0; col < src.size(); ++col) {
            MultiIndex mu = src.state(col);
            for (int i = 0; i < d; ++i) {
                if (f(i) == cplx(0.0, 0.0)) continue;
                mu[i] += 1;
                b(dst.index_of(mu), col) += f(i) * std::sqrt(double(mu[i]));
                mu[i] -= 1;
            }
        }
        op.set_block(n, std::move(b));
    }
    return op;
}

BlockOperator annihilation_op(const Vec& h, TruncPtr trunc) {
    // adjoint of creation_op(conj(h)), sector by sector
    BlockOperator cr = creation_op(h.conjugate(), trunc);
    return cr.adjoint();
}

BlockOperator number_op(TruncPtr trunc) {
    BlockOperator op(trunc, 0, trunc->n_max());
    for (int n = 0; n <= trunc->n_max(); ++n) {
        op.set_block(n, double(n) * Mat::Identity(trunc->sector_dim(n),
                                                  trunc->sector_dim(n)));
    }
    return op;
}

BlockOperator normal_monomial(const Vec& F, int l, int m, TruncPtr trunc) {
    if (l < 0 || m < 0 || l + m > 4)
        throw config_error("normal_monomial supports 0 <= l+m <= 4");
    const int d = trunc->dim();
    std::int64_t want = 1;
    for (int k = 0; k < l + m; ++k) want *= d;
    if (F.size() != want)
        throw config_error("normal_monomial: tensor has rank-" +
                           std::to_string(l + m) + " size mismatch");

    // normal ordering annihilates first, so the highest sector a block
    // touches is max(n, n + l - m); exactness only caps the raising excess
    const int ceiling = trunc->n_max() - std::max(l - m, 0);
    BlockOperator op(trunc, l - m, ceiling);
    for (int n = 0; n <= ceiling; ++n) {
        int t = n + l - m;
        if (t < 0 || t > trunc->n_max()) continue;
        if (n < m) {  // annihilators empty these sectors
            op.set_block(n, Mat::Zero(trunc->sector_dim(t), trunc->sector_dim(n)));
            continue;
        }
        op.set_block(n, kernels::monomial_block_parallel(
                            F, l, m, trunc->sector(n), trunc->sector(t)));
    }
    return op;
}

double monomial_norm_bound(int l, int m, int n) {
    if (n < m) return 0.0;
    // sqrt(n! (n-m+l)!) / (n-m)!
    double lg = 0.5 * (std::lgamma(n + 1.0) + std::lgamma(n - m + l + 1.0)) -
                std::lgamma(n - m + 1.0);
    return std::exp(lg);
}

FockVector random_fock_vector(TruncPtr trunc, int cap, Rng& rng) {
    FockVector v(trunc);
    for (int n = 0; n <= std::min(cap, trunc->n_max()); ++n)
        v.sector(n) = rng.cnormal_vec(trunc->sector_dim(n));
    v.normalize();
    return v;
}

} // namespace wicklab::fock
