#include "fda/fgl.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

namespace {

Exp biv(int i, int j) {
    int v[4] = {i, j, 0, 0};
    return exp_make(v, 2);
}

} // namespace

std::shared_ptr<const Fgl> Fgl::additive(CoeffRing ring, int cap) {
    auto f = std::shared_ptr<Fgl>(new Fgl());
    f->kind_ = Kind::additive;
    f->ring_ = std::move(ring);
    f->cap_ = cap;
    f->F_ = Series(2);
    f->F_.set_term(biv(1, 0), Coeff(1));
    f->F_.set_term(biv(0, 1), Coeff(1));
    f->G_ = Series(2);
    f->iota_ = Series(1);
    f->iota_.set_term(1, Coeff(-1));
    f->mx_ = std::make_unique<std::mutex>();
    f->check_axioms();
    return f;
}

std::shared_ptr<const Fgl> Fgl::multiplicative(CoeffRing ring, Coeff kappa, int cap) {
    auto f = std::shared_ptr<Fgl>(new Fgl());
    f->kind_ = Kind::multiplicative;
    f->ring_ = std::move(ring);
    f->cap_ = cap;
    f->kappa_ = std::move(kappa);
    f->F_ = Series(2);
    f->F_.set_term(biv(1, 0), Coeff(1));
    f->F_.set_term(biv(0, 1), Coeff(1));
    f->F_.set_term(biv(1, 1), -f->kappa_);
    f->G_ = Series::constant(2, f->kappa_);
    f->mx_ = std::make_unique<std::mutex>();
    f->derive_G_and_inverse();
    f->check_axioms();
    return f;
}

std::shared_ptr<const Fgl> Fgl::generic(int depth, int cap) {
    auto f = std::shared_ptr<Fgl>(new Fgl());
    f->kind_ = Kind::generic;
    f->ring_ = CoeffRing::generic_params(depth, cap);
    f->cap_ = cap;
    f->mx_ = std::make_unique<std::mutex>();
    const CoeffRing& R = f->ring_;
    if (!R.has_rationals())
        throw usage_error("generic formal group law needs rational scalars");

    // formal logarithm and its reversion (the exponential)
    Series lg(1);
    lg.set_term(1, Coeff(1));
    for (int k = 1; k <= depth; ++k) lg.set_term(Exp(k + 1), Coeff::param(k - 1));
    f->log_ = lg;
    Series ex(1);
    ex.set_term(1, Coeff(1));
    for (int d = 2; d <= cap; ++d) {
        Series comp = f->compose_univariate(lg, ex, d);
        // comp = t + c_d t^d + O(t^{d+1}); cancel c_d
        const Coeff* c = comp.coeff(Exp(d));
        if (c && !c->is_zero()) ex.add_term(Exp(d), -*c);
    }
    f->exp_ = ex;

    // F(t,u) = exp(log t + log u)
    Series t = Series::variable(2, 0), u = Series::variable(2, 1);
    Series logt = f->compose_univariate(lg, t, cap);
    Series logu = f->compose_univariate(lg, u, cap);
    logt.add(logu);
    f->F_ = f->compose_univariate(ex, logt, cap);

    f->derive_G_and_inverse();
    f->check_axioms();
    return f;
}

void Fgl::derive_G_and_inverse() {
    // G = (t + u - F) / (tu), exact by the shape of F
    Series num = Series(2);
    num.set_term(biv(1, 0), Coeff(1));
    num.set_term(biv(0, 1), Coeff(1));
    num.sub(F_);
    Series g(2);
    for (int d = 0; d <= num.max_deg(); ++d) {
        for (auto& [e, c] : num.block(d)) {
            int i = exp_get(e, 0), j = exp_get(e, 1);
            if (i < 1 || j < 1) throw error("malformed formal group law: F - t - u not divisible by tu");
            g.add_term(biv(i - 1, j - 1), c);
        }
    }
    G_ = g;

    // inverse: solve F(t, iota) = 0 degreewise
    Series io(1);
    io.set_term(1, Coeff(-1));
    for (int d = 2; d <= cap_; ++d) {
        // r = F(t, io) mod t^{d+1}; coefficient of t^d feeds back with sign flip
        Series t1 = Series::variable(1, 0);
        Series r = f_apply(t1, io, d);
        const Coeff* c = r.coeff(Exp(d));
        if (c && !c->is_zero()) io.add_term(Exp(d), -*c);
    }
    iota_ = io;
    // confirm
    Series t1 = Series::variable(1, 0);
    Series z = f_apply(t1, iota_, cap_);
    if (!z.is_zero()) throw error("formal inverse failed to close");
}

Series Fgl::compose_univariate(const Series& c, const Series& a, int cap) const {
    // c(a) for a with zero constant term; Horner from the top degree
    if (a.coeff(0) != nullptr) throw error("composition needs zero constant term");
    int top = std::min(c.max_deg(), cap);
    Series r(a.nvars());
    for (int k = top; k >= 1; --k) {
        if (!r.is_zero()) r = mul(r, a, ring_, cap);
        const Coeff* ck = c.coeff(Exp(k));
        if (ck && !ck->is_zero()) r.add_term(0, *ck);
    }
    // top loop leaves the constant-term placeholder times a; one more factor
    r = mul(r, a, ring_, cap);
    return r;
}

Series Fgl::f_apply(const Series& a, const Series& b, int cap) const {
    switch (kind_) {
    case Kind::additive: {
        Series r = a;
        r.add(b);
        r.truncate(cap);
        return r;
    }
    case Kind::multiplicative: {
        Series r = a;
        r.add(b);
        Series ab = mul(a, b, ring_, cap);
        ab.scale(kappa_, ring_);
        r.sub(ab);
        r.truncate(cap);
        return r;
    }
    case Kind::generic: {
        Series la = compose_univariate(log_, a, cap);
        Series lb = compose_univariate(log_, b, cap);
        la.add(lb);
        return compose_univariate(exp_, la, cap);
    }
    }
    throw error("unreachable");
}

Series Fgl::g_apply(const Series& a, const Series& b, int cap) const {
    switch (kind_) {
    case Kind::additive:
        return Series(a.nvars());
    case Kind::multiplicative:
        return Series::constant(a.nvars(), kappa_);
    case Kind::generic: {
        // evaluate the bivariate G by Horner in u with power table for a
        int top = G_.max_deg();
        std::vector<Series> apow;
        apow.push_back(Series::constant(a.nvars(), Coeff(1)));
        // collect per-j univariate slices of G: G = sum_j (sum_i g_ij t^i) u^j
        int maxj = 0, maxi = 0;
        for (int d = 0; d <= top; ++d)
            for (auto& [e, c] : G_.block(d)) {
                maxj = std::max(maxj, exp_get(e, 1));
                maxi = std::max(maxi, exp_get(e, 0));
            }
        for (int i = 1; i <= maxi; ++i)
            apow.push_back(mul(apow.back(), a, ring_, cap));
        Series r(a.nvars());
        for (int j = maxj; j >= 0; --j) {
            if (!r.is_zero()) r = mul(r, b, ring_, cap);
            Series slice(a.nvars());
            for (int d = 0; d <= top; ++d)
                for (auto& [e, c] : G_.block(d)) {
                    if (exp_get(e, 1) != j) continue;
                    slice.add_scaled(apow[size_t(exp_get(e, 0))], c, ring_);
                }
            slice.truncate(cap);
            r.add(slice);
        }
        r.truncate(cap);
        return r;
    }
    }
    throw error("unreachable");
}

Series Fgl::inverse_apply(const Series& a, int cap) const {
    if (kind_ == Kind::additive) {
        Series r = a;
        r.negate();
        r.truncate(cap);
        return r;
    }
    return compose_univariate(iota_, a, cap);
}

const Series& Fgl::m_series(int m) const {
    std::lock_guard<std::mutex> lk(*mx_);
    auto& cache = m >= 0 ? mcache_pos_ : mcache_neg_;
    size_t idx = size_t(m >= 0 ? m : -m);
    if (idx < cache.size() && cache[idx].nvars() == 1) return cache[idx];
    if (cache.size() <= idx) cache.resize(idx + 1);
    // [0] = 0, [1] = t, [m+1] = F(t, [m]), [-m] = iota([m])
    if (mcache_pos_.empty()) mcache_pos_.resize(1);
    mcache_pos_[0] = Series(1);
    Series t = Series::variable(1, 0);
    if (m >= 0) {
        for (size_t k = 1; k <= idx; ++k) {
            if (mcache_pos_.size() <= k) mcache_pos_.resize(k + 1);
            if (mcache_pos_[k].nvars() == 1 && !mcache_pos_[k].is_zero()) continue;
            mcache_pos_[k] = k == 1 ? t : f_apply(t, mcache_pos_[k - 1], cap_);
        }
        return mcache_pos_[idx];
    }
    // negative: ensure positive part then invert
    if (mcache_pos_.size() <= idx) mcache_pos_.resize(idx + 1);
    for (size_t k = 1; k <= idx; ++k) {
        if (mcache_pos_[k].nvars() == 1 && !mcache_pos_[k].is_zero()) continue;
        mcache_pos_[k] = k == 1 ? t : f_apply(t, mcache_pos_[k - 1], cap_);
    }
    mcache_neg_[idx] = inverse_apply(mcache_pos_[idx], cap_);
    return mcache_neg_[idx];
}

Series Fgl::m_apply(int m, const Series& a, int cap) const {
    if (m == 0) return Series(a.nvars());
    if (m == 1) return a.truncated(cap);
    switch (kind_) {
    case Kind::additive: {
        Series r = a;
        r.scale(Coeff(m), ring_);
        r.truncate(cap);
        return r;
    }
    default:
        return compose_univariate(m_series(m), a, cap);
    }
}

Series Fgl::nary_sum(const std::vector<Series>& parts, int nvars, int cap) const {
    Series acc(nvars);
    for (auto& p : parts) {
        if (p.coeff(0) != nullptr)
            throw error("nary_sum argument has a nonzero constant term");
        acc = acc.is_zero() ? p.truncated(cap) : f_apply(acc, p, cap);
    }
    return acc;
}

void Fgl::check_axioms() const {
    int cap = std::min(cap_, kind_ == Kind::generic ? cap_ : 12);
    Series t = Series::variable(2, 0), u = Series::variable(2, 1);
    // unit
    Series f_t0 = f_apply(t, Series(2), cap);
    if (!(f_t0 == t.truncated(cap))) throw error("FGL unit axiom failed");
    // commutativity
    if (!(f_apply(t, u, cap) == f_apply(u, t, cap))) throw error("FGL commutativity failed");
    // associativity in three variables
    Series x = Series::variable(3, 0), y = Series::variable(3, 1), z = Series::variable(3, 2);
    Series lhs = f_apply(f_apply(x, y, cap), z, cap);
    Series rhs = f_apply(x, f_apply(y, z, cap), cap);
    if (!(lhs == rhs)) throw error("FGL associativity failed");
    // F = t + u - tu G
    Series chk = t;
    chk.add(u);
    Series tu = mul(t, u, ring_, cap);
    Series tuG = mul(tu, g_apply(t, u, cap), ring_, cap);
    chk.sub(tuG);
    if (!chk.equal_up_to(F_.truncated(cap), cap)) throw error("FGL G-series identity failed");
    // inverse
    Series t1 = Series::variable(1, 0);
    if (!f_apply(t1, inverse_apply(t1, cap), cap).is_zero())
        throw error("FGL inverse identity failed");
}

std::string Fgl::describe() const {
    switch (kind_) {
    case Kind::additive:
        return "additive";
    case Kind::multiplicative:
        return "multiplicative:" + kappa_.str(ring_);
    case Kind::generic:
        return "generic:" + std::to_string(ring_.nparams);
    }
    return "?";
}

} // namespace fda
