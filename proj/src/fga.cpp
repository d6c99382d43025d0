#include "fda/fga.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

PrecisionPolicy PrecisionPolicy::for_rank(int rank, int npos, int trunc_override,
                                          int workdeg_override) {
    PrecisionPolicy p;
    p.trunc = rank <= 2 ? 6 : 4;
    if (trunc_override > 0) p.trunc = trunc_override;
    p.workdeg = p.trunc + 4 * npos; // 2|Phi^+| + 2 l(w_0)
    if (workdeg_override > 0) p.workdeg = workdeg_override;
    if (p.workdeg < p.trunc) throw usage_error("working degree below truncation degree");
    p.floor = p.trunc;
    return p;
}

Algebra::Algebra(std::shared_ptr<const RootSystem> rs, std::shared_ptr<const Fgl> fgl,
                 PrecisionPolicy prec)
    : rs_(std::move(rs)), fgl_(std::move(fgl)), prec_(prec) {
    if (prec_.workdeg > 120) throw usage_error("working degree too large");
    if (fgl_->cap() < prec_.workdeg)
        throw usage_error("formal group law truncated below the working degree");
    // standing assumption: reject type C when 2 is a zero divisor in R.
    // None of the supported coefficient rings has 2 as a zero divisor, so
    // this cannot trigger; the guard documents the contract.
    if (rs_->family() == 'C' && false)
        throw usage_error("type C needs 2 to be a non-zero-divisor");
}

int Algebra::join_prec(int a, int b) const {
    int p = std::min(a, b);
    if (p < prec_.floor)
        throw precision_exhausted("needed >= " + std::to_string(prec_.floor) +
                                  ", have " + std::to_string(p));
    return p;
}

const Series& Algebra::x_weight_series(const Weight& lam) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = xw_.find(lam);
        if (it != xw_.end()) return it->second;
    }
    std::vector<Series> parts;
    for (int i = 0; i < nvars(); ++i) {
        int c = lam[size_t(i)];
        if (c == 0) continue;
        parts.push_back(fgl_->m_apply(c, Series::variable(nvars(), i), prec_.workdeg));
    }
    Series s = fgl_->nary_sum(parts, nvars(), prec_.workdeg);
    std::lock_guard<std::mutex> lk(mx_);
    return xw_.emplace(lam, std::move(s)).first->second;
}

SElem Algebra::x_of_weight(const Weight& lam) const {
    return {x_weight_series(lam), prec_.workdeg};
}

SElem Algebra::x_of_root(RootIdx r) const { return x_of_weight(rs_->root(r)); }

SElem Algebra::kappa(RootIdx beta) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = kappa_.find(beta);
        if (it != kappa_.end()) return {it->second, prec_.workdeg};
    }
    Series xb = x_weight_series(rs_->root(beta));
    Series xnb = x_weight_series(rs_->root(rs_->neg(beta)));
    Series k = fgl_->g_apply(xb, xnb, prec_.workdeg);
    std::lock_guard<std::mutex> lk(mx_);
    return {kappa_.emplace(beta, std::move(k)).first->second, prec_.workdeg};
}

SElem Algebra::u(RootIdx beta) const { return {u_pow(beta, 1), prec_.workdeg}; }

const Series& Algebra::u_pow(RootIdx beta, int k) const {
    if (beta >= rs_->npos()) {
        // u_{-beta} = u_beta^{-1}
        return u_pow(rs_->neg(beta), -k);
    }
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = upow_.find({beta, k});
        if (it != upow_.end()) return it->second;
    }
    Series r;
    if (k == 0) {
        r = Series::constant(nvars(), Coeff(1));
    } else if (k == 1) {
        // u_beta = -1 + kappa_beta x_beta
        Series kb = kappa(beta).s;
        Series xb = x_weight_series(rs_->root(beta));
        r = fda::mul(kb, xb, ring(), prec_.workdeg);
        r.add_term(0, Coeff(-1));
    } else if (k > 1) {
        r = fda::mul(u_pow(beta, k - 1), u_pow(beta, 1), ring(), prec_.workdeg);
    } else {
        // negative powers via inversion of the unit u_beta
        if (k == -1) {
            SElem inv = invert(SElem{u_pow(beta, 1), prec_.workdeg});
            r = inv.s;
        } else {
            r = fda::mul(u_pow(beta, k + 1), u_pow(beta, -1), ring(), prec_.workdeg);
        }
    }
    std::lock_guard<std::mutex> lk(mx_);
    return upow_.emplace(std::make_pair(beta, k), std::move(r)).first->second;
}

const Series& Algebra::x_root_pow(RootIdx beta, int k) const {
    if (k < 1) throw error("x_root_pow needs k >= 1");
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = xpow_.find({beta, k});
        if (it != xpow_.end()) return it->second;
    }
    Series r = k == 1 ? x_weight_series(rs_->root(beta))
                      : fda::mul(x_root_pow(beta, k - 1), x_root_pow(beta, 1), ring(),
                                 prec_.workdeg);
    std::lock_guard<std::mutex> lk(mx_);
    return xpow_.emplace(std::make_pair(beta, k), std::move(r)).first->second;
}

SElem Algebra::x_monomial_neg(const std::vector<RootIdx>& pos_roots) const {
    SElem r = one();
    for (RootIdx b : pos_roots) r = mul(r, x_of_root(rs_->neg(b)));
    return r;
}

SElem Algebra::x_parabolic() const { return x_monomial_neg(rs_->pos_roots_L()); }

SElem Algebra::x_full() const { return x_monomial_neg(rs_->pos_roots()); }

SElem Algebra::add(const SElem& a, const SElem& b) const {
    SElem r;
    r.prec = join_prec(a.prec, b.prec);
    r.s = a.s;
    r.s.add(b.s);
    r.s.truncate(r.prec);
    return r;
}

SElem Algebra::sub(const SElem& a, const SElem& b) const {
    SElem r;
    r.prec = join_prec(a.prec, b.prec);
    r.s = a.s;
    r.s.sub(b.s);
    r.s.truncate(r.prec);
    return r;
}

SElem Algebra::neg(SElem a) const {
    a.s.negate();
    return a;
}

SElem Algebra::mul(const SElem& a, const SElem& b) const {
    // value known mod min(pa + val(b), pb + val(a)); an all-zero stored
    // series is still only known through its precision
    int va = std::min(a.s.val(), a.prec + 1);
    int vb = std::min(b.s.val(), b.prec + 1);
    int p = std::min({a.prec + vb, b.prec + va, prec_.workdeg});
    SElem r;
    r.prec = join_prec(p, prec_.workdeg);
    r.s = fda::mul(a.s, b.s, ring(), r.prec);
    return r;
}

SElem Algebra::mul_coeff(SElem a, const Coeff& c) const {
    a.s.scale(c, ring());
    return a;
}

SElem Algebra::invert(const SElem& a) const {
    Coeff c0 = a.s.constant_term();
    if (!c0.is_unit(ring())) throw error("invert: augmentation is not a unit");
    // a = c0 (1 + m); a^{-1} = c0^{-1} sum (-m)^k via Newton iteration
    Coeff ic0 = c0.inverse(ring());
    Series r = Series::constant(nvars(), ic0);
    int have = 0;
    while (have < a.prec) {
        int next = std::min(a.prec, 2 * have + 1);
        // r <- r (2 - a r) mod degree next+1
        Series ar = fda::mul(a.s.truncated(next), r, ring(), next);
        Series two = Series::constant(nvars(), Coeff(2));
        two.sub(ar);
        r = fda::mul(r, two, ring(), next);
        have = next;
    }
    return {std::move(r), a.prec};
}

namespace {

/// Exact division of a homogeneous slice by a homogeneous form, any
/// monomial order; nullopt when not divisible.
std::optional<std::vector<Series::Term>> divide_homog(std::vector<Series::Term> num,
                                                      const std::vector<Series::Term>& form,
                                                      const CoeffRing& ring, int nvars) {
    std::vector<Series::Term> out;
    const auto& lead = form.back(); // largest packed exponent
    while (!num.empty()) {
        const auto& top = num.back();
        // monomial divisibility
        Exp q = 0;
        bool ok = true;
        for (int i = 0; i < nvars; ++i) {
            int e = exp_get(top.first, i) - exp_get(lead.first, i);
            if (e < 0) {
                ok = false;
                break;
            }
            q |= Exp(e) << (8 * i);
        }
        if (!ok) return std::nullopt;
        auto qc = top.second.divide_exact(lead.second, ring);
        if (!qc) return std::nullopt;
        // num -= (qc x^q) * form
        std::vector<Series::Term> sub;
        sub.reserve(form.size());
        for (auto& t : form) {
            Coeff c;
            c.add_mul(t.second, *qc, ring);
            if (!c.is_zero()) sub.emplace_back(t.first + q, std::move(c));
        }
        std::sort(sub.begin(), sub.end(),
                  [](const Series::Term& a, const Series::Term& b) { return a.first < b.first; });
        std::vector<Series::Term> merged;
        merged.reserve(num.size() + sub.size());
        size_t i = 0, j = 0;
        while (i < num.size() || j < sub.size()) {
            if (j == sub.size() || (i < num.size() && num[i].first < sub[j].first)) {
                merged.push_back(std::move(num[i++]));
            } else if (i == num.size() || sub[j].first < num[i].first) {
                merged.emplace_back(sub[j].first, -sub[j].second);
                ++j;
            } else {
                Coeff c = std::move(num[i].second);
                c.sub(sub[j].second);
                if (!c.is_zero()) merged.emplace_back(num[i].first, std::move(c));
                ++i;
                ++j;
            }
        }
        num = std::move(merged);
        out.emplace_back(q, *qc);
    }
    std::sort(out.begin(), out.end(),
              [](const Series::Term& a, const Series::Term& b) { return a.first < b.first; });
    return out;
}

} // namespace

std::optional<SElem> Algebra::try_divide(const SElem& n, const SElem& d) const {
    if (d.s.is_zero()) throw error("try_divide by zero");
    int vd = d.s.val();
    int pq = std::min(n.prec, d.prec) - vd;
    if (pq < prec_.floor)
        throw precision_exhausted("quotient precision " + std::to_string(pq));
    if (n.s.is_zero()) return SElem{Series(nvars()), pq};
    int vn = n.s.val();
    if (vn < vd) return std::nullopt;
    const auto& lowform = d.s.block(vd);
    // degreewise: q_k from n_{k+vd} - sum_{j<k} q_j d_{k+vd-j}
    Series q(nvars());
    for (int k = vn - vd; k <= pq; ++k) {
        // residual slice at degree k+vd
        Series resid(nvars());
        for (auto& t : n.s.block(k + vd)) resid.add_term(t.first, t.second);
        for (int j = vn - vd; j < k; ++j) {
            const auto& qb = q.block(j);
            const auto& db = d.s.block(k + vd - j);
            if (qb.empty() || db.empty()) continue;
            for (auto& tq : qb)
                for (auto& td : db) {
                    Coeff c;
                    c.add_mul(tq.second, td.second, ring());
                    c = -c;
                    resid.add_term(tq.first + td.first, c);
                }
        }
        auto& slice = resid.block_mut(k + vd);
        if (slice.empty()) continue;
        auto qk = divide_homog(slice, lowform, ring(), nvars());
        if (!qk) return std::nullopt;
        for (auto& t : *qk) q.add_term(t.first, t.second);
    }
    return SElem{std::move(q), pq};
}

SElem Algebra::divide_or_throw(const SElem& n, const SElem& d, const char* what) const {
    auto q = try_divide(n, d);
    if (!q) throw not_divisible(what);
    return *q;
}

const Series& Algebra::weyl_var_pow(WIdx w, int var, int k) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = wpow_.find({w, var, k});
        if (it != wpow_.end()) return it->second;
    }
    Series r;
    if (k == 0) {
        r = Series::constant(nvars(), Coeff(1));
    } else if (k == 1) {
        Weight wi{};
        wi[size_t(var)] = 1;
        r = x_weight_series(rs_->act_weight(w, wi));
    } else {
        r = fda::mul(weyl_var_pow(w, var, k - 1), weyl_var_pow(w, var, 1), ring(),
                     prec_.workdeg);
    }
    std::lock_guard<std::mutex> lk(mx_);
    return wpow_.emplace(std::make_tuple(w, var, k), std::move(r)).first->second;
}

Series Algebra::weyl_act_series(WIdx w, const Series& s, int prec) const {
    if (w == rs_->identity()) return s.truncated(prec);
    Series out(nvars());
    // prefix memo over the high variables; the low variable multiplies last
    std::map<Exp, Series> memo;
    for (int d = 0; d <= std::min(prec, s.max_deg()); ++d) {
        for (auto& [e, c] : s.block(d)) {
            if (e == 0) {
                out.add_term(0, c);
                continue;
            }
            Exp hi = e >> 8;
            const Series* pre = nullptr;
            if (hi != 0) {
                auto it = memo.find(hi);
                if (it == memo.end()) {
                    Series p = Series::constant(nvars(), Coeff(1));
                    bool started = false;
                    for (int i = 1; i < nvars(); ++i) {
                        int ei = exp_get(e, i);
                        if (ei == 0) continue;
                        const Series& pw = weyl_var_pow(w, i, ei);
                        p = started ? fda::mul(p, pw, ring(), prec) : pw.truncated(prec);
                        started = true;
                    }
                    it = memo.emplace(hi, std::move(p)).first;
                }
                pre = &it->second;
            }
            int e0 = exp_get(e, 0);
            if (e0 == 0) {
                out.add_scaled(*pre, c, ring());
            } else {
                const Series& p0 = weyl_var_pow(w, 0, e0);
                if (pre) {
                    Series term = fda::mul(*pre, p0, ring(), prec);
                    out.add_scaled(term, c, ring());
                } else {
                    out.add_scaled(p0.truncated(prec), c, ring());
                }
            }
        }
    }
    out.truncate(prec);
    return out;
}

SElem Algebra::weyl_act(WIdx w, const SElem& a) const {
    return {weyl_act_series(w, a.s, a.prec), a.prec};
}

bool Algebra::equal(const SElem& a, const SElem& b) const {
    int p = std::min(a.prec, b.prec);
    return a.s.truncated(p) == b.s.truncated(p);
}

} // namespace fda
