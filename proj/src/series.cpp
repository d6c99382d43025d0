#include "fda/series.hpp"
#include "fda/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace fda {

namespace {

std::map<std::pair<int, int>, MonomialTable> g_montab;
std::mutex g_montab_mx;

MonomialTable build_montab(int nvars, int d) {
    MonomialTable t;
    t.nvars = nvars;
    t.d = d;
    // enumerate ascending by packed value: e1 varies fastest
    std::vector<int> e(nvars, 0);
    // iterate over (e2..en) with sum <= d, in lex order of (en,...,e2) ascending
    // equivalently: generate all and sort (table sizes are tiny)
    std::function<void(int, int)> rec = [&](int i, int rem) {
        if (i == nvars) {
            e[0] = rem;
            t.exps.push_back(exp_make(e.data(), nvars));
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            e[i] = v;
            rec(i + 1, rem - v);
        }
        e[i] = 0;
    };
    if (nvars == 0) {
        if (d == 0) t.exps.push_back(0);
    } else {
        rec(1, d);
        std::sort(t.exps.begin(), t.exps.end());
    }
    // rank lookup indexed by mixed radix on (e2..en)
    size_t span = 1;
    for (int i = 1; i < nvars; ++i) span *= size_t(d + 1);
    t.rank.assign(span == 0 ? 1 : span, -1);
    for (size_t r = 0; r < t.exps.size(); ++r) {
        Exp ex = t.exps[r];
        size_t idx = 0, mult = 1;
        for (int i = 1; i < nvars; ++i) {
            idx += size_t(exp_get(ex, i)) * mult;
            mult *= size_t(d + 1);
        }
        t.rank[idx] = std::int32_t(r);
    }
    return t;
}

} // namespace

int MonomialTable::rank_of(Exp e) const {
    size_t idx = 0, mult = 1;
    for (int i = 1; i < nvars; ++i) {
        idx += size_t(exp_get(e, i)) * mult;
        mult *= size_t(d + 1);
    }
    return rank[idx];
}

const MonomialTable& monomials(int nvars, int d) {
    std::lock_guard<std::mutex> lk(g_montab_mx);
    auto key = std::make_pair(nvars, d);
    auto it = g_montab.find(key);
    if (it == g_montab.end()) it = g_montab.emplace(key, build_montab(nvars, d)).first;
    return it->second;
}

bool grevlex_less(Exp a, Exp b, int nvars) {
    int da = exp_total(a, nvars), db = exp_total(b, nvars);
    if (da != db) return da < db;
    if (a == b) return false;
    // within a degree the grevlex-larger monomial lists first: the rightmost
    // differing exponent decides, smaller exponent first
    for (int i = nvars - 1; i >= 0; --i) {
        int ea = exp_get(a, i), eb = exp_get(b, i);
        if (ea != eb) return ea < eb;
    }
    return false;
}

Series Series::constant(int nvars, Coeff c) {
    Series s(nvars);
    if (!c.is_zero()) s.set_term(0, std::move(c));
    return s;
}

Series Series::variable(int nvars, int i) {
    Series s(nvars);
    int v[4] = {0, 0, 0, 0};
    v[i] = 1;
    s.set_term(exp_make(v, nvars), Coeff(1));
    return s;
}

bool Series::is_zero() const {
    for (auto& b : deg_)
        if (!b.empty()) return false;
    return true;
}

int Series::val() const {
    for (size_t d = 0; d < deg_.size(); ++d)
        if (!deg_[d].empty()) return int(d);
    return std::numeric_limits<int>::max();
}

int Series::max_deg() const {
    for (int d = int(deg_.size()) - 1; d >= 0; --d)
        if (!deg_[d].empty()) return d;
    return -1;
}

const Coeff* Series::coeff(Exp e) const {
    int d = exp_total(e, nvars_);
    if (d >= int(deg_.size())) return nullptr;
    const auto& b = deg_[d];
    auto it = std::lower_bound(b.begin(), b.end(), e,
                               [](const Term& t, Exp x) { return t.first < x; });
    if (it != b.end() && it->first == e) return &it->second;
    return nullptr;
}

Coeff Series::constant_term() const {
    const Coeff* c = coeff(0);
    return c ? *c : Coeff();
}

void Series::ensure_deg(int d) {
    if (int(deg_.size()) <= d) deg_.resize(d + 1);
}

void Series::set_term(Exp e, Coeff c) {
    int d = exp_total(e, nvars_);
    ensure_deg(d);
    auto& b = deg_[d];
    auto it = std::lower_bound(b.begin(), b.end(), e,
                               [](const Term& t, Exp x) { return t.first < x; });
    if (it != b.end() && it->first == e) {
        if (c.is_zero())
            b.erase(it);
        else
            it->second = std::move(c);
    } else if (!c.is_zero()) {
        b.insert(it, {e, std::move(c)});
    }
}

void Series::add_term(Exp e, const Coeff& c) {
    if (c.is_zero()) return;
    int d = exp_total(e, nvars_);
    ensure_deg(d);
    auto& b = deg_[d];
    auto it = std::lower_bound(b.begin(), b.end(), e,
                               [](const Term& t, Exp x) { return t.first < x; });
    if (it != b.end() && it->first == e) {
        it->second.add(c);
        if (it->second.is_zero()) b.erase(it);
    } else {
        b.insert(it, {e, c});
    }
}

void Series::truncate(int deg) {
    if (int(deg_.size()) > deg + 1) deg_.resize(deg + 1 < 0 ? 0 : deg + 1);
}

Series Series::truncated(int deg) const {
    Series s(*this);
    s.truncate(deg);
    return s;
}

void Series::negate() {
    for (auto& b : deg_)
        for (auto& t : b) t.second = -t.second;
}

namespace {
// merge o's block into dst with sign via op
void merge_block(std::vector<Series::Term>& dst, const std::vector<Series::Term>& src,
                 bool subtract) {
    if (src.empty()) return;
    std::vector<Series::Term> out;
    out.reserve(dst.size() + src.size());
    size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(std::move(dst[i++]));
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            out.push_back(src[j]);
            if (subtract) out.back().second = -out.back().second;
            ++j;
        } else {
            Coeff c = std::move(dst[i].second);
            if (subtract)
                c.sub(src[j].second);
            else
                c.add(src[j].second);
            if (!c.is_zero()) out.emplace_back(dst[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}
} // namespace

void Series::add(const Series& o) {
    ensure_deg(std::max(0, o.max_deg()));
    for (int d = 0; d < int(o.deg_.size()); ++d) {
        if (o.deg_[d].empty()) continue;
        ensure_deg(d);
        merge_block(deg_[d], o.deg_[d], false);
    }
    prune();
}

void Series::sub(const Series& o) {
    ensure_deg(std::max(0, o.max_deg()));
    for (int d = 0; d < int(o.deg_.size()); ++d) {
        if (o.deg_[d].empty()) continue;
        ensure_deg(d);
        merge_block(deg_[d], o.deg_[d], true);
    }
    prune();
}

void Series::scale(const Coeff& c, const CoeffRing& ring) {
    if (c.is_zero()) {
        deg_.clear();
        return;
    }
    if (c.is_one()) return;
    if (c.is_scalar()) {
        for (auto& b : deg_)
            for (auto& t : b) t.second.scale(c.scalar_part());
        return;
    }
    for (auto& b : deg_) {
        std::vector<Term> nb;
        nb.reserve(b.size());
        for (auto& t : b) {
            Coeff nc = t.second.mul(c, ring);
            if (!nc.is_zero()) nb.emplace_back(t.first, std::move(nc));
        }
        b = std::move(nb);
    }
    prune();
}

void Series::add_scaled(const Series& o, const Coeff& c, const CoeffRing& ring) {
    if (c.is_zero()) return;
    for (int d = 0; d < int(o.deg_.size()); ++d) {
        for (auto& t : o.deg_[d]) {
            Coeff add;
            add.add_mul(t.second, c, ring);
            add_term(t.first, add);
        }
    }
}

void Series::add_scaled_shifted(const Series& o, const Coeff& c, Exp shift, int cap,
                                const CoeffRing& ring) {
    if (c.is_zero()) return;
    int sh = exp_total(shift, nvars_);
    for (int d = 0; d + sh <= cap && d < int(o.deg_.size()); ++d) {
        for (auto& t : o.deg_[d]) {
            Coeff add;
            add.add_mul(t.second, c, ring);
            add_term(t.first + shift, add);
        }
    }
}

void Series::add_mul(const Series& a, const Series& b, const CoeffRing& ring, int cap) {
    if (a.is_zero() || b.is_zero()) return;
    int va = a.val(), vb = b.val();
    if (va + vb > cap) return;
    ensure_deg(std::min(cap, a.max_deg() + b.max_deg()));
    // per output degree dense accumulation
    int hi = std::min(cap, a.max_deg() + b.max_deg());
    std::vector<Coeff> scratch;
    std::vector<int> touched;
    for (int dout = va + vb; dout <= hi; ++dout) {
        const MonomialTable& tab = monomials(nvars_, dout);
        scratch.assign(tab.exps.size(), Coeff());
        touched.clear();
        for (int da = va; da <= std::min(dout - vb, a.max_deg()); ++da) {
            int db = dout - da;
            if (db >= int(b.deg_.size())) continue;
            const auto& ba = a.deg_[da];
            const auto& bb = b.deg_[db];
            if (ba.empty() || bb.empty()) continue;
            for (auto& ta : ba) {
                for (auto& tb : bb) {
                    int r = tab.rank_of(ta.first + tb.first);
                    if (scratch[r].is_zero()) touched.push_back(r);
                    scratch[r].add_mul(ta.second, tb.second, ring);
                }
            }
        }
        if (touched.empty()) continue;
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        std::vector<Term> blk;
        blk.reserve(touched.size());
        for (int r : touched)
            if (!scratch[r].is_zero()) blk.emplace_back(tab.exps[r], std::move(scratch[r]));
        merge_block(deg_[dout], blk, false);
    }
    prune();
}

Series mul(const Series& a, const Series& b, const CoeffRing& ring, int cap) {
    Series out(a.nvars());
    out.add_mul(a, b, ring, cap);
    return out;
}

bool Series::equal_up_to(const Series& o, int deg) const {
    for (int d = 0; d <= deg; ++d) {
        const auto& x = block(d);
        const auto& y = o.block(d);
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i)
            if (x[i].first != y[i].first || x[i].second != y[i].second) return false;
    }
    return true;
}

bool Series::operator==(const Series& o) const {
    int hi = std::max(max_deg(), o.max_deg());
    return equal_up_to(o, hi);
}

const std::vector<Series::Term>& Series::block(int d) const {
    static const std::vector<Term> empty;
    if (d < 0 || d >= int(deg_.size())) return empty;
    return deg_[d];
}

std::vector<Series::Term>& Series::block_mut(int d) {
    ensure_deg(d);
    return deg_[d];
}

void Series::prune() {
    while (!deg_.empty() && deg_.back().empty()) deg_.pop_back();
}

std::vector<Series::Term> Series::sorted_terms_grevlex() const {
    std::vector<Term> out;
    for (auto& b : deg_)
        for (auto& t : b) out.push_back(t);
    std::sort(out.begin(), out.end(), [&](const Term& a, const Term& b) {
        return grevlex_less(a.first, b.first, nvars_);
    });
    return out;
}

Series Series::rename_vars(const std::vector<int>& perm, int new_nvars) const {
    Series s(new_nvars);
    for (auto& b : deg_) {
        for (auto& t : b) {
            int v[4] = {0, 0, 0, 0};
            for (int i = 0; i < nvars_; ++i) {
                int e = exp_get(t.first, i);
                if (e) v[perm[i]] += e;
            }
            s.add_term(exp_make(v, new_nvars), t.second);
        }
    }
    return s;
}

} // namespace fda
