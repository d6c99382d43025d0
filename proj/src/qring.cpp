#include "fda/qring.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

int den_degree(const DenMap& d) {
    int s = 0;
    for (auto& [r, e] : d) s += e;
    return s;
}

DenMap den_mul(const DenMap& a, const DenMap& b) {
    DenMap out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

QElem QOps::inv_root_monomial(const std::vector<std::pair<RootIdx, int>>& signed_roots) const {
    std::vector<std::pair<RootIdx, int>> neg;
    neg.reserve(signed_roots.size());
    for (auto& [r, e] : signed_roots) neg.emplace_back(r, -e);
    return root_monomial(neg);
}

QElem QOps::root_monomial(const std::vector<std::pair<RootIdx, int>>& factors) const {
    const RootSystem& rs = a_.rs();
    SElem num = a_.one();
    std::vector<std::pair<RootIdx, int>> den; // positive roots, exp > 0, unsorted
    for (auto& [r0, e] : factors) {
        if (e == 0) continue;
        RootIdx r = r0;
        int k = e;
        // x_{-beta}^k = u_beta^{-k} x_beta^k for positive beta
        bool negroot = !rs.is_positive(r);
        RootIdx pos = negroot ? rs.neg(r) : r;
        if (k > 0) {
            // numerator factor x_r^k
            num = {fda::mul(num.s, a_.x_root_pow(r, k), a_.ring(), num.prec), num.prec};
        } else {
            // denominator factor x_r^{-k}: normalize sign via u_pos
            if (negroot) {
                num = {fda::mul(num.s, a_.u_pow(pos, -k), a_.ring(), num.prec), num.prec};
            }
            den.emplace_back(pos, -k);
        }
    }
    std::sort(den.begin(), den.end());
    DenMap dm;
    for (auto& [r, e] : den) {
        if (!dm.empty() && dm.back().first == r)
            dm.back().second += e;
        else
            dm.emplace_back(r, e);
    }
    QElem q{std::move(num), std::move(dm)};
    if (q.eff_prec() < a_.prec().floor)
        throw precision_exhausted("root monomial denominator too deep");
    return q;
}

QElem QOps::weyl_root_monomial(WIdx w,
                               const std::vector<std::pair<RootIdx, int>>& factors) const {
    std::vector<std::pair<RootIdx, int>> img;
    img.reserve(factors.size());
    for (auto& [r, e] : factors) img.emplace_back(a_.rs().act_root(w, r), e);
    return root_monomial(img);
}

SElem QOps::den_series(const DenMap& d, int prec) const {
    SElem r{Series::constant(a_.nvars(), Coeff(1)), prec};
    for (auto& [root, e] : d)
        r = {fda::mul(r.s, a_.x_root_pow(root, e), a_.ring(), prec), prec};
    return r;
}

QElem QOps::reduce(QElem x) const {
    if (x.den.empty()) return x;
    if (x.num.is_zero()) {
        // zero with precision of the effective value
        int p = x.eff_prec();
        return {SElem{Series(a_.nvars()), std::max(p, 0)}, {}};
    }
    bool changed = true;
    while (changed && !x.den.empty() && x.num.s.val() >= 1) {
        changed = false;
        for (auto& [root, e] : x.den) {
            if (e == 0) continue;
            SElem xr{a_.x_root_pow(root, 1), x.num.prec};
            auto q = a_.try_divide(x.num, xr);
            if (q) {
                x.num = std::move(*q);
                e -= 1;
                changed = true;
                break;
            }
        }
    }
    x.den.erase(std::remove_if(x.den.begin(), x.den.end(),
                               [](const auto& p) { return p.second == 0; }),
                x.den.end());
    return x;
}

QElem QOps::add(const QElem& x, const QElem& y) const {
    // common denominator: lcm over roots
    DenMap lcm;
    {
        size_t i = 0, j = 0;
        while (i < x.den.size() || j < y.den.size()) {
            if (j == y.den.size() || (i < x.den.size() && x.den[i].first < y.den[j].first))
                lcm.push_back(x.den[i++]);
            else if (i == x.den.size() || y.den[j].first < x.den[i].first)
                lcm.push_back(y.den[j++]);
            else {
                lcm.emplace_back(x.den[i].first, std::max(x.den[i].second, y.den[j].second));
                ++i;
                ++j;
            }
        }
    }
    auto cofactor = [&](const DenMap& d) {
        DenMap c;
        size_t i = 0;
        for (auto& [r, e] : lcm) {
            int have = 0;
            if (i < d.size() && d[i].first == r) {
                have = d[i].second;
                ++i;
            }
            if (e - have > 0) c.emplace_back(r, e - have);
        }
        return c;
    };
    SElem nx = x.num, ny = y.num;
    DenMap cx = cofactor(x.den), cy = cofactor(y.den);
    if (!cx.empty()) nx = a_.mul(nx, den_series(cx, nx.prec));
    if (!cy.empty()) ny = a_.mul(ny, den_series(cy, ny.prec));
    // effective precision: min of operand effective precisions
    int peff = std::min(x.eff_prec(), y.eff_prec());
    int pnum = std::min({nx.prec, ny.prec, peff + den_degree(lcm)});
    SElem sum = a_.add(SElem{nx.s, pnum}, SElem{ny.s, pnum});
    return reduce({std::move(sum), std::move(lcm)});
}

QElem QOps::sub(const QElem& x, const QElem& y) const { return add(x, neg(y)); }

QElem QOps::neg(QElem x) const {
    x.num.s.negate();
    return x;
}

QElem QOps::mul(const QElem& x, const QElem& y) const {
    SElem n = a_.mul(x.num, y.num);
    DenMap d = den_mul(x.den, y.den);
    QElem r = reduce({std::move(n), std::move(d)});
    if (r.eff_prec() < a_.prec().floor)
        throw precision_exhausted("product denominator degree " +
                                  std::to_string(den_degree(r.den)));
    return r;
}

QElem QOps::mul_s(const QElem& x, const SElem& s) const {
    return reduce({a_.mul(x.num, s), x.den});
}

QElem QOps::mul_coeff(QElem x, const Coeff& c) const {
    x.num = a_.mul_coeff(std::move(x.num), c);
    return x;
}

QElem QOps::inverse_unit(const QElem& x) const {
    if (!a_.is_unit(x.num)) throw error("inverse_unit: numerator is not a unit");
    SElem inv = a_.invert(x.num);
    SElem n = den_series(x.den, inv.prec);
    return {a_.mul(n, inv), {}};
}

QElem QOps::weyl_act(WIdx w, const QElem& x) const {
    const RootSystem& rs = a_.rs();
    SElem n = a_.weyl_act(w, x.num);
    std::vector<std::pair<RootIdx, int>> img;
    img.reserve(x.den.size());
    for (auto& [r, e] : x.den) img.emplace_back(rs.act_root(w, r), -e);
    // img holds x_{w r}^{-e}; root_monomial normalizes signs into u-units
    QElem m = root_monomial(img);
    SElem num = a_.mul(n, m.num);
    return reduce({std::move(num), std::move(m.den)});
}

std::optional<SElem> QOps::try_to_S(const QElem& x) const {
    QElem r = reduce(x);
    if (r.den.empty()) return r.num;
    SElem d = den_series(r.den, r.num.prec);
    auto q = a_.try_divide(r.num, d);
    if (!q) return std::nullopt;
    return *q;
}

SElem QOps::to_S(const QElem& x, const char* what) const {
    auto s = try_to_S(x);
    if (!s) throw not_divisible(what);
    return *s;
}

bool QOps::equal(const QElem& x, const QElem& y) const {
    // cross-multiply at matched precision
    SElem lx = a_.mul(x.num, den_series(y.den, x.num.prec));
    SElem ly = a_.mul(y.num, den_series(x.den, y.num.prec));
    int p = std::min(std::min(x.eff_prec(), y.eff_prec()) + den_degree(x.den) +
                         den_degree(y.den),
                     std::min(lx.prec, ly.prec));
    return lx.s.truncated(p) == ly.s.truncated(p);
}

} // namespace fda
