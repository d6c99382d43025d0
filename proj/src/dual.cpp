#include "fda/dual.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

namespace {

/// Gauss-Jordan inverse over S, pivoting on unit-augmentation entries.
std::vector<std::vector<SElem>> invert_s_matrix(const Algebra& a,
                                                std::vector<std::vector<SElem>> m,
                                                const char* what) {
    const int n = int(m.size());
    std::vector<std::vector<SElem>> inv(size_t(n), std::vector<SElem>(size_t(n), a.zero()));
    for (int i = 0; i < n; ++i) inv[size_t(i)][size_t(i)] = a.one();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a.is_unit(m[size_t(r)][size_t(col)])) {
                piv = r;
                break;
            }
        if (piv < 0) throw error(std::string("singular system over S: ") + what);
        std::swap(m[size_t(piv)], m[size_t(col)]);
        std::swap(inv[size_t(piv)], inv[size_t(col)]);
        SElem pinv = a.invert(m[size_t(col)][size_t(col)]);
        for (int j = 0; j < n; ++j) {
            m[size_t(col)][size_t(j)] = a.mul(m[size_t(col)][size_t(j)], pinv);
            inv[size_t(col)][size_t(j)] = a.mul(inv[size_t(col)][size_t(j)], pinv);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            SElem f = m[size_t(r)][size_t(col)];
            if (f.is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                m[size_t(r)][size_t(j)] =
                    a.sub(m[size_t(r)][size_t(j)], a.mul(f, m[size_t(col)][size_t(j)]));
                inv[size_t(r)][size_t(j)] =
                    a.sub(inv[size_t(r)][size_t(j)], a.mul(f, inv[size_t(col)][size_t(j)]));
            }
        }
    }
    return inv;
}

} // namespace

DualModule::DualModule(const TwistedAlgebra& tw)
    : tw_(tw), a_(tw.algebra()), q_(tw.q()) {
    const RootSystem& rs = a_.rs();
    const int n = rs.order();
    gG_.reserve(size_t(n));
    gP_.reserve(size_t(n));
    gGL_.reserve(size_t(n));
    wxG_.reserve(size_t(n));
    std::vector<std::pair<RootIdx, int>> xg_inv, xl_inv, xgl, xg_pos;
    for (RootIdx b : rs.pos_roots()) {
        xg_inv.emplace_back(rs.neg(b), -1);
        xg_pos.emplace_back(rs.neg(b), 1);
        xgl.emplace_back(rs.neg(b), -1);
    }
    for (RootIdx b : rs.pos_roots_L()) {
        xl_inv.emplace_back(rs.neg(b), -1);
        xgl.emplace_back(rs.neg(b), 1);
    }
    for (WIdx y = 0; y < n; ++y) {
        gG_.push_back(q_.weyl_root_monomial(y, xg_inv));
        gP_.push_back(q_.weyl_root_monomial(y, xl_inv));
        gGL_.push_back(q_.weyl_root_monomial(y, xgl));
        wxG_.push_back(q_.to_S(q_.weyl_root_monomial(y, xg_pos), "w(x_G)"));
    }
    wlpos_.assign(size_t(n), -1);
    const auto& wl = rs.WL();
    std::vector<std::pair<RootIdx, int>> xl_pos;
    for (RootIdx b : rs.pos_roots_L()) xl_pos.emplace_back(rs.neg(b), 1);
    for (size_t i = 0; i < wl.size(); ++i) {
        wlpos_[size_t(wl[i])] = int(i);
        wxL_.push_back(q_.to_S(q_.weyl_root_monomial(wl[i], xl_pos), "v(x_L)"));
        gL_.push_back(q_.weyl_root_monomial(wl[i], xl_inv));
    }
}

int DualModule::wl_pos(WIdx v) const { return wlpos_[size_t(v)]; }

DualElem DualModule::zero_elem() const {
    return {std::vector<QElem>(size_t(rs().order()), q_.zero())};
}

DualElem DualModule::one() const {
    return {std::vector<QElem>(size_t(rs().order()), q_.one())};
}

DualElem DualModule::f_point(WIdx z) const {
    DualElem f = zero_elem();
    f.v[size_t(z)] = q_.one();
    return f;
}

DualElem DualModule::from_values(std::vector<QElem> vals) const {
    if (int(vals.size()) != rs().order()) throw error("value vector has the wrong length");
    return {std::move(vals)};
}

DualElem DualModule::add(const DualElem& f, const DualElem& g) const {
    DualElem out = f;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = q_.add(out.v[i], g.v[i]);
    return out;
}

DualElem DualModule::sub(const DualElem& f, const DualElem& g) const {
    DualElem out = f;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = q_.sub(out.v[i], g.v[i]);
    return out;
}

DualElem DualModule::neg(DualElem f) const {
    for (auto& qe : f.v) qe.num.s.negate();
    return f;
}

DualElem DualModule::mul(const DualElem& f, const DualElem& g) const {
    DualElem out = zero_elem();
    for (size_t i = 0; i < out.v.size(); ++i)
        if (!f.v[i].is_zero() && !g.v[i].is_zero()) out.v[i] = q_.mul(f.v[i], g.v[i]);
    return out;
}

DualElem DualModule::scale_q(const DualElem& f, const QElem& q) const {
    DualElem out = zero_elem();
    for (size_t i = 0; i < out.v.size(); ++i)
        if (!f.v[i].is_zero()) out.v[i] = q_.mul(f.v[i], q);
    return out;
}

DualElem DualModule::scale_s(const DualElem& f, const SElem& s) const {
    DualElem out = zero_elem();
    for (size_t i = 0; i < out.v.size(); ++i)
        if (!f.v[i].is_zero()) out.v[i] = q_.mul_s(f.v[i], s);
    return out;
}

bool DualModule::equal(const DualElem& f, const DualElem& g) const {
    for (size_t i = 0; i < f.v.size(); ++i)
        if (!q_.equal(f.v[i], g.v[i])) return false;
    return true;
}

DualElem DualModule::bullet(const QWElem& h, const DualElem& f) const {
    const RootSystem& rs = a_.rs();
    DualElem out = zero_elem();
    for (auto& [y, qy] : h.c) {
        for (WIdx z = 0; z < rs.order(); ++z) {
            const QElem& fv = f.v[size_t(rs.mul(z, y))];
            if (fv.is_zero()) continue;
            out.v[size_t(z)] = q_.add(out.v[size_t(z)], q_.mul(q_.weyl_act(z, qy), fv));
        }
    }
    return out;
}

DualElem DualModule::bullet_delta(WIdx y, const DualElem& f) const {
    const RootSystem& rs = a_.rs();
    DualElem out = zero_elem();
    for (WIdx z = 0; z < rs.order(); ++z) out.v[size_t(z)] = f.v[size_t(rs.mul(z, y))];
    return out;
}

DualElem DualModule::bullet_word(const std::vector<int>& word, Family fam, DualElem f) const {
    const RootSystem& rs = a_.rs();
    // T_{s_1}...T_{s_p} bullet f = T_{s_1} bullet (... bullet (T_{s_p} bullet f))
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        int s = *it;
        RootIdx alpha = rs.simple_root(s);
        WIdx ws = rs.simple(s);
        DualElem out = zero_elem();
        for (WIdx z = 0; z < rs.order(); ++z) {
            const QElem& fz = f.v[size_t(z)];
            const QElem& fzs = f.v[size_t(rs.mul(z, ws))];
            QElem acc = q_.zero();
            if (fam == Family::Y) {
                // z(x_{-alpha}^{-1}) f(z) + z(x_alpha^{-1}) f(zs)
                if (!fz.is_zero())
                    acc = q_.mul(q_.weyl_root_monomial(z, {{rs.neg(alpha), -1}}), fz);
                if (!fzs.is_zero())
                    acc = q_.add(acc, q_.mul(q_.weyl_root_monomial(z, {{alpha, -1}}), fzs));
            } else {
                // z(x_alpha^{-1}) (f(z) - f(zs))
                QElem diff = q_.sub(fz, fzs);
                if (!diff.is_zero())
                    acc = q_.mul(q_.weyl_root_monomial(z, {{alpha, -1}}), diff);
            }
            out.v[size_t(z)] = std::move(acc);
        }
        f = std::move(out);
    }
    return f;
}

const DualElem& DualModule::times_class(Family fam, WIdx z) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = times_.find({fam, z});
        if (it != times_.end()) return it->second;
    }
    const RootSystem& rs = a_.rs();
    // closed form: values a_{z,y} y(x_G)
    const BaseChange& bc = tw_.base_change(fam);
    DualElem closed = zero_elem();
    for (WIdx y = 0; y < rs.order(); ++y) {
        const QElem& azy = bc.a[size_t(z)][size_t(y)];
        if (azy.is_zero()) continue;
        closed.v[size_t(y)] = q_.mul_s(azy, wxG_[size_t(y)]);
    }
    // bullet route: T_{I_z rev} bullet x_G f_e
    DualElem seed = zero_elem();
    seed.v[size_t(rs.identity())] = q_.from_S(wxG_[size_t(rs.identity())]);
    std::vector<int> rev(rs.word_of(z).rbegin(), rs.word_of(z).rend());
    DualElem routed = bullet_word(rev, fam, std::move(seed));
    for (WIdx y = 0; y < rs.order(); ++y)
        if (!q_.equal(routed.v[size_t(y)], closed.v[size_t(y)]))
            throw internal_check_failed("times-class routes disagree at " + rs.elem_name(y) +
                                        " for " + rs.elem_name(z));
    std::lock_guard<std::mutex> lk(mx_);
    return times_.emplace(std::make_pair(fam, z), std::move(closed)).first->second;
}

const DualElem& DualModule::dual_basis(Family fam, WIdx x) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = star_.find({fam, x});
        if (it != star_.end()) return it->second;
    }
    const BaseChange& bc = tw_.base_change(fam);
    DualElem f = zero_elem();
    for (WIdx z = 0; z < rs().order(); ++z) {
        const SElem& bzx = bc.b[size_t(z)][size_t(x)];
        if (!bzx.is_zero()) f.v[size_t(z)] = q_.from_S(bzx);
    }
    std::lock_guard<std::mutex> lk(mx_);
    return star_.emplace(std::make_pair(fam, x), std::move(f)).first->second;
}

std::vector<SElem> DualModule::expand_in(const DualElem& f, Family fam) const {
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(fam);
    std::vector<SElem> out(size_t(rs.order()), a_.zero());
    for (WIdx x = 0; x < rs.order(); ++x) {
        QElem acc = q_.zero();
        for (WIdx y = 0; y < rs.order(); ++y) {
            const QElem& axy = bc.a[size_t(x)][size_t(y)];
            if (axy.is_zero() || f.v[size_t(y)].is_zero()) continue;
            acc = q_.add(acc, q_.mul(axy, f.v[size_t(y)]));
        }
        if (!acc.is_zero())
            out[size_t(x)] = q_.to_S(acc, "expansion coefficient not in S (not in D*)");
    }
    return out;
}

DualElem DualModule::rebuild(const std::vector<SElem>& coeffs, Family fam) const {
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(fam);
    DualElem out = zero_elem();
    for (WIdx z = 0; z < rs.order(); ++z) {
        QElem acc = q_.zero();
        for (WIdx x = 0; x < rs.order(); ++x) {
            if (coeffs[size_t(x)].is_zero() || bc.b[size_t(z)][size_t(x)].is_zero()) continue;
            acc = q_.add(acc, q_.from_S(a_.mul(coeffs[size_t(x)], bc.b[size_t(z)][size_t(x)])));
        }
        out.v[size_t(z)] = std::move(acc);
    }
    return out;
}

SElem DualModule::pairing(const DualElem& f, const DualElem& g) const {
    const RootSystem& rs = a_.rs();
    // (Y_G bullet (fg))(z) = sum_y y(x_G^{-1}) (fg)(y): the reindexed sum is
    // the same for every z, hence constant
    QElem acc = q_.zero();
    for (WIdx y = 0; y < rs.order(); ++y) {
        if (f.v[size_t(y)].is_zero() || g.v[size_t(y)].is_zero()) continue;
        acc = q_.add(acc, q_.mul(gG_[size_t(y)], q_.mul(f.v[size_t(y)], g.v[size_t(y)])));
    }
    return q_.to_S(acc, "pairing value not in S");
}

SElem DualModule::pairing_parab(const DualElem& f, const DualElem& g) const {
    const RootSystem& rs = a_.rs();
    std::vector<QElem> t(size_t(rs.order()), q_.zero());
    for (WIdx y = 0; y < rs.order(); ++y)
        if (!f.v[size_t(y)].is_zero() && !g.v[size_t(y)].is_zero())
            t[size_t(y)] = q_.mul(gGL_[size_t(y)], q_.mul(f.v[size_t(y)], g.v[size_t(y)]));
    QElem first = q_.zero();
    bool have_first = false;
    for (WIdx z : rs.order_list()) {
        QElem val = q_.zero();
        for (WIdx w : rs.WupperL()) val = q_.add(val, t[size_t(rs.mul(z, w))]);
        if (!have_first) {
            first = std::move(val);
            have_first = true;
        } else if (!q_.equal(first, val)) {
            throw error("parabolic pairing is not constant (inputs not W_L-invariant?)");
        }
    }
    return q_.to_S(first, "parabolic pairing value not in S");
}

DualElem DualModule::project_parab(const DualElem& f) const {
    const RootSystem& rs = a_.rs();
    std::vector<QElem> t(size_t(rs.order()), q_.zero());
    for (WIdx y = 0; y < rs.order(); ++y)
        if (!f.v[size_t(y)].is_zero()) t[size_t(y)] = q_.mul(gP_[size_t(y)], f.v[size_t(y)]);
    DualElem out = zero_elem();
    for (WIdx z = 0; z < rs.order(); ++z) {
        QElem acc = q_.zero();
        for (WIdx v : rs.WL()) acc = q_.add(acc, t[size_t(rs.mul(z, v))]);
        out.v[size_t(z)] = std::move(acc);
    }
    return out;
}

bool DualModule::is_WL_invariant(const DualElem& f) const {
    const RootSystem& rs = a_.rs();
    for (WIdx v : rs.WL()) {
        if (v == rs.identity()) continue;
        for (WIdx z = 0; z < rs.order(); ++z)
            if (!q_.equal(f.v[size_t(rs.mul(z, v))], f.v[size_t(z)])) return false;
    }
    return true;
}

const DualElem& DualModule::projected_times(int wpos) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = ptimes_.find(wpos);
        if (it != ptimes_.end()) return it->second;
    }
    WIdx w = rs().WupperL()[size_t(wpos)];
    DualElem p = project_parab(times_class(Family::Y, w));
    std::lock_guard<std::mutex> lk(mx_);
    return ptimes_.emplace(wpos, std::move(p)).first->second;
}

const std::vector<SElem>& DualModule::z_star_xstar_coeffs(int wpos) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = zstar_coeffs_.find(wpos);
        if (it != zstar_coeffs_.end()) return it->second;
    }
    const RootSystem& rs = a_.rs();
    const auto& reps = rs.WupperL();
    const int k = int(reps.size());
    // Gram matrix M[w'][w''] = <X_{w'}^*, Y_P bullet Y_{w''}^x>
    std::vector<std::vector<SElem>> gram(size_t(k), std::vector<SElem>(size_t(k), a_.zero()));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            gram[size_t(i)][size_t(j)] =
                pairing_parab(dual_basis(Family::X, reps[size_t(i)]), projected_times(j));
    // Z_w = sum_i c^w_i X_{w_i}^* with sum_i c^w_i M[i][j] = delta_{w,j},
    // i.e. the coefficient matrix (c^w_i) is M^{-1}: row w gives Z_w
    std::vector<std::vector<SElem>> minv =
        invert_s_matrix(a_, std::move(gram), "Z-dual Gram system");
    std::lock_guard<std::mutex> lk(mx_);
    for (int w = 0; w < k; ++w) zstar_coeffs_.emplace(w, minv[size_t(w)]);
    return zstar_coeffs_.at(wpos);
}

const DualElem& DualModule::z_star(int wpos) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = zstar_.find(wpos);
        if (it != zstar_.end()) return it->second;
    }
    const RootSystem& rs = a_.rs();
    const auto& reps = rs.WupperL();
    const auto& coeffs = z_star_xstar_coeffs(wpos);
    DualElem zst = zero_elem();
    for (size_t i = 0; i < reps.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        zst = add(zst, scale_s(dual_basis(Family::X, reps[i]), coeffs[i]));
    }
    std::lock_guard<std::mutex> lk(mx_);
    return zstar_.emplace(wpos, std::move(zst)).first->second;
}

// --- Levi system ---

DualLElem DualModule::levi_zero() const {
    return {std::vector<QElem>(size_t(levi_size()), q_.zero())};
}

const DualLElem& DualModule::levi_dual_basis(Family fam, int vpos) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = levi_star_.find({fam, vpos});
        if (it != levi_star_.end()) return it->second;
    }
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(fam);
    const auto& wl = rs.WL();
    DualLElem g = levi_zero();
    for (size_t i = 0; i < wl.size(); ++i) {
        const SElem& b = bc.b[size_t(wl[i])][size_t(wl[size_t(vpos)])];
        if (!b.is_zero()) g.v[i] = q_.from_S(b);
    }
    std::lock_guard<std::mutex> lk(mx_);
    return levi_star_.emplace(std::make_pair(fam, vpos), std::move(g)).first->second;
}

const DualLElem& DualModule::levi_times_class(Family fam, int vpos) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = levi_times_.find({fam, vpos});
        if (it != levi_times_.end()) return it->second;
    }
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(fam);
    const auto& wl = rs.WL();
    WIdx v = wl[size_t(vpos)];
    // closed form within the Levi model: values a_{v,y} y(x_L) for y in W_L
    DualLElem g = levi_zero();
    for (size_t i = 0; i < wl.size(); ++i) {
        const QElem& avy = bc.a[size_t(v)][size_t(wl[i])];
        if (!avy.is_zero()) g.v[i] = q_.mul_s(avy, wxL_[i]);
    }
    // bullet route inside W_L
    DualLElem seed = levi_zero();
    int epos = wl_pos(rs.identity());
    seed.v[size_t(epos)] = q_.from_S(wxL_[size_t(epos)]);
    const auto& word = rs.word_of(v);
    for (auto it2 = word.rbegin(); it2 != word.rend(); ++it2) {
        int s = *it2;
        RootIdx alpha = rs.simple_root(s);
        WIdx ws = rs.simple(s);
        DualLElem out = levi_zero();
        for (size_t zi = 0; zi < wl.size(); ++zi) {
            WIdx z = wl[zi];
            int zspos = wl_pos(rs.mul(z, ws));
            const QElem& fz = seed.v[zi];
            const QElem& fzs = seed.v[size_t(zspos)];
            QElem acc = q_.zero();
            if (fam == Family::Y) {
                if (!fz.is_zero())
                    acc = q_.mul(q_.weyl_root_monomial(z, {{rs.neg(alpha), -1}}), fz);
                if (!fzs.is_zero())
                    acc = q_.add(acc, q_.mul(q_.weyl_root_monomial(z, {{alpha, -1}}), fzs));
            } else {
                QElem diff = q_.sub(fz, fzs);
                if (!diff.is_zero())
                    acc = q_.mul(q_.weyl_root_monomial(z, {{alpha, -1}}), diff);
            }
            out.v[zi] = std::move(acc);
        }
        seed = std::move(out);
    }
    for (size_t i = 0; i < wl.size(); ++i)
        if (!q_.equal(seed.v[i], g.v[i]))
            throw internal_check_failed("Levi times-class routes disagree");
    std::lock_guard<std::mutex> lk(mx_);
    return levi_times_.emplace(std::make_pair(fam, vpos), std::move(g)).first->second;
}

std::vector<SElem> DualModule::levi_expand(const DualLElem& g, Family fam) const {
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(fam);
    const auto& wl = rs.WL();
    std::vector<SElem> out(wl.size(), a_.zero());
    for (size_t x = 0; x < wl.size(); ++x) {
        QElem acc = q_.zero();
        for (size_t y = 0; y < wl.size(); ++y) {
            const QElem& axy = bc.a[size_t(wl[x])][size_t(wl[y])];
            if (axy.is_zero() || g.v[y].is_zero()) continue;
            acc = q_.add(acc, q_.mul(axy, g.v[y]));
        }
        if (!acc.is_zero()) out[x] = q_.to_S(acc, "Levi expansion coefficient not in S");
    }
    return out;
}

SElem DualModule::levi_pairing(const DualLElem& f, const DualLElem& g) const {
    QElem acc = q_.zero();
    for (size_t y = 0; y < f.v.size(); ++y) {
        if (f.v[y].is_zero() || g.v[y].is_zero()) continue;
        acc = q_.add(acc, q_.mul(gL_[y], q_.mul(f.v[y], g.v[y])));
    }
    return q_.to_S(acc, "Levi pairing value not in S");
}

DualLElem DualModule::restrict_L(const DualElem& f) const {
    const auto& wl = rs().WL();
    DualLElem g = levi_zero();
    for (size_t i = 0; i < wl.size(); ++i) g.v[i] = f.v[size_t(wl[i])];
    return g;
}

DualElem DualModule::section_j_a(const DualLElem& g, Family fam) const {
    const auto& wl = rs().WL();
    std::vector<SElem> coeffs = levi_expand(g, fam);
    DualElem out = zero_elem();
    for (size_t i = 0; i < wl.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        out = add(out, scale_s(dual_basis(fam, wl[i]), coeffs[i]));
    }
    return out;
}

bool DualModule::levi_equal(const DualLElem& f, const DualLElem& g) const {
    for (size_t i = 0; i < f.v.size(); ++i)
        if (!q_.equal(f.v[i], g.v[i])) return false;
    return true;
}

// --- characteristic map, Borel model, characters ---

DualElem DualModule::char_map(const SElem& p) const {
    const RootSystem& rs = a_.rs();
    DualElem out = zero_elem();
    for (WIdx w = 0; w < rs.order(); ++w) out.v[size_t(w)] = q_.from_S(a_.weyl_act(w, p));
    return out;
}

DualLElem DualModule::char_map_L(const SElem& p) const {
    const auto& wl = rs().WL();
    DualLElem out = levi_zero();
    for (size_t i = 0; i < wl.size(); ++i) out.v[i] = q_.from_S(a_.weyl_act(wl[i], p));
    return out;
}

DualElem DualModule::borel_rho(const SElem& p, const SElem& q) const {
    DualElem ch = char_map(q);
    return scale_s(ch, p);
}

RhoReport DualModule::rho_surjectivity_check(int max_degree) const {
    if (a_.ring().kind != CoeffRing::Kind::rationals)
        throw usage_error("Borel surjectivity check needs rational coefficients");
    const RootSystem& rs = a_.rs();
    const int n = rs.order();
    const int nv = a_.nvars();
    RhoReport rep;
    for (int d = 0; d <= max_degree; ++d) {
        const MonomialTable& tab = monomials(nv, d);
        const int width = n * int(tab.exps.size());
        auto slice_row = [&](const std::vector<Series>& vals) {
            std::vector<Rat> row(static_cast<size_t>(width));
            for (int z = 0; z < n; ++z) {
                for (auto& [e, c] : vals[size_t(z)].block(d))
                    row[size_t(z * int(tab.exps.size()) + tab.rank_of(e))] = c.scalar_part();
            }
            return row;
        };
        auto shift = [&](const Series& s, Exp a) {
            Series sh(nv);
            for (int bd = 0; bd <= std::min(d, s.max_deg()); ++bd)
                for (auto& [e, c] : s.block(bd)) {
                    if (bd + exp_total(a, nv) > d) break;
                    sh.add_term(e + a, c);
                }
            return sh;
        };
        std::vector<std::vector<Rat>> target, image;
        // target: degree-d slices of x^a Y^*_x over all x in W, |a| <= d
        for (WIdx x = 0; x < n; ++x) {
            const DualElem& ystar = dual_basis(Family::Y, x);
            for (int j = 0; j <= d; ++j) {
                for (Exp a : monomials(nv, j).exps) {
                    std::vector<Series> vals(static_cast<size_t>(n), Series(nv));
                    for (int z = 0; z < n; ++z)
                        if (!ystar.v[size_t(z)].is_zero())
                            vals[size_t(z)] = shift(ystar.v[size_t(z)].num.s, a);
                    target.push_back(slice_row(vals));
                }
            }
        }
        // image: degree-d slices of x^a ch(x^b)
        for (int j = 0; j <= d; ++j) {
            for (Exp a : monomials(nv, j).exps) {
                for (int k = 0; k + j <= d; ++k) {
                    for (Exp b : monomials(nv, k).exps) {
                        Series xb(nv);
                        xb.set_term(b, Coeff(1));
                        std::vector<Series> vals(static_cast<size_t>(n), Series(nv));
                        for (int z = 0; z < n; ++z)
                            vals[size_t(z)] = shift(a_.weyl_act_series(z, xb, d), a);
                        image.push_back(slice_row(vals));
                    }
                }
            }
        }
        auto rank_of = [&](std::vector<std::vector<Rat>>& rows) {
            int rank = 0;
            size_t cols = size_t(width);
            for (size_t col = 0; col < cols && rank < int(rows.size()); ++col) {
                int piv = -1;
                for (size_t r = size_t(rank); r < rows.size(); ++r)
                    if (!rows[r][col].is_zero()) {
                        piv = int(r);
                        break;
                    }
                if (piv < 0) continue;
                std::swap(rows[size_t(rank)], rows[size_t(piv)]);
                Rat p = rows[size_t(rank)][col];
                for (size_t r = 0; r < rows.size(); ++r) {
                    if (int(r) == rank || rows[r][col].is_zero()) continue;
                    Rat f = rows[r][col] / p;
                    for (size_t cc = col; cc < cols; ++cc)
                        rows[r][cc] -= f * rows[size_t(rank)][cc];
                }
                ++rank;
            }
            return rank;
        };
        int tdim = rank_of(target);
        int idim = rank_of(image);
        rep.rows.push_back({d, tdim, idim});
        if (idim < tdim && rep.first_failing_degree < 0) rep.first_failing_degree = d;
    }
    return rep;
}

std::pair<SElem, SElem> DualModule::character_trace(WIdx v) const {
    const RootSystem& rs = a_.rs();
    if (wl_pos(v) < 0) throw usage_error("character trace needs v in W_L");
    SElem chi_l = a_.zero();
    for (WIdx x = 0; x < rs.order(); ++x) {
        DualElem moved = bullet_delta(v, dual_basis(Family::Y, x));
        std::vector<SElem> coeffs = expand_in(moved, Family::Y);
        chi_l = a_.add(chi_l, coeffs[size_t(x)]);
    }
    SElem chi = a_.zero();
    const auto& wl = rs.WL();
    for (size_t x = 0; x < wl.size(); ++x) {
        const DualLElem& base = levi_dual_basis(Family::Y, int(x));
        DualLElem moved = levi_zero();
        for (size_t z = 0; z < wl.size(); ++z)
            moved.v[z] = base.v[size_t(wl_pos(rs.mul(wl[z], v)))];
        std::vector<SElem> coeffs = levi_expand(moved, Family::Y);
        chi = a_.add(chi, coeffs[x]);
    }
    return {chi_l, chi};
}

} // namespace fda
