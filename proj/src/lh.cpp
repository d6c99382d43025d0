#include "fda/lh.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

LerayHirsch::LerayHirsch(const DualModule& dual)
    : d_(dual), tw_(dual.twisted()), a_(dual.algebra()), q_(tw_.q()) {}

const std::vector<std::vector<SElem>>& LerayHirsch::e_coeffs() const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        if (ecoeffs_) return *ecoeffs_;
    }
    const RootSystem& rs = a_.rs();
    const auto& reps = rs.WupperL();
    auto e = std::make_unique<std::vector<std::vector<SElem>>>(
        size_t(rs.order()), std::vector<SElem>(reps.size(), a_.zero()));
    for (WIdx z = 0; z < rs.order(); ++z) {
        DualElem p = d_.project_parab(d_.times_class(Family::Y, z));
        for (size_t w = 0; w < reps.size(); ++w)
            (*e)[size_t(z)][w] = d_.pairing_parab(p, d_.z_star(int(w)));
    }
    std::lock_guard<std::mutex> lk(mx_);
    if (!ecoeffs_) ecoeffs_ = std::move(e);
    return *ecoeffs_;
}

std::vector<SElem> LerayHirsch::expand_in_times(const DualElem& f) const {
    // f = sum_w c_w Y_w^x with Y_w^x(y) = a_{w,y} y(x_G): triangular solve
    // in decreasing linear order
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(Family::Y);
    std::vector<QElem> resid(f.v);
    std::vector<SElem> out(size_t(rs.order()), a_.zero());
    const auto& order = rs.order_list();
    for (int pos = rs.order() - 1; pos >= 0; --pos) {
        WIdx y = order[size_t(pos)];
        // c_y = resid(y) / (a_{y,y} y(x_G))
        if (resid[size_t(y)].is_zero()) continue;
        const DualElem& cls = d_.times_class(Family::Y, y);
        QElem cy = q_.mul(resid[size_t(y)], q_.inverse_unit(bc.a[size_t(y)][size_t(y)]));
        QElem yxg_inv = q_.weyl_root_monomial(y, [&] {
            std::vector<std::pair<RootIdx, int>> fac;
            for (RootIdx b : rs.pos_roots()) fac.emplace_back(rs.neg(b), -1);
            return fac;
        }());
        cy = q_.mul(cy, yxg_inv);
        out[size_t(y)] = q_.to_S(cy, "times-class coefficient not in S");
        for (WIdx t = 0; t < rs.order(); ++t)
            if (!cls.v[size_t(t)].is_zero())
                resid[size_t(t)] =
                    q_.sub(resid[size_t(t)], q_.mul_s(cls.v[size_t(t)], out[size_t(y)]));
    }
    for (auto& r : resid)
        if (!r.is_zero()) throw internal_check_failed("times-class expansion left a residue");
    return out;
}

std::vector<SElem> LerayHirsch::multqs_formula(const QElem& qq, WIdx z) const {
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = tw_.base_change(Family::Y);
    std::vector<SElem> out(size_t(rs.order()), a_.zero());
    for (WIdx w = 0; w < rs.order(); ++w) {
        if (!rs.bruhat_leq(w, z)) continue;
        QElem acc = q_.zero();
        for (WIdx y = 0; y < rs.order(); ++y) {
            if (!rs.bruhat_leq(w, y) || !rs.bruhat_leq(y, z)) continue;
            const QElem& azy = bc.a[size_t(z)][size_t(y)];
            const SElem& byw = bc.b[size_t(y)][size_t(w)];
            if (azy.is_zero() || byw.is_zero()) continue;
            acc = q_.add(acc, q_.mul(q_.weyl_act(y, qq), q_.mul_s(azy, byw)));
        }
        if (!acc.is_zero()) out[size_t(w)] = q_.to_S(acc, "multqs coefficient not in S");
    }
    return out;
}

std::vector<SElem> LerayHirsch::multqs_direct(const QElem& qq, WIdx z) const {
    const RootSystem& rs = a_.rs();
    // (q h) bullet f has values z'(q) (h bullet f)(z')
    DualElem f = d_.times_class(Family::Y, z);
    DualElem scaled = d_.zero_elem();
    for (WIdx zp = 0; zp < rs.order(); ++zp)
        if (!f.v[size_t(zp)].is_zero())
            scaled.v[size_t(zp)] = q_.mul(q_.weyl_act(zp, qq), f.v[size_t(zp)]);
    return expand_in_times(scaled);
}

SElem LerayHirsch::w_of_yv1(WIdx w, WIdx v) const {
    QElem yv1 = tw_.act_on_one(tw_.y_seq(a_.rs().word_of(v)));
    return q_.to_S(q_.weyl_act(w, yv1), "w(Y_v . 1) not in S");
}

std::vector<SElem> LerayHirsch::z_star_expansion(int wpos) const {
    const RootSystem& rs = a_.rs();
    WIdx w = rs.WupperL()[size_t(wpos)];
    std::vector<SElem> coeffs = d_.expand_in(d_.z_star(wpos), Family::Y);
    for (WIdx z = 0; z < rs.order(); ++z) {
        auto [wz, vz] = rs.coset_decompose(z);
        if (wz == w) {
            SElem expect = w_of_yv1(w, vz);
            if (!a_.equal(coeffs[size_t(z)], expect))
                throw internal_check_failed("Z-dual leading block mismatch at " +
                                            rs.elem_name(z));
        } else if (!(rs.bruhat_leq(w, wz) && wz != w)) {
            if (!coeffs[size_t(z)].is_zero())
                throw internal_check_failed("Z-dual expansion fails to vanish at " +
                                            rs.elem_name(z));
        }
    }
    return coeffs;
}

QWElem LerayHirsch::gz_B_factor(int pos, const PositionedSubseq& E, const PositionedSubseq& F,
                                const std::vector<int>& word, Family fam) const {
    const RootSystem& rs = a_.rs();
    int s = word[size_t(pos)];
    RootIdx alpha = rs.simple_root(s);
    bool inE = (E.mask >> pos) & 1u, inF = (F.mask >> pos) & 1u;
    QWElem h;
    if (inE && inF) {
        QElem c = q_.from_S(a_.x_of_root(alpha));
        if (fam == Family::X) c.num.s.negate();
        h.c.emplace(rs.simple(s), std::move(c));
    } else if (inE || inF) {
        if (fam == Family::Y) {
            h.c.emplace(rs.simple(s), q_.neg(q_.from_S(a_.u(alpha))));
        } else {
            h.c.emplace(rs.simple(s), q_.one());
        }
    } else {
        if (fam == Family::Y) {
            // x_{-alpha}^{-1} delta_e + x_alpha x_{-alpha}^{-2} delta_s
            h.c.emplace(rs.identity(), q_.inv_root_monomial({{rs.neg(alpha), 1}}));
            QElem c = q_.mul(q_.from_S(a_.x_of_root(alpha)),
                             q_.inv_root_monomial({{rs.neg(alpha), 2}}));
            h.c.emplace(rs.simple(s), std::move(c));
        } else {
            // x_alpha^{-1} (delta_e - delta_s) = X_s
            h.c.emplace(rs.identity(), q_.inv_root_monomial({{alpha, 1}}));
            h.c.emplace(rs.simple(s), q_.neg(q_.inv_root_monomial({{alpha, 1}})));
        }
    }
    return h;
}

SElem LerayHirsch::gz_structure_const(WIdx u, WIdx v, WIdx w, Family fam) const {
    const RootSystem& rs = a_.rs();
    const std::vector<int>& word = rs.word_of(w);
    const int k = int(word.size());
    if (k > 20) throw usage_error("structure-constant word too long");
    QElem total = q_.zero();
    for (std::uint32_t em = 0; em < (1u << k); ++em) {
        PositionedSubseq E{&word, em};
        const SElem& bEu = tw_.b_of_sequence(E.letters(), fam)[size_t(u)];
        if (bEu.is_zero()) continue;
        for (std::uint32_t fm = 0; fm < (1u << k); ++fm) {
            PositionedSubseq F{&word, fm};
            const SElem& bFv = tw_.b_of_sequence(F.letters(), fam)[size_t(v)];
            if (bFv.is_zero()) continue;
            QWElem chain = tw_.delta(rs.identity());
            for (int j = 0; j < k; ++j) chain = tw_.mul(chain, gz_B_factor(j, E, F, word, fam));
            QElem val = tw_.act_on_one(chain);
            if (val.is_zero()) continue;
            total = q_.add(total, q_.mul(val, q_.from_S(a_.mul(bEu, bFv))));
        }
    }
    return q_.to_S(total, "structure constant not in S");
}

const std::vector<SElem>& LerayHirsch::structure_row(WIdx u, WIdx v, Family fam) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = srow_.find({u, v, fam});
        if (it != srow_.end()) return it->second;
    }
    DualElem prod = d_.mul(d_.dual_basis(fam, u), d_.dual_basis(fam, v));
    std::vector<SElem> row = d_.expand_in(prod, fam);
    std::lock_guard<std::mutex> lk(mx_);
    return srow_.emplace(std::make_tuple(u, v, fam), std::move(row)).first->second;
}

DualElem LerayHirsch::row_class(const CMatrix& c, int row) const {
    const RootSystem& rs = a_.rs();
    const int nl = int(rs.WL().size());
    int wpos = row / nl, vpos = row % nl;
    WIdx v = rs.WL()[size_t(vpos)];
    if (c.geometric) return d_.mul(d_.z_star(wpos), d_.dual_basis(Family::Y, v));
    WIdx w = rs.WupperL()[size_t(wpos)];
    return d_.mul(d_.dual_basis(Family::X, w), d_.dual_basis(Family::X, v));
}

CMatrix LerayHirsch::assemble(bool geometric, bool compare_routes) const {
    const RootSystem& rs = a_.rs();
    const int n = rs.order();
    const auto& order = rs.order_list();
    CMatrix c;
    c.geometric = geometric;
    c.block = int(rs.WL().size());
    c.entries.assign(size_t(n), std::vector<SElem>(size_t(n), a_.zero()));
    Family fam = geometric ? Family::Y : Family::X;
    for (int row = 0; row < n; ++row) {
        DualElem f = row_class(c, row);
        std::vector<SElem> coeffs = d_.expand_in(f, fam);
        for (int col = 0; col < n; ++col)
            c.entries[size_t(row)][size_t(col)] = coeffs[size_t(order[size_t(col)])];
    }
    if (geometric && compare_routes) {
        // independent route: c^{w'',v''}_{w,v} = sum_{w',v'} e_{w'v',w} p_{w'v',v}^{w''v''}
        const auto& e = e_coeffs();
        const int nl = c.block;
        for (int row = 0; row < n; ++row) {
            int wpos = row / nl, vpos = row % nl;
            WIdx v = rs.WL()[size_t(vpos)];
            for (int col = 0; col < n; ++col) {
                WIdx target = order[size_t(col)];
                SElem acc = a_.zero();
                for (WIdx zp = 0; zp < n; ++zp) {
                    const SElem& ezw = e[size_t(zp)][size_t(wpos)];
                    if (ezw.is_zero()) continue;
                    const SElem& p = structure_row(zp, v, Family::Y)[size_t(target)];
                    if (p.is_zero()) continue;
                    acc = a_.add(acc, a_.mul(ezw, p));
                }
                if (!a_.equal(acc, c.entries[size_t(row)][size_t(col)]))
                    throw internal_check_failed(
                        "assembly routes disagree at row " + std::to_string(row) + ", col " +
                        std::to_string(col));
            }
        }
    }
    return c;
}

LHReport LerayHirsch::verify(const CMatrix& c) const {
    const RootSystem& rs = a_.rs();
    const int n = rs.order();
    const int nl = c.block;
    const auto& order = rs.order_list();
    LHReport rep;
    rep.block_upper_triangular = true;
    rep.diag_blocks_upper_mod_splus = true;
    rep.diag_residues_match = true;
    rep.diag_in_one_plus_splus = true;

    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const SElem& entry = c.entries[size_t(row)][size_t(col)];
            int wr = row / nl, wc = col / nl;
            if (wc < wr && !entry.is_zero()) {
                rep.block_upper_triangular = false;
                rep.failures.push_back("nonzero entry below the block diagonal at (" +
                                       std::to_string(row) + "," + std::to_string(col) + ")");
            }
            if (wc == wr && col % nl < row % nl && !a_.in_splus(entry)) {
                rep.diag_blocks_upper_mod_splus = false;
                rep.failures.push_back("diagonal block not upper triangular mod S_+ at (" +
                                       std::to_string(row) + "," + std::to_string(col) + ")");
            }
        }
        // diagonal residue: (-1)^{l(wv)} prod u_{gamma_j} for the row element
        WIdx z = order[size_t(row)];
        const SElem& diag = c.entries[size_t(row)][size_t(row)];
        if (!a_.in_one_plus_splus(diag)) {
            rep.diag_in_one_plus_splus = false;
            rep.failures.push_back("diagonal entry at row " + std::to_string(row) +
                                   " is not in 1 + S_+");
        }
        SElem residue = a_.one();
        for (RootIdx g : rs.gamma_sequence(rs.word_of(z)))
            residue = a_.mul(residue, a_.u(g));
        if (rs.length(z) % 2 == 1) residue.s.negate();
        SElem diff = a_.sub(diag, residue);
        if (!a_.in_splus(diff)) {
            rep.diag_residues_match = false;
            rep.failures.push_back("diagonal residue mismatch at row " + std::to_string(row));
        }
    }

    auto aug = specialize(c);
    rep.det_augmentation = specialized_det(aug);
    rep.det_augmentation_is_one = rep.det_augmentation.is_one();
    if (!rep.det_augmentation_is_one)
        rep.failures.push_back("augmented determinant is " +
                               rep.det_augmentation.str(a_.ring()));
    return rep;
}

std::vector<std::vector<Coeff>> LerayHirsch::specialize(const CMatrix& c) const {
    const int n = int(c.entries.size());
    std::vector<std::vector<Coeff>> m(static_cast<size_t>(n), std::vector<Coeff>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[size_t(i)][size_t(j)] = a_.augment(c.entries[size_t(i)][size_t(j)]);
    return m;
}

bool LerayHirsch::specialized_unitriangular(const std::vector<std::vector<Coeff>>& m) const {
    for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i][i].is_one()) return false;
        for (size_t j = 0; j < i; ++j)
            if (!m[i][j].is_zero()) return false;
    }
    return true;
}

Coeff LerayHirsch::specialized_det(const std::vector<std::vector<Coeff>>& m0) const {
    // fraction-free elimination (exact over the coefficient ring)
    std::vector<std::vector<Coeff>> m = m0;
    const int n = int(m.size());
    const CoeffRing& ring = a_.ring();
    Coeff prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[size_t(k)][size_t(k)].is_zero()) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (!m[size_t(r)][size_t(k)].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return Coeff(0);
            std::swap(m[size_t(k)], m[size_t(piv)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Coeff t = m[size_t(i)][size_t(j)].mul(m[size_t(k)][size_t(k)], ring);
                Coeff s = m[size_t(i)][size_t(k)].mul(m[size_t(k)][size_t(j)], ring);
                t.sub(s);
                auto qd = t.divide_exact(prev, ring);
                if (!qd) throw internal_check_failed("fraction-free elimination not exact");
                m[size_t(i)][size_t(j)] = *qd;
            }
            m[size_t(i)][size_t(k)] = Coeff(0);
        }
        prev = m[size_t(k)][size_t(k)];
    }
    Coeff det = m.empty() ? Coeff(1) : m[size_t(n - 1)][size_t(n - 1)];
    if (sign < 0) det = -det;
    return det;
}

std::vector<SElem> LerayHirsch::lh_expand(const DualElem& f, const CMatrix& c) const {
    const RootSystem& rs = a_.rs();
    const int n = rs.order();
    const auto& order = rs.order_list();
    Family fam = c.geometric ? Family::Y : Family::X;
    std::vector<SElem> y = d_.expand_in(f, fam);
    // solve x^T C = y^T, i.e. C^T x = y, over S by elimination with unit pivots
    std::vector<std::vector<SElem>> m(size_t(n), std::vector<SElem>(size_t(n), a_.zero()));
    std::vector<SElem> rhs(size_t(n), a_.zero());
    for (int i = 0; i < n; ++i) {
        rhs[size_t(i)] = y[size_t(order[size_t(i)])];
        for (int j = 0; j < n; ++j) m[size_t(i)][size_t(j)] = c.entries[size_t(j)][size_t(i)];
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a_.is_unit(m[size_t(r)][size_t(col)])) {
                piv = r;
                break;
            }
        if (piv < 0) throw error("Leray-Hirsch system is singular at available precision");
        std::swap(m[size_t(piv)], m[size_t(col)]);
        std::swap(rhs[size_t(piv)], rhs[size_t(col)]);
        SElem pinv = a_.invert(m[size_t(col)][size_t(col)]);
        for (int j = 0; j < n; ++j) m[size_t(col)][size_t(j)] = a_.mul(m[size_t(col)][size_t(j)], pinv);
        rhs[size_t(col)] = a_.mul(rhs[size_t(col)], pinv);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            SElem fct = m[size_t(r)][size_t(col)];
            if (fct.is_zero()) continue;
            for (int j = 0; j < n; ++j)
                m[size_t(r)][size_t(j)] = a_.sub(m[size_t(r)][size_t(j)], a_.mul(fct, m[size_t(col)][size_t(j)]));
            rhs[size_t(r)] = a_.sub(rhs[size_t(r)], a_.mul(fct, rhs[size_t(col)]));
        }
    }
    return rhs;
}

DualElem LerayHirsch::lh_rebuild(const std::vector<SElem>& coeffs, const CMatrix& c) const {
    DualElem out = d_.zero_elem();
    for (size_t row = 0; row < coeffs.size(); ++row) {
        if (coeffs[row].is_zero()) continue;
        out = d_.add(out, d_.scale_s(row_class(c, int(row)), coeffs[row]));
    }
    return out;
}

} // namespace fda
