#include "fda/twisted.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

TwistedAlgebra::TwistedAlgebra(const Algebra& alg) : a_(alg), q_(alg) {}

QWElem TwistedAlgebra::delta(WIdx z) const {
    QWElem h;
    h.c.emplace(z, q_.one());
    return h;
}

QWElem TwistedAlgebra::from_q(QElem qe) const {
    QWElem h;
    if (!qe.is_zero()) h.c.emplace(a_.rs().identity(), std::move(qe));
    return h;
}

QWElem TwistedAlgebra::simple_gen(int simple, Family fam) const {
    const RootSystem& rs = a_.rs();
    RootIdx alpha = rs.simple_root(simple);
    QWElem h;
    if (fam == Family::Y) {
        // Y_s = x_{-alpha}^{-1} delta_e + x_alpha^{-1} delta_s
        h.c.emplace(rs.identity(), q_.inv_root_monomial({{rs.neg(alpha), 1}}));
        h.c.emplace(rs.simple(simple), q_.inv_root_monomial({{alpha, 1}}));
    } else {
        // X_s = x_alpha^{-1} delta_e - x_alpha^{-1} delta_s
        h.c.emplace(rs.identity(), q_.inv_root_monomial({{alpha, 1}}));
        h.c.emplace(rs.simple(simple), q_.neg(q_.inv_root_monomial({{alpha, 1}})));
    }
    return h;
}

QWElem TwistedAlgebra::x_of(int simple) const { return simple_gen(simple, Family::X); }
QWElem TwistedAlgebra::y_of(int simple) const { return simple_gen(simple, Family::Y); }

QWElem TwistedAlgebra::y_parab() const {
    const RootSystem& rs = a_.rs();
    // delta_v x_L^{-1} = v(x_L^{-1}) delta_v; v permutes the negated roots of Phi_L^+
    std::vector<std::pair<RootIdx, int>> fac;
    for (RootIdx b : rs.pos_roots_L()) fac.emplace_back(rs.neg(b), -1);
    QWElem h;
    for (WIdx v : rs.WL()) h.c.emplace(v, q_.weyl_root_monomial(v, fac));
    return h;
}

QWElem TwistedAlgebra::y_gl() const {
    const RootSystem& rs = a_.rs();
    // delta_w x_G^{-1} x_L = w(x_G^{-1} x_L) delta_w
    std::vector<std::pair<RootIdx, int>> fac;
    for (RootIdx b : rs.pos_roots()) fac.emplace_back(rs.neg(b), -1);
    for (RootIdx b : rs.pos_roots_L()) fac.emplace_back(rs.neg(b), 1);
    QWElem h;
    for (WIdx w : rs.WupperL()) h.c.emplace(w, q_.weyl_root_monomial(w, fac));
    return h;
}

QWElem TwistedAlgebra::y_full() const {
    const RootSystem& rs = a_.rs();
    std::vector<std::pair<RootIdx, int>> fac;
    for (RootIdx b : rs.pos_roots()) fac.emplace_back(rs.neg(b), -1);
    QWElem h;
    for (WIdx z = 0; z < rs.order(); ++z) h.c.emplace(z, q_.weyl_root_monomial(z, fac));
    return h;
}

QWElem TwistedAlgebra::add(const QWElem& h, const QWElem& k) const {
    QWElem out = h;
    for (auto& [z, qe] : k.c) {
        auto it = out.c.find(z);
        if (it == out.c.end()) {
            out.c.emplace(z, qe);
        } else {
            it->second = q_.add(it->second, qe);
            if (it->second.is_zero()) out.c.erase(it);
        }
    }
    return out;
}

QWElem TwistedAlgebra::sub(const QWElem& h, const QWElem& k) const { return add(h, neg(k)); }

QWElem TwistedAlgebra::neg(QWElem h) const {
    for (auto& [z, qe] : h.c) qe.num.s.negate();
    return h;
}

QWElem TwistedAlgebra::mul(const QWElem& h, const QWElem& k) const {
    const RootSystem& rs = a_.rs();
    QWElem out;
    for (auto& [z, qz] : h.c) {
        for (auto& [zp, qzp] : k.c) {
            QElem tw = q_.mul(qz, q_.weyl_act(z, qzp));
            if (tw.is_zero()) continue;
            WIdx key = rs.mul(z, zp);
            auto it = out.c.find(key);
            if (it == out.c.end()) {
                out.c.emplace(key, std::move(tw));
            } else {
                it->second = q_.add(it->second, tw);
                if (it->second.is_zero()) out.c.erase(it);
            }
        }
    }
    return out;
}

QWElem TwistedAlgebra::scale_q(const QWElem& h, const QElem& qe) const {
    QWElem out;
    for (auto& [z, c] : h.c) {
        QElem p = q_.mul(qe, c);
        if (!p.is_zero()) out.c.emplace(z, std::move(p));
    }
    return out;
}

QWElem TwistedAlgebra::mul_delta_left(WIdx z, const QWElem& h) const {
    const RootSystem& rs = a_.rs();
    QWElem out;
    for (auto& [y, qe] : h.c) out.c.emplace(rs.mul(z, y), q_.weyl_act(z, qe));
    return out;
}

QWElem TwistedAlgebra::word_product(const std::vector<int>& word, Family fam) const {
    if (word.empty()) return delta(a_.rs().identity());
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = words_.find({word, fam});
        if (it != words_.end()) return it->second;
    }
    std::vector<int> prefix(word.begin(), word.end() - 1);
    QWElem left = word_product(prefix, fam);
    QWElem out = mul(left, simple_gen(word.back(), fam));
    std::lock_guard<std::mutex> lk(mx_);
    return words_.emplace(std::make_pair(word, fam), std::move(out)).first->second;
}

QElem TwistedAlgebra::act_on_S(const QWElem& h, const QElem& qe) const {
    QElem out = q_.zero();
    for (auto& [y, c] : h.c) out = q_.add(out, q_.mul(c, q_.weyl_act(y, qe)));
    return out;
}

QElem TwistedAlgebra::act_on_one(const QWElem& h) const {
    QElem out = q_.zero();
    for (auto& [y, c] : h.c) out = q_.add(out, c);
    return out;
}

bool TwistedAlgebra::equal(const QWElem& h, const QWElem& k) const {
    for (auto& [z, qe] : h.c) {
        auto it = k.c.find(z);
        if (it == k.c.end()) {
            if (!qe.is_zero()) return false;
        } else if (!q_.equal(qe, it->second)) {
            return false;
        }
    }
    for (auto& [z, qe] : k.c)
        if (h.c.find(z) == h.c.end() && !qe.is_zero()) return false;
    return true;
}

const BaseChange& TwistedAlgebra::base_change(Family fam) const {
    std::uint64_t fp = a_.rs().table_fingerprint();
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = bc_.find({fp, fam});
        if (it != bc_.end()) return *it->second;
    }
    auto built = build_base_change(fam);
    std::lock_guard<std::mutex> lk(mx_);
    return *bc_.emplace(std::make_pair(fp, fam), std::move(built)).first->second;
}

std::shared_ptr<const BaseChange> TwistedAlgebra::build_base_change(Family fam) const {
    const RootSystem& rs = a_.rs();
    const int n = rs.order();
    auto bc = std::make_shared<BaseChange>();
    bc->family = fam;
    bc->a.assign(size_t(n), {});
    bc->b.assign(size_t(n), {});
    for (WIdx z = 0; z < n; ++z) {
        bc->a[size_t(z)].assign(size_t(n), q_.zero());
        QWElem yz = word_product(rs.word_of(z), fam);
        for (auto& [y, qe] : yz.c) {
            if (!rs.bruhat_leq(y, z))
                throw internal_check_failed("word expansion violates Bruhat support");
            bc->a[size_t(z)][size_t(y)] = qe;
        }
    }
    // triangular inversion: b_{z,t} = a_{z,z}^{-1}(delta_{t,z} - sum_{t<=y<z} a_{z,y} b_{y,t})
    for (WIdx z = 0; z < n; ++z) bc->b[size_t(z)].assign(size_t(n), a_.zero());
    for (int zpos = 0; zpos < n; ++zpos) {
        WIdx z = rs.order_list()[size_t(zpos)];
        QElem azz_inv = q_.inverse_unit(bc->a[size_t(z)][size_t(z)]);
        for (WIdx t = 0; t < n; ++t) {
            if (!rs.bruhat_leq(t, z)) continue;
            QElem acc = q_.zero();
            if (t == z) acc = q_.one();
            for (WIdx y = 0; y < n; ++y) {
                if (y == z || !rs.bruhat_leq(t, y) || !rs.bruhat_leq(y, z)) continue;
                const QElem& azy = bc->a[size_t(z)][size_t(y)];
                if (azy.is_zero()) continue;
                const SElem& byt = bc->b[size_t(y)][size_t(t)];
                if (byt.is_zero()) continue;
                acc = q_.sub(acc, q_.mul_s(azy, byt));
            }
            if (acc.is_zero()) continue;
            QElem bzt = q_.mul(azz_inv, acc);
            std::string what = "base-change entry b[" + rs.elem_name(z) + "][" +
                               rs.elem_name(t) + "] not in S";
            bc->b[size_t(z)][size_t(t)] = q_.to_S(bzt, what.c_str());
        }
    }
    return bc;
}

const std::vector<SElem>& TwistedAlgebra::b_of_sequence(const std::vector<int>& word,
                                                        Family fam) const {
    {
        std::lock_guard<std::mutex> lk(mx_);
        auto it = bseq_.find({word, fam});
        if (it != bseq_.end()) return it->second;
    }
    const RootSystem& rs = a_.rs();
    const BaseChange& bc = base_change(fam);
    QWElem yi = word_product(word, fam);
    // b_{I,t} = sum_y [Y_I]_{delta_y} b_{y,t}
    std::vector<SElem> out(size_t(rs.order()), a_.zero());
    for (WIdx t = 0; t < rs.order(); ++t) {
        QElem acc = q_.zero();
        for (auto& [y, qe] : yi.c) {
            const SElem& byt = bc.b[size_t(y)][size_t(t)];
            if (byt.is_zero()) continue;
            acc = q_.add(acc, q_.mul_s(qe, byt));
        }
        if (!acc.is_zero()) out[size_t(t)] = q_.to_S(acc, "sequence coefficient not in S");
    }
    std::lock_guard<std::mutex> lk(mx_);
    return bseq_.emplace(std::make_pair(word, fam), std::move(out)).first->second;
}

} // namespace fda
