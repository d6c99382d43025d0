#include "fda/coeff.hpp"
#include "fda/errors.hpp"

#include <algorithm>

namespace fda {

CoeffRing CoeffRing::formal_kappa(int weight_cap) {
    CoeffRing r;
    r.kind = Kind::params;
    r.nparams = 1;
    r.weight[0] = 1;
    r.name[0] = "k";
    r.weight_cap = weight_cap;
    return r;
}

CoeffRing CoeffRing::generic_params(int depth, int weight_cap) {
    if (depth < 1 || depth > 4) throw usage_error("generic law depth must be 1..4");
    CoeffRing r;
    r.kind = Kind::params;
    r.nparams = depth;
    for (int k = 0; k < depth; ++k) {
        r.weight[k] = k + 1;
        r.name[k] = "m" + std::to_string(k + 1);
    }
    r.weight_cap = weight_cap;
    return r;
}

Coeff Coeff::param(int i) {
    Coeff c;
    c.tail_.emplace_back(Key(1u) << (8 * i), Rat(1));
    return c;
}

int Coeff::key_weight(Key k, const CoeffRing& ring) {
    int w = 0;
    for (int i = 0; i < ring.nparams; ++i)
        w += int((k >> (8 * i)) & 0xffu) * ring.weight[i];
    return w;
}

bool Coeff::is_unit(const CoeffRing& ring) const {
    if (!tail_.empty() || head_.is_zero()) return false;
    if (ring.kind == CoeffRing::Kind::integers)
        return head_.is_integer() && (head_ == Rat(1) || head_ == Rat(-1));
    return true;
}

Coeff Coeff::operator-() const {
    Coeff r;
    r.head_ = -head_;
    r.tail_.reserve(tail_.size());
    for (auto& [k, v] : tail_) r.tail_.emplace_back(k, -v);
    return r;
}

void Coeff::add_term(Key k, const Rat& r) {
    if (r.is_zero()) return;
    if (k == 0) {
        head_ += r;
        return;
    }
    auto it = std::lower_bound(tail_.begin(), tail_.end(), k,
                               [](const auto& p, Key key) { return p.first < key; });
    if (it != tail_.end() && it->first == k) {
        it->second += r;
        if (it->second.is_zero()) tail_.erase(it);
    } else {
        tail_.insert(it, {k, r});
    }
}

void Coeff::add(const Coeff& o) {
    head_ += o.head_;
    if (o.tail_.empty()) return;
    if (tail_.empty()) {
        tail_ = o.tail_;
        return;
    }
    for (auto& [k, v] : o.tail_) add_term(k, v);
}

void Coeff::sub(const Coeff& o) {
    head_ -= o.head_;
    for (auto& [k, v] : o.tail_) add_term(k, -v);
}

void Coeff::scale(const Rat& r) {
    if (r.is_zero()) {
        head_ = Rat();
        tail_.clear();
        return;
    }
    head_ *= r;
    for (auto& [k, v] : tail_) v *= r;
}

void Coeff::add_mul(const Coeff& b, const Coeff& c, const CoeffRing& ring) {
    if (b.is_zero() || c.is_zero()) return;
    if (b.tail_.empty() && c.tail_.empty()) {
        head_.add_mul(b.head_, c.head_);
        return;
    }
    // small sparse product with weight truncation
    auto emit = [&](Key k, const Rat& v) {
        if (ring.weight_cap > 0 && key_weight(k, ring) > ring.weight_cap) return;
        add_term(k, v);
    };
    if (!b.head_.is_zero()) {
        head_.add_mul(b.head_, c.head_);
        for (auto& [k, v] : c.tail_) emit(k, b.head_ * v);
    }
    for (auto& [kb, vb] : b.tail_) {
        if (!c.head_.is_zero()) emit(kb, vb * c.head_);
        for (auto& [kc, vc] : c.tail_) emit(kb + kc, vb * vc);
    }
}

Coeff Coeff::mul(const Coeff& o, const CoeffRing& ring) const {
    Coeff r;
    r.add_mul(*this, o, ring);
    return r;
}

std::optional<Coeff> Coeff::divide_exact(const Coeff& d, const CoeffRing& ring) const {
    if (d.is_zero()) throw error("coefficient division by zero");
    if (is_zero()) return Coeff();
    if (d.tail_.empty()) {
        if (ring.kind == CoeffRing::Kind::integers) {
            // require an integer quotient termwise
            Coeff q = *this;
            q.head_ /= d.head_;
            if (!q.head_.is_integer()) return std::nullopt;
            for (auto& [k, v] : q.tail_) {
                v /= d.head_;
                if (!v.is_integer()) return std::nullopt;
            }
            return q;
        }
        Coeff q = *this;
        Rat inv = d.head_.inverse();
        q.scale(inv);
        return q;
    }
    // polynomial division by the leading term (largest key); exact or fail
    Coeff rem = *this;
    Coeff quot;
    const auto& lead = d.tail_.back();
    int guard = 0;
    while (!rem.is_zero()) {
        if (++guard > 100000) throw error("runaway coefficient division");
        // leading term of rem
        Key rk;
        Rat rv;
        if (!rem.tail_.empty()) {
            rk = rem.tail_.back().first;
            rv = rem.tail_.back().second;
        } else {
            rk = 0;
            rv = rem.head_;
        }
        // divisibility of the parameter monomial
        Key qk = 0;
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
            unsigned er = (rk >> (8 * i)) & 0xffu;
            unsigned ed = (lead.first >> (8 * i)) & 0xffu;
            if (er < ed) {
                ok = false;
                break;
            }
            qk |= Key(er - ed) << (8 * i);
        }
        if (!ok) return std::nullopt;
        Rat qv = rv / lead.second;
        if (ring.kind == CoeffRing::Kind::integers && !qv.is_integer()) return std::nullopt;
        Coeff t;
        t.add_term(qk, qv);
        quot.add(t);
        Coeff td;
        td.add_mul(t, d, ring);
        rem.sub(td);
    }
    return quot;
}

Coeff Coeff::inverse(const CoeffRing& ring) const {
    if (!is_unit(ring)) throw error("coefficient is not a unit");
    return Coeff(head_.inverse());
}

bool Coeff::operator==(const Coeff& o) const {
    if (!(head_ == o.head_)) return false;
    if (tail_.size() != o.tail_.size()) return false;
    for (size_t i = 0; i < tail_.size(); ++i)
        if (tail_[i].first != o.tail_[i].first || !(tail_[i].second == o.tail_[i].second))
            return false;
    return true;
}

std::string Coeff::str(const CoeffRing& ring) const {
    if (is_zero()) return "0";
    // terms sorted by (weight, key), scalar first
    struct Term {
        int w;
        Key k;
        const Rat* v;
    };
    std::vector<Term> terms;
    if (!head_.is_zero()) terms.push_back({0, 0, &head_});
    for (auto& [k, v] : tail_) terms.push_back({key_weight(k, ring), k, &v});
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return a.w != b.w ? a.w < b.w : a.k < b.k;
    });
    std::string out;
    bool first = true;
    for (auto& t : terms) {
        std::string c = t.v->str();
        std::string mono;
        for (int i = 0; i < ring.nparams; ++i) {
            unsigned e = (t.k >> (8 * i)) & 0xffu;
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ring.name[i];
            if (e > 1) mono += "^" + std::to_string(e);
        }
        std::string piece;
        if (mono.empty()) {
            piece = c;
        } else if (c == "1") {
            piece = mono;
        } else if (c == "-1") {
            piece = "-" + mono;
        } else {
            piece = c + "*" + mono;
        }
        if (first) {
            out = piece;
            first = false;
        } else if (!piece.empty() && piece[0] == '-') {
            out += piece;
        } else {
            out += "+" + piece;
        }
    }
    return out;
}

} // namespace fda
