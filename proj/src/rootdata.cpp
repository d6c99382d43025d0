#include "fda/rootdata.hpp"
#include "fda/errors.hpp"
#include "fda/rational.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fda {

LatMat LatMat::identity(int n) {
    LatMat m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

LatMat LatMat::mul(const LatMat& o) const {
    LatMat r;
    r.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int s = 0;
            for (int k = 0; k < n; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

std::array<int, 4> LatMat::apply(const std::array<int, 4>& v) const {
    std::array<int, 4> r{};
    for (int i = 0; i < n; ++i) {
        int s = 0;
        for (int j = 0; j < n; ++j) s += at(i, j) * v[size_t(j)];
        r[size_t(i)] = s;
    }
    return r;
}

std::vector<int> PositionedSubseq::letters() const {
    std::vector<int> out;
    for (size_t i = 0; ref && i < ref->size(); ++i)
        if (mask & (1u << i)) out.push_back((*ref)[i]);
    return out;
}

namespace {

/// Cartan matrix with entries c[i][j] = <alpha_j, alpha_i^vee>.
LatMat make_cartan(char family, int n) {
    auto fail = [&] {
        throw usage_error(std::string("unsupported root system: ") + family +
                          std::to_string(n));
    };
    if (n < 1 || n > 4) fail();
    LatMat c;
    c.n = n;
    auto chain = [&](int len) {
        for (int i = 0; i < len; ++i) c.at(i, i) = 2;
        for (int i = 0; i + 1 < len; ++i) {
            c.at(i, i + 1) = -1;
            c.at(i + 1, i) = -1;
        }
    };
    switch (family) {
    case 'A':
        chain(n);
        return c;
    case 'B': // alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
        if (n < 2) fail();
        chain(n);
        c.at(n - 1, n - 2) = -2;
        return c;
    case 'C': // alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2
        if (n < 2) fail();
        chain(n);
        c.at(n - 2, n - 1) = -2;
        return c;
    case 'D':
        if (n < 3) fail();
        chain(n - 1);
        c.at(n - 1, n - 1) = 2;
        c.at(n - 1, n - 3) = -1;
        c.at(n - 3, n - 1) = -1;
        return c;
    case 'G':
        if (n != 2) fail();
        c.at(0, 0) = 2;
        c.at(1, 1) = 2;
        c.at(0, 1) = -3;
        c.at(1, 0) = -1;
        return c;
    default:
        fail();
    }
    return c; // unreachable
}

int height_in_simples(const Weight& w, const std::vector<std::array<Rat, 4>>& cartan_inv,
                      int n, bool& nonneg) {
    // coefficients of w in the simple-root basis: C^{-1} * w
    Rat h(0);
    nonneg = true;
    Rat two(2), zero(0);
    for (int i = 0; i < n; ++i) {
        Rat ci(0);
        for (int j = 0; j < n; ++j) ci += cartan_inv[size_t(i)][size_t(j)] * Rat(w[size_t(j)]);
        if (ci < zero) nonneg = false;
        h += ci;
    }
    // heights of roots are integers
    if (!h.is_integer()) throw error("non-integral root height");
    return int(h.num_small());
}

std::vector<std::array<Rat, 4>> invert_cartan(const LatMat& c) {
    int n = c.n;
    std::vector<std::array<Rat, 8>> m(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[size_t(i)][size_t(j)] = Rat(c.at(i, j));
        for (int j = 0; j < n; ++j) m[size_t(i)][size_t(n + j)] = Rat(i == j ? 1 : 0);
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!m[size_t(r)][size_t(col)].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw error("singular Cartan matrix");
        std::swap(m[size_t(piv)], m[size_t(col)]);
        Rat d = m[size_t(col)][size_t(col)];
        for (int j = 0; j < 2 * n; ++j) m[size_t(col)][size_t(j)] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Rat f = m[size_t(r)][size_t(col)];
            if (f.is_zero()) continue;
            for (int j = 0; j < 2 * n; ++j)
                m[size_t(r)][size_t(j)] -= f * m[size_t(col)][size_t(j)];
        }
    }
    std::vector<std::array<Rat, 4>> inv(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[size_t(i)][size_t(j)] = m[size_t(i)][size_t(n + j)];
    return inv;
}

} // namespace

struct RootSystem::Core {};

std::shared_ptr<const RootSystem> RootSystem::build(char family, int rank,
                                                    const std::vector<int>& parabolic) {
    auto rs = std::shared_ptr<RootSystem>(new RootSystem());
    rs->family_ = family;
    rs->rank_ = rank;
    rs->cartan_ = make_cartan(family, rank);
    const int n = rank;

    // simple roots in weight coordinates: alpha_j = column j of the Cartan matrix
    std::vector<Weight> simples(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        Weight w{};
        for (int i = 0; i < n; ++i) w[size_t(i)] = rs->cartan_.at(i, j);
        simples[size_t(j)] = w;
    }

    // simple reflection matrices: s_i(lambda) = lambda - lambda_i * alpha_i
    std::vector<LatMat> refl(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        LatMat m = LatMat::identity(n);
        for (int r = 0; r < n; ++r) m.at(r, i) -= simples[size_t(i)][size_t(r)];
        refl[size_t(i)] = m;
    }

    // close the simple roots under the reflections
    std::set<Weight> rootset(simples.begin(), simples.end());
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Weight> cur(rootset.begin(), rootset.end());
        for (auto& r : cur)
            for (int i = 0; i < n; ++i) {
                Weight img = refl[size_t(i)].apply(r);
                if (rootset.insert(img).second) grew = true;
            }
    }

    auto cartan_inv = invert_cartan(rs->cartan_);
    struct PR {
        int height;
        Weight w;
    };
    std::vector<PR> pos;
    for (auto& r : rootset) {
        bool nonneg = false;
        int h = height_in_simples(r, cartan_inv, n, nonneg);
        if (nonneg) pos.push_back({h, r});
        // sanity: every root is positive or negative
        bool negok = false;
        Weight neg = r;
        for (int i = 0; i < n; ++i) neg[size_t(i)] = -neg[size_t(i)];
        height_in_simples(neg, cartan_inv, n, negok);
        if (!nonneg && !negok) throw error("root fails the positivity dichotomy");
    }
    std::sort(pos.begin(), pos.end(), [](const PR& a, const PR& b) {
        if (a.height != b.height) return a.height < b.height;
        return a.w < b.w;
    });
    rs->npos_ = int(pos.size());
    rs->roots_.reserve(pos.size() * 2);
    for (auto& p : pos) rs->roots_.push_back(p.w);
    for (auto& p : pos) {
        Weight neg = p.w;
        for (int i = 0; i < n; ++i) neg[size_t(i)] = -neg[size_t(i)];
        rs->roots_.push_back(neg);
    }
    rs->simple_root_.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        rs->simple_root_[size_t(i)] = rs->root_index(simples[size_t(i)]);
        if (rs->simple_root_[size_t(i)] < 0) throw error("lost a simple root");
    }

    // enumerate W by closure under right multiplication
    std::map<LatMat, WIdx> seen;
    std::vector<LatMat> mats;
    mats.push_back(LatMat::identity(n));
    seen[mats[0]] = 0;
    for (size_t head = 0; head < mats.size(); ++head) {
        for (int i = 0; i < n; ++i) {
            LatMat m = mats[head].mul(refl[size_t(i)]);
            if (seen.emplace(m, WIdx(mats.size())).second) mats.push_back(m);
        }
    }
    const size_t nw = mats.size();
    rs->weyl_.resize(nw);
    for (size_t k = 0; k < nw; ++k) rs->weyl_[k].mat = mats[k];
    rs->id_ = seen.at(LatMat::identity(n));
    rs->simple_w_.resize(size_t(n));
    for (int i = 0; i < n; ++i) rs->simple_w_[size_t(i)] = seen.at(refl[size_t(i)]);

    // length = number of positive roots sent to negatives; root action table
    rs->root_act_.assign(nw * rs->roots_.size(), -1);
    for (size_t k = 0; k < nw; ++k) {
        int len = 0;
        for (int r = 0; r < int(rs->roots_.size()); ++r) {
            Weight img = mats[k].apply(rs->roots_[size_t(r)]);
            RootIdx ir = rs->root_index(img);
            if (ir < 0) throw error("Weyl action does not permute the roots");
            rs->root_act_[k * rs->roots_.size() + size_t(r)] = ir;
            if (r < rs->npos_ && ir >= rs->npos_) ++len;
        }
        rs->weyl_[k].length = len;
    }

    // multiplication and inverse tables
    rs->mult_.assign(nw * nw, -1);
    rs->inv_.assign(nw, -1);
    for (size_t a = 0; a < nw; ++a)
        for (size_t b = 0; b < nw; ++b) {
            WIdx p = seen.at(mats[a].mul(mats[b]));
            rs->mult_[a * nw + b] = p;
            if (p == rs->id_) rs->inv_[a] = WIdx(b);
        }

    // longest element
    rs->w0_ = 0;
    for (size_t k = 0; k < nw; ++k)
        if (rs->weyl_[k].length > rs->weyl_[size_t(rs->w0_)].length) rs->w0_ = WIdx(k);

    // lexicographically least reduced words, built from the left
    {
        std::vector<WIdx> by_len(nw);
        for (size_t k = 0; k < nw; ++k) by_len[k] = WIdx(k);
        std::sort(by_len.begin(), by_len.end(),
                  [&](WIdx a, WIdx b) { return rs->length(a) < rs->length(b); });
        for (WIdx w : by_len) {
            if (w == rs->id_) continue;
            for (int i = 0; i < n; ++i) {
                WIdx sw = rs->mul(rs->simple_w_[size_t(i)], w);
                if (rs->length(sw) < rs->length(w)) {
                    auto& word = rs->weyl_[size_t(w)].lex_word;
                    word.push_back(i);
                    auto& restw = rs->weyl_[size_t(sw)].lex_word;
                    word.insert(word.end(), restw.begin(), restw.end());
                    break;
                }
            }
        }
    }

    // Bruhat order, standard recursion on a right descent of w
    {
        rs->bruhat_.assign(nw * nw, 0);
        std::vector<WIdx> by_len(nw);
        for (size_t k = 0; k < nw; ++k) by_len[k] = WIdx(k);
        std::sort(by_len.begin(), by_len.end(),
                  [&](WIdx a, WIdx b) { return rs->length(a) < rs->length(b); });
        for (WIdx w : by_len) {
            for (size_t u = 0; u < nw; ++u) {
                bool leq;
                if (rs->length(WIdx(u)) > rs->length(w)) {
                    leq = false;
                } else if (w == rs->id_) {
                    leq = (WIdx(u) == rs->id_);
                } else {
                    int s = rs->weyl_[size_t(w)].lex_word.back();
                    WIdx ws = rs->mul(w, rs->simple_w_[size_t(s)]); // shorter
                    WIdx us = rs->mul(WIdx(u), rs->simple_w_[size_t(s)]);
                    if (rs->length(us) < rs->length(WIdx(u)))
                        leq = rs->bruhat_[size_t(us) * nw + size_t(ws)];
                    else
                        leq = rs->bruhat_[u * nw + size_t(ws)];
                }
                rs->bruhat_[u * nw + size_t(w)] = leq ? 1 : 0;
            }
        }
    }

    rs->build_parabolic(parabolic);
    return rs;
}

std::shared_ptr<const RootSystem> RootSystem::with_parabolic(
    const std::vector<int>& parabolic) const {
    auto rs = std::shared_ptr<RootSystem>(new RootSystem(*this));
    rs->build_parabolic(parabolic);
    return rs;
}

void RootSystem::build_parabolic(const std::vector<int>& parabolic) {
    for (int i : parabolic)
        if (i < 0 || i >= rank_) throw usage_error("parabolic index out of range");
    parabolic_ = parabolic;
    std::sort(parabolic_.begin(), parabolic_.end());
    parabolic_.erase(std::unique(parabolic_.begin(), parabolic_.end()), parabolic_.end());

    const size_t nw = weyl_.size();

    // Phi_L^+ : positive roots in the span of the parabolic simples
    pos_l_.clear();
    auto cartan_inv = invert_cartan(cartan_);
    std::vector<bool> in_par(size_t(rank_), false);
    for (int i : parabolic_) in_par[size_t(i)] = true;
    for (RootIdx r = 0; r < npos_; ++r) {
        // expansion in simple roots must be supported on the parabolic subset
        bool ok = true;
        for (int i = 0; i < rank_ && ok; ++i) {
            Rat ci(0);
            for (int j = 0; j < rank_; ++j)
                ci += cartan_inv[size_t(i)][size_t(j)] * Rat(root(r)[size_t(j)]);
            if (!ci.is_zero() && !in_par[size_t(i)]) ok = false;
        }
        if (ok) pos_l_.push_back(r);
    }

    // W_L: generated by the parabolic simples
    in_wl_.assign(nw, 0);
    in_wl_[size_t(id_)] = 1;
    {
        std::vector<WIdx> stack{id_};
        while (!stack.empty()) {
            WIdx w = stack.back();
            stack.pop_back();
            for (int i : parabolic_) {
                WIdx x = mul(w, simple_w_[size_t(i)]);
                if (!in_wl_[size_t(x)]) {
                    in_wl_[size_t(x)] = 1;
                    stack.push_back(x);
                }
            }
        }
    }

    // coset decomposition z = w v, w minimal in z W_L
    coset_w_.assign(nw, -1);
    coset_v_.assign(nw, -1);
    in_wupper_.assign(nw, 0);
    for (size_t z = 0; z < nw; ++z) {
        WIdx cur = WIdx(z);
        WIdx v = id_;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int i : parabolic_) {
                WIdx cs = mul(cur, simple_w_[size_t(i)]);
                if (length(cs) < length(cur)) {
                    cur = cs;
                    v = mul(simple_w_[size_t(i)], v);
                    moved = true;
                    break;
                }
            }
        }
        coset_w_[z] = cur;
        coset_v_[z] = v;
        in_wupper_[size_t(cur)] = 1;
        if (length(WIdx(z)) != length(cur) + length(v))
            throw error("coset decomposition is not length-additive");
    }

    auto factor_less = [&](WIdx a, WIdx b) {
        if (length(a) != length(b)) return length(a) < length(b);
        return weyl_[size_t(a)].lex_word < weyl_[size_t(b)].lex_word;
    };
    wl_.clear();
    wupper_.clear();
    for (size_t k = 0; k < nw; ++k) {
        if (in_wl_[k]) wl_.push_back(WIdx(k));
        if (in_wupper_[k]) wupper_.push_back(WIdx(k));
    }
    std::sort(wl_.begin(), wl_.end(), factor_less);
    std::sort(wupper_.begin(), wupper_.end(), factor_less);

    // full order: W^L major, W_L minor
    order_.clear();
    for (WIdx w : wupper_)
        for (WIdx v : wl_) order_.push_back(mul(w, v));
    order_pos_.assign(nw, -1);
    for (size_t i = 0; i < order_.size(); ++i) order_pos_[size_t(order_[i])] = int(i);

    // word table: I_v for W_L first (lex-least stays inside L), then I_w,
    // then I_{wv} as concatenation
    table_.assign(nw, {});
    for (WIdx v : wl_) table_[size_t(v)] = weyl_[size_t(v)].lex_word;
    for (WIdx w : wupper_) {
        for (WIdx v : wl_) {
            WIdx z = mul(w, v);
            std::vector<int> word = weyl_[size_t(w)].lex_word;
            auto& wv = table_[size_t(v)];
            word.insert(word.end(), wv.begin(), wv.end());
            table_[size_t(z)] = std::move(word);
        }
    }
    // fingerprint
    std::uint64_t fp = 1469598103934665603ull;
    auto mix = [&fp](std::uint64_t x) {
        fp ^= x + 0x9e3779b97f4a7c15ull + (fp << 6) + (fp >> 2);
    };
    mix(std::uint64_t(family_) << 8 | std::uint64_t(rank_));
    for (auto& w : table_) {
        mix(w.size());
        for (int l : w) mix(std::uint64_t(l) + 17);
    }
    table_fp_ = fp;

    // sanity: words in the table are reduced and multiply out correctly
    for (size_t z = 0; z < nw; ++z) {
        if (int(table_[z].size()) != length(WIdx(z)))
            throw error("word table entry is not reduced");
        if (from_word(table_[z]) != WIdx(z)) throw error("word table entry is wrong");
    }
}

RootIdx RootSystem::root_index(const Weight& w) const {
    for (size_t i = 0; i < roots_.size(); ++i)
        if (roots_[i] == w) return RootIdx(i);
    return -1;
}

std::vector<RootIdx> RootSystem::pos_roots() const {
    std::vector<RootIdx> out(static_cast<size_t>(npos_));
    for (int i = 0; i < npos_; ++i) out[size_t(i)] = i;
    return out;
}

WIdx RootSystem::from_matrix(const LatMat& m) const {
    for (size_t i = 0; i < weyl_.size(); ++i)
        if (weyl_[i].mat == m) return WIdx(i);
    return -1;
}

WIdx RootSystem::from_word(const std::vector<int>& word) const {
    WIdx w = id_;
    for (int i : word) {
        if (i < 0 || i >= rank_) throw usage_error("simple reflection index out of range");
        w = mul(w, simple_w_[size_t(i)]);
    }
    return w;
}

Weight RootSystem::act_weight(WIdx w, const Weight& lam) const {
    return weyl_[size_t(w)].mat.apply(lam);
}

bool RootSystem::bruhat_leq(WIdx u, WIdx w) const {
    return bruhat_[size_t(u) * weyl_.size() + size_t(w)] != 0;
}

WIdx RootSystem::demazure_product(const std::vector<int>& word) const {
    WIdx x = id_;
    for (int i : word) {
        WIdx xs = mul(x, simple_w_[size_t(i)]);
        if (length(xs) > length(x)) x = xs;
    }
    return x;
}

std::vector<RootIdx> RootSystem::gamma_sequence(const std::vector<int>& word) const {
    std::vector<RootIdx> out;
    out.reserve(word.size());
    WIdx pre = id_;
    for (int i : word) {
        out.push_back(act_root(pre, simple_root_[size_t(i)]));
        pre = mul(pre, simple_w_[size_t(i)]);
    }
    return out;
}

std::string RootSystem::label() const { return std::string(1, family_) + std::to_string(rank_); }

std::string RootSystem::elem_name(WIdx w) const {
    if (w == id_) return "e";
    std::string s;
    for (int i : word_of(w)) {
        if (!s.empty()) s += "*";
        s += "s" + std::to_string(i + 1);
    }
    return s;
}

} // namespace fda
