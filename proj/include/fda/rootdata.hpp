#ifndef FDA_ROOTDATA_HPP
#define FDA_ROOTDATA_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fda {

/// Integer matrix acting on the weight lattice in fundamental-weight
/// coordinates. Square of size rank <= 4.
struct LatMat {
    int n = 0;
    std::array<int, 16> a{}; // row-major

    static LatMat identity(int n);
    int at(int i, int j) const { return a[size_t(i) * 4 + size_t(j)]; }
    int& at(int i, int j) { return a[size_t(i) * 4 + size_t(j)]; }
    LatMat mul(const LatMat& o) const;
    std::array<int, 4> apply(const std::array<int, 4>& v) const;
    bool operator==(const LatMat& o) const { return n == o.n && a == o.a; }
    bool operator<(const LatMat& o) const { return a < o.a; }
};

/// Weight in fundamental-weight coordinates.
using Weight = std::array<int, 4>;

/// Index of a Weyl group element in the ambient enumeration.
using WIdx = int;
/// Index of a root; positives come first, neg(r) = r + npos.
using RootIdx = int;

/// A Weyl group element: canonical lattice matrix plus cached length and
/// lexicographically least reduced word (letters are simple-reflection
/// indices, 0-based).
struct WeylElem {
    LatMat mat;
    int length = 0;
    std::vector<int> lex_word;
};

/// A reference word of simple reflections together with a position mask.
/// The tuple calculus (containment, concatenation-as-union, removal,
/// positionwise meet) operates on positions, not letters.
struct PositionedSubseq {
    const std::vector<int>* ref = nullptr; // reference word
    std::uint32_t mask = 0;

    std::vector<int> letters() const;
    int size() const { return __builtin_popcount(mask); }
    bool subseteq(const PositionedSubseq& o) const { return (mask & ~o.mask) == 0; }
    PositionedSubseq meet(const PositionedSubseq& o) const { return {ref, mask & o.mask}; }
    PositionedSubseq join(const PositionedSubseq& o) const { return {ref, mask | o.mask}; }
    PositionedSubseq minus(const PositionedSubseq& o) const { return {ref, mask & ~o.mask}; }
};

/// Root systems of type A/B/C/D/G up to rank 4 with a distinguished
/// parabolic subset of simple reflections. Everything is enumerated
/// eagerly at construction and immutable afterwards; instances are safe
/// to share across threads.
class RootSystem {
public:
    /// family in {'A','B','C','D','G'}; parabolic = 0-based simple indices.
    /// Throws usage_error for unsupported family/rank combinations.
    static std::shared_ptr<const RootSystem> build(char family, int rank,
                                                   const std::vector<int>& parabolic);

    /// Same ambient data, different parabolic. Cheap.
    std::shared_ptr<const RootSystem> with_parabolic(const std::vector<int>& parabolic) const;

    char family() const { return family_; }
    int rank() const { return rank_; }
    std::string label() const; // e.g. "A2"
    const std::vector<int>& parabolic() const { return parabolic_; }

    int cartan(int i, int j) const { return cartan_.at(i, j); } // <alpha_j, alpha_i^vee>

    // --- roots ---
    int nroots() const { return int(roots_.size()); }
    int npos() const { return npos_; }
    const Weight& root(RootIdx r) const { return roots_[size_t(r)]; }
    RootIdx neg(RootIdx r) const { return r < npos_ ? r + npos_ : r - npos_; }
    bool is_positive(RootIdx r) const { return r < npos_; }
    RootIdx simple_root(int i) const { return simple_root_[size_t(i)]; }
    RootIdx root_index(const Weight& w) const; // -1 if not a root
    const std::vector<RootIdx>& pos_roots_L() const { return pos_l_; }
    std::vector<RootIdx> pos_roots() const;

    // --- Weyl group ---
    int order() const { return int(weyl_.size()); }
    const WeylElem& elem(WIdx w) const { return weyl_[size_t(w)]; }
    WIdx identity() const { return id_; }
    WIdx simple(int i) const { return simple_w_[size_t(i)]; }
    WIdx mul(WIdx a, WIdx b) const { return mult_[size_t(a) * weyl_.size() + size_t(b)]; }
    WIdx inv(WIdx a) const { return inv_[size_t(a)]; }
    int length(WIdx w) const { return weyl_[size_t(w)].length; }
    WIdx from_matrix(const LatMat& m) const; // -1 if absent
    WIdx from_word(const std::vector<int>& word) const;
    RootIdx act_root(WIdx w, RootIdx r) const {
        return root_act_[size_t(w) * roots_.size() + size_t(r)];
    }
    Weight act_weight(WIdx w, const Weight& lam) const;

    bool bruhat_leq(WIdx u, WIdx w) const;
    WIdx longest() const { return w0_; }

    /// Demazure product of an arbitrary word in the 0-Hecke semigroup.
    WIdx demazure_product(const std::vector<int>& word) const;

    /// gamma_j = s_1...s_{j-1}(alpha_j) for word (s_1..s_k), as root indices.
    std::vector<RootIdx> gamma_sequence(const std::vector<int>& word) const;

    // --- parabolic structure ---
    bool in_WL(WIdx w) const { return in_wl_[size_t(w)]; }
    bool in_WupperL(WIdx w) const { return in_wupper_[size_t(w)]; }
    const std::vector<WIdx>& WL() const { return wl_; }           // ordered
    const std::vector<WIdx>& WupperL() const { return wupper_; }  // ordered
    /// z = w * v with w in W^L, v in W_L and additive lengths.
    std::pair<WIdx, WIdx> coset_decompose(WIdx z) const {
        return {coset_w_[size_t(z)], coset_v_[size_t(z)]};
    }

    /// The linear order on W: lexicographic on the W^L x W_L factorization,
    /// both factors ordered by (length, lex-least word).
    const std::vector<WIdx>& order_list() const { return order_; }
    int order_pos(WIdx w) const { return order_pos_[size_t(w)]; }

    /// L-compatible reduced word table: I_{wv} = I_w join I_v.
    const std::vector<int>& word_of(WIdx z) const { return table_[size_t(z)]; }
    /// Fingerprint of the whole table (for cache sharing).
    std::uint64_t table_fingerprint() const { return table_fp_; }

    std::string elem_name(WIdx w) const; // "e" or e.g. "s1*s2"

private:
    RootSystem() = default;
    struct Core;
    std::shared_ptr<const Core> core_;

    char family_ = 0;
    int rank_ = 0;
    LatMat cartan_;
    std::vector<Weight> roots_;
    int npos_ = 0;
    std::vector<RootIdx> simple_root_;
    std::vector<WeylElem> weyl_;
    std::vector<WIdx> mult_, inv_;
    std::vector<RootIdx> root_act_;
    std::vector<int> simple_w_;
    WIdx id_ = 0, w0_ = 0;
    std::vector<std::uint8_t> bruhat_;

    std::vector<int> parabolic_;
    std::vector<RootIdx> pos_l_;
    std::vector<std::uint8_t> in_wl_, in_wupper_;
    std::vector<WIdx> wl_, wupper_;
    std::vector<WIdx> coset_w_, coset_v_;
    std::vector<WIdx> order_;
    std::vector<int> order_pos_;
    std::vector<std::vector<int>> table_;
    std::uint64_t table_fp_ = 0;

    void build_parabolic(const std::vector<int>& parabolic);
};

} // namespace fda

#endif
