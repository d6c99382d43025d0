#ifndef FDA_SERIES_HPP
#define FDA_SERIES_HPP

#include "fda/coeff.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace fda {

/// Exponent vector packed 8 bits per variable (variable i in bits 8i..8i+7).
using Exp = std::uint32_t;

inline int exp_get(Exp e, int i) { return int((e >> (8 * i)) & 0xffu); }
inline Exp exp_make(const int* v, int n) {
    Exp e = 0;
    for (int i = 0; i < n; ++i) e |= Exp(v[i]) << (8 * i);
    return e;
}
inline int exp_total(Exp e, int n) {
    int t = 0;
    for (int i = 0; i < n; ++i) t += exp_get(e, i);
    return t;
}

/// All exponent vectors of total degree d in n variables, sorted by packed
/// value ascending, plus O(1) rank lookup. Cached globally.
struct MonomialTable {
    std::vector<Exp> exps;          // sorted ascending
    std::vector<std::int32_t> rank; // indexed by mixed-radix (e2,e3,e4)
    int d = 0, nvars = 0;

    int rank_of(Exp e) const;
};

const MonomialTable& monomials(int nvars, int d);

/// Truncated multivariate formal power series over a CoeffRing, stored as
/// graded blocks of sparse (exponent, coefficient) terms. Precision is the
/// caller's concern; a Series only knows the terms it stores.
class Series {
public:
    using Term = std::pair<Exp, Coeff>;

    Series() : nvars_(0) {}
    explicit Series(int nvars) : nvars_(nvars) {}

    static Series constant(int nvars, Coeff c);
    static Series variable(int nvars, int i); // x_i

    int nvars() const { return nvars_; }
    bool is_zero() const;
    /// Lowest stored degree; INT_MAX when zero.
    int val() const;
    /// Highest stored degree; -1 when zero.
    int max_deg() const;

    const Coeff* coeff(Exp e) const; // nullptr when absent
    Coeff constant_term() const;

    void set_term(Exp e, Coeff c); // overwrites
    void add_term(Exp e, const Coeff& c);

    void truncate(int deg); // drop blocks above deg
    Series truncated(int deg) const;

    void negate();
    void add(const Series& o);
    void sub(const Series& o);
    void scale(const Coeff& c, const CoeffRing& ring);
    void add_scaled(const Series& o, const Coeff& c, const CoeffRing& ring);
    /// this += o * (c * x^shift), truncated at cap.
    void add_scaled_shifted(const Series& o, const Coeff& c, Exp shift, int cap,
                            const CoeffRing& ring);

    friend Series mul(const Series& a, const Series& b, const CoeffRing& ring, int cap);
    /// this += a*b truncated at cap.
    void add_mul(const Series& a, const Series& b, const CoeffRing& ring, int cap);

    bool equal_up_to(const Series& o, int deg) const;
    bool operator==(const Series& o) const; // all stored terms equal

    /// Homogeneous block access (may be empty); degree d.
    const std::vector<Term>& block(int d) const;
    std::vector<Term>& block_mut(int d);
    int blocks() const { return int(deg_.size()); }

    /// Terms in graded reverse lexicographic order (the serialization order).
    std::vector<Term> sorted_terms_grevlex() const;

    /// Rename variables: exponent of variable i moves to variable perm[i].
    Series rename_vars(const std::vector<int>& perm, int new_nvars) const;

private:
    int nvars_;
    std::vector<std::vector<Term>> deg_; // deg_[d] sorted by Exp ascending

    void ensure_deg(int d);
    void prune();
};

Series mul(const Series& a, const Series& b, const CoeffRing& ring, int cap);

/// grevlex: smaller total degree first; ties broken so that the monomial
/// whose last differing exponent is larger comes first.
bool grevlex_less(Exp a, Exp b, int nvars);

} // namespace fda

#endif
