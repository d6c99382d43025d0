#ifndef FDA_FGA_HPP
#define FDA_FGA_HPP

#include "fda/fgl.hpp"
#include "fda/rootdata.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace fda {

/// Element of the formal group algebra S in its power-series model:
/// a truncated series in x_{omega_1..omega_n} together with the degree
/// through which it is known. Arithmetic combines precisions at the min.
struct SElem {
    Series s;
    int prec = 0;

    bool is_zero() const { return s.is_zero(); }
};

struct PrecisionPolicy {
    int trunc = 6;   // N: degree through which results are certified
    int workdeg = 0; // internal working degree
    int floor = 0;   // below this, operations throw precision_exhausted

    static PrecisionPolicy for_rank(int rank, int npos, int trunc_override = -1,
                                    int workdeg_override = -1);
};

/// The formal group algebra S = R[[Lambda]]_F for a root system and a
/// formal group law, with the Weyl action and the root-attached elements
/// kappa_beta, u_beta, x_L, x_G. Owns all series-level caches; methods are
/// const and cache under a mutex, so a built instance is safe to share.
class Algebra {
public:
    Algebra(std::shared_ptr<const RootSystem> rs, std::shared_ptr<const Fgl> fgl,
            PrecisionPolicy prec);

    const RootSystem& rs() const { return *rs_; }
    std::shared_ptr<const RootSystem> rs_ptr() const { return rs_; }
    const Fgl& fgl() const { return *fgl_; }
    const CoeffRing& ring() const { return fgl_->ring(); }
    const PrecisionPolicy& prec() const { return prec_; }
    int nvars() const { return rs_->rank(); }
    int workdeg() const { return prec_.workdeg; }

    // --- construction of elements ---
    SElem zero() const { return {Series(nvars()), prec_.workdeg}; }
    SElem one() const { return {Series::constant(nvars(), Coeff(1)), prec_.workdeg}; }
    SElem constant(Coeff c) const { return {Series::constant(nvars(), std::move(c)), prec_.workdeg}; }
    SElem x_of_weight(const Weight& lam) const;
    SElem x_of_root(RootIdx r) const;
    SElem kappa(RootIdx beta) const;
    SElem u(RootIdx beta) const;
    /// Powers u_beta^k, k may be negative.
    const Series& u_pow(RootIdx beta, int k) const;
    /// Powers of x_root (beta may be any root index), k >= 1.
    const Series& x_root_pow(RootIdx beta, int k) const;
    SElem x_parabolic() const; // x_L over the parabolic of rs()
    SElem x_full() const;      // x_G
    /// x_L for an explicit positive-root list.
    SElem x_monomial_neg(const std::vector<RootIdx>& pos_roots) const;

    // --- arithmetic ---
    SElem add(const SElem& a, const SElem& b) const;
    SElem sub(const SElem& a, const SElem& b) const;
    SElem neg(SElem a) const;
    SElem mul(const SElem& a, const SElem& b) const;
    SElem mul_coeff(SElem a, const Coeff& c) const;
    Coeff augment(const SElem& a) const { return a.s.constant_term(); }
    bool in_splus(const SElem& a) const { return a.s.constant_term().is_zero(); }
    bool in_one_plus_splus(const SElem& a) const { return a.s.constant_term().is_one(); }
    bool is_unit(const SElem& a) const { return a.s.constant_term().is_unit(ring()); }
    /// Geometric-series inversion of a unit.
    SElem invert(const SElem& a) const;
    /// Exact division, degreewise; nullopt when no quotient exists to the
    /// available precision.
    std::optional<SElem> try_divide(const SElem& n, const SElem& d) const;
    SElem divide_or_throw(const SElem& n, const SElem& d, const char* what) const;

    /// Weyl action as an R-algebra endomorphism (substitution on generators).
    SElem weyl_act(WIdx w, const SElem& a) const;
    Series weyl_act_series(WIdx w, const Series& s, int prec) const;

    bool equal(const SElem& a, const SElem& b) const; // mod min precision

    /// min precision with floor enforcement
    int join_prec(int a, int b) const;

private:
    std::shared_ptr<const RootSystem> rs_;
    std::shared_ptr<const Fgl> fgl_;
    PrecisionPolicy prec_;

    mutable std::mutex mx_;
    mutable std::map<Weight, Series> xw_;
    mutable std::map<RootIdx, Series> kappa_;
    mutable std::map<std::pair<RootIdx, int>, Series> upow_;
    mutable std::map<std::pair<RootIdx, int>, Series> xpow_;
    mutable std::map<std::tuple<WIdx, int, int>, Series> wpow_;

    const Series& x_weight_series(const Weight& lam) const;
    const Series& weyl_var_pow(WIdx w, int var, int k) const;
};

} // namespace fda

#endif
