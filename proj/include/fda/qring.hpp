#ifndef FDA_QRING_HPP
#define FDA_QRING_HPP

#include "fda/fga.hpp"

#include <vector>

namespace fda {

/// Denominator: exponent multiset over the positive roots, sorted by root
/// index, exponents > 0.
using DenMap = std::vector<std::pair<RootIdx, int>>;

int den_degree(const DenMap& d);
DenMap den_mul(const DenMap& a, const DenMap& b);

/// Element of the localization Q of S at the x_beta: a numerator SElem
/// over a canonical positive-root denominator monomial. Negative-root
/// factors are rewritten through 1/x_{-beta} = u_beta / x_beta on entry,
/// and common factors are cancelled eagerly, so equal values in reduced
/// form have equal parts. Effective precision is num.prec minus the
/// denominator degree.
struct QElem {
    SElem num;
    DenMap den;

    bool is_zero() const { return num.is_zero(); }
    int eff_prec() const { return num.prec - den_degree(den); }
};

class QOps {
public:
    explicit QOps(const Algebra& alg) : a_(alg) {}

    const Algebra& algebra() const { return a_; }

    QElem zero() const { return {a_.zero(), {}}; }
    QElem one() const { return {a_.one(), {}}; }
    QElem from_S(SElem s) const { return reduce({std::move(s), {}}); }
    QElem from_S_unreduced(SElem s) const { return {std::move(s), {}}; }

    /// 1 / prod x_{beta_i}; negative roots normalized to positive
    /// denominators with u-unit numerator factors.
    QElem inv_root_monomial(const std::vector<std::pair<RootIdx, int>>& signed_roots) const;

    /// prod x_{gamma}^{e} with signed roots and integer exponents (either
    /// sign), normalized the same way.
    QElem root_monomial(const std::vector<std::pair<RootIdx, int>>& factors) const;

    /// w-image of a signed root monomial, computed by permuting the roots.
    QElem weyl_root_monomial(WIdx w, const std::vector<std::pair<RootIdx, int>>& factors) const;

    QElem add(const QElem& x, const QElem& y) const;
    QElem sub(const QElem& x, const QElem& y) const;
    QElem neg(QElem x) const;
    QElem mul(const QElem& x, const QElem& y) const;
    QElem mul_s(const QElem& x, const SElem& s) const;
    QElem mul_coeff(QElem x, const Coeff& c) const;
    /// Inverse of an element whose numerator is a unit in S.
    QElem inverse_unit(const QElem& x) const;

    QElem weyl_act(WIdx w, const QElem& x) const;

    /// Clears the denominator by exact division; not_divisible if the value
    /// is not in S at the available precision.
    SElem to_S(const QElem& x, const char* what = "to_S") const;
    std::optional<SElem> try_to_S(const QElem& x) const;

    bool equal(const QElem& x, const QElem& y) const;
    bool is_zero_mod_prec(const QElem& x) const { return x.num.is_zero(); }

    QElem reduce(QElem x) const;
    /// num * prod x_gamma^e as a series (denominator expansion helper).
    SElem den_series(const DenMap& d, int prec) const;

private:
    const Algebra& a_;
};

} // namespace fda

#endif
