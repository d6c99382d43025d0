#ifndef FDA_FGL_HPP
#define FDA_FGL_HPP

#include "fda/series.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace fda {

/// A one-dimensional commutative formal group law F(t,u) over a CoeffRing,
/// truncated at a working degree. Carries the derived series
/// G (with F = t + u - tu*G), the formal inverse, and integer multiples.
///
/// The generic kind is the universal law at finite depth over the
/// rationals, built from the formal logarithm t + m_1 t^2 + ... + m_d t^{d+1}
/// by exponential reversion.
class Fgl {
public:
    enum class Kind { additive, multiplicative, generic };

    static std::shared_ptr<const Fgl> additive(CoeffRing ring, int cap);
    static std::shared_ptr<const Fgl> multiplicative(CoeffRing ring, Coeff kappa, int cap);
    static std::shared_ptr<const Fgl> generic(int depth, int cap);

    Kind kind() const { return kind_; }
    const CoeffRing& ring() const { return ring_; }
    int cap() const { return cap_; }
    std::string describe() const;

    /// Bivariate F(t,u); t is variable 0, u is variable 1.
    const Series& F() const { return F_; }
    const Series& G() const { return G_; }
    /// Univariate formal inverse with F(t, inverse(t)) = 0.
    const Series& inverse_series() const { return iota_; }
    /// Univariate [m](t).
    const Series& m_series(int m) const;

    /// F(a, b) for multivariate arguments with zero constant term.
    Series f_apply(const Series& a, const Series& b, int cap) const;
    /// G(a, b), arbitrary arguments with zero constant term.
    Series g_apply(const Series& a, const Series& b, int cap) const;
    Series inverse_apply(const Series& a, int cap) const;
    Series m_apply(int m, const Series& a, int cap) const;
    /// Left fold of f_apply; throws if an argument has a constant term.
    Series nary_sum(const std::vector<Series>& parts, int nvars, int cap) const;

    /// Checks the unit, commutativity and associativity axioms and the
    /// formal-inverse identity mod degree cap+1; throws on failure.
    void check_axioms() const;

private:
    Fgl() = default;
    Kind kind_ = Kind::additive;
    CoeffRing ring_;
    int cap_ = 0;
    Coeff kappa_;       // multiplicative only
    Series log_, exp_;  // generic only, univariate
    Series F_, G_, iota_;
    mutable std::vector<Series> mcache_pos_, mcache_neg_;
    mutable std::unique_ptr<std::mutex> mx_;

    Series compose_univariate(const Series& c, const Series& a, int cap) const;
    void derive_G_and_inverse();
};

} // namespace fda

#endif
