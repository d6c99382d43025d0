#ifndef FDA_COEFF_HPP
#define FDA_COEFF_HPP

#include "fda/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fda {

/// Coefficient ring descriptor: the rationals, the integers, or a
/// polynomial ring over the rationals in up to four graded parameters
/// (kappa with weight 1, or m_k with weight k). Parameter monomials are
/// truncated by total weight, bounded by the working degree of the
/// series ring they feed.
struct CoeffRing {
    enum class Kind { rationals, integers, params };

    Kind kind = Kind::rationals;
    int nparams = 0;
    std::array<int, 4> weight{{0, 0, 0, 0}};
    std::array<std::string, 4> name{};
    int weight_cap = 0;

    static CoeffRing rationals() { return CoeffRing{}; }
    static CoeffRing integers() {
        CoeffRing r;
        r.kind = Kind::integers;
        return r;
    }
    /// kappa as a formal parameter of weight 1.
    static CoeffRing formal_kappa(int weight_cap);
    /// m_1..m_depth, weight(m_k) = k.
    static CoeffRing generic_params(int depth, int weight_cap);

    bool has_rationals() const { return kind != Kind::integers; }
    bool operator==(const CoeffRing&) const = default;
};

/// Element of a CoeffRing: a sparse polynomial in the parameters with
/// rational coefficients. Pure scalars never allocate.
class Coeff {
public:
    using Key = std::uint32_t; // 8 bits per parameter exponent

    Coeff() = default;
    Coeff(Rat r) : head_(std::move(r)) {}
    Coeff(long long n) : head_(Rat(n)) {}

    static Coeff param(int i); // the parameter itself

    bool is_zero() const { return head_.is_zero() && tail_.empty(); }
    bool is_scalar() const { return tail_.empty(); }
    bool is_one() const { return tail_.empty() && head_.is_one(); }
    const Rat& scalar_part() const { return head_; }

    /// Unit test in the ring: nonzero scalar over Q / Q[params], +-1 over Z.
    bool is_unit(const CoeffRing& ring) const;

    Coeff operator-() const;
    void add(const Coeff& o);
    void sub(const Coeff& o);
    void scale(const Rat& r);
    /// this += b*c, truncated by the ring's parameter-weight cap.
    void add_mul(const Coeff& b, const Coeff& c, const CoeffRing& ring);
    Coeff mul(const Coeff& o, const CoeffRing& ring) const;
    /// Exact division; nullopt when not exactly divisible in the ring.
    std::optional<Coeff> divide_exact(const Coeff& d, const CoeffRing& ring) const;
    Coeff inverse(const CoeffRing& ring) const; // unit only

    bool operator==(const Coeff& o) const;
    bool operator!=(const Coeff& o) const { return !(*this == o); }

    /// Canonical exact string, e.g. "-3/2*m1^2*m2+1". Terms sorted by
    /// (weight, exponent key).
    std::string str(const CoeffRing& ring) const;

    static int key_weight(Key k, const CoeffRing& ring);

    const std::vector<std::pair<Key, Rat>>& tail() const { return tail_; }

private:
    Rat head_{};
    std::vector<std::pair<Key, Rat>> tail_; // sorted by key, no zeros, keys != 0

    void add_term(Key k, const Rat& r);
};

} // namespace fda

#endif
