#ifndef FDA_RATIONAL_HPP
#define FDA_RATIONAL_HPP

#include <cstdint>
#include <string>

namespace fda {

/// Exact rational number.
///
/// Values that fit are kept as a reduced int64 pair; arithmetic runs in
/// 128-bit intermediates and promotes to a heap-allocated GMP rational
/// only on overflow. Canonical form: den > 0, gcd(|num|, den) = 1.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d);
    Rat(const Rat& o);
    Rat(Rat&& o) noexcept;
    Rat& operator=(const Rat& o);
    Rat& operator=(Rat&& o) noexcept;
    ~Rat();

    static Rat from_string(const std::string& s);

    bool is_zero() const { return big_ == nullptr && num_ == 0; }
    bool is_one() const { return big_ == nullptr && num_ == 1 && den_ == 1; }
    bool is_integer() const;
    int sgn() const;

    /// Numerator/denominator when small; throws if promoted.
    long long num_small() const;
    long long den_small() const;
    bool is_small() const { return big_ == nullptr; }

    Rat operator-() const;
    Rat& operator+=(const Rat& o);
    Rat& operator-=(const Rat& o);
    Rat& operator*=(const Rat& o);
    Rat& operator/=(const Rat& o); // throws on division by zero
    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

    Rat inverse() const;

    /// a += b*c without temporaries on the small path.
    void add_mul(const Rat& b, const Rat& c);

    bool operator==(const Rat& o) const;
    bool operator!=(const Rat& o) const { return !(*this == o); }
    /// Total order (by value).
    bool operator<(const Rat& o) const;

    /// "n" or "n/d", exact.
    std::string str() const;

private:
    long long num_;
    long long den_; // > 0 when small
    void* big_ = nullptr; // mpq_t* when promoted

    void set_big_from(const Rat& o);
    void promote_set_i128(__int128 n, __int128 d);
    void assign_reduced_i128(__int128 n, __int128 d);
    void try_demote();
    void clear_big();
};

} // namespace fda

#endif
